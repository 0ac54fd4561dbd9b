//! `H₁(X, ℤ)` from the orbifold data: the subgroup `ℍ ≤ 𝕋×𝕋` lifting `G⁰`,
//! its degree-two extension `𝔾`, and the quotient by the lifts of `O₂`.

use crate::fp::{
    cokernel, coset_table_from_action, orbifold_presentation, product_presentation,
    reidemeister_schreier, AbelianStructure, FpError, Presentation, Rewriter, Word,
};
use crate::genvec::GeneratingVector;
use crate::group::FiniteGroup;
use crate::mixed::MixedExtension;

/// `words[a]` is a positive word in the orbifold generators mapping to `a`.
pub fn psi_word_map(g0: &FiniteGroup, v: &GeneratingVector) -> Vec<Word> {
    let n = g0.order();
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(Word::empty());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (k, &img) in v.entries.iter().enumerate() {
            let y = g0.mul(x, img as usize);
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(crate::fp::letter(k, false));
                words[y] = Some(w);
                queue.push(y);
            }
        }
    }
    words
        .into_iter()
        .map(|w| w.expect("generating vector generates"))
        .collect()
}

/// Evaluates a word of the orbifold group under `ψ`.
pub fn psi_eval(g0: &FiniteGroup, v: &GeneratingVector, w: &Word) -> usize {
    w.letters().iter().fold(0, |acc, &l| {
        let x = v.entries[crate::fp::gen_of(l)] as usize;
        g0.mul(acc, if l > 0 { x } else { g0.inv(x) })
    })
}

/// `𝔾` together with what is needed to add the fixed-point relations.
#[derive(Clone, Debug)]
pub struct GPresentation {
    /// Generators: those of `ℍ` followed by `τ̃'` (last).
    pub presentation: Presentation,
    pub rewriter: Rewriter,
    /// Number of generators of one copy of `𝕋`.
    pub orbifold_gens: usize,
    pub t_word: Word,
    pub psi_words: Vec<Word>,
}

impl GPresentation {
    pub fn tau_prime(&self) -> usize {
        self.presentation.ngens - 1
    }

    /// Ambient word `(w1, w2)` in `𝕋×𝕋`.
    pub fn pair(&self, w1: &Word, w2: &Word) -> Word {
        let s = self.orbifold_gens;
        w1.mul(&w2.map_gens(|k| k + s))
    }

    /// Splits an ambient word into its two factors.
    pub fn split(&self, w: &Word) -> (Word, Word) {
        let s = self.orbifold_gens;
        let (mut a, mut b) = (Word::empty(), Word::empty());
        for &l in w.letters() {
            if crate::fp::gen_of(l) < s {
                a.push(l);
            } else {
                b.push(if l > 0 { l - s as i32 } else { l + s as i32 });
            }
        }
        (a, b)
    }

    /// Exponent row over the generators of `𝔾` for an ambient word in `ℍ`.
    pub fn row(&self, ambient: &Word) -> Result<Vec<i64>, FpError> {
        let mut r = self.rewriter.rewrite_exponents(ambient)?;
        r.push(0);
        Ok(r)
    }
}

/// Builds `𝔾 = ⟨gen(ℍ), τ̃' | rel(ℍ), τ̃'²τ̃⁻¹, φ̃(h)τ̃'h⁻¹τ̃'⁻¹⟩`.
pub fn build_g_presentation(
    g0: &FiniteGroup,
    v: &GeneratingVector,
    ext: &MixedExtension,
) -> Result<GPresentation, FpError> {
    let t = orbifold_presentation(v.q, &v.periods);
    let s = t.ngens;
    let ambient = product_presentation(&t, &t);
    let n = g0.order();
    let phi_inv = ext.phi.inverse();
    let mut actions: Vec<Vec<u32>> = Vec::with_capacity(2 * s);
    for &x in &v.entries {
        let xi = g0.inv(x as usize);
        actions.push((0..n).map(|c| g0.mul(xi, c) as u32).collect());
    }
    for &y in &v.entries {
        let y = phi_inv.apply(y as usize);
        actions.push((0..n).map(|c| g0.mul(c, y) as u32).collect());
    }
    let table = coset_table_from_action(&ambient, n, actions)?;
    let (h, rewriter) = reidemeister_schreier(&ambient, &table)?;
    let psi_words = psi_word_map(g0, v);
    let t_word = psi_words[ext.tau].clone();
    let k = h.ngens;
    let tp = k as i32 + 1;
    let mut gp = GPresentation {
        presentation: Presentation::free(0),
        rewriter,
        orbifold_gens: s,
        t_word: t_word.clone(),
        psi_words,
    };
    let mut relators = h.relators.clone();
    // τ̃'² τ̃⁻¹
    let tau_tilde = gp.pair(&t_word, &t_word);
    let mut r = Word::from_letters(&[tp, tp]);
    r.append(&gp.rewriter.rewrite(&tau_tilde)?.inverse());
    relators.push(r);
    // φ̃(h) τ̃' h⁻¹ τ̃'⁻¹ with φ̃(w1, w2) = (w2, t w1 t⁻¹)
    for j in 0..k {
        let (w1, w2) = gp.split(&gp.rewriter.expand(j));
        let conj = t_word.mul(&w1).mul(&t_word.inverse());
        let image = gp.rewriter.rewrite(&gp.pair(&w2, &conj))?;
        let mut r = image;
        r.push(tp);
        r.push(-(j as i32 + 1));
        r.push(-tp);
        relators.push(r);
    }
    let mut names = h.names.clone();
    names.push("t'".into());
    gp.presentation = Presentation::with_names(names, relators);
    Ok(gp)
}

/// The ambient lift `(h₁, (t h₁)⁻¹)` of the `G⁰`-part of each `O₂` element,
/// written as `t'·h` with `h = φ⁻¹(a)` for stored `(a, 1)`.
pub fn fixed_point_lifts(
    g0: &FiniteGroup,
    ext: &MixedExtension,
    gp: &GPresentation,
    o2: &[usize],
) -> Result<Vec<Word>, FpError> {
    let n = g0.order();
    let phi_inv = ext.phi.inverse();
    let mut out = Vec::new();
    for &x in o2 {
        if x < n {
            return Err(FpError::InconsistentAction(format!(
                "{x} is not outside G0"
            )));
        }
        let h = phi_inv.apply(x - n);
        if g0.mul(g0.mul(ext.phi.apply(h), ext.tau), h) != 0 {
            return Err(FpError::InconsistentAction(format!(
                "{x} does not have order 2"
            )));
        }
        let h1 = &gp.psi_words[h];
        let second = gp.t_word.mul(h1).inverse();
        out.push(gp.pair(h1, &second));
    }
    Ok(out)
}

/// `H₁(X, ℤ)`: abelianized `𝔾` modulo one relation per element of `O₂`.
pub fn h1_of_family(
    g0: &FiniteGroup,
    v: &GeneratingVector,
    ext: &MixedExtension,
    o2: &[usize],
) -> Result<AbelianStructure, FpError> {
    let gp = build_g_presentation(g0, v, ext)?;
    let mut rows = gp.presentation.relation_matrix();
    for lift in fixed_point_lifts(g0, ext, &gp, o2)? {
        let mut r = gp.row(&lift)?;
        r[gp.tau_prime()] += 1;
        rows.push(r);
    }
    cokernel(gp.presentation.ngens, &rows)
}
