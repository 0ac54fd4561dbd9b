use super::presentation::Presentation;
use super::word::{gen_of, letter, Word};
use super::FpError;

/// Right action of the generators of a presentation on `0..ncosets`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ncosets: usize,
    action: Vec<Vec<u32>>,
    inverse: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn ncosets(&self) -> usize {
        self.ncosets
    }

    pub fn ngens(&self) -> usize {
        self.action.len()
    }

    /// Image of `coset` under one letter.
    #[inline]
    pub fn act(&self, coset: usize, l: i32) -> usize {
        let g = gen_of(l);
        if l > 0 {
            self.action[g][coset] as usize
        } else {
            self.inverse[g][coset] as usize
        }
    }

    pub fn act_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn action(&self, gen: usize) -> &[u32] {
        &self.action[gen]
    }
}

/// Validates an explicit permutation action as the coset table of a subgroup
/// (the stabilizer of point 0).
pub fn coset_table_from_action(
    p: &Presentation,
    npoints: usize,
    gen_action: Vec<Vec<u32>>,
) -> Result<CosetTable, FpError> {
    if gen_action.len() != p.ngens {
        return Err(FpError::InconsistentAction(format!(
            "{} generator actions for {} generators",
            gen_action.len(),
            p.ngens
        )));
    }
    for (k, a) in gen_action.iter().enumerate() {
        if a.len() != npoints || !crate::group::perm::is_permutation(a) {
            return Err(FpError::InconsistentAction(format!(
                "generator {k} does not act as a permutation"
            )));
        }
    }
    let inverse = gen_action
        .iter()
        .map(|a| crate::group::perm::invert(a))
        .collect();
    let table = CosetTable {
        ncosets: npoints,
        action: gen_action,
        inverse,
    };
    for (i, r) in p.relators.iter().enumerate() {
        for c in 0..npoints {
            if table.act_word(c, r) != c {
                return Err(FpError::InconsistentAction(format!(
                    "relator {i} moves point {c}"
                )));
            }
        }
    }
    let mut seen = vec![false; npoints];
    let mut queue = vec![0usize];
    if npoints > 0 {
        seen[0] = true;
    }
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        for k in 0..p.ngens {
            for l in [letter(k, false), letter(k, true)] {
                let d = table.act(c, l);
                if !seen[d] {
                    seen[d] = true;
                    queue.push(d);
                }
            }
        }
    }
    if queue.len() != npoints {
        return Err(FpError::NotTransitive);
    }
    Ok(table)
}

/// Rewrites words of the ambient group lying in the subgroup into words in
/// the Schreier generators.
#[derive(Clone, Debug)]
pub struct Rewriter {
    table: CosetTable,
    /// Schreier generator index for edge `(coset, gen)`, `u32::MAX` on tree edges.
    edge: Vec<u32>,
    /// Transversal words, one per coset.
    reps: Vec<Word>,
    /// `(coset, gen)` for each Schreier generator.
    gens: Vec<(usize, usize)>,
}

impl Rewriter {
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn representative(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    /// Rewrites `w` starting at `start`; returns the word and the final coset.
    pub fn rewrite_from(&self, start: usize, w: &Word) -> (Word, usize) {
        let m = self.table.ngens();
        let mut out = Word::empty();
        let mut c = start;
        for &l in w.letters() {
            let g = gen_of(l);
            if l > 0 {
                let e = self.edge[c * m + g];
                if e != u32::MAX {
                    out.push(letter(e as usize, false));
                }
                c = self.table.act(c, l);
            } else {
                let d = self.table.act(c, l);
                let e = self.edge[d * m + g];
                if e != u32::MAX {
                    out.push(letter(e as usize, true));
                }
                c = d;
            }
        }
        (out, c)
    }

    pub fn rewrite(&self, w: &Word) -> Result<Word, FpError> {
        let (out, end) = self.rewrite_from(0, w);
        if end != 0 {
            return Err(FpError::NotInSubgroup);
        }
        Ok(out)
    }

    /// Exponent sums of the rewritten word, without building it.
    pub fn rewrite_exponents(&self, w: &Word) -> Result<Vec<i64>, FpError> {
        let m = self.table.ngens();
        let mut v = vec![0i64; self.gens.len()];
        let mut c = 0;
        for &l in w.letters() {
            let g = gen_of(l);
            if l > 0 {
                let e = self.edge[c * m + g];
                if e != u32::MAX {
                    v[e as usize] += 1;
                }
                c = self.table.act(c, l);
            } else {
                let d = self.table.act(c, l);
                let e = self.edge[d * m + g];
                if e != u32::MAX {
                    v[e as usize] -= 1;
                }
                c = d;
            }
        }
        if c != 0 {
            return Err(FpError::NotInSubgroup);
        }
        Ok(v)
    }

    /// Ambient word `rep(c) x rep(c.x)^-1` of a Schreier generator.
    pub fn expand(&self, k: usize) -> Word {
        let (c, g) = self.gens[k];
        let d = self.table.act(c, letter(g, false));
        self.reps[c].mul(&Word::gen(g)).mul(&self.reps[d].inverse())
    }

    /// `(coset, ambient generator)` of a Schreier generator.
    pub fn edge_of(&self, k: usize) -> (usize, usize) {
        self.gens[k]
    }
}

/// Subgroup presentation on Schreier generators for the stabilizer of coset 0.
///
/// The transversal is breadth first, trying letters `x_0, x_0^-1, x_1, ...`.
pub fn reidemeister_schreier(
    p: &Presentation,
    t: &CosetTable,
) -> Result<(Presentation, Rewriter), FpError> {
    if t.ngens() != p.ngens {
        return Err(FpError::InconsistentAction(
            "table does not match presentation".into(),
        ));
    }
    let n = t.ncosets();
    let m = p.ngens;
    let mut reps: Vec<Option<Word>> = vec![None; n];
    let mut tree = vec![false; n * m];
    reps[0] = Some(Word::empty());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        for g in 0..m {
            for inv in [false, true] {
                let l = letter(g, inv);
                let d = t.act(c, l);
                if reps[d].is_none() {
                    let mut w = reps[c].clone().unwrap();
                    w.push(l);
                    reps[d] = Some(w);
                    queue.push(d);
                    if inv {
                        tree[d * m + g] = true;
                    } else {
                        tree[c * m + g] = true;
                    }
                }
            }
        }
    }
    if queue.len() != n {
        return Err(FpError::NotTransitive);
    }
    let mut edge = vec![u32::MAX; n * m];
    let mut gens = Vec::new();
    for c in 0..n {
        for g in 0..m {
            if !tree[c * m + g] {
                edge[c * m + g] = gens.len() as u32;
                gens.push((c, g));
            }
        }
    }
    let rewriter = Rewriter {
        table: t.clone(),
        edge,
        reps: reps.into_iter().map(Option::unwrap).collect(),
        gens,
    };
    let mut relators = Vec::new();
    for c in 0..n {
        for r in &p.relators {
            let (w, end) = rewriter.rewrite_from(c, r);
            debug_assert_eq!(end, c);
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    let names = rewriter
        .gens
        .iter()
        .map(|&(c, g)| format!("{}@{c}", p.names[g]))
        .collect();
    Ok((Presentation::with_names(names, relators), rewriter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_one_is_identity_rewrite() {
        let p = Presentation::new(2, vec![Word::commutator(&Word::gen(0), &Word::gen(1))]);
        let t = coset_table_from_action(&p, 1, vec![vec![0], vec![0]]).unwrap();
        let (h, rw) = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(h.ngens, 2);
        let w = Word(vec![1, 2, -1]);
        assert_eq!(rw.rewrite(&w).unwrap(), w);
    }

    #[test]
    fn free_index_two() {
        let p = Presentation::free(2);
        let t = coset_table_from_action(&p, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let (h, rw) = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(h.ngens, 3);
        assert!(rw.rewrite(&Word::gen(0)).is_err());
        assert_eq!(rw.rewrite(&Word(vec![1, 1])).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_actions() {
        let p = Presentation::new(1, vec![Word::gen(0).pow(2)]);
        assert!(matches!(
            coset_table_from_action(&p, 3, vec![vec![1, 2, 0]]),
            Err(FpError::InconsistentAction(_))
        ));
        let q = Presentation::free(1);
        assert!(matches!(
            coset_table_from_action(&q, 2, vec![vec![0, 1]]),
            Err(FpError::NotTransitive)
        ));
    }
}
