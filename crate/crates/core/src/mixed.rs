//! Degree-two extensions `G` of `G⁰` with an element swapping the factors,
//! parameterized by pairs `(φ, τ)`.
//!
//! Elements of `G` are written `a·t^ε` with `t² = τ` and `t a t⁻¹ = φ(a)`,
//! stored as index `a + ε|G⁰|`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genvec::{stabilizer_set, GeneratingVector};
use crate::group::{
    automorphism_generators, for_each_automorphism, FiniteGroup, GroupAutomorphism, GroupError,
};
use crate::types::CoveringType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixedError {
    #[error("not a valid mixed extension: {0}")]
    Invalid(String),
    #[error("inconsistent branch data: {0}")]
    InconsistentBranch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MixedExtension {
    pub phi: GroupAutomorphism,
    pub tau: usize,
}

impl MixedExtension {
    /// Checks `φ(τ) = τ` and `φ² = conj_τ`.
    pub fn new(g0: &FiniteGroup, phi: GroupAutomorphism, tau: usize) -> Result<Self, MixedError> {
        if phi.map().len() != g0.order() || tau >= g0.order() {
            return Err(MixedError::Invalid("size mismatch".into()));
        }
        let e = MixedExtension { phi, tau };
        if !e.is_valid(g0) {
            return Err(MixedError::Invalid(
                "phi(tau) != tau or phi^2 != conj(tau)".into(),
            ));
        }
        Ok(e)
    }

    pub fn is_valid(&self, g0: &FiniteGroup) -> bool {
        let phi = &self.phi;
        phi.apply(self.tau) == self.tau
            && (0..g0.order()).all(|x| phi.apply(phi.apply(x)) == g0.conj(self.tau, x))
    }

    /// Number of `a` with `a φ(a) τ = 1`, i.e. `|O₂|`.
    pub fn o2_count(&self, g0: &FiniteGroup) -> usize {
        (0..g0.order())
            .filter(|&a| g0.mul(g0.mul(a, self.phi.apply(a)), self.tau) == 0)
            .count()
    }

    /// Replaces `t` by `t·h`: `(φ∘conj_h, φ(h)τh)`.
    pub fn coset_change(&self, g0: &FiniteGroup, h: usize) -> Self {
        let map = (0..g0.order())
            .map(|x| self.phi.apply(g0.conj(h, x)) as u32)
            .collect();
        let tau = g0.mul(g0.mul(self.phi.apply(h), self.tau), h);
        MixedExtension {
            phi: GroupAutomorphism::from_map_unchecked(map),
            tau,
        }
    }

    /// Transport along `α`: `(αφα⁻¹, α(τ))`.
    pub fn relabel(&self, alpha: &GroupAutomorphism) -> Self {
        let mut map = vec![0u32; alpha.map().len()];
        for x in 0..map.len() {
            map[alpha.apply(x)] = alpha.apply(self.phi.apply(x)) as u32;
        }
        MixedExtension {
            phi: GroupAutomorphism::from_map_unchecked(map),
            tau: alpha.apply(self.tau),
        }
    }
}

/// All `(φ, τ)` over the given automorphism list, ordered by `(φ, τ)`.
pub fn extension_pairs(g0: &FiniteGroup, auts: &[GroupAutomorphism]) -> Vec<MixedExtension> {
    let gens = g0_generators(g0);
    let mut out = Vec::new();
    for phi in auts {
        push_pairs(g0, &gens, phi, &mut out);
    }
    out.sort();
    out
}

/// The pairs of [`extension_pairs`] accepted by `keep`, streaming the
/// automorphisms instead of taking a stored list.
pub fn extension_pairs_streamed<F>(g0: &FiniteGroup, keep: F) -> Vec<MixedExtension>
where
    F: Fn(&MixedExtension) -> bool,
{
    let gens = g0_generators(g0);
    let mut out = Vec::new();
    let mut found = Vec::new();
    for_each_automorphism(g0, |m| {
        let phi = GroupAutomorphism::from_map_unchecked(m.to_vec());
        push_pairs(g0, &gens, &phi, &mut found);
        out.extend(found.drain(..).filter(|e| keep(e)));
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

fn push_pairs(
    g0: &FiniteGroup,
    gens: &[usize],
    phi: &GroupAutomorphism,
    out: &mut Vec<MixedExtension>,
) {
    let sq: Vec<usize> = gens.iter().map(|&x| phi.apply(phi.apply(x))).collect();
    for tau in 0..g0.order() {
        if phi.apply(tau) != tau {
            continue;
        }
        if gens.iter().zip(&sq).all(|(&x, &y)| g0.conj(tau, x) == y) {
            out.push(MixedExtension {
                phi: phi.clone(),
                tau,
            });
        }
    }
}

fn g0_generators(g0: &FiniteGroup) -> Vec<usize> {
    if g0.generators().is_empty() {
        (1..g0.order()).collect()
    } else {
        g0.generators().to_vec()
    }
}

/// One representative (the least member) per orbit of `pairs` under coset
/// changes and relabelling by `auts`. Pairs outside `pairs` reached by the
/// actions are ignored, so `pairs` should be closed.
pub fn dedup_extensions(
    g0: &FiniteGroup,
    pairs: &[MixedExtension],
    auts: &[GroupAutomorphism],
) -> Vec<MixedExtension> {
    let index: HashMap<&MixedExtension, usize> =
        pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let hs = g0_generators(g0);
    let alphas = automorphism_generators(g0.order(), auts);
    let mut seen = vec![false; pairs.len()];
    let mut reps = Vec::new();
    for start in 0..pairs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut best = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let p = &pairs[i];
            if pairs[i] < pairs[best] {
                best = i;
            }
            let next = hs
                .iter()
                .map(|&h| p.coset_change(g0, h))
                .chain(alphas.iter().map(|a| p.relabel(a)));
            for q in next {
                if let Some(&j) = index.get(&q) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        reps.push(pairs[best].clone());
    }
    reps.sort();
    reps
}

/// Automorphisms `α` in `auts` carrying `ext` to a coset change of itself.
pub fn extension_stabilizer(
    g0: &FiniteGroup,
    ext: &MixedExtension,
    auts: &[GroupAutomorphism],
) -> Vec<GroupAutomorphism> {
    let orbit: HashSet<MixedExtension> = (0..g0.order()).map(|h| ext.coset_change(g0, h)).collect();
    auts.iter()
        .filter(|a| orbit.contains(&ext.relabel(a)))
        .cloned()
        .collect()
}

/// The extension group with its multiplication table.
#[derive(Clone, Debug)]
pub struct MixedGroup {
    pub group: FiniteGroup,
    pub order_g0: usize,
}

impl MixedGroup {
    pub fn element(&self, a: usize, swap: bool) -> usize {
        a + if swap { self.order_g0 } else { 0 }
    }

    /// `(a, ε)` for a stored index.
    pub fn split(&self, x: usize) -> (usize, bool) {
        (x % self.order_g0, x >= self.order_g0)
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn build_group(g0: &FiniteGroup, ext: &MixedExtension) -> Result<MixedGroup, MixedError> {
    if !ext.is_valid(g0) {
        return Err(MixedError::Invalid(
            "phi(tau) != tau or phi^2 != conj(tau)".into(),
        ));
    }
    let n = g0.order();
    let m = 2 * n;
    let mut table = vec![0u32; m * m];
    for x in 0..m {
        let (a, e) = (x % n, x >= n);
        for y in 0..m {
            let (b, d) = (y % n, y >= n);
            let z = match (e, d) {
                (false, _) => g0.mul(a, b) + if d { n } else { 0 },
                (true, false) => g0.mul(a, ext.phi.apply(b)) + n,
                (true, true) => g0.mul(g0.mul(a, ext.phi.apply(b)), ext.tau),
            };
            table[x * m + y] = z as u32;
        }
    }
    let labels = (0..m)
        .map(|x| {
            let a = g0.label(x % n);
            if x < n {
                a.to_string()
            } else {
                format!("{a}*t")
            }
        })
        .collect();
    let mut gens: Vec<usize> = g0_generators(g0);
    gens.push(n);
    let group = FiniteGroup::from_table(table, labels, gens)?;
    Ok(MixedGroup { group, order_g0: n })
}

/// Stored indices of `O₂ = {(a,1) : a φ(a) τ = 1}`.
pub fn o2_elements(g0: &FiniteGroup, ext: &MixedExtension) -> Vec<usize> {
    let n = g0.order();
    (0..n)
        .filter(|&a| g0.mul(g0.mul(a, ext.phi.apply(a)), ext.tau) == 0)
        .map(|a| a + n)
        .collect()
}

/// `Σ_V ∩ φ(Σ_V) = {1}`.
pub fn is_semi_isogenous(g0: &FiniteGroup, v: &GeneratingVector, ext: &MixedExtension) -> bool {
    disjoint_under(&stabilizer_set(g0, v).elements(), &ext.phi)
}

pub(crate) fn disjoint_under(sigma: &[usize], phi: &GroupAutomorphism) -> bool {
    let set: HashSet<usize> = sigma.iter().copied().collect();
    sigma
        .iter()
        .all(|&x| x == 0 || !set.contains(&phi.apply(x)))
}

/// One curve per conjugacy class of `O₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchCurve {
    pub genus: u64,
    pub self_intersection: i64,
    pub class_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchDescriptor {
    /// Sorted by genus then self-intersection.
    pub curves: Vec<BranchCurve>,
}

impl BranchDescriptor {
    /// `Σ (genus - 1)`.
    pub fn delta(&self) -> i64 {
        self.curves.iter().map(|c| c.genus as i64 - 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// `(3,-8), (2,-4)^2` style; `∅` when empty.
    pub fn signature(&self) -> String {
        if self.curves.is_empty() {
            return "∅".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.curves.len() {
            let c = &self.curves[i];
            let mut k = 1;
            while i + k < self.curves.len()
                && self.curves[i + k].genus == c.genus
                && self.curves[i + k].self_intersection == c.self_intersection
            {
                k += 1;
            }
            let s = format!("({},{})", c.genus, c.self_intersection);
            parts.push(if k == 1 { s } else { format!("{s}^{k}") });
            i += k;
        }
        parts.join(", ")
    }
}

pub fn branch_descriptor(
    mg: &MixedGroup,
    o2: &[usize],
    g: u64,
) -> Result<BranchDescriptor, MixedError> {
    let grp = &mg.group;
    let order = grp.order() as i64;
    let gm1 = g as i64 - 1;
    let mut classes: Vec<usize> = o2.iter().map(|&x| grp.class_of(x)).collect();
    classes.sort_unstable();
    classes.dedup();
    let mut curves = Vec::new();
    for c in classes {
        let rep = grp.conjugacy_classes()[c][0];
        let n = grp.class_size(rep) as i64;
        let z = grp.centralizer_order(rep) as i64;
        if (2 * gm1) % z != 0 || (8 * n * gm1) % order != 0 {
            return Err(MixedError::InconsistentBranch(format!(
                "class of size {n} with centralizer {z} in group of order {order}, g = {g}"
            )));
        }
        curves.push(BranchCurve {
            genus: (2 * gm1 / z + 1) as u64,
            self_intersection: -8 * n * gm1 / order,
            class_size: n as usize,
        });
    }
    curves.sort();
    Ok(BranchDescriptor { curves })
}

/// Necessary conditions on `O₂` and its classes for the given type.
pub fn post_filters(
    ty: &CoveringType,
    order_g0: usize,
    o2: &[usize],
    descriptor: &BranchDescriptor,
) -> bool {
    let n_o2 = o2.len() as u64;
    if n_o2 != ty.n_o2 {
        return false;
    }
    if descriptor.delta() != ty.target.delta() {
        return false;
    }
    let sizes: u64 = descriptor.curves.iter().map(|c| c.class_size as u64).sum();
    if sizes != n_o2 {
        return false;
    }
    if n_o2 == 0 {
        return true;
    }
    ty.periods.iter().all(|&m| {
        let m = m as u64;
        n_o2.is_multiple_of(m)
            && m * n_o2 <= order_g0 as u64
            && descriptor.curves.iter().all(|c| m <= c.class_size as u64)
    })
}
