//! Numerical invariants of `X = (C×C)/G` and the bounds on `(-1)`-curves.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::AbelianStructure;
use crate::genvec::GeneratingVector;
use crate::group::{group_from_permutations, perm::parse_cycles, FiniteGroup, GroupError};
use crate::mixed::{BranchDescriptor, MixedExtension};
use crate::scalar::bareiss_determinant;
use crate::types::CoveringType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
    #[error("K^2 = {0} out of range 1..=8")]
    OutOfRange(i64),
}

fn exact(num: i64, den: i64, what: &str) -> Result<i64, InvariantError> {
    if den == 0 || num % den != 0 {
        return Err(InvariantError::Inconsistent(format!(
            "{what}: {num}/{den} not integral"
        )));
    }
    Ok(num / den)
}

/// `e(X) = 2(g-1)/|G| · (2(g-1) - |O₂|)`.
pub fn euler_number(g: u64, order_g: u64, n_o2: u64) -> Result<i64, InvariantError> {
    let gm1 = g as i64 - 1;
    exact(2 * gm1 * (2 * gm1 - n_o2 as i64), order_g as i64, "e")
}

/// `K² = 2(g-1)/|G| · (4(g-1) - 5|O₂|)`.
pub fn canonical_square(g: u64, order_g: u64, n_o2: u64) -> Result<i64, InvariantError> {
    let gm1 = g as i64 - 1;
    exact(2 * gm1 * (4 * gm1 - 5 * n_o2 as i64), order_g as i64, "K^2")
}

/// `χ = (g-1)/|G| · (g-1-|O₂|)`.
pub fn holomorphic_chi(g: u64, order_g: u64, n_o2: u64) -> Result<i64, InvariantError> {
    let gm1 = g as i64 - 1;
    exact(gm1 * (gm1 - n_o2 as i64), order_g as i64, "chi")
}

/// Group reference that can be rebuilt: catalogue id plus generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupRef {
    pub order: usize,
    pub index: usize,
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
}

impl GroupRef {
    /// Rebuilds the group; element indices agree with the ones used when
    /// the record was written.
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        let gens = self
            .generators
            .iter()
            .map(|g| parse_cycles(g, self.degree))
            .collect::<Result<Vec<_>, _>>()?;
        group_from_permutations(self.degree, &gens)
    }
}

/// Static minimality annotation; not computed by the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinimalityNote {
    pub minimal: Option<bool>,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFamily {
    pub k2: i64,
    pub pg: u32,
    pub q: u32,
    pub chi: i64,
    pub e: i64,
    pub g: u64,
    pub covering: CoveringType,
    pub g0: GroupRef,
    /// Catalogue id of `G` when its order is covered, else a fingerprint.
    pub g_label: String,
    pub order_g: usize,
    pub vector: GeneratingVector,
    pub extension: MixedExtension,
    pub n_o2: usize,
    pub branch: BranchDescriptor,
    pub h1: AbelianStructure,
    pub g_alb: Option<u64>,
    pub minus_one_bound: Option<u32>,
    pub minimality: Option<MinimalityNote>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identity {
    Delta,
    Noether,
    BranchSquare,
    CanonicalDotBranch,
    ClassSizes,
    Euler,
    CanonicalSquare,
    Chi,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::Delta => "delta = 8chi - K^2",
            Identity::Noether => "K^2 + e = 12chi",
            Identity::BranchSquare => "B^2 = -4 delta",
            Identity::CanonicalDotBranch => "K.B = 6 delta",
            Identity::ClassSizes => "sum of class sizes = |O2|",
            Identity::Euler => "e from (g, |G|, |O2|)",
            Identity::CanonicalSquare => "K^2 from (g, |G|, |O2|)",
            Identity::Chi => "chi from (g, |G|, |O2|)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub identity: Identity,
    pub expected: i64,
    pub actual: i64,
}

/// Every identity the numerical data of a family must satisfy.
pub fn consistency_check(f: &SurfaceFamily) -> Result<(), Vec<Violation>> {
    let mut bad = Vec::new();
    let mut check = |identity, expected: i64, actual: i64| {
        if expected != actual {
            bad.push(Violation {
                identity,
                expected,
                actual,
            });
        }
    };
    let delta = 8 * f.chi - f.k2;
    check(Identity::Delta, delta, f.branch.delta());
    check(Identity::Noether, 12 * f.chi, f.k2 + f.e);
    let b2: i64 = f.branch.curves.iter().map(|c| c.self_intersection).sum();
    check(Identity::BranchSquare, -4 * delta, b2);
    let kb: i64 = f
        .branch
        .curves
        .iter()
        .map(|c| 2 * (c.genus as i64 - 1) - c.self_intersection)
        .sum();
    check(Identity::CanonicalDotBranch, 6 * delta, kb);
    let sizes: usize = f.branch.curves.iter().map(|c| c.class_size).sum();
    check(Identity::ClassSizes, f.n_o2 as i64, sizes as i64);
    let (g, o, n) = (f.g, f.order_g as u64, f.n_o2 as u64);
    check(
        Identity::Euler,
        f.e,
        euler_number(g, o, n).unwrap_or(i64::MIN),
    );
    check(
        Identity::CanonicalSquare,
        f.k2,
        canonical_square(g, o, n).unwrap_or(i64::MIN),
    );
    check(
        Identity::Chi,
        f.chi,
        holomorphic_chi(g, o, n).unwrap_or(i64::MIN),
    );
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// `det M₁` for one `(-1)`-curve with `E·B = n1` (χ = 1).
pub fn hodge_det1(k2: i64, n1: i64) -> i64 {
    -k2 * n1 * n1 - 12 * (8 - k2) * n1 + 4 * (8 - k2) * (73 - 8 * k2)
}

/// `det M₂` for two disjoint `(-1)`-curves (χ = 1).
pub fn hodge_det2(k2: i64, n1: i64, n2: i64) -> i64 {
    n2 * n2 * (1 + k2)
        + n2 * (12 * (8 - k2) - 2 * n1)
        + n1 * n1 * (1 + k2)
        + 12 * n1 * (8 - k2)
        + 8 * (8 - k2) * (4 * k2 - 37)
}

/// Floor of the larger root of `det M₁` in `n1`. For `0 < k2 <= 8` the
/// smaller root is at most 0 and `det M₁(0) >= 0`, so this is the largest
/// `n >= 0` with `det M₁(n) >= 0`.
pub fn floor_x2(k2: i64) -> Result<i64, InvariantError> {
    check_range(k2)?;
    let mut n = 0;
    while hodge_det1(k2, n + 1) >= 0 {
        n += 1;
    }
    Ok(n)
}

/// Floor of the larger root of `det M₂` in `n2`, or `None` without real roots.
pub fn floor_y2(k2: i64, n1: i64) -> Option<i64> {
    let a = 1 + k2;
    let b = 12 * (8 - k2) - 2 * n1;
    let c = n1 * n1 * (1 + k2) + 12 * n1 * (8 - k2) + 8 * (8 - k2) * (4 * k2 - 37);
    let d = b * b - 4 * a * c;
    if d < 0 {
        return None;
    }
    let s = num_integer::Roots::sqrt(&d);
    Some(num_integer::Integer::div_floor(&(s - b), &(2 * a)))
}

fn check_range(k2: i64) -> Result<(), InvariantError> {
    if (1..=8).contains(&k2) {
        Ok(())
    } else {
        Err(InvariantError::OutOfRange(k2))
    }
}

/// Gram matrix of `K, B, E_1, ..., E_s` for disjoint `(-1)`-curves with
/// `E_i·B = n_i`, at χ = 1.
pub fn gram_matrix(k2: i64, ns: &[i64]) -> Vec<Vec<i64>> {
    let d = 8 - k2;
    let size = ns.len() + 2;
    let mut m = vec![vec![0i64; size]; size];
    m[0][0] = k2;
    m[0][1] = 6 * d;
    m[1][0] = 6 * d;
    m[1][1] = -4 * d;
    for (i, &n) in ns.iter().enumerate() {
        let j = i + 2;
        m[0][j] = -1;
        m[j][0] = -1;
        m[1][j] = n;
        m[j][1] = n;
        m[j][j] = -1;
    }
    m
}

/// Hodge index sign condition for the span of `K, B, E_1..E_s`:
/// `(-1)^(s+1) det >= 0`, imposed on every sub-collection of the `E_i`.
pub fn hodge_feasible(k2: i64, ns: &[i64]) -> bool {
    let s = ns.len();
    (1u32..1 << s).all(|mask| {
        let sub: Vec<i64> = (0..s)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ns[i])
            .collect();
        let det = bareiss_determinant(&gram_matrix(k2, &sub)).expect("small determinant");
        if sub.len() % 2 == 1 {
            det >= 0
        } else {
            det <= 0
        }
    })
}

/// Largest number of disjoint `(-1)`-curves compatible with the Hodge index
/// theorem, each meeting the branch curve evenly and at least 6 times.
pub fn minus_one_curve_bound(k2: i64) -> Result<u32, InvariantError> {
    let top = floor_x2(k2)?;
    let values: Vec<i64> = (6..=top).step_by(2).collect();
    let mut best = 0u32;
    let mut s = 1;
    loop {
        let mut found = false;
        let mut idx = vec![0usize; s];
        'tuples: loop {
            if !values.is_empty() {
                let ns: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
                if hodge_feasible(k2, &ns) {
                    found = true;
                    break 'tuples;
                }
            } else {
                break;
            }
            // next non-decreasing index tuple
            let mut p = s;
            loop {
                if p == 0 {
                    break 'tuples;
                }
                p -= 1;
                if idx[p] + 1 < values.len() {
                    idx[p] += 1;
                    for q in p + 1..s {
                        idx[q] = idx[p];
                    }
                    break;
                }
            }
        }
        if !found {
            return Ok(best);
        }
        best = s as u32;
        s += 1;
    }
}
