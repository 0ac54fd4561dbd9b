//! Genus of the Albanese fibre for `q = 1`, from the size `M` of the
//! `G`-saturation of the monodromy image inside `G⁰ × G⁰`.

use thiserror::Error;

use crate::genvec::GeneratingVector;
use crate::group::FiniteGroup;
use crate::mixed::MixedExtension;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlbaneseError {
    #[error("invalid monodromy image: {0}")]
    InvalidImage(String),
    #[error("inconsistent M: {0}")]
    InconsistentM(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
}

/// Action of the stored element `(a, ε)` of `G` on `G⁰ × G⁰`.
pub fn g_action_on_pairs(
    g0: &FiniteGroup,
    ext: &MixedExtension,
    a: usize,
    swap: bool,
    pair: (usize, usize),
) -> (usize, usize) {
    let (h1, h2) = pair;
    if swap {
        let g = ext.phi.inverse().apply(a);
        (g0.mul(a, h2), g0.mul(g0.mul(ext.tau, g), h1))
    } else {
        (g0.mul(a, h1), g0.mul(ext.phi.apply(a), h2))
    }
}

/// A named procedure producing the monodromy image as a subset of
/// `G⁰ × G⁰` (pairs encoded `h1·|G⁰| + h2`).
pub trait MonodromyStrategy: Sync {
    fn name(&self) -> &'static str;
    fn image(&self, g0: &FiniteGroup, ext: &MixedExtension, v: &GeneratingVector) -> Vec<usize>;
}

/// Subgroup generated by `(d, d⁻¹)`, `(e, e⁻¹)` for the handle and
/// `(h, 1)`, `(1, h)` for each branch entry.
pub struct Antidiagonal;

/// All of `G⁰ × G⁰`. An upper bound for `M` only; not registered, since it
/// overestimates the fibre genus whenever the image is a proper subgroup.
pub struct Full;

fn pair_closure(g0: &FiniteGroup, gens: &[(usize, usize)]) -> Vec<usize> {
    let n = g0.order();
    let mut seen = vec![false; n * n];
    seen[0] = true;
    let mut out = vec![0usize];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        let (a, b) = (x / n, x % n);
        for &(c, d) in gens {
            let y = g0.mul(a, c) * n + g0.mul(b, d);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

impl MonodromyStrategy for Antidiagonal {
    fn name(&self) -> &'static str {
        "antidiagonal"
    }

    fn image(&self, g0: &FiniteGroup, _ext: &MixedExtension, v: &GeneratingVector) -> Vec<usize> {
        let mut gens = Vec::new();
        for &x in v.handles() {
            let x = x as usize;
            gens.push((x, g0.inv(x)));
        }
        for &h in v.branches() {
            gens.push((h as usize, 0));
            gens.push((0, h as usize));
        }
        pair_closure(g0, &gens)
    }
}

impl MonodromyStrategy for Full {
    fn name(&self) -> &'static str {
        "full"
    }

    fn image(&self, g0: &FiniteGroup, _ext: &MixedExtension, _v: &GeneratingVector) -> Vec<usize> {
        (0..g0.order() * g0.order()).collect()
    }
}

/// Registered strategies, selectable by name.
pub static STRATEGIES: &[&dyn MonodromyStrategy] = &[&Antidiagonal];

pub const DEFAULT_STRATEGY: &str = "antidiagonal";

pub fn strategy_by_name(name: &str) -> Result<&'static dyn MonodromyStrategy, AlbaneseError> {
    STRATEGIES
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| AlbaneseError::UnknownStrategy(name.to_string()))
}

/// `M = |⋃_{g∈G} g·Im|`.
pub fn compute_m(
    g0: &FiniteGroup,
    ext: &MixedExtension,
    v: &GeneratingVector,
    strategy: &dyn MonodromyStrategy,
) -> Result<u64, AlbaneseError> {
    if v.q != 1 {
        return Err(AlbaneseError::InvalidImage(format!(
            "base genus {} is not 1",
            v.q
        )));
    }
    let n = g0.order();
    let image = strategy.image(g0, ext, v);
    if image.is_empty() || image.iter().any(|&x| x >= n * n) {
        return Err(AlbaneseError::InvalidImage("empty or out of range".into()));
    }
    let mut union = vec![false; n * n];
    let act = |a: usize, swap: bool, x: usize| {
        let (p, q) = g_action_on_pairs(g0, ext, a, swap, (x / n, x % n));
        p * n + q
    };
    for a in 0..n {
        for swap in [false, true] {
            for &x in &image {
                union[act(a, swap, x)] = true;
            }
        }
    }
    let members: Vec<usize> = (0..n * n).filter(|&x| union[x]).collect();
    for a in 0..n {
        for swap in [false, true] {
            if members.iter().any(|&x| !union[act(a, swap, x)]) {
                return Err(AlbaneseError::InvalidImage("union is not G-stable".into()));
            }
        }
    }
    let m = members.len() as u64;
    if !((n * n) as u64).is_multiple_of(m) {
        return Err(AlbaneseError::InvalidImage(format!(
            "M = {m} does not divide |G0|^2"
        )));
    }
    Ok(m)
}

/// `g_alb = 1 + M (g - 1 - |O₂|) / |G⁰|²`.
pub fn albanese_genus(m: u64, g: u64, n_o2: u64, order_g0: u64) -> Result<i64, AlbaneseError> {
    let num = m as i64 * (g as i64 - 1 - n_o2 as i64);
    let den = (order_g0 * order_g0) as i64;
    if den == 0 || num % den != 0 {
        return Err(AlbaneseError::InconsistentM(format!(
            "{num}/{den} not integral"
        )));
    }
    Ok(1 + num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genvec::search_vectors;
    use crate::group::{automorphism_group, group_from_permutations, perm::parse_cycles, Perm};
    use crate::mixed::{build_group, extension_pairs};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<Perm> = gens
            .iter()
            .map(|g| parse_cycles(g, degree).unwrap())
            .collect();
        group_from_permutations(degree, &gens).unwrap()
    }

    #[test]
    fn genus_formula() {
        assert_eq!(albanese_genus(64, 5, 0, 8), Ok(5));
        assert_eq!(albanese_genus(16, 5, 2, 4), Ok(3));
        assert_eq!(albanese_genus(16, 3, 2, 4), Ok(1));
        assert!(albanese_genus(3, 5, 0, 8).is_err());
    }

    #[test]
    fn action_is_compatible_with_group_law() {
        let g = group(4, &["(1,2,3,4)", "(1,3)"]);
        let auts = automorphism_group(&g).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for ext in extension_pairs(&g, &auts) {
            let mg = build_group(&g, &ext).unwrap();
            let n = g.order();
            assert_eq!(g_action_on_pairs(&g, &ext, 0, false, (3, 5)), (3, 5));
            assert_eq!(
                g_action_on_pairs(&g, &ext, 0, true, (3, 5)),
                (5, g.mul(ext.tau, 3))
            );
            for _ in 0..100 {
                let (x, y) = (rng.gen_range(0..2 * n), rng.gen_range(0..2 * n));
                let p = (rng.gen_range(0..n), rng.gen_range(0..n));
                let xy = mg.group.mul(x, y);
                let direct = g_action_on_pairs(&g, &ext, xy % n, xy >= n, p);
                let inner = g_action_on_pairs(&g, &ext, y % n, y >= n, p);
                let twice = g_action_on_pairs(&g, &ext, x % n, x >= n, inner);
                assert_eq!(direct, twice);
            }
        }
    }

    #[test]
    fn full_strategy_saturates() {
        let k = group(4, &["(1,2)", "(3,4)"]);
        let auts = automorphism_group(&k).unwrap();
        let ext = &extension_pairs(&k, &auts)[0];
        let v = &search_vectors(&k, 1, &[2, 2])[0];
        assert_eq!(compute_m(&k, ext, v, &Full), Ok(16));
        let m = compute_m(&k, ext, v, &Antidiagonal).unwrap();
        assert_eq!(16 % m, 0);
        assert!(strategy_by_name("nope").is_err());
        assert!(strategy_by_name("full").is_err());
        assert_eq!(
            strategy_by_name(DEFAULT_STRATEGY).unwrap().name(),
            "antidiagonal"
        );
    }
}
