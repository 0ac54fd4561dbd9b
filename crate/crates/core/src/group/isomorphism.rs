use std::ops::ControlFlow;

use super::automorphism::{candidates, minimal_generating_set, search_maps};
use super::FiniteGroup;

/// Returns an isomorphism `g -> h` as an index map, if one exists.
pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<u32>> {
    if g.order() != h.order() {
        return None;
    }
    let (fg, fh) = (g.fingerprint(), h.fingerprint());
    if fg != fh {
        return None;
    }
    let gens = minimal_generating_set(g);
    let cands = candidates(g, h, &gens);
    let mut found = None;
    search_maps(g, h, &gens, &cands, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    });
    found
}

#[cfg(test)]
mod tests {
    use super::super::perm::parse_cycles;
    use super::super::{group_from_permutations, Perm};
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> FiniteGroup {
        let gens: Vec<Perm> = gens
            .iter()
            .map(|g| parse_cycles(g, degree).unwrap())
            .collect();
        group_from_permutations(degree, &gens).unwrap()
    }

    #[test]
    fn cyclic_vs_klein() {
        assert!(is_isomorphic(&group(4, &["(1,2,3,4)"]), &group(4, &["(1,2)", "(3,4)"])).is_none());
    }

    #[test]
    fn self_isomorphism() {
        let g = group(4, &["(1,2,3,4)", "(1,3)"]);
        assert!(is_isomorphic(&g, &g).is_some());
    }

    #[test]
    fn two_models_of_s3() {
        let a = group(3, &["(1,2,3)", "(1,2)"]);
        let b = group(6, &["(1,2)(3,4)(5,6)", "(1,3,5)(2,6,4)"]);
        assert_eq!(b.order(), 6);
        let m = is_isomorphic(&a, &b).expect("isomorphic");
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(m[a.mul(x, y)] as usize, b.mul(m[x] as usize, m[y] as usize));
            }
        }
    }
}
