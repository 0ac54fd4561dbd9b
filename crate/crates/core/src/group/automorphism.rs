use std::ops::ControlFlow;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError};

/// Default bound on |G| for the full automorphism list.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 64;

/// A bijective homomorphism of a group onto itself, as an index map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    map: Vec<u32>,
}

impl GroupAutomorphism {
    pub fn identity(order: usize) -> Self {
        GroupAutomorphism {
            map: (0..order as u32).collect(),
        }
    }

    /// Wraps an index map after checking that it is an automorphism of `g`.
    pub fn new(g: &FiniteGroup, map: Vec<u32>) -> Option<Self> {
        let n = g.order();
        if map.len() != n || !super::perm::is_permutation(&map) {
            return None;
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] as usize != g.mul(map[a] as usize, map[b] as usize) {
                    return None;
                }
            }
        }
        Some(GroupAutomorphism { map })
    }

    pub(crate) fn from_map_unchecked(map: Vec<u32>) -> Self {
        GroupAutomorphism { map }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        GroupAutomorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        GroupAutomorphism {
            map: super::perm::invert(&self.map),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

/// Greedy generating set: repeatedly adds the smallest element outside the
/// subgroup generated so far.
pub fn minimal_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut mask = g.closure_mask(&gens);
    for x in 1..g.order() {
        if !mask.contains(x) {
            gens.push(x);
            mask = g.closure_mask(&gens);
        }
        if mask.count_ones(..) == g.order() {
            break;
        }
    }
    gens
}

/// Enumerates injective homomorphisms `src -> dst` determined by images of
/// `gens`, where image candidates for `gens[i]` are `cands[i]`. When
/// `|src| = |dst|` these are exactly the isomorphisms.
pub(crate) fn search_maps<F>(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    cands: &[Vec<usize>],
    mut visit: F,
) where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let mut images = vec![0usize; gens.len()];
    let mut map = vec![u32::MAX; src.order()];
    let mut used = vec![false; dst.order()];
    let _ = descend(
        src,
        dst,
        gens,
        cands,
        0,
        &mut images,
        &mut map,
        &mut used,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn descend<F>(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    cands: &[Vec<usize>],
    level: usize,
    images: &mut Vec<usize>,
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    if level == gens.len() {
        return visit(map);
    }
    for &y in &cands[level] {
        images[level] = y;
        if extend(src, dst, &gens[..=level], &images[..=level], map, used) {
            descend(src, dst, gens, cands, level + 1, images, map, used, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// Recomputes the map on the subgroup generated by `gens`, returning false
/// on any inconsistency or collision.
fn extend(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    map: &mut [u32],
    used: &mut [bool],
) -> bool {
    map.fill(u32::MAX);
    used.fill(false);
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x] as usize;
        for (&g, &fg) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let fy = dst.mul(fx, fg);
            if map[y] == u32::MAX {
                if used[fy] {
                    return false;
                }
                used[fy] = true;
                map[y] = fy as u32;
                queue.push(y);
            } else if map[y] as usize != fy {
                return false;
            }
        }
    }
    true
}

/// Candidate images for each generator: same element order and class size.
pub(crate) fn candidates(src: &FiniteGroup, dst: &FiniteGroup, gens: &[usize]) -> Vec<Vec<usize>> {
    gens.iter()
        .map(|&g| {
            (0..dst.order())
                .filter(|&y| {
                    dst.element_order(y) == src.element_order(g)
                        && dst.class_size(y) == src.class_size(g)
                })
                .collect()
        })
        .collect()
}

/// Streams every automorphism of `g` as an index map, in lexicographic order
/// of generator images. The callback may stop the enumeration early.
pub fn for_each_automorphism<F>(g: &FiniteGroup, mut visit: F)
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    if g.order() == 1 {
        let _ = visit(&[0]);
        return;
    }
    let gens = minimal_generating_set(g);
    let cands = candidates(g, g, &gens);
    search_maps(g, g, &gens, &cands, |m| visit(m));
}

pub fn automorphism_group(g: &FiniteGroup) -> Result<Vec<GroupAutomorphism>, GroupError> {
    automorphism_group_capped(g, DEFAULT_AUTOMORPHISM_CAP)
}

pub fn automorphism_group_capped(
    g: &FiniteGroup,
    cap: usize,
) -> Result<Vec<GroupAutomorphism>, GroupError> {
    if g.order() > cap {
        return Err(GroupError::AutomorphismSearchTooLarge {
            order: g.order(),
            cap,
        });
    }
    let mut out = Vec::new();
    for_each_automorphism(g, |m| {
        out.push(GroupAutomorphism::from_map_unchecked(m.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Full automorphism list, giving up once more than `limit` maps are found.
pub fn automorphisms_limited(
    g: &FiniteGroup,
    limit: usize,
) -> Result<Vec<GroupAutomorphism>, GroupError> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_automorphism(g, |m| {
        if out.len() == limit {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(GroupAutomorphism::from_map_unchecked(m.to_vec()));
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(GroupError::TooManyAutomorphisms { limit });
    }
    Ok(out)
}

/// Closure of `gens` under composition.
pub fn automorphism_closure(order: usize, gens: &[GroupAutomorphism]) -> Vec<GroupAutomorphism> {
    let id = GroupAutomorphism::identity(order);
    let mut seen: HashSet<GroupAutomorphism> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for s in gens {
            let y = x.compose(s);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
    }
    out
}

/// Greedy generating set of the subgroup formed by `elems`: scans in order and
/// keeps each element not yet in the closure of those kept so far.
pub fn automorphism_generators(
    order: usize,
    elems: &[GroupAutomorphism],
) -> Vec<GroupAutomorphism> {
    let mut gens: Vec<GroupAutomorphism> = Vec::new();
    let mut closure: HashSet<GroupAutomorphism> =
        HashSet::from([GroupAutomorphism::identity(order)]);
    for a in elems {
        if closure.contains(a) {
            continue;
        }
        gens.push(a.clone());
        closure = automorphism_closure(order, &gens).into_iter().collect();
        if closure.len() == elems.len() {
            break;
        }
    }
    gens
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
    fn automorphism_counts() {
        assert_eq!(
            automorphism_group(&group(4, &["(1,2)", "(3,4)"]))
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            automorphism_group(&group(4, &["(1,2,3,4)"])).unwrap().len(),
            2
        );
        assert_eq!(
            automorphism_group(&FiniteGroup::trivial()).unwrap().len(),
            1
        );
        assert_eq!(
            automorphism_group(&group(3, &["(1,2,3)", "(1,2)"]))
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            automorphism_group(&group(4, &["(1,2,3,4)", "(1,3)"]))
                .unwrap()
                .len(),
            8
        );
        let q8 = group(8, &["(1,2,4,7)(3,6,8,5)", "(1,3,4,8)(2,5,7,6)"]);
        assert_eq!(q8.order(), 8);
        assert_eq!(automorphism_group(&q8).unwrap().len(), 24);
        let all = automorphism_group(&q8).unwrap();
        let gens = automorphism_generators(8, &all);
        assert!(gens.len() <= 3);
        assert_eq!(automorphism_closure(8, &gens).len(), 24);
        assert!(automorphisms_limited(&q8, 10).is_err());
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        let g = group(4, &["(1,2,3,4)", "(1,3)"]);
        for a in automorphism_group(&g).unwrap() {
            assert!(GroupAutomorphism::new(&g, a.map().to_vec()).is_some());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = group(4, &["(1,2,3,4)", "(1,3)"]);
        assert!(automorphism_group_capped(&g, 4).is_err());
    }
}
