use std::collections::{HashSet, VecDeque};

use super::GeneratingVector;
use crate::group::{FiniteGroup, GroupAutomorphism};

/// Moves on generating vectors induced by mapping classes of the punctured
/// base curve, plus relabelling by group automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HurwitzMove {
    /// `(h_i, h_{i+1}) -> (h_i h_{i+1} h_i^-1, h_i)`.
    Braid(usize),
    /// `(d, e) -> (d, e d)` on handle `j`.
    TwistRight(usize),
    /// `(d, e) -> (d e, e)` on handle `j`.
    TwistLeft(usize),
    /// `(d_j, e_j, d_{j+1}, e_{j+1}) -> (c d_{j+1} c^-1, c e_{j+1} c^-1, d_j, e_j)`
    /// with `c = [d_j, e_j]`.
    HandleSwap(usize),
    /// Mixes handles `j` and `j+1` in homology:
    /// `(a, b, a', b') -> (b^-1, b'^-1 a b, b'^-1 b^-1 a', b')`; everything
    /// after the pair is conjugated by `b^-1 b'^-1`.
    HandleMix(usize),
    /// Slides the first branch point around the last handle:
    /// `(a, b, c) -> (a, p c b, p c p^-1)` with `p = b a^-1 b^-1`.
    PushB,
    /// `(a, b, c) -> (a c^-1 b, b^-1 c b c^-1 b, b^-1 c b)`.
    PushA,
    /// Entry-wise application of the `k`-th automorphism.
    Automorphism(usize),
}

pub fn move_set(q: usize, r: usize, n_aut: usize) -> Vec<HurwitzMove> {
    let mut moves = Vec::new();
    for i in 0..r.saturating_sub(1) {
        moves.push(HurwitzMove::Braid(i));
    }
    for j in 0..q {
        moves.push(HurwitzMove::TwistRight(j));
        moves.push(HurwitzMove::TwistLeft(j));
    }
    for j in 0..q.saturating_sub(1) {
        moves.push(HurwitzMove::HandleSwap(j));
        moves.push(HurwitzMove::HandleMix(j));
    }
    if q > 0 && r > 0 {
        moves.push(HurwitzMove::PushB);
        moves.push(HurwitzMove::PushA);
    }
    for k in 0..n_aut {
        moves.push(HurwitzMove::Automorphism(k));
    }
    moves
}

pub fn apply_move(
    g: &FiniteGroup,
    q: usize,
    entries: &[u32],
    mv: HurwitzMove,
    auts: &[GroupAutomorphism],
) -> Vec<u32> {
    let mut e: Vec<usize> = entries.iter().map(|&x| x as usize).collect();
    let mul = |a: usize, b: usize| g.mul(a, b);
    let inv = |a: usize| g.inv(a);
    match mv {
        HurwitzMove::Braid(i) => {
            let k = 2 * q + i;
            let (a, b) = (e[k], e[k + 1]);
            e[k] = g.conj(a, b);
            e[k + 1] = a;
        }
        HurwitzMove::TwistRight(j) => {
            e[2 * j + 1] = mul(e[2 * j + 1], e[2 * j]);
        }
        HurwitzMove::TwistLeft(j) => {
            e[2 * j] = mul(e[2 * j], e[2 * j + 1]);
        }
        HurwitzMove::HandleSwap(j) => {
            let (d1, e1, d2, e2) = (e[2 * j], e[2 * j + 1], e[2 * j + 2], e[2 * j + 3]);
            let c = g.commutator(d1, e1);
            e[2 * j] = g.conj(c, d2);
            e[2 * j + 1] = g.conj(c, e2);
            e[2 * j + 2] = d1;
            e[2 * j + 3] = e1;
        }
        HurwitzMove::HandleMix(j) => {
            let (a1, b1, a2, b2) = (e[2 * j], e[2 * j + 1], e[2 * j + 2], e[2 * j + 3]);
            e[2 * j] = inv(b1);
            e[2 * j + 1] = mul(mul(inv(b2), a1), b1);
            e[2 * j + 2] = mul(mul(inv(b2), inv(b1)), a2);
            e[2 * j + 3] = b2;
            let w = mul(inv(b1), inv(b2));
            for x in e.iter_mut().skip(2 * j + 4) {
                *x = g.conj(w, *x);
            }
        }
        HurwitzMove::PushB => {
            let k = 2 * q - 2;
            let (a, b, c) = (e[k], e[k + 1], e[k + 2]);
            let p = mul(mul(b, inv(a)), inv(b));
            e[k + 1] = mul(mul(p, c), b);
            e[k + 2] = g.conj(p, c);
        }
        HurwitzMove::PushA => {
            let k = 2 * q - 2;
            let (a, b, c) = (e[k], e[k + 1], e[k + 2]);
            let bi = inv(b);
            let ci = inv(c);
            e[k] = mul(mul(a, ci), b);
            e[k + 1] = mul(mul(mul(mul(bi, c), b), ci), b);
            e[k + 2] = mul(mul(bi, c), b);
        }
        HurwitzMove::Automorphism(k) => {
            for x in e.iter_mut() {
                *x = auts[k].apply(*x);
            }
        }
    }
    e.into_iter().map(|x| x as u32).collect()
}

fn pack(entries: &[u32]) -> u128 {
    entries.iter().fold(0u128, |acc, &x| (acc << 8) | x as u128)
}

fn unpack(key: u128, len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| ((key >> (8 * (len - 1 - i))) & 0xff) as u32)
        .collect()
}

fn sorted_orders(g: &FiniteGroup, q: usize, entries: &[u32]) -> bool {
    entries[2 * q..]
        .windows(2)
        .all(|w| g.element_order(w[0] as usize) <= g.element_order(w[1] as usize))
}

/// Every state reachable from `v`, in breadth-first order.
pub fn orbit_of(
    g: &FiniteGroup,
    v: &GeneratingVector,
    auts: &[GroupAutomorphism],
) -> Vec<GeneratingVector> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    explore(g, v, auts, &mut seen, |e| {
        out.push(GeneratingVector::new(
            v.q,
            e[2 * v.q..]
                .iter()
                .map(|&h| g.element_order(h as usize))
                .collect(),
            e.to_vec(),
        ))
    });
    out
}

fn explore(
    g: &FiniteGroup,
    v: &GeneratingVector,
    auts: &[GroupAutomorphism],
    seen: &mut HashSet<u128>,
    mut visit: impl FnMut(&[u32]),
) {
    assert!(
        v.entries.len() <= 16 && g.order() <= 256,
        "vector too long to pack"
    );
    let len = v.entries.len();
    let moves = move_set(v.q, v.periods.len(), auts.len());
    let start = pack(&v.entries);
    if !seen.insert(start) {
        return;
    }
    let mut queue = VecDeque::from([start]);
    while let Some(key) = queue.pop_front() {
        let e = unpack(key, len);
        visit(&e);
        for &mv in &moves {
            let next = pack(&apply_move(g, v.q, &e, mv, auts));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
}

/// One representative per orbit of `vectors` under the move set, chosen as
/// the lexicographically least orbit member whose branch orders are sorted.
pub fn hurwitz_classes(
    g: &FiniteGroup,
    vectors: &[GeneratingVector],
    auts: &[GroupAutomorphism],
) -> Vec<GeneratingVector> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for v in vectors {
        if seen.contains(&pack(&v.entries)) {
            continue;
        }
        let mut best: Option<Vec<u32>> = None;
        explore(g, v, auts, &mut seen, |e| {
            if sorted_orders(g, v.q, e) && best.as_deref().is_none_or(|b| e < b) {
                best = Some(e.to_vec());
            }
        });
        let best = best.expect("orbit contains its starting vector");
        reps.push(GeneratingVector::new(v.q, v.periods.clone(), best));
    }
    reps.sort();
    reps
}

#[cfg(test)]
mod tests {
    use super::super::search::search_vectors;
    use super::super::tests::group;
    use super::*;
    use crate::group::automorphism_group;

    #[test]
    fn moves_preserve_vectors() {
        let cases = [
            (group(4, &["(1,2,3,4)", "(1,3)"]), 1usize, vec![2u32, 2]),
            (group(3, &["(1,2,3)", "(1,2)"]), 1, vec![2, 2]),
            (group(3, &["(1,2,3)", "(1,2)"]), 2, vec![]),
            (group(3, &["(1,2,3)", "(1,2)"]), 2, vec![2, 2]),
            (group(4, &["(1,2,3,4)", "(1,3)"]), 0, vec![2, 2, 2, 2]),
        ];
        for (g, q, p) in cases {
            let auts = automorphism_group(&g).unwrap();
            let vs = search_vectors(&g, q, &p);
            assert!(!vs.is_empty());
            for v in vs.iter().step_by(7) {
                for mv in move_set(q, p.len(), auts.len()) {
                    let e = apply_move(&g, q, &v.entries, mv, &auts);
                    let orders: Vec<u32> = e[2 * q..]
                        .iter()
                        .map(|&h| g.element_order(h as usize))
                        .collect();
                    let mut sorted = orders.clone();
                    sorted.sort_unstable();
                    assert_eq!(sorted, p, "{mv:?}");
                    GeneratingVector::new(q, orders, e)
                        .validate(&g)
                        .unwrap_or_else(|err| panic!("{mv:?} broke {:?}: {err}", v.entries));
                }
            }
        }
    }

    #[test]
    fn genus_two_cyclic_orbits() {
        let c2 = group(2, &["(1,2)"]);
        let auts = automorphism_group(&c2).unwrap();
        assert_eq!(
            hurwitz_classes(&c2, &search_vectors(&c2, 2, &[]), &auts).len(),
            1
        );
        let c3 = group(3, &["(1,2,3)"]);
        let auts = automorphism_group(&c3).unwrap();
        assert_eq!(
            hurwitz_classes(&c3, &search_vectors(&c3, 2, &[]), &auts).len(),
            1
        );
    }

    #[test]
    fn singleton_input() {
        let c2 = group(2, &["(1,2)"]);
        let v = search_vectors(&c2, 0, &[2, 2]);
        assert_eq!(hurwitz_classes(&c2, &v, &[]), v);
    }

    #[test]
    fn representatives_are_orbit_minima() {
        let g = group(4, &["(1,2,3,4)", "(1,3)"]);
        let auts = automorphism_group(&g).unwrap();
        let vs = search_vectors(&g, 1, &[2, 2]);
        for rep in hurwitz_classes(&g, &vs, &auts) {
            let orbit = orbit_of(&g, &rep, &auts);
            assert!(orbit
                .iter()
                .all(|w| w.periods != rep.periods || w.entries >= rep.entries));
        }
    }
}
