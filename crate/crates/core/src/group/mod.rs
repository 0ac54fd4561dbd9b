//! Finite groups stored as dense multiplication tables.

mod automorphism;
mod isomorphism;
pub mod perm;

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use automorphism::{
    automorphism_closure, automorphism_generators, automorphism_group, automorphism_group_capped,
    automorphisms_limited, for_each_automorphism, minimal_generating_set, GroupAutomorphism,
    DEFAULT_AUTOMORPHISM_CAP,
};
pub use isomorphism::is_isomorphic;
pub use perm::Perm;

/// Default bound on the number of elements produced by a permutation closure.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Largest order for which a full multiplication table is materialized.
pub const MAX_TABLE_ORDER: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group too large: more than {cap} elements")]
    TooLarge { cap: usize },
    #[error("point {point} outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("malformed permutation `{0}`")]
    Parse(String),
    #[error("generator {index} is not a permutation of degree {degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("automorphism search too large: order {order} exceeds cap {cap}")]
    AutomorphismSearchTooLarge { order: usize, cap: usize },
    #[error("more than {limit} automorphisms")]
    TooManyAutomorphisms { limit: usize },
}

/// A finite group on the element indices `0..order`, with `0` the identity.
///
/// All derived data (inverses, element orders, conjugacy classes) is computed
/// once at construction; the value is immutable afterwards.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    elem_order: Vec<u32>,
    labels: Vec<String>,
    generators: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

/// Isomorphism-invariant summary used for labels and fast rejection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: usize,
    /// Invariant factors of the abelianization.
    pub abelian_invariants: Vec<u64>,
    /// `(element order, count)` pairs in increasing order.
    pub order_histogram: Vec<(u32, usize)>,
    pub center_order: usize,
    pub derived_order: usize,
}

impl fmt::Display for GroupFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ab: Vec<String> = self
            .abelian_invariants
            .iter()
            .map(|d| d.to_string())
            .collect();
        write!(
            f,
            "order {} ab [{}] Z {} G' {}",
            self.order,
            ab.join(","),
            self.center_order,
            self.derived_order
        )
    }
}

/// Closes `gens` under composition and returns the resulting group.
///
/// Elements are ordered breadth first from the identity, trying generators in
/// the given order, so the indexing is reproducible.
pub fn group_from_permutations(degree: usize, gens: &[Perm]) -> Result<FiniteGroup, GroupError> {
    group_from_permutations_capped(degree, gens, DEFAULT_ELEMENT_CAP)
}

pub fn group_from_permutations_capped(
    degree: usize,
    gens: &[Perm],
    cap: usize,
) -> Result<FiniteGroup, GroupError> {
    for (index, g) in gens.iter().enumerate() {
        if g.len() != degree || !perm::is_permutation(g) {
            return Err(GroupError::NotAPermutation { index, degree });
        }
    }
    let mut elements: Vec<Perm> = vec![perm::identity(degree)];
    let mut index: HashMap<Perm, u32> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    // parent[i] = (j, k) with element i = element j * gens[k]
    let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
    let mut right: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (k, g) in gens.iter().enumerate() {
            let y = perm::compose(&elements[head], g);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len() as u32;
                    if elements.len() >= cap {
                        return Err(GroupError::TooLarge { cap });
                    }
                    index.insert(y.clone(), id);
                    elements.push(y);
                    parent.push((head as u32, k as u32));
                    id
                }
            };
            right.push(id);
        }
        head += 1;
    }
    let n = elements.len();
    if n > MAX_TABLE_ORDER {
        return Err(GroupError::TooLarge {
            cap: MAX_TABLE_ORDER,
        });
    }
    let ngens = gens.len();
    // row i: i * j = (i * parent(j)) * gen
    let mut table = vec![0u32; n * n];
    for i in 0..n {
        table[i * n] = i as u32;
        for j in 1..n {
            let (p, k) = parent[j];
            let ip = table[i * n + p as usize] as usize;
            table[i * n + j] = right[ip * ngens + k as usize];
        }
    }
    let labels = elements.iter().map(|p| perm::format_cycles(p)).collect();
    let generators = gens
        .iter()
        .map(|g| index[g] as usize)
        .filter(|&g| g != 0)
        .collect();
    Ok(FiniteGroup::assemble(n, table, labels, generators))
}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking the group axioms.
    ///
    /// Element `0` must be the identity and `generators` must generate.
    pub fn from_table(
        table: Vec<u32>,
        labels: Vec<String>,
        generators: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 || table.len() != n * n {
            return Err(GroupError::InvalidTable(
                "table size does not match labels".into(),
            ));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(GroupError::InvalidTable(
                    "element 0 is not the identity".into(),
                ));
            }
        }
        for a in 0..n {
            let mut row = FixedBitSet::with_capacity(n);
            for b in 0..n {
                row.insert(table[a * n + b] as usize);
            }
            if row.count_ones(..) != n {
                return Err(GroupError::InvalidTable(format!(
                    "row {a} is not a permutation"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let g = Self::assemble(n, table, labels, generators);
        if g.generators.iter().any(|&x| x >= n) || g.closure(&g.generators).len() != n {
            return Err(GroupError::InvalidTable(
                "generators do not generate".into(),
            ));
        }
        Ok(g)
    }

    fn assemble(n: usize, table: Vec<u32>, labels: Vec<String>, generators: Vec<usize>) -> Self {
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        let mut elem_order = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            elem_order[a] = k;
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = Vec::new();
            for g in 0..n {
                let gx = table[g * n + x] as usize;
                let c = table[gx * n + inverse[g] as usize] as usize;
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        FiniteGroup {
            order: n,
            table,
            inverse,
            elem_order,
            labels,
            generators,
            classes,
            class_of,
        }
    }

    pub fn trivial() -> Self {
        Self::assemble(1, vec![0], vec!["()".into()], Vec::new())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let m = self.elem_order[a] as i64;
        let e = k.rem_euclid(m);
        let mut x = 0;
        for _ in 0..e {
            x = self.mul(x, a);
        }
        x
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(self.mul(b, a)))
    }

    pub fn product(&self, elems: &[usize]) -> usize {
        elems.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    #[inline]
    pub fn element_order(&self, a: usize) -> u32 {
        self.elem_order[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_size(&self, a: usize) -> usize {
        self.classes[self.class_of[a]].len()
    }

    pub fn centralizer_order(&self, a: usize) -> usize {
        self.order / self.class_size(a)
    }

    pub fn center_order(&self) -> usize {
        self.classes.iter().filter(|c| c.len() == 1).count()
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn closure_mask(&self, gens: &[usize]) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.order);
        mask.insert(0);
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !mask.contains(y) {
                    mask.insert(y);
                    queue.push(y);
                }
            }
        }
        mask
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        self.closure_mask(gens).ones().collect()
    }

    pub fn generates(&self, elems: &[usize]) -> bool {
        self.closure_mask(elems).count_ones(..) == self.order
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = FixedBitSet::with_capacity(self.order);
        for a in 0..self.order {
            for b in 0..self.order {
                comms.insert(self.commutator(a, b));
            }
        }
        let gens: Vec<usize> = comms.ones().collect();
        self.closure(&gens)
    }

    /// Invariant factors `d1 | d2 | ...` of `G/G'`, each at least 2.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let derived = self.closure_mask(&self.derived_subgroup());
        let dsize = derived.count_ones(..);
        let q = (self.order / dsize) as u64;
        let mut primary: Vec<u64> = Vec::new();
        for p in prime_factors(q) {
            // c_k = #{x : x^(p^k) in G'} / |G'| = p^(sum_i min(k, e_i))
            let mut prev_log = 0u32;
            let mut counts_ge: Vec<u32> = Vec::new();
            let mut pk: u64 = 1;
            loop {
                pk *= p;
                let c = (0..self.order)
                    .filter(|&x| derived.contains(self.pow(x, pk as i64)))
                    .count()
                    / dsize;
                let log = ilog(c as u64, p);
                if log == prev_log {
                    break;
                }
                counts_ge.push(log - prev_log);
                prev_log = log;
            }
            // counts_ge[k-1] = #{i : e_i >= k}
            for k in 0..counts_ge.len() {
                let next = counts_ge.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(counts_ge[k] - next) {
                    primary.push(p.pow(k as u32 + 1));
                }
            }
        }
        invariant_factors_from_primary(&primary)
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let mut hist: Vec<(u32, usize)> = Vec::new();
        let mut orders = self.elem_order.clone();
        orders.sort_unstable();
        for o in orders {
            match hist.last_mut() {
                Some((k, c)) if *k == o => *c += 1,
                _ => hist.push((o, 1)),
            }
        }
        GroupFingerprint {
            order: self.order,
            abelian_invariants: self.abelian_invariants(),
            order_histogram: hist,
            center_order: self.center_order(),
            derived_order: self.derived_subgroup().len(),
        }
    }

    /// Element-wise image of `elems` under an index map.
    pub fn apply_map(map: &[u32], elems: &[usize]) -> Vec<usize> {
        elems.iter().map(|&x| map[x] as usize).collect()
    }
}

fn ilog(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Combines prime-power cyclic orders into an invariant-factor chain.
pub fn invariant_factors_from_primary(primary: &[u64]) -> Vec<u64> {
    let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for &q in primary {
        if q < 2 {
            continue;
        }
        let p = prime_factors(q)[0];
        match by_prime.iter_mut().find(|(r, _)| *r == p) {
            Some((_, v)) => v.push(q),
            None => by_prime.push((p, vec![q])),
        }
    }
    let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (_, mut v) in by_prime {
        v.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in v.into_iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out
}
