use std::collections::HashMap;
use std::ops::ControlFlow;

use rayon::prelude::*;

use super::GeneratingVector;
use crate::group::FiniteGroup;

/// Subgroups are bitmasks, so the search handles groups of order at most 128.
pub const MAX_SEARCH_ORDER: usize = 128;

struct Searcher<'a> {
    g: &'a FiniteGroup,
    q: usize,
    periods: &'a [u32],
    len: usize,
    cands: Vec<Vec<u32>>,
    memo: HashMap<(u128, u32), u128>,
    full: u32,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a FiniteGroup, q: usize, periods: &'a [u32]) -> Self {
        assert!(
            g.order() <= MAX_SEARCH_ORDER,
            "group too large for vector search"
        );
        let len = 2 * q + periods.len();
        let all: Vec<u32> = (0..g.order() as u32).collect();
        let mut cands = vec![all; 2 * q];
        for &m in periods {
            cands.push(
                (0..g.order() as u32)
                    .filter(|&x| g.element_order(x as usize) == m)
                    .collect(),
            );
        }
        Searcher {
            g,
            q,
            periods,
            len,
            cands,
            memo: HashMap::new(),
            full: g.order() as u32,
        }
    }

    /// Positions whose value is chosen freely (the last branch is forced).
    fn free_len(&self) -> usize {
        if self.periods.is_empty() {
            self.len
        } else {
            self.len - 1
        }
    }

    fn grow(&mut self, mask: u128, gens: &[u32], x: u32) -> u128 {
        if mask >> x & 1 == 1 {
            return mask;
        }
        if let Some(&m) = self.memo.get(&(mask, x)) {
            return m;
        }
        let g = self.g;
        let mut all = gens.to_vec();
        all.push(x);
        let mut out: u128 = 1;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let y = queue[head];
            head += 1;
            for &s in &all {
                let z = g.mul(y, s as usize);
                if out >> z & 1 == 0 {
                    out |= 1 << z;
                    queue.push(z);
                }
            }
        }
        self.memo.insert((mask, x), out);
        out
    }

    /// The forced last branch lies in the subgroup already generated, so
    /// once the free positions are used up the mask must be full.
    fn can_still_generate(&self, mask: u128, pos: usize) -> bool {
        pos < self.free_len() || mask.count_ones() == self.full
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<F>(
        &mut self,
        pos: usize,
        entries: &mut Vec<u32>,
        gens: &mut Vec<u32>,
        mask: u128,
        prod: usize,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let g = self.g;
        let full_mask_size = self.full;
        let r = self.periods.len();
        if pos == self.free_len() {
            if r == 0 {
                if prod == 0 && mask.count_ones() == full_mask_size {
                    return visit(entries);
                }
                return ControlFlow::Continue(());
            }
            let h = g.inv(prod);
            if g.element_order(h) != self.periods[r - 1] || mask.count_ones() != full_mask_size {
                return ControlFlow::Continue(());
            }
            entries.push(h as u32);
            let res = visit(entries);
            entries.pop();
            return res;
        }
        let cands = std::mem::take(&mut self.cands[pos]);
        let mut result = ControlFlow::Continue(());
        for &x in &cands {
            let new_mask = self.grow(mask, gens, x);
            if !self.can_still_generate(new_mask, pos + 1) {
                continue;
            }
            let enlarged = new_mask != mask;
            if enlarged {
                gens.push(x);
            }
            let new_prod = if pos < 2 * self.q {
                if pos % 2 == 1 {
                    g.mul(prod, g.commutator(entries[pos - 1] as usize, x as usize))
                } else {
                    prod
                }
            } else {
                g.mul(prod, x as usize)
            };
            entries.push(x);
            let res = self.dfs(pos + 1, entries, gens, new_mask, new_prod, visit);
            entries.pop();
            if enlarged {
                gens.pop();
            }
            if res.is_break() {
                result = res;
                break;
            }
        }
        self.cands[pos] = cands;
        result
    }

    fn run<F>(&mut self, prefix: &[u32], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let mut entries = Vec::with_capacity(self.len);
        let mut gens = Vec::new();
        let mut mask: u128 = 1;
        let mut prod = 0usize;
        for (pos, &x) in prefix.iter().enumerate() {
            let new_mask = self.grow(mask, &gens, x);
            if new_mask != mask {
                gens.push(x);
            }
            mask = new_mask;
            if pos < 2 * self.q {
                if pos % 2 == 1 {
                    prod = self.g.mul(
                        prod,
                        self.g.commutator(entries[pos - 1] as usize, x as usize),
                    );
                }
            } else {
                prod = self.g.mul(prod, x as usize);
            }
            entries.push(x);
        }
        if !self.can_still_generate(mask, prefix.len()) {
            return ControlFlow::Continue(());
        }
        self.dfs(prefix.len(), &mut entries, &mut gens, mask, prod, visit)
    }
}

/// Streams all generating vectors of type `(q; periods)` over `g` in
/// lexicographic order of entries.
pub fn for_each_vector<F>(g: &FiniteGroup, q: usize, periods: &[u32], mut visit: F)
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let mut s = Searcher::new(g, q, periods);
    let _ = s.run(&[], &mut visit);
}

pub fn vector_exists(g: &FiniteGroup, q: usize, periods: &[u32]) -> bool {
    let mut found = false;
    for_each_vector(g, q, periods, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

pub fn search_vectors(g: &FiniteGroup, q: usize, periods: &[u32]) -> Vec<GeneratingVector> {
    search_vectors_filtered(g, q, periods, |_| true)
}

/// All generating vectors accepted by `keep`, in lexicographic order. Work is
/// split across the first entry.
pub fn search_vectors_filtered<K>(
    g: &FiniteGroup,
    q: usize,
    periods: &[u32],
    keep: K,
) -> Vec<GeneratingVector>
where
    K: Fn(&[u32]) -> bool + Sync,
{
    let len = 2 * q + periods.len();
    let free = if periods.is_empty() { len } else { len - 1 };
    let collect = |prefix: &[u32]| -> Vec<Vec<u32>> {
        let mut s = Searcher::new(g, q, periods);
        let mut out = Vec::new();
        let _ = s.run(prefix, &mut |e: &[u32]| {
            if keep(e) {
                out.push(e.to_vec());
            }
            ControlFlow::Continue(())
        });
        out
    };
    let found: Vec<Vec<u32>> = if free == 0 {
        collect(&[])
    } else {
        let first = Searcher::new(g, q, periods).cands[0].clone();
        first
            .par_iter()
            .map(|&x| collect(&[x]))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    found
        .into_iter()
        .map(|entries| GeneratingVector::new(q, periods.to_vec(), entries))
        .collect()
}
