//! Generating vectors of a prescribed type, their stabilizer sets, and orbit
//! reduction under Hurwitz moves and automorphisms.

mod hurwitz;
mod search;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteGroup;

pub use hurwitz::{apply_move, hurwitz_classes, move_set, orbit_of, HurwitzMove};
pub use search::{
    for_each_vector, search_vectors, search_vectors_filtered, vector_exists, MAX_SEARCH_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VectorError {
    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },
    #[error("entry {index} out of range")]
    OutOfRange { index: usize },
    #[error("branch entry {index} has order {actual}, expected {expected}")]
    WrongOrder {
        index: usize,
        expected: u32,
        actual: u32,
    },
    #[error("product relation fails")]
    Relation,
    #[error("entries do not generate the group")]
    NotGenerating,
}

/// `(d_1, e_1, ..., d_q, e_q; h_1, ..., h_r)` stored flat in `entries`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratingVector {
    pub q: usize,
    pub periods: Vec<u32>,
    pub entries: Vec<u32>,
}

impl GeneratingVector {
    pub fn new(q: usize, periods: Vec<u32>, entries: Vec<u32>) -> Self {
        GeneratingVector {
            q,
            periods,
            entries,
        }
    }

    pub fn handles(&self) -> &[u32] {
        &self.entries[..2 * self.q]
    }

    pub fn branches(&self) -> &[u32] {
        &self.entries[2 * self.q..]
    }

    pub fn elements(&self) -> Vec<usize> {
        self.entries.iter().map(|&x| x as usize).collect()
    }

    /// `[d_1,e_1]...[d_q,e_q] h_1...h_r`.
    pub fn relation_product(&self, g: &FiniteGroup) -> usize {
        relation_product(g, self.q, &self.entries)
    }

    pub fn validate(&self, g: &FiniteGroup) -> Result<(), VectorError> {
        let expected = 2 * self.q + self.periods.len();
        if self.entries.len() != expected {
            return Err(VectorError::Length {
                expected,
                found: self.entries.len(),
            });
        }
        if let Some(index) = self.entries.iter().position(|&x| x as usize >= g.order()) {
            return Err(VectorError::OutOfRange { index });
        }
        for (i, (&h, &m)) in self.branches().iter().zip(&self.periods).enumerate() {
            let actual = g.element_order(h as usize);
            if actual != m {
                return Err(VectorError::WrongOrder {
                    index: i,
                    expected: m,
                    actual,
                });
            }
        }
        if self.relation_product(g) != 0 {
            return Err(VectorError::Relation);
        }
        if !g.generates(&self.elements()) {
            return Err(VectorError::NotGenerating);
        }
        Ok(())
    }

    /// Entry-wise image under an index map (an automorphism).
    pub fn apply_map(&self, map: &[u32]) -> Self {
        GeneratingVector {
            q: self.q,
            periods: self.periods.clone(),
            entries: self.entries.iter().map(|&x| map[x as usize]).collect(),
        }
    }
}

pub(crate) fn relation_product(g: &FiniteGroup, q: usize, entries: &[u32]) -> usize {
    let mut p = 0;
    for i in 0..q {
        p = g.mul(
            p,
            g.commutator(entries[2 * i] as usize, entries[2 * i + 1] as usize),
        );
    }
    for &h in &entries[2 * q..] {
        p = g.mul(p, h as usize);
    }
    p
}

/// Union of all conjugates of all powers of the branch entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSet {
    members: FixedBitSet,
}

impl StabilizerSet {
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.members
    }
}

pub fn stabilizer_set(g: &FiniteGroup, v: &GeneratingVector) -> StabilizerSet {
    stabilizer_set_of(g, v.branches())
}

pub(crate) fn stabilizer_set_of(g: &FiniteGroup, branches: &[u32]) -> StabilizerSet {
    let mut members = FixedBitSet::with_capacity(g.order());
    members.insert(0);
    for &h in branches {
        let h = h as usize;
        let mut x = h;
        while x != 0 {
            if !members.contains(x) {
                for &c in &g.conjugacy_classes()[g.class_of(x)] {
                    members.insert(c);
                }
            }
            x = g.mul(x, h);
        }
    }
    StabilizerSet { members }
}
