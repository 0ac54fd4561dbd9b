use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;

/// A finitely presented group `<x_0..x_{n-1} | relators>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub ngens: usize,
    pub relators: Vec<Word>,
    pub names: Vec<String>,
}

impl Presentation {
    pub fn new(ngens: usize, relators: Vec<Word>) -> Self {
        let names = (0..ngens).map(|k| format!("x{k}")).collect();
        Self::with_names(names, relators)
    }

    pub fn with_names(names: Vec<String>, relators: Vec<Word>) -> Self {
        let ngens = names.len();
        debug_assert!(relators
            .iter()
            .all(|r| r.max_gen().is_none_or(|g| g < ngens)));
        Presentation {
            ngens,
            relators,
            names,
        }
    }

    pub fn free(ngens: usize) -> Self {
        Self::new(ngens, Vec::new())
    }

    /// Relator exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.ngens))
            .collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display_with(&self.names))
            .collect();
        write!(f, "< {} | {} >", self.names.join(", "), rels.join(", "))
    }
}

/// Orbifold surface group: generators `a_i, b_i` (handles) then `c_j`,
/// relators `c_j^{m_j}` and `[a_1,b_1]...[a_g,b_g] c_1...c_r`.
pub fn orbifold_presentation(g_prime: usize, periods: &[u32]) -> Presentation {
    let mut names = Vec::new();
    for i in 1..=g_prime {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    for j in 1..=periods.len() {
        names.push(format!("c{j}"));
    }
    let mut relators = Vec::new();
    for (j, &m) in periods.iter().enumerate() {
        relators.push(Word::gen(2 * g_prime + j).pow(m as i64));
    }
    let mut long = Word::empty();
    for i in 0..g_prime {
        long.append(&Word::commutator(&Word::gen(2 * i), &Word::gen(2 * i + 1)));
    }
    for j in 0..periods.len() {
        long.append(&Word::gen(2 * g_prime + j));
    }
    if !long.is_empty() {
        relators.push(long);
    }
    Presentation::with_names(names, relators)
}

/// Direct product: disjoint generators, both relator sets and all cross
/// commutators `[p, q]`.
pub fn product_presentation(p: &Presentation, q: &Presentation) -> Presentation {
    let shift = p.ngens;
    let mut names: Vec<String> = p.names.iter().map(|n| format!("{n}'")).collect();
    names.extend(q.names.iter().map(|n| format!("{n}''")));
    let mut relators = p.relators.clone();
    relators.extend(q.relators.iter().map(|r| r.map_gens(|k| k + shift)));
    for i in 0..p.ngens {
        for j in 0..q.ngens {
            relators.push(Word::commutator(&Word::gen(i), &Word::gen(shift + j)));
        }
    }
    Presentation::with_names(names, relators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbifold_shapes() {
        let t = orbifold_presentation(1, &[]);
        assert_eq!((t.ngens, t.relators.len()), (2, 1));
        let t = orbifold_presentation(0, &[2, 2, 2, 2, 2]);
        assert_eq!((t.ngens, t.relators.len()), (5, 6));
        assert_eq!(t.relators[5], Word(vec![1, 2, 3, 4, 5]));
        let t = orbifold_presentation(2, &[]);
        assert_eq!((t.ngens, t.relators.len()), (4, 1));
        assert_eq!(t.relators[0].len(), 8);
    }

    #[test]
    fn product_shapes() {
        let p = orbifold_presentation(0, &[2, 2, 2]);
        let q = orbifold_presentation(0, &[3, 3, 3]);
        let pq = product_presentation(&p, &q);
        assert_eq!(pq.ngens, 6);
        assert_eq!(pq.relators.len(), 8 + 9);
        let t = Presentation::free(0);
        assert_eq!(product_presentation(&t, &t).relators.len(), 0);
        let tt = product_presentation(
            &orbifold_presentation(1, &[]),
            &orbifold_presentation(1, &[]),
        );
        assert_eq!((tt.ngens, tt.relators.len()), (4, 6));
    }
}
