//! Words, presentations, coset tables, Reidemeister–Schreier rewriting and
//! Smith normal form.

mod coset;
mod presentation;
mod snf;
mod word;

use thiserror::Error;

pub use coset::{coset_table_from_action, reidemeister_schreier, CosetTable, Rewriter};
pub use presentation::{orbifold_presentation, product_presentation, Presentation};
pub use snf::{cokernel, smith_normal_form, AbelianStructure, IntMatrix, SmithForm};
pub use word::{gen_of, letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("action inconsistent with presentation: {0}")]
    InconsistentAction(String),
    #[error("action is not transitive: not a single subgroup")]
    NotTransitive,
    #[error("word is not in subgroup")]
    NotInSubgroup,
    #[error("integer overflow in Smith normal form")]
    Overflow,
}

/// Abelianization: cokernel of the relator exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> Result<AbelianStructure, FpError> {
    cokernel(p.ngens, &p.relation_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelianization_examples() {
        let p = Presentation::new(1, vec![Word::gen(0).pow(2)]);
        assert_eq!(abelianization(&p).unwrap().signature(), "Z2");
        assert_eq!(
            abelianization(&orbifold_presentation(1, &[]))
                .unwrap()
                .signature(),
            "Z^2"
        );
        let t = orbifold_presentation(0, &[2, 2, 2, 2, 2]);
        assert_eq!(abelianization(&t).unwrap().torsion, vec![2, 2, 2, 2]);
        let tt = product_presentation(
            &orbifold_presentation(1, &[]),
            &orbifold_presentation(1, &[]),
        );
        assert_eq!(abelianization(&tt).unwrap().signature(), "Z^4");
    }
}
