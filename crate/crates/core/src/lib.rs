pub mod albanese;
pub mod catalogue;
pub mod fp;
pub mod genvec;
pub mod group;
pub mod homology;
pub mod invariants;
pub mod mixed;
pub mod pipeline;
pub mod scalar;
pub mod types;

/// Exact rationals used for the Hurwitz bookkeeping.
pub type Rational = num_rational::Ratio<i64>;
/// Integer matrix over machine words.
pub type IntMatrix64 = fp::IntMatrix<i64>;
/// Integer matrix over arbitrary-precision integers.
pub type BigIntMatrix = fp::IntMatrix<num_bigint::BigInt>;
