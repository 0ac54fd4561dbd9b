//! Integer scalar abstraction shared by the exact linear algebra.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Exact signed integers with overflow-checked arithmetic.
///
/// Fixed-width types report overflow through the checked operations; big
/// integers never do.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

/// Determinant by fraction-free (Bareiss) elimination. `None` on overflow.
pub fn bareiss_determinant<T: Scalar>(rows: &[Vec<T>]) -> Option<T> {
    let n = rows.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(&a[k][k])?;
                let y = a[i][k].checked_mul(&a[k][j])?;
                a[i][j] = x.checked_sub(&y)? / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].checked_mul(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss_determinant(&[vec![2i64, 4], vec![6, 8]]), Some(-8));
        assert_eq!(
            bareiss_determinant(&[vec![0i64, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]),
            Some(-3)
        );
        assert_eq!(bareiss_determinant::<i64>(&[]), Some(1));
        let big: Vec<Vec<BigInt>> = vec![
            vec![BigInt::from(3), BigInt::from(1)],
            vec![BigInt::from(5), BigInt::from(2)],
        ];
        assert_eq!(bareiss_determinant(&big), Some(BigInt::from(1)));
    }

    #[test]
    fn overflow_is_reported() {
        let m = vec![vec![i64::MAX, 2], vec![3, i64::MAX]];
        assert_eq!(bareiss_determinant(&m), None);
    }
}
