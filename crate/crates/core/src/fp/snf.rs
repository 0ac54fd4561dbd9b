//! Smith normal form over exact integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::FpError;
use crate::scalar::Scalar;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Matrix product; `None` on overflow or shape mismatch.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(other.get(k, j))?;
                    let s = out.get(i, j).checked_add(&prod)?;
                    out.set(i, j, s);
                }
            }
        }
        Some(out)
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_k` (units included) and
/// the rank `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub diagonal: Vec<T>,
    pub rank: usize,
}

fn ck<T>(x: Option<T>) -> Result<T, FpError> {
    x.ok_or(FpError::Overflow)
}

/// Smith normal form by unimodular row and column operations.
///
/// Fixed-width scalars fail with [`FpError::Overflow`] instead of wrapping.
pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>) -> Result<SmithForm<T>, FpError> {
    let (nr, nc) = (m.rows, m.cols);
    let mut a: Vec<Vec<T>> = (0..nr).map(|i| m.row(i).to_vec()).collect();
    // drop zero rows early; they never matter
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
    let nr = a.len();
    let mut diag: Vec<T> = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // pivot: smallest absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        'scan: for j in t..nc {
            for (i, row) in a.iter().enumerate().skip(t) {
                let v = &row[j];
                if v.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => v.abs() < a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                    if v.is_one() || (-v.clone()).is_one() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            // clear column t below the pivot
            let mut swap_row: Option<usize> = None;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    let (head, tail) = a.split_at_mut(i);
                    let (prow, row) = (&head[t], &mut tail[0]);
                    for j in t..nc {
                        if prow[j].is_zero() {
                            continue;
                        }
                        let prod = ck(q.checked_mul(&prow[j]))?;
                        row[j] = ck(row[j].checked_sub(&prod))?;
                    }
                }
                if !a[i][t].is_zero() {
                    let better = match swap_row {
                        None => true,
                        Some(s) => a[i][t].abs() < a[s][t].abs(),
                    };
                    if better {
                        swap_row = Some(i);
                    }
                }
            }
            if let Some(s) = swap_row {
                a.swap(t, s);
                continue;
            }
            // column t is clear, so column operations only touch row t
            let mut swap_col: Option<usize> = None;
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let r = a[t][j].mod_floor(&a[t][t]);
                a[t][j] = r;
                if !a[t][j].is_zero() {
                    let better = match swap_col {
                        None => true,
                        Some(s) => a[t][j].abs() < a[t][s].abs(),
                    };
                    if better {
                        swap_col = Some(j);
                    }
                }
            }
            match swap_col {
                Some(s) => {
                    for row in a.iter_mut() {
                        row.swap(t, s);
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    normalize_chain(&mut diag)?;
    let rank = diag.len();
    Ok(SmithForm {
        diagonal: diag,
        rank,
    })
}

/// Turns any diagonal into a divisibility chain with the same cokernel.
fn normalize_chain<T: Scalar>(d: &mut [T]) -> Result<(), FpError> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g == d[i] {
                continue;
            }
            let l = ck((d[i].clone() / g.clone()).checked_mul(&d[j]))?;
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    Ok(())
}

/// Finitely generated abelian group `Z^rank x Z/d_1 x ... x Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianStructure {
    pub rank: usize,
    /// Invariant factors, each at least 2, in a divisibility chain.
    pub torsion: Vec<u64>,
}

impl AbelianStructure {
    pub fn trivial() -> Self {
        AbelianStructure {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Direct sum, canonicalized.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut d: Vec<i64> = self
            .torsion
            .iter()
            .chain(&other.torsion)
            .map(|&x| x as i64)
            .collect();
        normalize_chain(&mut d).expect("torsion product fits");
        AbelianStructure {
            rank: self.rank + other.rank,
            torsion: d.into_iter().filter(|&x| x > 1).map(|x| x as u64).collect(),
        }
    }

    /// Short form such as `Z2^3 x Z8` or `Z4 x Z^2`; the trivial group is `0`.
    pub fn signature(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let mut k = 1;
            while i + k < self.torsion.len() && self.torsion[i + k] == d {
                k += 1;
            }
            parts.push(if k == 1 {
                format!("Z{d}")
            } else {
                format!("Z{d}^{k}")
            });
            i += k;
        }
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" x ")
        }
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signature())
    }
}

/// Cokernel of the integer row space of `rows` inside `Z^cols`.
///
/// Tries 64-bit arithmetic first and redoes the computation with big
/// integers on overflow.
pub fn cokernel(cols: usize, rows: &[Vec<i64>]) -> Result<AbelianStructure, FpError> {
    let m = IntMatrix::from_rows(cols, rows);
    let diag: Vec<BigInt> = match smith_normal_form(&m) {
        Ok(s) => s.diagonal.into_iter().map(BigInt::from).collect(),
        Err(FpError::Overflow) => smith_normal_form(&m.map(|x| BigInt::from(*x)))?.diagonal,
        Err(e) => return Err(e),
    };
    let rank = cols - diag.len();
    let torsion = diag
        .iter()
        .filter(|d| **d > BigInt::from(1))
        .map(|d| d.to_u64().ok_or(FpError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AbelianStructure { rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> Vec<i64> {
        let cols = rows.first().map_or(0, |r| r.len());
        smith_normal_form(&IntMatrix::from_rows(cols, rows))
            .unwrap()
            .diagonal
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&[vec![2, 0], vec![0, 0]]), vec![2]);
        assert_eq!(snf(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(
            snf(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            vec![1, 1, 1]
        );
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[vec![4, 6]]), vec![2]);
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel(2, &[vec![2, 0], vec![0, 0]]).unwrap();
        assert_eq!(
            c,
            AbelianStructure {
                rank: 1,
                torsion: vec![2]
            }
        );
        assert_eq!(c.signature(), "Z2 x Z");
        assert_eq!(cokernel(0, &[]).unwrap().signature(), "0");
    }

    #[test]
    fn overflow_detected_then_big_fallback() {
        let big = i64::MAX / 2;
        let m = IntMatrix::from_rows(2, &[vec![big, big - 1], vec![big - 1, big - 3]]);
        let mb = m.map(|x| BigInt::from(*x));
        let d = smith_normal_form(&mb).unwrap();
        assert_eq!(d.rank, 2);
        assert!(cokernel(2, &[vec![big, big - 1], vec![big - 1, big - 3]]).is_ok());
    }

    #[test]
    fn signatures() {
        let a = AbelianStructure {
            rank: 0,
            torsion: vec![2, 2, 2, 8],
        };
        assert_eq!(a.signature(), "Z2^3 x Z8");
        let b = AbelianStructure {
            rank: 4,
            torsion: vec![],
        };
        assert_eq!(b.signature(), "Z^4");
        let s = a.direct_sum(&AbelianStructure {
            rank: 1,
            torsion: vec![3],
        });
        assert_eq!(s.torsion, vec![2, 2, 2, 24]);
        assert_eq!(s.rank, 1);
    }
}
