use std::fmt;

use serde::{Deserialize, Serialize};

/// A word in a free group. Letter `k+1` is generator `k`, `-(k+1)` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<i32>);

#[inline]
pub fn letter(gen: usize, inverse: bool) -> i32 {
    let l = gen as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

/// Generator index of a letter.
#[inline]
pub fn gen_of(l: i32) -> usize {
    (l.unsigned_abs() - 1) as usize
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(k: usize) -> Self {
        Word(vec![letter(k, false)])
    }

    pub fn from_letters(letters: &[i32]) -> Self {
        let mut w = Word(Vec::with_capacity(letters.len()));
        for &l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter, cancelling against the last one when possible.
    pub fn push(&mut self, l: i32) {
        debug_assert!(l != 0);
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn append(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        Word::from_letters(&self.0)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1])
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|&l| gen_of(l)).max()
    }

    /// Renames generators: generator `k` becomes `f(k)`.
    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::from_letters(
            &self
                .0
                .iter()
                .map(|&l| letter(f(gen_of(l)), l < 0))
                .collect::<Vec<_>>(),
        )
    }

    /// Substitutes a word for every generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut w = Word::empty();
        for &l in &self.0 {
            let img = &images[gen_of(l)];
            if l > 0 {
                w.append(img);
            } else {
                w.append(&img.inverse());
            }
        }
        w
    }

    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for &l in &self.0 {
            v[gen_of(l)] += l.signum() as i64;
        }
        v
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| {
                let n = &names[gen_of(l)];
                if l > 0 {
                    n.clone()
                } else {
                    format!("{n}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_gen().unwrap_or(0))
            .map(|k| format!("x{k}"))
            .collect();
        f.write_str(&self.display_with(&names))
    }
}
