//! Admissible covering types `(q; m_1, ..., m_r)` for given surface invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceTarget {
    pub k2: i64,
    pub pg: u32,
    pub q: u32,
}

impl SurfaceTarget {
    pub fn new(k2: i64, pg: u32, q: u32) -> Self {
        SurfaceTarget { k2, pg, q }
    }

    pub fn chi(&self) -> i64 {
        1 - self.q as i64 + self.pg as i64
    }

    /// `10 chi - K^2`, the denominator in the group-order formula.
    pub fn excess(&self) -> i64 {
        10 * self.chi() - self.k2
    }

    /// `8 chi - K^2`, which equals the branch-locus invariant delta.
    pub fn delta(&self) -> i64 {
        8 * self.chi() - self.k2
    }

    /// Whether the enumeration has anything to do for this target.
    pub fn is_searchable(&self) -> bool {
        self.chi() >= 1 && self.excess() > 0 && self.delta() >= 0
    }
}

impl fmt::Display for SurfaceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K2={} pg={} q={}", self.k2, self.pg, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoveringType {
    pub target: SurfaceTarget,
    /// Genus of the quotient curve.
    pub q: u32,
    /// Nondecreasing branching orders.
    pub periods: Vec<u32>,
    pub g: u64,
    pub order_g0: u64,
    pub order_g: u64,
    pub n_o2: u64,
    pub theta: Rational,
    pub beta: u64,
}

impl CoveringType {
    /// Label in the usual bracket form, e.g. `[0;2^5]`, `[1;2,2]` or `[2;-]`.
    pub fn label(&self) -> String {
        format!("[{};{}]", self.q, format_periods(&self.periods))
    }
}

/// Compressed period list such as `2^3,4` or `-` when empty.
pub fn format_periods(periods: &[u32]) -> String {
    if periods.is_empty() {
        return "-".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < periods.len() {
        let m = periods[i];
        let k = periods[i..].iter().take_while(|&&x| x == m).count();
        parts.push(if k == 1 {
            m.to_string()
        } else {
            format!("{m}^{k}")
        });
        i += k;
    }
    parts.join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SkipReason {
    OrderNotCovered,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::OrderNotCovered => f.write_str("order not covered"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkipRecord {
    pub target: SurfaceTarget,
    pub q: u32,
    pub periods: Vec<u32>,
    pub g: u64,
    pub order_g0: u64,
    pub reason: SkipReason,
}

/// `(|G^0|, |O_2|, Theta)` for a candidate genus, when both counts are integral.
pub fn derived_counts(g: u64, target: &SurfaceTarget) -> Option<(u64, u64, Rational)> {
    if g < 2 || target.excess() <= 0 {
        return None;
    }
    let beta = (g - 1) as i64;
    let ex = target.excess();
    if (beta * beta) % ex != 0 || (target.delta() * beta) % ex != 0 {
        return None;
    }
    let order_g0 = beta * beta / ex;
    let n_o2 = target.delta() * beta / ex;
    if n_o2 < 0 || order_g0 < 1 {
        return None;
    }
    let theta = Rational::new(2 * beta, order_g0);
    Some((order_g0 as u64, n_o2 as u64, theta))
}

/// Lower bound on Theta for a quotient of genus `q`.
pub fn theta_min(q: u32) -> Rational {
    match q {
        0 => Rational::new(1, 42),
        1 => Rational::new(1, 2),
        _ => Rational::from_integer(2 * q as i64 - 2),
    }
}

/// Largest genus of `C` worth examining for `target`.
pub fn max_genus(target: &SurfaceTarget) -> u64 {
    let bound = Rational::from_integer(2 * target.excess()) / theta_min(target.q);
    1 + bound.floor().to_integer().max(0) as u64
}

/// Enumerates every type satisfying the numerical constraints, regardless of
/// catalogue coverage. Types with `|G^0| = 1` are dropped.
pub fn enumerate_types(target: &SurfaceTarget) -> Vec<CoveringType> {
    let mut out = Vec::new();
    if !target.is_searchable() {
        return out;
    }
    let q = target.q;
    for g in 2..=max_genus(target) {
        let Some((order_g0, n_o2, theta)) = derived_counts(g, target) else {
            continue;
        };
        let beta = g - 1;
        let target_sum = theta - Rational::from_integer(2 * q as i64 - 2);
        if target_sum < Rational::from_integer(0) {
            continue;
        }
        let r_bound = Rational::new(4 * target.excess(), beta as i64)
            + Rational::from_integer(4 * (1 - q as i64));
        let r_max = r_bound.floor().to_integer().min(
            (target_sum * Rational::from_integer(2))
                .floor()
                .to_integer(),
        );
        if r_max < 0 {
            continue;
        }
        let mut divisors: Vec<u32> = (2..=beta as u32)
            .filter(|m| beta % *m as u64 == 0)
            .collect();
        if n_o2 > 0 {
            divisors.retain(|&m| n_o2 % m as u64 == 0 && m as u64 * n_o2 <= order_g0);
        }
        for r in 0..=r_max as usize {
            let m_bound = period_bound(target, q, r);
            let allowed: Vec<u32> = divisors
                .iter()
                .copied()
                .filter(|&m| Rational::from_integer(m as i64) <= m_bound)
                .collect();
            let mut current = Vec::with_capacity(r);
            collect_periods(&allowed, 0, r, target_sum, &mut current, &mut |periods| {
                out.push(CoveringType {
                    target: *target,
                    q,
                    periods: periods.to_vec(),
                    g,
                    order_g0,
                    order_g: 2 * order_g0,
                    n_o2,
                    theta,
                    beta,
                });
            });
        }
    }
    out
}

/// `(1 + 2(10 chi - K^2)) / max(1/6, (r - 3 + 4q)/2)`.
fn period_bound(target: &SurfaceTarget, q: u32, r: usize) -> Rational {
    let num = Rational::from_integer(1 + 2 * target.excess());
    let den = Rational::new(r as i64 - 3 + 4 * q as i64, 2).max(Rational::new(1, 6));
    num / den
}

fn collect_periods(
    allowed: &[u32],
    start: usize,
    remaining: usize,
    sum: Rational,
    current: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    let zero = Rational::from_integer(0);
    if remaining == 0 {
        if sum == zero {
            emit(current);
        }
        return;
    }
    for i in start..allowed.len() {
        let m = allowed[i];
        let term = Rational::new(m as i64 - 1, m as i64);
        // terms are nondecreasing from here on
        let rest = Rational::from_integer(remaining as i64);
        if term * rest > sum {
            break;
        }
        let largest = Rational::new(
            *allowed.last().unwrap() as i64 - 1,
            *allowed.last().unwrap() as i64,
        );
        if term + largest * Rational::from_integer(remaining as i64 - 1) < sum {
            continue;
        }
        current.push(m);
        collect_periods(allowed, i, remaining - 1, sum - term, current, emit);
        current.pop();
    }
}

/// Splits the admissible types into those whose `|G^0|` is covered and skip
/// records for the rest.
pub fn admissible_types(
    target: &SurfaceTarget,
    covered: impl Fn(u64) -> bool,
) -> (Vec<CoveringType>, Vec<SkipRecord>) {
    let mut types = Vec::new();
    let mut skips = Vec::new();
    for t in enumerate_types(target) {
        if covered(t.order_g0) {
            types.push(t);
        } else {
            skips.push(SkipRecord {
                target: t.target,
                q: t.q,
                periods: t.periods.clone(),
                g: t.g,
                order_g0: t.order_g0,
                reason: SkipReason::OrderNotCovered,
            });
        }
    }
    (types, skips)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeViolation {
    Hurwitz,
    GroupOrder,
    BranchCount,
    PeriodDivisibility(u32),
    TooManyBranchPoints,
    PeriodTooLarge(u32),
    BranchCountBound(u32),
    Unsorted,
}

/// Recomputes every numerical constraint of a type from scratch.
pub fn validate_type(t: &CoveringType) -> Result<(), Vec<TypeViolation>> {
    let mut v = Vec::new();
    let tg = &t.target;
    let beta = t.g as i64 - 1;
    let r = t.periods.len() as i64;
    // Hurwitz: 2g - 2 = |G0| (2q - 2 + sum(1 - 1/m))
    let mut hur = Rational::from_integer(2 * t.q as i64 - 2);
    for &m in &t.periods {
        hur += Rational::new(m as i64 - 1, m as i64);
    }
    if hur * Rational::from_integer(t.order_g0 as i64) != Rational::from_integer(2 * beta)
        || hur != t.theta
    {
        v.push(TypeViolation::Hurwitz);
    }
    let ex = tg.excess();
    if ex <= 0 || (t.order_g0 as i64) * ex != beta * beta || t.order_g != 2 * t.order_g0 {
        v.push(TypeViolation::GroupOrder);
    }
    if ex <= 0 || (t.n_o2 as i64) * ex != tg.delta() * beta {
        v.push(TypeViolation::BranchCount);
    }
    for &m in &t.periods {
        if m < 2 || beta % m as i64 != 0 {
            v.push(TypeViolation::PeriodDivisibility(m));
        }
    }
    if Rational::from_integer(r)
        > Rational::new(4 * ex, beta.max(1)) + Rational::from_integer(4 * (1 - t.q as i64))
    {
        v.push(TypeViolation::TooManyBranchPoints);
    }
    let half = Rational::new(r - 3 + 4 * t.q as i64, 2).max(Rational::new(1, 6));
    for &m in &t.periods {
        if Rational::from_integer(m as i64) * half > Rational::from_integer(1 + 2 * ex) {
            v.push(TypeViolation::PeriodTooLarge(m));
        }
        if t.n_o2 > 0 && (!t.n_o2.is_multiple_of(m as u64) || m as u64 * t.n_o2 > t.order_g0) {
            v.push(TypeViolation::BranchCountBound(m));
        }
    }
    if t.periods.windows(2).any(|w| w[0] > w[1]) {
        v.push(TypeViolation::Unsorted);
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_8_pg2_gives_genus_three() {
        let types = enumerate_types(&SurfaceTarget::new(8, 2, 2));
        assert_eq!(types.len(), 1);
        let t = &types[0];
        assert_eq!(
            (t.q, t.periods.len(), t.g, t.order_g0, t.n_o2),
            (2, 0, 3, 2, 0)
        );
    }

    #[test]
    fn trivial_g0_only_when_base_genus_matches() {
        let types = enumerate_types(&SurfaceTarget::new(6, 3, 3));
        assert_eq!(types.len(), 1);
        let t = &types[0];
        assert_eq!((t.q, t.g, t.order_g0, t.n_o2), (3, 3, 1, 1));
        for k2 in 1..=8 {
            for p in 0..=2 {
                let types = enumerate_types(&SurfaceTarget::new(k2, p, p));
                assert!(types.iter().all(|t| t.order_g0 > 1));
            }
        }
    }

    #[test]
    fn k2_7_pg2() {
        let types = enumerate_types(&SurfaceTarget::new(7, 2, 2));
        assert_eq!(types.len(), 1);
        let t = &types[0];
        assert_eq!((t.q, t.g, t.order_g0, t.n_o2), (2, 4, 3, 1));
        assert!(t.periods.is_empty());
    }

    #[test]
    fn k2_6_pg0_contains_two_to_the_sixth() {
        let types = enumerate_types(&SurfaceTarget::new(6, 0, 0));
        assert!(types
            .iter()
            .any(|t| t.periods == vec![2; 6] && t.g == 9 && t.order_g0 == 16 && t.n_o2 == 4));
    }

    #[test]
    fn k2_7_pg0_skips_large_triangle_group() {
        let (_, skips) = admissible_types(&SurfaceTarget::new(7, 0, 0), |o| o <= 32 || o == 49);
        assert!(skips
            .iter()
            .any(|s| s.periods == vec![2, 3, 7] && s.order_g0 == 21168));
    }

    #[test]
    fn derived_counts_examples() {
        let t = SurfaceTarget::new(6, 2, 2);
        assert_eq!(
            derived_counts(5, &t),
            Some((4, 2, Rational::from_integer(2)))
        );
        let t = SurfaceTarget::new(2, 2, 2);
        assert_eq!(
            derived_counts(9, &t),
            Some((8, 6, Rational::from_integer(2)))
        );
        let t = SurfaceTarget::new(8, 2, 2);
        assert_eq!(derived_counts(2, &t), None);
    }

    #[test]
    fn labels() {
        let t = &enumerate_types(&SurfaceTarget::new(8, 2, 2))[0];
        assert_eq!(t.label(), "[2;-]");
        assert_eq!(format_periods(&[2, 2, 2, 4]), "2^3,4");
    }
}
