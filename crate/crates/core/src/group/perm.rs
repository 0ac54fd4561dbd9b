//! Permutations on `0..degree`, composed left to right (`i^(pq) = (i^p)^q`).

use super::GroupError;

pub type Perm = Vec<u32>;

pub fn identity(degree: usize) -> Perm {
    (0..degree as u32).collect()
}

/// Product `p*q`: apply `p` first, then `q`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    p.iter().map(|&i| q[i as usize]).collect()
}

pub fn invert(p: &[u32]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j as usize] = i as u32;
    }
    out
}

pub fn is_permutation(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    for &j in p {
        match seen.get_mut(j as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    true
}

/// Parses cycle notation such as `(1,2)(3,4,5)` (1-based points) into a
/// permutation of the given degree. `()` and the empty string are the identity.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm, GroupError> {
    let bad = || GroupError::Parse(s.to_string());
    let mut perm = identity(degree);
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = open.find(')').ok_or_else(bad)?;
        let body = &open[..close];
        rest = open[close + 1..].trim_start();
        if body.trim().is_empty() {
            continue;
        }
        let points = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        for &p in &points {
            if p == 0 || p > degree {
                return Err(GroupError::PointOutOfRange { point: p, degree });
            }
        }
        // a cycle maps each point to the next; the product of disjoint
        // cycles is applied by composing with the current permutation
        let mut cycle = identity(degree);
        for (k, &p) in points.iter().enumerate() {
            let next = points[(k + 1) % points.len()];
            cycle[p - 1] = (next - 1) as u32;
        }
        if !is_permutation(&cycle) {
            return Err(bad());
        }
        perm = compose(&perm, &cycle);
    }
    Ok(perm)
}

/// Cycle notation with 1-based points; the identity prints as `()`.
pub fn format_cycles(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i + 1);
            i = p[i] as usize;
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = parse_cycles("(1,2,3)(4,5)", 5).unwrap();
        assert_eq!(p, vec![1, 2, 0, 4, 3]);
        assert_eq!(format_cycles(&p), "(1,2,3)(4,5)");
        assert_eq!(format_cycles(&identity(3)), "()");
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = parse_cycles("(1,2)", 3).unwrap();
        let b = parse_cycles("(2,3)", 3).unwrap();
        // 1 -> 2 -> 3
        assert_eq!(compose(&a, &b)[0], 2);
        assert_eq!(compose(&a, &invert(&a)), identity(3));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_cycles("(1,4)", 3).is_err());
        assert!(parse_cycles("(1,2", 3).is_err());
    }
}
