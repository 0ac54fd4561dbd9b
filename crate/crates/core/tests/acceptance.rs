//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use semimix_core::albanese::STRATEGIES;
use semimix_core::catalogue::Catalogue;
use semimix_core::fp::{
    abelianization, cokernel, coset_table_from_action, reidemeister_schreier, Presentation,
};
use semimix_core::genvec::orbit_of;
use semimix_core::group::{automorphism_group, FiniteGroup};
use semimix_core::homology::h1_of_family;
use semimix_core::invariants::{consistency_check, floor_x2, minus_one_curve_bound, SurfaceFamily};
use semimix_core::mixed::{
    build_group, dedup_extensions, extension_pairs, o2_elements, MixedExtension,
};
use semimix_core::pipeline::{classify, recompute_g_alb, ClassificationRun, ClassifyOptions};
use semimix_core::types::{format_periods, SurfaceTarget};

const ROWS: &str = include_str!("data/reference_rows.txt");

type Check = Result<String, String>;

struct RefRow {
    k2: i64,
    g_id: (usize, usize),
    g0_id: (usize, usize),
    g: u64,
    ty: String,
    branch: String,
    h1: String,
    g_alb: Option<u64>,
}

fn id(s: &str) -> (usize, usize) {
    let (a, b) = s.split_once(',').expect("id");
    (a.trim().parse().unwrap(), b.trim().parse().unwrap())
}

fn family_rows(set: &str) -> Vec<RefRow> {
    ROWS.lines()
        .filter(|l| l.starts_with(&format!("{set}|")))
        .map(|l| {
            let c: Vec<&str> = l.split('|').collect();
            RefRow {
                k2: c[1].parse().unwrap(),
                g_id: id(c[2]),
                g0_id: id(c[3]),
                g: c[4].parse().unwrap(),
                ty: c[5].into(),
                branch: c[6].into(),
                h1: c[7].into(),
                g_alb: c[8].parse().ok(),
            }
        })
        .collect()
}

/// `(periods, |G0|, K2)` of the skip rows.
fn skip_rows() -> Vec<(Vec<u32>, u64, i64)> {
    ROWS.lines()
        .filter(|l| l.starts_with("skip|"))
        .map(|l| {
            let c: Vec<&str> = l.split('|').collect();
            let periods = c[2].split(',').map(|x| x.parse().unwrap()).collect();
            (periods, c[3].parse().unwrap(), c[1].parse().unwrap())
        })
        .collect()
}

/// Comparison key; the id of `G` is compared only where the catalogue can
/// identify it, the order always.
fn ref_key(cat: &Catalogue, r: &RefRow, with_alb: bool) -> String {
    let g = if cat.covers(r.g_id.0) {
        format!("{},{}", r.g_id.0, r.g_id.1)
    } else {
        format!("|G|={}", r.g_id.0)
    };
    let alb = if with_alb {
        format!("{:?}", r.g_alb)
    } else {
        String::new()
    };
    format!(
        "K2={} G={} G0={},{} g={} {} B={} H1={} {}",
        r.k2, g, r.g0_id.0, r.g0_id.1, r.g, r.ty, r.branch, r.h1, alb
    )
}

fn family_key(cat: &Catalogue, f: &SurfaceFamily, with_alb: bool) -> String {
    let g = if cat.covers(f.order_g) {
        f.g_label.clone()
    } else {
        format!("|G|={}", f.order_g)
    };
    let alb = if with_alb {
        format!("{:?}", f.g_alb)
    } else {
        String::new()
    };
    format!(
        "K2={} G={} G0={},{} g={} {} B={} H1={} {}",
        f.k2,
        g,
        f.g0.order,
        f.g0.index,
        f.g,
        f.covering.label(),
        f.branch.signature(),
        f.h1.signature(),
        alb
    )
}

fn compare_rows(cat: &Catalogue, fams: &[SurfaceFamily], rows: &[RefRow], with_alb: bool) -> Check {
    let mut got: Vec<String> = fams.iter().map(|f| family_key(cat, f, with_alb)).collect();
    let mut want: Vec<String> = rows.iter().map(|r| ref_key(cat, r, with_alb)).collect();
    got.sort();
    want.sort();
    if got == want {
        return Ok(format!("{} rows match", got.len()));
    }
    let extra: Vec<_> = got.iter().filter(|k| !want.contains(k)).collect();
    let missing: Vec<_> = want.iter().filter(|k| !got.contains(k)).collect();
    Err(format!("unexpected {extra:?}; missing {missing:?}"))
}

fn counts(fams: &[SurfaceFamily]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for f in fams {
        *m.entry(f.k2).or_insert(0) += 1;
    }
    m
}

fn run(cat: &Catalogue, p: u32) -> (ClassificationRun, Duration) {
    let targets: Vec<SurfaceTarget> = (1..=8).map(|k| SurfaceTarget::new(k, p, p)).collect();
    let start = Instant::now();
    let r = classify(&targets, cat, &ClassifyOptions::default()).expect("classification runs");
    (r, start.elapsed())
}

fn within(elapsed: Duration, limit_secs: u64) -> Check {
    if elapsed <= Duration::from_secs(limit_secs) {
        Ok(format!("{:.1}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "took {:.1}s, limit {limit_secs}s",
            elapsed.as_secs_f64()
        ))
    }
}

fn all(parts: Vec<(&str, Check)>) -> Check {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for (name, c) in parts {
        match c {
            Ok(s) => ok.push(format!("{name}: {s}")),
            Err(s) => bad.push(format!("{name}: {s}")),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

fn expect_counts(fams: &[SurfaceFamily], want: &[(i64, usize)]) -> Check {
    let got = counts(fams);
    let want: BTreeMap<i64, usize> = want.iter().copied().collect();
    if got == want {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("per-K2 counts {got:?}, expected {want:?}"))
    }
}

fn criterion_1(cat: &Catalogue, r: &ClassificationRun, t: Duration) -> Check {
    all(vec![
        (
            "count",
            expect_counts(&r.families, &[(8, 1), (7, 1), (6, 3), (4, 1), (2, 3)]),
        ),
        (
            "rows",
            compare_rows(cat, &r.families, &family_rows("q2"), false),
        ),
        ("time", within(t, 10)),
    ])
}

fn criterion_2(cat: &Catalogue, r: &ClassificationRun, t: Duration) -> Check {
    let rows = family_rows("q1");
    let mut strategies = Vec::new();
    for s in STRATEGIES {
        let mut fams = r.families.clone();
        let mut err = None;
        for f in &mut fams {
            match recompute_g_alb(f, s.name()) {
                Ok(g) => f.g_alb = Some(g),
                Err(e) => err = Some(e.to_string()),
            }
        }
        let c = match err {
            Some(e) => Err(e),
            None => compare_rows(cat, &fams, &rows, true),
        };
        strategies.push((s.name(), c));
    }
    all(vec![
        (
            "count",
            expect_counts(&r.families, &[(8, 3), (7, 2), (6, 12), (4, 2), (2, 16)]),
        ),
        ("rows", compare_rows(cat, &r.families, &rows, true)),
        ("strategies", all(strategies)),
        ("time", within(t, 30 * 60)),
    ])
}

fn skip_set(r: &ClassificationRun) -> HashSet<(Vec<u32>, u64, i64, u32)> {
    r.skips
        .iter()
        .map(|s| (s.periods.clone(), s.order_g0, s.target.k2, s.q))
        .collect()
}

fn parse_type(label: &str) -> (u32, Vec<u32>) {
    let inner = label.trim_start_matches('[').trim_end_matches(']');
    let (q, rest) = inner.split_once(';').unwrap();
    let mut periods = Vec::new();
    if rest != "-" {
        for part in rest.split(',') {
            match part.split_once('^') {
                Some((m, k)) => periods.extend(std::iter::repeat_n(
                    m.parse::<u32>().unwrap(),
                    k.parse().unwrap(),
                )),
                None => periods.push(part.parse().unwrap()),
            }
        }
    }
    (q.parse().unwrap(), periods)
}

fn criterion_3(cat: &Catalogue, r: &ClassificationRun, t: Duration) -> Check {
    let rows = family_rows("q0");
    let (covered, other): (Vec<RefRow>, Vec<RefRow>) =
        rows.into_iter().partition(|row| cat.covers(row.g0_id.0));
    let skips = skip_set(r);
    let missing: Vec<String> = other
        .iter()
        .filter(|row| {
            let (q, periods) = parse_type(&row.ty);
            !skips.contains(&(periods, row.g0_id.0 as u64, row.k2, q))
        })
        .map(|row| format!("{} |G0|={} K2={}", row.ty, row.g0_id.0, row.k2))
        .collect();
    let skipped = if missing.is_empty() {
        Ok(format!("{} uncovered rows in the skip list", other.len()))
    } else {
        Err(format!("not in skip list: {missing:?}"))
    };
    all(vec![
        ("count", expect_counts(&r.families, &[(8, 1), (6, 5)])),
        ("rows", compare_rows(cat, &r.families, &covered, false)),
        ("skips", skipped),
        ("time", within(t, 60 * 60)),
    ])
}

fn criterion_4(r: &ClassificationRun) -> Check {
    let skips = skip_set(r);
    let rows = skip_rows();
    let missing: Vec<String> = rows
        .iter()
        .filter(|(p, o, k)| !skips.contains(&(p.clone(), *o, *k, 0)))
        .map(|(p, o, k)| format!("[0;{}] {o} K2={k}", format_periods(p)))
        .collect();
    let uncovered = r.skips.iter().all(|s| !cat_covers_any(s.order_g0));
    match (missing.is_empty(), uncovered) {
        (true, true) => Ok(format!(
            "{} rows contained in {} skip records",
            rows.len(),
            r.skips.len()
        )),
        (false, _) => Err(format!("missing {missing:?}")),
        (_, false) => Err("a skip record has a covered order".into()),
    }
}

fn cat_covers_any(order: u64) -> bool {
    Catalogue::builtin().covers(order as usize)
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let bound: Vec<(i64, u32)> = (1..=8)
        .map(|k| (k, minus_one_curve_bound(k).unwrap()))
        .collect();
    let x2: Vec<(i64, i64)> = (1..=8).map(|k| (k, floor_x2(k).unwrap())).collect();
    let want_bound = vec![
        (1, 3),
        (2, 2),
        (3, 2),
        (4, 1),
        (5, 1),
        (6, 0),
        (7, 0),
        (8, 0),
    ];
    let want_x2 = vec![
        (1, 17),
        (2, 13),
        (3, 10),
        (4, 8),
        (5, 6),
        (6, 4),
        (7, 2),
        (8, 0),
    ];
    all(vec![
        (
            "(-1)-bound",
            if bound == want_bound {
                Ok("ok".into())
            } else {
                Err(format!("{bound:?}"))
            },
        ),
        (
            "floor x2",
            if x2 == want_x2 {
                Ok("ok".into())
            } else {
                Err(format!("{x2:?}"))
            },
        ),
        ("time", within(start.elapsed(), 1)),
    ])
}

fn class_identities(cat: &Catalogue) -> Check {
    for e in cat.entries() {
        let g = e.build().map_err(|e| e.to_string())?;
        let total: usize = g.conjugacy_classes().iter().map(|c| c.len()).sum();
        if total != g.order() {
            return Err(format!(
                "{},{}: class sizes sum to {total}",
                e.order, e.index
            ));
        }
        for x in 0..g.order() {
            if g.centralizer_order(x) * g.class_size(x) != g.order() {
                return Err(format!(
                    "{},{}: centralizer identity fails at {x}",
                    e.order, e.index
                ));
            }
        }
    }
    Ok(format!("{} groups", cat.len()))
}

fn random_unimodular(rng: &mut StdRng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                let src = u[j].clone();
                u[i].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
            }
            1 => u.swap(i, j),
            _ => u[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    u
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = b[0].len();
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

fn snf_invariance() -> Check {
    let mut rng = StdRng::seed_from_u64(11);
    let mut trials = 0;
    for rows in 1..=12 {
        for cols in 1..=12 {
            for _ in 0..100 {
                let a: Vec<Vec<i64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect())
                    .collect();
                let b = matmul(
                    &matmul(&random_unimodular(&mut rng, rows), &a),
                    &random_unimodular(&mut rng, cols),
                );
                let (x, y) = (cokernel(cols, &a), cokernel(cols, &b));
                if x.is_err() || x != y {
                    return Err(format!("{a:?}: {x:?} vs {y:?}"));
                }
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} trials"))
}

fn nielsen_schreier() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let mut done = 0;
    while done < 50 {
        let r = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=12);
        let actions: Vec<Vec<u32>> = (0..r)
            .map(|_| {
                let mut p: Vec<u32> = (0..n as u32).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let free = Presentation::free(r);
        let Ok(table) = coset_table_from_action(&free, n, actions) else {
            continue;
        };
        let Ok((sub, _)) = reidemeister_schreier(&free, &table) else {
            continue; // not transitive
        };
        let rank = n * (r - 1) + 1;
        let ab = abelianization(&sub).map_err(|e| e.to_string())?;
        if sub.ngens != rank || ab.rank != rank || !ab.torsion.is_empty() {
            return Err(format!(
                "r={r} n={n}: {} generators, abelianization {ab}",
                sub.ngens
            ));
        }
        done += 1;
    }
    Ok(format!("{done} coset tables"))
}

/// Associativity of every extension class and the order-2 characterization
/// of `O₂`, over the groups of the emitted families and all groups of order
/// at most 16.
fn extensions_check(cat: &Catalogue, fams: &[&SurfaceFamily]) -> Check {
    let mut groups: BTreeSet<(usize, usize)> =
        fams.iter().map(|f| (f.g0.order, f.g0.index)).collect();
    for e in cat.entries().filter(|e| e.order <= 16) {
        groups.insert((e.order, e.index));
    }
    let mut built = 0;
    for (o, i) in groups {
        let g0 = cat.get(o, i).unwrap().build().map_err(|e| e.to_string())?;
        let auts = automorphism_group(&g0).map_err(|e| e.to_string())?;
        let pairs = extension_pairs(&g0, &auts);
        for ext in dedup_extensions(&g0, &pairs, &auts) {
            check_extension(&g0, &ext).map_err(|e| format!("{o},{i}: {e}"))?;
            built += 1;
        }
    }
    for f in fams {
        let g0 = f.g0.build().map_err(|e| e.to_string())?;
        check_extension(&g0, &f.extension)?;
        built += 1;
    }
    Ok(format!("{built} extensions"))
}

fn check_extension(g0: &FiniteGroup, ext: &MixedExtension) -> Result<(), String> {
    let mg = build_group(g0, ext).map_err(|e| e.to_string())?;
    let g = &mg.group;
    let m = g.order();
    for x in 0..m {
        for y in 0..m {
            let xy = g.mul(x, y);
            for z in 0..m {
                if g.mul(xy, z) != g.mul(x, g.mul(y, z)) {
                    return Err(format!("not associative at ({x},{y},{z})"));
                }
            }
        }
    }
    let n = g0.order();
    for a in 0..n {
        let sq = g.mul(mg.element(a, true), mg.element(a, true));
        if sq != g0.mul(g0.mul(a, ext.phi.apply(a)), ext.tau) {
            return Err(format!("square of ({a},1) disagrees"));
        }
    }
    let direct: Vec<usize> = (n..m).filter(|&x| g.mul(x, x) == 0).collect();
    if direct != o2_elements(g0, ext) {
        return Err("O2 differs from the table scan".into());
    }
    Ok(())
}

fn family_checks(fams: &[&SurfaceFamily]) -> Check {
    for f in fams {
        if let Err(v) = consistency_check(f) {
            return Err(format!("{}: {v:?}", f.g_label));
        }
        if f.h1.rank != 2 * f.q as usize {
            return Err(format!("{}: H1 = {}", f.g_label, f.h1));
        }
    }
    Ok(format!("{} families", fams.len()))
}

fn hurwitz_invariance(fams: &[&SurfaceFamily]) -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let mut pairs = 0;
    while pairs < 10 {
        let f = fams[rng.gen_range(0..fams.len())];
        let g0 = f.g0.build().map_err(|e| e.to_string())?;
        let orbit = orbit_of(&g0, &f.vector, &[]);
        let w = &orbit[rng.gen_range(0..orbit.len())];
        let o2 = o2_elements(&g0, &f.extension);
        let a = h1_of_family(&g0, &f.vector, &f.extension, &o2).map_err(|e| e.to_string())?;
        let b = h1_of_family(&g0, w, &f.extension, &o2).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{}: {a} vs {b}", f.g_label));
        }
        pairs += 1;
    }
    Ok(format!("{pairs} orbit pairs"))
}

fn criterion_6(cat: &Catalogue, fams: &[&SurfaceFamily]) -> Check {
    all(vec![
        ("classes", class_identities(cat)),
        ("SNF", snf_invariance()),
        ("Nielsen-Schreier", nielsen_schreier()),
        ("extensions", extensions_check(cat, fams)),
        ("families", family_checks(fams)),
        ("Hurwitz", hurwitz_invariance(fams)),
    ])
}

fn criterion_7(r3: &ClassificationRun, r4: &ClassificationRun, t: Duration) -> Check {
    all(vec![
        ("pg=q=3", expect_counts(&r3.families, &[(6, 1)])),
        ("pg=q=4", expect_counts(&r4.families, &[])),
        ("time", within(t, 5 * 60)),
    ])
}

#[test]
fn acceptance() {
    let cat = Catalogue::builtin();
    let runs: Vec<(ClassificationRun, Duration)> = (0..=4).map(|p| run(&cat, p)).collect();
    let fams: Vec<&SurfaceFamily> = runs.iter().flat_map(|(r, _)| &r.families).collect();
    let results = [
        (
            "pg=q=2 reference rows",
            criterion_1(&cat, &runs[2].0, runs[2].1),
        ),
        (
            "pg=q=1 reference rows and g_alb",
            criterion_2(&cat, &runs[1].0, runs[1].1),
        ),
        (
            "pg=q=0 reference rows at catalogue coverage",
            criterion_3(&cat, &runs[0].0, runs[0].1),
        ),
        ("pg=q=0 skip containment", criterion_4(&runs[0].0)),
        ("minimality bounds", criterion_5()),
        ("property suites", criterion_6(&cat, &fams)),
        (
            "pg=q in {3,4}",
            criterion_7(&runs[3].0, &runs[4].0, runs[3].1 + runs[4].1),
        ),
    ];
    let mut failed = 0;
    for (i, (title, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS  {title}  [{detail}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}  [{detail}]", i + 1)
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
