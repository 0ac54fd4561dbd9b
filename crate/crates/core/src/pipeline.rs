//! End-to-end classification for given `(K², p_g, q)` and result output.

use std::cmp::Reverse;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::albanese::{albanese_genus, compute_m, strategy_by_name, AlbaneseError};
use crate::catalogue::{Catalogue, CatalogueEntry, CatalogueError};
use crate::fp::{AbelianStructure, FpError};
use crate::genvec::{
    hurwitz_classes, search_vectors_filtered, stabilizer_set_of, vector_exists, MAX_SEARCH_ORDER,
};
use crate::group::{
    automorphism_generators, automorphisms_limited, FiniteGroup, GroupAutomorphism, GroupError,
};
use crate::homology::h1_of_family;
use crate::invariants::{
    canonical_square, consistency_check, euler_number, holomorphic_chi, minus_one_curve_bound,
    GroupRef, InvariantError, MinimalityNote, SurfaceFamily,
};
use crate::mixed::{
    branch_descriptor, build_group, dedup_extensions, disjoint_under, extension_pairs_streamed,
    extension_stabilizer, o2_elements, post_filters, MixedError, MixedExtension,
};
use crate::types::{admissible_types, CoveringType, SkipRecord, SurfaceTarget};

pub const SCHEMA_VERSION: u32 = 1;

/// Above this many automorphisms of `G⁰` the item is reported as an error.
pub const DEFAULT_AUT_LIMIT: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Mixed(#[from] MixedError),
    #[error(transparent)]
    Presentation(#[from] FpError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Albanese(#[from] AlbaneseError),
    #[error("group {order},{index} is too large for the vector search")]
    SearchTooLarge { order: usize, index: usize },
    #[error("family failed consistency checks: {0}")]
    Inconsistent(String),
    #[error("invalid family record: {0}")]
    Record(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub max_order: Option<usize>,
    pub strategy: String,
    pub aut_limit: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Recorded in the run; where the catalogue came from.
    pub catalogue_label: String,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_order: None,
            strategy: crate::albanese::DEFAULT_STRATEGY.to_string(),
            aut_limit: DEFAULT_AUT_LIMIT,
            jobs: None,
            catalogue_label: "builtin".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetNote {
    pub target: SurfaceTarget,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRun {
    pub schema_version: u32,
    pub targets: Vec<SurfaceTarget>,
    pub catalogue: String,
    pub max_order: Option<usize>,
    pub strategy: String,
    pub families: Vec<SurfaceFamily>,
    pub skips: Vec<SkipRecord>,
    pub notes: Vec<TargetNote>,
    /// Wall-clock seconds; excluded from comparisons of output files.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

const LOW_GENUS_NOTE: &str = "no curve of genus >= 2 fits these invariants; the \
quotients with g(C) <= 1 are the projective plane, bielliptic and ruled cases and \
are not enumerated";

/// Known minimality verdicts, keyed by `(p_g, q, K²)`.
const MINIMALITY: &[(u32, u32, i64, Option<bool>, &str)] = &[
    (0, 0, 8, Some(true), "yes"),
    (0, 0, 6, Some(true), "yes"),
    (0, 0, 2, Some(false), "no"),
    (1, 1, 8, Some(true), "yes"),
    (1, 1, 7, Some(true), "yes"),
    (1, 1, 6, Some(true), "yes"),
    (1, 1, 2, Some(false), "no"),
    (2, 2, 8, Some(true), "yes"),
    (2, 2, 7, Some(true), "yes"),
    (2, 2, 6, Some(true), "yes"),
    (2, 2, 4, Some(false), "no, minimal model has K^2 = 5"),
    (2, 2, 2, Some(false), "no, minimal model has K^2 = 4"),
];

pub fn minimality_note(t: &SurfaceTarget) -> Option<MinimalityNote> {
    MINIMALITY
        .iter()
        .find(|(pg, q, k2, _, _)| *pg == t.pg && *q == t.q && *k2 == t.k2)
        .map(|&(_, _, _, minimal, text)| MinimalityNote {
            minimal,
            source: format!("static annotation, not computed: {text}"),
        })
}

fn group_ref(e: &CatalogueEntry) -> GroupRef {
    GroupRef {
        order: e.order,
        index: e.index,
        name: e.name.clone(),
        degree: e.degree,
        generators: e.generator_strings(),
    }
}

fn group_label(cat: &Catalogue, g: &FiniteGroup) -> String {
    match cat.identify(g) {
        Some(e) => format!("{},{}", e.order, e.index),
        None => format!("[{}]", g.fingerprint()),
    }
}

/// All families of one type over one group of the catalogue.
pub fn classify_item(
    cat: &Catalogue,
    ty: &CoveringType,
    entry: &CatalogueEntry,
    opts: &ClassifyOptions,
) -> Result<Vec<SurfaceFamily>, ClassifyError> {
    let g0 = entry.build()?;
    if g0.order() > MAX_SEARCH_ORDER {
        return Err(ClassifyError::SearchTooLarge {
            order: entry.order,
            index: entry.index,
        });
    }
    let q = ty.q as usize;
    if !vector_exists(&g0, q, &ty.periods) {
        return Ok(Vec::new());
    }
    let pairs = extension_pairs_streamed(&g0, |e| e.o2_count(&g0) as u64 == ty.n_o2);
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let auts = automorphisms_limited(&g0, opts.aut_limit)?;
    let strategy = strategy_by_name(&opts.strategy)?;
    let mut vectors = None;
    let mut out = Vec::new();
    for ext in dedup_extensions(&g0, &pairs, &auts) {
        let mg = build_group(&g0, &ext)?;
        let o2 = o2_elements(&g0, &ext);
        // a non-integral genus or self-intersection rules the extension out
        let Ok(branch) = branch_descriptor(&mg, &o2, ty.g) else {
            continue;
        };
        if !post_filters(ty, g0.order(), &o2, &branch) {
            continue;
        }
        let all =
            vectors.get_or_insert_with(|| search_vectors_filtered(&g0, q, &ty.periods, |_| true));
        let free: Vec<_> = all
            .iter()
            .filter(|v| disjoint_under(&stabilizer_set_of(&g0, v.branches()).elements(), &ext.phi))
            .cloned()
            .collect();
        if free.is_empty() {
            continue;
        }
        let stab = extension_stabilizer(&g0, &ext, &auts);
        let gens = automorphism_generators(g0.order(), &stab);
        let g_label = group_label(cat, &mg.group);
        for v in hurwitz_classes(&g0, &free, &gens) {
            let h1 = h1_of_family(&g0, &v, &ext, &o2)?;
            let (g, og, n) = (ty.g, mg.order() as u64, o2.len() as u64);
            let g_alb = if q == 1 {
                let m = compute_m(&g0, &ext, &v, strategy)?;
                Some(albanese_genus(m, g, n, g0.order() as u64)? as u64)
            } else {
                None
            };
            let t = &ty.target;
            let family = SurfaceFamily {
                k2: canonical_square(g, og, n)?,
                pg: t.pg,
                q: t.q,
                chi: holomorphic_chi(g, og, n)?,
                e: euler_number(g, og, n)?,
                g,
                covering: ty.clone(),
                g0: group_ref(entry),
                g_label: g_label.clone(),
                order_g: mg.order(),
                vector: v,
                extension: ext.clone(),
                n_o2: o2.len(),
                branch: branch.clone(),
                h1,
                g_alb,
                minus_one_bound: if t.chi() == 1 && (1..=8).contains(&t.k2) {
                    Some(minus_one_curve_bound(t.k2)?)
                } else {
                    None
                },
                minimality: minimality_note(t),
            };
            if let Err(v) = consistency_check(&family) {
                let msgs: Vec<String> = v.iter().map(|x| x.identity.to_string()).collect();
                return Err(ClassifyError::Inconsistent(msgs.join("; ")));
            }
            out.push(family);
        }
    }
    Ok(out)
}

fn sort_key(f: &SurfaceFamily) -> impl Ord + '_ {
    (
        Reverse(f.k2),
        f.order_g,
        f.g0.order,
        f.g0.index,
        &f.g_label,
        f.covering.label(),
        &f.branch,
        &f.h1,
        &f.vector,
        &f.extension,
    )
}

pub fn classify(
    targets: &[SurfaceTarget],
    cat: &Catalogue,
    opts: &ClassifyOptions,
) -> Result<ClassificationRun, ClassifyError> {
    let start = Instant::now();
    let cat = match opts.max_order {
        Some(m) => cat.truncated(m),
        None => cat.clone(),
    };
    let mut items = Vec::new();
    let mut skips = Vec::new();
    let mut notes = Vec::new();
    for t in targets {
        if !t.is_searchable() {
            notes.push(TargetNote {
                target: *t,
                note: LOW_GENUS_NOTE.into(),
            });
            continue;
        }
        let (types, sk) = admissible_types(t, |o| cat.covers(o as usize));
        skips.extend(sk);
        for ty in types {
            for entry in cat.groups_of_order(ty.order_g0 as usize) {
                items.push((ty.clone(), entry.clone()));
            }
        }
    }
    let work = || -> Vec<Result<Vec<SurfaceFamily>, ClassifyError>> {
        items
            .par_iter()
            .map(|(ty, entry)| classify_item(&cat, ty, entry, opts))
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| ClassifyError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut families = Vec::new();
    for r in results {
        families.extend(r?);
    }
    families.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    skips.sort_by(|a, b| {
        (
            Reverse(a.target.k2),
            a.target.pg,
            a.target.q,
            a.q,
            &a.periods,
            a.order_g0,
        )
            .cmp(&(
                Reverse(b.target.k2),
                b.target.pg,
                b.target.q,
                b.q,
                &b.periods,
                b.order_g0,
            ))
    });
    Ok(ClassificationRun {
        schema_version: SCHEMA_VERSION,
        targets: targets.to_vec(),
        catalogue: opts.catalogue_label.clone(),
        max_order: opts.max_order,
        strategy: opts.strategy.clone(),
        families,
        skips,
        notes,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Rebuilds `G⁰` of a stored family and re-checks its vector and extension.
fn rebuild(f: &SurfaceFamily) -> Result<(FiniteGroup, MixedExtension), ClassifyError> {
    let g0 = f.g0.build()?;
    f.vector
        .validate(&g0)
        .map_err(|e| ClassifyError::Record(e.to_string()))?;
    let phi = GroupAutomorphism::new(&g0, f.extension.phi.map().to_vec())
        .ok_or_else(|| ClassifyError::Record("phi is not an automorphism".into()))?;
    let ext = MixedExtension::new(&g0, phi, f.extension.tau)?;
    Ok((g0, ext))
}

/// `H₁` of a stored family, recomputed from its group, vector and extension.
pub fn recompute_h1(f: &SurfaceFamily) -> Result<AbelianStructure, ClassifyError> {
    let (g0, ext) = rebuild(f)?;
    let o2 = o2_elements(&g0, &ext);
    Ok(h1_of_family(&g0, &f.vector, &ext, &o2)?)
}

/// Albanese fibre genus of a stored `q = 1` family under the named strategy.
pub fn recompute_g_alb(f: &SurfaceFamily, strategy: &str) -> Result<u64, ClassifyError> {
    let (g0, ext) = rebuild(f)?;
    let s = strategy_by_name(strategy)?;
    let m = compute_m(&g0, &ext, &f.vector, s)?;
    let n = o2_elements(&g0, &ext).len() as u64;
    Ok(albanese_genus(m, f.g, n, g0.order() as u64)? as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (table, csv, json)")),
        }
    }
}

const FAMILY_COLUMNS: [&str; 14] = [
    "K2",
    "pg",
    "q",
    "G",
    "|G|",
    "G0",
    "|G0|",
    "g(C)",
    "type",
    "|O2|",
    "branch",
    "H1",
    "g_alb",
    "(-1)-bound",
];

fn family_row(f: &SurfaceFamily) -> Vec<String> {
    vec![
        f.k2.to_string(),
        f.pg.to_string(),
        f.q.to_string(),
        f.g_label.clone(),
        f.order_g.to_string(),
        format!("{},{}", f.g0.order, f.g0.index),
        f.g0.order.to_string(),
        f.g.to_string(),
        f.covering.label(),
        f.n_o2.to_string(),
        f.branch.signature(),
        f.h1.signature(),
        f.g_alb.map_or("-".into(), |x| x.to_string()),
        f.minus_one_bound.map_or("-".into(), |x| x.to_string()),
    ]
}

const SKIP_COLUMNS: [&str; 4] = ["type", "|G0|", "K2", "g(C)"];

fn skip_row(s: &SkipRecord) -> Vec<String> {
    vec![
        format!("[{};{}]", s.q, crate::types::format_periods(&s.periods)),
        s.order_g0.to_string(),
        s.target.k2.to_string(),
        s.g.to_string(),
    ]
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

/// Serializes a run. The timing field is left out so equal inputs give
/// byte-identical output.
pub fn emit(run: &ClassificationRun, format: Format) -> String {
    let fam: Vec<Vec<String>> = run.families.iter().map(family_row).collect();
    let sk: Vec<Vec<String>> = run.skips.iter().map(skip_row).collect();
    match format {
        Format::Json => serde_json::to_string_pretty(run).expect("serializable") + "\n",
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "{}", FAMILY_COLUMNS.join(","));
            for r in &fam {
                let cells: Vec<String> = r.iter().map(|c| csv_field(c)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
            if !sk.is_empty() {
                let _ = writeln!(out, "\n# skipped");
                let _ = writeln!(out, "{}", SKIP_COLUMNS.join(","));
                for r in &sk {
                    let cells: Vec<String> = r.iter().map(|c| csv_field(c)).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            out
        }
        Format::Table => {
            let mut out = aligned(&FAMILY_COLUMNS, &fam);
            let n = run.families.len();
            let _ = writeln!(out, "\n{n} {}", if n == 1 { "family" } else { "families" });
            if !sk.is_empty() {
                let _ = writeln!(out, "\nskipped (order not covered by the catalogue):");
                out.push_str(&aligned(&SKIP_COLUMNS, &sk));
            }
            for n in &run.notes {
                let _ = writeln!(out, "\n{}: {}", n.target, n.note);
            }
            out
        }
    }
}
