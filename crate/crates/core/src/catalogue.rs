//! The bundled list of small groups, one isomorphism class per line.
//!
//! Line format (tab separated):
//! `order  index  name  degree  generators  standard_id`
//! where generators are `;`-separated cycle strings (possibly empty) and
//! standard_id is `order,index` or empty. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{self, perm, FiniteGroup, GroupError, Perm};

/// The asset shipped with the crate.
pub const BUILTIN_CATALOGUE: &str = include_str!("../data/small_groups.txt");

/// Number of isomorphism classes of groups of each order, for the orders the
/// bundled asset must cover.
pub const REFERENCE_COUNTS: &[(usize, usize)] = &[
    (1, 1),
    (2, 1),
    (3, 1),
    (4, 2),
    (5, 1),
    (6, 2),
    (7, 1),
    (8, 5),
    (9, 2),
    (10, 2),
    (11, 1),
    (12, 5),
    (13, 1),
    (14, 2),
    (15, 1),
    (16, 14),
    (17, 1),
    (18, 5),
    (19, 1),
    (20, 5),
    (21, 2),
    (22, 2),
    (23, 1),
    (24, 15),
    (25, 2),
    (26, 2),
    (27, 5),
    (28, 4),
    (29, 1),
    (30, 4),
    (31, 1),
    (32, 51),
    (49, 2),
];

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("malformed catalogue at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("duplicate entry ({order}, {index})")]
    Duplicate { order: usize, index: usize },
    #[error("cannot read catalogue {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("entry ({order}, {index}): {source}")]
    Group {
        order: usize,
        index: usize,
        #[source]
        source: GroupError,
    },
    #[error("no entry ({order}, {index})")]
    Missing { order: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub order: usize,
    pub index: usize,
    pub name: String,
    pub degree: usize,
    pub gens: Vec<Perm>,
    pub standard_id: Option<(usize, usize)>,
}

impl CatalogueEntry {
    pub fn build(&self) -> Result<FiniteGroup, CatalogueError> {
        group::group_from_permutations(self.degree, &self.gens).map_err(|source| {
            CatalogueError::Group {
                order: self.order,
                index: self.index,
                source,
            }
        })
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| perm::format_cycles(g)).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalogue {
    entries: BTreeMap<usize, Vec<CatalogueEntry>>,
}

impl Catalogue {
    pub fn builtin() -> Self {
        parse_catalogue(BUILTIN_CATALOGUE).expect("bundled catalogue parses")
    }

    pub fn covered_orders(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn covers(&self, order: usize) -> bool {
        self.entries.contains_key(&order)
    }

    pub fn groups_of_order(&self, order: usize) -> &[CatalogueEntry] {
        self.entries
            .get(&order)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn get(&self, order: usize, index: usize) -> Option<&CatalogueEntry> {
        self.groups_of_order(order)
            .iter()
            .find(|e| e.index == index)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogueEntry> {
        self.entries.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Drops all orders above `max_order`.
    pub fn truncated(&self, max_order: usize) -> Self {
        Catalogue {
            entries: self
                .entries
                .range(..=max_order)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Finds the catalogue entry isomorphic to `g`, if its order is covered.
    pub fn identify(&self, g: &FiniteGroup) -> Option<&CatalogueEntry> {
        let fp = g.fingerprint();
        self.groups_of_order(g.order()).iter().find(|e| {
            e.build()
                .map(|h| h.fingerprint() == fp && group::is_isomorphic(g, &h).is_some())
                .unwrap_or(false)
        })
    }
}

pub fn load_catalogue(path: &Path) -> Result<Catalogue, CatalogueError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogueError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalogue(&text)
}

pub fn parse_catalogue(text: &str) -> Result<Catalogue, CatalogueError> {
    let mut entries: BTreeMap<usize, Vec<CatalogueEntry>> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: &str| CatalogueError::Malformed {
            line: line_no,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 5 || fields.len() > 6 {
            return Err(malformed("expected 5 or 6 tab-separated fields"));
        }
        let num = |s: &str, what: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| malformed(&format!("bad {what} `{s}`")))
        };
        let order = num(fields[0], "order")?;
        let index = num(fields[1], "index")?;
        let degree = num(fields[3], "degree")?;
        if order == 0 || index == 0 || degree == 0 {
            return Err(malformed("order, index and degree must be positive"));
        }
        let gens = fields[4]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| perm::parse_cycles(s, degree).map_err(|e| malformed(&e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let standard_id = match fields.get(5).map(|s| s.trim()) {
            None | Some("") => None,
            Some(s) => {
                let (a, b) = s
                    .split_once(',')
                    .ok_or_else(|| malformed("bad standard id"))?;
                Some((num(a, "standard id")?, num(b, "standard id")?))
            }
        };
        let list = entries.entry(order).or_default();
        if list.iter().any(|e| e.index == index) {
            return Err(CatalogueError::Duplicate { order, index });
        }
        list.push(CatalogueEntry {
            order,
            index,
            name: fields[2].trim().to_string(),
            degree,
            gens,
            standard_id,
        });
    }
    for list in entries.values_mut() {
        list.sort_by_key(|e| e.index);
    }
    Ok(Catalogue { entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationFailure {
    Unbuildable {
        order: usize,
        index: usize,
        reason: String,
    },
    WrongOrder {
        order: usize,
        index: usize,
        actual: usize,
    },
    Isomorphic {
        order: usize,
        first: usize,
        second: usize,
    },
    WrongCount {
        order: usize,
        expected: usize,
        actual: usize,
    },
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationFailure::Unbuildable {
                order,
                index,
                reason,
            } => {
                write!(f, "entry ({order}, {index}) cannot be built: {reason}")
            }
            ValidationFailure::WrongOrder {
                order,
                index,
                actual,
            } => {
                write!(
                    f,
                    "entry ({order}, {index}) generates a group of order {actual}"
                )
            }
            ValidationFailure::Isomorphic {
                order,
                first,
                second,
            } => {
                write!(
                    f,
                    "entries ({order}, {first}) and ({order}, {second}) are isomorphic"
                )
            }
            ValidationFailure::WrongCount {
                order,
                expected,
                actual,
            } => {
                write!(f, "order {order}: {actual} entries, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks entry orders, pairwise non-isomorphism within each order and the
/// per-order counts against [`REFERENCE_COUNTS`].
pub fn validate_catalogue(cat: &Catalogue) -> ValidationReport {
    let per_order: Vec<Vec<ValidationFailure>> = cat
        .entries
        .par_iter()
        .map(|(&order, list)| {
            let mut failures = Vec::new();
            let mut built = Vec::new();
            for e in list {
                match e.build() {
                    Ok(g) if g.order() == order => built.push((e.index, g.fingerprint(), g)),
                    Ok(g) => failures.push(ValidationFailure::WrongOrder {
                        order,
                        index: e.index,
                        actual: g.order(),
                    }),
                    Err(err) => failures.push(ValidationFailure::Unbuildable {
                        order,
                        index: e.index,
                        reason: err.to_string(),
                    }),
                }
            }
            for i in 0..built.len() {
                for j in i + 1..built.len() {
                    if built[i].1 == built[j].1
                        && group::is_isomorphic(&built[i].2, &built[j].2).is_some()
                    {
                        failures.push(ValidationFailure::Isomorphic {
                            order,
                            first: built[i].0,
                            second: built[j].0,
                        });
                    }
                }
            }
            if let Some(&(_, expected)) = REFERENCE_COUNTS.iter().find(|(o, _)| *o == order) {
                if expected != list.len() {
                    failures.push(ValidationFailure::WrongCount {
                        order,
                        expected,
                        actual: list.len(),
                    });
                }
            }
            failures
        })
        .collect();
    let mut report = ValidationReport {
        checked: cat.len(),
        failures: per_order.into_iter().flatten().collect(),
    };
    for &(order, expected) in REFERENCE_COUNTS {
        if !cat.covers(order) {
            report.failures.push(ValidationFailure::WrongCount {
                order,
                expected,
                actual: 0,
            });
        }
    }
    report
}
