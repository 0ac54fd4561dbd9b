use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use semimix_core::albanese::{DEFAULT_STRATEGY, STRATEGIES};
use semimix_core::catalogue::{load_catalogue, validate_catalogue, Catalogue};
use semimix_core::invariants::{floor_x2, minus_one_curve_bound, SurfaceFamily};
use semimix_core::pipeline::{
    classify, emit, recompute_g_alb, recompute_h1, ClassificationRun, ClassifyOptions, Format,
};
use semimix_core::types::{admissible_types, format_periods, SurfaceTarget};

#[derive(Parser)]
#[command(
    name = "semimix",
    version,
    about = "Classify quotients (C x C)/G by mixed group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalogue maintenance.
    Catalogue {
        #[command(subcommand)]
        action: CatalogueCmd,
    },
    /// List the admissible types and the skipped ones.
    Types(TargetArgs),
    /// Run the full classification.
    Classify {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_STRATEGY)]
        strategy: String,
    },
    /// Bounds on the number of (-1)-curves for chi = 1.
    Minimality {
        #[arg(long, value_parser = parse_range)]
        k2: RangeInclusive<i64>,
    },
    /// Recompute H1 for stored family records.
    H1(RecordArgs),
    /// Recompute the Albanese fibre genus for stored q = 1 family records.
    Albanese {
        #[command(flatten)]
        record: RecordArgs,
        #[arg(long, default_value = DEFAULT_STRATEGY)]
        strategy: String,
    },
}

#[derive(Subcommand)]
enum CatalogueCmd {
    /// Check every entry and the per-order counts.
    Validate {
        #[arg(long)]
        path: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long)]
    pg: u32,
    #[arg(long)]
    q: u32,
    /// A single value or an inclusive range `A..B`.
    #[arg(long, value_parser = parse_range)]
    k2: RangeInclusive<i64>,
    /// Catalogue file; the bundled one when absent.
    #[arg(long, env = "SEMIMIX_CATALOGUE")]
    catalogue: Option<PathBuf>,
    /// Treat orders above this as not covered.
    #[arg(long)]
    max_order: Option<usize>,
}

#[derive(Args)]
struct RecordArgs {
    /// JSON file: a classification run, one family, or a list of families.
    #[arg(long)]
    family: PathBuf,
    /// Only the family at this position.
    #[arg(long)]
    index: Option<usize>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let bad = || format!("expected N or A..B, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

fn catalogue_from(path: Option<&Path>) -> Result<(Catalogue, String)> {
    match path {
        Some(p) => {
            let cat = load_catalogue(p).with_context(|| format!("loading {}", p.display()))?;
            Ok((cat, p.display().to_string()))
        }
        None => Ok((Catalogue::builtin(), "builtin".into())),
    }
}

fn targets(args: &TargetArgs) -> Vec<SurfaceTarget> {
    args.k2
        .clone()
        .map(|k| SurfaceTarget::new(k, args.pg, args.q))
        .collect()
}

fn read_families(args: &RecordArgs) -> Result<Vec<SurfaceFamily>> {
    let text = fs::read_to_string(&args.family)
        .with_context(|| format!("reading {}", args.family.display()))?;
    let families = if let Ok(run) = serde_json::from_str::<ClassificationRun>(&text) {
        run.families
    } else if let Ok(f) = serde_json::from_str::<SurfaceFamily>(&text) {
        vec![f]
    } else {
        serde_json::from_str::<Vec<SurfaceFamily>>(&text)
            .context("not a classification run or family record")?
    };
    match args.index {
        Some(i) => match families.get(i) {
            Some(f) => Ok(vec![f.clone()]),
            None => bail!("index {i} out of range ({} families)", families.len()),
        },
        None => Ok(families),
    }
}

fn write_out(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Catalogue {
            action: CatalogueCmd::Validate { path },
        } => {
            let path = path.or_else(|| std::env::var_os("SEMIMIX_CATALOGUE").map(PathBuf::from));
            let (cat, label) = catalogue_from(path.as_deref())?;
            let report = validate_catalogue(&cat);
            for f in &report.failures {
                println!("FAIL {f}");
            }
            println!(
                "{label}: {} entries checked, {} failures",
                report.checked,
                report.failures.len()
            );
            Ok(report.is_ok())
        }
        Command::Types(args) => {
            let (cat, _) = catalogue_from(args.catalogue.as_deref())?;
            let cat = match args.max_order {
                Some(m) => cat.truncated(m),
                None => cat,
            };
            for t in targets(&args) {
                let (types, skips) = admissible_types(&t, |o| cat.covers(o as usize));
                println!("{t}: {} types, {} skipped", types.len(), skips.len());
                for ty in &types {
                    println!(
                        "  {}  g={} |G0|={} |O2|={}",
                        ty.label(),
                        ty.g,
                        ty.order_g0,
                        ty.n_o2
                    );
                }
                for s in &skips {
                    println!(
                        "  skip [{};{}]  g={} |G0|={}",
                        s.q,
                        format_periods(&s.periods),
                        s.g,
                        s.order_g0
                    );
                }
            }
            Ok(true)
        }
        Command::Classify {
            target,
            jobs,
            format,
            out,
            strategy,
        } => {
            let (cat, label) = catalogue_from(target.catalogue.as_deref())?;
            let opts = ClassifyOptions {
                max_order: target.max_order,
                strategy,
                jobs,
                catalogue_label: label,
                ..ClassifyOptions::default()
            };
            let run = classify(&targets(&target), &cat, &opts)?;
            write_out(&emit(&run, format), out.as_deref())?;
            eprintln!(
                "{} families in {:.1}s",
                run.families.len(),
                run.elapsed_secs
            );
            Ok(true)
        }
        Command::Minimality { k2 } => {
            println!("K2  floor(x2)  (-1)-bound");
            for k in k2 {
                println!("{k:<3} {:<10} {}", floor_x2(k)?, minus_one_curve_bound(k)?);
            }
            Ok(true)
        }
        Command::H1(args) => {
            let mut ok = true;
            for (i, f) in read_families(&args)?.iter().enumerate() {
                let h = recompute_h1(f)?;
                let same = h == f.h1;
                ok &= same;
                println!(
                    "{i}: {}  stored {}  {}",
                    h.signature(),
                    f.h1.signature(),
                    if same { "ok" } else { "MISMATCH" }
                );
            }
            Ok(ok)
        }
        Command::Albanese { record, strategy } => {
            if !STRATEGIES.iter().any(|s| s.name() == strategy) {
                let names: Vec<_> = STRATEGIES.iter().map(|s| s.name()).collect();
                bail!(
                    "unknown strategy `{strategy}` (one of: {})",
                    names.join(", ")
                );
            }
            let mut ok = true;
            for (i, f) in read_families(&record)?.iter().enumerate() {
                if f.q != 1 {
                    println!("{i}: q = {}, no Albanese pencil", f.q);
                    continue;
                }
                let g = recompute_g_alb(f, &strategy)?;
                let same = f.g_alb == Some(g);
                ok &= same;
                let stored = f.g_alb.map_or("-".into(), |x| x.to_string());
                println!(
                    "{i}: g_alb {g}  stored {stored}  {}",
                    if same { "ok" } else { "MISMATCH" }
                );
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
