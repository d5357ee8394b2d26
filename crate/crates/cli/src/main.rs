//! Command-line pipeline for double covers of P3 branched along eight
//! planes: incidence counters, Hodge invariants, point counts, L-series
//! coefficients and newform matching.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 the arrangement fails
//! the admissibility conditions, 3 a table1 recomputation mismatch.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use octic_core::arithmetic::{good_prime, lseries};
use octic_core::arrangement::{parse, validate, Arrangement};
use octic_core::catalog;
use octic_core::deformations::{equisingular_dimension, DeformationOptions};
use octic_core::fp::is_prime;
use octic_core::invariants::{invariant_set, InvariantSet};
use octic_core::modularity::{agreement, match_ap, nearest, TABLE_PRIMES};
use octic_core::report::{
    AnalyzeReport, CatalogRow, CountRecordReport, CountReport, CountersReport, HodgeReport,
    ModularReport, Table1Report, Table1Row,
};
use octic_core::Error;

#[derive(Parser)]
#[command(name = "octic", version, about = "Invariants and arithmetic of double octic threefolds from eight-plane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// built-in arrangement key (see `octic catalog list`)
    #[arg(long, value_name = "KEY", conflicts_with = "file")]
    catalog: Option<String>,
    /// path to an arrangement document (JSON)
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// family parameter bindings, e.g. A=1,B=3
    #[arg(long, value_name = "LIST")]
    params: Option<String>,
    /// squarefree integer multiplying the branch equation
    #[arg(long, value_name = "S", allow_negative_numbers = true)]
    scale: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Incidence counters and the invariant set of the resolved cover
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Deformation detail: h12 with the Jacobian/equisingular dimensions
    Hodge {
        #[command(flatten)]
        source: Source,
        /// force exact rational linear algebra (default: double-prime modular)
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Point counts over F_p and L-series coefficients
    Count {
        #[command(flatten)]
        source: Source,
        /// comma-separated primes, e.g. 5,7,11
        #[arg(long, value_name = "LIST", conflicts_with = "prime_range")]
        primes: Option<String>,
        /// inclusive prime range, e.g. 5..100 (skips primes of bad reduction)
        #[arg(long, value_name = "A..B")]
        prime_range: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Match the a_p vector against the embedded weight-4 newform tables
    Modular {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// List or export the built-in arrangements
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Recompute every catalog entry and diff against its expected row
    Table1 {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the keys with their expected invariant rows
    List {
        #[arg(long)]
        json: bool,
    },
    /// Emit the arrangement document for a key
    Export { key: String },
}

enum Failure {
    Usage(String),
    Inadmissible(String),
    TableMismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inadmissible(msg) => Failure::Inadmissible(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(source: &Source) -> Result<Arrangement, Failure> {
    let mut arr = match (&source.catalog, &source.file) {
        (Some(key), None) => match &source.params {
            Some(p) => catalog::get_with_params(key, &catalog::parse_params(p)?)?,
            None => catalog::get(key)?,
        },
        (None, Some(path)) => {
            if source.params.is_some() {
                return Err(Failure::Usage(
                    "--params applies to catalog families; bind parameters inside the document instead".into(),
                ));
            }
            parse(&std::fs::read_to_string(path)?)?
        }
        _ => {
            return Err(Failure::Usage(
                "exactly one of --catalog or --file is required".into(),
            ))
        }
    };
    if let Some(s) = source.scale {
        arr = arr.with_scale(s)?;
    }
    Ok(arr)
}

fn invariants_of(arr: &Arrangement, exact: bool) -> Result<(InvariantSet, octic_core::deformations::EquisingularReport), Failure> {
    let report = equisingular_dimension(
        arr,
        &DeformationOptions {
            include_triple_points: true,
            exact,
        },
    )?;
    let inv = invariant_set(&arr.classify().counters, report.h12)?;
    Ok((inv, report))
}

fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn run_analyze(source: &Source, json: bool) -> Result<(), Failure> {
    let arr = load(source)?;
    let incidence = arr.classify();
    let verdict = validate(&incidence);
    if !verdict.is_admissible() {
        if json {
            emit(&serde_json::json!({
                "name": arr.name,
                "admissible": false,
                "violation": verdict.to_string(),
            }));
        } else {
            println!("{}: not admissible ({verdict})", arr.name);
        }
        return Err(Failure::Inadmissible(verdict.to_string()));
    }
    let (inv, _) = invariants_of(&arr, false)?;
    if json {
        emit(&AnalyzeReport {
            name: arr.name.clone(),
            admissible: true,
            counters: (&incidence.counters).into(),
            invariants: (&inv).into(),
        });
    } else {
        println!("{}", arr.name);
        println!("  counters: {}", incidence.counters);
        println!(
            "  e = {}, rho(Y) = {}, h11 = {}, h12 = {}, skew rank = {}",
            inv.e, inv.rho_y, inv.h11, inv.h12, inv.skew_rank
        );
    }
    Ok(())
}

fn run_hodge(source: &Source, exact: bool, json: bool) -> Result<(), Failure> {
    let arr = load(source)?;
    let (_, report) = invariants_of(&arr, exact)?;
    if json {
        emit(&HodgeReport::new(&arr.name, &report));
    } else {
        println!(
            "{}: h12 = {} (dim Jf = {}, dim I_eq = {}, strata = {})",
            arr.name, report.h12, report.dim_jacobian, report.dim_equisingular, report.strata
        );
    }
    Ok(())
}

fn parse_primes(arr: &Arrangement, primes: &Option<String>, range: &Option<String>) -> Result<Vec<u64>, Failure> {
    match (primes, range) {
        (Some(list), None) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::Usage(format!("bad prime `{s}`")))
            })
            .collect(),
        (None, Some(range)) => {
            let (a, b) = range
                .split_once("..")
                .ok_or_else(|| Failure::Usage(format!("bad range `{range}`, expected A..B")))?;
            let a: u64 = a.trim().parse().map_err(|_| Failure::Usage(format!("bad range `{range}`")))?;
            let b: u64 = b.trim().parse().map_err(|_| Failure::Usage(format!("bad range `{range}`")))?;
            let mut out = Vec::new();
            for p in a..=b {
                if is_prime(p) {
                    if good_prime(arr, p) {
                        out.push(p);
                    } else {
                        eprintln!("skipping bad prime {p}");
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Failure::Usage(
            "exactly one of --primes or --prime-range is required".into(),
        )),
    }
}

fn run_count(
    source: &Source,
    primes: &Option<String>,
    range: &Option<String>,
    threads: usize,
    json: bool,
) -> Result<(), Failure> {
    let arr = load(source)?;
    let primes = parse_primes(&arr, primes, range)?;
    let (inv, _) = invariants_of(&arr, false)?;
    let records = lseries(&arr, &primes, &inv, threads)?;
    if json {
        emit(&CountReport {
            name: arr.name.clone(),
            h11: inv.h11.to_string(),
            records: records.iter().map(CountRecordReport::from).collect(),
        });
    } else {
        println!("{} (h11 = {})", arr.name, inv.h11);
        println!("{:>6} {:>10} {:>10} {:>10} {:>12} {:>8}", "p", "raw", "lines", "fourfold", "total", "a_p");
        for r in &records {
            println!(
                "{:>6} {:>10} {:>10} {:>10} {:>12} {:>8}",
                r.p, r.raw, r.line_corr, r.fourfold_corr, r.total, r.ap
            );
        }
    }
    Ok(())
}

fn run_modular(source: &Source, threads: usize, json: bool) -> Result<(), Failure> {
    let arr = load(source)?;
    let (inv, _) = invariants_of(&arr, false)?;
    let records = lseries(&arr, &TABLE_PRIMES, &inv, threads)?;
    let ap: BTreeMap<u64, i64> = records.iter().map(|r| (r.p, r.ap)).collect();
    let matched = match_ap(&ap).map(str::to_string);
    let (near, _hits) = nearest(&ap);
    let per_prime = agreement(near, &ap);
    if json {
        emit(&ModularReport {
            name: arr.name.clone(),
            ap: ap.iter().map(|(p, v)| (p.to_string(), v.to_string())).collect(),
            matched: matched.clone(),
            nearest: near.label.to_string(),
            agreement: per_prime.iter().map(|(p, v)| (p.to_string(), *v)).collect(),
        });
    } else {
        let pairs: Vec<String> = ap.iter().map(|(p, v)| format!("a_{p}={v}")).collect();
        println!("{}: {}", arr.name, pairs.join(" "));
        match &matched {
            Some(label) => println!("  matches {label} at all tabulated primes"),
            None => {
                let misses: Vec<String> = per_prime
                    .iter()
                    .filter(|(_, ok)| !**ok)
                    .map(|(p, _)| p.to_string())
                    .collect();
                println!(
                    "  no full match; nearest is {} (disagrees at p = {})",
                    near.label,
                    misses.join(", ")
                );
            }
        }
    }
    Ok(())
}

fn catalog_row(e: &catalog::CatalogEntry, counters: &octic_core::arrangement::Counters, h12: i64, h11: i64, euler: i64) -> CatalogRow {
    CatalogRow {
        key: e.key.to_string(),
        family: e.family,
        counters: CountersReport::from(counters),
        h12: h12.to_string(),
        h11: h11.to_string(),
        e: euler.to_string(),
        newform: e.newform.map(str::to_string),
    }
}

fn run_catalog_list(json: bool) -> Result<(), Failure> {
    if json {
        let rows: Vec<CatalogRow> = catalog::ENTRIES
            .iter()
            .map(|e| catalog_row(e, &e.expected.counters, e.expected.h12, e.expected.h11, e.expected.e))
            .collect();
        emit(&rows);
    } else {
        println!(
            "{:>5} {:>7} {:>30} {:>5} {:>5} {:>5}  newform",
            "key", "kind", "(p3,p4^0,p4^1,p5^0,p5^1,p5^2,l3)", "h12", "h11", "e"
        );
        for e in catalog::ENTRIES {
            let c = e.expected.counters.as_tuple();
            println!(
                "{:>5} {:>7} {:>30} {:>5} {:>5} {:>5}  {}",
                e.key,
                if e.family { "family" } else { "rigid" },
                format!("{c:?}"),
                e.expected.h12,
                e.expected.h11,
                e.expected.e,
                e.newform.unwrap_or("-")
            );
        }
    }
    Ok(())
}

fn run_catalog_export(key: &str) -> Result<(), Failure> {
    let doc = catalog::export(key)?;
    println!("{}", serde_json::to_string(&doc).expect("serializable document"));
    Ok(())
}

fn run_table1(json: bool) -> Result<(), Failure> {
    let mut rows = Vec::new();
    let mut all_match = true;
    for e in catalog::ENTRIES {
        let arr = catalog::get(e.key)?;
        let counters = arr.classify().counters;
        let (inv, _) = invariants_of(&arr, false)?;
        let matches = counters == e.expected.counters
            && inv.h12 == e.expected.h12
            && inv.h11 == e.expected.h11
            && inv.e == e.expected.e;
        all_match &= matches;
        if !json {
            println!(
                "{:>5}: {}",
                e.key,
                if matches { "ok" } else { "MISMATCH" }
            );
        }
        rows.push(Table1Row {
            key: e.key.to_string(),
            matches,
            expected: catalog_row(e, &e.expected.counters, e.expected.h12, e.expected.h11, e.expected.e),
            computed: catalog_row(e, &counters, inv.h12, inv.h11, inv.e),
        });
    }
    if json {
        emit(&Table1Report { all_match, rows });
    } else {
        println!("{}", if all_match { "all rows match" } else { "MISMATCHES FOUND" });
    }
    if all_match {
        Ok(())
    } else {
        Err(Failure::TableMismatch)
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze { source, json } => run_analyze(source, *json),
        Command::Hodge { source, exact, json } => run_hodge(source, *exact, *json),
        Command::Count {
            source,
            primes,
            prime_range,
            threads,
            json,
        } => run_count(source, primes, prime_range, *threads, *json),
        Command::Modular { source, threads, json } => run_modular(source, *threads, *json),
        Command::Catalog { action } => match action {
            CatalogAction::List { json } => run_catalog_list(*json),
            CatalogAction::Export { key } => run_catalog_export(key),
        },
        Command::Table1 { json } => run_table1(*json),
    }
}

fn main() -> ExitCode {
    // dying quietly on a closed pipe beats a panic trace under `| head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered help/error but use exit code 1 for usage
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inadmissible(msg)) => {
            eprintln!("error: arrangement is not admissible: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::TableMismatch) => {
            eprintln!("error: computed invariants differ from the expected table");
            ExitCode::from(3)
        }
    }
}
