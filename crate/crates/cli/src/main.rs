//! Batch front end for the verification library: sweep parameter grids,
//! search generating vectors, emit reports.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 search budget
//! exhausted.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use jacsplit::covers::{find_generating_vector, vector_to_json, DEFAULT_SEARCH_BUDGET};
use jacsplit::report::{build_report, corollary_counts, max_report_n, CheckDepth, DecompositionReport};
use jacsplit::{chars, lattice, Error, Group, Signature};

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SEARCH: u8 = 3;

#[derive(Parser)]
#[command(name = "jacsplit", version, about = "Exact verification of Jacobian decompositions for the groups G_n = Z_2^(2n) : Z_3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full check suite over an (n, t) grid
    Verify(VerifyArgs),
    /// Search for a generating vector and print it in word form
    GvSearch(SearchArgs),
    /// Build one decomposition report
    Report(ReportArgs),
    /// Print the index-4 subgroup lattice of one group
    Lattice(SingleGroupArgs),
    /// Print the character table of one group
    Chartab(SingleGroupArgs),
}

/// `2` or an inclusive range `1..3`.
#[derive(Clone, Copy)]
struct Span {
    lo: u32,
    hi: u32,
}

impl Span {
    fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

fn parse_span(s: &str) -> Result<Span, String> {
    let one = |x: &str| {
        x.trim()
            .parse::<u32>()
            .map_err(|_| format!("expected a number, got {x:?}"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let lo = one(a)?;
            let hi = one(b.strip_prefix('=').unwrap_or(b))?;
            if lo > hi {
                return Err(format!("range {s:?} is empty"));
            }
            Ok(Span { lo, hi })
        }
        None => {
            let v = one(s)?;
            Ok(Span { lo: v, hi: v })
        }
    }
}

/// `auto` resolves to max(2n, 4), the smallest admissible branch count.
#[derive(Clone, Copy)]
enum TSpan {
    Auto,
    Fixed(Span),
}

fn parse_tspan(s: &str) -> Result<TSpan, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(TSpan::Auto)
    } else {
        parse_span(s).map(TSpan::Fixed)
    }
}

#[derive(Clone, Copy)]
enum TSingle {
    Auto,
    Value(u32),
}

fn parse_tsingle(s: &str) -> Result<TSingle, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(TSingle::Auto)
    } else {
        s.trim()
            .parse::<u32>()
            .map(TSingle::Value)
            .map_err(|_| format!("expected a number or `auto`, got {s:?}"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// group parameter: a value like `2` or an inclusive range like `1..3`
    #[arg(long, value_parser = parse_span)]
    n: Span,
    /// branch point count: value, range, or `auto` for max(2n, 4)
    #[arg(long, default_value = "auto", value_parser = parse_tspan)]
    t: TSpan,
    /// seed for the vector search (all randomness flows from here)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// backtracking budget for the vector search
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    /// write all reports as a JSON array to this path; `-` prints the JSON
    /// to stdout and suppresses the text output
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    /// branch point count, or `auto` for max(2n, 4)
    #[arg(long, default_value = "auto", value_parser = parse_tsingle)]
    t: TSingle,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    /// write the vector as JSON to this path; `-` prints JSON instead of words
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, required_unless_present = "target_factors", conflicts_with = "target_factors")]
    n: Option<u32>,
    /// branch point count, or `auto` for max(2n, 4)
    #[arg(long, default_value = "auto", value_parser = parse_tsingle, conflicts_with = "target_factors")]
    t: TSingle,
    /// instead of --n/--t, pick the smallest group whose JX_B has at least
    /// this many isogeny factors (with t = max(2n, 4))
    #[arg(long)]
    target_factors: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// also write the JSON report to this path; `-` prints JSON to stdout
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct SingleGroupArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn t_min(n: u32) -> u32 {
    (2 * n).max(4)
}

/// Every subcommand enumerates orbits or the lattice, so the CLI caps `n`
/// at the library's enumeration limit rather than the raw arithmetic one.
fn checked_group(n: u32) -> Result<Group, Error> {
    if n > jacsplit::MAX_ENUM_N {
        return Err(Error::InvalidInput(format!(
            "n = {n} is beyond the enumeration limit {}",
            jacsplit::MAX_ENUM_N
        )));
    }
    Group::new(n)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::InvalidParam { .. }
        | Error::InvalidInput(_)
        | Error::Parse(_)
        | Error::InfeasibleSignature(_) => EXIT_USAGE,
        Error::SearchExhausted { .. } => EXIT_SEARCH,
        _ => EXIT_CHECK_FAILURE,
    }
}

fn write_output(path: &str, contents: &str) -> Result<(), Error> {
    fs::write(path, contents)
        .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

/// Worker pool sized by `JD_THREADS` (default: available parallelism).
fn thread_pool() -> Result<rayon::ThreadPool, Error> {
    let threads = match std::env::var("JD_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("JD_THREADS must be a number, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    // validate the whole grid before computing anything
    let mut grid: Vec<(u32, u32)> = Vec::new();
    for n in args.n.iter() {
        checked_group(n)?;
        if n > max_report_n() {
            return Err(Error::InvalidInput(format!(
                "n = {n} is beyond the report limit {}: reports enumerate classes and \
                 cosets of all 3*4^n elements",
                max_report_n()
            )));
        }
        let ts: Vec<u32> = match args.t {
            TSpan::Auto => vec![t_min(n)],
            TSpan::Fixed(span) => span.iter().collect(),
        };
        for t in ts {
            if t < t_min(n) {
                return Err(Error::InvalidInput(format!(
                    "t = {t} is below the minimum {} for n = {n}",
                    t_min(n)
                )));
            }
            grid.push((n, t));
        }
    }

    let pool = thread_pool()?;
    let results: Vec<((u32, u32), Result<DecompositionReport, Error>)> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, t)| ((n, t), build_report(n, t, args.seed, args.budget)))
            .collect()
    });

    let mut reports = Vec::with_capacity(results.len());
    for ((n, t), r) in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                eprintln!("error at n = {n}, t = {t}: {e}");
                return Ok(ExitCode::from(exit_for(&e)));
            }
        }
    }

    let json_only = args.json.as_deref() == Some("-");
    if json_only {
        let arr = Value::Array(reports.iter().map(|r| r.to_json()).collect());
        print!("{}", pretty(&arr));
    } else {
        for r in &reports {
            println!("{}", r.to_text());
        }
        if let Some(path) = &args.json {
            let arr = Value::Array(reports.iter().map(|r| r.to_json()).collect());
            write_output(path, &pretty(&arr))?;
        }
    }

    for r in &reports {
        if let Some(c) = r.checks.iter().find(|c| !c.status.passed()) {
            eprintln!("check failed: {} (n = {}, t = {})", c.name, r.n, r.t);
            return Ok(ExitCode::from(EXIT_CHECK_FAILURE));
        }
    }
    if !json_only {
        println!("{} report(s), all checks passed", reports.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gv_search(args: SearchArgs) -> Result<ExitCode, Error> {
    let group = checked_group(args.n)?;
    let t = match args.t {
        TSingle::Auto => t_min(args.n),
        TSingle::Value(v) => v,
    };
    let gv = find_generating_vector(&group, t, args.seed, args.budget)?;
    let sig = Signature::threes(t as usize);
    let j = vector_to_json(&gv, &sig, Some(args.seed));
    match args.json.as_deref() {
        Some("-") => print!("{}", pretty(&j)),
        Some(path) => {
            write_output(path, &pretty(&j))?;
            for g in &gv.elements {
                println!("{}", g.to_word());
            }
        }
        None => {
            for g in &gv.elements {
                println!("{}", g.to_word());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: ReportArgs) -> Result<ExitCode, Error> {
    let (n, t) = match args.target_factors {
        Some(k) => {
            let (n, t) = corollary_counts(k);
            if n > max_report_n() {
                return Err(Error::InvalidInput(format!(
                    "a target of {k} factors needs n = {n}, beyond the report limit {}",
                    max_report_n()
                )));
            }
            (n, t)
        }
        None => {
            let n = args.n.expect("clap enforces n unless target-factors");
            checked_group(n)?;
            if n > max_report_n() {
                return Err(Error::InvalidInput(format!(
                    "n = {n} is beyond the report limit {}: reports enumerate classes and \
                     cosets of all 3*4^n elements",
                    max_report_n()
                )));
            }
            let t = match args.t {
                TSingle::Auto => t_min(n),
                TSingle::Value(v) => v,
            };
            if t < t_min(n) {
                return Err(Error::InvalidInput(format!(
                    "t = {t} is below the minimum {} for n = {n}",
                    t_min(n)
                )));
            }
            (n, t)
        }
    };
    let report = build_report(n, t, args.seed, args.budget)?;

    if args.json.as_deref() == Some("-") {
        print!("{}", pretty(&report.to_json()));
    } else {
        match args.format {
            Format::Text => println!("{}", report.to_text()),
            Format::Json => print!("{}", pretty(&report.to_json())),
        }
        if let Some(path) = &args.json {
            write_output(path, &pretty(&report.to_json()))?;
        }
    }

    if let Some(c) = report.checks.iter().find(|c| !c.status.passed()) {
        eprintln!("check failed: {} (n = {n}, t = {t})", c.name);
        return Ok(ExitCode::from(EXIT_CHECK_FAILURE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lattice(args: SingleGroupArgs) -> Result<ExitCode, Error> {
    let group = checked_group(args.n)?;
    match args.format {
        Format::Json => print!("{}", pretty(&lattice::lattice_json(&group))),
        Format::Text => {
            println!("n = {}, m = {} entries", group.n(), group.m());
            for e in lattice::enumerate_lattice(&group) {
                println!(
                    "{:>3}: U = <{}>  L = <{}>  [G:M] = {}  {}",
                    e.index,
                    e.u.basis_strings().join(", "),
                    e.l_canonical.basis_strings().join(", "),
                    e.m_sub.index(&group),
                    e.theta.label()
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The full table is square in the class count `(4^n + 8)/3`, so it stops
/// being printable (or storable) long before the other commands do.
const CHARTAB_MAX_N: u32 = 6;

fn cmd_chartab(args: SingleGroupArgs) -> Result<ExitCode, Error> {
    if args.n > CHARTAB_MAX_N {
        return Err(Error::InvalidInput(format!(
            "n = {} is beyond the table limit {CHARTAB_MAX_N}: the full character table \
             has ((4^n + 8)/3)^2 entries",
            args.n
        )));
    }
    let group = checked_group(args.n)?;
    let table = chars::character_table(&group);
    // all-pairs orthogonality is cubic in the class count; follow the same
    // depth policy as the reports, which cite it past n = 4
    let orthogonality_verified = CheckDepth::for_group(group.n()).orthogonality;
    if orthogonality_verified {
        table.verify_orthogonality()?;
    }
    match args.format {
        Format::Json => {
            let j = json!({
                "n": group.n(),
                "orthogonality_verified": orthogonality_verified,
                "classes": table
                    .classes
                    .iter()
                    .map(|c| json!({ "rep": c.representative.to_word(), "size": c.size }))
                    .collect::<Vec<_>>(),
                "irreducibles": table.irreducibles.iter().map(|x| x.label()).collect::<Vec<_>>(),
                "values": table
                    .values
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            print!("{}", pretty(&j));
        }
        Format::Text => {
            let headers: Vec<String> =
                table.classes.iter().map(|c| c.representative.to_word()).collect();
            let cells: Vec<Vec<String>> = table
                .values
                .iter()
                .map(|row| row.iter().map(|v| v.to_string()).collect())
                .collect();
            let label_w = table
                .irreducibles
                .iter()
                .map(|x| x.label().len())
                .max()
                .unwrap_or(0);
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            print!("{:label_w$}", "");
            for (h, w) in headers.iter().zip(&widths) {
                print!("  {h:>w$}");
            }
            println!();
            print!("{:label_w$}", "size");
            for (c, w) in table.classes.iter().zip(&widths) {
                print!("  {:>w$}", c.size);
            }
            println!();
            for (irr, row) in table.irreducibles.iter().zip(&cells) {
                print!("{:label_w$}", irr.label());
                for (c, w) in row.iter().zip(&widths) {
                    print!("  {c:>w$}");
                }
                println!();
            }
            if !orthogonality_verified {
                println!("(orthogonality relations checked exactly for n <= 4; skipped here)");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`jacsplit ... | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::GvSearch(a) => cmd_gv_search(a),
        Command::Report(a) => cmd_report(a),
        Command::Lattice(a) => cmd_lattice(a),
        Command::Chartab(a) => cmd_chartab(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
