//! Command-line front end. Exit codes: 0 success, 1 usage or parse
//! failure, 2 a verification finding (oracle mismatch, unexpected census
//! group, conjecture counterexample), 3 a resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::classify::{
    self, conjecture_scan, verify_classification, ConjectureScan, EnumerationBounds,
};
use crate::error::{Error, Result};
use crate::families::{binomial_family, trinomial_family, white_cayley_group, FamilySpec};
use crate::group::{group_of_simplex, simplex_of_group, SimplexGroup, DEFAULT_ORDER_CAP};
use crate::io::{self, ParsedInput};

#[derive(Parser)]
#[command(
    name = "hstar",
    version,
    about = "h*-polynomials of lattice simplices via finite abelian groups"
)]
struct Cli {
    /// Seed for randomized suites; fixed default keeps runs reproducible.
    /// Reserved: current subcommands are fully deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Auto,
    Simplex,
    Group,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the h*-polynomial of a simplex or group file; simplex input
    /// runs both the counting and the group path and must agree
    Hstar {
        /// Input file, text or JSON
        file: PathBuf,
        /// How to read the file; auto detects JSON by content and prefers
        /// the group reading for ambiguous plain text
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
    },
    /// Build a family instance and write its group and simplex files
    Build {
        /// Family spec: a3:K, a4-3k:K, a4-4k:K, a6:K, a8:K, b:K:A:L,
        /// c:K:A:L, white:K:M:A1,..,AK, or binomial:P:R:K
        spec: String,
        /// Base output path; files get .group and .simplex suffixes
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Census all groups at n = d + 1 coordinates within bounds and match
    /// every non-pyramid trinomial h* against the constructed families
    Verify {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        d: u64,
        /// Largest group order; default 12, or p^max_rank with --elementary
        #[arg(long)]
        max_order: Option<u64>,
        /// Largest generator rank; default 2, or (d + 1) / 2 with --elementary
        #[arg(long)]
        max_rank: Option<usize>,
        /// Census only elementary abelian p-groups for this prime
        #[arg(long)]
        elementary: Option<u64>,
        /// Abort after this many candidate generator tuples
        #[arg(long)]
        budget: Option<u64>,
        /// Write findings as JSON lines to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether coefficients are realizable as an h*-polynomial
    Feasible {
        /// Condition: scott A B, degree2 A B, binomial K D A,
        /// gorenstein2 M D, or trinomial K M D
        kind: String,
        params: Vec<u64>,
    },
    /// Scan all small groups for a violation of the volume bound
    /// vol <= (2b + 2) deg when h* = 1 + a t^k + b t^(2k) with b >= 2
    Conjecture {
        /// Scan every coordinate count from 1 up to this
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_order: u64,
        /// Largest generator rank; rank 3 makes the scan exhaustive for
        /// orders below 16
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        /// Abort after this many candidate generator tuples
        #[arg(long)]
        budget: Option<u64>,
    },
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::OracleMismatch { .. } => 2,
        Error::BudgetExceeded { .. }
        | Error::GroupTooLarge { .. }
        | Error::CanonicalizationBudget { .. }
        | Error::Overflow(_) => 3,
        _ => 1,
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Hstar { file, kind } => cmd_hstar(file, *kind, cli.format),
        Command::Build { spec, out } => cmd_build(spec, out.as_deref(), cli.format),
        Command::Verify {
            k,
            d,
            max_order,
            max_rank,
            elementary,
            budget,
            out,
        } => cmd_verify(
            *k,
            *d,
            *max_order,
            *max_rank,
            *elementary,
            *budget,
            out.as_deref(),
            cli.format,
        ),
        Command::Feasible { kind, params } => cmd_feasible(kind, params, cli.format),
        Command::Conjecture {
            max_len,
            max_order,
            max_rank,
            budget,
        } => cmd_conjecture(*max_len, *max_order, *max_rank, *budget, cli.format),
    }
}

fn pyramid_word(pyramid: bool) -> &'static str {
    if pyramid {
        "pyramid"
    } else {
        "not pyramid"
    }
}

fn cmd_hstar(file: &Path, kind: Kind, format: Format) -> Result<ExitCode> {
    let text = fs::read_to_string(file)?;
    let parsed = match kind {
        Kind::Auto => io::parse_auto(&text)?,
        Kind::Simplex => ParsedInput::Simplex(io::parse_simplex_any(&text)?),
        Kind::Group => ParsedInput::Group(io::parse_group_any(&text)?),
    };
    let (h, vol, pyramid) = match &parsed {
        ParsedInput::Simplex(s) => {
            let counting = s.hstar_by_counting()?;
            let group = group_of_simplex(s)?;
            let from_group = group.hstar();
            if counting != from_group {
                return Err(Error::OracleMismatch {
                    counting: counting.to_string(),
                    group: from_group.to_string(),
                });
            }
            (counting, s.normalized_volume().to_string(), group.is_pyramid())
        }
        ParsedInput::Group(g) => (g.hstar(), g.order().to_string(), g.is_pyramid()),
    };
    match format {
        Format::Text => println!(
            "h* = {h}, vol {vol}, degree {}, {}",
            h.degree(),
            pyramid_word(pyramid)
        ),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "hstar": h.coeffs(),
                "vol": vol,
                "degree": h.degree(),
                "pyramid": pyramid,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

/// The group named by a build spec, with its advertised (k, m, d).
fn build_group(spec: &str) -> Result<(SimplexGroup, u64, u64, u64)> {
    let head = spec.split(':').next().unwrap_or_default();
    match head {
        "white" => {
            let parts: Vec<&str> = spec.split(':').collect();
            let [_, k, m, entries] = parts[..] else {
                return Err(Error::InvalidSpec(format!(
                    "white takes white:K:M:A1,..,AK, got {spec:?}"
                )));
            };
            let k: u64 = parse_number(k, "k")?;
            let m: u64 = parse_number(m, "m")?;
            let entries: Vec<u64> = entries
                .split(',')
                .map(|t| parse_number(t, "entry"))
                .collect::<Result<_>>()?;
            let g = white_cayley_group(k, m, &entries)?;
            Ok((g, k, m, 2 * k - 1))
        }
        "binomial" => {
            let parts: Vec<&str> = spec.split(':').collect();
            let [_, p, r, k] = parts[..] else {
                return Err(Error::InvalidSpec(format!(
                    "binomial takes binomial:P:R:K, got {spec:?}"
                )));
            };
            let p: u64 = parse_number(p, "p")?;
            let r: u32 = parse_number(r, "r")?;
            let k: u64 = parse_number(k, "k")?;
            let power = p
                .checked_pow(r)
                .ok_or_else(|| Error::Overflow(format!("{p}^{r}")))?;
            // (p^r - p^(r-1))(d + 1) = 2k(p^r - 1) determines d
            let num = 2 * k * (power - 1);
            let den = power - power / p;
            if den == 0 || num % den != 0 {
                return Err(Error::DivisibilityViolated(format!(
                    "2k(p^r - 1) = {num} is not divisible by p^r - p^(r-1) = {den}"
                )));
            }
            let d = num / den - 1;
            let g = binomial_family(p, r, k, d)?;
            Ok((g, k, power, d))
        }
        _ => {
            let family: FamilySpec = spec.parse()?;
            let g = trinomial_family(&family)?;
            Ok((g, family.k(), family.m()?, family.dim()?))
        }
    }
}

fn parse_number<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad {what} value {token:?}")))
}

fn cmd_build(spec: &str, out: Option<&Path>, format: Format) -> Result<ExitCode> {
    let (group, k, m, d) = build_group(spec)?;
    let simplex = simplex_of_group(&group)?;
    let h = group.hstar();
    let base: PathBuf = match out {
        Some(path) => path.to_path_buf(),
        None => PathBuf::from(spec.replace([':', ','], "-")),
    };
    let (group_path, simplex_path, group_body, simplex_body) = match format {
        Format::Text => (
            with_suffix(&base, "group.txt"),
            with_suffix(&base, "simplex.txt"),
            io::write_group_text(&group),
            io::write_simplex_text(&simplex),
        ),
        Format::Json => (
            with_suffix(&base, "group.json"),
            with_suffix(&base, "simplex.json"),
            io::write_group_json(&group)? + "\n",
            io::write_simplex_json(&simplex)? + "\n",
        ),
    };
    fs::write(&group_path, group_body)?;
    fs::write(&simplex_path, simplex_body)?;
    match format {
        Format::Text => {
            println!("k={k} m={m} d={d}");
            println!("h* = {h}");
            println!("wrote {} and {}", group_path.display(), simplex_path.display());
        }
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "k": k,
                "m": m,
                "d": d,
                "hstar": h.coeffs(),
                "group_file": group_path,
                "simplex_file": simplex_path,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.as_os_str().to_os_string();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    k: u64,
    d: u64,
    max_order: Option<u64>,
    max_rank: Option<usize>,
    elementary: Option<u64>,
    budget: Option<u64>,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode> {
    let len = usize::try_from(d)
        .ok()
        .and_then(|d| d.checked_add(1))
        .ok_or_else(|| Error::Overflow(format!("dimension {d}")))?;
    let mut bounds = match elementary {
        Some(p) => {
            let rank = max_rank.unwrap_or(len / 2);
            let order = max_order.unwrap_or_else(|| {
                p.checked_pow(rank.min(64) as u32)
                    .unwrap_or(DEFAULT_ORDER_CAP)
                    .min(DEFAULT_ORDER_CAP)
            });
            let mut b = EnumerationBounds::new(len, order, rank);
            b.elementary = Some(p);
            b
        }
        None => EnumerationBounds::new(len, max_order.unwrap_or(12), max_rank.unwrap_or(2)),
    };
    bounds.budget = budget;
    let report = verify_classification(k, d, &bounds)?;
    if let Some(path) = out {
        let mut body = report.to_jsonl()?;
        if !body.is_empty() {
            body.push('\n');
        }
        fs::write(path, body)?;
    }
    match format {
        Format::Text => print!("{}", report.summary()),
        Format::Json => println!("{}", serde_json::to_string(&report)?),
    }
    if report.unexpected > 0 {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_feasible(kind: &str, params: &[u64], format: Format) -> Result<ExitCode> {
    let arity_error = |want: &str| {
        Err(Error::Parse(format!(
            "{kind} takes {want}, got {} parameters",
            params.len()
        )))
    };
    let (feasible, clause, divergence) = match (kind, params) {
        ("scott", &[a, b]) => (
            classify::scott_feasible(a, b),
            classify::scott_clause(a, b).map(String::from),
            None,
        ),
        ("scott", _) => return arity_error("A B"),
        ("degree2", &[a, b]) => (
            classify::degree2_feasible(a, b),
            classify::degree2_clause(a, b).map(String::from),
            None,
        ),
        ("degree2", _) => return arity_error("A B"),
        ("binomial", &[k, d, a]) => (
            classify::binomial_feasible(k, d, a),
            classify::binomial_clause(k, d, a),
            None,
        ),
        ("binomial", _) => return arity_error("K D A"),
        ("gorenstein2", &[m, d]) => (
            classify::gorenstein_deg2_feasible(m, d),
            classify::gorenstein_deg2_clause(m, d).map(String::from),
            None,
        ),
        ("gorenstein2", _) => return arity_error("M D"),
        ("trinomial", &[k, m, d]) => (
            classify::trinomial_palindromic_feasible(k, m, d),
            classify::trinomial_clause(k, m, d).map(String::from),
            Some(classify::trinomial_condition_divergence(k, m, d)),
        ),
        ("trinomial", _) => return arity_error("K M D"),
        _ => return Err(Error::UnknownKind(kind.into())),
    };
    match format {
        Format::Text => match &clause {
            Some(clause) => println!("yes ({clause})"),
            None => println!("no"),
        },
        Format::Json => {
            let mut value = serde_json::json!({
                "kind": kind,
                "params": params,
                "feasible": feasible,
                "clause": clause,
            });
            if let Some(flag) = divergence {
                value["divergence"] = serde_json::json!(flag);
            }
            println!("{value}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_conjecture(
    max_len: usize,
    max_order: u64,
    max_rank: usize,
    budget: Option<u64>,
    format: Format,
) -> Result<ExitCode> {
    let mut total = ConjectureScan {
        scanned: 0,
        matching: 0,
        counterexample: None,
    };
    for len in 1..=max_len.max(1) {
        let mut bounds = EnumerationBounds::new(len, max_order, max_rank);
        bounds.budget = budget;
        let scan = conjecture_scan(&bounds)?;
        total.scanned += scan.scanned;
        total.matching += scan.matching;
        if format == Format::Text {
            println!(
                "len {len}: {} groups, {} trinomial with b >= 2",
                scan.scanned, scan.matching
            );
        }
        if scan.counterexample.is_some() {
            total.counterexample = scan.counterexample;
            break;
        }
    }
    match format {
        Format::Text => match &total.counterexample {
            Some(w) => println!(
                "counterexample: h* {:?} from generators {:?} over 1/{}",
                w.hstar, w.generators, w.den
            ),
            None => println!(
                "no counterexample among {} groups ({} matching)",
                total.scanned, total.matching
            ),
        },
        Format::Json => println!("{}", serde_json::to_string(&total)?),
    }
    if total.counterexample.is_some() {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
