//! Command-line driver: analyze hand-entered actions, run the Hecke
//! construction, build family members, sweep a census and verify reports.
//!
//! Exit codes: 0 success, 1 identity failure, 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use januarial::census::{census, hecke_rows, Census, CensusError, CensusRow, DEFAULT_MAX_SOLUTIONS};
use januarial::dot::to_dot;
use januarial::embedding::TriangleAction;
use januarial::families::{even_family, odd_family, FamilyError};
use januarial::perm::{labels_in_cycles, parse_cycles, Perm, PointSet};
use januarial::topology::{analyze_action, HField, JanuarialReport, JanuarialType, TopologyError};
use januarial::Parallelism;

#[derive(Parser)]
#[command(name = "januarial", version, about = "Construct and classify januarials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a hand-entered action given as cycle notation
    Analyze(AnalyzeArgs),
    /// Run the Hecke construction over PL(F_p) for one prime
    Hecke(HeckeArgs),
    /// Build the simple h = 1 family member for a given k
    Family(FamilyArgs),
    /// Sweep primes and y-orders, verifying conservation per group
    Census(CensusArgs),
    /// Re-check the arithmetic identities of a stored report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Cycles of x, e.g. "(0,7)(1,5)"
    #[arg(long)]
    x: Option<String>,
    /// Cycles of y, e.g. "(0,9,14)(2,13,8)"
    #[arg(long)]
    y: Option<String>,
    /// File with `x = ...` and `y = ...` lines instead of inline cycles
    #[arg(long, conflicts_with_all = ["x", "y"])]
    file: Option<PathBuf>,
    /// Expected exact order of y
    #[arg(long)]
    k: u64,
    /// Expected exact order of xy
    #[arg(long)]
    l: u64,
    /// Write the embedded diagram in DOT format to this path
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: u64,
    /// Cap on parameter solutions per primitive root
    #[arg(long = "max-solutions", default_value_t = DEFAULT_MAX_SOLUTIONS)]
    max_solutions: usize,
    /// Emit rows as a JSON array instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    k: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long = "p-max")]
    p_max: u32,
    #[arg(long = "k-max")]
    k_max: u64,
    /// Cap on parameter solutions per primitive root
    #[arg(long = "max-solutions", default_value_t = DEFAULT_MAX_SOLUTIONS)]
    max_solutions: usize,
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Report file: one JSON report or an array of them
    #[arg(long)]
    report: PathBuf,
}

enum CmdError {
    /// Bad input: unparsable cycles, order mismatches, empty searches.
    Input(String),
    /// A theorem-level identity failed; this signals a construction bug.
    Identity(String),
}

impl From<TopologyError> for CmdError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::IdentityViolation { .. } | TopologyError::CircuitTrace { .. } => {
                CmdError::Identity(e.to_string())
            }
            other => CmdError::Input(other.to_string()),
        }
    }
}

impl From<CensusError> for CmdError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Topology(t) => t.into(),
            other => CmdError::Input(other.to_string()),
        }
    }
}

impl From<FamilyError> for CmdError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Verification(t) => t.into(),
            FamilyError::TheoremCounterexample { .. } => CmdError::Identity(e.to_string()),
            other => CmdError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Hecke(args) => cmd_hecke(args),
        Command::Family(args) => cmd_family(args),
        Command::Census(args) => cmd_census(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Identity(msg)) => {
            eprintln!("identity failure: {msg}");
            ExitCode::from(1)
        }
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_action(args: &AnalyzeArgs) -> Result<TriangleAction, CmdError> {
    let (x_text, y_text) = if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
        let mut x = None;
        let mut y = None;
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("x") {
                x = rest.trim().strip_prefix('=').map(|s| s.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("y") {
                y = rest.trim().strip_prefix('=').map(|s| s.trim().to_string());
            }
        }
        match (x, y) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(CmdError::Input(
                    "action file needs `x = ...` and `y = ...` lines".into(),
                ))
            }
        }
    } else {
        match (&args.x, &args.y) {
            (Some(x), Some(y)) => (x.clone(), y.clone()),
            _ => return Err(CmdError::Input("provide --x and --y, or --file".into())),
        }
    };

    let x_cycles = parse_cycles(&x_text).map_err(|e| CmdError::Input(e.to_string()))?;
    let y_cycles = parse_cycles(&y_text).map_err(|e| CmdError::Input(e.to_string()))?;
    let mut labels = labels_in_cycles(&x_cycles);
    labels.extend(labels_in_cycles(&y_cycles));
    labels.sort();
    labels.dedup();
    let domain =
        Arc::new(PointSet::new(labels).map_err(|e| CmdError::Input(e.to_string()))?);
    let x = Perm::from_cycles(Arc::clone(&domain), &x_cycles)
        .map_err(|e| CmdError::Input(e.to_string()))?;
    let y =
        Perm::from_cycles(domain, &y_cycles).map_err(|e| CmdError::Input(e.to_string()))?;
    let action = TriangleAction::new(x, y).map_err(|e| CmdError::Input(e.to_string()))?;
    if action.k() != args.k || action.l() != args.l {
        return Err(CmdError::Input(format!(
            "order mismatch: y has order {}, xy has order {}, expected k={} l={}",
            action.k(),
            action.l(),
            args.k,
            args.l
        )));
    }
    Ok(action)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CmdError> {
    let action = parse_action(&args)?;
    let analysis = analyze_action(&action, None)?;
    if let Some(path) = &args.dot {
        std::fs::write(path, to_dot(&analysis.diagram))
            .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    }
    emit(analysis.report.to_json());
    Ok(())
}

fn h_column(h: &HField) -> String {
    match h {
        HField::Simple(h) => h.to_string(),
        HField::General([h1, h2]) => format!("{h1},{h2}"),
    }
}

/// println that treats a closed stdout (downstream `head` and such) as a
/// clean exit instead of a panic.
fn emit(line: String) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(line.as_bytes())
        .and_then(|()| out.write_all(b"\n"))
        .is_err()
    {
        std::process::exit(0);
    }
}

fn print_row_table(rows: &[CensusRow]) {
    emit(format!(
        "{:>5} {:>4} {:>4} {:>6} {:>8} {:>6} {:>4} {:>4} {:>6} {:>6}  ok",
        "p", "k", "l", "theta", "type", "h", "g1", "g2", "alpha", "genus"
    ));
    for r in rows {
        emit(format!(
            "{:>5} {:>4} {:>4} {:>6} {:>8} {:>6} {:>4} {:>4} {:>6} {:>6}  {}",
            r.p,
            r.k,
            r.l,
            r.theta,
            match r.jtype {
                JanuarialType::Simple => "simple",
                JanuarialType::General => "general",
            },
            h_column(&r.h),
            r.g1,
            r.g2,
            r.alpha,
            r.genus,
            r.ok
        ));
    }
}

fn cmd_hecke(args: HeckeArgs) -> Result<(), CmdError> {
    let run = hecke_rows(
        args.p,
        args.k,
        Some(args.max_solutions),
        Parallelism::Auto,
    )?;
    if args.json {
        emit(serde_json::to_string(&run.rows).expect("rows serialize"));
    } else {
        print_row_table(&run.rows);
        if run.skipped_non_januarial > 0 {
            emit(format!("# skipped {} non-januarial solutions", run.skipped_non_januarial));
        }
    }
    if run.rows.iter().any(|r| !r.ok) {
        return Err(CmdError::Identity("census row failed its checks".into()));
    }
    Ok(())
}

fn cmd_family(args: FamilyArgs) -> Result<(), CmdError> {
    if args.k < 3 {
        return Err(CmdError::Input(format!(
            "family members need k >= 3 (and even k >= 4), got {}",
            args.k
        )));
    }
    let action = if args.k % 2 == 0 {
        even_family(args.k)?
    } else {
        odd_family(args.k)?
    };
    let analysis = analyze_action(&action, None)?;
    emit(analysis.report.to_json());
    Ok(())
}

fn cmd_census(args: CensusArgs) -> Result<(), CmdError> {
    let out: Census = census(
        args.p_max,
        args.k_max,
        Some(args.max_solutions),
        Parallelism::Auto,
    )?;
    if args.json {
        emit(serde_json::to_string(&out).expect("census serializes"));
    } else {
        print_row_table(&out.rows);
        emit(String::new());
        emit(format!("{:>5} {:>4} {:>5} {:>5}  conservation", "p", "k", "g_pk", "rows"));
        for g in &out.groups {
            emit(format!(
                "{:>5} {:>4} {:>5} {:>5}  {}",
                g.p, g.k, g.g_pk, g.rows, g.conservation
            ));
        }
        if out.skipped_non_januarial > 0 {
            emit(format!("# skipped {} non-januarial solutions", out.skipped_non_januarial));
        }
    }
    if !out.ok {
        return Err(CmdError::Identity(
            "census contains rows violating conservation or checks".into(),
        ));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CmdError> {
    let text = std::fs::read_to_string(&args.report)
        .map_err(|e| CmdError::Input(format!("{}: {e}", args.report.display())))?;
    let reports: Vec<JanuarialReport> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| CmdError::Input(e.to_string()))?
    } else {
        vec![serde_json::from_str(&text).map_err(|e| CmdError::Input(e.to_string()))?]
    };
    for r in &reports {
        if !r.checks.all_pass() {
            return Err(CmdError::Identity(format!(
                "stored checks contain a failure: {}",
                r.to_json()
            )));
        }
        // re-derive the genus identities from the stored numbers
        let l4 = r.h1() as i64 + r.h2() as i64 + r.alpha;
        let lemma4 = l4 % 2 == 0 && r.genus as i64 == r.g1 as i64 + r.g2 as i64 + l4 / 2 - 1;
        if !lemma4 {
            return Err(CmdError::Identity(format!(
                "general genus identity fails on stored values: {}",
                r.to_json()
            )));
        }
        if let HField::Simple(h) = r.h {
            if r.genus as i64 != r.g1 as i64 + r.g2 as i64 + h as i64 - 1 {
                return Err(CmdError::Identity(format!(
                    "simple genus identity fails on stored values: {}",
                    r.to_json()
                )));
            }
        }
    }
    emit(format!("verified {} report(s)", reports.len()));
    Ok(())
}
