use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rulebases::bounds::{build_breakpoints, BreakpointTable};
use rulebases::oracle::FastGenerators;
use rulebases::persist::{self, IndexDocument};
use rulebases::verify::{self, VerifyConfig};
use rulebases::{lattice, rules, Format, LatticeIndex, Rational, TransactionDB};

#[derive(Parser)]
#[command(
    name = "rulebases",
    version,
    about = "Closed itemsets, minimal generators and concise rule bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the frequent closed sets and minimal generators.
    Mine(MineArgs),
    /// Generate a rule basis.
    Rules(RulesArgs),
    /// Check the generators against brute force on small databases.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Transaction file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// basket or csv-matrix; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
    /// Relative threshold such as 0.15, 3/20 or 0.1%.
    #[arg(long, conflicts_with = "min_count")]
    min_support: Option<Rational>,
    /// Absolute threshold K, read as K/n.
    #[arg(long)]
    min_count: Option<u64>,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print the index document instead of the listing.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the index document to this path.
    #[arg(long)]
    save_index: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Complete,
    Twophase,
    Heuristic,
    Bstar,
}

#[derive(Args)]
struct RulesArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Minimum confidence.
    #[arg(long)]
    confidence: Rational,
    #[arg(long, value_enum, default_value = "complete")]
    algorithm: Algorithm,
    /// Reuse an index written by --save-index instead of mining.
    #[arg(long)]
    load_index: Option<PathBuf>,
    #[arg(long)]
    save_index: Option<PathBuf>,
    /// One JSON object per rule.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_items: usize,
    #[arg(long, default_value_t = 12)]
    max_transactions: usize,
    /// Only print failing cases and the summary.
    #[arg(long)]
    quiet: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn check_unit(name: &str, r: Rational) -> Result<Rational, Failure> {
    if r.in_unit_interval() {
        Ok(r)
    } else {
        Err(usage(format!("--{name} must lie in (0, 1], got {r}")))
    }
}

impl InputArgs {
    fn load_db(&self) -> Result<TransactionDB, Failure> {
        let path = self
            .input
            .as_deref()
            .ok_or_else(|| usage("--input is required"))?;
        let format =
            self.format
                .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
                    Some("csv") => Format::CsvMatrix,
                    _ => Format::Basket,
                });
        TransactionDB::parse(&read_file(path)?, format)
            .map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    /// The support threshold, if one was given, normalized against `n`.
    fn tau(&self, n: u64) -> Result<Option<Rational>, Failure> {
        match (self.min_support, self.min_count) {
            (Some(r), _) => check_unit("min-support", r).map(Some),
            (None, Some(k)) if k == 0 || k > n => {
                Err(usage(format!("--min-count must lie in 1..={n}, got {k}")))
            }
            (None, Some(k)) => Ok(Some(Rational::from_counts(k, n))),
            (None, None) => Ok(None),
        }
    }

    fn mine(&self) -> Result<(TransactionDB, LatticeIndex), Failure> {
        let db = self.load_db()?;
        let tau = self
            .tau(db.n())?
            .ok_or_else(|| usage("one of --min-support or --min-count is required"))?;
        let index = lattice::mine(&db, tau)?;
        Ok((db, index))
    }
}

fn save_index(path: &Path, index: &LatticeIndex, table: &BreakpointTable) -> CmdResult {
    fs::write(path, IndexDocument::new(index, table).to_json())
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_mine(args: &MineArgs) -> CmdResult {
    let (_, index) = args.input.mine()?;
    eprintln!(
        "{} closed sets, {} generators at tau={}",
        index.closed().len(),
        index.generators().len(),
        index.tau()
    );
    let table = (args.json || args.save_index.is_some()).then(|| build_breakpoints(&index));
    if let (Some(path), Some(table)) = (&args.save_index, &table) {
        save_index(path, &index, table)?;
    }
    let text = match &table {
        Some(table) if args.json => IndexDocument::new(&index, table).to_json(),
        _ => persist::lattice_to_text(&index),
    };
    write_output(args.out.as_deref(), &text)
}

fn index_for_rules(args: &RulesArgs) -> Result<(LatticeIndex, BreakpointTable), Failure> {
    let Some(path) = &args.load_index else {
        let (_, index) = args.input.mine()?;
        let table = build_breakpoints(&index);
        return Ok((index, table));
    };
    let (index, table) = persist::load_index(&read_file(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if let Some(tau) = args.input.tau(index.n())? {
        if tau != index.tau() {
            return Err(usage(format!(
                "index {} was built for tau={}, not {tau}",
                path.display(),
                index.tau()
            )));
        }
    }
    if args.input.input.is_some() {
        let db = args.input.load_db()?;
        if db.n() != index.n() || db.item_names() != index.item_names() {
            return Err(usage(format!(
                "index {} does not belong to this input",
                path.display()
            )));
        }
    }
    Ok((index, table))
}

fn cmd_rules(args: &RulesArgs) -> CmdResult {
    let gamma = check_unit("confidence", args.confidence)?;
    let (index, table) = index_for_rules(args)?;
    if let Some(path) = &args.save_index {
        save_index(path, &index, &table)?;
    }
    let set = match args.algorithm {
        Algorithm::Complete => rules::gen_rr_complete(&index, gamma)?,
        Algorithm::Twophase => rules::gen_rr_twophase(&table, &index, gamma)?,
        Algorithm::Heuristic => rules::gen_rr_heuristic(&index, gamma)?,
        Algorithm::Bstar => rules::gen_bstar(&index, gamma)?,
    };
    eprintln!("{} rules at tau={} gamma={gamma}", set.len(), index.tau());
    let text = if args.json {
        persist::rules_to_json_lines(&set, index.item_names())
    } else {
        persist::rules_to_text(&set, index.item_names())
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let config = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        max_items: args.max_items,
        max_transactions: args.max_transactions,
        ..VerifyConfig::default()
    };
    let mut stdout = io::stdout().lock();
    let mut write_err = None;
    let summary = verify::run(&config, &FastGenerators::default(), |case| {
        if !args.quiet || !case.passed() {
            if let Err(e) = writeln!(stdout, "{case}") {
                write_err.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    writeln!(
        stdout,
        "{}: {summary}",
        if summary.passed() { "PASS" } else { "FAIL" }
    )?;
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("verification failed in {} cases", summary.failed),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Rules(args) => cmd_rules(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
