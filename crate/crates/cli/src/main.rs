use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use factorfree::{
    check_bruteforce, check_semantic, check_structural, complexity_report, io, minimize, product,
    search, BoolOp, Dfa, FactorFreeVerdict, Family, SearchConfig, WitnessParams,
};

mod verify;

#[derive(Parser)]
#[command(
    name = "factorfree",
    version,
    about = "Factor-free regular languages and union state complexity"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout (a directory for `search`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a witness automaton A_n or B_m.
    Witness(WitnessArgs),
    /// Decide whether the language of an automaton is factor-free.
    Check(CheckArgs),
    /// State complexity of a boolean combination of two automata.
    Complexity(PairArgs),
    /// Sweep witness pairs and compare the union complexity with the formula.
    VerifyTheorem(VerifyArgs),
    /// Enumerate or sample small factor-free automata and rank union pairs.
    Search(SearchArgs),
    /// Minimize an automaton.
    Minimize(FileArg),
    /// Summarize an automaton.
    Info(FileArg),
    /// Graphviz rendering of an automaton, or of a product when two files are given.
    Dot(DotArgs),
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    family: Family,
    /// Size of A_n.
    #[arg(long, conflicts_with = "m")]
    n: Option<usize>,
    /// Size of B_m.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Lemma,
    Semantic,
    Brute,
}

#[derive(Args)]
struct CheckArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value = "semantic")]
    method: Method,
    /// Longest word examined by the brute-force method (default 2n+2).
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Args)]
struct PairArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long, default_value = "union")]
    mode: BoolOp,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sizes of A, e.g. `10..14` (inclusive).
    #[arg(long, default_value = "10..14")]
    n: String,
    /// Sizes of B, e.g. `10..14` (inclusive).
    #[arg(long, default_value = "10..14")]
    m: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    states: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Pairs drawn in random mode.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leaderboard rows to print and records whose operands are saved.
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct FileArg {
    path: PathBuf,
}

#[derive(Args)]
struct DotArgs {
    path: PathBuf,
    /// Second operand; renders the reachable product with pair labels.
    other: Option<PathBuf>,
    #[arg(long, default_value = "union")]
    mode: BoolOp,
}

/// A command's result: text to emit and the process exit status.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match emit(cli.out.as_deref(), &cli.command, &outcome.text) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => fail(e),
        },
        Err(e) => fail(e),
    }
}

/// Print the error chain, skipping causes whose text the previous layer
/// already included, and exit with status 2.
fn fail(e: anyhow::Error) -> ExitCode {
    let mut parts: Vec<String> = Vec::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !parts.last().is_some_and(|prev| prev.ends_with(&text)) {
            parts.push(text);
        }
    }
    eprintln!("error: {}", parts.join(": "));
    ExitCode::from(2)
}

fn emit(out: Option<&Path>, command: &Command, text: &str) -> Result<()> {
    match out {
        // search writes its own files into the output directory
        Some(_) if matches!(command, Command::Search(_)) => Ok(()),
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn load(path: &Path) -> Result<Dfa> {
    io::read_dfa(path).with_context(|| format!("reading {}", path.display()))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_line<I: IntoIterator<Item = S>, S: AsRef<str>>(fields: I) -> String {
    let fields: Vec<String> = fields.into_iter().map(|s| s.as_ref().to_string()).collect();
    fields.join(",") + "\n"
}

fn unsupported(command: &str, format: Format) -> anyhow::Error {
    anyhow::anyhow!("{command} does not support --format {format:?}")
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Witness(args) => witness(args, format.unwrap_or(Format::Json)),
        Command::Check(args) => check(args, format.unwrap_or(Format::Pretty)),
        Command::Complexity(args) => complexity(args, format.unwrap_or(Format::Csv)),
        Command::VerifyTheorem(args) => verify_theorem(args, format.unwrap_or(Format::Csv)),
        Command::Search(args) => {
            run_search(args, cli.out.as_deref(), format.unwrap_or(Format::Csv))
        }
        Command::Minimize(args) => run_minimize(&args.path, format.unwrap_or(Format::Json)),
        Command::Info(args) => info(&args.path, format.unwrap_or(Format::Pretty)),
        Command::Dot(args) => dot(args),
    }
}

fn witness(args: &WitnessArgs, format: Format) -> Result<Outcome> {
    let size = match (args.family, args.n, args.m) {
        (_, Some(s), None) | (_, None, Some(s)) => s,
        (Family::A, None, None) => bail!("--n is required for family A"),
        (Family::B, None, None) => bail!("--m is required for family B"),
        _ => unreachable!("clap rejects --n together with --m"),
    };
    let dfa = WitnessParams::new(args.family, size)?.build()?;
    Ok(Outcome::ok(match format {
        Format::Json => io::to_json(&dfa) + "\n",
        Format::Dot => io::to_dot(&dfa),
        Format::Pretty => dfa.to_string(),
        Format::Csv => return Err(unsupported("witness", format)),
    }))
}

fn check(args: &CheckArgs, format: Format) -> Result<Outcome> {
    let input = load(&args.path)?;
    let mut notes = Vec::new();
    let (dfa, verdict) = match args.method {
        Method::Lemma => {
            let minimal = minimize(&input).minimal;
            if minimal.n_states() != input.n_states() {
                notes.push(format!(
                    "minimized from {} to {} states before the structural check",
                    input.n_states(),
                    minimal.n_states()
                ));
            } else {
                notes.push("input is already minimal".to_string());
            }
            let verdict = check_structural(&minimal)?;
            (minimal, verdict)
        }
        Method::Semantic => {
            let verdict = check_semantic(&input);
            (input, verdict)
        }
        Method::Brute => {
            let max_len = args.max_len.unwrap_or(2 * input.n_states() + 2);
            notes.push(format!("examined all words up to length {max_len}"));
            let verdict = match check_bruteforce(&input, max_len) {
                Some(d) => FactorFreeVerdict {
                    failure: Some(factorfree::Failure::Decomposition(d)),
                },
                None => FactorFreeVerdict::factor_free(),
            };
            (input, verdict)
        }
    };
    let report = verdict.report(&dfa);
    let code = if report.factor_free { 0 } else { 1 };
    let text = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            value["method"] = serde_json::json!(format!("{:?}", args.method).to_lowercase());
            value["notes"] = serde_json::json!(notes);
            json(&value)?
        }
        Format::Pretty => {
            let mut text = String::new();
            for note in &notes {
                text += &format!("note: {note}\n");
            }
            text + &format!("{report}\n")
        }
        other => return Err(unsupported("check", other)),
    };
    Ok(Outcome { text, code })
}

fn complexity(args: &PairArgs, format: Format) -> Result<Outcome> {
    let report = complexity_report(&load(&args.left)?, &load(&args.right)?, args.mode)?;
    Ok(Outcome::ok(match format {
        Format::Csv => {
            csv_line(factorfree::ComplexityReport::CSV_HEADER) + &csv_line(report.csv_record())
        }
        Format::Json => json(&report)?,
        Format::Pretty => {
            let b = &report.bound_table;
            format!(
                "operands      {} x {} states\n\
                 mode          {}\n\
                 reachable     {}\n\
                 minimal       {}\n\
                 conjectured   {} (gap {:+})\n\
                 paper         {} (gap {:+})\n\
                 theorem       {} (gap {:+})\n\
                 ternary       {} (gap {:+})\n",
                report.n_left,
                report.n_right,
                report.mode,
                report.reachable_count,
                report.minimal_count,
                b.conjectured,
                b.gap_conjectured,
                b.paper,
                b.gap_paper,
                b.theorem,
                b.gap_theorem,
                b.ternary,
                b.gap_ternary,
            )
        }
        Format::Dot => return Err(unsupported("complexity", format)),
    }))
}

fn verify_theorem(args: &VerifyArgs, format: Format) -> Result<Outcome> {
    let rows = verify::sweep(verify::parse_range(&args.n)?, verify::parse_range(&args.m)?)?;
    let code = if rows.iter().any(verify::VerificationRow::failed) {
        1
    } else {
        0
    };
    let text = match format {
        Format::Csv => {
            let mut text = csv_line(verify::CSV_HEADER);
            for row in &rows {
                text += &csv_line(row.record());
            }
            text
        }
        Format::Json => json(&rows)?,
        Format::Pretty => {
            let mut text = format!(
                "{:>4} {:>4} {:>9} {:>7} {:>7} {:>6} {:>8} {:>7}\n",
                "n", "m", "reachable", "minimal", "formula", "match", "asserted", "symdiff"
            );
            for r in &rows {
                text += &format!(
                    "{:>4} {:>4} {:>9} {:>7} {:>7} {:>6} {:>8} {:>7}\n",
                    r.n,
                    r.m,
                    r.reachable,
                    r.minimal,
                    r.formula,
                    r.matches,
                    r.asserted,
                    r.symdiff_minimal
                );
            }
            let failed = rows.iter().filter(|r| r.failed()).count();
            let asserted = rows.iter().filter(|r| r.asserted).count();
            text + &format!("{} of {asserted} asserted rows match\n", asserted - failed)
        }
        Format::Dot => return Err(unsupported("verify-theorem", format)),
    };
    Ok(Outcome { text, code })
}

fn run_search(args: &SearchArgs, out: Option<&Path>, format: Format) -> Result<Outcome> {
    let config = match args.mode {
        ModeArg::Exhaustive => SearchConfig::exhaustive(args.states),
        ModeArg::Random => SearchConfig::random(args.states, args.budget, args.seed),
    };
    config.validate()?;
    let outcome = search(&config)?;
    let summary = format!(
        "{} candidates, {} tables examined, {} rejected, {} pairs ranked\n",
        outcome.candidates.len(),
        outcome.tables_examined,
        outcome.tables_rejected,
        outcome.records.len()
    );
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let file = fs::File::create(dir.join("leaderboard.csv"))?;
            outcome.write_csv(std::io::BufWriter::new(file), None)?;
            outcome.write_top_dfas(dir, args.top)?;
            eprint!("{summary}");
            Ok(Outcome::ok(String::new()))
        }
        None => {
            if format != Format::Csv {
                return Err(unsupported("search", format));
            }
            let mut buf = Vec::new();
            outcome.write_csv(&mut buf, Some(args.top))?;
            eprint!("{summary}");
            Ok(Outcome::ok(String::from_utf8(buf)?))
        }
    }
}

fn run_minimize(path: &Path, format: Format) -> Result<Outcome> {
    let result = minimize(&load(path)?);
    Ok(Outcome::ok(match format {
        Format::Json => io::to_json(&result.minimal) + "\n",
        Format::Dot => io::to_dot(&result.minimal),
        Format::Pretty => {
            let mut text = String::new();
            for (i, block) in result.partition.iter().enumerate() {
                let states: Vec<String> = block.iter().map(ToString::to_string).collect();
                text += &format!("{} <- {{{}}}\n", i + 1, states.join(", "));
            }
            text + &result.minimal.to_string()
        }
        Format::Csv => return Err(unsupported("minimize", format)),
    }))
}

fn info(path: &Path, format: Format) -> Result<Outcome> {
    let dfa = load(path)?;
    let reachable = dfa.reachable_states().len();
    let minimal = minimize(&dfa).minimal.n_states();
    let factor_free = check_semantic(&dfa).is_factor_free();
    let value = serde_json::json!({
        "alphabet": dfa.alphabet().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "states": dfa.n_states(),
        "start": dfa.start(),
        "finals": dfa.finals().collect::<Vec<_>>(),
        "reachable": reachable,
        "state_complexity": minimal,
        "reduced": reachable == dfa.n_states() && minimal == dfa.n_states(),
        "traps": dfa.traps(),
        "empty_states": dfa.empty_states(),
        "factor_free": factor_free,
    });
    Ok(Outcome::ok(match format {
        Format::Json => json(&value)?,
        Format::Pretty => {
            let obj = value.as_object().expect("object literal");
            let mut text = String::new();
            for (key, v) in obj {
                text += &format!("{key:<17}{v}\n");
            }
            text
        }
        other => return Err(unsupported("info", other)),
    }))
}

fn dot(args: &DotArgs) -> Result<Outcome> {
    let left = load(&args.path)?;
    Ok(Outcome::ok(match &args.other {
        None => io::to_dot(&left),
        Some(other) => product(&left, &load(other)?, args.mode)?.to_dot(),
    }))
}
