//! JSON-in, JSON-out command line front end for the `lulc` library.
//!
//! Every subcommand reads documents given as a file path, inline JSON, or
//! `-` for stdin, and writes one JSON document to stdout (or `--output`).
//! Domain failures exit 1 with a machine-readable error object on stderr;
//! usage errors exit 2.

use std::fmt::Display;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::json;

use lulc::equiv::{
    dlu_check, is_semi_clifford, lc_equivalent_bruteforce, semi_clifford_decompose,
    SingleQubitUnitary,
};
use lulc::gf2::{BitMatrix, BitVec};
use lulc::quadform::{
    complex_representable, counterexample_search, sampled_search, z2l_representable, PhaseSystem,
    QuadraticForm, SearchConfig, MAX_EXHAUSTIVE_N, MAX_LEVEL, MAX_SAMPLED_N,
};
use lulc::stabilizer::StabilizerGroup;
use lulc::standardform::{extract, standardize};
use lulc::statevec::{synthesize_state, StateVector};

#[derive(Parser)]
#[command(
    name = "lulc",
    version,
    about = "Stabilizer standard forms, diagonal local equivalence, and phase representability"
)]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a stabilizer group document and report its shape.
    Validate(InputArg),
    /// Local-unitary invariants of a stabilizer group.
    Invariants(InputArg),
    /// Dense state vector of a maximal stabilizer group.
    Synth(InputArg),
    /// Standard form (support basis, offset, amplitude exponents) of a state.
    Extract(InputArg),
    /// Move a stabilizer state to standard position and report the gates.
    Standardize(InputArg),
    /// Purify a stabilizer code to a state on system plus ancilla qubits.
    Purify(InputArg),
    /// Classify a 2x2 unitary; factor it as Clifford x diagonal x Clifford.
    Semiclifford(InputArg),
    /// Brute-force search for a local Clifford relating two states.
    LcOracle(PairArgs),
    /// Decide diagonal local-unitary equivalence of two stabilizer states.
    DluCheck(PairArgs),
    /// Phase representability of a sign pattern on a GF(2) subspace.
    Quadrep(QuadrepArgs),
    /// Scan subspace/form instances for sign patterns no root-of-unity
    /// level reaches although unconstrained phases do.
    Search(SearchArgs),
}

#[derive(Args)]
struct InputArg {
    /// Path to a JSON document, inline JSON, or - for stdin.
    input: String,
}

#[derive(Args)]
struct PairArgs {
    /// First state: path, inline JSON, or - for stdin.
    left: String,
    /// Second state: path or inline JSON.
    right: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("pattern").required(true).args(["f", "theta"])))]
struct QuadrepArgs {
    /// Subspace basis rows as a JSON array of bit strings.
    #[arg(long = "S", value_name = "JSON")]
    s_rows: String,
    /// Target signs along the exponent stream, e.g. 1,-1,1,1: entry j is
    /// the sign on the combination of rows named by the bits of j read
    /// little-endian.
    #[arg(long, value_name = "SIGNS")]
    f: Option<String>,
    /// Ambient quadratic form: strict upper-triangular cross-term rows as
    /// a JSON array of bit strings.
    #[arg(long, value_name = "JSON", requires = "lambda", conflicts_with = "f")]
    theta: Option<String>,
    /// Ambient quadratic form: linear-term bit string.
    #[arg(long, requires = "theta")]
    lambda: Option<String>,
    /// Phases are 2^level-th roots of unity.
    #[arg(long, default_value_t = 2, conflicts_with = "complex")]
    level: u32,
    /// Decide with unconstrained modulus-one phases instead of roots.
    #[arg(long)]
    complex: bool,
    /// Ambient variable count; required only when S has no rows.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "samples"])))]
struct SearchArgs {
    /// Ambient variable count.
    #[arg(long)]
    n: usize,
    /// Visit every canonical subspace and every form on it.
    #[arg(long)]
    exhaustive: bool,
    /// Draw this many random instances instead of the exhaustive stream.
    #[arg(long, value_name = "COUNT")]
    samples: Option<u64>,
    /// Root-of-unity level the reported hits must escape.
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Keep only slice I of M congruent slices of the instance stream.
    #[arg(long, default_value = "0/1", value_name = "I/M")]
    partition: String,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

fn domain<E: Display>(kind: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::new(kind, e.to_string())
}

/// Resolves an input argument: `-` reads stdin, a leading `{` or `[` is
/// inline JSON, anything else is a path.
fn read_document(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(domain("io"))?;
        return Ok(buf);
    }
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(input.to_string());
    }
    std::fs::read_to_string(input).map_err(|e| CliError::new("io", format!("{input}: {e}")))
}

fn parse_group(input: &str) -> Result<StabilizerGroup, CliError> {
    serde_json::from_str(&read_document(input)?).map_err(domain("input"))
}

fn parse_state(input: &str) -> Result<StateVector, CliError> {
    serde_json::from_str(&read_document(input)?).map_err(domain("input"))
}

fn parse_state_pair(args: &PairArgs) -> Result<(StateVector, StateVector), CliError> {
    let left = parse_state(&args.left)?;
    let right = parse_state(&args.right)?;
    if left.n_qubits() != right.n_qubits() {
        return Err(CliError::new(
            "input",
            format!(
                "states live on {} and {} qubits; comparisons need equal sizes",
                left.n_qubits(),
                right.n_qubits()
            ),
        ));
    }
    Ok((left, right))
}

/// Parses a JSON array of equal-length bit strings into a matrix.
fn parse_bit_rows(raw: &str, what: &str, n: Option<usize>) -> Result<BitMatrix, CliError> {
    let rows: Vec<String> =
        serde_json::from_str(raw).map_err(|e| CliError::new("input", format!("{what}: {e}")))?;
    let mut bits = Vec::with_capacity(rows.len());
    for row in &rows {
        bits.push(BitVec::parse(row).map_err(|e| CliError::new("input", format!("{what}: {e}")))?);
    }
    let cols = match (bits.first().map(BitVec::len), n) {
        (Some(got), Some(want)) if got != want => {
            return Err(CliError::new(
                "input",
                format!("{what}: rows have {got} columns, expected {want}"),
            ));
        }
        (Some(got), _) => got,
        (None, Some(want)) => want,
        (None, None) => {
            return Err(CliError::new(
                "input",
                format!("{what} is empty; pass --n for the ambient size"),
            ));
        }
    };
    if let Some(bad) = bits.iter().find(|r| r.len() != cols) {
        return Err(CliError::new(
            "input",
            format!("{what}: row {bad} does not have {cols} columns"),
        ));
    }
    Ok(BitMatrix::from_rows(bits, cols))
}

/// Parses a comma list of +1/-1 signs into the false/true value stream.
fn parse_signs(raw: &str) -> Result<Vec<bool>, CliError> {
    raw.split(',')
        .map(|tok| match tok.trim() {
            "1" | "+1" => Ok(false),
            "-1" => Ok(true),
            other => Err(CliError::new(
                "input",
                format!("sign {other:?} is not 1 or -1"),
            )),
        })
        .collect()
}

fn parse_partition(raw: &str) -> Result<(u64, u64), CliError> {
    let err = || CliError::new("input", format!("partition {raw:?} is not of the form I/M"));
    let (i, m) = raw.split_once('/').ok_or_else(err)?;
    let index: u64 = i.trim().parse().map_err(|_| err())?;
    let count: u64 = m.trim().parse().map_err(|_| err())?;
    if count == 0 || index >= count {
        return Err(CliError::new(
            "input",
            format!("partition index {index} is not below the count {count}"),
        ));
    }
    Ok((index, count))
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    match &cli.command {
        Command::Validate(arg) => {
            let g = parse_group(&arg.input)?;
            let gens: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
            Ok(json!({
                "n": g.n_qubits(),
                "k": g.k(),
                "maximal": g.is_maximal(),
                "generators": gens,
            }))
        }
        Command::Invariants(arg) => {
            let g = parse_group(&arg.input)?;
            serde_json::to_value(g.lu_invariants()).map_err(domain("encode"))
        }
        Command::Synth(arg) => {
            let g = parse_group(&arg.input)?;
            let psi = synthesize_state(&g).map_err(domain("statevec"))?;
            serde_json::to_value(psi).map_err(domain("encode"))
        }
        Command::Extract(arg) => {
            let psi = parse_state(&arg.input)?;
            let sf = extract(&psi).map_err(domain("standard_form"))?;
            serde_json::to_value(sf).map_err(domain("encode"))
        }
        Command::Standardize(arg) => {
            let psi = parse_state(&arg.input)?;
            let sf = extract(&psi).map_err(domain("standard_form"))?;
            let (state, q, record) = standardize(&sf);
            Ok(json!({
                "standard_form": sf,
                "state": state,
                "q_tilde": q,
                "record": record,
            }))
        }
        Command::Purify(arg) => {
            let g = parse_group(&arg.input)?;
            let p = lulc::purify::purify(&g).map_err(domain("purify"))?;
            serde_json::to_value(p).map_err(domain("encode"))
        }
        Command::Semiclifford(arg) => {
            let u: SingleQubitUnitary =
                serde_json::from_str(&read_document(&arg.input)?).map_err(domain("input"))?;
            let report = is_semi_clifford(&u);
            let decomposition = report
                .semi
                .then(|| semi_clifford_decompose(&u))
                .transpose()
                .map_err(domain("equiv"))?;
            Ok(json!({
                "semi": report.semi,
                "clifford": report.clifford,
                "fixed_axis": report.fixed_axis,
                "decomposition": decomposition,
            }))
        }
        Command::LcOracle(args) => {
            let (left, right) = parse_state_pair(args)?;
            let found = lc_equivalent_bruteforce(&left, &right).map_err(domain("equiv"))?;
            Ok(json!({
                "equivalent": found.is_some(),
                "elements": found,
            }))
        }
        Command::DluCheck(args) => {
            let (left, right) = parse_state_pair(args)?;
            let verdict = dlu_check(&left, &right).map_err(domain("equiv"))?;
            serde_json::to_value(verdict).map_err(domain("encode"))
        }
        Command::Quadrep(args) => run_quadrep(args),
        Command::Search(args) => run_search(args),
    }
}

fn run_quadrep(args: &QuadrepArgs) -> Result<serde_json::Value, CliError> {
    let s = parse_bit_rows(&args.s_rows, "S", args.n)?;
    let n = s.n_cols();
    let ps = if let Some(f) = &args.f {
        let values = parse_signs(f)?;
        PhaseSystem::from_values(s, &values).map_err(domain("quadform"))?
    } else {
        let theta = parse_bit_rows(
            args.theta.as_deref().expect("required by the arg group"),
            "theta",
            Some(n),
        )?;
        if theta.n_rows() != n {
            return Err(CliError::new(
                "input",
                format!("theta has {} rows, expected {n}", theta.n_rows()),
            ));
        }
        let lambda = BitVec::parse(args.lambda.as_deref().expect("clap enforces the pairing"))
            .map_err(domain("input"))?;
        let q = QuadraticForm::new(theta, lambda).map_err(domain("quadform"))?;
        PhaseSystem::new(s, q).map_err(domain("quadform"))?
    };
    if args.complex {
        let witness = complex_representable(&ps).map_err(domain("quadform"))?;
        Ok(json!({
            "mode": "complex",
            "system": ps,
            "representable": witness.is_some(),
            "witness": witness.map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }))
    } else {
        let assignment = z2l_representable(&ps, args.level).map_err(domain("quadform"))?;
        Ok(json!({
            "mode": "roots",
            "level": args.level,
            "system": ps,
            "representable": assignment.is_some(),
            "assignment": assignment,
        }))
    }
}

fn run_search(args: &SearchArgs) -> Result<serde_json::Value, CliError> {
    let (partition_index, partition_count) = parse_partition(&args.partition)?;
    if !(1..=MAX_LEVEL).contains(&args.level) {
        return Err(CliError::new(
            "input",
            format!("level {} is outside 1..={MAX_LEVEL}", args.level),
        ));
    }
    if args.workers == 0 {
        return Err(CliError::new("input", "need at least one worker"));
    }
    let cap = if args.exhaustive {
        MAX_EXHAUSTIVE_N
    } else {
        MAX_SAMPLED_N
    };
    if args.n > cap {
        return Err(CliError::new(
            "input",
            format!("n = {} exceeds the cap of {cap} for this mode", args.n),
        ));
    }
    let mut cfg = SearchConfig::new(args.n);
    cfg.level = args.level;
    cfg.partition_index = partition_index;
    cfg.partition_count = partition_count;
    cfg.workers = args.workers;
    let report = if args.exhaustive {
        counterexample_search(&cfg)
    } else {
        sampled_search(
            &cfg,
            args.samples.expect("required by the arg group"),
            args.seed,
        )
    };
    serde_json::to_value(report).map_err(domain("encode"))
}

fn emit(output: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(domain("encode"))?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::new("io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|value| emit(cli.output.as_ref(), &value)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = json!({"error": {"kind": e.kind, "message": e.message}});
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}
