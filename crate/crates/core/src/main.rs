use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use advlab::adversary::{
    check_functional_witness, check_relational_witness, gamma2_filtered, solve_adv, solve_adv_rel, AdvOptions,
    BoundCertificate, FunctionalDualWitness, RelationalDualWitness, SdpSummary, WitnessJson,
};
use advlab::composition::{
    functional_composition_check, relational_composition_check, CompositionOptions, CompositionReport, DirectMode,
};
use advlab::harness::{
    battery_scenarios, composition_markdown, find_scenario, load_function, load_relation, read_json, registry,
    run_report_markdown, run_scenarios, HarnessConfig, Pipeline, RunReport,
};
use advlab::linalg::DenseMatrix;
use advlab::AdvError;

#[derive(Parser)]
#[command(name = "adv", version, about = "Adversary bounds, witnesses and composition checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Solver tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for property batteries
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Largest SDP matrix order the solver accepts
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Output path (witness for solves, report otherwise)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// ADV± of a Boolean function
    Compute {
        #[arg(long)]
        function: String,
    },
    /// ADV_rel± of a relation
    RelCompute {
        #[arg(long)]
        relation: String,
    },
    /// Filtered γ₂ norm of a matrix file
    Gamma2 {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Check the composition identity for f ∘ gᴺ
    Compose {
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        relation: Option<String>,
        #[arg(long)]
        function: Option<String>,
        #[arg(long)]
        inner: String,
        /// Always run the direct solve of the composed relation
        #[arg(long, conflicts_with = "no_direct")]
        direct: bool,
        /// Never run the direct solve
        #[arg(long)]
        no_direct: bool,
    },
    /// Check a dual witness file
    Verify {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, conflicts_with = "function", required_unless_present = "function")]
        relation: Option<String>,
        #[arg(long)]
        function: Option<String>,
    },
    /// Run the property batteries
    Battery {
        /// Override the number of trials per battery
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run registered scenarios (all by default)
    Report {
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
        #[arg(long)]
        list: bool,
    },
}

/// `Ok(pass)` for a completed run, `Err` for anything that stopped it.
type CmdResult = Result<bool, AdvError>;

fn exit_code(e: &AdvError) -> u8 {
    match e {
        AdvError::Size(_) => 3,
        AdvError::Numeric(_) | AdvError::CertificateInvalid(_) => 1,
        _ => 2,
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    command: &'a str,
    input: &'a str,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    primal_value: Option<f64>,
    certificate: &'a BoundCertificate,
    sdp: &'a SdpSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_path: Option<&'a Path>,
}

fn adv_options(g: &GlobalArgs) -> AdvOptions {
    let mut opts = g.tol.map(AdvOptions::with_tol).unwrap_or_default();
    if let Some(d) = g.max_dim {
        opts.solver.max_dim = d;
    }
    opts
}

fn write_text(path: &Path, text: &str) -> Result<(), AdvError> {
    fs::write(path, text).map_err(|e| AdvError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn print_out(text: &str) -> Result<(), AdvError> {
    let mut stdout = io::stdout().lock();
    match writeln!(stdout, "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<String, AdvError> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn certificate_markdown(title: &str, value: f64, cert: &BoundCertificate) -> String {
    let mut out = format!("# {title}\n\nvalue {value:.9}, valid **{}**\n\n| residual | value |\n|---|---|\n", cert.valid);
    for (k, v) in &cert.residuals {
        out.push_str(&format!("| {k} | {v:.3e} |\n"));
    }
    out
}

/// Prints a solve and writes the witness to `--out` when given.
fn print_solve(global: &GlobalArgs, out: SolveOutput<'_>, witness: &WitnessJson) -> CmdResult {
    if let Some(path) = out.witness_path {
        write_text(path, &emit_json(witness)?)?;
    }
    let text = match global.format {
        Format::Json => emit_json(&out)?,
        Format::Markdown => certificate_markdown(&format!("{} {}", out.command, out.input), out.value, out.certificate),
    };
    print_out(&text)?;
    Ok(out.certificate.valid)
}

/// Prints a report, or writes it to `--out`.
fn deliver(global: &GlobalArgs, json: String, markdown: impl FnOnce() -> String) -> Result<(), AdvError> {
    let text = match global.format {
        Format::Json => json,
        Format::Markdown => markdown(),
    };
    match &global.out {
        Some(path) => write_text(path, &text),
        None => print_out(&text),
    }
}

fn deliver_run(global: &GlobalArgs, report: &RunReport) -> CmdResult {
    deliver(global, emit_json(report)?, || run_report_markdown(report))?;
    if let Some(capped) = report.scenarios.iter().find(|s| s.size_cap) {
        return Err(AdvError::Size(capped.error.clone().unwrap_or_default()));
    }
    Ok(report.pass)
}

fn deliver_composition(global: &GlobalArgs, report: &CompositionReport) -> CmdResult {
    deliver(global, emit_json(report)?, || composition_markdown(report))?;
    Ok(report.pass)
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    let opts = adv_options(g);
    match &cli.command {
        Command::Compute { function } => {
            let f = load_function(function)?;
            let s = solve_adv(&f, &opts)?;
            let out = SolveOutput {
                command: "compute",
                input: function,
                value: s.value,
                primal_value: None,
                certificate: &s.certificate,
                sdp: &s.sdp,
                witness_path: g.out.as_deref(),
            };
            print_solve(g, out, &s.witness.to_json())
        }
        Command::RelCompute { relation } => {
            let f = load_relation(relation)?;
            let s = solve_adv_rel(&f, &opts)?;
            let out = SolveOutput {
                command: "rel-compute",
                input: relation,
                value: s.value,
                primal_value: Some(s.primal_value),
                certificate: &s.certificate,
                sdp: &s.sdp,
                witness_path: g.out.as_deref(),
            };
            print_solve(g, out, &s.witness.to_json())
        }
        Command::Gamma2 { matrix } => {
            let a: DenseMatrix = read_json(matrix)?;
            let s = gamma2_filtered(&a, &opts)?;
            let input = matrix.display().to_string();
            let out = SolveOutput {
                command: "gamma2",
                input: &input,
                value: s.value,
                primal_value: None,
                certificate: &s.certificate,
                sdp: &s.sdp,
                witness_path: g.out.as_deref(),
            };
            print_solve(g, out, &s.witness.to_json())
        }
        Command::Compose { relation, function, inner, direct, no_direct } => {
            let mode = match (direct, no_direct) {
                (true, _) => DirectMode::Force,
                (_, true) => DirectMode::Skip,
                _ => DirectMode::Auto,
            };
            let copts = CompositionOptions { adv: opts, direct: mode, ..CompositionOptions::default() };
            let inner = load_function(inner)?;
            let report = match (relation, function) {
                (Some(r), _) => relational_composition_check(&load_relation(r)?, &inner, &copts)?,
                (None, Some(f)) => functional_composition_check(&load_function(f)?, &inner, &copts)?,
                (None, None) => unreachable!("clap requires one of --relation, --function"),
            };
            deliver_composition(g, &report)
        }
        Command::Verify { witness, relation, function } => {
            let raw: WitnessJson = read_json(witness)?;
            let tol = g.tol.unwrap_or(1e-6);
            let cert = match (relation, function) {
                (Some(r), _) => {
                    let f = load_relation(r)?;
                    check_relational_witness(&f, &RelationalDualWitness::from_json(&raw, &f)?, tol)?
                }
                (None, Some(name)) => {
                    let f = load_function(name)?;
                    check_functional_witness(&f, &FunctionalDualWitness::from_json(&raw, f.arity())?, tol)?
                }
                (None, None) => unreachable!("clap requires one of --relation, --function"),
            };
            deliver(g, emit_json(&cert)?, || certificate_markdown("verify", cert.value, &cert))?;
            Ok(cert.valid)
        }
        Command::Battery { trials } => {
            let mut scenarios = battery_scenarios();
            if let Some(t) = trials {
                for s in &mut scenarios {
                    if let Pipeline::Battery { trials, .. } = &mut s.pipeline {
                        *trials = *t;
                    }
                }
            }
            let cfg = HarnessConfig { seed: g.seed, adv: opts, ..HarnessConfig::default() };
            deliver_run(g, &run_scenarios(&scenarios, &cfg))
        }
        Command::Report { scenarios, list } => {
            if *list {
                let names: Vec<String> = registry().into_iter().map(|s| s.name).collect();
                print_out(&names.join("\n"))?;
                return Ok(true);
            }
            let selected = if scenarios.is_empty() {
                registry()
            } else {
                scenarios
                    .iter()
                    .map(|n| find_scenario(n).ok_or_else(|| AdvError::Config(format!("unknown scenario {n:?}"))))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let cfg = HarnessConfig { seed: g.seed, adv: opts, ..HarnessConfig::default() };
            deliver_run(g, &run_scenarios(&selected, &cfg))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("adv: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
