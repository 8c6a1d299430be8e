mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use gmclone::analysis::{anticlone_fidelity, clone_fidelity, nonlinearity_gap, scaling_csv, scaling_sweep};
use gmclone::export::{f17s, write_mps, F17};
use gmclone::gm::{build_gm, GmParameters};
use gmclone::mps::{bond_dimension, mps_from_state_in, mps_to_state, Gauge, DEFAULT_TOL};
use gmclone::prep::{assemble_state, read_matrix, run_pipeline, ParityClass, GM_MATRIX_FILE};
use gmclone::qubit::Qubit;
use gmclone::state::StateVector;
use gmclone::{Error, Result};
use serde::Serialize;

use input::InputSpec;

const MPS_FILE: &str = "mps.json";
const COMPILE_REPORT_FILE: &str = "compile_report.json";
const ANALYSIS_FILE: &str = "analysis.json";
const SCALING_FILE: &str = "scaling.csv";

#[derive(Parser)]
#[command(
    name = "gmclone",
    version,
    about = "Prepare, compile and analyze Gisin-Massar cloner output states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the FullBitString, GMBitString and GMMatrix stage files.
    Prepare(Common),
    /// Compile the output state to an MPS and report its bond spectrum.
    Compile(Common),
    /// Report clone and anticlone fidelities and the nonlinearity gap.
    Analyze(Common),
    /// Bond dimension for M = 1..clones as CSV.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Number of clones M.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    clones: u32,
    /// basis:0 | basis:1 | equatorial:PHI | amps:RE,IM,RE,IM
    #[arg(long, default_value = "equatorial:0")]
    input: InputSpec,
    /// Relative singular-value cutoff in [0, 1).
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,
    /// Output directory; the current one if omitted (analyze only writes
    /// a file when this is given).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Where each cut's singular values go when compiling.
    #[arg(long, value_enum, default_value_t = GaugeArg::LeftCanonical)]
    gauge: GaugeArg,
}

impl Common {
    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaugeArg {
    LeftCanonical,
    SingularLeft,
}

impl GaugeArg {
    fn gauge(self) -> Gauge {
        match self {
            GaugeArg::LeftCanonical => Gauge::LeftCanonical,
            GaugeArg::SingularLeft => Gauge::SingularLeft,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GaugeArg::LeftCanonical => "left-canonical",
            GaugeArg::SingularLeft => "singular-left",
        }
    }
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..1.0).contains(&t) {
        Ok(t)
    } else {
        Err(format!("{t} is outside [0, 1)"))
    }
}

fn pair(q: &Qubit) -> [[F17; 2]; 2] {
    [
        [F17(q.alpha().re), F17(q.alpha().im)],
        [F17(q.beta().re), F17(q.beta().im)],
    ]
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::create_dir_all(path.parent().unwrap_or(Path::new("."))).map_err(|e| Error::io(path, e))?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct PrepareSummary {
    #[serde(rename = "M")]
    clones: usize,
    full_bitstrings: usize,
    gm_bitstrings: usize,
    clone_of_0: usize,
    clone_of_1: usize,
    files: [String; 3],
}

fn prepare(c: &Common) -> Result<String> {
    let m = c.clones as usize;
    let (art, records) = run_pipeline(m, &c.out_dir())?;
    let count = |class| records.iter().filter(|r| r.parity_class == class).count();
    to_json(&PrepareSummary {
        clones: m,
        full_bitstrings: 1 << (2 * m - 1),
        gm_bitstrings: records.len(),
        clone_of_0: count(ParityClass::CloneOf0),
        clone_of_1: count(ParityClass::CloneOf1),
        files: [&art.full_path, &art.gm_path, &art.matrix_path].map(|p| p.display().to_string()),
    })
}

#[derive(Serialize)]
struct CompileReport {
    #[serde(rename = "M")]
    clones: usize,
    input: [[F17; 2]; 2],
    source: &'static str,
    gauge: &'static str,
    tol: F17,
    bond_dims: Vec<usize>,
    bond_dimension: usize,
    retained_ranks: Vec<usize>,
    singular_values_per_cut: Vec<Vec<F17>>,
    discarded_norm: F17,
    roundtrip_error: F17,
}

/// The requested output state and where it came from. Basis inputs are
/// assembled from a GMMatrix stage in the output directory when one exists.
fn source_state(c: &Common) -> Result<(StateVector, &'static str)> {
    let m = c.clones as usize;
    let matrix = c.out_dir().join(GM_MATRIX_FILE);
    if let (Some(bit), true) = (c.input.basis_bit(), matrix.is_file()) {
        let records = read_matrix(&matrix, m)?;
        return Ok((assemble_state(&records, m, bit)?, "GMMatrix"));
    }
    Ok((build_gm(&GmParameters::new(m, c.input.qubit())?)?, "builder"))
}

fn compile(c: &Common) -> Result<String> {
    let (state, source) = source_state(c)?;
    let (mps, spectrum) = mps_from_state_in(&state, c.tol, c.gauge.gauge())?;
    let roundtrip_error = mps_to_state(&mps)?.distance(&state);
    let out = c.out_dir();
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    write_mps(&out.join(MPS_FILE), &mps, Some(&spectrum))?;
    let report = to_json(&CompileReport {
        clones: c.clones as usize,
        input: pair(&c.input.qubit()),
        source,
        gauge: c.gauge.name(),
        tol: F17(c.tol),
        bond_dims: mps.bond_dims(),
        bond_dimension: bond_dimension(&mps),
        retained_ranks: spectrum.retained_ranks(),
        singular_values_per_cut: spectrum.cuts.iter().map(|cut| f17s(&cut.singular_values)).collect(),
        discarded_norm: F17(spectrum.discarded_norm()),
        roundtrip_error: F17(roundtrip_error),
    })?;
    write_text(&out.join(COMPILE_REPORT_FILE), &report)?;
    Ok(report)
}

#[derive(Serialize)]
struct AnalysisReport {
    #[serde(rename = "M")]
    clones: usize,
    input: [[F17; 2]; 2],
    clone_fidelities: Vec<F17>,
    anticlone_fidelities: Vec<F17>,
    optimal_fidelity: F17,
    nonlinearity_gap: F17,
}

fn analyze(c: &Common) -> Result<String> {
    let m = c.clones as usize;
    let q = c.input.qubit();
    let state = build_gm(&GmParameters::new(m, q)?)?;
    to_json(&AnalysisReport {
        clones: m,
        input: pair(&q),
        clone_fidelities: f17s(&clone_fidelity(&state, m, &q)?),
        anticlone_fidelities: f17s(&anticlone_fidelity(&state, m, &q)?),
        optimal_fidelity: F17((2 * m + 1) as f64 / (3 * m) as f64),
        nonlinearity_gap: F17(nonlinearity_gap(m, q.alpha(), q.beta())?),
    })
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "M")]
    clones: usize,
    num_qubits: usize,
    bond_dim: usize,
    cut_ranks: Vec<usize>,
    tol: F17,
}

fn sweep(c: &Common, format: Format) -> Result<String> {
    let rows = scaling_sweep(1, c.clones as usize, c.tol)?;
    let csv = scaling_csv(&rows);
    write_text(&c.out_dir().join(SCALING_FILE), &csv)?;
    match format {
        Format::Csv => Ok(csv),
        Format::Json => to_json(
            &rows
                .iter()
                .map(|r| SweepRow {
                    clones: r.clones,
                    num_qubits: r.num_qubits,
                    bond_dim: r.bond_dim,
                    cut_ranks: r.cut_ranks.clone(),
                    tol: F17(r.tol),
                })
                .collect::<Vec<_>>(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_only = |c: &Common, name: &str| {
        if c.format == Some(Format::Csv) {
            Cli::command()
                .error(ErrorKind::InvalidValue, format!("{name} reports are JSON only"))
                .exit();
        }
    };
    let result = match &cli.command {
        Command::Prepare(c) => {
            json_only(c, "prepare");
            prepare(c)
        }
        Command::Compile(c) => {
            json_only(c, "compile");
            compile(c)
        }
        Command::Analyze(c) => {
            json_only(c, "analyze");
            analyze(c).and_then(|report| {
                if let Some(out) = &c.out {
                    write_text(&out.join(ANALYSIS_FILE), &report)?;
                }
                Ok(report)
            })
        }
        Command::Sweep(c) => sweep(c, c.format.unwrap_or(Format::Csv)),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
