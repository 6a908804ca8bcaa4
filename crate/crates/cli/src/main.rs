//! `dicke`: optimize, evaluate, sweep and export Dicke-state pulse sequences.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 optimizer did not
//! converge (best result still written), 3 sector/full-space mismatch,
//! 4 Bloch trajectory left the -1 parity block.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke_core::fullspace::{dicke_state_full, evolve_full, sector_amplitudes, sector_leakage};
use dicke_core::optimizer::{optimize, OptimizerConfig};
use dicke_core::parity::{bloch_trajectory, trajectory_csv};
use dicke_core::platform::{coupling_from_rate, coupling_rate, physical_duration, vdw_coupling, PlatformParams};
use dicke_core::pulseseq::{compose, fidelity, total_duration};
use dicke_core::robustness::{sweep_1d, sweep_2d, Axis, SweepParam, DEFAULT_STEPS};
use dicke_core::{Error, PulseSequence};

const VERIFY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "dicke", version, about = "Dicke-state preparation with global control and Ising interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a sequence preparing |D^n_target> from |0...0>.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Result JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the fidelity and total duration of a sequence.
    Fidelity {
        #[arg(long)]
        params: PathBuf,
    },
    /// Infidelity under systematic errors in one or two parameters.
    Sweep {
        #[arg(long)]
        params: PathBuf,
        /// One of xi1, xi2, alpha1..3, phi1..3.
        #[arg(long)]
        param_x: String,
        #[arg(long)]
        param_y: Option<String>,
        /// Error range MIN:MAX, shared by both axes.
        #[arg(long, default_value = "-0.1:0.1", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// CSV output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the symmetric-sector evolution against full 2^n simulation.
    Verify {
        #[arg(long)]
        params: PathBuf,
    },
    /// Bloch-sphere trajectory of a three-qubit sequence.
    Bloch {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert the dimensionless duration to seconds.
    PlatformTime(PlatformArgs),
}

#[derive(Args)]
struct PlatformArgs {
    #[arg(long)]
    params: PathBuf,
    /// van der Waals coefficient in J·m^6.
    #[arg(long, requires = "r", conflicts_with = "coupling")]
    c6: Option<f64>,
    /// Interatomic distance in m.
    #[arg(long, requires = "c6", conflicts_with = "coupling")]
    r: Option<f64>,
    /// J/hbar in rad/s.
    #[arg(long, required_unless_present = "c6")]
    coupling: Option<f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ParityLeakage { .. }) { 4 } else { 1 };
        Self { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn read_sequence(path: &Path) -> std::result::Result<PulseSequence, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), Failure> {
    let bad = || Failure::input(format!("--range expects MIN:MAX, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn cmd_optimize(n: usize, target: usize, starts: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let config = OptimizerConfig::default().with_starts(starts).with_seed(seed);
    let result = optimize(n, target, &config)?;
    let mut json = serde_json::to_string_pretty(&result).expect("result serializes");
    json.push('\n');
    emit(out, &json)?;
    if result.converged {
        Ok(0)
    } else {
        eprintln!("no start converged within {} evaluations; wrote best-so-far", config.max_evals_per_start);
        Ok(2)
    }
}

fn cmd_fidelity(params: &Path) -> Outcome {
    let seq = read_sequence(params)?;
    println!("fidelity={:.16e} duration={:.16e}", fidelity(&seq), total_duration(&seq));
    Ok(0)
}

fn cmd_sweep(
    params: &Path,
    param_x: &str,
    param_y: Option<&str>,
    range: &str,
    steps: usize,
    out: Option<&Path>,
) -> Outcome {
    let seq = read_sequence(params)?;
    let (min, max) = parse_range(range)?;
    let x = Axis::new(param_x.parse::<SweepParam>()?, min, max, steps)?;
    let grid = match param_y {
        None => sweep_1d(&seq, x)?,
        Some(name) => sweep_2d(&seq, x, Axis::new(name.parse::<SweepParam>()?, min, max, steps)?)?,
    };
    emit(out, &grid.to_csv())?;
    Ok(0)
}

fn cmd_verify(params: &Path) -> Outcome {
    let seq = read_sequence(params)?;
    let n = seq.n_qubits();
    let full = evolve_full(&seq, &dicke_state_full(n, 0)?)?;
    let leakage = sector_leakage(&full)?;
    let projected = sector_amplitudes(&full)?;
    let u = compose(&seq);
    let deviation = projected
        .iter()
        .enumerate()
        .map(|(a, z)| (z - u[(a, 0)]).norm())
        .fold(0.0, f64::max);
    println!("max_deviation={deviation:.16e} leakage={leakage:.16e}");
    if deviation <= VERIFY_TOL && leakage <= VERIFY_TOL {
        Ok(0)
    } else {
        eprintln!("sector and full-space evolution disagree beyond {VERIFY_TOL:e}");
        Ok(3)
    }
}

fn cmd_bloch(params: &Path, samples: usize, out: Option<&Path>) -> Outcome {
    let seq = read_sequence(params)?;
    let trajectory = bloch_trajectory(&seq, samples)?;
    emit(out, &trajectory_csv(&trajectory))?;
    Ok(0)
}

fn cmd_platform_time(args: &PlatformArgs) -> Outcome {
    let seq = read_sequence(&args.params)?;
    let coupling = match (args.c6, args.r, args.coupling) {
        (Some(c6), Some(r), None) => vdw_coupling(&PlatformParams::new(c6, r)?),
        (None, None, Some(rate)) => coupling_from_rate(rate)?,
        _ => return Err(Failure::input("give either --c6 and --r, or --coupling")),
    };
    println!(
        "coupling_rate={:.16e} duration={:.16e}",
        coupling_rate(coupling),
        physical_duration(&seq, coupling)?
    );
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Optimize { n, target, starts, seed, out } => cmd_optimize(n, target, starts, seed, out.as_deref()),
        Command::Fidelity { params } => cmd_fidelity(&params),
        Command::Sweep { params, param_x, param_y, range, steps, out } => {
            cmd_sweep(&params, &param_x, param_y.as_deref(), &range, steps, out.as_deref())
        }
        Command::Verify { params } => cmd_verify(&params),
        Command::Bloch { params, samples, out } => cmd_bloch(&params, samples, out.as_deref()),
        Command::PlatformTime(args) => cmd_platform_time(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
