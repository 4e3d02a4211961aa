use std::path::PathBuf;
use std::process::ExitCode;

use adcd_cli::{run, sweep, sweep_csv, CliError, Encoding, ExperimentConfig, Method, Preset};
use adcd_sim::Sampling;
use clap::Parser;

/// Factor an integer with digitized annealing, optionally with
/// counterdiabatic driving, and write the measured statistics as JSON
/// (or a CSV for sweeps).
#[derive(Debug, Parser)]
#[command(name = "adcd", version)]
struct Args {
    /// Start from a named parameter set.
    #[arg(long)]
    preset: Option<Preset>,
    /// Flat `key = value` configuration file, applied after the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the merged configuration and exit.
    #[arg(long)]
    print_config: bool,

    /// Number to factor.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_enum)]
    encoding: Option<Encoding>,
    #[arg(long)]
    bits_x: Option<u32>,
    #[arg(long)]
    bits_y: Option<u32>,
    /// none, local, nc, ncL, nc1-generic or pool.
    #[arg(long)]
    cd: Option<String>,
    /// Nested-commutator order used with `--cd nc`.
    #[arg(long)]
    l: Option<usize>,
    /// locality (k-local terms weighted by k) or uniform.
    #[arg(long)]
    local_weighting: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hx: Option<f64>,
    /// Total evolution time.
    #[arg(long = "T", alias = "total-time")]
    total_time: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Number of Trotter steps; overrides `--dt` with `T / steps`.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Use `t_j = (j − ½)Δt` instead of `t_j = jΔt`.
    #[arg(long)]
    midpoint: bool,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Keep only single-site CD terms.
    #[arg(long)]
    hardware_mode: bool,
    /// Comma-separated labels of the fidelity target.
    #[arg(long, value_delimiter = ',')]
    target: Option<Vec<String>>,
    /// Comma-separated total times; writes a CSV.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    #[arg(long)]
    qubit_cap: Option<usize>,
    /// Sweep worker threads, 0 for all cores.
    #[arg(long)]
    workers: Option<usize>,

    /// Result file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    emit_qasm: Option<PathBuf>,
    /// Write the cost Hamiltonian (`-` for standard error).
    #[arg(long)]
    dump_hamiltonian: Option<PathBuf>,
    /// Write the encoding equations (`-` for standard error).
    #[arg(long)]
    dump_equations: Option<PathBuf>,
    /// Write sampled CD coefficients as CSV (`-` for standard error).
    #[arg(long)]
    dump_cd: Option<PathBuf>,
}

fn merge(args: Args) -> Result<(ExperimentConfig, bool), CliError> {
    let mut cfg = args.preset.map(Preset::config).unwrap_or_default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let file = ExperimentConfig::from_text(&text)?;
        // keys present in the file replace the preset's values
        let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::Invalid(e.to_string()))?;
        let mut merged = toml::Table::try_from(&cfg).map_err(|e| CliError::Invalid(e.to_string()))?;
        let file_table = toml::Table::try_from(&file).map_err(|e| CliError::Invalid(e.to_string()))?;
        for key in table.keys() {
            if let Some(v) = file_table.get(key) {
                merged.insert(key.clone(), v.clone());
            }
        }
        cfg = merged.try_into().map_err(|e: toml::de::Error| CliError::Invalid(e.to_string()))?;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(if let Some(v) = args.$field { cfg.$field = v; })*};
    }
    set!(n, encoding, cd, l, local_weighting, hx, total_time, dt, method, shots, seed, qubit_cap, workers);
    macro_rules! set_opt {
        ($($field:ident),*) => {$(if args.$field.is_some() { cfg.$field = args.$field; })*};
    }
    set_opt!(bits_x, bits_y, steps, target, sweep, out, emit_qasm, dump_hamiltonian, dump_equations, dump_cd);
    if args.midpoint {
        cfg.sampling = Sampling::Midpoint;
    }
    if args.hardware_mode {
        cfg.hardware_mode = true;
    }
    cfg.validate()?;
    Ok((cfg, args.print_config))
}

fn execute(args: Args) -> Result<(), CliError> {
    let (cfg, print_config) = merge(args)?;
    if print_config {
        print!("{}", cfg.to_text()?);
        return Ok(());
    }
    let text = match &cfg.sweep {
        Some(times) => sweep_csv(&sweep(&cfg, times)?)?,
        None => {
            let out = run(&cfg)?;
            let mut s = serde_json::to_string_pretty(&out).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { adcd_cli::EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
