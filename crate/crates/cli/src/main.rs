use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdeconv::analysis::{
    discretize_kernel, invariant_by_iteration, one_state_asymptotic_ber, one_state_invariant,
    one_state_transitions, two_state_asymptotic_ber, write_one_state_csv, write_two_state_csv,
};
use qdeconv::channel::ChannelParams;
use qdeconv::harness::{
    cber_seeds, compare_analytic, create_run_dir, emit_plot_data, oracle_check, plot_data_text,
    read_results_csv, rows_to_csv, run_cber_with, run_sweep, write_atomic, write_results_csv,
    Config, OracleCheckConfig,
};
use qdeconv::rng::SeedPair;
use qdeconv::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qdeconv",
    version,
    about = "Decode binary input to a sampled integrator observed in Gaussian noise"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// SNR points in dB, e.g. `-5:1:15` or `0,3,6`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Noise standard deviations, e.g. `0.5,1,2`.
    #[arg(long, global = true)]
    sigma: Option<String>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Bits per trial, or sequence length for long-sequence commands.
    #[arg(long, global = true)]
    bits: Option<u64>,
    #[arg(long, global = true)]
    decoders: Option<String>,
    #[arg(long, global = true)]
    k0: Option<usize>,
    #[arg(long = "d-max", global = true)]
    d_max: Option<usize>,
    #[arg(long, global = true)]
    bins: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER sweep over SNR points and decoders.
    Simulate,
    /// Error rate of one long transmission (reduced decoders only).
    Cber {
        #[arg(long)]
        input_seed: Option<u64>,
        #[arg(long)]
        noise_seed: Option<u64>,
    },
    /// Asymptotic error rates of the reduced decoders.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Analytic asymptotic BER against long-sequence simulation.
    Compare,
    /// Cross-check the trellis decoders against brute-force oracles.
    OracleCheck,
    /// Turn a results CSV into whitespace-separated plot blocks.
    PlotData { input: PathBuf },
}

#[derive(Subcommand)]
enum Analyze {
    OneState,
    TwoStates,
}

enum Failure {
    Usage(String),
    Numerical(String),
    CheckFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::CheckFailed(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}

fn load_config(c: &Common, long_bits: bool) -> Result<Config, Error> {
    let mut cfg = match &c.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(k, &v));
    set("seed", c.seed.map(|v| v.to_string()))?;
    set("snr", c.snr.clone())?;
    set("sigma", c.sigma.clone())?;
    set("trials", c.trials.map(|v| v.to_string()))?;
    let bits_key = if long_bits {
        "mc_bits"
    } else {
        "bits_per_trial"
    };
    set(bits_key, c.bits.map(|v| v.to_string()))?;
    set("decoders", c.decoders.clone())?;
    set("k0", c.k0.map(|v| v.to_string()))?;
    set("d_max", c.d_max.map(|v| v.to_string()))?;
    set("bins", c.bins.map(|v| v.to_string()))?;
    set("tol", c.tol.map(|v| v.to_string()))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    match cli.command {
        Command::Simulate => simulate(load_config(c, false)?, c.out.as_deref()),
        Command::Cber {
            input_seed,
            noise_seed,
        } => {
            let mut cfg = load_config(c, true)?;
            cfg.analysis.input_seed = input_seed.or(cfg.analysis.input_seed);
            cfg.analysis.noise_seed = noise_seed.or(cfg.analysis.noise_seed);
            cber(&cfg)
        }
        Command::Analyze(which) => analyze(&load_config(c, false)?, which, c.out.as_deref()),
        Command::Compare => compare(&load_config(c, true)?, c.out.as_deref()),
        Command::OracleCheck => oracle(c, &load_config(c, false)?),
        Command::PlotData { input } => {
            let rows = read_results_csv(&input)?;
            match &c.out {
                Some(p) => emit_plot_data(&rows, p)?,
                None => print!("{}", plot_data_text(&rows)?),
            }
            Ok(())
        }
    }
}

fn simulate(mut cfg: Config, out: Option<&Path>) -> Outcome {
    cfg.sweep.validate()?;
    for w in cfg.sweep.warnings() {
        eprintln!("warning: {w}");
    }
    let explicit = out.map(Path::to_path_buf).or(cfg.sweep.output_path.take());
    let rows = run_sweep(&cfg.sweep)?;
    match explicit {
        Some(path) => write_results_csv(&rows, &path)?,
        None => {
            let dir = create_run_dir(Path::new("runs"), cfg.sweep.master_seed)?;
            write_atomic(&dir.join("config.txt"), cfg.to_text().as_bytes())?;
            write_results_csv(&rows, &dir.join("results.csv"))?;
            emit_plot_data(&rows, &dir.join("plot.dat"))?;
            eprintln!("wrote {}", dir.display());
        }
    }
    print!("{}", rows_to_csv(&rows));
    Ok(())
}

fn single<T: Copy>(items: &[T], what: &str) -> Result<T, Failure> {
    match items {
        [x] => Ok(*x),
        _ => Err(Failure::Usage(format!("exactly one {what} required"))),
    }
}

fn cber(cfg: &Config) -> Outcome {
    let decoder = single(
        &cfg.sweep.decoders,
        "decoder (--decoders one_state|two_states)",
    )?;
    let sigma = single(&cfg.analysis.sigmas, "--sigma value")?;
    let derived = cber_seeds(cfg.sweep.master_seed, sigma);
    let seeds = SeedPair {
        input: cfg.analysis.input_seed.unwrap_or(derived.input),
        noise: cfg.analysis.noise_seed.unwrap_or(derived.noise),
    };
    let r = run_cber_with(
        decoder,
        sigma,
        cfg.analysis.mc_bits,
        seeds,
        cfg.sweep.middle,
    )?;
    println!("decoder,sigma,bits,bit_errors,cber,std_err,input_seed,noise_seed");
    println!(
        "{decoder},{sigma},{},{},{},{},{},{}",
        r.bits_total,
        r.bit_errors,
        r.ber,
        r.std_err(),
        seeds.input,
        seeds.noise
    );
    Ok(())
}

fn analyze(cfg: &Config, which: Analyze, out: Option<&Path>) -> Outcome {
    let a = &cfg.analysis;
    if out.is_some() && a.sigmas.len() != 1 {
        return Err(Failure::Usage("--out needs a single --sigma value".into()));
    }
    println!("sigma,snr_db,asymptotic_ber");
    for &sigma in &a.sigmas {
        let snr = ChannelParams::new(sigma)?.snr_db();
        let ber = match which {
            Analyze::OneState => {
                let chain = one_state_invariant(one_state_transitions(sigma, a.grid.d_max)?)?;
                if let Some(p) = out {
                    write_one_state_csv(&chain, p)?;
                }
                one_state_asymptotic_ber(&chain)?
            }
            Analyze::TwoStates => {
                let grid = discretize_kernel(sigma, a.grid.n_bins, a.grid.d_max)?;
                let grid = invariant_by_iteration(grid, &a.grid)?;
                if let Some(p) = out {
                    write_two_state_csv(&grid, p)?;
                }
                two_state_asymptotic_ber(&grid)?
            }
        };
        println!("{sigma},{snr},{ber}");
    }
    Ok(())
}

fn compare(cfg: &Config, out: Option<&Path>) -> Outcome {
    let a = &cfg.analysis;
    let rows = compare_analytic(&a.sigmas, a.mc_bits, cfg.sweep.master_seed, &a.grid)?;
    if let Some(p) = out {
        write_results_csv(&rows, p)?;
    }
    print!("{}", rows_to_csv(&rows));
    for r in &rows {
        let analytic = r.analytic_ber.unwrap_or(f64::NAN);
        let z = if r.std_err > 0.0 {
            (r.ber - analytic) / r.std_err
        } else {
            0.0
        };
        eprintln!(
            "{} sigma={} simulated-analytic = {z:+.2} std_err",
            r.decoder, r.sigma
        );
    }
    Ok(())
}

fn oracle(c: &Common, cfg: &Config) -> Outcome {
    let len = c.bits.unwrap_or(10) as usize;
    let instances = c.trials.unwrap_or(cfg.analysis.oracle_instances);
    let mut check = OracleCheckConfig::new(
        len,
        instances,
        cfg.analysis.sigmas.clone(),
        cfg.sweep.master_seed,
    );
    if let Some(k0) = c.k0 {
        check.k0s = vec![k0];
    }
    let report = oracle_check(&check)?;
    match report.mismatch {
        None => {
            println!(
                "pass: {} comparisons, K = {len}, no mismatch",
                report.comparisons
            );
            Ok(())
        }
        Some(m) => Err(Failure::CheckFailed(format!(
            "mismatch: {} at sigma = {}, seed = {}, k = {}: oracle {} decoder {}\n{}",
            m.decoder, m.sigma, m.seed, m.k, m.expected, m.got, m.dump
        ))),
    }
}
