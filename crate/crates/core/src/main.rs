use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lambda_phonon::bec_model::{self, BecScalars};
use lambda_phonon::config::{self, ParsedConfig, RunConfig};
use lambda_phonon::experiment::{self, ScanConfig};
use lambda_phonon::gaussian::{self, CircuitSpec};
use lambda_phonon::lambda_gravity::SourceMass;
use lambda_phonon::{constants, report, sensitivity, Error, Result};

const SEED_ENV: &str = "LAMBDA_PHONON_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "lambda-phonon",
    version,
    about = "Sensitivity forecasts and simulated fits for G and Lambda with BEC phonons"
)]
struct Cli {
    /// Run configuration file; missing keys take reference defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Noise seed; overrides the config file and the LAMBDA_PHONON_SEED variable.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    /// Compute even when regime validation fails.
    #[arg(long, global = true)]
    force: bool,
    /// Log defaults and progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the regime inequalities; exit 1 on a hard failure.
    Validate,
    /// Derived condensate scalars.
    Bec {
        /// Print the physical constants instead.
        #[arg(long)]
        constants: bool,
    },
    /// Sensitivity row for the configured condensate.
    Sensitivity,
    /// The three reference rows (L, alpha_WL) with all other parameters shared.
    Table1,
    /// Gaussian-engine Fisher information against the closed form.
    #[command(alias = "qfi")]
    QfiCheck {
        /// Also write the encoded state's moments to this file.
        #[arg(long)]
        dump_state: Option<PathBuf>,
        /// Relative step of the finite-difference cross-check.
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
    },
    /// Synthetic measurements over the R0 grid.
    Simulate {
        /// Replica index whose noise stream is used.
        #[arg(long, default_value_t = 0)]
        replica: u64,
    },
    /// Fit (G, Lambda) to measurements, simulating them when --data is absent.
    Fit {
        #[arg(long)]
        data: Option<PathBuf>,
        /// Relative residuals of the first data set.
        #[arg(long)]
        residuals: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Validation(_) => 1,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load(cli: &Cli) -> Result<ParsedConfig> {
    let parsed = match &cli.config {
        Some(path) => config::parse_file(path)?,
        None => config::parse_str("")?,
    };
    if !parsed.defaults_applied.is_empty() {
        log::info!("defaults applied: {}", parsed.defaults_applied.join(", "));
    }
    Ok(parsed)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn resolve_seed(flag: Option<u64>, cfg: &RunConfig) -> Result<u64> {
    if let Some(s) = flag.or(cfg.sim.seed) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config {
            line: 0,
            message: format!("{SEED_ENV} = `{v}` is not a 64-bit seed"),
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Source at the configured geometry, driven at π c_s (n + l)/L.
fn source(cfg: &RunConfig) -> Result<SourceMass> {
    let b = &cfg.bec;
    let omega = PI * b.speed_of_sound() * f64::from(b.n + b.l) / b.length;
    SourceMass::new(cfg.source.mass, cfg.source.r0, cfg.source.delta_r, omega)
}

fn scan(cli: &Cli, cfg: &RunConfig) -> Result<ScanConfig> {
    let sigma_a = match cfg.sim.sigma_a {
        Some(s) => s,
        None => sensitivity::delta_a_closed_form(&cfg.bec)?,
    };
    Ok(ScanConfig {
        grid: cfg.sim.grid_m(),
        truth: cfg.gravity,
        source: source(cfg)?,
        sigma_a,
        seed: resolve_seed(cli.seed, cfg)?,
        replicas: cfg.sim.replicas,
        confidence: cfg.sim.confidence,
    })
}

fn run(cli: &Cli) -> Result<u8> {
    let parsed = load(cli)?;
    let cfg = &parsed.config;
    if cli.dump_config {
        output(cli.out.as_deref())?.write_all(cfg.dump().as_bytes())?;
        return Ok(0);
    }
    let Some(command) = &cli.command else {
        return Err(Error::Config {
            line: 0,
            message: "no command given (see --help)".into(),
        });
    };
    let out = || output(cli.out.as_deref());
    match command {
        Command::Validate => {
            let r = bec_model::validate(&cfg.bec, &cfg.limits);
            report::write_validation(out()?, &r)?;
            for c in r.warnings() {
                eprintln!("warning: {} ({:.3e} vs {:.3e})", c.name, c.lhs, c.rhs);
            }
            let failed: Vec<_> = r.failures().map(|c| c.name).collect();
            if !failed.is_empty() {
                eprintln!("validation failed: {}", failed.join(", "));
                return Ok(1);
            }
        }
        Command::Bec { constants: true } => report::write_constants(out()?, &constants::table())?,
        Command::Bec { constants: false } => {
            report::write_bec_scalars(out()?, &BecScalars::compute(&cfg.bec)?)?
        }
        Command::Sensitivity => {
            let r = sensitivity::sensitivity(&cfg.bec, &source(cfg)?, &cfg.limits, cli.force)?;
            report::write_sensitivity(out()?, &r)?;
            notes(&r.footnotes);
        }
        Command::Table1 => {
            let r = sensitivity::table1(
                &sensitivity::TABLE1_ROWS,
                &cfg.bec,
                &source(cfg)?,
                &cfg.limits,
                cli.force,
            )?;
            report::write_sensitivity(out()?, &r)?;
            notes(&r.footnotes);
        }
        Command::QfiCheck { dump_state, step } => {
            let spec = CircuitSpec::from_config(&cfg.bec)?;
            let eval = gaussian::qfi_checked(&spec, 0.0, *step)?;
            let closed = gaussian::qfi_closed_form(
                spec.encoding.coupling,
                cfg.bec.run_time,
                cfg.bec.tritter_angle,
                cfg.bec.condensed_atoms,
                cfg.bec.phonons,
            );
            report::write_qfi_check(out()?, &eval, closed)?;
            let dev = eval.analytic / closed - 1.0;
            if dev.abs() > 0.02 {
                eprintln!(
                    "note: numeric Fisher information deviates from the closed form by {:+.2}%",
                    100.0 * dev
                );
            }
            if let Some(path) = dump_state {
                let state = spec.encoded_state(0.0)?;
                report::write_state(BufWriter::new(File::create(path)?), &state)?;
            }
        }
        Command::Simulate { replica } => {
            let s = scan(cli, cfg)?;
            report::write_measurements(out()?, &experiment::simulate_replica(&s, *replica)?)?;
        }
        Command::Fit { data, residuals } => {
            let s = scan(cli, cfg)?;
            let (fits, first) = match data {
                Some(path) => {
                    let d = report::read_measurements(File::open(path)?)?;
                    (vec![experiment::fit(&d, &s.source, s.confidence)?], d)
                }
                None => (
                    experiment::run_campaign(&s)?,
                    experiment::simulate_replica(&s, 0)?,
                ),
            };
            report::write_fits(out()?, &fits)?;
            if let Some(path) = residuals {
                report::write_residuals(
                    BufWriter::new(File::create(path)?),
                    &experiment::residual_report(&first),
                )?;
            }
        }
    }
    Ok(0)
}

fn notes(lines: &[String]) {
    for l in lines {
        eprintln!("note: {l}");
    }
}
