//! Command-line front end.
//!
//! ```text
//! secrecy-rci [--config FILE] [--out FILE] [--threads N] <COMMAND>
//!
//!   deteq     large-system rates at one operating point
//!   mc        Monte Carlo ergodic rates at one operating point
//!   optimize  xi, xi-empirical, load, users, rho-star
//!   sweep     one-parameter sweep of several series
//!   figure    fig1 .. fig7 presets
//! ```
//!
//! Output is CSV (see [`csv`]) on standard output or in `--out`. The first
//! line is a comment holding the program version, the seed and the fully
//! resolved configuration as JSON, enough to rerun the invocation.
//!
//! Exit status is 0 on success, 2 for invalid input or I/O failure and 3 when
//! the numerics fail (for example too many ill-conditioned trials).
//!
//! The thread count defaults to the `SECRECY_RCI_THREADS` environment
//! variable, then to the number of cores.

pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{
    run_figure, run_sweep, FigureId, FigureOverrides, PrecoderChoice, Series, SweepSpec, SweptParameter, Table,
    XiChoice,
};
use crate::mc::{dump, map_trials, sample_channel, trial_rng, SystemConfig};
use crate::optimize::{optimal_user_count, solve_beta_fixedpoint, xi_star_empirical, SearchDomain};
use crate::rmt::{
    beta_fixedpoint_residual, db_to_linear, g_deteq, linear_to_db, rcipr_operating_point, rho_star,
    secrecy_rate_deteq, secrecy_rate_deteq_csi, xi_star, xi_star_highsnr, AdmissibilityConstants, CsiDistortion,
    LoadPoint,
};
use config::{ConfigFile, SystemSection};

pub const THREADS_ENV: &str = "SECRECY_RCI_THREADS";

const DEFAULT_M: usize = 64;
const DEFAULT_RHO_DB: f64 = 10.0;
const DEFAULT_TRIALS: usize = 100;
const DEFAULT_SEED: u64 = 1;
const FIXEDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "secrecy-rci", version, about = "Secrecy rates of regularized channel inversion")]
struct Cli {
    /// TOML configuration file; command-line options take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for Monte Carlo trials.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Large-system SINRs and secrecy rate at one operating point.
    Deteq(SystemArgs),
    /// Monte Carlo ergodic secrecy rate at one operating point.
    Mc(McArgs),
    /// Scalar optimizations.
    #[command(subcommand)]
    Optimize(OptimizeCommand),
    /// Sweep one parameter and tabulate several rate series.
    Sweep(SweepArgs),
    /// Regenerate the data behind one of the preset figures.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrecoderArg {
    Rci,
    RciPr,
}

impl From<PrecoderArg> for PrecoderChoice {
    fn from(p: PrecoderArg) -> Self {
        match p {
            PrecoderArg::Rci => PrecoderChoice::Rci,
            PrecoderArg::RciPr => PrecoderChoice::RciPr,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
struct SystemArgs {
    /// Transmit antennas.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Users.
    #[arg(long = "K", conflicts_with = "beta")]
    k: Option<usize>,
    /// Load K/M; with --M the user count is round(beta M).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho_db: Option<f64>,
    /// `auto`, `empirical` or a number.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<XiChoice>,
    /// Channel estimation error variance.
    #[arg(long)]
    tau_sq: Option<f64>,
    /// Defaults to `rci-pr`, or to `rci` when --xi is given.
    #[arg(long, value_enum)]
    precoder: Option<PrecoderArg>,
}

#[derive(Debug, Clone, Default, Args)]
struct TrialArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    run: TrialArgs,
    /// Also write the channel of trial 0 to this file.
    #[arg(long, value_name = "FILE")]
    dump_channel: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum OptimizeCommand {
    /// Large-system optimal regularization.
    Xi(SystemArgs),
    /// Per-realization optimal regularization over the admissible set.
    XiEmpirical {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        run: TrialArgs,
    },
    /// Load maximizing the high-SNR secrecy rate per antenna.
    Load(SystemArgs),
    /// User count maximizing the large-system secrecy rate per antenna.
    Users(SystemArgs),
    /// SNR at which the RCI secrecy rate peaks, for 1 < beta < 2.
    RhoStar(SystemArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// beta, rho_db, m, tau_sq or feedback_bits.
    #[arg(long)]
    param: Option<SweptParameter>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    /// mc, deteq, deteq_csi, highsnr, nosecrecy, su_capacity_highsnr.
    #[arg(long, value_delimiter = ',')]
    series: Option<Vec<Series>>,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    run: TrialArgs,
}

#[derive(Debug, Args)]
struct FigureArgs {
    id: FigureId,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rho_db: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status. Results go to standard output unless `--out` is given.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`parse_and_dispatch`], writing to the given streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let file = ConfigFile::load_optional(cli.config.as_deref())?;
    let threads = match cli.threads {
        Some(n) => Some(n),
        None => threads_from_env()?,
    };
    let (table, comment) = match threads {
        Some(0) => return Err(Error::validation("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::validation(format!("thread pool: {e}")))?
            .install(|| compute(&cli.command, &file))?,
        None => compute(&cli.command, &file)?,
    };
    match &cli.out {
        Some(p) => csv::emit_csv(&table, &comment, Some(p)),
        None => csv::write_csv(&table, &comment, out).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::validation(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        _ => Ok(None),
    }
}

fn comment(seed: Option<u64>, config: serde_json::Value) -> String {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    format!("secrecy-rci {} seed={seed} config={config}", env!("CARGO_PKG_VERSION"))
}

fn compute(command: &Command, file: &ConfigFile) -> Result<(Table, String)> {
    let consts = file.admissibility.unwrap_or_default();
    match command {
        Command::Deteq(a) => deteq(&Resolved::new(a, None, &file.system)?),
        Command::Mc(a) => mc(&Resolved::new(&a.system, Some(&a.run), &file.system)?, &consts, a.dump_channel.as_deref()),
        Command::Optimize(o) => optimize(o, file, &consts),
        Command::Sweep(a) => sweep(a, file, &consts),
        Command::Figure(a) => figure(a, file),
    }
}

/// System parameters after merging command line, file and defaults.
#[derive(Debug, Clone, Copy)]
struct Resolved {
    m: usize,
    k: usize,
    beta: f64,
    rho_db: f64,
    rho: f64,
    xi: XiChoice,
    tau_sq: f64,
    precoder: PrecoderChoice,
    trials: usize,
    seed: u64,
}

impl Resolved {
    fn new(cli: &SystemArgs, run: Option<&TrialArgs>, file: &SystemSection) -> Result<Self> {
        let m = cli.m.or(file.m).unwrap_or(DEFAULT_M);
        if m == 0 {
            return Err(Error::validation("M must be at least 1"));
        }
        // The load comes from one layer only, so `--beta` on the command line
        // is not mixed with `k` from the file.
        let (k, beta) = if cli.k.is_some() || cli.beta.is_some() {
            (cli.k, cli.beta)
        } else {
            (file.k, file.beta)
        };
        if k.is_some() && beta.is_some() {
            return Err(Error::validation("give either K or beta, not both"));
        }
        let (k, beta) = match (k, beta) {
            (Some(k), _) => (k, k as f64 / m as f64),
            (None, Some(b)) => {
                if !(b > 0.0 && b.is_finite()) {
                    return Err(Error::validation(format!("beta must be positive, got {b}")));
                }
                (((b * m as f64).round() as usize).max(1), b)
            }
            (None, None) => (m, 1.0),
        };
        if k == 0 {
            return Err(Error::validation("K must be at least 1"));
        }
        let rho_db = cli.rho_db.or(file.rho_db).unwrap_or(DEFAULT_RHO_DB);
        if !rho_db.is_finite() {
            return Err(Error::validation("rho_db must be finite"));
        }
        let xi = cli.xi.or(file.xi);
        let precoder = match cli.precoder.map(PrecoderChoice::from).or(file.precoder) {
            Some(p) => p,
            None if xi.is_some() => PrecoderChoice::Rci,
            None => PrecoderChoice::RciPr,
        };
        let xi = xi.unwrap_or(XiChoice::Auto);
        if precoder == PrecoderChoice::RciPr && xi != XiChoice::Auto {
            return Err(Error::validation("the power-reduced precoder picks its own xi; drop --xi or use --precoder rci"));
        }
        let tau_sq = cli.tau_sq.or(file.tau_sq).unwrap_or(0.0);
        if !(0.0..=1.0).contains(&tau_sq) {
            return Err(Error::validation(format!("tau^2 must lie in [0, 1], got {tau_sq}")));
        }
        let run = run.cloned().unwrap_or_default();
        let trials = run.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Error::validation("trials must be at least 1"));
        }
        Ok(Resolved {
            m,
            k,
            beta,
            rho_db,
            rho: db_to_linear(rho_db),
            xi,
            tau_sq,
            precoder,
            trials,
            seed: run.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        })
    }

    fn system_config(&self) -> SystemConfig {
        SystemConfig {
            tau_sq: self.tau_sq,
            trials: self.trials,
            seed: self.seed,
            ..SystemConfig::new(self.m, self.k, self.rho)
        }
    }

    fn precoder_name(&self) -> &'static str {
        match self.precoder {
            PrecoderChoice::Rci => "rci",
            PrecoderChoice::RciPr => "rci_pr",
        }
    }
}

fn deteq(r: &Resolved) -> Result<(Table, String)> {
    if r.xi == XiChoice::Empirical {
        return Err(Error::validation("`--xi empirical` needs channel draws; use the mc command"));
    }
    let mut t = Table::new([
        "beta", "rho_db", "xi", "tau_sq", "r", "g", "sinr_user", "sinr_eve", "rate_per_user", "rate_per_antenna",
    ]);
    let (xi, rho_eff, power_r) = match (r.precoder, r.xi) {
        (PrecoderChoice::RciPr, _) => {
            let op = rcipr_operating_point(r.beta, r.rho);
            (op.xi, op.rho_effective, op.r)
        }
        (PrecoderChoice::Rci, XiChoice::Value(x)) => (x, r.rho, 1.0),
        (PrecoderChoice::Rci, _) => (xi_star(r.beta, r.rho), r.rho, 1.0),
    };
    let row = if power_r.is_finite() {
        let p = LoadPoint::new(r.beta, rho_eff, xi)?;
        let d = if r.tau_sq == 0.0 {
            secrecy_rate_deteq(&p)?
        } else {
            secrecy_rate_deteq_csi(&p, &CsiDistortion::new(rho_eff, xi, r.tau_sq)?)?
        };
        vec![r.beta, r.rho_db, xi, r.tau_sq, power_r, d.g, d.sinr_user, d.sinr_eve, d.rate_per_user, d.rate_per_antenna]
    } else {
        vec![r.beta, r.rho_db, xi, r.tau_sq, power_r, g_deteq(r.beta, xi)?, 0.0, 0.0, 0.0, 0.0]
    };
    t.push(row);
    let cfg = json!({
        "command": "deteq",
        "beta": r.beta,
        "rho_db": r.rho_db,
        "xi": r.xi.to_string(),
        "tau_sq": r.tau_sq,
        "precoder": r.precoder_name(),
    });
    Ok((t, comment(None, cfg)))
}

fn system_json(r: &Resolved, command: &str, consts: &AdmissibilityConstants) -> serde_json::Value {
    json!({
        "command": command,
        "m": r.m,
        "k": r.k,
        "rho_db": r.rho_db,
        "xi": r.xi.to_string(),
        "tau_sq": r.tau_sq,
        "precoder": r.precoder_name(),
        "trials": r.trials,
        "seed": r.seed,
        "admissibility": consts,
    })
}

fn mc(r: &Resolved, consts: &AdmissibilityConstants, dump_path: Option<&Path>) -> Result<(Table, String)> {
    let mut spec = SweepSpec::new(SweptParameter::RhoDb, vec![r.rho_db], r.system_config(), vec![Series::Mc]);
    spec.precoder = r.precoder;
    spec.xi = r.xi;
    spec.admissibility = *consts;
    let table = run_sweep(&spec)?;
    if let Some(p) = dump_path {
        let cfg = r.system_config();
        let ch = sample_channel(&cfg, &mut trial_rng(cfg.seed, 0));
        let io = |source| Error::Io {
            path: p.to_path_buf(),
            source,
        };
        let f = std::fs::File::create(p).map_err(io)?;
        dump::write_matrix(&ch.h, std::io::BufWriter::new(f)).map_err(io)?;
    }
    let mut cfg = system_json(r, "mc", consts);
    cfg["dump_channel"] = json!(dump_path.map(|p| p.display().to_string()));
    Ok((table, comment(Some(r.seed), cfg)))
}

fn optimize(o: &OptimizeCommand, file: &ConfigFile, consts: &AdmissibilityConstants) -> Result<(Table, String)> {
    match o {
        OptimizeCommand::Xi(a) => {
            let r = Resolved::new(a, None, &file.system)?;
            let mut t = Table::new(["beta", "rho_db", "xi_star", "xi_star_highsnr", "rate_per_user", "rate_per_antenna"]);
            let xi = xi_star(r.beta, r.rho);
            let d = secrecy_rate_deteq(&LoadPoint::new(r.beta, r.rho, xi)?)?;
            t.push(vec![r.beta, r.rho_db, xi, xi_star_highsnr(r.beta, r.rho), d.rate_per_user, d.rate_per_antenna]);
            let cfg = json!({"command": "optimize xi", "beta": r.beta, "rho_db": r.rho_db});
            Ok((t, comment(None, cfg)))
        }
        OptimizeCommand::XiEmpirical { system, run } => {
            let r = Resolved::new(system, Some(run), &file.system)?;
            let cfg = r.system_config();
            cfg.validate()?;
            let domain = SearchDomain::admissible(r.beta, r.m, consts);
            let (xis, skipped) = map_trials(&cfg, |trial, ch| Ok((trial, xi_star_empirical(&ch.h, r.rho, &domain)?)))?;
            let mut t = Table::new(["trial", "m", "k", "rho_db", "xi_empirical", "xi_star", "skipped"]);
            let large = xi_star(r.beta, r.rho);
            for (trial, xi) in xis {
                t.push(vec![trial as f64, r.m as f64, r.k as f64, r.rho_db, xi, large, skipped as f64]);
            }
            Ok((t, comment(Some(r.seed), system_json(&r, "optimize xi-empirical", consts))))
        }
        OptimizeCommand::Load(a) => {
            let r = Resolved::new(a, None, &file.system)?;
            let beta = solve_beta_fixedpoint(r.rho, FIXEDPOINT_TOL)?;
            let mut t = Table::new(["rho_db", "beta_opt", "residual"]);
            t.push(vec![r.rho_db, beta, beta_fixedpoint_residual(beta, r.rho)]);
            Ok((t, comment(None, json!({"command": "optimize load", "rho_db": r.rho_db}))))
        }
        OptimizeCommand::Users(a) => {
            let r = Resolved::new(a, None, &file.system)?;
            let k = optimal_user_count(r.m, r.rho);
            let mut t = Table::new(["m", "rho_db", "k_opt", "beta"]);
            t.push(vec![r.m as f64, r.rho_db, k as f64, k as f64 / r.m as f64]);
            Ok((t, comment(None, json!({"command": "optimize users", "m": r.m, "rho_db": r.rho_db}))))
        }
        OptimizeCommand::RhoStar(a) => {
            let r = Resolved::new(a, None, &file.system)?;
            let (rho, peak) = rho_star(r.beta)?;
            let mut t = Table::new(["beta", "rho_star", "rho_star_db", "peak_rate_per_user", "xi_at_peak"]);
            t.push(vec![r.beta, rho, linear_to_db(rho), peak, xi_star(r.beta, rho)]);
            Ok((t, comment(None, json!({"command": "optimize rho-star", "beta": r.beta}))))
        }
    }
}

fn sweep(a: &SweepArgs, file: &ConfigFile, consts: &AdmissibilityConstants) -> Result<(Table, String)> {
    let r = Resolved::new(&a.system, Some(&a.run), &file.system)?;
    let parameter = a
        .param
        .or(file.sweep.parameter)
        .ok_or_else(|| Error::validation("sweep needs --param"))?;
    let values = a
        .values
        .clone()
        .or_else(|| file.sweep.values.clone())
        .ok_or_else(|| Error::validation("sweep needs --values"))?;
    let series = a
        .series
        .clone()
        .or_else(|| file.sweep.series.clone())
        .unwrap_or_else(|| vec![Series::Deteq]);
    let mut spec = SweepSpec::new(parameter, values, r.system_config(), series);
    spec.precoder = r.precoder;
    spec.xi = r.xi;
    spec.admissibility = *consts;
    let table = run_sweep(&spec)?;
    let cfg = json!({"command": "sweep", "spec": spec});
    Ok((table, comment(Some(r.seed), cfg)))
}

fn figure(a: &FigureArgs, file: &ConfigFile) -> Result<(Table, String)> {
    let f = &file.figure;
    let o = FigureOverrides {
        m: a.m.or(f.m),
        k: a.k.or(f.k),
        trials: a.trials.or(f.trials),
        seed: Some(a.seed.or(f.seed).unwrap_or(DEFAULT_SEED)),
        rho_db: a.rho_db.clone().or_else(|| f.rho_db.clone()),
        betas: a.betas.clone().or_else(|| f.betas.clone()),
    };
    let table = run_figure(a.id, &o)?;
    let cfg = json!({"command": "figure", "id": a.id.to_string(), "overrides": o});
    Ok((table, comment(o.seed, cfg)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("secrecy-rci").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn deteq_at_unit_load() {
        let (code, out, _) = run_args(&["deteq", "--beta", "1", "--rho-db", "10", "--xi", "auto"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# secrecy-rci "));
        assert_eq!(lines[1], "beta,rho_db,xi,tau_sq,r,g,sinr_user,sinr_eve,rate_per_user,rate_per_antenna");
        let xi: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert!((xi - 0.027347).abs() < 1e-6);
    }

    #[test]
    fn overloaded_mc_is_zero() {
        let (code, out, _) = run_args(&["mc", "--M", "8", "--K", "20", "--rho-db", "10", "--trials", "5"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(2).unwrap();
        let header: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        let j = header.iter().position(|c| *c == "mc_per_user").unwrap();
        assert_eq!(row.split(',').nth(j).unwrap(), "0");
    }

    #[test]
    fn usage_and_validation_errors_exit_2() {
        assert_eq!(run_args(&["deteq", "--bogus"]).0, 2);
        assert_eq!(run_args(&["deteq", "--beta", "-1"]).0, 2);
        assert_eq!(run_args(&["deteq", "--K", "3", "--beta", "1"]).0, 2);
        assert_eq!(run_args(&["mc", "--precoder", "rci-pr", "--xi", "0.1"]).0, 2);
        let (code, _, err) = run_args(&["deteq", "--beta", "1", "--xi", "nope"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(run_args(&["--version"]).0, 0);
    }

    #[test]
    fn missing_config_is_an_error() {
        let (code, _, err) = run_args(&["--config", "/nonexistent/cfg.toml", "deteq"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/cfg.toml"));
    }

    #[test]
    fn command_line_overrides_file() {
        let dir = std::env::temp_dir().join(format!("secrecy-rci-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.toml");
        std::fs::write(&path, "[system]\nbeta = 0.5\nrho_db = 20.0\n").unwrap();
        let p = path.to_str().unwrap();
        let (_, out, _) = run_args(&["--config", p, "deteq"]);
        assert!(out.lines().nth(2).unwrap().starts_with("0.5,20,"));
        let (_, out, _) = run_args(&["--config", p, "deteq", "--rho-db", "0"]);
        assert!(out.lines().nth(2).unwrap().starts_with("0.5,0,"));
        let (_, out, _) = run_args(&["--config", p, "deteq", "--beta", "0.8"]);
        assert!(out.lines().nth(2).unwrap().starts_with("0.8,20,"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn optimize_subcommands() {
        let (code, out, _) = run_args(&["optimize", "load", "--rho-db", "20"]);
        assert_eq!(code, 0);
        let beta: f64 = out.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!((beta - 0.725).abs() < 1e-3);
        let (code, out, _) = run_args(&["optimize", "rho-star", "--beta", "1.2"]);
        assert_eq!(code, 0);
        let peak: f64 = out.lines().nth(2).unwrap().split(',').nth(3).unwrap().parse().unwrap();
        assert!((peak - 1.8f64.log2()).abs() < 1e-6);
        assert_eq!(run_args(&["optimize", "rho-star", "--beta", "0.5"]).0, 2);
        let (code, out, _) = run_args(&["optimize", "xi-empirical", "--M", "8", "--K", "6", "--trials", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5);
        assert_eq!(run_args(&["optimize", "users", "--M", "8", "--rho-db", "10"]).0, 0);
        assert_eq!(run_args(&["optimize", "xi", "--beta", "0.8"]).0, 0);
    }

    #[test]
    fn sweep_with_negative_values() {
        let (code, out, err) = run_args(&[
            "sweep", "--param", "rho_db", "--values", "-10,0,10", "--series", "deteq,highsnr", "--beta", "0.8",
        ]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 5);
    }

    #[test]
    fn comment_is_stable() {
        let args = ["mc", "--M", "6", "--K", "4", "--trials", "4", "--seed", "9", "--xi", "0.1"];
        let (_, a, _) = run_args(&args);
        let (_, b, _) = run_args(&args);
        assert_eq!(a, b);
        assert!(a.starts_with("# secrecy-rci ") && a.contains("seed=9"));
    }
}
