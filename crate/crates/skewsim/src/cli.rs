//! Argument parsing and the subcommands behind the `skewsim` binary.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use skewsim_core::analytic::{self, LawDescriptor, DYNKIN_TOLERANCE, ODE_TOLERANCE};
use skewsim_core::chain::ChainSettings;
use skewsim_core::path_sim::{self, EulerConfig};
use skewsim_core::stats::DEFAULT_BIAS_ALLOWANCE;
use skewsim_core::{RegimeTag, SkewConfig};

use crate::error::{exit, CliError, CliResult};
use crate::output::{fmt_f64, fmt_opt, write_csv, write_json};
use crate::paths::summarize_paths;
use crate::report::{EulerEcho, RunManifest};
use crate::run_config::{PathsBlock, RunConfig};
use crate::{runner, validate};

#[derive(Debug, Parser)]
#[command(name = "skewsim", version, about = "Meeting times of two skew Brownian motions driven by one Brownian motion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact jump-chain draws of U*; writes chain.csv and a manifest.
    Chain(ChainArgs),
    /// Chain draws against the closed-form law; writes validation.json.
    Validate(ValidateArgs),
    /// Density and CDF of the hitting law on a grid; writes law.csv.
    Law(LawArgs),
    /// Laplace transform of U* with its drift bounds; writes laplace.csv.
    Laplace(LaplaceArgs),
    /// Generator and Kummer-equation residuals of the Laplace transform.
    Residuals(ResidualArgs),
    /// Coupled mollified-drift paths; writes paths.csv and paths_summary.json.
    Paths(PathArgs),
    /// Local-time survival law of one skew process, optionally simulated.
    Excursion(ExcursionArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// JSON file with x, beta1, beta2 and optional "chain"/"paths" blocks.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
}

impl ModelArgs {
    /// Flags over file values; all three parameters must end up set.
    pub fn resolve(&self) -> CliResult<(SkewConfig, Option<RunConfig>)> {
        let file = self.config.as_deref().map(RunConfig::load).transpose()?;
        let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
            flag.or(from_file)
                .ok_or_else(|| CliError::config(format!("--{name} is required (flag or --config)")))
        };
        let x = pick(self.x, file.as_ref().map(|f| f.x), "x")?;
        let b1 = pick(self.beta1, file.as_ref().map(|f| f.beta1), "beta1")?;
        let b2 = pick(self.beta2, file.as_ref().map(|f| f.beta2), "beta2")?;
        Ok((SkewConfig::new(x, b1, b2)?, file))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "SKEWSIM_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of trajectories [default: 100000].
    #[arg(long)]
    pub n: Option<usize>,
    /// [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Truncation level of the gap [default: 1e-9].
    #[arg(long)]
    pub eps: Option<f64>,
    /// Trajectories still running after this many jumps are censored
    /// [default: 100000].
    #[arg(long)]
    pub max_jumps: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = DEFAULT_BIAS_ALLOWANCE)]
    pub bias_allowance: f64,
}

/// `a:b:n`, `n` evenly spaced points on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected a:b:n, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (a, b) = (num(a)?, num(b)?);
        let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
        if !(a.is_finite() && b.is_finite() && a <= b) || n == 0 {
            return Err(format!("grid {s:?} needs finite a <= b and n >= 1"));
        }
        Ok(GridSpec { a, b, n })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        analytic::linear_grid(self.a, self.b, self.n)
    }
}

#[derive(Debug, Clone, Args)]
pub struct LawArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Defaults to 200 points across the bulk of the support.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LaplaceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub lambda: Vec<f64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Grid of starting gaps.
    #[arg(long, default_value = "0.1:5:25")]
    pub grid: GridSpec,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EulerArgs {
    /// [default: 1e-4]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Mollifier scale n [default: 100].
    #[arg(long)]
    pub mollifier_scale: Option<u32>,
    /// [default: 100]
    #[arg(long)]
    pub horizon: Option<f64>,
    /// [default: 1/n]
    #[arg(long)]
    pub meeting_delta: Option<f64>,
    /// [default: 5 sqrt(dt)]
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

impl EulerArgs {
    pub fn resolve(&self, file: Option<&PathsBlock>) -> CliResult<EulerConfig> {
        let f = file.cloned().unwrap_or_default();
        let dt = self.dt.or(f.dt).unwrap_or(1e-4);
        let n = self.mollifier_scale.or(f.mollifier_scale).unwrap_or(100);
        let horizon = self.horizon.or(f.horizon).unwrap_or(100.0);
        let mut e = EulerConfig::with_resolution(dt, n, horizon);
        if let Some(d) = self.meeting_delta.or(f.meeting_delta) {
            e.meeting_delta = d;
        }
        if let Some(b) = self.bandwidth.or(f.local_time_bandwidth) {
            e.local_time_bandwidth = b;
        }
        e.validate()?;
        Ok(e)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// [default: 2000]
    #[arg(long)]
    pub n: Option<usize>,
    /// [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub euler: EulerArgs,
    /// Refinement levels ending at the given resolution; each coarser level
    /// doubles dt and halves n.
    #[arg(long, default_value_t = 1)]
    pub levels: usize,
    /// Horizons of the meeting-time profile [default: horizon/10, /5, /2, 1].
    #[arg(long, value_delimiter = ',')]
    pub profile: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExcursionArgs {
    /// Level of the driving Brownian motion.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta2: f64,
    /// When given, also tabulate the excursion tail with rate (1-beta1)/(2h).
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    #[arg(long, default_value = "0:4:41")]
    pub grid: GridSpec,
    /// Simulated paths; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub paths: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest allowed gap between simulated and analytic survival.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    #[command(flatten)]
    pub euler: EulerArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Chain(a) => cmd_chain(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Law(a) => cmd_law(&a),
        Command::Laplace(a) => cmd_laplace(&a),
        Command::Residuals(a) => cmd_residuals(&a),
        Command::Paths(a) => cmd_paths(&a),
        Command::Excursion(a) => cmd_excursion(&a),
    };
    match result {
        Ok(true) => exit::SUCCESS,
        Ok(false) => exit::STATISTICAL,
        Err(e) => {
            eprintln!("skewsim: {e}");
            e.exit_code()
        }
    }
}

struct ChainPlan {
    cfg: SkewConfig,
    settings: ChainSettings,
    seed: u64,
    n: usize,
}

fn chain_plan(a: &ChainArgs) -> CliResult<ChainPlan> {
    let (cfg, file) = a.model.resolve()?;
    let block = file.and_then(|f| f.chain).unwrap_or_default();
    let n = a.n.or(block.n).unwrap_or(100_000);
    if n == 0 {
        return Err(CliError::config("--n must be at least 1"));
    }
    let settings = ChainSettings::new(
        a.eps.or(block.eps).unwrap_or(1e-9),
        a.max_jumps.or(block.max_jumps).unwrap_or(100_000),
    );
    Ok(ChainPlan {
        cfg,
        settings,
        seed: a.seed.or(block.seed).unwrap_or(1),
        n,
    })
}

fn chain_manifest(cmd: &str, p: &ChainPlan, started: Instant, censored: f64) -> RunManifest {
    RunManifest {
        seed: Some(p.seed),
        trajectory_count: p.n,
        eps: Some(p.settings.eps),
        max_jumps: Some(p.settings.max_jumps),
        wall_time: started.elapsed().as_secs_f64(),
        censored_fraction: censored,
        ..RunManifest::new(cmd, Some(&p.cfg))
    }
}

fn manifest_path(out: &Path, cmd: &str) -> PathBuf {
    out.join(format!("{cmd}_manifest.json"))
}

pub fn cmd_chain(a: &ChainArgs) -> CliResult<bool> {
    let started = Instant::now();
    let p = chain_plan(a)?;
    let rows = validate::chain_rows(&p.cfg, &p.settings, p.seed, p.n, a.out.threads)?;
    write_csv(
        &a.out.out.join("chain.csv"),
        &["index", "uStar", "censored", "jumpCount", "secondLocalTime"],
        rows.iter().enumerate().map(|(i, r)| {
            vec![
                i.to_string(),
                fmt_f64(r.u_star),
                u8::from(r.censored).to_string(),
                r.jump_count.to_string(),
                fmt_f64(r.second_local_time),
            ]
        }),
    )?;
    let m = chain_manifest("chain", &p, started, validate::censored_fraction(&rows));
    write_json(&manifest_path(&a.out.out, "chain"), &m)?;
    Ok(true)
}

pub fn cmd_validate(a: &ValidateArgs) -> CliResult<bool> {
    let started = Instant::now();
    let p = chain_plan(&a.chain)?;
    let report = validate::validate_chain(
        &p.cfg,
        &p.settings,
        p.seed,
        p.n,
        a.chain.out.threads,
        a.bias_allowance,
    )?;
    let out = &a.chain.out.out;
    write_json(&out.join("validation.json"), &report)?;
    let m = chain_manifest("validate", &p, started, report.censored_fraction);
    write_json(&manifest_path(out, "validate"), &m)?;
    println!(
        "{} of {}: n = {}, ks = {:.5}, dkw99 + bias = {:.5}, {}",
        report.quantity,
        report.law,
        report.n,
        report.ks,
        report.dkw99 + report.bias_allowance,
        if report.pass { "pass" } else { "FAIL" }
    );
    Ok(report.pass)
}

fn default_law_grid(law: &LawDescriptor) -> GridSpec {
    let h = law.x / law.scale;
    match law.transform {
        analytic::LawTransform::Reciprocal => GridSpec { a: h, b: 5.0 * h, n: 200 },
        analytic::LawTransform::Direct => GridSpec { a: 0.0, b: h, n: 200 },
        analytic::LawTransform::ProductReciprocal { .. } => GridSpec { a: 0.0, b: 5.0 * h, n: 200 },
    }
}

pub fn cmd_law(a: &LawArgs) -> CliResult<bool> {
    let started = Instant::now();
    let (cfg, _) = a.model.resolve()?;
    let law = LawDescriptor::for_config(&cfg)?;
    let grid = a.grid.unwrap_or_else(|| default_law_grid(&law));
    let has_density = !matches!(law.transform, analytic::LawTransform::ProductReciprocal { .. });
    let mut rows = Vec::with_capacity(grid.n);
    for u in grid.points() {
        let density = if has_density { Some(law.density(u)?) } else { None };
        rows.push(vec![fmt_f64(u), fmt_opt(density), fmt_f64(law.cdf(u)?)]);
    }
    write_csv(&a.out.join("law.csv"), &["u", "density", "cdf"], rows)?;
    let m = RunManifest {
        wall_time: started.elapsed().as_secs_f64(),
        ..RunManifest::new("law", Some(&cfg))
    };
    write_json(&manifest_path(&a.out, "law"), &m)?;
    Ok(true)
}

/// `(lower, upper)` bounds of `E[e^(-λ U⋆)]` from the drift horizon: `U⋆`
/// lies above `x/β1` when both parameters are positive and below it when
/// `β2 < 0 < β1`.
pub fn laplace_bounds(cfg: &SkewConfig, lambda: f64) -> (f64, f64) {
    let b = analytic::laplace_upper_bound(cfg, lambda);
    match cfg.regime().tag {
        RegimeTag::PosPos => (0.0, b),
        RegimeTag::PosNeg => (b, 1.0),
        _ => (0.0, 1.0),
    }
}

pub fn cmd_laplace(a: &LaplaceArgs) -> CliResult<bool> {
    let started = Instant::now();
    let (cfg, _) = a.model.resolve()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for &lambda in &a.lambda {
        let u = analytic::laplace_u_star(&cfg, lambda)?;
        let (lo, hi) = laplace_bounds(&cfg, lambda);
        ok &= lo <= u * (1.0 + 1e-12) && u <= hi * (1.0 + 1e-12);
        println!("lambda = {lambda}: u = {u:.12}, bounds [{lo:.12}, {hi:.12}]");
        rows.push(vec![fmt_f64(lambda), fmt_f64(u), fmt_f64(hi), fmt_f64(lo)]);
    }
    write_csv(
        &a.out.join("laplace.csv"),
        &["lambda", "u_lambda", "upper_bound", "lower_bound"],
        rows,
    )?;
    let m = RunManifest {
        wall_time: started.elapsed().as_secs_f64(),
        ..RunManifest::new("laplace", Some(&cfg))
    };
    write_json(&manifest_path(&a.out, "laplace"), &m)?;
    Ok(ok)
}

pub fn cmd_residuals(a: &ResidualArgs) -> CliResult<bool> {
    let started = Instant::now();
    let (cfg, _) = a.model.resolve()?;
    let grid = a.grid.points();
    let dynkin = analytic::dynkin_residual(&cfg, a.lambda, &grid)?;
    let ode = analytic::ode_residual(&cfg, a.lambda, &grid)?;
    let worst = |v: &[analytic::ResidualPoint]| v.iter().map(|p| p.relative()).fold(0.0, f64::max);
    let (wd, wo) = (worst(&dynkin), worst(&ode));
    write_csv(
        &a.out.join("residuals.csv"),
        &["x", "dynkinResidual", "dynkinRelative", "odeResidual", "odeRelative"],
        dynkin.iter().zip(&ode).map(|(d, o)| {
            vec![
                fmt_f64(d.x),
                fmt_f64(d.residual),
                fmt_f64(d.relative()),
                fmt_f64(o.residual),
                fmt_f64(o.relative()),
            ]
        }),
    )?;
    let m = RunManifest {
        wall_time: started.elapsed().as_secs_f64(),
        ..RunManifest::new("residuals", Some(&cfg))
    };
    write_json(&manifest_path(&a.out, "residuals"), &m)?;
    println!("max relative residual: generator {wd:.3e} (tol {DYNKIN_TOLERANCE:e}), ode {wo:.3e} (tol {ODE_TOLERANCE:e})");
    Ok(wd <= DYNKIN_TOLERANCE && wo <= ODE_TOLERANCE)
}

pub fn cmd_paths(a: &PathArgs) -> CliResult<bool> {
    let started = Instant::now();
    let (cfg, file) = a.model.resolve()?;
    let block = file.and_then(|f| f.paths);
    let finest = a.euler.resolve(block.as_ref())?;
    let n = a.n.or(block.as_ref().and_then(|b| b.n)).unwrap_or(2000);
    let seed = a.seed.or(block.as_ref().and_then(|b| b.seed)).unwrap_or(1);
    if n == 0 || a.levels == 0 {
        return Err(CliError::config("--n and --levels must be at least 1"));
    }
    if finest.stability_warning() {
        eprintln!(
            "skewsim: warning: dt n^2 = {} exceeds 0.1; the mollified drift is resolved by few steps",
            finest.dt * (finest.mollifier_scale as f64).powi(2)
        );
    }
    let ladder = path_sim::refinement_ladder(&finest, a.levels);
    let rows = runner::path_samples(&cfg, &ladder, seed, n, a.out.threads)?;
    let horizons = a.profile.clone().unwrap_or_else(|| {
        [0.1, 0.2, 0.5, 1.0].iter().map(|f| f * finest.horizon).collect()
    });
    let summary = summarize_paths(&cfg, &ladder, &rows, &horizons)?;
    let mut csv_rows = Vec::with_capacity(n * ladder.len());
    for (i, r) in rows.iter().enumerate() {
        for (k, p) in r.iter().enumerate() {
            csv_rows.push(vec![
                i.to_string(),
                k.to_string(),
                fmt_opt(p.t_star),
                fmt_f64(p.u_star_path),
                fmt_f64(p.u_star_corrected),
                u8::from(p.hit).to_string(),
            ]);
        }
    }
    write_csv(
        &a.out.out.join("paths.csv"),
        &["pathIndex", "level", "tStar", "uStarPath", "uStarCorrected", "hit"],
        csv_rows,
    )?;
    write_json(&a.out.out.join("paths_summary.json"), &summary)?;
    let last = summary.levels.last().expect("at least one level");
    let m = RunManifest {
        seed: Some(seed),
        trajectory_count: n,
        euler: Some(EulerEcho::from(&finest)),
        wall_time: started.elapsed().as_secs_f64(),
        censored_fraction: last.censored_fraction,
        ..RunManifest::new("paths", Some(&cfg))
    };
    write_json(&manifest_path(&a.out.out, "paths"), &m)?;
    for (k, l) in summary.levels.iter().enumerate() {
        println!(
            "level {k}: dt = {:e}, n = {}, hits {}/{}, ks occupation {}, ks corrected {}",
            l.euler.dt,
            l.euler.mollifier_scale,
            l.hits,
            l.paths,
            l.ks_occupation.map_or("-".into(), |v| format!("{v:.4}")),
            l.ks_corrected.map_or("-".into(), |v| format!("{v:.4}")),
        );
    }
    Ok(true)
}

pub fn cmd_excursion(a: &ExcursionArgs) -> CliResult<bool> {
    let started = Instant::now();
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(CliError::config(format!("--h must be positive, got {}", a.h)));
    }
    if !(a.beta2.abs() < 1.0 && a.beta2 != 0.0) {
        return Err(CliError::config(format!("--beta2 must lie in (-1, 1) \\ {{0}}, got {}", a.beta2)));
    }
    let jump_cfg = a
        .beta1
        .map(|b1| SkewConfig::new(a.h, b1, a.beta2))
        .transpose()?;
    let queries = a.grid.points();
    let simulated = if a.paths > 0 {
        let e = a.euler.resolve(None)?;
        let top = queries.iter().cloned().fold(0.0, f64::max);
        let paths = runner::localtime_paths(a.h, a.beta2, &e, top, a.seed, a.paths, a.out.threads)?;
        Some((e, path_sim::survival_from_paths(&paths, &queries)?))
    } else {
        None
    };
    let mut worst: f64 = 0.0;
    let mut rows = Vec::with_capacity(queries.len());
    for (i, &q) in queries.iter().enumerate() {
        let exact = analytic::localtime_survival(a.h, a.beta2, q);
        let tail = jump_cfg.map(|c| analytic::excursion_jump_law(&c, a.h, q));
        let (emp, cens) = match &simulated {
            Some((_, s)) => (Some(s.survival[i]), Some(s.censored[i])),
            None => (None, None),
        };
        if let Some(v) = emp.filter(|v| v.is_finite()) {
            worst = worst.max((v - exact).abs());
        }
        rows.push(vec![
            fmt_f64(q),
            fmt_f64(exact),
            fmt_opt(tail),
            fmt_opt(emp),
            cens.map(|c| c.to_string()).unwrap_or_default(),
        ]);
    }
    write_csv(
        &a.out.out.join("excursion.csv"),
        &["a", "survival", "excursionTail", "empiricalSurvival", "censored"],
        rows,
    )?;
    let m = RunManifest {
        seed: simulated.as_ref().map(|_| a.seed),
        trajectory_count: a.paths,
        euler: simulated.as_ref().map(|(e, _)| EulerEcho::from(e)),
        wall_time: started.elapsed().as_secs_f64(),
        censored_fraction: simulated
            .as_ref()
            .map_or(0.0, |(_, s)| s.censored.iter().max().copied().unwrap_or(0) as f64 / a.paths as f64),
        ..RunManifest::new("excursion", jump_cfg.as_ref())
    };
    write_json(&manifest_path(&a.out.out, "excursion"), &m)?;
    if simulated.is_some() {
        println!("max |empirical - analytic| survival gap: {worst:.4} (tolerance {})", a.tolerance);
    }
    Ok(worst <= a.tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "2:10:200".parse().unwrap();
        assert_eq!(g, GridSpec { a: 2.0, b: 10.0, n: 200 });
        assert_eq!(g.points().len(), 200);
        assert_eq!(g.points()[199], 10.0);
        for bad in ["2:10", "a:1:2", "3:1:5", "0:1:0", "0:1:-1"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn negative_flags_parse() {
        let cli = Cli::try_parse_from(["skewsim", "chain", "--x", "1", "--beta1", "-0.3", "--beta2", "0.4"]).unwrap();
        let Command::Chain(a) = cli.command else { panic!() };
        assert_eq!(a.model.beta1, Some(-0.3));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"x": 2, "beta1": 0.5, "beta2": 0.25, "chain": {"n": 7}}"#).unwrap();
        let m = ModelArgs { config: Some(p.clone()), x: None, beta1: None, beta2: Some(-0.5) };
        let (cfg, file) = m.resolve().unwrap();
        assert_eq!((cfg.x(), cfg.beta1(), cfg.beta2()), (2.0, 0.5, -0.5));
        assert_eq!(file.unwrap().chain.unwrap().n, Some(7));
        let missing = ModelArgs { config: None, x: Some(1.0), beta1: None, beta2: None };
        assert_eq!(missing.resolve().unwrap_err().exit_code(), exit::CONFIG);
    }

    #[test]
    fn bounds_by_regime() {
        let pp = SkewConfig::new(1.0, 0.5, 0.25).unwrap();
        assert_eq!(laplace_bounds(&pp, 1.0), (0.0, (-2.0f64).exp()));
        let pn = SkewConfig::new(1.0, 0.5, -0.5).unwrap();
        assert_eq!(laplace_bounds(&pn, 1.0), ((-2.0f64).exp(), 1.0));
    }
}
