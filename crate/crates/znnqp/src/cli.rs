//! Config-file-driven command line: `bench`, `track`, `oracle`, `verify`.
//!
//! Every run is a pure function of the config file (seeds included), so
//! repeated invocations produce byte-identical data files. The only
//! non-reproducible field is the wall-clock `runtime_ms` column of
//! `summary.csv`; `verify` ignores it.

use crate::error::{Error, Result};
use crate::integrator::{integrate, Diagnostics, RunConfig, RunLog};
use crate::models::{ModelKind, ModelSpec, SlidingPolicy};
use crate::noise::{NoiseChannel, NoiseKind};
use crate::numkit::Vector;
use crate::oracle;
use crate::robot::{self, ArmModel, TrajKind, TrajectorySpec};
use crate::tvqp::{benchmark_problem, KktState, TimeVariantQP};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: u32,
    pub experiment: ExperimentCfg,
    #[serde(default)]
    pub init: InitCfg,
    #[serde(default)]
    pub models: Vec<ModelCfg>,
    #[serde(default)]
    pub noise_scenarios: Vec<NoiseCfg>,
    #[serde(default)]
    pub robot: Option<RobotCfg>,
    #[serde(default)]
    pub oracle: Option<OracleCfg>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ExperimentCfg {
    pub name: String,
    /// "benchmark" (the built-in moving QP) or "robot".
    pub kind: String,
    pub output_dir: String,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_tau")]
    pub tau: f64,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    3.0
}
fn default_record_every() -> usize {
    1
}
fn default_tau() -> f64 {
    1e-8
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct InitCfg {
    /// "oracle" (default) or "zero".
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub perturb_radius: f64,
    #[serde(default)]
    pub perturb_seed: u64,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ModelCfg {
    pub kind: String,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub t_c: Option<f64>,
    #[serde(default)]
    pub zeta: Option<f64>,
    #[serde(default)]
    pub sliding: Option<String>,
}

fn default_alpha() -> f64 {
    1.0
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct NoiseCfg {
    pub name: String,
    /// "zero", "sinusoid", "white", or "cos_plus_white".
    pub kind: String,
    #[serde(default)]
    pub amp: f64,
    #[serde(default = "default_freq")]
    pub freq: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_freq() -> f64 {
    1.0
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct RobotCfg {
    pub arm_file: String,
    pub trajectory: String,
    #[serde(default = "default_period")]
    pub period: f64,
}

fn default_period() -> f64 {
    10.0
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct OracleCfg {
    pub t_start: f64,
    pub t_end: f64,
    pub step: f64,
}

impl NoiseCfg {
    fn channel(&self, dim: usize) -> Result<NoiseChannel> {
        let kind = match self.kind.as_str() {
            "zero" => NoiseKind::Zero,
            "sinusoid" => NoiseKind::Sinusoid {
                amp: self.amp,
                freq: self.freq,
            },
            "white" => NoiseKind::BoundedWhite {
                amp: self.amp,
                seed: self.seed,
            },
            "cos_plus_white" => NoiseKind::Composite(vec![
                NoiseKind::Sinusoid {
                    amp: self.amp,
                    freq: self.freq,
                },
                NoiseKind::BoundedWhite {
                    amp: self.amp,
                    seed: self.seed,
                },
            ]),
            other => {
                return Err(Error::Config(format!(
                    "noise_scenarios.kind: unknown kind '{other}'"
                )))
            }
        };
        Ok(NoiseChannel { kind, dim })
    }
}

impl ModelCfg {
    fn spec(&self, delta_bound: f64) -> Result<ModelSpec> {
        let kind = ModelKind::from_name(&self.kind)
            .ok_or_else(|| Error::Config(format!("models.kind: unknown model '{}'", self.kind)))?;
        let mut spec = ModelSpec::benchmark(kind, self.alpha, delta_bound);
        if let Some(g) = self.gamma {
            spec.gamma = g;
            spec.xi = spec.zeta / g;
        }
        if let Some(tc) = self.t_c {
            spec.t_c = tc;
        }
        if let Some(z) = self.zeta {
            spec.zeta = z;
            spec.gamma3 = z;
            spec.xi = z / spec.gamma;
        }
        if let Some(s) = &self.sliding {
            spec.sliding = match s.as_str() {
                "saturated" => SlidingPolicy::Saturated,
                "explicit" => SlidingPolicy::Explicit,
                other => {
                    return Err(Error::Config(format!(
                        "models.sliding: unknown policy '{other}'"
                    )))
                }
            };
        }
        spec.validate()?;
        Ok(spec)
    }
}

pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: ConfigFile =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if cfg.schema != 1 {
        return Err(Error::Config(format!("unsupported schema {}", cfg.schema)));
    }
    if !(cfg.experiment.dt > 0.0) {
        return Err(Error::Config("experiment.dt must be positive".into()));
    }
    Ok(cfg)
}

/// Entry point used by the thin binary. `args` excludes the program name.
pub fn run(args: &[String]) -> i32 {
    if args.len() != 2 {
        eprintln!("usage: znnqp <bench|track|oracle|verify> <config.cfg>");
        return EXIT_CONFIG;
    }
    let path = PathBuf::from(&args[1]);
    let out = match args[0].as_str() {
        "bench" => cmd_bench(&path),
        "track" => cmd_track(&path),
        "oracle" => cmd_oracle(&path),
        "verify" => cmd_verify(&path),
        other => {
            eprintln!("unknown subcommand '{other}'");
            return EXIT_CONFIG;
        }
    };
    match out {
        Ok(code) => code,
        Err(Error::Config(msg)) => {
            eprintln!("config error: {msg}");
            EXIT_CONFIG
        }
        Err(Error::Infeasible { t }) => {
            eprintln!("oracle infeasible at t = {t}");
            EXIT_INFEASIBLE
        }
        Err(Error::NumericalBlowup { step, t, .. }) => {
            eprintln!("numerical blowup at step {step} (t = {t})");
            EXIT_NUMERICAL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}

struct SummaryRow {
    model: String,
    noise: String,
    alpha: f64,
    res_at_tc: f64,
    res_steady_max: f64,
    runtime_ms: f64,
    status: &'static str,
}

fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("model,noise,alpha,res_at_tc,res_steady_max,runtime_ms,status\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.17e},{:.17e},{:.3},{}\n",
            r.model, r.noise, r.alpha, r.res_at_tc, r.res_steady_max, r.runtime_ms, r.status
        ));
    }
    out
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn oracle_init(problem: &TimeVariantQP, t0: f64, tau: f64, init: &InitCfg) -> Result<KktState> {
    let mode = init.mode.as_deref().unwrap_or("oracle");
    let mut y = match mode {
        "oracle" => oracle::stacked_state(&oracle::solve_at(problem, t0)?),
        "zero" => Vector::zeros(problem.dim()),
        other => return Err(Error::Config(format!("init.mode: unknown mode '{other}'"))),
    };
    if init.perturb_radius > 0.0 {
        let raw = crate::numkit::seeded_uniform(init.perturb_seed, y.len());
        let norm = raw.norm2();
        if norm > 0.0 {
            y.axpy(init.perturb_radius / norm, &raw);
        }
    }
    KktState::new(y, t0, tau)
}

/// Runs every configured model under every noise scenario on the built-in
/// benchmark problem, writing one CSV per run plus `summary.csv`.
pub fn cmd_bench(config_path: &Path) -> Result<i32> {
    let cfg = load_config(config_path)?;
    if cfg.experiment.kind != "benchmark" {
        return Err(Error::Config(format!(
            "experiment.kind: bench needs 'benchmark', got '{}'",
            cfg.experiment.kind
        )));
    }
    if cfg.models.is_empty() {
        return Err(Error::Config(
            "models: at least one model is required".into(),
        ));
    }
    if cfg.noise_scenarios.is_empty() {
        return Err(Error::Config(
            "noise_scenarios: at least one scenario is required".into(),
        ));
    }
    let out_dir = PathBuf::from(&cfg.experiment.output_dir);
    ensure_dir(&out_dir)?;
    let problem = benchmark_problem();
    let dim = problem.dim();
    let mut rows = Vec::new();
    let mut had_blowup = false;

    for noise_cfg in &cfg.noise_scenarios {
        let channel = noise_cfg.channel(dim)?;
        let delta_bound = channel.inf_bound();
        for model_cfg in &cfg.models {
            let spec = model_cfg.spec(delta_bound)?;
            let t_c = spec.t_c;
            let y0 = oracle_init(&problem, cfg.experiment.dt, cfg.experiment.tau, &cfg.init)?;
            let run_cfg = RunConfig {
                dt: cfg.experiment.dt,
                t_end: cfg.experiment.t_end,
                model: spec.clone(),
                noise: channel.clone(),
                y0,
                record_every: cfg.experiment.record_every,
                diagnostics: Diagnostics {
                    lyapunov: true,
                    condition_number: false,
                },
            };
            let started = std::time::Instant::now();
            let (log, status) = match integrate(&problem, &run_cfg) {
                Ok(log) => (log, "ok"),
                Err(Error::NumericalBlowup { partial, .. }) => {
                    had_blowup = true;
                    (*partial, "blowup")
                }
                Err(e) => return Err(e),
            };
            let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            let name = format!(
                "{}_{}_a{}",
                spec.kind.name(),
                noise_cfg.name,
                model_cfg.alpha
            );
            std::fs::write(out_dir.join(format!("{name}.csv")), log.to_csv())?;
            rows.push(SummaryRow {
                model: spec.kind.name().into(),
                noise: noise_cfg.name.clone(),
                alpha: model_cfg.alpha,
                res_at_tc: log.residual_at(t_c),
                res_steady_max: log.residual_max_on(t_c, cfg.experiment.t_end),
                runtime_ms,
                status,
            });
        }
    }
    std::fs::write(out_dir.join("summary.csv"), summary_csv(&rows))?;
    println!(
        "bench '{}': {} runs -> {}",
        cfg.experiment.name,
        rows.len(),
        out_dir.display()
    );
    Ok(if had_blowup { EXIT_NUMERICAL } else { EXIT_OK })
}

/// Runs the closed-loop tracking study and writes the trajectory log plus
/// `track_summary.csv`.
pub fn cmd_track(config_path: &Path) -> Result<i32> {
    let cfg = load_config(config_path)?;
    if cfg.experiment.kind != "robot" {
        return Err(Error::Config(format!(
            "experiment.kind: track needs 'robot', got '{}'",
            cfg.experiment.kind
        )));
    }
    let robot_cfg = cfg
        .robot
        .as_ref()
        .ok_or_else(|| Error::Config("missing [robot] section".into()))?;
    if cfg.models.is_empty() {
        return Err(Error::Config(
            "models: at least one model is required".into(),
        ));
    }
    let noise_cfg = cfg
        .noise_scenarios
        .first()
        .ok_or_else(|| Error::Config("noise_scenarios: one scenario is required".into()))?;
    let arm_path = resolve_relative(config_path, &robot_cfg.arm_file);
    let arm = ArmModel::from_file(&arm_path)?;
    let kind = TrajKind::from_name(&robot_cfg.trajectory).ok_or_else(|| {
        Error::Config(format!(
            "robot.trajectory: unknown curve '{}'",
            robot_cfg.trajectory
        ))
    })?;
    let traj = TrajectorySpec::new(kind, robot_cfg.period);
    let dim = robot::ARM_DOF + 3 + 2 * robot::ARM_DOF;
    let channel = noise_cfg.channel(dim)?;
    let out_dir = PathBuf::from(&cfg.experiment.output_dir);
    ensure_dir(&out_dir)?;

    let mut summary = String::from(
        "model,alpha,trajectory,max_ex,max_ey,max_ez,mean_ex,mean_ey,mean_ez,angle_violations,velocity_violations,return_gap,runtime_ms\n",
    );
    for model_cfg in &cfg.models {
        let spec = model_cfg.spec(channel.inf_bound())?;
        let started = std::time::Instant::now();
        let log = robot::track(
            &arm,
            &traj,
            &spec,
            &channel,
            cfg.experiment.dt,
            cfg.experiment.tau,
            cfg.experiment.record_every,
        )?;
        let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
        let name = format!(
            "track_{}_{}_a{}",
            kind.name(),
            spec.kind.name(),
            model_cfg.alpha
        );
        std::fs::write(out_dir.join(format!("{name}.csv")), log.to_csv())?;
        let me = log.max_axis_error();
        let ae = log.mean_axis_error();
        summary.push_str(&format!(
            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{:.17e},{:.3}\n",
            spec.kind.name(),
            model_cfg.alpha,
            kind.name(),
            me[0],
            me[1],
            me[2],
            ae[0],
            ae[1],
            ae[2],
            log.angle_violations,
            log.velocity_violations,
            log.return_gap,
            runtime_ms,
        ));
    }
    std::fs::write(out_dir.join("track_summary.csv"), summary)?;
    println!("track '{}' -> {}", cfg.experiment.name, out_dir.display());
    Ok(EXIT_OK)
}

/// Samples the active-set oracle along a grid and writes `oracle.csv`.
pub fn cmd_oracle(config_path: &Path) -> Result<i32> {
    let cfg = load_config(config_path)?;
    if cfg.experiment.kind != "benchmark" {
        return Err(Error::Config(format!(
            "experiment.kind: oracle needs 'benchmark', got '{}'",
            cfg.experiment.kind
        )));
    }
    let grid_cfg = cfg
        .oracle
        .as_ref()
        .ok_or_else(|| Error::Config("missing [oracle] section".into()))?;
    if !(grid_cfg.step > 0.0 && grid_cfg.t_end >= grid_cfg.t_start) {
        return Err(Error::Config(
            "oracle grid: needs step > 0 and t_end >= t_start".into(),
        ));
    }
    let out_dir = PathBuf::from(&cfg.experiment.output_dir);
    ensure_dir(&out_dir)?;
    let problem = benchmark_problem();
    let count = ((grid_cfg.t_end - grid_cfg.t_start) / grid_cfg.step).round() as usize;
    let grid: Vec<f64> = (0..=count)
        .map(|i| grid_cfg.t_start + i as f64 * grid_cfg.step)
        .collect();
    let path = oracle::solution_path(&problem, &grid)?;
    std::fs::write(out_dir.join("oracle.csv"), oracle::path_to_csv(&path))?;
    println!(
        "oracle '{}': {} samples, {} active-set switches -> {}",
        cfg.experiment.name,
        path.solutions.len(),
        path.switch_times.len(),
        out_dir.display()
    );
    Ok(EXIT_OK)
}

/// Recomputes the summary statistics from the per-run CSVs and checks them
/// against `summary.csv` (the wall-clock column is ignored).
pub fn cmd_verify(config_path: &Path) -> Result<i32> {
    let cfg = load_config(config_path)?;
    let out_dir = PathBuf::from(&cfg.experiment.output_dir);
    let summary_path = out_dir.join("summary.csv");
    let text = std::fs::read_to_string(&summary_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", summary_path.display())))?;
    let mut mismatches = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 7 {
            return Err(Error::Config(format!(
                "summary.csv: malformed row '{line}'"
            )));
        }
        let (model, noise, alpha) = (fields[0], fields[1], fields[2]);
        let res_at_tc: f64 = fields[3]
            .parse()
            .map_err(|_| Error::Config("summary.csv: bad number".into()))?;
        let res_steady_max: f64 = fields[4]
            .parse()
            .map_err(|_| Error::Config("summary.csv: bad number".into()))?;
        let run_path = out_dir.join(format!("{model}_{noise}_a{alpha}.csv"));
        let run_text = std::fs::read_to_string(&run_path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", run_path.display())))?;
        let (times, norms) = parse_run_csv(&run_text)?;
        // the predefined time of the matching model block (default 1.0)
        let t_c = cfg
            .models
            .iter()
            .find(|m| m.kind == model && format!("{}", m.alpha) == alpha)
            .and_then(|m| m.t_c)
            .unwrap_or(1.0);
        let recomputed_tc = value_at(&times, &norms, t_c);
        let recomputed_max = times
            .iter()
            .zip(&norms)
            .filter(|(t, _)| **t >= t_c - 1e-12)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        if (recomputed_tc - res_at_tc).abs() > 1e-12 * (1.0 + res_at_tc.abs())
            || (recomputed_max - res_steady_max).abs() > 1e-12 * (1.0 + res_steady_max.abs())
        {
            eprintln!("mismatch in {model}/{noise}/alpha={alpha}");
            mismatches += 1;
        }
    }
    if mismatches == 0 {
        println!("verify: summary.csv consistent with per-run data");
        Ok(EXIT_OK)
    } else {
        Err(Error::Config(format!(
            "verify: {mismatches} summary rows disagree with per-run data"
        )))
    }
}

fn parse_run_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut times = Vec::new();
    let mut norms = Vec::new();
    for line in text.lines().skip(1) {
        let mut it = line.split(',');
        let t: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config("run csv: bad t column".into()))?;
        let r: f64 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config("run csv: bad res_norm column".into()))?;
        times.push(t);
        norms.push(r);
    }
    Ok((times, norms))
}

fn value_at(times: &[f64], values: &[f64], t: f64) -> f64 {
    let mut best = 0;
    let mut gap = f64::INFINITY;
    for (i, ti) in times.iter().enumerate() {
        let g = (ti - t).abs();
        if g < gap {
            gap = g;
            best = i;
        }
    }
    values[best]
}

fn resolve_relative(config_path: &Path, target: &str) -> PathBuf {
    let p = PathBuf::from(target);
    if p.is_absolute() {
        p
    } else {
        config_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// Convenience handle for tests and examples: a bench-style single run on
/// the built-in benchmark.
pub fn bench_single_run(
    model: ModelSpec,
    noise: NoiseChannel,
    dt: f64,
    t_end: f64,
    tau: f64,
    init: &InitCfg,
) -> Result<RunLog> {
    let problem = benchmark_problem();
    let y0 = oracle_init(&problem, dt, tau, init)?;
    let cfg = RunConfig {
        dt,
        t_end,
        model,
        noise,
        y0,
        record_every: 1,
        diagnostics: Diagnostics {
            lyapunov: true,
            condition_number: false,
        },
    };
    integrate(&problem, &cfg)
}
