//! Time-convergence studies against a cached monolithic reference.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::coupling::monolithic::run_monolithic_reference;
use crate::coupling::schedule::write_trace;
use crate::coupling::scheme::{run_ern, run_jagged, JaggedConfig, RunStatus, SchemeOptions, Trajectory};
use crate::coupling::Order;
use crate::error::{FsiError, Result};
use crate::fluid::DerivativeSpacing;
use crate::problem::{coarse_step, fine_step, hex, step_count, Physics, T_FINAL};
use crate::solid::{SolidState, StringSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ern,
    Jagged { n_f: usize, n_s: usize },
    Reference,
}

impl Scheme {
    pub fn label(&self) -> String {
        match self {
            Scheme::Ern => "ERN".into(),
            Scheme::Jagged { n_f, n_s } => format!("F {n_f} S {n_s}"),
            Scheme::Reference => "reference".into(),
        }
    }
}

/// Resolution of the monolithic reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSpec {
    pub tau: f64,
    /// Mesh refinement rate, `h = base_h / 2^rate`.
    pub rate_space: u32,
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        ReferenceSpec {
            tau: 1.5625e-5,
            rate_space: 4,
        }
    }
}

impl ReferenceSpec {
    /// Rate whose mesh size is `h` for the given base size.
    pub fn rate_for_h(base_h: f64, h: f64) -> Result<u32> {
        let r = (base_h / h).log2();
        if !(r >= 0.0) || (r - r.round()).abs() > 1e-9 {
            return Err(FsiError::Config(format!(
                "reference h = {h} is not base_h / 2^k for base_h = {base_h}"
            )));
        }
        Ok(r.round() as u32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub scheme: Scheme,
    pub rates: Vec<u32>,
    pub extr: Order,
    pub t_final: f64,
    pub physics: Physics,
    pub reference: ReferenceSpec,
    pub options: SchemeOptions,
    /// Where report and profiles go; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Reference cache; defaults to `<out_dir>/cache`, or no cache.
    pub cache_dir: Option<PathBuf>,
    /// Concurrent runs.
    pub workers: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            scheme: Scheme::Ern,
            rates: vec![0, 1, 2, 3],
            extr: Order::FIRST,
            t_final: T_FINAL,
            physics: Physics::default(),
            reference: ReferenceSpec::default(),
            options: SchemeOptions::default(),
            out_dir: None,
            cache_dir: None,
            workers: 1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rates.is_empty() || self.rates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FsiError::Config(format!(
                "rates must be non-empty and strictly increasing, got {:?}",
                self.rates
            )));
        }
        if let Scheme::Jagged { n_f, n_s } = self.scheme {
            if n_f == 0 || n_s == 0 {
                return Err(FsiError::Config("N_f and N_s must be at least 1".into()));
            }
        }
        if self.workers == 0 {
            return Err(FsiError::Config("workers must be at least 1".into()));
        }
        if !(self.options.blowup > 0.0) {
            return Err(FsiError::Config("blow-up threshold must be positive".into()));
        }
        self.physics.validate().map_err(|e| FsiError::Config(e.to_string()))?;
        step_count(self.t_final, self.reference.tau).map_err(|e| FsiError::Config(e.to_string()))?;
        Ok(())
    }

    fn cache(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| self.out_dir.as_ref().map(|d| d.join("cache")))
    }
}

/// One scheme run at one rate.
pub fn run_scheme(
    scheme: Scheme,
    rate: u32,
    extr: Order,
    t_final: f64,
    physics: &Physics,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    match scheme {
        Scheme::Ern => run_ern(rate, extr, t_final, physics, options),
        Scheme::Jagged { n_f, n_s } => {
            let cfg = JaggedConfig::for_rate(n_f, n_s, rate, extr)?;
            run_jagged(&cfg, rate, t_final, physics, options)
        }
        Scheme::Reference => run_monolithic_reference(fine_step(rate), rate, t_final, physics, options),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub rate: u32,
    /// Absent for unstable runs.
    pub error: Option<f64>,
    /// Absent on the first row and next to unstable runs.
    pub order: Option<f64>,
    pub seconds: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn error(&self, rate: u32) -> Option<f64> {
        self.rows.iter().find(|r| r.rate == rate).and_then(|r| r.error)
    }

    pub fn order(&self, rate: u32) -> Option<f64> {
        self.rows.iter().find(|r| r.rate == rate).and_then(|r| r.order)
    }

    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| r.stable)
    }
}

/// Outcome of one run inside a study.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rate: u32,
    pub status: RunStatus,
    pub seconds: f64,
    pub max_energy: f64,
    pub fluid_solves: usize,
    pub solid_solves: usize,
    pub final_solid: SolidState,
}

#[derive(Debug, Clone)]
pub struct StudyOutcome {
    pub report: ErrorReport,
    pub runs: Vec<RunSummary>,
    pub reference: SolidState,
}

/// Nodal restriction of a fine interface vector onto `n_coarse` nested
/// nodes.
pub fn restrict_nodal(fine: &[f64], n_coarse: usize) -> Result<Vec<f64>> {
    let (nf, nc) = (fine.len(), n_coarse);
    if nc < 2 || nf < nc || (nf - 1) % (nc - 1) != 0 {
        return Err(FsiError::NonNestedGrids { coarse: nc, fine: nf });
    }
    let stride = (nf - 1) / (nc - 1);
    Ok(fine.iter().step_by(stride).copied().collect())
}

/// `|d_test - d_ref| / |d_ref|` in the elastic energy norm of the grid of
/// `d_test`, with `d_ref` restricted nodally onto it.
pub fn relative_error(d_test: &[f64], d_ref: &[f64], physics: &Physics) -> Result<f64> {
    let n = d_test.len();
    let r = restrict_nodal(d_ref, n)?;
    let len = physics.geometry.length;
    let x = (0..n).map(|k| k as f64 / (n - 1) as f64 * len).collect();
    let space = StringSpace::from_coordinates(x, physics.solid)?;
    let denom = space.energy_norm(&r);
    if !(denom > 0.0) {
        return Err(FsiError::ZeroReference);
    }
    let diff: Vec<f64> = d_test.iter().zip(&r).map(|(a, b)| a - b).collect();
    Ok(space.energy_norm(&diff) / denom)
}

/// `log(E_curr / E_prev) / log(1/2)`.
pub fn compute_order(e_prev: f64, e_curr: f64) -> Result<f64> {
    for e in [e_prev, e_curr] {
        if !(e > 0.0) {
            return Err(FsiError::NonPositiveError(e));
        }
    }
    Ok((e_curr / e_prev).ln() / 0.5f64.ln())
}

/// Cache key of a reference run.
pub fn reference_key(spec: &ReferenceSpec, t_final: f64, physics: &Physics) -> String {
    let mut h = Sha256::new();
    h.update(b"reference-v1");
    h.update(spec.tau.to_bits().to_le_bytes());
    h.update(spec.rate_space.to_le_bytes());
    h.update(t_final.to_bits().to_le_bytes());
    h.update(physics.fingerprint().as_bytes());
    hex(&h.finalize())
}

fn write_reference(path: &Path, key: &str, s: &SolidState) -> Result<()> {
    let io = |e| FsiError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "key {key}").map_err(io)?;
    writeln!(w, "t {:e}", s.t).map_err(io)?;
    writeln!(w, "steps {}", s.step_index).map_err(io)?;
    writeln!(w, "nodes {}", s.d.len()).map_err(io)?;
    for (d, v) in s.d.iter().zip(&s.dd) {
        writeln!(w, "{d:e} {v:e}").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn read_reference(path: &Path, key: &str) -> Result<SolidState> {
    let text = fs::read_to_string(path).map_err(|e| FsiError::io(path, e))?;
    let bad = |reason: &str| FsiError::Malformed {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let mut lines = text.lines();
    let mut field = |name: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad("truncated header"))?;
        line.strip_prefix(name)
            .map(|v| v.trim().to_string())
            .ok_or_else(|| bad(&format!("expected {name}")))
    };
    if field("key")? != key {
        return Err(bad("cache key mismatch"));
    }
    let t: f64 = field("t")?.parse().map_err(|_| bad("t"))?;
    let steps: usize = field("steps")?.parse().map_err(|_| bad("steps"))?;
    let n: usize = field("nodes")?.parse().map_err(|_| bad("nodes"))?;
    let mut s = SolidState::zeros(n);
    s.t = t;
    s.step_index = steps;
    for k in 0..n {
        let line = lines.next().ok_or_else(|| bad("truncated data"))?;
        let mut it = line.split_whitespace().map(str::parse::<f64>);
        match (it.next(), it.next()) {
            (Some(Ok(d)), Some(Ok(v))) => {
                s.d[k] = d;
                s.dd[k] = v;
            }
            _ => return Err(bad("bad data line")),
        }
    }
    Ok(s)
}

/// Final wall state of the monolithic reference, computed once per
/// parameter set and cached under `cache_dir` when given. Concurrent callers
/// sharing a cache directory wait for the first one instead of recomputing.
pub fn reference_solution(
    spec: &ReferenceSpec,
    t_final: f64,
    physics: &Physics,
    cache_dir: Option<&Path>,
) -> Result<SolidState> {
    let compute = || -> Result<SolidState> {
        log::info!(
            "computing reference: tau = {:e}, rate {}, T = {t_final}",
            spec.tau,
            spec.rate_space
        );
        let traj = run_monolithic_reference(spec.tau, spec.rate_space, t_final, physics, &SchemeOptions::default())?;
        if !traj.is_stable() {
            return Err(FsiError::InvalidParameter(format!("reference run unstable: {:?}", traj.status)));
        }
        Ok(traj.final_solid)
    };
    let Some(dir) = cache_dir else {
        return compute();
    };
    fs::create_dir_all(dir).map_err(|e| FsiError::io(dir, e))?;
    let key = reference_key(spec, t_final, physics);
    let path = dir.join(format!("reference-{key}.txt"));
    let lock = dir.join(format!("reference-{key}.lock"));
    loop {
        if path.exists() {
            return read_reference(&path, &key);
        }
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {
                let result = compute().and_then(|s| {
                    let tmp = dir.join(format!("reference-{key}.{}.tmp", std::process::id()));
                    write_reference(&tmp, &key, &s)?;
                    fs::rename(&tmp, &path).map_err(|e| FsiError::io(&path, e))?;
                    Ok(s)
                });
                let _ = fs::remove_file(&lock);
                return result;
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                std::thread::sleep(Duration::from_millis(200));
            }
            Err(e) => return Err(FsiError::io(&lock, e)),
        }
    }
}

/// Runs every rate of the study and compares with the reference.
pub fn run_study_outcome(config: &StudyConfig) -> Result<StudyOutcome> {
    config.validate()?;
    let cache = config.cache();
    let reference = reference_solution(&config.reference, config.t_final, &config.physics, cache.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| FsiError::InvalidParameter(e.to_string()))?;
    let runs: Vec<Result<RunSummary>> = pool.install(|| {
        config
            .rates
            .par_iter()
            .map(|&rate| {
                let start = Instant::now();
                let traj = run_scheme(
                    config.scheme,
                    rate,
                    config.extr,
                    config.t_final,
                    &config.physics,
                    &config.options,
                )?;
                let seconds = start.elapsed().as_secs_f64();
                log::info!("{} rate {rate}: {seconds:.2} s, {:?}", config.scheme.label(), traj.status);
                Ok(RunSummary {
                    rate,
                    status: traj.status,
                    seconds,
                    max_energy: traj.max_energy(),
                    fluid_solves: traj.fluid_solves,
                    solid_solves: traj.solid_solves,
                    final_solid: traj.final_solid,
                })
            })
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<ErrorRow> = Vec::with_capacity(runs.len());
    for run in &runs {
        let stable = run.status.is_stable();
        let error = if stable {
            Some(relative_error(&run.final_solid.d, &reference.d, &config.physics)?)
        } else {
            None
        };
        let order = match (rows.last().and_then(|r| r.error), error) {
            (Some(prev), Some(curr)) if prev > 0.0 && curr > 0.0 => Some(compute_order(prev, curr)?),
            _ => None,
        };
        rows.push(ErrorRow {
            rate: run.rate,
            error,
            order,
            seconds: run.seconds,
            stable,
        });
    }
    let outcome = StudyOutcome {
        report: ErrorReport { rows },
        runs,
        reference,
    };
    if let Some(dir) = &config.out_dir {
        write_outputs(config, &outcome, dir)?;
    }
    Ok(outcome)
}

pub fn run_study(config: &StudyConfig) -> Result<ErrorReport> {
    Ok(run_study_outcome(config)?.report)
}

fn write_outputs(config: &StudyConfig, outcome: &StudyOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| FsiError::io(dir, e))?;
    emit_report(&outcome.report, &dir.join("report.csv"))?;
    for run in &outcome.runs {
        let x = interface_x(run.final_solid.d.len(), &config.physics);
        emit_displacement_profile(&x, &run.final_solid, &dir.join(format!("profile_rate{}.csv", run.rate)))?;
    }
    if let Scheme::Jagged { n_f, n_s } = config.scheme {
        emit_schedule(n_f, n_s, coarse_step(config.rates[0]), dir)?;
    }
    Ok(())
}

/// Writes `schedule_{Nf}_{Ns}.txt` with three coarse intervals.
pub fn emit_schedule(n_f: usize, n_s: usize, tau_coarse: f64, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(format!("schedule_{n_f}_{n_s}.txt"));
    let file = File::create(&path).map_err(|e| FsiError::io(&path, e))?;
    let mut w = BufWriter::new(file);
    write_trace(&mut w, n_f, n_s, tau_coarse, 3)?;
    w.flush().map_err(|e| FsiError::io(&path, e))?;
    Ok(path)
}

pub fn interface_x(n: usize, physics: &Physics) -> Vec<f64> {
    (0..n)
        .map(|k| k as f64 / (n - 1) as f64 * physics.geometry.length)
        .collect()
}

/// `%g` with six significant digits.
pub fn format_g6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    // Take the exponent after rounding, 999999.7 becomes 1e+06.
    let sci = format!("{v:.5e}");
    let (mant, e) = sci.split_once('e').expect("scientific format");
    let exp_r: i32 = e.parse().expect("exponent");
    if !(-4..6).contains(&exp_r) {
        let mant = trim_zeros(mant);
        let sign = if exp_r < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp_r.abs());
    }
    let decimals = (5 - exp_r).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const REPORT_HEADER: &str = "rate,E,O,seconds,stable";

pub fn format_report(report: &ErrorReport) -> String {
    let mut out = String::new();
    writeln!(out, "{REPORT_HEADER}").unwrap();
    for r in &report.rows {
        let opt = |v: Option<f64>| v.map(format_g6).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            r.rate,
            opt(r.error),
            opt(r.order),
            format_g6(r.seconds),
            r.stable
        )
        .unwrap();
    }
    out
}

pub fn emit_report(report: &ErrorReport, path: &Path) -> Result<()> {
    fs::write(path, format_report(report)).map_err(|e| FsiError::io(path, e))
}

pub fn parse_report(text: &str) -> std::result::Result<ErrorReport, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == REPORT_HEADER => {}
        other => return Err(format!("bad header {other:?}")),
    }
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(format!("expected 5 fields in {line:?}"));
        }
        let opt = |s: &str| -> std::result::Result<Option<f64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| format!("{e} in {line:?}"))
            }
        };
        rows.push(ErrorRow {
            rate: f[0].parse().map_err(|e| format!("{e} in {line:?}"))?,
            error: opt(f[1])?,
            order: opt(f[2])?,
            seconds: f[3].parse().map_err(|e| format!("{e} in {line:?}"))?,
            stable: f[4].parse().map_err(|e| format!("{e} in {line:?}"))?,
        });
    }
    Ok(ErrorReport { rows })
}

pub fn read_report(path: &Path) -> Result<ErrorReport> {
    let text = fs::read_to_string(path).map_err(|e| FsiError::io(path, e))?;
    parse_report(&text).map_err(|reason| FsiError::Malformed {
        path: path.to_path_buf(),
        reason,
    })
}

/// CSV `x,dy` over the interface nodes.
pub fn emit_displacement_profile(x: &[f64], solid: &SolidState, path: &Path) -> Result<()> {
    if x.len() != solid.d.len() {
        return Err(FsiError::DimensionMismatch {
            expected: x.len(),
            actual: solid.d.len(),
        });
    }
    let io = |e| FsiError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "x,dy").map_err(io)?;
    for (x, d) in x.iter().zip(&solid.d) {
        writeln!(w, "{x},{d:e}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// `key = value` pairs; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| FsiError::Config(format!("line {}: expected key = value", no + 1)))?;
        let key = k.trim().to_string();
        if key.is_empty() {
            return Err(FsiError::Config(format!("line {}: empty key", no + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| FsiError::Config(format!("{key}: cannot parse {v:?}")))
}

/// Comma-separated rates, each a single rate or an inclusive range `a-b`.
pub fn parse_rates(v: &str) -> Result<Vec<u32>> {
    let mut rates = Vec::new();
    for part in v.split(',') {
        match part.trim().split_once('-') {
            Some((a, b)) => {
                let (a, b) = (parse_num::<u32>("rates", a.trim())?, parse_num::<u32>("rates", b.trim())?);
                if a > b {
                    return Err(FsiError::Config(format!("rates: empty range {part:?}")));
                }
                rates.extend(a..=b);
            }
            None => rates.push(parse_num::<u32>("rates", part.trim())?),
        }
    }
    Ok(rates)
}

/// Applies a config file's settings on top of `config`.
pub fn apply_config(config: &mut StudyConfig, entries: &BTreeMap<String, String>) -> Result<()> {
    let (mut n_f, mut n_s) = match config.scheme {
        Scheme::Jagged { n_f, n_s } => (n_f, n_s),
        _ => (10, 10),
    };
    let mut scheme = None;
    for (k, v) in entries {
        let p = &mut config.physics;
        match k.as_str() {
            "scheme" => scheme = Some(v.clone()),
            "nf" | "jagged.nf" => n_f = parse_num(k, v)?,
            "ns" | "jagged.ns" => n_s = parse_num(k, v)?,
            "rates" => config.rates = parse_rates(v)?,
            "extr" => {
                config.extr = Order::new(parse_num(k, v)?).map_err(|e| FsiError::Config(e.to_string()))?
            }
            "t_final" => config.t_final = parse_num(k, v)?,
            "workers" => config.workers = parse_num(k, v)?,
            "out" => config.out_dir = Some(PathBuf::from(v)),
            "cache" => config.cache_dir = Some(PathBuf::from(v)),
            "blowup" => config.options.blowup = parse_num(k, v)?,
            "spacing" => {
                config.options.spacing = match v.as_str() {
                    "solid" => DerivativeSpacing::SolidGrid,
                    "fluid" => DerivativeSpacing::FluidGrid,
                    _ => return Err(FsiError::Config(format!("spacing: {v:?} is not solid or fluid"))),
                }
            }
            "reference.tau" => config.reference.tau = parse_num(k, v)?,
            "reference.rate" => config.reference.rate_space = parse_num(k, v)?,
            "reference.h" => {
                config.reference.rate_space = ReferenceSpec::rate_for_h(p.geometry.base_h, parse_num(k, v)?)?
            }
            "geometry.length" => p.geometry.length = parse_num(k, v)?,
            "geometry.height" => p.geometry.height = parse_num(k, v)?,
            "geometry.base_h" => p.geometry.base_h = parse_num(k, v)?,
            "fluid.density" => p.fluid.density = parse_num(k, v)?,
            "fluid.viscosity" => p.fluid.viscosity = parse_num(k, v)?,
            "fluid.stab_gamma" => p.fluid.stab_gamma = parse_num(k, v)?,
            "solid.density" => p.solid.density = parse_num(k, v)?,
            "solid.thickness" => p.solid.thickness = parse_num(k, v)?,
            "solid.young" => p.solid.young = parse_num(k, v)?,
            "solid.poisson" => p.solid.poisson = parse_num(k, v)?,
            "solid.radius" => p.solid.radius = parse_num(k, v)?,
            "solid.viscous" => p.solid.viscous = Some(parse_num(k, v)?),
            "inlet.p_max" => p.inlet.p_max = parse_num(k, v)?,
            "inlet.t_star" => p.inlet.t_star = parse_num(k, v)?,
            other => return Err(FsiError::Config(format!("unknown key {other:?}"))),
        }
    }
    if let Some(s) = scheme {
        config.scheme = parse_scheme(&s, n_f, n_s)?;
    } else if let Scheme::Jagged { .. } = config.scheme {
        config.scheme = Scheme::Jagged { n_f, n_s };
    }
    Ok(())
}

pub fn parse_scheme(name: &str, n_f: usize, n_s: usize) -> Result<Scheme> {
    match name {
        "ern" => Ok(Scheme::Ern),
        "jagged" => Ok(Scheme::Jagged { n_f, n_s }),
        "reference" | "monolithic-reference" | "monolithic" => Ok(Scheme::Reference),
        other => Err(FsiError::Config(format!("unknown scheme {other:?}"))),
    }
}

pub fn load_config(path: &Path, config: &mut StudyConfig) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|e| FsiError::Config(format!("{}: {e}", path.display())))?;
    apply_config(config, &parse_key_values(&text)?)
}
