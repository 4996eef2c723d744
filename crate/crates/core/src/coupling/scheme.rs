//! Time-marching drivers for the explicit Robin-Neumann scheme and its
//! jagged multirate extension.

use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::coupling::extrapolation::{HistoryBuffer, Order};
use crate::coupling::schedule::{jagged_schedule, StepKind};
use crate::error::{FsiError, Result};
use crate::fluid::{DerivativeSpacing, FluidSolver, FluidSpace, FluidState, SolidInterfaceData};
use crate::mesh::{StructuredMesh, DEFAULT_MAX_NODES};
use crate::problem::{coarse_step, fine_step, hex, step_count, Physics};
use crate::solid::{fluid_residual_load, SolidSolver, SolidState, StringSpace};

pub const DEFAULT_BLOWUP: f64 = 1e10;

/// Steps per coarse interval for each field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JaggedConfig {
    pub n_f: usize,
    pub n_s: usize,
    pub tau_coarse: f64,
    pub extr: Order,
}

impl JaggedConfig {
    pub fn new(n_f: usize, n_s: usize, tau_coarse: f64, extr: Order) -> Result<Self> {
        let c = JaggedConfig { n_f, n_s, tau_coarse, extr };
        c.validate()?;
        Ok(c)
    }

    /// Coarse step `5e-3 / 2^rate`.
    pub fn for_rate(n_f: usize, n_s: usize, rate: u32, extr: Order) -> Result<Self> {
        Self::new(n_f, n_s, coarse_step(rate), extr)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_f == 0 || self.n_s == 0 || !(self.tau_coarse > 0.0) {
            return Err(FsiError::InvalidParameter(format!("{self:?}")));
        }
        if self.n_f < 10 && self.n_f + self.n_s <= 20 {
            log::debug!("F {} S {} takes fewer fluid steps than the baseline", self.n_f, self.n_s);
        }
        Ok(())
    }

    pub fn tau_f(&self) -> f64 {
        self.tau_coarse / self.n_f as f64
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_coarse / self.n_s as f64
    }

    /// Fewer fluid solves than the single-rate scheme with ten steps per
    /// coarse interval, and no more than twenty steps in total.
    pub fn is_efficient(&self) -> bool {
        self.n_f < 10 && self.n_f + self.n_s <= 20
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    pub spacing: DerivativeSpacing,
    /// Max-norm above which a run is declared unstable.
    pub blowup: f64,
    /// Keep every `k`-th fluid and solid state; `None` keeps only the final
    /// ones.
    pub record_stride: Option<usize>,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions {
            spacing: DerivativeSpacing::SolidGrid,
            blowup: DEFAULT_BLOWUP,
            record_stride: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    BlownUp { t: f64, norm: f64 },
}

impl RunStatus {
    pub fn is_stable(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub fluid: Vec<FluidState>,
    pub solid: Vec<SolidState>,
    pub final_fluid: FluidState,
    pub final_solid: SolidState,
    pub status: RunStatus,
    pub fluid_solves: usize,
    pub solid_solves: usize,
    /// `(t, rho_f |u|^2 + rho_s eps |dd|^2 + |d|_e^2)` after each solid step.
    pub energy: Vec<(f64, f64)>,
    /// Hex SHA-256 over every computed state in order.
    pub digest: String,
}

impl Trajectory {
    pub fn max_energy(&self) -> f64 {
        self.energy.iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.status.is_stable()
    }
}

/// Collects states, energy and the digest while a scheme runs.
pub(crate) struct Recorder {
    stride: Option<usize>,
    blowup: f64,
    hasher: Sha256,
    fluid: Vec<FluidState>,
    solid: Vec<SolidState>,
    energy: Vec<(f64, f64)>,
    fluid_solves: usize,
    solid_solves: usize,
}

impl Recorder {
    pub(crate) fn new(options: &SchemeOptions) -> Self {
        Recorder {
            stride: options.record_stride.filter(|&k| k > 0),
            blowup: options.blowup,
            hasher: Sha256::new(),
            fluid: Vec::new(),
            solid: Vec::new(),
            energy: Vec::new(),
            fluid_solves: 0,
            solid_solves: 0,
        }
    }

    fn hash(&mut self, tag: u8, t: f64, parts: &[&[f64]]) {
        self.hasher.update([tag]);
        self.hasher.update(t.to_bits().to_le_bytes());
        for p in parts {
            for v in *p {
                self.hasher.update(v.to_bits().to_le_bytes());
            }
        }
    }

    fn keep(&self, step: usize) -> bool {
        self.stride.is_some_and(|k| step % k == 0)
    }

    fn check(&self, t: f64, norm: f64) -> Option<RunStatus> {
        (!norm.is_finite() || norm > self.blowup).then_some(RunStatus::BlownUp { t, norm })
    }

    pub(crate) fn fluid(&mut self, s: &FluidState) -> Option<RunStatus> {
        self.fluid_solves += 1;
        self.hash(b'F', s.t, &[&s.x]);
        if self.keep(s.step_index) {
            self.fluid.push(s.clone());
        }
        self.check(s.t, s.max_abs())
    }

    pub(crate) fn solid(&mut self, s: &SolidState, energy: f64) -> Option<RunStatus> {
        self.solid_solves += 1;
        self.hash(b'S', s.t, &[&s.d, &s.dd]);
        if self.keep(s.step_index) {
            self.solid.push(s.clone());
        }
        self.energy.push((s.t, energy));
        self.check(s.t, s.max_abs())
    }

    pub(crate) fn finish(self, fluid: FluidState, solid: SolidState, status: RunStatus) -> Trajectory {
        Trajectory {
            fluid: self.fluid,
            solid: self.solid,
            final_fluid: fluid,
            final_solid: solid,
            status,
            fluid_solves: self.fluid_solves,
            solid_solves: self.solid_solves,
            energy: self.energy,
            digest: hex(&self.hasher.finalize()),
        }
    }
}

/// Discretization shared by all schemes on one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub physics: Physics,
    pub mesh: Arc<StructuredMesh>,
    pub fluid: Arc<FluidSpace>,
    pub solid: Arc<StringSpace>,
}

impl Discretization {
    pub fn new(physics: &Physics, rate: u32) -> Result<Self> {
        physics.validate()?;
        let mesh = Arc::new(StructuredMesh::build(physics.geometry, rate, DEFAULT_MAX_NODES)?);
        let fluid = Arc::new(FluidSpace::new(mesh.clone(), physics.fluid)?);
        let solid = Arc::new(StringSpace::new(&mesh, physics.solid)?);
        Ok(Discretization {
            physics: *physics,
            mesh,
            fluid,
            solid,
        })
    }

    /// `rho_f |u|^2 + rho_s eps |dd|^2 + |d|_e^2`.
    pub fn total_energy(&self, fluid: &FluidState, solid: &SolidState) -> f64 {
        self.fluid.kinetic_energy(fluid) + self.solid.energy(solid)
    }
}

/// State of a partitioned run: one solver per field with its own step and
/// history.
pub struct Coupler {
    disc: Discretization,
    fluid_solver: FluidSolver,
    solid_solver: SolidSolver,
    fluid_hist: HistoryBuffer<FluidState>,
    solid_velocity: HistoryBuffer<Vec<f64>>,
    solid: SolidState,
    tau_f: f64,
    tau_s: f64,
}

impl Coupler {
    pub fn new(
        disc: Discretization,
        tau_f: f64,
        tau_s: f64,
        extr: Order,
        spacing: DerivativeSpacing,
    ) -> Result<Self> {
        let robin = disc.physics.solid.surface_density() / tau_f;
        let fluid_solver =
            FluidSolver::new(disc.fluid.clone(), tau_f, robin, extr, spacing, disc.physics.inlet)?;
        let solid_solver = SolidSolver::new(disc.solid.clone(), tau_s)?;
        let solid = disc.solid.zero_state();
        Ok(Coupler {
            fluid_hist: HistoryBuffer::new(0.0, disc.fluid.zero_state()),
            solid_velocity: HistoryBuffer::new(0.0, solid.dd.clone()),
            solid,
            disc,
            fluid_solver,
            solid_solver,
            tau_f,
            tau_s,
        })
    }

    pub fn fluid(&self) -> &FluidState {
        self.fluid_hist.latest()
    }

    pub fn solid(&self) -> &SolidState {
        &self.solid
    }

    /// Fluid step ending at `step * tau_f`, driven by the latest solid
    /// velocities.
    pub fn fluid_step(&mut self, step: usize) -> Result<&FluidState> {
        let t = step as f64 * self.tau_f;
        let data = SolidInterfaceData {
            velocity: &self.solid_velocity,
            tau_s: self.tau_s,
        };
        let mut next = self.fluid_solver.step(&self.fluid_hist, &data, t)?;
        next.step_index = step;
        self.fluid_hist.push(t, next)?;
        Ok(self.fluid_hist.latest())
    }

    /// Solid step ending at `step * tau_s`, loaded by the residual of the
    /// latest fluid step.
    pub fn solid_step(&mut self, step: usize) -> Result<&SolidState> {
        let t = step as f64 * self.tau_s;
        let now = self.fluid_hist.latest();
        let prev = self.fluid_hist.get(1).unwrap_or(now);
        let load = fluid_residual_load(&self.disc.fluid, now, prev, self.tau_f)?;
        let mut next = self.solid_solver.step(&self.solid, &load, t)?;
        next.step_index = step;
        self.solid_velocity.push(t, next.dd.clone())?;
        self.solid = next;
        Ok(&self.solid)
    }

    pub fn energy(&self) -> f64 {
        self.disc.total_energy(self.fluid(), &self.solid)
    }

    /// Runs `events` (kind, global step index) in order.
    fn march(
        mut self,
        events: impl Iterator<Item = (StepKind, usize)>,
        options: &SchemeOptions,
    ) -> Result<Trajectory> {
        let mut rec = Recorder::new(options);
        let mut status = RunStatus::Completed;
        for (kind, step) in events {
            let blown = match kind {
                StepKind::FluidStep => {
                    let s = self.fluid_step(step)?.clone();
                    rec.fluid(&s)
                }
                StepKind::SolidStep => {
                    self.solid_step(step)?;
                    let e = self.energy();
                    rec.solid(&self.solid, e)
                }
            };
            if let Some(b) = blown {
                log::warn!("run blew up: {b:?}");
                status = b;
                break;
            }
        }
        let fluid = self.fluid_hist.latest().clone();
        Ok(rec.finish(fluid, self.solid, status))
    }
}

/// Single-rate explicit Robin-Neumann scheme with step `5e-4 / 2^rate`.
pub fn run_ern(
    rate: u32,
    extr: Order,
    t_final: f64,
    physics: &Physics,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    let tau = fine_step(rate);
    let n = step_count(t_final, tau)?;
    let disc = Discretization::new(physics, rate)?;
    run_ern_on(disc, tau, n, extr, options)
}

/// [`run_ern`] on a prebuilt discretization with `n` steps of length `tau`.
pub fn run_ern_on(
    disc: Discretization,
    tau: f64,
    n: usize,
    extr: Order,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    let coupler = Coupler::new(disc, tau, tau, extr, options.spacing)?;
    let events = (1..=n).flat_map(|k| [(StepKind::FluidStep, k), (StepKind::SolidStep, k)]);
    coupler.march(events, options)
}

/// Jagged multirate scheme: every coarse interval runs the
/// [`jagged_schedule`] with steps `tau_coarse / N_f` and `tau_coarse / N_s`.
pub fn run_jagged(
    config: &JaggedConfig,
    rate: u32,
    t_final: f64,
    physics: &Physics,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    let disc = Discretization::new(physics, rate)?;
    run_jagged_on(disc, config, t_final, options)
}

pub fn run_jagged_on(
    disc: Discretization,
    config: &JaggedConfig,
    t_final: f64,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    config.validate()?;
    let intervals = step_count(t_final, config.tau_coarse)?;
    let schedule = jagged_schedule(config.n_f, config.n_s)?;
    let coupler = Coupler::new(disc, config.tau_f(), config.tau_s(), config.extr, options.spacing)?;
    let (nf, ns) = (config.n_f, config.n_s);
    let events = (0..intervals).flat_map(move |i| {
        schedule.clone().into_iter().map(move |e| match e.kind {
            StepKind::FluidStep => (e.kind, i * nf + e.ordinal),
            StepKind::SolidStep => (e.kind, i * ns + e.ordinal),
        })
    });
    coupler.march(events, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluid::InletLoad;

    fn quiet() -> Physics {
        Physics {
            inlet: InletLoad {
                p_max: 0.0,
                ..InletLoad::default()
            },
            ..Physics::default()
        }
    }

    #[test]
    fn zero_data_zero_trajectory() {
        let t = run_ern(0, Order::FIRST, 5e-3, &quiet(), &SchemeOptions::default()).unwrap();
        assert!(t.final_fluid.x.iter().all(|&v| v == 0.0));
        assert!(t.final_solid.d.iter().all(|&v| v == 0.0));
        assert_eq!(t.fluid_solves, 10);
        assert_eq!(t.solid_solves, 10);
    }

    #[test]
    fn ern_rate0_bounded_and_deterministic() {
        let p = Physics::default();
        let o = SchemeOptions::default();
        let a = run_ern(0, Order::FIRST, 0.015, &p, &o).unwrap();
        assert!(a.is_stable());
        assert_eq!(a.solid_solves, 30);
        assert!(a.max_energy().is_finite() && a.max_energy() > 0.0);
        assert!(a.final_solid.d.iter().any(|&v| v != 0.0));
        let b = run_ern(0, Order::FIRST, 0.015, &p, &o).unwrap();
        assert_eq!(a.digest, b.digest);
    }

    #[test]
    fn jagged_ten_ten_is_ern() {
        let p = Physics::default();
        let o = SchemeOptions {
            record_stride: Some(1),
            ..SchemeOptions::default()
        };
        let ern = run_ern(0, Order::FIRST, 0.015, &p, &o).unwrap();
        let cfg = JaggedConfig::for_rate(10, 10, 0, Order::FIRST).unwrap();
        let jag = run_jagged(&cfg, 0, 0.015, &p, &o).unwrap();
        assert_eq!(ern.digest, jag.digest);
        assert_eq!(ern.fluid, jag.fluid);
        assert_eq!(ern.solid, jag.solid);
    }

    #[test]
    fn f2s3_counts() {
        let cfg = JaggedConfig::for_rate(2, 3, 0, Order::FIRST).unwrap();
        let t = run_jagged(&cfg, 0, 0.015, &Physics::default(), &SchemeOptions::default()).unwrap();
        assert_eq!((t.fluid_solves, t.solid_solves), (6, 9));
        assert!((t.final_solid.t - 0.015).abs() < 1e-15);
        assert!((t.final_fluid.t - 0.015).abs() < 1e-15);
    }

    #[test]
    fn blowup_is_recorded() {
        let o = SchemeOptions {
            blowup: 1e-6,
            ..SchemeOptions::default()
        };
        let t = run_ern(0, Order::FIRST, 0.015, &Physics::default(), &o).unwrap();
        assert!(matches!(t.status, RunStatus::BlownUp { .. }));
        assert!(t.fluid_solves < 30);
    }

    #[test]
    fn incommensurate_time_rejected() {
        assert!(matches!(
            run_ern(0, Order::FIRST, 1.2e-3, &Physics::default(), &SchemeOptions::default()),
            Err(FsiError::IncommensurateTime { .. })
        ));
    }
}
