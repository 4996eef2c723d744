//! Stabilized P1-P1 Stokes fluid with the Robin interface condition of the
//! explicit Robin-Neumann coupling.
//!
//! Unknowns are interleaved per node as `(u_x, u_y, p)`. The bilinear forms
//! are
//!
//! * `a(u, v) = 2 mu (eps(u), eps(v))`
//! * `b(p, v) = -(p, div v)`
//! * `s_h(p, q) = gamma h^2 / mu (grad p, grad q)` (Brezzi-Pitkaranta)
//!
//! and the block system for one backward-Euler step with step `tau` reads
//!
//! ```text
//! rho/tau (u, v) + a(u, v) + b(p, v) - b(q, u) + s_h(p, q) + kappa (u_y, v_y)_Sigma = rhs
//! ```
//!
//! with `kappa = rho_s eps / tau` the Robin coefficient.
//!
//! Boundary conditions: `u_y = 0` on the symmetry axis, `u_x = 0` on the
//! interface, `u = 0` at the interface endpoints. Inlet and outlet are
//! traction boundaries.

use std::sync::Arc;

use crate::coupling::extrapolation::{Extrapolant, HistoryBuffer, Order};
use crate::coupling::lifting::LiftingOperator;
use crate::error::{FsiError, Result};
use crate::fem::element::MIDPOINT_RULE;
use crate::fem::sparse::{dot, CsrMatrix};
use crate::fem::{
    assemble, segment_matrices, Constraints, DirichletSolver, DofMap, FieldLayout, P1Triangle, P, UX, UY,
};
use crate::mesh::{BoundaryTag, StructuredMesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    /// g/cm^3
    pub density: f64,
    /// Dynamic viscosity, poise.
    pub viscosity: f64,
    /// Dimensionless pressure stabilization coefficient.
    pub stab_gamma: f64,
}

impl Default for FluidParams {
    fn default() -> Self {
        FluidParams {
            density: 1.0,
            viscosity: 0.035,
            stab_gamma: 1e-2,
        }
    }
}

impl FluidParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0) || !(self.viscosity > 0.0) || !(self.stab_gamma >= 0.0) {
            return Err(FsiError::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Sinusoidal pressure pulse on the inlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InletLoad {
    /// dyn/cm^2
    pub p_max: f64,
    /// Pulse duration, s.
    pub t_star: f64,
}

impl Default for InletLoad {
    fn default() -> Self {
        InletLoad {
            p_max: 2e4,
            t_star: 5e-3,
        }
    }
}

impl InletLoad {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_star > 0.0) {
            return Err(FsiError::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn pressure(&self, t: f64) -> f64 {
        inlet_pressure(self, t)
    }
}

/// `P(t) = P_max (1 - cos(2 pi t / T*)) / 2` on `[0, T*]`, zero afterwards.
pub fn inlet_pressure(load: &InletLoad, t: f64) -> f64 {
    if (0.0..=load.t_star).contains(&t) {
        load.p_max * (1.0 - (2.0 * std::f64::consts::PI * t / load.t_star).cos()) / 2.0
    } else {
        0.0
    }
}

/// Volume force `f(x, t)`.
pub type BodyForce = Arc<dyn Fn([f64; 2], f64) -> [f64; 2] + Send + Sync>;
/// Prescribed traction `sigma n` on a boundary segment at `(x, t)`.
pub type Traction = Arc<dyn Fn(BoundaryTag, [f64; 2], f64) -> [f64; 2] + Send + Sync>;

/// Extra loads used by manufactured-solution studies. Both absent in the
/// physical problem.
#[derive(Clone, Default)]
pub struct FluidForcing {
    pub body: Option<BodyForce>,
    pub traction: Option<Traction>,
}

impl std::fmt::Debug for FluidForcing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FluidForcing")
            .field("body", &self.body.is_some())
            .field("traction", &self.traction.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    /// Interleaved `(u_x, u_y, p)` per node.
    pub x: Vec<f64>,
    pub step_index: usize,
    pub t: f64,
}

impl FluidState {
    pub fn zeros(dofs: &DofMap) -> Self {
        FluidState {
            x: vec![0.0; dofs.n_dofs()],
            step_index: 0,
            t: 0.0,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.x.len() / 3
    }

    pub fn ux(&self, node: usize) -> f64 {
        self.x[3 * node + UX]
    }

    pub fn uy(&self, node: usize) -> f64 {
        self.x[3 * node + UY]
    }

    pub fn p(&self, node: usize) -> f64 {
        self.x[3 * node + P]
    }

    /// Velocity DOFs, two per node.
    pub fn velocity(&self) -> Vec<f64> {
        self.x
            .chunks_exact(3)
            .flat_map(|c| [c[UX], c[UY]])
            .collect()
    }

    pub fn pressure(&self) -> Vec<f64> {
        self.x.chunks_exact(3).map(|c| c[P]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        crate::fem::sparse::max_abs(&self.x)
    }

    /// CSV `node_index,x,y,ux,uy,p`.
    pub fn write_csv<W: std::io::Write>(&self, mesh: &StructuredMesh, mut out: W) -> std::io::Result<()> {
        writeln!(out, "node_index,x,y,ux,uy,p")?;
        for (n, [x, y]) in mesh.nodes.iter().enumerate() {
            writeln!(out, "{n},{x},{y},{},{},{}", self.ux(n), self.uy(n), self.p(n))?;
        }
        Ok(())
    }
}

impl Extrapolant for FluidState {
    fn zeroed(&self) -> Self {
        FluidState {
            x: vec![0.0; self.x.len()],
            step_index: self.step_index,
            t: self.t,
        }
    }

    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        FluidState {
            x: Vec::combine(a, &x.x, b, &y.x),
            step_index: x.step_index,
            t: x.t,
        }
    }
}

/// Time-independent fluid discretization on one mesh.
#[derive(Debug)]
pub struct FluidSpace {
    pub mesh: Arc<StructuredMesh>,
    pub dofs: DofMap,
    pub params: FluidParams,
    /// `(u, v)` on both velocity components.
    pub mass: CsrMatrix,
    /// `a(u, v)`.
    pub viscous: CsrMatrix,
    /// `b(p, v)`: velocity rows, pressure columns.
    pub gradient: CsrMatrix,
    /// `-b(q, u)`: pressure rows, velocity columns.
    pub divergence: CsrMatrix,
    /// `s_h(p, q)`.
    pub stabilization: CsrMatrix,
    /// `(u_y, v_y)_Sigma`.
    pub interface_mass: CsrMatrix,
    /// `int_{Gamma2} phi_i` on the x-velocity DOFs.
    pub inlet: Vec<f64>,
    pub constraints: Constraints,
    pub lifting: LiftingOperator,
    pub forcing: FluidForcing,
}

/// `s_h(p, q) = gamma h^2 / mu (grad p, grad q)` on the pressure DOFs.
pub fn stabilization_form(mesh: &StructuredMesh, params: &FluidParams) -> Result<CsrMatrix> {
    let dofs = DofMap::new(mesh.n_nodes(), FieldLayout::Fluid);
    let coef = params.stab_gamma * mesh.h * mesh.h / params.viscosity;
    assemble(mesh, &dofs, |_, e, l| {
        if coef != 0.0 {
            l.add_block(P, P, &e.stiffness(), coef);
        }
    })
}

fn viscous_block(e: &P1Triangle, mu: f64, l: &mut crate::fem::LocalMatrix) {
    let g = &e.grads;
    for a in 0..3 {
        for b in 0..3 {
            let gg = g[a][0] * g[b][0] + g[a][1] * g[b][1];
            for d in 0..2 {
                for c in 0..2 {
                    let delta = if c == d { gg } else { 0.0 };
                    l.add(a, d, b, c, mu * e.area * (delta + g[b][d] * g[a][c]));
                }
            }
        }
    }
}

impl FluidSpace {
    pub fn new(mesh: Arc<StructuredMesh>, params: FluidParams) -> Result<Self> {
        params.validate()?;
        let dofs = DofMap::new(mesh.n_nodes(), FieldLayout::Fluid);
        let mass = assemble(&mesh, &dofs, |_, e, l| {
            let m = e.mass();
            l.add_block(UX, UX, &m, 1.0);
            l.add_block(UY, UY, &m, 1.0);
        })?;
        let viscous = assemble(&mesh, &dofs, |_, e, l| viscous_block(e, params.viscosity, l))?;
        let gradient = assemble(&mesh, &dofs, |_, e, l| {
            for a in 0..3 {
                for b in 0..3 {
                    for d in 0..2 {
                        l.add(a, d, b, P, -e.area / 3.0 * e.grads[a][d]);
                    }
                }
            }
        })?;
        let divergence = gradient.transpose().scaled(-1.0);
        let stabilization = stabilization_form(&mesh, &params)?;

        let mut im = Vec::new();
        for edge in mesh.edges_with_tag(BoundaryTag::Sigma) {
            let [a, b] = edge.nodes;
            let len = (mesh.nodes[a][0] - mesh.nodes[b][0]).abs();
            let (m, _) = segment_matrices(len);
            let ids = [dofs.index(a, UY), dofs.index(b, UY)];
            for i in 0..2 {
                for j in 0..2 {
                    im.push((ids[i], ids[j], m[i][j]));
                }
            }
        }
        let interface_mass = CsrMatrix::from_triplets(dofs.n_dofs(), dofs.n_dofs(), &im)?;

        let mut inlet = vec![0.0; dofs.n_dofs()];
        for edge in mesh.edges_with_tag(BoundaryTag::Gamma2) {
            let [a, b] = edge.nodes;
            let len = (mesh.nodes[a][1] - mesh.nodes[b][1]).abs();
            inlet[dofs.index(a, UX)] += 0.5 * len;
            inlet[dofs.index(b, UX)] += 0.5 * len;
        }

        let mut constraints = Constraints::new();
        let last = mesh.interface_nodes.len() - 1;
        for n in 0..mesh.n_nodes() {
            match mesh.node_tag(n) {
                Some(BoundaryTag::Gamma1) => constraints.fix(dofs.index(n, UY), 0.0)?,
                Some(BoundaryTag::Sigma) => constraints.fix(dofs.index(n, UX), 0.0)?,
                _ => {}
            }
        }
        for &n in [mesh.interface_nodes[0], mesh.interface_nodes[last]].iter() {
            constraints.fix(dofs.index(n, UY), 0.0)?;
        }

        let lifting = LiftingOperator::new(&mesh, dofs);
        Ok(FluidSpace {
            mesh,
            dofs,
            params,
            mass,
            viscous,
            gradient,
            divergence,
            stabilization,
            interface_mass,
            inlet,
            constraints,
            lifting,
            forcing: FluidForcing::default(),
        })
    }

    pub fn with_forcing(mut self, forcing: FluidForcing) -> Self {
        self.forcing = forcing;
        self
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.n_dofs()
    }

    pub fn zero_state(&self) -> FluidState {
        FluidState::zeros(&self.dofs)
    }

    /// Full block operator for a step of length `tau` with Robin
    /// coefficient `robin_coeff`, before boundary conditions.
    pub fn operator(&self, tau: f64, robin_coeff: f64) -> Result<CsrMatrix> {
        if !(tau > 0.0) {
            return Err(FsiError::InvalidParameter(format!("fluid step {tau}")));
        }
        CsrMatrix::linear_combination(&[
            (self.params.density / tau, &self.mass),
            (1.0, &self.viscous),
            (1.0, &self.gradient),
            (1.0, &self.divergence),
            (1.0, &self.stabilization),
            (robin_coeff, &self.interface_mass),
        ])
    }

    /// Fluid momentum residual `rho (du/tau, v) + a(u, v) + b(p, v)` for
    /// every velocity test function, where `du` is the increment over the
    /// step `tau`. Pressure rows are zero.
    pub fn momentum_residual(&self, now: &[f64], increment: &[f64], tau: f64) -> Vec<f64> {
        let mut r = vec![0.0; self.n_dofs()];
        self.mass.mul_vec_add(self.params.density / tau, increment, &mut r);
        self.viscous.mul_vec_add(1.0, now, &mut r);
        self.gradient.mul_vec_add(1.0, now, &mut r);
        r
    }

    /// `rho ||u||^2` in the L2 norm.
    pub fn kinetic_energy(&self, state: &FluidState) -> f64 {
        self.params.density * dot(&self.mass.mul_vec(&state.x), &state.x)
    }

    /// Body-force and boundary-traction loads at time `t`.
    pub fn forcing_vector(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n_dofs()];
        let mesh = &self.mesh;
        if let Some(f) = &self.forcing.body {
            for (k, tri) in mesh.triangles.iter().enumerate() {
                let v = mesh.triangle_coords(k);
                let e = P1Triangle::new(v)?;
                for (bary, w) in MIDPOINT_RULE {
                    let fx = f(P1Triangle::point(&v, bary), t);
                    for a in 0..3 {
                        let s = w * e.area * bary[a];
                        out[self.dofs.index(tri[a], UX)] += s * fx[0];
                        out[self.dofs.index(tri[a], UY)] += s * fx[1];
                    }
                }
            }
        }
        if let Some(g) = &self.forcing.traction {
            // Simpson's rule on each boundary edge.
            for edge in &mesh.boundary_edges {
                let [a, b] = edge.nodes;
                let (pa, pb) = (mesh.nodes[a], mesh.nodes[b]);
                let len = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt();
                for (s, w) in [(0.0, 1.0 / 6.0), (0.5, 4.0 / 6.0), (1.0, 1.0 / 6.0)] {
                    let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                    let tr = g(edge.tag, x, t);
                    for (node, phi) in [(a, 1.0 - s), (b, s)] {
                        out[self.dofs.index(node, UX)] += w * len * phi * tr[0];
                        out[self.dofs.index(node, UY)] += w * len * phi * tr[1];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `rho/tau M + a + b - b^T + s_h + robin_coeff M_Sigma`, no boundary
/// conditions applied.
pub fn assemble_fluid_operator(
    mesh: Arc<StructuredMesh>,
    params: &FluidParams,
    tau: f64,
    robin_coeff: f64,
) -> Result<CsrMatrix> {
    FluidSpace::new(mesh, *params)?.operator(tau, robin_coeff)
}

/// How the solid-velocity time derivative in the Robin data is scaled when
/// fluid and solid steps differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeSpacing {
    /// Divide by the solid step (the grid the velocity history lives on).
    #[default]
    SolidGrid,
    /// Divide by the fluid step.
    FluidGrid,
}

/// Solid interface velocities consumed by the fluid step.
#[derive(Debug, Clone)]
pub struct SolidInterfaceData<'a> {
    /// `dd` history on the solid grid, newest first.
    pub velocity: &'a HistoryBuffer<Vec<f64>>,
    /// Spacing of that history.
    pub tau_s: f64,
}

/// One fluid sub-solver with a factorized operator for a fixed step.
#[derive(Debug)]
pub struct FluidSolver {
    pub space: Arc<FluidSpace>,
    pub tau: f64,
    pub robin_coeff: f64,
    pub extr: Order,
    pub spacing: DerivativeSpacing,
    pub inlet: InletLoad,
    solver: DirichletSolver,
}

impl FluidSolver {
    pub fn new(
        space: Arc<FluidSpace>,
        tau: f64,
        robin_coeff: f64,
        extr: Order,
        spacing: DerivativeSpacing,
        inlet: InletLoad,
    ) -> Result<Self> {
        inlet.validate()?;
        let op = space.operator(tau, robin_coeff)?;
        let solver = DirichletSolver::new(&op, &space.constraints)?;
        Ok(FluidSolver {
            space,
            tau,
            robin_coeff,
            extr,
            spacing,
            inlet,
            solver,
        })
    }

    /// Right-hand side for the step ending at `t_new`:
    /// time term, Robin data `kappa (dd^{m-1} + tau d_tau dd^*, v)_Sigma`,
    /// the variational residual of the extrapolated fluid state lifted from
    /// the interface, and the inlet pressure load.
    pub fn rhs(
        &self,
        fluid: &HistoryBuffer<FluidState>,
        solid: &SolidInterfaceData<'_>,
        t_new: f64,
    ) -> Result<Vec<f64>> {
        let space = &self.space;
        let lifting = &space.lifting;
        let prev = fluid.latest();
        let mut rhs = vec![0.0; space.n_dofs()];
        space
            .mass
            .mul_vec_add(space.params.density / self.tau, &prev.x, &mut rhs);

        let dd = solid.velocity.latest();
        if dd.len() != lifting.interface_len() {
            return Err(FsiError::DimensionMismatch {
                expected: lifting.interface_len(),
                actual: dd.len(),
            });
        }
        let increment = solid.velocity.extrapolated_increment(self.extr);
        let scale = match self.spacing {
            DerivativeSpacing::SolidGrid => self.tau / solid.tau_s,
            DerivativeSpacing::FluidGrid => 1.0,
        };
        let robin_data: Vec<f64> = dd
            .iter()
            .zip(&increment)
            .map(|(v, i)| v + scale * i)
            .collect();
        let lifted = lifting.apply(&robin_data)?;
        space
            .interface_mass
            .mul_vec_add(self.robin_coeff, &lifted, &mut rhs);

        if self.extr != Order::ZERO {
            let star = fluid.extrapolate(self.extr);
            let star_inc = fluid.extrapolated_increment(self.extr);
            let res = space.momentum_residual(&star.x, &star_inc.x, self.tau);
            let trace = lifting.restrict_interior(&res)?;
            let back = lifting.apply(&trace)?;
            rhs.iter_mut().zip(&back).for_each(|(r, b)| *r += b);
        }

        let pressure = inlet_pressure(&self.inlet, t_new);
        if pressure != 0.0 {
            rhs.iter_mut()
                .zip(&space.inlet)
                .for_each(|(r, w)| *r += pressure * w);
        }
        if space.forcing.body.is_some() || space.forcing.traction.is_some() {
            let f = space.forcing_vector(t_new)?;
            rhs.iter_mut().zip(&f).for_each(|(r, v)| *r += v);
        }
        Ok(rhs)
    }

    pub fn solve_rhs(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solver.solve(rhs)
    }

    /// Advances the newest fluid state in `fluid` by one step to `t_new`.
    pub fn step(
        &self,
        fluid: &HistoryBuffer<FluidState>,
        solid: &SolidInterfaceData<'_>,
        t_new: f64,
    ) -> Result<FluidState> {
        let rhs = self.rhs(fluid, solid, t_new)?;
        let x = self.solver.solve(&rhs)?;
        Ok(FluidState {
            x,
            step_index: fluid.latest().step_index + 1,
            t: t_new,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::sparse::norm2;
    use approx::assert_relative_eq;

    fn space(rate: u32) -> Arc<FluidSpace> {
        let mesh = Arc::new(StructuredMesh::new(rate).unwrap());
        Arc::new(FluidSpace::new(mesh, FluidParams::default()).unwrap())
    }

    const KAPPA_TAU: f64 = 1.1 * 0.1;

    fn solver(space: &Arc<FluidSpace>, tau: f64, extr: Order) -> FluidSolver {
        FluidSolver::new(
            space.clone(),
            tau,
            KAPPA_TAU / tau,
            extr,
            DerivativeSpacing::SolidGrid,
            InletLoad::default(),
        )
        .unwrap()
    }

    #[test]
    fn inlet_pressure_values() {
        let load = InletLoad::default();
        assert_eq!(inlet_pressure(&load, 0.0), 0.0);
        assert_relative_eq!(inlet_pressure(&load, 2.5e-3), 2e4, epsilon = 1e-9);
        assert_eq!(inlet_pressure(&load, 1e-2), 0.0);
    }

    #[test]
    fn stabilization_properties() {
        let mesh = StructuredMesh::new(0).unwrap();
        let s = stabilization_form(&mesh, &FluidParams::default()).unwrap();
        assert_eq!(s.asymmetry(), 0.0);
        let dofs = DofMap::new(mesh.n_nodes(), FieldLayout::Fluid);
        let mut c = vec![0.0; dofs.n_dofs()];
        for n in 0..mesh.n_nodes() {
            c[dofs.index(n, P)] = 3.7;
        }
        assert!(norm2(&s.mul_vec(&c)) < 1e-12);
        let zero = FluidParams {
            stab_gamma: 0.0,
            ..FluidParams::default()
        };
        assert_eq!(stabilization_form(&mesh, &zero).unwrap().nnz(), 0);
    }

    #[test]
    fn operator_is_additive_in_robin_term() {
        let sp = space(0);
        let plain = sp.operator(5e-4, 0.0).unwrap();
        let robin = sp.operator(5e-4, 220.0).unwrap();
        let doubled = sp.operator(5e-4, 440.0).unwrap();
        let d1 = CsrMatrix::linear_combination(&[(1.0, &robin), (-1.0, &plain)]).unwrap();
        let d2 = CsrMatrix::linear_combination(&[(1.0, &doubled), (-1.0, &robin)]).unwrap();
        let interface_rows: std::collections::HashSet<usize> = sp
            .mesh
            .interface_nodes
            .iter()
            .map(|&n| sp.dofs.index(n, UY))
            .collect();
        for (r, _, v) in d2.triplets() {
            if v.abs() > 1e-12 {
                assert!(interface_rows.contains(&r));
            }
        }
        for ((r1, c1, v1), (r2, c2, v2)) in d1.triplets().zip(d2.triplets()) {
            assert_eq!((r1, c1), (r2, c2));
            assert_relative_eq!(v1, v2, epsilon = 1e-9);
        }
    }

    #[test]
    fn viscous_form_kills_translation() {
        let sp = space(0);
        let mut t = vec![0.0; sp.n_dofs()];
        for n in 0..sp.mesh.n_nodes() {
            t[sp.dofs.index(n, UX)] = 1.0;
        }
        assert!(norm2(&sp.viscous.mul_vec(&t)) < 1e-12);
        assert!(sp.viscous.asymmetry() < 1e-12);
    }

    #[test]
    fn velocity_block_symmetric_and_saddle_structure() {
        let sp = space(0);
        let op = sp.operator(5e-4, 220.0).unwrap();
        for (r, c, v) in op.triplets() {
            let (_, cr) = sp.dofs.node_of(r);
            let (_, cc) = sp.dofs.node_of(c);
            let w = op.get(c, r);
            if cr != P && cc != P {
                assert_relative_eq!(v, w, epsilon = 1e-9, max_relative = 1e-12);
            } else if cr == P && cc == P {
                assert_relative_eq!(v, w, epsilon = 1e-12);
            } else {
                assert_relative_eq!(v, -w, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn reassembly_is_bitwise_stable() {
        let a = space(0).operator(5e-4, 220.0).unwrap();
        let b = space(0).operator(5e-4, 220.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_pressure_has_zero_interior_residual() {
        // Gradient of a constant pressure only shows up on boundary rows.
        let sp = space(0);
        let mut x = vec![0.0; sp.n_dofs()];
        for n in 0..sp.mesh.n_nodes() {
            x[sp.dofs.index(n, P)] = 2.0;
        }
        let r = sp.momentum_residual(&x, &vec![0.0; x.len()], 1.0);
        for n in 0..sp.mesh.n_nodes() {
            if sp.mesh.node_tag(n).is_none() {
                assert!(r[sp.dofs.index(n, UX)].abs() < 1e-12);
                assert!(r[sp.dofs.index(n, UY)].abs() < 1e-12);
            }
        }
    }

    fn zero_solid(n: usize) -> HistoryBuffer<Vec<f64>> {
        HistoryBuffer::new(0.0, vec![0.0; n])
    }

    #[test]
    fn homogeneous_data_gives_zero() {
        let sp = space(0);
        let s = FluidSolver::new(
            sp.clone(),
            5e-4,
            KAPPA_TAU / 5e-4,
            Order::FIRST,
            DerivativeSpacing::SolidGrid,
            InletLoad { p_max: 0.0, t_star: 5e-3 },
        )
        .unwrap();
        let hist = HistoryBuffer::new(0.0, sp.zero_state());
        let dd = zero_solid(61);
        let data = SolidInterfaceData { velocity: &dd, tau_s: 5e-4 };
        assert!(s.rhs(&hist, &data, 0.0).unwrap().iter().all(|&v| v == 0.0));
        let next = s.step(&hist, &data, 5e-4).unwrap();
        assert!(next.x.iter().all(|&v| v == 0.0));
        assert_eq!(next.step_index, 1);
    }

    #[test]
    fn order_zero_drops_residual_terms() {
        let sp = space(0);
        let s0 = solver(&sp, 5e-4, Order::ZERO);
        let mut prev = sp.zero_state();
        prev.x.iter_mut().enumerate().for_each(|(i, v)| *v = (i as f64 * 0.37).sin());
        let hist = HistoryBuffer::new(0.0, prev.clone());
        let mut dd = zero_solid(61);
        dd.push(5e-4, (0..61).map(|k| (k as f64 * 0.1).cos()).collect()).unwrap();
        let data = SolidInterfaceData { velocity: &dd, tau_s: 5e-4 };
        let t = 1e-3;
        let rhs = s0.rhs(&hist, &data, t).unwrap();
        let mut want = sp.mass.mul_vec(&prev.x);
        want.iter_mut().for_each(|v| *v *= 1.0 / 5e-4);
        let lifted = sp.lifting.apply(dd.latest()).unwrap();
        sp.interface_mass.mul_vec_add(KAPPA_TAU / 5e-4, &lifted, &mut want);
        let pt = inlet_pressure(&InletLoad::default(), t);
        want.iter_mut().zip(&sp.inlet).for_each(|(w, i)| *w += pt * i);
        for (a, b) in rhs.iter().zip(&want) {
            assert_relative_eq!(a, b, epsilon = 1e-9, max_relative = 1e-12);
        }
    }

    #[test]
    fn inlet_pushes_flow_downstream() {
        let sp = space(0);
        let s = solver(&sp, 5e-4, Order::FIRST);
        let hist = HistoryBuffer::new(0.0, sp.zero_state());
        let dd = zero_solid(61);
        let data = SolidInterfaceData { velocity: &dd, tau_s: 5e-4 };
        let next = s.step(&hist, &data, 1e-3).unwrap();
        assert!(next.x.iter().all(|v| v.is_finite()));
        assert!(dot(&sp.inlet, &next.x) > 0.0);
        assert!(sp.kinetic_energy(&next) > 0.0);
    }

    /// `u = t (R^2 - y^2, 0)`, `p = t c (L - x)` with matching body force and
    /// tractions. Backward Euler is exact for linear-in-time data, so only
    /// the spatial error remains. Returns the H1-seminorm velocity error.
    fn poiseuille_error(rate: u32) -> f64 {
        let mesh = Arc::new(StructuredMesh::new(rate).unwrap());
        let p = FluidParams::default();
        let (rho, mu, c, r, l) = (p.density, p.viscosity, 3.0, 0.5, 6.0);
        let forcing = FluidForcing {
            body: Some(Arc::new(move |x: [f64; 2], t: f64| {
                [rho * (r * r - x[1] * x[1]) + 2.0 * mu * t - c * t, 0.0]
            })),
            traction: Some(Arc::new(move |tag, x: [f64; 2], t: f64| {
                let pr = t * c * (l - x[0]);
                match tag {
                    BoundaryTag::Gamma2 => [pr, 2.0 * mu * t * x[1]],
                    BoundaryTag::Gamma4 => [-pr, -2.0 * mu * t * x[1]],
                    BoundaryTag::Sigma => [-2.0 * mu * t * r, -pr],
                    BoundaryTag::Gamma1 => [0.0, 0.0],
                }
            })),
        };
        let sp = Arc::new(FluidSpace::new(mesh.clone(), p).unwrap().with_forcing(forcing));
        let tau = 0.05;
        let s = FluidSolver::new(
            sp.clone(),
            tau,
            KAPPA_TAU / tau,
            Order::ZERO,
            DerivativeSpacing::SolidGrid,
            InletLoad { p_max: 0.0, t_star: 1.0 },
        )
        .unwrap();
        let mut hist = HistoryBuffer::new(0.0, sp.zero_state());
        let dd = zero_solid(mesh.interface_nodes.len());
        let data = SolidInterfaceData { velocity: &dd, tau_s: tau };
        for n in 1..=2 {
            let next = s.step(&hist, &data, n as f64 * tau).unwrap();
            hist.push(n as f64 * tau, next).unwrap();
        }
        let u = hist.latest();
        let t = 2.0 * tau;
        let mut err = 0.0;
        for (k, tri) in mesh.triangles.iter().enumerate() {
            let v = mesh.triangle_coords(k);
            let e = P1Triangle::new(v).unwrap();
            let mut g = [[0.0; 2]; 2];
            for a in 0..3 {
                for d in 0..2 {
                    g[0][d] += u.ux(tri[a]) * e.grads[a][d];
                    g[1][d] += u.uy(tri[a]) * e.grads[a][d];
                }
            }
            for (bary, w) in MIDPOINT_RULE {
                let y = P1Triangle::point(&v, bary)[1];
                let exact = [[0.0, -2.0 * t * y], [0.0, 0.0]];
                let mut s2 = 0.0;
                for i in 0..2 {
                    for d in 0..2 {
                        s2 += (g[i][d] - exact[i][d]).powi(2);
                    }
                }
                err += w * e.area * s2;
            }
        }
        err.sqrt()
    }

    #[test]
    fn manufactured_poiseuille_converges() {
        let e: Vec<f64> = (0..3).map(poiseuille_error).collect();
        for w in e.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 0.9, "errors {e:?}");
        }
    }

    #[test]
    fn stabilized_mass_equation_holds() {
        let sp = space(0);
        let s = solver(&sp, 5e-4, Order::FIRST);
        let hist = HistoryBuffer::new(0.0, sp.zero_state());
        let dd = zero_solid(61);
        let data = SolidInterfaceData { velocity: &dd, tau_s: 5e-4 };
        let st = s.step(&hist, &data, 2e-3).unwrap();
        let mut r = sp.divergence.mul_vec(&st.x);
        sp.stabilization.mul_vec_add(1.0, &st.x, &mut r);
        let scale = norm2(&sp.divergence.mul_vec(&st.x));
        assert!(scale > 0.0);
        assert!(norm2(&r) <= 1e-8 * scale);
    }

    #[test]
    fn backward_euler_energy_inequality() {
        let sp = space(0);
        let tau = 5e-4;
        let s = solver(&sp, tau, Order::FIRST);
        let mut hist = HistoryBuffer::new(0.0, sp.zero_state());
        let mut dd = zero_solid(61);
        dd.push(tau, (0..61).map(|k| if k == 0 || k == 60 { 0.0 } else { 0.3 }).collect())
            .unwrap();
        let data = SolidInterfaceData { velocity: &dd, tau_s: tau };
        for n in 1..=2 {
            let t = n as f64 * tau;
            let rhs = s.rhs(&hist, &data, t).unwrap();
            let next = s.step(&hist, &data, t).unwrap();
            let prev = hist.latest();
            let rho = sp.params.density;
            let e_new = sp.kinetic_energy(&next);
            let e_old = sp.kinetic_energy(prev);
            // Test the step with v = u^n: everything except the time term
            // and the Robin mass is work done by data.
            let mprev = sp.mass.mul_vec(&prev.x);
            let data_work = dot(&rhs, &next.x) - rho / tau * dot(&mprev, &next.x);
            let robin = s.robin_coeff * dot(&sp.interface_mass.mul_vec(&next.x), &next.x);
            assert!(e_new <= e_old + 2.0 * tau * (data_work - robin) + 1e-9 * e_new.max(1.0));
            hist.push(t, next).unwrap();
        }
    }
}
