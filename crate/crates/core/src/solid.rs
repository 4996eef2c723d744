//! Generalized string model for the transverse wall displacement on the
//! interface, discretized with P1 elements on the interface nodes.
//!
//! ```text
//! rho_s eps d_tt - lambda1 d_xx + lambda0 d = load,   d = 0 at both ends
//! ```
//!
//! Time stepping is implicit Euler on the velocity form:
//! `rho_s eps (dd^n - dd^{n-1}) / tau + A_e d^n = load`, `d^n = d^{n-1} + tau dd^n`.

use std::sync::Arc;

use crate::error::{FsiError, Result};
use crate::fem::sparse::dot;
use crate::fem::{segment_matrices, Constraints, CsrMatrix, DirichletSolver};
use crate::fluid::{FluidSpace, FluidState};
use crate::mesh::StructuredMesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidParams {
    /// g/cm^3
    pub density: f64,
    /// Wall thickness, cm.
    pub thickness: f64,
    /// Young's modulus, dyn/cm^2.
    pub young: f64,
    pub poisson: f64,
    /// Reference radius of the vessel, cm.
    pub radius: f64,
    /// Kelvin-Voigt coefficient multiplying `A_e dd`; `None` for a purely
    /// elastic wall.
    pub viscous: Option<f64>,
}

impl Default for SolidParams {
    fn default() -> Self {
        SolidParams {
            density: 1.1,
            thickness: 0.1,
            young: 0.75e6,
            poisson: 0.5,
            radius: 0.5,
            viscous: None,
        }
    }
}

impl SolidParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.density > 0.0
            && self.thickness > 0.0
            && self.young > 0.0
            && self.radius > 0.0
            && self.poisson > -1.0
            && self.poisson < 1.0
            && self.viscous.is_none_or(|b| b >= 0.0);
        if !ok {
            return Err(FsiError::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }

    /// `rho_s eps`, the inertia per unit interface length.
    pub fn surface_density(&self) -> f64 {
        self.density * self.thickness
    }
}

/// `(lambda1, lambda0) = (E eps / (2 (1 + nu)), E eps / (R^2 (1 - nu^2)))`.
pub fn lame_coefficients(p: &SolidParams) -> (f64, f64) {
    let e = p.young * p.thickness;
    (
        e / (2.0 * (1.0 + p.poisson)),
        e / (p.radius * p.radius * (1.0 - p.poisson * p.poisson)),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolidState {
    /// Displacement per interface node.
    pub d: Vec<f64>,
    /// Velocity per interface node.
    pub dd: Vec<f64>,
    pub step_index: usize,
    pub t: f64,
}

impl SolidState {
    pub fn zeros(n: usize) -> Self {
        SolidState {
            d: vec![0.0; n],
            dd: vec![0.0; n],
            step_index: 0,
            t: 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        crate::fem::sparse::max_abs(&self.d).max(crate::fem::sparse::max_abs(&self.dd))
    }
}

/// P1 matrices on the interface line.
#[derive(Debug, Clone)]
pub struct StringSpace {
    pub params: SolidParams,
    /// Interface `x` coordinates, ascending.
    pub x: Vec<f64>,
    pub mass: CsrMatrix,
    pub stiffness: CsrMatrix,
    /// `A_e = lambda1 K + lambda0 M`.
    pub elastic: CsrMatrix,
    pub constraints: Constraints,
}

impl StringSpace {
    pub fn new(mesh: &StructuredMesh, params: SolidParams) -> Result<Self> {
        let x: Vec<f64> = mesh.interface_submesh().iter().map(|&(_, x)| x).collect();
        Self::from_coordinates(x, params)
    }

    pub fn from_coordinates(x: Vec<f64>, params: SolidParams) -> Result<Self> {
        params.validate()?;
        let n = x.len();
        if n < 3 {
            return Err(FsiError::DimensionMismatch { expected: 3, actual: n });
        }
        let mut m = Vec::with_capacity(4 * n);
        let mut k = Vec::with_capacity(4 * n);
        for e in 0..n - 1 {
            let len = x[e + 1] - x[e];
            if !(len > 0.0) {
                return Err(FsiError::DegenerateElement { area: len });
            }
            let (me, ke) = segment_matrices(len);
            for i in 0..2 {
                for j in 0..2 {
                    m.push((e + i, e + j, me[i][j]));
                    k.push((e + i, e + j, ke[i][j]));
                }
            }
        }
        let mass = CsrMatrix::from_triplets(n, n, &m)?;
        let stiffness = CsrMatrix::from_triplets(n, n, &k)?;
        let (l1, l0) = lame_coefficients(&params);
        let elastic = CsrMatrix::linear_combination(&[(l1, &stiffness), (l0, &mass)])?;
        let mut constraints = Constraints::new();
        constraints.fix(0, 0.0)?;
        constraints.fix(n - 1, 0.0)?;
        Ok(StringSpace {
            params,
            x,
            mass,
            stiffness,
            elastic,
            constraints,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn zero_state(&self) -> SolidState {
        SolidState::zeros(self.len())
    }

    /// `int phi_k` on the interface.
    pub fn lumped_weights(&self) -> Vec<f64> {
        self.mass.mul_vec(&vec![1.0; self.len()])
    }

    /// `sqrt(d^T A_e d)`.
    pub fn energy_norm(&self, d: &[f64]) -> f64 {
        elastic_energy_norm(&self.elastic, d)
    }

    /// `rho_s eps |dd|^2 + |d|_e^2`.
    pub fn energy(&self, s: &SolidState) -> f64 {
        self.params.surface_density() * dot(&self.mass.mul_vec(&s.dd), &s.dd)
            + dot(&self.elastic.mul_vec(&s.d), &s.d)
    }
}

pub fn elastic_energy_norm(elastic: &CsrMatrix, d: &[f64]) -> f64 {
    dot(&elastic.mul_vec(d), d).max(0.0).sqrt()
}

/// Velocity-form system matrix `rho_s eps / tau M + (tau + beta) A_e`,
/// before the end conditions.
pub fn assemble_string_operator(space: &StringSpace, tau: f64) -> Result<CsrMatrix> {
    if !(tau > 0.0) {
        return Err(FsiError::InvalidParameter(format!("solid step {tau}")));
    }
    let beta = space.params.viscous.unwrap_or(0.0);
    CsrMatrix::linear_combination(&[
        (space.params.surface_density() / tau, &space.mass),
        (tau + beta, &space.elastic),
    ])
}

/// Interface load `-R(u, p; phi_k)` from the fluid residual of the newest
/// fluid step, i.e. the weak fluid traction on the wall. Zero at the ends.
pub fn fluid_residual_load(
    fluid: &FluidSpace,
    now: &FluidState,
    prev: &FluidState,
    tau_f: f64,
) -> Result<Vec<f64>> {
    let inc: Vec<f64> = now.x.iter().zip(&prev.x).map(|(a, b)| a - b).collect();
    let r = fluid.momentum_residual(&now.x, &inc, tau_f);
    let mut load = fluid.lifting.restrict_interior(&r)?;
    load.iter_mut().for_each(|v| *v = -*v);
    Ok(load)
}

#[derive(Debug)]
pub struct SolidSolver {
    pub space: Arc<StringSpace>,
    pub tau: f64,
    solver: DirichletSolver,
}

impl SolidSolver {
    pub fn new(space: Arc<StringSpace>, tau: f64) -> Result<Self> {
        let op = assemble_string_operator(&space, tau)?;
        let solver = DirichletSolver::new(&op, &space.constraints)?;
        Ok(SolidSolver { space, tau, solver })
    }

    /// One step to `t_new` under the interface load vector `load`.
    pub fn step(&self, prev: &SolidState, load: &[f64], t_new: f64) -> Result<SolidState> {
        let n = self.space.len();
        if load.len() != n || prev.d.len() != n {
            return Err(FsiError::DimensionMismatch {
                expected: n,
                actual: load.len().min(prev.d.len()),
            });
        }
        let rho_eps = self.space.params.surface_density();
        let mut rhs = load.to_vec();
        self.space.mass.mul_vec_add(rho_eps / self.tau, &prev.dd, &mut rhs);
        self.space.elastic.mul_vec_add(-1.0, &prev.d, &mut rhs);
        let dd = self.solver.solve(&rhs)?;
        let d = prev.d.iter().zip(&dd).map(|(d, v)| d + self.tau * v).collect();
        Ok(SolidState {
            d,
            dd,
            step_index: prev.step_index + 1,
            t: t_new,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::P;
    use crate::fluid::FluidParams;
    use approx::assert_relative_eq;

    fn space(rate: u32) -> Arc<StringSpace> {
        let mesh = StructuredMesh::new(rate).unwrap();
        Arc::new(StringSpace::new(&mesh, SolidParams::default()).unwrap())
    }

    #[test]
    fn default_coefficients() {
        let (l1, l0) = lame_coefficients(&SolidParams::default());
        assert_relative_eq!(l1, 25000.0, max_relative = 1e-14);
        assert_relative_eq!(l0, 400000.0, max_relative = 1e-14);
    }

    #[test]
    fn operator_is_spd() {
        let sp = space(0);
        let a = assemble_string_operator(&sp, 5e-4).unwrap();
        assert!(a.asymmetry() < 1e-9);
        let mut rng = 0.3f64;
        for _ in 0..20 {
            let v: Vec<f64> = (0..sp.len())
                .map(|_| {
                    rng = (rng * 997.0 + 0.1).fract();
                    rng - 0.5
                })
                .collect();
            assert!(dot(&a.mul_vec(&v), &v) > 0.0);
        }
    }

    #[test]
    fn free_vibration_energy_does_not_grow() {
        let sp = space(0);
        let s = SolidSolver::new(sp.clone(), 5e-4).unwrap();
        let mut st = sp.zero_state();
        let n = sp.len();
        st.d = sp
            .x
            .iter()
            .map(|x| (std::f64::consts::PI * x / 6.0).sin() * 1e-3)
            .collect();
        st.d[0] = 0.0;
        st.d[n - 1] = 0.0;
        let zero = vec![0.0; n];
        let mut e = sp.energy(&st);
        for k in 1..=100 {
            st = s.step(&st, &zero, k as f64 * 5e-4).unwrap();
            let e_new = sp.energy(&st);
            assert!(e_new <= e * (1.0 + 1e-12));
            e = e_new;
        }
    }

    #[test]
    fn static_limit() {
        let sp = space(0);
        let load = sp.lumped_weights();
        let tau = 1e-2;
        let s = SolidSolver::new(sp.clone(), tau).unwrap();
        let mut st = sp.zero_state();
        for k in 1..=2000 {
            st = s.step(&st, &load, k as f64 * tau).unwrap();
        }
        let r = sp.elastic.mul_vec(&st.d);
        for k in 1..sp.len() - 1 {
            assert_relative_eq!(r[k], load[k], max_relative = 1e-6);
        }
    }

    #[test]
    fn manufactured_first_order() {
        // d = t sin(pi x / L): velocity is constant in time, so only the
        // spatial error is left.
        let err = |rate: u32| {
            let sp = space(rate);
            let (l1, l0) = lame_coefficients(&sp.params);
            let k = std::f64::consts::PI / 6.0;
            let tau = 1e-3;
            let s = SolidSolver::new(sp.clone(), tau).unwrap();
            let mut st = sp.zero_state();
            st.dd = sp.x.iter().map(|x| (k * x).sin()).collect();
            for n in 1..=3 {
                let t = n as f64 * tau;
                let mut load = vec![0.0; sp.len()];
                for e in 0..sp.len() - 1 {
                    let (a, b) = (sp.x[e], sp.x[e + 1]);
                    for (s, w) in [(0.0, 1.0 / 6.0), (0.5, 4.0 / 6.0), (1.0, 1.0 / 6.0)] {
                        let x = a + s * (b - a);
                        let f = t * (k * x).sin() * (l1 * k * k + l0);
                        load[e] += w * (b - a) * (1.0 - s) * f;
                        load[e + 1] += w * (b - a) * s * f;
                    }
                }
                st = s.step(&st, &load, t).unwrap();
            }
            let t = 3.0 * tau;
            // Error in the H1 seminorm, exact per element by midpoint slope.
            let mut e2 = 0.0;
            for e in 0..sp.len() - 1 {
                let (a, b) = (sp.x[e], sp.x[e + 1]);
                let slope = (st.d[e + 1] - st.d[e]) / (b - a);
                for (s, w) in [(0.0, 1.0 / 6.0), (0.5, 4.0 / 6.0), (1.0, 1.0 / 6.0)] {
                    let x = a + s * (b - a);
                    e2 += w * (b - a) * (slope - t * k * (k * x).cos()).powi(2);
                }
            }
            e2.sqrt()
        };
        let e: Vec<f64> = (0..3).map(err).collect();
        for w in e.windows(2) {
            assert!((w[0] / w[1]).log2() >= 0.9, "{e:?}");
        }
    }

    #[test]
    fn uniform_pressure_load_is_weighted() {
        let mesh = Arc::new(StructuredMesh::new(0).unwrap());
        let fs = FluidSpace::new(mesh.clone(), FluidParams::default()).unwrap();
        let mut now = fs.zero_state();
        for n in 0..mesh.n_nodes() {
            now.x[fs.dofs.index(n, P)] = 250.0;
        }
        let prev = now.clone();
        let load = fluid_residual_load(&fs, &now, &prev, 1e-3).unwrap();
        let sp = StringSpace::new(&mesh, SolidParams::default()).unwrap();
        let w = sp.lumped_weights();
        assert_eq!(load[0], 0.0);
        for k in 1..load.len() - 1 {
            assert_relative_eq!(load[k], 250.0 * w[k], max_relative = 1e-12);
        }
    }

    #[test]
    fn step_rejects_wrong_sizes() {
        let sp = space(0);
        let s = SolidSolver::new(sp.clone(), 1e-3).unwrap();
        assert!(s.step(&sp.zero_state(), &[0.0; 3], 1e-3).is_err());
        let bad = SolidParams { poisson: 1.0, ..SolidParams::default() };
        assert!(bad.validate().is_err());
    }
}
