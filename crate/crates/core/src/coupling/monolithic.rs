//! Fully implicit backward-Euler reference. The interface fluid velocity
//! DOFs double as the wall velocity, so the kinematic condition holds
//! exactly and the wall equation is added to the momentum rows on the
//! interface.

use crate::error::Result;
use crate::fem::{CsrMatrix, DirichletSolver};
use crate::fluid::inlet_pressure;
use crate::problem::{step_count, Physics};
use crate::solid::{assemble_string_operator, SolidState};

use super::scheme::{Discretization, Recorder, RunStatus, SchemeOptions, Trajectory};

/// Monolithic run with step `tau` on the mesh of `rate_space`.
pub fn run_monolithic_reference(
    tau: f64,
    rate_space: u32,
    t_final: f64,
    physics: &Physics,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    let n = step_count(t_final, tau)?;
    let disc = Discretization::new(physics, rate_space)?;
    run_monolithic_on(&disc, tau, n, options)
}

pub fn run_monolithic_on(
    disc: &Discretization,
    tau: f64,
    n: usize,
    options: &SchemeOptions,
) -> Result<Trajectory> {
    let fluid = &disc.fluid;
    let solid = &disc.solid;
    let lifting = &fluid.lifting;
    let nd = fluid.n_dofs();
    let rho_eps = solid.params.surface_density();

    // Wall operator on velocities, moved onto the interface u_y rows.
    let wall = assemble_string_operator(solid, tau)?;
    let embedded: Vec<(usize, usize, f64)> = wall
        .triplets()
        .map(|(k, l, v)| (lifting.fluid_dof(k), lifting.fluid_dof(l), v))
        .collect();
    let wall = CsrMatrix::from_triplets(nd, nd, &embedded)?;
    let op = CsrMatrix::linear_combination(&[(1.0, &fluid.operator(tau, 0.0)?), (1.0, &wall)])?;
    let solver = DirichletSolver::new(&op, &fluid.constraints)?;

    let mut rec = Recorder::new(options);
    let mut u = fluid.zero_state();
    let mut s: SolidState = solid.zero_state();
    let mut status = RunStatus::Completed;
    for k in 1..=n {
        let t = k as f64 * tau;
        let mut rhs = fluid.mass.mul_vec(&u.x);
        rhs.iter_mut().for_each(|v| *v *= fluid.params.density / tau);
        let p = inlet_pressure(&disc.physics.inlet, t);
        rhs.iter_mut().zip(&fluid.inlet).for_each(|(r, w)| *r += p * w);
        let mut wall_rhs = solid.mass.mul_vec(&s.dd);
        wall_rhs.iter_mut().for_each(|v| *v *= rho_eps / tau);
        solid.elastic.mul_vec_add(-1.0, &s.d, &mut wall_rhs);
        let lifted = lifting.apply(&wall_rhs)?;
        rhs.iter_mut().zip(&lifted).for_each(|(r, w)| *r += w);

        u.x = solver.solve(&rhs)?;
        u.step_index = k;
        u.t = t;
        let dd = lifting.restrict(&u.x)?;
        s.d = s.d.iter().zip(&dd).map(|(d, v)| d + tau * v).collect();
        s.dd = dd;
        s.step_index = k;
        s.t = t;

        let blown = rec.fluid(&u).or(rec.solid(&s, disc.total_energy(&u, &s)));
        if let Some(b) = blown {
            log::warn!("reference blew up: {b:?}");
            status = b;
            break;
        }
    }
    Ok(rec.finish(u, s, status))
}
