//! Stand-alone fluid solver on a manufactured channel flow
//! `u = t (R^2 - y^2, 0)`, `p = t c (L - x)`, showing first-order
//! convergence of the velocity gradient under mesh refinement.
//!
//! cargo run --release --example stokes_poiseuille

use std::sync::Arc;

use jagged_fsi::coupling::{HistoryBuffer, Order};
use jagged_fsi::fem::element::MIDPOINT_RULE;
use jagged_fsi::fem::P1Triangle;
use jagged_fsi::fluid::{
    DerivativeSpacing, FluidForcing, FluidParams, FluidSolver, FluidSpace, InletLoad, SolidInterfaceData,
};
use jagged_fsi::mesh::{BoundaryTag, StructuredMesh};

fn gradient_error(rate: u32) -> Result<f64, Box<dyn std::error::Error>> {
    let mesh = Arc::new(StructuredMesh::new(rate)?);
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
    let space = Arc::new(FluidSpace::new(mesh.clone(), p)?.with_forcing(forcing));
    let tau = 0.05;
    let solver = FluidSolver::new(
        space.clone(),
        tau,
        0.11 / tau,
        Order::ZERO,
        DerivativeSpacing::SolidGrid,
        InletLoad { p_max: 0.0, t_star: 1.0 },
    )?;
    let wall = HistoryBuffer::new(0.0, vec![0.0; mesh.interface_nodes.len()]);
    let data = SolidInterfaceData { velocity: &wall, tau_s: tau };
    let mut hist = HistoryBuffer::new(0.0, space.zero_state());
    for n in 1..=2 {
        let t = n as f64 * tau;
        let next = solver.step(&hist, &data, t)?;
        hist.push(t, next)?;
    }
    let u = hist.latest();
    let t = 2.0 * tau;
    let mut err = 0.0;
    for (k, tri) in mesh.triangles.iter().enumerate() {
        let v = mesh.triangle_coords(k);
        let e = P1Triangle::new(v)?;
        let (mut gx, mut gy) = ([0.0; 2], [0.0; 2]);
        for a in 0..3 {
            for d in 0..2 {
                gx[d] += u.ux(tri[a]) * e.grads[a][d];
                gy[d] += u.uy(tri[a]) * e.grads[a][d];
            }
        }
        for (bary, w) in MIDPOINT_RULE {
            let y = P1Triangle::point(&v, bary)[1];
            let s = gx[0].powi(2) + (gx[1] + 2.0 * t * y).powi(2) + gy[0].powi(2) + gy[1].powi(2);
            err += w * e.area * s;
        }
    }
    Ok(err.sqrt())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut prev: Option<f64> = None;
    for rate in 0..=3 {
        let e = gradient_error(rate)?;
        match prev {
            Some(p) => println!("rate {rate}: |grad(u - u_h)| = {e:.4e}, order {:.3}", (p / e).log2()),
            None => println!("rate {rate}: |grad(u - u_h)| = {e:.4e}"),
        }
        prev = Some(e);
    }
    Ok(())
}
