//! Free vibration of the clamped wall model: implicit Euler dissipates the
//! elastic plus kinetic energy monotonically.
//!
//! cargo run --example string_vibration

use std::sync::Arc;

use jagged_fsi::mesh::StructuredMesh;
use jagged_fsi::solid::{lame_coefficients, SolidParams, SolidSolver, StringSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = SolidParams::default();
    let (l1, l0) = lame_coefficients(&params);
    println!("lambda1 = {l1}, lambda0 = {l0}");

    let mesh = StructuredMesh::new(1)?;
    let space = Arc::new(StringSpace::new(&mesh, params)?);
    let tau = 2.5e-4;
    let solver = SolidSolver::new(space.clone(), tau)?;

    let mut s = space.zero_state();
    let n = space.len();
    for k in 1..n - 1 {
        s.d[k] = 1e-3 * (std::f64::consts::PI * space.x[k] / 6.0).sin();
    }
    let zero = vec![0.0; n];
    println!("{:>8} {:>12} {:>12}", "t", "d(3 cm)", "energy");
    for step in 1..=200 {
        s = solver.step(&s, &zero, step as f64 * tau)?;
        if step % 20 == 0 {
            println!("{:>8.4} {:>12.4e} {:>12.4e}", s.t, s.d[n / 2], space.energy(&s));
        }
    }
    Ok(())
}
