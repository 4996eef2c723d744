//! Single-rate explicit Robin-Neumann run on the pressure-wave benchmark.
//!
//! cargo run --release --example ern_run -- [rate] [extr]

use jagged_fsi::coupling::{run_ern, Order, SchemeOptions};
use jagged_fsi::problem::{Physics, T_FINAL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rate: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let extr = Order::new(args.next().map(|s| s.parse()).transpose()?.unwrap_or(1))?;
    let physics = Physics::default();

    let traj = run_ern(rate, extr, T_FINAL, &physics, &SchemeOptions::default())?;
    println!("status {:?}, {} steps", traj.status, traj.solid_solves);

    // Energy every few steps.
    let every = (traj.energy.len() / 10).max(1);
    for (t, e) in traj.energy.iter().step_by(every) {
        println!("t = {t:.5}  energy = {e:.6e}");
    }
    println!(
        "max energy {:.4e} ({:.2e} of the inlet work scale)",
        traj.max_energy(),
        traj.max_energy() / physics.inlet_work_scale()
    );

    let d = &traj.final_solid.d;
    let (k, peak) = d
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (k, &v)| if v.abs() > acc.1.abs() { (k, v) } else { acc });
    let x = k as f64 / (d.len() - 1) as f64 * physics.geometry.length;
    println!("largest wall displacement {peak:.4e} cm at x = {x:.3} cm");
    Ok(())
}
