//! Fully implicit reference run and how far the explicit scheme is from it
//! on the same grid.
//!
//! cargo run --release --example monolithic_reference -- [rate]

use jagged_fsi::coupling::{run_ern, run_monolithic_reference, Order, SchemeOptions};
use jagged_fsi::problem::{fine_step, Physics, T_FINAL};
use jagged_fsi::study::relative_error;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rate: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let physics = Physics::default();
    let opts = SchemeOptions::default();

    let mono = run_monolithic_reference(fine_step(rate), rate, T_FINAL, &physics, &opts)?;
    let ern = run_ern(rate, Order::FIRST, T_FINAL, &physics, &opts)?;
    println!("monolithic: {} steps, max energy {:.4e}", mono.solid_solves, mono.max_energy());
    println!("ERN:        {} steps, max energy {:.4e}", ern.solid_solves, ern.max_energy());
    println!(
        "relative energy-norm distance of ERN from the monolithic run: {:.4}",
        relative_error(&ern.final_solid.d, &mono.final_solid.d, &physics)?
    );
    Ok(())
}
