//! Jagged multirate runs next to the single-rate scheme: cost, solve counts
//! and the F 10 S 10 identity.
//!
//! cargo run --release --example jagged_run -- [rate]

use std::time::Instant;

use jagged_fsi::coupling::{run_ern, run_jagged, JaggedConfig, Order, SchemeOptions, Trajectory};
use jagged_fsi::problem::{Physics, T_FINAL};

fn report(label: &str, t: &Trajectory, secs: f64) {
    println!(
        "{label:>10}: {:>4} fluid, {:>4} solid solves, {secs:>7.3} s, d(3 cm) = {:+.4e}, {:?}",
        t.fluid_solves,
        t.solid_solves,
        t.final_solid.d[t.final_solid.d.len() / 2],
        t.status
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rate: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let physics = Physics::default();
    let opts = SchemeOptions::default();

    let start = Instant::now();
    let ern = run_ern(rate, Order::FIRST, T_FINAL, &physics, &opts)?;
    report("ERN", &ern, start.elapsed().as_secs_f64());

    for (nf, ns) in [(10, 10), (5, 15), (4, 16), (1, 20), (20, 1)] {
        let cfg = JaggedConfig::for_rate(nf, ns, rate, Order::FIRST)?;
        let start = Instant::now();
        let t = run_jagged(&cfg, rate, T_FINAL, &physics, &opts)?;
        report(&format!("F {nf} S {ns}"), &t, start.elapsed().as_secs_f64());
        if (nf, ns) == (10, 10) {
            println!("{:>10}  identical to ERN: {}", "", t.digest == ern.digest);
        }
    }
    Ok(())
}
