//! Wall displacement at the final time for several schemes, written as
//! `x,dy` CSV files for plotting.
//!
//! cargo run --release --example displacement_profile -- [rate] [out_dir]

use std::path::PathBuf;

use jagged_fsi::coupling::SchemeOptions;
use jagged_fsi::coupling::Order;
use jagged_fsi::problem::{Physics, T_FINAL};
use jagged_fsi::study::{emit_displacement_profile, interface_x, run_scheme, Scheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rate: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "target/profiles".into()));
    std::fs::create_dir_all(&out)?;
    let physics = Physics::default();

    for scheme in [
        Scheme::Reference,
        Scheme::Ern,
        Scheme::Jagged { n_f: 5, n_s: 15 },
        Scheme::Jagged { n_f: 1, n_s: 20 },
    ] {
        let t = run_scheme(scheme, rate, Order::FIRST, T_FINAL, &physics, &SchemeOptions::default())?;
        let name = scheme.label().replace(' ', "").to_lowercase();
        let path = out.join(format!("{name}_rate{rate}.csv"));
        let x = interface_x(t.final_solid.d.len(), &physics);
        emit_displacement_profile(&x, &t.final_solid, &path)?;
        let peak = t.final_solid.d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("{:>10}: max |dy| = {peak:.4e}  -> {}", scheme.label(), path.display());
    }
    Ok(())
}
