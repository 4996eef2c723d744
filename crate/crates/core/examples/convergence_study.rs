//! Error and order tables for ERN and a few jagged instances against the
//! monolithic reference.
//!
//! cargo run --release --example convergence_study -- [max_rate] [out_dir]
//!
//! The reference is cached under `<out_dir>/cache`, so only the first run
//! pays for it.

use std::path::PathBuf;

use jagged_fsi::study::{format_g6, run_study_outcome, Scheme, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut args = std::env::args().skip(1);
    let max_rate: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "target/convergence-study".into()));

    let schemes = [
        Scheme::Ern,
        Scheme::Jagged { n_f: 4, n_s: 16 },
        Scheme::Jagged { n_f: 5, n_s: 15 },
        Scheme::Jagged { n_f: 1, n_s: 20 },
    ];
    for scheme in schemes {
        let label = scheme.label().replace(' ', "");
        let config = StudyConfig {
            scheme,
            rates: (0..=max_rate).collect(),
            out_dir: Some(out.join(&label)),
            cache_dir: Some(out.join("cache")),
            ..StudyConfig::default()
        };
        let outcome = run_study_outcome(&config)?;
        println!("\n{}", scheme.label());
        println!("{:>4} {:>10} {:>10} {:>9} {:>6}", "rate", "E", "O", "seconds", "stable");
        for row in &outcome.report.rows {
            let show = |v: Option<f64>| v.map(format_g6).unwrap_or_else(|| "-".into());
            println!(
                "{:>4} {:>10} {:>10} {:>9.2} {:>6}",
                row.rate,
                show(row.error),
                show(row.order),
                row.seconds,
                row.stable
            );
        }
    }
    println!("\nreports and profiles under {}", out.display());
    Ok(())
}
