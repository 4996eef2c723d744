//! Prints the order of fluid and solid steps for jagged instances.
//!
//! cargo run --example schedule_trace -- [nf] [ns]

use jagged_fsi::coupling::schedule::{format_schedule, jagged_schedule, write_trace};
use jagged_fsi::problem::coarse_step;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let pairs = match args.as_slice() {
        [nf, ns] => vec![(*nf, *ns)],
        _ => vec![(2, 3), (3, 2), (10, 10), (1, 20)],
    };
    for (nf, ns) in pairs {
        println!("F {nf} S {ns}: {}", format_schedule(&jagged_schedule(nf, ns)?));
    }
    println!();
    let (nf, ns) = match args.as_slice() {
        [nf, ns] => (*nf, *ns),
        _ => (2, 3),
    };
    write_trace(std::io::stdout().lock(), nf, ns, coarse_step(0), 2)?;
    Ok(())
}
