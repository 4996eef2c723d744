//! Command-line front end: single runs, convergence studies and sweeps over
//! jagged instances.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use jagged_fsi::coupling::checkpoint::write_trajectory;
use jagged_fsi::coupling::Order;
use jagged_fsi::fluid::FluidState;
use jagged_fsi::mesh::StructuredMesh;
use jagged_fsi::study::{
    emit_displacement_profile, emit_schedule, format_g6, format_report, interface_x, load_config,
    parse_rates, parse_scheme, run_scheme, run_study, ReferenceSpec, Scheme, StudyConfig,
};
use jagged_fsi::problem::coarse_step;
use jagged_fsi::FsiError;

#[derive(Parser)]
#[command(name = "fsi", version, about = "Explicit Robin-Neumann FSI with jagged time steps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run at one rate.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rate: u32,
        /// Also dump every k-th state to checkpoint.txt.
        #[arg(long)]
        checkpoint_stride: Option<usize>,
    },
    /// Errors and orders over several rates.
    Study {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rates: Option<String>,
        #[command(flatten)]
        reference: Reference,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Studies for several jagged instances, e.g. --pairs "4:16,5:15".
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        rates: Option<String>,
        #[command(flatten)]
        reference: Reference,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// ern, jagged or reference.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    nf: Option<usize>,
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    extr: Option<u8>,
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with status 2 when a run is unstable.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct Reference {
    #[arg(long)]
    reference_tau: Option<f64>,
    #[arg(long)]
    reference_h: Option<f64>,
}

enum Failure {
    Unstable,
    Fsi(FsiError),
}

impl From<FsiError> for Failure {
    fn from(e: FsiError) -> Self {
        Failure::Fsi(e)
    }
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure::Fsi(FsiError::Config(msg.into()))
}

fn base_config(common: &Common) -> Result<StudyConfig, Failure> {
    let mut c = StudyConfig::default();
    if let Some(path) = &common.config {
        load_config(path, &mut c)?;
    }
    let (mut nf, mut ns) = match c.scheme {
        Scheme::Jagged { n_f, n_s } => (n_f, n_s),
        _ => (10, 10),
    };
    nf = common.nf.unwrap_or(nf);
    ns = common.ns.unwrap_or(ns);
    if let Some(s) = &common.scheme {
        c.scheme = parse_scheme(s, nf, ns)?;
    } else if let Scheme::Jagged { .. } = c.scheme {
        c.scheme = Scheme::Jagged { n_f: nf, n_s: ns };
    }
    if let Some(r) = common.extr {
        c.extr = Order::new(r).map_err(|e| config_error(e.to_string()))?;
    }
    if let Some(t) = common.tfinal {
        c.t_final = t;
    }
    if let Some(o) = &common.out {
        c.out_dir = Some(o.clone());
    }
    Ok(c)
}

fn apply_study_flags(
    c: &mut StudyConfig,
    rates: &Option<String>,
    reference: &Reference,
    workers: Option<usize>,
) -> Result<(), Failure> {
    if let Some(r) = rates {
        c.rates = parse_rates(r)?;
    }
    if let Some(t) = reference.reference_tau {
        c.reference.tau = t;
    }
    if let Some(h) = reference.reference_h {
        c.reference.rate_space = ReferenceSpec::rate_for_h(c.physics.geometry.base_h, h)?;
    }
    if let Some(w) = workers {
        c.workers = w;
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Fsi(FsiError::Io { path: dir.into(), source: e }))
}

fn run(common: Common, rate: u32, stride: Option<usize>) -> Result<(), Failure> {
    let mut c = base_config(&common)?;
    c.options.record_stride = stride;
    c.physics.validate().map_err(|e| config_error(e.to_string()))?;
    let start = Instant::now();
    let traj = run_scheme(c.scheme, rate, c.extr, c.t_final, &c.physics, &c.options)?;
    let seconds = start.elapsed().as_secs_f64();
    println!(
        "{} rate {rate}: {} fluid / {} solid solves in {seconds:.2} s, max energy {}, {:?}",
        c.scheme.label(),
        traj.fluid_solves,
        traj.solid_solves,
        format_g6(traj.max_energy()),
        traj.status
    );
    println!("digest {}", traj.digest);
    if let Some(dir) = &c.out_dir {
        create_dir(dir)?;
        let x = interface_x(traj.final_solid.d.len(), &c.physics);
        emit_displacement_profile(&x, &traj.final_solid, &dir.join(format!("profile_rate{rate}.csv")))?;
        write_fluid(&c, rate, &traj.final_fluid, &dir.join("fluid_state.csv"))?;
        if stride.is_some() {
            write_trajectory(&dir.join("checkpoint.txt"), &traj)?;
        }
        if let Scheme::Jagged { n_f, n_s } = c.scheme {
            emit_schedule(n_f, n_s, coarse_step(rate), dir)?;
        }
    }
    if common.strict && !traj.is_stable() {
        return Err(Failure::Unstable);
    }
    Ok(())
}

fn write_fluid(c: &StudyConfig, rate: u32, state: &FluidState, path: &Path) -> Result<(), Failure> {
    let mesh = StructuredMesh::build(c.physics.geometry, rate, jagged_fsi::mesh::DEFAULT_MAX_NODES)?;
    let io = |e| Failure::Fsi(FsiError::Io { path: path.into(), source: e });
    let file = std::fs::File::create(path).map_err(io)?;
    state.write_csv(&mesh, std::io::BufWriter::new(file)).map_err(io)
}

fn study(c: &StudyConfig, strict: bool) -> Result<(), Failure> {
    let report = run_study(c)?;
    println!("{}", c.scheme.label());
    print!("{}", format_report(&report));
    if strict && !report.all_stable() {
        return Err(Failure::Unstable);
    }
    Ok(())
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(',')
        .map(|p| {
            let (a, b) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| config_error(format!("pair {p:?} is not NF:NS")))?;
            let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| config_error(format!("bad pair {p:?}")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            common,
            rate,
            checkpoint_stride,
        } => run(common, rate, checkpoint_stride),
        Command::Study {
            common,
            rates,
            reference,
            workers,
        } => {
            let mut c = base_config(&common)?;
            apply_study_flags(&mut c, &rates, &reference, workers)?;
            study(&c, common.strict)
        }
        Command::Sweep {
            common,
            pairs,
            rates,
            reference,
            workers,
        } => {
            let mut base = base_config(&common)?;
            apply_study_flags(&mut base, &rates, &reference, workers)?;
            let out = base.out_dir.clone().unwrap_or_else(|| PathBuf::from("sweep"));
            base.cache_dir.get_or_insert_with(|| out.join("cache"));
            let mut unstable = false;
            for (n_f, n_s) in parse_pairs(&pairs)? {
                let c = StudyConfig {
                    scheme: Scheme::Jagged { n_f, n_s },
                    out_dir: Some(out.join(format!("F{n_f}S{n_s}"))),
                    ..base.clone()
                };
                match study(&c, true) {
                    Err(Failure::Unstable) => unstable = true,
                    other => other?,
                }
            }
            if common.strict && unstable {
                return Err(Failure::Unstable);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unstable) => {
            eprintln!("fsi: unstable run");
            ExitCode::from(2)
        }
        Err(Failure::Fsi(e)) => {
            eprintln!("fsi: {e}");
            match e {
                FsiError::Config(_) | FsiError::InvalidParameter(_) | FsiError::IncommensurateTime { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::FAILURE,
            }
        }
    }
}
