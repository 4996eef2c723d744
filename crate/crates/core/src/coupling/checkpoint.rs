//! Plain-text dumps of recorded trajectory states.
//!
//! ```text
//! fluid <step> <t> <n_nodes>
//! <ux> <uy> <p>          (one line per node)
//! solid <step> <t> <n_nodes>
//! <d> <dd>               (one line per interface node)
//! ```
//!
//! Numbers are written in shortest round-trip form, so reading a checkpoint
//! back gives bitwise identical states.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{FsiError, Result};
use crate::fluid::FluidState;
use crate::solid::SolidState;

use super::scheme::Trajectory;

pub fn write_checkpoint(path: &Path, fluid: &[FluidState], solid: &[SolidState]) -> Result<()> {
    let io = |e| FsiError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for s in fluid {
        writeln!(w, "fluid {} {:e} {}", s.step_index, s.t, s.n_nodes()).map_err(io)?;
        for c in s.x.chunks_exact(3) {
            writeln!(w, "{:e} {:e} {:e}", c[0], c[1], c[2]).map_err(io)?;
        }
    }
    for s in solid {
        writeln!(w, "solid {} {:e} {}", s.step_index, s.t, s.d.len()).map_err(io)?;
        for (d, v) in s.d.iter().zip(&s.dd) {
            writeln!(w, "{d:e} {v:e}").map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Recorded states of a trajectory, or its final states when nothing was
/// recorded.
pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    if traj.fluid.is_empty() && traj.solid.is_empty() {
        write_checkpoint(
            path,
            std::slice::from_ref(&traj.final_fluid),
            std::slice::from_ref(&traj.final_solid),
        )
    } else {
        write_checkpoint(path, &traj.fluid, &traj.solid)
    }
}

pub fn read_checkpoint(path: &Path) -> Result<(Vec<FluidState>, Vec<SolidState>)> {
    let file = File::open(path).map_err(|e| FsiError::io(path, e))?;
    let bad = |reason: String| FsiError::Malformed {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = BufReader::new(file).lines();
    let mut fluid = Vec::new();
    let mut solid = Vec::new();
    let next_numbers = |lines: &mut std::io::Lines<BufReader<File>>, want: usize| -> Result<Vec<f64>> {
        let line = lines
            .next()
            .ok_or_else(|| bad("truncated block".into()))?
            .map_err(|e| FsiError::io(path, e))?;
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("{e} in {line:?}")))?;
        if v.len() != want {
            return Err(bad(format!("expected {want} values in {line:?}")));
        }
        Ok(v)
    };
    while let Some(header) = lines.next() {
        let header = header.map_err(|e| FsiError::io(path, e))?;
        if header.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(bad(format!("bad block header {header:?}")));
        }
        let step: usize = parts[1].parse().map_err(|e| bad(format!("{e}")))?;
        let t: f64 = parts[2].parse().map_err(|e| bad(format!("{e}")))?;
        let n: usize = parts[3].parse().map_err(|e| bad(format!("{e}")))?;
        match parts[0] {
            "fluid" => {
                let mut x = Vec::with_capacity(3 * n);
                for _ in 0..n {
                    x.extend(next_numbers(&mut lines, 3)?);
                }
                fluid.push(FluidState { x, step_index: step, t });
            }
            "solid" => {
                let mut s = SolidState::zeros(n);
                s.step_index = step;
                s.t = t;
                for k in 0..n {
                    let v = next_numbers(&mut lines, 2)?;
                    s.d[k] = v[0];
                    s.dd[k] = v[1];
                }
                solid.push(s);
            }
            other => return Err(bad(format!("unknown block {other:?}"))),
        }
    }
    Ok((fluid, solid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let f = FluidState {
            x: vec![0.1, -1.0 / 3.0, 7e-300, 2.0, f64::MIN_POSITIVE, -0.0],
            step_index: 4,
            t: 2e-3,
        };
        let mut s = SolidState::zeros(3);
        s.d[1] = std::f64::consts::PI;
        s.dd[1] = -1e-17;
        s.step_index = 4;
        s.t = 2e-3;
        write_checkpoint(&path, &[f.clone()], &[s.clone()]).unwrap();
        let (fs, ss) = read_checkpoint(&path).unwrap();
        assert_eq!(fs, vec![f]);
        assert_eq!(ss, vec![s]);
    }

    #[test]
    fn truncated_file_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "solid 1 1e-3 3\n0 0\n").unwrap();
        assert!(matches!(read_checkpoint(&path), Err(FsiError::Malformed { .. })));
    }
}
