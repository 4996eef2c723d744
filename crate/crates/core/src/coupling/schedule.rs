//! Event order of fluid and solid steps inside one coarse interval.
//!
//! Fluid step `n` ends at `n tau_f` and solid step `m` at `m tau_s`. Events
//! run in order of their end times; a fluid step finishing no later than a
//! solid step runs first, so every solid step sees the newest fluid state
//! and every fluid step sees solid step `m - 1` while it is ahead of solid
//! step `m`.

use std::fmt;
use std::io::Write;

use crate::error::{FsiError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    FluidStep,
    SolidStep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleEvent {
    pub kind: StepKind,
    /// 1-based index within the coarse interval.
    pub ordinal: usize,
    /// End time of the step. For [`jagged_schedule`] this is measured in
    /// coarse intervals, i.e. `ordinal / N`.
    pub time: f64,
}

impl fmt::Display for ScheduleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            StepKind::FluidStep => 'F',
            StepKind::SolidStep => 'S',
        };
        write!(f, "{c}{}", self.ordinal)
    }
}

/// Events of one coarse interval, `n_f + n_s` in total.
pub fn jagged_schedule(n_f: usize, n_s: usize) -> Result<Vec<ScheduleEvent>> {
    if n_f == 0 || n_s == 0 {
        return Err(FsiError::InvalidParameter(format!(
            "jagged schedule needs N_f, N_s >= 1, got {n_f}, {n_s}"
        )));
    }
    let mut events = Vec::with_capacity(n_f + n_s);
    let mut n = 1;
    for m in 1..=n_s {
        // Fluid steps with (m - 1) tau_s < n tau_f <= m tau_s, compared exactly
        // in integers.
        while n <= n_f && n * n_s <= m * n_f {
            events.push(ScheduleEvent {
                kind: StepKind::FluidStep,
                ordinal: n,
                time: n as f64 / n_f as f64,
            });
            n += 1;
        }
        events.push(ScheduleEvent {
            kind: StepKind::SolidStep,
            ordinal: m,
            time: m as f64 / n_s as f64,
        });
    }
    Ok(events)
}

/// Compact form such as `S1 F1 S2 F2 S3`.
pub fn format_schedule(events: &[ScheduleEvent]) -> String {
    events
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human-readable trace of the first `intervals` coarse intervals with
/// absolute times, one event per line.
pub fn write_trace<W: Write>(
    mut out: W,
    n_f: usize,
    n_s: usize,
    tau_coarse: f64,
    intervals: usize,
) -> Result<()> {
    let events = jagged_schedule(n_f, n_s)?;
    let io = |e| FsiError::io("<trace>", e);
    writeln!(out, "# F {n_f} S {n_s}, coarse step {tau_coarse:e} s").map_err(io)?;
    writeln!(out, "# tau_f = {:e} s, tau_s = {:e} s", tau_coarse / n_f as f64, tau_coarse / n_s as f64)
        .map_err(io)?;
    for i in 0..intervals {
        writeln!(out, "interval {} ({:e}, {:e}]", i + 1, i as f64 * tau_coarse, (i + 1) as f64 * tau_coarse)
            .map_err(io)?;
        for e in &events {
            let (what, steps) = match e.kind {
                StepKind::FluidStep => ("fluid", n_f),
                StepKind::SolidStep => ("solid", n_s),
            };
            let t = (i * steps + e.ordinal) as f64 * (tau_coarse / steps as f64);
            writeln!(out, "  {:<4} {what} step  t = {t:.6e}", e.to_string()).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn figure_traces() {
        assert_eq!(format_schedule(&jagged_schedule(2, 3).unwrap()), "S1 F1 S2 F2 S3");
        assert_eq!(format_schedule(&jagged_schedule(3, 2).unwrap()), "F1 S1 F2 F3 S2");
        let ten = format_schedule(&jagged_schedule(10, 10).unwrap());
        let want: Vec<String> = (1..=10).map(|k| format!("F{k} S{k}")).collect();
        assert_eq!(ten, want.join(" "));
        assert!(jagged_schedule(0, 3).is_err());
    }

    #[test]
    fn trace_lists_every_event() {
        let mut buf = Vec::new();
        write_trace(&mut buf, 2, 3, 5e-3, 3).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("  ")).count(), 15);
        assert!(text.contains("interval 3"));
    }

    proptest! {
        #[test]
        fn counting_and_ordering(nf in 1usize..=20, ns in 1usize..=20) {
            let ev = jagged_schedule(nf, ns).unwrap();
            prop_assert_eq!(ev.len(), nf + ns);
            let fluid: Vec<usize> = ev.iter().filter(|e| e.kind == StepKind::FluidStep).map(|e| e.ordinal).collect();
            let solid: Vec<usize> = ev.iter().filter(|e| e.kind == StepKind::SolidStep).map(|e| e.ordinal).collect();
            prop_assert_eq!(fluid, (1..=nf).collect::<Vec<_>>());
            prop_assert_eq!(solid, (1..=ns).collect::<Vec<_>>());
            for (i, e) in ev.iter().enumerate() {
                prop_assert!(e.time > 0.0 && e.time <= 1.0);
                if e.kind == StepKind::FluidStep {
                    let pos_solid = |m: usize| ev.iter().position(|x| x.kind == StepKind::SolidStep && x.ordinal == m).unwrap();
                    for m in 1..=ns {
                        // fluid n precedes solid m iff n tau_f <= m tau_s
                        prop_assert_eq!(i < pos_solid(m), e.ordinal * ns <= m * nf);
                    }
                }
            }
            if nf == ns {
                for (i, e) in ev.iter().enumerate() {
                    let kind = if i % 2 == 0 { StepKind::FluidStep } else { StepKind::SolidStep };
                    prop_assert_eq!(e.kind, kind);
                }
            }
        }
    }
}
