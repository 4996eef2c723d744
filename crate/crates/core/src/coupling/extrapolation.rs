//! Interface extrapolation of order 0, 1 or 2 over a short state history.

use std::collections::VecDeque;

use crate::error::{FsiError, Result};

/// Extrapolation order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(u8);

impl Order {
    pub const ZERO: Order = Order(0);
    pub const FIRST: Order = Order(1);
    pub const SECOND: Order = Order(2);

    pub fn new(r: u8) -> Result<Self> {
        if r > 2 {
            return Err(FsiError::InvalidParameter(format!(
                "extrapolation order {r} not in {{0, 1, 2}}"
            )));
        }
        Ok(Order(r))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Values that can be combined linearly by the extrapolation formulas.
pub trait Extrapolant: Clone {
    fn zeroed(&self) -> Self;
    /// `a * x + b * y`.
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self;
}

impl Extrapolant for f64 {
    fn zeroed(&self) -> Self {
        0.0
    }
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
}

impl Extrapolant for Vec<f64> {
    fn zeroed(&self) -> Self {
        vec![0.0; self.len()]
    }
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect()
    }
}

pub const HISTORY_DEPTH: usize = 3;

/// The last few states of one field, newest first, with strictly increasing
/// times.
#[derive(Debug, Clone)]
pub struct HistoryBuffer<T> {
    entries: VecDeque<(f64, T)>,
}

impl<T> HistoryBuffer<T> {
    pub fn new(t0: f64, initial: T) -> Self {
        let mut entries = VecDeque::with_capacity(HISTORY_DEPTH);
        entries.push_front((t0, initial));
        HistoryBuffer { entries }
    }

    pub fn push(&mut self, t: f64, value: T) -> Result<()> {
        let latest = self.entries.front().map(|e| e.0).unwrap_or(f64::NEG_INFINITY);
        if !(t > latest) {
            return Err(FsiError::InvalidParameter(format!(
                "history time {t} does not follow {latest}"
            )));
        }
        if self.entries.len() == HISTORY_DEPTH {
            self.entries.pop_back();
        }
        self.entries.push_front((t, value));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `back = 0` is the newest state.
    pub fn get(&self, back: usize) -> Option<&T> {
        self.entries.get(back).map(|e| &e.1)
    }

    pub fn time(&self, back: usize) -> Option<f64> {
        self.entries.get(back).map(|e| e.0)
    }

    pub fn latest(&self) -> &T {
        &self.entries.front().expect("history is never empty").1
    }
}

impl<T: Extrapolant> HistoryBuffer<T> {
    /// Predictor `x^{n,*}` built from the states `back, back + 1, ...`;
    /// the order degrades to the available depth.
    fn extrapolate_from(&self, back: usize, r: Order) -> Option<T> {
        let available = self.len().saturating_sub(back);
        if available == 0 {
            return None;
        }
        let x1 = self.get(back)?;
        Some(match r.get().min(available as u8) {
            0 => x1.zeroed(),
            1 => x1.clone(),
            _ => T::combine(2.0, x1, -1.0, self.get(back + 1)?),
        })
    }

    /// Predictor for the next state.
    pub fn extrapolate(&self, r: Order) -> T {
        self.extrapolate_from(0, r)
            .expect("history is never empty")
    }

    /// `x^{n,*} - x^{n-1,*}`, the increment whose quotient by the step is
    /// the extrapolated time derivative. Both predictors use the same order,
    /// degraded so that the older one fits in the history; zero when no
    /// order fits.
    pub fn extrapolated_increment(&self, r: Order) -> T {
        let depth = self.len().saturating_sub(1) as u8;
        let eff = Order(r.get().min(depth));
        match (self.extrapolate_from(0, eff), self.extrapolate_from(1, eff)) {
            (Some(now), Some(prev)) if eff.get() > 0 => T::combine(1.0, &now, -1.0, &prev),
            _ => self.latest().zeroed(),
        }
    }
}

/// Free-standing form of the predictor on a history buffer.
pub fn extrapolate<T: Extrapolant>(hist: &HistoryBuffer<T>, r: Order) -> T {
    hist.extrapolate(r)
}
