//! Physical configuration of the pressure-wave benchmark and its time grids.

use sha2::{Digest, Sha256};

use crate::error::{FsiError, Result};
use crate::fluid::{FluidParams, InletLoad};
use crate::mesh::Geometry;
use crate::solid::SolidParams;

/// Default final time, s.
pub const T_FINAL: f64 = 0.015;
/// Coarse step at rate 0, s.
pub const BASE_COARSE_STEP: f64 = 5e-3;
/// Fine (single-rate) step at rate 0, s. Ten fine steps per coarse step.
pub const BASE_FINE_STEP: f64 = 5e-4;

/// Everything that defines the continuous problem.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Physics {
    pub geometry: Geometry,
    pub fluid: FluidParams,
    pub solid: SolidParams,
    pub inlet: InletLoad,
}

impl Physics {
    pub fn validate(&self) -> Result<()> {
        self.fluid.validate()?;
        self.solid.validate()?;
        self.inlet.validate()?;
        if (self.solid.radius - self.geometry.height).abs() > 1e-12 * self.geometry.height {
            log::warn!(
                "wall radius {} differs from the channel height {}",
                self.solid.radius,
                self.geometry.height
            );
        }
        Ok(())
    }

    /// Hex SHA-256 over the bit patterns of every parameter.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let g = &self.geometry;
        let f = &self.fluid;
        let s = &self.solid;
        let i = &self.inlet;
        let values = [
            g.length,
            g.height,
            g.base_h,
            f.density,
            f.viscosity,
            f.stab_gamma,
            s.density,
            s.thickness,
            s.young,
            s.poisson,
            s.radius,
            s.viscous.unwrap_or(-1.0),
            i.p_max,
            i.t_star,
        ];
        for v in values {
            h.update(v.to_bits().to_le_bytes());
        }
        hex(&h.finalize())
    }

    /// Work scale of the inlet load: peak pressure times tube length and
    /// radius.
    pub fn inlet_work_scale(&self) -> f64 {
        self.inlet.p_max * self.geometry.length * self.geometry.height
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// `5e-3 / 2^rate`.
pub fn coarse_step(rate: u32) -> f64 {
    BASE_COARSE_STEP / 2f64.powi(rate as i32)
}

/// `5e-4 / 2^rate`.
pub fn fine_step(rate: u32) -> f64 {
    BASE_FINE_STEP / 2f64.powi(rate as i32)
}

/// Number of steps of length `tau` in `t_final`, which must be a whole
/// multiple.
pub fn step_count(t_final: f64, tau: f64) -> Result<usize> {
    if !(tau > 0.0) || !(t_final > 0.0) {
        return Err(FsiError::InvalidParameter(format!(
            "final time {t_final} and step {tau} must be positive"
        )));
    }
    let n = (t_final / tau).round();
    if n < 1.0 || (n * tau - t_final).abs() > 1e-9 * t_final {
        return Err(FsiError::IncommensurateTime { t_final, tau });
    }
    Ok(n as usize)
}
