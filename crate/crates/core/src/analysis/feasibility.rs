use std::f64::consts::PI;

use crate::protocol::{total_operation_time, ProtocolConfig};
use crate::{Result, SimError};

/// Margins above this are flagged.
pub const MARGIN_THRESHOLD: f64 = 0.1;

/// Photon lifetime `κ⁻¹ = Q / (2π ν_c)` in seconds, for a cavity frequency in Hz.
pub fn cavity_lifetime(quality: f64, nu_c: f64) -> Result<f64> {
    positive("Q", quality)?;
    positive("nu_c_hz", nu_c)?;
    Ok(quality / (2.0 * PI * nu_c))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SimError::invalid(name, format!("must be positive, got {x}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margins {
    /// τ / κ⁻¹
    pub cavity: f64,
    /// τ · γ₃r
    pub relaxation: f64,
    /// τ · γ₃p
    pub dephasing: f64,
}

impl Margins {
    pub fn named(&self) -> [(&'static str, f64); 3] {
        [
            ("tau_over_kappa_inv", self.cavity),
            ("tau_times_gamma3r", self.relaxation),
            ("tau_times_gamma3p", self.dephasing),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub tau: f64,
    pub kappa_inv: f64,
    pub gamma3r_inv: f64,
    pub gamma3p_inv: f64,
    pub margins: Margins,
}

impl FeasibilityReport {
    /// Names of the margins at or above [`MARGIN_THRESHOLD`].
    pub fn flagged(&self) -> Vec<&'static str> {
        self.margins
            .named()
            .into_iter()
            .filter(|(_, m)| *m >= MARGIN_THRESHOLD)
            .map(|(name, _)| name)
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.flagged().is_empty()
    }
}

/// Compare the gate time with the three lifetimes (all in seconds).
pub fn feasibility_from_lifetimes(
    tau: f64,
    kappa_inv: f64,
    gamma3r_inv: f64,
    gamma3p_inv: f64,
) -> Result<FeasibilityReport> {
    positive("tau", tau)?;
    positive("kappa_inv_s", kappa_inv)?;
    positive("gamma3r_inv_s", gamma3r_inv)?;
    positive("gamma3p_inv_s", gamma3p_inv)?;
    Ok(FeasibilityReport {
        tau,
        kappa_inv,
        gamma3r_inv,
        gamma3p_inv,
        margins: Margins {
            cavity: tau / kappa_inv,
            relaxation: tau / gamma3r_inv,
            dephasing: tau / gamma3p_inv,
        },
    })
}

pub fn feasibility_check(
    cfg: &ProtocolConfig,
    quality: f64,
    nu_c: f64,
    gamma3r_inv: f64,
    gamma3p_inv: f64,
) -> Result<FeasibilityReport> {
    feasibility_from_lifetimes(
        total_operation_time(cfg),
        cavity_lifetime(quality, nu_c)?,
        gamma3r_inv,
        gamma3p_inv,
    )
}
