use std::cmp::Ordering;
use std::fmt;

use super::fidelity::gate_fidelities;
use super::gate::{extract_gate_with, GateMatrix};
use crate::dynamics::EvolutionMode;
use crate::protocol::{total_operation_time, ProtocolConfig};
use crate::{Exec, Result, SimError};

/// Ω / max(g) for a simultaneous-mode run, or the idealized limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepRatio {
    Finite(f64),
    Idealized,
}

impl SweepRatio {
    pub fn value(self) -> f64 {
        match self {
            SweepRatio::Finite(r) => r,
            SweepRatio::Idealized => f64::INFINITY,
        }
    }
}

impl fmt::Display for SweepRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepRatio::Finite(r) => write!(f, "{r}"),
            SweepRatio::Idealized => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub ratio: SweepRatio,
    /// 1 − average gate fidelity.
    pub infidelity: f64,
    pub leakage: f64,
    pub tau: f64,
}

/// Configuration for one sweep point: Ω = ratio · max(g), simultaneous
/// evolution; the idealized row keeps the template's Ω.
pub fn sweep_config(template: &ProtocolConfig, ratio: SweepRatio) -> Result<ProtocolConfig> {
    match ratio {
        SweepRatio::Finite(r) => {
            if !(r.is_finite() && r > 1.0) {
                return Err(SimError::invalid(
                    "ratio",
                    format!("Ω/g must be a finite number above 1, got {r}"),
                ));
            }
            template
                .clone()
                .with_omega(r * template.max_coupling())?
                .with_mode(EvolutionMode::Simultaneous)
        }
        SweepRatio::Idealized => template.clone().with_mode(EvolutionMode::Idealized),
    }
}

pub fn sweep_point(template: &ProtocolConfig, ratio: SweepRatio, exec: Exec) -> Result<SweepRow> {
    let cfg = sweep_config(template, ratio)?;
    let report = gate_fidelities(&extract_gate_with(&cfg, exec)?, &GateMatrix::ccz());
    Ok(SweepRow {
        ratio,
        infidelity: (1.0 - report.avg_gate_fidelity).max(0.0),
        leakage: report.leakage,
        tau: total_operation_time(&cfg),
    })
}

/// One extraction per ratio, rows sorted by ratio (idealized last). At
/// least two ratios are required.
pub fn error_scaling_sweep(template: &ProtocolConfig, ratios: &[SweepRatio], exec: Exec) -> Result<Vec<SweepRow>> {
    if ratios.len() < 2 {
        return Err(SimError::invalid(
            "ratios",
            format!("a sweep needs at least 2 ratios, got {}", ratios.len()),
        ));
    }
    // Points run concurrently; each extraction then stays sequential.
    let mut rows = exec
        .map(ratios, |&r| sweep_point(template, r, Exec::Sequential))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.ratio.value().partial_cmp(&b.ratio.value()).unwrap_or(Ordering::Equal));
    Ok(rows)
}
