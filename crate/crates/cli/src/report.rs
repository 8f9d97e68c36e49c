//! Report payloads and their JSON / CSV rendering. Every float is written
//! with 17 significant digits so identical inputs give identical bytes.

use std::collections::BTreeMap;

use anyhow::Result;
use ccz_core::analysis::{ChannelReport, FeasibilityReport, FidelityReport, GateMatrix, SweepRow, MARGIN_THRESHOLD};
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::Format;

pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A float emitted as a JSON number with 17 significant digits. JSON has
/// no infinities, so non-finite values become strings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_str(&fmt17(self.0));
        }
        RawValue::from_string(fmt17(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

#[derive(Serialize)]
pub struct GateJson {
    pub real: Vec<Vec<Sig17>>,
    pub imag: Vec<Vec<Sig17>>,
}

impl From<&GateMatrix> for GateJson {
    fn from(g: &GateMatrix) -> Self {
        let rows = |part: fn(ccz_core::C64) -> f64| {
            (0..8)
                .map(|r| (0..8).map(|c| Sig17(part(g.get(r, c)))).collect())
                .collect()
        };
        GateJson {
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }
}

#[derive(Serialize)]
pub struct FidelityJson {
    pub process_fidelity: Sig17,
    pub avg_gate_fidelity: Sig17,
    pub leakage: Sig17,
    pub max_elementwise_error: Sig17,
}

impl From<&FidelityReport> for FidelityJson {
    fn from(r: &FidelityReport) -> Self {
        FidelityJson {
            process_fidelity: Sig17(r.process_fidelity),
            avg_gate_fidelity: Sig17(r.avg_gate_fidelity),
            leakage: Sig17(r.leakage),
            max_elementwise_error: Sig17(r.max_elementwise_error),
        }
    }
}

#[derive(Serialize)]
pub struct ChannelJson {
    pub process_fidelity: Sig17,
    pub avg_gate_fidelity: Sig17,
    pub leakage: Sig17,
    pub min_eigenvalue: Sig17,
    pub integration_steps: usize,
}

impl From<&ChannelReport> for ChannelJson {
    fn from(r: &ChannelReport) -> Self {
        ChannelJson {
            process_fidelity: Sig17(r.process_fidelity),
            avg_gate_fidelity: Sig17(r.avg_gate_fidelity),
            leakage: Sig17(r.leakage),
            min_eigenvalue: Sig17(r.min_eigenvalue),
            integration_steps: r.integration_steps,
        }
    }
}

#[derive(Serialize)]
pub struct TruthRow {
    /// Bits `b1b2b3`, qudit 1 first.
    pub input: String,
    pub expected_sign: i8,
    /// Output amplitude on the input's own basis state.
    pub re: Sig17,
    pub im: Sig17,
    /// Largest amplitude deviation over the whole register.
    pub deviation: Sig17,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct RunReport {
    pub mode: &'static str,
    pub n_max: usize,
    pub couplings_hz: [Sig17; 3],
    pub rabi_hz: Sig17,
    pub tau_s: Sig17,
    pub gate: GateJson,
    pub fidelity: FidelityJson,
    pub truth_table_tolerance: Sig17,
    pub truth_table: Vec<TruthRow>,
    pub truth_table_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelJson>,
}

impl RunReport {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("mode".into(), self.mode.into()),
            ("n_max".into(), self.n_max.to_string()),
        ];
        for (i, g) in self.couplings_hz.iter().enumerate() {
            out.push((format!("g{}_hz", i + 1), fmt17(g.0)));
        }
        let f = &self.fidelity;
        out.extend([
            ("rabi_hz".into(), fmt17(self.rabi_hz.0)),
            ("tau_s".into(), fmt17(self.tau_s.0)),
            ("process_fidelity".into(), fmt17(f.process_fidelity.0)),
            ("avg_gate_fidelity".into(), fmt17(f.avg_gate_fidelity.0)),
            ("leakage".into(), fmt17(f.leakage.0)),
            ("max_elementwise_error".into(), fmt17(f.max_elementwise_error.0)),
        ]);
        for row in &self.truth_table {
            out.push((format!("truth_{}_deviation", row.input), fmt17(row.deviation.0)));
        }
        out.push(("truth_table_pass".into(), self.truth_table_pass.to_string()));
        if let Some(c) = &self.channel {
            out.extend([
                ("channel_process_fidelity".into(), fmt17(c.process_fidelity.0)),
                ("channel_avg_gate_fidelity".into(), fmt17(c.avg_gate_fidelity.0)),
                ("channel_leakage".into(), fmt17(c.leakage.0)),
                ("channel_min_eigenvalue".into(), fmt17(c.min_eigenvalue.0)),
                ("channel_integration_steps".into(), c.integration_steps.to_string()),
            ]);
        }
        out
    }
}

#[derive(Serialize)]
pub struct FeasibilityJson {
    pub tau_s: Sig17,
    pub kappa_inv_s: Sig17,
    pub gamma3r_inv_s: Sig17,
    pub gamma3p_inv_s: Sig17,
    pub threshold: Sig17,
    pub margins: BTreeMap<&'static str, Sig17>,
    pub flagged: Vec<&'static str>,
    pub pass: bool,
}

impl From<&FeasibilityReport> for FeasibilityJson {
    fn from(r: &FeasibilityReport) -> Self {
        FeasibilityJson {
            tau_s: Sig17(r.tau),
            kappa_inv_s: Sig17(r.kappa_inv),
            gamma3r_inv_s: Sig17(r.gamma3r_inv),
            gamma3p_inv_s: Sig17(r.gamma3p_inv),
            threshold: Sig17(MARGIN_THRESHOLD),
            margins: r.margins.named().into_iter().map(|(k, v)| (k, Sig17(v))).collect(),
            flagged: r.flagged(),
            pass: r.passes(),
        }
    }
}

impl FeasibilityJson {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("tau_s".to_string(), fmt17(self.tau_s.0)),
            ("kappa_inv_s".into(), fmt17(self.kappa_inv_s.0)),
            ("gamma3r_inv_s".into(), fmt17(self.gamma3r_inv_s.0)),
            ("gamma3p_inv_s".into(), fmt17(self.gamma3p_inv_s.0)),
            ("threshold".into(), fmt17(self.threshold.0)),
        ];
        for (name, m) in &self.margins {
            out.push(((*name).into(), fmt17(m.0)));
            out.push((format!("{name}_flagged"), self.flagged.contains(name).to_string()));
        }
        out.push(("pass".into(), self.pass.to_string()));
        out
    }
}

#[derive(Serialize)]
pub struct SweepJsonRow {
    pub ratio: String,
    pub infidelity: Sig17,
    pub leakage: Sig17,
    pub tau_s: Sig17,
}

impl From<&SweepRow> for SweepJsonRow {
    fn from(r: &SweepRow) -> Self {
        SweepJsonRow {
            ratio: r.ratio.to_string(),
            infidelity: Sig17(r.infidelity),
            leakage: Sig17(r.leakage),
            tau_s: Sig17(r.tau),
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn key_value_csv(pairs: &[(String, String)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in pairs {
        w.write_record([k, v])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn render_run(report: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Json => json(report),
        Format::Csv => key_value_csv(&report.pairs()),
    }
}

pub fn render_feasibility(report: &FeasibilityReport, format: Format) -> Result<String> {
    let payload = FeasibilityJson::from(report);
    match format {
        Format::Json => json(&payload),
        Format::Csv => key_value_csv(&payload.pairs()),
    }
}

pub fn render_sweep(rows: &[SweepRow], format: Format) -> Result<String> {
    let rows: Vec<SweepJsonRow> = rows.iter().map(SweepJsonRow::from).collect();
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["ratio", "infidelity", "leakage", "tau_s"])?;
            for r in &rows {
                w.write_record([
                    r.ratio.clone(),
                    fmt17(r.infidelity.0),
                    fmt17(r.leakage.0),
                    fmt17(r.tau_s.0),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ccz_core::analysis::SweepRatio;

    #[test]
    fn seventeen_digits_and_string_infinities() {
        assert_eq!(serde_json::to_string(&Sig17(0.1)).unwrap(), "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&Sig17(-2.0)).unwrap(), "-2.0000000000000000e0");
        assert_eq!(serde_json::to_string(&Sig17(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Sig17(f64::NAN)).unwrap(), "\"nan\"");
    }

    #[test]
    fn printed_values_read_back_exactly() {
        for x in [0.1, 1.0 / 3.0, 7.954545454545455e-9, f64::MIN_POSITIVE, 1e300] {
            let s = serde_json::to_string(&Sig17(x)).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn sweep_csv_columns() {
        let rows = [
            SweepRow {
                ratio: SweepRatio::Finite(5.0),
                infidelity: 0.125,
                leakage: 0.0,
                tau: 8e-9,
            },
            SweepRow {
                ratio: SweepRatio::Idealized,
                infidelity: 0.0,
                leakage: 0.0,
                tau: 8e-9,
            },
        ];
        let text = render_sweep(&rows, Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ratio,infidelity,leakage,tau_s");
        assert!(lines[1].starts_with("5,1.2500000000000000e-1,"));
        assert!(lines[2].starts_with("inf,"));
    }
}
