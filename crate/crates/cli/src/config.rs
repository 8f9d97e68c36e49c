//! TOML run configuration. Frequencies are ordinary frequencies in Hz and
//! are converted to angular rates (×2π) in [`RunConfigFile::protocol`],
//! the only place the conversion happens.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use ccz_core::dynamics::EvolutionMode;
use ccz_core::protocol::{DecoherenceRates, ProtocolConfig};
use serde::{Deserialize, Serialize};

pub const DEFAULT_RABI_OVER_G: f64 = 10.0;

/// A config problem tied to a key.
#[derive(Debug)]
pub struct KeyError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for KeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

impl std::error::Error for KeyError {}

fn key_err(key: &str, message: impl Into<String>) -> anyhow::Error {
    KeyError {
        key: key.to_string(),
        message: message.into(),
    }
    .into()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Idealized,
    Simultaneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g3: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rabi_over_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rabi_hz: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cavity {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decoherence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma3r_inv_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma3p_inv_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_inv_s: Option<f64>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub quality: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_c_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relaxation_target: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl Output {
    fn is_unset(&self) -> bool {
        self.format.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default)]
    pub couplings: Couplings,
    #[serde(default)]
    pub pulse: Pulse,
    #[serde(default)]
    pub cavity: Cavity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoherence: Option<Decoherence>,
    #[serde(default, skip_serializing_if = "Output::is_unset")]
    pub output: Output,
}

/// Lifetimes in seconds after resolving `kappa_inv_s` vs. `Q`/`nu_c_hz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lifetimes {
    pub gamma3r_inv: f64,
    pub gamma3p_inv: f64,
    pub kappa_inv: f64,
    pub relaxation_target: usize,
}

fn positive(key: &str, value: Option<f64>) -> anyhow::Result<f64> {
    match value {
        None => Err(key_err(key, "missing key")),
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => Err(key_err(key, format!("must be a positive number, got {v}"))),
    }
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl RunConfigFile {
    /// The built-in defaults: g/2π = 220 MHz on every qudit, Ω = 10g,
    /// Q = 5·10⁴ at ν_c = 5 GHz and 1 μs level-3 lifetimes.
    pub fn reference() -> Self {
        RunConfigFile {
            mode: ModeName::Idealized,
            couplings: Couplings {
                g1: Some(220e6),
                g2: Some(220e6),
                g3: Some(220e6),
            },
            pulse: Pulse {
                rabi_over_g: Some(DEFAULT_RABI_OVER_G),
                rabi_hz: None,
            },
            cavity: Cavity { n_max: Some(3) },
            decoherence: Some(Decoherence {
                gamma3r_inv_s: Some(1e-6),
                gamma3p_inv_s: Some(1e-6),
                kappa_inv_s: None,
                quality: Some(5e4),
                nu_c_hz: Some(5e9),
                relaxation_target: Some(2),
            }),
            output: Output::default(),
        }
    }

    pub fn parse(text: &str, origin: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| {
            let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            anyhow::anyhow!("{origin}:{line}:{col}: {}", e.message().trim_end())
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config structs always serialize")
    }

    /// Couplings in Hz, in qudit order.
    pub fn couplings_hz(&self) -> anyhow::Result<[f64; 3]> {
        Ok([
            positive("couplings.g1", self.couplings.g1)?,
            positive("couplings.g2", self.couplings.g2)?,
            positive("couplings.g3", self.couplings.g3)?,
        ])
    }

    /// Rabi frequency in Hz. `rabi_over_g` scales the largest coupling.
    pub fn rabi_hz(&self) -> anyhow::Result<f64> {
        let g_max = self.couplings_hz()?.into_iter().fold(0.0, f64::max);
        match (self.pulse.rabi_over_g, self.pulse.rabi_hz) {
            (Some(_), Some(_)) => bail!(key_err("pulse", "set either rabi_over_g or rabi_hz, not both")),
            (None, Some(_)) => positive("pulse.rabi_hz", self.pulse.rabi_hz),
            (ratio, None) => Ok(positive("pulse.rabi_over_g", ratio.or(Some(DEFAULT_RABI_OVER_G)))? * g_max),
        }
    }

    pub fn n_max(&self) -> anyhow::Result<usize> {
        match self.cavity.n_max {
            None => Ok(3),
            Some(n) if n >= 2 => Ok(n),
            Some(n) => Err(key_err("cavity.n_max", format!("must be at least 2, got {n}"))),
        }
    }

    pub fn format(&self) -> Option<Format> {
        self.output.format
    }

    pub fn lifetimes(&self) -> anyhow::Result<Option<Lifetimes>> {
        let Some(d) = &self.decoherence else {
            return Ok(None);
        };
        let kappa_inv = match (d.kappa_inv_s, d.quality, d.nu_c_hz) {
            (Some(_), None, None) => positive("decoherence.kappa_inv_s", d.kappa_inv_s)?,
            (None, q, nu) if q.is_some() || nu.is_some() => {
                let q = positive("decoherence.Q", q)?;
                let nu = positive("decoherence.nu_c_hz", nu)?;
                ccz_core::analysis::cavity_lifetime(q, nu)?
            }
            (None, _, _) => bail!(key_err(
                "decoherence.kappa_inv_s",
                "missing key (or give Q and nu_c_hz)"
            )),
            _ => bail!(key_err("decoherence", "give kappa_inv_s or Q and nu_c_hz, not both")),
        };
        let relaxation_target = match d.relaxation_target {
            None => 2,
            Some(t @ 0..=2) => t,
            Some(t) => bail!(key_err(
                "decoherence.relaxation_target",
                format!("must be 0, 1 or 2, got {t}")
            )),
        };
        Ok(Some(Lifetimes {
            gamma3r_inv: positive("decoherence.gamma3r_inv_s", d.gamma3r_inv_s)?,
            gamma3p_inv: positive("decoherence.gamma3p_inv_s", d.gamma3p_inv_s)?,
            kappa_inv,
            relaxation_target,
        }))
    }

    /// Validate every key and build the simulator configuration.
    pub fn protocol(&self) -> anyhow::Result<ProtocolConfig> {
        let g = self.couplings_hz()?.map(|f| 2.0 * PI * f);
        let omega = 2.0 * PI * self.rabi_hz()?;
        let mode = match self.mode {
            ModeName::Idealized => EvolutionMode::Idealized,
            ModeName::Simultaneous => EvolutionMode::Simultaneous,
        };
        let rates = match self.lifetimes()? {
            None => None,
            Some(l) => Some(
                DecoherenceRates::from_lifetimes(Some(l.gamma3r_inv), Some(l.gamma3p_inv), Some(l.kappa_inv))?
                    .with_relaxation_target(l.relaxation_target)?,
            ),
        };
        let cfg = ProtocolConfig::new(g, omega)?
            .with_n_max(self.n_max()?)?
            .with_mode(mode)
            .map_err(|e| key_err("pulse", e.to_string()))?
            .with_decoherence(rates);
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_round_trips_through_toml() {
        let cfg = RunConfigFile::reference();
        let text = cfg.to_toml();
        assert_eq!(RunConfigFile::parse(&text, "t").unwrap(), cfg);
        let p = cfg.protocol().unwrap();
        assert_eq!(p.couplings(), [2.0 * PI * 220e6; 3]);
        assert_eq!(p.omega(), 10.0 * 2.0 * PI * 220e6);
    }

    #[test]
    fn missing_coupling_names_the_key() {
        let cfg = RunConfigFile::parse("[couplings]\ng1 = 2e8\ng3 = 2e8\n", "t").unwrap();
        let err = cfg.protocol().unwrap_err().to_string();
        assert!(err.starts_with("couplings.g2:"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = RunConfigFile::parse("[couplings]\ng1 = 2e8\ng2 = = 3\n", "cfg.toml")
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("cfg.toml:3:"), "{err}");
        let err = RunConfigFile::parse("mode = \"idealized\"\n[pulse]\nrabi = 3\n", "cfg.toml")
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("cfg.toml:3:1:"), "{err}");
    }

    #[test]
    fn cavity_lifetime_is_exactly_one_of_two_forms() {
        let mut cfg = RunConfigFile::reference();
        cfg.decoherence.as_mut().unwrap().kappa_inv_s = Some(1e-6);
        assert!(cfg.lifetimes().unwrap_err().to_string().starts_with("decoherence:"));
        let d = cfg.decoherence.as_mut().unwrap();
        d.quality = None;
        d.nu_c_hz = None;
        assert_eq!(cfg.lifetimes().unwrap().unwrap().kappa_inv, 1e-6);
        let d = cfg.decoherence.as_mut().unwrap();
        d.kappa_inv_s = None;
        d.quality = Some(5e4);
        let err = cfg.lifetimes().unwrap_err().to_string();
        assert!(err.starts_with("decoherence.nu_c_hz:"), "{err}");
    }

    #[test]
    fn rates_must_be_positive() {
        let mut cfg = RunConfigFile::reference();
        cfg.decoherence.as_mut().unwrap().gamma3p_inv_s = Some(-1.0);
        assert!(cfg
            .protocol()
            .unwrap_err()
            .to_string()
            .starts_with("decoherence.gamma3p_inv_s:"));
        let mut cfg = RunConfigFile::reference();
        cfg.pulse.rabi_hz = Some(1e9);
        assert!(cfg.protocol().unwrap_err().to_string().starts_with("pulse:"));
        cfg.pulse.rabi_over_g = None;
        assert_eq!(cfg.protocol().unwrap().omega(), 2.0 * PI * 1e9);
    }

    #[test]
    fn simultaneous_mode_needs_fast_pulses() {
        let mut cfg = RunConfigFile::reference();
        cfg.mode = ModeName::Simultaneous;
        cfg.pulse.rabi_over_g = Some(0.5);
        assert!(cfg.protocol().unwrap_err().to_string().starts_with("pulse:"));
    }

    fn opt<T: std::fmt::Debug + Clone>(s: impl Strategy<Value = T>) -> impl Strategy<Value = Option<T>> {
        proptest::option::of(s)
    }

    prop_compose! {
        fn any_config()(
            simultaneous in any::<bool>(),
            g in [opt(1e6f64..1e9), opt(1e6f64..1e9), opt(1e6f64..1e9)],
            pulse in (opt(1.0f64..1e4), opt(1e6f64..1e11)),
            n_max in opt(0usize..8),
            life in opt((opt(1e-9f64..1e-3), opt(1e-9f64..1e-3), opt(1e-9f64..1e-3), opt(1.0f64..1e7), opt(1e8f64..1e11), opt(0usize..4))),
            format in opt(prop_oneof![Just(Format::Json), Just(Format::Csv)]),
        ) -> RunConfigFile {
            RunConfigFile {
                mode: if simultaneous { ModeName::Simultaneous } else { ModeName::Idealized },
                couplings: Couplings { g1: g[0], g2: g[1], g3: g[2] },
                pulse: Pulse { rabi_over_g: pulse.0, rabi_hz: pulse.1 },
                cavity: Cavity { n_max },
                decoherence: life.map(|(r, p, k, q, nu, t)| Decoherence {
                    gamma3r_inv_s: r,
                    gamma3p_inv_s: p,
                    kappa_inv_s: k,
                    quality: q,
                    nu_c_hz: nu,
                    relaxation_target: t,
                }),
                output: Output { format },
            }
        }
    }

    proptest! {
        // Any structure, valid or not, survives emit → parse unchanged.
        #[test]
        fn emitted_config_reparses_equal(cfg in any_config()) {
            prop_assert_eq!(RunConfigFile::parse(&cfg.to_toml(), "t").unwrap(), cfg);
        }
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
