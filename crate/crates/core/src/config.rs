//! Run configuration files.
//!
//! A configuration is one JSON object with named blocks. Unknown keys are
//! rejected everywhere. The rotation angle is given in units of π.
//!
//! ```json
//! {
//!   "material": { "preset": "gaas-calibrated" },
//!   "geometry": { "l_e": 4.0, "l_h": 3.2, "l_z": 0.8 },
//!   "pulse": { "alpha_pi": 0.5, "envelope": "analytic" },
//!   "bath": { "temperatures": [0.0, 10.0], "reservoir": "dot" },
//!   "markovian": { "tau_r": 630.0 },
//!   "sweep": { "tau_min": 0.1, "tau_max": 100.0, "points": 200, "log": true }
//! }
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::quantities::{
    convert_material, DotGeometry, EnvelopePath, MarkovianChannel, MaterialParams, PulseFamily,
    SiMaterial,
};
use crate::reservoir::{r0_coefficient, ReservoirSpectrum};
use crate::tradeoff::DressingModel;

/// R₀ (ps²) of the calibrated GaAs preset.
pub const CALIBRATED_R0: f64 = 0.00756;
/// τ_r (ps) of the calibrated GaAs preset.
pub const CALIBRATED_TAU_R: f64 = 630.0;

const DEFAULT_BRACKET: (f64, f64) = (0.01, 100.0);

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Malformed JSON, wrong types or unknown keys.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-formed value that is out of range or inconsistent.
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse {
                line,
                column,
                message,
            } => write!(f, "config line {line}, column {column}: {message}"),
            Self::Invalid { key, message } => write!(f, "config key `{key}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// GaAs with R₀ and τ_r calibrated against the closed-form optimum
    /// τ_opt = α^{2/3}·1.47 ps, δ_min = α^{2/3}·0.0035.
    #[serde(rename = "gaas-calibrated")]
    GaasCalibrated,
    /// GaAs with R₀ computed from the tabulated constants.
    #[serde(rename = "gaas")]
    Gaas,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// kg/m³
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// m/s
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// eV
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_e: Option<f64>,
    /// eV
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub l_e: f64,
    pub l_h: f64,
    pub l_z: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    #[default]
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseBlock {
    /// Rotation angle in units of π.
    pub alpha_pi: f64,
    #[serde(default)]
    pub envelope: EnvelopeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReservoirKind {
    Powerlaw,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathBlock {
    /// K
    pub temperatures: Vec<f64>,
    pub reservoir: ReservoirKind,
    /// Overrides R₀ (ps²).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    /// "integral" (default) or "leading-order" (power law at T = 0 only).
    #[serde(default, skip_serializing_if = "is_default")]
    pub dressing: DressingModel,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovianBlock {
    /// ps
    pub tau_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumBlock {
    /// Gate duration for S(ω), ps.
    #[serde(default = "SpectrumBlock::default_tau_g")]
    pub tau_g: f64,
    /// Grid half-width, rad/ps.
    #[serde(default = "SpectrumBlock::default_omega_max")]
    pub omega_max: f64,
    #[serde(default = "SpectrumBlock::default_points")]
    pub points: usize,
    /// Temperature for R(ω); defaults to the first bath temperature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

impl SpectrumBlock {
    fn default_tau_g() -> f64 {
        1.0
    }
    fn default_omega_max() -> f64 {
        10.0
    }
    fn default_points() -> usize {
        401
    }
}

impl Default for SpectrumBlock {
    fn default() -> Self {
        Self {
            tau_g: Self::default_tau_g(),
            omega_max: Self::default_omega_max(),
            points: Self::default_points(),
            temperature: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    /// Closed form for a power law at T = 0, numeric otherwise.
    #[default]
    Auto,
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeBlock {
    #[serde(default)]
    pub method: MethodKind,
    /// Search bracket, ps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryBlock>,
    pub pulse: PulseBlock,
    pub bath: BathBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markovian: Option<MarkovianBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Physics objects assembled from a validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub dressing: DressingModel,
    pub spectrum: ReservoirSpectrum,
    pub family: PulseFamily,
    pub channel: MarkovianChannel,
    pub temperatures: Vec<f64>,
}

fn require_positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::invalid(key, format!("must be > 0, got {v}")))
    }
}

fn require_non_negative(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::invalid(key, format!("must be >= 0, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every range and cross-block constraint.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.model()?;
        if let Some(s) = &self.sweep {
            self.sweep_taus_for(s)?;
        }
        if let Some(s) = &self.spectrum {
            require_positive("spectrum.tau_g", s.tau_g)?;
            require_positive("spectrum.omega_max", s.omega_max)?;
            if s.points < 2 {
                return Err(ConfigError::invalid("spectrum.points", "must be >= 2"));
            }
            if let Some(t) = s.temperature {
                require_non_negative("spectrum.temperature", t)?;
            }
        }
        if let Some(o) = &self.optimize {
            let (lo, hi) = self.bracket_for(o)?;
            if lo >= hi {
                return Err(ConfigError::invalid(
                    "optimize.tau_max",
                    "must exceed optimize.tau_min",
                ));
            }
        }
        Ok(())
    }

    fn material_and_r0(&self) -> Result<(MaterialParams, f64), ConfigError> {
        let m = &self.material;
        let explicit = [m.rho, m.c, m.sigma_e, m.sigma_h];
        let (material, r0) = match m.preset {
            Some(preset) => {
                if explicit.iter().any(Option::is_some) {
                    return Err(ConfigError::invalid(
                        "material",
                        "`preset` cannot be combined with explicit constants",
                    ));
                }
                let gaas = MaterialParams::gaas();
                let r0 = match preset {
                    Preset::GaasCalibrated => CALIBRATED_R0,
                    Preset::Gaas => r0_coefficient(&gaas),
                };
                (gaas, r0)
            }
            None => {
                let get = |key: &str, v: Option<f64>| {
                    v.ok_or_else(|| ConfigError::invalid(key, "required when no preset is given"))
                };
                let si = SiMaterial {
                    rho: require_positive("material.rho", get("material.rho", m.rho)?)?,
                    c: require_positive("material.c", get("material.c", m.c)?)?,
                    sigma_e: get("material.sigma_e", m.sigma_e)?,
                    sigma_h: get("material.sigma_h", m.sigma_h)?,
                };
                let material = convert_material(&si)
                    .map_err(|e| ConfigError::invalid("material", e.to_string()))?;
                (material, r0_coefficient(&material))
            }
        };
        let r0 = match self.bath.r0 {
            Some(v) => require_non_negative("bath.r0", v)?,
            None => r0,
        };
        Ok((material, r0))
    }

    /// Builds the reservoir, pulse family and Markovian channel.
    pub fn model(&self) -> Result<Model, ConfigError> {
        let (material, r0) = self.material_and_r0()?;
        let spectrum = match self.bath.reservoir {
            ReservoirKind::Powerlaw => ReservoirSpectrum::PowerLaw { r0 },
            ReservoirKind::Dot => {
                let g = self.geometry.as_ref().ok_or_else(|| {
                    ConfigError::invalid("geometry", "required for reservoir \"dot\"")
                })?;
                let geometry = DotGeometry::new(
                    require_positive("geometry.l_e", g.l_e)?,
                    require_positive("geometry.l_h", g.l_h)?,
                    require_positive("geometry.l_z", g.l_z)?,
                )
                .map_err(|e| ConfigError::invalid("geometry", e.to_string()))?;
                if material.sigma_e == material.sigma_h {
                    return Err(ConfigError::invalid(
                        "material",
                        "sigma_e = sigma_h leaves the dot reservoir uncoupled",
                    ));
                }
                ReservoirSpectrum::quantum_dot(material, geometry)
                    .with_r0(r0)
                    .map_err(|e| ConfigError::invalid("bath.r0", e.to_string()))?
            }
        };

        let alpha = require_non_negative("pulse.alpha_pi", self.pulse.alpha_pi)? * PI;
        let envelope = match self.pulse.envelope {
            EnvelopeKind::Analytic => EnvelopePath::GaussianAnalytic,
            EnvelopeKind::Numeric => EnvelopePath::GaussianNumeric,
        };
        let family = PulseFamily::new(alpha, envelope)
            .map_err(|e| ConfigError::invalid("pulse.alpha_pi", e.to_string()))?;

        let tau_r = match (&self.markovian, self.material.preset) {
            (Some(m), _) => require_positive("markovian.tau_r", m.tau_r)?,
            (None, Some(Preset::GaasCalibrated)) => CALIBRATED_TAU_R,
            (None, _) => {
                return Err(ConfigError::invalid(
                    "markovian.tau_r",
                    "required unless the gaas-calibrated preset is used",
                ))
            }
        };
        let channel = MarkovianChannel::from_tau_r(tau_r)
            .map_err(|e| ConfigError::invalid("markovian.tau_r", e.to_string()))?;

        if self.bath.temperatures.is_empty() {
            return Err(ConfigError::invalid(
                "bath.temperatures",
                "must not be empty",
            ));
        }
        for &t in &self.bath.temperatures {
            require_non_negative("bath.temperatures", t)?;
        }

        if self.bath.dressing == DressingModel::LeadingOrder
            && (self.bath.reservoir != ReservoirKind::Powerlaw
                || self.bath.temperatures.iter().any(|&t| t != 0.0))
        {
            return Err(ConfigError::invalid(
                "bath.dressing",
                "\"leading-order\" needs reservoir \"powerlaw\" and temperatures [0]",
            ));
        }

        Ok(Model {
            dressing: self.bath.dressing,
            spectrum,
            family,
            channel,
            temperatures: self.bath.temperatures.clone(),
        })
    }

    fn sweep_taus_for(&self, s: &SweepBlock) -> Result<Vec<f64>, ConfigError> {
        require_positive("sweep.tau_min", s.tau_min)?;
        require_positive("sweep.tau_max", s.tau_max)?;
        if s.tau_min >= s.tau_max {
            return Err(ConfigError::invalid(
                "sweep.tau_max",
                "must exceed sweep.tau_min",
            ));
        }
        if s.points < 2 {
            return Err(ConfigError::invalid("sweep.points", "must be >= 2"));
        }
        let n = s.points;
        let last = (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                if i == 0 {
                    s.tau_min
                } else if i == n - 1 {
                    s.tau_max
                } else if s.log {
                    let (a, b) = (s.tau_min.ln(), s.tau_max.ln());
                    (a + (b - a) * i as f64 / last).exp()
                } else {
                    s.tau_min + (s.tau_max - s.tau_min) * i as f64 / last
                }
            })
            .collect())
    }

    /// Gate durations of the sweep block, in order.
    pub fn sweep_taus(&self) -> Result<Vec<f64>, ConfigError> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| ConfigError::invalid("sweep", "block required for `sweep`"))?;
        self.sweep_taus_for(s)
    }

    fn bracket_for(&self, o: &OptimizeBlock) -> Result<(f64, f64), ConfigError> {
        let (dlo, dhi) = self
            .sweep
            .as_ref()
            .map(|s| (s.tau_min, s.tau_max))
            .unwrap_or(DEFAULT_BRACKET);
        let lo = require_positive("optimize.tau_min", o.tau_min.unwrap_or(dlo))?;
        let hi = require_positive("optimize.tau_max", o.tau_max.unwrap_or(dhi))?;
        Ok((lo, hi))
    }

    /// Search bracket for the numeric optimizer: the optimize block, else the
    /// sweep range, else 0.01–100 ps.
    pub fn bracket(&self) -> Result<(f64, f64), ConfigError> {
        self.bracket_for(&self.optimize.clone().unwrap_or_default())
    }

    pub fn method(&self) -> MethodKind {
        self.optimize.as_ref().map(|o| o.method).unwrap_or_default()
    }

    pub fn spectrum_block(&self) -> SpectrumBlock {
        self.spectrum.clone().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOT4: &str = r#"{
        "material": { "preset": "gaas-calibrated" },
        "geometry": { "l_e": 4.0, "l_h": 3.2, "l_z": 0.8 },
        "pulse": { "alpha_pi": 0.5, "envelope": "analytic" },
        "bath": { "temperatures": [0.0, 10.0], "reservoir": "dot" },
        "markovian": { "tau_r": 630.0 },
        "sweep": { "tau_min": 0.1, "tau_max": 100.0, "points": 200, "log": true },
        "output": "fig1.csv"
    }"#;

    #[test]
    fn parses_and_builds_model() {
        let cfg = RunConfig::from_json(DOT4).unwrap();
        let m = cfg.model().unwrap();
        assert_eq!(m.temperatures, vec![0.0, 10.0]);
        assert!((m.family.alpha - PI / 2.0).abs() < 1e-15);
        assert_eq!(m.spectrum.r0(), CALIBRATED_R0);
        assert!(matches!(m.spectrum, ReservoirSpectrum::QuantumDot(_)));
        let taus = cfg.sweep_taus().unwrap();
        assert_eq!(taus.len(), 200);
        assert_eq!(taus[0], 0.1);
        assert_eq!(taus[199], 100.0);
    }

    #[test]
    fn round_trip_is_identity() {
        let cfg = RunConfig::from_json(DOT4).unwrap();
        let again = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);

        let minimal = r#"{"material":{"rho":5370,"c":5110,"sigma_e":-14.6,"sigma_h":-4.8},
            "pulse":{"alpha_pi":1},"bath":{"temperatures":[4],"reservoir":"powerlaw","r0":0.01},
            "markovian":{"tau_r":100}}"#;
        let cfg = RunConfig::from_json(minimal).unwrap();
        assert_eq!(cfg, RunConfig::from_json(&cfg.to_json()).unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let bad = DOT4.replace("\"points\": 200", "\"points\": 200, \"step\": 3");
        match RunConfig::from_json(&bad) {
            Err(ConfigError::Parse { line, message, .. }) => {
                assert_eq!(line, 7);
                assert!(message.contains("step"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn range_errors_name_the_key() {
        let cases = [
            (
                DOT4.replace("\"tau_min\": 0.1", "\"tau_min\": 200.0"),
                "sweep.tau_max",
            ),
            (DOT4.replace("[0.0, 10.0]", "[]"), "bath.temperatures"),
            (DOT4.replace("[0.0, 10.0]", "[-1.0]"), "bath.temperatures"),
            (DOT4.replace("\"l_z\": 0.8", "\"l_z\": 0.0"), "geometry.l_z"),
            (
                DOT4.replace("\"tau_r\": 630.0", "\"tau_r\": -1.0"),
                "markovian.tau_r",
            ),
            (
                DOT4.replace("\"alpha_pi\": 0.5", "\"alpha_pi\": -0.5"),
                "pulse.alpha_pi",
            ),
        ];
        for (text, key) in cases {
            match RunConfig::from_json(&text) {
                Err(ConfigError::Invalid { key: k, .. }) => assert_eq!(k, key),
                other => panic!("expected invalid {key}, got {other:?}"),
            }
        }
    }

    #[test]
    fn preset_supplies_tau_r_but_explicit_material_does_not() {
        let no_markov = DOT4.replace("\"markovian\": { \"tau_r\": 630.0 },", "");
        let cfg = RunConfig::from_json(&no_markov).unwrap();
        assert_eq!(cfg.model().unwrap().channel.tau_r(), CALIBRATED_TAU_R);

        let explicit = no_markov.replace(
            "{ \"preset\": \"gaas-calibrated\" }",
            "{ \"rho\": 5370, \"c\": 5110, \"sigma_e\": -14.6, \"sigma_h\": -4.8 }",
        );
        assert!(matches!(
            RunConfig::from_json(&explicit),
            Err(ConfigError::Invalid { key, .. }) if key == "markovian.tau_r"
        ));
    }

    #[test]
    fn dot_reservoir_needs_geometry() {
        let text = DOT4.replace(
            "\"geometry\": { \"l_e\": 4.0, \"l_h\": 3.2, \"l_z\": 0.8 },",
            "",
        );
        assert!(matches!(
            RunConfig::from_json(&text),
            Err(ConfigError::Invalid { key, .. }) if key == "geometry"
        ));
    }

    #[test]
    fn leading_order_dressing_is_restricted() {
        let text = DOT4.replace(
            "\"reservoir\": \"dot\"",
            "\"reservoir\": \"dot\", \"dressing\": \"leading-order\"",
        );
        assert!(matches!(
            RunConfig::from_json(&text),
            Err(ConfigError::Invalid { key, .. }) if key == "bath.dressing"
        ));
        let ok = text
            .replace("\"dot\"", "\"powerlaw\"")
            .replace("[0.0, 10.0]", "[0.0]");
        let cfg = RunConfig::from_json(&ok).unwrap();
        assert_eq!(cfg.model().unwrap().dressing, DressingModel::LeadingOrder);
        assert_eq!(cfg, RunConfig::from_json(&cfg.to_json()).unwrap());
    }

    #[test]
    fn linear_sweep_spacing() {
        let text = DOT4
            .replace("\"log\": true", "\"log\": false")
            .replace("\"points\": 200", "\"points\": 5")
            .replace("\"tau_max\": 100.0", "\"tau_max\": 0.5");
        let taus = RunConfig::from_json(&text).unwrap().sweep_taus().unwrap();
        assert_eq!(taus, vec![0.1, 0.2, 0.30000000000000004, 0.4, 0.5]);
    }
}
