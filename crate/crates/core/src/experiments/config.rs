use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{RelspinError, Result};
use crate::kinematics::AXIS_TOLERANCE;
use crate::quadrature::QuadratureSpec;
use crate::wavepacket::{ring_packet_with, WavePacket, NONRELATIVISTIC_LIMIT};

/// Default target for `|μ⃗(∞)|` in the depolarization experiment.
pub const DEFAULT_DEPOLARIZATION_TARGET: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sweep,
    Depolarize,
    BoundCheck,
    Certify,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sweep => "sweep",
            Self::Depolarize => "depolarize",
            Self::BoundCheck => "bound-check",
            Self::Certify => "certify",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid entry for the rapidity: finite `β ≥ 0` or the ultrarelativistic
/// observer, written `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rapidity {
    Finite(f64),
    Infinite,
}

impl Rapidity {
    fn order_key(&self) -> f64 {
        match self {
            Self::Finite(b) => *b,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Rapidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(b) => write!(f, "{b}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Rapidity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "Infinity" | "infinity" => Ok(Self::Infinite),
            other => other.parse::<f64>().map(Self::Finite).map_err(|e| format!("`{other}`: {e}")),
        }
    }
}

impl Serialize for Rapidity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(b) => s.serialize_f64(*b),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Rapidity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(b) => Ok(Self::Finite(b)),
            Raw::Text(s) if s == "inf" => Ok(Self::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{s}\""))),
        }
    }
}

fn default_spin() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

/// Packet family and parameters, in units where the mass is explicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum PacketConfig {
    Gaussian {
        mass: f64,
        sigma_p: f64,
        #[serde(default = "default_spin")]
        spin_dir: [f64; 3],
        /// Mean momentum; the origin when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<[f64; 3]>,
        /// Per-axis widths overriding `sigma_p`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        widths: Option<[f64; 3]>,
    },
    Ring {
        mass: f64,
        radius: f64,
        radial_width: f64,
        longitudinal_width: f64,
    },
}

impl PacketConfig {
    pub fn mass(&self) -> f64 {
        match self {
            Self::Gaussian { mass, .. } | Self::Ring { mass, .. } => *mass,
        }
    }

    pub fn build(&self, spec: &QuadratureSpec) -> Result<WavePacket> {
        match self {
            Self::Gaussian { mass, sigma_p, spin_dir, center, widths } => WavePacket::gaussian(
                *mass,
                center.map(Vector3::from).unwrap_or_else(Vector3::zeros),
                widths.map(Vector3::from).unwrap_or_else(|| Vector3::repeat(*sigma_p)),
                Vector3::from(*spin_dir),
                spec,
            ),
            Self::Ring { mass, radius, radial_width, longitudinal_width } => {
                ring_packet_with(*mass, *radius, *radial_width, *longitudinal_width, spec)
            }
        }
    }
}

/// Grid of ring packets for the depolarization experiment, in units of the
/// mass (`radius = r·m`) and of the radius (`δ⊥ = δ₃ = w·radius`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepolarizeGrid {
    pub radii_over_mass: Vec<f64>,
    pub relative_widths: Vec<f64>,
    #[serde(default = "default_target")]
    pub target: f64,
}

fn default_target() -> f64 {
    DEFAULT_DEPOLARIZATION_TARGET
}

fn default_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

/// A single JSON experiment description. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub packet: PacketConfig,
    #[serde(default = "default_axis")]
    pub boost_axis: [f64; 3],
    #[serde(default)]
    pub rapidities: Vec<Rapidity>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depolarize: Option<DepolarizeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn config_error(key: &str, reason: impl Into<String>) -> RelspinError {
    RelspinError::Config { key: key.to_string(), reason: reason.into() }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let key = ["unknown field `", "missing field `", "unknown variant `"]
                .iter()
                .find_map(|prefix| message.strip_prefix(prefix)?.split('`').next())
                .unwrap_or("<document>");
            config_error(key, message.clone())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| RelspinError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn axis(&self) -> Vector3<f64> {
        Vector3::from(self.boost_axis)
    }

    pub fn axis_is_z(&self) -> bool {
        (self.axis() - Vector3::z()).norm() <= AXIS_TOLERANCE
    }

    /// Fixes the experiment kind (from the CLI subcommand) and checks every
    /// key against it.
    pub fn resolve(mut self, kind: ExperimentKind) -> Result<Self> {
        match self.experiment {
            Some(declared) if declared != kind => {
                return Err(config_error(
                    "experiment",
                    format!("config declares `{declared}` but `{kind}` was requested"),
                ))
            }
            _ => self.experiment = Some(kind),
        }
        self.validate()?;
        Ok(self)
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.experiment.ok_or_else(|| config_error("experiment", "missing"))
    }

    pub fn validate(&self) -> Result<()> {
        let kind = self.kind()?;
        self.quadrature.validate().map_err(|e| config_error("quadrature", e.to_string()))?;
        let axis_norm = self.axis().norm();
        if (axis_norm - 1.0).abs() > AXIS_TOLERANCE {
            return Err(config_error("boost_axis", format!("must be a unit vector, |n| = {axis_norm}")));
        }
        self.validate_packet()?;
        self.validate_rapidities(kind)?;
        match kind {
            ExperimentKind::Sweep => {
                if self.rapidities.is_empty() {
                    return Err(config_error("rapidities", "sweep needs at least one rapidity"));
                }
            }
            ExperimentKind::Certify => {
                if self.rapidities.is_empty() {
                    return Err(config_error("rapidities", "certify needs at least one rapidity"));
                }
                if self.rapidities.contains(&Rapidity::Infinite) {
                    return Err(config_error("rapidities", "certify works on finite rapidities only"));
                }
                if !self.is_spin_up() {
                    return Err(config_error("packet.spin_dir", "certify needs a spin-up packet (spin_dir = [0, 0, 1])"));
                }
            }
            ExperimentKind::Depolarize => {
                if !matches!(self.packet, PacketConfig::Ring { .. }) {
                    return Err(config_error("packet.family", "depolarize needs a ring packet"));
                }
                if !self.axis_is_z() {
                    return Err(config_error("boost_axis", "depolarize boosts along [0, 0, 1]"));
                }
                if let Some(grid) = &self.depolarize {
                    if grid.radii_over_mass.is_empty() || grid.relative_widths.is_empty() {
                        return Err(config_error("depolarize", "grid axes must be non-empty"));
                    }
                    if grid.radii_over_mass.iter().chain(&grid.relative_widths).any(|v| !(*v > 0.0 && v.is_finite())) {
                        return Err(config_error("depolarize", "grid values must be positive"));
                    }
                    if !(grid.target > 0.0 && grid.target <= 1.0) {
                        return Err(config_error("depolarize.target", "must lie in (0, 1]"));
                    }
                }
            }
            ExperimentKind::BoundCheck => match &self.packet {
                PacketConfig::Gaussian { mass, sigma_p, spin_dir, center, widths } => {
                    if center.is_some() || widths.is_some() {
                        return Err(config_error("packet", "bound-check needs an isotropic Gaussian at rest"));
                    }
                    if *spin_dir != [0.0, 0.0, 1.0] {
                        return Err(config_error("packet.spin_dir", "bound-check needs spin_dir = [0, 0, 1]"));
                    }
                    if sigma_p / mass > NONRELATIVISTIC_LIMIT {
                        return Err(config_error(
                            "packet.sigma_p",
                            format!("sigma_p/m = {} exceeds the nonrelativistic limit {NONRELATIVISTIC_LIMIT}", sigma_p / mass),
                        ));
                    }
                }
                PacketConfig::Ring { .. } => return Err(config_error("packet.family", "bound-check needs a gaussian packet")),
            },
        }
        Ok(())
    }

    fn validate_packet(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(key, format!("must be positive, got {v}")))
            }
        };
        match &self.packet {
            PacketConfig::Gaussian { mass, sigma_p, spin_dir, widths, .. } => {
                positive("packet.mass", *mass)?;
                positive("packet.sigma_p", *sigma_p)?;
                if let Some(w) = widths {
                    for v in w {
                        positive("packet.widths", *v)?;
                    }
                }
                let n = Vector3::from(*spin_dir).norm();
                if (n - 1.0).abs() > AXIS_TOLERANCE {
                    return Err(config_error("packet.spin_dir", format!("must be a unit vector, |s| = {n}")));
                }
            }
            PacketConfig::Ring { mass, radius, radial_width, longitudinal_width } => {
                positive("packet.mass", *mass)?;
                positive("packet.radius", *radius)?;
                positive("packet.radial_width", *radial_width)?;
                positive("packet.longitudinal_width", *longitudinal_width)?;
            }
        }
        Ok(())
    }

    fn validate_rapidities(&self, kind: ExperimentKind) -> Result<()> {
        for r in &self.rapidities {
            if let Rapidity::Finite(b) = r {
                if !(b.is_finite() && *b >= 0.0) {
                    return Err(config_error("rapidities", format!("rapidity {b} must be finite and non-negative")));
                }
            }
        }
        if self.rapidities.windows(2).any(|w| w[0].order_key() >= w[1].order_key()) {
            return Err(config_error("rapidities", "grid must be strictly increasing"));
        }
        if kind == ExperimentKind::Sweep && self.rapidities.contains(&Rapidity::Infinite) && !self.supports_limit() {
            return Err(config_error(
                "rapidities",
                "\"inf\" needs an axially symmetric spin-up packet and boost_axis [0, 0, 1]",
            ));
        }
        Ok(())
    }

    fn is_spin_up(&self) -> bool {
        match &self.packet {
            PacketConfig::Gaussian { spin_dir, .. } => *spin_dir == [0.0, 0.0, 1.0],
            PacketConfig::Ring { .. } => true,
        }
    }

    fn is_axial(&self) -> bool {
        match &self.packet {
            PacketConfig::Gaussian { center, widths, .. } => {
                center.is_none_or(|c| c[0] == 0.0 && c[1] == 0.0) && widths.is_none_or(|w| w[0] == w[1])
            }
            PacketConfig::Ring { .. } => true,
        }
    }

    /// Whether the ultrarelativistic limit row applies.
    pub fn supports_limit(&self) -> bool {
        self.is_axial() && self.is_spin_up() && self.axis_is_z()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = r#"{
        "packet": {"family": "gaussian", "mass": 1.0, "sigma_p": 0.1},
        "boost_axis": [1, 0, 0],
        "rapidities": [0, 0.5, 1]
    }"#;

    #[test]
    fn parses_and_resolves() {
        let cfg = ExperimentConfig::from_json(SWEEP).unwrap().resolve(ExperimentKind::Sweep).unwrap();
        assert_eq!(cfg.experiment, Some(ExperimentKind::Sweep));
        assert_eq!(cfg.quadrature, QuadratureSpec::default());
        assert_eq!(cfg.rapidities, vec![Rapidity::Finite(0.0), Rapidity::Finite(0.5), Rapidity::Finite(1.0)]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for text in [
            r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidity": [0]}"#,
            r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1, "sigma": 2}, "rapidities": [0]}"#,
            r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidities": [0], "quadrature": {"nodes": 3}}"#,
            r#"{"packet": {"family": "blob", "mass": 1}, "rapidities": [0]}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(RelspinError::Config { .. })), "{text}");
        }
        let err = ExperimentConfig::from_json(r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidites": []}"#).unwrap_err();
        assert!(matches!(err, RelspinError::Config { ref key, .. } if key == "rapidites"), "{err}");
    }

    #[test]
    fn rapidity_grid_rules() {
        let bad = [
            r#"[0, 1, 0.5]"#,
            r#"[0, 0]"#,
            r#"["inf", 1]"#,
            r#"[-1]"#,
            r#"["fast"]"#,
        ];
        for grid in bad {
            let text = SWEEP.replace("[0, 0.5, 1]", grid);
            let parsed = ExperimentConfig::from_json(&text).and_then(|c| c.resolve(ExperimentKind::Sweep));
            assert!(parsed.is_err(), "{grid}");
        }
        // inf needs an e3 boost
        let text = SWEEP.replace("[0, 0.5, 1]", r#"[0, "inf"]"#);
        let err = ExperimentConfig::from_json(&text).unwrap().resolve(ExperimentKind::Sweep).unwrap_err();
        assert!(matches!(err, RelspinError::Config { ref key, .. } if key == "rapidities"));
        let text = text.replace("[1, 0, 0]", "[0, 0, 1]");
        assert!(ExperimentConfig::from_json(&text).unwrap().resolve(ExperimentKind::Sweep).is_ok());
    }

    #[test]
    fn experiment_kind_mismatch() {
        let text = SWEEP.replacen('{', r#"{"experiment": "certify","#, 1);
        let err = ExperimentConfig::from_json(&text).unwrap().resolve(ExperimentKind::Sweep).unwrap_err();
        assert!(matches!(err, RelspinError::Config { ref key, .. } if key == "experiment"));
    }

    #[test]
    fn bound_check_validity() {
        let text = SWEEP.replace("0.1}", "0.2}");
        let err = ExperimentConfig::from_json(&text).unwrap().resolve(ExperimentKind::BoundCheck).unwrap_err();
        assert!(matches!(err, RelspinError::Config { ref key, .. } if key == "packet.sigma_p"));
        assert!(ExperimentConfig::from_json(SWEEP).unwrap().resolve(ExperimentKind::BoundCheck).is_ok());
    }

    #[test]
    fn rapidity_text_forms() {
        assert_eq!("inf".parse::<Rapidity>().unwrap(), Rapidity::Infinite);
        assert_eq!("0.25".parse::<Rapidity>().unwrap(), Rapidity::Finite(0.25));
        assert_eq!(Rapidity::Infinite.to_string(), "inf");
        assert_eq!(serde_json::to_string(&Rapidity::Infinite).unwrap(), "\"inf\"");
    }
}
