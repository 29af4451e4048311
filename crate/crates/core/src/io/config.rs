//! TOML run configuration.
//!
//! ```toml
//! [chain]
//! n_sites = 10
//! atom_energy_ev = 1.0
//! lattice_const_angstrom = 1000.0
//! dipole_e_angstrom = 1.0
//! dipole_angle_deg = 0.0        # or "magic"
//!
//! [layout]
//! occupancy = "1011"
//!
//! [state]
//! amplitudes = [
//!     { occupation = "10", amplitude = [0.7071067811865476, 0.0] },
//!     { occupation = "01", amplitude = [0.7071067811865476, 0.0] },
//! ]
//!
//! [observation]
//! unit = "lattice"              # lattice | angstrom | metre
//! points = [[0.0, 0.0, 100.0]]
//!
//! [time]
//! lifetimes = 5.0
//! n_points = 2000
//! ```

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, LatticeParams};
use crate::emission::{EmissionOptions, ObservationPoint};
use crate::scenario::RateConvention;
use crate::segments::{self, InitialState};
use crate::units;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted key path of the offending entry, empty for file-level errors.
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err(key: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSetting {
    Degrees(f64),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainSection {
    pub n_sites: usize,
    pub atom_energy_ev: f64,
    pub lattice_const_angstrom: f64,
    pub dipole_e_angstrom: f64,
    pub dipole_angle_deg: AngleSetting,
}

impl Default for ChainSection {
    fn default() -> Self {
        Self {
            n_sites: 10,
            atom_energy_ev: 1.0,
            lattice_const_angstrom: 1000.0,
            dipole_e_angstrom: 1.0,
            dipole_angle_deg: AngleSetting::Degrees(0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSection {
    pub occupancy: String,
    #[serde(default = "one")]
    pub linewidth_scale: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub occupation: String,
    /// `[re, im]`.
    pub amplitude: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    Lattice,
    Angstrom,
    Metre,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservationSection {
    pub unit: LengthUnit,
    pub points: Vec<[f64; 3]>,
    pub far_field_ratio: f64,
}

impl Default for ObservationSection {
    fn default() -> Self {
        Self {
            unit: LengthUnit::Lattice,
            points: vec![[0.0, 0.0, 100.0]],
            far_field_ratio: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    /// Window length in single-atom lifetimes `1/Gamma_A`.
    pub lifetimes: f64,
    pub n_points: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            lifetimes: 5.0,
            n_points: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatternSection {
    pub k: usize,
    /// Radius in the observation length unit.
    pub radius: f64,
    pub n_angles: usize,
}

impl Default for PatternSection {
    fn default() -> Self {
        Self {
            k: 1,
            radius: 1000.0,
            n_angles: 181,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSection {
    pub rate_convention: RateConvention,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub format: OutputFormat,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            format: OutputFormat::Csv,
        }
    }
}

/// The configuration file as written, with defaults filled in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub chain: ChainSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSection>,
    pub observation: ObservationSection,
    pub time: TimeSection,
    pub pattern: PatternSection,
    pub scenario: ScenarioSection,
    pub output: OutputSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            let key = if key == "." { String::new() } else { key };
            cfg_err(&key, e.into_inner().message().trim())
        })
    }

    /// Canonical TOML rendering.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }
}

/// A segment layout and the state prepared on it.
#[derive(Clone, Debug, PartialEq)]
pub struct LayoutConfig {
    pub occupancy: Vec<bool>,
    pub linewidth_scale: f64,
    pub state: InitialState,
}

/// Validated configuration in SI units.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: ConfigFile,
    pub chain: ChainSpec,
    pub layout: Option<LayoutConfig>,
    pub observation: Vec<ObservationPoint>,
    pub emission: EmissionOptions,
    pub lifetimes: f64,
    pub n_points: usize,
    pub pattern_k: usize,
    pub pattern_radius: f64,
    pub pattern_angles: usize,
    pub rate_convention: RateConvention,
    pub output: OutputSection,
    pub warnings: Vec<String>,
}

fn resolve_angle(setting: &AngleSetting) -> Result<f64, ConfigError> {
    const KEY: &str = "chain.dipole_angle_deg";
    match setting {
        AngleSetting::Degrees(d) => {
            if !(0.0..=90.0).contains(d) {
                return Err(cfg_err(KEY, format!("must lie in [0, 90] degrees, got {d}")));
            }
            Ok(units::degrees_to_radians(*d))
        }
        AngleSetting::Named(name) if name == "magic" => Ok(units::magic_angle()),
        AngleSetting::Named(name) => Err(cfg_err(
            KEY,
            format!("unknown angle keyword {name:?} (expected \"magic\")"),
        )),
    }
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(cfg_err(key, format!("must be a positive finite number, got {v}")))
    }
}

impl RunConfig {
    pub fn from_file(file: ConfigFile) -> Result<Self, ConfigError> {
        let c = &file.chain;
        if c.n_sites == 0 {
            return Err(cfg_err("chain.n_sites", "must be >= 1"));
        }
        let a = units::angstrom_to_metre(positive("chain.lattice_const_angstrom", c.lattice_const_angstrom)?);
        let energy = units::ev_to_joule(positive("chain.atom_energy_ev", c.atom_energy_ev)?);
        if !(c.dipole_e_angstrom.is_finite() && c.dipole_e_angstrom >= 0.0) {
            return Err(cfg_err("chain.dipole_e_angstrom", "must be >= 0"));
        }
        let mu = units::e_angstrom_to_coulomb_metre(c.dipole_e_angstrom);
        let theta = resolve_angle(&c.dipole_angle_deg)?;
        let params = LatticeParams::new(a, energy, mu, theta).map_err(|e| cfg_err("chain", e))?;
        let chain = ChainSpec::new(c.n_sites, params).map_err(|e| cfg_err("chain", e))?;

        let o = &file.observation;
        let scale = match o.unit {
            LengthUnit::Lattice => a,
            LengthUnit::Angstrom => units::ANGSTROM,
            LengthUnit::Metre => 1.0,
        };
        let ratio = positive("observation.far_field_ratio", o.far_field_ratio)?;
        let observation = o
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                ObservationPoint::new(p[0] * scale, p[1] * scale, p[2] * scale)
                    .map_err(|e| cfg_err(&format!("observation.points[{i}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if observation.is_empty() {
            return Err(cfg_err("observation.points", "at least one point is required"));
        }

        let lifetimes = positive("time.lifetimes", file.time.lifetimes)?;
        if file.time.n_points < 2 {
            return Err(cfg_err("time.n_points", "must be >= 2"));
        }
        if file.pattern.k == 0 || file.pattern.k > c.n_sites {
            return Err(cfg_err("pattern.k", format!("must lie in 1..={}", c.n_sites)));
        }
        let radius = positive("pattern.radius", file.pattern.radius)? * scale;
        if file.pattern.n_angles < 2 {
            return Err(cfg_err("pattern.n_angles", "must be >= 2"));
        }

        let mut warnings = Vec::new();
        let layout = match &file.layout {
            None => {
                if file.state.is_some() {
                    return Err(cfg_err("state", "an initial state requires a [layout] section"));
                }
                None
            }
            Some(l) => {
                let occupancy = segments::parse_occupancy(&l.occupancy).map_err(|e| cfg_err("layout.occupancy", e))?;
                let decomposed = segments::decompose(&occupancy, params).map_err(|e| cfg_err("layout.occupancy", e))?;
                warnings.extend(decomposed.flags.iter().map(|f| f.to_string()));
                let m = decomposed.value.len();
                let linewidth_scale = l.linewidth_scale;
                if !(linewidth_scale.is_finite() && linewidth_scale >= 0.0) {
                    return Err(cfg_err("layout.linewidth_scale", "must be >= 0"));
                }
                let state = match &file.state {
                    None => InitialState::symmetric_single_excitation(m).map_err(|e| cfg_err("state", e))?,
                    Some(s) => {
                        let entries = s
                            .amplitudes
                            .iter()
                            .enumerate()
                            .map(|(i, e)| {
                                let key = format!("state.amplitudes[{i}].occupation");
                                let occ = segments::parse_occupancy(&e.occupation).map_err(|err| cfg_err(&key, err))?;
                                if occ.len() != m {
                                    return Err(cfg_err(
                                        &key,
                                        format!("expected {m} segment occupations, got {}", occ.len()),
                                    ));
                                }
                                Ok((occ, Complex64::new(e.amplitude[0], e.amplitude[1])))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        let st = InitialState::new(m, entries).map_err(|e| cfg_err("state.amplitudes", e))?;
                        warnings.extend(st.flags.iter().map(|f| f.to_string()));
                        st.value
                    }
                };
                Some(LayoutConfig {
                    occupancy,
                    linewidth_scale,
                    state,
                })
            }
        };

        Ok(Self {
            chain,
            layout,
            observation,
            emission: EmissionOptions { far_field_ratio: ratio },
            lifetimes,
            n_points: file.time.n_points,
            pattern_k: file.pattern.k,
            pattern_radius: radius,
            pattern_angles: file.pattern.n_angles,
            rate_convention: file.scenario.rate_convention,
            output: file.output.clone(),
            warnings,
            source: file,
        })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_file(ConfigFile::parse(text)?)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| cfg_err("", format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_parameters() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.chain.n_sites, 10);
        assert_eq!(cfg.chain.params, LatticeParams::reference());
        assert!(cfg.layout.is_none());
        assert_eq!(cfg.n_points, 2000);
        assert_eq!(cfg.observation[0].position[2], 100.0 * 1000.0 * units::ANGSTROM);
    }

    #[test]
    fn magic_keyword() {
        let cfg = parse_config("[chain]\ndipole_angle_deg = \"magic\"\n").unwrap();
        assert_eq!(cfg.chain.params.dipole_angle, units::magic_angle());
        let err = parse_config("[chain]\ndipole_angle_deg = \"weird\"\n").unwrap_err();
        assert_eq!(err.key, "chain.dipole_angle_deg");
    }

    #[test]
    fn key_path_diagnostics() {
        let e = parse_config("[chain]\nn_sitez = 3\n").unwrap_err();
        assert_eq!(e.key, "chain.n_sitez");
        assert!(e.message.contains("n_sitez"), "{e}");
        let e = parse_config("[chain]\nn_sites = \"three\"\n").unwrap_err();
        assert_eq!(e.key, "chain.n_sites");
        let e = parse_config("[chain]\nn_sites = 0\n").unwrap_err();
        assert_eq!(e.key, "chain.n_sites");
        let e = parse_config("[chain]\nlattice_const_angstrom = -1\n").unwrap_err();
        assert_eq!(e.key, "chain.lattice_const_angstrom");
        let e = parse_config("[chain]\ndipole_angle_deg = 120\n").unwrap_err();
        assert_eq!(e.key, "chain.dipole_angle_deg");
        let e = parse_config("[bogus]\n").unwrap_err();
        assert!(e.message.contains("bogus"));
        let e = parse_config("[chain\n").unwrap_err();
        assert!(!e.message.is_empty());
    }

    #[test]
    fn empty_occupancy_rejected() {
        let e = parse_config("[layout]\noccupancy = \"\"\n").unwrap_err();
        assert_eq!(e.key, "layout.occupancy");
        let e = parse_config("[layout]\noccupancy = \"000\"\n").unwrap_err();
        assert_eq!(e.key, "layout.occupancy");
    }

    #[test]
    fn state_parsing_and_renormalization() {
        let text = r#"
[layout]
occupancy = "1011"
[state]
amplitudes = [
  { occupation = "10", amplitude = [1.0, 0.0] },
  { occupation = "01", amplitude = [1.0, 0.0] },
]
"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.warnings.len(), 1);
        let st = &cfg.layout.unwrap().state;
        assert!((st.coherence(0, 1).re - 0.5).abs() < 1e-15);
        let bad = text.replace("\"10\"", "\"101\"");
        assert_eq!(parse_config(&bad).unwrap_err().key, "state.amplitudes[0].occupation");
    }

    #[test]
    fn state_without_layout_rejected() {
        let e = parse_config("[state]\namplitudes = []\n").unwrap_err();
        assert_eq!(e.key, "state");
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"
[chain]
n_sites = 4
dipole_angle_deg = "magic"
[layout]
occupancy = "1101"
[observation]
unit = "metre"
points = [[0.0, 0.0, 1e-3], [1e-4, 0.0, 1e-3]]
[output]
format = "json"
"#;
        let file = ConfigFile::parse(text).unwrap();
        let again = ConfigFile::parse(&file.to_toml()).unwrap();
        assert_eq!(file, again);
        assert_eq!(again.to_toml(), file.to_toml());
    }
}
