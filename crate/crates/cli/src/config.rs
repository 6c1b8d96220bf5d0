//! Job configuration: the JSON schema, its validation and the resolved job.

use std::collections::BTreeMap;
use std::fmt;

use coadjoint::json::{group_from_json, path_from_json};
use coadjoint::loops;
use coadjoint::matgroup::{AlgebraElement, PiecewisePath};
use coadjoint::orbit::OrbitPoint;
use coadjoint::rootdata::{
    build_root_system, parse_rational, RealFormName, RealFormSpec, RootSystem, RootType, Weight,
};
use coadjoint::sample::Sampler;
use coadjoint::transport::{Cap, Lift, LoopSpec, Tolerances, DEFAULT_STEPS, MIN_STEPS};
use coadjoint::verify::check_ids;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Largest accepted config file.
pub const MAX_CONFIG_BYTES: usize = 1 << 20;

pub const MAX_STEPS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Roots,
    QInvariant,
    Kappa,
    Action,
    Charinf,
    Pi1Bound,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Roots => "roots",
            Command::QInvariant => "q-invariant",
            Command::Kappa => "kappa",
            Command::Action => "action",
            Command::Charinf => "charinf",
            Command::Pi1Bound => "pi1-bound",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub kind: RootType,
    pub rank: usize,
}

/// A weight coordinate: an integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    FixedPoint,
    Conjugated,
    Su3Center,
}

/// Either a named loop or explicit segments.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub preset: Option<Preset>,
    pub segments: Option<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapName {
    FixedPoint,
    SphericalCap,
    HolonomyDefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugedSpec {
    /// Diagonal of `−i·D` for the traceless diagonal direction `D`.
    pub direction: Vec<f64>,
    pub slope: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub frequency: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftSpec {
    Natural,
    Chart,
    Constant,
    Gauged(GaugedSpec),
}

/// The on-disk job description. Every field is optional here; requirements
/// depend on the command and are enforced by [`JobConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub group: Option<GroupSpec>,
    pub weight: Option<Vec<Coord>>,
    pub realform: Option<RealFormName>,
    pub path: Option<PathSpec>,
    pub base: Option<Value>,
    pub cap: Option<CapName>,
    pub lift: Option<LiftSpec>,
    pub steps: Option<usize>,
    pub uea: Option<String>,
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub seed: Option<u64>,
}

/// A schema or usage violation, located by a path into the config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub location: String,
    pub message: String,
}

impl UsageError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        UsageError { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for UsageError {}

/// Tolerance keys accepted besides check ids.
pub const TOLERANCE_KEYS: [&str; 4] = ["cap", "consistency", "precision", "scalar"];

impl JobConfig {
    /// Parses config text. Syntax errors carry line and column, type errors the
    /// field path.
    pub fn parse(text: &str, origin: &str) -> Result<Self, UsageError> {
        if text.len() > MAX_CONFIG_BYTES {
            return Err(UsageError::new(origin, format!("config exceeds {MAX_CONFIG_BYTES} bytes")));
        }
        let value: Value = serde_json::from_str(text).map_err(|e| {
            UsageError::new(format!("{origin}:{}:{}", e.line(), e.column()), format!("invalid JSON: {e}"))
        })?;
        Self::from_value(value, origin)
    }

    pub fn from_value(value: Value, origin: &str) -> Result<Self, UsageError> {
        serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            let loc = if path == "." { origin.to_string() } else { format!("{origin}: {path}") };
            UsageError::new(loc, e.into_inner().to_string())
        })
    }

    pub fn resolve(&self) -> Result<Job, UsageError> {
        let command = self.command.ok_or_else(|| UsageError::new("command", "no command given"))?;
        let seed = self.seed.unwrap_or(0);
        let tolerances = self.tolerances.clone().unwrap_or_default();
        let valid_ids = check_ids();
        for (k, v) in &tolerances {
            if !TOLERANCE_KEYS.contains(&k.as_str()) && !valid_ids.contains(&k.as_str()) {
                return Err(UsageError::new(format!("tolerances.{k}"), "unknown tolerance key"));
            }
            if !v.is_finite() {
                return Err(UsageError::new(format!("tolerances.{k}"), "tolerance must be finite"));
            }
        }
        if command == Command::Check {
            return Ok(Job {
                command,
                seed,
                tolerances,
                system: None,
                weight: None,
                realform: None,
                loop_spec: None,
                steps: DEFAULT_STEPS,
                uea: None,
            });
        }
        let weight = self.weight()?;
        let system = self.system(weight.as_ref())?;
        if let Some(w) = &weight {
            if w.rank() != system.rank() {
                return Err(UsageError::new(
                    "weight",
                    format!("{} coordinates given for rank {}", w.rank(), system.rank()),
                ));
            }
        }
        let realform = match self.realform {
            None => RealFormSpec::compact(&system),
            Some(name) => {
                RealFormSpec::from_name(&system, name).map_err(|e| UsageError::new("realform", e.to_string()))?
            }
        };
        let needs_weight = !matches!(command, Command::Roots);
        if needs_weight && weight.is_none() {
            return Err(UsageError::new("weight", format!("required by {}", command.name())));
        }
        let steps = self.steps.unwrap_or(DEFAULT_STEPS);
        if !(MIN_STEPS..=MAX_STEPS).contains(&steps) {
            return Err(UsageError::new("steps", format!("must lie in [{MIN_STEPS}, {MAX_STEPS}]")));
        }
        let loop_spec = match command {
            Command::Kappa | Command::Action => Some(self.loop_spec(system.rank() + 1, seed)?),
            _ => None,
        };
        Ok(Job {
            command,
            seed,
            tolerances,
            system: Some(system),
            weight,
            realform: Some(realform),
            loop_spec,
            steps,
            uea: self.uea.clone(),
        })
    }

    fn weight(&self) -> Result<Option<Weight>, UsageError> {
        let Some(coords) = &self.weight else { return Ok(None) };
        let kind = self.group.as_ref().map_or(RootType::A, |g| g.kind);
        let parsed = coords
            .iter()
            .enumerate()
            .map(|(i, c)| match c {
                Coord::Int(v) => Ok(BigRational::from_integer((*v).into())),
                Coord::Text(s) => parse_rational(s).map_err(|e| UsageError::new(format!("weight[{i}]"), e.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.is_empty() {
            return Err(UsageError::new("weight", "at least one coordinate is required"));
        }
        Ok(Some(Weight::new(kind, parsed)))
    }

    fn system(&self, weight: Option<&Weight>) -> Result<RootSystem, UsageError> {
        let (kind, rank) = match (&self.group, weight) {
            (Some(g), _) => (g.kind, g.rank),
            (None, Some(w)) => (RootType::A, w.rank()),
            (None, None) => return Err(UsageError::new("group", "a group or a weight is required")),
        };
        if rank > coadjoint::json::MAX_DIM - 1 {
            return Err(UsageError::new("group.rank", format!("rank above {}", coadjoint::json::MAX_DIM - 1)));
        }
        build_root_system(kind, rank).map_err(|e| UsageError::new("group", e.to_string()))
    }

    fn loop_spec(&self, n: usize, seed: u64) -> Result<LoopSpec, UsageError> {
        let path = self.path.clone().unwrap_or(PathSpec { preset: Some(Preset::FixedPoint), segments: None });
        let mut spec = match (&path.preset, &path.segments) {
            (Some(_), Some(_)) => return Err(UsageError::new("path", "give either preset or segments, not both")),
            (None, None) => return Err(UsageError::new("path", "needs preset or segments")),
            (Some(p), None) => preset_loop(*p, n, seed)?,
            (None, Some(v)) => {
                let p = path_from_json(&serde_json::json!({ "segments": v }))
                    .map_err(|e| UsageError::new("path.segments", e.to_string()))?;
                if p.dim() != n {
                    return Err(UsageError::new(
                        "path.segments",
                        format!("path is {}x{}, group needs {n}x{n}", p.dim(), p.dim()),
                    ));
                }
                LoopSpec::new(p, OrbitPoint::base(n), Cap::HolonomyDefined)
            }
        };
        if let Some(b) = &self.base {
            let g = group_from_json(b).map_err(|e| UsageError::new("base", e.to_string()))?;
            if g.dim() != n {
                return Err(UsageError::new("base", format!("base is {}x{}, group needs {n}x{n}", g.dim(), g.dim())));
            }
            spec.base = OrbitPoint::new(g);
        }
        if let Some(c) = self.cap {
            spec.cap = match c {
                CapName::FixedPoint => Cap::FixedPoint,
                CapName::SphericalCap => Cap::SphericalCap,
                CapName::HolonomyDefined => Cap::HolonomyDefined,
            };
        }
        if let Some(l) = &self.lift {
            spec.lift = match l {
                LiftSpec::Natural => Lift::Natural,
                LiftSpec::Chart => Lift::Chart,
                LiftSpec::Constant => Lift::Constant,
                LiftSpec::Gauged(g) => {
                    if g.direction.len() != n {
                        return Err(UsageError::new("lift.gauged.direction", format!("needs {n} entries")));
                    }
                    if g.direction.iter().sum::<f64>().abs() > 1e-9 {
                        return Err(UsageError::new("lift.gauged.direction", "entries must sum to zero"));
                    }
                    for (name, v) in [("slope", g.slope), ("amplitude", g.amplitude), ("frequency", g.frequency)] {
                        if !v.is_finite() {
                            return Err(UsageError::new(format!("lift.gauged.{name}"), "must be finite"));
                        }
                    }
                    let direction = AlgebraElement::diagonal(&g.direction)
                        .map_err(|e| UsageError::new("lift.gauged.direction", e.to_string()))?;
                    Lift::Gauged { direction, slope: g.slope, amplitude: g.amplitude, frequency: g.frequency }
                }
            };
        }
        Ok(spec)
    }
}

fn preset_loop(p: Preset, n: usize, seed: u64) -> Result<LoopSpec, UsageError> {
    let wrong = |need: &str| UsageError::new("path.preset", format!("preset needs {need}, group is SU({n})"));
    match p {
        Preset::FixedPoint => {
            let gen = match n {
                2 => loops::half_turn(),
                3 => loops::su3_center_generator(),
                _ => return Err(wrong("SU(2) or SU(3)")),
            };
            Ok(LoopSpec::new(PiecewisePath::one_parameter(gen), OrbitPoint::base(n), Cap::FixedPoint)
                .with_lift(Lift::Constant))
        }
        Preset::Conjugated if n == 2 => loops::conjugated_loop(&loops::default_conjugator())
            .map_err(|e| UsageError::new("path.preset", e.to_string())),
        Preset::Conjugated => Err(wrong("SU(2)")),
        Preset::Su3Center if n == 3 => {
            let mut s = Sampler::new(seed);
            let u = s.group(3);
            loops::su3_center_loop(&u, OrbitPoint::new(s.group(3)))
                .map_err(|e| UsageError::new("path.preset", e.to_string()))
        }
        Preset::Su3Center => Err(wrong("SU(3)")),
    }
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: Command,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub system: Option<RootSystem>,
    pub weight: Option<Weight>,
    pub realform: Option<RealFormSpec>,
    pub loop_spec: Option<LoopSpec>,
    pub steps: usize,
    pub uea: Option<String>,
}

impl Job {
    pub fn transport_tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            precision: self.tolerances.get("precision").copied().unwrap_or(d.precision),
            consistency: self.tolerances.get("consistency").copied().unwrap_or(d.consistency),
            cap: self.tolerances.get("cap").copied().unwrap_or(d.cap),
        }
    }

    pub fn check_overrides(&self) -> BTreeMap<String, f64> {
        self.tolerances
            .iter()
            .filter(|(k, _)| !TOLERANCE_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<Job, UsageError> {
        JobConfig::parse(text, "cfg")?.resolve()
    }

    #[test]
    fn defaults_fill_group_realform_and_path() {
        let job = resolve(r#"{"command": "kappa", "weight": ["3/1"]}"#).unwrap();
        assert_eq!(job.system.unwrap().rank(), 1);
        assert!(job.realform.unwrap().is_compact_form());
        let spec = job.loop_spec.unwrap();
        assert_eq!(spec.cap, Cap::FixedPoint);
        assert_eq!(job.steps, DEFAULT_STEPS);
        assert_eq!(job.seed, 0);
    }

    #[test]
    fn type_errors_carry_the_field_path() {
        let e = JobConfig::parse(r#"{"lift": {"gauged": {"direction": "x", "slope": 1}}}"#, "cfg").unwrap_err();
        assert!(e.location.contains("lift.gauged.direction"), "{e}");
        let e = JobConfig::parse(r#"{"command": "nope"}"#, "cfg").unwrap_err();
        assert!(e.location.contains("command"), "{e}");
    }

    #[test]
    fn tolerance_keys_split_between_transport_and_checks() {
        let job = resolve(r#"{"command": "check", "tolerances": {"precision": 1e-3, "orbit.moment_condition": 1e-4}}"#)
            .unwrap();
        assert_eq!(job.transport_tolerances().precision, 1e-3);
        let o = job.check_overrides();
        assert_eq!(o.len(), 1);
        assert_eq!(o["orbit.moment_condition"], 1e-4);
    }

    #[test]
    fn explicit_segments_must_match_the_group() {
        let text = r#"{"command": "kappa", "weight": [1, 0],
            "path": {"segments": [{"generator": [[[0, 1], [0, 0]], [[0, 0], [0, -1]]], "duration": 1}]}}"#;
        assert_eq!(resolve(text).unwrap_err().location, "path.segments");
    }

    #[test]
    fn preset_and_segments_are_exclusive() {
        let text = r#"{"command": "kappa", "weight": [1], "path": {"preset": "conjugated", "segments": []}}"#;
        assert_eq!(resolve(text).unwrap_err().location, "path");
    }
}
