use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::sensitivity::{CandidateRule, SensitivityKind};
use crate::setmap::MapPiece;
use crate::space::{format_scalar, in_unit, parse_scalar, rat, zero, Scalar};

pub const DEFAULT_DEPTH: usize = 4;
pub const DEFAULT_HORIZON: usize = 40;
pub const DEFAULT_SENS_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Analyze,
    Orbit,
    Transition,
    Density,
    Sensitivity,
    Report,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Analyze,
        Command::Orbit,
        Command::Transition,
        Command::Density,
        Command::Sensitivity,
        Command::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Orbit => "orbit",
            Command::Transition => "transition",
            Command::Density => "density",
            Command::Sensitivity => "sensitivity",
            Command::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub(crate) fn includes(self, part: Command) -> bool {
        self == part || self == Command::Report
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MapSource {
    /// A catalog reference such as `pin(r=1/3)`.
    Builtin(String),
    /// A piece-list file.
    File(PathBuf),
    /// Piece lines given directly in the config.
    Inline(String),
}

/// Properties that can be asserted; a certified negative answer makes the run exit with 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assertion {
    Usc,
    Lsc,
    Transitive,
    WeakDense,
    Sensitivity(SensitivityKind),
}

impl Assertion {
    pub fn parse(s: &str) -> Option<Assertion> {
        Some(match s {
            "usc" => Assertion::Usc,
            "lsc" => Assertion::Lsc,
            "transitive" => Assertion::Transitive,
            "weak_dense" => Assertion::WeakDense,
            "strong" => Assertion::Sensitivity(SensitivityKind::Strong),
            "sensitive" => Assertion::Sensitivity(SensitivityKind::Sensitive),
            "weak" => Assertion::Sensitivity(SensitivityKind::Weak),
            "liyorke" => Assertion::Sensitivity(SensitivityKind::LiYorke),
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Assertion::Usc => "usc",
            Assertion::Lsc => "lsc",
            Assertion::Transitive => "transitive",
            Assertion::WeakDense => "weak_dense",
            Assertion::Sensitivity(k) => k.as_str(),
        }
    }
}

/// A validated run description.
///
/// Defaults: `eps = 1/8`, `depth = 4`, `horizon = 40`, `sens_eps = 1/4`,
/// `sens_horizon = 64`, `z = 0`, `p = z`, `eta = 1/16`, `candidates = standard`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub map: MapSource,
    pub command: Command,
    #[serde(with = "crate::space::exact")]
    pub eps: Scalar,
    pub depth: usize,
    pub horizon: usize,
    #[serde(with = "crate::space::exact")]
    pub sens_eps: Scalar,
    pub sens_horizon: usize,
    #[serde(with = "crate::space::exact")]
    pub z: Scalar,
    #[serde(with = "crate::space::exact_opt")]
    pub p: Option<Scalar>,
    #[serde(with = "crate::space::exact")]
    pub eta: Scalar,
    pub candidates: CandidateRule,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub assertions: Vec<Assertion>,
}

impl RunConfig {
    pub fn new(map: MapSource, command: Command) -> Self {
        RunConfig {
            map,
            command,
            eps: rat(1, 8),
            depth: DEFAULT_DEPTH,
            horizon: DEFAULT_HORIZON,
            sens_eps: rat(1, 4),
            sens_horizon: DEFAULT_SENS_HORIZON,
            z: zero(),
            p: None,
            eta: rat(1, 16),
            candidates: CandidateRule::Standard,
            out: None,
            assertions: Vec::new(),
        }
    }

    /// Base point of the density probe.
    pub fn base_point(&self) -> &Scalar {
        self.p.as_ref().unwrap_or(&self.z)
    }

    /// Sets `key` from its text form, as in a `param` line.
    pub fn set_param(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let invalid = |message: String| ConfigError::Validation {
            field: key.to_string(),
            message,
        };
        let scalar = || parse_scalar(value).map_err(|e| invalid(e.to_string()));
        let count = || value.parse::<usize>().map_err(|_| invalid(format!("`{value}` is not a count")));
        match key {
            "eps" => self.eps = scalar()?,
            "sens_eps" => self.sens_eps = scalar()?,
            "eta" => self.eta = scalar()?,
            "z" => self.z = scalar()?,
            "p" => self.p = Some(scalar()?),
            "depth" => self.depth = count()?,
            "horizon" => self.horizon = count()?,
            "sens_horizon" => self.sens_horizon = count()?,
            "candidates" => {
                self.candidates = match value {
                    "standard" => CandidateRule::Standard,
                    "dense" => CandidateRule::Dense,
                    _ => return Err(invalid(format!("`{value}` is not `standard` or `dense`"))),
                }
            }
            _ => {
                return Err(ConfigError::Validation {
                    field: key.to_string(),
                    message: "unknown parameter".into(),
                })
            }
        }
        Ok(())
    }

    /// Checks ranges. Resolutions must be positive; points must lie in `[0,1]`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let field = |name: &str, message: String| {
            Err(ConfigError::Validation {
                field: name.to_string(),
                message,
            })
        };
        for (name, x) in [("eps", &self.eps), ("sens_eps", &self.sens_eps), ("eta", &self.eta)] {
            if *x <= zero() {
                return field(name, format!("{} is not positive", format_scalar(x)));
            }
        }
        if self.eps > rat(1, 2) {
            return field("eps", format!("{} exceeds 1/2", format_scalar(&self.eps)));
        }
        for (name, x) in [("z", Some(&self.z)), ("p", self.p.as_ref())] {
            if let Some(x) = x {
                if !in_unit(x) {
                    return field(name, format!("{} is outside [0,1]", format_scalar(x)));
                }
            }
        }
        if self.depth == 0 {
            return field("depth", "must be at least 1".into());
        }
        if self.horizon == 0 {
            return field("horizon", "must be at least 1".into());
        }
        if self.sens_horizon < 2 {
            return field("sens_horizon", "must be at least 2".into());
        }
        Ok(())
    }

    /// Makes a relative `File` source relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let MapSource::File(p) = &mut self.map {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

/// Parses the line-oriented run description.
///
/// ```text
/// # comment
/// map builtin flip          | map file slide.txt | <piece line>
/// cmd orbit
/// param depth 4
/// out results
/// assert transitive
/// ```
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map: Option<MapSource> = None;
    let mut inline: Vec<String> = Vec::new();
    let mut command: Option<Command> = None;
    let mut params: Vec<(usize, String, String)> = Vec::new();
    let mut out = None;
    let mut assertions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ConfigError::Parse { line, message };
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut words = trimmed.split_whitespace();
        let head = words.next().expect("nonempty");
        let rest: Vec<&str> = words.collect();
        match head {
            "map" => {
                if map.is_some() {
                    return Err(err("second `map` line".into()));
                }
                match rest.as_slice() {
                    ["builtin", name] => map = Some(MapSource::Builtin(name.to_string())),
                    ["file", path] => map = Some(MapSource::File(PathBuf::from(path))),
                    _ => return Err(err("expected `map builtin <name>` or `map file <path>`".into())),
                }
            }
            "segment" | "rect" | "point" | "band" => {
                MapPiece::parse_line(trimmed).map_err(|e| err(e.to_string()))?;
                inline.push(trimmed.to_string());
            }
            "cmd" => {
                let [name] = rest.as_slice() else {
                    return Err(err("expected `cmd <command>`".into()));
                };
                command = Some(Command::parse(name).ok_or_else(|| err(format!("unknown command `{name}`")))?);
            }
            "param" => {
                let [key, value] = rest.as_slice() else {
                    return Err(err("expected `param <key> <value>`".into()));
                };
                params.push((line, key.to_string(), value.to_string()));
            }
            "out" => {
                let [dir] = rest.as_slice() else {
                    return Err(err("expected `out <dir>`".into()));
                };
                out = Some(PathBuf::from(dir));
            }
            "assert" => {
                for a in &rest {
                    assertions.push(Assertion::parse(a).ok_or_else(|| err(format!("unknown property `{a}`")))?);
                }
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let map = match (map, inline.is_empty()) {
        (Some(_), false) => {
            return Err(ConfigError::Validation {
                field: "map".into(),
                message: "both a `map` line and inline pieces".into(),
            })
        }
        (Some(m), true) => m,
        (None, false) => MapSource::Inline(inline.join("\n")),
        (None, true) => {
            return Err(ConfigError::Validation {
                field: "map".into(),
                message: "missing".into(),
            })
        }
    };
    let mut cfg = RunConfig::new(map, command.unwrap_or(Command::Report));
    for (_, key, value) in params {
        cfg.set_param(&key, &value)?;
    }
    cfg.out = out;
    cfg.assertions = assertions;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orbit_config() {
        let cfg = parse_config("map builtin flip\ncmd orbit\nparam depth 4\n").unwrap();
        assert_eq!(cfg.map, MapSource::Builtin("flip".into()));
        assert_eq!(cfg.command, Command::Orbit);
        assert_eq!(cfg.depth, 4);
    }

    #[test]
    fn inline_pieces() {
        let cfg = parse_config("# slide\nsegment 0 1 cc -> 0 1\npoint 1 -> [0,1]\ncmd analyze").unwrap();
        let MapSource::Inline(text) = &cfg.map else { panic!() };
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn zero_eps_is_rejected() {
        let e = parse_config("map builtin tent\nparam eps 0").unwrap_err();
        assert!(matches!(e, ConfigError::Validation { field, .. } if field == "eps"));
    }

    #[test]
    fn unknown_key_and_bad_lines() {
        assert!(matches!(
            parse_config("map builtin tent\nparam colour red"),
            Err(ConfigError::Validation { field, .. }) if field == "colour"
        ));
        assert_eq!(
            parse_config("map builtin tent\nfrobnicate"),
            Err(ConfigError::Parse { line: 2, message: "unknown directive `frobnicate`".into() })
        );
        assert!(matches!(parse_config("segment 0 1 cc -> 0 2"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(matches!(parse_config("cmd orbit"), Err(ConfigError::Validation { .. })));
    }

    #[test]
    fn assertions_parse() {
        let cfg = parse_config("map builtin slide\nassert transitive weak_dense").unwrap();
        assert_eq!(cfg.assertions, vec![Assertion::Transitive, Assertion::WeakDense]);
    }
}
