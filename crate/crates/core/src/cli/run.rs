use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    dense_orbit_build, finite_oracle, transition_graph, transitivity_probe, weak_dense_probe, AnalysisError,
    DensityReport, FiniteReport, GraphReport, Status, Verdict,
};
use crate::corpus::{builtin_ref, CorpusError, System};
use crate::orbit::{CoverReport, OrbitCover, OrbitTree, TreeReport};
use crate::sensitivity::{
    finite_sensitivity_probe, liyorke_probe, sensitivity_probe, ProbeBudget, ProbeStatus, SensitivityKind,
    SensitivityVerdict,
};
use crate::setmap::{
    lsc_check, usc_check, ConnectedVerdict, FiniteSystem, SemicontinuityVerdict, SetMapError, SetValuedMap,
};
use crate::space::{format_scalar, ClosedSet};

use super::config::{Assertion, Command, ConfigError, MapSource, RunConfig};
use super::render::{render_cover, render_graph, render_map, render_tree};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Map(#[from] SetMapError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("`{command}` needs a set-valued map on [0,1], not a finite system")]
    NeedsMap { command: Command },
}

/// Files produced by a run, in write order, and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub exit_code: i32,
    pub failed_assertions: Vec<String>,
}

impl RunOutput {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), RunError> {
        let io_err = |path: &Path, source| RunError::Io {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: Command,
    config: &'a RunConfig,
    system: SystemInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    analyze: Option<AnalyzeSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<OrbitSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<GraphReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<DensitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sensitivity: Option<SensitivitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    finite: Option<FiniteSection>,
    assertions: Vec<AssertionResult>,
    figures: Vec<Figure>,
}

#[derive(Serialize)]
struct SystemInfo {
    name: String,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<String>,
    description: Vec<String>,
}

#[derive(Serialize)]
struct AnalyzeSection {
    summary: Summary,
    usc: SemicontinuityVerdict,
    lsc: SemicontinuityVerdict,
    values_connected: ConnectedVerdict,
    single_valued: bool,
    fixed_singletons: Option<Vec<String>>,
    transitive: Verdict,
}

#[derive(Serialize)]
struct Summary {
    usc: bool,
    lsc: bool,
    transitive: &'static str,
}

#[derive(Serialize)]
struct LevelRow {
    k: usize,
    set: ClosedSet,
}

#[derive(Serialize)]
struct OrbitSection {
    /// `π_k = F^{k-1}(z)` for `k = 1..=depth`.
    levels: Vec<LevelRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<TreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cover: Option<CoverReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cover_error: Option<String>,
}

#[derive(Serialize)]
struct DensitySection {
    weak_dense: Verdict,
    first_hits: DensityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense_orbit: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense_orbit_error: Option<String>,
}

#[derive(Serialize)]
struct SensitivitySection {
    summary: Vec<(SensitivityKind, ProbeStatus)>,
    verdicts: Vec<SensitivityVerdict>,
}

#[derive(Serialize)]
struct FiniteSection {
    oracle: FiniteReport,
    sensitivity: Vec<(SensitivityKind, ProbeStatus)>,
}

#[derive(Serialize)]
struct AssertionResult {
    property: &'static str,
    outcome: &'static str,
    refuted: bool,
}

#[derive(Serialize)]
struct Figure {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

/// Loads the system a config points at. Returns the caveat of builtins.
pub fn load_system(cfg: &RunConfig) -> Result<(System, Option<String>), RunError> {
    match &cfg.map {
        MapSource::Builtin(name) => {
            let b = builtin_ref(name)?;
            let caveat = b.caveat.clone();
            Ok((b.system, caveat))
        }
        MapSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let name = path.file_stem().map_or("map".into(), |s| s.to_string_lossy().into_owned());
            Ok((System::Map(SetValuedMap::parse(name, &text)?), None))
        }
        MapSource::Inline(text) => Ok((System::Map(SetValuedMap::parse("inline", text)?), None)),
    }
}

/// Executes `cfg` and returns the files it produces; nothing is written.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    cfg.validate()?;
    let (system, caveat) = load_system(cfg)?;
    match &system {
        System::Map(f) => run_map(cfg, f, caveat),
        System::Finite(s) => run_finite(cfg, s, caveat),
    }
}

fn run_map(cfg: &RunConfig, f: &SetValuedMap, caveat: Option<String>) -> Result<RunOutput, RunError> {
    let cmd = cfg.command;
    let wants = |a: Assertion| cfg.assertions.contains(&a);
    let mut files: Vec<(String, String)> = Vec::new();
    let mut figures = Vec::new();
    let mut figure = |files: &mut Vec<(String, String)>, name: &str, svg: Result<String, super::RenderError>| {
        match svg {
            Ok(s) => {
                files.push((name.to_string(), s));
                figures.push(Figure { file: name.into(), skipped: None });
            }
            Err(e) => figures.push(Figure {
                file: name.into(),
                skipped: Some(e.to_string()),
            }),
        }
    };

    let need_analyze = cmd.includes(Command::Analyze) || wants(Assertion::Transitive);
    let analyze = need_analyze.then(|| {
        let usc = usc_check(f);
        let lsc = lsc_check(f);
        let transitive = transitivity_probe(f, &cfg.eps, cfg.horizon);
        AnalyzeSection {
            summary: Summary {
                usc: usc.holds,
                lsc: lsc.holds,
                transitive: transitive.status.as_str(),
            },
            values_connected: f.values_connected_check(),
            single_valued: f.is_single_valued(),
            fixed_singletons: f.fixed_singletons().map(|v| v.iter().map(format_scalar).collect()),
            usc,
            lsc,
            transitive,
        }
    });
    if cmd.includes(Command::Analyze) {
        figure(&mut files, "map.svg", render_map(f));
    }

    let orbit = if cmd.includes(Command::Orbit) {
        let levels = (1..=cfg.depth)
            .map(|k| Ok(LevelRow { k, set: f.iterate(&cfg.z, k - 1)? }))
            .collect::<Result<Vec<_>, SetMapError>>()?;
        let mut section = OrbitSection {
            levels,
            tree: None,
            tree_error: None,
            cover: None,
            cover_error: None,
        };
        match OrbitTree::build(f, &cfg.z, cfg.depth) {
            Ok(t) => {
                section.tree = Some(t.to_report());
                figure(&mut files, "orbit_tree.svg", render_tree(&t));
            }
            Err(e) => section.tree_error = Some(e.to_string()),
        }
        match OrbitCover::build(f, &cfg.z, cfg.depth, &cfg.eps) {
            Ok(c) => {
                section.cover = Some(c.to_report());
                figure(&mut files, "orbit_cover.svg", render_cover(&c));
            }
            Err(e) => section.cover_error = Some(e.to_string()),
        }
        Some(section)
    } else {
        None
    };

    let transition = if cmd.includes(Command::Transition) {
        let g = transition_graph(f, &cfg.eps)?;
        files.push(("transition.dot".into(), g.to_dot(f.name())));
        figure(&mut files, "transition.svg", render_graph(&g));
        Some(g.to_report())
    } else {
        None
    };

    let density = if cmd.includes(Command::Density) || wants(Assertion::WeakDense) {
        let p = cfg.base_point();
        let (weak_dense, first_hits) = weak_dense_probe(f, p, &cfg.eps, cfg.horizon)?;
        let (dense_orbit, dense_orbit_error) = match dense_orbit_build(f, p, &cfg.eps, cfg.horizon) {
            Ok(seq) => (Some(seq.entries().iter().map(format_scalar).collect()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Some(DensitySection {
            weak_dense,
            first_hits,
            dense_orbit,
            dense_orbit_error,
        })
    } else {
        None
    };

    let sens_wanted = cfg.assertions.iter().any(|a| matches!(a, Assertion::Sensitivity(_)));
    let sensitivity = (cmd.includes(Command::Sensitivity) || sens_wanted).then(|| {
        let budget = ProbeBudget::default().with_horizon(cfg.sens_horizon).with_candidates(cfg.candidates);
        let mut verdicts: Vec<SensitivityVerdict> = [SensitivityKind::Strong, SensitivityKind::Sensitive, SensitivityKind::Weak]
            .into_iter()
            .map(|k| sensitivity_probe(k, f, &cfg.sens_eps, &budget))
            .collect();
        verdicts.push(liyorke_probe(f, &cfg.sens_eps, &cfg.eta, (1, cfg.sens_horizon), &budget));
        SensitivitySection {
            summary: verdicts.iter().map(|v| (v.kind, v.status)).collect(),
            verdicts,
        }
    });

    let mut assertions = Vec::new();
    for a in &cfg.assertions {
        let (outcome, refuted) = match a {
            Assertion::Usc | Assertion::Lsc => {
                let v = if *a == Assertion::Usc { usc_check(f) } else { lsc_check(f) };
                (if v.holds { "holds" } else { "fails" }, !v.holds)
            }
            Assertion::Transitive => {
                let s = analyze.as_ref().expect("computed").transitive.status;
                (s.as_str(), s == Status::CertifiedNo)
            }
            Assertion::WeakDense => {
                let s = density.as_ref().expect("computed").weak_dense.status;
                (s.as_str(), s == Status::CertifiedNo)
            }
            Assertion::Sensitivity(k) => {
                let s = sensitivity
                    .as_ref()
                    .expect("computed")
                    .summary
                    .iter()
                    .find(|(kind, _)| kind == k)
                    .map(|(_, s)| *s)
                    .expect("every kind probed");
                (s.as_str(), s == ProbeStatus::Refuted)
            }
        };
        assertions.push(AssertionResult {
            property: a.as_str(),
            outcome,
            refuted,
        });
    }

    let report = Report {
        tool: "orbitkit",
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        config: cfg,
        system: SystemInfo {
            name: f.name().to_string(),
            kind: "map",
            caveat,
            description: f.to_text().lines().map(str::to_string).collect(),
        },
        analyze: analyze.filter(|_| cmd.includes(Command::Analyze)),
        orbit,
        transition,
        density: density.filter(|_| cmd.includes(Command::Density)),
        sensitivity: sensitivity.filter(|_| cmd.includes(Command::Sensitivity)),
        finite: None,
        assertions,
        figures,
    };
    finish(report, files)
}

fn run_finite(cfg: &RunConfig, s: &FiniteSystem, caveat: Option<String>) -> Result<RunOutput, RunError> {
    let cmd = cfg.command;
    if matches!(cmd, Command::Orbit | Command::Transition) {
        return Err(RunError::NeedsMap { command: cmd });
    }
    if let Some(a) = cfg.assertions.iter().find(|a| matches!(a, Assertion::Usc | Assertion::Lsc)) {
        return Err(ConfigError::Validation {
            field: "assert".into(),
            message: format!("`{}` needs a map on [0,1]", a.as_str()),
        }
        .into());
    }
    let oracle = finite_oracle(s)?;
    let budget = ProbeBudget::default().with_horizon(cfg.sens_horizon).with_candidates(cfg.candidates);
    let sensitivity: Vec<(SensitivityKind, ProbeStatus)> = SensitivityKind::ALL
        .into_iter()
        .map(|k| (k, finite_sensitivity_probe(k, s, &budget)))
        .collect();
    let assertions = cfg
        .assertions
        .iter()
        .map(|a| {
            let holds = match a {
                Assertion::Transitive => oracle.transitive,
                Assertion::WeakDense => oracle.weak_dense_minimal,
                Assertion::Sensitivity(k) => sensitivity.iter().any(|(kind, st)| kind == k && *st == ProbeStatus::WitnessedYes),
                Assertion::Usc | Assertion::Lsc => unreachable!("rejected above"),
            };
            AssertionResult {
                property: a.as_str(),
                outcome: if holds { "holds" } else { "fails" },
                refuted: !holds,
            }
        })
        .collect();
    let report = Report {
        tool: "orbitkit",
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        config: cfg,
        system: SystemInfo {
            name: "finite".into(),
            kind: "finite",
            caveat,
            description: s.to_string().lines().map(str::to_string).collect(),
        },
        analyze: None,
        orbit: None,
        transition: None,
        density: None,
        sensitivity: None,
        finite: Some(FiniteSection { oracle, sensitivity }),
        assertions,
        figures: Vec::new(),
    };
    finish(report, Vec::new())
}

fn finish(report: Report<'_>, mut files: Vec<(String, String)>) -> Result<RunOutput, RunError> {
    let failed_assertions: Vec<String> = report
        .assertions
        .iter()
        .filter(|a| a.refuted)
        .map(|a| a.property.to_string())
        .collect();
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    files.insert(0, ("report.json".into(), json));
    Ok(RunOutput {
        files,
        exit_code: if failed_assertions.is_empty() { 0 } else { 2 },
        failed_assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_config;

    fn report(cfg: &str) -> (RunOutput, serde_json::Value) {
        let out = run(&parse_config(cfg).unwrap()).unwrap();
        let v = serde_json::from_str(out.file("report.json").unwrap()).unwrap();
        (out, v)
    }

    #[test]
    fn slide_is_not_transitive() {
        let (_, v) = report("map builtin slide\ncmd analyze");
        assert_eq!(v["analyze"]["summary"]["transitive"], "certified_no");
        assert_eq!(v["analyze"]["transitive"]["status"], "certified_no");
    }

    #[test]
    fn flip_orbit_table() {
        let (out, v) = report("map builtin flip\ncmd orbit\nparam z 3/10\nparam depth 3");
        assert_eq!(v["orbit"]["levels"][2]["set"]["exact"], "{3/10}|{7/10}");
        assert!(out.file("orbit_tree.svg").is_some());
    }

    #[test]
    fn transition_writes_dot() {
        let (out, v) = report("map builtin tent\ncmd transition\nparam eps 1/4");
        assert_eq!(v["transition"]["cells"], 4);
        assert!(out.file("transition.dot").unwrap().starts_with("digraph \"tent\""));
    }

    #[test]
    fn asserted_negatives_exit_with_two() {
        let (out, _) = report("map builtin slide\ncmd density\nparam p 1\nassert transitive weak_dense");
        assert_eq!(out.exit_code, 2);
        assert_eq!(out.failed_assertions, vec!["transitive"]);
    }

    #[test]
    fn finite_systems() {
        let (out, v) = report("map builtin swap\ncmd analyze\nassert transitive");
        assert_eq!(out.exit_code, 0);
        assert_eq!(v["finite"]["oracle"]["transitive"], true);
        let e = run(&parse_config("map builtin swap\ncmd orbit").unwrap()).unwrap_err();
        assert!(matches!(e, RunError::NeedsMap { .. }));
    }

    #[test]
    fn missing_file_is_an_error() {
        let e = run(&parse_config("map file /nonexistent/slide.txt").unwrap()).unwrap_err();
        assert!(matches!(e, RunError::Io { .. }));
    }
}
