//! Named example systems with machine-checkable expectations.
//!
//! Every entry is built from the piece-list text format or from a finite
//! transition table. Parameterised entries carry their parameters in the
//! name, e.g. `pin(r=1/2)` or `devil_pair(level=6)`, so reports always say
//! which approximation they used.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{finite_oracle, transitivity_probe, weak_dense_probe, Status};
use crate::orbit::{arm_families, OrbitTree};
use crate::sensitivity::{liyorke_probe, sensitivity_probe, ProbeBudget, ProbeStatus, SensitivityKind};
use crate::setmap::{
    lsc_check, preimage_union_map, usc_check, FiniteSystem, PlMap, SetMapError, SetValuedMap, Tri,
};
use crate::space::{format_scalar, half, int, one, parse_scalar, rat, zero, ClosedSet, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown builtin `{0}`")]
    UnknownName(String),
    #[error("bad parameters for `{name}`: {reason}")]
    BadParams { name: String, reason: String },
}

pub type Params = BTreeMap<String, String>;

/// The object a builtin constructs.
#[derive(Debug, Clone)]
pub enum System {
    Map(SetValuedMap),
    Finite(FiniteSystem),
}

impl System {
    pub fn as_map(&self) -> Option<&SetValuedMap> {
        match self {
            System::Map(f) => Some(f),
            System::Finite(_) => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSystem> {
        match self {
            System::Finite(s) => Some(s),
            System::Map(_) => None,
        }
    }
}

/// Properties of finite systems decided by the exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteProperty {
    Transitive,
    DenseMinimal,
    WeakDenseMinimal,
    WeaklySensitive,
}

/// One executable expectation. Each variant is run by another module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Check {
    Usc {
        holds: bool,
    },
    Lsc {
        holds: bool,
    },
    ValuesConnected {
        holds: bool,
    },
    Value {
        #[serde(with = "crate::space::exact")]
        at: Scalar,
        value: ClosedSet,
    },
    FixedSingletons {
        #[serde(with = "crate::space::exact_seq")]
        points: Vec<Scalar>,
    },
    /// Level `k` of the orbit tree of `z`.
    Level {
        #[serde(with = "crate::space::exact")]
        z: Scalar,
        depth: usize,
        k: usize,
        level: ClosedSet,
    },
    /// Number of arm families and their common diameter for each address length.
    Arms {
        #[serde(with = "crate::space::exact")]
        z: Scalar,
        depth: usize,
        counts: Vec<usize>,
        #[serde(with = "crate::space::exact_seq")]
        diameters: Vec<Scalar>,
    },
    Transitivity {
        #[serde(with = "crate::space::exact")]
        eps: Scalar,
        horizon: usize,
        status: Status,
    },
    WeakDense {
        #[serde(with = "crate::space::exact")]
        p: Scalar,
        #[serde(with = "crate::space::exact")]
        eps: Scalar,
        horizon: usize,
        status: Status,
    },
    Sensitivity {
        kind: SensitivityKind,
        #[serde(with = "crate::space::exact")]
        eps: Scalar,
        horizon: usize,
        status: ProbeStatus,
    },
    LiYorke {
        #[serde(with = "crate::space::exact")]
        eps: Scalar,
        #[serde(with = "crate::space::exact")]
        eta: Scalar,
        horizon: usize,
        status: ProbeStatus,
    },
    Finite {
        of: FiniteProperty,
        holds: bool,
    },
    FiniteWeakDense {
        state: String,
        holds: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    /// The claim being reproduced, in words.
    pub anchor: String,
}

/// Result of executing one expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    pub observed: String,
}

#[derive(Debug, Clone)]
pub struct BuiltinSpec {
    pub name: String,
    pub params: Params,
    pub system: System,
    pub expectations: Vec<Expectation>,
    /// Set when a parameter stands in for an irrational or limiting object.
    pub caveat: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: &'static str,
}

/// One line of the machine-readable index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub kind: &'static str,
    pub params: Vec<ParamInfo>,
    pub summary: &'static str,
    pub anchors: Vec<String>,
}

struct Entry {
    name: &'static str,
    kind: &'static str,
    params: &'static [(&'static str, &'static str)],
    summary: &'static str,
}

const CATALOG: &[Entry] = &[
    Entry { name: "tent", kind: "map", params: &[], summary: "tent map T(t) = 1 - |2t - 1|" },
    Entry { name: "identity", kind: "map", params: &[], summary: "F(t) = {t}" },
    Entry { name: "double_tent_h", kind: "map", params: &[], summary: "three-piece map -2t+1/2, 2t-1/2, -2t+5/2" },
    Entry {
        name: "double_tent_f",
        kind: "map",
        params: &[("s", "10/19"), ("t", "9/19")],
        summary: "double tent with F(1/6) = {1/6, s} and F(5/6) = {5/6, t}",
    },
    Entry { name: "flip", kind: "map", params: &[], summary: "F(t) = {t, 1 - t}" },
    Entry {
        name: "devil_pair",
        kind: "map",
        params: &[("level", "6")],
        summary: "F(t) = {t, f(t)} with f a level-m approximation of the Cantor function",
    },
    Entry { name: "fan0", kind: "map", params: &[], summary: "F(0) = [0,1], F(t) = {t} otherwise" },
    Entry { name: "fan01", kind: "map", params: &[], summary: "F(0) = F(1) = [0,1], F(t) = {t} otherwise" },
    Entry { name: "pin", kind: "map", params: &[("r", "1/2")], summary: "F(r) = [0,1], F(t) = {r} otherwise" },
    Entry {
        name: "tent_aug_f",
        kind: "map",
        params: &[],
        summary: "tent map with F(0) = [0,1]",
    },
    Entry {
        name: "tent_aug_g",
        kind: "map",
        params: &[("t0", "1/19")],
        summary: "G(t) = {t0, T(t)}",
    },
    Entry { name: "slide", kind: "map", params: &[], summary: "F(1) = [0,1], F(t) = {t} otherwise" },
    Entry {
        name: "ramp",
        kind: "map",
        params: &[],
        summary: "F(0) = [1/2,1], three-piece zigzag elsewhere",
    },
    Entry { name: "const_full", kind: "map", params: &[], summary: "F(t) = [0,1]" },
    Entry { name: "nonusc_f", kind: "map", params: &[], summary: "F(0) = {0}, F(t) = [0,1] for t > 0" },
    Entry { name: "nonusc_g", kind: "map", params: &[], summary: "G(0) = {0}, G(t) = [t,1] for t > 0" },
    Entry {
        name: "preimage_union",
        kind: "map",
        params: &[("maps", "tent+identity")],
        summary: "F(x) = f_1^{-1}(x) ∪ ... ∪ f_k^{-1}(x) for onto piecewise-linear f_i",
    },
    Entry { name: "cycle3", kind: "finite", params: &[], summary: "a -> b -> c -> a" },
    Entry { name: "swap", kind: "finite", params: &[], summary: "a <-> b" },
    Entry { name: "split", kind: "finite", params: &[], summary: "every state maps to {a, b}" },
    Entry { name: "fixed_pair", kind: "finite", params: &[], summary: "two fixed states" },
    Entry {
        name: "convergent_sequence",
        kind: "finite",
        params: &[("n", "5")],
        summary: "states 1, 1/2, ..., 1/n, 0; F(1) = all other states, F(x) = {x} otherwise",
    },
];

/// Names of the onto piecewise-linear maps usable in `preimage_union`.
pub const PL_BUILTINS: &[&str] = &["tent", "identity", "double_tent_h", "devil"];

/// Splits `name(k=v,k=v)` into the name and its parameters.
pub fn parse_builtin_ref(text: &str) -> Result<(String, Params), CorpusError> {
    let text = text.trim();
    let Some(open) = text.find('(') else {
        return Ok((text.to_lowercase(), Params::new()));
    };
    let name = text[..open].trim().to_lowercase();
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| CorpusError::BadParams {
        name: name.clone(),
        reason: "missing `)`".into(),
    })?;
    let mut params = Params::new();
    for kv in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| CorpusError::BadParams {
            name: name.clone(),
            reason: format!("`{kv}` is not key=value"),
        })?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok((name, params))
}

/// Builds a catalog entry. Names are case-insensitive.
pub fn builtin(name: &str, params: &Params) -> Result<BuiltinSpec, CorpusError> {
    let key = name.to_lowercase();
    let entry = CATALOG
        .iter()
        .find(|e| e.name == key)
        .ok_or_else(|| CorpusError::UnknownName(name.to_string()))?;
    for k in params.keys() {
        if !entry.params.iter().any(|(p, _)| p == k) {
            return Err(bad(entry.name, format!("unknown parameter `{k}`")));
        }
    }
    let mut resolved = Params::new();
    for (p, default) in entry.params {
        resolved.insert(p.to_string(), params.get(*p).cloned().unwrap_or_else(|| default.to_string()));
    }
    let full_name = if resolved.is_empty() {
        entry.name.to_string()
    } else {
        let args: Vec<String> = resolved.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", entry.name, args.join(","))
    };
    let (system, expectations, caveat) = construct(entry.name, &full_name, &resolved)?;
    Ok(BuiltinSpec {
        name: full_name,
        params: resolved,
        system,
        expectations,
        caveat,
    })
}

/// `builtin` with every parameter at its default.
pub fn builtin_default(name: &str) -> Result<BuiltinSpec, CorpusError> {
    builtin(name, &Params::new())
}

/// Parses a reference such as `pin(r=1/3)` and builds it.
pub fn builtin_ref(text: &str) -> Result<BuiltinSpec, CorpusError> {
    let (name, params) = parse_builtin_ref(text)?;
    builtin(&name, &params)
}

/// Machine-readable index of the catalog at default parameters.
pub fn list_builtins() -> Vec<BuiltinInfo> {
    CATALOG
        .iter()
        .map(|e| BuiltinInfo {
            name: e.name,
            kind: e.kind,
            params: e.params.iter().map(|(name, default)| ParamInfo { name, default }).collect(),
            summary: e.summary,
            anchors: builtin_default(e.name)
                .map(|b| b.expectations.into_iter().map(|x| x.anchor).collect())
                .unwrap_or_default(),
        })
        .collect()
}

/// All catalog names in index order.
pub fn builtin_names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Onto piecewise-linear maps by name; `devil` is the level-4 staircase.
pub fn pl_builtin(name: &str) -> Result<PlMap, CorpusError> {
    let pts = |v: &[(i64, i64, i64, i64)]| -> Vec<(Scalar, Scalar)> {
        v.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()
    };
    let knots = match name {
        "tent" => pts(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)]),
        "identity" => return Ok(PlMap::identity()),
        "double_tent_h" => pts(&[(0, 1, 1, 2), (1, 4, 0, 1), (3, 4, 1, 1), (1, 1, 1, 2)]),
        "devil" => devil_knots(4),
        _ => return Err(CorpusError::UnknownName(name.to_string())),
    };
    PlMap::new(name, knots).map_err(|e| bad(name, e.to_string()))
}

/// Knots of the level-`level` piecewise-linear approximation of the Cantor function.
pub fn devil_knots(level: u32) -> Vec<(Scalar, Scalar)> {
    let mut knots = vec![(zero(), zero()), (one(), one())];
    for _ in 0..level {
        let third = rat(1, 3);
        let mut next: Vec<(Scalar, Scalar)> = knots.iter().map(|(x, y)| (x * &third, y * half())).collect();
        next.extend(
            knots
                .iter()
                .map(|(x, y)| (rat(2, 3) + x * &third, half() + y * half())),
        );
        knots = next;
    }
    knots
}

fn bad(name: &str, reason: impl Into<String>) -> CorpusError {
    CorpusError::BadParams {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn scalar_param(name: &str, params: &Params, key: &str) -> Result<Scalar, CorpusError> {
    parse_scalar(&params[key]).map_err(|e| bad(name, format!("{key}: {e}")))
}

fn in_range(name: &str, key: &str, x: &Scalar, lo: &Scalar, hi: &Scalar) -> Result<(), CorpusError> {
    if x < lo || x > hi {
        return Err(bad(
            name,
            format!("{key} = {} outside [{}, {}]", format_scalar(x), format_scalar(lo), format_scalar(hi)),
        ));
    }
    Ok(())
}

fn map(name: &str, text: &str) -> Result<System, CorpusError> {
    SetValuedMap::parse(name, text)
        .map(System::Map)
        .map_err(|e: SetMapError| bad(name, e.to_string()))
}

fn set(text: &str) -> ClosedSet {
    text.parse().expect("catalog set literal")
}

fn expect(check: Check, anchor: &str) -> Expectation {
    Expectation {
        check,
        anchor: anchor.to_string(),
    }
}

fn usc() -> Expectation {
    expect(Check::Usc { holds: true }, "upper semicontinuous")
}

fn value(at: Scalar, v: &str, anchor: &str) -> Expectation {
    expect(Check::Value { at, value: set(v) }, anchor)
}

type Built = (System, Vec<Expectation>, Option<String>);

fn construct(key: &str, name: &str, params: &Params) -> Result<Built, CorpusError> {
    const TENT: &str = "segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0";
    const DOUBLE_TENT: &str = "segment 0 1/4 cc -> 1/2 0\nsegment 1/4 3/4 cc -> 0 1\nsegment 3/4 1 cc -> 1 1/2";
    let mut caveat = None;
    let (system, expectations) = match key {
        "tent" => (
            map(name, TENT)?,
            vec![
                usc(),
                value(half(), "{1}", "T(1/2) = 1"),
                expect(
                    Check::Transitivity { eps: rat(1, 4), horizon: 40, status: Status::CertifiedYes },
                    "the tent map is transitive",
                ),
                expect(
                    Check::Sensitivity {
                        kind: SensitivityKind::Sensitive,
                        eps: rat(1, 4),
                        horizon: 16,
                        status: ProbeStatus::WitnessedYes,
                    },
                    "the tent map has sensitive dependence",
                ),
            ],
        ),
        "identity" => (
            map(name, "segment 0 1 cc -> 0 1")?,
            vec![
                usc(),
                expect(
                    Check::Transitivity { eps: rat(1, 4), horizon: 10, status: Status::CertifiedNo },
                    "the identity is not transitive",
                ),
            ],
        ),
        "double_tent_h" => (
            map(name, DOUBLE_TENT)?,
            vec![
                usc(),
                value(rat(1, 6), "{1/6}", "h fixes 1/6"),
                value(rat(5, 6), "{5/6}", "h fixes 5/6"),
                value(half(), "{1/2}", "h(1/2) = 1/2"),
            ],
        ),
        "double_tent_f" => {
            let s = scalar_param(name, params, "s")?;
            let t = scalar_param(name, params, "t")?;
            in_range(name, "s", &s, &half(), &one())?;
            in_range(name, "t", &t, &zero(), &half())?;
            caveat = Some(format!(
                "s = {} and t = {} are rational stand-ins for points with dense h-orbits; \
                 density claims hold only up to the stated horizons",
                format_scalar(&s),
                format_scalar(&t)
            ));
            let text = format!(
                "{DOUBLE_TENT}\npoint 1/6 -> {{{}}}\npoint 5/6 -> {{{}}}",
                format_scalar(&s),
                format_scalar(&t)
            );
            let mut ex = vec![
                usc(),
                value(rat(1, 6), &format!("{{1/6}} | {{{}}}", format_scalar(&s)), "F(1/6) = {1/6, s}"),
                value(rat(5, 6), &format!("{{5/6}} | {{{}}}", format_scalar(&t)), "F(5/6) = {5/6, t}"),
                expect(
                    Check::Transitivity { eps: rat(1, 8), horizon: 40, status: Status::CertifiedYes },
                    "F is transitive",
                ),
            ];
            for k in [1, 4, 7] {
                ex.push(expect(
                    Check::WeakDense { p: rat(k, 23), eps: rat(1, 8), horizon: 200, status: Status::CertifiedNo },
                    "F has no weak dense orbit at the sampled point",
                ));
            }
            (map(name, &text)?, ex)
        }
        "flip" => (
            map(name, "segment 0 1 cc -> 0 1\nsegment 0 1 cc -> 1 0")?,
            vec![
                usc(),
                value(rat(3, 10), "{3/10} | {7/10}", "F(t) = {t, 1 - t}"),
                value(half(), "{1/2}", "F(1/2) = {1/2}"),
                expect(Check::ValuesConnected { holds: false }, "values are two-point sets"),
                expect(
                    Check::Level { z: rat(3, 10), depth: 4, k: 3, level: set("{3/10} | {7/10}") },
                    "every level of the orbit of 3/10 is {3/10, 7/10}",
                ),
            ],
        ),
        "devil_pair" => {
            let level: u32 = params["level"]
                .parse()
                .map_err(|_| bad(name, "level must be a non-negative integer"))?;
            if !(1..=8).contains(&level) {
                return Err(bad(name, "level must lie in 1..=8"));
            }
            caveat = Some(format!(
                "f is the level-{level} piecewise-linear approximation of the Cantor function"
            ));
            let mut text = String::from("segment 0 1 cc -> 0 1");
            for w in devil_knots(level).windows(2) {
                let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                text.push_str(&format!(
                    "\nsegment {} {} cc -> {} {}",
                    format_scalar(x0),
                    format_scalar(x1),
                    format_scalar(y0),
                    format_scalar(y1)
                ));
            }
            (
                map(name, &text)?,
                vec![
                    usc(),
                    value(half(), "{1/2}", "f(1/2) = 1/2"),
                    value(rat(1, 3), "{1/3} | {1/2}", "F(1/3) = {1/3, 1/2}"),
                    expect(
                        Check::FixedSingletons { points: vec![zero(), half(), one()] },
                        "F(t) = {t} exactly at 0, 1/2 and 1",
                    ),
                ],
            )
        }
        "fan0" => (
            map(name, "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]")?,
            vec![
                usc(),
                expect(Check::Lsc { holds: false }, "not lower semicontinuous at 0"),
                value(zero(), "[0,1]", "F(0) = [0,1]"),
                expect(Check::ValuesConnected { holds: true }, "values are intervals"),
                expect(
                    Check::Arms {
                        z: zero(),
                        depth: 6,
                        counts: vec![1; 5],
                        diameters: (1..=5).map(|k| pow_half(k)).collect(),
                    },
                    "the orbit set of 0 is a fan of arcs with diameters tending to zero",
                ),
            ],
        ),
        "fan01" => (
            map(name, "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]\npoint 1 -> [0,1]")?,
            vec![
                usc(),
                value(one(), "[0,1]", "F(1) = [0,1]"),
                value(zero(), "[0,1]", "F(0) = [0,1]"),
                expect(
                    Check::Arms {
                        z: zero(),
                        depth: 5,
                        counts: vec![1, 2, 4, 8],
                        diameters: (1..=4).map(|k| pow_half(k)).collect(),
                    },
                    "arm families indexed by binary words, diameter halving per level",
                ),
            ],
        ),
        "pin" => {
            let r = scalar_param(name, params, "r")?;
            in_range(name, "r", &r, &zero(), &one())?;
            let rs = format_scalar(&r);
            let probe = if r == rat(1, 5) { rat(1, 7) } else { rat(1, 5) };
            (
                map(name, &format!("rect 0 1 cc -> {{{rs}}}\npoint {rs} -> [0,1]"))?,
                vec![
                    usc(),
                    value(probe, &format!("{{{rs}}}"), "F(t) = {r} for t ≠ r"),
                    value(r.clone(), "[0,1]", "F(r) = [0,1]"),
                    expect(Check::ValuesConnected { holds: true }, "values are intervals"),
                ],
            )
        }
        "tent_aug_f" => (
            map(name, &format!("point 0 -> [0,1]\n{}", TENT.replacen("0 1/2 cc", "0 1/2 oc", 1)))?,
            vec![
                usc(),
                value(zero(), "[0,1]", "F(0) = [0,1]"),
                value(half(), "{1}", "F(1/2) = 1"),
                expect(
                    Check::Sensitivity {
                        kind: SensitivityKind::Sensitive,
                        eps: rat(2, 5),
                        horizon: 64,
                        status: ProbeStatus::WitnessedYes,
                    },
                    "F is sensitive",
                ),
                expect(
                    Check::Sensitivity {
                        kind: SensitivityKind::Strong,
                        eps: rat(2, 5),
                        horizon: 64,
                        status: ProbeStatus::Refuted,
                    },
                    "F is not strongly sensitive: F^m(0) = [0,1] contains every other iterate",
                ),
                expect(
                    Check::LiYorke { eps: rat(1, 4), eta: rat(1, 16), horizon: 64, status: ProbeStatus::Refuted },
                    "F is not Li-Yorke sensitive: H(F^j(0), F^j(y)) >= 1/2",
                ),
            ],
        ),
        "tent_aug_g" => {
            let t0 = scalar_param(name, params, "t0")?;
            in_range(name, "t0", &t0, &zero(), &one())?;
            caveat = Some(format!(
                "t0 = {} stands in for a point with a dense tent orbit; its orbit is periodic, so \
                 the expectations hold only at the stated horizons",
                format_scalar(&t0)
            ));
            (
                map(name, &format!("rect 0 1 cc -> {{{}}}\n{TENT}", format_scalar(&t0)))?,
                vec![
                    usc(),
                    value(half(), &format!("{{{}}} | {{1}}", format_scalar(&t0)), "G(t) = {t0, T(t)}"),
                    expect(
                        Check::Sensitivity {
                            kind: SensitivityKind::Weak,
                            eps: rat(1, 4),
                            horizon: 16,
                            status: ProbeStatus::WitnessedYes,
                        },
                        "G is weakly sensitive",
                    ),
                    expect(
                        Check::Sensitivity {
                            kind: SensitivityKind::Sensitive,
                            eps: rat(1, 4),
                            horizon: 64,
                            status: ProbeStatus::NoWitnessAtBudget,
                        },
                        "G is not sensitive",
                    ),
                ],
            )
        }
        "slide" => (
            map(name, "segment 0 1 cc -> 0 1\npoint 1 -> [0,1]")?,
            vec![
                usc(),
                value(one(), "[0,1]", "F(1) = [0,1]"),
                expect(
                    Check::Transitivity { eps: rat(1, 8), horizon: 40, status: Status::CertifiedNo },
                    "F is not transitive",
                ),
                expect(
                    Check::WeakDense { p: one(), eps: rat(1, 8), horizon: 40, status: Status::CertifiedYes },
                    "1 has a weak dense orbit",
                ),
                expect(
                    Check::WeakDense { p: rat(3, 10), eps: rat(1, 8), horizon: 40, status: Status::CertifiedNo },
                    "points below 1 are fixed",
                ),
            ],
        ),
        "ramp" => (
            map(
                name,
                "point 0 -> [1/2,1]\nsegment 0 1/4 cc -> 1/2 0\nsegment 1/4 1/2 cc -> 0 1/2\nsegment 1/2 1 cc -> 1/2 1",
            )?,
            vec![
                usc(),
                value(zero(), "[1/2,1]", "F(0) = [1/2,1]"),
                value(rat(1, 4), "{0}", "F(1/4) = 0"),
                expect(Check::ValuesConnected { holds: true }, "values are intervals"),
            ],
        ),
        "const_full" => (
            map(name, "rect 0 1 cc -> [0,1]")?,
            vec![
                usc(),
                expect(Check::Lsc { holds: true }, "constant maps are lower semicontinuous"),
                expect(
                    Check::Sensitivity {
                        kind: SensitivityKind::Weak,
                        eps: rat(1, 2),
                        horizon: 4,
                        status: ProbeStatus::WitnessedYes,
                    },
                    "branches of F(x) = [0,1] separate",
                ),
                expect(
                    Check::Sensitivity {
                        kind: SensitivityKind::Sensitive,
                        eps: rat(1, 2),
                        horizon: 4,
                        status: ProbeStatus::Refuted,
                    },
                    "all iterate sets coincide",
                ),
            ],
        ),
        "nonusc_f" => (
            map(name, "point 0 -> {0}\nrect 0 1 oc -> [0,1]")?,
            vec![
                expect(Check::Usc { holds: false }, "F is not upper semicontinuous at 0"),
                value(zero(), "{0}", "F(0) = {0}"),
            ],
        ),
        "nonusc_g" => (
            map(name, "point 0 -> {0}\nband 0 1 oc -> 0 1 1 1")?,
            vec![
                expect(Check::Usc { holds: false }, "G is not upper semicontinuous at 0"),
                value(half(), "[1/2,1]", "G(t) = [t,1]"),
            ],
        ),
        "preimage_union" => {
            let names: Vec<&str> = params["maps"].split('+').map(str::trim).collect();
            let fs = names.iter().map(|n| pl_builtin(n)).collect::<Result<Vec<_>, _>>()?;
            let f = preimage_union_map(&fs)
                .map_err(|e| bad(name, e.to_string()))?
                .renamed(name);
            let mut ex = vec![usc()];
            if names == ["tent", "identity"] {
                ex.push(value(half(), "{1/4} | {1/2} | {3/4}", "F(x) = tent^{-1}(x) ∪ {x}"));
                ex.push(value(one(), "{1/2} | {1}", "F(1) = {1/2, 1}"));
            }
            (System::Map(f), ex)
        }
        "cycle3" => (
            finite(name, &[("a", &["b"]), ("b", &["c"]), ("c", &["a"])])?,
            vec![
                expect(Check::Finite { of: FiniteProperty::Transitive, holds: true }, "a single cycle is transitive"),
                expect(Check::Finite { of: FiniteProperty::DenseMinimal, holds: true }, "every state has a dense orbit"),
                expect(Check::Finite { of: FiniteProperty::WeaklySensitive, holds: false }, "single-valued"),
            ],
        ),
        "swap" => (
            finite(name, &[("a", &["b"]), ("b", &["a"])])?,
            vec![
                expect(Check::Finite { of: FiniteProperty::Transitive, holds: true }, "a 2-cycle is transitive"),
                expect(
                    Check::Finite { of: FiniteProperty::WeakDenseMinimal, holds: true },
                    "every state has a weak dense orbit",
                ),
            ],
        ),
        "split" => (
            finite(name, &[("a", &["a", "b"]), ("b", &["a", "b"])])?,
            vec![
                expect(Check::Finite { of: FiniteProperty::Transitive, holds: true }, "complete relation"),
                expect(
                    Check::Finite { of: FiniteProperty::WeaklySensitive, holds: true },
                    "branches separate immediately",
                ),
            ],
        ),
        "fixed_pair" => (
            finite(name, &[("a", &["a"]), ("b", &["b"])])?,
            vec![
                expect(Check::Finite { of: FiniteProperty::Transitive, holds: false }, "no state reaches the other"),
                expect(Check::FiniteWeakDense { state: "a".into(), holds: false }, "a only reaches itself"),
            ],
        ),
        "convergent_sequence" => {
            let n: usize = params["n"].parse().map_err(|_| bad(name, "n must be a positive integer"))?;
            if !(1..=11).contains(&n) {
                return Err(bad(name, "n must lie in 1..=11"));
            }
            caveat = Some(format!("truncation of {{1/k : k >= 1}} ∪ {{0}} to {} states", n + 1));
            let labels: Vec<String> = (1..=n)
                .map(|k| format_scalar(&rat(1, k as i64)))
                .chain(std::iter::once("0".to_string()))
                .collect();
            let rest: crate::setmap::StateSet = ((1u64 << (n + 1)) - 1) & !1;
            let table: Vec<crate::setmap::StateSet> =
                (0..=n).map(|i| if i == 0 { rest } else { 1 << i }).collect();
            let s = FiniteSystem::new(labels, table).map_err(|e| bad(name, e.to_string()))?;
            (
                System::Finite(s),
                vec![
                    expect(
                        Check::Finite { of: FiniteProperty::Transitive, holds: false },
                        "F(x) = {x} away from 1, so no state reaches 1",
                    ),
                    expect(
                        Check::FiniteWeakDense { state: "1".into(), holds: false },
                        "F^k(1) = X minus {1} misses 1",
                    ),
                    expect(
                        Check::Finite { of: FiniteProperty::WeaklySensitive, holds: n == 1 },
                        "only 1 has more than one successor",
                    ),
                ],
            )
        }
        _ => unreachable!("catalog entry without constructor"),
    };
    Ok((system, expectations, caveat))
}

fn pow_half(k: usize) -> Scalar {
    (0..k).fold(one(), |w, _| w / int(2))
}

fn finite(name: &str, edges: &[(&str, &[&str])]) -> Result<System, CorpusError> {
    let labels: Vec<&str> = edges.iter().map(|e| e.0).collect();
    FiniteSystem::from_edges(&labels, edges)
        .map(System::Finite)
        .map_err(|e| bad(name, e.to_string()))
}

impl Expectation {
    /// Executes the check against `system`.
    pub fn run(&self, system: &System) -> Outcome {
        match (system, &self.check) {
            (System::Map(f), check) => run_map(f, check),
            (System::Finite(s), check) => run_finite(s, check),
        }
    }
}

impl BuiltinSpec {
    /// Runs every expectation, in order.
    pub fn run_all(&self) -> Vec<(Expectation, Outcome)> {
        self.expectations
            .iter()
            .map(|e| (e.clone(), e.run(&self.system)))
            .collect()
    }
}

fn outcome(passed: bool, observed: impl fmt::Display) -> Outcome {
    Outcome {
        passed,
        observed: observed.to_string(),
    }
}

fn mismatch(what: &str) -> Outcome {
    outcome(false, format!("{what} check does not apply to this system"))
}

fn run_map(f: &SetValuedMap, check: &Check) -> Outcome {
    match check {
        Check::Usc { holds } => {
            let v = usc_check(f);
            outcome(v.holds == *holds, v.holds)
        }
        Check::Lsc { holds } => {
            let v = lsc_check(f);
            outcome(v.holds == *holds, v.holds)
        }
        Check::ValuesConnected { holds } => {
            let v = f.values_connected_check();
            outcome(v.holds == Tri::from(*holds), format!("{:?}", v.holds).to_lowercase())
        }
        Check::Value { at, value } => match f.evaluate(at) {
            Ok(v) => outcome(&v == value, v),
            Err(e) => outcome(false, e),
        },
        Check::FixedSingletons { points } => match f.fixed_singletons() {
            Some(found) => {
                let shown: Vec<String> = found.iter().map(format_scalar).collect();
                outcome(&found == points, format!("{{{}}}", shown.join(", ")))
            }
            None => outcome(false, "an interval of fixed singletons"),
        },
        Check::Level { z, depth, k, level } => match OrbitTree::build(f, z, *depth).and_then(|t| t.project(*k)) {
            Ok(v) => outcome(&v == level, v),
            Err(e) => outcome(false, e),
        },
        Check::Arms { z, depth, counts, diameters } => match arm_families(f, z, *depth) {
            Ok(arms) => {
                let lens = 1..*depth;
                let got_counts: Vec<usize> = lens.clone().map(|l| arms.iter().filter(|a| a.len() == l).count()).collect();
                let uniform = lens.clone().all(|l| {
                    let mut ds = arms.iter().filter(|a| a.len() == l).map(|a| &a.diameter);
                    ds.next().is_none_or(|d0| ds.all(|d| d == d0))
                });
                let got_diams: Vec<Scalar> = lens
                    .map(|l| arms.iter().find(|a| a.len() == l).map(|a| a.diameter.clone()).unwrap_or_else(zero))
                    .collect();
                let shown: Vec<String> = got_diams.iter().map(format_scalar).collect();
                outcome(
                    uniform && &got_counts == counts && &got_diams == diameters,
                    format!("counts {got_counts:?}, diameters [{}]", shown.join(", ")),
                )
            }
            Err(e) => outcome(false, e),
        },
        Check::Transitivity { eps, horizon, status } => {
            let v = transitivity_probe(f, eps, *horizon);
            outcome(v.status == *status && v.recheck_transitivity(f), v.status.as_str())
        }
        Check::WeakDense { p, eps, horizon, status } => match weak_dense_probe(f, p, eps, *horizon) {
            Ok((v, _)) => outcome(v.status == *status && v.recheck_density(f, p), v.status.as_str()),
            Err(e) => outcome(false, e),
        },
        Check::Sensitivity { kind, eps, horizon, status } => {
            let v = sensitivity_probe(*kind, f, eps, &ProbeBudget::default().with_horizon(*horizon));
            outcome(v.status == *status && v.recheck(f), v.status.as_str())
        }
        Check::LiYorke { eps, eta, horizon, status } => {
            let v = liyorke_probe(f, eps, eta, (1, *horizon), &ProbeBudget::default().with_horizon(*horizon));
            outcome(v.status == *status && v.recheck(f), v.status.as_str())
        }
        Check::Finite { .. } | Check::FiniteWeakDense { .. } => mismatch("finite"),
    }
}

fn run_finite(s: &FiniteSystem, check: &Check) -> Outcome {
    let report = match finite_oracle(s) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    match check {
        Check::Finite { of, holds } => {
            let got = match of {
                FiniteProperty::Transitive => report.transitive,
                FiniteProperty::DenseMinimal => report.dense_minimal,
                FiniteProperty::WeakDenseMinimal => report.weak_dense_minimal,
                FiniteProperty::WeaklySensitive => report.sensitivity.weak,
            };
            outcome(got == *holds, got)
        }
        Check::FiniteWeakDense { state, holds } => match s.labels().iter().position(|l| l == state) {
            Some(i) => outcome(report.weak_dense[i] == *holds, report.weak_dense[i]),
            None => outcome(false, format!("no state `{state}`")),
        },
        _ => mismatch("map"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, &str)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn eval(name: &str, p: &Params, x: Scalar) -> ClosedSet {
        builtin(name, p).unwrap().system.as_map().unwrap().evaluate(&x).unwrap()
    }

    #[test]
    fn documented_values() {
        assert_eq!(eval("tent", &Params::new(), half()), set("{1}"));
        assert_eq!(eval("pin", &params(&[("r", "1/2")]), rat(1, 5)), set("{1/2}"));
        assert_eq!(eval("fan01", &Params::new(), one()), ClosedSet::full());
    }

    #[test]
    fn names_carry_parameters() {
        assert_eq!(builtin_default("devil_pair").unwrap().name, "devil_pair(level=6)");
        assert_eq!(builtin_ref("pin(r=1/3)").unwrap().name, "pin(r=1/3)");
        assert_eq!(builtin_ref("tent_aug_F").unwrap().name, "tent_aug_f");
        assert_eq!(builtin_ref("double_tent_F").unwrap().name, "double_tent_f(s=10/19,t=9/19)");
    }

    #[test]
    fn errors() {
        assert_eq!(builtin_default("nope").unwrap_err(), CorpusError::UnknownName("nope".into()));
        assert!(matches!(builtin("pin", &params(&[("q", "1")])), Err(CorpusError::BadParams { .. })));
        assert!(matches!(builtin("pin", &params(&[("r", "2")])), Err(CorpusError::BadParams { .. })));
        assert!(matches!(builtin("devil_pair", &params(&[("level", "x")])), Err(CorpusError::BadParams { .. })));
        assert!(matches!(builtin_ref("pin(r=1/2"), Err(CorpusError::BadParams { .. })));
        assert!(matches!(
            builtin("preimage_union", &params(&[("maps", "flip")])),
            Err(CorpusError::UnknownName(_))
        ));
    }

    #[test]
    fn devil_knots_are_monotone_and_fix_the_middle() {
        let k = devil_knots(3);
        assert_eq!(k.len(), 16);
        assert!(k.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        let f = PlMap::new("d", k).unwrap();
        assert_eq!(f.eval(&half()), half());
        assert_eq!(f.eval(&rat(1, 9)), rat(1, 4));
    }

    #[test]
    fn closed_domain_maps_are_usc() {
        for name in builtin_names() {
            let b = builtin_default(name).unwrap();
            if let System::Map(f) = &b.system {
                assert_eq!(usc_check(f).holds, !name.starts_with("nonusc"), "{name}");
            }
        }
    }

    #[test]
    fn convergent_sequence_shape() {
        let b = builtin("convergent_sequence", &params(&[("n", "3")])).unwrap();
        let s = b.system.as_finite().unwrap();
        assert_eq!(s.labels(), ["1", "1/2", "1/3", "0"]);
        assert_eq!(s.label_set(s.successors(0)), ["1/2", "1/3", "0"]);
        assert_eq!(s.label_set(s.successors(2)), ["1/3"]);
    }

    #[test]
    fn index_lists_every_entry() {
        let idx = list_builtins();
        assert_eq!(idx.len(), CATALOG.len());
        assert!(idx.iter().all(|e| !e.anchors.is_empty()));
        let pin = idx.iter().find(|e| e.name == "pin").unwrap();
        assert_eq!(pin.params, vec![ParamInfo { name: "r", default: "1/2" }]);
    }

    #[test]
    fn cheap_expectations_pass() {
        for name in ["flip", "fan0", "fan01", "pin", "ramp", "nonusc_f", "nonusc_g", "devil_pair", "cycle3", "convergent_sequence"] {
            let b = builtin_default(name).unwrap();
            for (e, o) in b.run_all() {
                assert!(o.passed, "{name}: {} observed {}", e.anchor, o.observed);
            }
        }
    }
}
