//! Witness search for strong, ordinary, weak and Li-Yorke sensitivity.
//!
//! Probes are semi-decisions: a positive answer carries exact witnesses, one
//! per base point and neighbourhood radius, each replayable from scratch. A
//! negative answer is relative to the budget unless a certificate proves the
//! condition cannot hold.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::setmap::{members, FiniteSystem, SetValuedMap, StateSet};
use crate::space::{hausdorff, int, maxdist, one, rat, zero, ClosedSet, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SensitivityKind {
    Strong,
    Sensitive,
    Weak,
    #[serde(rename = "liyorke")]
    LiYorke,
}

impl SensitivityKind {
    pub const ALL: [SensitivityKind; 4] = [
        SensitivityKind::Strong,
        SensitivityKind::Sensitive,
        SensitivityKind::Weak,
        SensitivityKind::LiYorke,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SensitivityKind::Strong => "strong",
            SensitivityKind::Sensitive => "sensitive",
            SensitivityKind::Weak => "weak",
            SensitivityKind::LiYorke => "liyorke",
        }
    }
}

impl fmt::Display for SensitivityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    WitnessedYes,
    NoWitnessAtBudget,
    Refuted,
}

impl ProbeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeStatus::WitnessedYes => "witnessed_yes",
            ProbeStatus::NoWitnessAtBudget => "no_witness_at_budget",
            ProbeStatus::Refuted => "refuted",
        }
    }
}

/// Base points `0, step, 2 step, ..., 1`; for each, radii `δ` from the
/// schedule; iterates `F^m` for `m <= horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeBudget {
    #[serde(with = "crate::space::exact")]
    pub base_step: Scalar,
    #[serde(with = "crate::space::exact_seq")]
    pub deltas: Vec<Scalar>,
    pub horizon: usize,
    /// Li-Yorke: separated indices required in the window.
    pub separations: usize,
    pub candidates: CandidateRule,
}

/// Which `y` near `x` are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateRule {
    /// `x ± δ/2`, grid points and breakpoints within `δ` of `x`.
    Standard,
    /// Standard plus `x ± δ/(2^k+1)` for `k = 2..=6`. The extra points are
    /// not dyadic, so under doubling-type maps their orbits do not collapse
    /// onto a fixed point.
    Dense,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget {
            base_step: rat(1, 8),
            deltas: vec![rat(1, 8), rat(1, 64), rat(1, 512), rat(1, 4096)],
            horizon: 64,
            separations: 10,
            candidates: CandidateRule::Standard,
        }
    }
}

impl ProbeBudget {
    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_candidates(mut self, rule: CandidateRule) -> Self {
        self.candidates = rule;
        self
    }

    pub fn base_points(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        let mut x = zero();
        while x < one() {
            out.push(x.clone());
            x += &self.base_step;
        }
        out.push(one());
        out
    }
}

/// `x`, `y` and the exponent `m` at which the kind's condition holds.
///
/// For `weak` the compared sets are `F^m(x)` and `F^m(y)`, the `(m+1)`-th
/// coordinates of the two orbit sets. For `liyorke`, `m` is the first index of
/// the window where the distance peaks, and `measured` is `[min, max]` over
/// the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SensitivityWitness {
    pub kind: SensitivityKind,
    #[serde(with = "crate::space::exact")]
    pub x: Scalar,
    #[serde(with = "crate::space::exact")]
    pub y: Scalar,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    #[serde(with = "crate::space::exact")]
    pub eps: Scalar,
    #[serde(with = "crate::space::exact_seq")]
    pub measured: Vec<Scalar>,
    /// Li-Yorke only: indices with distance `> eps` and `>= eps`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separated: Option<(usize, usize)>,
}

impl SensitivityWitness {
    /// Recomputes the measured values from `f` and checks the condition.
    pub fn replay(&self, f: &SetValuedMap) -> bool {
        match self.kind {
            SensitivityKind::LiYorke => {
                let Some((k1, k2)) = self.window else {
                    return false;
                };
                let Ok(xs) = f.iterate(&self.x, 0) else {
                    return false;
                };
                let Ok(ys) = f.iterate(&self.y, 0) else {
                    return false;
                };
                let d = window_distances(f, &xs, &ys, k1, k2);
                let s = summarize_window(&d, k1, &self.eps);
                s.measured == self.measured && Some(s.separated) == self.separated && s.argmax == self.m
            }
            kind => measure(kind, f, &self.x, &self.y, self.m).is_some_and(|v| v == self.measured[0] && v >= self.eps),
        }
    }

    /// Checks the condition of `kind` at the same `(x, y, m, eps)`.
    pub fn satisfies(&self, kind: SensitivityKind, f: &SetValuedMap) -> bool {
        if kind == SensitivityKind::LiYorke {
            return self.kind == kind && self.replay(f);
        }
        measure(kind, f, &self.x, &self.y, self.m).is_some_and(|v| v >= self.eps)
    }
}

fn measure(kind: SensitivityKind, f: &SetValuedMap, x: &Scalar, y: &Scalar, m: usize) -> Option<Scalar> {
    let a = f.iterate(x, m).ok()?;
    let b = f.iterate(y, m).ok()?;
    Some(distance(kind, &a, &b))
}

fn distance(kind: SensitivityKind, fx: &ClosedSet, fy: &ClosedSet) -> Scalar {
    match kind {
        SensitivityKind::Strong => fy.directed_excess(fx),
        SensitivityKind::Sensitive | SensitivityKind::LiYorke => hausdorff(fx, fy),
        SensitivityKind::Weak => maxdist(fx, fy),
    }
}

/// Proof that the condition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Certificate {
    /// `F(x) = [0,1]` and `F([0,1]) = [0,1]`, so `F^m(x) = [0,1]` for all
    /// `m` and no set escapes its neighbourhood: strong sensitivity fails at `x`.
    FullOrbit {
        #[serde(with = "crate::space::exact")]
        x: Scalar,
    },
    /// `F` is constant, so `F^m(x) = F^m(y)` for all `x`, `y`, `m >= 1`.
    ConstantMap { value: ClosedSet },
    /// `F^m(x) = [0,1]` for all `m` and every value is a point or `[0,1]`.
    /// Every `y` either reaches `[0,1]` (distance eventually 0) or stays a
    /// point forever (distance always at least `bound`), so no `y` is
    /// both proximal to `x` and separated from it.
    Dichotomy {
        #[serde(with = "crate::space::exact")]
        x: Scalar,
        #[serde(with = "crate::space::exact")]
        bound: Scalar,
    },
}

impl Certificate {
    pub fn recheck(&self, f: &SetValuedMap) -> bool {
        match self {
            Certificate::FullOrbit { x } => full_orbit(f, x),
            Certificate::ConstantMap { value } => constant_value(f).as_ref() == Some(value),
            Certificate::Dichotomy { x, bound } => {
                full_orbit(f, x) && points_or_full(f) && *bound == min_distance_to_full()
            }
        }
    }

    pub fn refutes(&self, kind: SensitivityKind) -> bool {
        match self {
            Certificate::FullOrbit { .. } => kind == SensitivityKind::Strong,
            Certificate::ConstantMap { .. } => kind != SensitivityKind::Weak,
            Certificate::Dichotomy { .. } => kind == SensitivityKind::LiYorke,
        }
    }
}

fn full_orbit(f: &SetValuedMap, x: &Scalar) -> bool {
    f.evaluate(x).is_ok_and(|v| v.is_full()) && f.image(&ClosedSet::full()).is_full()
}

fn constant_value(f: &SetValuedMap) -> Option<ClosedSet> {
    if !f.strips().iter().all(|s| s.lower.is_constant() && s.upper.is_constant()) {
        return None;
    }
    // with constant strips, the value only changes at breakpoints
    let mut values = f.probe_points().into_iter().map(|x| f.evaluate(&x).expect("map is total"));
    let first = values.next()?;
    values.all(|v| v == first).then_some(first)
}

fn points_or_full(f: &SetValuedMap) -> bool {
    f.strips().iter().all(|s| {
        s.is_singleton() || (s.lower.is_constant() && s.upper.is_constant() && s.value_at(&zero()).lo == zero() && s.value_at(&zero()).hi == one())
    })
}

// min over c of H([0,1], {c})
fn min_distance_to_full() -> Scalar {
    hausdorff(&ClosedSet::full(), &ClosedSet::point(rat(1, 2)))
}

fn certificates(kind: SensitivityKind, f: &SetValuedMap, bases: &[Scalar]) -> Vec<Certificate> {
    let mut out = Vec::new();
    if let Some(value) = constant_value(f) {
        if kind != SensitivityKind::Weak {
            out.push(Certificate::ConstantMap { value });
        }
    }
    match kind {
        SensitivityKind::Strong => {
            out.extend(bases.iter().filter(|x| full_orbit(f, x)).map(|x| Certificate::FullOrbit { x: x.clone() }));
        }
        SensitivityKind::LiYorke if points_or_full(f) => {
            out.extend(bases.iter().filter(|x| full_orbit(f, x)).map(|x| Certificate::Dichotomy {
                x: x.clone(),
                bound: min_distance_to_full(),
            }));
        }
        _ => {}
    }
    out
}

/// Base point and radius with no witness found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unwitnessed {
    #[serde(with = "crate::space::exact")]
    pub x: Scalar,
    #[serde(with = "crate::space::exact")]
    pub delta: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SensitivityVerdict {
    pub kind: SensitivityKind,
    pub status: ProbeStatus,
    #[serde(with = "crate::space::exact")]
    pub eps: Scalar,
    pub budget: ProbeBudget,
    /// Least witness in `(x, delta)` order.
    pub headline: Option<SensitivityWitness>,
    pub witnesses: Vec<SensitivityWitness>,
    pub unwitnessed: Vec<Unwitnessed>,
    pub certificates: Vec<Certificate>,
    /// Li-Yorke only: `(window, eta)` used for the windowed surrogate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub liyorke: Option<LiYorkeParams>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiYorkeParams {
    pub window: (usize, usize),
    #[serde(with = "crate::space::exact")]
    pub eta: Scalar,
    /// Status if separation is counted with `>= eps` instead of `> eps`.
    pub status_nonstrict: ProbeStatus,
}

impl SensitivityVerdict {
    /// Every witness replays and every certificate rechecks.
    pub fn recheck(&self, f: &SetValuedMap) -> bool {
        self.witnesses.iter().all(|w| w.replay(f)) && self.certificates.iter().all(|c| c.recheck(f))
    }
}

fn candidates(f: &SetValuedMap, x: &Scalar, delta: &Scalar, budget: &ProbeBudget) -> Vec<Scalar> {
    let mut out: BTreeSet<Scalar> = BTreeSet::new();
    let near = |y: &Scalar| y >= &zero() && y <= &one() && num::Signed::abs(&(y - x)) < *delta;
    let mut push = |y: Scalar| {
        if near(&y) && y != *x {
            out.insert(y);
        }
    };
    let h = delta / int(2);
    push(x - &h);
    push(x + &h);
    if budget.candidates == CandidateRule::Dense {
        for k in 2..=6 {
            let d = delta / int((1 << k) + 1);
            push(x - &d);
            push(x + &d);
        }
    }
    for b in budget.base_points() {
        push(b);
    }
    for b in f.breakpoints() {
        push(b);
    }
    out.into_iter().collect()
}

fn orbit_sets(f: &SetValuedMap, x: &Scalar, n: usize) -> Vec<ClosedSet> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(ClosedSet::point(x.clone()));
    for i in 0..n {
        let next = f.image(&out[i]);
        let fixed = next == out[i];
        out.push(next);
        if fixed {
            out.resize(n + 1, out[i].clone());
            break;
        }
    }
    out
}

/// Current iterate of one candidate; stops applying `f` once a fixed set is reached.
struct Stepper {
    set: ClosedSet,
    fixed: bool,
}

impl Stepper {
    fn new(y: &Scalar) -> Self {
        Stepper {
            set: ClosedSet::point(y.clone()),
            fixed: false,
        }
    }

    fn advance(&mut self, f: &SetValuedMap) {
        if !self.fixed {
            let next = f.image(&self.set);
            self.fixed = next == self.set;
            self.set = next;
        }
    }
}

/// Orbit sets `F^0, ..., F^n` of every base point and breakpoint. These are
/// candidates for most neighbourhoods, so each orbit is computed once.
fn shared_orbits(f: &SetValuedMap, budget: &ProbeBudget, n: usize) -> BTreeMap<Scalar, Vec<ClosedSet>> {
    let points: BTreeSet<Scalar> = budget.base_points().into_iter().chain(f.breakpoints()).collect();
    let points: Vec<Scalar> = points.into_iter().collect();
    points.into_par_iter().map(|x| {
        let orbit = orbit_sets(f, &x, n);
        (x, orbit)
    }).collect()
}

/// Probe for strong, ordinary or weak sensitivity at `eps`.
pub fn sensitivity_probe(kind: SensitivityKind, f: &SetValuedMap, eps: &Scalar, budget: &ProbeBudget) -> SensitivityVerdict {
    assert!(kind != SensitivityKind::LiYorke, "use liyorke_probe");
    let bases = budget.base_points();
    let certs = certificates(kind, f, &bases);
    let m_range: Vec<usize> = match kind {
        SensitivityKind::Weak => (0..budget.horizon).collect(),
        _ => (1..=budget.horizon).collect(),
    };
    let shared = shared_orbits(f, budget, budget.horizon);
    let per_base: Vec<Vec<Result<SensitivityWitness, Unwitnessed>>> = bases
        .par_iter()
        .map(|x| {
            let xs = &shared[x];
            budget
                .deltas
                .iter()
                .map(|delta| {
                    let ys = candidates(f, x, delta, budget);
                    // orbits of the other candidates advance one image per step
                    let mut own: Vec<Option<Stepper>> =
                        ys.iter().map(|y| (!shared.contains_key(y)).then(|| Stepper::new(y))).collect();
                    let mut reached = 0;
                    for &m in &m_range {
                        while reached < m {
                            for s in own.iter_mut().flatten() {
                                s.advance(f);
                            }
                            reached += 1;
                        }
                        for (y, mine) in ys.iter().zip(&own) {
                            let fy = match mine {
                                Some(s) => &s.set,
                                None => &shared[y][m],
                            };
                            let d = distance(kind, &xs[m], fy);
                            if d >= *eps {
                                return Ok(SensitivityWitness {
                                    kind,
                                    x: x.clone(),
                                    y: y.clone(),
                                    m,
                                    window: None,
                                    eps: eps.clone(),
                                    measured: vec![d],
                                    separated: None,
                                });
                            }
                        }
                    }
                    Err(Unwitnessed {
                        x: x.clone(),
                        delta: delta.clone(),
                    })
                })
                .collect()
        })
        .collect();
    assemble(kind, eps, budget, per_base, certs, None)
}

fn assemble(
    kind: SensitivityKind,
    eps: &Scalar,
    budget: &ProbeBudget,
    per_base: Vec<Vec<Result<SensitivityWitness, Unwitnessed>>>,
    certificates: Vec<Certificate>,
    liyorke: Option<LiYorkeParams>,
) -> SensitivityVerdict {
    let mut witnesses = Vec::new();
    let mut unwitnessed = Vec::new();
    for r in per_base.into_iter().flatten() {
        match r {
            Ok(w) => witnesses.push(w),
            Err(u) => unwitnessed.push(u),
        }
    }
    let status = if certificates.iter().any(|c| c.refutes(kind)) {
        ProbeStatus::Refuted
    } else if unwitnessed.is_empty() {
        ProbeStatus::WitnessedYes
    } else {
        ProbeStatus::NoWitnessAtBudget
    };
    SensitivityVerdict {
        kind,
        status,
        eps: eps.clone(),
        budget: budget.clone(),
        headline: witnesses.first().cloned(),
        witnesses,
        unwitnessed,
        certificates,
        liyorke,
    }
}

struct WindowSummary {
    measured: Vec<Scalar>,
    separated: (usize, usize),
    argmax: usize,
}

fn window_distances(f: &SetValuedMap, x0: &ClosedSet, y0: &ClosedSet, k1: usize, k2: usize) -> Vec<Scalar> {
    let (mut a, mut b) = (x0.clone(), y0.clone());
    let mut out = Vec::with_capacity(k2 + 1 - k1);
    for n in 1..=k2 {
        a = f.image(&a);
        b = f.image(&b);
        if n >= k1 {
            out.push(hausdorff(&a, &b));
        }
    }
    out
}

fn summarize_window(d: &[Scalar], k1: usize, eps: &Scalar) -> WindowSummary {
    let min = d.iter().min().cloned().unwrap_or_else(zero);
    let (mut argmax, mut max) = (k1, zero());
    for (i, v) in d.iter().enumerate() {
        if *v > max {
            max = v.clone();
            argmax = k1 + i;
        }
    }
    WindowSummary {
        measured: vec![min, max],
        separated: (d.iter().filter(|v| *v > eps).count(), d.iter().filter(|v| *v >= eps).count()),
        argmax,
    }
}

/// Windowed Li-Yorke probe: some `y` near `x` with `min H < eta` over the
/// window and at least `budget.separations` indices with `H > eps`.
pub fn liyorke_probe(
    f: &SetValuedMap,
    eps: &Scalar,
    eta: &Scalar,
    window: (usize, usize),
    budget: &ProbeBudget,
) -> SensitivityVerdict {
    let (k1, k2) = window;
    assert!(k1 >= 1 && k1 < k2, "window must satisfy 1 <= K1 < K2");
    let bases = budget.base_points();
    let certs = certificates(SensitivityKind::LiYorke, f, &bases);
    let shared = shared_orbits(f, budget, k2);
    type Found = Result<SensitivityWitness, Unwitnessed>;
    // per base point and radius: (strict, nonstrict)
    let per_base: Vec<Vec<(Found, Found)>> = bases
        .par_iter()
        .map(|x| {
            let xs = &shared[x];
            budget
                .deltas
                .iter()
                .map(|delta| {
                    let mut strict = None;
                    let mut nonstrict = None;
                    for y in candidates(f, x, delta, budget) {
                        let computed;
                        let ys = match shared.get(&y) {
                            Some(o) => o,
                            None => {
                                computed = orbit_sets(f, &y, k2);
                                &computed
                            }
                        };
                        let d: Vec<Scalar> = (k1..=k2).map(|n| hausdorff(&xs[n], &ys[n])).collect();
                        let s = summarize_window(&d, k1, eps);
                        let witness = || SensitivityWitness {
                            kind: SensitivityKind::LiYorke,
                            x: x.clone(),
                            y: y.clone(),
                            m: s.argmax,
                            window: Some(window),
                            eps: eps.clone(),
                            measured: s.measured.clone(),
                            separated: Some(s.separated),
                        };
                        if s.measured[0] < *eta {
                            if strict.is_none() && s.separated.0 >= budget.separations {
                                strict = Some(witness());
                            }
                            if nonstrict.is_none() && s.separated.1 >= budget.separations {
                                nonstrict = Some(witness());
                            }
                        }
                        if strict.is_some() {
                            break;
                        }
                    }
                    let found = |w: Option<SensitivityWitness>| {
                        w.ok_or_else(|| Unwitnessed {
                            x: x.clone(),
                            delta: delta.clone(),
                        })
                    };
                    (found(strict), found(nonstrict))
                })
                .collect()
        })
        .collect();
    let (strict, nonstrict): (Vec<Vec<Found>>, Vec<Vec<Found>>) =
        per_base.into_iter().map(|row| row.into_iter().unzip()).unzip();
    let nonstrict = assemble(SensitivityKind::LiYorke, eps, budget, nonstrict, certs.clone(), None).status;
    let params = LiYorkeParams {
        window,
        eta: eta.clone(),
        status_nonstrict: nonstrict,
    };
    assemble(SensitivityKind::LiYorke, eps, budget, strict, certs, Some(params))
}

/// The same probes on a finite system with the discrete metric.
///
/// Radii below 1 leave only `y = x`, so the candidate set is `{x}`.
pub fn finite_sensitivity_probe(kind: SensitivityKind, s: &FiniteSystem, budget: &ProbeBudget) -> ProbeStatus {
    let n = s.len();
    let near = |x: usize, delta: &Scalar| -> Vec<usize> {
        if *delta > one() {
            (0..n).collect()
        } else {
            vec![x]
        }
    };
    let m_range: Vec<usize> = match kind {
        SensitivityKind::Weak => (0..budget.horizon).collect(),
        _ => (1..=budget.horizon).collect(),
    };
    let holds = (0..n).all(|x| {
        budget.deltas.iter().all(|delta| {
            near(x, delta).into_iter().any(|y| match kind {
                SensitivityKind::LiYorke => {
                    let d: Vec<bool> = (1..=budget.horizon)
                        .map(|m| discrete_hausdorff(s.iterate(x, m), s.iterate(y, m)))
                        .collect();
                    d.iter().any(|v| !v) && d.iter().filter(|&&v| v).count() >= budget.separations.min(budget.horizon)
                }
                _ => m_range.iter().any(|&m| {
                    let (a, b) = (s.iterate(x, m), s.iterate(y, m));
                    match kind {
                        SensitivityKind::Strong => b & !a != 0,
                        SensitivityKind::Sensitive => discrete_hausdorff(a, b),
                        _ => discrete_maxdist(a, b),
                    }
                }),
            })
        })
    });
    if holds {
        ProbeStatus::WitnessedYes
    } else {
        ProbeStatus::NoWitnessAtBudget
    }
}

fn discrete_hausdorff(a: StateSet, b: StateSet) -> bool {
    a != b
}

fn discrete_maxdist(a: StateSet, b: StateSet) -> bool {
    members(a).any(|i| members(b).any(|j| i != j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> SetValuedMap {
        SetValuedMap::parse("tent", "segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0").unwrap()
    }

    fn tent_aug_f() -> SetValuedMap {
        SetValuedMap::parse(
            "tent_aug_f",
            "point 0 -> [0,1]\nsegment 0 1/2 oc -> 0 1\nsegment 1/2 1 cc -> 1 0",
        )
        .unwrap()
    }

    #[test]
    fn strong_is_refuted_at_zero() {
        let v = sensitivity_probe(SensitivityKind::Strong, &tent_aug_f(), &rat(2, 5), &ProbeBudget::default());
        assert_eq!(v.status, ProbeStatus::Refuted);
        assert!(v.certificates.contains(&Certificate::FullOrbit { x: zero() }));
        assert!(v.recheck(&tent_aug_f()));
    }

    #[test]
    fn sensitive_is_witnessed() {
        let f = tent_aug_f();
        let v = sensitivity_probe(SensitivityKind::Sensitive, &f, &rat(2, 5), &ProbeBudget::default());
        assert_eq!(v.status, ProbeStatus::WitnessedYes, "{:?}", v.unwitnessed);
        assert!(v.recheck(&f));
        assert!(v.witnesses.iter().all(|w| w.satisfies(SensitivityKind::Weak, &f)));
    }

    #[test]
    fn liyorke_dichotomy_bound_is_one_half() {
        let v = liyorke_probe(&tent_aug_f(), &rat(1, 4), &rat(1, 16), (1, 64), &ProbeBudget::default());
        assert_eq!(v.status, ProbeStatus::Refuted);
        assert!(v.certificates.contains(&Certificate::Dichotomy {
            x: zero(),
            bound: rat(1, 2)
        }));
    }

    #[test]
    fn dense_candidates_find_tent_liyorke_pairs() {
        let f = tent();
        let standard = liyorke_probe(&f, &rat(1, 4), &rat(1, 16), (1, 64), &ProbeBudget::default());
        assert_eq!(standard.status, ProbeStatus::NoWitnessAtBudget);
        let dense = ProbeBudget::default().with_candidates(CandidateRule::Dense);
        let v = liyorke_probe(&f, &rat(1, 4), &rat(1, 16), (1, 64), &dense);
        assert_eq!(v.status, ProbeStatus::WitnessedYes);
        assert!(v.recheck(&f));
        assert!(v.witnesses.iter().all(|w| w.satisfies(SensitivityKind::Sensitive, &f)));
    }

    #[test]
    fn constant_map_weak_only() {
        let c = SetValuedMap::parse("c", "rect 0 1 cc -> [0,1]").unwrap();
        let b = ProbeBudget::default().with_horizon(4);
        let weak = sensitivity_probe(SensitivityKind::Weak, &c, &rat(1, 2), &b);
        assert_eq!(weak.status, ProbeStatus::WitnessedYes);
        let sens = sensitivity_probe(SensitivityKind::Sensitive, &c, &rat(1, 2), &b);
        assert_eq!(sens.status, ProbeStatus::Refuted);
        assert!(matches!(sens.certificates[0], Certificate::ConstantMap { .. }));
    }

    #[test]
    fn witnesses_replay_and_forgeries_do_not() {
        let f = tent();
        let v = sensitivity_probe(SensitivityKind::Sensitive, &f, &rat(1, 4), &ProbeBudget::default().with_horizon(16));
        let mut w = v.headline.clone().unwrap();
        assert!(w.replay(&f));
        w.measured[0] += rat(1, 1000);
        assert!(!w.replay(&f));
    }

    #[test]
    fn finite_discrete_probe() {
        let split = FiniteSystem::from_table(vec![0b11, 0b11]).unwrap();
        let b = ProbeBudget::default().with_horizon(4);
        assert_eq!(finite_sensitivity_probe(SensitivityKind::Weak, &split, &b), ProbeStatus::WitnessedYes);
        assert_eq!(
            finite_sensitivity_probe(SensitivityKind::Sensitive, &split, &b),
            ProbeStatus::NoWitnessAtBudget
        );
    }
}
