//! Angle sweeps and actuator placement search.
//!
//! A [`SearchProblem`] enumerates candidate placements, scores each one over
//! the operating range and ranks them. [`refine`] then polishes a placement
//! by coordinate descent on `a` and `b` with golden-section line searches,
//! keeping `i` and the arm slope fixed.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::force::{
    analyze_at, force, peak_force, stroke_range, AnalysisRow, MaybeSingular, SingularityPolicy,
};
use crate::lift::{check_theta, ActuatorPlacement, ArmSlope, LiftSpec, ThetaDomain};

/// Default number of angle samples used to score a placement.
pub const DEFAULT_SAMPLES: usize = 512;

/// Rows at `samples` uniformly spaced angles, ascending. Singular points are
/// kept and flagged.
pub fn sweep(
    lift: &LiftSpec,
    p: &ActuatorPlacement,
    dom: &ThetaDomain,
    samples: usize,
    policy: &SingularityPolicy,
) -> Result<Vec<AnalysisRow>> {
    dom.grid(samples)?
        .into_iter()
        .map(|theta| analyze_at(lift, p, theta, policy))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Largest force magnitude over the operating range.
    MinPeakForce,
    /// Actuator travel `l_max - l_min` over the operating range.
    MinStroke,
    /// Force magnitude at one angle (radians).
    MinForceAt(f64),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::MinPeakForce => "min_peak_force",
            Objective::MinStroke => "min_stroke",
            Objective::MinForceAt(_) => "min_force_at",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constraints {
    /// Bound on the peak force magnitude, N.
    pub max_force: Option<f64>,
    /// Bound on the longest actuator length, m.
    pub max_length: Option<f64>,
    /// Bound on the shortest actuator length, m.
    pub min_length: Option<f64>,
}

/// Cartesian grid over the placement variables; `b` spans the problem's
/// `b_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementGrid {
    pub a_steps: usize,
    pub b_steps: usize,
    pub i_set: Vec<u32>,
    pub slopes: Vec<ArmSlope>,
}

impl PlacementGrid {
    /// 21 values of `a`, 41 of `b`, every level and both slopes.
    pub fn default_for(lift: &LiftSpec) -> Self {
        Self {
            a_steps: 21,
            b_steps: 41,
            i_set: (0..lift.stages()).collect(),
            slopes: vec![ArmSlope::Negative, ArmSlope::Positive],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Candidates {
    Grid(PlacementGrid),
    List(Vec<ActuatorPlacement>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchProblem {
    lift: LiftSpec,
    dom: ThetaDomain,
    objective: Objective,
    constraints: Constraints,
    candidates: Candidates,
    b_range: (f64, f64),
    samples: usize,
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

impl SearchProblem {
    pub fn new(
        lift: LiftSpec,
        dom: ThetaDomain,
        objective: Objective,
        constraints: Constraints,
        candidates: Candidates,
        b_range: (f64, f64),
        samples: usize,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProblem(msg));
        if samples < 2 {
            return Err(Error::TooFewSamples(samples, 2));
        }
        let (b_lo, b_hi) = b_range;
        if !(b_lo.is_finite() && b_hi.is_finite() && b_lo <= b_hi) {
            return bad(format!(
                "b range [{b_lo}, {b_hi}] must be finite and ordered"
            ));
        }
        for (name, bound) in [
            ("max_force", constraints.max_force),
            ("max_length", constraints.max_length),
            ("min_length", constraints.min_length),
        ] {
            if let Some(v) = bound {
                if !(v.is_finite() && v > 0.0) {
                    return bad(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if let Objective::MinForceAt(theta) = objective {
            check_theta(theta)?;
        }
        match &candidates {
            Candidates::Grid(g) => {
                if g.a_steps == 0 || g.b_steps == 0 || g.i_set.is_empty() || g.slopes.is_empty() {
                    return bad("placement grid has an empty axis".into());
                }
                if let Some(&i) = g.i_set.iter().find(|&&i| i >= lift.stages()) {
                    return bad(format!(
                        "level {i} not below the top of a {}-stage lift",
                        lift.stages()
                    ));
                }
            }
            Candidates::List(list) => {
                if list.is_empty() {
                    return bad("candidate list is empty".into());
                }
                for p in list {
                    p.validate_for(&lift)?;
                }
            }
        }
        Ok(Self {
            lift,
            dom,
            objective,
            constraints,
            candidates,
            b_range,
            samples,
        })
    }

    pub fn lift(&self) -> &LiftSpec {
        &self.lift
    }

    pub fn domain(&self) -> &ThetaDomain {
        &self.dom
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    pub fn b_range(&self) -> (f64, f64) {
        self.b_range
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// All candidate placements in enumeration order.
    pub fn placements(&self) -> Vec<ActuatorPlacement> {
        match &self.candidates {
            Candidates::List(list) => list.clone(),
            Candidates::Grid(g) => {
                let a_values = linspace(0.0, 1.0, g.a_steps);
                let b_values = linspace(self.b_range.0, self.b_range.1, g.b_steps);
                let mut out = Vec::with_capacity(
                    g.i_set.len() * g.slopes.len() * a_values.len() * b_values.len(),
                );
                for &i in &g.i_set {
                    for &slope in &g.slopes {
                        for &a in &a_values {
                            for &b in &b_values {
                                out.push(ActuatorPlacement { a, b, i, slope });
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

/// Why a candidate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Violations {
    /// `dh/dl` singular somewhere on the sampled range.
    pub singular: bool,
    /// Actuator length collapses to zero somewhere on the sampled range.
    pub degenerate: bool,
    pub max_force: bool,
    pub max_length: bool,
    pub min_length: bool,
}

impl Violations {
    pub fn any(&self) -> bool {
        self.singular || self.degenerate || self.max_force || self.max_length || self.min_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub placement: ActuatorPlacement,
    /// `None` when the objective cannot be computed.
    pub objective: Option<f64>,
    pub violations: Violations,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.objective.is_some() && !self.violations.any()
    }
}

/// Scores one placement against a problem.
pub fn evaluate(
    problem: &SearchProblem,
    p: &ActuatorPlacement,
    policy: &SingularityPolicy,
) -> Result<Evaluation> {
    p.validate_for(&problem.lift)?;
    let lift = &problem.lift;
    let mut violations = Violations::default();

    let stroke = match stroke_range(p, lift.arm_length(), &problem.dom, problem.samples, policy) {
        Ok(s) => Some(s),
        Err(Error::DegeneratePlacement { .. }) => {
            violations.degenerate = true;
            None
        }
        Err(e) => return Err(e),
    };
    let peak = match peak_force(lift, p, &problem.dom, problem.samples, policy) {
        Ok(pk) => Some(pk.force.abs()),
        Err(Error::SingularInRange { .. }) => {
            violations.singular = true;
            None
        }
        Err(e) => return Err(e),
    };

    let objective = match problem.objective {
        Objective::MinPeakForce => peak,
        Objective::MinStroke => stroke.map(|s| s.travel()),
        Objective::MinForceAt(theta) => match force(lift, p, theta, policy)? {
            MaybeSingular::Value(f) => Some(f.abs()),
            MaybeSingular::Singular { .. } => {
                violations.singular = true;
                None
            }
        },
    };

    let c = &problem.constraints;
    if let (Some(limit), Some(pk)) = (c.max_force, peak) {
        violations.max_force = pk > limit;
    }
    if let Some(s) = stroke {
        if let Some(limit) = c.max_length {
            violations.max_length = s.max > limit;
        }
        if let Some(limit) = c.min_length {
            violations.min_length = s.min < limit;
        }
    }

    Ok(Evaluation {
        placement: *p,
        objective,
        violations,
    })
}

/// Feasible first, then ascending objective (missing last), then
/// `(i, slope, a, b)`.
fn rank_order(x: &Evaluation, y: &Evaluation) -> Ordering {
    y.feasible()
        .cmp(&x.feasible())
        .then_with(|| match (x.objective, y.objective) {
            (Some(u), Some(v)) => u.total_cmp(&v),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then_with(|| x.placement.i.cmp(&y.placement.i))
        .then_with(|| x.placement.slope.cmp(&y.placement.slope))
        .then_with(|| x.placement.a.total_cmp(&y.placement.a))
        .then_with(|| x.placement.b.total_cmp(&y.placement.b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub ranked: Vec<Evaluation>,
}

impl SearchResult {
    /// Top-ranked candidate if it is feasible.
    pub fn best(&self) -> Option<&Evaluation> {
        self.ranked.first().filter(|e| e.feasible())
    }
}

/// Evaluates every candidate (in parallel) and ranks them.
pub fn grid_search(problem: &SearchProblem, policy: &SingularityPolicy) -> Result<SearchResult> {
    let mut ranked = problem
        .placements()
        .par_iter()
        .map(|p| evaluate(problem, p, policy))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(rank_order);
    Ok(SearchResult { ranked })
}

/// Minimizes `f` on `[lo, hi]`; the endpoints are evaluated too, so a
/// boundary minimum is found exactly.
pub fn golden_section_min(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, f(lo));
    let f_hi = f(hi);
    if f_hi < best.1 {
        best = (hi, f_hi);
    }
    if hi - lo <= tol {
        return best;
    }

    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub placement: ActuatorPlacement,
    pub objective: f64,
    /// Objective after each round, starting with the seed's.
    pub trace: Vec<f64>,
}

const REFINE_MAX_ROUNDS: usize = 100;
const REFINE_REL_TOL: f64 = 1e-9;
const LINE_MAX_ITER: usize = 200;

/// Coordinate descent on `a` in `[0, 1]` and `b` in the problem's b-range.
/// Only strict improvements of feasible placements are accepted, so the
/// objective never increases.
pub fn refine(
    problem: &SearchProblem,
    seed: &ActuatorPlacement,
    policy: &SingularityPolicy,
) -> Result<Refinement> {
    let start = evaluate(problem, seed, policy)?;
    let mut current = match start.objective {
        Some(v) if start.feasible() => v,
        _ => return Err(Error::InfeasibleSeed),
    };
    let mut placement = *seed;
    let mut trace = vec![current];

    let score = |p: &ActuatorPlacement| -> f64 {
        match evaluate(problem, p, policy) {
            Ok(e) if e.feasible() => e.objective.unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        }
    };
    let (b_lo, b_hi) = problem.b_range;

    for _ in 0..REFINE_MAX_ROUNDS {
        let before = current;

        let (a, fa) = golden_section_min(
            |a| score(&ActuatorPlacement { a, ..placement }),
            0.0,
            1.0,
            1e-10,
            LINE_MAX_ITER,
        );
        if fa < current {
            placement.a = a;
            current = fa;
        }

        let (b, fb) = golden_section_min(
            |b| score(&ActuatorPlacement { b, ..placement }),
            b_lo,
            b_hi,
            1e-10 * (b_hi - b_lo).abs().max(1.0),
            LINE_MAX_ITER,
        );
        if fb < current {
            placement.b = b;
            current = fb;
        }

        trace.push(current);
        if before - current <= REFINE_REL_TOL * before.abs() {
            break;
        }
    }

    Ok(Refinement {
        placement,
        objective: current,
        trace,
    })
}
