//! Closed-form actuator length, velocity ratio `dh/dl` and actuator force.
//!
//! With `c = cos(theta)`, `s = sin(theta)`, `t = tan(theta)` and the
//! placement constants `K_A..K_D`:
//!
//! | arm      | `(l / D)^2`                    | `dh/dl` denominator      |
//! |----------|--------------------------------|--------------------------|
//! | negative | `K_A c^2 - 2 K_B c + K_C`      | `K_B t - K_A s`          |
//! | positive | `K_C - 2 a b c - K_D c^2`      | `a b t + K_D s`          |
//!
//! and `dh/dl = n sqrt((l / D)^2) / denominator`. The actuator force follows
//! from the energy balance `F = L_E dh/dl`. The square root is always the
//! non-negative length; the sign of the denominator is kept, so a negative
//! velocity ratio means that retracting the actuator raises the lift.

use crate::error::{Error, Result};
use crate::lift::{check_theta, height, ActuatorPlacement, ArmSlope, LiftSpec, ThetaDomain};

/// Thresholds below which `dh/dl` or the actuator length are treated as
/// singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityPolicy {
    eps_denominator: f64,
    eps_length: f64,
}

impl SingularityPolicy {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps_denominator: f64, eps_length: f64) -> Result<Self> {
        if !(eps_denominator.is_finite() && eps_denominator > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "denominator threshold must be > 0, got {eps_denominator}"
            )));
        }
        if !(eps_length.is_finite() && eps_length > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "length threshold must be > 0, got {eps_length}"
            )));
        }
        Ok(Self {
            eps_denominator,
            eps_length,
        })
    }

    /// Default thresholds for arms of length `arm_length`: `1e-9` on the
    /// denominator and `1e-9 * D` on the actuator length.
    pub fn for_arm_length(arm_length: f64) -> Self {
        Self {
            eps_denominator: Self::DEFAULT_EPS,
            eps_length: Self::DEFAULT_EPS * arm_length,
        }
    }

    pub fn for_lift(lift: &LiftSpec) -> Self {
        Self::for_arm_length(lift.arm_length())
    }

    pub fn eps_denominator(&self) -> f64 {
        self.eps_denominator
    }

    pub fn eps_length(&self) -> f64 {
        self.eps_length
    }
}

impl Default for SingularityPolicy {
    fn default() -> Self {
        Self::for_arm_length(1.0)
    }
}

/// A quantity that may be undefined because `dh/dl` has a vanishing
/// denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaybeSingular {
    Value(f64),
    Singular { denominator: f64 },
}

impl MaybeSingular {
    pub fn value(self) -> Option<f64> {
        match self {
            MaybeSingular::Value(v) => Some(v),
            MaybeSingular::Singular { .. } => None,
        }
    }

    pub fn is_singular(self) -> bool {
        matches!(self, MaybeSingular::Singular { .. })
    }

    fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            MaybeSingular::Value(v) => MaybeSingular::Value(f(v)),
            s => s,
        }
    }
}

/// `(l / D)^2` before any sign check.
pub fn length_radicand(p: &ActuatorPlacement, theta: f64) -> f64 {
    let k = p.constants();
    let c = theta.cos();
    match p.slope {
        ArmSlope::Negative => k.k_a * c * c - 2.0 * k.k_b * c + k.k_c,
        ArmSlope::Positive => k.k_c - 2.0 * p.a * p.b * c - k.k_d * c * c,
    }
}

/// Denominator of `dh/dl`; its zeros are the singular angles.
pub fn dh_dl_denominator(p: &ActuatorPlacement, theta: f64) -> f64 {
    let k = p.constants();
    match p.slope {
        ArmSlope::Negative => k.k_b * theta.tan() - k.k_a * theta.sin(),
        ArmSlope::Positive => p.a * p.b * theta.tan() + k.k_d * theta.sin(),
    }
}

/// `l / D`, with round-off below zero clamped and real inconsistencies
/// reported.
fn unit_length(p: &ActuatorPlacement, theta: f64) -> Result<f64> {
    let r = length_radicand(p, theta);
    if r >= 0.0 {
        return Ok(r.sqrt());
    }
    let k = p.constants();
    let scale = k.k_a.abs() + 2.0 * k.k_b.abs() + k.k_c + k.k_d + 2.0 * (p.a * p.b).abs();
    if r >= -64.0 * f64::EPSILON * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::InconsistentGeometry { theta, radicand: r })
    }
}

/// Actuator length `|PQ|` in metres.
pub fn actuator_length(
    p: &ActuatorPlacement,
    arm_length: f64,
    theta: f64,
    policy: &SingularityPolicy,
) -> Result<f64> {
    check_theta(theta)?;
    p.validate()?;
    let length = arm_length * unit_length(p, theta)?;
    if length < policy.eps_length() {
        return Err(Error::DegeneratePlacement { theta, length });
    }
    Ok(length)
}

/// Instantaneous velocity ratio `dh/dl` of an `stages`-stage lift.
pub fn velocity_ratio(
    p: &ActuatorPlacement,
    stages: u32,
    theta: f64,
    policy: &SingularityPolicy,
) -> Result<MaybeSingular> {
    check_theta(theta)?;
    p.validate()?;
    let denominator = dh_dl_denominator(p, theta);
    if denominator.abs() <= policy.eps_denominator() {
        return Ok(MaybeSingular::Singular { denominator });
    }
    let root = unit_length(p, theta)?;
    Ok(MaybeSingular::Value(f64::from(stages) * root / denominator))
}

/// Actuator force `L_E * dh/dl` in newtons.
pub fn force(
    lift: &LiftSpec,
    p: &ActuatorPlacement,
    theta: f64,
    policy: &SingularityPolicy,
) -> Result<MaybeSingular> {
    p.validate_for(lift)?;
    let load = lift.effective_load();
    Ok(velocity_ratio(p, lift.stages(), theta, policy)?.map(|vr| load * vr))
}

/// Everything known about one lift angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisRow {
    pub theta: f64,
    pub height: f64,
    pub length: f64,
    /// `None` at a singular point.
    pub dh_dl: Option<f64>,
    /// `None` at a singular point.
    pub force: Option<f64>,
}

impl AnalysisRow {
    pub fn singular(&self) -> bool {
        self.dh_dl.is_none()
    }
}

/// Evaluates height, length, velocity ratio and force at `theta`.
///
/// A zero-length actuator is reported as a singular row rather than an
/// error; `l -> 0` only happens with the application point on the ground
/// line, where the `dh/dl` denominator vanishes too.
pub fn analyze_at(
    lift: &LiftSpec,
    p: &ActuatorPlacement,
    theta: f64,
    policy: &SingularityPolicy,
) -> Result<AnalysisRow> {
    check_theta(theta)?;
    p.validate_for(lift)?;
    let h = height(lift.stages(), lift.arm_length(), theta)?;
    let length = lift.arm_length() * unit_length(p, theta)?;
    let vr = velocity_ratio(p, lift.stages(), theta, policy)?;
    let dh_dl = if length < policy.eps_length() {
        None
    } else {
        vr.value()
    };
    Ok(AnalysisRow {
        theta,
        height: h,
        length,
        dh_dl,
        force: dh_dl.map(|v| lift.effective_load() * v),
    })
}

/// Shortest and longest actuator length over the operating range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stroke {
    pub min: f64,
    pub max: f64,
}

impl Stroke {
    pub fn travel(&self) -> f64 {
        self.max - self.min
    }
}

/// Extremes of the actuator length over a uniform grid of `samples` angles.
/// The length need not be monotone in `theta`.
pub fn stroke_range(
    p: &ActuatorPlacement,
    arm_length: f64,
    dom: &ThetaDomain,
    samples: usize,
    policy: &SingularityPolicy,
) -> Result<Stroke> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for theta in dom.grid(samples)? {
        let l = actuator_length(p, arm_length, theta, policy)?;
        min = min.min(l);
        max = max.max(l);
    }
    Ok(Stroke { min, max })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakForce {
    pub theta: f64,
    pub force: f64,
}

/// Relative spread within which two sampled forces count as a tie.
const PEAK_TIE_REL: f64 = 1e-12;

/// Sample of largest force magnitude on a uniform grid; ties (within
/// round-off) go to the smallest angle. Any singular sample is an error.
pub fn peak_force(
    lift: &LiftSpec,
    p: &ActuatorPlacement,
    dom: &ThetaDomain,
    samples: usize,
    policy: &SingularityPolicy,
) -> Result<PeakForce> {
    let mut best: Option<PeakForce> = None;
    for theta in dom.grid(samples)? {
        let f = match force(lift, p, theta, policy)? {
            MaybeSingular::Value(f) => f,
            MaybeSingular::Singular { denominator } => {
                return Err(Error::SingularInRange { theta, denominator })
            }
        };
        if best.is_none_or(|b| f.abs() > b.force.abs() * (1.0 + PEAK_TIE_REL)) {
            best = Some(PeakForce { theta, force: f });
        }
    }
    // grid() guarantees at least two samples
    Ok(best.expect("non-empty grid"))
}
