//! Lift geometry: the physical lift, actuator placement variables, the
//! derived placement constants and the basic height relation.
//!
//! Coordinates follow a fixed frame: the origin is the bottom hinge of the
//! static column, the static column sits on `x = 0` and the mobile column
//! slides along `x = D cos(theta)`. `theta` is the angle every positively
//! sloping arm makes with the ground line.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// A physical n-stage scissor lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftSpec {
    stages: u32,
    arm_length: f64,
    lift_weight: f64,
    load: f64,
}

impl LiftSpec {
    /// `stages` levels of arms of length `arm_length` (m), self-weight
    /// `lift_weight` (N) and payload `load` (N).
    pub fn new(stages: u32, arm_length: f64, lift_weight: f64, load: f64) -> Result<Self> {
        if stages < 1 {
            return Err(Error::InvalidSpec("stage count must be at least 1".into()));
        }
        if !(arm_length.is_finite() && arm_length > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "arm length must be finite and > 0, got {arm_length}"
            )));
        }
        if !(lift_weight.is_finite() && lift_weight >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "lift weight must be finite and >= 0, got {lift_weight}"
            )));
        }
        if !(load.is_finite() && load >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "load must be finite and >= 0, got {load}"
            )));
        }
        Ok(Self {
            stages,
            arm_length,
            lift_weight,
            load,
        })
    }

    pub fn stages(&self) -> u32 {
        self.stages
    }

    pub fn arm_length(&self) -> f64 {
        self.arm_length
    }

    pub fn lift_weight(&self) -> f64 {
        self.lift_weight
    }

    pub fn load(&self) -> f64 {
        self.load
    }

    /// Payload plus half the lift's own weight.
    pub fn effective_load(&self) -> f64 {
        self.load + self.lift_weight / 2.0
    }

    /// Same lift with a different arm length.
    pub fn with_arm_length(&self, arm_length: f64) -> Result<Self> {
        Self::new(self.stages, arm_length, self.lift_weight, self.load)
    }

    /// Platform height at `theta`.
    pub fn height(&self, theta: f64) -> Result<f64> {
        height(self.stages, self.arm_length, theta)
    }

    /// Fully extended height `n * D`, never reached in operation.
    pub fn max_height(&self) -> f64 {
        f64::from(self.stages) * self.arm_length
    }
}

/// Which way the arm carrying the application point slopes in the lift frame.
///
/// `Negative` arms run from a mobile hinge up to a static hinge; `Positive`
/// arms run from a static hinge up to a mobile hinge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArmSlope {
    Negative,
    Positive,
}

impl ArmSlope {
    pub fn as_str(self) -> &'static str {
        match self {
            ArmSlope::Negative => "negative",
            ArmSlope::Positive => "positive",
        }
    }
}

/// Where the actuator attaches to the lift and to the ground.
///
/// * `a`: fraction of the arm between the application point and the arm's
///   lower hinge, in `[0, 1]`.
/// * `b`: ground anchor offset from the origin in arm lengths; any real.
/// * `i`: number of complete scissor levels below the application point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorPlacement {
    pub a: f64,
    pub b: f64,
    pub i: u32,
    pub slope: ArmSlope,
}

impl ActuatorPlacement {
    pub fn new(a: f64, b: f64, i: u32, slope: ArmSlope) -> Result<Self> {
        let p = Self { a, b, i, slope };
        p.validate()?;
        Ok(p)
    }

    /// Classic screw-jack layout: horizontal actuator pushing the bottom
    /// mobile hinge, anchored `b` arm lengths from the origin.
    pub fn screw_jack(b: f64) -> Self {
        Self {
            a: 0.0,
            b,
            i: 0,
            slope: ArmSlope::Negative,
        }
    }

    /// Vertical actuator from the origin to the first static hinge above it.
    pub fn vertical() -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            i: 1,
            slope: ArmSlope::Positive,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && (0.0..=1.0).contains(&self.a)) {
            return Err(Error::InvalidPlacement(format!(
                "a must lie in [0, 1], got {}",
                self.a
            )));
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidPlacement(format!(
                "b must be finite, got {}",
                self.b
            )));
        }
        Ok(())
    }

    /// Checks the placement against a lift: the arm carrying the
    /// application point belongs to level `i + 1`, so `i <= n - 1`.
    pub fn validate_for(&self, lift: &LiftSpec) -> Result<()> {
        self.validate()?;
        if self.i >= lift.stages() {
            return Err(Error::InvalidPlacement(format!(
                "i = {} needs at least {} stages, lift has {}",
                self.i,
                self.i + 1,
                lift.stages()
            )));
        }
        Ok(())
    }

    pub fn constants(&self) -> PlacementConstants {
        lift_constants(self.a, self.b, self.i)
    }
}

/// Dimensionless constants that fix the force expression of a placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementConstants {
    /// `(1 - a)^2 - (i + a)^2`
    pub k_a: f64,
    /// `b (1 - a)`
    pub k_b: f64,
    /// `b^2 + (i + a)^2`
    pub k_c: f64,
    /// `i (2a + i)`
    pub k_d: f64,
}

pub fn lift_constants(a: f64, b: f64, i: u32) -> PlacementConstants {
    let i = f64::from(i);
    let ia = i + a;
    let one_minus_a = 1.0 - a;
    PlacementConstants {
        k_a: one_minus_a * one_minus_a - ia * ia,
        k_b: b * one_minus_a,
        k_c: b * b + ia * ia,
        k_d: i * (2.0 * a + i),
    }
}

/// Closed operating range of `theta`, strictly inside `(0, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaDomain {
    lo: f64,
    hi: f64,
}

impl ThetaDomain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi && hi < FRAC_PI_2 {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidDomain { lo, hi })
        }
    }

    pub fn from_degrees(lo_deg: f64, hi_deg: f64) -> Result<Self> {
        Self::new(lo_deg.to_radians(), hi_deg.to_radians())
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }

    /// `samples` uniformly spaced angles, both endpoints included exactly.
    pub fn grid(&self, samples: usize) -> Result<Vec<f64>> {
        if samples < 2 {
            return Err(Error::TooFewSamples(samples, 2));
        }
        let last = samples - 1;
        let span = self.hi - self.lo;
        Ok((0..samples)
            .map(|k| {
                if k == last {
                    self.hi
                } else {
                    self.lo + span * (k as f64) / (last as f64)
                }
            })
            .collect())
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && 0.0 < theta && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

/// Payload plus half the lift self-weight: the load an actuator effectively
/// raises when the lift's mass is spread uniformly over its height.
pub fn effective_load(load: f64, lift_weight: f64) -> Result<f64> {
    if !(load.is_finite() && load >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "load must be finite and >= 0, got {load}"
        )));
    }
    if !(lift_weight.is_finite() && lift_weight >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "lift weight must be finite and >= 0, got {lift_weight}"
        )));
    }
    Ok(load + lift_weight / 2.0)
}

/// Platform height `n D sin(theta)`.
pub fn height(stages: u32, arm_length: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(f64::from(stages) * arm_length * theta.sin())
}

/// Inverse of [`height`]; the fully folded and fully extended states are
/// excluded.
pub fn theta_from_height(height: f64, stages: u32, arm_length: f64) -> Result<f64> {
    let max = f64::from(stages) * arm_length;
    if !(height > 0.0 && height < max) {
        return Err(Error::HeightOutOfRange { height, max });
    }
    Ok((height / max).asin())
}

/// Hinge column of a lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Static,
    Mobile,
}

/// Placement variables fixed by attaching at a hinge; `b` stays free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeAttachment {
    pub a: f64,
    pub i: u32,
    pub slope: ArmSlope,
}

impl HingeAttachment {
    pub fn with_anchor(self, b: f64) -> ActuatorPlacement {
        ActuatorPlacement {
            a: self.a,
            i: self.i,
            b,
            slope: self.slope,
        }
    }
}

/// Chooses the arm for a force applied at a hinge shared by two arms.
///
/// The arm that counts is the one lying entirely above the horizontal
/// through the hinge, so the hinge is that arm's lower end (`a = 0`) and
/// the `k` levels below it are complete. From a static hinge that arm rises
/// to the right (positive slope); from a mobile hinge it rises to the left.
pub fn resolve_shared_hinge(column: Column, level: u32, stages: u32) -> Result<HingeAttachment> {
    if level >= stages {
        return Err(Error::UnsupportedPlacement(format!(
            "hinge level {level} of a {stages}-stage lift has no arm above it"
        )));
    }
    let slope = match column {
        Column::Static => ArmSlope::Positive,
        Column::Mobile => ArmSlope::Negative,
    };
    Ok(HingeAttachment {
        a: 0.0,
        i: level,
        slope,
    })
}
