//! Seeded randomized cross-checks of the closed forms against the geometry
//! oracle.
//!
//! Three suites run on random placements of a given lift:
//! Euclidean vs closed-form actuator length, central-difference vs
//! closed-form `dh/dl`, and the work balance of [`energy_residual`].
//! Cases with a nearly vanishing actuator length or `dh/dl` denominator are
//! redrawn; at those points the checks measure conditioning, not
//! correctness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::force::{
    actuator_length, dh_dl_denominator, velocity_ratio, MaybeSingular, SingularityPolicy,
};
use crate::lift::{ActuatorPlacement, ArmSlope, LiftSpec, ThetaDomain};
use crate::oracle::{energy_residual, fd_velocity_ratio, oracle_actuator_length};

/// Range the anchor offset `b` is drawn from, in arm lengths.
pub const B_RANGE: (f64, f64) = (-1.0, 2.5);
/// Length cases need `l >= MIN_UNIT_LENGTH * D`.
pub const MIN_UNIT_LENGTH: f64 = 0.05;
/// Derivative cases need `|denominator| > MIN_DERIVATIVE_DENOMINATOR`.
pub const MIN_DERIVATIVE_DENOMINATOR: f64 = 1e-3;
/// Energy intervals need `|denominator| >= MIN_ENERGY_DENOMINATOR` throughout.
pub const MIN_ENERGY_DENOMINATOR: f64 = 0.05;
/// Finite-difference half step for the derivative suite, radians.
pub const FD_DELTA: f64 = 1e-6;
pub const ENERGY_STEPS: usize = 10_000;

const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub length: f64,
    pub derivative: f64,
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            length: 1e-12,
            derivative: 1e-5,
            energy: 1e-8,
        }
    }
}

/// Where a check was evaluated: a single angle or an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub placement: ActuatorPlacement,
    pub theta: f64,
    /// Upper end of the interval for energy checks.
    pub theta_end: Option<f64>,
}

/// Largest relative deviation seen by one suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteResult {
    pub trials: usize,
    pub max_deviation: f64,
    pub worst: Option<Sample>,
}

impl SuiteResult {
    fn new() -> Self {
        Self {
            trials: 0,
            max_deviation: 0.0,
            worst: None,
        }
    }

    fn record(&mut self, deviation: f64, sample: Sample) {
        self.trials += 1;
        // NaN counts as worst
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = deviation;
            self.worst = Some(sample);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub length: SuiteResult,
    pub derivative: SuiteResult,
    pub energy: SuiteResult,
    pub tolerances: Tolerances,
}

impl Summary {
    pub fn length_ok(&self) -> bool {
        self.length.max_deviation <= self.tolerances.length
    }

    pub fn derivative_ok(&self) -> bool {
        self.derivative.max_deviation <= self.tolerances.derivative
    }

    pub fn energy_ok(&self) -> bool {
        self.energy.max_deviation <= self.tolerances.energy
    }

    pub fn passed(&self) -> bool {
        self.length_ok() && self.derivative_ok() && self.energy_ok()
    }
}

/// Uniform placement on a lift: `a` in `[0, 1]`, `b` in [`B_RANGE`], any
/// level, either slope.
pub fn random_placement<R: Rng>(rng: &mut R, stages: u32) -> ActuatorPlacement {
    ActuatorPlacement {
        a: rng.gen_range(0.0..=1.0),
        b: rng.gen_range(B_RANGE.0..B_RANGE.1),
        i: rng.gen_range(0..stages),
        slope: if rng.gen_bool(0.5) {
            ArmSlope::Positive
        } else {
            ArmSlope::Negative
        },
    }
}

fn redraw_exhausted() -> Error {
    Error::InvalidProblem(format!(
        "no well-conditioned random case found in {MAX_REDRAWS} draws"
    ))
}

pub fn length_case<R: Rng>(rng: &mut R, lift: &LiftSpec, dom: &ThetaDomain) -> Result<Sample> {
    let policy = SingularityPolicy::for_lift(lift);
    for _ in 0..MAX_REDRAWS {
        let placement = random_placement(rng, lift.stages());
        let theta = rng.gen_range(dom.lo()..=dom.hi());
        match actuator_length(&placement, lift.arm_length(), theta, &policy) {
            Ok(l) if l >= MIN_UNIT_LENGTH * lift.arm_length() => {
                return Ok(Sample {
                    placement,
                    theta,
                    theta_end: None,
                })
            }
            Ok(_) | Err(Error::DegeneratePlacement { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(redraw_exhausted())
}

pub fn derivative_case<R: Rng>(rng: &mut R, lift: &LiftSpec, dom: &ThetaDomain) -> Result<Sample> {
    for _ in 0..MAX_REDRAWS {
        let placement = random_placement(rng, lift.stages());
        let theta = rng.gen_range(dom.lo()..=dom.hi());
        if theta - FD_DELTA <= 0.0 || theta + FD_DELTA >= std::f64::consts::FRAC_PI_2 {
            continue;
        }
        if dh_dl_denominator(&placement, theta).abs() > MIN_DERIVATIVE_DENOMINATOR {
            return Ok(Sample {
                placement,
                theta,
                theta_end: None,
            });
        }
    }
    Err(redraw_exhausted())
}

/// Probes used to keep energy intervals clear of singular angles.
const ENERGY_PROBES: usize = 257;

pub fn energy_case<R: Rng>(rng: &mut R, lift: &LiftSpec, dom: &ThetaDomain) -> Result<Sample> {
    for _ in 0..MAX_REDRAWS {
        let placement = random_placement(rng, lift.stages());
        let t1 = rng.gen_range(dom.lo()..=dom.hi());
        let t2 = rng.gen_range(dom.lo()..=dom.hi());
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        if hi - lo < 1e-3 {
            continue;
        }
        let clear = (0..ENERGY_PROBES).all(|k| {
            let theta = lo + (hi - lo) * k as f64 / (ENERGY_PROBES - 1) as f64;
            dh_dl_denominator(&placement, theta).abs() >= MIN_ENERGY_DENOMINATOR
        });
        if clear {
            return Ok(Sample {
                placement,
                theta: lo,
                theta_end: Some(hi),
            });
        }
    }
    Err(redraw_exhausted())
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

pub fn check_lengths<R: Rng>(
    rng: &mut R,
    lift: &LiftSpec,
    dom: &ThetaDomain,
    trials: usize,
) -> Result<SuiteResult> {
    let policy = SingularityPolicy::for_lift(lift);
    let mut out = SuiteResult::new();
    for _ in 0..trials {
        let s = length_case(rng, lift, dom)?;
        let closed = actuator_length(&s.placement, lift.arm_length(), s.theta, &policy)?;
        let euclid = oracle_actuator_length(&s.placement, lift.arm_length(), s.theta)?;
        out.record(rel(closed, euclid), s);
    }
    Ok(out)
}

pub fn check_derivatives<R: Rng>(
    rng: &mut R,
    lift: &LiftSpec,
    dom: &ThetaDomain,
    trials: usize,
) -> Result<SuiteResult> {
    let policy = SingularityPolicy::for_lift(lift);
    let mut out = SuiteResult::new();
    for _ in 0..trials {
        let s = derivative_case(rng, lift, dom)?;
        let closed = match velocity_ratio(&s.placement, lift.stages(), s.theta, &policy)? {
            MaybeSingular::Value(v) => v,
            MaybeSingular::Singular { denominator } => {
                return Err(Error::SingularInRange {
                    theta: s.theta,
                    denominator,
                })
            }
        };
        let fd = fd_velocity_ratio(
            &s.placement,
            lift.stages(),
            lift.arm_length(),
            s.theta,
            FD_DELTA,
        )?;
        out.record(rel(fd, closed), s);
    }
    Ok(out)
}

pub fn check_energy<R: Rng>(
    rng: &mut R,
    lift: &LiftSpec,
    dom: &ThetaDomain,
    trials: usize,
    steps: usize,
) -> Result<SuiteResult> {
    let policy = SingularityPolicy::for_lift(lift);
    // draw sequentially so the stream stays reproducible, integrate in parallel
    let cases = (0..trials)
        .map(|_| energy_case(rng, lift, dom))
        .collect::<Result<Vec<_>>>()?;
    let residuals = cases
        .par_iter()
        .map(|s| {
            let end = s.theta_end.expect("energy cases carry an interval");
            energy_residual(lift, &s.placement, s.theta, end, steps, &policy)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = SuiteResult::new();
    for (r, s) in residuals.into_iter().zip(cases) {
        out.record(r, s);
    }
    Ok(out)
}

/// Runs all three suites with `trials` cases each from one seeded stream.
pub fn run(
    lift: &LiftSpec,
    dom: &ThetaDomain,
    trials: usize,
    seed: u64,
    tolerances: Tolerances,
) -> Result<Summary> {
    if trials == 0 {
        return Err(Error::InvalidProblem("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Summary {
        length: check_lengths(&mut rng, lift, dom, trials)?,
        derivative: check_derivatives(&mut rng, lift, dom, trials)?,
        energy: check_energy(&mut rng, lift, dom, trials, ENERGY_STEPS)?,
        tolerances,
    })
}
