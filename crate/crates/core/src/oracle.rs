//! Brute-force geometry used to check the closed forms.
//!
//! Nothing here uses the placement constants: hinge positions are laid out
//! explicitly, the application point is interpolated along its arm, lengths
//! are Euclidean distances and derivatives are finite differences.

use crate::error::{Error, Result};
use crate::force::{force, MaybeSingular, SingularityPolicy};
use crate::lift::{check_theta, ActuatorPlacement, ArmSlope, LiftSpec};

pub type Point = (f64, f64);

/// Joint positions of a lift at one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSet {
    /// `(0, k D sin)` for `k = 0..=n`.
    pub static_hinges: Vec<Point>,
    /// `(D cos, k D sin)` for `k = 0..=n`.
    pub mobile_hinges: Vec<Point>,
    /// Arm crossings `(D cos / 2, (k + 1/2) D sin)` for `k = 0..n`.
    pub pivots: Vec<Point>,
}

pub fn hinge_coordinates(stages: u32, arm_length: f64, theta: f64) -> Result<JointSet> {
    check_theta(theta)?;
    let dx = arm_length * theta.cos();
    let dy = arm_length * theta.sin();
    let levels = 0..=stages;
    Ok(JointSet {
        static_hinges: levels.clone().map(|k| (0.0, f64::from(k) * dy)).collect(),
        mobile_hinges: levels.map(|k| (dx, f64::from(k) * dy)).collect(),
        pivots: (0..stages)
            .map(|k| (dx / 2.0, (f64::from(k) + 0.5) * dy))
            .collect(),
    })
}

/// Point `Q` where the actuator's moving end attaches, found by walking a
/// fraction `a` along the owning arm from its lower hinge.
pub fn point_of_application(p: &ActuatorPlacement, arm_length: f64, theta: f64) -> Result<Point> {
    p.validate()?;
    let joints = hinge_coordinates(p.i + 1, arm_length, theta)?;
    let level = p.i as usize;
    let (lower, upper) = match p.slope {
        ArmSlope::Negative => (joints.mobile_hinges[level], joints.static_hinges[level + 1]),
        ArmSlope::Positive => (joints.static_hinges[level], joints.mobile_hinges[level + 1]),
    };
    Ok((
        lower.0 + p.a * (upper.0 - lower.0),
        lower.1 + p.a * (upper.1 - lower.1),
    ))
}

/// Distance from the ground anchor `P = (b D, 0)` to `Q`.
pub fn oracle_actuator_length(p: &ActuatorPlacement, arm_length: f64, theta: f64) -> Result<f64> {
    let (qx, qy) = point_of_application(p, arm_length, theta)?;
    Ok((qx - p.b * arm_length).hypot(qy))
}

/// `dh/dl` by central difference in `theta`:
/// `(h(theta + delta) - h(theta - delta)) / (l(theta + delta) - l(theta - delta))`.
pub fn fd_velocity_ratio(
    p: &ActuatorPlacement,
    stages: u32,
    arm_length: f64,
    theta: f64,
    delta: f64,
) -> Result<f64> {
    let (lo, hi) = (theta - delta, theta + delta);
    check_theta(lo)?;
    check_theta(hi)?;
    let height = |t: f64| f64::from(stages) * arm_length * t.sin();
    let dl =
        oracle_actuator_length(p, arm_length, hi)? - oracle_actuator_length(p, arm_length, lo)?;
    if dl == 0.0 {
        return Err(Error::StationaryLength { theta });
    }
    Ok((height(hi) - height(lo)) / dl)
}

/// Relative mismatch between the actuator's work `integral F dl` and the work
/// needed to raise payload and lift, `L (h2 - h1) + W_B(h2) - W_B(h1)` with
/// `W_B(h) = W h / 2`.
///
/// The work integral is a composite trapezoid over a uniform `theta` grid
/// where each step contributes the mean force at its ends times the change
/// of the oracle length across it; for an even step count it is combined
/// with the same rule on every other node (one Richardson step). A constant
/// force integrates exactly either way.
pub fn energy_residual(
    lift: &LiftSpec,
    p: &ActuatorPlacement,
    theta1: f64,
    theta2: f64,
    steps: usize,
    policy: &SingularityPolicy,
) -> Result<f64> {
    check_theta(theta1)?;
    check_theta(theta2)?;
    if theta1 >= theta2 {
        return Err(Error::InvalidDomain {
            lo: theta1,
            hi: theta2,
        });
    }
    if steps < 16 {
        return Err(Error::TooFewSamples(steps, 16));
    }
    p.validate_for(lift)?;

    let (h1, h2) = (lift.height(theta1)?, lift.height(theta2)?);
    let self_weight_energy = |h: f64| lift.lift_weight() / 2.0 * h;
    let required = lift.load() * (h2 - h1) + self_weight_energy(h2) - self_weight_energy(h1);
    if required == 0.0 {
        return Err(Error::UndefinedResidual);
    }

    let d = lift.arm_length();
    let node = |k: usize| -> Result<(f64, f64)> {
        let theta = if k == steps {
            theta2
        } else {
            theta1 + (theta2 - theta1) * k as f64 / steps as f64
        };
        let f = match force(lift, p, theta, policy)? {
            MaybeSingular::Value(f) => f,
            MaybeSingular::Singular { denominator } => {
                return Err(Error::SingularInRange { theta, denominator })
            }
        };
        Ok((f, oracle_actuator_length(p, d, theta)?))
    };

    let nodes = (0..=steps).map(node).collect::<Result<Vec<_>>>()?;
    let trapezoid = |stride: usize| -> f64 {
        nodes
            .iter()
            .step_by(stride)
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| 0.5 * (w[0].0 + w[1].0) * (w[1].1 - w[0].1))
            .sum()
    };
    let fine = trapezoid(1);
    // Richardson step on the even nodes lifts the rule to fourth order
    let work = if steps.is_multiple_of(2) {
        (4.0 * fine - trapezoid(2)) / 3.0
    } else {
        fine
    };

    Ok((work - required).abs() / required.abs())
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // frozen literal expectations
mod tests {
    use super::*;
    use crate::lift::ArmSlope::{Negative, Positive};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    const S45: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn near(p: Point, q: Point) -> bool {
        (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12
    }

    #[test]
    fn one_level_layout() {
        let j = hinge_coordinates(1, 1.0, FRAC_PI_4).unwrap();
        assert!(near(j.static_hinges[0], (0.0, 0.0)));
        assert!(near(j.static_hinges[1], (0.0, S45)));
        assert!(near(j.mobile_hinges[0], (S45, 0.0)));
        assert!(near(j.mobile_hinges[1], (S45, S45)));
        assert_eq!(j.pivots.len(), 1);
        assert!(near(j.pivots[0], (S45 / 2.0, S45 / 2.0)));
    }

    #[test]
    fn two_level_heights() {
        let j = hinge_coordinates(2, 1.0, FRAC_PI_6).unwrap();
        for col in [&j.static_hinges, &j.mobile_hinges] {
            let ys: Vec<f64> = col.iter().map(|p| p.1).collect();
            assert!(ys
                .iter()
                .zip([0.0, 0.5, 1.0])
                .all(|(y, e)| (y - e).abs() < 1e-15));
        }
        let top = j.mobile_hinges.last().unwrap().1;
        assert_eq!(top, crate::lift::height(2, 1.0, FRAC_PI_6).unwrap());
        assert!(hinge_coordinates(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn application_point_examples() {
        let q = point_of_application(&ActuatorPlacement::screw_jack(0.0), 1.0, FRAC_PI_3).unwrap();
        assert!(near(q, (0.5, 0.0)));
        let p = ActuatorPlacement::new(1.0, 0.0, 0, Positive).unwrap();
        assert!(near(
            point_of_application(&p, 1.0, FRAC_PI_4).unwrap(),
            (S45, S45)
        ));
        let p = ActuatorPlacement::new(0.5, 0.0, 1, Negative).unwrap();
        let q = point_of_application(&p, 2.0, FRAC_PI_4).unwrap();
        assert!(near(q, (0.707_106_781_186_547_6, 2.121_320_343_559_642_4)));
    }

    #[test]
    fn oracle_length_examples() {
        let l =
            oracle_actuator_length(&ActuatorPlacement::screw_jack(2.0), 1.0, FRAC_PI_4).unwrap();
        assert!((l - 1.292_893_218_813_452_5).abs() < 1e-15);
        let l = oracle_actuator_length(&ActuatorPlacement::vertical(), 1.0, FRAC_PI_6).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        let p = ActuatorPlacement::new(0.5, 1.0, 0, Negative).unwrap();
        let l = oracle_actuator_length(&p, 2.0, FRAC_PI_4).unwrap();
        assert!((l - 1.473_625_758_207_900_6).abs() < 1e-14);
    }

    #[test]
    fn fd_examples() {
        let v = fd_velocity_ratio(&ActuatorPlacement::screw_jack(2.0), 2, 1.0, FRAC_PI_4, 1e-6)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-5);
        let v = fd_velocity_ratio(&ActuatorPlacement::vertical(), 3, 1.0, FRAC_PI_3, 1e-6).unwrap();
        assert!((v - 3.0).abs() < 1e-5);
        assert!(matches!(
            fd_velocity_ratio(&ActuatorPlacement::vertical(), 3, 1.0, 1e-7, 1e-6),
            Err(Error::ThetaOutOfRange(_))
        ));
    }

    #[test]
    fn fd_flags_stationary_length() {
        // Q fixed at the origin, P at the origin: l is identically zero
        let p = ActuatorPlacement::new(0.0, 0.0, 0, Positive).unwrap();
        assert!(matches!(
            fd_velocity_ratio(&p, 1, 1.0, 0.5, 1e-6),
            Err(Error::StationaryLength { .. })
        ));
    }

    #[test]
    fn energy_examples() {
        let pol = SingularityPolicy::default();
        let lift = LiftSpec::new(2, 1.0, 0.0, 100.0).unwrap();
        let r = energy_residual(
            &lift,
            &ActuatorPlacement::screw_jack(2.0),
            30f64.to_radians(),
            60f64.to_radians(),
            10_000,
            &pol,
        )
        .unwrap();
        assert!(r <= 1e-8, "screw jack residual {r}");

        let lift = LiftSpec::new(3, 0.8, 60.0, 70.0).unwrap();
        let r = energy_residual(
            &lift,
            &ActuatorPlacement::vertical(),
            0.2,
            1.3,
            10_000,
            &pol,
        )
        .unwrap();
        assert!(r <= 1e-10, "vertical residual {r}");

        let empty = LiftSpec::new(2, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            energy_residual(
                &empty,
                &ActuatorPlacement::vertical(),
                0.2,
                1.3,
                10_000,
                &pol
            ),
            Err(Error::UndefinedResidual)
        ));
        assert!(energy_residual(&lift, &ActuatorPlacement::vertical(), 0.2, 1.3, 8, &pol).is_err());
    }

    #[test]
    fn energy_detects_singularity() {
        let pol = SingularityPolicy::default();
        let lift = LiftSpec::new(1, 1.0, 0.0, 10.0).unwrap();
        let mid = 0.9f64.acos();
        // steps = 16 puts a node on the midpoint
        let r = energy_residual(
            &lift,
            &ActuatorPlacement::screw_jack(0.9),
            mid - 0.1,
            mid + 0.1,
            16,
            &pol,
        );
        assert!(matches!(r, Err(Error::SingularInRange { .. })));
    }

    #[test]
    fn hinge_endpoints_coincide_with_joints() {
        let theta = 0.77;
        let j = hinge_coordinates(3, 1.3, theta).unwrap();
        for i in 0..3u32 {
            let k = i as usize;
            let neg0 = ActuatorPlacement::new(0.0, 0.0, i, Negative).unwrap();
            let neg1 = ActuatorPlacement::new(1.0, 0.0, i, Negative).unwrap();
            let pos0 = ActuatorPlacement::new(0.0, 0.0, i, Positive).unwrap();
            let pos1 = ActuatorPlacement::new(1.0, 0.0, i, Positive).unwrap();
            assert!(near(
                point_of_application(&neg0, 1.3, theta).unwrap(),
                j.mobile_hinges[k]
            ));
            assert!(near(
                point_of_application(&neg1, 1.3, theta).unwrap(),
                j.static_hinges[k + 1]
            ));
            assert!(near(
                point_of_application(&pos0, 1.3, theta).unwrap(),
                j.static_hinges[k]
            ));
            assert!(near(
                point_of_application(&pos1, 1.3, theta).unwrap(),
                j.mobile_hinges[k + 1]
            ));
        }
    }
}
