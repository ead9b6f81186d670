use proptest::prelude::*;
use scissor_core::{
    actuator_length, energy_residual, fd_velocity_ratio, hinge_coordinates, oracle_actuator_length,
    point_of_application, resolve_shared_hinge, velocity_ratio, ActuatorPlacement, ArmSlope,
    Column, LiftSpec, MaybeSingular, SingularityPolicy,
};

fn slope() -> impl Strategy<Value = ArmSlope> {
    prop_oneof![Just(ArmSlope::Negative), Just(ArmSlope::Positive)]
}

fn placement(stages: u32) -> impl Strategy<Value = ActuatorPlacement> {
    (0.0..=1.0f64, -1.0..2.5f64, 0..stages, slope())
        .prop_map(|(a, b, i, slope)| ActuatorPlacement { a, b, i, slope })
}

fn case() -> impl Strategy<Value = (u32, f64, ActuatorPlacement, f64)> {
    (1u32..=5).prop_flat_map(|n| (Just(n), 0.2..3.0f64, placement(n), 0.05..1.5f64))
}

proptest! {
    #[test]
    fn closed_form_length_matches_coordinates((_n, d, p, theta) in case()) {
        let policy = SingularityPolicy::for_arm_length(d);
        let euclid = oracle_actuator_length(&p, d, theta).unwrap();
        prop_assume!(euclid > 0.05 * d);
        let closed = actuator_length(&p, d, theta, &policy).unwrap();
        prop_assert!((closed - euclid).abs() <= 1e-12 * euclid, "{closed} vs {euclid}");
    }

    #[test]
    fn closed_form_ratio_matches_central_difference((n, d, p, theta) in case()) {
        let policy = SingularityPolicy::for_arm_length(d);
        prop_assume!(scissor_core::dh_dl_denominator(&p, theta).abs() > 1e-2);
        prop_assume!(oracle_actuator_length(&p, d, theta).unwrap() > 0.05 * d);
        let MaybeSingular::Value(closed) = velocity_ratio(&p, n, theta, &policy).unwrap() else {
            panic!("unexpected singular value");
        };
        let fd = fd_velocity_ratio(&p, n, d, theta, 1e-6).unwrap();
        prop_assert!((fd - closed).abs() <= 1e-5 * closed.abs(), "{fd} vs {closed}");
    }

    #[test]
    fn application_point_lies_on_its_arm((n, d, p, theta) in case()) {
        let joints = hinge_coordinates(n, d, theta).unwrap();
        let q = point_of_application(&p, d, theta).unwrap();
        // each arm covers D cos(theta) across and D sin(theta) up
        let (s, c) = theta.sin_cos();
        let level = p.i as usize;
        let base = match p.slope {
            ArmSlope::Negative => joints.mobile_hinges[level],
            ArmSlope::Positive => joints.static_hinges[level],
        };
        let dir = match p.slope {
            ArmSlope::Negative => (-c, s),
            ArmSlope::Positive => (c, s),
        };
        prop_assert!((q.0 - (base.0 + p.a * d * dir.0)).abs() <= 1e-12 * d);
        prop_assert!((q.1 - (base.1 + p.a * d * dir.1)).abs() <= 1e-12 * d);
    }

    #[test]
    fn shared_hinges_resolve_onto_joints(n in 1u32..=5, d in 0.2..3.0f64, theta in 0.05..1.5f64, level_frac in 0.0..1.0f64) {
        let level = ((n as f64) * level_frac) as u32;
        let joints = hinge_coordinates(n, d, theta).unwrap();
        for (column, expected) in [
            (Column::Static, joints.static_hinges[level as usize]),
            (Column::Mobile, joints.mobile_hinges[level as usize]),
        ] {
            let p = resolve_shared_hinge(column, level, n).unwrap().with_anchor(0.0);
            let q = point_of_application(&p, d, theta).unwrap();
            prop_assert!((q.0 - expected.0).abs() <= 1e-12 * d && (q.1 - expected.1).abs() <= 1e-12 * d);
        }
    }
}

#[test]
fn energy_balances_for_both_reductions() {
    let lift = LiftSpec::new(3, 0.9, 35.0, 220.0).unwrap();
    let policy = SingularityPolicy::for_lift(&lift);
    for (p, tol) in [
        (ActuatorPlacement::screw_jack(2.0), 1e-8),
        (ActuatorPlacement::vertical(), 1e-10),
    ] {
        let r = energy_residual(&lift, &p, 0.3, 1.2, 10_000, &policy).unwrap();
        assert!(r <= tol, "{p:?}: {r}");
    }
}

#[test]
fn energy_rejects_interval_through_singularity() {
    let lift = LiftSpec::new(2, 1.0, 0.0, 100.0).unwrap();
    let policy = SingularityPolicy::for_lift(&lift);
    let p = ActuatorPlacement::new(0.0, 0.9, 0, ArmSlope::Negative).unwrap();
    let centre = 0.9f64.acos();
    assert!(energy_residual(&lift, &p, centre - 0.2, centre + 0.2, 1000, &policy).is_err());
}
