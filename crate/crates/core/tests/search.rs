use scissor_core::{
    evaluate, grid_search, peak_force, refine, stroke_range, ActuatorPlacement, ArmSlope,
    Candidates, Constraints, LiftSpec, Objective, PlacementGrid, SearchProblem, SingularityPolicy,
    ThetaDomain,
};

fn lift() -> LiftSpec {
    LiftSpec::new(3, 0.8, 120.0, 400.0).unwrap()
}

fn grid_problem(objective: Objective, constraints: Constraints) -> SearchProblem {
    let lift = lift();
    SearchProblem::new(
        lift,
        ThetaDomain::from_degrees(15.0, 65.0).unwrap(),
        objective,
        constraints,
        Candidates::Grid(PlacementGrid {
            a_steps: 6,
            b_steps: 11,
            i_set: vec![0, 1, 2],
            slopes: vec![ArmSlope::Negative, ArmSlope::Positive],
        }),
        (-0.5, 2.0),
        64,
    )
    .unwrap()
}

#[test]
fn best_dominates_every_feasible_candidate() {
    let problem = grid_problem(Objective::MinPeakForce, Constraints::default());
    let policy = SingularityPolicy::for_lift(problem.lift());
    let result = grid_search(&problem, &policy).unwrap();
    assert_eq!(result.ranked.len(), 6 * 11 * 3 * 2);
    let best = result.best().unwrap().objective.unwrap();
    for e in result.ranked.iter().filter(|e| e.feasible()) {
        assert!(e.objective.unwrap() >= best);
    }
    // feasible entries form a prefix
    let first_infeasible = result
        .ranked
        .iter()
        .position(|e| !e.feasible())
        .unwrap_or(result.ranked.len());
    assert!(result.ranked[first_infeasible..]
        .iter()
        .all(|e| !e.feasible()));
}

#[test]
fn search_is_deterministic() {
    let problem = grid_problem(Objective::MinStroke, Constraints::default());
    let policy = SingularityPolicy::for_lift(problem.lift());
    let a = grid_search(&problem, &policy).unwrap();
    let b = grid_search(&problem, &policy).unwrap();
    assert_eq!(a, b);
}

#[test]
fn objectives_agree_with_direct_evaluation() {
    let policy = SingularityPolicy::for_lift(&lift());
    let dom = ThetaDomain::from_degrees(15.0, 65.0).unwrap();
    let p = ActuatorPlacement::new(0.25, 1.5, 1, ArmSlope::Negative).unwrap();

    let problem = grid_problem(Objective::MinPeakForce, Constraints::default());
    let e = evaluate(&problem, &p, &policy).unwrap();
    let pk = peak_force(&lift(), &p, &dom, 64, &policy).unwrap();
    assert_eq!(e.objective, Some(pk.force.abs()));

    let problem = grid_problem(Objective::MinStroke, Constraints::default());
    let e = evaluate(&problem, &p, &policy).unwrap();
    let s = stroke_range(&p, 0.8, &dom, 64, &policy).unwrap();
    assert_eq!(e.objective, Some(s.max - s.min));
}

#[test]
fn constraints_only_remove_candidates() {
    let free = grid_problem(Objective::MinPeakForce, Constraints::default());
    let bound = grid_problem(
        Objective::MinPeakForce,
        Constraints {
            max_force: Some(5000.0),
            max_length: Some(1.6),
            min_length: Some(0.2),
        },
    );
    let policy = SingularityPolicy::for_lift(free.lift());
    let a = grid_search(&free, &policy).unwrap();
    let b = grid_search(&bound, &policy).unwrap();
    let feasible =
        |r: &scissor_core::SearchResult| r.ranked.iter().filter(|e| e.feasible()).count();
    assert!(feasible(&b) < feasible(&a));
    for e in b.ranked.iter().filter(|e| e.feasible()) {
        let free_e = a
            .ranked
            .iter()
            .find(|x| x.placement == e.placement)
            .unwrap();
        assert!(free_e.feasible());
        assert_eq!(free_e.objective, e.objective);
    }
    let (best_a, best_b) = (a.best().unwrap(), b.best().unwrap());
    assert!(best_b.objective.unwrap() >= best_a.objective.unwrap());
}

#[test]
fn refinement_never_worsens_the_grid_best() {
    let problem = grid_problem(
        Objective::MinPeakForce,
        Constraints {
            max_length: Some(1.6),
            min_length: Some(0.2),
            ..Default::default()
        },
    );
    let policy = SingularityPolicy::for_lift(problem.lift());
    let best = *grid_search(&problem, &policy).unwrap().best().unwrap();
    let r = refine(&problem, &best.placement, &policy).unwrap();
    assert_eq!(r.trace[0], best.objective.unwrap());
    assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(r.objective <= best.objective.unwrap());
    assert_eq!(
        Some(r.objective),
        evaluate(&problem, &r.placement, &policy).unwrap().objective
    );
    assert!(evaluate(&problem, &r.placement, &policy)
        .unwrap()
        .feasible());
}
