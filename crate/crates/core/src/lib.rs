//! Force, velocity ratio, actuator stroke and actuator placement search for
//! n-stage scissor lifts.
//!
//! The actuator may attach anywhere on any arm; its position is described by
//! three variables `(a, b, i)` plus the slope of the arm it pushes on (see
//! [`ActuatorPlacement`]). From those, closed-form expressions give the
//! actuator length and the velocity ratio `dh/dl`, and the force follows
//! from the energy balance `F = (L + W/2) dh/dl`.
//!
//! The [`oracle`] module recomputes the same quantities from explicit joint
//! coordinates and finite differences; [`verify`] runs seeded randomized
//! comparisons between the two.
//!
//! ```
//! use scissor_core::{force, ActuatorPlacement, LiftSpec, SingularityPolicy};
//!
//! let lift = LiftSpec::new(2, 1.0, 40.0, 80.0).unwrap();
//! let policy = SingularityPolicy::for_lift(&lift);
//! let f = force(&lift, &ActuatorPlacement::vertical(), 0.6, &policy).unwrap();
//! assert!((f.value().unwrap() - 200.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod force;
pub mod lift;
pub mod oracle;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use force::{
    actuator_length, analyze_at, dh_dl_denominator, force, length_radicand, peak_force,
    stroke_range, velocity_ratio, AnalysisRow, MaybeSingular, PeakForce, SingularityPolicy, Stroke,
};
pub use lift::{
    effective_load, height, lift_constants, resolve_shared_hinge, theta_from_height,
    ActuatorPlacement, ArmSlope, Column, HingeAttachment, LiftSpec, PlacementConstants,
    ThetaDomain,
};
pub use oracle::{
    energy_residual, fd_velocity_ratio, hinge_coordinates, oracle_actuator_length,
    point_of_application, JointSet,
};
pub use search::{
    evaluate, grid_search, refine, sweep, Candidates, Constraints, Evaluation, Objective,
    PlacementGrid, Refinement, SearchProblem, SearchResult, Violations,
};
