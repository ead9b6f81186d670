//! JSON run configuration and its validation into core types.
//!
//! Angles are given in degrees here and converted to radians exactly once,
//! in [`ConfigDocument::validate`].

use std::path::Path;

use serde::Deserialize;

use scissor_core::search::DEFAULT_SAMPLES;
use scissor_core::{
    ActuatorPlacement, ArmSlope, Candidates, Constraints, LiftSpec, Objective, PlacementGrid,
    SearchProblem, ThetaDomain,
};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub lift: LiftSection,
    pub placement: PlacementSection,
    pub domain: DomainSection,
    #[serde(default)]
    pub search: Option<SearchSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSection {
    pub stages: u32,
    pub arm_length_m: f64,
    pub lift_weight_n: f64,
    pub load_n: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SlopeName {
    Negative,
    Positive,
}

impl From<SlopeName> for ArmSlope {
    fn from(s: SlopeName) -> Self {
        match s {
            SlopeName::Negative => ArmSlope::Negative,
            SlopeName::Positive => ArmSlope::Positive,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSection {
    pub a: f64,
    pub b: f64,
    pub i: u32,
    pub slope: SlopeName,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub theta_lo_deg: f64,
    pub theta_hi_deg: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    MinPeakForce,
    MinStroke,
    MinForceAtDeg(f64),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSection {
    pub max_force_n: Option<f64>,
    pub max_length_m: Option<f64>,
    pub min_length_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub a_steps: Option<usize>,
    pub b_steps: Option<usize>,
    pub i_set: Option<Vec<u32>>,
    pub slopes: Option<Vec<SlopeName>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub objective: ObjectiveSpec,
    #[serde(default)]
    pub constraints: ConstraintSection,
    /// Anchor offsets searched, in arm lengths. Required for grid searches;
    /// defaults to the span of the candidates otherwise.
    pub b_range: Option<[f64; 2]>,
    pub samples: Option<usize>,
    pub grid: Option<GridSection>,
    pub candidates: Option<Vec<PlacementSection>>,
    #[serde(default)]
    pub refine: bool,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub lift: LiftSpec,
    pub placement: ActuatorPlacement,
    pub domain: ThetaDomain,
    pub search: Option<SearchConfig>,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub problem: SearchProblem,
    pub refine: bool,
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::invalid(format!("{path}: {msg}"))
}

fn positive(path: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(
            path,
            format!("must be a finite number > 0, got {v}"),
        ))
    }
}

fn non_negative(path: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(invalid(
            path,
            format!("must be a finite number >= 0, got {v}"),
        ))
    }
}

/// Converts a user angle in degrees, rejecting the closed endpoints.
pub fn theta_from_degrees(path: &str, deg: f64) -> Result<f64, CliError> {
    if deg.is_finite() && deg > 0.0 && deg < 90.0 {
        Ok(deg.to_radians())
    } else {
        Err(invalid(
            path,
            format!("theta out of open range (0, 90) degrees: {deg}"),
        ))
    }
}

fn placement(
    path: &str,
    s: &PlacementSection,
    lift: &LiftSpec,
) -> Result<ActuatorPlacement, CliError> {
    if !(s.a.is_finite() && (0.0..=1.0).contains(&s.a)) {
        return Err(invalid(
            &format!("{path}.a"),
            format!("must lie in [0, 1], got {}", s.a),
        ));
    }
    if !s.b.is_finite() {
        return Err(invalid(&format!("{path}.b"), "must be finite"));
    }
    if s.i >= lift.stages() {
        return Err(invalid(
            &format!("{path}.i"),
            format!(
                "must be below the stage count {}, got {}",
                lift.stages(),
                s.i
            ),
        ));
    }
    Ok(ActuatorPlacement {
        a: s.a,
        b: s.b,
        i: s.i,
        slope: s.slope.into(),
    })
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path.is_empty() {
                CliError::invalid(format!("config: {inner}"))
            } else {
                CliError::invalid(format!("{path}: {inner}"))
            }
        })
    }

    pub fn validate(&self) -> Result<Config, CliError> {
        let l = &self.lift;
        if l.stages < 1 {
            return Err(invalid("lift.stages", "must be at least 1"));
        }
        let lift = LiftSpec::new(
            l.stages,
            positive("lift.arm_length_m", l.arm_length_m)?,
            non_negative("lift.lift_weight_n", l.lift_weight_n)?,
            non_negative("lift.load_n", l.load_n)?,
        )
        .map_err(|e| invalid("lift", e))?;

        let placement = placement("placement", &self.placement, &lift)?;

        let lo = theta_from_degrees("domain.theta_lo_deg", self.domain.theta_lo_deg)?;
        let hi = theta_from_degrees("domain.theta_hi_deg", self.domain.theta_hi_deg)?;
        let domain = ThetaDomain::new(lo, hi).map_err(|_| {
            invalid(
                "domain",
                format!(
                    "theta_lo_deg ({}) must not exceed theta_hi_deg ({})",
                    self.domain.theta_lo_deg, self.domain.theta_hi_deg
                ),
            )
        })?;

        let search = match &self.search {
            Some(s) => Some(s.validate(&lift, &domain)?),
            None => None,
        };

        Ok(Config {
            lift,
            placement,
            domain,
            search,
        })
    }
}

impl SearchSection {
    fn validate(&self, lift: &LiftSpec, domain: &ThetaDomain) -> Result<SearchConfig, CliError> {
        let objective = match self.objective {
            ObjectiveSpec::MinPeakForce => Objective::MinPeakForce,
            ObjectiveSpec::MinStroke => Objective::MinStroke,
            ObjectiveSpec::MinForceAtDeg(deg) => Objective::MinForceAt(theta_from_degrees(
                "search.objective.min_force_at_deg",
                deg,
            )?),
        };

        let c = &self.constraints;
        let bound = |path: &str, v: Option<f64>| v.map(|x| positive(path, x)).transpose();
        let constraints = Constraints {
            max_force: bound("search.constraints.max_force_n", c.max_force_n)?,
            max_length: bound("search.constraints.max_length_m", c.max_length_m)?,
            min_length: bound("search.constraints.min_length_m", c.min_length_m)?,
        };

        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(invalid(
                "search.samples",
                format!("must be at least 2, got {samples}"),
            ));
        }

        let (candidates, span) = match (&self.candidates, &self.grid) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "search",
                    "give either grid or candidates, not both",
                ))
            }
            (Some(list), None) => {
                if list.is_empty() {
                    return Err(invalid("search.candidates", "must not be empty"));
                }
                let placements = list
                    .iter()
                    .enumerate()
                    .map(|(k, s)| placement(&format!("search.candidates[{k}]"), s, lift))
                    .collect::<Result<Vec<_>, _>>()?;
                let lo = placements.iter().map(|p| p.b).fold(f64::INFINITY, f64::min);
                let hi = placements
                    .iter()
                    .map(|p| p.b)
                    .fold(f64::NEG_INFINITY, f64::max);
                (Candidates::List(placements), Some((lo, hi)))
            }
            (None, grid) => {
                let g = grid.clone().unwrap_or_default();
                let defaults = PlacementGrid::default_for(lift);
                let grid = PlacementGrid {
                    a_steps: g.a_steps.unwrap_or(defaults.a_steps),
                    b_steps: g.b_steps.unwrap_or(defaults.b_steps),
                    i_set: g.i_set.unwrap_or(defaults.i_set),
                    slopes: match g.slopes {
                        Some(s) => s.into_iter().map(ArmSlope::from).collect(),
                        None => defaults.slopes,
                    },
                };
                if grid.a_steps == 0 {
                    return Err(invalid("search.grid.a_steps", "must be at least 1"));
                }
                if grid.b_steps == 0 {
                    return Err(invalid("search.grid.b_steps", "must be at least 1"));
                }
                if grid.i_set.is_empty() {
                    return Err(invalid("search.grid.i_set", "must not be empty"));
                }
                if let Some(i) = grid.i_set.iter().find(|&&i| i >= lift.stages()) {
                    return Err(invalid(
                        "search.grid.i_set",
                        format!("level {i} must be below the stage count {}", lift.stages()),
                    ));
                }
                if grid.slopes.is_empty() {
                    return Err(invalid("search.grid.slopes", "must not be empty"));
                }
                (Candidates::Grid(grid), None)
            }
        };

        let b_range = match (self.b_range, span) {
            (Some([lo, hi]), _) => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(invalid(
                        "search.b_range",
                        format!("must be a finite ordered pair, got [{lo}, {hi}]"),
                    ));
                }
                (lo, hi)
            }
            (None, Some(span)) => span,
            (None, None) => return Err(invalid("search.b_range", "required for a grid search")),
        };

        let problem = SearchProblem::new(
            *lift,
            *domain,
            objective,
            constraints,
            candidates,
            b_range,
            samples,
        )
        .map_err(|e| invalid("search", e))?;
        Ok(SearchConfig {
            problem,
            refine: self.refine,
        })
    }
}

/// Reads, parses and validates a config file.
pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("config: cannot read {}: {e}", path.display())))?;
    ConfigDocument::parse(&text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "lift": {"stages": 2, "arm_length_m": 1.0, "lift_weight_n": 0, "load_n": 200},
        "placement": {"a": 0, "b": 2, "i": 0, "slope": "negative"},
        "domain": {"theta_lo_deg": 20, "theta_hi_deg": 70}
    }"#;

    fn err(text: &str) -> String {
        match ConfigDocument::parse(text).and_then(|d| d.validate()) {
            Ok(_) => panic!("expected failure"),
            Err(e) => {
                assert_eq!(e.code, crate::EXIT_INVALID);
                e.message
            }
        }
    }

    #[test]
    fn base_config_validates() {
        let cfg = ConfigDocument::parse(BASE).unwrap().validate().unwrap();
        assert_eq!(cfg.lift.stages(), 2);
        assert_eq!(cfg.placement, ActuatorPlacement::screw_jack(2.0));
        assert_eq!(cfg.domain.lo(), 20f64.to_radians());
        assert!(cfg.search.is_none());
    }

    #[test]
    fn bad_slope_names_field() {
        let msg = err(&BASE.replace("\"negative\"", "\"diagonal\""));
        assert!(msg.starts_with("placement.slope"), "{msg}");
    }

    #[test]
    fn unknown_key_rejected() {
        let msg = err(&BASE.replace("\"load_n\": 200", "\"load_n\": 200, \"colour\": 1"));
        assert!(msg.starts_with("lift"), "{msg}");
        assert!(msg.contains("colour"), "{msg}");
    }

    #[test]
    fn semantic_errors_carry_paths() {
        assert!(err(&BASE.replace("\"stages\": 2", "\"stages\": 0")).starts_with("lift.stages"));
        assert!(
            err(&BASE.replace("\"arm_length_m\": 1.0", "\"arm_length_m\": -1"))
                .starts_with("lift.arm_length_m")
        );
        assert!(err(&BASE.replace("\"a\": 0", "\"a\": 1.5")).starts_with("placement.a"));
        assert!(err(&BASE.replace("\"i\": 0", "\"i\": 2")).starts_with("placement.i"));
        assert!(
            err(&BASE.replace("\"theta_lo_deg\": 20", "\"theta_lo_deg\": 0"))
                .starts_with("domain.theta_lo_deg")
        );
        assert!(
            err(&BASE.replace("\"theta_hi_deg\": 70", "\"theta_hi_deg\": 10"))
                .starts_with("domain")
        );
    }

    #[test]
    fn search_section() {
        let with = |search: &str| {
            BASE.replacen("\n    }", &format!(",\n \"search\": {search}\n    }}"), 1)
        };
        let cfg = ConfigDocument::parse(&with(r#"{"objective": "min_peak_force", "candidates": [
            {"a": 0, "b": 2, "i": 0, "slope": "negative"}, {"a": 0, "b": 0, "i": 1, "slope": "positive"}]}"#))
            .unwrap()
            .validate()
            .unwrap();
        let s = cfg.search.unwrap();
        assert_eq!(s.problem.b_range(), (0.0, 2.0));
        assert_eq!(s.problem.placements().len(), 2);

        let cfg = ConfigDocument::parse(&with(
            r#"{"objective": {"min_force_at_deg": 45}, "b_range": [-1, 3],
            "grid": {"a_steps": 3, "b_steps": 5}}"#,
        ))
        .unwrap()
        .validate()
        .unwrap();
        assert_eq!(
            cfg.search.unwrap().problem.placements().len(),
            3 * 5 * 2 * 2
        );

        assert!(err(&with(r#"{"objective": "min_stroke"}"#)).starts_with("search.b_range"));
        assert!(err(&with(
            r#"{"objective": "min_stroke", "b_range": [0, 1], "grid": {"i_set": [5]}}"#
        ))
        .starts_with("search.grid.i_set"));
        assert!(err(&with(r#"{"objective": "fastest"}"#)).starts_with("search.objective"));
        assert!(err(&with(
            r#"{"objective": "min_stroke", "b_range": [0, 1], "constraints": {"max_force_n": -3}}"#
        ))
        .starts_with("search.constraints.max_force_n"));
    }
}
