//! One-factor parameter sweeps around a base scenario.
//!
//! A sweep re-solves the chosen optimization model at each value of a single
//! system parameter, holding everything else fixed.  Rows are independent, so
//! they run concurrently and are gathered back in input order.  A row whose
//! substituted parameter set admits no feasible decision records that failure
//! in place; the remaining rows still solve.

use rayon::prelude::*;

use crate::error::SolveError;
use crate::feasibility::Model;
use crate::params::SystemParameters;
use crate::solver::{solve_model1, solve_model2, Solution, SolverConfig};

/// Fields of [`SystemParameters`] accepted as sweep targets.
pub const SWEEPABLE_PARAMETERS: &[&str] = &[
    "demand_new",
    "demand_repaired",
    "return_fraction_new",
    "acceptance_fraction",
    "return_fraction_repaired",
    "holding_cost_supply",
    "holding_cost_repair",
    "setup_cost_supply",
    "setup_cost_repair",
    "waste_unit_cost",
];

/// Default sweep grid bounds, as multiples of the base value, and size.
/// Ten log-spaced points between one fifth and two and a half times the base
/// give near-symmetric relative coverage on both sides of it.
pub const DEFAULT_SWEEP_LO_FACTOR: f64 = 0.2;
pub const DEFAULT_SWEEP_HI_FACTOR: f64 = 2.5;
pub const DEFAULT_SWEEP_POINTS: usize = 10;

/// A one-factor sweep: which parameter moves, through which values, around
/// which base scenario, re-solving which model.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Field name of the swept parameter (see [`SWEEPABLE_PARAMETERS`]).
    pub parameter: String,
    /// Substituted absolute values, visited in order.
    pub values: Vec<f64>,
    /// Scenario every row starts from.
    pub base: SystemParameters,
    /// Model re-solved per row; the recovery rate must be present on the
    /// base exactly when the fixed-recovery model is chosen.
    pub model: Model,
}

impl SweepSpec {
    /// Checks the sweep's own invariants (not each substituted row, whose
    /// failures are recorded per row instead).
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.values.is_empty() {
            return Err(SolveError::InvalidConfig {
                name: "values",
                requirement: "at least one sweep value",
            });
        }
        if self.base.field(&self.parameter).is_none() {
            return Err(SolveError::InvalidConfig {
                name: "parameter",
                requirement: "a sweepable system-parameter field name",
            });
        }
        match self.model {
            Model::FixedRecovery => {
                if self.base.fixed_recovery.is_none() {
                    return Err(SolveError::InvalidConfig {
                        name: "model",
                        requirement: "fixed-recovery sweeps need fixed_recovery on the base",
                    });
                }
            }
            Model::VariableRecovery => {
                if self.base.fixed_recovery.is_some() {
                    return Err(SolveError::InvalidConfig {
                        name: "model",
                        requirement: "variable-recovery sweeps need fixed_recovery absent",
                    });
                }
            }
            Model::BiObjective => {
                return Err(SolveError::InvalidConfig {
                    name: "model",
                    requirement: "sweeps re-solve the fixed- or variable-recovery model",
                });
            }
        }
        Ok(())
    }
}

/// One sweep row: the substituted value and either its solution or the
/// failure that stopped it.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<Solution, SolveError>,
}

/// Runs the sweep, solving rows concurrently and returning them in input
/// order.  Row-level failures (for example an empty feasible region after
/// substitution) are recorded in the row; only an invalid spec or solver
/// configuration fails the whole sweep.
pub fn run_sweep(spec: &SweepSpec, cfg: &SolverConfig) -> Result<Vec<SweepRow>, SolveError> {
    spec.validate()?;
    cfg.validate()?;
    let rows = spec
        .values
        .par_iter()
        .map(|&value| {
            let outcome = match spec.base.with_field(&spec.parameter, value) {
                Some(params) => match spec.model {
                    Model::FixedRecovery => solve_model1(&params, cfg),
                    Model::VariableRecovery => solve_model2(&params, cfg),
                    Model::BiObjective => unreachable!("rejected by SweepSpec::validate"),
                },
                None => Err(SolveError::InvalidConfig {
                    name: "parameter",
                    requirement: "a sweepable system-parameter field name",
                }),
            };
            SweepRow { value, outcome }
        })
        .collect();
    Ok(rows)
}

/// Log-spaced sweep values `base_value * lo_factor` through
/// `base_value * hi_factor`, inclusive.  Requires positive inputs and
/// `count >= 2`.
pub fn log_spaced_values(
    base_value: f64,
    lo_factor: f64,
    hi_factor: f64,
    count: usize,
) -> Vec<f64> {
    assert!(
        base_value > 0.0 && lo_factor > 0.0 && hi_factor > lo_factor && count >= 2,
        "log-spaced grid needs positive bounds in order and at least two points"
    );
    let lo = base_value * lo_factor;
    let hi = base_value * hi_factor;
    let ratio = hi / lo;
    (0..count)
        .map(|i| lo * ratio.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Relative cost drop across a completed sweep's endpoints:
/// `1 - cost(first) / cost(last)`.  `None` when either endpoint failed.
pub fn endpoint_reduction(rows: &[SweepRow]) -> Option<f64> {
    let first = rows.first()?.outcome.as_ref().ok()?;
    let last = rows.last()?.outcome.as_ref().ok()?;
    Some(1.0 - first.cost.total_rate / last.cost.total_rate)
}
