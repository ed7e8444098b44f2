//! Constraint checks shared by the evaluation, search, and trace layers.

use crate::decision::{derive, DecisionVector};
use crate::params::SystemParameters;

/// Which optimization model's constraint set applies.
///
/// * [`Model::FixedRecovery`] — the recovery rate is a system parameter; only
///   cycle-structure constraints bind.
/// * [`Model::VariableRecovery`] — the recovery rate is a decision
///   coordinate; repair inflow must additionally cover repaired-item demand.
/// * [`Model::BiObjective`] — the inventory/waste trade-off; same constraint
///   set as [`Model::VariableRecovery`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    FixedRecovery,
    VariableRecovery,
    BiObjective,
}

impl Model {
    fn couples_recovery(self) -> bool {
        !matches!(self, Model::FixedRecovery)
    }
}

/// One violated constraint: its stable identifier and how far the decision
/// sits outside it (in the constraint's natural units).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Stable constraint identifier.
    pub constraint: &'static str,
    /// Positive residual magnitude.
    pub residual: f64,
}

/// Outcome of [`check_feasibility`]: feasible iff no violations.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    /// Comma-joined violation identifiers (empty string when feasible).
    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.constraint)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Relative-scaled feasibility slack: boundary decisions (e.g. repair inflow
/// exactly equal to demand) must not be rejected for rounding noise.
fn breach(residual: f64, scale: f64) -> Option<f64> {
    (residual > 1e-9 * (1.0 + scale.abs())).then_some(residual)
}

/// Evaluates every constraint of the chosen model at `decision`.
///
/// Constraints checked (identifiers as reported):
///
/// * `min_cycle_span_new` — the procurement phase spans at least one time
///   unit (`procurement_cycles * batch_new >= demand_new`). Phases shorter
///   than the demand-rate time unit describe a schedule whose "cycle" turns
///   over faster than the flows it averages, and every reference operating
///   point satisfies this; dropping it lets vanishing-span decisions
///   undercut all of them.
/// * `min_cycle_span_repair` — same for the repair phase.
/// * `repair_cycle_within_procurement` — the repair phase fits inside the
///   procurement phase (`cycle_repair <= cycle_new`), so dispatches never
///   outrun collection.
/// * `repaired_supply_covers_demand` (recovery-coupled models only) — total
///   accepted inflow covers repaired-item demand:
///   `inflow_primary + inflow_secondary >= demand_repaired`.
/// * `recovery_within_unit_interval` (recovery-coupled models only) —
///   `0 <= recovery <= 1`.
///
/// Integrality of batch sizes and cycle counts is guaranteed by the decision
/// type itself. Callers must pass values satisfying the type invariants; this
/// function only classifies, it never fails.
pub fn check_feasibility(
    params: &SystemParameters,
    decision: &DecisionVector,
    model: Model,
) -> FeasibilityReport {
    debug_assert!(params.validate().is_ok() && decision.validate().is_ok());
    let mut violations = Vec::new();
    // Schedule arithmetic is total on inputs satisfying the type invariants.
    let s = derive(params, decision).expect("type invariants must hold");

    if let Some(residual) = breach(1.0 - s.cycle_new, 1.0) {
        violations.push(Violation {
            constraint: "min_cycle_span_new",
            residual,
        });
    }
    if let Some(residual) = breach(1.0 - s.cycle_repair, 1.0) {
        violations.push(Violation {
            constraint: "min_cycle_span_repair",
            residual,
        });
    }
    if let Some(residual) = breach(s.cycle_repair - s.cycle_new, s.cycle_new) {
        violations.push(Violation {
            constraint: "repair_cycle_within_procurement",
            residual,
        });
    }
    if model.couples_recovery() {
        let inflow = s.inflow_primary + s.inflow_secondary;
        if let Some(residual) = breach(params.demand_repaired - inflow, params.demand_repaired) {
            violations.push(Violation {
                constraint: "repaired_supply_covers_demand",
                residual,
            });
        }
        let out = (decision.recovery - 1.0).max(-decision.recovery);
        if let Some(residual) = breach(out, 1.0) {
            violations.push(Violation {
                constraint: "recovery_within_unit_interval",
                residual,
            });
        }
    }

    FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
    }
}

/// Feasible recovery interval `[s_min, 1]` for the recovery-coupled models,
/// or `None` when even full recovery cannot cover repaired-item demand.
pub fn recovery_interval(params: &SystemParameters) -> Option<(f64, f64)> {
    params.min_covering_recovery().map(|s_min| (s_min, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tyre_row1() -> SystemParameters {
        SystemParameters {
            demand_new: 100.0,
            demand_repaired: 43.0,
            return_fraction_new: 0.4,
            acceptance_fraction: 0.8,
            return_fraction_repaired: 0.4,
            holding_cost_supply: 1.6,
            holding_cost_repair: 1.2,
            setup_cost_supply: 10.0,
            setup_cost_repair: 1.0,
            waste_unit_cost: 0.0,
            fixed_recovery: Some(0.7),
        }
    }

    fn dual_market() -> SystemParameters {
        SystemParameters {
            demand_new: 1500.0,
            demand_repaired: 2500.0,
            return_fraction_new: 0.8,
            acceptance_fraction: 0.8,
            return_fraction_repaired: 0.8,
            holding_cost_supply: 5.0,
            holding_cost_repair: 2.0,
            setup_cost_supply: 2400.0,
            setup_cost_repair: 1400.0,
            waste_unit_cost: 0.0,
            fixed_recovery: None,
        }
    }

    #[test]
    fn reference_decisions_are_feasible() {
        let d = DecisionVector::new(35, 15, 3, 3, 0.7).unwrap();
        let r = check_feasibility(&tyre_row1(), &d, Model::FixedRecovery);
        assert!(r.feasible, "violations: {:?}", r.violations);
    }

    #[test]
    fn coverage_boundary_is_feasible() {
        // inflow_primary + inflow_secondary = 960 + 1540 = 2500 = demand.
        let d = DecisionVector::new(1500, 1250, 2, 1, 0.77).unwrap();
        let r = check_feasibility(&dual_market(), &d, Model::VariableRecovery);
        assert!(r.feasible, "violations: {:?}", r.violations);
    }

    #[test]
    fn coverage_violation_reports_residual() {
        // At recovery 0.4: inflow = 960 + 800 = 1760, deficit 740.
        let d = DecisionVector::new(1500, 1250, 2, 1, 0.4).unwrap();
        let r = check_feasibility(&dual_market(), &d, Model::VariableRecovery);
        assert!(!r.feasible);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, "repaired_supply_covers_demand");
        assert!((r.violations[0].residual - 740.0).abs() < 1e-6);
        // The fixed-recovery reading ignores coverage.
        assert!(check_feasibility(&dual_market(), &d, Model::FixedRecovery).feasible);
    }

    #[test]
    fn repair_phase_longer_than_procurement_is_rejected() {
        // cycle_new = 1, cycle_repair = 2 → residual exactly 1.
        let mut p = tyre_row1();
        p.demand_new = 100.0;
        p.demand_repaired = 50.0;
        let d = DecisionVector::new(100, 100, 1, 1, 0.7).unwrap();
        let r = check_feasibility(&p, &d, Model::FixedRecovery);
        assert!(!r.feasible);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(
            r.violations[0].constraint,
            "repair_cycle_within_procurement"
        );
        assert!((r.violations[0].residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_spans_are_rejected() {
        // Without the span floor this point would undercut the reference
        // optimum of the row-1 instance.
        let d = DecisionVector::new(29, 12, 1, 1, 0.7).unwrap();
        let r = check_feasibility(&tyre_row1(), &d, Model::FixedRecovery);
        assert!(!r.feasible);
        let ids: Vec<_> = r.violations.iter().map(|v| v.constraint).collect();
        assert_eq!(ids, vec!["min_cycle_span_new", "min_cycle_span_repair"]);
        assert!((r.violations[0].residual - 0.71).abs() < 1e-12);
    }

    #[test]
    fn summary_joins_identifiers() {
        let d = DecisionVector::new(29, 12, 1, 1, 0.7).unwrap();
        let r = check_feasibility(&tyre_row1(), &d, Model::FixedRecovery);
        assert_eq!(r.summary(), "min_cycle_span_new, min_cycle_span_repair");
        let ok = DecisionVector::new(35, 15, 3, 3, 0.7).unwrap();
        assert_eq!(
            check_feasibility(&tyre_row1(), &ok, Model::FixedRecovery).summary(),
            ""
        );
    }

    #[test]
    fn recovery_interval_matches_coverage_arithmetic() {
        let (lo, hi) = recovery_interval(&dual_market()).unwrap();
        assert!((lo - 0.77).abs() < 1e-12);
        assert_eq!(hi, 1.0);

        // Primary inflow alone suffices → unconstrained interval.
        let p = SystemParameters {
            demand_new: 200.0,
            demand_repaired: 50.0,
            return_fraction_new: 0.3,
            acceptance_fraction: 0.9,
            return_fraction_repaired: 0.8,
            holding_cost_supply: 1.0,
            holding_cost_repair: 1.0,
            setup_cost_supply: 4.0,
            setup_cost_repair: 1.0,
            waste_unit_cost: 1.0,
            fixed_recovery: None,
        };
        assert_eq!(recovery_interval(&p), Some((0.0, 1.0)));

        // Even full recovery cannot cover demand.
        let mut q = dual_market();
        q.demand_repaired = 5000.0;
        assert_eq!(recovery_interval(&q), None);
    }

    #[test]
    fn tight_feasibility_example_needs_high_recovery() {
        // demand_new = 10, demand_repaired = 100, all fractions 1:
        // coverage needs recovery >= 0.9.
        let p = SystemParameters {
            demand_new: 10.0,
            demand_repaired: 100.0,
            return_fraction_new: 1.0,
            acceptance_fraction: 1.0,
            return_fraction_repaired: 1.0,
            holding_cost_supply: 1.0,
            holding_cost_repair: 1.0,
            setup_cost_supply: 1.0,
            setup_cost_repair: 1.0,
            waste_unit_cost: 0.0,
            fixed_recovery: None,
        };
        let (lo, hi) = recovery_interval(&p).unwrap();
        assert!((lo - 0.9).abs() < 1e-12);
        assert_eq!(hi, 1.0);
    }
}
