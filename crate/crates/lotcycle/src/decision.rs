//! Decision vectors and the cycle schedule they induce.

use crate::error::ModelError;
use crate::params::SystemParameters;

/// One candidate operating policy: batch sizes, batch counts per cycle, and
/// the recovery rate applied to secondary-market returns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionVector {
    /// Procurement batch size for new items (units, ≥ 1).
    pub batch_new: u32,
    /// Repair batch size shipped from the repair depot (units, ≥ 1).
    pub batch_repaired: u32,
    /// Number of repair batches per cycle (≥ 1).
    pub repair_cycles: u32,
    /// Number of procurement batches per cycle (≥ 1).
    pub procurement_cycles: u32,
    /// Fraction of secondary-market returns recovered for repair (0 ≤ s ≤ 1).
    pub recovery: f64,
}

impl DecisionVector {
    /// Constructs a decision vector, rejecting out-of-range coordinates.
    pub fn new(
        batch_new: u32,
        batch_repaired: u32,
        repair_cycles: u32,
        procurement_cycles: u32,
        recovery: f64,
    ) -> Result<Self, ModelError> {
        let d = Self {
            batch_new,
            batch_repaired,
            repair_cycles,
            procurement_cycles,
            recovery,
        };
        d.validate()?;
        Ok(d)
    }

    /// Checks every documented range requirement, returning the first
    /// violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let at_least_one = [
            ("batch_new", self.batch_new),
            ("batch_repaired", self.batch_repaired),
            ("repair_cycles", self.repair_cycles),
            ("procurement_cycles", self.procurement_cycles),
        ];
        for (name, value) in at_least_one {
            if value < 1 {
                return Err(ModelError::InvalidDecision {
                    name,
                    value: f64::from(value),
                    requirement: "must be an integer >= 1",
                });
            }
        }
        if !(0.0..=1.0).contains(&self.recovery) {
            return Err(ModelError::InvalidDecision {
                name: "recovery",
                value: self.recovery,
                requirement: "must satisfy 0 <= value <= 1",
            });
        }
        Ok(())
    }
}

/// Cycle timing and repair inflow rates induced by a decision.
///
/// The procurement phase spans `cycle_new = procurement_cycles * batch_new /
/// demand_new` time units and the repair phase `cycle_repair = repair_cycles
/// * batch_repaired / demand_repaired`; one full rotation takes their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedSchedule {
    /// Length of the procurement phase (time).
    pub cycle_new: f64,
    /// Length of the repair phase (time).
    pub cycle_repair: f64,
    /// Full cycle length: `cycle_new + cycle_repair`.
    pub cycle_total: f64,
    /// Accepted return inflow from the primary market (units/time).
    pub inflow_primary: f64,
    /// Recovered return inflow from the secondary market (units/time).
    pub inflow_secondary: f64,
}

/// Computes the schedule induced by `decision` under `params`.
///
/// Total on any validated input; the only failure modes are the range checks
/// of the two argument types.
pub fn derive(
    params: &SystemParameters,
    decision: &DecisionVector,
) -> Result<DerivedSchedule, ModelError> {
    params.validate()?;
    decision.validate()?;
    let cycle_new =
        f64::from(decision.procurement_cycles) * f64::from(decision.batch_new) / params.demand_new;
    let cycle_repair = f64::from(decision.repair_cycles) * f64::from(decision.batch_repaired)
        / params.demand_repaired;
    Ok(DerivedSchedule {
        cycle_new,
        cycle_repair,
        cycle_total: cycle_new + cycle_repair,
        inflow_primary: params.primary_inflow(),
        inflow_secondary: params.secondary_inflow(decision.recovery),
    })
}
