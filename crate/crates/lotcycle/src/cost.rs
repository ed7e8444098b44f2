//! Closed-form cost rates of the two-depot loop.
//!
//! Every formula here is the exact area of a piecewise-linear inventory
//! trajectory divided by the cycle length (see [`crate::trace`] for the
//! trajectory construction that these expressions integrate):
//!
//! * the supply depot holds `procurement_cycles` sawtooth teeth of height
//!   `batch_new` followed (serial flow) or overlapped (parallel flow) by
//!   `repair_cycles` teeth of height `batch_repaired`;
//! * the repair depot accumulates accepted returns and ships them in
//!   `batch_repaired`-sized lots.

use crate::decision::{derive, DecisionVector, DerivedSchedule};
use crate::error::ModelError;
use crate::params::SystemParameters;

/// Per-unit-time cost rate split by source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    /// Batch setup charges averaged over the cycle (money/time).
    pub setup_rate: f64,
    /// Supply-depot holding charges (money/time).
    pub supply_holding_rate: f64,
    /// Repair-depot holding charges (money/time). May be negative for
    /// decisions whose repair trajectory dips below zero; such decisions are
    /// excluded from searches by the feasibility rules.
    pub repair_holding_rate: f64,
    /// Sum of the three components (money/time).
    pub total_rate: f64,
}

/// Serial-flow cost rate: the repair phase follows the procurement phase.
///
/// The repair-depot term integrates, per cycle: a ramp of the primary inflow
/// over the procurement phase, plus `repair_cycles` dispatch teeth that drain
/// the accumulated stock while secondary inflow continues.
pub fn inventory_cost(
    params: &SystemParameters,
    decision: &DecisionVector,
) -> Result<CostBreakdown, ModelError> {
    let schedule = derive(params, decision)?;
    Ok(serial_breakdown(params, decision, &schedule))
}

/// Serial-flow cost with a precomputed schedule (used by hot search loops).
pub(crate) fn serial_breakdown(
    params: &SystemParameters,
    decision: &DecisionVector,
    schedule: &DerivedSchedule,
) -> CostBreakdown {
    let m = f64::from(decision.repair_cycles);
    let n = f64::from(decision.procurement_cycles);
    let qp = f64::from(decision.batch_new);
    let qr = f64::from(decision.batch_repaired);
    let tp = schedule.cycle_new;
    let tr = schedule.cycle_repair;
    let t = schedule.cycle_total;
    let r1 = schedule.inflow_primary;
    let r2 = schedule.inflow_secondary;
    let dr = params.demand_repaired;

    let setup = m * params.setup_cost_repair + n * params.setup_cost_supply;
    let supply_area = qp * tp / 2.0 + qr * tr / 2.0;
    // Fill fraction of one repair subcycle that the secondary inflow restores.
    let refill = 1.0 - r2 / dr;
    let repair_area = r1 * tp * tp / 2.0
        + r2 * tr * qr / (2.0 * dr)
        + (m - 1.0) / 2.0 * tr * qr * refill
        + tr * (tp * r1 - qr - (m - 1.0) * refill * qr);

    breakdown(params, setup, supply_area, repair_area, t)
}

/// Parallel-flow cost rate: repair dispatches run concurrently with the
/// procurement phase and both depots idle over the trailing repair-phase
/// window.
pub fn parallel_flow_cost(
    params: &SystemParameters,
    decision: &DecisionVector,
) -> Result<CostBreakdown, ModelError> {
    let schedule = derive(params, decision)?;
    let m = f64::from(decision.repair_cycles);
    let qp = f64::from(decision.batch_new);
    let qr = f64::from(decision.batch_repaired);
    let tp = schedule.cycle_new;
    let tr = schedule.cycle_repair;
    let t = schedule.cycle_total;
    let r1 = schedule.inflow_primary;
    let r2 = schedule.inflow_secondary;
    let dr = params.demand_repaired;
    let n = f64::from(decision.procurement_cycles);
    let inflow = r1 + r2;

    let setup = m * params.setup_cost_repair + n * params.setup_cost_supply;
    let supply_area = qp * tp / 2.0 + qr * tr / 2.0;
    let repair_area = tr * tr * inflow / (2.0 * m)
        + (m - 1.0) / 2.0 * tr * qr * (inflow / dr - 1.0)
        + 0.5 * (tp - tr) * (tp - tr) * inflow
        + (tp - tr) * (tr * inflow + r1 * tp - (m + 1.0) * qr)
        + (r1 * tp - qr) * tr;

    Ok(breakdown(params, setup, supply_area, repair_area, t))
}

fn breakdown(
    params: &SystemParameters,
    setup: f64,
    supply_area: f64,
    repair_area: f64,
    cycle_total: f64,
) -> CostBreakdown {
    let setup_rate = setup / cycle_total;
    let supply_holding_rate = params.holding_cost_supply * supply_area / cycle_total;
    let repair_holding_rate = params.holding_cost_repair * repair_area / cycle_total;
    CostBreakdown {
        setup_rate,
        supply_holding_rate,
        repair_holding_rate,
        total_rate: setup_rate + supply_holding_rate + repair_holding_rate,
    }
}

/// Disposal cost rate: every rejected primary return and every unrecovered
/// secondary return is discarded at `waste_unit_cost`.
///
/// Affine and non-increasing in `recovery`; at `recovery = 1` only the
/// inspection rejects remain.
pub fn waste_cost(params: &SystemParameters, recovery: f64) -> Result<f64, ModelError> {
    params.validate()?;
    if !(0.0..=1.0).contains(&recovery) {
        return Err(ModelError::InvalidDecision {
            name: "recovery",
            value: recovery,
            requirement: "must satisfy 0 <= value <= 1",
        });
    }
    let rejected_primary =
        (1.0 - params.acceptance_fraction) * params.return_fraction_new * params.demand_new;
    let unrecovered_secondary = (1.0 - recovery) * params.secondary_return_rate();
    Ok(params.waste_unit_cost * (rejected_primary + unrecovered_secondary))
}

/// One labelled region of the per-cycle inventory diagram together with its
/// multiplicity in the cycle total.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaTerm {
    /// Role-based region name.
    pub label: &'static str,
    /// Which depot's holding rate prices the region.
    pub depot: Depot,
    /// Area of a single instance of the region (unit·time).
    pub area: f64,
    /// How many times the region (or its arithmetic continuation) enters the
    /// per-cycle total.
    pub weight: f64,
}

/// Depot whose holding rate applies to an [`AreaTerm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depot {
    /// Sellable stock awaiting either demand stream.
    Supply,
    /// Accepted returns awaiting repair dispatch.
    Repair,
}

/// Decomposes the serial-flow holding cost into the six elementary regions of
/// the per-cycle inventory diagram.
///
/// The weighted sum of the regions, priced by each depot's holding rate and
/// divided by the cycle length, reproduces [`inventory_cost`]'s two holding
/// components exactly (see `recombine`); this is the geometric derivation of
/// the closed form.
pub fn area_decomposition(
    params: &SystemParameters,
    decision: &DecisionVector,
) -> Result<Vec<AreaTerm>, ModelError> {
    let schedule = derive(params, decision)?;
    let m = f64::from(decision.repair_cycles);
    let n = f64::from(decision.procurement_cycles);
    let qp = f64::from(decision.batch_new);
    let qr = f64::from(decision.batch_repaired);
    let tp = schedule.cycle_new;
    let r1 = schedule.inflow_primary;
    let r2 = schedule.inflow_secondary;
    let dr = params.demand_repaired;
    let refill = 1.0 - r2 / dr;

    Ok(vec![
        // One procurement tooth: height batch_new, base batch_new/demand_new.
        AreaTerm {
            label: "supply_tooth_new",
            depot: Depot::Supply,
            area: qp * qp / (2.0 * params.demand_new),
            weight: n,
        },
        // One repair-dispatch tooth at the supply depot.
        AreaTerm {
            label: "supply_tooth_repaired",
            depot: Depot::Supply,
            area: qr * qr / (2.0 * dr),
            weight: m,
        },
        // Primary returns ramping up over the whole procurement phase.
        AreaTerm {
            label: "repair_accumulation",
            depot: Depot::Repair,
            area: r1 * tp * tp / 2.0,
            weight: 1.0,
        },
        // Secondary inflow within one repair subcycle.
        AreaTerm {
            label: "repair_subcycle_inflow",
            depot: Depot::Repair,
            area: qr * qr * r2 / (2.0 * dr * dr),
            weight: m,
        },
        // Net stock step between consecutive repair subcycles; the steps sum
        // over subcycle pairs, hence the triangular-number weight.
        AreaTerm {
            label: "repair_subcycle_step",
            depot: Depot::Repair,
            area: qr * qr / dr * refill,
            weight: m * (m - 1.0) / 2.0,
        },
        // Stock carried through one subcycle beyond the dispatched batch.
        AreaTerm {
            label: "repair_handoff",
            depot: Depot::Repair,
            area: qr / dr * (tp * r1 - (qr + (m - 1.0) * refill * qr)),
            weight: m,
        },
    ])
}

/// Sums an area decomposition into the two holding-rate components
/// (money/time) it represents.
pub fn recombine(
    params: &SystemParameters,
    decision: &DecisionVector,
    terms: &[AreaTerm],
) -> Result<(f64, f64), ModelError> {
    let schedule = derive(params, decision)?;
    let mut supply = 0.0;
    let mut repair = 0.0;
    for term in terms {
        match term.depot {
            Depot::Supply => supply += term.weight * term.area,
            Depot::Repair => repair += term.weight * term.area,
        }
    }
    Ok((
        params.holding_cost_supply * supply / schedule.cycle_total,
        params.holding_cost_repair * repair / schedule.cycle_total,
    ))
}

/// Coefficients of the cycle-cost numerator as a quadratic form in the two
/// phase spans.
///
/// Writing `u = cycle_new` and `v = cycle_repair` (so `batch_new =
/// u * demand_new / procurement_cycles` and `batch_repaired =
/// v * demand_repaired / repair_cycles`), the serial-flow cost rate equals
/// `(c0 + p1·u² + p2·v² + p3·u·v) / (u + v)`. The search layer optimizes this
/// relaxation in closed form before polishing integer candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanQuadratic {
    /// Constant term: total setup charge per cycle.
    pub c0: f64,
    /// Coefficient of `cycle_new²`.
    pub p1: f64,
    /// Coefficient of `cycle_repair²`.
    pub p2: f64,
    /// Coefficient of the cross term.
    pub p3: f64,
}

impl SpanQuadratic {
    /// Cost rate of the relaxation at phase spans `(u, v)`.
    pub fn rate(&self, u: f64, v: f64) -> f64 {
        (self.c0 + self.p1 * u * u + self.p2 * v * v + self.p3 * u * v) / (u + v)
    }
}

/// Builds the span-quadratic coefficients for fixed cycle counts and recovery
/// rate.
pub fn span_quadratic(
    params: &SystemParameters,
    repair_cycles: u32,
    procurement_cycles: u32,
    recovery: f64,
) -> SpanQuadratic {
    let m = f64::from(repair_cycles);
    let n = f64::from(procurement_cycles);
    let r1 = params.primary_inflow();
    let r2 = params.secondary_inflow(recovery);
    let dp = params.demand_new;
    let dr = params.demand_repaired;
    let hp = params.holding_cost_supply;
    let hr = params.holding_cost_repair;
    SpanQuadratic {
        c0: m * params.setup_cost_repair + n * params.setup_cost_supply,
        p1: hp * dp / (2.0 * n) + hr * r1 / 2.0,
        p2: hp * dr / (2.0 * m) + hr * (m * r2 - (m + 1.0) * dr) / (2.0 * m),
        p3: hr * r1,
    }
}
