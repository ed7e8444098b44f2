//! Piecewise-linear inventory trajectories over one full cycle.
//!
//! This module rebuilds the depot stock curves event by event — batch
//! arrivals, demand drain, return collection, repair dispatches — and
//! integrates them with the trapezoid rule. It shares no algebra with
//! [`crate::cost`]: agreement between the integrated areas and the closed
//! forms is the crate's internal consistency check, exercised heavily in the
//! test suites.

use crate::decision::{derive, DecisionVector};
use crate::error::ModelError;
use crate::feasibility::{check_feasibility, Model};
use crate::params::SystemParameters;

/// How the two demand streams share the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowVariant {
    /// Repaired-item demand is served after the procurement phase; the
    /// repair depot collects first and dispatches second.
    Serial,
    /// Both demand streams are served from the start of the cycle; the
    /// repair depot collects and dispatches concurrently, handing leftover
    /// stock over at the end of the procurement phase.
    Parallel,
}

/// One trace epoch. Levels are recorded on both sides of the epoch so batch
/// arrivals and dispatches appear as exact jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub time: f64,
    pub supply_pre: f64,
    pub supply_post: f64,
    pub repair_pre: f64,
    pub repair_post: f64,
}

/// A repair dispatch that found less accumulated stock than one full batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shortfall {
    /// Dispatch epoch.
    pub time: f64,
    /// Stock available immediately before the dispatch.
    pub available: f64,
    /// Full batch size the model assumes is shipped.
    pub required: f64,
}

/// Exact piecewise-linear stock trajectory of both depots over one cycle.
///
/// `consistent` is `false` when the geometry implied by the decision does not
/// close on itself: some dispatch lacks a full batch (`shortfalls`) or the
/// material collected per cycle differs from the material dispatched
/// (`residual`). Several published operating points are of this kind; the
/// trace is still well defined and its signed areas still integrate to the
/// closed-form cost, so this is reported as a property, not an error.
#[derive(Debug, Clone, PartialEq)]
pub struct InventoryTrace {
    pub breakpoints: Vec<Breakpoint>,
    pub variant: FlowVariant,
    /// No shortfalls and zero per-cycle material imbalance.
    pub consistent: bool,
    /// Dispatches that would require more stock than accumulated.
    pub shortfalls: Vec<Shortfall>,
    /// Material collected minus material dispatched over one cycle (units).
    pub residual: f64,
}

impl InventoryTrace {
    /// Signed area under the supply-depot curve (unit·time).
    pub fn supply_area(&self) -> f64 {
        trapezoid(&self.breakpoints, |b| (b.supply_pre, b.supply_post))
    }

    /// Signed area under the repair-depot curve (unit·time).
    pub fn repair_area(&self) -> f64 {
        trapezoid(&self.breakpoints, |b| (b.repair_pre, b.repair_post))
    }

    /// Cycle length covered by the trace.
    pub fn horizon(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.time)
    }
}

fn trapezoid(points: &[Breakpoint], levels: impl Fn(&Breakpoint) -> (f64, f64)) -> f64 {
    points
        .windows(2)
        .map(|w| {
            let (_, left) = levels(&w[0]);
            let (right, _) = levels(&w[1]);
            (w[1].time - w[0].time) * (left + right) / 2.0
        })
        .sum()
}

/// An instantaneous stock change at a known epoch.
#[derive(Debug, Clone, Copy)]
enum Jump {
    /// Add the amount (negative = dispatch). `checked` marks repair
    /// dispatches whose pre-level must cover one full batch.
    Add { amount: f64, checked: bool },
    /// Hand the entire current level off (drop to zero), recording the
    /// transferred amount.
    HandOff,
}

/// Event-driven description of one depot's trajectory: a start level, jumps
/// at epochs, and a drain/collection slope between them.
struct DepotPlan {
    start: f64,
    events: Vec<(f64, Jump)>,
    /// `(until, slope)` segments in increasing `until` order; the slope of
    /// the final segment extends to the end of the cycle.
    slopes: Vec<(f64, f64)>,
}

impl DepotPlan {
    fn slope_at(&self, t: f64) -> f64 {
        for &(until, slope) in &self.slopes {
            if t < until {
                return slope;
            }
        }
        self.slopes.last().map_or(0.0, |&(_, s)| s)
    }
}

/// Builds the stock trajectory of both depots for one cycle of `decision`.
///
/// The decision must be feasible for the cycle-structure constraints
/// ([`Model::FixedRecovery`] set); the recovery-coverage constraint is a
/// solver concern and deliberately not enforced here, so traces of
/// under-covered operating points can still be inspected.
pub fn build_trace(
    params: &SystemParameters,
    decision: &DecisionVector,
    variant: FlowVariant,
) -> Result<InventoryTrace, ModelError> {
    let schedule = derive(params, decision)?;
    let report = check_feasibility(params, decision, Model::FixedRecovery);
    if !report.feasible {
        return Err(ModelError::InfeasibleDecision {
            summary: report.summary(),
        });
    }

    let m = decision.repair_cycles;
    let n = decision.procurement_cycles;
    let qp = f64::from(decision.batch_new);
    let qr = f64::from(decision.batch_repaired);
    let tp = schedule.cycle_new;
    let tr = schedule.cycle_repair;
    let t_end = schedule.cycle_total;
    let r1 = schedule.inflow_primary;
    let r2 = schedule.inflow_secondary;

    let tooth = |k: u32, span: f64, count: u32| f64::from(k) * span / f64::from(count);

    let (supply, repair) = match variant {
        FlowVariant::Serial => {
            let mut supply_events = Vec::new();
            for k in 0..n {
                supply_events.push((
                    tooth(k, tp, n),
                    Jump::Add {
                        amount: qp,
                        checked: false,
                    },
                ));
            }
            for k in 0..m {
                supply_events.push((
                    tp + tooth(k, tr, m),
                    Jump::Add {
                        amount: qr,
                        checked: false,
                    },
                ));
            }
            let supply = DepotPlan {
                start: 0.0,
                events: supply_events,
                slopes: vec![(tp, -params.demand_new), (t_end, -params.demand_repaired)],
            };

            let repair_events = (0..m)
                .map(|k| {
                    (
                        tp + tooth(k, tr, m),
                        Jump::Add {
                            amount: -qr,
                            checked: true,
                        },
                    )
                })
                .collect();
            let repair = DepotPlan {
                start: 0.0,
                events: repair_events,
                slopes: vec![(tp, r1), (t_end, r2)],
            };
            (supply, repair)
        }
        FlowVariant::Parallel => {
            // Two overlapping sawtooth trains: new-item teeth across the
            // procurement phase, repaired-item teeth across [0, cycle_repair].
            let mut supply_events = Vec::new();
            for k in 0..n {
                supply_events.push((
                    tooth(k, tp, n),
                    Jump::Add {
                        amount: qp,
                        checked: false,
                    },
                ));
            }
            for k in 0..m {
                supply_events.push((
                    tooth(k, tr, m),
                    Jump::Add {
                        amount: qr,
                        checked: false,
                    },
                ));
            }
            let supply = DepotPlan {
                start: 0.0,
                events: supply_events,
                slopes: vec![
                    (tr, -params.demand_new - params.demand_repaired),
                    (tp, -params.demand_new),
                    (t_end, 0.0),
                ],
            };

            // The repair depot opens with the stock handed off by the
            // previous cycle's collection phase, collects both return
            // streams across the procurement phase, dispatches one batch at
            // each repaired-item tooth start plus one closing the last tooth,
            // and hands the remainder off when procurement ends.
            let mut repair_events = Vec::new();
            for k in 0..m {
                repair_events.push((
                    tooth(k, tr, m),
                    Jump::Add {
                        amount: -qr,
                        checked: true,
                    },
                ));
            }
            repair_events.push((
                tr,
                Jump::Add {
                    amount: -qr,
                    checked: true,
                },
            ));
            repair_events.push((tp, Jump::HandOff));
            let repair = DepotPlan {
                start: r1 * tp,
                events: repair_events,
                slopes: vec![(tp, r1 + r2), (t_end, 0.0)],
            };
            (supply, repair)
        }
    };

    let epsilon = 1e-9 * (1.0 + qr);
    let mut shortfalls = Vec::new();
    let mut handed_off = 0.0;
    let epochs = merge_epochs(&supply, &repair, t_end);
    let mut breakpoints = Vec::with_capacity(epochs.len());

    let mut supply_level = supply.start;
    let mut repair_level = repair.start;
    let mut prev = 0.0;
    for (i, &time) in epochs.iter().enumerate() {
        if i > 0 {
            let mid = (prev + time) / 2.0;
            supply_level += supply.slope_at(mid) * (time - prev);
            repair_level += repair.slope_at(mid) * (time - prev);
        }
        let supply_pre = supply_level;
        let repair_pre = repair_level;
        supply_level += jump_sum(
            &supply.events,
            time,
            t_end,
            supply_level,
            &mut Vec::new(),
            0.0,
            &mut 0.0,
        );
        repair_level += jump_sum(
            &repair.events,
            time,
            t_end,
            repair_level,
            &mut shortfalls,
            epsilon,
            &mut handed_off,
        );
        breakpoints.push(Breakpoint {
            time,
            supply_pre,
            supply_post: supply_level,
            repair_pre,
            repair_post: repair_level,
        });
        prev = time;
    }

    let residual = repair_level + handed_off - repair.start;
    let consistent = shortfalls.is_empty() && residual.abs() <= epsilon;
    Ok(InventoryTrace {
        breakpoints,
        variant,
        consistent,
        shortfalls,
        residual,
    })
}

/// Applies every jump scheduled at `time`, returning the net level change
/// and recording dispatch shortfalls and handed-off stock.
#[allow(clippy::too_many_arguments)]
fn jump_sum(
    events: &[(f64, Jump)],
    time: f64,
    horizon: f64,
    level_before: f64,
    shortfalls: &mut Vec<Shortfall>,
    epsilon: f64,
    handed_off: &mut f64,
) -> f64 {
    let tol = epoch_tolerance(horizon);
    let mut delta = 0.0;
    let mut hand_off_pending = false;
    for &(at, jump) in events {
        if (at - time).abs() <= tol {
            match jump {
                Jump::Add { amount, checked } => {
                    if checked && level_before + delta < -amount - epsilon {
                        shortfalls.push(Shortfall {
                            time,
                            available: level_before + delta,
                            required: -amount,
                        });
                    }
                    delta += amount;
                }
                Jump::HandOff => hand_off_pending = true,
            }
        }
    }
    if hand_off_pending {
        *handed_off += level_before + delta;
        delta = -level_before;
    }
    delta
}

fn epoch_tolerance(horizon: f64) -> f64 {
    1e-12 * (1.0 + horizon)
}

/// Union of all event epochs plus the cycle endpoints, deduplicated.
fn merge_epochs(supply: &DepotPlan, repair: &DepotPlan, t_end: f64) -> Vec<f64> {
    let mut times: Vec<f64> = vec![0.0, t_end];
    times.extend(supply.events.iter().map(|&(t, _)| t));
    times.extend(repair.events.iter().map(|&(t, _)| t));
    times.extend(supply.slopes.iter().map(|&(t, _)| t));
    times.extend(repair.slopes.iter().map(|&(t, _)| t));
    times.retain(|&t| t >= 0.0 && t <= t_end + epoch_tolerance(t_end));
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    times.dedup_by(|a, b| (*a - *b).abs() <= epoch_tolerance(t_end));
    times
}

/// Average cost rate implied by a trace: setup charges plus holding charges
/// on the trapezoid-integrated areas, per unit time.
pub fn simulated_cost(
    trace: &InventoryTrace,
    params: &SystemParameters,
    decision: &DecisionVector,
) -> f64 {
    let setup = f64::from(decision.repair_cycles) * params.setup_cost_repair
        + f64::from(decision.procurement_cycles) * params.setup_cost_supply;
    (setup
        + params.holding_cost_supply * trace.supply_area()
        + params.holding_cost_repair * trace.repair_area())
        / trace.horizon()
}

/// Returns a trace with one interpolated breakpoint inserted between every
/// adjacent pair. Piecewise linearity makes this a no-op for every area
/// integral; the property tests assert exactly that.
pub fn refine(trace: &InventoryTrace) -> InventoryTrace {
    let mut breakpoints = Vec::with_capacity(trace.breakpoints.len() * 2);
    for w in trace.breakpoints.windows(2) {
        let mid_time = (w[0].time + w[1].time) / 2.0;
        let supply = (w[0].supply_post + w[1].supply_pre) / 2.0;
        let repair = (w[0].repair_post + w[1].repair_pre) / 2.0;
        breakpoints.push(w[0]);
        breakpoints.push(Breakpoint {
            time: mid_time,
            supply_pre: supply,
            supply_post: supply,
            repair_pre: repair,
            repair_post: repair,
        });
    }
    if let Some(&last) = trace.breakpoints.last() {
        breakpoints.push(last);
    }
    InventoryTrace {
        breakpoints,
        variant: trace.variant,
        consistent: trace.consistent,
        shortfalls: trace.shortfalls.clone(),
        residual: trace.residual,
    }
}
