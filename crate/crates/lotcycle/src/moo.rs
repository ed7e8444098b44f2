//! Bi-objective trade-off between inventory cost and disposal cost.
//!
//! The two objectives pull the recovery rate in opposite directions: a higher
//! rate feeds more returned stock back through the repair depot (raising
//! holding cost) while sending less material to disposal (lowering waste
//! cost).  This module traces the efficient frontier of that trade-off with
//! two scalarization schemes:
//!
//! * a feasible-value-constraint scheme — for each weight vector it locates a
//!   reference point where the weighted objectives balance, then re-minimizes
//!   each objective under a value cut derived from the reference; and
//! * a goal-attainment (Pascoletti–Serafini) scheme — for each weight vector
//!   it minimizes the worst weighted excess over a utopia point.
//!
//! Both schemes reduce to one-dimensional searches over the recovery rate
//! because, at any fixed rate, the best inventory cost is found by the
//! integer box enumeration from [`crate::solver`], the resulting value is a
//! concave piecewise-affine increasing function of the rate, and the disposal
//! cost is affine decreasing in the rate.  Every one-dimensional search here
//! exploits that shape: from a feasible rate it repeatedly jumps to the root
//! of the current supporting line, which converges monotonically in a handful
//! of exact probes.

use std::time::Instant;

use crate::cost::{inventory_cost, waste_cost};
use crate::decision::DecisionVector;
use crate::error::{FrontError, SolveError};
use crate::params::SystemParameters;
use crate::solver::{box_best, solve_model2, BoxBest, SolverConfig};

/// Tolerance used when comparing objective values for dominance and for
/// detecting duplicate points.
pub const DOMINANCE_TOL: f64 = 1e-9;

/// Relative tolerance for the equality coupling and cut-activity checks.
pub const COUPLING_TOL: f64 = 1e-9;

/// Pair of positive weights over (inventory cost, waste cost) summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    /// Weight on the inventory-cost objective.
    pub inventory: f64,
    /// Weight on the waste-cost objective.
    pub waste: f64,
}

impl WeightVector {
    /// Builds a weight vector from the inventory weight; the waste weight is
    /// its complement.  Returns `None` unless `0 < inventory < 1`.
    pub fn new(inventory: f64) -> Option<Self> {
        (inventory > 0.0 && inventory < 1.0).then_some(WeightVector {
            inventory,
            waste: 1.0 - inventory,
        })
    }
}

/// How raw grid weights are rescaled before use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Use the evenly spaced grid weights as they are.
    Plain,
    /// Divide each weight by the payoff range of its objective (the spread
    /// between the objective's value at its own minimizer and at the other
    /// objective's minimizer), then renormalize to sum one.  This balances
    /// objectives measured on very different scales.
    BoundaryScaled {
        inventory_range: f64,
        waste_range: f64,
    },
}

/// Aspiration levels for the goal-attainment scheme, one per objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtopiaPoint {
    pub inventory: f64,
    pub waste: f64,
}

/// Which scalarization produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarizationMethod {
    /// Feasible-value-constraint scheme (reference point plus value cuts).
    ValueConstraint,
    /// Goal-attainment scheme (minimax excess over a utopia point).
    GoalAttainment,
}

impl ScalarizationMethod {
    /// Short identifier used in exports.
    pub fn label(self) -> &'static str {
        match self {
            ScalarizationMethod::ValueConstraint => "fvc",
            ScalarizationMethod::GoalAttainment => "ps",
        }
    }
}

/// Which objective a subproblem kept as its minimization target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Inventory,
    Waste,
}

/// Provenance of a candidate point within its weight's subproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointRole {
    /// Balanced reference solution; `coupled` records whether the weighted
    /// objectives could be equalized exactly (otherwise the best endpoint of
    /// the weighted sum stood in).
    Reference { coupled: bool },
    /// Re-minimized inventory cost under a waste-cost cut.
    InventoryCut,
    /// Re-minimized waste cost under an inventory-cost cut.
    WasteCut,
    /// Goal-attainment minimax solution.
    Goal,
}

/// One candidate solution on (or near) the efficient frontier.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub decision: DecisionVector,
    /// Inventory cost rate at the decision.
    pub inventory: f64,
    /// Waste cost rate at the decision.
    pub waste: f64,
    /// Weight vector whose subproblem produced the point.
    pub weight: WeightVector,
    pub method: ScalarizationMethod,
    pub role: PointRole,
    /// Attained minimax level (goal-attainment points only).
    pub alpha: Option<f64>,
    /// Set by the dominance filter when another candidate dominates this one.
    pub dominated: bool,
}

/// A subproblem that produced no feasible point.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedSubproblem {
    pub weight: WeightVector,
    pub role: PointRole,
    pub reason: String,
}

/// Run-level accounting for a frontier computation.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSummary {
    pub method: ScalarizationMethod,
    /// Number of weight vectors in the grid.
    pub grid_points: u32,
    /// Scalar subproblems attempted (including infeasible cuts).
    pub subproblems: u64,
    pub seconds: f64,
    /// Candidates that survived the dominance filter.
    pub pareto_points: usize,
    /// Candidates rejected by the dominance filter.
    pub non_pareto_points: usize,
    /// References found by equalizing the weighted objectives.
    pub coupled_references: u32,
    /// References that fell back to the best endpoint of the weighted sum.
    pub fallback_references: u32,
    /// Cut subproblems whose constraint could not be met by any feasible point.
    pub infeasible_cuts: u32,
    /// Size of the per-weight merged store (cut points deduplicated and
    /// locally filtered within each weight before the global filter).
    pub merged_store: usize,
}

/// Result of a frontier computation: the nondominated points in ascending
/// inventory-cost order, the dominated candidates (flagged, for diagnostics),
/// the subproblems that produced nothing, and run accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront {
    pub points: Vec<ParetoPoint>,
    pub dominated_points: Vec<ParetoPoint>,
    pub skipped: Vec<SkippedSubproblem>,
    pub provenance: FrontSummary,
}

impl ParetoFront {
    /// Objective pairs of the nondominated points, deduplicated by rounding
    /// each coordinate to the nearest multiple of `tol`.
    pub fn distinct_objectives(&self, tol: f64) -> Vec<(f64, f64)> {
        let mut seen: Vec<(i64, i64)> = Vec::new();
        let mut out = Vec::new();
        for p in &self.points {
            let key = (
                (p.inventory / tol).round() as i64,
                (p.waste / tol).round() as i64,
            );
            if !seen.contains(&key) {
                seen.push(key);
                out.push((p.inventory, p.waste));
            }
        }
        out
    }
}

/// Evenly spaced interior weight grid `i / (k + 1)` for `i = 1..=k`, with the
/// chosen normalization applied.
pub fn generate_weight_grid(k: u32, normalization: Normalization) -> Vec<WeightVector> {
    (1..=k)
        .map(|i| {
            let w1 = f64::from(i) / f64::from(k + 1);
            let w2 = 1.0 - w1;
            match normalization {
                Normalization::Plain => WeightVector {
                    inventory: w1,
                    waste: w2,
                },
                Normalization::BoundaryScaled {
                    inventory_range,
                    waste_range,
                } => {
                    let a = w1 / inventory_range;
                    let b = w2 / waste_range;
                    WeightVector {
                        inventory: a / (a + b),
                        waste: b / (a + b),
                    }
                }
            }
        })
        .collect()
}

/// Best achievable value of each objective on its own, with the minimizing
/// decisions: `(inventory minimum, its decision, waste minimum, its decision)`.
///
/// The waste minimum is attained at full recovery; its reported decision is
/// the inventory-cost minimizer at that rate so the point is feasible and
/// reproducible.
pub fn individual_minima(
    params: &SystemParameters,
    cfg: &SolverConfig,
) -> Result<(f64, DecisionVector, f64, DecisionVector), FrontError> {
    let inventory_side = solve_model2(params, cfg)?;
    let q_max = cfg.resolved_q_max(params);
    let at_full =
        box_best(params, 1.0, cfg, q_max).ok_or_else(|| SolveError::EmptyFeasibleRegion {
            detail: "no feasible decision at full recovery".to_string(),
        })?;
    let waste_decision = at_full.decision(1.0).map_err(SolveError::from)?;
    let waste_minimum = waste_cost(params, 1.0).map_err(SolveError::from)?;
    Ok((
        inventory_side.cost.total_rate,
        inventory_side.decision,
        waste_minimum,
        waste_decision,
    ))
}

/// Payoff ranges of the two objectives: the spread of each objective between
/// its own minimizer and the other objective's minimizer.  These feed
/// [`Normalization::BoundaryScaled`].
pub fn payoff_ranges(
    params: &SystemParameters,
    cfg: &SolverConfig,
) -> Result<(f64, f64), FrontError> {
    let (f1_min, d1, f2_min, d2) = individual_minima(params, cfg)?;
    let f1_at_waste_min = inventory_cost(params, &d2)
        .map_err(SolveError::from)?
        .total_rate;
    let f2_at_inventory_min = waste_cost(params, d1.recovery).map_err(SolveError::from)?;
    Ok((f1_at_waste_min - f1_min, f2_at_inventory_min - f2_min))
}

// ---------------------------------------------------------------------------
// One-dimensional machinery over the recovery rate.
// ---------------------------------------------------------------------------

/// Shared context for the searches: parameter set, box configuration, and the
/// feasible recovery interval.
struct RateSearch<'a> {
    params: &'a SystemParameters,
    cfg: &'a SolverConfig,
    q_max: u32,
    s_lo: f64,
}

/// An exact probe of the box minimum at one recovery rate.
#[derive(Clone, Copy)]
struct Probe {
    best: BoxBest,
    recovery: f64,
}

impl<'a> RateSearch<'a> {
    fn new(params: &'a SystemParameters, cfg: &'a SolverConfig) -> Result<Self, SolveError> {
        params.validate_for_variable_recovery()?;
        cfg.validate()?;
        let (s_lo, _) = crate::feasibility::recovery_interval(params).ok_or_else(|| {
            SolveError::EmptyFeasibleRegion {
                detail: format!(
                    "returned inflow cannot cover repaired demand {} at any recovery rate",
                    params.demand_repaired
                ),
            }
        })?;
        Ok(RateSearch {
            params,
            cfg,
            q_max: cfg.resolved_q_max(params),
            s_lo,
        })
    }

    /// Exact box minimum at `recovery`.
    fn probe(&self, recovery: f64) -> Result<Probe, SolveError> {
        let best = box_best(self.params, recovery, self.cfg, self.q_max).ok_or_else(|| {
            SolveError::EmptyFeasibleRegion {
                detail: format!(
                    "no feasible batch pair at recovery rate {recovery} within q_max = {}",
                    self.q_max
                ),
            }
        })?;
        Ok(Probe { best, recovery })
    }

    /// Inventory cost of a fixed integer decision as an affine function of the
    /// recovery rate, returned as values at rate 0 and rate 1.
    fn cost_line(&self, best: &BoxBest) -> (f64, f64) {
        let at = |s: f64| {
            let d = DecisionVector {
                batch_new: best.batch_new,
                batch_repaired: best.batch_repaired,
                repair_cycles: best.repair_cycles,
                procurement_cycles: best.procurement_cycles,
                recovery: s,
            };
            inventory_cost(self.params, &d)
                .expect("fixed decision remains evaluable at shifted recovery")
                .total_rate
        };
        (at(0.0), at(1.0))
    }

    /// Finds the root of `psi(s) = w1 * f1*(s) - (b0 + b1 * s)` on
    /// `[start, 1]`, where `f1*` is the exact box minimum (concave,
    /// piecewise-affine, nondecreasing in `s`) and the affine part satisfies
    /// `w1 * slope(f1) - b1 > 0` wherever it matters.  Requires
    /// `psi(start) <= 0`; the iteration jumps to the root of the current
    /// supporting line, which stays feasible and increases monotonically.
    ///
    /// Returns the root rate (snapped to `1.0` or the feasible floor when
    /// within `1e-9`) together with the probe at that rate.
    fn ascend_to_root(
        &self,
        w1: f64,
        b0: f64,
        b1: f64,
        start: f64,
    ) -> Result<(f64, Probe), SolveError> {
        let mut s = start;
        let mut probe = self.probe(s)?;
        for _ in 0..64 {
            let target = b0 + b1 * s;
            let psi = w1 * probe.best.cost - target;
            if psi.abs() <= COUPLING_TOL * (1.0 + target.abs()) {
                break;
            }
            let (c0, c1) = self.cost_line(&probe.best);
            let slope = w1 * (c1 - c0) - b1;
            let next = if slope <= f64::EPSILON * (1.0 + target.abs()) {
                // Supporting line never crosses: the root sits at the right
                // endpoint of the rate interval.
                1.0
            } else {
                ((b0 - w1 * c0) / slope).clamp(self.s_lo, 1.0)
            };
            if (next - s).abs() <= 1e-15 * (1.0 + s.abs()) {
                break;
            }
            s = next;
            probe = self.probe(s)?;
        }
        let snapped = snap_rate(s, self.s_lo);
        if snapped != s {
            s = snapped;
            probe = self.probe(s)?;
        }
        Ok((s, probe))
    }
}

/// Snaps a recovery rate to an interval endpoint when within `1e-9` of it, so
/// boundary solutions carry exact endpoint objective values.
fn snap_rate(s: f64, s_lo: f64) -> f64 {
    if (s - 1.0).abs() <= 1e-9 {
        1.0
    } else if (s - s_lo).abs() <= 1e-9 {
        s_lo
    } else {
        s
    }
}

/// Affine description of the waste objective: `f2(s) = w0 - w1_slope * s`.
fn waste_line(params: &SystemParameters) -> (f64, f64) {
    let at0 = waste_cost(params, 0.0).expect("waste cost defined at rate 0");
    let at1 = waste_cost(params, 1.0).expect("waste cost defined at rate 1");
    (at0, at0 - at1)
}

fn point_from_probe(
    params: &SystemParameters,
    probe: &Probe,
    weight: WeightVector,
    method: ScalarizationMethod,
    role: PointRole,
    alpha: Option<f64>,
) -> Result<ParetoPoint, SolveError> {
    let decision = probe.best.decision(probe.recovery)?;
    let breakdown = inventory_cost(params, &decision)?;
    let waste = waste_cost(params, probe.recovery)?;
    Ok(ParetoPoint {
        decision,
        inventory: breakdown.total_rate,
        waste,
        weight,
        method,
        role,
        alpha,
        dominated: false,
    })
}

// ---------------------------------------------------------------------------
// Feasible-value-constraint scheme.
// ---------------------------------------------------------------------------

/// Locates the reference solution for one weight vector: the feasible point
/// where the weighted objectives balance (`w1 * f1 = w2 * f2`), with the kept
/// objective `k` minimized over that coupled set.  With two objectives the
/// coupled set collapses to a single recovery rate, so `k` does not change
/// the answer; it is accepted for interface completeness.
///
/// Fails with [`FrontError::CouplingUnattainable`] when the weighted
/// objectives cannot be equalized by any feasible point.
pub fn locate_reference(
    params: &SystemParameters,
    weight: WeightVector,
    _kept: Objective,
    cfg: &SolverConfig,
) -> Result<DecisionVector, FrontError> {
    let search = RateSearch::new(params, cfg)?;
    let probe = locate_reference_probe(&search, weight)?;
    Ok(probe
        .best
        .decision(probe.recovery)
        .map_err(SolveError::from)?)
}

fn locate_reference_probe(
    search: &RateSearch<'_>,
    weight: WeightVector,
) -> Result<Probe, FrontError> {
    let (f2_at0, f2_slope) = waste_line(search.params);
    // psi(s) = w1 * f1*(s) - w2 * f2(s); strictly increasing in s.
    let b0 = weight.waste * f2_at0;
    let b1 = -weight.waste * f2_slope;
    let lo = search.probe(search.s_lo)?;
    let psi_lo = weight.inventory * lo.best.cost - (b0 + b1 * search.s_lo);
    if psi_lo > COUPLING_TOL * (1.0 + lo.best.cost.abs()) {
        return Err(FrontError::CouplingUnattainable {
            w1: weight.inventory,
            residual: psi_lo,
        });
    }
    let hi = search.probe(1.0)?;
    let psi_hi = weight.inventory * hi.best.cost - (b0 + b1);
    if psi_hi < -COUPLING_TOL * (1.0 + hi.best.cost.abs()) {
        return Err(FrontError::CouplingUnattainable {
            w1: weight.inventory,
            residual: psi_hi,
        });
    }
    let (_, probe) = search.ascend_to_root(weight.inventory, b0, b1, search.s_lo)?;
    Ok(probe)
}

/// Endpoint fallback when the coupling is unattainable: the better endpoint
/// of the weighted-sum objective over the feasible rate interval.  Both
/// endpoint probes are supplied by the caller so a whole grid shares them.
fn fallback_reference_probe(
    search: &RateSearch<'_>,
    weight: WeightVector,
    endpoints: &(Probe, Probe),
) -> Probe {
    let (f2_at0, f2_slope) = waste_line(search.params);
    let value = |p: &Probe| {
        weight.inventory * p.best.cost + weight.waste * (f2_at0 - f2_slope * p.recovery)
    };
    if value(&endpoints.0) <= value(&endpoints.1) {
        endpoints.0
    } else {
        endpoints.1
    }
}

/// Solves one value-cut subproblem for a weight vector and reference point.
///
/// * `kept = Inventory`: minimize inventory cost subject to
///   `w2 * f2(x) <= w1 * f1(reference)`.
/// * `kept = Waste`: minimize waste cost subject to
///   `w1 * f1(x) <= w2 * f2(reference)`.
///
/// Fails with [`FrontError::InfeasibleCut`] when no feasible point meets the
/// cut.
pub fn solve_fvc(
    params: &SystemParameters,
    weight: WeightVector,
    reference: &DecisionVector,
    kept: Objective,
    cfg: &SolverConfig,
) -> Result<ParetoPoint, FrontError> {
    let search = RateSearch::new(params, cfg)?;
    let ref_inventory = inventory_cost(params, reference)
        .map_err(SolveError::from)?
        .total_rate;
    let ref_waste = waste_cost(params, reference.recovery).map_err(SolveError::from)?;
    cut_subproblem(&search, weight, ref_inventory, ref_waste, kept)
}

fn cut_subproblem(
    search: &RateSearch<'_>,
    weight: WeightVector,
    ref_inventory: f64,
    ref_waste: f64,
    kept: Objective,
) -> Result<ParetoPoint, FrontError> {
    let (f2_at0, f2_slope) = waste_line(search.params);
    match kept {
        Objective::Inventory => {
            // Cut: w2 * f2(s) <= bound, with f2 affine decreasing; the cut
            // admits rates at or above a closed-form threshold, and the kept
            // objective is increasing in the rate, so the optimum sits at
            // that threshold.
            let bound = weight.inventory * ref_inventory;
            let f2_cap = bound / weight.waste;
            let attainable = f2_at0 - f2_slope; // waste cost at full recovery
            if f2_cap < attainable - COUPLING_TOL * (1.0 + attainable.abs()) {
                return Err(FrontError::InfeasibleCut {
                    w1: weight.inventory,
                    bound,
                    attainable: weight.waste * attainable,
                });
            }
            let threshold = if f2_slope <= f64::EPSILON * (1.0 + f2_at0.abs()) {
                search.s_lo
            } else {
                ((f2_at0 - f2_cap) / f2_slope).clamp(search.s_lo, 1.0)
            };
            let s = snap_rate(threshold, search.s_lo);
            let probe = search.probe(s)?;
            Ok(point_from_probe(
                search.params,
                &probe,
                weight,
                ScalarizationMethod::ValueConstraint,
                PointRole::InventoryCut,
                None,
            )?)
        }
        Objective::Waste => {
            // Cut: w1 * f1*(s) <= bound, with f1* increasing; minimizing the
            // waste objective means pushing the rate as high as the cut
            // allows.
            let bound = weight.waste * ref_waste;
            let lo = search.probe(search.s_lo)?;
            let at_lo = weight.inventory * lo.best.cost;
            if at_lo > bound + COUPLING_TOL * (1.0 + bound.abs()) {
                return Err(FrontError::InfeasibleCut {
                    w1: weight.inventory,
                    bound,
                    attainable: at_lo,
                });
            }
            let hi = search.probe(1.0)?;
            let probe =
                if weight.inventory * hi.best.cost <= bound + COUPLING_TOL * (1.0 + bound.abs()) {
                    hi
                } else {
                    let (_, probe) =
                        search.ascend_to_root(weight.inventory, bound, 0.0, search.s_lo)?;
                    probe
                };
            Ok(point_from_probe(
                search.params,
                &probe,
                weight,
                ScalarizationMethod::ValueConstraint,
                PointRole::WasteCut,
                None,
            )?)
        }
    }
}

// ---------------------------------------------------------------------------
// Goal-attainment scheme.
// ---------------------------------------------------------------------------

/// Solves one goal-attainment subproblem: minimize over feasible points the
/// larger weighted excess `max(w1 * (f1 - u1), w2 * (f2 - u2))` above the
/// utopia point.  Returns the point with its attained level in `alpha`.
pub fn solve_ps(
    params: &SystemParameters,
    weight: WeightVector,
    utopia: UtopiaPoint,
    cfg: &SolverConfig,
) -> Result<ParetoPoint, FrontError> {
    let search = RateSearch::new(params, cfg)?;
    ps_subproblem(&search, weight, utopia)
}

fn ps_subproblem(
    search: &RateSearch<'_>,
    weight: WeightVector,
    utopia: UtopiaPoint,
) -> Result<ParetoPoint, FrontError> {
    let (f2_at0, f2_slope) = waste_line(search.params);
    let excess = |probe: &Probe| {
        let a = weight.inventory * (probe.best.cost - utopia.inventory);
        let b = weight.waste * ((f2_at0 - f2_slope * probe.recovery) - utopia.waste);
        a.max(b)
    };
    // The inventory excess rises with the rate while the waste excess falls,
    // so the minimax sits at whichever corner already has the rising branch
    // on top — or else at the interior crossing of the two branches.
    let lo = search.probe(search.s_lo)?;
    let a_lo = weight.inventory * (lo.best.cost - utopia.inventory);
    let b_lo = weight.waste * ((f2_at0 - f2_slope * search.s_lo) - utopia.waste);
    let probe = if a_lo >= b_lo {
        lo
    } else {
        let hi = search.probe(1.0)?;
        let a_hi = weight.inventory * (hi.best.cost - utopia.inventory);
        let b_hi = weight.waste * ((f2_at0 - f2_slope) - utopia.waste);
        if a_hi <= b_hi {
            hi
        } else {
            // psi(s) = w1 * (f1*(s) - u1) - w2 * (f2(s) - u2) crosses zero.
            let b0 = weight.inventory * utopia.inventory + weight.waste * (f2_at0 - utopia.waste);
            let b1 = -weight.waste * f2_slope;
            let (_, probe) = search.ascend_to_root(weight.inventory, b0, b1, search.s_lo)?;
            probe
        }
    };
    let alpha = excess(&probe);
    Ok(point_from_probe(
        search.params,
        &probe,
        weight,
        ScalarizationMethod::GoalAttainment,
        PointRole::Goal,
        Some(alpha),
    )?)
}

// ---------------------------------------------------------------------------
// Front assembly.
// ---------------------------------------------------------------------------

/// Traces the efficient frontier with the chosen scalarization over a grid of
/// `grid_points` weight vectors.
///
/// The goal-attainment scheme validates the utopia point against the
/// individual objective minima (each coordinate must not exceed its
/// objective's minimum); when no utopia point is supplied, a default sits ten
/// percent of the payoff range below each minimum.  The value-constraint
/// scheme ignores the utopia point.
pub fn compute_front(
    params: &SystemParameters,
    method: ScalarizationMethod,
    grid_points: u32,
    utopia: Option<UtopiaPoint>,
    normalization: Normalization,
    cfg: &SolverConfig,
) -> Result<ParetoFront, FrontError> {
    let started = Instant::now();
    let search = RateSearch::new(params, cfg)?;
    let grid = generate_weight_grid(grid_points, normalization);
    let mut candidates: Vec<ParetoPoint> = Vec::new();
    let mut skipped: Vec<SkippedSubproblem> = Vec::new();
    let mut subproblems: u64 = 0;
    let mut coupled_references = 0u32;
    let mut fallback_references = 0u32;
    let mut infeasible_cuts = 0u32;
    let mut merged_store = 0usize;

    match method {
        ScalarizationMethod::ValueConstraint => {
            let endpoints = (search.probe(search.s_lo)?, search.probe(1.0)?);
            for &weight in &grid {
                subproblems += 1;
                let (reference, coupled) = match locate_reference_probe(&search, weight) {
                    Ok(probe) => {
                        coupled_references += 1;
                        (probe, true)
                    }
                    Err(FrontError::CouplingUnattainable { .. }) => {
                        fallback_references += 1;
                        (fallback_reference_probe(&search, weight, &endpoints), false)
                    }
                    Err(other) => return Err(other),
                };
                let ref_point = point_from_probe(
                    params,
                    &reference,
                    weight,
                    ScalarizationMethod::ValueConstraint,
                    PointRole::Reference { coupled },
                    None,
                )?;
                let (ref_inventory, ref_waste) = (ref_point.inventory, ref_point.waste);
                candidates.push(ref_point);

                let mut cut_points: Vec<ParetoPoint> = Vec::new();
                for kept in [Objective::Inventory, Objective::Waste] {
                    subproblems += 1;
                    match cut_subproblem(&search, weight, ref_inventory, ref_waste, kept) {
                        Ok(point) => cut_points.push(point),
                        Err(FrontError::InfeasibleCut {
                            bound, attainable, ..
                        }) => {
                            infeasible_cuts += 1;
                            skipped.push(SkippedSubproblem {
                                weight,
                                role: match kept {
                                    Objective::Inventory => PointRole::InventoryCut,
                                    Objective::Waste => PointRole::WasteCut,
                                },
                                reason: format!(
                                    "cut bound {bound:.9} below best attainable {attainable:.9}"
                                ),
                            });
                        }
                        Err(other) => return Err(other),
                    }
                }
                merged_store += merged_count(&cut_points);
                candidates.extend(cut_points);
            }
        }
        ScalarizationMethod::GoalAttainment => {
            let (f1_min, d1, f2_min, d2) = individual_minima(params, cfg)?;
            let utopia = match utopia {
                Some(u) => {
                    if u.inventory > f1_min + COUPLING_TOL * (1.0 + f1_min.abs()) {
                        return Err(FrontError::InvalidUtopia {
                            index: 0,
                            value: u.inventory,
                            minimum: f1_min,
                        });
                    }
                    if u.waste > f2_min + COUPLING_TOL * (1.0 + f2_min.abs()) {
                        return Err(FrontError::InvalidUtopia {
                            index: 1,
                            value: u.waste,
                            minimum: f2_min,
                        });
                    }
                    u
                }
                None => {
                    let f1_span = inventory_cost(params, &d2)
                        .map_err(SolveError::from)?
                        .total_rate
                        - f1_min;
                    let f2_span =
                        waste_cost(params, d1.recovery).map_err(SolveError::from)? - f2_min;
                    UtopiaPoint {
                        inventory: f1_min - 0.1 * f1_span.max(1.0),
                        waste: f2_min - 0.1 * f2_span.max(1.0),
                    }
                }
            };
            for &weight in &grid {
                subproblems += 1;
                candidates.push(ps_subproblem(&search, weight, utopia)?);
            }
        }
    }

    let (points, dominated_points) = dominance_filter(candidates);
    let provenance = FrontSummary {
        method,
        grid_points,
        subproblems,
        seconds: started.elapsed().as_secs_f64(),
        pareto_points: points.len(),
        non_pareto_points: dominated_points.len(),
        coupled_references,
        fallback_references,
        infeasible_cuts,
        merged_store,
    };
    Ok(ParetoFront {
        points,
        dominated_points,
        skipped,
        provenance,
    })
}

/// Per-weight merge of the cut points, mirroring a running nondominated store:
/// duplicates (same integer decision, objectives equal within tolerance)
/// collapse to one entry, and a dominated partner is dropped.
fn merged_count(cut_points: &[ParetoPoint]) -> usize {
    match cut_points {
        [] => 0,
        [_] => 1,
        [a, b] => {
            let same_decision = a.decision.batch_new == b.decision.batch_new
                && a.decision.batch_repaired == b.decision.batch_repaired
                && a.decision.repair_cycles == b.decision.repair_cycles
                && a.decision.procurement_cycles == b.decision.procurement_cycles;
            let same_objectives = (a.inventory - b.inventory).abs() <= DOMINANCE_TOL
                && (a.waste - b.waste).abs() <= DOMINANCE_TOL;
            let collapses = (same_decision && same_objectives)
                || dominates(a.inventory, a.waste, b.inventory, b.waste)
                || dominates(b.inventory, b.waste, a.inventory, a.waste);
            if collapses {
                1
            } else {
                2
            }
        }
        _ => unreachable!("at most two cut subproblems per weight"),
    }
}

/// Strict dominance with tolerance: `a` dominates `b` when `a` is no worse in
/// both objectives and better than tolerance in at least one.
fn dominates(a1: f64, a2: f64, b1: f64, b2: f64) -> bool {
    a1 <= b1 + DOMINANCE_TOL
        && a2 <= b2 + DOMINANCE_TOL
        && (a1 < b1 - DOMINANCE_TOL || a2 < b2 - DOMINANCE_TOL)
}

/// Splits candidates into nondominated points (sorted by rising inventory
/// cost, then rising waste cost) and dominated ones (flagged).  Duplicate
/// objective pairs are mutually nondominated and all kept.
pub fn dominance_filter(candidates: Vec<ParetoPoint>) -> (Vec<ParetoPoint>, Vec<ParetoPoint>) {
    let mut keep: Vec<ParetoPoint> = Vec::with_capacity(candidates.len());
    let mut dropped: Vec<ParetoPoint> = Vec::new();
    for mut point in candidates {
        let is_dominated = |others: &[ParetoPoint], p: &ParetoPoint| {
            others
                .iter()
                .any(|o| dominates(o.inventory, o.waste, p.inventory, p.waste))
        };
        point.dominated = false;
        if is_dominated(&keep, &point) || is_dominated(&dropped, &point) {
            point.dominated = true;
            dropped.push(point);
        } else {
            // The newcomer may dominate earlier keepers.
            let mut i = 0;
            while i < keep.len() {
                if dominates(
                    point.inventory,
                    point.waste,
                    keep[i].inventory,
                    keep[i].waste,
                ) {
                    let mut loser = keep.remove(i);
                    loser.dominated = true;
                    dropped.push(loser);
                } else {
                    i += 1;
                }
            }
            keep.push(point);
        }
    }
    keep.sort_by(|a, b| {
        a.inventory
            .partial_cmp(&b.inventory)
            .unwrap()
            .then(a.waste.partial_cmp(&b.waste).unwrap())
    });
    (keep, dropped)
}
