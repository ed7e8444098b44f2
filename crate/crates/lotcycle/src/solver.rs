//! Exact search over the integer decision box.
//!
//! The search factorizes the problem: cycle counts `(m, n)` are enumerated
//! exhaustively, and for each pair the batch sizes are optimized by a
//! continuous relaxation followed by exact evaluation of a provably small
//! integer candidate set. With the phase spans `u = cycle_new` and
//! `v = cycle_repair` as coordinates the cost rate is
//! `(c0 + p1·u² + p2·v² + p3·u·v)/(u + v)` (see
//! [`crate::cost::span_quadratic`]), whose minimizers over the feasible wedge
//! `u ≥ 1, 1 ≤ v ≤ u` lie either at an interior stationary ray, on one of
//! the two faces, or at the corner — all available in closed form. Seeded
//! multistart coordinate descent over the same wedge adds derivative-free
//! confirmation, and every continuous candidate is rounded into a small
//! integer window that is evaluated exactly.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::{inventory_cost, serial_breakdown, span_quadratic, CostBreakdown, SpanQuadratic};
use crate::decision::{derive, DecisionVector, DerivedSchedule};
use crate::error::{ModelError, SolveError};
use crate::feasibility::{check_feasibility, recovery_interval, FeasibilityReport, Model};
use crate::params::SystemParameters;

/// Search-box bounds and convergence controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Upper bound on repair cycle count (≥ 1).
    pub m_max: u32,
    /// Upper bound on procurement cycle count (≥ 1).
    pub n_max: u32,
    /// Upper bound on both batch sizes (≥ 1). `None` derives
    /// `ceil(4 * max(demand_new, demand_repaired))` from the instance.
    pub q_max: Option<u32>,
    /// Grid resolution of the initial recovery-rate scan (≥ 2).
    pub s_grid: u32,
    /// Number of random restarts of the continuous descent (≥ 1).
    pub multistart: u32,
    /// Seed for every randomized component; identical seeds give identical
    /// solutions.
    pub seed: u64,
    /// Relative convergence tolerance (> 0).
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            m_max: 64,
            n_max: 64,
            q_max: None,
            s_grid: 101,
            multistart: 4,
            seed: 2024,
            tol: 1e-8,
        }
    }
}

impl SolverConfig {
    /// Checks every documented range requirement.
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.m_max < 1 {
            return Err(SolveError::InvalidConfig {
                name: "m_max",
                requirement: "must be >= 1",
            });
        }
        if self.n_max < 1 {
            return Err(SolveError::InvalidConfig {
                name: "n_max",
                requirement: "must be >= 1",
            });
        }
        if self.q_max == Some(0) {
            return Err(SolveError::InvalidConfig {
                name: "q_max",
                requirement: "must be >= 1",
            });
        }
        if self.s_grid < 2 {
            return Err(SolveError::InvalidConfig {
                name: "s_grid",
                requirement: "must be >= 2",
            });
        }
        if self.multistart < 1 {
            return Err(SolveError::InvalidConfig {
                name: "multistart",
                requirement: "must be >= 1",
            });
        }
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(SolveError::InvalidConfig {
                name: "tol",
                requirement: "must be finite and > 0",
            });
        }
        Ok(())
    }

    /// Batch-size bound, deriving the default from the instance when unset.
    pub fn resolved_q_max(&self, params: &SystemParameters) -> u32 {
        self.q_max.unwrap_or_else(|| {
            let scale = 4.0 * params.demand_new.max(params.demand_repaired);
            scale.ceil().min(f64::from(u32::MAX)) as u32
        })
    }
}

/// Best integer batch pair of one `(m, n)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerOptimum {
    pub batch_new: u32,
    pub batch_repaired: u32,
    /// Exact cost rate at the pair.
    pub cost: f64,
}

/// Retained per-cell result: the cell's coordinates and its best batch pair,
/// `None` when the cell's feasible set is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOptimum {
    pub repair_cycles: u32,
    pub procurement_cycles: u32,
    pub best: Option<InnerOptimum>,
}

/// Work accounting for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    /// Inner batch-size subproblems solved (cells × recovery probes).
    pub subproblems: u64,
    /// Wall-clock time of the whole solve.
    pub wall: Duration,
}

/// A certified optimum over the configured box.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub decision: DecisionVector,
    pub cost: CostBreakdown,
    pub schedule: DerivedSchedule,
    pub feasibility: FeasibilityReport,
    /// Per-`(m, n)` best batch pairs at the returned recovery rate, in
    /// procurement-major order — the optimality certificate: the reported
    /// cost is the minimum over this table.
    pub certificate: Vec<CellOptimum>,
    pub stats: SearchStats,
}

/// Minimizes cost over integer batch sizes for fixed cycle counts and
/// recovery rate.
///
/// Continuous candidates (closed-form face/ray/corner minimizers of the span
/// quadratic plus `cfg.multistart` seeded coordinate-descent runs) are
/// rounded into integer windows, every window member is evaluated exactly,
/// and the cheapest feasible pair wins; ties break toward smaller batches.
pub fn optimize_inner(
    params: &SystemParameters,
    repair_cycles: u32,
    procurement_cycles: u32,
    recovery: f64,
    cfg: &SolverConfig,
) -> Result<InnerOptimum, SolveError> {
    params.validate()?;
    cfg.validate()?;
    if repair_cycles < 1 || procurement_cycles < 1 {
        return Err(SolveError::Model(ModelError::InvalidDecision {
            name: "repair_cycles/procurement_cycles",
            value: f64::from(repair_cycles.min(procurement_cycles)),
            requirement: "must be an integer >= 1",
        }));
    }
    if !(0.0..=1.0).contains(&recovery) {
        return Err(SolveError::Model(ModelError::InvalidDecision {
            name: "recovery",
            value: recovery,
            requirement: "must satisfy 0 <= value <= 1",
        }));
    }
    inner_search(
        params,
        repair_cycles,
        procurement_cycles,
        recovery,
        cfg.resolved_q_max(params),
        cfg,
    )
    .ok_or_else(|| SolveError::EmptyFeasibleRegion {
        detail: format!(
            "no integer batch pair satisfies the cycle-structure constraints for \
             repair_cycles = {repair_cycles}, procurement_cycles = {procurement_cycles}"
        ),
    })
}

/// Fixed-recovery model: minimizes the inventory cost rate with the recovery
/// rate pinned to `params.fixed_recovery`.
pub fn solve_model1(params: &SystemParameters, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    params.validate()?;
    cfg.validate()?;
    let recovery =
        params
            .fixed_recovery
            .ok_or(SolveError::Model(ModelError::InvalidParameter {
                name: "fixed_recovery",
                value: f64::NAN,
                requirement: "must be present for the fixed-recovery model",
            }))?;
    let started = Instant::now();
    let q_max = cfg.resolved_q_max(params);
    let cells = enumerate_cells(params, recovery, cfg, q_max);
    let subproblems = cells.len() as u64;
    finish(
        params,
        cfg,
        q_max,
        recovery,
        cells,
        subproblems,
        started,
        Model::FixedRecovery,
    )
}

/// Variable-recovery model: additionally chooses the recovery rate within
/// the demand-coverage interval.
///
/// The rate is scanned on a `cfg.s_grid`-point grid over the feasible
/// interval and the winning bracket is refined by golden-section probes; the
/// best evaluated probe (grid points included) is returned, so a monotone
/// cost profile resolves exactly to an interval endpoint.
pub fn solve_model2(params: &SystemParameters, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    params.validate_for_variable_recovery()?;
    cfg.validate()?;
    if let Some(fixed) = params.fixed_recovery {
        return Err(SolveError::Model(ModelError::InvalidParameter {
            name: "fixed_recovery",
            value: fixed,
            requirement: "must be absent for the variable-recovery model",
        }));
    }
    let started = Instant::now();
    let (s_lo, s_hi) =
        recovery_interval(params).ok_or_else(|| SolveError::EmptyFeasibleRegion {
            detail: format!(
            "even full recovery cannot cover repaired-item demand: maximum repair inflow {} < {}",
            params.primary_inflow() + params.secondary_return_rate(),
            params.demand_repaired
        ),
        })?;
    let q_max = cfg.resolved_q_max(params);
    let mut scan = RecoveryScan {
        params,
        cfg,
        q_max,
        subproblems: 0,
        incumbent: None,
    };

    // Grid scan (includes both interval endpoints).
    let steps = cfg.s_grid - 1;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| s_lo + (s_hi - s_lo) * f64::from(i) / f64::from(steps))
        .collect();
    grid.dedup();
    for &s in &grid {
        scan.probe(s);
    }
    let Some(best_s) = scan.incumbent.as_ref().map(|(_, s, _)| *s) else {
        return Err(SolveError::EmptyFeasibleRegion {
            detail: format!(
                "no integer batch pair satisfies the cycle-structure constraints within \
                 q_max = {q_max} for any cycle-count pair in the box"
            ),
        });
    };

    // Golden-section refinement of the winning bracket; the incumbent keeps
    // the best probe seen, so refinement can only improve on the grid.
    let idx = grid.iter().position(|&s| s == best_s).unwrap_or(0);
    let mut lo = grid[idx.saturating_sub(1)];
    let mut hi = grid[(idx + 1).min(grid.len() - 1)];
    if hi - lo > cfg.tol {
        const INVPHI: f64 = 0.618_033_988_749_894_9;
        let mut a = hi - (hi - lo) * INVPHI;
        let mut b = lo + (hi - lo) * INVPHI;
        let mut fa = scan.probe(a);
        let mut fb = scan.probe(b);
        for _ in 0..28 {
            if hi - lo <= cfg.tol * (1.0 + hi.abs()) {
                break;
            }
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - (hi - lo) * INVPHI;
                fa = scan.probe(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + (hi - lo) * INVPHI;
                fb = scan.probe(b);
            }
        }
    }

    let subproblems = scan.subproblems;
    let (_, s_star, cells) = scan.incumbent.expect("incumbent set by grid scan");
    finish(
        params,
        cfg,
        q_max,
        s_star,
        cells,
        subproblems,
        started,
        Model::VariableRecovery,
    )
}

/// Incumbent-tracking scan over recovery-rate probes for [`solve_model2`].
struct RecoveryScan<'a> {
    params: &'a SystemParameters,
    cfg: &'a SolverConfig,
    q_max: u32,
    subproblems: u64,
    incumbent: Option<(OuterKey, f64, Vec<CellOptimum>)>,
}

impl RecoveryScan<'_> {
    /// Solves the full cycle-count box at one recovery rate, updates the
    /// incumbent (ties break toward smaller rates), and returns the probe's
    /// best cost (`+inf` when the box is empty).
    fn probe(&mut self, s: f64) -> f64 {
        let cells = enumerate_cells(self.params, s, self.cfg, self.q_max);
        self.subproblems += cells.len() as u64;
        let Some(key) = best_cell_key(&cells) else {
            return f64::INFINITY;
        };
        let replace = match &self.incumbent {
            None => true,
            Some((best_key, best_s, _)) => key < *best_key || (key == *best_key && s < *best_s),
        };
        if replace {
            self.incumbent = Some((key, s, cells));
        }
        key.cost
    }
}

/// Lexicographic solution key — field order is the deterministic tie-break
/// order: cost, then procurement cycles, repair cycles, and batch sizes.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct OuterKey {
    cost: f64,
    procurement_cycles: u32,
    repair_cycles: u32,
    batch_new: u32,
    batch_repaired: u32,
}

impl OuterKey {
    fn decision(&self, recovery: f64) -> Result<DecisionVector, ModelError> {
        DecisionVector::new(
            self.batch_new,
            self.batch_repaired,
            self.repair_cycles,
            self.procurement_cycles,
            recovery,
        )
    }
}

/// Best decision over the whole cycle-count box at one recovery rate,
/// without assembling a `Solution` — the bi-objective layer probes the
/// box many times per front and needs only the winning point.
pub(crate) fn box_best(
    params: &SystemParameters,
    recovery: f64,
    cfg: &SolverConfig,
    q_max: u32,
) -> Option<BoxBest> {
    let cells = enumerate_cells(params, recovery, cfg, q_max);
    best_cell_key(&cells).map(|key| BoxBest {
        batch_new: key.batch_new,
        batch_repaired: key.batch_repaired,
        repair_cycles: key.repair_cycles,
        procurement_cycles: key.procurement_cycles,
        cost: key.cost,
    })
}

/// Winning point of one [`box_best`] probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BoxBest {
    pub batch_new: u32,
    pub batch_repaired: u32,
    pub repair_cycles: u32,
    pub procurement_cycles: u32,
    pub cost: f64,
}

impl BoxBest {
    pub fn decision(&self, recovery: f64) -> Result<DecisionVector, ModelError> {
        DecisionVector::new(
            self.batch_new,
            self.batch_repaired,
            self.repair_cycles,
            self.procurement_cycles,
            recovery,
        )
    }
}

fn best_cell_key(cells: &[CellOptimum]) -> Option<OuterKey> {
    let mut best: Option<OuterKey> = None;
    for cell in cells {
        let Some(inner) = cell.best else { continue };
        let key = OuterKey {
            cost: inner.cost,
            procurement_cycles: cell.procurement_cycles,
            repair_cycles: cell.repair_cycles,
            batch_new: inner.batch_new,
            batch_repaired: inner.batch_repaired,
        };
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    best
}

/// Solves every `(m, n)` cell of the box at one recovery rate, in
/// deterministic procurement-major order (parallelized, order-preserving).
fn enumerate_cells(
    params: &SystemParameters,
    recovery: f64,
    cfg: &SolverConfig,
    q_max: u32,
) -> Vec<CellOptimum> {
    let pairs: Vec<(u32, u32)> = (1..=cfg.n_max)
        .flat_map(|n| (1..=cfg.m_max).map(move |m| (n, m)))
        .collect();
    pairs
        .par_iter()
        .map(|&(n, m)| CellOptimum {
            repair_cycles: m,
            procurement_cycles: n,
            best: inner_search(params, m, n, recovery, q_max, cfg),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn finish(
    params: &SystemParameters,
    cfg: &SolverConfig,
    q_max: u32,
    recovery: f64,
    cells: Vec<CellOptimum>,
    subproblems: u64,
    started: Instant,
    model: Model,
) -> Result<Solution, SolveError> {
    let Some(key) = best_cell_key(&cells) else {
        return Err(SolveError::EmptyFeasibleRegion {
            detail: format!(
                "no integer batch pair satisfies the cycle-structure constraints within \
                 q_max = {q_max} for any cycle-count pair in the box"
            ),
        });
    };
    if key.repair_cycles == cfg.m_max {
        return Err(SolveError::BoundsTooTight {
            bound: "m_max",
            at: cfg.m_max,
        });
    }
    if key.procurement_cycles == cfg.n_max {
        return Err(SolveError::BoundsTooTight {
            bound: "n_max",
            at: cfg.n_max,
        });
    }
    if key.batch_new == q_max || key.batch_repaired == q_max {
        return Err(SolveError::BoundsTooTight {
            bound: "q_max",
            at: q_max,
        });
    }
    let decision = key.decision(recovery)?;
    let feasibility = check_feasibility(params, &decision, model);
    if !feasibility.feasible {
        return Err(SolveError::Model(ModelError::InfeasibleDecision {
            summary: feasibility.summary(),
        }));
    }
    Ok(Solution {
        decision,
        cost: inventory_cost(params, &decision)?,
        schedule: derive(params, &decision)?,
        feasibility,
        certificate: cells,
        stats: SearchStats {
            subproblems,
            wall: started.elapsed(),
        },
    })
}

/// Exact best batch pair of one `(m, n)` cell, or `None` when no pair
/// satisfies the cycle-structure constraints within `q_max`.
fn inner_search(
    params: &SystemParameters,
    m: u32,
    n: u32,
    recovery: f64,
    q_max: u32,
    cfg: &SolverConfig,
) -> Option<InnerOptimum> {
    let quad = span_quadratic(params, m, n, recovery);
    let dp = params.demand_new;
    let dr = params.demand_repaired;
    let mf = f64::from(m);
    let nf = f64::from(n);

    // Feasibility floors: spans at least one time unit.
    let qp_lo = ((dp / nf - 1e-9).ceil().max(1.0)) as u32;
    let qr_lo = ((dr / mf - 1e-9).ceil().max(1.0)) as u32;
    if qp_lo > q_max || qr_lo > q_max {
        return None;
    }
    let u_hi = nf * f64::from(q_max) / dp;

    let mut candidates: Vec<(f64, f64)> = vec![(1.0, 1.0)];
    let g = |t: f64| quad.p1 + quad.p3 * t + quad.p2 * t * t;

    // Stationary rays of the relaxation: fixed v/u ratio t, optimal radius
    // sqrt(c0 / g(t)). The boundary ray t = 1 and the interior stationary
    // ray (if it falls inside the wedge) cover the smooth minimizers.
    let mut rays = vec![1.0];
    let denom = 2.0 * quad.p2 - quad.p3;
    if denom.abs() > 1e-30 {
        let t_star = (2.0 * quad.p1 - quad.p3) / denom;
        if t_star > 1e-9 && t_star <= 1.0 {
            rays.push(t_star);
        }
    }
    for t in rays {
        let gt = g(t);
        if gt <= 0.0 {
            continue;
        }
        let u = if quad.c0 > 0.0 {
            (quad.c0 / gt).sqrt().max(1.0)
        } else {
            1.0
        };
        candidates.push((u, (t * u).max(1.0)));
    }
    // Face v = 1: stationary point of (c0 + p2 + p3·u + p1·u²)/(u + 1).
    if quad.p1 > 0.0 {
        let disc = 1.0 + (quad.c0 + quad.p2 - quad.p3) / quad.p1;
        if disc > 0.0 {
            candidates.push(((disc.sqrt() - 1.0).max(1.0), 1.0));
        }
    }
    // Seeded multistart coordinate descent over the wedge.
    if u_hi > 1.0 {
        let cell_seed = cfg
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((u64::from(n) << 32) | u64::from(m));
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed);
        for _ in 0..cfg.multistart {
            let u0 = 1.0 + rng.gen::<f64>() * (u_hi - 1.0);
            let v0 = 1.0 + rng.gen::<f64>() * (u0 - 1.0);
            candidates.push(coordinate_descent(&quad, u0, v0, u_hi, cfg.tol));
        }
    }

    // Integer windows around every continuous candidate plus the
    // feasibility-floor bands.
    let mut qp_window: Vec<i64> = Vec::with_capacity(candidates.len() * 6 + 3);
    for &(u, _) in &candidates {
        let center = (u * dp / nf) as i64;
        qp_window.extend(center - 2..=center + 3);
    }
    qp_window.extend(i64::from(qp_lo)..=i64::from(qp_lo) + 2);
    qp_window.sort_unstable();
    qp_window.dedup();

    let mut best: Option<(f64, u32, u32)> = None;
    for &qp_i in &qp_window {
        if qp_i < i64::from(qp_lo) || qp_i > i64::from(q_max) {
            continue;
        }
        let qp = qp_i as u32;
        let tp = nf * f64::from(qp) / dp;
        let hi_f = (dr * tp / mf + 1e-9).floor();
        let qr_hi = if hi_f >= f64::from(q_max) {
            q_max
        } else {
            hi_f as u32
        };
        if qr_lo > qr_hi {
            continue;
        }
        let mut qr_window: Vec<i64> = vec![
            i64::from(qr_lo),
            i64::from(qr_lo) + 1,
            i64::from(qr_hi) - 1,
            i64::from(qr_hi),
        ];
        for &(_, v) in &candidates {
            let center = (v * dr / mf) as i64;
            qr_window.extend(center - 2..=center + 3);
        }
        qr_window.sort_unstable();
        qr_window.dedup();
        for &qr_i in &qr_window {
            if qr_i < i64::from(qr_lo) || qr_i > i64::from(qr_hi) {
                continue;
            }
            let qr = qr_i as u32;
            let rate = exact_rate(params, qp, qr, m, n, recovery);
            let key = (rate, qp, qr);
            let better = match best {
                None => true,
                Some(b) => key.0 < b.0 || (key.0 == b.0 && (key.1, key.2) < (b.1, b.2)),
            };
            if better {
                best = Some(key);
            }
        }
    }
    best.map(|(cost, batch_new, batch_repaired)| InnerOptimum {
        batch_new,
        batch_repaired,
        cost,
    })
}

/// Serial cost rate without re-validation — the windows guarantee range and
/// feasibility, and the caller validated the parameters once.
fn exact_rate(params: &SystemParameters, qp: u32, qr: u32, m: u32, n: u32, recovery: f64) -> f64 {
    let decision = DecisionVector {
        batch_new: qp,
        batch_repaired: qr,
        repair_cycles: m,
        procurement_cycles: n,
        recovery,
    };
    let cycle_new = f64::from(n) * f64::from(qp) / params.demand_new;
    let cycle_repair = f64::from(m) * f64::from(qr) / params.demand_repaired;
    let schedule = DerivedSchedule {
        cycle_new,
        cycle_repair,
        cycle_total: cycle_new + cycle_repair,
        inflow_primary: params.primary_inflow(),
        inflow_secondary: params.secondary_inflow(recovery),
    };
    serial_breakdown(params, &decision, &schedule).total_rate
}

/// Alternating golden-section line searches over the wedge `u ≥ 1`,
/// `1 ≤ v ≤ u`, from a given start point.
fn coordinate_descent(quad: &SpanQuadratic, u0: f64, v0: f64, u_hi: f64, tol: f64) -> (f64, f64) {
    let mut u = u0.clamp(1.0, u_hi);
    let mut v = v0.clamp(1.0, u);
    let mut value = quad.rate(u, v);
    for _ in 0..12 {
        u = golden_min(|x| quad.rate(x, v), v.max(1.0), u_hi);
        v = golden_min(|x| quad.rate(u, x), 1.0, u);
        let next = quad.rate(u, v);
        if (value - next).abs() <= tol * (1.0 + next.abs()) {
            return (u, v);
        }
        value = next;
    }
    (u, v)
}

/// Golden-section minimizer on `[lo, hi]`; exact enough that the ±2 integer
/// window around the rounded result covers the continuous optimum.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (lo, hi);
    let width = hi - lo;
    let mut a = hi - width * INVPHI;
    let mut b = lo + width * INVPHI;
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > 1e-7 * width + 1e-12 {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * INVPHI;
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * INVPHI;
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}
