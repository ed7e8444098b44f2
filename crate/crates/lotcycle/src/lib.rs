//! Lot sizing for a two-depot production system with item recovery.
//!
//! The system serves two demand streams: new items from a supply depot and
//! repaired items from a repair depot.  A fraction of sold new items comes
//! back and, after inspection, re-enters the repair depot; a chosen share of
//! used repaired items is recovered as well, and whatever is not recovered is
//! disposed of at a unit cost.  Production happens in batches — a procurement
//! batch size and cycle count for new items, a repair batch size and cycle
//! count for repaired ones — and the planner pays setup costs per batch plus
//! holding costs on both depots' inventories.
//!
//! The crate covers the full decision workflow around that model:
//!
//! * [`cost`] — closed-form evaluation of the long-run cost rate for a given
//!   decision (serial and parallel material-flow variants), the disposal-cost
//!   objective, and an area-by-area decomposition of the holding terms.
//! * [`feasibility`] — the constraint set each optimization model imposes,
//!   with per-constraint residual reporting.
//! * [`solver`] — exact search over cycle counts and batch sizes: exhaustive
//!   enumeration of cycle-count cells, a continuous relaxation to center each
//!   cell's batch window, and exact integer evaluation inside the window;
//!   optionally optimizing the recovery rate as well.
//! * [`moo`] — the inventory-versus-waste trade-off: efficient frontiers via
//!   a feasible-value-constraint scheme and a goal-attainment scheme, plus a
//!   dominance filter.
//! * [`trace`] — an independent piecewise-linear replay of the inventory
//!   trajectories; integrating it reproduces the closed-form cost and checks
//!   stock consistency.
//! * [`sensitivity`] — one-factor parameter sweeps that re-solve the model
//!   per grid point.
//!
//! Decisions are validated before evaluation, every search is deterministic
//! for a fixed seed, and solutions carry a per-cell certificate of the
//! enumeration that produced them.

pub mod cost;
pub mod decision;
pub mod error;
pub mod feasibility;
pub mod moo;
pub mod params;
pub mod sensitivity;
pub mod solver;
pub mod trace;

pub use cost::{
    area_decomposition, inventory_cost, parallel_flow_cost, recombine, span_quadratic, waste_cost,
    AreaTerm, CostBreakdown, Depot, SpanQuadratic,
};
pub use decision::{derive, DecisionVector, DerivedSchedule};
pub use error::{FrontError, ModelError, SolveError};
pub use feasibility::{check_feasibility, recovery_interval, FeasibilityReport, Model, Violation};
pub use moo::{
    compute_front, dominance_filter, generate_weight_grid, individual_minima, locate_reference,
    payoff_ranges, solve_fvc, solve_ps, FrontSummary, Normalization, Objective, ParetoFront,
    ParetoPoint, PointRole, ScalarizationMethod, SkippedSubproblem, UtopiaPoint, WeightVector,
};
pub use params::SystemParameters;
pub use sensitivity::{
    endpoint_reduction, log_spaced_values, run_sweep, SweepRow, SweepSpec, DEFAULT_SWEEP_HI_FACTOR,
    DEFAULT_SWEEP_LO_FACTOR, DEFAULT_SWEEP_POINTS, SWEEPABLE_PARAMETERS,
};
pub use solver::{
    optimize_inner, solve_model1, solve_model2, CellOptimum, InnerOptimum, SearchStats, Solution,
    SolverConfig,
};
pub use trace::{
    build_trace, refine, simulated_cost, Breakpoint, FlowVariant, InventoryTrace, Shortfall,
};
