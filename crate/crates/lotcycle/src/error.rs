//! Error types shared across the crate.

use thiserror::Error;

/// Validation and evaluation failures raised by the model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter value violates its documented range.
    #[error("invalid parameter `{name}`: {value} ({requirement})")]
    InvalidParameter {
        /// Field name as it appears in `SystemParameters`.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Human-readable statement of the violated requirement.
        requirement: &'static str,
    },
    /// A decision coordinate violates its documented range.
    #[error("invalid decision `{name}`: {value} ({requirement})")]
    InvalidDecision {
        /// Field name as it appears in `DecisionVector`.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Human-readable statement of the violated requirement.
        requirement: &'static str,
    },
    /// The recovery rate is structurally meaningless for this instance
    /// (no secondary returns exist to recover).
    #[error("recovery rate is unidentifiable: return_fraction_repaired * demand_repaired = 0")]
    UnidentifiableRecovery,
    /// An operation that requires a feasible decision received an infeasible one.
    #[error("decision is infeasible: {summary}")]
    InfeasibleDecision {
        /// Compact list of violated constraint identifiers.
        summary: String,
    },
}

/// Failures raised by the exact search layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    /// Input validation failed before any search ran.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// No decision inside the configured box satisfies the constraints.
    #[error("empty feasible region: {detail}")]
    EmptyFeasibleRegion {
        /// Why the region is empty.
        detail: String,
    },
    /// The optimum sits on an upper box bound, so the true optimum may lie
    /// outside; the caller should enlarge the configured bounds.
    #[error("search bound too tight: optimum attained at {bound} = {at}; enlarge the bound")]
    BoundsTooTight {
        /// Which configured bound was hit (`m_max`, `n_max`, or `q_max`).
        bound: &'static str,
        /// The bound value the optimum sits on.
        at: u32,
    },
    /// A configuration field violates its documented range.
    #[error("invalid solver configuration `{name}`: {requirement}")]
    InvalidConfig {
        /// Field name as it appears in `SolverConfig`.
        name: &'static str,
        /// Human-readable statement of the violated requirement.
        requirement: &'static str,
    },
}

/// Failures raised by the bi-objective layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontError {
    /// Propagated search failure.
    #[error(transparent)]
    Solve(#[from] SolveError),
    /// The weighted coupling equation has no root in the feasible recovery
    /// interval; the caller should fall back to a weighted-minimum reference.
    #[error(
        "objective coupling unattainable for weight {w1:.6}: \
         residual {residual:.6e} at the nearest endpoint"
    )]
    CouplingUnattainable {
        /// First weight component.
        w1: f64,
        /// Signed residual of the coupling equation at the closest endpoint.
        residual: f64,
    },
    /// A scalar cut excludes the entire feasible set.
    #[error("cut infeasible for weight {w1:.6}: bound {bound:.6} below attainable minimum {attainable:.6}")]
    InfeasibleCut {
        /// First weight component.
        w1: f64,
        /// The cut's right-hand side.
        bound: f64,
        /// Minimum attainable value of the constrained side.
        attainable: f64,
    },
    /// The reference point must weakly dominate every attainable objective
    /// vector; this one does not.
    #[error(
        "invalid utopia point: component {index} = {value} exceeds attainable minimum {minimum}"
    )]
    InvalidUtopia {
        /// Which component (0 = inventory, 1 = waste).
        index: usize,
        /// Supplied component value.
        value: f64,
        /// Attainable minimum it must not exceed.
        minimum: f64,
    },
}
