//! Scenario files: one TOML document per instance.
//!
//! Schema (all tables except `[params]` optional; unknown *top-level* tables
//! are tolerated so exported artifacts re-load as scenarios, while unknown
//! keys *inside* a known table are rejected as typos):
//!
//! ```toml
//! [params]                      # system parameters (required)
//! demand_new = 100.0            # primary-market demand rate, > 0
//! demand_repaired = 43.0        # secondary-market demand rate, > 0
//! return_fraction_new = 0.4     # returned share of primary sales, in (0, 1]
//! acceptance_fraction = 0.8     # inspected returns accepted, in (0, 1]
//! return_fraction_repaired = 0.4  # returned share of secondary sales, (0, 1]
//! holding_cost_supply = 1.6     # per unit·time at the supply depot, >= 0
//! holding_cost_repair = 1.2     # per unit·time at the repair depot, >= 0
//! setup_cost_supply = 10.0      # per procurement batch, >= 0
//! setup_cost_repair = 1.0       # per repair batch, >= 0
//! waste_unit_cost = 0.0         # per discarded unit, >= 0
//! fixed_recovery = 0.7          # optional; present => fixed-recovery model
//!
//! [decision]                    # explicit operating point (evaluate/simulate)
//! batch_new = 35
//! batch_repaired = 15
//! repair_cycles = 3
//! procurement_cycles = 3
//! recovery = 0.7                # optional; defaults to params.fixed_recovery
//!
//! [solver]                      # box and search controls (defaults shown)
//! m_max = 64
//! n_max = 64
//! q_max = 400                   # optional; default 4 * max demand, rounded up
//! s_grid = 101
//! multistart = 4
//! seed = 2024
//! tol = 1e-8
//!
//! [moo]                         # frontier controls (pareto)
//! method = "ps"                 # "fvc" | "ps"
//! grid = 200
//! utopia = [-70.0, -1000.0]     # optional; must weakly dominate both minima
//! normalization = "plain"       # "plain" | "boundary-scaled"
//!
//! [sweep]                       # one-factor sweep controls (sweep)
//! parameter = "holding_cost_supply"
//! values = [5.0, 15.0]          # explicit values, or a factor grid:
//! lo_factor = 0.2
//! hi_factor = 2.5
//! points = 10
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use lotcycle::{
    log_spaced_values, DecisionVector, Model, ScalarizationMethod, SolverConfig, SweepSpec,
    SystemParameters, UtopiaPoint, DEFAULT_SWEEP_HI_FACTOR, DEFAULT_SWEEP_LO_FACTOR,
    DEFAULT_SWEEP_POINTS,
};
use serde::Deserialize;

/// Scenario-level failure: the file could not be read, parsed, or validated.
/// Every variant names what was violated.
#[derive(Debug)]
pub enum ScenarioError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        message: String,
    },
    Invalid {
        message: String,
    },
    MissingSection {
        section: &'static str,
        needed_for: &'static str,
    },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io { path, source } => {
                write!(f, "cannot read scenario {}: {source}", path.display())
            }
            Self::Parse { path, message } => {
                write!(f, "scenario {} does not parse: {message}", path.display())
            }
            Self::Invalid { message } => write!(f, "invalid scenario: {message}"),
            Self::MissingSection {
                section,
                needed_for,
            } => write!(
                f,
                "invalid scenario: the [{section}] table is required for `{needed_for}`"
            ),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// How weight grids are spaced for the frontier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationMode {
    /// Evenly spaced inventory weights.
    Plain,
    /// Weights rescaled by the payoff ranges of the two objectives.
    BoundaryScaled,
}

/// Frontier controls resolved from the `[moo]` table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSpec {
    pub method: ScalarizationMethod,
    pub grid: u32,
    pub utopia: Option<UtopiaPoint>,
    pub normalization: NormalizationMode,
}

impl Default for FrontSpec {
    fn default() -> Self {
        Self {
            method: ScalarizationMethod::GoalAttainment,
            grid: 200,
            utopia: None,
            normalization: NormalizationMode::Plain,
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: SystemParameters,
    pub decision: Option<DecisionVector>,
    pub solver: SolverConfig,
    pub front: FrontSpec,
    pub sweep: Option<SweepSpec>,
}

impl Scenario {
    /// Model implied by the presence of a fixed recovery rate.
    pub fn model(&self) -> Model {
        if self.params.fixed_recovery.is_some() {
            Model::FixedRecovery
        } else {
            Model::VariableRecovery
        }
    }

    /// Explicit decision, or an error naming the missing table.
    pub fn require_decision(
        &self,
        needed_for: &'static str,
    ) -> Result<DecisionVector, ScenarioError> {
        self.decision.ok_or(ScenarioError::MissingSection {
            section: "decision",
            needed_for,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    demand_new: f64,
    demand_repaired: f64,
    return_fraction_new: f64,
    acceptance_fraction: f64,
    return_fraction_repaired: f64,
    holding_cost_supply: f64,
    holding_cost_repair: f64,
    setup_cost_supply: f64,
    setup_cost_repair: f64,
    waste_unit_cost: f64,
    fixed_recovery: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecisionFile {
    batch_new: u32,
    batch_repaired: u32,
    repair_cycles: u32,
    procurement_cycles: u32,
    recovery: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverFile {
    m_max: Option<u32>,
    n_max: Option<u32>,
    q_max: Option<u32>,
    s_grid: Option<u32>,
    multistart: Option<u32>,
    seed: Option<u64>,
    tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MooFile {
    method: Option<String>,
    grid: Option<u32>,
    utopia: Option<[f64; 2]>,
    normalization: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    parameter: String,
    values: Option<Vec<f64>>,
    lo_factor: Option<f64>,
    hi_factor: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct ScenarioFile {
    params: ParamsFile,
    decision: Option<DecisionFile>,
    solver: Option<SolverFile>,
    moo: Option<MooFile>,
    sweep: Option<SweepFile>,
}

fn invalid(message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        message: message.into(),
    }
}

/// Parses a scalarization-method name as used in scenario files and exports.
pub fn parse_method(name: &str) -> Result<ScalarizationMethod, ScenarioError> {
    match name {
        "fvc" => Ok(ScalarizationMethod::ValueConstraint),
        "ps" => Ok(ScalarizationMethod::GoalAttainment),
        other => Err(invalid(format!(
            "moo.method: unknown method {other:?} (expected \"fvc\" or \"ps\")"
        ))),
    }
}

fn parse_normalization(name: &str) -> Result<NormalizationMode, ScenarioError> {
    match name {
        "plain" => Ok(NormalizationMode::Plain),
        "boundary-scaled" => Ok(NormalizationMode::BoundaryScaled),
        other => Err(invalid(format!(
            "moo.normalization: unknown mode {other:?} (expected \"plain\" or \"boundary-scaled\")"
        ))),
    }
}

/// Loads and validates a scenario file.
pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = toml::from_str(&text).map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })?;

    let p = file.params;
    let params = SystemParameters {
        demand_new: p.demand_new,
        demand_repaired: p.demand_repaired,
        return_fraction_new: p.return_fraction_new,
        acceptance_fraction: p.acceptance_fraction,
        return_fraction_repaired: p.return_fraction_repaired,
        holding_cost_supply: p.holding_cost_supply,
        holding_cost_repair: p.holding_cost_repair,
        setup_cost_supply: p.setup_cost_supply,
        setup_cost_repair: p.setup_cost_repair,
        waste_unit_cost: p.waste_unit_cost,
        fixed_recovery: p.fixed_recovery,
    };
    params
        .validate()
        .map_err(|e| invalid(format!("params: {e}")))?;

    let decision = match file.decision {
        None => None,
        Some(d) => {
            let recovery = d.recovery.or(params.fixed_recovery).ok_or_else(|| {
                invalid("decision.recovery: required when params.fixed_recovery is absent")
            })?;
            Some(
                DecisionVector::new(
                    d.batch_new,
                    d.batch_repaired,
                    d.repair_cycles,
                    d.procurement_cycles,
                    recovery,
                )
                .map_err(|e| invalid(format!("decision: {e}")))?,
            )
        }
    };

    let defaults = SolverConfig::default();
    let s = file.solver.unwrap_or_default();
    let solver = SolverConfig {
        m_max: s.m_max.unwrap_or(defaults.m_max),
        n_max: s.n_max.unwrap_or(defaults.n_max),
        q_max: s.q_max.or(defaults.q_max),
        s_grid: s.s_grid.unwrap_or(defaults.s_grid),
        multistart: s.multistart.unwrap_or(defaults.multistart),
        seed: s.seed.unwrap_or(defaults.seed),
        tol: s.tol.unwrap_or(defaults.tol),
    };
    solver
        .validate()
        .map_err(|e| invalid(format!("solver: {e}")))?;

    let m = file.moo.unwrap_or_default();
    let front_defaults = FrontSpec::default();
    let front = FrontSpec {
        method: match &m.method {
            Some(name) => parse_method(name)?,
            None => front_defaults.method,
        },
        grid: m.grid.unwrap_or(front_defaults.grid),
        utopia: m
            .utopia
            .map(|[inventory, waste]| UtopiaPoint { inventory, waste }),
        normalization: match &m.normalization {
            Some(name) => parse_normalization(name)?,
            None => front_defaults.normalization,
        },
    };
    if front.grid == 0 {
        return Err(invalid("moo.grid: must be at least 1"));
    }

    let sweep = match file.sweep {
        None => None,
        Some(sw) => {
            let base_value = params.field(&sw.parameter).ok_or_else(|| {
                invalid(format!(
                    "sweep.parameter: unknown parameter {:?} (see the documented schema)",
                    sw.parameter
                ))
            })?;
            let values = match sw.values {
                Some(values) => {
                    if values.is_empty() {
                        return Err(invalid("sweep.values: must not be empty"));
                    }
                    values
                }
                None => {
                    if base_value <= 0.0 {
                        return Err(invalid(format!(
                            "sweep: a factor grid needs a positive base value, but {} = {base_value}; \
                             list explicit sweep.values instead",
                            sw.parameter
                        )));
                    }
                    let lo = sw.lo_factor.unwrap_or(DEFAULT_SWEEP_LO_FACTOR);
                    let hi = sw.hi_factor.unwrap_or(DEFAULT_SWEEP_HI_FACTOR);
                    let points = sw.points.unwrap_or(DEFAULT_SWEEP_POINTS);
                    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
                        return Err(invalid(format!(
                            "sweep: factor grid needs 0 < lo_factor < hi_factor, got {lo} and {hi}"
                        )));
                    }
                    if points < 2 {
                        return Err(invalid("sweep.points: must be at least 2"));
                    }
                    log_spaced_values(base_value, lo, hi, points)
                }
            };
            let model = if params.fixed_recovery.is_some() {
                Model::FixedRecovery
            } else {
                Model::VariableRecovery
            };
            let spec = SweepSpec {
                parameter: sw.parameter,
                values,
                base: params.clone(),
                model,
            };
            spec.validate()
                .map_err(|e| invalid(format!("sweep: {e}")))?;
            Some(spec)
        }
    };

    Ok(Scenario {
        params,
        decision,
        solver,
        front,
        sweep,
    })
}
