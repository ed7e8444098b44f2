//! System-level parameters of the two-depot remanufacturing loop.
//!
//! A *supply depot* serves two demand streams: `demand_new` for newly
//! procured items and `demand_repaired` for remanufactured ones. Used items
//! return from both markets; a fraction of the primary-market returns passes
//! inspection and a chosen fraction of the secondary-market returns is
//! recovered. Accepted returns accumulate at a *repair depot* and are shipped
//! back to the supply depot in batches.

use crate::error::ModelError;

/// Immutable description of one problem instance: demand rates, return and
/// acceptance fractions, holding / setup / waste cost rates, and (optionally)
/// a fixed recovery rate that pins the variable-recovery decision coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParameters {
    /// Demand rate of newly procured items (units/time). Must be > 0.
    pub demand_new: f64,
    /// Demand rate of repaired items (units/time). Must be > 0.
    pub demand_repaired: f64,
    /// Fraction of `demand_new` that returns from the primary market
    /// (0 < value ≤ 1).
    pub return_fraction_new: f64,
    /// Fraction of primary-market returns accepted after inspection
    /// (0 ≤ value ≤ 1).
    pub acceptance_fraction: f64,
    /// Fraction of `demand_repaired` that returns from the secondary market
    /// (0 ≤ value ≤ 1).
    pub return_fraction_repaired: f64,
    /// Holding cost rate at the supply depot (money/unit/time, ≥ 0).
    pub holding_cost_supply: f64,
    /// Holding cost rate at the repair depot (money/unit/time, ≥ 0).
    pub holding_cost_repair: f64,
    /// Setup cost per procurement batch (money/setup, ≥ 0).
    pub setup_cost_supply: f64,
    /// Setup cost per repair batch (money/setup, ≥ 0).
    pub setup_cost_repair: f64,
    /// Disposal cost per rejected or unrecovered unit (money/unit, ≥ 0).
    pub waste_unit_cost: f64,
    /// Fixed recovery rate (0 ≤ value ≤ 1). When present, the recovery rate
    /// is a parameter rather than a decision coordinate.
    pub fixed_recovery: Option<f64>,
}

impl SystemParameters {
    /// Checks every documented range requirement, returning the first
    /// violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("demand_new", self.demand_new),
            ("demand_repaired", self.demand_repaired),
        ];
        for (name, value) in positive {
            if value <= 0.0 || !value.is_finite() {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    requirement: "must be finite and > 0",
                });
            }
        }
        if !(self.return_fraction_new > 0.0 && self.return_fraction_new <= 1.0) {
            return Err(ModelError::InvalidParameter {
                name: "return_fraction_new",
                value: self.return_fraction_new,
                requirement: "must satisfy 0 < value <= 1",
            });
        }
        let unit = [
            ("acceptance_fraction", self.acceptance_fraction),
            ("return_fraction_repaired", self.return_fraction_repaired),
        ];
        for (name, value) in unit {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    requirement: "must satisfy 0 <= value <= 1",
                });
            }
        }
        let nonnegative = [
            ("holding_cost_supply", self.holding_cost_supply),
            ("holding_cost_repair", self.holding_cost_repair),
            ("setup_cost_supply", self.setup_cost_supply),
            ("setup_cost_repair", self.setup_cost_repair),
            ("waste_unit_cost", self.waste_unit_cost),
        ];
        for (name, value) in nonnegative {
            if value < 0.0 || !value.is_finite() {
                return Err(ModelError::InvalidParameter {
                    name,
                    value,
                    requirement: "must be finite and >= 0",
                });
            }
        }
        if let Some(s) = self.fixed_recovery {
            if !(0.0..=1.0).contains(&s) {
                return Err(ModelError::InvalidParameter {
                    name: "fixed_recovery",
                    value: s,
                    requirement: "must satisfy 0 <= value <= 1",
                });
            }
        }
        Ok(())
    }

    /// Validates, additionally requiring that the recovery rate is
    /// identifiable when it acts as a decision coordinate: with
    /// `return_fraction_repaired * demand_repaired = 0` the rate has no
    /// effect on any objective and variable-recovery searches reject the
    /// instance.
    pub fn validate_for_variable_recovery(&self) -> Result<(), ModelError> {
        self.validate()?;
        if self.secondary_return_rate() <= 0.0 {
            return Err(ModelError::UnidentifiableRecovery);
        }
        Ok(())
    }

    /// Accepted return inflow rate from the primary market (units/time):
    /// `acceptance_fraction * return_fraction_new * demand_new`.
    pub fn primary_inflow(&self) -> f64 {
        self.acceptance_fraction * self.return_fraction_new * self.demand_new
    }

    /// Secondary-market return rate before recovery selection (units/time):
    /// `return_fraction_repaired * demand_repaired`.
    pub fn secondary_return_rate(&self) -> f64 {
        self.return_fraction_repaired * self.demand_repaired
    }

    /// Recovered inflow rate from the secondary market at recovery rate `s`
    /// (units/time).
    pub fn secondary_inflow(&self, recovery: f64) -> f64 {
        recovery * self.secondary_return_rate()
    }

    /// Smallest recovery rate at which total repair inflow covers repaired
    /// demand, clamped to [0, 1]; `None` when even full recovery cannot cover
    /// it (the variable-recovery feasible region is empty).
    pub fn min_covering_recovery(&self) -> Option<f64> {
        let deficit = self.demand_repaired - self.primary_inflow();
        if deficit <= 0.0 {
            return Some(0.0);
        }
        let rate = self.secondary_return_rate();
        if rate <= 0.0 {
            return None;
        }
        let s_min = deficit / rate;
        (s_min <= 1.0).then_some(s_min)
    }

    /// Returns a copy with one named field replaced; used by parameter
    /// sweeps. Unknown names yield `None`.
    pub fn with_field(&self, name: &str, value: f64) -> Option<Self> {
        let mut out = self.clone();
        match name {
            "demand_new" => out.demand_new = value,
            "demand_repaired" => out.demand_repaired = value,
            "return_fraction_new" => out.return_fraction_new = value,
            "acceptance_fraction" => out.acceptance_fraction = value,
            "return_fraction_repaired" => out.return_fraction_repaired = value,
            "holding_cost_supply" => out.holding_cost_supply = value,
            "holding_cost_repair" => out.holding_cost_repair = value,
            "setup_cost_supply" => out.setup_cost_supply = value,
            "setup_cost_repair" => out.setup_cost_repair = value,
            "waste_unit_cost" => out.waste_unit_cost = value,
            _ => return None,
        }
        Some(out)
    }

    /// Reads one named field; the counterpart of [`Self::with_field`].
    pub fn field(&self, name: &str) -> Option<f64> {
        Some(match name {
            "demand_new" => self.demand_new,
            "demand_repaired" => self.demand_repaired,
            "return_fraction_new" => self.return_fraction_new,
            "acceptance_fraction" => self.acceptance_fraction,
            "return_fraction_repaired" => self.return_fraction_repaired,
            "holding_cost_supply" => self.holding_cost_supply,
            "holding_cost_repair" => self.holding_cost_repair,
            "setup_cost_supply" => self.setup_cost_supply,
            "setup_cost_repair" => self.setup_cost_repair,
            "waste_unit_cost" => self.waste_unit_cost,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParameters {
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

    #[test]
    fn valid_instance_passes() {
        base().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_demand() {
        let mut p = base();
        p.demand_new = 0.0;
        assert!(matches!(
            p.validate(),
            Err(ModelError::InvalidParameter {
                name: "demand_new",
                ..
            })
        ));
    }

    #[test]
    fn rejects_out_of_range_fraction() {
        let mut p = base();
        p.acceptance_fraction = 1.5;
        assert!(p.validate().is_err());
        p.acceptance_fraction = -0.1;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_unidentifiable_recovery() {
        let mut p = base();
        p.return_fraction_repaired = 0.0;
        p.fixed_recovery = None;
        assert_eq!(
            p.validate_for_variable_recovery(),
            Err(ModelError::UnidentifiableRecovery)
        );
        // The fixed-recovery reading of the same instance stays permitted.
        assert!(p.validate().is_ok());
    }

    #[test]
    fn covering_recovery_boundary_cases() {
        // Primary inflow alone covers repaired demand.
        let mut p = base();
        p.demand_new = 200.0;
        p.demand_repaired = 50.0;
        p.return_fraction_new = 0.3;
        p.acceptance_fraction = 0.9;
        assert_eq!(p.min_covering_recovery(), Some(0.0));

        // Needs s = (2500 - 960) / 2000 = 0.77 exactly.
        let q = SystemParameters {
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
        };
        let s_min = q.min_covering_recovery().unwrap();
        assert!((s_min - 0.77).abs() < 1e-12);

        // Even full recovery cannot cover demand.
        let mut r = base();
        r.demand_repaired = 1000.0;
        assert_eq!(r.min_covering_recovery(), None);
    }

    #[test]
    fn field_round_trip() {
        let p = base();
        for name in [
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
        ] {
            let v = p.field(name).unwrap();
            let q = p.with_field(name, v + 1.0).unwrap();
            assert_eq!(q.field(name).unwrap(), v + 1.0);
        }
        assert!(p.field("no_such_field").is_none());
        assert!(p.with_field("no_such_field", 1.0).is_none());
    }
}
