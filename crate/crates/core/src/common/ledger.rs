use crate::error::{PdlaError, Result};

/// Running primal and dual totals of an online primal-dual run.
///
/// Every primal increment is split into the part charged to the prediction
/// (used by consistency arguments) and everything else, so
/// `primal_total == prediction_charged + other` up to rounding.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CostLedger {
    pub primal_total: f64,
    pub dual_total: f64,
    pub prediction_charged: f64,
    pub other: f64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one update's worth of cost. All three increments must be finite and nonnegative.
    pub fn record(&mut self, charged: f64, other: f64, dual: f64) -> Result<()> {
        for v in [charged, other, dual] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(PdlaError::NegativeIncrement(v));
            }
        }
        self.prediction_charged += charged;
        self.other += other;
        self.primal_total += charged + other;
        self.dual_total += dual;
        Ok(())
    }

    /// Whether the decomposition identity holds to within `eps` (relative to the total, floor 1).
    pub fn is_balanced(&self, eps: f64) -> bool {
        let gap = (self.primal_total - self.prediction_charged - self.other).abs();
        gap <= eps * self.primal_total.abs().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates() {
        let mut l = CostLedger::new();
        l.record(1.5, 0.25, 1.0).unwrap();
        l.record(0.0, 2.0, 0.5).unwrap();
        assert_eq!(l.primal_total, 3.75);
        assert_eq!(l.prediction_charged, 1.5);
        assert_eq!(l.other, 2.25);
        assert_eq!(l.dual_total, 1.5);
        assert!(l.is_balanced(1e-12));
    }

    #[test]
    fn rejects_bad_increments() {
        let mut l = CostLedger::new();
        assert!(l.record(-1.0, 0.0, 0.0).is_err());
        assert!(l.record(0.0, f64::NAN, 0.0).is_err());
        assert!(l.record(0.0, 0.0, f64::INFINITY).is_err());
        assert_eq!(l, CostLedger::new());
    }
}
