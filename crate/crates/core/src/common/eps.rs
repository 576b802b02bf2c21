use crate::error::{PdlaError, Result};

/// Floating-point slack used by coverage tests, ledger identities and the lemma grids.
///
/// A covering constraint counts as uncovered iff its left-hand side is
/// below `1 - coverage_eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonPolicy {
    pub coverage_eps: f64,
    pub ledger_eps: f64,
    pub lemma_grid_eps: f64,
}

impl Default for EpsilonPolicy {
    fn default() -> Self {
        EpsilonPolicy {
            coverage_eps: 1e-9,
            ledger_eps: 1e-7,
            lemma_grid_eps: 1e-9,
        }
    }
}

impl EpsilonPolicy {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("coverage_eps", self.coverage_eps),
            ("ledger_eps", self.ledger_eps),
            ("lemma_grid_eps", self.lemma_grid_eps),
        ] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(PdlaError::domain(format!("{name} must lie in (0, 1e-3), got {v}")));
            }
        }
        Ok(())
    }

    /// True when a covering sum still needs work.
    #[inline]
    pub fn uncovered(&self, sum: f64) -> bool {
        sum < 1.0 - self.coverage_eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        EpsilonPolicy::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let mut p = EpsilonPolicy {
            ledger_eps: 0.0,
            ..EpsilonPolicy::default()
        };
        assert!(p.validate().is_err());
        p.ledger_eps = 1e-2;
        assert!(p.validate().is_err());
    }

    #[test]
    fn coverage_threshold() {
        let p = EpsilonPolicy::default();
        assert!(p.uncovered(0.5));
        assert!(!p.uncovered(1.0 - 1e-12));
        assert!(!p.uncovered(1.0));
    }
}
