//! Building blocks shared by every problem module.

mod eps;
mod expo;
mod ledger;
mod rng;
mod store;

pub use eps::EpsilonPolicy;
pub use expo::{snapped_ceil, DiscreteExp, ExponentRounding};
pub use ledger::CostLedger;
pub use rng::{mix_seed, SeededRng};
pub use store::{MonotoneVarStore, VarUpdate};

use crate::error::{PdlaError, Result};

/// Rejects robustness parameters outside `(0, 1]`.
pub fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(PdlaError::domain(format!("lambda must lie in (0, 1], got {lambda}")))
    }
}

/// One inequality checked after a run: `value ≤ limit` up to a tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub value: f64,
    pub limit: f64,
    pub ok: bool,
}

impl BoundCheck {
    /// `ok` when `value ≤ limit + tol`, with `tol` absolute.
    pub fn absolute(value: f64, limit: f64, tol: f64) -> Self {
        BoundCheck {
            value,
            limit,
            ok: value <= limit + tol,
        }
    }

    /// `ok` when `value ≤ limit·(1 + rel)`, falling back to an absolute `rel` near zero.
    pub fn relative(value: f64, limit: f64, rel: f64) -> Self {
        BoundCheck {
            value,
            limit,
            ok: value <= limit + rel * limit.abs().max(1.0),
        }
    }
}
