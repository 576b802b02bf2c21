/// How the exponent `z·D` of a discretized exponential is turned into a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentRounding {
    /// Use `z·D` as is.
    Exact,
    /// Round `|z|·D` up to an integer, treating values within `1e-9` (relative)
    /// of an integer as that integer.
    CeilSnapped,
}

/// The discretized exponential `e(z) = (1 + 1/D)^(z·D)`, which tends to `exp(z)`
/// as `D` grows.
///
/// `D` is the buy cost `B` for ski rental, `B/(1-β)` for the Bahncard problem and
/// the subdivision `d` for TCP acknowledgement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscreteExp {
    scale: f64,
    log_step: f64,
    rounding: ExponentRounding,
}

impl DiscreteExp {
    pub fn new(scale: f64, rounding: ExponentRounding) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "scale must be positive and finite");
        DiscreteExp {
            scale,
            log_step: (1.0 / scale).ln_1p(),
            rounding,
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rounding(&self) -> ExponentRounding {
        self.rounding
    }

    /// The power applied to `1 + 1/D`. Negative `z` gives the reciprocal.
    pub fn exponent(&self, z: f64) -> f64 {
        let raw = z.abs() * self.scale;
        let k = match self.rounding {
            ExponentRounding::Exact => raw,
            ExponentRounding::CeilSnapped => snapped_ceil(raw),
        };
        k.copysign(z)
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.exponent(z) * self.log_step).exp()
    }

    /// `1 / (1 - e(-z))`, the cost of one update made with constant `e(z)`,
    /// computed without cancellation.
    pub fn update_cost(&self, z: f64) -> f64 {
        -1.0 / (-self.exponent(z) * self.log_step).exp_m1()
    }
}

/// `ceil(v)`, except that values within `1e-9` (relative) of an integer snap to it.
///
/// Products like `0.6 * 10.0` land a hair above `6`; a plain `ceil` would make that 7.
pub fn snapped_ceil(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r
    } else {
        v.ceil()
    }
}
