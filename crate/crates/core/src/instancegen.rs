//! Random TCP instances, the replacement-rate noise model, and predictions built
//! from a perturbed copy of the instance.

use rand::Rng;
use rand_distr::{Distribution, Pareto, Poisson};
use serde::{Deserialize, Serialize};

use crate::common::SeededRng;
use crate::error::{PdlaError, Result};
use crate::tcpack::{offline_opt_tcp, TcpInstance, TcpPrediction};

/// Per-step packet count distribution. Every default has mean 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Poisson {
        mean: f64,
    },
    /// Lomax draw rounded to the nearest integer.
    Lomax {
        shape: f64,
        scale: f64,
    },
    /// `X_1 ~ P(μ)`, then `X_i ~ P(X_{i-1})` up to `X_n`.
    IteratedPoisson {
        mu: f64,
        n: u32,
    },
}

impl DistributionSpec {
    pub const POISSON: Self = DistributionSpec::Poisson { mean: 1.0 };
    pub const LOMAX: Self = DistributionSpec::Lomax { shape: 2.0, scale: 1.0 };
    pub const ITERATED_POISSON: Self = DistributionSpec::IteratedPoisson { mu: 1.0, n: 10 };

    /// Parses the CLI names `poisson`, `pareto` and `iterated-poisson` into the defaults.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "poisson" => Ok(Self::POISSON),
            "pareto" | "lomax" => Ok(Self::LOMAX),
            "iterated-poisson" => Ok(Self::ITERATED_POISSON),
            _ => Err(PdlaError::domain(format!(
                "unknown distribution {name:?}; expected poisson, pareto or iterated-poisson"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistributionSpec::Poisson { .. } => "poisson",
            DistributionSpec::Lomax { .. } => "pareto",
            DistributionSpec::IteratedPoisson { .. } => "iterated-poisson",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DistributionSpec::Poisson { mean } => mean.is_finite() && mean >= 0.0,
            DistributionSpec::Lomax { shape, scale } => {
                shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()
            }
            DistributionSpec::IteratedPoisson { mu, n } => mu.is_finite() && mu >= 0.0 && n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(PdlaError::domain(format!("invalid distribution parameters {self:?}")))
        }
    }

    pub fn sample(&self, rng: &mut SeededRng) -> u64 {
        match *self {
            DistributionSpec::Poisson { mean } => poisson(mean, rng),
            DistributionSpec::Lomax { shape, scale } => {
                let x = Pareto::new(scale, shape).expect("validated").sample(rng) - scale;
                x.round().min(u32::MAX as f64) as u64
            }
            DistributionSpec::IteratedPoisson { mu, n } => {
                let mut x = poisson(mu, rng);
                for _ in 1..n {
                    x = poisson(x as f64, rng);
                }
                x
            }
        }
    }
}

fn poisson(mean: f64, rng: &mut SeededRng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// `length` i.i.d. counts.
pub fn generate(spec: &DistributionSpec, length: usize, rng: &mut SeededRng) -> Result<Vec<u64>> {
    spec.validate()?;
    Ok((0..length).map(|_| spec.sample(rng)).collect())
}

/// Each entry is zeroed with probability `p`, then independently gets a fresh
/// draw added with probability `p`.
pub fn perturb(counts: &[u64], p: f64, spec: &DistributionSpec, rng: &mut SeededRng) -> Result<Vec<u64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PdlaError::domain(format!(
            "replacement rate must lie in [0, 1], got {p}"
        )));
    }
    spec.validate()?;
    Ok(counts
        .iter()
        .map(|&c| {
            let mut v = if rng.random_bool(p) { 0 } else { c };
            if rng.random_bool(p) {
                v += spec.sample(rng);
            }
            v
        })
        .collect())
}

/// An optimal schedule for `perturbed`, plus an ack at the last step of `real`
/// when some real packet would otherwise never be acked.
pub fn make_prediction(perturbed: &TcpInstance, real: &TcpInstance) -> Result<TcpPrediction> {
    let (_, mut acks) = offline_opt_tcp(perturbed)?;
    let last_arrival = real.counts.iter().rposition(|&c| c > 0);
    let horizon = real.horizon().saturating_sub(1);
    let needed = match (acks.last(), last_arrival) {
        (None, _) => true,
        (Some(&a), Some(t)) => a < t,
        (Some(_), None) => false,
    };
    if needed {
        match acks.last() {
            Some(&a) if a >= horizon => {}
            _ => acks.push(horizon.max(last_arrival.unwrap_or(0))),
        }
    }
    Ok(TcpPrediction { acks })
}

/// Small random instances for oracle cross-checks and invariant suites.
pub mod small {
    use rand::seq::index::sample;
    use rand::Rng;

    use crate::bahncard::{BahncardInstance, BahncardPrediction};
    use crate::common::SeededRng;
    use crate::setcover::{CoverInstance, CoverPrediction, CoverSet};
    use crate::skirental::{SkiInstance, SkiPrediction};
    use crate::tcpack::{TcpInstance, TcpPrediction};

    /// At most 12 distinct arrival steps over at most 20 steps.
    pub fn tcp(rng: &mut SeededRng) -> (TcpInstance, TcpPrediction) {
        let len = rng.random_range(1..=20usize);
        let d = rng.random_range(1..=20u64);
        let busy = rng.random_range(0..=len.min(12));
        let mut counts = vec![0u64; len];
        for t in sample(rng, len, busy) {
            counts[t] = rng.random_range(1..=3);
        }
        let span = len + 5;
        let k = rng.random_range(0..=span.min(6));
        let mut acks = sample(rng, span, k).into_vec();
        acks.sort_unstable();
        (TcpInstance { d, counts }, TcpPrediction { acks })
    }

    /// At most 12 trips, `β < 1`.
    pub fn bahncard(rng: &mut SeededRng) -> (BahncardInstance, BahncardPrediction) {
        let n = rng.random_range(0..=12usize);
        let span = rng.random_range(1..=30i64);
        let mut trips: Vec<i64> = (0..n).map(|_| rng.random_range(0..span)).collect();
        trips.sort_unstable();
        let inst = BahncardInstance {
            trips,
            b: rng.random_range(0.5..8.0),
            beta: if rng.random_bool(0.2) {
                0.0
            } else {
                rng.random_range(0.0..0.9)
            },
            t: rng.random_range(1..=8),
        };
        let k = rng.random_range(0..=3);
        let cards = (0..k).map(|_| rng.random_range(-2..span + 2)).collect();
        (inst, BahncardPrediction { cards })
    }

    /// At most 10 sets over at most 8 elements; every element lies in some set.
    pub fn setcover(rng: &mut SeededRng) -> (CoverInstance, CoverPrediction) {
        let n = rng.random_range(1..=8usize);
        let m = rng.random_range(1..=10usize);
        let mut sets: Vec<CoverSet> = (0..m)
            .map(|_| {
                let size = rng.random_range(1..=n);
                let mut elems = sample(rng, n, size).into_vec();
                elems.sort_unstable();
                CoverSet {
                    w: if rng.random_bool(0.5) {
                        rng.random_range(1..=10) as f64
                    } else {
                        rng.random_range(1.0..10.0)
                    },
                    elems,
                }
            })
            .collect();
        for e in 0..n {
            if !sets.iter().any(|s| s.elems.contains(&e)) {
                let s = &mut sets[rng.random_range(0..m)];
                s.elems.push(e);
                s.elems.sort_unstable();
            }
        }
        let arrivals = (0..rng.random_range(0..=12)).map(|_| rng.random_range(0..n)).collect();
        let k = rng.random_range(0..=m);
        let mut pred = sample(rng, m, k).into_vec();
        pred.sort_unstable();
        (CoverInstance { n, sets, arrivals }, CoverPrediction { sets: pred })
    }

    pub fn ski(rng: &mut SeededRng) -> (SkiInstance, SkiPrediction) {
        let b = rng.random_range(1..=60u64);
        let inst = SkiInstance {
            n: rng.random_range(0..=3 * b),
            b,
        };
        (
            inst,
            SkiPrediction {
                n_pred: rng.random_range(0..=3 * b),
            },
        )
    }
}
