//! Ski rental with a predicted season length.
//!
//! Every day the skier still lacks a full fractional pair of skis, the algorithm
//! pays the remaining rent `1 - x` and raises `x` by `x/B + 1/((c-1)B)`. The
//! prediction only picks the constant: `c = e(λ)` (buy fast) when it says the
//! season outlasts `B`, and `c = e(1/λ)` (buy slowly) otherwise.
//!
//! `e(z) = (1 + 1/B)^(⌈zB⌉)`, so the buy variable reaches exactly 1 after
//! `⌈λB⌉` or `⌈B/λ⌉` updates.

mod certificate;

pub use certificate::{verify_lower_bound_certificate, LowerBoundCertificate};

use serde::{Deserialize, Serialize};

use crate::common::{check_lambda, BoundCheck, CostLedger, DiscreteExp, EpsilonPolicy, ExponentRounding, SeededRng};
use crate::error::{PdlaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkiInstance {
    /// Actual number of skiing days.
    #[serde(rename = "N")]
    pub n: u64,
    /// Price of buying.
    #[serde(rename = "B")]
    pub b: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkiPrediction {
    pub n_pred: u64,
}

impl SkiInstance {
    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(PdlaError::domain("buy cost B must be at least 1"));
        }
        Ok(())
    }

    pub fn opt(&self) -> f64 {
        self.n.min(self.b) as f64
    }

    pub fn exp(&self) -> DiscreteExp {
        DiscreteExp::new(self.b as f64, ExponentRounding::CeilSnapped)
    }
}

/// Which way the prediction leans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkiBranch {
    /// `n_pred ≥ B`: buy aggressively with `c = e(λ)`, `c' = 1`.
    Buy,
    /// `n_pred < B`: buy cautiously with `c = e(1/λ)`, `c' = λ`.
    Rent,
}

impl SkiBranch {
    pub fn of(inst: &SkiInstance, pred: &SkiPrediction) -> Self {
        if pred.n_pred >= inst.b {
            SkiBranch::Buy
        } else {
            SkiBranch::Rent
        }
    }
}

/// A day on which the algorithm updated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkiDay {
    pub x_before: f64,
    pub x_after: f64,
    /// `f_j = 1 - x_before`.
    pub rent: f64,
    /// `y_j = c'`.
    pub dual: f64,
    /// `f_j + B·(x_after - x_before)`.
    pub cost: f64,
}

/// Trace of one run. Updates always happen on days `1..=days.len()`; later days
/// find `x` already at 1 and cost nothing.
#[derive(Clone, Debug)]
pub struct SkiRun {
    pub days: Vec<SkiDay>,
    pub c: f64,
    pub c_prime: f64,
    pub branch: SkiBranch,
    pub ledger: CostLedger,
}

impl SkiRun {
    pub fn x(&self) -> f64 {
        self.days.last().map_or(0.0, |d| d.x_after)
    }

    pub fn cost(&self) -> f64 {
        self.ledger.primal_total
    }

    pub fn updates(&self) -> usize {
        self.days.len()
    }

    pub fn f(&self) -> Vec<f64> {
        self.days.iter().map(|d| d.rent).collect()
    }

    pub fn y(&self) -> Vec<f64> {
        self.days.iter().map(|d| d.dual).collect()
    }

    pub fn dual_total(&self) -> f64 {
        self.days.iter().map(|d| d.dual).sum()
    }
}

pub fn run_pdla_ski(inst: &SkiInstance, pred: &SkiPrediction, lambda: f64) -> Result<SkiRun> {
    check_lambda(lambda)?;
    inst.validate()?;
    let branch = SkiBranch::of(inst, pred);
    let (z, c_prime) = match branch {
        SkiBranch::Buy => (lambda, 1.0),
        SkiBranch::Rent => (1.0 / lambda, lambda),
    };
    Ok(ski_loop(inst, inst.exp().eval(z), c_prime, branch))
}

/// The prediction-free algorithm: `c = e(1)`, `c' = 1` throughout.
pub fn run_pure_online_ski(inst: &SkiInstance) -> Result<SkiRun> {
    inst.validate()?;
    Ok(ski_loop(inst, inst.exp().eval(1.0), 1.0, SkiBranch::Buy))
}

fn ski_loop(inst: &SkiInstance, c: f64, c_prime: f64, branch: SkiBranch) -> SkiRun {
    let eps = EpsilonPolicy::default();
    let b = inst.b as f64;
    let step = 1.0 / ((c - 1.0) * b);
    let mut run = SkiRun {
        days: Vec::new(),
        c,
        c_prime,
        branch,
        ledger: CostLedger::new(),
    };
    let mut x = 0.0;
    for _ in 0..inst.n {
        if !eps.uncovered(x) {
            break;
        }
        let rent = 1.0 - x;
        let x_after = (1.0 + 1.0 / b) * x + step;
        let cost = rent + b * (x_after - x);
        run.days.push(SkiDay {
            x_before: x,
            x_after,
            rent,
            dual: c_prime,
            cost,
        });
        // every update is charged to the prediction's cost
        run.ledger
            .record(cost, 0.0, c_prime)
            .expect("ski increments are positive and finite");
        x = x_after;
    }
    run
}

/// Bound values for one instance, in both the literal and the finite-`B` form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkiBounds {
    /// `B` when `n_pred ≥ B`, else `N`.
    pub s_cost: f64,
    pub opt: f64,
    /// `(⌈λB⌉/B)/(1 - e(-λ)) · s_cost`.
    pub consistency: f64,
    /// `(1 + c'/B) · max(1/(1-e(-λ)), (1/λ)/(1-e(-1/λ))) · opt`.
    pub robustness: f64,
    /// `λ/(1 - e(-λ)) · s_cost`, exact when `λB` is an integer.
    pub literal_consistency: f64,
    /// `1/(1 - e(-λ)) · opt`, exact when `B/λ` is an integer.
    pub literal_robustness: f64,
}

impl SkiBounds {
    pub fn best(&self) -> f64 {
        self.consistency.min(self.robustness)
    }
}

/// Cost bounds at finite `B`.
///
/// The plain statement `min(λ/(1-e(-λ))·S, 1/(1-e(-λ))·OPT)` assumes `λB` and
/// `B/λ` are integers. With ceilings the buy branch makes `⌈λB⌉` updates instead of
/// `λB`, and the dual may reach `B + c'` instead of `B`; `consistency` and
/// `robustness` carry those two corrections. The `max` in `robustness` is the
/// largest per-update `ΔP/ΔD`, since the snapped exponents can flip the order of
/// the two terms.
pub fn ski_bounds(inst: &SkiInstance, pred: &SkiPrediction, lambda: f64) -> Result<SkiBounds> {
    check_lambda(lambda)?;
    inst.validate()?;
    let e = inst.exp();
    let b = inst.b as f64;
    let branch = SkiBranch::of(inst, pred);
    let s_cost = match branch {
        SkiBranch::Buy => b,
        SkiBranch::Rent => inst.n as f64,
    };
    let c_prime = match branch {
        SkiBranch::Buy => 1.0,
        SkiBranch::Rent => lambda,
    };
    let opt = inst.opt();
    let big = e.update_cost(lambda);
    let small = e.update_cost(1.0 / lambda);
    let ratio = big.max(small / lambda);
    Ok(SkiBounds {
        s_cost,
        opt,
        consistency: e.exponent(lambda) / b * big * s_cost,
        robustness: (1.0 + c_prime / b) * ratio * opt,
        literal_consistency: lambda * big * s_cost,
        literal_robustness: big * opt,
    })
}

/// Checks made after a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkiChecks {
    /// `Σ y_j` against `B + c'`.
    pub dual: BoundCheck,
    /// Update count against `⌈λB⌉` (buy branch) or `min(N, ⌈B/λ⌉)`.
    pub updates: BoundCheck,
    /// Largest relative gap between a day's cost and `1/(1 - e(-z))`.
    pub update_cost: BoundCheck,
    /// Every processed day satisfies `x + f_j ≥ 1` and `x` never drops.
    pub feasible: bool,
}

impl SkiChecks {
    pub fn all_ok(&self) -> bool {
        self.dual.ok && self.updates.ok && self.update_cost.ok && self.feasible
    }
}

pub fn check_ski_run(run: &SkiRun, inst: &SkiInstance, lambda: f64) -> SkiChecks {
    let eps = EpsilonPolicy::default();
    let e = inst.exp();
    let b = inst.b as f64;
    let (z, cap) = match run.branch {
        SkiBranch::Buy => (lambda, e.exponent(lambda)),
        SkiBranch::Rent => (1.0 / lambda, e.exponent(1.0 / lambda).min(inst.n as f64)),
    };
    let want = e.update_cost(z);
    let worst_cost_gap = run
        .days
        .iter()
        .map(|d| (d.cost - want).abs() / want)
        .fold(0.0, f64::max);
    let mut prev = 0.0;
    let mut feasible = true;
    for d in &run.days {
        feasible &= d.x_after > d.x_before && d.x_before >= prev;
        feasible &= d.x_before + d.rent >= 1.0 - eps.coverage_eps;
        prev = d.x_after;
    }
    feasible &= run.updates() as u64 == inst.n || !eps.uncovered(run.x());
    SkiChecks {
        dual: BoundCheck::absolute(run.dual_total(), b + run.c_prime, 1e-9),
        updates: BoundCheck::absolute(run.updates() as f64, cap, 0.0),
        update_cost: BoundCheck::absolute(worst_cost_gap, 0.0, 1e-12),
        feasible,
    }
}

/// Samples one integral strategy from the fractional run.
///
/// Draw `p ~ U[0, 1)`. The skier rents on every update day with `x_before ≤ p`
/// and buys at the end of the day on which `x` passes `p`. Renting on day `j`
/// happens with probability `f_j`, buying with probability `x`, so the expected
/// cost equals the fractional cost.
pub fn round_ski(run: &SkiRun, inst: &SkiInstance, rng: &mut SeededRng) -> f64 {
    let p = rng.uniform();
    let b = inst.b as f64;
    let mut cost = 0.0;
    for d in &run.days {
        if p < d.x_before {
            return cost;
        }
        cost += 1.0;
        if p < d.x_after {
            return cost + b;
        }
    }
    // never crossed: keep renting for the rest of the season
    cost + (inst.n - run.days.len() as u64) as f64
}
