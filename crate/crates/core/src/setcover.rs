//! Online fractional weighted set cover.
//!
//! Elements arrive one at a time. While an arrived element `e` is not fractionally
//! covered, every set `S ∋ e` grows multiplicatively by `1 + 1/w_S` plus an additive
//! term. Without advice the additive term is `1/(w_S |F(e)|)`, spreading mass
//! uniformly over the covering sets. With a predicted cover `A` a `λ` share is still
//! spread uniformly and the remaining `1 - λ` goes to the sets of `F(e) ∩ A`. Elements
//! the prediction leaves uncovered fall back to the plain rule.

use serde::{Deserialize, Serialize};

use crate::common::{check_lambda, BoundCheck, CostLedger, EpsilonPolicy, MonotoneVarStore};
use crate::error::{PdlaError, Result};

/// Safety net on while-loop iterations per arrival. Each iteration adds at least
/// `λ/d` to the element's covering sum, so valid inputs never get close.
pub const ITERATION_CAP: usize = 1_000_000;

/// Largest family the exact offline optimum accepts.
pub const MAX_OPT_SETS: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub w: f64,
    pub elems: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverInstance {
    pub n: usize,
    pub sets: Vec<CoverSet>,
    pub arrivals: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverPrediction {
    pub sets: Vec<usize>,
}

impl CoverInstance {
    /// Checks weights and element ids. Arrivals with no covering set are reported
    /// when the run reaches them, not here.
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.sets.iter().enumerate() {
            if !(s.w.is_finite() && s.w >= 1.0) {
                return Err(PdlaError::domain(format!(
                    "set {i} has weight {}, weights must be at least 1",
                    s.w
                )));
            }
            if let Some(&e) = s.elems.iter().find(|&&e| e >= self.n) {
                return Err(PdlaError::domain(format!(
                    "set {i} names element {e} but n = {}",
                    self.n
                )));
            }
        }
        if let Some(&e) = self.arrivals.iter().find(|&&e| e >= self.n) {
            return Err(PdlaError::domain(format!(
                "arrival {e} is outside the universe of {} elements",
                self.n
            )));
        }
        Ok(())
    }

    /// `F(e)` for every element, with set indices ascending and duplicates dropped.
    pub fn covering_sets(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.n];
        for (i, s) in self.sets.iter().enumerate() {
            for &e in &s.elems {
                if f[e].last() != Some(&i) {
                    f[e].push(i);
                }
            }
        }
        f
    }

    /// `d`, the largest `|F(e)|` over arrived elements; 0 without arrivals.
    pub fn max_degree(&self) -> usize {
        let f = self.covering_sets();
        self.arrivals.iter().map(|&e| f[e].len()).max().unwrap_or(0)
    }

    /// Arrived elements without repeats, in first-arrival order.
    pub fn distinct_arrivals(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        self.arrivals
            .iter()
            .copied()
            .filter(|&e| !std::mem::replace(&mut seen[e], true))
            .collect()
    }
}

impl CoverPrediction {
    pub fn validate(&self, inst: &CoverInstance) -> Result<()> {
        match self.sets.iter().find(|&&s| s >= inst.sets.len()) {
            Some(s) => Err(PdlaError::domain(format!(
                "prediction names set {s} but the instance has {} sets",
                inst.sets.len()
            ))),
            None => Ok(()),
        }
    }

    fn membership(&self, m: usize) -> Vec<bool> {
        let mut in_a = vec![false; m];
        for &s in &self.sets {
            in_a[s] = true;
        }
        in_a
    }
}

/// One pass of the while-loop for an arrived element.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverIteration {
    pub element: usize,
    /// Whether the prediction covers the element, i.e. `|F(e) ∩ A| ≥ 1`.
    pub aided: bool,
    /// `Σ_{S ∈ F(e)} x_S` before the update.
    pub x_old_sum: f64,
    /// Cost increase on sets in `A` (`ΔP_c`); zero for unaided iterations.
    pub charged: f64,
    /// Cost increase on the remaining sets (`ΔP_u`, or all of `ΔP` when unaided).
    pub uncharged: f64,
}

impl CoverIteration {
    pub fn primal(&self) -> f64 {
        self.charged + self.uncharged
    }
}

#[derive(Clone, Debug)]
pub struct CoverRun {
    pub x: MonotoneVarStore,
    pub y: Vec<f64>,
    pub ledger: CostLedger,
    /// Cost spent on elements the prediction does not cover.
    pub cost_uncovered_part: f64,
    pub iterations: Vec<CoverIteration>,
    /// `d` of the instance.
    pub max_degree: usize,
}

impl CoverRun {
    pub fn cost(&self) -> f64 {
        self.ledger.primal_total
    }

    /// The primal objective recomputed from the final `x`.
    pub fn objective(&self, inst: &CoverInstance) -> f64 {
        inst.sets.iter().enumerate().map(|(i, s)| s.w * self.x.get(i)).sum()
    }
}

/// Runs the prediction-guided algorithm with the default tolerances.
pub fn run_pdla_setcover(inst: &CoverInstance, pred: &CoverPrediction, lambda: f64) -> Result<CoverRun> {
    run_pdla_setcover_with(inst, pred, lambda, &EpsilonPolicy::default())
}

pub fn run_pdla_setcover_with(
    inst: &CoverInstance,
    pred: &CoverPrediction,
    lambda: f64,
    eps: &EpsilonPolicy,
) -> Result<CoverRun> {
    check_lambda(lambda)?;
    inst.validate()?;
    pred.validate(inst)?;
    let m = inst.sets.len();
    let f = inst.covering_sets();
    let in_a = pred.membership(m);
    let mut run = empty_run(inst, &f);

    for &e in &inst.arrivals {
        let fe = &f[e];
        if fe.is_empty() {
            return Err(PdlaError::InfeasibleElement { element: e });
        }
        let k = fe.iter().filter(|&&s| in_a[s]).count();
        let deg = fe.len() as f64;
        let mut loops = 0usize;
        loop {
            let x_old_sum: f64 = fe.iter().map(|&s| run.x.get(s)).sum();
            if !eps.uncovered(x_old_sum) {
                break;
            }
            loops += 1;
            if loops > ITERATION_CAP {
                return Err(PdlaError::IterationCap {
                    cap: ITERATION_CAP,
                    context: format!("covering element {e}"),
                });
            }
            let (mut charged, mut uncharged) = (0.0, 0.0);
            for &s in fe {
                let w = inst.sets[s].w;
                let old = run.x.get(s);
                let new = if k == 0 {
                    old * (1.0 + 1.0 / w) + 1.0 / (w * deg)
                } else if in_a[s] {
                    old * (1.0 + 1.0 / w) + lambda / (w * deg) + (1.0 - lambda) / (w * k as f64)
                } else {
                    old * (1.0 + 1.0 / w) + lambda / (w * deg)
                };
                run.x.set(s, new)?;
                let dp = w * (new - old);
                if k > 0 && in_a[s] {
                    charged += dp;
                } else {
                    uncharged += dp;
                }
            }
            run.y[e] += 1.0;
            run.ledger.record(charged, uncharged, 1.0)?;
            if k == 0 {
                run.cost_uncovered_part += uncharged;
            }
            run.iterations.push(CoverIteration {
                element: e,
                aided: k > 0,
                x_old_sum,
                charged,
                uncharged,
            });
        }
    }
    Ok(run)
}

/// The advice-free online algorithm, written out on its own as a baseline.
pub fn run_pure_online_setcover(inst: &CoverInstance) -> Result<CoverRun> {
    let eps = EpsilonPolicy::default();
    inst.validate()?;
    let f = inst.covering_sets();
    let mut run = empty_run(inst, &f);
    for &e in &inst.arrivals {
        let fe = &f[e];
        if fe.is_empty() {
            return Err(PdlaError::InfeasibleElement { element: e });
        }
        let mut loops = 0usize;
        loop {
            let x_old_sum: f64 = fe.iter().map(|&s| run.x.get(s)).sum();
            if !eps.uncovered(x_old_sum) {
                break;
            }
            loops += 1;
            if loops > ITERATION_CAP {
                return Err(PdlaError::IterationCap {
                    cap: ITERATION_CAP,
                    context: format!("covering element {e}"),
                });
            }
            let mut dp_total = 0.0;
            for &s in fe {
                let w = inst.sets[s].w;
                let old = run.x.get(s);
                let new = old * (1.0 + 1.0 / w) + 1.0 / (w * fe.len() as f64);
                run.x.set(s, new)?;
                dp_total += w * (new - old);
            }
            run.y[e] += 1.0;
            run.ledger.record(0.0, dp_total, 1.0)?;
            run.cost_uncovered_part += dp_total;
            run.iterations.push(CoverIteration {
                element: e,
                aided: false,
                x_old_sum,
                charged: 0.0,
                uncharged: dp_total,
            });
        }
    }
    Ok(run)
}

fn empty_run(inst: &CoverInstance, f: &[Vec<usize>]) -> CoverRun {
    CoverRun {
        x: MonotoneVarStore::with_len(inst.sets.len()),
        y: vec![0.0; inst.n],
        ledger: CostLedger::new(),
        cost_uncovered_part: 0.0,
        iterations: Vec::new(),
        max_degree: inst.arrivals.iter().map(|&e| f[e].len()).max().unwrap_or(0),
    }
}

/// `log₂(3d/λ + 1)`, the factor by which the dual may overshoot.
pub fn dual_scaling_limit(d: usize, lambda: f64) -> f64 {
    (3.0 * d as f64 / lambda + 1.0).log2()
}

/// Largest `Σ_{e ∈ S} y_e / w_S` over all sets against [`dual_scaling_limit`].
pub fn check_cover_dual_feasibility(run: &CoverRun, inst: &CoverInstance, lambda: f64) -> BoundCheck {
    let worst = inst
        .sets
        .iter()
        .map(|s| {
            let mut members = s.elems.clone();
            members.sort_unstable();
            members.dedup();
            members.iter().map(|&e| run.y[e]).sum::<f64>() / s.w
        })
        .fold(0.0, f64::max);
    BoundCheck::absolute(worst, dual_scaling_limit(run.max_degree, lambda), 1e-9)
}

/// `(1 + λ)/(λ/d + 1 - λ)`, the bound on `ΔP_u / ΔP_c` in every aided iteration.
pub fn consistency_factor(d: usize, lambda: f64) -> f64 {
    (1.0 + lambda) / (lambda / d.max(1) as f64 + 1.0 - lambda)
}

/// Per-iteration checks from the charging argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationChecks {
    /// Largest `ΔP/ΔD` against 2 (`ΔD = 1` per iteration).
    pub primal_dual_ratio: BoundCheck,
    /// Largest `ΔP_u - factor·ΔP_c` over aided iterations, against 0.
    pub charging: BoundCheck,
    /// Largest `|ΔP - (Σ x_old + 1)|`, against 0.
    pub exact_increment: BoundCheck,
}

pub fn check_cover_iterations(run: &CoverRun, lambda: f64) -> IterationChecks {
    let factor = consistency_factor(run.max_degree, lambda);
    let mut ratio: f64 = 0.0;
    let mut charging = f64::NEG_INFINITY;
    let mut exact: f64 = 0.0;
    for it in &run.iterations {
        ratio = ratio.max(it.primal());
        exact = exact.max((it.primal() - (it.x_old_sum + 1.0)).abs());
        if it.aided {
            charging = charging.max(it.uncharged - factor * it.charged);
        }
    }
    if charging == f64::NEG_INFINITY {
        charging = 0.0;
    }
    IterationChecks {
        primal_dual_ratio: BoundCheck::absolute(ratio, 2.0, 1e-9),
        charging: BoundCheck::absolute(charging, 0.0, 1e-9),
        exact_increment: BoundCheck::absolute(exact, 0.0, 1e-9),
    }
}

/// `S(A, I)` counting only predicted sets that touch an arrived element, plus
/// whether the prediction covers every arrival.
pub fn prediction_cost_setcover(inst: &CoverInstance, pred: &CoverPrediction) -> (f64, bool) {
    let mut arrived = vec![false; inst.n];
    for &e in &inst.arrivals {
        arrived[e] = true;
    }
    let mut covered = vec![false; inst.n];
    let mut cost = 0.0;
    let mut chosen = pred.sets.clone();
    chosen.sort_unstable();
    chosen.dedup();
    for s in chosen {
        let set = &inst.sets[s];
        if set.elems.iter().any(|&e| arrived[e]) {
            cost += set.w;
            for &e in &set.elems {
                covered[e] = true;
            }
        }
    }
    let feasible = inst.arrivals.iter().all(|&e| covered[e]);
    (cost, feasible)
}

/// Minimum-weight integral cover of the arrived elements, by branch and bound.
///
/// Branches on the lowest-numbered uncovered element over the sets containing it,
/// pruning any branch whose weight already reaches the incumbent.
pub fn offline_opt_setcover(inst: &CoverInstance) -> Result<(f64, Vec<usize>)> {
    inst.validate()?;
    let m = inst.sets.len();
    if m > MAX_OPT_SETS {
        return Err(PdlaError::TooLarge {
            what: "number of sets",
            limit: MAX_OPT_SETS,
            got: m,
        });
    }
    let targets = inst.distinct_arrivals();
    let mut bit_of = vec![usize::MAX; inst.n];
    for (b, &e) in targets.iter().enumerate() {
        bit_of[e] = b;
    }
    let words = targets.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = inst
        .sets
        .iter()
        .map(|s| {
            let mut mask = vec![0u64; words];
            for &e in &s.elems {
                let b = bit_of[e];
                if b != usize::MAX {
                    mask[b / 64] |= 1 << (b % 64);
                }
            }
            mask
        })
        .collect();
    let mut by_elem = vec![Vec::new(); targets.len()];
    for (i, mask) in masks.iter().enumerate() {
        for (b, list) in by_elem.iter_mut().enumerate() {
            if mask[b / 64] >> (b % 64) & 1 == 1 {
                list.push(i);
            }
        }
    }
    if let Some(b) = by_elem.iter().position(|l| l.is_empty()) {
        return Err(PdlaError::Infeasible(format!(
            "element {} belongs to no set",
            targets[b]
        )));
    }

    struct Search<'a> {
        inst: &'a CoverInstance,
        masks: &'a [Vec<u64>],
        by_elem: &'a [Vec<usize>],
        n_bits: usize,
        best: f64,
        best_sets: Vec<usize>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn first_uncovered(&self, covered: &[u64]) -> Option<usize> {
            for (wi, &w) in covered.iter().enumerate() {
                let free = !w;
                if free != 0 {
                    let b = wi * 64 + free.trailing_zeros() as usize;
                    return (b < self.n_bits).then_some(b);
                }
            }
            None
        }

        fn go(&mut self, covered: &mut Vec<u64>, cost: f64) {
            if cost >= self.best {
                return;
            }
            let Some(b) = self.first_uncovered(covered) else {
                self.best = cost;
                self.best_sets = self.chosen.clone();
                return;
            };
            for &s in &self.by_elem[b] {
                let saved = covered.clone();
                for (c, m) in covered.iter_mut().zip(&self.masks[s]) {
                    *c |= m;
                }
                self.chosen.push(s);
                self.go(covered, cost + self.inst.sets[s].w);
                self.chosen.pop();
                *covered = saved;
            }
        }
    }

    let mut search = Search {
        inst,
        masks: &masks,
        by_elem: &by_elem,
        n_bits: targets.len(),
        best: f64::INFINITY,
        best_sets: Vec::new(),
        chosen: Vec::new(),
    };
    let mut covered = vec![0u64; words];
    search.go(&mut covered, 0.0);
    let mut sets = search.best_sets;
    sets.sort_unstable();
    Ok((search.best, sets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, sets: &[(f64, &[usize])], arrivals: &[usize]) -> CoverInstance {
        CoverInstance {
            n,
            sets: sets.iter().map(|&(w, e)| CoverSet { w, elems: e.to_vec() }).collect(),
            arrivals: arrivals.to_vec(),
        }
    }

    #[test]
    fn single_predicted_unit_set() {
        let i = inst(1, &[(1.0, &[0])], &[0]);
        let r = run_pdla_setcover(&i, &CoverPrediction { sets: vec![0] }, 0.5).unwrap();
        assert_eq!(r.iterations.len(), 1);
        assert_eq!(r.x.get(0), 1.0);
        assert_eq!(r.cost(), 1.0);
        assert_eq!(r.y[0], 1.0);
        assert_eq!(r.ledger.prediction_charged, 1.0);
    }

    #[test]
    fn empty_prediction_behaves_like_plain_rule() {
        let i = inst(1, &[(1.0, &[0]), (1.0, &[0])], &[0]);
        for lambda in [0.1, 0.7, 1.0] {
            let r = run_pdla_setcover(&i, &CoverPrediction::default(), lambda).unwrap();
            assert_eq!(r.iterations.len(), 1);
            assert_eq!(r.x.values(), &[0.5, 0.5]);
            assert_eq!(r.cost(), 1.0);
            assert_eq!(r.cost_uncovered_part, 1.0);
        }
    }

    #[test]
    fn uniform_spread_over_d_sets() {
        let sets: Vec<(f64, &[usize])> = (0..5).map(|_| (1.0, &[0usize][..])).collect();
        let r = run_pure_online_setcover(&inst(1, &sets, &[0])).unwrap();
        assert!(r.x.values().iter().all(|&v| v == 0.2));
    }

    #[test]
    fn no_arrivals() {
        let i = inst(3, &[(2.0, &[0, 1])], &[]);
        let r = run_pdla_setcover(&i, &CoverPrediction { sets: vec![0] }, 0.3).unwrap();
        assert_eq!(r.cost(), 0.0);
        assert_eq!(r.x.sum(), 0.0);
        let c = check_cover_dual_feasibility(&r, &i, 0.3);
        assert_eq!(c.value, 0.0);
        assert!(c.ok);
    }

    #[test]
    fn unit_set_dual_against_log_limit() {
        let i = inst(1, &[(1.0, &[0])], &[0]);
        let r = run_pdla_setcover(&i, &CoverPrediction::default(), 1.0).unwrap();
        let c = check_cover_dual_feasibility(&r, &i, 1.0);
        assert_eq!(c.value, 1.0);
        assert_eq!(c.limit, 2.0);
        assert!(c.ok);
    }

    #[test]
    fn heavy_set_takes_several_rounds() {
        // w = 4: x after k rounds is (1.25^k - 1), covered once k = 4 (x = 1.4414...)
        let i = inst(1, &[(4.0, &[0])], &[0]);
        let r = run_pure_online_setcover(&i).unwrap();
        assert_eq!(r.iterations.len(), 4);
        let want = 1.25f64.powi(4) - 1.0;
        assert!((r.x.get(0) - want).abs() < 1e-12);
        assert!((r.cost() - 4.0 * want).abs() < 1e-12);
    }

    #[test]
    fn infeasible_arrival_is_an_error() {
        let i = inst(2, &[(1.0, &[0])], &[0, 1]);
        assert!(matches!(
            run_pdla_setcover(&i, &CoverPrediction::default(), 0.5),
            Err(PdlaError::InfeasibleElement { element: 1 })
        ));
    }

    #[test]
    fn rejects_light_sets_and_bad_ids() {
        assert!(inst(1, &[(0.5, &[0])], &[0]).validate().is_err());
        assert!(inst(1, &[(1.0, &[3])], &[0]).validate().is_err());
        let i = inst(1, &[(1.0, &[0])], &[0]);
        assert!(run_pdla_setcover(&i, &CoverPrediction { sets: vec![4] }, 0.5).is_err());
        assert!(run_pdla_setcover(&i, &CoverPrediction::default(), 0.0).is_err());
    }

    #[test]
    fn prediction_cost_ignores_untouched_sets() {
        let i = inst(3, &[(5.0, &[0]), (2.0, &[2])], &[0]);
        assert_eq!(
            prediction_cost_setcover(&i, &CoverPrediction { sets: vec![0, 1] }),
            (5.0, true)
        );
        assert_eq!(prediction_cost_setcover(&i, &CoverPrediction::default()), (0.0, false));
        assert_eq!(
            prediction_cost_setcover(&i, &CoverPrediction { sets: vec![0] }),
            (5.0, true)
        );
    }

    #[test]
    fn opt_small_cases() {
        let i = inst(1, &[(3.0, &[0]), (1.0, &[0])], &[0]);
        assert_eq!(offline_opt_setcover(&i).unwrap(), (1.0, vec![1]));
        let j = inst(4, &[(1.0, &[0]), (1.0, &[1]), (1.0, &[2]), (1.0, &[3])], &[0, 2, 3, 2]);
        assert_eq!(offline_opt_setcover(&j).unwrap(), (3.0, vec![0, 2, 3]));
        let k = inst(2, &[(1.0, &[0])], &[1]);
        assert!(matches!(offline_opt_setcover(&k), Err(PdlaError::Infeasible(_))));
    }

    #[test]
    fn opt_prefers_one_big_set_when_cheaper() {
        let i = inst(
            3,
            &[(1.0, &[0]), (1.0, &[1]), (1.0, &[2]), (2.5, &[0, 1, 2])],
            &[0, 1, 2],
        );
        assert_eq!(offline_opt_setcover(&i).unwrap(), (2.5, vec![3]));
    }

    #[test]
    fn iteration_checks_hold_on_mixed_instance() {
        let i = inst(
            4,
            &[(1.0, &[0, 1]), (2.0, &[1, 2]), (3.0, &[0, 2, 3]), (1.5, &[3])],
            &[0, 1, 2, 3, 1],
        );
        for lambda in [0.1, 0.5, 1.0] {
            let r = run_pdla_setcover(&i, &CoverPrediction { sets: vec![1, 3] }, lambda).unwrap();
            let c = check_cover_iterations(&r, lambda);
            assert!(c.primal_dual_ratio.ok && c.charging.ok && c.exact_increment.ok, "{c:?}");
            assert!((r.objective(&i) - r.cost()).abs() < 1e-9);
        }
    }
}
