//! The Bahncard problem: pay 1 per trip, or buy a card for `B` that cuts the
//! price of every trip in the next `T` steps to `β`.
//!
//! Variables: `x_t` is the card bought at time `t`, `d_j`/`f_j` the discounted and
//! full-price share of trip `j`. A card bought at `t` covers trips with
//! `t(j) ∈ [t, t + T]`.
//!
//! Trip `j` with window sum `S = Σ_{t(j)-T ≤ t ≤ t(j)} x_t` triggers one of three
//! updates. If `S ≥ 1` it is paid at discount (minimal). Otherwise `x_{t(j)}` grows
//! by `(1-β)/B · (S + 1/(c-1))`, where `c = e(λ)` while the predicted schedule holds
//! a valid card (big) and `c = e(1/λ)` otherwise (small). Here
//! `e(z) = (1 + (1-β)/B)^(z·B/(1-β))`.

use serde::{Deserialize, Serialize};

use crate::common::{
    check_lambda, snapped_ceil, BoundCheck, CostLedger, DiscreteExp, EpsilonPolicy, ExponentRounding, MonotoneVarStore,
    SeededRng,
};
use crate::error::{PdlaError, Result};

/// Trip count accepted by the dynamic program.
pub const MAX_OPT_TRIPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BahncardInstance {
    pub trips: Vec<i64>,
    #[serde(rename = "B")]
    pub b: f64,
    pub beta: f64,
    #[serde(rename = "T")]
    pub t: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BahncardPrediction {
    pub cards: Vec<i64>,
}

impl BahncardInstance {
    pub fn validate(&self) -> Result<()> {
        if self.trips.windows(2).any(|w| w[0] > w[1]) {
            return Err(PdlaError::domain("trip times must be nondecreasing"));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(PdlaError::domain(format!(
                "card price B must be positive, got {}",
                self.b
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(PdlaError::domain(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if self.t < 1 {
            return Err(PdlaError::domain(format!(
                "validity T must be at least 1, got {}",
                self.t
            )));
        }
        Ok(())
    }

    /// `e(·)` with `D = B/(1-β)`. Exponents are not rounded.
    pub fn exp(&self) -> DiscreteExp {
        DiscreteExp::new(self.b / (1.0 - self.beta), ExponentRounding::Exact)
    }

    /// `(e(z) - β)/(e(z) - 1)`, the cost of one non-minimal update made with `e(z)`.
    pub fn update_cost(&self, z: f64) -> f64 {
        let e = self.exp();
        1.0 + (1.0 - self.beta) * (e.update_cost(z) - 1.0)
    }
}

/// Sorts the predicted buy times and postpones any card bought while the previous
/// one is still valid to the first step after it expires. Returns the cleaned
/// schedule and how many cards were moved.
pub fn normalize_prediction(pred: &BahncardPrediction, t: i64) -> (Vec<i64>, usize) {
    let mut cards = pred.cards.clone();
    cards.sort_unstable();
    cards.dedup();
    let mut out: Vec<i64> = Vec::with_capacity(cards.len());
    let mut moved = 0;
    for c in cards {
        match out.last() {
            Some(&prev) if c <= prev + t => {
                out.push(prev + t + 1);
                moved += 1;
            }
            _ => out.push(c),
        }
    }
    (out, moved)
}

/// `l_A(t)`: index of the latest predicted card bought at or before `t`.
pub fn latest_card(cards: &[i64], t: i64) -> Option<usize> {
    cards.partition_point(|&c| c <= t).checked_sub(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateKind {
    Minimal,
    Big,
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BahncardTrip {
    pub time: i64,
    pub kind: UpdateKind,
    pub window_before: f64,
    pub d: f64,
    pub f: f64,
    pub c: f64,
    pub b: f64,
    /// Primal increase caused by this trip.
    pub cost: f64,
    /// The predicted card interval containing the trip.
    pub interval: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct BahncardRun {
    /// Card variables, indexed like `x_times`.
    pub x: MonotoneVarStore,
    pub x_times: Vec<i64>,
    pub trips: Vec<BahncardTrip>,
    pub ledger: CostLedger,
    /// The normalized predicted schedule.
    pub cards: Vec<i64>,
    pub postponed: usize,
    /// Primal increase per predicted interval.
    pub interval_cost: Vec<f64>,
    /// Trips per predicted interval.
    pub interval_trips: Vec<usize>,
}

impl BahncardRun {
    pub fn cost(&self) -> f64 {
        self.ledger.primal_total
    }

    /// `B·Σx + Σ(βd_j + f_j)` from the final variables.
    pub fn objective(&self, inst: &BahncardInstance) -> f64 {
        inst.b * self.x.sum() + self.trips.iter().map(|t| inst.beta * t.d + t.f).sum::<f64>()
    }
}

pub fn run_pdla_bahncard(inst: &BahncardInstance, pred: &BahncardPrediction, lambda: f64) -> Result<BahncardRun> {
    check_lambda(lambda)?;
    inst.validate()?;
    if inst.beta >= 1.0 {
        return Err(PdlaError::domain("beta = 1 makes every card update vanish"));
    }
    let eps = EpsilonPolicy::default();
    let (cards, postponed) = normalize_prediction(pred, inst.t);
    let e = inst.exp();
    let step = (1.0 - inst.beta) / inst.b;
    let beta = inst.beta;
    let big_tail = 1.0 / (e.eval(lambda) - 1.0);
    let small_tail = 1.0 / (e.eval(1.0 / lambda) - 1.0);

    let mut run = BahncardRun {
        x: MonotoneVarStore::new(),
        x_times: Vec::new(),
        trips: Vec::with_capacity(inst.trips.len()),
        ledger: CostLedger::new(),
        interval_cost: vec![0.0; cards.len()],
        interval_trips: vec![0; cards.len()],
        cards,
        postponed,
    };
    // first x entry still inside the current window
    let mut lo = 0usize;
    for &tj in &inst.trips {
        if run.x_times.last() != Some(&tj) {
            run.x_times.push(tj);
        }
        let slot = run.x_times.len() - 1;
        while run.x_times[lo] < tj - inst.t {
            lo += 1;
        }
        let window: f64 = (lo..=slot).map(|i| run.x.get(i)).sum();
        let interval = latest_card(&run.cards, tj).filter(|&i| tj <= run.cards[i] + inst.t);

        let trip = if !eps.uncovered(window) {
            BahncardTrip {
                time: tj,
                kind: UpdateKind::Minimal,
                window_before: window,
                d: 1.0,
                f: 0.0,
                c: beta,
                b: 0.0,
                cost: beta,
                interval,
            }
        } else {
            let (kind, tail, b) = if interval.is_some() {
                (UpdateKind::Big, big_tail, 1.0 - beta)
            } else {
                (UpdateKind::Small, small_tail, lambda * (1.0 - beta))
            };
            let dx = step * (window + tail);
            run.x.increase(slot, dx)?;
            let (d, f) = (window, 1.0 - window);
            BahncardTrip {
                time: tj,
                kind,
                window_before: window,
                d,
                f,
                c: b + beta,
                b,
                cost: inst.b * dx + beta * d + f,
                interval,
            }
        };
        match trip.interval {
            Some(i) => {
                run.interval_cost[i] += trip.cost;
                run.interval_trips[i] += 1;
                run.ledger.record(trip.cost, 0.0, trip.c)?;
            }
            None => run.ledger.record(0.0, trip.cost, trip.c)?,
        }
        run.trips.push(trip);
    }
    Ok(run)
}

/// Cost bounds for one instance, in finite-`B` and limit form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BahncardBounds {
    /// Cost of following the normalized prediction: `Σ_i (B + β m_i)` plus 1 per uncovered trip.
    pub s_cost: f64,
    pub opt: f64,
    /// Per-interval coefficient on `B + β m_i` plus the out-of-interval coefficient
    /// on each uncovered trip.
    pub consistency: f64,
    /// `(e(λ)-β)/(e(λ)-1) · (1 + (1-β)/B) · OPT`.
    pub robustness: f64,
    /// `λ/(1-β+λβ) · (e^λ-β)/(e^λ-1) · S`, valid as `B/(1-β) → ∞`.
    pub limit_consistency: f64,
    /// `(e^λ-β)/(e^λ-1) · OPT`, valid as `B/(1-β) → ∞`.
    pub limit_robustness: f64,
}

impl BahncardBounds {
    pub fn best(&self) -> f64 {
        self.consistency.min(self.robustness)
    }
}

/// `⌈λD⌉/(B + β⌈λD⌉) · (e(λ)-β)/(e(λ)-1)`, the worst cost ratio inside one predicted interval.
pub fn interval_coefficient(inst: &BahncardInstance, lambda: f64) -> f64 {
    let m = snapped_ceil(lambda * inst.b / (1.0 - inst.beta));
    m / (inst.b + inst.beta * m) * inst.update_cost(lambda)
}

/// `(e(1/λ)-β)/(e(1/λ)-1)`, the most a trip outside every predicted interval can cost.
pub fn outside_coefficient(inst: &BahncardInstance, lambda: f64) -> f64 {
    inst.update_cost(1.0 / lambda)
}

/// `(e(λ)-β)/(e(λ)-1)`, the largest `ΔP/ΔD` of any update.
pub fn ratio_coefficient(inst: &BahncardInstance, lambda: f64) -> f64 {
    inst.update_cost(lambda)
}

/// Splits trips by predicted interval: trips per interval and trips outside all of them.
pub fn interval_occupancy(inst: &BahncardInstance, cards: &[i64]) -> (Vec<usize>, usize) {
    let mut per = vec![0usize; cards.len()];
    let mut outside = 0;
    for &tj in &inst.trips {
        match latest_card(cards, tj).filter(|&i| tj <= cards[i] + inst.t) {
            Some(i) => per[i] += 1,
            None => outside += 1,
        }
    }
    (per, outside)
}

/// Cost of following the prediction blindly, after normalization.
pub fn prediction_cost_bahncard(inst: &BahncardInstance, pred: &BahncardPrediction) -> f64 {
    let (cards, _) = normalize_prediction(pred, inst.t);
    let (per, outside) = interval_occupancy(inst, &cards);
    per.iter().map(|&m| inst.b + inst.beta * m as f64).sum::<f64>() + outside as f64
}

pub fn bahncard_bounds(inst: &BahncardInstance, pred: &BahncardPrediction, lambda: f64) -> Result<BahncardBounds> {
    check_lambda(lambda)?;
    inst.validate()?;
    if inst.beta >= 1.0 {
        return Err(PdlaError::domain("beta = 1 makes every card update vanish"));
    }
    let (cards, _) = normalize_prediction(pred, inst.t);
    let (per, outside) = interval_occupancy(inst, &cards);
    let in_intervals: f64 = per.iter().map(|&m| inst.b + inst.beta * m as f64).sum();
    let s_cost = in_intervals + outside as f64;
    let (opt, _) = offline_opt_bahncard(inst)?;
    let beta = inst.beta;
    let limit_coef = 1.0 + (1.0 - beta) / lambda.exp_m1();
    Ok(BahncardBounds {
        s_cost,
        opt,
        consistency: interval_coefficient(inst, lambda) * in_intervals
            + outside_coefficient(inst, lambda) * outside as f64,
        robustness: ratio_coefficient(inst, lambda) * (1.0 + (1.0 - beta) / inst.b) * opt,
        limit_consistency: lambda / (1.0 - beta + lambda * beta) * limit_coef * s_cost,
        limit_robustness: limit_coef * opt,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BahncardChecks {
    /// Largest `Σ_{j: t(j)-T ≤ t ≤ t(j)} b_j` over `t`, against `B + 1 - β`.
    pub dual: BoundCheck,
    /// Largest `max(c_j - 1, c_j - b_j - β)`, against 0.
    pub dual_box: BoundCheck,
    /// Largest per-update `ΔP/ΔD`, against `(e(λ)-β)/(e(λ)-1)`.
    pub ratio: BoundCheck,
    /// Largest `(ΔP)_{I_i}/(B + β m_i)`, against [`interval_coefficient`].
    pub interval: BoundCheck,
    /// Largest cost of a trip outside every interval, against [`outside_coefficient`].
    pub outside: BoundCheck,
    /// Largest relative gap between a non-minimal update's cost and its closed form.
    pub update_cost: BoundCheck,
    pub feasible: bool,
}

impl BahncardChecks {
    pub fn all_ok(&self) -> bool {
        self.dual.ok
            && self.dual_box.ok
            && self.ratio.ok
            && self.interval.ok
            && self.outside.ok
            && self.update_cost.ok
            && self.feasible
    }
}

pub fn check_bahncard_run(run: &BahncardRun, inst: &BahncardInstance, lambda: f64) -> BahncardChecks {
    let eps = EpsilonPolicy::default();
    let beta = inst.beta;

    // sweep the b_j intervals [t(j)-T, t(j)]; at equal coordinates removals go first
    let mut events: Vec<(i64, bool, f64)> = Vec::new();
    for tr in run.trips.iter().filter(|t| t.b > 0.0) {
        events.push((tr.time - inst.t, true, tr.b));
        events.push((tr.time + 1, false, tr.b));
    }
    events.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut active, mut worst) = (0.0f64, 0.0f64);
    for (_, add, b) in events {
        if add {
            active += b;
            worst = worst.max(active);
        } else {
            active -= b;
        }
    }

    let mut box_excess = f64::NEG_INFINITY;
    let mut ratio: f64 = 0.0;
    let mut cost_gap: f64 = 0.0;
    let mut outside: f64 = 0.0;
    let mut feasible = true;
    let big = inst.update_cost(lambda);
    let small = inst.update_cost(1.0 / lambda);
    for tr in &run.trips {
        box_excess = box_excess.max(tr.c - 1.0).max(tr.c - tr.b - beta);
        if tr.c > 0.0 {
            ratio = ratio.max(tr.cost / tr.c);
        }
        let want = match tr.kind {
            UpdateKind::Minimal => beta,
            UpdateKind::Big => big,
            UpdateKind::Small => small,
        };
        cost_gap = cost_gap.max((tr.cost - want).abs() / want.max(1e-300));
        if tr.interval.is_none() {
            outside = outside.max(tr.cost);
        }
        feasible &= tr.d + tr.f >= 1.0 - eps.coverage_eps && tr.d >= 0.0 && tr.f >= 0.0;
        feasible &= tr.window_before >= tr.d - eps.coverage_eps || tr.kind == UpdateKind::Minimal;
    }
    let interval = run
        .interval_cost
        .iter()
        .zip(&run.interval_trips)
        .map(|(&c, &m)| c / (inst.b + beta * m as f64))
        .fold(0.0, f64::max);
    let tol = 1e-9;
    BahncardChecks {
        dual: BoundCheck::relative(worst, inst.b + 1.0 - beta, tol),
        dual_box: BoundCheck::absolute(box_excess.max(0.0), 0.0, tol),
        ratio: BoundCheck::relative(ratio, ratio_coefficient(inst, lambda), tol),
        interval: BoundCheck::relative(interval, interval_coefficient(inst, lambda), tol),
        outside: BoundCheck::relative(outside, outside_coefficient(inst, lambda), tol),
        update_cost: BoundCheck::absolute(cost_gap, 0.0, 1e-9),
        feasible,
    }
}

/// Exact offline optimum by dynamic programming over trips.
///
/// Some optimal schedule buys cards only at trip times: moving a card forward to
/// the first trip it covers never loses coverage. So from the first unpaid trip
/// `i` there are two moves: pay it in full, or buy a card at `t(i)` and pay `β`
/// for every trip up to `t(i) + T`. Returns the cost and the card times.
pub fn offline_opt_bahncard(inst: &BahncardInstance) -> Result<(f64, Vec<i64>)> {
    inst.validate()?;
    let n = inst.trips.len();
    if n > MAX_OPT_TRIPS {
        return Err(PdlaError::TooLarge {
            what: "trip count",
            limit: MAX_OPT_TRIPS,
            got: n,
        });
    }
    let trips = &inst.trips;
    let mut best = vec![0.0f64; n + 1];
    let mut buys = vec![false; n];
    let mut reach = vec![n; n];
    let mut k = n;
    for i in (0..n).rev() {
        // first trip after the card bought at t(i) expires
        while k > i + 1 && trips[k - 1] > trips[i] + inst.t {
            k -= 1;
        }
        reach[i] = k;
        let pay = 1.0 + best[i + 1];
        let card = inst.b + inst.beta * (k - i) as f64 + best[k];
        buys[i] = card < pay;
        best[i] = if buys[i] { card } else { pay };
    }
    let mut cards = Vec::new();
    let mut i = 0;
    while i < n {
        if buys[i] {
            cards.push(trips[i]);
            i = reach[i];
        } else {
            i += 1;
        }
    }
    Ok((best[0], cards))
}

/// Samples one integral schedule from the final fractional cards.
///
/// The `x_t` are laid end to end on the line in time order and a card is bought at
/// `t` once for every point of `p + ℤ` inside `x_t`'s segment, `p ~ U[0, 1)`. The
/// expected card spend is `B·Σx`. A trip is discounted when some card falls in its
/// window, which happens with probability at least the window sum, so expected
/// ticket spend is at most the fractional one.
pub fn round_bahncard(run: &BahncardRun, inst: &BahncardInstance, rng: &mut SeededRng) -> f64 {
    let p = rng.uniform();
    let mut bought: Vec<i64> = Vec::new();
    let mut cost = 0.0;
    let mut acc = 0.0f64;
    for (i, &t) in run.x_times.iter().enumerate() {
        let next = acc + run.x.get(i);
        let cards = (next - p).ceil() - (acc - p).ceil();
        if cards > 0.0 {
            bought.push(t);
            cost += inst.b * cards;
        }
        acc = next;
    }
    for &tj in &inst.trips {
        let covered = latest_card(&bought, tj).is_some_and(|i| bought[i] >= tj - inst.t);
        cost += if covered { inst.beta } else { 1.0 };
    }
    cost
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(trips: &[i64], b: f64, beta: f64, t: i64) -> BahncardInstance {
        BahncardInstance {
            trips: trips.to_vec(),
            b,
            beta,
            t,
        }
    }

    #[test]
    fn no_trips() {
        let i = inst(&[], 3.0, 0.2, 5);
        let r = run_pdla_bahncard(&i, &BahncardPrediction::default(), 0.5).unwrap();
        assert_eq!(r.cost(), 0.0);
        assert!(check_bahncard_run(&r, &i, 0.5).all_ok());
        assert_eq!(offline_opt_bahncard(&i).unwrap(), (0.0, vec![]));
    }

    #[test]
    fn single_unpredicted_trip_is_small() {
        let (b, beta, lambda) = (4.0, 0.25, 0.5);
        let i = inst(&[7], b, beta, 3);
        let r = run_pdla_bahncard(&i, &BahncardPrediction::default(), lambda).unwrap();
        assert_eq!(r.trips[0].kind, UpdateKind::Small);
        // e(2) = (1 + 0.75/4)^(2·4/0.75)
        let e2 = (1.0f64 + 0.75 / 4.0).powf(2.0 * 4.0 / 0.75);
        let want = (e2 - beta) / (e2 - 1.0);
        assert!((r.cost() - want).abs() < 1e-12);
        assert!((r.trips[0].b - lambda * (1.0 - beta)).abs() < 1e-15);
    }

    #[test]
    fn worst_case_interval_load() {
        // B = 3, β = 0.25, λ = 0.5: D = 4, ⌈λD⌉ = 2 big updates fill the card
        let (b, beta, lambda) = (3.0, 0.25, 0.5);
        let i = inst(&[10, 10], b, beta, 5);
        let pred = BahncardPrediction { cards: vec![10] };
        let r = run_pdla_bahncard(&i, &pred, lambda).unwrap();
        assert!(r.trips.iter().all(|t| t.kind == UpdateKind::Big));
        let e = (1.0f64 + 0.25).powf(0.5 * 4.0);
        let per = (e - beta) / (e - 1.0);
        assert!((r.cost() - 2.0 * per).abs() < 1e-12);
        // the window then holds exactly one card
        assert!((r.x.sum() - 1.0).abs() < 1e-12);
        let c = check_bahncard_run(&r, &i, lambda);
        assert!(c.all_ok(), "{c:?}");
        assert!((c.interval.value - c.interval.limit).abs() < 1e-12);
    }

    #[test]
    fn full_card_makes_later_trips_minimal() {
        let i = inst(&[10, 10, 11, 12], 3.0, 0.25, 5);
        let r = run_pdla_bahncard(&i, &BahncardPrediction { cards: vec![10] }, 0.5).unwrap();
        let kinds: Vec<UpdateKind> = r.trips.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [
                UpdateKind::Big,
                UpdateKind::Big,
                UpdateKind::Minimal,
                UpdateKind::Minimal
            ]
        );
        assert!((r.objective(&i) - r.cost()).abs() < 1e-9);
    }

    #[test]
    fn window_is_inclusive() {
        // a card bought at 0 still covers a trip at exactly T
        let i = inst(&[0, 0, 0, 0, 5], 2.0, 0.0, 5);
        let r = run_pdla_bahncard(&i, &BahncardPrediction { cards: vec![0] }, 1.0).unwrap();
        assert_eq!(r.trips[4].kind, UpdateKind::Minimal);
        let j = inst(&[0, 0, 0, 0, 6], 2.0, 0.0, 5);
        let r = run_pdla_bahncard(&j, &BahncardPrediction { cards: vec![0] }, 1.0).unwrap();
        assert_ne!(r.trips[4].kind, UpdateKind::Minimal);
        assert_eq!(r.trips[4].interval, None);
    }

    #[test]
    fn normalization_postpones_overlaps() {
        let (cards, moved) = normalize_prediction(
            &BahncardPrediction {
                cards: vec![9, 0, 3, 3],
            },
            5,
        );
        assert_eq!(cards, vec![0, 6, 12]);
        assert_eq!(moved, 2);
        let (cards, moved) = normalize_prediction(&BahncardPrediction { cards: vec![0, 6] }, 5);
        assert_eq!((cards, moved), (vec![0, 6], 0));
    }

    #[test]
    fn beta_one_rejected() {
        let i = inst(&[1], 2.0, 1.0, 3);
        assert!(run_pdla_bahncard(&i, &BahncardPrediction::default(), 0.5).is_err());
        assert!(inst(&[2, 1], 2.0, 0.5, 3).validate().is_err());
    }

    #[test]
    fn opt_small_cases() {
        assert_eq!(offline_opt_bahncard(&inst(&[4], 2.0, 0.5, 3)).unwrap(), (1.0, vec![]));
        // five trips at once: B + 5β = 2 + 1.25 < 5
        let (c, cards) = offline_opt_bahncard(&inst(&[4; 5], 2.0, 0.25, 3)).unwrap();
        assert!((c - 3.25).abs() < 1e-12);
        assert_eq!(cards, vec![4]);
        // two clusters out of each other's reach need two cards
        let (c, cards) = offline_opt_bahncard(&inst(&[0, 0, 0, 9, 9, 9], 1.0, 0.0, 3)).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(cards, vec![0, 9]);
    }

    #[test]
    fn prediction_cost_counts_uncovered_trips() {
        let i = inst(&[0, 1, 10], 2.0, 0.5, 3);
        let p = BahncardPrediction { cards: vec![0] };
        assert_eq!(prediction_cost_bahncard(&i, &p), 2.0 + 0.5 * 2.0 + 1.0);
        assert_eq!(prediction_cost_bahncard(&i, &BahncardPrediction::default()), 3.0);
    }

    #[test]
    fn lambda_one_coefficients_coincide() {
        let i = inst(&[0], 50.0, 0.3, 4);
        let c = interval_coefficient(&i, 1.0);
        let o = outside_coefficient(&i, 1.0);
        let r = ratio_coefficient(&i, 1.0);
        assert!((o - r).abs() < 1e-15);
        // ⌈D⌉/(B + β⌈D⌉) with D = 50/0.7 = 71.43 gives 72/71.6
        assert!((c - 72.0 / 71.6 * r).abs() < 1e-12);
    }

    #[test]
    fn rounding_without_mass_pays_full() {
        let i = inst(&[1, 2, 3], 5.0, 0.1, 2);
        let mut r = run_pdla_bahncard(&inst(&[], 5.0, 0.1, 2), &BahncardPrediction::default(), 1.0).unwrap();
        r.x_times.clear();
        let mut rng = SeededRng::new(0, 0);
        assert_eq!(round_bahncard(&r, &i, &mut rng), 3.0);
    }
}
