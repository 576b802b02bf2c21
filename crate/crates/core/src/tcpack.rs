//! Dynamic TCP acknowledgement: packets arrive over discrete steps, each pending
//! packet costs `1/d` per step of delay, and one ack costs 1 and clears every
//! pending packet.
//!
//! Variables: `x_t` is the ack at step `t`, `f_{jt}` the delay packet `j` pays at
//! `t`. Packet `j` is covered at `t` once `Σ_{k=t(j)..=t} x_k ≥ 1`. Each step,
//! every uncovered packet pays `f = 1 - Σ` and raises `x_t` by `(Σ + 1/(c-1))/d`.
//! `c = e(λ)` once the prediction has acked the packet (big) and `c = e(1/λ)`
//! before (small), with `e(z) = (1 + 1/d)^(zd)`.

use serde::{Deserialize, Serialize};

use crate::common::{
    check_lambda, snapped_ceil, BoundCheck, CostLedger, DiscreteExp, EpsilonPolicy, ExponentRounding, MonotoneVarStore,
    SeededRng,
};
use crate::error::{PdlaError, Result};

/// Distinct arrival steps accepted by the quadratic dynamic program.
pub const MAX_OPT_STEPS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcpInstance {
    pub d: u64,
    /// `counts[i]` packets arrive at step `i`.
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcpPrediction {
    /// Strictly increasing ack steps.
    pub acks: Vec<usize>,
}

impl TcpInstance {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(PdlaError::domain("subdivision d must be at least 1"));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.counts.len()
    }

    pub fn packets(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn exp(&self) -> DiscreteExp {
        DiscreteExp::new(self.d as f64, ExponentRounding::Exact)
    }

    /// Arrival step of every packet, in arrival order.
    pub fn arrivals(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.packets() as usize);
        for (t, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(t).take(c as usize));
        }
        out
    }
}

impl TcpPrediction {
    pub fn validate(&self) -> Result<()> {
        if self.acks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PdlaError::domain("ack times must be strictly increasing"));
        }
        Ok(())
    }
}

/// `α(t)`: index into `acks` of the first ack at or after `t`.
pub fn alpha_index(acks: &[usize], t: usize) -> Option<usize> {
    let i = acks.partition_point(|&a| a < t);
    (i < acks.len()).then_some(i)
}

/// `α(t)`: the first predicted ack at or after `t`, `None` if there is none.
pub fn alpha(acks: &[usize], t: usize) -> Option<usize> {
    alpha_index(acks, t).map(|i| acks[i])
}

/// Which constant drives the updates.
#[derive(Clone, Debug, PartialEq)]
pub enum UpdateRule {
    Pdla {
        lambda: f64,
        acks: Vec<usize>,
    },
    /// The prediction-free online algorithm: always `c = e(1)`, dual `1/d`.
    Pure,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcpUpdate {
    pub packet: usize,
    pub arrival: usize,
    pub t: usize,
    pub big: bool,
    /// `Σ_{k=t(j)..=t} x_k` just before the update; `f_{jt} = 1 - sum_before`.
    pub sum_before: f64,
    pub dx: f64,
    pub cost: f64,
    /// `y_{jt}`.
    pub dual: f64,
    /// Predicted ack covering the packet, as an index into the schedule.
    pub ack: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct TcpRun {
    pub d: u64,
    /// `x_t` for every processed step.
    pub x: MonotoneVarStore,
    pub updates: Vec<TcpUpdate>,
    pub ledger: CostLedger,
    pub big_updates: usize,
    pub small_updates: usize,
    /// Steps processed, including the grace period after the last arrival.
    pub steps: usize,
    pub arrivals: Vec<usize>,
    /// Big-update cost charged to each predicted ack.
    pub ack_cost: Vec<f64>,
}

impl TcpRun {
    pub fn cost(&self) -> f64 {
        self.ledger.primal_total
    }

    /// `Σx + (1/d)Σf` from the recorded variables.
    pub fn objective(&self) -> f64 {
        let delay: f64 = self.updates.iter().map(|u| 1.0 - u.sum_before).sum();
        self.x.sum() + delay / self.d as f64
    }
}

pub fn run_pdla_tcp(inst: &TcpInstance, pred: &TcpPrediction, lambda: f64) -> Result<TcpRun> {
    check_lambda(lambda)?;
    pred.validate()?;
    run_tcp(
        inst,
        &UpdateRule::Pdla {
            lambda,
            acks: pred.acks.clone(),
        },
    )
}

pub fn run_pure_online_tcp(inst: &TcpInstance) -> Result<TcpRun> {
    run_tcp(inst, &UpdateRule::Pure)
}

pub fn run_tcp(inst: &TcpInstance, rule: &UpdateRule) -> Result<TcpRun> {
    inst.validate()?;
    let eps = EpsilonPolicy::default();
    let d = inst.d as f64;
    let e = inst.exp();
    let (lambda, acks): (f64, &[usize]) = match rule {
        UpdateRule::Pdla { lambda, acks } => (*lambda, acks),
        UpdateRule::Pure => (1.0, &[]),
    };
    let pure = matches!(rule, UpdateRule::Pure);
    let big_tail = 1.0 / (e.eval(lambda) - 1.0);
    let small_tail = 1.0 / (e.eval(1.0 / lambda) - 1.0);
    let big_cost = e.update_cost(lambda) / d;
    let small_cost = e.update_cost(1.0 / lambda) / d;

    let arrivals = inst.arrivals();
    let last_step = (inst.horizon() + snapped_ceil(d / lambda) as usize).saturating_sub(1);
    let mut run = TcpRun {
        d: inst.d,
        x: MonotoneVarStore::new(),
        updates: Vec::new(),
        ledger: CostLedger::new(),
        big_updates: 0,
        small_updates: 0,
        steps: 0,
        arrivals: Vec::new(),
        ack_cost: vec![0.0; acks.len()],
    };
    // seen[j] = Σ_{k=t(j)..t} x_k over finished steps, kept per packet: a
    // difference of global prefix sums loses tiny small-update steps next to
    // an earlier big one
    let mut seen: Vec<f64> = vec![0.0; arrivals.len()];
    let mut first_uncovered = 0usize;
    let mut arrived = 0usize;
    let mut t = 0usize;
    while t < inst.horizon() || first_uncovered < arrivals.len() {
        if t > last_step {
            return Err(PdlaError::IterationCap {
                cap: last_step + 1,
                context: format!("{} packets still unacknowledged", arrivals.len() - first_uncovered),
            });
        }
        while arrived < arrivals.len() && arrivals[arrived] == t {
            arrived += 1;
        }
        let mut xt = 0.0f64;
        for j in first_uncovered..arrived {
            let tj = arrivals[j];
            let sum = seen[j] + xt;
            if !eps.uncovered(sum) {
                continue;
            }
            let ack = if pure { None } else { alpha_index(acks, tj) };
            let big = pure || ack.is_some_and(|i| t >= acks[i]);
            let (tail, dual) = if big {
                (big_tail, 1.0 / d)
            } else {
                (small_tail, lambda / d)
            };
            let dx = (sum + tail) / d;
            xt += dx;
            let cost = dx + (1.0 - sum) / d;
            debug_assert!((cost - if big { big_cost } else { small_cost }).abs() < 1e-9);
            if big {
                run.big_updates += 1;
                if let Some(i) = ack {
                    run.ack_cost[i] += cost;
                }
                run.ledger.record(cost, 0.0, dual)?;
            } else {
                run.small_updates += 1;
                run.ledger.record(0.0, cost, dual)?;
            }
            run.updates.push(TcpUpdate {
                packet: j,
                arrival: tj,
                t,
                big,
                sum_before: sum,
                dx,
                cost,
                dual,
                ack,
            });
        }
        if xt > 0.0 {
            run.x.set(t, xt)?;
        }
        for s in &mut seen[first_uncovered..arrived] {
            *s += xt;
        }
        t += 1;
        // covered packets form a prefix: earlier arrivals see longer sums
        while first_uncovered < arrived && !eps.uncovered(seen[first_uncovered]) {
            first_uncovered += 1;
        }
    }
    run.steps = t;
    run.arrivals = arrivals;
    Ok(run)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcpChecks {
    /// Largest `Σ_{j: t(j) ≤ t} Σ_{t' ≥ t} y_{jt'}`, against `1 + 1/d`.
    pub dual: BoundCheck,
    /// Largest number of big updates charged to one predicted ack, against `⌈λd⌉`.
    pub ack_load: BoundCheck,
    /// Largest relative gap between an update's cost and its closed form.
    pub update_cost: BoundCheck,
    /// Every packet is covered by the end of the run.
    pub feasible: bool,
}

impl TcpChecks {
    pub fn all_ok(&self) -> bool {
        self.dual.ok && self.ack_load.ok && self.update_cost.ok && self.feasible
    }
}

/// Largest dual constraint sum; the scaled `y/(value)` is feasible.
pub fn tcp_dual_scale(run: &TcpRun) -> f64 {
    if run.steps == 0 {
        return 0.0;
    }
    // y_{jt'} sits in the constraint of every t ∈ [t(j), t']
    let mut diff = vec![0.0f64; run.steps + 1];
    for u in &run.updates {
        diff[u.arrival] += u.dual;
        diff[u.t + 1] -= u.dual;
    }
    let mut acc = 0.0f64;
    let mut worst = 0.0f64;
    for v in &diff[..run.steps] {
        acc += v;
        worst = worst.max(acc);
    }
    worst
}

pub fn check_tcp_run(run: &TcpRun, inst: &TcpInstance, lambda: f64) -> TcpChecks {
    let eps = EpsilonPolicy::default();
    let d = inst.d as f64;
    let e = inst.exp();
    let big = e.update_cost(lambda) / d;
    let small = e.update_cost(1.0 / lambda) / d;

    let mut per_ack = vec![0usize; run.ack_cost.len()];
    let mut gap: f64 = 0.0;
    for u in &run.updates {
        if u.big {
            if let Some(i) = u.ack {
                per_ack[i] += 1;
            }
        }
        let want = if u.big { big } else { small };
        gap = gap.max((u.cost - want).abs() / want);
    }
    let load = per_ack.iter().copied().max().unwrap_or(0) as f64;

    // suffix sums, so late small steps are not absorbed by early big ones
    let mut suffix = vec![0.0f64; run.steps + 1];
    for t in (0..run.steps).rev() {
        suffix[t] = suffix[t + 1] + run.x.get(t);
    }
    let feasible = run.arrivals.iter().all(|&tj| !eps.uncovered(suffix[tj]));

    TcpChecks {
        dual: BoundCheck::absolute(tcp_dual_scale(run), 1.0 + 1.0 / d, eps.coverage_eps),
        ack_load: BoundCheck::absolute(load, snapped_ceil(lambda * d), 0.0),
        update_cost: BoundCheck::absolute(gap, 0.0, 1e-12),
        feasible,
    }
}

/// What following the prediction blindly costs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcpPredictionCost {
    /// Every ack in the schedule, used or not.
    pub n_acks: usize,
    /// `Σ_j (α(t(j)) - t(j))/d` over packets the schedule acks.
    pub latency: f64,
    /// `n_acks + latency`, defined only when every packet gets acked.
    pub s_cost: Option<f64>,
    pub covers_all: bool,
}

pub fn prediction_cost_tcp(inst: &TcpInstance, pred: &TcpPrediction) -> TcpPredictionCost {
    let mut steps = 0u64;
    let mut covers_all = true;
    for (t, &c) in inst.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        match alpha(&pred.acks, t) {
            Some(a) => steps += c * (a - t) as u64,
            None => covers_all = false,
        }
    }
    let latency = steps as f64 / inst.d as f64;
    let n_acks = pred.acks.len();
    TcpPredictionCost {
        n_acks,
        latency,
        s_cost: covers_all.then_some(n_acks as f64 + latency),
        covers_all,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcpBounds {
    /// `n_A·(⌈λd⌉/d)/(1-e(-λ)) + latency(A)/(1-e(-1/λ))`, when the schedule acks every packet.
    pub consistency: Option<f64>,
    /// `(1 + 1/d)·OPT/(1-e(-λ))`.
    pub robustness: f64,
    /// `OPT/(1-e^-λ)`, valid as `d → ∞`.
    pub limit_robustness: f64,
}

impl TcpBounds {
    pub fn best(&self) -> f64 {
        self.consistency.map_or(self.robustness, |c| c.min(self.robustness))
    }
}

pub fn tcp_bounds(inst: &TcpInstance, pred: &TcpPrediction, lambda: f64, opt: f64) -> Result<TcpBounds> {
    check_lambda(lambda)?;
    inst.validate()?;
    let d = inst.d as f64;
    let e = inst.exp();
    let pc = prediction_cost_tcp(inst, pred);
    let consistency = pc.covers_all.then(|| {
        pc.n_acks as f64 * snapped_ceil(lambda * d) / d * e.update_cost(lambda)
            + pc.latency * e.update_cost(1.0 / lambda)
    });
    Ok(TcpBounds {
        consistency,
        robustness: (1.0 + 1.0 / d) * opt * e.update_cost(lambda),
        limit_robustness: -opt / (-lambda).exp_m1(),
    })
}

/// Exact offline optimum and an optimal ack schedule.
///
/// Some optimal schedule acks only at arrival steps, and each ack clears a
/// contiguous run of arrival groups. Over distinct arrival steps `s_0 < … < s_{m-1}`,
/// `opt(i) = min_{j ≤ i} opt(j-1) + 1 + Σ_{k=j..=i} c_k (s_i - s_k)/d`.
/// Costs are carried as exact integers scaled by `d`.
pub fn offline_opt_tcp(inst: &TcpInstance) -> Result<(f64, Vec<usize>)> {
    inst.validate()?;
    let groups: Vec<(usize, u64)> = inst
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(t, &c)| (t, c))
        .collect();
    let m = groups.len();
    if m > MAX_OPT_STEPS {
        return Err(PdlaError::TooLarge {
            what: "distinct arrival steps",
            limit: MAX_OPT_STEPS,
            got: m,
        });
    }
    let d = inst.d as u128;
    // prefix sums of counts and of count·step
    let mut cnt = vec![0u128; m + 1];
    let mut wsum = vec![0u128; m + 1];
    for (i, &(s, c)) in groups.iter().enumerate() {
        cnt[i + 1] = cnt[i] + c as u128;
        wsum[i + 1] = wsum[i] + c as u128 * s as u128;
    }
    let mut best = vec![0u128; m + 1];
    let mut from = vec![0usize; m + 1];
    for i in 1..=m {
        let s = groups[i - 1].0 as u128;
        let (mut b, mut arg) = (u128::MAX, 0);
        for j in 1..=i {
            let delay = s * (cnt[i] - cnt[j - 1]) - (wsum[i] - wsum[j - 1]);
            let v = best[j - 1] + d + delay;
            if v < b {
                b = v;
                arg = j;
            }
        }
        best[i] = b;
        from[i] = arg;
    }
    let mut acks = Vec::new();
    let mut i = m;
    while i > 0 {
        acks.push(groups[i - 1].0);
        i = from[i] - 1;
    }
    acks.reverse();
    Ok((best[m] as f64 / inst.d as f64, acks))
}

/// Samples one integral schedule from the final fractional acks.
///
/// The `x_t` are laid end to end and an ack goes out at `t` once per point of
/// `p + ℤ` inside `x_t`'s segment, `p ~ U[0, 1)`. A packet waits until the first
/// ack at or after its arrival; one still pending at the end is acked at the last
/// processed step.
pub fn round_tcp(run: &TcpRun, rng: &mut SeededRng) -> f64 {
    let p = rng.uniform();
    let mut acks: Vec<usize> = Vec::new();
    let mut cost = 0.0;
    let mut acc = 0.0f64;
    for t in 0..run.steps {
        let next = acc + run.x.get(t);
        let n = (next - p).ceil() - (acc - p).ceil();
        if n > 0.0 {
            acks.push(t);
            cost += n;
        }
        acc = next;
    }
    let mut extra = false;
    let mut delay = 0usize;
    for &tj in &run.arrivals {
        match alpha(&acks, tj) {
            Some(a) => delay += a - tj,
            None => {
                extra = true;
                delay += run.steps - 1 - tj;
            }
        }
    }
    if extra {
        cost += 1.0;
    }
    cost + delay as f64 / run.d as f64
}

/// Cost of the final fractional solution with the smallest feasible delay terms,
/// `Σx + (1/d) Σ_j Σ_{t ≥ t(j)} (1 - Σ_{k=t(j)..=t} x_k)^+`. This is what
/// [`round_tcp`] pays in expectation; the run's ledger is never below it.
pub fn tcp_tight_cost(run: &TcpRun) -> f64 {
    let mut delay = 0.0;
    let mut i = 0;
    while i < run.arrivals.len() {
        let tj = run.arrivals[i];
        let same = run.arrivals[i..].iter().take_while(|&&a| a == tj).count();
        let mut s = 0.0;
        let mut wait = 0.0;
        for t in tj..run.steps {
            s += run.x.get(t);
            if s >= 1.0 {
                break;
            }
            wait += 1.0 - s;
        }
        delay += same as f64 * wait;
        i += same;
    }
    run.x.sum() + delay / run.d as f64
}
