//! One entry point for offline optima, plus exhaustive enumerators that serve
//! as a second opinion on the dynamic programs.

use std::time::{Duration, Instant};

use crate::bahncard::{offline_opt_bahncard, BahncardInstance};
use crate::error::{PdlaError, Result};
use crate::setcover::{offline_opt_setcover, CoverInstance};
use crate::skirental::SkiInstance;
use crate::tcpack::{offline_opt_tcp, TcpInstance};

/// Largest input the enumerators accept.
pub const BRUTE_FORCE_LIMIT: usize = 12;
/// Set count accepted by [`brute_force_setcover`].
pub const BRUTE_FORCE_SETS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemInstance {
    SetCover(CoverInstance),
    Ski(SkiInstance),
    Bahncard(BahncardInstance),
    Tcp(TcpInstance),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Chosen set indices.
    Sets(Vec<usize>),
    /// Day on which to buy, `None` to rent throughout.
    BuyDay(Option<u64>),
    /// Card purchase times.
    Cards(Vec<i64>),
    /// Ack steps.
    Acks(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    Dp,
    BruteForce,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub opt_cost: f64,
    pub witness: Witness,
    pub method: OracleMethod,
    pub elapsed: Duration,
}

pub fn opt(inst: &ProblemInstance) -> Result<OracleReport> {
    let start = Instant::now();
    let (opt_cost, witness, method) = match inst {
        ProblemInstance::SetCover(i) => {
            let (c, sets) = offline_opt_setcover(i)?;
            (c, Witness::Sets(sets), OracleMethod::BruteForce)
        }
        ProblemInstance::Ski(i) => {
            i.validate()?;
            let buy = (i.n >= i.b).then_some(1);
            (i.opt(), Witness::BuyDay(buy), OracleMethod::ClosedForm)
        }
        ProblemInstance::Bahncard(i) => {
            let (c, cards) = offline_opt_bahncard(i)?;
            (c, Witness::Cards(cards), OracleMethod::Dp)
        }
        ProblemInstance::Tcp(i) => {
            let (c, acks) = offline_opt_tcp(i)?;
            (c, Witness::Acks(acks), OracleMethod::Dp)
        }
    };
    Ok(OracleReport {
        opt_cost,
        witness,
        method,
        elapsed: start.elapsed(),
    })
}

fn too_large(what: &'static str, limit: usize, got: usize) -> PdlaError {
    PdlaError::TooLarge { what, limit, got }
}

/// Minimum over every subset of arrival steps used as ack steps.
pub fn brute_force_tcp(inst: &TcpInstance) -> Result<f64> {
    inst.validate()?;
    let steps: Vec<usize> = (0..inst.counts.len()).filter(|&t| inst.counts[t] > 0).collect();
    let m = steps.len();
    if m > BRUTE_FORCE_LIMIT {
        return Err(too_large("distinct arrival steps", BRUTE_FORCE_LIMIT, m));
    }
    if m == 0 {
        return Ok(0.0);
    }
    // cost·d as an integer
    let mut best = u64::MAX;
    for mask in 0u32..(1 << m) {
        // the last arrival has no later ack to wait for
        if mask >> (m - 1) & 1 == 0 {
            continue;
        }
        let mut total = mask.count_ones() as u64 * inst.d;
        for (i, &s) in steps.iter().enumerate() {
            let a = (i..m).find(|&k| mask >> k & 1 == 1).map(|k| steps[k]).unwrap();
            total += inst.counts[s] * (a - s) as u64;
        }
        best = best.min(total);
    }
    Ok(best as f64 / inst.d as f64)
}

/// Minimum over every subset of trip times used as card purchase times.
pub fn brute_force_bahncard(inst: &BahncardInstance) -> Result<f64> {
    inst.validate()?;
    let n = inst.trips.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(too_large("trip count", BRUTE_FORCE_LIMIT, n));
    }
    let mut times = inst.trips.clone();
    times.dedup();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << times.len()) {
        let cards: Vec<i64> = (0..times.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| times[k])
            .collect();
        let mut cost = inst.b * cards.len() as f64;
        for &t in &inst.trips {
            let covered = cards.iter().any(|&c| c <= t && t <= c + inst.t);
            cost += if covered { inst.beta } else { 1.0 };
        }
        best = best.min(cost);
    }
    Ok(best)
}

/// Cheapest subfamily covering every arrived element, over all `2^m` subfamilies.
pub fn brute_force_setcover(inst: &CoverInstance) -> Result<f64> {
    inst.validate()?;
    let m = inst.sets.len();
    if m > BRUTE_FORCE_SETS {
        return Err(too_large("set count", BRUTE_FORCE_SETS, m));
    }
    let need = inst.distinct_arrivals();
    let masks: Vec<Vec<bool>> = inst
        .sets
        .iter()
        .map(|s| {
            let mut v = vec![false; inst.n];
            for &e in &s.elems {
                v[e] = true;
            }
            v
        })
        .collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        let chosen = || (0..m).filter(move |&k| mask >> k & 1 == 1);
        if need.iter().all(|&e| chosen().any(|k| masks[k][e])) {
            best = best.min(chosen().map(|k| inst.sets[k].w).sum());
        }
    }
    if best.is_infinite() {
        return Err(PdlaError::Infeasible("some arrived element belongs to no set".into()));
    }
    Ok(best)
}
