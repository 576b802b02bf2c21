use serde::Deserialize;

use super::report::{ratio, CheckResult, RunReport};
use super::Problem;
use crate::bahncard::{
    bahncard_bounds, check_bahncard_run, round_bahncard, run_pdla_bahncard, BahncardInstance, BahncardPrediction,
};
use crate::common::{BoundCheck, SeededRng};
use crate::error::Result;
use crate::setcover::{
    check_cover_dual_feasibility, check_cover_iterations, dual_scaling_limit, offline_opt_setcover,
    prediction_cost_setcover, run_pdla_setcover, CoverInstance, CoverPrediction, MAX_OPT_SETS,
};
use crate::skirental::{check_ski_run, round_ski, run_pdla_ski, ski_bounds, SkiInstance, SkiPrediction};
use crate::tcpack::{
    check_tcp_run, offline_opt_tcp, prediction_cost_tcp, round_tcp, run_pdla_tcp, tcp_bounds, TcpInstance,
    TcpPrediction,
};

/// Relative slack on end-to-end cost bounds.
pub const BOUND_TOL: f64 = 1e-9;
const LEDGER_TOL: f64 = 1e-9;

/// Ski rental input: the instance and, optionally, the prediction and `λ` in one object.
#[derive(Clone, Copy, Debug, Deserialize)]
pub struct SkiInput {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub n_pred: Option<u64>,
    pub lambda: Option<f64>,
}

/// Parses the instance (and prediction, if given) for `problem` and runs it.
///
/// `lambda` overrides any value in the ski input; without either it is 1.
pub fn run_from_json(
    problem: Problem,
    instance: &str,
    prediction: Option<&str>,
    lambda: Option<f64>,
    seed: u64,
) -> Result<RunReport> {
    let mut rng = SeededRng::new(seed, 0);
    match problem {
        Problem::SetCover => {
            let inst: CoverInstance = serde_json::from_str(instance)?;
            let pred: CoverPrediction = prediction.map(serde_json::from_str).transpose()?.unwrap_or_default();
            report_setcover(&inst, &pred, lambda.unwrap_or(1.0))
        }
        Problem::Ski => {
            let input: SkiInput = serde_json::from_str(instance)?;
            let inst = SkiInstance { n: input.n, b: input.b };
            let pred = match prediction {
                Some(p) => serde_json::from_str(p)?,
                None => SkiPrediction {
                    n_pred: input.n_pred.unwrap_or(input.n),
                },
            };
            report_ski(&inst, &pred, lambda.or(input.lambda).unwrap_or(1.0), &mut rng)
        }
        Problem::Bahncard => {
            let inst: BahncardInstance = serde_json::from_str(instance)?;
            let pred: BahncardPrediction = prediction.map(serde_json::from_str).transpose()?.unwrap_or_default();
            report_bahncard(&inst, &pred, lambda.unwrap_or(1.0), &mut rng)
        }
        Problem::Tcp => {
            let inst: TcpInstance = serde_json::from_str(instance)?;
            let pred: TcpPrediction = prediction.map(serde_json::from_str).transpose()?.unwrap_or_default();
            report_tcp(&inst, &pred, lambda.unwrap_or(1.0), &mut rng)
        }
    }
}

fn cost_within(name: &str, cost: f64, bound: f64) -> CheckResult {
    CheckResult::bound(name, BoundCheck::relative(cost, bound, BOUND_TOL))
}

pub fn report_setcover(inst: &CoverInstance, pred: &CoverPrediction, lambda: f64) -> Result<RunReport> {
    let run = run_pdla_setcover(inst, pred, lambda)?;
    let (s_cost, pred_feasible) = prediction_cost_setcover(inst, pred);
    let d = run.max_degree.max(1);
    let factor = dual_scaling_limit(d, lambda);
    let mut notes = Vec::new();
    let opt = if inst.sets.len() <= MAX_OPT_SETS {
        Some(offline_opt_setcover(inst)?.0)
    } else {
        notes.push(format!("optimum skipped: more than {MAX_OPT_SETS} sets"));
        None
    };
    if !pred_feasible {
        notes.push("prediction leaves some arrival uncovered".into());
    }
    let it = check_cover_iterations(&run, lambda);
    let x_max = run.x.values().iter().copied().fold(0.0, f64::max);
    let cost = run.cost();
    let robustness = opt.map(|o| 2.0 * factor * o);
    let mut checks = vec![
        CheckResult::bound("dual_scaling", check_cover_dual_feasibility(&run, inst, lambda)),
        CheckResult::bound("primal_dual_ratio", it.primal_dual_ratio),
        CheckResult::bound("charging", it.charging),
        CheckResult::bound("exact_increment", it.exact_increment),
        CheckResult::bound("x_max", BoundCheck::absolute(x_max, 3.0, 1e-9)),
        // weak duality: OPT_frac ≥ D / factor, and P ≤ 2D
        cost_within("cost_vs_dual", cost, 2.0 * run.ledger.dual_total),
        CheckResult::flag("ledger_balanced", run.ledger.is_balanced(LEDGER_TOL)),
    ];
    if let Some(r) = robustness {
        checks.push(cost_within("robustness", cost, r));
    }
    Ok(RunReport {
        problem: Problem::SetCover.name().into(),
        lambda,
        alg_cost: cost,
        primal_objective: run.objective(inst),
        dual_cost: run.ledger.dual_total,
        opt_cost: opt,
        pred_cost: Some(s_cost),
        ratio: opt.and_then(|o| ratio(cost, o)),
        consistency_bound: None,
        robustness_bound: robustness,
        rounded_cost: None,
        checks,
        all_checks_ok: false,
        notes,
    }
    .finish())
}

pub fn report_ski(inst: &SkiInstance, pred: &SkiPrediction, lambda: f64, rng: &mut SeededRng) -> Result<RunReport> {
    let run = run_pdla_ski(inst, pred, lambda)?;
    let b = ski_bounds(inst, pred, lambda)?;
    let c = check_ski_run(&run, inst, lambda);
    let cost = run.cost();
    let checks = vec![
        CheckResult::bound("dual", c.dual),
        CheckResult::bound("updates", c.updates),
        CheckResult::bound("update_cost", c.update_cost),
        CheckResult::flag("feasible", c.feasible),
        cost_within("bound", cost, b.best()),
        CheckResult::flag("ledger_balanced", run.ledger.is_balanced(LEDGER_TOL)),
    ];
    let primal = run.f().iter().sum::<f64>() + inst.b as f64 * run.x();
    Ok(RunReport {
        problem: Problem::Ski.name().into(),
        lambda,
        alg_cost: cost,
        primal_objective: primal,
        dual_cost: run.dual_total(),
        opt_cost: Some(b.opt),
        pred_cost: Some(b.s_cost),
        ratio: ratio(cost, b.opt),
        consistency_bound: Some(b.consistency),
        robustness_bound: Some(b.robustness),
        rounded_cost: Some(round_ski(&run, inst, rng)),
        checks,
        all_checks_ok: false,
        notes: vec![],
    }
    .finish())
}

pub fn report_bahncard(
    inst: &BahncardInstance,
    pred: &BahncardPrediction,
    lambda: f64,
    rng: &mut SeededRng,
) -> Result<RunReport> {
    let run = run_pdla_bahncard(inst, pred, lambda)?;
    let b = bahncard_bounds(inst, pred, lambda)?;
    let c = check_bahncard_run(&run, inst, lambda);
    let cost = run.cost();
    let checks = vec![
        CheckResult::bound("dual", c.dual),
        CheckResult::bound("dual_box", c.dual_box),
        CheckResult::bound("ratio", c.ratio),
        CheckResult::bound("interval", c.interval),
        CheckResult::bound("outside", c.outside),
        CheckResult::bound("update_cost", c.update_cost),
        CheckResult::flag("feasible", c.feasible),
        cost_within("bound", cost, b.best()),
        CheckResult::flag("ledger_balanced", run.ledger.is_balanced(LEDGER_TOL)),
    ];
    let mut notes = Vec::new();
    if run.postponed > 0 {
        notes.push(format!("{} overlapping predicted cards postponed", run.postponed));
    }
    Ok(RunReport {
        problem: Problem::Bahncard.name().into(),
        lambda,
        alg_cost: cost,
        primal_objective: run.objective(inst),
        dual_cost: run.ledger.dual_total,
        opt_cost: Some(b.opt),
        pred_cost: Some(b.s_cost),
        ratio: ratio(cost, b.opt),
        consistency_bound: Some(b.consistency),
        robustness_bound: Some(b.robustness),
        rounded_cost: Some(round_bahncard(&run, inst, rng)),
        checks,
        all_checks_ok: false,
        notes,
    }
    .finish())
}

pub fn report_tcp(inst: &TcpInstance, pred: &TcpPrediction, lambda: f64, rng: &mut SeededRng) -> Result<RunReport> {
    let run = run_pdla_tcp(inst, pred, lambda)?;
    let (opt, _) = offline_opt_tcp(inst)?;
    let b = tcp_bounds(inst, pred, lambda, opt)?;
    let pc = prediction_cost_tcp(inst, pred);
    let c = check_tcp_run(&run, inst, lambda);
    let cost = run.cost();
    let mut checks = vec![
        CheckResult::bound("dual", c.dual),
        CheckResult::bound("ack_load", c.ack_load),
        CheckResult::bound("update_cost", c.update_cost),
        CheckResult::flag("feasible", c.feasible),
        cost_within("robustness", cost, b.robustness),
        CheckResult::flag("ledger_balanced", run.ledger.is_balanced(LEDGER_TOL)),
    ];
    let mut notes = Vec::new();
    match b.consistency {
        Some(cb) => checks.push(cost_within("consistency", cost, cb)),
        None => notes.push("prediction never acks some packet; consistency bound undefined".into()),
    }
    Ok(RunReport {
        problem: Problem::Tcp.name().into(),
        lambda,
        alg_cost: cost,
        primal_objective: run.objective(),
        dual_cost: run.ledger.dual_total,
        opt_cost: Some(opt),
        pred_cost: pc.s_cost,
        ratio: ratio(cost, opt),
        consistency_bound: b.consistency,
        robustness_bound: Some(b.robustness),
        rounded_cost: Some(round_tcp(&run, rng)),
        checks,
        all_checks_ok: false,
        notes,
    }
    .finish())
}
