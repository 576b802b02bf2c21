use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use super::report::fmt_sig;
use super::run::BOUND_TOL;
use crate::common::{check_lambda, mix_seed, BoundCheck, SeededRng};
use crate::error::{PdlaError, Result};
use crate::instancegen::{generate, make_prediction, perturb, DistributionSpec};
use crate::tcpack::{check_tcp_run, offline_opt_tcp, prediction_cost_tcp, run_pdla_tcp, tcp_bounds, TcpInstance};

/// Stream used for the real instance of a `(dist, trial)` pair.
pub const INSTANCE_STREAM: u64 = 0;
/// Stream used for the replacement noise of a `(dist, p, trial)` cell.
pub const NOISE_STREAM: u64 = 1;

pub const CSV_HEADER: [&str; 13] = [
    "problem",
    "dist",
    "lambda",
    "replacement_rate",
    "trial",
    "seed",
    "alg_cost",
    "opt_cost",
    "pred_cost",
    "ratio",
    "consistency_bound",
    "robustness_bound",
    "all_checks_ok",
];

pub const AGGREGATE_HEADER: [&str; 5] = ["dist", "lambda", "replacement_rate", "trials", "mean_ratio"];

/// The TCP experiment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub dists: Vec<DistributionSpec>,
    pub lambdas: Vec<f64>,
    pub replacement_rates: Vec<f64>,
    pub trials: usize,
    pub length: usize,
    pub d: u64,
    pub base_seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            dists: vec![
                DistributionSpec::POISSON,
                DistributionSpec::LOMAX,
                DistributionSpec::ITERATED_POISSON,
            ],
            lambdas: vec![1.0, 0.8, 0.6, 0.4],
            replacement_rates: (0..=10).map(|i| i as f64 / 10.0).collect(),
            trials: 10,
            length: 1000,
            d: 100,
            base_seed: 0,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(PdlaError::domain("trials must be at least 1"));
        }
        if self.d == 0 {
            return Err(PdlaError::domain("d must be at least 1"));
        }
        for &l in &self.lambdas {
            check_lambda(l)?;
        }
        for &p in &self.replacement_rates {
            if !(0.0..=1.0).contains(&p) {
                return Err(PdlaError::domain(format!("replacement rate {p} outside [0, 1]")));
            }
        }
        for d in &self.dists {
            d.validate()?;
        }
        Ok(())
    }

    /// Seed of the real instance for `(dist, trial)`; shared by every `p` and `λ`.
    pub fn instance_seed(&self, dist: usize, trial: usize) -> u64 {
        mix_seed(self.base_seed, &[dist as u64, trial as u64])
    }

    /// Seed of the noise for `(dist, p, trial)`; shared by every `λ`.
    pub fn cell_seed(&self, dist: usize, rate: usize, trial: usize) -> u64 {
        mix_seed(self.base_seed, &[dist as u64, rate as u64, trial as u64])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub problem: &'static str,
    pub dist: &'static str,
    pub lambda: f64,
    pub replacement_rate: f64,
    pub trial: usize,
    pub seed: u64,
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub pred_cost: f64,
    pub ratio: f64,
    pub consistency_bound: f64,
    pub robustness_bound: f64,
    pub all_checks_ok: bool,
    /// Grid position, for ordering.
    pub key: (usize, usize, usize, usize),
}

/// Runs one `(dist, p, trial)` cell for every `λ`.
fn run_cell(spec: &SweepSpec, di: usize, pi: usize, trial: usize) -> Result<Vec<SweepRow>> {
    let dist = &spec.dists[di];
    let p = spec.replacement_rates[pi];
    let mut rng = SeededRng::new(spec.instance_seed(di, trial), INSTANCE_STREAM);
    let counts = generate(dist, spec.length, &mut rng)?;
    let real = TcpInstance { d: spec.d, counts };
    let seed = spec.cell_seed(di, pi, trial);
    let mut noise = SeededRng::new(seed, NOISE_STREAM);
    let perturbed = TcpInstance {
        d: spec.d,
        counts: perturb(&real.counts, p, dist, &mut noise)?,
    };
    let pred = make_prediction(&perturbed, &real)?;
    let (opt, _) = offline_opt_tcp(&real)?;
    let pc = prediction_cost_tcp(&real, &pred);

    spec.lambdas
        .iter()
        .enumerate()
        .map(|(li, &lambda)| {
            let run = run_pdla_tcp(&real, &pred, lambda)?;
            let bounds = tcp_bounds(&real, &pred, lambda, opt)?;
            let cost = run.cost();
            let consistency = bounds.consistency.unwrap_or(f64::NAN);
            let ok = check_tcp_run(&run, &real, lambda).all_ok()
                && run.ledger.is_balanced(1e-9)
                && BoundCheck::relative(cost, bounds.robustness, BOUND_TOL).ok
                && bounds
                    .consistency
                    .is_some_and(|c| BoundCheck::relative(cost, c, BOUND_TOL).ok);
            Ok(SweepRow {
                problem: "tcp",
                dist: dist.name(),
                lambda,
                replacement_rate: p,
                trial,
                seed,
                alg_cost: cost,
                opt_cost: opt,
                pred_cost: pc.s_cost.unwrap_or(f64::NAN),
                ratio: if opt > 0.0 { cost / opt } else { 1.0 },
                consistency_bound: consistency,
                robustness_bound: bounds.robustness,
                all_checks_ok: ok,
                key: (di, li, pi, trial),
            })
        })
        .collect()
}

/// Runs the whole grid in parallel. Rows come back ordered by distribution,
/// `λ`, replacement rate and trial.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let cells: Vec<(usize, usize, usize)> = (0..spec.dists.len())
        .flat_map(|d| (0..spec.replacement_rates.len()).flat_map(move |p| (0..spec.trials).map(move |t| (d, p, t))))
        .collect();
    let nested: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(d, p, t)| run_cell(spec, d, p, t))
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(|r| r.key);
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.problem.to_string(),
            r.dist.to_string(),
            fmt_sig(r.lambda),
            fmt_sig(r.replacement_rate),
            r.trial.to_string(),
            r.seed.to_string(),
            fmt_sig(r.alg_cost),
            fmt_sig(r.opt_cost),
            fmt_sig(r.pred_cost),
            fmt_sig(r.ratio),
            fmt_sig(r.consistency_bound),
            fmt_sig(r.robustness_bound),
            r.all_checks_ok.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean ratio over trials for one `(dist, λ, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub dist: &'static str,
    pub lambda: f64,
    pub replacement_rate: f64,
    pub trials: usize,
    pub mean_ratio: f64,
}

pub fn aggregate(rows: &[SweepRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(usize, usize, usize), AggregateRow> = BTreeMap::new();
    for r in rows {
        let g = groups.entry((r.key.0, r.key.1, r.key.2)).or_insert(AggregateRow {
            dist: r.dist,
            lambda: r.lambda,
            replacement_rate: r.replacement_rate,
            trials: 0,
            mean_ratio: 0.0,
        });
        g.trials += 1;
        g.mean_ratio += r.ratio;
    }
    groups
        .into_values()
        .map(|mut g| {
            g.mean_ratio /= g.trials as f64;
            g
        })
        .collect()
}

pub fn write_aggregate<W: Write>(rows: &[AggregateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        w.write_record([
            r.dist.to_string(),
            fmt_sig(r.lambda),
            fmt_sig(r.replacement_rate),
            r.trials.to_string(),
            fmt_sig(r.mean_ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepSpec {
        SweepSpec {
            dists: vec![DistributionSpec::POISSON],
            lambdas: vec![1.0, 0.5],
            replacement_rates: vec![0.0, 0.5, 1.0],
            trials: 2,
            length: 40,
            d: 10,
            base_seed: 7,
        }
    }

    #[test]
    fn grid_shape_and_order() {
        let rows = run_sweep(&tiny()).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 2);
        assert!(rows.windows(2).all(|w| w[0].key < w[1].key));
        assert!(rows.iter().all(|r| r.all_checks_ok));
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 6);
        assert!(agg.iter().all(|a| a.trials == 2));
    }

    #[test]
    fn lambda_one_ignores_the_prediction() {
        let rows = run_sweep(&tiny()).unwrap();
        for trial in 0..2 {
            let costs: Vec<f64> = rows
                .iter()
                .filter(|r| r.lambda == 1.0 && r.trial == trial)
                .map(|r| r.alg_cost)
                .collect();
            assert!(costs.windows(2).all(|w| w[0] == w[1]), "{costs:?}");
        }
    }

    #[test]
    fn csv_is_byte_stable() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_rows(&run_sweep(&tiny()).unwrap(), &mut a).unwrap();
        write_rows(&run_sweep(&tiny()).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("problem,dist,lambda,replacement_rate,trial,seed,"));
    }

    #[test]
    fn rejects_bad_grids() {
        let mut s = tiny();
        s.trials = 0;
        assert!(run_sweep(&s).is_err());
        let mut s = tiny();
        s.lambdas = vec![1.5];
        assert!(run_sweep(&s).is_err());
    }
}
