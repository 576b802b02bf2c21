use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pdla::common::SeededRng;
use pdla::harness::{
    aggregate, run_from_json, run_sweep, verify, with_pool, write_aggregate, write_rows, Problem, Scope, SweepSpec,
    INSTANCE_STREAM, NOISE_STREAM,
};
use pdla::instancegen::{generate, make_prediction, perturb, DistributionSpec};
use pdla::tcpack::TcpInstance;
use pdla::{PdlaError, Result};

#[derive(Parser)]
#[command(
    name = "pdla",
    version,
    about = "Learning-augmented primal-dual online covering algorithms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one instance and print a JSON report; exits 1 if any check fails.
    Run {
        /// setcover, ski, bahncard or tcp.
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        prediction: Option<PathBuf>,
        /// Trust parameter in (0, 1]; defaults to the ski input's value, then 1.
        #[arg(long)]
        lambda: Option<f64>,
        /// Seed for the rounded sample.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep the TCP experiment grid and write per-trial and aggregate CSVs.
    Sweep {
        /// Distributions to include; all three by default.
        #[arg(long = "dist", value_parser = parse_dist)]
        dists: Vec<DistributionSpec>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.8, 0.6, 0.4])]
        lambdas: Vec<f64>,
        /// Replacement rates; 0, 0.1, ..., 1 by default.
        #[arg(long, value_delimiter = ',')]
        rates: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        length: usize,
        #[arg(long, default_value_t = 100)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial rows.
        #[arg(long)]
        out: PathBuf,
        /// Mean ratio per (dist, lambda, rate); defaults to `<out>` with an `_aggregate` suffix.
        #[arg(long)]
        aggregate: Option<PathBuf>,
    },
    /// Run the verification suites at pinned seeds; exits 1 on any failure.
    Verify {
        /// lemmas, certificates, oracles, duals or all.
        #[arg(long, default_value = "all", value_parser = parse_scope)]
        scope: Scope,
    },
    /// Draw a TCP instance, and optionally a prediction from a perturbed copy.
    Generate {
        #[arg(long, default_value = "poisson", value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, default_value_t = 1000)]
        length: usize,
        #[arg(long, default_value_t = 100)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        replacement_rate: f64,
        /// Instance destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the prediction built from the perturbed instance.
        #[arg(long)]
        prediction_out: Option<PathBuf>,
    },
}

fn parse_problem(s: &str) -> std::result::Result<Problem, String> {
    s.parse().map_err(|e: PdlaError| e.to_string())
}

fn parse_dist(s: &str) -> std::result::Result<DistributionSpec, String> {
    DistributionSpec::from_name(s).map_err(|e| e.to_string())
}

fn parse_scope(s: &str) -> std::result::Result<Scope, String> {
    s.parse().map_err(|e: PdlaError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

fn aggregate_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}_aggregate.csv"))
}

/// Returns whether every check passed.
fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Run {
            problem,
            instance,
            prediction,
            lambda,
            seed,
        } => {
            let inst = fs::read_to_string(&instance)?;
            let pred = prediction.map(fs::read_to_string).transpose()?;
            let report = run_from_json(problem, &inst, pred.as_deref(), lambda, seed)?;
            for n in &report.notes {
                eprintln!("note: {n}");
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.all_checks_ok)
        }
        Cmd::Sweep {
            dists,
            lambdas,
            rates,
            trials,
            length,
            d,
            seed,
            out,
            aggregate: agg_out,
        } => {
            let mut spec = SweepSpec {
                lambdas,
                trials,
                length,
                d,
                base_seed: seed,
                ..SweepSpec::default()
            };
            if !dists.is_empty() {
                spec.dists = dists;
            }
            if !rates.is_empty() {
                spec.replacement_rates = rates;
            }
            let rows = with_pool(|| run_sweep(&spec))??;
            write_rows(&rows, BufWriter::new(File::create(&out)?))?;
            let agg_path = agg_out.unwrap_or_else(|| aggregate_path(&out));
            write_aggregate(&aggregate(&rows), BufWriter::new(File::create(&agg_path)?))?;
            let failed = rows.iter().filter(|r| !r.all_checks_ok).count();
            eprintln!(
                "{} rows to {}, aggregate to {}, {failed} rows with failed checks",
                rows.len(),
                out.display(),
                agg_path.display()
            );
            Ok(failed == 0)
        }
        Cmd::Verify { scope } => {
            let lines = with_pool(|| verify(scope))??;
            for l in &lines {
                println!("{l}");
            }
            Ok(lines.iter().all(|l| l.ok))
        }
        Cmd::Generate {
            dist,
            length,
            d,
            seed,
            replacement_rate,
            out,
            prediction_out,
        } => {
            let mut rng = SeededRng::new(seed, INSTANCE_STREAM);
            let real = TcpInstance {
                d,
                counts: generate(&dist, length, &mut rng)?,
            };
            real.validate()?;
            write_json(out.as_deref(), &real)?;
            if let Some(p) = prediction_out {
                let mut noise = SeededRng::new(seed, NOISE_STREAM);
                let perturbed = TcpInstance {
                    d,
                    counts: perturb(&real.counts, replacement_rate, &dist, &mut noise)?,
                };
                write_json(Some(&p), &make_prediction(&perturbed, &real)?)?;
            } else if replacement_rate != 0.0 {
                eprintln!("note: --replacement-rate only affects --prediction-out");
            }
            Ok(true)
        }
    }
}
