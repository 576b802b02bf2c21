use std::fmt;
use std::str::FromStr;

use crate::bahncard::{check_bahncard_run, offline_opt_bahncard, run_pdla_bahncard};
use crate::common::SeededRng;
use crate::error::{PdlaError, Result};
use crate::instancegen::small;
use crate::lemmas::{check_tradeoff_inequalities, check_update_word, Letter};
use crate::oracles::{brute_force_bahncard, brute_force_setcover, brute_force_tcp};
use crate::setcover::{check_cover_dual_feasibility, offline_opt_setcover, run_pdla_setcover};
use crate::skirental::{check_ski_run, run_pdla_ski, verify_lower_bound_certificate};
use crate::tcpack::{check_tcp_run, offline_opt_tcp, run_pdla_tcp};

/// Seed shared by every randomized verification.
pub const VERIFY_SEED: u64 = 0x5eed;
/// Random instances per problem (and per `λ` for the dual suite).
pub const SUITE_SIZE: usize = 200;
pub const DUAL_LAMBDAS: [f64; 3] = [0.1, 0.5, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Lemmas,
    Certificates,
    Oracles,
    Duals,
    All,
}

impl FromStr for Scope {
    type Err = PdlaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(Scope::Lemmas),
            "certificates" => Ok(Scope::Certificates),
            "oracles" => Ok(Scope::Oracles),
            "duals" => Ok(Scope::Duals),
            "all" => Ok(Scope::All),
            _ => Err(PdlaError::domain(format!(
                "unknown scope {s:?}; expected lemmas, certificates, oracles, duals or all"
            ))),
        }
    }
}

/// One verified property.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyLine {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl fmt::Display for VerifyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn line(name: &str, ok: bool, detail: String) -> VerifyLine {
    VerifyLine {
        name: name.into(),
        ok,
        detail,
    }
}

pub fn verify(scope: Scope) -> Result<Vec<VerifyLine>> {
    let mut out = Vec::new();
    if matches!(scope, Scope::Lemmas | Scope::All) {
        out.push(tradeoff_grid()?);
        out.push(update_words()?);
    }
    if matches!(scope, Scope::Certificates | Scope::All) {
        out.push(certificates()?);
    }
    if matches!(scope, Scope::Oracles | Scope::All) {
        out.extend(oracles()?);
    }
    if matches!(scope, Scope::Duals | Scope::All) {
        out.extend(duals()?);
    }
    Ok(out)
}

/// `λ ∈ {0.01, …, 1}`, `β ∈ {0, 0.1, …, 1}`, `d` from 1 to `10⁴`.
pub fn tradeoff_grid() -> Result<VerifyLine> {
    let mut failures = 0;
    let mut points = 0;
    let mut worst = f64::INFINITY;
    for li in 1..=100 {
        let lambda = li as f64 / 100.0;
        for d in [1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 10_000.0] {
            for bi in 0..=10 {
                let c = check_tradeoff_inequalities(lambda, d, bi as f64 / 10.0, 1e-9)?;
                points += 1;
                failures += usize::from(!c.all());
                worst = c.margins.iter().copied().fold(worst, f64::min);
            }
        }
    }
    Ok(line(
        "tradeoff_grid",
        failures == 0,
        format!("{points} points, {failures} failing, smallest margin {worst:.3e}"),
    ))
}

/// Every word over `{a, b}` up to length 12 from `S_0 = 0`.
pub fn update_words() -> Result<VerifyLine> {
    let mut checked = 0usize;
    let mut failures = 0usize;
    for &lambda in &[0.1, 0.25, 0.5, 0.75, 1.0] {
        for &d in &[1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0] {
            for len in 0..=12u32 {
                for bits in 0u32..(1 << len) {
                    let word: Vec<Letter> = (0..len)
                        .map(|i| if bits >> i & 1 == 1 { Letter::B } else { Letter::A })
                        .collect();
                    let c = check_update_word(0.0, &word, lambda, d, 1e-9)?;
                    if c.premise_met {
                        checked += 1;
                        failures += usize::from(!c.satisfied);
                    }
                }
            }
        }
    }
    Ok(line(
        "update_words",
        failures == 0,
        format!("{checked} words meeting the premise, {failures} failing"),
    ))
}

/// `λ ∈ {0.1, …, 1}` on `10⁵` grid points.
pub fn certificates() -> Result<VerifyLine> {
    let mut worst_violation: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for i in 1..=10 {
        let c = verify_lower_bound_certificate(i as f64 / 10.0, 100_000)?;
        worst_violation = worst_violation.max(c.max_constraint_violation);
        let want = c.expected_objective();
        worst_rel = worst_rel.max((c.dual_objective - want).abs() / want);
    }
    Ok(line(
        "lower_bound_certificate",
        worst_violation <= 1e-6 && worst_rel <= 1e-8,
        format!("max violation {worst_violation:.3e}, objective error {worst_rel:.3e}"),
    ))
}

fn agreement(name: &str, pairs: impl Iterator<Item = Result<(f64, f64)>>) -> Result<VerifyLine> {
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for p in pairs {
        let (a, b) = p?;
        n += 1;
        worst = worst.max((a - b).abs());
    }
    Ok(line(
        name,
        worst <= 1e-9,
        format!("{n} instances, largest gap {worst:.3e}"),
    ))
}

pub fn oracles() -> Result<Vec<VerifyLine>> {
    let mut rng = SeededRng::new(VERIFY_SEED, 10);
    let tcp = agreement(
        "oracle_tcp",
        (0..SUITE_SIZE).map(|_| {
            let (i, _) = small::tcp(&mut rng);
            Ok((offline_opt_tcp(&i)?.0, brute_force_tcp(&i)?))
        }),
    )?;
    let mut rng = SeededRng::new(VERIFY_SEED, 11);
    let bahn = agreement(
        "oracle_bahncard",
        (0..SUITE_SIZE).map(|_| {
            let (i, _) = small::bahncard(&mut rng);
            Ok((offline_opt_bahncard(&i)?.0, brute_force_bahncard(&i)?))
        }),
    )?;
    let mut rng = SeededRng::new(VERIFY_SEED, 12);
    let cover = agreement(
        "oracle_setcover",
        (0..SUITE_SIZE).map(|_| {
            let (i, _) = small::setcover(&mut rng);
            Ok((offline_opt_setcover(&i)?.0, brute_force_setcover(&i)?))
        }),
    )?;
    Ok(vec![tcp, bahn, cover])
}

fn dual_line(name: &str, lambda: f64, worst_excess: f64, failures: usize) -> VerifyLine {
    line(
        &format!("{name}_lambda_{lambda}"),
        failures == 0,
        format!("{SUITE_SIZE} instances, {failures} failing, worst value/limit {worst_excess:.6}"),
    )
}

/// Dual scaling on random small instances for each problem and `λ`.
pub fn duals() -> Result<Vec<VerifyLine>> {
    let mut out = Vec::new();
    for (k, &lambda) in DUAL_LAMBDAS.iter().enumerate() {
        let stream = 20 + 4 * k as u64;
        let (mut worst, mut bad) = (0.0f64, 0);
        let mut rng = SeededRng::new(VERIFY_SEED, stream);
        for _ in 0..SUITE_SIZE {
            let (i, p) = small::setcover(&mut rng);
            let r = run_pdla_setcover(&i, &p, lambda)?;
            let c = check_cover_dual_feasibility(&r, &i, lambda);
            worst = worst.max(c.value / c.limit);
            bad += usize::from(!c.ok);
        }
        out.push(dual_line("dual_setcover", lambda, worst, bad));

        let (mut worst, mut bad) = (0.0f64, 0);
        let mut rng = SeededRng::new(VERIFY_SEED, stream + 1);
        for _ in 0..SUITE_SIZE {
            let (i, p) = small::ski(&mut rng);
            let r = run_pdla_ski(&i, &p, lambda)?;
            let c = check_ski_run(&r, &i, lambda);
            worst = worst.max(c.dual.value / c.dual.limit);
            bad += usize::from(!c.all_ok());
        }
        out.push(dual_line("dual_ski", lambda, worst, bad));

        let (mut worst, mut bad) = (0.0f64, 0);
        let mut rng = SeededRng::new(VERIFY_SEED, stream + 2);
        for _ in 0..SUITE_SIZE {
            let (i, p) = small::tcp(&mut rng);
            let r = run_pdla_tcp(&i, &p, lambda)?;
            let c = check_tcp_run(&r, &i, lambda);
            worst = worst.max(c.dual.value / c.dual.limit);
            bad += usize::from(!c.all_ok());
        }
        out.push(dual_line("dual_tcp", lambda, worst, bad));

        let (mut worst, mut bad) = (0.0f64, 0);
        let mut rng = SeededRng::new(VERIFY_SEED, stream + 3);
        for _ in 0..SUITE_SIZE {
            let (i, p) = small::bahncard(&mut rng);
            let r = run_pdla_bahncard(&i, &p, lambda)?;
            let c = check_bahncard_run(&r, &i, lambda);
            worst = worst.max(c.dual.value / c.dual.limit);
            bad += usize::from(!c.all_ok());
        }
        out.push(dual_line("dual_bahncard", lambda, worst, bad));
    }
    Ok(out)
}
