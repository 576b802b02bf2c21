use serde::Serialize;

use crate::common::BoundCheck;

/// One named inequality from a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub value: f64,
    pub limit: f64,
}

impl CheckResult {
    pub fn bound(name: &str, b: BoundCheck) -> Self {
        CheckResult {
            name: name.to_string(),
            ok: b.ok,
            value: b.value,
            limit: b.limit,
        }
    }

    /// A yes/no property, reported as value 1 against limit 1.
    pub fn flag(name: &str, ok: bool) -> Self {
        CheckResult {
            name: name.to_string(),
            ok,
            value: if ok { 1.0 } else { 0.0 },
            limit: 1.0,
        }
    }
}

/// What `pdla run` prints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub lambda: f64,
    /// Fractional cost from the ledger.
    pub alg_cost: f64,
    /// Primal objective recomputed from the final variables.
    pub primal_objective: f64,
    pub dual_cost: f64,
    pub opt_cost: Option<f64>,
    /// Cost of following the prediction, when defined.
    pub pred_cost: Option<f64>,
    pub ratio: Option<f64>,
    pub consistency_bound: Option<f64>,
    pub robustness_bound: Option<f64>,
    /// One sample of the randomized integral algorithm.
    pub rounded_cost: Option<f64>,
    pub checks: Vec<CheckResult>,
    pub all_checks_ok: bool,
    pub notes: Vec<String>,
}

impl RunReport {
    pub(crate) fn finish(mut self) -> Self {
        self.all_checks_ok = self.checks.iter().all(|c| c.ok);
        self
    }
}

/// `alg/opt`, taking `0/0` as 1.
pub fn ratio(alg: f64, opt: f64) -> Option<f64> {
    if opt > 0.0 {
        Some(alg / opt)
    } else if alg == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

/// Formats `v` with 12 significant digits, trailing zeros dropped.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let s = if (-5..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    format!("{mant}{exp}")
}
