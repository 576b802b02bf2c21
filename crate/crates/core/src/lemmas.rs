//! Numeric checks of the inequalities the consistency and robustness proofs lean on.
//!
//! Two of the limit-form inequalities have no closed-form proof and are only ever
//! checked on a grid; these functions are that grid check.

use crate::common::check_lambda;
use crate::error::{PdlaError, Result};

/// Per-inequality outcome of [`check_tradeoff_inequalities`]. Index `i` holds inequality `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TradeoffCheck {
    pub holds: [bool; 6],
    /// `LHS - RHS` of each inequality.
    pub margins: [f64; 6],
}

impl TradeoffCheck {
    pub fn all(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

/// Evaluates the six trade-off inequalities at `(lambda, d, beta)`:
///
/// 1. `λ/(1-e^-λ) ≥ 1/(1-e^-1/λ)`
/// 2. the same with `(1+1/d)^(λd)` and `(1+1/d)^(d/λ)` in place of the exponentials
/// 3. `1/(e^λ-1) ≥ ((1-λ)/λ·e^(1/λ) + 1)/(e^(1/λ)-1)`
/// 4. the finite-`d` form of 3
/// 5. `λ/(1-β+βλ) · (e^λ-β)/(e^λ-1) ≥ (e^(1/λ)-β)/(e^(1/λ)-1)`
/// 6. `(λ+β-βλ) · (e^λ-β)/(e^λ-1) ≥ (e^(1/λ)-β)/(e^(1/λ)-1)`
///
/// An inequality holds when `LHS ≥ RHS - eps`.
pub fn check_tradeoff_inequalities(lambda: f64, d: f64, beta: f64, eps: f64) -> Result<TradeoffCheck> {
    check_lambda(lambda)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(PdlaError::domain(format!("d must be positive, got {d}")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(PdlaError::domain(format!("beta must lie in [0, 1], got {beta}")));
    }
    let inv = 1.0 / lambda;
    // exponents of the limit and finite-d forms
    let log_step = (1.0 / d).ln_1p() * d;
    let (lo, hi) = (lambda, inv);
    let (lo_d, hi_d) = (lambda * log_step, inv * log_step);

    let ratio_form = |a: f64, b: f64| {
        let lhs = lambda / -(-a).exp_m1();
        let rhs = 1.0 / -(-b).exp_m1();
        lhs - rhs
    };
    let delay_form = |a: f64, b: f64| {
        let lhs = 1.0 / a.exp_m1();
        let rhs = (1.0 - lambda) * inv / -(-b).exp_m1() + 1.0 / b.exp_m1();
        lhs - rhs
    };
    // (e^z - β)/(e^z - 1) = 1 + (1-β)/(e^z - 1)
    let discount = |z: f64| 1.0 + (1.0 - beta) / z.exp_m1();

    let margins = [
        ratio_form(lo, hi),
        ratio_form(lo_d, hi_d),
        delay_form(lo, hi),
        delay_form(lo_d, hi_d),
        lambda / (1.0 - beta + beta * lambda) * discount(lo) - discount(hi),
        (lambda + beta - beta * lambda) * discount(lo) - discount(hi),
    ];
    let holds = margins.map(|m| m >= -eps);
    Ok(TradeoffCheck { holds, margins })
}

/// A letter of the update words in [`check_update_word`]: `A` is a big step, `B` a small one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WordCheck {
    pub final_value: f64,
    /// Whether `|w|_a + λ|w|_b ≥ d`.
    pub premise_met: bool,
    pub satisfied: bool,
}

/// Runs the sum recurrence along `word` starting from `s0`.
///
/// `A` applies `f(x) = (1+1/d)x + 1/(d((1+1/d)^(λd) - 1))` and `B` applies `g`, the
/// same with exponent `d/λ`. Once `|w|_a + λ|w|_b ≥ d` the value must have reached 1.
pub fn check_update_word(s0: f64, word: &[Letter], lambda: f64, d: f64, eps: f64) -> Result<WordCheck> {
    check_lambda(lambda)?;
    if !(d > 0.0 && d.is_finite()) {
        return Err(PdlaError::domain(format!("d must be positive, got {d}")));
    }
    if !(s0 >= 0.0 && s0.is_finite()) {
        return Err(PdlaError::domain(format!(
            "S0 must be finite and nonnegative, got {s0}"
        )));
    }
    let log_step = (1.0 / d).ln_1p() * d;
    let growth = 1.0 + 1.0 / d;
    let big = 1.0 / (d * (lambda * log_step).exp_m1());
    let small = 1.0 / (d * (log_step / lambda).exp_m1());

    let mut x = s0;
    let (mut a, mut b) = (0usize, 0usize);
    for l in word {
        match l {
            Letter::A => {
                x = growth * x + big;
                a += 1;
            }
            Letter::B => {
                x = growth * x + small;
                b += 1;
            }
        }
    }
    let weight = a as f64 + lambda * b as f64;
    let premise_met = weight >= d * (1.0 - 1e-12);
    Ok(WordCheck {
        final_value: x,
        premise_met,
        satisfied: !premise_met || x >= 1.0 - eps,
    })
}

/// Parses a word over `{a, b}`.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            other => Err(PdlaError::domain(format!(
                "word letters must be 'a' or 'b', got {other:?}"
            ))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    #[test]
    fn lambda_one_is_tight() {
        let c = check_tradeoff_inequalities(1.0, 7.0, 0.3, EPS).unwrap();
        assert!(c.all());
        for i in [0, 1, 2, 3, 4, 5] {
            assert!(
                c.margins[i].abs() < 1e-12,
                "inequality {} margin {}",
                i + 1,
                c.margins[i]
            );
        }
    }

    #[test]
    fn beta_one_makes_discount_forms_tight() {
        let c = check_tradeoff_inequalities(0.4, 10.0, 1.0, EPS).unwrap();
        assert!(c.margins[4].abs() < 1e-12);
        assert!(c.margins[5].abs() < 1e-12);
        assert!(c.all());
    }

    #[test]
    fn interior_point_holds() {
        let c = check_tradeoff_inequalities(0.5, 100.0, 0.3, EPS).unwrap();
        assert!(c.all());
        // (1) at λ = 0.5: 0.5/(1-e^-0.5) - 1/(1-e^-2), evaluated independently
        let want = 0.5 / (1.0 - (-0.5f64).exp()) - 1.0 / (1.0 - (-2.0f64).exp());
        assert!((c.margins[0] - want).abs() < 1e-12);
        assert!(c.margins[0] > 0.1);
    }

    #[test]
    fn domain_errors() {
        assert!(check_tradeoff_inequalities(0.0, 1.0, 0.0, EPS).is_err());
        assert!(check_tradeoff_inequalities(1.5, 1.0, 0.0, EPS).is_err());
        assert!(check_tradeoff_inequalities(0.5, 0.0, 0.0, EPS).is_err());
        assert!(check_tradeoff_inequalities(0.5, 1.0, 1.5, EPS).is_err());
        assert!(check_update_word(0.0, &[], 0.0, 1.0, EPS).is_err());
        assert!(check_update_word(0.0, &[], 0.5, -1.0, EPS).is_err());
    }

    #[test]
    fn empty_word_is_vacuous() {
        let c = check_update_word(0.0, &[], 0.5, 4.0, EPS).unwrap();
        assert_eq!(c.final_value, 0.0);
        assert!(!c.premise_met);
        assert!(c.satisfied);
    }

    #[test]
    fn four_big_steps_reach_one() {
        let w = parse_word("aaaa").unwrap();
        let c = check_update_word(0.0, &w, 0.5, 4.0, EPS).unwrap();
        // unrolled: x_k = ((5/4)^k - 1)/((5/4)^2 - 1), so x_4 = (625/256 - 1)/(9/16)
        let want = (625.0 / 256.0 - 1.0) / (9.0 / 16.0);
        assert!((c.final_value - want).abs() < 1e-12);
        assert!(c.premise_met && c.satisfied);
    }

    #[test]
    fn eight_small_steps_reach_one() {
        let w = parse_word("bbbbbbbb").unwrap();
        let c = check_update_word(0.0, &w, 0.5, 4.0, EPS).unwrap();
        // x_k = ((5/4)^k - 1)/((5/4)^8 - 1), so x_8 = 1
        assert!((c.final_value - 1.0).abs() < 1e-12);
        assert!(c.premise_met && c.satisfied);
    }

    #[test]
    fn parse_rejects_other_letters() {
        assert!(parse_word("abc").is_err());
        assert_eq!(parse_word("ba").unwrap(), vec![Letter::B, Letter::A]);
    }
}
