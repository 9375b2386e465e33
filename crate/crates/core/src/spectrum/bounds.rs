//! Closed-form statements about `λ(G(n, r, s))`, evaluated against the exact
//! spectrum.
//!
//! Each [`Theorem`] yields a [`BoundReport`] carrying the predicted quantity,
//! the exact `λ`, and their ratio. Exact statements (Kneser, Brouwer, the
//! `G(4s, 2s, s)` identity) additionally report whether equality holds; the
//! asymptotic ones only report ratios, whose trend is for the caller to judge.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::eigen::{eigenvalue_formula_b, full_spectrum};
use super::params::{degree, GraphParams};
use crate::exactmath::{choose, integer, ratio, BigInt, BigRational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Kneser graphs: `λ(G(n, r, 0)) = r/(n-r) d`.
    Lovasz,
    /// `(r-s)(n-1) >= r(n-r)` implies `λ = |E_{r-s}(1)| = |sn - r²|/(r(n-r)) d`.
    Brouwer,
    /// `λ(G(4s, 2s, s)) = |E_s(2)| = (4s-2)/s² C(2s-2, s-1)²` for large `s`.
    T4,
    /// Fixed `r > s >= 1`, large `n`: `λ = E_{r-s}(1) ~ (s/r) d`.
    T5,
    /// `λ = O(max{1, |f_s - 2α f_r|, f_r²/n} d / n)` with `r = αn + f_r`, `s = α²n + f_s`.
    Main,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::Lovasz, Theorem::Brouwer, Theorem::T4, Theorem::T5, Theorem::Main];

    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::Lovasz => "lovasz",
            Theorem::Brouwer => "brouwer",
            Theorem::T4 => "t4",
            Theorem::T5 => "t5",
            Theorem::Main => "main",
        }
    }

    /// The eigenvalue index the statement claims attains `λ`, if any.
    pub fn claimed_argmax(&self) -> Option<u32> {
        match self {
            Theorem::Brouwer | Theorem::T5 => Some(1),
            Theorem::T4 => Some(2),
            Theorem::Lovasz | Theorem::Main => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lovasz" | "kneser" => Ok(Theorem::Lovasz),
            "brouwer" => Ok(Theorem::Brouwer),
            "t4" => Ok(Theorem::T4),
            "t5" | "t5.1" => Ok(Theorem::T5),
            "main" => Ok(Theorem::Main),
            other => Err(format!("unknown theorem '{other}' (expected lovasz, brouwer, t4, t5 or main)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub params: GraphParams,
    pub alpha: Option<BigRational>,
    pub applicable: bool,
    /// Edgeless triple: degree and `λ` are both zero and nothing is predicted.
    pub degenerate: bool,
    /// The theorem's value for `λ` (exact statements) or the scale `λ` is
    /// measured against (asymptotic ones). Absent when not applicable.
    pub predicted: Option<BigRational>,
    /// `max{1, |f_s - 2α f_r|, f_r²/n}`, main bound only.
    pub normalizer: Option<BigRational>,
    pub degree: BigInt,
    pub lambda: BigInt,
    pub argmax: u32,
    /// `lambda / predicted`.
    pub ratio: Option<BigRational>,
    /// Whether the exact claim holds; `None` for pure ratio bounds.
    pub holds: Option<bool>,
}

/// `(4s-2)/s² C(2s-2, s-1)²`.
pub fn t4_closed_form(s: u32) -> BigRational {
    assert!(s >= 1, "closed form needs s >= 1");
    let c = choose(2 * s as u64 - 2, s as i64 - 1);
    ratio(BigInt::from(4 * s as u64 - 2) * &c * &c, BigInt::from(s as u64 * s as u64))
}

/// `max{1, |f_s - 2α f_r|, f_r²/n}` with `f_r = r - αn`, `f_s = s - α²n`.
pub fn main_normalizer(params: &GraphParams, alpha: &BigRational) -> BigRational {
    let n = integer(params.n());
    let f_r = integer(params.r()) - alpha * &n;
    let f_s = integer(params.s()) - alpha * alpha * &n;
    let two = integer(2);
    let skew = (&f_s - &two * alpha * &f_r).abs();
    let square = &f_r * &f_r / &n;
    [BigRational::one(), skew, square].into_iter().max().expect("non-empty")
}

pub fn is_applicable(theorem: Theorem, params: &GraphParams) -> bool {
    let (n, r, s) = (params.n() as u64, params.r() as u64, params.s() as u64);
    match theorem {
        Theorem::Lovasz => s == 0,
        Theorem::Brouwer => params.is_canonical() && (r - s) * (n - 1) >= r * (n - r),
        Theorem::T4 => s >= 1 && n == 4 * s && r == 2 * s,
        Theorem::T5 => params.is_canonical() && s >= 1,
        Theorem::Main => true,
    }
}

/// Evaluates one theorem on one parameter triple.
///
/// Inapplicable theorems produce a report with `applicable = false` rather
/// than an error. `alpha` is required for [`Theorem::Main`] and ignored
/// otherwise.
pub fn verify_bound(params: GraphParams, theorem: Theorem, alpha: Option<&BigRational>) -> Result<BoundReport> {
    let alpha = match theorem {
        Theorem::Main => {
            let alpha = alpha.ok_or(Error::MissingAlpha)?;
            if !alpha.is_positive() || alpha >= &BigRational::one() {
                return Err(Error::AlphaOutOfRange(alpha.to_string()));
            }
            Some(alpha.clone())
        }
        _ => None,
    };

    let mut report = BoundReport {
        theorem,
        params,
        alpha,
        applicable: false,
        degenerate: params.is_degenerate(),
        predicted: None,
        normalizer: None,
        degree: degree(params),
        lambda: BigInt::zero(),
        argmax: 0,
        ratio: None,
        holds: None,
    };
    if report.degenerate {
        return Ok(report);
    }

    let spectrum = full_spectrum(params)?;
    report.lambda = spectrum.lambda.clone();
    report.argmax = spectrum.argmax;
    if !is_applicable(theorem, &params) {
        return Ok(report);
    }
    report.applicable = true;

    let d = integer(spectrum.degree.clone());
    let lambda = integer(spectrum.lambda.clone());
    let (n, r, s) = (params.n() as i64, params.r() as i64, params.s() as i64);

    let predicted = match theorem {
        Theorem::Lovasz => ratio(r, n - r) * &d,
        Theorem::Brouwer => ratio((s * n - r * r).abs(), r * (n - r)) * &d,
        Theorem::T4 => t4_closed_form(params.s()),
        Theorem::T5 => ratio(s, r) * &d,
        Theorem::Main => {
            let normalizer = main_normalizer(&params, report.alpha.as_ref().expect("checked above"));
            let predicted = &normalizer * &d / integer(params.n());
            report.normalizer = Some(normalizer);
            predicted
        }
    };

    report.holds = match theorem {
        Theorem::Lovasz => Some(lambda == predicted),
        Theorem::Brouwer => Some(lambda == predicted && spectrum.argmax == 1),
        Theorem::T4 => {
            // on G(4s, 2s, s) the canonical form is the triple itself
            let e2 = eigenvalue_formula_b(&spectrum.canonical, 2)?;
            Some(lambda == predicted && integer(e2.abs()) == predicted)
        }
        Theorem::T5 => Some(spectrum.argmax == 1 && spectrum.entries[1].value == spectrum.lambda),
        Theorem::Main => None,
    };
    if !predicted.is_zero() {
        report.ratio = Some(&lambda / &predicted);
    }
    report.predicted = Some(predicted);
    Ok(report)
}

/// Result of evaluating one theorem over a list of parameter triples.
#[derive(Debug, Clone)]
pub struct BoundScan {
    pub theorem: Theorem,
    pub reports: Vec<Result<BoundReport>>,
    /// Index of the first item from which the claim holds for every later
    /// item. `None` if the last item fails or the theorem makes no exact claim.
    pub threshold: Option<usize>,
    /// Index and value of the largest ratio among applicable items.
    pub max_ratio: Option<(usize, BigRational)>,
}

impl BoundScan {
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.is_err()).count()
    }

    pub fn threshold_params(&self) -> Option<GraphParams> {
        self.threshold.and_then(|i| self.reports[i].as_ref().ok()).map(|r| r.params)
    }
}

/// Evaluates `theorem` on every item; failures are recorded per item and the
/// scan continues.
pub fn scan_bounds(items: &[(GraphParams, Option<BigRational>)], theorem: Theorem) -> BoundScan {
    let reports: Vec<Result<BoundReport>> = items
        .par_iter()
        .map(|(params, alpha)| verify_bound(*params, theorem, alpha.as_ref()))
        .collect();

    let holds = |r: &Result<BoundReport>| matches!(r, Ok(BoundReport { holds: Some(true), .. }));
    let threshold = if reports.is_empty() || matches!(theorem, Theorem::Main) {
        None
    } else {
        let tail = reports.iter().rev().take_while(|r| holds(r)).count();
        (tail > 0).then(|| reports.len() - tail)
    };

    let max_ratio = reports
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().ok().and_then(|r| r.ratio.clone()).map(|q| (i, q)))
        .fold(None, |best: Option<(usize, BigRational)>, (i, q)| match best {
            Some((_, ref b)) if *b >= q => best,
            _ => Some((i, q)),
        });

    BoundScan { theorem, reports, threshold, max_ratio }
}
