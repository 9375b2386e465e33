//! Serializable output records.
//!
//! Exact integers are strings; rationals are [`ExactRational`]. Nothing exact
//! is ever emitted as a JSON number.

use serde::{Deserialize, Serialize};

use johnson_core::oracle::ConsistencyReport;
use johnson_core::percolation::{PercolationSummary, TrialOutcome};
use johnson_core::spectrum::{BoundReport, GraphParams, Spectrum};
use johnson_core::BigInt;

use crate::render::{approx_f64, ExactRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub n: u32,
    pub r: u32,
    pub s: u32,
}

impl From<GraphParams> for ParamsRecord {
    fn from(p: GraphParams) -> Self {
        ParamsRecord { n: p.n(), r: p.r(), s: p.s() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub i: u32,
    pub value: String,
    pub multiplicity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedRecord {
    pub value: String,
    pub multiplicity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub command: String,
    pub params: ParamsRecord,
    pub canonical: Option<ParamsRecord>,
    pub degenerate: bool,
    pub vertex_count: String,
    pub degree: String,
    pub lambda: String,
    pub argmax: u32,
    pub lambda_over_degree: Option<ExactRational>,
    pub entries: Vec<EntryRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub merged: Option<Vec<MergedRecord>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl SpectrumRecord {
    pub fn from_spectrum(spec: &Spectrum, merged: bool) -> Self {
        SpectrumRecord {
            command: "spectrum".into(),
            params: spec.params.into(),
            canonical: Some(spec.canonical.into()),
            degenerate: false,
            vertex_count: spec.vertex_count().to_string(),
            degree: spec.degree.to_string(),
            lambda: spec.lambda.to_string(),
            argmax: spec.argmax,
            lambda_over_degree: Some((&spec.lambda_ratio()).into()),
            entries: spec
                .entries
                .iter()
                .map(|e| EntryRecord { i: e.index, value: e.value.to_string(), multiplicity: e.multiplicity.to_string() })
                .collect(),
            merged: merged.then(|| {
                spec.merged()
                    .into_iter()
                    .map(|(v, m)| MergedRecord { value: v.to_string(), multiplicity: m.to_string() })
                    .collect()
            }),
            elapsed_ms: None,
        }
    }

    /// Edgeless graph: the zero matrix, one eigenvalue 0 of full multiplicity.
    pub fn degenerate(params: GraphParams, merged: bool) -> Self {
        let count = params.vertex_count().to_string();
        SpectrumRecord {
            command: "spectrum".into(),
            params: params.into(),
            canonical: None,
            degenerate: true,
            vertex_count: count.clone(),
            degree: "0".into(),
            lambda: "0".into(),
            argmax: 0,
            lambda_over_degree: None,
            entries: vec![EntryRecord { i: 0, value: "0".into(), multiplicity: count.clone() }],
            merged: merged.then(|| vec![MergedRecord { value: "0".into(), multiplicity: count }]),
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub command: String,
    pub theorem: String,
    pub params: ParamsRecord,
    pub alpha: Option<ExactRational>,
    pub applicable: bool,
    pub degenerate: bool,
    pub predicted: Option<ExactRational>,
    pub normalizer: Option<ExactRational>,
    pub degree: String,
    pub lambda: String,
    pub argmax: u32,
    pub ratio: Option<ExactRational>,
    pub holds: Option<bool>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

/// `pass`/`fail` for exact claims, `info` for ratio-only bounds, `n/a` when
/// the theorem does not apply.
pub fn verdict(report: &BoundReport) -> &'static str {
    match (report.applicable, report.holds) {
        (false, _) => "n/a",
        (true, Some(true)) => "pass",
        (true, Some(false)) => "fail",
        (true, None) => "info",
    }
}

impl BoundRecord {
    pub fn new(command: &str, report: &BoundReport) -> Self {
        BoundRecord {
            command: command.into(),
            theorem: report.theorem.to_string(),
            params: report.params.into(),
            alpha: report.alpha.as_ref().map(Into::into),
            applicable: report.applicable,
            degenerate: report.degenerate,
            predicted: report.predicted.as_ref().map(Into::into),
            normalizer: report.normalizer.as_ref().map(Into::into),
            degree: report.degree.to_string(),
            lambda: report.lambda.to_string(),
            argmax: report.argmax,
            ratio: report.ratio.as_ref().map(Into::into),
            holds: report.holds,
            verdict: verdict(report).into(),
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub i: u32,
    pub j: u32,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRecord {
    pub command: String,
    pub theorem: String,
    pub params: ParamsRecord,
    pub cells: usize,
    pub nonzero: Vec<ResidualRecord>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub command: String,
    pub theorem: String,
    pub params: ParamsRecord,
    pub max_k: u32,
    pub spectral_moments: Vec<String>,
    pub traced_moments: Vec<String>,
    pub first_mismatch: Option<u32>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl OracleRecord {
    pub fn new(report: &ConsistencyReport) -> Self {
        let strings = |v: &[BigInt]| v.iter().map(ToString::to_string).collect();
        OracleRecord {
            command: "verify".into(),
            theorem: "oracle".into(),
            params: report.params.into(),
            max_k: report.max_k,
            spectral_moments: strings(&report.spectral),
            traced_moments: strings(&report.traced),
            first_mismatch: report.first_mismatch,
            verdict: if report.passed() { "pass" } else { "fail" }.into(),
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRowRecord {
    pub command: String,
    pub row: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<BoundRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummaryRecord {
    pub command: String,
    pub record: String,
    pub theorem: String,
    pub rows: usize,
    pub failed_rows: usize,
    pub max_ratio: Option<ExactRational>,
    pub max_ratio_row: Option<usize>,
    /// First input row from which the exact claim held on every later tested row.
    pub threshold_row: Option<usize>,
    pub threshold_params: Option<ParamsRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub largest: usize,
    pub second: usize,
    pub components: usize,
}

impl From<&TrialOutcome> for TrialRecord {
    fn from(t: &TrialOutcome) -> Self {
        TrialRecord { trial: t.trial, largest: t.largest, second: t.second, components: t.components }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercolationRecord {
    pub command: String,
    pub params: ParamsRecord,
    pub c: String,
    pub p_approx: String,
    pub seed: u64,
    pub vertex_count: usize,
    pub degree: usize,
    pub lambda_over_degree: ExactRational,
    pub trials: Vec<TrialRecord>,
    pub mean_largest_fraction_approx: String,
    pub std_largest_fraction_approx: String,
    pub predicted_fraction_approx: String,
    pub max_largest: usize,
    pub max_second: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl PercolationRecord {
    pub fn new(summary: &PercolationSummary) -> Self {
        PercolationRecord {
            command: "percolate".into(),
            params: summary.params.into(),
            c: summary.c.to_string(),
            p_approx: approx_f64(summary.p),
            seed: summary.seed,
            vertex_count: summary.vertex_count,
            degree: summary.degree,
            lambda_over_degree: (&summary.lambda_ratio).into(),
            trials: summary.trials.iter().map(Into::into).collect(),
            mean_largest_fraction_approx: approx_f64(summary.mean_largest_fraction),
            std_largest_fraction_approx: approx_f64(summary.std_largest_fraction),
            predicted_fraction_approx: approx_f64(summary.predicted_fraction),
            max_largest: summary.max_largest(),
            max_second: summary.max_second(),
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub command: String,
    pub c: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaBarRecord {
    pub command: String,
    pub c: String,
    pub alpha_bar_approx: String,
    pub giant_fraction_approx: String,
    pub residual_approx: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}
