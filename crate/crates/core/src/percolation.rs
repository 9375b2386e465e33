//! Bond percolation on explicit Johnson graphs.
//!
//! Each edge survives independently with probability `p = c / d`. For
//! `c > 1` a giant component of relative size `1 - ᾱ(c)/c` is expected,
//! where `ᾱ(c)` is the other root of `x e^{-x} = c e^{-c}`; for `c < 1` all
//! components should stay logarithmically small.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exactmath::BigRational;
use crate::oracle::{build_graph, ExplicitGraph};
use crate::spectrum::{full_spectrum, GraphParams};
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Largest acceptable `|ᾱ e^{-ᾱ} - c e^{-c}|`.
pub const ALPHA_BAR_RESIDUAL: f64 = 1e-12;

fn tilt(x: f64) -> f64 {
    x * (-x).exp()
}

/// The root `ᾱ ∈ (0, 1)` of `x e^{-x} = c e^{-c}` for `c > 1`, by bisection.
///
/// `x e^{-x}` increases on `(0, 1)`, so the root is unique there. At `c = 1`
/// both roots coincide at 1; callers that want that limit should use
/// [`predicted_giant_fraction`].
pub fn alpha_bar(c: f64) -> Result<f64> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::NotSupercritical(c));
    }
    let target = tilt(c);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tilt(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint with the smaller residual
    let root = if (tilt(lo) - target).abs() <= (tilt(hi) - target).abs() { lo } else { hi };
    Ok(root)
}

/// `1 - ᾱ(c)/c` for `c > 1`, else 0.
pub fn predicted_giant_fraction(c: f64) -> f64 {
    match alpha_bar(c) {
        Ok(root) => 1.0 - root / c,
        Err(_) => 0.0,
    }
}

/// Independent stream for one trial: ChaCha8 keyed by `seed`, stream id `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Keeps each edge with probability `p` and returns component sizes, largest first.
///
/// Edges are visited once each, `u < v`, in a fixed order, one uniform draw
/// per edge. Sharing an rng state across different `p` therefore couples the
/// samples monotonically.
pub fn sample_subgraph<R: Rng + ?Sized>(graph: &ExplicitGraph, p: f64, rng: &mut R) -> Vec<usize> {
    let mut uf = UnionFind::new(graph.vertex_count());
    for (u, v) in graph.edges() {
        if rng.random::<f64>() < p {
            uf.union(u, v);
        }
    }
    uf.component_sizes()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationConfig {
    pub params: GraphParams,
    /// Intensity; the edge retention probability is `c / d`.
    pub c: f64,
    pub trials: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u32,
    pub largest: usize,
    pub second: usize,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationSummary {
    pub params: GraphParams,
    pub c: f64,
    pub p: f64,
    pub seed: u64,
    pub vertex_count: usize,
    pub degree: usize,
    /// Sorted by trial index.
    pub trials: Vec<TrialOutcome>,
    pub mean_largest_fraction: f64,
    /// Sample standard deviation (`n - 1`); zero for a single trial.
    pub std_largest_fraction: f64,
    pub predicted_fraction: f64,
    /// `λ / d` of the underlying graph.
    pub lambda_ratio: BigRational,
}

impl PercolationSummary {
    pub fn max_largest(&self) -> usize {
        self.trials.iter().map(|t| t.largest).max().unwrap_or(0)
    }

    pub fn max_second(&self) -> usize {
        self.trials.iter().map(|t| t.second).max().unwrap_or(0)
    }

    pub fn ln_vertex_count(&self) -> f64 {
        (self.vertex_count as f64).ln()
    }
}

fn validate(config: &PercolationConfig, degree: usize) -> Result<f64> {
    if config.trials == 0 {
        return Err(Error::InvalidPercolation("trials must be at least 1".into()));
    }
    if !(config.c > 0.0) || !config.c.is_finite() {
        return Err(Error::InvalidPercolation(format!("intensity c = {} must be positive", config.c)));
    }
    if degree == 0 {
        return Err(Error::InvalidPercolation("graph has no edges".into()));
    }
    if config.c > degree as f64 {
        return Err(Error::InvalidPercolation(format!(
            "c = {} exceeds the degree {degree}, so p = c/d > 1",
            config.c
        )));
    }
    Ok((config.c / degree as f64).min(1.0))
}

pub fn run_percolation(config: &PercolationConfig) -> Result<PercolationSummary> {
    let graph = build_graph(config.params)?;
    let lambda_ratio = full_spectrum(config.params)?.lambda_ratio();
    run_percolation_on(&graph, config, lambda_ratio)
}

/// Runs `config.trials` independent trials on an already built graph.
pub fn run_percolation_on(
    graph: &ExplicitGraph,
    config: &PercolationConfig,
    lambda_ratio: BigRational,
) -> Result<PercolationSummary> {
    let degree = graph.neighbors(0).len();
    let p = validate(config, degree)?;

    let mut trials: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial as u64);
            let sizes = sample_subgraph(graph, p, &mut rng);
            TrialOutcome {
                trial,
                largest: sizes.first().copied().unwrap_or(0),
                second: sizes.get(1).copied().unwrap_or(0),
                components: sizes.len(),
            }
        })
        .collect();
    trials.sort_by_key(|t| t.trial);

    let n = graph.vertex_count() as f64;
    let fractions: Vec<f64> = trials.iter().map(|t| t.largest as f64 / n).collect();
    let count = fractions.len() as f64;
    let mean = fractions.iter().sum::<f64>() / count;
    let std = if fractions.len() > 1 {
        (fractions.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };

    Ok(PercolationSummary {
        params: config.params,
        c: config.c,
        p,
        seed: config.seed,
        vertex_count: graph.vertex_count(),
        degree,
        trials,
        mean_largest_fraction: mean,
        std_largest_fraction: std,
        predicted_fraction: predicted_giant_fraction(config.c),
        lambda_ratio,
    })
}

/// One summary per intensity, all sharing `seed`.
///
/// Every row uses the same per-trial streams, so within a trial the kept
/// edge sets are nested in `c`.
pub fn threshold_scan(
    params: GraphParams,
    c_values: &[f64],
    trials: u32,
    seed: u64,
) -> Result<Vec<Result<PercolationSummary>>> {
    let graph = build_graph(params)?;
    let lambda_ratio = full_spectrum(params)?.lambda_ratio();
    Ok(c_values
        .iter()
        .map(|&c| {
            let config = PercolationConfig { params, c, trials, seed };
            run_percolation_on(&graph, &config, lambda_ratio.clone())
        })
        .collect())
}

/// `λ / d` as a float, for display.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
