//! Exact spectral toolkit and percolation harness for Johnson graphs.
//!
//! `G(n, r, s)` has the weight-`r` vectors of `{0,1}^n` as vertices, with an
//! edge between two vertices whose inner product is exactly `s`. This crate
//! computes the full spectrum of such graphs in exact integer arithmetic,
//! checks the known closed forms for the second eigenvalue parameter `λ(G)`
//! against it, cross-validates everything on explicitly constructed graphs,
//! and samples bond-percolated subgraphs to compare the giant component
//! against its predicted size.

pub mod exactmath;
pub mod oracle;
pub mod percolation;
pub mod spectrum;
mod union_find;

pub use exactmath::{binom, binom_row_cache, BigInt, BigRational};
pub use oracle::{build_graph, spectrum_consistency, spectrum_consistency_on, trace_moments, ExplicitGraph, MomentVector};
pub use percolation::{alpha_bar, run_percolation, PercolationConfig, PercolationSummary};
pub use spectrum::{
    canonicalize, degree, full_spectrum, verify_bound, BoundReport, GraphParams, Spectrum,
    SpectrumEntry, Theorem,
};
pub use union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("binomial coefficient C({n}, {k}) has a negative upper argument")]
    NegativeBinomial { n: i64, k: i64 },

    #[error("invalid parameters (n={n}, r={r}, s={s}): {reason}")]
    InvalidParams { n: u32, r: u32, s: u32, reason: &'static str },

    #[error("G({n}, {r}, {s}) is edgeless: no two {r}-sets of a {n}-set meet in exactly {s} elements (2r - s > n)")]
    Degenerate { n: u32, r: u32, s: u32 },

    #[error("G({n}, {r}, {s}) is not in canonical form (requires 2r <= n)")]
    NotCanonical { n: u32, r: u32, s: u32 },

    #[error("eigenvalue index {i} out of range 0..={r}")]
    IndexOutOfRange { i: u32, r: u32 },

    #[error("(i={i}, j={j}) lies outside the recurrence domain for G({n}, {r}, {s})")]
    OutsideRecurrenceDomain { n: u32, r: u32, s: u32, i: u32, j: u32 },

    #[error("density ratio alpha is required for this bound")]
    MissingAlpha,

    #[error("density ratio alpha = {0} must lie strictly between 0 and 1")]
    AlphaOutOfRange(String),

    #[error("explicit graph would have {vertices} vertices, above the cap of {cap}")]
    VertexCapExceeded { vertices: String, cap: usize },

    #[error("explicit graphs use 128-bit vertex masks; n = {0} is too large")]
    GroundSetTooLarge(u32),

    #[error("no distinct root of x*exp(-x) = c*exp(-c) in (0, 1) for c = {0}; need c > 1")]
    NotSupercritical(f64),

    #[error("invalid percolation setup: {0}")]
    InvalidPercolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
