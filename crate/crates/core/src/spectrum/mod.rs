//! Exact Johnson graph spectra and the closed forms known for `λ(G)`.

mod bounds;
mod eigen;
mod params;

pub use bounds::{
    is_applicable, main_normalizer, scan_bounds, t4_closed_form, verify_bound, BoundReport, BoundScan, Theorem,
};
pub use eigen::{
    eigenvalue_formula_a, eigenvalue_formula_b, full_spectrum, in_recurrence_domain, lemma6_residual, multiplicity,
    recurrence_domain, Spectrum, SpectrumEntry,
};
pub use params::{canonicalize, degree, GraphParams};
