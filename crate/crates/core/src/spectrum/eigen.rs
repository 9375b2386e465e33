use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::params::{canonicalize, degree, GraphParams};
use crate::exactmath::{choose, integer, ratio, BigInt, BigRational};
use crate::{Error, Result};

fn check_index(params: &GraphParams, i: u32) -> Result<()> {
    params.require_canonical()?;
    if i > params.r() {
        return Err(Error::IndexOutOfRange { i, r: params.r() });
    }
    Ok(())
}

/// `E_{r-s}(i)` by the alternating sum over `C(r-j, k-j) C(r-i, j) C(n-r+j-i, j)`.
///
/// Kept as an independent cross-check of [`eigenvalue_formula_b`].
pub fn eigenvalue_formula_a(params: &GraphParams, i: u32) -> Result<BigInt> {
    check_index(params, i)?;
    let (n, r, k, i) = (params.n() as i64, params.r() as i64, params.k() as i64, i as i64);
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = choose((r - j) as u64, k - j)
            * choose((r - i) as u64, j)
            * choose((n - r + j - i) as u64, j);
        if (k - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `E_{r-s}(i) = sum_j (-1)^j C(i, j) C(r-i, k-j) C(n-r-i, k-j)`.
///
/// Terms with `j > i` vanish, so only `min(i, k) + 1` terms are summed.
pub fn eigenvalue_formula_b(params: &GraphParams, i: u32) -> Result<BigInt> {
    check_index(params, i)?;
    let (n, r, k) = (params.n() as u64, params.r() as u64, params.k() as i64);
    let i = i as u64;
    let top = k.min(i as i64);
    let mut acc = BigInt::zero();
    for j in 0..=top {
        let mut term = choose(i, j) * choose(r - i, k - j);
        if term.is_zero() {
            continue;
        }
        term *= choose(n - r - i, k - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Multiplicity `C(n, i) - C(n, i - 1)` of the `i`-th eigenspace.
pub fn multiplicity(n: u32, i: u32) -> BigInt {
    choose(n as u64, i as i64) - choose(n as u64, i as i64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub index: u32,
    pub value: BigInt,
    pub multiplicity: BigInt,
}

/// Full adjacency spectrum of a Johnson graph, one entry per eigenspace index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    /// Parameters as requested.
    pub params: GraphParams,
    /// Isomorphic canonical parameters the entries were computed for.
    pub canonical: GraphParams,
    pub entries: Vec<SpectrumEntry>,
    pub degree: BigInt,
    pub lambda: BigInt,
    /// Smallest `i >= 1` with `|E(i)| = lambda`.
    pub argmax: u32,
}

impl Spectrum {
    /// `sum_i mult_i * E(i)^k`, i.e. `tr(A^k)`.
    pub fn moment(&self, k: u32) -> BigInt {
        self.entries
            .iter()
            .map(|e| &e.multiplicity * num_traits::pow(e.value.clone(), k as usize))
            .sum()
    }

    pub fn moments(&self, max_k: u32) -> Vec<BigInt> {
        (0..=max_k).map(|k| self.moment(k)).collect()
    }

    pub fn vertex_count(&self) -> BigInt {
        self.entries.iter().map(|e| &e.multiplicity).sum()
    }

    /// Distinct eigenvalues with summed multiplicities, largest value first.
    pub fn merged(&self) -> Vec<(BigInt, BigInt)> {
        let mut merged: Vec<(BigInt, BigInt)> = Vec::new();
        for e in &self.entries {
            match merged.iter_mut().find(|(v, _)| *v == e.value) {
                Some((_, m)) => *m += &e.multiplicity,
                None => merged.push((e.value.clone(), e.multiplicity.clone())),
            }
        }
        merged.sort_by(|a, b| b.0.cmp(&a.0));
        merged
    }

    /// `lambda / degree`.
    pub fn lambda_ratio(&self) -> BigRational {
        ratio(self.lambda.clone(), self.degree.clone())
    }
}

/// Exact spectrum of `G(n, r, s)`.
///
/// Non-canonical triples are first mapped to their isomorphic canonical form.
/// Edgeless triples are rejected.
pub fn full_spectrum(params: GraphParams) -> Result<Spectrum> {
    let canonical = canonicalize(params)?;
    let entries = (0..=canonical.r())
        .into_par_iter()
        .map(|i| {
            Ok(SpectrumEntry {
                index: i,
                value: eigenvalue_formula_b(&canonical, i)?,
                multiplicity: multiplicity(canonical.n(), i),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lambda = BigInt::zero();
    let mut argmax = 0;
    for e in &entries[1..] {
        let abs = e.value.abs();
        if abs > lambda || argmax == 0 {
            lambda = abs;
            argmax = e.index;
        }
    }

    Ok(Spectrum {
        params,
        canonical,
        degree: degree(canonical),
        entries,
        lambda,
        argmax,
    })
}

/// `C_{n,r,s}(i, j) = C(i, j) C(r-i, r-s-j) C(n-r-i, r-s-j)` for `j` possibly
/// negative; all upper arguments must already be known nonnegative.
fn recurrence_coefficient(n: i64, r: i64, s: i64, i: i64, j: i64) -> BigInt {
    choose(i as u64, j) * choose((r - i) as u64, r - s - j) * choose((n - r - i) as u64, r - s - j)
}

/// Whether `(i, j)` is inside the domain where the three-term recurrence for
/// `C_{n,r,s}(i, j)` is defined.
pub fn in_recurrence_domain(params: &GraphParams, i: u32, j: u32) -> bool {
    let (n, r) = (params.n() as i64, params.r() as i64);
    let (i, j) = (i as i64, j as i64);
    i >= 1 && i <= r && j <= i && n - r - i + 1 > 0
}

/// Every `(i, j)` in the recurrence domain of `params`.
pub fn recurrence_domain(params: &GraphParams) -> impl Iterator<Item = (u32, u32)> + '_ {
    (1..=params.r()).flat_map(move |i| (0..=i).map(move |j| (i, j))).filter(|&(i, j)| in_recurrence_domain(params, i, j))
}

/// Left side minus right side of
/// `C(i, j) = [(r-s-j+1)^2 C(i-1, j-1) + (s-i+j+1)(n-2r+s+j-i+1) C(i-1, j)] / ((r-i+1)(n-r-i+1))`,
/// which must vanish identically.
pub fn lemma6_residual(params: &GraphParams, i: u32, j: u32) -> Result<BigRational> {
    if !in_recurrence_domain(params, i, j) {
        return Err(Error::OutsideRecurrenceDomain {
            n: params.n(),
            r: params.r(),
            s: params.s(),
            i,
            j,
        });
    }
    let (n, r, s) = (params.n() as i64, params.r() as i64, params.s() as i64);
    let (i, j) = (i as i64, j as i64);

    let denominator = BigInt::from((r - i + 1) * (n - r - i + 1));
    let diag = BigInt::from((r - s - j + 1) * (r - s - j + 1));
    let straight = BigInt::from((s - i + j + 1) * (n - 2 * r + s + j - i + 1));

    let lhs = integer(recurrence_coefficient(n, r, s, i, j));
    let rhs = ratio(
        diag * recurrence_coefficient(n, r, s, i - 1, j - 1)
            + straight * recurrence_coefficient(n, r, s, i - 1, j),
        denominator,
    );
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn formula_a_examples() {
        assert_eq!(eigenvalue_formula_a(&p(8, 4, 2), 0).unwrap(), BigInt::from(36));
        assert_eq!(eigenvalue_formula_a(&p(8, 4, 2), 2).unwrap(), BigInt::from(-6));
        assert_eq!(eigenvalue_formula_a(&p(4, 2, 1), 2).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn formula_b_examples() {
        assert_eq!(eigenvalue_formula_b(&p(8, 4, 2), 1).unwrap(), BigInt::from(0));
        assert_eq!(eigenvalue_formula_b(&p(8, 4, 2), 4).unwrap(), BigInt::from(6));
        assert_eq!(eigenvalue_formula_b(&p(5, 2, 0), 1).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn index_and_form_errors() {
        assert!(matches!(
            eigenvalue_formula_b(&p(8, 4, 2), 5),
            Err(Error::IndexOutOfRange { i: 5, r: 4 })
        ));
        assert!(matches!(eigenvalue_formula_a(&p(8, 5, 3), 0), Err(Error::NotCanonical { .. })));
    }

    #[test]
    fn small_spectra() {
        let s = full_spectrum(p(4, 2, 1)).unwrap();
        let values: Vec<_> = s.entries.iter().map(|e| e.value.clone()).collect();
        let mults: Vec<_> = s.entries.iter().map(|e| e.multiplicity.clone()).collect();
        assert_eq!(values, ints(&[4, 0, -2]));
        assert_eq!(mults, ints(&[1, 3, 2]));
        assert_eq!(s.lambda, BigInt::from(2));
        assert_eq!(s.argmax, 2);

        let s = full_spectrum(p(8, 4, 2)).unwrap();
        let values: Vec<_> = s.entries.iter().map(|e| e.value.clone()).collect();
        let mults: Vec<_> = s.entries.iter().map(|e| e.multiplicity.clone()).collect();
        assert_eq!(values, ints(&[36, 0, -6, 0, 6]));
        assert_eq!(mults, ints(&[1, 7, 20, 28, 14]));
        assert_eq!(s.lambda, BigInt::from(6));
        // |-6| at i = 2 ties with 6 at i = 4
        assert_eq!(s.argmax, 2);

        // Petersen: 3^1, (-2)^4, 1^5
        let s = full_spectrum(p(5, 2, 0)).unwrap();
        let values: Vec<_> = s.entries.iter().map(|e| e.value.clone()).collect();
        let mults: Vec<_> = s.entries.iter().map(|e| e.multiplicity.clone()).collect();
        assert_eq!(values, ints(&[3, -2, 1]));
        assert_eq!(mults, ints(&[1, 4, 5]));
        assert_eq!(s.lambda, BigInt::from(2));
        assert_eq!(s.argmax, 1);
    }

    #[test]
    fn merged_view() {
        let s = full_spectrum(p(8, 4, 2)).unwrap();
        assert_eq!(
            s.merged(),
            vec![
                (BigInt::from(36), BigInt::from(1)),
                (BigInt::from(6), BigInt::from(14)),
                (BigInt::from(0), BigInt::from(35)),
                (BigInt::from(-6), BigInt::from(20)),
            ]
        );
    }

    #[test]
    fn degenerate_spectrum_is_an_error() {
        assert!(matches!(full_spectrum(p(4, 3, 1)), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn complement_keeps_spectrum() {
        let a = full_spectrum(p(10, 7, 5)).unwrap();
        let b = full_spectrum(p(10, 3, 1)).unwrap();
        assert_eq!(a.merged(), b.merged());
        assert_eq!(a.params, p(10, 7, 5));
        assert_eq!(a.canonical, p(10, 3, 1));
    }

    #[test]
    fn lemma6_examples() {
        assert!(lemma6_residual(&p(8, 4, 2), 1, 0).unwrap().is_zero());
        assert!(lemma6_residual(&p(8, 4, 2), 2, 1).unwrap().is_zero());
        assert!(lemma6_residual(&p(12, 5, 2), 3, 2).unwrap().is_zero());
    }

    #[test]
    fn lemma6_domain_errors() {
        assert!(matches!(
            lemma6_residual(&p(8, 4, 2), 0, 0),
            Err(Error::OutsideRecurrenceDomain { .. })
        ));
        assert!(lemma6_residual(&p(8, 4, 2), 2, 3).is_err());
        // n - r - i + 1 = 0
        assert!(lemma6_residual(&p(6, 4, 2), 3, 0).is_err());
    }

    #[test]
    fn recurrence_domain_is_complete() {
        let q = p(12, 5, 2);
        let domain: Vec<_> = recurrence_domain(&q).collect();
        assert_eq!(domain.len(), (1..=5).map(|i| i as usize + 1).sum::<usize>());
        let q = p(6, 4, 2);
        assert!(recurrence_domain(&q).all(|(i, _)| i <= 2));
    }

    proptest! {
        #[test]
        fn formulas_agree(n in 2u32..80, r_seed in 0u32..1000, s_seed in 0u32..1000, i_seed in 0u32..1000) {
            let r = 1 + r_seed % (n / 2);
            let s = s_seed % r;
            let i = i_seed % (r + 1);
            let q = p(n, r, s);
            prop_assert_eq!(eigenvalue_formula_a(&q, i).unwrap(), eigenvalue_formula_b(&q, i).unwrap());
        }

        #[test]
        fn trace_identities(n in 2u32..120, r_seed in 0u32..1000, s_seed in 0u32..1000) {
            let r = 1 + r_seed % (n / 2);
            let s = s_seed % r;
            let spec = full_spectrum(p(n, r, s)).unwrap();
            let count = spec.params.vertex_count();
            prop_assert_eq!(&spec.vertex_count(), &count);
            prop_assert_eq!(spec.moment(1), BigInt::zero());
            prop_assert_eq!(spec.moment(2), &spec.degree * &count);
            prop_assert_eq!(&spec.entries[0].value, &spec.degree);
            prop_assert!(spec.lambda > BigInt::zero());
            prop_assert!(spec.lambda <= spec.degree);
        }

        #[test]
        fn recurrence_vanishes(n in 2u32..60, r_seed in 0u32..1000, s_seed in 0u32..1000) {
            let r = 1 + r_seed % n;
            let s = s_seed % r;
            let q = p(n, r, s);
            for (i, j) in recurrence_domain(&q) {
                prop_assert!(lemma6_residual(&q, i, j).unwrap().is_zero());
            }
        }
    }
}
