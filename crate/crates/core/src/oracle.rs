//! Explicit small Johnson graphs used as ground truth for the spectrum.
//!
//! Vertices are `n`-bit masks of weight `r`; `u ~ v` iff `popcount(u & v) = s`.
//! Moments `tr(A^k)` are computed by exact closed-walk counting and compared
//! against `sum_i mult_i E(i)^k`. With at most `r + 1` distinct claimed
//! eigenvalues, agreement on `k = 0..=2r+1` pins the spectrum down without a
//! numeric eigensolver.

use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::spectrum::{full_spectrum, GraphParams};
use crate::union_find::UnionFind;
use crate::{Error, Result};

pub const DEFAULT_VERTEX_CAP: usize = 20_000;
pub const MAX_GROUND_SET: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    params: GraphParams,
    vertices: Vec<u128>,
    adjacency: Vec<Vec<u32>>,
}

impl ExplicitGraph {
    pub fn params(&self) -> GraphParams {
        self.params
    }

    /// Vertex masks in colexicographic order.
    pub fn vertices(&self) -> &[u128] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Sorted neighbor indices of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        (self.vertices[u] & self.vertices[v]).count_ones() == self.params.s()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// One `u v` line per edge, 0-based indices.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

fn next_combination(x: u128) -> u128 {
    let low = x & x.wrapping_neg();
    let ripple = x + low;
    (((ripple ^ x) >> 2) / low) | ripple
}

pub fn build_graph(params: GraphParams) -> Result<ExplicitGraph> {
    build_graph_with_cap(params, DEFAULT_VERTEX_CAP)
}

/// Enumerates all weight-`r` masks and connects pairs meeting in `s` bits.
///
/// Any valid triple is accepted, canonical or not.
pub fn build_graph_with_cap(params: GraphParams, cap: usize) -> Result<ExplicitGraph> {
    if params.n() > MAX_GROUND_SET {
        return Err(Error::GroundSetTooLarge(params.n()));
    }
    let count = params.vertex_count();
    let count = match count.to_usize() {
        Some(c) if c <= cap => c,
        _ => return Err(Error::VertexCapExceeded { vertices: count.to_string(), cap }),
    };

    let r = params.r();
    let mut vertices = Vec::with_capacity(count);
    let mut mask = if r == 128 { u128::MAX } else { (1u128 << r) - 1 };
    vertices.push(mask);
    while vertices.len() < count {
        mask = next_combination(mask);
        vertices.push(mask);
    }

    let s = params.s();
    let adjacency = vertices
        .par_iter()
        .map(|&u| {
            vertices
                .iter()
                .enumerate()
                .filter(|&(_, &v)| (u & v).count_ones() == s)
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();

    Ok(ExplicitGraph { params, vertices, adjacency })
}

/// `tr(A^k)` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentVector(pub Vec<BigInt>);

impl MomentVector {
    pub fn get(&self, k: usize) -> Option<&BigInt> {
        self.0.get(k)
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `(A^k)_{root,root}` for `k = 0..=max_k`: closed walks of length `k` at `root`.
///
/// Walk-count vectors are advanced only to `ceil(max_k / 2)`; longer counts
/// come from `(A^{a+b})_{rr} = <A^a e_r, A^b e_r>`.
pub fn closed_walks_from(graph: &ExplicitGraph, root: usize, max_k: u32) -> Vec<BigUint> {
    let n = graph.vertex_count();
    let half = (max_k as usize).div_ceil(2);
    let mut walks: Vec<Vec<BigUint>> = Vec::with_capacity(half + 1);
    let mut start = vec![BigUint::zero(); n];
    start[root] = BigUint::from(1u8);
    walks.push(start);
    for t in 0..half {
        let prev = &walks[t];
        let next: Vec<BigUint> = (0..n)
            .into_par_iter()
            .map(|u| {
                let mut acc = BigUint::zero();
                for &w in graph.neighbors(u) {
                    acc += &prev[w as usize];
                }
                acc
            })
            .collect();
        walks.push(next);
    }
    (0..=max_k as usize)
        .map(|k| {
            let a = k / 2;
            let b = k - a;
            walks[a].iter().zip(&walks[b]).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
        })
        .collect()
}

/// Exact `tr(A^k)`, `k = 0..=max_k`.
///
/// Coordinate permutations act transitively on the weight-`r` masks and
/// preserve intersection sizes, so every diagonal entry of `A^k` equals the
/// one at vertex 0 and the trace is `N` times the closed-walk count there.
/// [`trace_moments_exhaustive`] sums over every vertex instead.
pub fn trace_moments(graph: &ExplicitGraph, max_k: u32) -> MomentVector {
    let n = BigUint::from(graph.vertex_count());
    let at_root = closed_walks_from(graph, 0, max_k);
    MomentVector(at_root.into_iter().map(|w| BigInt::from(w * &n)).collect())
}

/// Exact `tr(A^k)` summing closed walks over every vertex. `O(N^2 d K)`.
pub fn trace_moments_exhaustive(graph: &ExplicitGraph, max_k: u32) -> MomentVector {
    let mut totals = vec![BigUint::zero(); max_k as usize + 1];
    for v in 0..graph.vertex_count() {
        for (t, w) in totals.iter_mut().zip(closed_walks_from(graph, v, max_k)) {
            *t += w;
        }
    }
    MomentVector(totals.into_iter().map(BigInt::from).collect())
}

/// `tr(A^k)` by repeated dense matrix multiplication in `u128`.
///
/// Returns `None` if an entry overflows. Intended for small graphs only.
pub fn trace_moments_dense(graph: &ExplicitGraph, max_k: u32) -> Option<MomentVector> {
    let n = graph.vertex_count();
    let mut adjacency = vec![0u128; n * n];
    for (u, v) in graph.edges() {
        adjacency[u * n + v] = 1;
        adjacency[v * n + u] = 1;
    }
    let mut power = vec![0u128; n * n];
    for v in 0..n {
        power[v * n + v] = 1;
    }
    let trace = |m: &[u128]| (0..n).try_fold(0u128, |acc, v| acc.checked_add(m[v * n + v]));

    let mut out = vec![BigInt::from(trace(&power)?)];
    for _ in 0..max_k {
        let mut next = vec![0u128; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = power[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    if adjacency[l * n + j] != 0 {
                        let cell = &mut next[i * n + j];
                        *cell = cell.checked_add(a)?;
                    }
                }
            }
        }
        power = next;
        out.push(BigInt::from(trace(&power)?));
    }
    Some(MomentVector(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub params: GraphParams,
    pub max_k: u32,
    /// `sum_i mult_i E(i)^k`.
    pub spectral: Vec<BigInt>,
    /// `tr(A^k)` on the explicit graph.
    pub traced: Vec<BigInt>,
    pub first_mismatch: Option<u32>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Checks `sum_i mult_i E(i)^k = tr(A^k)` exactly for `k = 0..=max_k`.
pub fn spectrum_consistency(params: GraphParams, max_k: u32) -> Result<ConsistencyReport> {
    spectrum_consistency_with_cap(params, max_k, DEFAULT_VERTEX_CAP)
}

pub fn spectrum_consistency_with_cap(params: GraphParams, max_k: u32, cap: usize) -> Result<ConsistencyReport> {
    spectrum_consistency_on(&build_graph_with_cap(params, cap)?, max_k)
}

/// [`spectrum_consistency`] on an already built graph.
pub fn spectrum_consistency_on(graph: &ExplicitGraph, max_k: u32) -> Result<ConsistencyReport> {
    let params = graph.params();
    let spectral = full_spectrum(params)?.moments(max_k);
    let traced = trace_moments(graph, max_k).0;
    let first_mismatch = spectral.iter().zip(&traced).position(|(a, b)| a != b).map(|k| k as u32);
    Ok(ConsistencyReport { params, max_k, spectral, traced, first_mismatch })
}

/// Component sizes of the graph, largest first.
pub fn components(graph: &ExplicitGraph) -> Vec<usize> {
    components_with(graph, |_, _| true)
}

/// Component sizes of the spanning subgraph keeping edges `(u, v)`, `u < v`,
/// for which `keep` returns `true`. Edges are offered in [`ExplicitGraph::edges`] order.
pub fn components_with<F>(graph: &ExplicitGraph, mut keep: F) -> Vec<usize>
where
    F: FnMut(usize, usize) -> bool,
{
    let mut uf = UnionFind::new(graph.vertex_count());
    for (u, v) in graph.edges() {
        if keep(u, v) {
            uf.union(u, v);
        }
    }
    uf.component_sizes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::degree;

    fn p(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn colex_order() {
        let g = build_graph(p(4, 2, 1)).unwrap();
        assert_eq!(g.vertices(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert!(g.vertices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn octahedron() {
        let g = build_graph(p(4, 2, 1)).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!((0..6).all(|v| g.neighbors(v).len() == 4));
        // the non-neighbor of each pair is its complement
        assert!(!g.is_adjacent(0, 5));
    }

    #[test]
    fn petersen() {
        let g = build_graph(p(5, 2, 0)).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.neighbors(v).len() == 3));
    }

    #[test]
    fn regular_and_symmetric() {
        for q in [p(8, 4, 2), p(9, 3, 1), p(10, 7, 5), p(7, 2, 1)] {
            let g = build_graph(q).unwrap();
            let d = degree(q).to_usize().unwrap();
            assert_eq!(BigInt::from(g.vertex_count()), q.vertex_count());
            for u in 0..g.vertex_count() {
                assert_eq!(g.neighbors(u).len(), d);
                assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
                for &v in g.neighbors(u) {
                    assert!(g.neighbors(v as usize).binary_search(&(u as u32)).is_ok());
                }
            }
            assert_eq!(2 * g.edge_count(), d * g.vertex_count());
        }
    }

    #[test]
    fn wide_ground_set() {
        let g = build_graph(p(128, 1, 0)).unwrap();
        assert_eq!(g.vertex_count(), 128);
        assert_eq!(*g.vertices().last().unwrap(), 1u128 << 127);
        assert_eq!(g.edge_count(), 128 * 127 / 2);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build_graph(p(129, 1, 0)), Err(Error::GroundSetTooLarge(129))));
        assert!(matches!(build_graph(p(20, 10, 5)), Err(Error::VertexCapExceeded { cap: DEFAULT_VERTEX_CAP, .. })));
        assert!(build_graph_with_cap(p(8, 4, 2), 69).is_err());
        assert!(build_graph_with_cap(p(8, 4, 2), 70).is_ok());
    }

    #[test]
    fn moments_small() {
        let oct = build_graph(p(4, 2, 1)).unwrap();
        assert_eq!(trace_moments(&oct, 2).0, ints(&[6, 0, 24]));
        // 8 triangles, each counted 6 times
        assert_eq!(trace_moments(&oct, 3).0[3], BigInt::from(48));
        let pet = build_graph(p(5, 2, 0)).unwrap();
        assert_eq!(trace_moments(&pet, 3).0[3], BigInt::from(0));
    }

    #[test]
    fn moment_routes_agree() {
        for q in [p(4, 2, 1), p(5, 2, 0), p(8, 4, 2), p(7, 3, 1), p(8, 5, 3)] {
            let g = build_graph(q).unwrap();
            let walk = trace_moments(&g, 6);
            assert_eq!(walk, trace_moments_exhaustive(&g, 6), "{q}");
            let dense = trace_moments_dense(&g, 4).unwrap();
            assert_eq!(&walk.0[..5], dense.as_slice(), "{q}");
        }
    }

    #[test]
    fn consistency_examples() {
        assert!(spectrum_consistency(p(4, 2, 1), 6).unwrap().passed());
        assert!(spectrum_consistency(p(5, 2, 0), 6).unwrap().passed());
        let rep = spectrum_consistency(p(8, 4, 2), 9).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.traced[2], BigInt::from(2520));
    }

    #[test]
    fn consistency_detects_wrong_spectrum() {
        // octahedron moments against the Petersen-sized claim should differ at k = 0
        let oct = build_graph(p(4, 2, 1)).unwrap();
        let wrong = full_spectrum(p(5, 2, 0)).unwrap().moments(4);
        let traced = trace_moments(&oct, 4).0;
        assert_ne!(wrong, traced);
    }

    #[test]
    fn component_sizes() {
        let oct = build_graph(p(4, 2, 1)).unwrap();
        assert_eq!(components(&oct), vec![6]);
        let pet = build_graph(p(5, 2, 0)).unwrap();
        assert_eq!(components_with(&pet, |_, _| false), vec![1; 10]);
        let first = oct.edges().next().unwrap();
        assert_eq!(components_with(&oct, |u, v| (u, v) == first), vec![2, 1, 1, 1, 1]);
    }

    #[test]
    fn edge_list_export() {
        let oct = build_graph(p(4, 2, 1)).unwrap();
        let mut buf = Vec::new();
        oct.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 12);
        assert_eq!(text.lines().next(), Some("0 1"));
        for line in text.lines() {
            let (u, v) = line.split_once(' ').unwrap();
            let (u, v): (usize, usize) = (u.parse().unwrap(), v.parse().unwrap());
            assert!(u < v && oct.is_adjacent(u, v));
        }
    }
}
