use std::fmt;

use crate::exactmath::{choose, BigInt};
use crate::{Error, Result};

/// A validated Johnson graph parameter triple `(n, r, s)` with `0 <= s < r <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphParams {
    n: u32,
    r: u32,
    s: u32,
}

impl GraphParams {
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self> {
        let reason = if n == 0 {
            Some("n must be positive")
        } else if r == 0 {
            Some("r must be positive")
        } else if s >= r {
            Some("s must be smaller than r")
        } else if r > n {
            Some("r must not exceed n")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidParams { n, r, s, reason }),
            None => Ok(GraphParams { n, r, s }),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `r - s`, the index of the eigenvalue polynomial.
    pub fn k(&self) -> u32 {
        self.r - self.s
    }

    pub fn is_canonical(&self) -> bool {
        2 * self.r as u64 <= self.n as u64
    }

    /// No two `r`-sets meet in exactly `s` elements.
    pub fn is_degenerate(&self) -> bool {
        2 * self.r as u64 - self.s as u64 > self.n as u64
    }

    /// `C(n, r)`.
    pub fn vertex_count(&self) -> BigInt {
        choose(self.n as u64, self.r as i64)
    }

    pub(crate) fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NotCanonical { n: self.n, r: self.r, s: self.s })
        }
    }

    pub(crate) fn degenerate_error(&self) -> Error {
        Error::Degenerate { n: self.n, r: self.r, s: self.s }
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({}, {}, {})", self.n, self.r, self.s)
    }
}

/// Maps `G(n, r, s)` with `2r > n` onto the isomorphic `G(n, n - r, n - 2r + s)`
/// obtained by complementing every vertex. Canonical triples are returned
/// unchanged.
///
/// Fails with [`Error::Degenerate`] when the complement triple does not exist
/// (`n - 2r + s < 0`), which is exactly the edgeless case.
pub fn canonicalize(params: GraphParams) -> Result<GraphParams> {
    if params.is_canonical() {
        return Ok(params);
    }
    if params.is_degenerate() {
        return Err(params.degenerate_error());
    }
    let (n, r, s) = (params.n, params.r, params.s);
    GraphParams::new(n, n - r, n + s - 2 * r)
}

/// `C(r, s) * C(n - r, r - s)`; zero for degenerate triples.
pub fn degree(params: GraphParams) -> BigInt {
    choose(params.r as u64, params.s as i64) * choose((params.n - params.r) as u64, params.k() as i64)
}
