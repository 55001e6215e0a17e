//! Closed-form values of higher topological complexity, category and cup
//! length for configuration spaces of (punctured) Euclidean space.
//!
//! All invariants use the reduced convention (a contractible space has `TC = 0`).

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("m must be at least 2 (got {0})")]
    DimensionTooSmall(u32),
    #[error("s must be at least 2 (got {0})")]
    TooFewStages(u32),
    #[error("n must be at least 1")]
    NoRobots,
    #[error("(n, p) = (1, 0) is excluded: Conf(R^m, 1) is contractible")]
    Contractible,
    #[error("need at least {need} robots (got {got})")]
    TooFewRobots { need: u32, got: u32 },
    #[error("need at least one obstacle")]
    NoObstacles,
}

/// A point of the parameter space `(m, n, p, s)` covered by the TC table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TcQuery {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub s: u32,
}

impl TcQuery {
    pub fn new(m: u32, n: u32, p: u32, s: u32) -> Result<Self, QueryError> {
        if m < 2 {
            return Err(QueryError::DimensionTooSmall(m));
        }
        if s < 2 {
            return Err(QueryError::TooFewStages(s));
        }
        if n < 1 {
            return Err(QueryError::NoRobots);
        }
        if n == 1 && p == 0 {
            return Err(QueryError::Contractible);
        }
        Ok(TcQuery { m, n, p, s })
    }

    /// Parity indicator of `m`: 1 for odd, 0 for even.
    pub fn delta_m(&self) -> u32 {
        self.m % 2
    }

    /// Dimension of a minimal CW model: `(n-1)(m-1)` without obstacles,
    /// `n(m-1)` with.
    pub fn homotopy_dimension(&self) -> u32 {
        let cells = if self.p == 0 { self.n - 1 } else { self.n };
        cells * (self.m - 1)
    }

    /// The space is `(m-2)`-connected.
    pub fn connectivity(&self) -> u32 {
        self.m - 2
    }
}

/// Which row of the TC table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TcCase {
    NoObstaclesEvenM,
    NoObstaclesOddM,
    OneObstacleEvenM,
    Otherwise,
}

impl TcCase {
    pub fn label(&self) -> &'static str {
        match self {
            TcCase::NoObstaclesEvenM => "p=0 and m even",
            TcCase::NoObstaclesOddM => "p=0 and m odd",
            TcCase::OneObstacleEvenM => "p=1 and m even",
            TcCase::Otherwise => "otherwise",
        }
    }
}

impl fmt::Display for TcCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn tc_case(q: &TcQuery) -> TcCase {
    match (q.p, q.m % 2 == 0) {
        (0, true) => TcCase::NoObstaclesEvenM,
        (0, false) => TcCase::NoObstaclesOddM,
        (1, true) => TcCase::OneObstacleEvenM,
        _ => TcCase::Otherwise,
    }
}

/// `TC_s(Conf(R^m - Q_p, n))`.
pub fn tc_s(q: &TcQuery) -> u32 {
    let (s, n) = (q.s, q.n);
    match tc_case(q) {
        TcCase::NoObstaclesEvenM => s * (n - 1) - 1,
        TcCase::NoObstaclesOddM => s * (n - 1),
        TcCase::OneObstacleEvenM => s * n - 1,
        TcCase::Otherwise => s * n,
    }
}

/// Zero-divisor cup length `cl_s(Conf(R^m, n)) = s(n-1) - 1 + δ_m`.
pub fn cl_s_conf(m: u32, n: u32, s: u32) -> Result<u32, QueryError> {
    if n < 2 {
        return Err(QueryError::TooFewRobots { need: 2, got: n });
    }
    let q = TcQuery::new(m, n, 0, s)?;
    Ok(s * (n - 1) - 1 + q.delta_m())
}

/// Lusternik–Schnirelmann category: `n - 1` without obstacles, `n` with.
pub fn cat_conf(m: u32, n: u32, p: u32) -> Result<u32, QueryError> {
    let q = TcQuery::new(m, n, p, 2)?;
    Ok(if q.p == 0 { q.n - 1 } else { q.n })
}

/// `TC_s` of a wedge of `p` spheres `S^{m-1}` (one robot among `p` obstacles).
pub fn tc_s_wedge(p: u32, m: u32, s: u32) -> Result<u32, QueryError> {
    if p < 1 {
        return Err(QueryError::NoObstacles);
    }
    TcQuery::new(m, 1, p, s)?;
    Ok(if p == 1 && m % 2 == 0 { s - 1 } else { s })
}

/// Dimension/connectivity upper bound `floor(s * dim / (conn + 1))`.
///
/// Only this instantiation is implemented, not the general theorem it comes
/// from.
pub fn upper_bound_dim_conn(dim: u32, conn: u32, s: u32) -> u32 {
    s * dim / (conn + 1)
}

pub fn upper_bound(q: &TcQuery) -> u32 {
    upper_bound_dim_conn(q.homotopy_dimension(), q.connectivity(), q.s)
}
