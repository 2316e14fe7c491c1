//! Points in Euclidean space and the manifold constants used by bound calculators.

use crate::error::{Error, Result};

/// A point of the ambient space `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    /// Builds a point, rejecting empty or non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point coordinates"));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Builds a point without validation. Callers must guarantee the invariants.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl<const N: usize> TryFrom<[f64; N]> for Point {
    type Error = Error;

    fn try_from(coords: [f64; N]) -> Result<Self> {
        Point::new(coords.to_vec())
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn euclidean_distance(p: &Point, q: &Point) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(squared_distance(p.coords(), q.coords()).sqrt())
}

/// Squared distance of two equal-length coordinate slices.
///
/// Every distance in the crate goes through this function so that the tree
/// search, the brute-force scans and the Rips threshold agree bit for bit.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Regularity constants of the underlying manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldParams {
    /// Reach of the embedding.
    pub reach: f64,
    /// Strong convexity radius.
    pub strong_convexity: f64,
    /// Lipschitz constant of the scalar field (geodesic metric).
    pub lipschitz: f64,
    /// Upper bound on sectional curvature.
    pub curvature_bound: f64,
    pub volume: f64,
    pub intrinsic_dim: usize,
}

impl ManifoldParams {
    pub fn new(
        reach: f64,
        strong_convexity: f64,
        lipschitz: f64,
        curvature_bound: f64,
        volume: f64,
        intrinsic_dim: usize,
    ) -> Result<Self> {
        let positive = [
            ("reach", reach),
            ("strong_convexity", strong_convexity),
            ("curvature_bound", curvature_bound),
            ("volume", volume),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(lipschitz.is_finite() && lipschitz >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lipschitz must be >= 0, got {lipschitz}"
            )));
        }
        if intrinsic_dim == 0 {
            return Err(Error::InvalidParameter("intrinsic_dim must be >= 1".into()));
        }
        Ok(ManifoldParams {
            reach,
            strong_convexity,
            lipschitz,
            curvature_bound,
            volume,
            intrinsic_dim,
        })
    }
}
