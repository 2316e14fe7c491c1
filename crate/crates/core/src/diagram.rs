//! Persistence diagrams and the extended reals used for essential classes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A real number or `+∞`.
///
/// `+∞` is a tag rather than `f64::INFINITY` so that formats and comparisons
/// never confuse it with an overflowed float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    /// Maps `f64::INFINITY` to the tag; NaN and `-∞` are rejected.
    pub fn from_f64(v: f64) -> Result<Self> {
        if v.is_finite() {
            Ok(ExtendedReal::Finite(v))
        } else if v == f64::INFINITY {
            Ok(ExtendedReal::Infinite)
        } else {
            Err(Error::InvalidData(format!("{v} is not an extended real")))
        }
    }

    /// Float view, `+∞` as `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Infinite, Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" {
            return Ok(ExtendedReal::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidData(format!("cannot parse '{t}' as a number")))?;
        if !v.is_finite() {
            return Err(Error::InvalidData(format!("'{t}' is not a finite number")));
        }
        Ok(ExtendedReal::Finite(v))
    }
}

/// One point of a persistence diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    pub death: ExtendedReal,
}

impl PersistencePair {
    pub fn new(dim: usize, birth: f64, death: ExtendedReal) -> Result<Self> {
        if !birth.is_finite() {
            return Err(Error::InvalidData(format!("birth {birth} is not finite")));
        }
        if let ExtendedReal::Finite(d) = death {
            if !d.is_finite() || d < birth {
                return Err(Error::InvalidData(format!("death {d} precedes birth {birth}")));
            }
        }
        Ok(PersistencePair { dim, birth, death })
    }

    pub fn finite(dim: usize, birth: f64, death: f64) -> Result<Self> {
        PersistencePair::new(dim, birth, ExtendedReal::Finite(death))
    }

    pub fn essential(dim: usize, birth: f64) -> Result<Self> {
        PersistencePair::new(dim, birth, ExtendedReal::Infinite)
    }

    pub fn is_essential(&self) -> bool {
        !self.death.is_finite()
    }

    /// `death - birth`, `+∞` for essential pairs.
    pub fn lifespan(&self) -> ExtendedReal {
        match self.death {
            ExtendedReal::Finite(d) => ExtendedReal::Finite(d - self.birth),
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.to_f64().total_cmp(&other.death.to_f64()))
    }
}

/// A multiset of persistence pairs across homology dimensions.
///
/// The diagonal is implicit and never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn new(pairs: Vec<PersistencePair>) -> Self {
        let mut d = PersistenceDiagram { pairs };
        d.pairs.sort_by(PersistencePair::canonical_cmp);
        d
    }

    /// Pairs sorted by `(dim, birth, death)`.
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// Largest dimension present, if any.
    pub fn max_dim(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.dim).max()
    }

    /// Number of essential pairs in each dimension `0..=max_dim`.
    pub fn essential_counts(&self, max_dim: usize) -> Vec<usize> {
        let mut counts = vec![0; max_dim + 1];
        for p in self.pairs.iter().filter(|p| p.is_essential() && p.dim <= max_dim) {
            counts[p.dim] += 1;
        }
        counts
    }
}

impl FromIterator<PersistencePair> for PersistenceDiagram {
    fn from_iter<I: IntoIterator<Item = PersistencePair>>(iter: I) -> Self {
        PersistenceDiagram::new(iter.into_iter().collect())
    }
}
