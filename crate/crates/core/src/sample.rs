//! Sampled scalar fields.

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A finite point sample together with observed scalar values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSample {
    points: Vec<Point>,
    values: Vec<f64>,
}

impl ScalarSample {
    pub fn new(points: Vec<Point>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if let Some(first) = points.first() {
            let d = first.dim();
            if let Some(p) = points.iter().find(|p| p.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                });
            }
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidData(format!("value {v} at index {i} is not finite")));
        }
        Ok(ScalarSample { points, values })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(rows: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        let points = rows.into_iter().map(Point::new).collect::<Result<Vec<_>>>()?;
        ScalarSample::new(points, values)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension, `None` for an empty sample.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.points.first().map(Point::dim)
    }

    /// Same points, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        ScalarSample::new(self.points.clone(), values)
    }

    /// Restriction to the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> ScalarSample {
        ScalarSample {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            values: indices.iter().map(|&i| self.values[i]).collect(),
        }
    }

    pub fn into_parts(self) -> (Vec<Point>, Vec<f64>) {
        (self.points, self.values)
    }
}

/// A sample paired with denoised values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoisedSample {
    sample: ScalarSample,
    denoised: Vec<f64>,
}

impl DenoisedSample {
    pub fn new(sample: ScalarSample, denoised: Vec<f64>) -> Result<Self> {
        if denoised.len() != sample.len() {
            return Err(Error::InvalidData(format!(
                "{} denoised values for {} points",
                denoised.len(),
                sample.len()
            )));
        }
        if denoised.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("denoised values must be finite".into()));
        }
        Ok(DenoisedSample { sample, denoised })
    }

    pub fn sample(&self) -> &ScalarSample {
        &self.sample
    }

    pub fn denoised(&self) -> &[f64] {
        &self.denoised
    }

    /// The denoised field as a sample over the same points.
    pub fn to_sample(&self) -> ScalarSample {
        ScalarSample {
            points: self.sample.points.clone(),
            values: self.denoised.clone(),
        }
    }
}
