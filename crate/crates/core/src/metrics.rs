//! Grayscale images as scalar fields, and the PSNR and gap quality metrics.

use crate::diagram::{ExtendedReal, PersistenceDiagram};
use crate::error::{invalid, Error, Result};
use crate::geometry::Point;
use crate::sample::ScalarSample;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::InvalidData(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width.saturating_mul(height),
                pixels.len()
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    /// Rounds and clamps row-major values into `0..=255`.
    pub fn from_values(width: usize, height: usize, values: &[f64]) -> Result<Self> {
        let pixels = values.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
        GrayImage::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// `10·log10(256² / MSE)`; infinite for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<ExtendedReal> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::InvalidData(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    if a.pixels.is_empty() {
        return Err(Error::Empty("image"));
    }
    let sse: u64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(ExtendedReal::Infinite);
    }
    let mse = sse as f64 / a.pixels.len() as f64;
    Ok(ExtendedReal::Finite(10.0 * (65536.0 / mse).log10()))
}

/// Ratio of the `n_relevant`-th longest lifespan in dimension `dim` to the next
/// one. Infinite if there is no next one or only the numerator is infinite.
pub fn gap(diagram: &PersistenceDiagram, dim: usize, n_relevant: usize) -> Result<ExtendedReal> {
    if n_relevant == 0 {
        return invalid("n_relevant must be >= 1");
    }
    let mut spans: Vec<ExtendedReal> = diagram.in_dim(dim).map(|p| p.lifespan()).collect();
    spans.sort_by(|a, b| b.partial_cmp(a).expect("lifespans are comparable"));
    if spans.len() <= n_relevant {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(match (spans[n_relevant - 1], spans[n_relevant]) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
            if b == 0.0 {
                ExtendedReal::Infinite
            } else {
                ExtendedReal::Finite(a / b)
            }
        }
        (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => ExtendedReal::Infinite,
        // Both infinite: the ratio is undefined, treat the features as tied.
        _ => ExtendedReal::Finite(1.0),
    })
}

/// Pixel `(row r, col c)` becomes the point `(c, r)` valued by its intensity.
pub fn image_to_sample(img: &GrayImage) -> Result<ScalarSample> {
    if img.pixels.is_empty() {
        return Err(Error::Empty("image"));
    }
    let mut rows = Vec::with_capacity(img.pixels.len());
    for r in 0..img.height {
        for c in 0..img.width {
            rows.push(Point::new(vec![c as f64, r as f64])?);
        }
    }
    let values = img.pixels.iter().map(|&p| p as f64).collect();
    ScalarSample::new(rows, values)
}
