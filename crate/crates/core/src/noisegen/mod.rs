//! Synthetic scalar fields and the noise models applied to them.

mod bounds;

pub use bounds::{convexity_volume_constant, gaussian_delta_bound, wasserstein_epsilon_bound};

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};
use crate::geometry::Point;
use crate::metrics::GrayImage;
use crate::rng::seeded_rng;
use crate::sample::ScalarSample;

/// Scalar field placed on a sampled circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleField {
    /// `f(x, y) = y`.
    Height,
    /// Arc length to the point at angle 0.
    GeodesicFromBase,
}

/// `n` evenly spaced points on the circle of the given radius, point `i` at
/// angle `2πi/n`.
pub fn sample_circle(n: usize, radius: f64, field: CircleField) -> Result<ScalarSample> {
    if n < 3 {
        return invalid(format!("a circle sample needs n >= 3, got {n}"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return invalid(format!("radius must be positive, got {radius}"));
    }
    let mut points = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        let (s, c) = theta.sin_cos();
        points.push(Point::from_vec_unchecked(vec![radius * c, radius * s]));
        values.push(match field {
            CircleField::Height => radius * s,
            CircleField::GeodesicFromBase => radius * theta.min(2.0 * PI - theta),
        });
    }
    ScalarSample::new(points, values)
}

/// Closed dumbbell curve: two unit circles centred at `(±BONE_HALF_SPAN, 0)`
/// joined by two horizontal segments at `y = ±neck_width/2`.
pub const BONE_HALF_SPAN: f64 = 1.5;
const BONE_RADIUS: f64 = 1.0;

/// Arc-length parameterization of the dumbbell. `s = 0` is the middle of the
/// upper neck segment; the curve runs right along it, around the right lobe,
/// back along the lower segment and around the left lobe.
#[derive(Debug, Clone, Copy)]
pub struct BoneCurve {
    half_width: f64,
    segment: f64,
    lobe_arc: f64,
}

impl BoneCurve {
    pub fn new(neck_width: f64) -> Result<Self> {
        if !(neck_width > 0.0 && neck_width < 2.0 * BONE_RADIUS) {
            return invalid(format!("neck width must lie in (0, 2), got {neck_width}"));
        }
        let half_width = neck_width / 2.0;
        let inset = (BONE_RADIUS * BONE_RADIUS - half_width * half_width).sqrt();
        let segment = BONE_HALF_SPAN - inset;
        // The lobe covers the circle except the arc facing the neck.
        let lobe_arc = 2.0 * BONE_RADIUS * (PI - (half_width / BONE_RADIUS).asin());
        Ok(BoneCurve {
            half_width,
            segment,
            lobe_arc,
        })
    }

    pub fn perimeter(&self) -> f64 {
        4.0 * self.segment + 2.0 * self.lobe_arc
    }

    /// Geodesic distance along the curve from the base point.
    pub fn geodesic_from_base(&self, s: f64) -> f64 {
        let p = self.perimeter();
        let s = s.rem_euclid(p);
        s.min(p - s)
    }

    /// Point at arc length `s` (taken modulo the perimeter).
    pub fn point(&self, s: f64) -> [f64; 2] {
        let s = s.rem_euclid(self.perimeter());
        let (seg, arc, h) = (self.segment, self.lobe_arc, self.half_width);
        let start_angle = PI - (h / BONE_RADIUS).asin();
        if s < seg {
            [s, h]
        } else if s < seg + arc {
            // Clockwise around the right lobe from the upper junction.
            let a = start_angle - (s - seg) / BONE_RADIUS;
            [BONE_HALF_SPAN + BONE_RADIUS * a.cos(), BONE_RADIUS * a.sin()]
        } else if s < 3.0 * seg + arc {
            [seg - (s - seg - arc), -h]
        } else if s < 3.0 * seg + 2.0 * arc {
            // Clockwise around the left lobe from the lower junction.
            let a = -(h / BONE_RADIUS).asin() - (s - 3.0 * seg - arc) / BONE_RADIUS;
            [-BONE_HALF_SPAN + BONE_RADIUS * a.cos(), BONE_RADIUS * a.sin()]
        } else {
            [s - 4.0 * seg - 2.0 * arc, h]
        }
    }
}

/// `n` points drawn uniformly by arc length on a [`BoneCurve`], sorted by arc
/// length, valued by geodesic distance to the base point.
pub fn sample_bone(n: usize, neck_width: f64, seed: u64) -> Result<ScalarSample> {
    if n < 10 {
        return invalid(format!("a bone sample needs n >= 10, got {n}"));
    }
    let curve = BoneCurve::new(neck_width)?;
    let mut rng = seeded_rng(seed);
    let perimeter = curve.perimeter();
    let mut positions: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..perimeter)).collect();
    positions.sort_by(f64::total_cmp);
    let points = positions
        .iter()
        .map(|&s| Point::from_vec_unchecked(curve.point(s).to_vec()))
        .collect();
    let values = positions.iter().map(|&s| curve.geodesic_from_base(s)).collect();
    ScalarSample::new(points, values)
}

/// Light background with two dark Gaussian blobs centred at one and two thirds
/// of the diagonal. Intensities span roughly 50 to 200.
pub fn two_blob_image(width: usize, height: usize) -> Result<GrayImage> {
    if width < 4 || height < 4 {
        return invalid(format!("blob image needs at least 4x4 pixels, got {width}x{height}"));
    }
    let (w, h) = (width as f64, height as f64);
    let spread = w.min(h) / 8.0;
    let centers = [(w / 3.0, h / 3.0), (2.0 * w / 3.0, 2.0 * h / 3.0)];
    let mut values = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            let dip: f64 = centers
                .iter()
                .map(|&(cx, cy)| {
                    let d2 = (c as f64 - cx).powi(2) + (r as f64 - cy).powi(2);
                    (-d2 / (2.0 * spread * spread)).exp()
                })
                .sum();
            values.push(200.0 - 150.0 * dip);
        }
    }
    GrayImage::from_values(width, height, &values)
}

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    /// Smallest box containing the sample, grown by `margin` on every side.
    pub fn around(sample: &ScalarSample, margin: f64) -> Result<Self> {
        let d = sample.ambient_dim().ok_or(Error::Empty("sample"))?;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in sample.points() {
            for (i, &c) in p.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        Ok(BoundingBox {
            lo: lo.iter().map(|v| v - margin).collect(),
            hi: hi.iter().map(|v| v + margin).collect(),
        })
    }
}

/// Noise models.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// With probability `p` a value is replaced by a uniform draw from `[lo, hi]`.
    ImpulseUniform { p: f64, lo: f64, hi: f64 },
    /// With probability `p` a value is replaced by `value`.
    ImpulseConstant { p: f64, value: f64 },
    /// Additive centred Gaussian on values, standard deviation `sigma`.
    GaussianFunctional { sigma: f64 },
    /// Additive centred Gaussian on every coordinate, standard deviation `sigma`.
    GaussianGeometric { sigma: f64 },
    /// `count` extra points uniform in `bounds`, values uniform over the
    /// sample's value range.
    Clutter { count: usize, bounds: BoundingBox },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                invalid(format!("probability must lie in [0, 1], got {p}"))
            }
        };
        let sigma = |s: f64| {
            if s >= 0.0 && s.is_finite() {
                Ok(())
            } else {
                invalid(format!("sigma must be finite and >= 0, got {s}"))
            }
        };
        match self {
            NoiseSpec::ImpulseUniform { p, lo, hi } => {
                prob(*p)?;
                if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                    return invalid(format!("impulse range [{lo}, {hi}] is invalid"));
                }
                Ok(())
            }
            NoiseSpec::ImpulseConstant { p, value } => {
                prob(*p)?;
                if !value.is_finite() {
                    return invalid("impulse value must be finite");
                }
                Ok(())
            }
            NoiseSpec::GaussianFunctional { sigma: s } | NoiseSpec::GaussianGeometric { sigma: s } => sigma(*s),
            NoiseSpec::Clutter { bounds, .. } => {
                if bounds.lo.len() != bounds.hi.len()
                    || bounds.lo.iter().zip(&bounds.hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite())
                {
                    return invalid("clutter box is invalid");
                }
                Ok(())
            }
        }
    }
}

/// Applies one noise model. Deterministic given `seed`; a spec with zero
/// probability, zero sigma or zero count returns the sample unchanged.
pub fn apply_noise(sample: &ScalarSample, spec: &NoiseSpec, seed: u64) -> Result<ScalarSample> {
    spec.validate()?;
    let mut rng = seeded_rng(seed);
    match *spec {
        NoiseSpec::ImpulseUniform { p, lo, hi } => {
            if p == 0.0 {
                return Ok(sample.clone());
            }
            let values = sample
                .values()
                .iter()
                .map(|&v| {
                    if rng.random_bool(p) {
                        if lo == hi { lo } else { rng.random_range(lo..=hi) }
                    } else {
                        v
                    }
                })
                .collect();
            sample.with_values(values)
        }
        NoiseSpec::ImpulseConstant { p, value } => {
            if p == 0.0 {
                return Ok(sample.clone());
            }
            let values = sample
                .values()
                .iter()
                .map(|&v| if rng.random_bool(p) { value } else { v })
                .collect();
            sample.with_values(values)
        }
        NoiseSpec::GaussianFunctional { sigma } => {
            if sigma == 0.0 {
                return Ok(sample.clone());
            }
            let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let values = sample.values().iter().map(|&v| v + normal.sample(&mut rng)).collect();
            sample.with_values(values)
        }
        NoiseSpec::GaussianGeometric { sigma } => {
            if sigma == 0.0 {
                return Ok(sample.clone());
            }
            let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let points = sample
                .points()
                .iter()
                .map(|p| {
                    Point::from_vec_unchecked(p.coords().iter().map(|&c| c + normal.sample(&mut rng)).collect())
                })
                .collect();
            ScalarSample::new(points, sample.values().to_vec())
        }
        NoiseSpec::Clutter { count, ref bounds } => {
            if count == 0 {
                return Ok(sample.clone());
            }
            let dim = sample.ambient_dim().unwrap_or(bounds.lo.len());
            if bounds.lo.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bounds.lo.len(),
                });
            }
            let (vmin, vmax) = sample
                .values()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let (vmin, vmax) = if vmin.is_finite() { (vmin, vmax) } else { (0.0, 0.0) };
            let (mut points, mut values) = sample.clone().into_parts();
            for _ in 0..count {
                let coords = bounds
                    .lo
                    .iter()
                    .zip(&bounds.hi)
                    .map(|(&l, &h)| if l == h { l } else { rng.random_range(l..=h) })
                    .collect();
                points.push(Point::from_vec_unchecked(coords));
                values.push(if vmin == vmax { vmin } else { rng.random_range(vmin..=vmax) });
            }
            ScalarSample::new(points, values)
        }
    }
}
