use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::geometry::ManifoldParams;

/// Value-accuracy radius for Gaussian functional noise: with high probability at
/// least `kprime` of the `k` neighbor values lie within this distance of `f(p)`.
/// `lambda` is the neighborhood radius supplied by the caller.
pub fn gaussian_delta_bound(sigma: f64, k: usize, kprime: usize, c: f64, lambda: f64) -> Result<f64> {
    if k <= kprime {
        return invalid(format!("need k > kprime, got k={k}, kprime={kprime}"));
    }
    for (name, v) in [("sigma", sigma), ("c", c), ("lambda", lambda)] {
        if !(v.is_finite() && v >= 0.0) {
            return invalid(format!("{name} must be finite and >= 0, got {v}"));
        }
    }
    let ratio = 2.0 * k as f64 / (k - kprime) as f64;
    Ok(sigma * ratio.ln().sqrt() + c * lambda)
}

/// `(4/d′) Γ(1/2)^d′ / Γ(d′/2) · (√c_M / π)^(d′−1)`.
pub fn convexity_volume_constant(intrinsic_dim: usize, curvature_bound: f64) -> Result<f64> {
    if intrinsic_dim == 0 {
        return invalid("intrinsic dimension must be >= 1");
    }
    if !(curvature_bound.is_finite() && curvature_bound > 0.0) {
        return invalid(format!("curvature bound must be > 0, got {curvature_bound}"));
    }
    let d = intrinsic_dim as f64;
    Ok((4.0 / d) * gamma(0.5).powf(d) / gamma(d / 2.0) * (curvature_bound.sqrt() / PI).powf(d - 1.0))
}

/// Smallest DTM sampling radius guaranteed for a uniform sample of the manifold
/// with Gaussian ambient noise of deviation `sigma`, at mass `m`.
pub fn wasserstein_epsilon_bound(m: f64, sigma: f64, params: &ManifoldParams) -> Result<f64> {
    let d = params.intrinsic_dim as f64;
    let c = convexity_volume_constant(params.intrinsic_dim, params.curvature_bound)?;
    let cap = c * (PI / params.curvature_bound).powf(d) / params.volume;
    if !(m > 0.0 && m <= cap) {
        return invalid(format!("mass must lie in (0, {cap}], got {m}"));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return invalid(format!("sigma must be finite and >= 0, got {sigma}"));
    }
    let density = (m * params.volume / c).powf(1.0 / d) / (1.0 + 2.0 / d).sqrt();
    Ok(density + sigma / m.sqrt())
}
