//! Functional denoising: replace each observed value by a robust statistic of
//! the observed values on its k nearest neighbors.

use crate::error::{invalid, Error, Result};
use crate::neighbors::NeighborIndex;
use crate::par::Exec;
use crate::sample::{DenoisedSample, ScalarSample};

/// Which statistic of the neighbor values replaces a point's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenoiseMethod {
    /// Lower median of the k neighbor values.
    KMedian,
    /// Mean of the minimum-disparity window of `kprime` sorted neighbor values.
    Disparity { kprime: usize },
    /// Arithmetic mean of the k neighbor values.
    KnnMean,
}

impl DenoiseMethod {
    /// Checks the method's constraints for a neighborhood size `k`.
    pub fn validate(self, k: usize) -> Result<()> {
        if k == 0 {
            return invalid("k must be >= 1");
        }
        if let DenoiseMethod::Disparity { kprime } = self {
            // k >= k' > k/2, written without division.
            if kprime > k || 2 * kprime <= k {
                return invalid(format!("disparity requires k >= k' > k/2, got k={k}, k'={kprime}"));
            }
        }
        Ok(())
    }
}

/// Population variance of `values`.
pub fn disparity(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("disparity values"));
    }
    Ok(variance(values))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn variance(values: &[f64]) -> f64 {
    let mu = mean(values);
    values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / values.len() as f64
}

/// Lower median (index `(k-1)/2` of the sorted values).
fn lower_median(sorted: &[f64]) -> f64 {
    sorted[(sorted.len() - 1) / 2]
}

/// Start index and disparity of the least-variance window of length `kprime`
/// over already sorted values. Ties go to the smallest start.
pub fn min_window_disparity(sorted: &[f64], kprime: usize) -> Result<(usize, f64)> {
    if kprime == 0 || kprime > sorted.len() {
        return invalid(format!("window length {kprime} out of range 1..={}", sorted.len()));
    }
    let mut best = (0, f64::INFINITY);
    for start in 0..=sorted.len() - kprime {
        let phi = variance(&sorted[start..start + kprime]);
        if phi < best.1 {
            best = (start, phi);
        }
    }
    Ok(best)
}

/// Denoises with the default execution policy.
pub fn denoise(sample: &ScalarSample, method: DenoiseMethod, k: usize) -> Result<DenoisedSample> {
    denoise_with(sample, method, k, Exec::default())
}

/// Denoises every point of `sample`; per-point work runs under `exec`.
pub fn denoise_with(
    sample: &ScalarSample,
    method: DenoiseMethod,
    k: usize,
    exec: Exec,
) -> Result<DenoisedSample> {
    method.validate(k)?;
    if k > sample.len() {
        return invalid(format!("k={k} exceeds the sample size {}", sample.len()));
    }
    let index = NeighborIndex::build(sample.points())?;
    let values = sample.values();
    let denoised = exec.try_map_range(sample.len(), |i| {
        let nn = index.knn_coords(sample.points()[i].coords(), k)?;
        let mut local: Vec<f64> = nn.iter().map(|n| values[n.index]).collect();
        Ok::<f64, Error>(match method {
            DenoiseMethod::KnnMean => mean(&local),
            DenoiseMethod::KMedian => {
                local.sort_by(f64::total_cmp);
                lower_median(&local)
            }
            DenoiseMethod::Disparity { kprime } => {
                local.sort_by(f64::total_cmp);
                let (start, _) = min_window_disparity(&local, kprime)?;
                mean(&local[start..start + kprime])
            }
        })
    })?;
    DenoisedSample::new(sample.clone(), denoised)
}

pub fn kmedian_denoise(sample: &ScalarSample, k: usize) -> Result<DenoisedSample> {
    denoise(sample, DenoiseMethod::KMedian, k)
}

pub fn disparity_denoise(sample: &ScalarSample, k: usize, kprime: usize) -> Result<DenoisedSample> {
    denoise(sample, DenoiseMethod::Disparity { kprime }, k)
}

pub fn knn_mean_denoise(sample: &ScalarSample, k: usize) -> Result<DenoisedSample> {
    denoise(sample, DenoiseMethod::KnnMean, k)
}

/// Worst-case `|f̂ - f|` for a sample in which at least `k'` of every point's
/// `k` nearest neighbors observe a value within `delta` of the true value.
///
/// The multiplier is 1 for the median and `1 + 2 sqrt((k-k')/(2k'-k))` for the
/// disparity window. The neighbor mean has no such bound.
pub fn error_bound(method: DenoiseMethod, k: usize, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return invalid(format!("delta must be >= 0, got {delta}"));
    }
    method.validate(k)?;
    match method {
        DenoiseMethod::KMedian => Ok(delta),
        DenoiseMethod::Disparity { kprime } => {
            let ratio = (k - kprime) as f64 / (2 * kprime - k) as f64;
            Ok((1.0 + 2.0 * ratio.sqrt()) * delta)
        }
        DenoiseMethod::KnnMean => invalid("the neighbor mean has no outlier-robust error bound"),
    }
}
