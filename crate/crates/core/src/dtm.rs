//! Distance to the empirical measure of a point set, outlier filtering by its
//! sublevel sets, and an exact W₂ distance between equal-size point sets.

use crate::assignment::min_cost_assignment;
use crate::error::{invalid, Error, Result};
use crate::geometry::{squared_distance, Point};
use crate::neighbors::NeighborIndex;
use crate::par::Exec;
use crate::sample::ScalarSample;

/// Root-mean-square distance from `query` to its `k` nearest dataset points.
pub fn dtm_value(index: &NeighborIndex, query: &Point, k: usize) -> Result<f64> {
    dtm_value_coords(index, query.coords(), k)
}

fn dtm_value_coords(index: &NeighborIndex, query: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > index.len() {
        return invalid(format!("dtm k={k} must lie in 1..={}", index.len()));
    }
    let nn = index.knn_coords(query, k)?;
    let sum_sq: f64 = nn.iter().map(|n| n.distance * n.distance).sum();
    Ok((sum_sq / k as f64).sqrt())
}

/// DTM at every query point.
pub fn dtm_values(index: &NeighborIndex, queries: &[Point], k: usize) -> Result<Vec<f64>> {
    dtm_values_with(index, queries, k, Exec::default())
}

pub fn dtm_values_with(
    index: &NeighborIndex,
    queries: &[Point],
    k: usize,
    exec: Exec,
) -> Result<Vec<f64>> {
    exec.try_map_range(queries.len(), |i| dtm_value(index, &queries[i], k))
}

/// DTM of the sample's own measure, evaluated at each sample point.
pub fn sample_dtm(sample: &ScalarSample, k: usize) -> Result<Vec<f64>> {
    let index = NeighborIndex::build(sample.points())?;
    dtm_values(&index, sample.points(), k)
}

/// Number of neighbors for a mass `m ∈ (0, 1]` over `n` points: `⌈m·n⌉`.
pub fn k_from_mass(mass: f64, n: usize) -> Result<usize> {
    if !(mass > 0.0 && mass <= 1.0) {
        return invalid(format!("mass must lie in (0, 1], got {mass}"));
    }
    Ok(((mass * n as f64).ceil() as usize).clamp(1, n.max(1)))
}

/// Points whose DTM is at most `eta`, in input order, with their values.
pub fn dtm_filter(sample: &ScalarSample, k: usize, eta: f64) -> Result<(Vec<usize>, ScalarSample)> {
    if eta.is_nan() {
        return invalid("eta must not be NaN");
    }
    let dtm = sample_dtm(sample, k)?;
    Ok(filter_by_threshold(sample, &dtm, eta))
}

/// Keeps the indices whose precomputed `dtm` value is `<= eta`.
pub fn filter_by_threshold(sample: &ScalarSample, dtm: &[f64], eta: f64) -> (Vec<usize>, ScalarSample) {
    let kept: Vec<usize> = (0..sample.len()).filter(|&i| dtm[i] <= eta).collect();
    let filtered = sample.subset(&kept);
    (kept, filtered)
}

/// Nearest-rank `q`-th percentile (`q ∈ [0, 100]`) of `values`.
///
/// This is a heuristic for choosing a filtering threshold when the sampling
/// quality is unknown.
pub fn percentile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("percentile values"));
    }
    if !(0.0..=100.0).contains(&q) {
        return invalid(format!("percentile must lie in [0, 100], got {q}"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q / 100.0) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// W₂ distance between the uniform measures on two equal-size point sets,
/// computed exactly by optimal assignment.
pub fn wasserstein2_empirical(p: &[Point], q: &[Point]) -> Result<f64> {
    if p.len() != q.len() {
        return invalid(format!(
            "W2 oracle needs equal-size sets, got {} and {}",
            p.len(),
            q.len()
        ));
    }
    let n = p.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut cost = Vec::with_capacity(n * n);
    for a in p {
        for b in q {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    found: b.dim(),
                });
            }
            cost.push(squared_distance(a.coords(), b.coords()));
        }
    }
    let (total, _) = min_cost_assignment(&cost, n);
    Ok((total / n as f64).max(0.0).sqrt())
}
