//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use scalar_topo::complex::FilteredComplex;
use scalar_topo::rng::SeededRng;
use scalar_topo::{NestedPair, Point, ScalarSample};

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Linear scan, sorted by (distance, index).
pub fn brute_knn(points: &[Point], query: &[f64], k: usize) -> Vec<(usize, f64)> {
    let mut all: Vec<(usize, f64)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, dist(p.coords(), query)))
        .collect();
    all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

pub fn brute_dtm(points: &[Point], query: &[f64], k: usize) -> f64 {
    let nn = brute_knn(points, query, k);
    (nn.iter().map(|(_, d)| d * d).sum::<f64>() / k as f64).sqrt()
}

/// Population variance, two passes, in the given order.
pub fn variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// All `size`-element index subsets of `0..n`.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// A sample with known field `truth` in which every point has at least
/// `kprime` of its `k` nearest neighbors observing a value within `delta` of
/// its own true value.
///
/// Points come in clusters of exactly `k`, 100 units apart, so that a point's
/// neighborhood is its cluster. True values vary by at most `0.33·delta`
/// around the cluster level and inlier observations by at most `0.66·delta`; the
/// remaining `k − kprime` observations of each cluster are arbitrary.
pub fn functional_sample(
    rng: &mut SeededRng,
    k: usize,
    kprime: usize,
    delta: f64,
    clusters: usize,
) -> (ScalarSample, Vec<f64>) {
    let mut rows = Vec::new();
    let mut observed = Vec::new();
    let mut truth = Vec::new();
    for c in 0..clusters {
        let level: f64 = rng.random_range(-10.0..10.0);
        let outliers = k - kprime;
        for j in 0..k {
            let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let radius: f64 = rng.random_range(0.0..1.0);
            rows.push(vec![100.0 * c as f64 + radius * angle.cos(), radius * angle.sin()]);
            truth.push(level + rng.random_range(-0.33 * delta..=0.33 * delta));
            observed.push(if j < outliers {
                let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                level + side * rng.random_range(0.0..100.0 * delta.max(1.0))
            } else {
                level + rng.random_range(-0.66 * delta..=0.66 * delta)
            });
        }
    }
    (ScalarSample::from_rows(rows, observed).unwrap(), truth)
}

/// Checks the neighborhood condition by brute force.
pub fn is_functional_sample(sample: &ScalarSample, truth: &[f64], k: usize, kprime: usize, delta: f64) -> bool {
    let pts = sample.points();
    (0..pts.len()).all(|i| {
        let good = brute_knn(pts, pts[i].coords(), k)
            .iter()
            .filter(|(j, _)| (sample.values()[*j] - truth[i]).abs() <= delta)
            .count();
        good >= kprime
    })
}

/// Smallest `s` for which every point has `kprime` of its `k` nearest
/// neighbors observing values within `s` of its true value.
pub fn realized_delta(sample: &ScalarSample, truth: &[f64], k: usize, kprime: usize) -> f64 {
    let pts = sample.points();
    (0..pts.len())
        .map(|i| {
            let mut errs: Vec<f64> = brute_knn(pts, pts[i].coords(), k)
                .iter()
                .map(|(j, _)| (sample.values()[*j] - truth[i]).abs())
                .collect();
            errs.sort_by(f64::total_cmp);
            errs[kprime - 1]
        })
        .fold(0.0, f64::max)
}

/// Every vertex set of size `2..=max_size` whose pairwise distances are at
/// most `threshold`, plus all singletons, with max-vertex filtration values.
pub fn brute_cliques(points: &[Point], values: &[f64], threshold: f64, max_size: usize) -> Vec<(Vec<usize>, f64)> {
    let n = points.len();
    let mut out = Vec::new();
    for size in 1..=max_size.min(n) {
        for s in subsets(n, size) {
            let ok = s
                .iter()
                .enumerate()
                .all(|(i, &a)| s[i + 1..].iter().all(|&b| dist(points[a].coords(), points[b].coords()) <= threshold));
            if ok {
                let v = s.iter().map(|&i| values[i]).fold(f64::NEG_INFINITY, f64::max);
                out.push((s, v));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn random_points(rng: &mut SeededRng, n: usize, dim: usize, scale: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new((0..dim).map(|_| rng.random_range(0.0..scale)).collect()).unwrap())
        .collect()
}

/// Random nested pair on `n <= 12` vertices with at most `levels` distinct
/// values: a random graph for the large complex and a random subgraph for the
/// small one.
pub fn random_graph_pair(rng: &mut SeededRng, n: usize, levels: usize, max_dim: usize) -> NestedPair {
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64).collect();
    let p_large: f64 = rng.random_range(0.2..0.8);
    let keep: f64 = rng.random_range(0.3..1.0);
    let mut large = Vec::new();
    let mut small = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p_large) {
                large.push((a, b));
                if rng.random_bool(keep) {
                    small.push((a, b));
                }
            }
        }
    }
    let k = FilteredComplex::from_edges(values.clone(), &small, max_dim + 1).unwrap();
    let l = FilteredComplex::from_edges(values, &large, max_dim + 1).unwrap();
    NestedPair::new(k, l).unwrap()
}

/// Nested pair whose small complex contains a ring through `4..=n` vertices,
/// so images in degree one are often nontrivial. The large complex adds random
/// chords, which may fill the ring in.
pub fn random_ring_pair(rng: &mut SeededRng, n: usize, levels: usize, max_dim: usize) -> NestedPair {
    let n = n.max(4);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64).collect();
    let ring = rng.random_range(4..=n);
    let mut small: Vec<(usize, usize)> = (0..ring).map(|i| (i, (i + 1) % ring)).collect();
    let mut large = small.clone();
    for a in 0..n {
        for b in a + 1..n {
            if small.contains(&(a, b)) || small.contains(&(b, a)) {
                continue;
            }
            if rng.random_bool(0.15) {
                large.push((a, b));
                if rng.random_bool(0.3) {
                    small.push((a, b));
                }
            }
        }
    }
    let k = FilteredComplex::from_edges(values.clone(), &small, max_dim + 1).unwrap();
    let l = FilteredComplex::from_edges(values, &large, max_dim + 1).unwrap();
    NestedPair::new(k, l).unwrap()
}

/// Lanczos approximation of Γ (g = 7, 9 terms), accurate to about 1e-15.
pub fn lanczos_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Minimum-cost perfect matching by successive shortest augmenting paths
/// (Bellman-Ford on the residual graph).
pub fn min_cost_matching(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    // Nodes: source 0, rows 1..=n, columns n+1..=2n, sink 2n+1.
    let nodes = 2 * n + 2;
    let (src, sink) = (0, 2 * n + 1);
    struct Edge {
        to: usize,
        cap: i32,
        cost: f64,
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let add = |edges: &mut Vec<Edge>, adj: &mut Vec<Vec<usize>>, a: usize, b: usize, c: f64| {
        adj[a].push(edges.len());
        edges.push(Edge { to: b, cap: 1, cost: c });
        adj[b].push(edges.len());
        edges.push(Edge { to: a, cap: 0, cost: -c });
    };
    for (i, row) in cost.iter().enumerate() {
        add(&mut edges, &mut adj, src, 1 + i, 0.0);
        add(&mut edges, &mut adj, 1 + n + i, sink, 0.0);
        for (j, &c) in row.iter().enumerate() {
            add(&mut edges, &mut adj, 1 + i, 1 + n + j, c);
        }
    }
    let mut total = 0.0;
    for _ in 0..n {
        let mut dist = vec![f64::INFINITY; nodes];
        let mut via = vec![usize::MAX; nodes];
        dist[src] = 0.0;
        loop {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u].is_infinite() {
                    continue;
                }
                for &e in &adj[u] {
                    let edge = &edges[e];
                    if edge.cap > 0 && dist[u] + edge.cost < dist[edge.to] - 1e-15 {
                        dist[edge.to] = dist[u] + edge.cost;
                        via[edge.to] = e;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut v = sink;
        while v != src {
            let e = via[v];
            edges[e].cap -= 1;
            edges[e ^ 1].cap += 1;
            total += edges[e].cost;
            v = edges[e ^ 1].to;
        }
    }
    total
}

/// W2 between the uniform measures on two equal-size point sets.
pub fn wasserstein2(p: &[Point], q: &[Point]) -> f64 {
    let cost: Vec<Vec<f64>> = p
        .iter()
        .map(|a| q.iter().map(|b| dist(a.coords(), b.coords()).powi(2)).collect())
        .collect();
    (min_cost_matching(&cost) / p.len() as f64).max(0.0).sqrt()
}

/// Image persistence multiplicities by inclusion-exclusion over `rank`,
/// where `rank(i, j)` is the rank of the map from the small complex at grid
/// value `i` into the large complex at grid value `j`. Returns
/// `(birth index, death index or None, multiplicity)` for nonzero entries.
pub fn multiplicities(levels: usize, rank: impl Fn(usize, usize) -> usize) -> Vec<(usize, Option<usize>, usize)> {
    let r = |i: isize, j: usize| if i < 0 { 0 } else { rank(i as usize, j) as isize };
    let mut out = Vec::new();
    for i in 0..levels {
        let ii = i as isize;
        for j in i + 1..levels {
            let m = r(ii, j - 1) - r(ii - 1, j - 1) - r(ii, j) + r(ii - 1, j);
            assert!(m >= 0, "negative multiplicity at ({i}, {j})");
            if m > 0 {
                out.push((i, Some(j), m as usize));
            }
        }
        let m = r(ii, levels - 1) - r(ii - 1, levels - 1);
        assert!(m >= 0);
        if m > 0 {
            out.push((i, None, m as usize));
        }
    }
    out
}
