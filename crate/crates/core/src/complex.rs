//! Vietoris–Rips complexes with vertex-valued sublevel filtrations.
//!
//! A Rips complex is the clique (flag) complex of its 1-skeleton, so a
//! [`FilteredComplex`] stores only vertex values and a threshold graph and
//! enumerates higher simplices on demand. Simplices are kept up to dimension
//! `max_dim + 1`, which is what homology in degree `max_dim` needs.
//!
//! Convention: `R_δ` has an edge `{x, y}` iff `d(x, y) <= 2δ`.

use std::cmp::Ordering;

use crate::error::{invalid, Error, Result};
use crate::geometry::{squared_distance, Point};
use crate::par::Exec;

/// A simplex given by strictly increasing vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty("simplex vertices"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidData(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, each obtained by dropping one vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }
}

/// A simplex together with its filtration value.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub value: f64,
}

/// Filtration order: value, then dimension, then lexicographic vertices.
pub fn filtration_order(a: &FilteredSimplex, b: &FilteredSimplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.simplex.dim().cmp(&b.simplex.dim()))
        .then_with(|| a.simplex.cmp(&b.simplex))
}

/// Flag complex over a vertex set with a max-of-vertices filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    values: Vec<f64>,
    adjacency: Vec<Vec<usize>>,
    max_simplex_dim: usize,
}

impl FilteredComplex {
    /// Flag complex of the graph `edges` on `values.len()` vertices, truncated
    /// at simplices of dimension `max_simplex_dim`.
    pub fn from_edges(values: Vec<f64>, edges: &[(usize, usize)], max_simplex_dim: usize) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("vertex value {v} is not finite")));
        }
        let n = values.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidData(format!("bad edge ({a}, {b}) on {n} vertices")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(FilteredComplex {
            values,
            adjacency,
            max_simplex_dim,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Highest simplex dimension materialized.
    pub fn max_simplex_dim(&self) -> usize {
        self.max_simplex_dim
    }

    /// Sorted neighbors of vertex `v` in the 1-skeleton.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (a, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Filtration value of a simplex: the largest value among its vertices.
    pub fn filtration(&self, s: &Simplex) -> f64 {
        s.vertices()
            .iter()
            .map(|&v| self.values[v])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        let vs = s.vertices();
        s.dim() <= self.max_simplex_dim
            && vs.iter().all(|&v| v < self.num_vertices())
            && vs
                .iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// All simplices of dimension `dim`, lexicographic.
    pub fn simplices_of_dim(&self, dim: usize) -> Vec<Simplex> {
        self.simplices_of_dim_with(dim, Exec::default())
    }

    pub fn simplices_of_dim_with(&self, dim: usize, exec: Exec) -> Vec<Simplex> {
        if dim > self.max_simplex_dim {
            return Vec::new();
        }
        let per_vertex = exec.map_range(self.num_vertices(), |v| {
            let mut out = Vec::new();
            let mut clique = vec![v];
            let higher: Vec<usize> = self.adjacency[v].iter().copied().filter(|&u| u > v).collect();
            self.extend_cliques(&mut clique, &higher, dim + 1, &mut out);
            out
        });
        per_vertex.into_iter().flatten().collect()
    }

    fn extend_cliques(&self, clique: &mut Vec<usize>, candidates: &[usize], size: usize, out: &mut Vec<Simplex>) {
        if clique.len() == size {
            out.push(Simplex::from_sorted(clique.clone()));
            return;
        }
        for (i, &u) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.has_edge(u, w))
                .collect();
            clique.push(u);
            self.extend_cliques(clique, &next, size, out);
            clique.pop();
        }
    }

    /// Every simplex with its value, in filtration order.
    pub fn filtered_simplices(&self) -> Vec<FilteredSimplex> {
        let mut all: Vec<FilteredSimplex> = (0..=self.max_simplex_dim)
            .flat_map(|d| self.simplices_of_dim(d))
            .map(|simplex| FilteredSimplex {
                value: self.filtration(&simplex),
                simplex,
            })
            .collect();
        all.sort_by(filtration_order);
        all
    }

    /// Number of simplices per dimension `0..=max_simplex_dim`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        (0..=self.max_simplex_dim)
            .map(|d| self.simplices_of_dim(d).len())
            .collect()
    }

    /// Sublevel subcomplex at `alpha`: vertices with value `<= alpha` and the
    /// simplices they span. Vertex numbering is kept.
    pub fn sublevel(&self, alpha: f64) -> Vec<FilteredSimplex> {
        self.filtered_simplices()
            .into_iter()
            .filter(|s| s.value <= alpha)
            .collect()
    }
}

fn check_inputs(points: &[Point], values: &[f64]) -> Result<()> {
    if points.len() != values.len() {
        return Err(Error::InvalidData(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if let Some(first) = points.first() {
        if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: p.dim(),
            });
        }
    }
    Ok(())
}

fn check_scale(name: &str, delta: f64) -> Result<()> {
    if !(delta >= 0.0) || delta.is_infinite() {
        return invalid(format!("{name} must be finite and >= 0, got {delta}"));
    }
    Ok(())
}

/// Pairs `(i, j)`, `i < j`, with `d(p_i, p_j) <= threshold`, together with the distance.
fn threshold_graph(points: &[Point], threshold: f64, exec: Exec) -> Vec<(usize, usize, f64)> {
    let rows = exec.map_range(points.len(), |i| {
        let a = points[i].coords();
        points[i + 1..]
            .iter()
            .enumerate()
            .filter_map(|(off, q)| {
                let d = squared_distance(a, q.coords()).sqrt();
                (d <= threshold).then_some((i, i + 1 + off, d))
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}

/// Rips complex at scale `delta` (edges at distance `<= 2·delta`) with
/// simplices up to dimension `max_dim + 1`.
pub fn build_rips(points: &[Point], values: &[f64], delta: f64, max_dim: usize) -> Result<FilteredComplex> {
    build_rips_with(points, values, delta, max_dim, Exec::default())
}

pub fn build_rips_with(
    points: &[Point],
    values: &[f64],
    delta: f64,
    max_dim: usize,
    exec: Exec,
) -> Result<FilteredComplex> {
    check_inputs(points, values)?;
    check_scale("delta", delta)?;
    let edges: Vec<(usize, usize)> = threshold_graph(points, 2.0 * delta, exec)
        .into_iter()
        .map(|(a, b, _)| (a, b))
        .collect();
    FilteredComplex::from_edges(values.to_vec(), &edges, max_dim + 1)
}

/// An inclusion `small ⊆ large` of flag complexes on the same vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedPair {
    small: FilteredComplex,
    large: FilteredComplex,
}

impl NestedPair {
    /// Validates that `small` is a subcomplex of `large` with equal vertex values.
    pub fn new(small: FilteredComplex, large: FilteredComplex) -> Result<Self> {
        if small.values != large.values {
            return Err(Error::InvalidData("nested pair vertex values differ".into()));
        }
        if small.max_simplex_dim != large.max_simplex_dim {
            return Err(Error::InvalidData("nested pair truncation dimensions differ".into()));
        }
        if let Some((a, b)) = small.edges().into_iter().find(|&(a, b)| !large.has_edge(a, b)) {
            return Err(Error::InvalidData(format!("edge ({a}, {b}) missing from the large complex")));
        }
        Ok(NestedPair { small, large })
    }

    pub fn small(&self) -> &FilteredComplex {
        &self.small
    }

    pub fn large(&self) -> &FilteredComplex {
        &self.large
    }

    pub fn num_vertices(&self) -> usize {
        self.small.num_vertices()
    }

    pub fn values(&self) -> &[f64] {
        self.small.values()
    }
}

/// `R_δ ↪ R_δ'` over the same points and values.
pub fn build_nested_pair(
    points: &[Point],
    values: &[f64],
    delta: f64,
    delta_prime: f64,
    max_dim: usize,
) -> Result<NestedPair> {
    build_nested_pair_with(points, values, delta, delta_prime, max_dim, Exec::default())
}

pub fn build_nested_pair_with(
    points: &[Point],
    values: &[f64],
    delta: f64,
    delta_prime: f64,
    max_dim: usize,
    exec: Exec,
) -> Result<NestedPair> {
    check_inputs(points, values)?;
    check_scale("delta", delta)?;
    check_scale("delta_prime", delta_prime)?;
    if delta > delta_prime {
        return invalid(format!("delta={delta} exceeds delta_prime={delta_prime}"));
    }
    let wide = threshold_graph(points, 2.0 * delta_prime, exec);
    let small_edges: Vec<(usize, usize)> = wide
        .iter()
        .filter(|&&(_, _, d)| d <= 2.0 * delta)
        .map(|&(a, b, _)| (a, b))
        .collect();
    let large_edges: Vec<(usize, usize)> = wide.iter().map(|&(a, b, _)| (a, b)).collect();
    let small = FilteredComplex::from_edges(values.to_vec(), &small_edges, max_dim + 1)?;
    let large = FilteredComplex::from_edges(values.to_vec(), &large_edges, max_dim + 1)?;
    NestedPair::new(small, large)
}
