//! Exact k-nearest-neighbor queries backed by a kd-tree.
//!
//! Results are ordered by `(distance, dataset index)`. A query point that is
//! itself in the dataset is returned as its own nearest neighbor.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, Point};

const LEAF_SIZE: usize = 16;

/// One answer of a k-NN query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

impl Neighbor {
    fn cmp_key(&self, other: &Neighbor) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.index.cmp(&other.index))
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

/// Immutable spatial index over a point set.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    dim: usize,
    coords: Vec<f64>,
    // Dataset indices, permuted so every leaf owns a contiguous range.
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl NeighborIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("neighbor index dataset"))?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        let mut index = NeighborIndex {
            dim,
            coords,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        index.build_node(0, points.len());
        Ok(index)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of dataset point `i`.
    pub fn coords(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let axis = self.widest_axis(start, end);
        let mid = start + (end - start) / 2;
        {
            let (coords, dim) = (&self.coords, self.dim);
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                coords[a * dim + axis].total_cmp(&coords[b * dim + axis])
            });
        }
        let value = self.coords[self.order[mid] * self.dim + axis];
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    fn widest_axis(&self, start: usize, end: usize) -> usize {
        (0..self.dim)
            .map(|axis| {
                let (lo, hi) = self.order[start..end].iter().fold(
                    (f64::INFINITY, f64::NEG_INFINITY),
                    |(lo, hi), &i| {
                        let c = self.coords[i * self.dim + axis];
                        (lo.min(c), hi.max(c))
                    },
                );
                (axis, hi - lo)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(axis, _)| axis)
            .unwrap_or(0)
    }

    /// The `min(k, n)` nearest dataset points to `query`.
    pub fn knn(&self, query: &Point, k: usize) -> Result<Vec<Neighbor>> {
        self.knn_coords(query.coords(), k)
    }

    /// [`NeighborIndex::knn`] on a raw coordinate slice.
    pub fn knn_coords(&self, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if query.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: query.len(),
            });
        }
        let k = k.min(self.len());
        let mut best: Vec<Neighbor> = Vec::with_capacity(k + 1);
        self.search(0, query, k, &mut best);
        Ok(best)
    }

    fn search(&self, node: usize, query: &[f64], k: usize, best: &mut Vec<Neighbor>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let cand = Neighbor {
                        index: i,
                        distance: squared_distance(query, self.coords(i)).sqrt(),
                    };
                    offer(best, k, cand);
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.search(near, query, k, best);
                let bound = (diff * diff).sqrt();
                if best.len() < k || bound <= best[k - 1].distance {
                    self.search(far, query, k, best);
                }
            }
        }
    }
}

// Keeps `best` sorted and at most `k` long.
fn offer(best: &mut Vec<Neighbor>, k: usize, cand: Neighbor) {
    if best.len() == k {
        if cand.cmp_key(&best[k - 1]) != Ordering::Less {
            return;
        }
        best.pop();
    }
    let pos = best
        .binary_search_by(|b| b.cmp_key(&cand))
        .unwrap_or_else(|p| p);
    best.insert(pos, cand);
}
