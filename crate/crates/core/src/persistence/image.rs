//! Image persistence of a nested pair of flag complexes.
//!
//! Let `K ⊆ L` with filtrations `K_i = K ∩ L_i`. For a class of `H_q(K_i)`
//! the question is when it becomes a boundary in `L`. Reduce the boundary
//! matrix of `L`'s `(q+1)`-simplices with the rows (q-simplices) reordered so
//! that every simplex of `K` precedes every simplex of `L \ K`. A reduced
//! column whose lowest row lies in `K` is a chain of `L` bounding a cycle
//! supported in `K`, so it kills the image class born at that row. Births are
//! the `q`-simplices that create cycles in `K` itself.
//!
//! The pivot pairs of a column reduction depend only on the ranks of
//! lower-left submatrices, so they can be read off the anti-transposed
//! matrix instead: columns are the `q`-simplices of `L` in reverse row order,
//! each column is the coboundary, and its pivot is the earliest cofacet. This
//! is the form implemented here; it touches `#q-simplices` columns rather
//! than `#(q+1)`-simplices, and most columns need no additions at all.
//!
//! In degree one, edges that merge components under the same row order have
//! coboundary columns that reduce to zero and are skipped outright.
//!
//! Vertices are renumbered by `(value, index)` and every simplex is encoded
//! by its colexicographic rank in the combinatorial number system; colex
//! order is then a total order compatible with the filtration.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::complex::NestedPair;
use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};

use super::boundary::xor_sorted;
use super::push_pair;

struct Binomial {
    // table[k][v] = C(v, k)
    table: Vec<Vec<u64>>,
}

impl Binomial {
    fn new(n: usize, max_k: usize) -> Result<Self> {
        let mut table = vec![vec![0u64; n + 1]; max_k + 1];
        table[0].fill(1);
        for k in 1..=max_k {
            for v in 1..=n {
                table[k][v] = table[k - 1][v - 1]
                    .checked_add(table[k][v - 1])
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "complex on {n} vertices is too large to index simplices of dimension {}",
                            k - 1
                        ))
                    })?;
            }
        }
        Ok(Binomial { table })
    }

    fn get(&self, v: u32, k: usize) -> u64 {
        self.table[k][v as usize]
    }

    /// Colex rank of a strictly increasing vertex list.
    fn index(&self, vertices: &[u32]) -> u64 {
        vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| self.get(v, i + 1))
            .sum()
    }

    /// Largest vertex of the simplex with `k` vertices and colex rank `idx`.
    fn max_vertex(&self, idx: u64, k: usize) -> u32 {
        // Largest v with C(v, k) <= idx.
        let row = &self.table[k];
        (row.partition_point(|&c| c <= idx) - 1) as u32
    }
}

/// Adjacency lists over renumbered vertices.
type Graph = Vec<Vec<u32>>;

struct Renumbered {
    values: Vec<f64>,
    small: Graph,
    large: Graph,
}

fn renumber(pair: &NestedPair) -> Renumbered {
    let values = pair.values();
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0u32; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r as u32;
    }
    let convert = |c: &crate::complex::FilteredComplex| -> Graph {
        order
            .iter()
            .map(|&v| {
                let mut adj: Vec<u32> = c.neighbors(v).iter().map(|&u| rank[u]).collect();
                adj.sort_unstable();
                adj
            })
            .collect()
    };
    Renumbered {
        values: order.iter().map(|&v| values[v]).collect(),
        small: convert(pair.small()),
        large: convert(pair.large()),
    }
}

fn has_edge(g: &Graph, a: u32, b: u32) -> bool {
    g[a as usize].binary_search(&b).is_ok()
}

/// All cliques with `size` vertices, flattened with stride `size`, each sorted ascending.
fn cliques(g: &Graph, size: usize) -> Vec<u32> {
    fn extend(g: &Graph, clique: &mut Vec<u32>, cands: &[u32], size: usize, out: &mut Vec<u32>) {
        if clique.len() == size {
            out.extend_from_slice(clique);
            return;
        }
        for (i, &u) in cands.iter().enumerate() {
            let next: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| has_edge(g, u, w))
                .collect();
            clique.push(u);
            extend(g, clique, &next, size, out);
            clique.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..g.len() as u32 {
        let higher: Vec<u32> = g[v as usize].iter().copied().filter(|&u| u > v).collect();
        extend(g, &mut vec![v], &higher, size, &mut out);
    }
    out
}

/// Colex ranks of the cofacets of `simplex` in the flag complex of `g`, sorted.
fn coboundary(g: &Graph, binom: &Binomial, simplex: &[u32], buf: &mut Vec<u32>) -> Vec<u64> {
    let shortest = simplex
        .iter()
        .copied()
        .min_by_key(|&v| g[v as usize].len())
        .expect("non-empty simplex");
    let mut out: Vec<u64> = g[shortest as usize]
        .iter()
        .copied()
        .filter(|&w| simplex.iter().all(|&v| v == shortest || has_edge(g, v, w)))
        .map(|w| {
            buf.clear();
            buf.extend_from_slice(simplex);
            let pos = buf.partition_point(|&v| v < w);
            buf.insert(pos, w);
            binom.index(buf)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Columns longer than this switch from a sorted vector to a word map, so
/// that adding a short reducer to a long column costs the reducer's length.
const DENSE_THRESHOLD: usize = 2048;

/// A column under reduction.
enum Working {
    Sparse(Vec<u64>),
    /// Nonzero 64-bit words keyed by `index / 64`.
    Words(BTreeMap<u64, u64>),
}

impl Working {
    fn pivot(&self) -> Option<u64> {
        match self {
            Working::Sparse(v) => v.first().copied(),
            Working::Words(w) => w.first_key_value().map(|(&k, &bits)| k * 64 + bits.trailing_zeros() as u64),
        }
    }

    fn add(&mut self, other: &[u64]) {
        match self {
            Working::Sparse(v) => {
                if v.len() + other.len() <= DENSE_THRESHOLD {
                    *v = xor_sorted(v, other);
                    return;
                }
                let mut words = BTreeMap::new();
                for &i in v.iter() {
                    *words.entry(i / 64).or_insert(0u64) ^= 1 << (i % 64);
                }
                *self = Working::Words(words);
                self.add(other);
            }
            Working::Words(words) => {
                for &i in other {
                    let key = i / 64;
                    let w = words.entry(key).or_insert(0);
                    *w ^= 1 << (i % 64);
                    if *w == 0 {
                        words.remove(&key);
                    }
                }
            }
        }
    }

    fn into_sorted(self) -> Vec<u64> {
        match self {
            Working::Sparse(v) => v,
            Working::Words(words) => {
                let mut out = Vec::new();
                for (k, mut bits) in words {
                    while bits != 0 {
                        out.push(k * 64 + bits.trailing_zeros() as u64);
                        bits &= bits - 1;
                    }
                }
                out
            }
        }
    }
}

/// Reduces coboundary columns in the given order over the flag complex of `g`.
/// Returns, for each column, the pivot (earliest surviving cofacet) if any.
fn reduce_coboundaries<'a>(
    g: &Graph,
    binom: &Binomial,
    columns: impl Iterator<Item = &'a [u32]>,
) -> Vec<Option<u64>> {
    let mut reducers: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut buf = Vec::new();
    let mut pivots = Vec::new();
    for simplex in columns {
        let mut col = Working::Sparse(coboundary(g, binom, simplex, &mut buf));
        let pivot = loop {
            match col.pivot() {
                None => break None,
                Some(p) => match reducers.get(&p) {
                    Some(r) => col.add(r),
                    None => {
                        reducers.insert(p, col.into_sorted());
                        break Some(p);
                    }
                },
            }
        };
        pivots.push(pivot);
    }
    pivots
}

fn union_find_root(parent: &mut [u32], mut v: u32) -> u32 {
    while parent[v as usize] != v {
        let up = parent[parent[v as usize] as usize];
        parent[v as usize] = up;
        v = up;
    }
    v
}

/// Edges `(a, b)` with `a < b` in colex order (by `b`, then `a`).
fn colex_edges(g: &Graph) -> Vec<(u32, u32)> {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (b, adj) in g.iter().enumerate() {
        edges.extend(adj.iter().take_while(|&&a| (a as usize) < b).map(|&a| (a, b as u32)));
    }
    edges
}

/// Edges that merge two components when `edges` are inserted in the given
/// order, as colex ranks.
///
/// These are the pivots of the vertex coboundary reduction under that edge
/// order, so their own coboundary columns reduce to zero and can be skipped.
fn spanning_edges(n: usize, edges: impl Iterator<Item = (u32, u32, u64)>) -> HashSet<u64> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut out = HashSet::new();
    for (a, b, idx) in edges {
        let (ra, rb) = (union_find_root(&mut parent, a), union_find_root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
            out.insert(idx);
        }
    }
    out
}

/// `(birth vertex, death edge max vertex)` per H0 class.
type H0Pairs = Vec<(u32, Option<u32>)>;

/// Zero-dimensional persistence of the flag complex `g` by union–find with the
/// elder rule. Returns `(birth vertex, death edge max vertex)` pairs and the
/// set of positive (cycle-creating) edges.
fn zero_dim(g: &Graph) -> (H0Pairs, HashSet<(u32, u32)>) {
    let n = g.len();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut pairs = Vec::new();
    let mut positive = HashSet::new();
    for (a, b) in colex_edges(g) {
        let (ra, rb) = (union_find_root(&mut parent, a), union_find_root(&mut parent, b));
        if ra == rb {
            positive.insert((a, b));
            continue;
        }
        // Roots are the oldest vertex of their component; the younger one dies.
        let (old, young) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[young as usize] = old;
        pairs.push((young, Some(b)));
    }
    for v in 0..n as u32 {
        if union_find_root(&mut parent, v) == v {
            pairs.push((v, None));
        }
    }
    (pairs, positive)
}

/// Persistence diagram of the image module `Im(H_q(K_α) → H_q(K'_α))`,
/// `q = 0..=max_dim` (clamped to what the truncation of the pair supports).
pub fn image_diagram(pair: &NestedPair, max_dim: usize) -> PersistenceDiagram {
    try_image_diagram(pair, max_dim).expect("complex size within index range")
}

pub(crate) fn try_image_diagram(pair: &NestedPair, max_dim: usize) -> Result<PersistenceDiagram> {
    let top = pair.small().max_simplex_dim();
    let r = renumber(pair);
    let n = r.values.len();
    let mut out = Vec::new();

    // With equal vertex sets H_0(K_α) → H_0(L_α) is onto, so the image is H_0(L).
    let (h0, positive_small_edges) = {
        let (h0_large, _) = zero_dim(&r.large);
        let (_, pos) = zero_dim(&r.small);
        (h0_large, pos)
    };
    for (birth, death) in h0 {
        push_pair(&mut out, 0, r.values[birth as usize], death.map(|d| r.values[d as usize]));
    }

    let max_dim = match top.checked_sub(1) {
        Some(s) => max_dim.min(s),
        None => 0,
    };
    if max_dim == 0 || n == 0 {
        return Ok(PersistenceDiagram::new(out));
    }
    let binom = Binomial::new(n, max_dim + 2)?;

    for q in 1..=max_dim {
        let size = q + 1;
        // q-simplices of K that create a cycle in K.
        let small_simplices = cliques(&r.small, size);
        let births: HashSet<u64> = if q == 1 {
            positive_small_edges
                .iter()
                .map(|&(a, b)| binom.index(&[a, b]))
                .collect()
        } else {
            // Negative q-simplices of K are the pivots of K's (q-1)-coboundary reduction.
            let lower = cliques(&r.small, q);
            let mut lower_cols: Vec<&[u32]> = lower.chunks(q).collect();
            lower_cols.sort_by_key(|s| std::cmp::Reverse(binom.index(s)));
            let negative: HashSet<u64> = reduce_coboundaries(&r.small, &binom, lower_cols.into_iter())
                .into_iter()
                .flatten()
                .collect();
            small_simplices
                .chunks(size)
                .map(|s| binom.index(s))
                .filter(|i| !negative.contains(i))
                .collect()
        };

        // Columns: q-simplices of L, reverse of (K first, then L \ K), each block by colex rank.
        let large_simplices = cliques(&r.large, size);
        let mut cols: Vec<(bool, u64, &[u32])> = large_simplices
            .chunks(size)
            .map(|s| {
                let in_small = s
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| s[i + 1..].iter().all(|&b| has_edge(&r.small, a, b)));
                (in_small, binom.index(s), s)
            })
            .collect();
        cols.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        if q == 1 {
            let cleared = spanning_edges(n, cols.iter().rev().map(|c| (c.2[0], c.2[1], c.1)));
            cols.retain(|c| !cleared.contains(&c.1));
        }
        let pivots = reduce_coboundaries(&r.large, &binom, cols.iter().map(|c| c.2));

        let mut killed: HashMap<u64, u64> = HashMap::new();
        for (col, pivot) in cols.iter().zip(pivots) {
            if let (true, Some(p)) = (col.0, pivot) {
                debug_assert!(births.contains(&col.1), "image pivot on a non-cycle row");
                killed.insert(col.1, p);
            }
        }
        let mut birth_list: Vec<u64> = births.into_iter().collect();
        birth_list.sort_unstable();
        for b in birth_list {
            let birth_value = r.values[binom.max_vertex(b, size) as usize];
            let death_value = killed
                .get(&b)
                .map(|&d| r.values[binom.max_vertex(d, size + 1) as usize]);
            push_pair(&mut out, q, birth_value, death_value);
        }
    }
    Ok(PersistenceDiagram::new(out))
}

/// Betti numbers of the image at `α = +∞`, dimensions `0..=max_dim`.
pub fn betti_numbers(pair: &NestedPair, max_dim: usize) -> Vec<usize> {
    image_diagram(pair, max_dim).essential_counts(max_dim)
}
