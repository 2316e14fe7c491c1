//! Bottleneck distance between persistence diagrams (L∞ ground metric, the
//! diagonal available with infinite multiplicity).
//!
//! Diagrams are compared dimension by dimension and the maximum is returned.
//! Essential points can only be matched to essential points, at cost equal
//! to the difference of births; a mismatch in their counts gives `+∞`.

use std::collections::VecDeque;

use crate::diagram::{ExtendedReal, PersistenceDiagram};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy)]
struct FinitePoint {
    birth: f64,
    death: f64,
}

fn linf(a: FinitePoint, b: FinitePoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn half_persistence(a: FinitePoint) -> f64 {
    (a.death - a.birth) / 2.0
}

struct Split {
    finite: Vec<FinitePoint>,
    essential: Vec<f64>,
}

fn split(d: &PersistenceDiagram, dim: usize) -> Split {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for p in d.in_dim(dim) {
        match p.death {
            ExtendedReal::Finite(death) => finite.push(FinitePoint { birth: p.birth, death }),
            ExtendedReal::Infinite => essential.push(p.birth),
        }
    }
    Split { finite, essential }
}

fn dims(d: &PersistenceDiagram, e: &PersistenceDiagram) -> std::ops::RangeInclusive<usize> {
    let top = d.max_dim().into_iter().chain(e.max_dim()).max().unwrap_or(0);
    0..=top
}

/// Exact bottleneck distance.
pub fn bottleneck_distance(d: &PersistenceDiagram, e: &PersistenceDiagram) -> ExtendedReal {
    let mut worst = 0.0f64;
    for dim in dims(d, e) {
        let (a, b) = (split(d, dim), split(e, dim));
        if a.essential.len() != b.essential.len() {
            return ExtendedReal::Infinite;
        }
        let mut ea = a.essential.clone();
        let mut eb = b.essential.clone();
        ea.sort_by(f64::total_cmp);
        eb.sort_by(f64::total_cmp);
        // On a line, matching in sorted order minimizes the largest displacement.
        for (x, y) in ea.iter().zip(&eb) {
            worst = worst.max((x - y).abs());
        }
        worst = worst.max(finite_bottleneck(&a.finite, &b.finite));
    }
    ExtendedReal::Finite(worst)
}

fn finite_bottleneck(a: &[FinitePoint], b: &[FinitePoint]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = a.iter().chain(b).map(|&p| half_persistence(p)).collect();
    for &p in a {
        for &q in b {
            candidates.push(linf(p, q));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // The largest candidate is always feasible (everything to the diagonal or
    // any pairing is within it), so search for the first feasible one.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Is there a perfect matching of `a ∪ diag(b)` with `b ∪ diag(a)` using only
/// edges of cost `<= t`?
fn feasible(a: &[FinitePoint], b: &[FinitePoint], t: f64) -> bool {
    let (m, k) = (a.len(), b.len());
    // Left: a[0..m], then diagonal copies of b. Right: b[0..k], then diagonal copies of a.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + k];
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            if linf(p, q) <= t {
                adj[i].push(j);
            }
        }
        if half_persistence(p) <= t {
            adj[i].push(k + i);
        }
    }
    for (j, &q) in b.iter().enumerate() {
        if half_persistence(q) <= t {
            adj[m + j].push(j);
        }
        // Diagonal to diagonal is free.
        adj[m + j].extend(k..k + m);
    }
    hopcroft_karp(&adj, m + k) == m + k
}

/// Maximum matching size of a bipartite graph given by left adjacency lists.
fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> usize {
    const NIL: usize = usize::MAX;
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    let mut matched = 0;
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        let mut it = vec![0usize; left];
        for u in 0..left {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut it) {
                matched += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    while it[u] < adj[u].len() {
        let v = adj[u][it[u]];
        it[u] += 1;
        let w = match_r[v];
        if w == usize::MAX || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist, it)) {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// Largest number of points per dimension accepted by [`bottleneck_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 6;

/// Bottleneck distance by exhaustive enumeration of all matchings. Only for
/// tiny diagrams (at most [`BRUTEFORCE_LIMIT`] points per dimension).
pub fn bottleneck_bruteforce(d: &PersistenceDiagram, e: &PersistenceDiagram) -> Result<ExtendedReal> {
    let mut worst = 0.0f64;
    let mut infinite = false;
    for dim in dims(d, e) {
        let (a, b) = (split(d, dim), split(e, dim));
        for s in [&a, &b] {
            if s.finite.len() + s.essential.len() > BRUTEFORCE_LIMIT {
                return invalid(format!(
                    "brute-force bottleneck handles at most {BRUTEFORCE_LIMIT} points per dimension"
                ));
            }
        }
        if a.essential.len() != b.essential.len() {
            infinite = true;
            continue;
        }
        let mut best = f64::INFINITY;
        permutations_min(&a.essential, &b.essential, &mut vec![false; b.essential.len()], 0, 0.0, &mut best);
        worst = worst.max(best);
        let mut best = f64::INFINITY;
        matchings_min(&a.finite, &b.finite, &mut vec![false; b.finite.len()], 0, 0.0, &mut best);
        worst = worst.max(best);
    }
    Ok(if infinite {
        ExtendedReal::Infinite
    } else {
        ExtendedReal::Finite(worst)
    })
}

fn permutations_min(a: &[f64], b: &[f64], used: &mut Vec<bool>, i: usize, acc: f64, best: &mut f64) {
    if i == a.len() {
        *best = best.min(acc);
        return;
    }
    for j in 0..b.len() {
        if !used[j] {
            used[j] = true;
            permutations_min(a, b, used, i + 1, acc.max((a[i] - b[j]).abs()), best);
            used[j] = false;
        }
    }
}

fn matchings_min(a: &[FinitePoint], b: &[FinitePoint], used: &mut Vec<bool>, i: usize, acc: f64, best: &mut f64) {
    if i == a.len() {
        let rest = b
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(&q, _)| half_persistence(q))
            .fold(acc, f64::max);
        *best = best.min(rest);
        return;
    }
    matchings_min(a, b, used, i + 1, acc.max(half_persistence(a[i])), best);
    for j in 0..b.len() {
        if !used[j] {
            used[j] = true;
            matchings_min(a, b, used, i + 1, acc.max(linf(a[i], b[j])), best);
            used[j] = false;
        }
    }
}
