use std::collections::{BTreeSet, HashMap};

use crate::complex::{NestedPair, Simplex};
use crate::diagram::PersistenceDiagram;

use super::gf2::{kernel_basis, BitVec, Echelon};
use super::push_pair;

/// Rank over Z/2 of `H_q(K_α) → H_q(K'_β)` for the nested pair `K ⊆ K'`,
/// computed from explicit cycle and boundary bases. Requires `alpha <= beta`.
///
/// `q` must be below the pair's truncation dimension; higher degrees have no
/// boundaries available and report the cycle rank.
pub fn rank_oracle(pair: &NestedPair, q: usize, alpha: f64, beta: f64) -> usize {
    assert!(alpha <= beta, "rank_oracle requires alpha <= beta");
    let small = pair.small();
    let large = pair.large();
    let in_sub = |c: &crate::complex::FilteredComplex, s: &Simplex, t: f64| c.filtration(s) <= t;

    // Coordinates of C_q(K'_β).
    let chains: Vec<Simplex> = large
        .simplices_of_dim(q)
        .into_iter()
        .filter(|s| in_sub(large, s, beta))
        .collect();
    let position: HashMap<&Simplex, usize> = chains.iter().enumerate().map(|(i, s)| (s, i)).collect();

    // Cycles of K_α.
    let cycle_support: Vec<&Simplex> = chains
        .iter()
        .filter(|s| small.contains(s) && in_sub(small, s, alpha))
        .collect();
    let cycles: Vec<BitVec> = if q == 0 {
        cycle_support
            .iter()
            .map(|s| {
                let mut v = BitVec::zeros(chains.len());
                v.flip(position[*s]);
                v
            })
            .collect()
    } else {
        let faces: Vec<Simplex> = small
            .simplices_of_dim(q - 1)
            .into_iter()
            .filter(|s| in_sub(small, s, alpha))
            .collect();
        let face_pos: HashMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let images: Vec<BitVec> = cycle_support
            .iter()
            .map(|s| {
                let mut v = BitVec::zeros(faces.len());
                for f in s.facets() {
                    v.flip(face_pos[&f]);
                }
                v
            })
            .collect();
        kernel_basis(&images)
            .into_iter()
            .map(|combo| {
                let mut v = BitVec::zeros(chains.len());
                for (i, s) in cycle_support.iter().enumerate() {
                    if combo.get(i) {
                        v.flip(position[*s]);
                    }
                }
                v
            })
            .collect()
    };

    // Boundaries of K'_β.
    let mut basis = Echelon::default();
    for s in large.simplices_of_dim(q + 1) {
        if in_sub(large, &s, beta) {
            let mut v = BitVec::zeros(chains.len());
            for f in s.facets() {
                v.flip(position[&f]);
            }
            basis.insert(v);
        }
    }
    let boundary_rank = basis.rank();
    for z in cycles {
        basis.insert(z);
    }
    basis.rank() - boundary_rank
}

/// Image persistence diagram obtained from [`rank_oracle`] by
/// inclusion–exclusion over the grid of distinct vertex values.
pub fn image_diagram_from_ranks(pair: &NestedPair, max_dim: usize) -> PersistenceDiagram {
    let grid: Vec<f64> = {
        let set: BTreeSet<u64> = pair.values().iter().map(|v| v.to_bits()).collect();
        let mut g: Vec<f64> = set.into_iter().map(f64::from_bits).collect();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    };
    let n = grid.len();
    let max_dim = max_dim.min(pair.small().max_simplex_dim().saturating_sub(1));
    let mut out = Vec::new();
    for q in 0..=max_dim {
        // r[i][j], 1-based, i <= j; row 0 is identically zero.
        let mut r = vec![vec![0usize; n + 1]; n + 1];
        for i in 1..=n {
            for j in i..=n {
                r[i][j] = rank_oracle(pair, q, grid[i - 1], grid[j - 1]);
            }
        }
        let at = |i: usize, j: usize| -> i64 { if i == 0 { 0 } else { r[i][j] as i64 } };
        for i in 1..=n {
            for j in i + 1..=n {
                let mult = at(i, j - 1) - at(i, j) - at(i - 1, j - 1) + at(i - 1, j);
                assert!(mult >= 0, "negative multiplicity from rank oracle");
                for _ in 0..mult {
                    push_pair(&mut out, q, grid[i - 1], Some(grid[j - 1]));
                }
            }
            let ess = at(i, n) - at(i - 1, n);
            assert!(ess >= 0, "negative essential multiplicity from rank oracle");
            for _ in 0..ess {
                push_pair(&mut out, q, grid[i - 1], None);
            }
        }
    }
    PersistenceDiagram::new(out)
}
