use std::collections::HashMap;

use crate::complex::{FilteredComplex, FilteredSimplex, Simplex};
use crate::diagram::PersistenceDiagram;

use super::push_pair;

/// Z/2 boundary matrix of a filtered complex, one column per simplex in
/// filtration order. Column `j` lists the (sorted) rows of the facets of simplex `j`.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    simplices: Vec<FilteredSimplex>,
    columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    pub fn new(complex: &FilteredComplex) -> Self {
        let simplices = complex.filtered_simplices();
        let position: HashMap<&Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (&s.simplex, i))
            .collect();
        let columns = simplices
            .iter()
            .map(|s| {
                let mut col: Vec<usize> = s.simplex.facets().map(|f| position[&f]).collect();
                col.sort_unstable();
                col
            })
            .collect();
        BoundaryMatrix { simplices, columns }
    }

    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Left-to-right column reduction with clearing. Returns `pivot[j] = Some(i)`
    /// when column `j` reduces to lowest row `i`.
    pub fn reduce(&self) -> Vec<Option<usize>> {
        let n = self.columns.len();
        let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
        let mut pivot: Vec<Option<usize>> = vec![None; n];
        let mut cleared = vec![false; n];
        let top = self.simplices.iter().map(|s| s.simplex.dim()).max().unwrap_or(0);
        // Highest dimension first so that paired rows can be cleared.
        for dim in (0..=top).rev() {
            for j in (0..n).filter(|&j| self.simplices[j].simplex.dim() == dim) {
                if cleared[j] {
                    continue;
                }
                let mut col = self.columns[j].clone();
                while let Some(&low) = col.last() {
                    match pivot_of_row[low] {
                        Some(other) => col = xor_sorted(&col, &reduced[other]),
                        None => break,
                    }
                }
                if let Some(&low) = col.last() {
                    pivot_of_row[low] = Some(j);
                    pivot[j] = Some(low);
                    cleared[low] = true;
                }
                reduced[j] = col;
            }
        }
        pivot
    }
}

pub(crate) fn xor_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sublevel-set persistence diagram of `complex` in dimensions
/// `0..=max_dim`, clamped to what the truncation supports
/// (`complex.max_simplex_dim() - 1`).
pub fn diagram(complex: &FilteredComplex, max_dim: usize) -> PersistenceDiagram {
    let Some(supported) = complex.max_simplex_dim().checked_sub(1) else {
        // Vertices only: every vertex is an essential H0 class.
        let mut pairs = Vec::new();
        for &v in complex.values() {
            push_pair(&mut pairs, 0, v, None);
        }
        return PersistenceDiagram::new(pairs);
    };
    let max_dim = max_dim.min(supported);
    let matrix = BoundaryMatrix::new(complex);
    let pivot = matrix.reduce();
    let mut is_pivot_row = vec![false; matrix.len()];
    let mut pairs = Vec::new();
    for (j, p) in pivot.iter().enumerate() {
        if let Some(i) = *p {
            is_pivot_row[i] = true;
            let birth = &matrix.simplices[i];
            if birth.simplex.dim() <= max_dim {
                push_pair(&mut pairs, birth.simplex.dim(), birth.value, Some(matrix.simplices[j].value));
            }
        }
    }
    for (j, s) in matrix.simplices.iter().enumerate() {
        if pivot[j].is_none() && !is_pivot_row[j] && s.simplex.dim() <= max_dim {
            push_pair(&mut pairs, s.simplex.dim(), s.value, None);
        }
    }
    PersistenceDiagram::new(pairs)
}
