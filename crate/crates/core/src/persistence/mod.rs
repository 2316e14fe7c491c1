//! Persistent homology over Z/2.
//!
//! * [`diagram`] reduces the boundary matrix of a single filtered complex.
//! * [`image_diagram`] computes the persistence of the images
//!   `Im(H_q(K_α) → H_q(K'_α))` for a nested pair `K ⊆ K'`.
//! * [`rank_oracle`] and [`image_diagram_from_ranks`] recompute the same
//!   quantities by explicit cycle/boundary linear algebra; they are slow and
//!   exist to cross-check the reductions.

mod boundary;
mod gf2;
mod image;
mod oracle;

pub use boundary::{diagram, BoundaryMatrix};
pub use image::{betti_numbers, image_diagram};
pub use oracle::{image_diagram_from_ranks, rank_oracle};

use crate::diagram::{ExtendedReal, PersistencePair};

/// Pair with zero lifespan are diagonal points and are not reported.
pub(crate) fn push_pair(out: &mut Vec<PersistencePair>, dim: usize, birth: f64, death: Option<f64>) {
    match death {
        Some(d) if d <= birth => {}
        Some(d) => out.push(PersistencePair {
            dim,
            birth,
            death: ExtendedReal::Finite(d),
        }),
        None => out.push(PersistencePair {
            dim,
            birth,
            death: ExtendedReal::Infinite,
        }),
    }
}
