//! Recovering the persistence diagram of a scalar field from a sample whose
//! positions contain geometric outliers and whose values contain aberrant
//! readings.
//!
//! The pipeline is: drop points with a large distance to the empirical measure
//! ([`dtm`]), replace each remaining value by a robust statistic of its nearest
//! neighbors ([`denoise`]), build two nested Rips complexes ([`complex`]) and
//! read off the image persistence diagram ([`persistence`]). Diagrams are
//! compared with the exact bottleneck distance ([`bottleneck`]).
//!
//! Per-point work is data parallel when the `parallel` feature (default) is
//! enabled; every entry point has a `_with` variant taking an explicit
//! [`Exec`] policy.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod bottleneck;
pub mod complex;
pub mod denoise;
pub mod diagram;
pub mod dtm;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod neighbors;
pub mod noisegen;
pub mod par;
pub mod persistence;
pub mod pipeline;
pub mod rng;
pub mod sample;

pub use bottleneck::{bottleneck_bruteforce, bottleneck_distance};
pub use complex::{build_nested_pair, build_rips, FilteredComplex, NestedPair, Simplex};
pub use denoise::{
    disparity, disparity_denoise, error_bound, kmedian_denoise, knn_mean_denoise, DenoiseMethod,
};
pub use diagram::{ExtendedReal, PersistenceDiagram, PersistencePair};
pub use dtm::{dtm_filter, dtm_value, wasserstein2_empirical};
pub use error::{Error, Result};
pub use geometry::{euclidean_distance, ManifoldParams, Point};
pub use metrics::{gap, image_to_sample, psnr, GrayImage};
pub use neighbors::{Neighbor, NeighborIndex};
pub use par::Exec;
pub use persistence::{betti_numbers, diagram, image_diagram, rank_oracle};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutput};
pub use sample::{DenoisedSample, ScalarSample};
