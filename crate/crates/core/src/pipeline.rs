//! The combined algorithm: filter geometric outliers by DTM, denoise values
//! inside the filtered set, then take the image persistence of the nested Rips
//! pair.

use crate::complex::build_nested_pair_with;
use crate::denoise::{denoise_with, DenoiseMethod};
use crate::diagram::PersistenceDiagram;
use crate::dtm::dtm_filter;
use crate::error::{invalid, Result};
use crate::par::Exec;
use crate::persistence::image_diagram;
use crate::sample::{DenoisedSample, ScalarSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Neighbors used for denoising.
    pub k: usize,
    pub method: DenoiseMethod,
    /// DTM threshold; `f64::INFINITY` disables filtering.
    pub eta: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub max_dim: usize,
    /// Neighbors used for the DTM.
    pub dtm_k: usize,
}

impl PipelineConfig {
    /// Config with `delta_prime = 2·delta` and `dtm_k = k`.
    pub fn new(k: usize, method: DenoiseMethod, eta: f64, delta: f64, max_dim: usize) -> Self {
        PipelineConfig {
            k,
            method,
            eta,
            delta,
            delta_prime: 2.0 * delta,
            max_dim,
            dtm_k: k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.method.validate(self.k)?;
        if self.dtm_k == 0 {
            return invalid("dtm_k must be >= 1");
        }
        if !(self.eta >= 0.0) {
            return invalid(format!("eta must be >= 0, got {}", self.eta));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return invalid(format!("delta must be finite and >= 0, got {}", self.delta));
        }
        if !(self.delta_prime >= self.delta && self.delta_prime.is_finite()) {
            return invalid(format!(
                "delta_prime must be finite and >= delta, got {} < {}",
                self.delta_prime, self.delta
            ));
        }
        Ok(())
    }
}

/// Result of [`run_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub diagram: PersistenceDiagram,
    /// Indices into the input sample of the points that survived filtering.
    pub kept: Vec<usize>,
    /// Filtered sample with its denoised values.
    pub denoised: DenoisedSample,
}

pub fn run_pipeline(sample: &ScalarSample, cfg: &PipelineConfig) -> Result<PipelineOutput> {
    run_pipeline_with(sample, cfg, Exec::default())
}

pub fn run_pipeline_with(sample: &ScalarSample, cfg: &PipelineConfig, exec: Exec) -> Result<PipelineOutput> {
    cfg.validate()?;
    if sample.len() < cfg.k || sample.len() < cfg.dtm_k {
        return invalid(format!(
            "sample has {} points, fewer than k={} or dtm_k={}",
            sample.len(),
            cfg.k,
            cfg.dtm_k
        ));
    }
    let (kept, filtered) = dtm_filter(sample, cfg.dtm_k, cfg.eta)?;
    if filtered.len() < cfg.k {
        return invalid(format!(
            "only {} points have DTM <= {}; raise eta or lower k (k={})",
            filtered.len(),
            cfg.eta,
            cfg.k
        ));
    }
    let denoised = denoise_with(&filtered, cfg.method, cfg.k, exec)?;
    let pair = build_nested_pair_with(
        filtered.points(),
        denoised.denoised(),
        cfg.delta,
        cfg.delta_prime,
        cfg.max_dim,
        exec,
    )?;
    let diagram = image_diagram(&pair, cfg.max_dim);
    Ok(PipelineOutput {
        diagram,
        kept,
        denoised,
    })
}
