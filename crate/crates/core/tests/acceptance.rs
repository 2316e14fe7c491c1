//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Runs sequentially on a plain `main` so that timings are not distorted by
//! the default test harness running criteria concurrently.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use scalar_topo::denoise::min_window_disparity;
use scalar_topo::dtm::{percentile, sample_dtm};
use scalar_topo::noisegen::{
    apply_noise, convexity_volume_constant, gaussian_delta_bound, sample_circle, two_blob_image, wasserstein_epsilon_bound,
    BoundingBox, CircleField, NoiseSpec,
};
use scalar_topo::rng::seeded_rng;
use scalar_topo::{
    bottleneck_bruteforce, bottleneck_distance, build_nested_pair, build_rips, disparity_denoise, dtm_value, error_bound,
    gap, image_diagram, image_to_sample, kmedian_denoise, psnr, rank_oracle, run_pipeline, wasserstein2_empirical,
    DenoiseMethod, ExtendedReal, GrayImage, ManifoldParams, NeighborIndex, PersistenceDiagram, PersistencePair,
    PipelineConfig, Point, ScalarSample,
};

use common::*;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_denoising_bounds() -> Result<String, String> {
    let mut rng = seeded_rng(1);
    let (mut worst_median, mut worst_disp) = (0.0f64, 0.0f64);
    for trial in 0..1000 {
        let k = rng.random_range(5..=15);
        let kprime = rng.random_range(k / 2 + 1..=k);
        let delta = rng.random_range(0.01..=1.0);
        let (sample, truth) = functional_sample(&mut rng, k, kprime, delta, 3);
        ensure(is_functional_sample(&sample, &truth, k, kprime, delta), || {
            format!("trial {trial}: fixture is not a functional sample")
        })?;
        let med = kmedian_denoise(&sample, k).map_err(|e| e.to_string())?;
        let err = med.denoised().iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(err <= delta, || format!("trial {trial}: median error {err} > {delta}"))?;
        worst_median = worst_median.max(err / delta);
        let disp = disparity_denoise(&sample, k, kprime).map_err(|e| e.to_string())?;
        let kappa = 1.0 + 2.0 * ((k - kprime) as f64 / (2 * kprime - k) as f64).sqrt();
        let err = disp.denoised().iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(err <= kappa * delta + 1e-9, || {
            format!("trial {trial}: disparity error {err} > {kappa}*{delta} (k={k}, k'={kprime})")
        })?;
        worst_disp = worst_disp.max(err / (kappa * delta));
    }
    Ok(format!("worst error/bound: median {worst_median:.3}, disparity {worst_disp:.3}"))
}

fn c2_sliding_window() -> Result<String, String> {
    let mut rng = seeded_rng(2);
    for trial in 0..500 {
        let k = rng.random_range(1..=12);
        let kprime = rng.random_range(k / 2 + 1..=k);
        let mut values: Vec<f64> = (0..k).map(|_| rng.random_range(-5.0..5.0)).collect();
        values.sort_by(f64::total_cmp);
        let (_, window) = min_window_disparity(&values, kprime).map_err(|e| e.to_string())?;
        let brute = subsets(k, kprime)
            .iter()
            .map(|s| variance(&s.iter().map(|&i| values[i]).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min);
        ensure(window == brute, || format!("trial {trial}: window {window} != brute {brute}"))?;
    }
    Ok("500 instances exact".into())
}

fn c3_dtm_stability() -> Result<String, String> {
    let mut rng = seeded_rng(3);
    let grid: Vec<Vec<f64>> = (0..10)
        .flat_map(|i| (0..10).map(move |j| vec![-0.5 + 0.2 * i as f64, -0.5 + 0.2 * j as f64]))
        .collect();
    let mut tightest = f64::INFINITY;
    for trial in 0..200 {
        let n = rng.random_range(2..=32);
        let k = rng.random_range(1..=n);
        let p = random_points(&mut rng, n, 2, 1.0);
        let q = random_points(&mut rng, n, 2, 1.0);
        let w2 = wasserstein2(&p, &q);
        let lib_w2 = wasserstein2_empirical(&p, &q).map_err(|e| e.to_string())?;
        ensure((w2 - lib_w2).abs() <= 1e-9, || format!("trial {trial}: W2 {lib_w2} != oracle {w2}"))?;
        let bound = w2 / (k as f64 / n as f64).sqrt();
        let ip = NeighborIndex::build(&p).map_err(|e| e.to_string())?;
        let iq = NeighborIndex::build(&q).map_err(|e| e.to_string())?;
        let mut dp = Vec::new();
        for x in &grid {
            let xp = Point::new(x.clone()).unwrap();
            let a = dtm_value(&ip, &xp, k).map_err(|e| e.to_string())?;
            let b = dtm_value(&iq, &xp, k).map_err(|e| e.to_string())?;
            ensure((a - brute_dtm(&p, x, k)).abs() <= 1e-12, || format!("trial {trial}: DTM mismatch"))?;
            ensure((a - b).abs() <= bound + 1e-9, || {
                format!("trial {trial}: |dP - dQ| = {} > {bound}", (a - b).abs())
            })?;
            if bound > 0.0 {
                tightest = tightest.min(bound - (a - b).abs());
            }
            dp.push(a);
        }
        for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                let lip = dist(&grid[i], &grid[j]);
                ensure((dp[i] - dp[j]).abs() <= lip + 1e-9, || format!("trial {trial}: DTM not 1-Lipschitz"))?;
            }
        }
    }
    Ok(format!("smallest slack {tightest:.2e}"))
}

fn grid_of(values: &[f64]) -> Vec<f64> {
    let mut g = values.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

fn c4_image_persistence() -> Result<String, String> {
    let mut rng = seeded_rng(4);
    let mut nonempty = 0;
    for trial in 0..300 {
        let n = rng.random_range(1..=12);
        let levels = rng.random_range(1..=3);
        let pair = if trial % 3 == 0 {
            random_graph_pair(&mut rng, n, levels, 1)
        } else if trial % 3 == 1 {
            random_ring_pair(&mut rng, n, levels, 1)
        } else {
            let pts = random_points(&mut rng, n, 2, 1.0);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64).collect();
            let delta = rng.random_range(0.05..0.4);
            let delta_prime = delta * rng.random_range(1.0..2.5);
            build_nested_pair(&pts, &values, delta, delta_prime, 1).map_err(|e| e.to_string())?
        };
        let grid = grid_of(pair.values());
        let dgm = image_diagram(&pair, 1);
        for q in 0..=1 {
            let expected = multiplicities(grid.len(), |i, j| rank_oracle(&pair, q, grid[i], grid[j]));
            let mut got: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
            for p in dgm.in_dim(q) {
                let b = grid.iter().position(|&g| g == p.birth).ok_or("birth off grid")?;
                let d = match p.death {
                    ExtendedReal::Finite(v) => Some(grid.iter().position(|&g| g == v).ok_or("death off grid")?),
                    ExtendedReal::Infinite => None,
                };
                *got.entry((b, d)).or_default() += 1;
            }
            let want: BTreeMap<_, _> = expected.into_iter().map(|(b, d, m)| ((b, d), m)).collect();
            ensure(got == want, || format!("trial {trial}, H{q}: got {got:?}, oracle {want:?}"))?;
            nonempty += usize::from(!want.is_empty() && q == 1);
        }
    }
    Ok(format!("300 pairs exact ({nonempty} with nonempty H1)"))
}

fn c5_rips() -> Result<String, String> {
    let mut rng = seeded_rng(5);
    for trial in 0..100 {
        let n = rng.random_range(1..=20);
        let pts = random_points(&mut rng, n, 2, 1.0);
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let delta = rng.random_range(0.0..0.35);
        let rips = build_rips(&pts, &values, delta, 2).map_err(|e| e.to_string())?;
        let mut got: Vec<(Vec<usize>, f64)> = (0..=3)
            .flat_map(|d| rips.simplices_of_dim(d))
            .map(|s| (s.vertices().to_vec(), rips.filtration(&s)))
            .collect();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let want = brute_cliques(&pts, &values, 2.0 * delta, 4);
        ensure(got == want, || format!("trial {trial}: {} simplices vs {} cliques", got.len(), want.len()))?;
    }
    Ok("100 instances exact".into())
}

fn analytic_circle() -> PersistenceDiagram {
    PersistenceDiagram::new(vec![
        PersistencePair::essential(0, -1.0).unwrap(),
        PersistencePair::essential(1, 1.0).unwrap(),
    ])
}

fn c6_circle() -> Result<String, String> {
    let s = sample_circle(60, 1.0, CircleField::Height).map_err(|e| e.to_string())?;
    let pair = build_nested_pair(s.points(), s.values(), 0.4, 0.8, 1).map_err(|e| e.to_string())?;
    let d = bottleneck_distance(&image_diagram(&pair, 1), &analytic_circle()).to_f64();
    ensure(d <= 1.6, || format!("bottleneck {d} exceeds the 1.6 guarantee"))?;
    ensure(d <= 0.3, || format!("bottleneck {d} exceeds the empirical 0.3 (regression)"))?;
    Ok(format!("bottleneck {d:.4}"))
}

/// Smallest `s` such that every kept point has `kprime` of its `k` neighbors
/// in the kept set observing a value within `s` of the height of its
/// projection onto the unit circle.
fn realized_accuracy(kept: &ScalarSample, k: usize, kprime: usize) -> f64 {
    let truth: Vec<f64> = kept
        .points()
        .iter()
        .map(|p| {
            let c = p.coords();
            c[1] / c[0].hypot(c[1])
        })
        .collect();
    realized_delta(kept, &truth, k, kprime)
}

fn c7_pipeline() -> Result<String, String> {
    let (k, kprime, dtm_k) = (12, 9, 12);
    let clean = sample_circle(500, 1.0, CircleField::Height).map_err(|e| e.to_string())?;
    let bounds = BoundingBox::around(&clean, 0.5).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for method in [DenoiseMethod::KMedian, DenoiseMethod::Disparity { kprime }] {
        let mut cfg = PipelineConfig::new(k, method, f64::INFINITY, 0.4, 1);
        cfg.delta_prime = 0.8;
        cfg.dtm_k = dtm_k;
        let reference = run_pipeline(&clean, &cfg).map_err(|e| e.to_string())?.diagram;
        for seed in 0..20u64 {
            let noisy = apply_noise(&clean, &NoiseSpec::ImpulseConstant { p: 0.2, value: 3.0 }, seed)
                .and_then(|s| apply_noise(&s, &NoiseSpec::Clutter { count: 50, bounds: bounds.clone() }, seed + 1000))
                .map_err(|e| e.to_string())?;
            cfg.eta = percentile(&sample_dtm(&noisy, dtm_k).map_err(|e| e.to_string())?, 85.0).map_err(|e| e.to_string())?;
            let out = run_pipeline(&noisy, &cfg).map_err(|e| e.to_string())?;
            let betti = out.diagram.essential_counts(1);
            ensure(betti == vec![1, 1], || format!("{method:?} seed {seed}: Betti {betti:?}"))?;
            let s = realized_accuracy(out.denoised.sample(), k, kprime);
            let bound = error_bound(method, k, s).map_err(|e| e.to_string())? + 1.6;
            let d = bottleneck_distance(&out.diagram, &reference).to_f64();
            ensure(d <= bound, || format!("{method:?} seed {seed}: bottleneck {d} > {bound}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("40 runs, Betti [1, 1], largest bottleneck {worst:.4}"))
}

fn random_diagram(rng: &mut impl Rng) -> PersistenceDiagram {
    let mut pairs = Vec::new();
    for dim in 0..2 {
        let count = rng.random_range(0..=6);
        let essentials = rng.random_range(0..=count.min(2));
        for i in 0..count {
            let birth = rng.random_range(0..8) as f64 * 0.5;
            if i < essentials {
                pairs.push(PersistencePair::essential(dim, birth).unwrap());
            } else {
                let death = birth + rng.random_range(0..6) as f64 * 0.5 + 0.25;
                pairs.push(PersistencePair::finite(dim, birth, death).unwrap());
            }
        }
    }
    PersistenceDiagram::new(pairs)
}

fn c8_bottleneck() -> Result<String, String> {
    let mut rng = seeded_rng(8);
    let mut infinite = 0;
    for trial in 0..500 {
        let a = random_diagram(&mut rng);
        let b = random_diagram(&mut rng);
        let fast = bottleneck_distance(&a, &b);
        let brute = bottleneck_bruteforce(&a, &b).map_err(|e| e.to_string())?;
        ensure(fast == brute, || format!("trial {trial}: {fast} != brute force {brute}"))?;
        infinite += usize::from(!fast.is_finite());
    }
    Ok(format!("500 pairs exact ({infinite} infinite)"))
}

fn c9_gaussian() -> Result<String, String> {
    let (k, kprime, sigma) = (30, 20, 1.0);
    let radius = gaussian_delta_bound(sigma, k, kprime, 1.0, 0.0).map_err(|e| e.to_string())?;
    let expected = sigma * (2.0 * k as f64 / (k - kprime) as f64).ln().sqrt();
    ensure((radius - expected).abs() <= 1e-15, || format!("radius {radius} != {expected}"))?;
    let mut rng = seeded_rng(9);
    let trials = 100_000;
    let mut hits = 0;
    for _ in 0..trials {
        let good = (0..k)
            .filter(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                (sigma * z).abs() <= radius
            })
            .count();
        hits += usize::from(good >= kprime);
    }
    let freq = hits as f64 / trials as f64;
    let floor = 1.0 - (-((k - kprime) as f64) / 6.0).exp() - 0.01;
    ensure(freq >= floor, || format!("frequency {freq} < {floor}"))?;
    Ok(format!("frequency {freq:.4} >= {floor:.4}"))
}

fn c10_wasserstein_constant() -> Result<String, String> {
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let independent = |d: usize, cm: f64| {
        let d = d as f64;
        4.0 / d * lanczos_gamma(0.5).powf(d) / lanczos_gamma(d / 2.0) * (cm.sqrt() / PI).powf(d - 1.0)
    };
    for (d, cm, want) in [(1, 1.0, 4.0), (1, 3.7, 4.0), (2, 1.0, 2.0)] {
        let c = convexity_volume_constant(d, cm).map_err(|e| e.to_string())?;
        ensure(rel(c, want) <= 1e-12, || format!("C(d'={d}, c_M={cm}) = {c}, expected {want}"))?;
        ensure(rel(c, independent(d, cm)) <= 1e-12, || format!("C(d'={d}) disagrees with Lanczos"))?;
    }
    for (d, cm, vol, m, sigma) in [(1, 1.0, 2.0 * PI, 0.1, 0.05), (2, 1.0, 4.0 * PI, 0.2, 0.0), (3, 0.5, 10.0, 0.3, 0.1)] {
        let params = ManifoldParams::new(1.0, 1.0, 1.0, cm, vol, d).unwrap();
        let got = wasserstein_epsilon_bound(m, sigma, &params).map_err(|e| e.to_string())?;
        let c = independent(d, cm);
        let df = d as f64;
        let want = (m * vol / c).powf(1.0 / df) / (1.0 + 2.0 / df).sqrt() + sigma / m.sqrt();
        ensure(rel(got, want) <= 1e-12, || format!("epsilon(d'={d}) = {got}, expected {want}"))?;
    }
    Ok("C = 4 (d'=1), C = 2 (d'=2), epsilon formula matches".into())
}

fn h0_gap(sample: &ScalarSample, values: &[f64]) -> Result<ExtendedReal, String> {
    let pair = build_nested_pair(sample.points(), values, 0.5, 1.0, 0).map_err(|e| e.to_string())?;
    gap(&image_diagram(&pair, 0), 0, 2).map_err(|e| e.to_string())
}

fn c11_image() -> Result<String, String> {
    let clean = two_blob_image(64, 64).map_err(|e| e.to_string())?;
    let clean_sample = image_to_sample(&clean).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for seed in 0..5u64 {
        let noisy = apply_noise(&clean_sample, &NoiseSpec::ImpulseUniform { p: 0.3, lo: 0.0, hi: 255.0 }, seed)
            .map_err(|e| e.to_string())?;
        let noisy_img = GrayImage::from_values(64, 64, noisy.values()).map_err(|e| e.to_string())?;
        let base = psnr(&clean, &noisy_img).map_err(|e| e.to_string())?.to_f64();
        let noisy_gap = h0_gap(&noisy, noisy.values())?;
        for (name, out) in [
            ("disparity", disparity_denoise(&noisy, 25, 17)),
            ("median", kmedian_denoise(&noisy, 25)),
        ] {
            let out = out.map_err(|e| e.to_string())?;
            let img = GrayImage::from_values(64, 64, out.denoised()).map_err(|e| e.to_string())?;
            let gain = psnr(&clean, &img).map_err(|e| e.to_string())?.to_f64() - base;
            ensure(gain >= 5.0, || format!("seed {seed} {name}: PSNR gain {gain:.2} dB < 5"))?;
            let g = h0_gap(&noisy, out.denoised())?;
            ensure(g > ExtendedReal::Finite(1.0), || format!("seed {seed} {name}: gap {g} <= 1"))?;
            ensure(g > noisy_gap, || format!("seed {seed} {name}: gap {g} <= noisy gap {noisy_gap}"))?;
            if seed == 0 {
                summary.push(format!("{name} +{gain:.1} dB gap {g}"));
            }
        }
        if seed == 0 {
            summary.push(format!("noisy gap {noisy_gap}"));
        }
    }
    Ok(format!("seed 0: {}", summary.join(", ")))
}

fn main() {
    let criteria: [(&str, Check, Duration); 11] = [
        ("1 denoising bounds", c1_denoising_bounds, Duration::from_secs(10)),
        ("2 sliding-window optimality", c2_sliding_window, Duration::from_secs(10)),
        ("3 DTM Lipschitz and stability", c3_dtm_stability, Duration::from_secs(30)),
        ("4 image persistence vs rank oracle", c4_image_persistence, Duration::from_secs(60)),
        ("5 Rips construction", c5_rips, Duration::from_secs(10)),
        ("6 circle recovery", c6_circle, Duration::from_secs(5)),
        ("7 combined pipeline robustness", c7_pipeline, Duration::from_secs(120)),
        ("8 bottleneck exactness", c8_bottleneck, Duration::from_secs(30)),
        ("9 Gaussian accuracy bound", c9_gaussian, Duration::from_secs(30)),
        ("10 Wasserstein epsilon constant", c10_wasserstein_constant, Duration::from_secs(1)),
        ("11 image denoising", c11_image, Duration::from_secs(120)),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let number = name.split(' ').next().unwrap();
        if !only.is_empty() && !only.iter().any(|o| o == number) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?} ({msg})"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {name} [{elapsed:.2?}]: {msg}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {name} [{elapsed:.2?}]: {msg}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
