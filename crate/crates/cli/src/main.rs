use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scalar_topo::dtm::{k_from_mass, percentile, sample_dtm};
use scalar_topo::io::{
    diagram_svg, format_diagram_csv, format_points_csv, read_diagram_csv, read_pgm, read_points_csv,
    write_pgm,
};
use scalar_topo::metrics::{gap, image_to_sample, psnr, GrayImage};
use scalar_topo::noisegen::{apply_noise, sample_bone, sample_circle, BoundingBox, CircleField, NoiseSpec};
use scalar_topo::{
    bottleneck_distance, build_nested_pair, denoise::denoise, dtm::filter_by_threshold, image_diagram,
    run_pipeline, DenoiseMethod, Error, PipelineConfig, ScalarSample,
};

#[derive(Parser)]
#[command(name = "scalar-topo", version, about = "Robust scalar field topology from noisy samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic sample (points CSV) and optionally corrupt it.
    Synth(SynthArgs),
    /// Replace each value by a robust statistic of its k nearest neighbors.
    Denoise(DenoiseArgs),
    /// Distance to the empirical measure at every sample point.
    Dtm(DtmArgs),
    /// Keep the points whose distance to the measure is at most eta.
    Filter(FilterArgs),
    /// Image persistence diagram of the nested Rips pair over a sample.
    Diagram(DiagramArgs),
    /// Filter, denoise, then compute the image persistence diagram.
    Pipeline(PipelineArgs),
    /// Bottleneck distance between two diagram files.
    Bottleneck { first: PathBuf, second: PathBuf },
    /// PSNR between two PGM images.
    Psnr { first: PathBuf, second: PathBuf },
    /// Ratio of the n-th longest lifespan to the next one.
    Gap {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        n_relevant: usize,
    },
    /// Render a diagram file as a 600x600 SVG.
    Plot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Circle,
    Bone,
    /// 8-bit image with two dark blobs, written as PGM.
    Blobs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Height,
    Geodesic,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value_t = Shape::Circle)]
    shape: Shape,
    /// Number of points (circle, bone).
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, value_enum, default_value_t = Field::Height)]
    field: Field,
    #[arg(long, default_value_t = 0.3)]
    neck_width: f64,
    /// Image side length in pixels (blobs).
    #[arg(long, default_value_t = 64)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Additive Gaussian noise on coordinates.
    #[arg(long)]
    geometric_sigma: Option<f64>,
    /// Additive Gaussian noise on values.
    #[arg(long)]
    functional_sigma: Option<f64>,
    /// Probability of replacing a value by a uniform draw over the value range.
    #[arg(long)]
    impulse_uniform: Option<f64>,
    /// Probability of replacing a value by --impulse-value.
    #[arg(long)]
    impulse_constant: Option<f64>,
    #[arg(long, default_value_t = 200.0)]
    impulse_value: f64,
    /// Number of uniform background points in the padded bounding box.
    #[arg(long)]
    clutter: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    clutter_margin: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Median,
    Disparity,
    KnnMean,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Median)]
    method: MethodArg,
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Window length for the disparity method; defaults to ceil(2k/3).
    #[arg(long)]
    kprime: Option<usize>,
}

impl MethodArgs {
    fn method(&self) -> DenoiseMethod {
        match self.method {
            MethodArg::Median => DenoiseMethod::KMedian,
            MethodArg::KnnMean => DenoiseMethod::KnnMean,
            MethodArg::Disparity => DenoiseMethod::Disparity {
                kprime: self.kprime.unwrap_or((2 * self.k).div_ceil(3)),
            },
        }
    }
}

#[derive(Args)]
struct DtmNeighbors {
    /// Neighbors in the distance to measure.
    #[arg(long = "dtm-k", conflicts_with = "mass")]
    dtm_k: Option<usize>,
    /// Mass parameter m in (0, 1]; uses k = ceil(m n).
    #[arg(long)]
    mass: Option<f64>,
}

impl DtmNeighbors {
    fn resolve(&self, n: usize, fallback: usize) -> Result<usize, Error> {
        match (self.dtm_k, self.mass) {
            (Some(k), _) => Ok(k),
            (None, Some(m)) => k_from_mass(m, n),
            (None, None) => Ok(fallback),
        }
    }
}

#[derive(Args)]
struct Threshold {
    /// DTM threshold.
    #[arg(long, conflicts_with = "eta_percentile")]
    eta: Option<f64>,
    /// Heuristic: use the q-th percentile of the DTM values as eta.
    #[arg(long)]
    eta_percentile: Option<f64>,
}

impl Threshold {
    fn resolve(&self, dtm: impl FnOnce() -> Result<Vec<f64>, Error>) -> Result<f64, Error> {
        match (self.eta, self.eta_percentile) {
            (Some(eta), _) => Ok(eta),
            (None, Some(q)) => percentile(&dtm()?, q),
            (None, None) => Ok(f64::INFINITY),
        }
    }
}

#[derive(Args)]
struct DenoiseArgs {
    /// Points CSV, or a PGM image.
    input: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DtmArgs {
    input: PathBuf,
    #[arg(long, conflicts_with = "mass")]
    k: Option<usize>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    input: PathBuf,
    #[arg(long, conflicts_with = "mass")]
    k: Option<usize>,
    #[arg(long)]
    mass: Option<f64>,
    #[command(flatten)]
    threshold: Threshold,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long)]
    delta: f64,
    /// Defaults to twice --delta.
    #[arg(long)]
    delta_prime: Option<f64>,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
}

#[derive(Args)]
struct DiagramArgs {
    input: PathBuf,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    input: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    #[command(flatten)]
    dtm: DtmNeighbors,
    #[command(flatten)]
    threshold: Threshold,
    #[command(flatten)]
    scale: ScaleArgs,
    /// Also write the filtered, denoised sample here.
    #[arg(long)]
    denoised_output: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn emit(output: Option<&Path>, content: &[u8]) -> CliResult {
    match output {
        Some(path) => fs::write(path, content).map_err(|e| Failure::Data(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(content)
            .map_err(|e| Failure::Data(e.to_string())),
    }
}

fn load_points(path: &Path) -> Result<ScalarSample, Error> {
    read_points_csv(path)?.fill_missing()
}

fn is_pgm(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

fn synth(args: &SynthArgs) -> CliResult {
    let base = match args.shape {
        Shape::Circle => {
            let field = match args.field {
                Field::Height => CircleField::Height,
                Field::Geodesic => CircleField::GeodesicFromBase,
            };
            sample_circle(args.n, args.radius, field)?
        }
        Shape::Bone => sample_bone(args.n, args.neck_width, args.seed)?,
        Shape::Blobs => image_to_sample(&scalar_topo::noisegen::two_blob_image(args.size, args.size)?)?,
    };
    let (lo, hi) = match args.shape {
        Shape::Blobs => (0.0, 255.0),
        _ => base
            .values()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v))),
    };
    let mut specs = Vec::new();
    if let Some(sigma) = args.geometric_sigma {
        specs.push(NoiseSpec::GaussianGeometric { sigma });
    }
    if let Some(sigma) = args.functional_sigma {
        specs.push(NoiseSpec::GaussianFunctional { sigma });
    }
    if let Some(p) = args.impulse_uniform {
        specs.push(NoiseSpec::ImpulseUniform { p, lo, hi });
    }
    if let Some(p) = args.impulse_constant {
        specs.push(NoiseSpec::ImpulseConstant {
            p,
            value: args.impulse_value,
        });
    }
    let mut sample = base;
    for (i, spec) in specs.iter().enumerate() {
        sample = apply_noise(&sample, spec, args.seed.wrapping_add(1 + i as u64))?;
    }
    if let Some(count) = args.clutter {
        let bounds = BoundingBox::around(&sample, args.clutter_margin)?;
        sample = apply_noise(&sample, &NoiseSpec::Clutter { count, bounds }, args.seed.wrapping_add(100))?;
    }
    if let Shape::Blobs = args.shape {
        let img = GrayImage::from_values(args.size, args.size, sample.values())?;
        return write_image(args.output.as_deref(), &img);
    }
    emit(args.output.as_deref(), format_points_csv(&sample).as_bytes())
}

fn write_image(output: Option<&Path>, img: &GrayImage) -> CliResult {
    match output {
        Some(path) => Ok(write_pgm(path, img, false)?),
        None => emit(None, &scalar_topo::io::encode_pgm(img, true)),
    }
}

fn run_denoise(args: &DenoiseArgs) -> CliResult {
    let method = args.method.method();
    if is_pgm(&args.input) {
        let img = read_pgm(&args.input)?;
        let out = denoise(&image_to_sample(&img)?, method, args.method.k)?;
        let result = GrayImage::from_values(img.width(), img.height(), out.denoised())?;
        return write_image(args.output.as_deref(), &result);
    }
    let sample = load_points(&args.input)?;
    let out = denoise(&sample, method, args.method.k)?;
    emit(args.output.as_deref(), format_points_csv(&out.to_sample()).as_bytes())
}

fn dtm_k(k: Option<usize>, mass: Option<f64>, n: usize) -> Result<usize, Error> {
    match (k, mass) {
        (Some(k), _) => Ok(k),
        (None, Some(m)) => k_from_mass(m, n),
        (None, None) => Err(Error::InvalidParameter("one of --k or --mass is required".into())),
    }
}

fn run_dtm(args: &DtmArgs) -> CliResult {
    let sample = load_points(&args.input)?;
    let k = dtm_k(args.k, args.mass, sample.len())?;
    let values = sample_dtm(&sample, k)?;
    let mut out = String::from("index,dtm\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    emit(args.output.as_deref(), out.as_bytes())
}

fn run_filter(args: &FilterArgs) -> CliResult {
    let sample = load_points(&args.input)?;
    let k = dtm_k(args.k, args.mass, sample.len())?;
    let dtm = sample_dtm(&sample, k)?;
    let eta = args.threshold.resolve(|| Ok(dtm.clone()))?;
    let (kept, filtered) = filter_by_threshold(&sample, &dtm, eta);
    eprintln!("kept {} of {} points (eta = {eta})", kept.len(), sample.len());
    emit(args.output.as_deref(), format_points_csv(&filtered).as_bytes())
}

fn delta_prime(scale: &ScaleArgs) -> f64 {
    scale.delta_prime.unwrap_or(2.0 * scale.delta)
}

fn run_diagram(args: &DiagramArgs) -> CliResult {
    let sample = load_points(&args.input)?;
    let s = &args.scale;
    let pair = build_nested_pair(sample.points(), sample.values(), s.delta, delta_prime(s), s.max_dim)?;
    let diagram = image_diagram(&pair, s.max_dim);
    emit(args.output.as_deref(), format_diagram_csv(&diagram).as_bytes())
}

fn run_pipeline_cmd(args: &PipelineArgs) -> CliResult {
    let sample = load_points(&args.input)?;
    let dtm_k = args.dtm.resolve(sample.len(), args.method.k)?;
    let eta = args.threshold.resolve(|| sample_dtm(&sample, dtm_k))?;
    let cfg = PipelineConfig {
        k: args.method.k,
        method: args.method.method(),
        eta,
        delta: args.scale.delta,
        delta_prime: delta_prime(&args.scale),
        max_dim: args.scale.max_dim,
        dtm_k,
    };
    let out = run_pipeline(&sample, &cfg)?;
    eprintln!("kept {} of {} points (eta = {eta})", out.kept.len(), sample.len());
    if let Some(path) = &args.denoised_output {
        emit(Some(path), format_points_csv(&out.denoised.to_sample()).as_bytes())?;
    }
    emit(args.output.as_deref(), format_diagram_csv(&out.diagram).as_bytes())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Synth(args) => synth(&args),
        Command::Denoise(args) => run_denoise(&args),
        Command::Dtm(args) => run_dtm(&args),
        Command::Filter(args) => run_filter(&args),
        Command::Diagram(args) => run_diagram(&args),
        Command::Pipeline(args) => run_pipeline_cmd(&args),
        Command::Bottleneck { first, second } => {
            let d = bottleneck_distance(&read_diagram_csv(&first)?, &read_diagram_csv(&second)?);
            emit(None, format!("{d}\n").as_bytes())
        }
        Command::Psnr { first, second } => {
            let v = psnr(&read_pgm(&first)?, &read_pgm(&second)?)?;
            emit(None, format!("{v}\n").as_bytes())
        }
        Command::Gap { input, dim, n_relevant } => {
            let v = gap(&read_diagram_csv(&input)?, dim, n_relevant)?;
            emit(None, format!("{v}\n").as_bytes())
        }
        Command::Plot { input, output } => {
            let svg = diagram_svg(&read_diagram_csv(&input)?);
            emit(output.as_deref(), svg.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
