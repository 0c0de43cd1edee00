//! Command-line front end.
//!
//! Parameters resolve in increasing priority: built-in defaults, the
//! `--config` file, the `LENTIRESTORE_SEED` environment variable, then
//! explicit flags. Exit status is 0 on success, 1 on a usage error and 2 when
//! processing fails; a failing command writes no files.

mod config;
mod output;
mod report;

pub use config::{PipelineConfig, SEED_ENV};
pub use output::Staged;
pub use report::{mse, psnr, Psnr, QualityReport};

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::degrade::{
    custom_binarize, estimate_ratio, inverse_filter, node_count, wiener_radial_restore,
    DegradationModel, WienerParams,
};
use crate::error::{Error, Result};
use crate::notch::notch_restore;
use crate::preprocess::{
    adaptive_median_filter, double_median_filter, global_threshold, median_filter,
    preprocess_pipeline,
};
use crate::raster::{load_image, GrayImage};
use crate::spectral::{forward_dft, log_magnitude_view, spectrum_csv};
use crate::synth::Manifest;

#[derive(Parser, Debug)]
#[command(
    name = "lentirestore",
    version,
    about = "Restore lenticular-lens aliasing in grayscale line images"
)]
struct Cli {
    /// Flat key = value parameter file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for synthetic fixtures (overrides config and environment)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate fixtures from a manifest or the standard set
    Synth(SynthArgs),
    /// Threshold and median-filter a noisy capture
    Preprocess(PreprocessArgs),
    /// Keep only the spectral wedge around the stroke ridge
    Notch(NotchArgs),
    /// Estimate the degradation ratio from a clean/degraded pair
    #[command(name = "estimate-h")]
    EstimateH(EstimateArgs),
    /// Inverse-filter an image with a saved degradation model
    Inverse(InverseArgs),
    /// Wiener-radial restoration and binarization
    Wiener(WienerArgs),
    /// Dump magnitude and phase CSVs and a log-magnitude view
    #[command(name = "fft-spectrum")]
    FftSpectrum(SpectrumArgs),
    /// Wiener-radial restoration over a range of cutoffs
    Sweep(SweepArgs),
    /// Apply one pipeline to every PGM/PNG in a directory
    Batch(BatchArgs),
    /// Quality metrics for a clean/degraded/restored triple
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Fixture manifest (`kind params seed path` per line)
    #[arg(
        long,
        conflicts_with = "standard",
        required_unless_present = "standard"
    )]
    manifest: Option<PathBuf>,
    /// Generate the standard ten-pair fixture set
    #[arg(long)]
    standard: bool,
    /// Output directory (default: the manifest's directory)
    #[arg(long, required_if_eq("standard", "true"))]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PreprocessArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    threshold: Option<u8>,
    #[arg(long)]
    kernel: Option<usize>,
    #[arg(long)]
    passes: Option<usize>,
}

#[derive(Args, Debug)]
struct NotchArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Spectral orientation to keep, degrees
    #[arg(long)]
    keep_angle: Option<f64>,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    dc_radius: Option<f64>,
    /// Binarize the result at this level
    #[arg(long)]
    binarize: Option<u8>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    degraded: PathBuf,
    /// Model CSV to write
    #[arg(short, long)]
    output: PathBuf,
    /// Ratio guard (default: 1e-8 of the largest degraded magnitude)
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug)]
struct InverseArgs {
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    gain_cap: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct WienerInputs {
    /// Clean reference image
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Degraded rendering of the reference
    #[arg(long)]
    degraded: PathBuf,
    /// Image to restore (default: the degraded reference)
    #[arg(long)]
    target: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WienerArgs {
    #[command(flatten)]
    inputs: WienerInputs,
    /// Output directory for restored.pgm and restored_binary.pgm
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    binarize: Option<u8>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    inputs: WienerInputs,
    /// Inclusive integer range, e.g. 5..30
    #[arg(long, value_parser = parse_range)]
    cutoff: (u32, u32),
    #[arg(long, default_value_t = 1)]
    step: u32,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    binarize: Option<u8>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Pipeline {
    Binarize,
    Median,
    DoubleMedian,
    AdaptiveMedian,
    Preprocess,
    Notch,
    Inverse,
    Wiener,
}

impl Pipeline {
    fn stage(self) -> &'static str {
        match self {
            Pipeline::Binarize => "binarize",
            Pipeline::Median => "median",
            Pipeline::DoubleMedian => "double_median",
            Pipeline::AdaptiveMedian => "adaptive_median",
            Pipeline::Preprocess => "preprocess",
            Pipeline::Notch => "notch",
            Pipeline::Inverse => "inverse",
            Pipeline::Wiener => "wiener",
        }
    }
}

#[derive(Args, Debug)]
struct BatchArgs {
    dir: PathBuf,
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    /// Output directory (default: the input directory)
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Degradation model for the inverse pipeline
    #[arg(long)]
    model: Option<PathBuf>,
    /// Reference pair for the wiener pipeline
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    #[arg(long)]
    degraded: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    clean: PathBuf,
    #[arg(long)]
    degraded: PathBuf,
    #[arg(long)]
    restored: PathBuf,
    /// Append the CSV row to this file's contents and rewrite it
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Row label (default: the restored file stem)
    #[arg(long)]
    label: Option<String>,
}

fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let a: u32 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start '{a}'"))?;
    let b: u32 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end '{b}'"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// Runs the CLI on `argv` (program name first) and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_help());
            return 1;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = PipelineConfig::default();
    if let Some(path) = &cli.config {
        config.merge_file(path)?;
    }
    config.merge_env_seed(std::env::var(SEED_ENV).ok().as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<()> {
    let mut config = resolve_config(&cli)?;
    let mut out = Staged::new();
    match cli.command {
        Command::Synth(a) => synth(&config, &a, &mut out)?,
        Command::Preprocess(a) => {
            set(&mut config.preprocess.threshold, a.threshold);
            set(&mut config.preprocess.kernel, a.kernel);
            set(&mut config.preprocess.passes, a.passes);
            let img = load_image(&a.input)?;
            out.image(&a.output, &preprocess_pipeline(&img, &config.preprocess)?)?;
        }
        Command::Notch(a) => {
            set(&mut config.notch.keep_angle, a.keep_angle);
            set(&mut config.notch.half_width, a.half_width);
            set(&mut config.notch.dc_radius, a.dc_radius);
            if a.binarize.is_some() {
                config.notch.binarize_threshold = a.binarize;
            }
            let img = load_image(&a.input)?;
            out.image(&a.output, &notch_restore(&img, &config.notch)?)?;
        }
        Command::EstimateH(a) => {
            let model = estimate_ratio(
                &load_image(&a.reference)?,
                &load_image(&a.degraded)?,
                a.epsilon,
            )?;
            out.text(&a.output, model.to_csv());
        }
        Command::Inverse(a) => {
            set(&mut config.wiener.gain_cap, a.gain_cap);
            let model = DegradationModel::load(&a.model)?;
            let img = load_image(&a.input)?;
            out.image(
                &a.output,
                &inverse_filter(&img, &model, config.wiener.gain_cap)?,
            )?;
        }
        Command::Wiener(a) => {
            set(&mut config.wiener.cutoff, a.cutoff);
            set(&mut config.wiener.binarize_threshold, a.binarize);
            let (reference, degraded, target) = load_wiener_inputs(&a.inputs)?;
            let restored = wiener_radial_restore(&reference, &degraded, &target, &config.wiener)?;
            out.image(a.output.join("restored.pgm"), &restored.restored)?;
            out.image(a.output.join("restored_binary.pgm"), &restored.binary)?;
        }
        Command::FftSpectrum(a) => {
            let img = load_image(&a.input)?;
            let spec = forward_dft(&img);
            let (mag, phase) = spectrum_csv(&spec);
            let stem = file_stem(&a.input);
            out.text(a.output.join(format!("{stem}.magnitude.csv")), mag);
            out.text(a.output.join(format!("{stem}.phase.csv")), phase);
            out.image(
                a.output.join(format!("{stem}.spectrum.pgm")),
                &log_magnitude_view(&spec),
            )?;
        }
        Command::Sweep(a) => {
            set(&mut config.wiener.binarize_threshold, a.binarize);
            sweep(&config, &a, &mut out)?;
        }
        Command::Batch(a) => batch(&config, &a, &mut out)?,
        Command::Report(a) => report(&config, &a, &mut out)?,
    }
    config.validate()?;
    for path in out.commit()? {
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

fn load_wiener_inputs(inputs: &WienerInputs) -> Result<(GrayImage, GrayImage, GrayImage)> {
    let reference = load_image(&inputs.reference)?;
    let degraded = load_image(&inputs.degraded)?;
    let target = match &inputs.target {
        Some(p) => load_image(p)?,
        None => degraded.clone(),
    };
    Ok((reference, degraded, target))
}

fn synth(config: &PipelineConfig, args: &SynthArgs, out: &mut Staged) -> Result<()> {
    let (manifest, base) = if args.standard {
        let dir = args.out_dir.clone().expect("clap requires --out-dir");
        let manifest = Manifest::standard(config.seed);
        out.text(dir.join("manifest.txt"), manifest.to_string());
        (manifest, dir)
    } else {
        let path = args.manifest.as_ref().expect("clap requires --manifest");
        let manifest = Manifest::load(path)?;
        let base = match &args.out_dir {
            Some(d) => d.clone(),
            None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        (manifest, base)
    };
    let images = manifest
        .rows
        .par_iter()
        .map(|row| row.generate(config.seed))
        .collect::<Result<Vec<_>>>()?;
    for (row, img) in manifest.rows.iter().zip(&images) {
        out.image(Manifest::resolve(row, &base), img)?;
    }
    Ok(())
}

fn binary_for_metrics(img: &GrayImage, threshold: u8) -> GrayImage {
    if img.is_binary() {
        img.clone()
    } else {
        custom_binarize(img, threshold)
    }
}

fn sweep(config: &PipelineConfig, args: &SweepArgs, out: &mut Staged) -> Result<()> {
    if args.step == 0 {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let (reference, degraded, target) = load_wiener_inputs(&args.inputs)?;
    let mut csv = String::from("cutoff,mse,psnr,node_count\n");
    let cutoffs: Vec<u32> = (args.cutoff.0..=args.cutoff.1)
        .step_by(args.step as usize)
        .collect();
    let results = cutoffs
        .par_iter()
        .map(|&cutoff| {
            let params = WienerParams {
                cutoff: f64::from(cutoff),
                ..config.wiener
            };
            let restored = wiener_radial_restore(&reference, &degraded, &target, &params)?;
            let m = mse(&reference, &restored.binary)?;
            let nodes = node_count(&restored.binary, config.line_angle)?;
            Ok((cutoff, restored.binary, m, nodes))
        })
        .collect::<Result<Vec<_>>>()?;
    for (cutoff, img, m, nodes) in results {
        out.image(args.output.join(format!("cutoff_{cutoff:03}.pgm")), &img)?;
        csv.push_str(&format!("{cutoff},{m:.6},{},{nodes}\n", Psnr::from_mse(m)));
    }
    out.text(args.output.join("sweep.csv"), csv);
    Ok(())
}

fn batch(config: &PipelineConfig, args: &BatchArgs, out: &mut Staged) -> Result<()> {
    let mut inputs: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(args.dir.clone()),
            _ => Error::io(&args.dir, e),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("png"))
        })
        .collect();
    inputs.sort();
    // skip outputs of an earlier run of the same pipeline
    let suffix = format!(".{}", args.pipeline.stage());
    inputs.retain(|p| !file_stem(p).ends_with(&suffix));

    let model = match (&args.pipeline, &args.model) {
        (Pipeline::Inverse, Some(p)) => Some(DegradationModel::load(p)?),
        (Pipeline::Inverse, None) => {
            return Err(Error::InvalidParameter(
                "inverse pipeline needs --model".into(),
            ))
        }
        _ => None,
    };
    let pair = match (&args.pipeline, &args.reference, &args.degraded) {
        (Pipeline::Wiener, Some(r), Some(d)) => Some((load_image(r)?, load_image(d)?)),
        (Pipeline::Wiener, _, _) => {
            return Err(Error::InvalidParameter(
                "wiener pipeline needs --ref and --degraded".into(),
            ))
        }
        _ => None,
    };

    let process = |path: &PathBuf| -> Result<GrayImage> {
        let img = load_image(path)?;
        match args.pipeline {
            Pipeline::Binarize => Ok(global_threshold(&img, config.preprocess.threshold)),
            Pipeline::Median => median_filter(&img, config.preprocess.kernel),
            Pipeline::DoubleMedian => double_median_filter(&img, config.preprocess.kernel),
            Pipeline::AdaptiveMedian => {
                adaptive_median_filter(&img, config.preprocess.adaptive_max)
            }
            Pipeline::Preprocess => preprocess_pipeline(&img, &config.preprocess),
            Pipeline::Notch => notch_restore(&img, &config.notch),
            Pipeline::Inverse => inverse_filter(
                &img,
                model.as_ref().expect("checked"),
                config.wiener.gain_cap,
            ),
            Pipeline::Wiener => {
                let (r, d) = pair.as_ref().expect("checked");
                Ok(wiener_radial_restore(r, d, &img, &config.wiener)?.restored)
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let results = pool.install(|| inputs.par_iter().map(process).collect::<Result<Vec<_>>>())?;

    let out_dir = args.output.clone().unwrap_or_else(|| args.dir.clone());
    for (path, img) in inputs.iter().zip(&results) {
        let name = format!("{}.{}.pgm", file_stem(path), args.pipeline.stage());
        out.image(out_dir.join(name), img)?;
    }
    Ok(())
}

pub fn quality_report(
    label: &str,
    clean: &GrayImage,
    degraded: &GrayImage,
    restored: &GrayImage,
    config: &PipelineConfig,
) -> Result<QualityReport> {
    let mut timings = Vec::new();
    let t = Instant::now();
    let m = mse(clean, restored)?;
    timings.push(("mse".to_string(), t.elapsed().as_secs_f64() * 1e3));
    let t = Instant::now();
    let threshold = config.wiener.binarize_threshold;
    let before = node_count(&binary_for_metrics(degraded, threshold), config.line_angle)?;
    let after = node_count(&binary_for_metrics(restored, threshold), config.line_angle)?;
    timings.push(("nodes".to_string(), t.elapsed().as_secs_f64() * 1e3));
    Ok(QualityReport {
        label: label.to_string(),
        mse: m,
        psnr: Psnr::from_mse(m),
        node_count_before: before,
        node_count_after: after,
        timings,
    })
}

fn report(config: &PipelineConfig, args: &ReportArgs, out: &mut Staged) -> Result<()> {
    let t = Instant::now();
    let clean = load_image(&args.clean)?;
    let degraded = load_image(&args.degraded)?;
    let restored = load_image(&args.restored)?;
    let load_ms = t.elapsed().as_secs_f64() * 1e3;
    let label = args
        .label
        .clone()
        .unwrap_or_else(|| file_stem(&args.restored));
    let mut rep = quality_report(&label, &clean, &degraded, &restored, config)?;
    rep.timings.insert(0, ("load".to_string(), load_ms));
    println!("{}\n{}", QualityReport::HEADER, rep.row());
    eprintln!("timings: {}", rep.timing_summary());
    if let Some(path) = &args.output {
        let mut text = match std::fs::read_to_string(path) {
            Ok(existing) if !existing.is_empty() => existing,
            Ok(_) => format!("{}\n", QualityReport::HEADER),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                format!("{}\n", QualityReport::HEADER)
            }
            Err(e) => return Err(Error::io(path, e)),
        };
        text.push_str(&rep.row());
        text.push('\n');
        out.text(path, text);
    }
    Ok(())
}
