//! The `rotkit` command line: thin subcommand wrappers over the library.
//!
//! Angles cross this boundary in degrees, everywhere: flags, printed
//! results, and prediction files. Internally everything runs in radians.
//! Real numbers are printed with 17 significant digits so that files and
//! stdout round-trip f64 values exactly.
//!
//! Exit codes: 0 success, 1 domain error (bad data, degenerate input),
//! 2 usage error (unknown flags, out-of-range values).

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use serde::Deserialize;
use thiserror::Error;

use crate::continuity::{fit_rotation, probe_2d, probe_discontinuity, FitOptions};
use crate::datagen::{
    fmt_f64, generate_dataset, load_dataset, save_dataset, DatasetError, DistributionKind,
    DistributionSpec, Split, SplitCounts,
};
use crate::eval::{least_squares, report, EvalError};
use crate::loss::{gradcheck, loss_catalog, sample_regular_point, LossError};
use crate::rep::{canonical_params, params_to_matrix, RepError, RepKind};
use crate::so3::{geodesic_angle, NotARotation, RotationMatrix3};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Loss(#[from] LossError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    NotARotation(#[from] NotARotation),
    #[error(transparent)]
    Fit(#[from] crate::continuity::FitError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("predictions line {line}: {message}")]
    Predictions { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(
    name = "rotkit",
    version,
    about = "Rotation representations, synthetic rotation datasets, and pose-error metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a rotation between representations.
    Convert(ConvertArgs),
    /// Generate a synthetic rotation dataset (JSON Lines).
    Gen(GenArgs),
    /// Median distance from the test split to the nearest training rotation.
    Zeta(ZetaArgs),
    /// Score a prediction file against a dataset's test split.
    Eval(EvalArgs),
    /// Measure representation distances under small rotation perturbations.
    Probe(ProbeArgs),
    /// The two-point discontinuity construction on the unit circle.
    Probe2d(Probe2dArgs),
    /// Fit one rotation by gradient descent under a catalog loss.
    Fit(FitArgs),
    /// Compare analytic loss gradients against finite differences.
    Gradcheck(GradcheckArgs),
}

fn parse_rep(s: &str) -> Result<RepKind, String> {
    RepKind::from_tag(s).ok_or_else(|| {
        format!(
            "unknown representation {s:?} (expected one of euler, euler-bin, quat, aa3, aa4, aa-bin, gs6, stereo5)"
        )
    })
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("value must be positive and finite".into())
    }
}

fn parse_delta(s: &str) -> Result<f64, String> {
    let v = parse_positive(s)?;
    if v <= 0.1 {
        Ok(v)
    } else {
        Err("perturbation must lie in (0, 0.1] radians".into())
    }
}

fn parse_epsilon_deg(s: &str) -> Result<f64, String> {
    let v = parse_positive(s)?;
    if v < 90.0 {
        Ok(v)
    } else {
        Err("epsilon must lie in (0, 90) degrees".into())
    }
}

#[derive(Args)]
struct ConvertArgs {
    /// Source representation (or `matrix`).
    #[arg(long = "from", value_parser = parse_convert_rep)]
    from: ConvertRep,
    /// Target representation (or `matrix`).
    #[arg(long = "to", value_parser = parse_convert_rep)]
    to: ConvertRep,
    /// Comma-separated values; angle-valued slots in degrees
    /// (euler: 3 angles; aa3: rotation vector with norm in degrees;
    /// aa4: unit axis + angle; quat/gs6/stereo5/matrix: raw).
    #[arg(long = "deg", value_name = "VALUES", allow_hyphen_values = true)]
    deg: String,
}

#[derive(Clone, Copy, Debug)]
enum ConvertRep {
    Matrix,
    Rep(RepKind),
}

fn parse_convert_rep(s: &str) -> Result<ConvertRep, String> {
    if s == "matrix" {
        return Ok(ConvertRep::Matrix);
    }
    parse_rep(s).map(ConvertRep::Rep)
}

#[derive(Args)]
struct GenArgs {
    /// Distribution: random, big-hole, or many-holes.
    #[arg(long = "dist", value_parser = parse_dist)]
    dist: DistributionKind,
    /// Generation seed; falls back to ROTKIT_SEED, then 0.
    #[arg(long, env = "ROTKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8000)]
    train: usize,
    #[arg(long, default_value_t = 2000)]
    val: usize,
    #[arg(long, default_value_t = 1000)]
    test: usize,
    /// Output dataset path (JSON Lines).
    #[arg(long)]
    out: PathBuf,
}

fn parse_dist(s: &str) -> Result<DistributionKind, String> {
    DistributionKind::from_tag(s)
        .ok_or_else(|| format!("unknown distribution {s:?} (random, big-hole, many-holes)"))
}

#[derive(Args)]
struct ZetaArgs {
    #[arg(long)]
    dataset: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Ground-truth dataset (JSON Lines, as written by `gen`).
    #[arg(long)]
    gt: PathBuf,
    /// Predictions: JSON Lines of {"id": n, "rep": tag, "value": [...]}.
    #[arg(long)]
    pred: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the accuracy curve CSV here.
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long = "curve-step", value_parser = parse_positive, default_value = "0.1")]
    curve_step: f64,
    #[arg(long = "curve-max", value_parser = parse_positive, default_value = "20")]
    curve_max: f64,
    /// Write the error-vs-nearest-train-distance least-squares fit here.
    #[arg(long)]
    fit: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, value_parser = parse_rep)]
    rep: RepKind,
    /// Perturbation angle in radians, in (0, 0.1].
    #[arg(long, value_parser = parse_delta, default_value = "0.001")]
    delta: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, env = "ROTKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Probe2dArgs {
    /// Half-separation of the two circle points, in (0, 90) degrees.
    #[arg(long = "epsilon-deg", value_parser = parse_epsilon_deg)]
    epsilon_deg: f64,
}

#[derive(Args)]
struct FitArgs {
    /// Catalog configuration id (1..=20).
    #[arg(long)]
    id: u8,
    /// Target rotation as 9 comma-separated row-major values; a random
    /// rotation from the seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long, env = "ROTKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_positive)]
    step: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long = "threshold-deg", value_parser = parse_positive)]
    threshold_deg: Option<f64>,
    /// Write the per-iteration error trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct GradcheckArgs {
    /// Catalog configuration id (1..=20).
    #[arg(long)]
    id: u8,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, env = "ROTKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Central-difference step.
    #[arg(long, value_parser = parse_positive, default_value = "1e-6")]
    h: f64,
}

/// Run the CLI against explicit argument and output streams; returns the
/// process exit code. `main` is a one-line wrapper over this.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Convert(args) => convert(args, stdout),
        Command::Gen(args) => gen(args, stdout),
        Command::Zeta(args) => zeta(args, stdout),
        Command::Eval(args) => eval(args, stdout, stderr),
        Command::Probe(args) => probe(args, stdout),
        Command::Probe2d(args) => probe2d(args, stdout),
        Command::Fit(args) => fit(args, stdout),
        Command::Gradcheck(args) => gradcheck_cmd(args, stdout),
    }
}

fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad number {tok:?}: {e}")))
        })
        .collect()
}

/// Scale the angle-valued slots of a parameter vector between degrees and
/// radians.
fn scale_angles(kind: RepKind, values: &mut [f64], to_radians: bool) {
    let factor = if to_radians {
        std::f64::consts::PI / 180.0
    } else {
        180.0 / std::f64::consts::PI
    };
    for &slot in kind.angle_scaled_slots() {
        values[slot] *= factor;
    }
}

fn write_values(out: &mut dyn Write, values: &[f64]) -> std::io::Result<()> {
    let joined: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    writeln!(out, "{}", joined.join(","))
}

fn convert(args: ConvertArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let values = parse_values(&args.deg)?;
    let matrix = match args.from {
        ConvertRep::Matrix => {
            if values.len() != 9 {
                return Err(CliError::Usage(format!(
                    "matrix input needs 9 values, got {}",
                    values.len()
                )));
            }
            let mut flat = [0.0; 9];
            flat.copy_from_slice(&values);
            RotationMatrix3::from_flat(flat)?
        }
        ConvertRep::Rep(kind) => {
            if values.len() != kind.param_count() {
                return Err(CliError::Usage(format!(
                    "{kind} input needs {} values, got {}",
                    kind.param_count(),
                    values.len()
                )));
            }
            let mut params = values;
            scale_angles(kind, &mut params, true);
            params_to_matrix(kind, &params)?
        }
    };
    let output = match args.to {
        ConvertRep::Matrix => matrix.to_flat().to_vec(),
        ConvertRep::Rep(kind) => {
            let mut params = canonical_params(kind, &matrix);
            scale_angles(kind, &mut params, false);
            params
        }
    };
    write_values(stdout, &output)?;
    Ok(())
}

fn gen(args: GenArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = match args.dist {
        DistributionKind::Random => DistributionSpec::random(args.seed),
        DistributionKind::BigHole => DistributionSpec::big_hole(args.seed),
        DistributionKind::ManyHoles => DistributionSpec::many_holes(args.seed),
    };
    let counts = SplitCounts {
        train: args.train,
        val: args.val,
        test: args.test,
    };
    let ds = generate_dataset(&spec, counts)?;
    save_dataset(&ds, &args.out)?;
    writeln!(
        stdout,
        "wrote {} samples ({} train / {} val / {} test) to {}",
        ds.samples.len(),
        counts.train,
        counts.val,
        counts.test,
        args.out.display()
    )?;
    Ok(())
}

fn zeta(args: ZetaArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ds = load_dataset(&args.dataset)?;
    writeln!(stdout, "{}", fmt_f64(ds.zeta()?.degrees))?;
    Ok(())
}

#[derive(Deserialize)]
struct PredictionRecord {
    id: u64,
    rep: String,
    value: Vec<f64>,
}

/// A parsed prediction file: per-sample matrices plus the ids whose
/// conversion failed (reported, excluded, and counted).
pub struct Predictions {
    pub matrices: BTreeMap<u64, RotationMatrix3>,
    pub invalid: Vec<(u64, String)>,
}

/// Read a predictions file and convert every record to a rotation matrix.
///
/// Structural problems (unparseable line, unknown representation tag, wrong
/// value count, duplicate id) are hard errors naming the line. Degenerate
/// values (parallel columns, zero axis) are soft: the sample is excluded and
/// listed in `invalid`.
pub fn read_predictions(path: &Path) -> Result<Predictions, std::io::Error> {
    let file = std::fs::File::open(path)?;
    parse_predictions(std::io::BufReader::new(file))
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
}

fn parse_predictions(reader: impl BufRead) -> Result<Predictions, CliError> {
    let mut matrices = BTreeMap::new();
    let mut invalid = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(&text).map_err(|e| {
            CliError::Predictions {
                line: line_no,
                message: format!("bad record: {e}"),
            }
        })?;
        let kind = RepKind::from_tag(&record.rep).ok_or_else(|| CliError::Predictions {
            line: line_no,
            message: format!("unknown representation {:?}", record.rep),
        })?;
        if record.value.len() != kind.param_count() {
            return Err(CliError::Predictions {
                line: line_no,
                message: format!(
                    "representation mismatch: {} expects {} values, got {}",
                    kind,
                    kind.param_count(),
                    record.value.len()
                ),
            });
        }
        if matrices.contains_key(&record.id) || invalid.iter().any(|(id, _)| *id == record.id) {
            return Err(CliError::Predictions {
                line: line_no,
                message: format!("duplicate prediction for id {}", record.id),
            });
        }
        let mut params = record.value;
        scale_angles(kind, &mut params, true);
        match params_to_matrix(kind, &params) {
            Ok(m) => {
                matrices.insert(record.id, m);
            }
            Err(e) => invalid.push((record.id, format!("line {line_no}: {e}"))),
        }
    }
    Ok(Predictions { matrices, invalid })
}

fn eval(args: EvalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let ds = load_dataset(&args.gt)?;
    let file = std::fs::File::open(&args.pred).map_err(|e| CliError::File {
        path: args.pred.clone(),
        source: e,
    })?;
    let predictions = parse_predictions(std::io::BufReader::new(file))?;

    let test: Vec<_> = ds.split(Split::Test).collect();
    let test_ids: std::collections::BTreeSet<u64> = test.iter().map(|s| s.id).collect();
    for id in predictions.matrices.keys() {
        if !test_ids.contains(id) {
            return Err(CliError::Predictions {
                line: 0,
                message: format!("prediction id {id} is not a test sample of the dataset"),
            });
        }
    }

    let mut errors = Vec::with_capacity(test.len());
    let mut included = Vec::with_capacity(test.len());
    for sample in &test {
        match predictions.matrices.get(&sample.id) {
            Some(m) => {
                errors.push(geodesic_angle(m, &sample.rotation).degrees());
                included.push(sample.id);
            }
            None => {
                if !predictions.invalid.iter().any(|(id, _)| *id == sample.id) {
                    return Err(CliError::Predictions {
                        line: 0,
                        message: format!("missing prediction for test id {}", sample.id),
                    });
                }
            }
        }
    }
    for (id, reason) in &predictions.invalid {
        writeln!(stderr, "excluded id {id}: {reason}")?;
    }

    let rep = report(&errors)?;
    let extra = [("invalid", predictions.invalid.len().to_string())];
    match &args.report {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            rep.write_json(&mut f, &extra)?;
        }
        None => rep.write_json(stdout, &extra)?,
    }
    if let Some(path) = &args.curve {
        std::fs::write(path, rep.curve.to_csv(args.curve_step, args.curve_max))?;
    }
    if let Some(path) = &args.fit {
        // Align nearest-train distances with the samples that survived.
        let train: Vec<_> = ds.split(Split::Train).collect();
        if train.is_empty() {
            return Err(DatasetError::EmptySplit("train").into());
        }
        let distances: Vec<f64> = test
            .iter()
            .filter(|s| included.contains(&s.id))
            .map(|s| {
                train
                    .iter()
                    .map(|t| geodesic_angle(&s.rotation, &t.rotation).degrees())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let fit = least_squares(&distances, &errors)?;
        std::fs::write(
            path,
            format!(
                "{{\"slope\":{},\"intercept\":{}}}\n",
                fmt_f64(fit.slope),
                fmt_f64(fit.intercept)
            ),
        )?;
    }
    Ok(())
}

fn probe(args: ProbeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report = probe_discontinuity(args.rep, args.delta, args.n, args.seed);
    let json = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => writeln!(stdout, "{json}")?,
    }
    Ok(())
}

fn probe2d(args: Probe2dArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (true_d, rep_d) = probe_2d(args.epsilon_deg.to_radians());
    writeln!(
        stdout,
        "{{\"true_distance_deg\":{},\"rep_distance_deg\":{}}}",
        fmt_f64(true_d.to_degrees()),
        fmt_f64(rep_d.to_degrees())
    )?;
    Ok(())
}

fn fit(args: FitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = loss_catalog(args.id)?;
    let target = match &args.target {
        Some(text) => {
            let values = parse_values(text)?;
            if values.len() != 9 {
                return Err(CliError::Usage(format!(
                    "--target needs 9 values, got {}",
                    values.len()
                )));
            }
            let mut flat = [0.0; 9];
            flat.copy_from_slice(&values);
            RotationMatrix3::from_flat(flat)?
        }
        None => crate::so3::haar_random(args.seed, 1)[0],
    };
    let defaults = FitOptions::default();
    let opts = FitOptions {
        step_size: args.step.unwrap_or(defaults.step_size),
        max_iters: args.iters.unwrap_or(defaults.max_iters),
        convergence_deg: args.threshold_deg.unwrap_or(defaults.convergence_deg),
    };
    let init = crate::continuity::random_init(spec.rep, args.seed, 0);
    let trace = fit_rotation(&target, &spec, &init, opts)?;
    if let Some(path) = &args.trace {
        std::fs::write(path, trace.to_csv())?;
    }
    writeln!(
        stdout,
        "{{\"id\":{},\"converged\":{},\"iterations\":{},\"final_e_re_deg\":{}}}",
        args.id,
        trace.converged,
        trace.iterations,
        fmt_f64(trace.final_error_deg())
    )?;
    Ok(())
}

fn gradcheck_cmd(args: GradcheckArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = loss_catalog(args.id)?;
    let mut rng = rand_chacha::ChaCha8Rng::from_seed(crate::so3::stream_key(
        args.seed,
        0,
        crate::so3::STREAM_FIT,
    ));
    let targets = crate::so3::haar_random(args.seed, args.points);
    let mut worst = 0.0_f64;
    let mut singular_flagged = 0usize;
    for gt in &targets {
        let point = sample_regular_point(&spec, gt, &mut rng);
        let check = gradcheck(&spec, &point, gt, args.h)?;
        if check.singular {
            singular_flagged += 1;
        } else {
            worst = worst.max(check.max_rel_deviation);
        }
    }
    writeln!(
        stdout,
        "{{\"id\":{},\"points\":{},\"max_rel_deviation\":{},\"singular_flagged\":{}}}",
        args.id,
        args.points,
        fmt_f64(worst),
        singular_flagged
    )?;
    Ok(())
}

/// Entry point used by the binary: real process arguments and stdio.
pub fn run_main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(&argv, &mut stdout, &mut stderr)
}

/// Convenience for tests: run with string arguments, capture stdout.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}
