//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use durer_core::fit::{fit_model, FitError};
use durer_core::solid::{golden_construction, golden_pentagon, TRUNCATED_LABELS};
use durer_core::theories::{builtin_theories, compare, golden_angle_72, Theory};
use durer_core::{concurrency_defect, convergence_direction_check, measure, AnalysisError, FaceShape, MeasurementReport};
use serde::Serialize;

use crate::annotation::Annotation;
use crate::config::{Format, RunConfig};
use crate::error::{read, write, Error, Result, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE};
use crate::mesh_io::write_mesh;
use crate::report::{self, AnomalyBody, FitBody, GroupRow, MeasureBody, PairRow};
use crate::svg::{render_annotation, render_solid};
use crate::synth::{solid, synthesize, SynthOptions};

#[derive(Debug, Parser)]
#[command(name = "durer", version, about = "Cross-ratio analysis of truncated rhombohedra")]
pub struct Cli {
    /// Run configuration (TOML). Falls back to $DURER_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Report format; overrides the config file.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Acute rhombus angle, degrees.
    #[arg(long, default_value_t = 78.0)]
    pub alpha: f64,
    /// Centerline cross ratio.
    #[arg(long, default_value_t = 1.6111)]
    pub lambda: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-face cross ratios of an annotation.
    Measure {
        #[arg(long, value_name = "PATH")]
        annotation: PathBuf,
        /// Also draw the annotation with reconstructed centerline points.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Annotation of a projected solid of known shape.
    Synth {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Gaussian pixel noise, standard deviation.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Fit shape and camera to an annotation's labeled vertices.
    Fit {
        #[arg(long, value_name = "PATH")]
        annotation: PathBuf,
        /// Initial α; defaults to the config value.
        #[arg(long)]
        alpha: Option<f64>,
        /// Initial λ; defaults to the config value.
        #[arg(long)]
        lambda: Option<f64>,
        /// Seed for random restarts; overrides the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank published face shapes against a measured λ.
    Theories {
        /// Measured λ.
        #[arg(long, conflicts_with = "annotation")]
        lambda: Option<f64>,
        /// Measure λ from this annotation instead.
        #[arg(long, value_name = "PATH")]
        annotation: Option<PathBuf>,
        /// Measured α, degrees.
        #[arg(long)]
        alpha: Option<f64>,
        /// Extra theories (JSON array, builtin schema) appended to the catalog.
        #[arg(long, value_name = "PATH")]
        catalog: Option<PathBuf>,
    },
    /// Concurrency and convergence checks on an annotation.
    Anomaly {
        #[arg(long, value_name = "PATH")]
        annotation: PathBuf,
    },
    /// The golden pentagon and related constants.
    Golden,
    /// Export the truncated solid in the mesh text format.
    Mesh {
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// SVG of the solid under the configured camera.
    Render {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Omit vertex labels.
        #[arg(long)]
        no_labels: bool,
    },
}

/// What a command produced: the primary text and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, code: EXIT_OK, diagnostic: None }
    }
}

struct Context {
    config: RunConfig,
    format: Format,
}

impl Context {
    fn render<T: Serialize>(&self, name: &'static str, body: T, table: impl FnOnce(&T) -> String) -> String {
        match self.format {
            Format::Json => report::to_json(name, body),
            Format::Table => table(&body),
        }
    }
}

fn shape(args: &ShapeArgs) -> Result<FaceShape> {
    FaceShape::new(args.alpha, args.lambda).map_err(|e| Error::Usage(e.to_string()))
}

fn measure_annotation(ann: &Annotation, ctx: &Context) -> Result<MeasurementReport> {
    measure(&ann.face_points(), &ctx.config.measure_settings()).map_err(|e| match e {
        AnalysisError::EmptyAnnotation => Error::Schema("annotation has no faces".into()),
        AnalysisError::NoMeasurements { failures } => {
            let detail: Vec<String> = failures.iter().map(|(id, e)| format!("{id}: {e}")).collect();
            Error::Compute(format!("no face could be measured ({})", detail.join("; ")))
        }
        other => Error::compute(other),
    })
}

fn cmd_measure(ctx: &Context, annotation: &Path, svg: Option<&Path>) -> Result<Outcome> {
    let ann = Annotation::load(annotation)?;
    let r = measure_annotation(&ann, ctx)?;
    if let Some(path) = svg {
        write(path, &render_annotation(&ann, Some(&r)))?;
    }
    Ok(Outcome::ok(ctx.render("measure", MeasureBody::new(&ann.provenance, &r), MeasureBody::table)))
}

fn cmd_synth(ctx: &Context, shape_args: &ShapeArgs, noise: f64, seed: u64, svg: Option<&Path>) -> Result<Outcome> {
    let shape = shape(shape_args)?;
    let cam = &ctx.config.camera;
    let camera = cam.camera()?;
    let ann = synthesize(&SynthOptions { shape, camera, image: cam.image, noise, seed })?;
    if let Some(path) = svg {
        write(path, &render_solid(&solid(&shape)?, &camera, cam.image, true)?)?;
    }
    Ok(Outcome::ok(ann.to_json()))
}

fn cmd_fit(ctx: &Context, annotation: &Path, alpha: Option<f64>, lambda: Option<f64>, seed: Option<u64>) -> Result<Outcome> {
    let ann = Annotation::load(annotation)?;
    let f = &ctx.config.fit;
    let initial = FaceShape::new(alpha.unwrap_or(f.initial_alpha), lambda.unwrap_or(f.initial_lambda))
        .map_err(|e| Error::Usage(format!("initial shape: {e}")))?;
    let camera = ctx.config.camera.camera()?;
    let mut cfg = ctx.config.fit_config();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let obs = ann.observations();
    let used = obs.iter().filter(|(l, _)| TRUNCATED_LABELS.contains(&l.as_str())).count();
    match fit_model(&obs, &initial, &camera, &cfg) {
        Ok(r) => Ok(Outcome::ok(ctx.render("fit", FitBody::new(&r, used), FitBody::table))),
        Err(FitError::NoConvergence(r)) => Ok(Outcome {
            output: ctx.render("fit", FitBody::new(&r, used), FitBody::table),
            code: EXIT_COMPUTE,
            diagnostic: Some(format!("fit did not converge: rms {:.4} px exceeds {} px", r.rms, cfg.rms_threshold)),
        }),
        Err(e @ FitError::TooFewCorrespondences { .. }) => {
            Err(Error::Compute(format!("{e} (labels must be among {})", TRUNCATED_LABELS.join(", "))))
        }
    }
}

fn load_catalog(path: &Path) -> Result<Vec<Theory>> {
    let text = read(path)?;
    let list: Vec<Theory> =
        serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })?;
    for t in &list {
        t.validate().map_err(|e| Error::Schema(e.to_string()))?;
    }
    Ok(list)
}

fn cmd_theories(
    ctx: &Context,
    lambda: Option<f64>,
    annotation: Option<&Path>,
    alpha: Option<f64>,
    catalog: Option<&Path>,
) -> Result<Outcome> {
    let mut theories = builtin_theories();
    if let Some(path) = catalog {
        for t in load_catalog(path)? {
            if theories.iter().any(|b| b.name == t.name) {
                return Err(Error::Schema(format!("catalog: duplicate theory name {:?}", t.name)));
            }
            theories.push(t);
        }
    }
    let measured = match (lambda, annotation) {
        (Some(l), _) => l,
        (None, Some(path)) => measure_annotation(&Annotation::load(path)?, ctx)?.summary.mean,
        (None, None) => return Err(Error::Usage("give --lambda or --annotation".into())),
    };
    let c = compare(measured, alpha, &theories).map_err(|e| Error::Usage(e.to_string()))?;
    Ok(Outcome::ok(ctx.render("theories", c, report::theories_table)))
}

fn cmd_anomaly(ctx: &Context, annotation: &Path) -> Result<Outcome> {
    let ann = Annotation::load(annotation)?;
    if ann.concurrency_groups.is_empty() && ann.convergence_pairs.is_empty() {
        return Err(Error::Schema("annotation has no concurrency groups or convergence pairs".into()));
    }
    let threshold = ctx.config.tolerances.parallel_angle_deg;
    let concurrency = ann
        .concurrency_groups
        .iter()
        .map(|g| {
            let s: Vec<_> = g.segments.iter().map(|seg| ann.segment(seg)).collect();
            match concurrency_defect([&s[0], &s[1], &s[2]], threshold) {
                Ok(r) => GroupRow { id: g.id.clone(), result: Some(r), error: None },
                Err(e) => GroupRow { id: g.id.clone(), result: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let convergence = ann
        .convergence_pairs
        .iter()
        .map(|p| {
            let row = |result, error| PairRow { id: p.id.clone(), expected_side: p.expected_side, result, error };
            match convergence_direction_check(&ann.segment(&p.p), &ann.segment(&p.q), p.expected_side, threshold) {
                Ok(r) => row(Some(r), None),
                Err(e) => row(None, Some(e.to_string())),
            }
        })
        .collect();
    let body = AnomalyBody { provenance: ann.provenance.clone(), parallel_angle_deg: threshold, concurrency, convergence };
    Ok(Outcome::ok(ctx.render("anomaly", body, AnomalyBody::table)))
}

#[derive(Debug, Serialize)]
struct GoldenBody {
    alpha_phi_deg: f64,
    lambda_phi: f64,
    truncation_ratio: f64,
    ray_hit: [f64; 2],
    golden_angle_72_deg: f64,
}

fn cmd_golden(ctx: &Context) -> Outcome {
    let g = golden_construction();
    let shape = golden_pentagon();
    let body = GoldenBody {
        alpha_phi_deg: shape.alpha(),
        lambda_phi: shape.lambda(),
        truncation_ratio: g.truncation_ratio,
        ray_hit: g.ray_hit,
        golden_angle_72_deg: golden_angle_72(),
    };
    Outcome::ok(ctx.render("golden", body, |b| {
        format!(
            "golden pentagon (rhombus in two golden rectangles, 45 deg truncation ray)\n\
             alpha_phi  = {:.4} deg   2 arctan(phi/2)\n\
             lambda_phi = {:.4}       phi\n\
             r          = {:.4}       BC/AC = 1/sqrt(5)\n\
             2 arccos(phi/2) = {:.4} deg\n",
            b.alpha_phi_deg, b.lambda_phi, b.truncation_ratio, b.golden_angle_72_deg
        )
    }))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let config = RunConfig::resolve(cli.config.as_deref())?;
    let format = cli.format.unwrap_or(config.output.format);
    let ctx = Context { config, format };
    match &cli.command {
        Command::Measure { annotation, svg } => cmd_measure(&ctx, annotation, svg.as_deref()),
        Command::Synth { shape, noise, seed, svg } => cmd_synth(&ctx, shape, *noise, *seed, svg.as_deref()),
        Command::Fit { annotation, alpha, lambda, seed } => cmd_fit(&ctx, annotation, *alpha, *lambda, *seed),
        Command::Theories { lambda, annotation, alpha, catalog } => {
            cmd_theories(&ctx, *lambda, annotation.as_deref(), *alpha, catalog.as_deref())
        }
        Command::Anomaly { annotation } => cmd_anomaly(&ctx, annotation),
        Command::Golden => Ok(cmd_golden(&ctx)),
        Command::Mesh { shape: s } => Ok(Outcome::ok(write_mesh(&solid(&shape(s)?)?))),
        Command::Render { shape: s, no_labels } => {
            let shape = shape(s)?;
            let cam = &ctx.config.camera;
            Ok(Outcome::ok(render_solid(&solid(&shape)?, &cam.camera()?, cam.image, !no_labels)?))
        }
    }
}

/// Parse `args`, run, write output and diagnostics, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => write(path, &outcome.output),
                None => stdout.write_all(outcome.output.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return e.exit_code();
            }
            if let Some(d) = outcome.diagnostic {
                let _ = writeln!(stderr, "error: {d}");
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
