//! Command-line front end: argument types, dispatch and run records.

mod report;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::{
    input_hash, read_scaling_csv, scaling_report, write_record, write_scaling_csv, RunRecord, ScalingReport,
    ScalingRow, SCHEMA,
};

use crate::codes::{covering_size_bound, separated_code, CodeMode};
use crate::construction::{
    build_families, color_families, derive_params, emergence_lower_bound, onion_chain, verify_claims, LayerSpec,
    DEFAULT_ROW_BUDGET,
};
use crate::dynamics::{
    doubling_periodic_measures, horizontal_emergence_exact, katok_entropy_estimate, AnnulusLebesgue, CircleLebesgue,
    CircleRotation, DoublingMap, EmergenceExperiment, MapSystem, Omega, PackingOrder, PhasePoint, StartSampler,
    TwistMap, topological_emergence_packing,
};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, MeasureJson};
use crate::metric::{covering_bounds, dimension_estimate, FiniteMetricSpace};
use crate::quantization::{lebesgue_1d_quantization, quantization_heuristic, quantization_order_estimate, write_q_table};
use crate::transport::{pairwise_distances, write_distance_matrix_csv, MeasureMetric};

/// Exit status for a run whose certificate could not be established.
pub const EXIT_NOT_CERTIFIED: u8 = 2;
pub const EXIT_USAGE: u8 = 1;

#[derive(Debug, Parser, Serialize)]
#[command(name = "emergence", version, about = "Quantization numbers and emergence of measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice (ChaCha8).
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// JSON run record.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV table, where the command produces one.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Covering-number brackets of a finite metric space.
    Cover(CoverArgs),
    /// Pairwise distances between measures on one space.
    Transport(TransportArgs),
    /// Quantization numbers of a measure.
    Quantize(QuantizeArgs),
    /// Metric emergence of a dynamical system.
    #[command(subcommand)]
    Emergence(EmergenceCommand),
    /// Packing of doubling-map periodic measures.
    Topemergence(TopArgs),
    /// Katok entropy from Bowen-ball covers.
    Entropy(EntropyArgs),
    /// The annulus construction with its certified bound.
    Construct(ConstructArgs),
    /// Chain of constructions placed in nested annuli.
    Onion(OnionArgs),
    /// Separated balanced codes.
    Codes(CodesArgs),
    /// Exponent fits of a scaling table.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpaceArgs {
    /// CSV of point coordinates, one point per row.
    #[arg(long, conflicts_with = "matrix")]
    pub points: Option<PathBuf>,
    /// CSV distance matrix.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

impl SpaceArgs {
    fn path(&self) -> Option<&Path> {
        self.points.as_deref().or(self.matrix.as_deref())
    }

    fn load(&self) -> Result<Option<Arc<FiniteMetricSpace>>> {
        let space = match (&self.points, &self.matrix) {
            (Some(p), _) => FiniteMetricSpace::from_coordinates_csv(File::open(p)?)?,
            (_, Some(m)) => FiniteMetricSpace::from_matrix_csv(File::open(m)?)?,
            _ => return Ok(None),
        };
        Ok(Some(Arc::new(space)))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct TransportArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Measure JSON files; a named space refers to `--points` or `--matrix`.
    #[arg(long = "measure", required = true, num_args = 1..)]
    pub measures: Vec<PathBuf>,
    /// `w<p>` or `lp`.
    #[arg(long, default_value = "w1", value_parser = parse_metric)]
    pub metric: MeasureMetric,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantizeArgs {
    /// `leb1d` for Lebesgue on [0, 1], or a measure JSON file.
    #[arg(long)]
    pub measure: String,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Also search centres on Lebesgue discretized to this many atoms.
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Use the Lévy–Prokhorov distance instead of `W_q`.
    #[arg(long)]
    pub lp: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EmergenceCommand {
    /// Monte-Carlo estimate with certified lower bounds.
    Estimate(EstimateArgs),
    /// Closed form `ceil(1/(4 eps))` for twist maps.
    ExactHorizontal {
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Twist,
    Rotation,
    Doubling,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long, value_enum, default_value = "twist")]
    pub system: SystemKind,
    /// Rotation profile of the twist map, `affine:a,b` or `quadratic:a,b,c`.
    #[arg(long, default_value = "affine:0.1,1.0", value_parser = Omega::parse)]
    pub omega: Omega,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Angle of the circle rotation.
    #[arg(long, default_value_t = 0.381_966_011_250_105_1)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[arg(long, default_value_t = 128)]
    pub bins: usize,
    #[arg(long, default_value = "w1", value_parser = parse_metric)]
    pub metric: MeasureMetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderArg {
    Scan,
    MinDegree,
}

#[derive(Debug, Args, Serialize)]
pub struct TopArgs {
    #[arg(long, default_value_t = 14)]
    pub max_period: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_enum, default_value = "min-degree")]
    pub order: OrderArg,
}

#[derive(Debug, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long, value_enum, default_value = "doubling")]
    pub system: SystemKind,
    #[arg(long, default_value_t = 0.381_966_011_250_105_1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[arg(long, default_value_t = 0.02)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    #[arg(long)]
    pub m_cap: Option<u64>,
    /// Check both distance claims and certify the bound.
    #[arg(long)]
    pub verify: bool,
    /// Rows checked pairwise before sampling kicks in.
    #[arg(long, default_value_t = DEFAULT_ROW_BUDGET)]
    pub budget: usize,
    /// CSV of every G-, L- and U-box.
    #[arg(long)]
    pub emit_boxes: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OnionArgs {
    /// Layers as `n:m_cap`, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_layer, default_value = "3:246,4:324,5:405")]
    pub layers: Vec<LayerSpec>,
    #[arg(long, default_value_t = 40)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeModeArg {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Args, Serialize)]
pub struct CodesArgs {
    #[arg(long)]
    pub n_bits: usize,
    /// Defaults to `n_bits / 4`.
    #[arg(long)]
    pub min_dist: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: CodeModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub max_rejections: usize,
    /// Hex code file.
    #[arg(long)]
    pub hex: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    /// CSV with columns epsilon, lower and optionally upper.
    #[arg(long)]
    pub table: PathBuf,
}

fn parse_metric(s: &str) -> std::result::Result<MeasureMetric, String> {
    let lower = s.to_ascii_lowercase();
    if lower == "lp" {
        return Ok(MeasureMetric::LevyProkhorov);
    }
    match lower.strip_prefix('w').map(str::parse::<f64>) {
        Some(Ok(p)) if p >= 1.0 => Ok(MeasureMetric::Wasserstein { p }),
        _ => Err(format!("unknown metric {s:?}, expected w<p> with p >= 1 or lp")),
    }
}

fn parse_layer(s: &str) -> std::result::Result<LayerSpec, String> {
    let (n, cap) = match s.split_once(':') {
        Some((n, cap)) => (n, Some(cap)),
        None => (s, None),
    };
    let n = n.trim().parse().map_err(|e| format!("layer {s:?}: {e}"))?;
    let rows_cap = cap
        .map(|c| c.trim().parse())
        .transpose()
        .map_err(|e| format!("layer {s:?}: {e}"))?;
    Ok(LayerSpec { n, rows_cap })
}

/// What a finished command reports back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotCertified,
}

/// Parses the arguments and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { EXIT_USAGE } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::NotCertified) => EXIT_NOT_CERTIFIED,
        Err(e @ (Error::NotCertified(_) | Error::ClaimViolated { .. })) => {
            eprintln!("error: {e}");
            EXIT_NOT_CERTIFIED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command, printing the headline numbers to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Cover(a) => cover(cli, a, out),
        Command::Transport(a) => transport(cli, a, out),
        Command::Quantize(a) => quantize(cli, a, out),
        Command::Emergence(EmergenceCommand::ExactHorizontal { eps }) => {
            let q = horizontal_emergence_exact(*eps)?;
            writeln!(out, "{q}")?;
            record(cli, &[], &q)
        }
        Command::Emergence(EmergenceCommand::Estimate(a)) => estimate(cli, a, out),
        Command::Topemergence(a) => topemergence(cli, a, out),
        Command::Entropy(a) => entropy(cli, a, out),
        Command::Construct(a) => construct(cli, a, out),
        Command::Onion(a) => onion(cli, a, out),
        Command::Codes(a) => codes(cli, a, out),
        Command::Scaling(a) => scaling(cli, a, out),
    }
}

fn record<R: Serialize>(cli: &Cli, inputs: &[&Path], result: &R) -> Result<Outcome> {
    if let Some(path) = &cli.out {
        write_record(path, cli, inputs, result)?;
    }
    Ok(Outcome::Done)
}

fn csv_out(cli: &Cli) -> Result<Option<BufWriter<File>>> {
    cli.csv
        .as_ref()
        .map(|p| File::create(p).map(BufWriter::new))
        .transpose()
        .map_err(Error::from)
}

fn require_space(args: &SpaceArgs) -> Result<Arc<FiniteMetricSpace>> {
    args.load()?
        .ok_or_else(|| Error::InvalidInput("a space is required: pass --points or --matrix".into()))
}

fn cover<W: Write>(cli: &Cli, a: &CoverArgs, out: &mut W) -> Result<Outcome> {
    let space = require_space(&a.space)?;
    let bounds = a
        .eps
        .iter()
        .map(|&e| covering_bounds(&space, e))
        .collect::<Result<Vec<_>>>()?;
    for b in &bounds {
        writeln!(out, "{} {} {}", b.epsilon, b.lower, b.upper)?;
    }
    let counts: Vec<(f64, f64)> = bounds.iter().map(|b| (b.epsilon, b.upper as f64)).collect();
    let fit = dimension_estimate(&counts).ok();
    if let Some(mut w) = csv_out(cli)? {
        let mut c = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut w);
        c.write_record(["epsilon", "lower", "upper"])?;
        for b in &bounds {
            c.write_record([b.epsilon.to_string(), b.lower.to_string(), b.upper.to_string()])?;
        }
        c.flush()?;
    }
    #[derive(Serialize)]
    struct CoverResult {
        bounds: Vec<crate::metric::CoveringBounds>,
        dimension: Option<crate::metric::ExponentFit>,
    }
    let inputs: Vec<&Path> = a.space.path().into_iter().collect();
    record(cli, &inputs, &CoverResult { bounds, dimension: fit })
}

fn load_measure(path: &Path, space: Option<&Arc<FiniteMetricSpace>>) -> Result<DiscreteMeasure> {
    let json: MeasureJson = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    DiscreteMeasure::from_json(json, space)
}

fn transport<W: Write>(cli: &Cli, a: &TransportArgs, out: &mut W) -> Result<Outcome> {
    let space = a.space.load()?;
    let measures = a
        .measures
        .iter()
        .map(|p| load_measure(p, space.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let matrix = pairwise_distances(&measures, a.metric)?;
    for row in &matrix {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    if let Some(w) = csv_out(cli)? {
        let names: Vec<String> = a.measures.iter().map(|p| p.display().to_string()).collect();
        write_distance_matrix_csv(w, &names, &matrix)?;
    }
    let mut inputs: Vec<&Path> = a.space.path().into_iter().collect();
    inputs.extend(a.measures.iter().map(PathBuf::as_path));
    record(cli, &inputs, &matrix)
}

fn quantize<W: Write>(cli: &Cli, a: &QuantizeArgs, out: &mut W) -> Result<Outcome> {
    let metric = if a.lp {
        MeasureMetric::LevyProkhorov
    } else {
        MeasureMetric::Wasserstein { p: a.q }
    };
    #[derive(Serialize)]
    struct QuantizeResult {
        closed_form: Option<Vec<u64>>,
        searched: Vec<crate::quantization::QuantizationResult>,
        order: Option<crate::metric::ExponentFit>,
    }
    let mut inputs: Vec<&Path> = a.space.path().into_iter().collect();
    let (closed_form, measure) = if a.measure == "leb1d" {
        let exact = a
            .eps
            .iter()
            .map(|&e| lebesgue_1d_quantization(e, a.q))
            .collect::<Result<Vec<_>>>()?;
        for q in &exact {
            writeln!(out, "{q}")?;
        }
        let discrete = a
            .atoms
            .map(|k| -> Result<DiscreteMeasure> {
                let xs: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64).collect();
                Ok(DiscreteMeasure::uniform_on_space(Arc::new(FiniteMetricSpace::line(&xs)?)))
            })
            .transpose()?;
        (Some(exact), discrete)
    } else {
        let path = Path::new(&a.measure);
        inputs.push(path);
        (None, Some(load_measure(path, a.space.load()?.as_ref())?))
    };
    let searched = match &measure {
        Some(mu) => a
            .eps
            .iter()
            .map(|&e| quantization_heuristic(mu, e, metric, cli.seed))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    if closed_form.is_none() {
        for r in &searched {
            writeln!(out, "{} {} {}", r.epsilon, r.lower, r.upper)?;
        }
    }
    if let Some(w) = csv_out(cli)? {
        write_q_table(w, &searched)?;
    }
    let order = quantization_order_estimate(&searched).ok();
    record(
        cli,
        &inputs,
        &QuantizeResult {
            closed_form,
            searched,
            order,
        },
    )
}

fn estimate_with<S, Z, W>(cli: &Cli, a: &EstimateArgs, system: &S, sampler: &Z, out: &mut W) -> Result<Outcome>
where
    S: MapSystem,
    S::Point: PhasePoint,
    Z: StartSampler<S::Point>,
    W: Write,
{
    let exp = EmergenceExperiment::run(system, sampler, a.samples, a.n, a.bins, a.metric, cli.seed)?;
    let estimates = a.eps.iter().map(|&e| exp.estimate(e)).collect::<Result<Vec<_>>>()?;
    for e in &estimates {
        writeln!(out, "{} {} {}", e.epsilon, e.lower, e.upper)?;
    }
    let rows: Vec<ScalingRow> = estimates
        .iter()
        .map(|e| ScalingRow {
            epsilon: e.epsilon,
            lower: e.lower as f64,
            upper: Some(e.upper as f64),
        })
        .collect();
    if let Some(w) = csv_out(cli)? {
        write_scaling_csv(w, &rows)?;
    }
    #[derive(Serialize)]
    struct EstimateResult<'a> {
        system: &'a crate::dynamics::SystemDescriptor,
        sampler: &'a str,
        estimates: Vec<crate::dynamics::EmergenceEstimate>,
    }
    record(
        cli,
        &[],
        &EstimateResult {
            system: &exp.system,
            sampler: &exp.sampler,
            estimates,
        },
    )
}

fn estimate<W: Write>(cli: &Cli, a: &EstimateArgs, out: &mut W) -> Result<Outcome> {
    match a.system {
        SystemKind::Twist => estimate_with(cli, a, &TwistMap::new(a.omega, a.t)?, &AnnulusLebesgue, out),
        SystemKind::Rotation => estimate_with(cli, a, &CircleRotation { alpha: a.alpha }, &CircleLebesgue, out),
        SystemKind::Doubling => estimate_with(cli, a, &DoublingMap, &CircleLebesgue, out),
    }
}

fn topemergence<W: Write>(cli: &Cli, a: &TopArgs, out: &mut W) -> Result<Outcome> {
    let family = doubling_periodic_measures(a.max_period)?;
    let order = match a.order {
        OrderArg::Scan => PackingOrder::Scan,
        OrderArg::MinDegree => PackingOrder::MinDegree,
    };
    let packings = a
        .eps
        .iter()
        .map(|&e| topological_emergence_packing(&family.measures, e, order))
        .collect::<Result<Vec<_>>>()?;
    for p in &packings {
        writeln!(out, "{} {}", p.epsilon, p.count)?;
    }
    #[derive(Serialize)]
    struct TopResult {
        measures: usize,
        packings: Vec<crate::dynamics::Packing>,
    }
    record(
        cli,
        &[],
        &TopResult {
            measures: family.measures.len(),
            packings,
        },
    )
}

fn entropy<W: Write>(cli: &Cli, a: &EntropyArgs, out: &mut W) -> Result<Outcome> {
    let est = match a.system {
        SystemKind::Doubling => katok_entropy_estimate(&DoublingMap, &CircleLebesgue, a.n, a.eps, a.delta, a.samples, cli.seed)?,
        SystemKind::Rotation => katok_entropy_estimate(
            &CircleRotation { alpha: a.alpha },
            &CircleLebesgue,
            a.n,
            a.eps,
            a.delta,
            a.samples,
            cli.seed,
        )?,
        SystemKind::Twist => {
            return Err(Error::InvalidInput("entropy supports the doubling map and the rotation".into()))
        }
    };
    writeln!(out, "{}", est.entropy)?;
    record(cli, &[], &est)
}

fn construct<W: Write>(cli: &Cli, a: &ConstructArgs, out: &mut W) -> Result<Outcome> {
    let params = derive_params(a.n, a.m_cap)?;
    let families = build_families(&params)?;
    let colors = params.colors as usize;
    let code = separated_code(
        colors,
        colors / 4,
        Some(params.rows as usize),
        CodeMode::Randomized { max_rejections: 10_000 },
        cli.seed,
    )?;
    let colored = color_families(families, &code)?;
    if let Some(path) = &a.emit_boxes {
        write_boxes(BufWriter::new(File::create(path)?), &colored)?;
    }
    #[derive(Serialize)]
    struct ConstructResult {
        params: crate::construction::ConstructionParams,
        coloring: Vec<String>,
        min_color_difference: usize,
        min_one_sided_difference: usize,
        claims: Option<crate::construction::ClaimReport>,
        certified: Option<crate::construction::EmergenceBound>,
        failure: Option<String>,
    }
    let (x, y) = colored.closest_rows;
    let mut result = ConstructResult {
        params: params.clone(),
        coloring: colored.words.iter().map(|w| w.to_hex()).collect(),
        min_color_difference: colored.min_color_difference,
        min_one_sided_difference: colored.one_sided_difference(x, y),
        claims: None,
        certified: None,
        failure: None,
    };
    writeln!(out, "n {} N {} M {} (uncapped {})", params.n, params.colors, params.rows, params.paper_rows)?;
    let mut outcome = Outcome::Done;
    if a.verify {
        let claims = verify_claims(&colored, a.budget, cli.seed)?;
        writeln!(
            out,
            "together slack {} apart slack {}",
            claims.together_slack,
            claims.apart_slack.unwrap_or(f64::NAN)
        )?;
        match emergence_lower_bound(&colored, &claims, cli.seed) {
            Ok(b) => {
                writeln!(out, "certified Q({}) >= {}", b.epsilon, b.bound)?;
                result.certified = Some(b);
            }
            Err(e) => {
                writeln!(out, "{e}")?;
                result.failure = Some(e.to_string());
                outcome = Outcome::NotCertified;
            }
        }
        result.claims = Some(claims);
    }
    record(cli, &[], &result)?;
    Ok(outcome)
}

fn write_boxes<W: Write>(out: W, colored: &crate::construction::ColoredBoxFamilies) -> Result<()> {
    let fam = &colored.families;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["family", "index", "color", "theta", "rho", "width", "height"])?;
    let mut emit = |family: &str, index: usize, color: u32, r: &crate::construction::Rect| -> Result<()> {
        use num_traits::ToPrimitive;
        let f = |q: &num_rational::BigRational| q.to_f64().unwrap_or(f64::NAN).to_string();
        w.write_record([
            family.to_string(),
            index.to_string(),
            color.to_string(),
            f(&r.theta),
            f(&r.rho),
            f(&r.width),
            f(&r.height),
        ])?;
        Ok(())
    };
    let p = &fam.params;
    for c in 0..p.colors as u32 {
        emit("G", c as usize, c, &fam.square(c))?;
    }
    for c in 0..p.colors as u32 {
        for r in 0..p.rows as u32 {
            emit("L", r as usize, c, &fam.l_box(c, r))?;
        }
    }
    let width = colored.row_colors.first().map_or(0, Vec::len);
    for (i, row) in colored.row_colors.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            emit("U", i * width + k, c, &fam.u_box(i, k))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn onion<W: Write>(cli: &Cli, a: &OnionArgs, out: &mut W) -> Result<Outcome> {
    let report = onion_chain(&a.layers, a.budget, cli.seed)?;
    for l in &report.layers {
        writeln!(out, "layer {} n {} M {}: Q({}) >= {}", l.index, l.n, l.rows, l.epsilon_f64, l.bound)?;
    }
    if let Some(f) = &report.fit {
        writeln!(out, "exponent {} residual {}", f.exponent, f.residual)?;
    }
    if let Some(w) = csv_out(cli)? {
        let rows: Vec<ScalingRow> = report
            .layers
            .iter()
            .map(|l| ScalingRow {
                epsilon: l.epsilon_f64,
                lower: l.bound as f64,
                upper: None,
            })
            .collect();
        write_scaling_csv(w, &rows)?;
    }
    record(cli, &[], &report)
}

fn codes<W: Write>(cli: &Cli, a: &CodesArgs, out: &mut W) -> Result<Outcome> {
    let min_dist = a.min_dist.unwrap_or(a.n_bits / 4);
    let mode = match a.mode {
        CodeModeArg::Exhaustive => CodeMode::Exhaustive,
        CodeModeArg::Randomized => CodeMode::Randomized {
            max_rejections: a.max_rejections,
        },
    };
    let code = separated_code(a.n_bits, min_dist, a.target, mode, cli.seed)?;
    let bound = covering_size_bound(a.n_bits as u64, min_dist as u64);
    writeln!(out, "{} words (covering bound {bound})", code.len())?;
    if let Some(path) = &a.hex {
        code.write_hex(BufWriter::new(File::create(path)?))?;
    }
    #[derive(Serialize)]
    struct CodesResult {
        words: usize,
        minimum_distance: Option<usize>,
        maximal: bool,
        covering_bound: String,
        hex: Vec<String>,
    }
    record(
        cli,
        &[],
        &CodesResult {
            words: code.len(),
            minimum_distance: code.minimum_distance(),
            maximal: code.maximal,
            covering_bound: bound.to_string(),
            hex: code.words.iter().map(|w| w.to_hex()).collect(),
        },
    )
}

fn scaling<W: Write>(cli: &Cli, a: &ScalingArgs, out: &mut W) -> Result<Outcome> {
    let rows = read_scaling_csv(File::open(&a.table)?)?;
    let rep = scaling_report(&rows)?;
    writeln!(out, "lower exponent {} residual {}", rep.lower_fit.exponent, rep.lower_fit.residual)?;
    if let Some(f) = &rep.upper_fit {
        writeln!(out, "upper exponent {} residual {}", f.exponent, f.residual)?;
    }
    if let Some(w) = csv_out(cli)? {
        write_scaling_csv(w, &rows)?;
    }
    record(cli, &[a.table.as_path()], &rep)
}
