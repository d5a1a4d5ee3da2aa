//! Config-driven experiment runner behind the `band-lt` binary.
//!
//! A run reads one TOML file (or JSON on stdin with `--config -`), executes a
//! single pipeline and writes its artifacts into the output directory. Output
//! bytes depend only on the config and the seed.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bandset::BandSet;
use crate::error::Error;
use crate::hill::{band_structure, MergedGap};
use crate::ltsums::{
    accretive_profile, hansmann_ensemble, shifted_chain, ChainReport, HansmannReport, LtContext,
    LtReport, ProfileRow, Theorem, GENERATOR,
};
use crate::model::{coupling_sweep, run_lt, BackgroundSpec, LtSpec, ModelSpec, SweepReport};
use crate::moebius::{
    region_sampler, verify_distortion, DistortionBound, MoebiusMap, VerificationReport,
};
use crate::operator::{Boundary, Candidate, SpectrumReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bands,
    Distort,
    Spectrum,
    Ltcheck,
    Hansmann,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Distort => "distort",
            Command::Spectrum => "spectrum",
            Command::Ltcheck => "ltcheck",
            Command::Hansmann => "hansmann",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "band-lt", version, about = "Band sets, Hill bands and Lieb-Thirring type sums")]
pub struct Args {
    pub command: Command,
    /// TOML config file, or `-` for JSON on stdin.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HillSpec {
    pub background: BackgroundSpec,
    pub e_max: f64,
    #[serde(default)]
    pub scan_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSelection {
    #[default]
    Uniform,
    HalfPlane,
    /// Every represented gap.
    Gaps,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortSpec {
    #[serde(default)]
    pub bands: Option<BandSet>,
    /// BandSet JSON file, relative to the config file.
    #[serde(default)]
    pub bands_file: Option<PathBuf>,
    pub omega: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub variant: VariantSelection,
}

fn default_samples() -> usize {
    10_000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HansmannSpec {
    pub n: usize,
    pub trials: usize,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

fn two() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// When present it must match the command on the command line.
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub hill: Option<HillSpec>,
    #[serde(default)]
    pub distort: Option<DistortSpec>,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub lt: Option<LtSpec>,
    #[serde(default)]
    pub hansmann: Option<HansmannSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<toml>", e))?;
        serde_path_to_error::deserialize(de).map_err(|e| Error::config(e.path().to_string(), e.inner()))
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de)
            .map_err(|e| Error::config(e.path().to_string(), e.inner()))
    }

    fn section<'a, T>(field: &'static str, value: &'a Option<T>) -> Result<&'a T, Error> {
        value
            .as_ref()
            .ok_or_else(|| Error::config(field, "missing section for this command"))
    }
}

/// Paths written by a run, in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutcome {
    pub written: Vec<PathBuf>,
    pub summary: String,
}

struct Sink<'a> {
    out_dir: &'a Path,
    command: Command,
    output: &'a OutputSpec,
    outcome: RunOutcome,
}

impl Sink<'_> {
    fn path(&self, name: &Option<String>, ext: &str) -> PathBuf {
        match name {
            Some(n) => self.out_dir.join(n),
            None => self.out_dir.join(format!("{}.{ext}", self.command.name())),
        }
    }

    fn write_bytes(&mut self, path: PathBuf, bytes: &[u8]) -> Result<(), Error> {
        let fail = |e: std::io::Error| Error::Output {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(fail)?;
        }
        std::fs::write(&path, bytes).map_err(fail)?;
        self.outcome.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        let path = self.path(&self.output.json.clone(), "json");
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Output {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        text.push('\n');
        self.write_bytes(path, text.as_bytes())
    }

    fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<(), Error> {
        let path = self.path(&self.output.csv.clone(), "csv");
        let bytes = csv_bytes(rows).map_err(|message| Error::Output {
            path: path.display().to_string(),
            message,
        })?;
        self.write_bytes(path, &bytes)
    }
}

/// Header plus one line per row.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

/// Parses and runs the binary's arguments; returns the process exit code.
pub fn main_with_args(args: Args) -> i32 {
    match load_config(&args.config).and_then(|cfg| run(args.command, &cfg, args.seed, &args.out_dir)) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, Error> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::config("<stdin>", e))?;
        let mut cfg = ExperimentConfig::from_json(&text)?;
        resolve_relative(&mut cfg, Path::new("."));
        return Ok(cfg);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e))?;
    let mut cfg = ExperimentConfig::from_toml(&text)?;
    resolve_relative(&mut cfg, path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}

fn resolve_relative(cfg: &mut ExperimentConfig, base: &Path) {
    if let Some(d) = cfg.distort.as_mut() {
        if let Some(f) = d.bands_file.as_mut() {
            if f.is_relative() {
                *f = base.join(&*f);
            }
        }
    }
}

/// Executes `command` with `cfg`. The seed argument wins over the config seed.
pub fn run(
    command: Command,
    cfg: &ExperimentConfig,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<RunOutcome, Error> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(Error::config(
                "command",
                format!("config is for `{}` but `{}` was requested", c.name(), command.name()),
            ));
        }
    }
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let mut sink = Sink {
        out_dir,
        command,
        output: &cfg.output,
        outcome: RunOutcome::default(),
    };
    sink.outcome.summary = match command {
        Command::Bands => run_bands(cfg, &mut sink)?,
        Command::Distort => run_distort(cfg, seed, &mut sink)?,
        Command::Spectrum => run_spectrum(cfg, &mut sink)?,
        Command::Ltcheck => run_ltcheck(cfg, &mut sink)?,
        Command::Hansmann => run_hansmann(cfg, seed, &mut sink)?,
        Command::Sweep => run_sweep(cfg, &mut sink)?,
    };
    Ok(sink.outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandsOutput {
    #[serde(flatten)]
    pub bands: BandSet,
    pub merged_gaps: Vec<MergedGap>,
    pub scan_points: usize,
    pub gap_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub k: usize,
    pub a: f64,
    pub b: f64,
}

fn run_bands(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("hill", &cfg.hill)?;
    let v0 = spec.background.potential()?;
    let out = band_structure(&v0, spec.e_max, spec.scan_step)?;
    let rows: Vec<BandRow> = out
        .bands
        .bands()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| BandRow { k: k + 1, a, b })
        .collect();
    let summary = format!(
        "{} band(s) up to E = {}, {} merged gap(s)",
        out.bands.len(),
        spec.e_max,
        out.merged_gaps.len()
    );
    let json = BandsOutput {
        gap_ratio: out.bands.gap_ratio().ok(),
        bands: out.bands,
        merged_gaps: out.merged_gaps,
        scan_points: out.scan_points,
    };
    sink.json(&json)?;
    sink.csv(&rows)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortOutput {
    pub omega: f64,
    pub bands: BandSet,
    pub seed: u64,
    pub generator: String,
    pub results: Vec<DistortResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortResult {
    pub variant: DistortionBound,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortRow {
    pub variant: String,
    pub samples: usize,
    pub rejected: usize,
    pub violations: usize,
    pub min_quotient: Option<f64>,
    pub near_equality: usize,
}

fn variant_label(v: DistortionBound) -> String {
    match v {
        DistortionBound::HalfPlane => "half_plane".into(),
        DistortionBound::Gap(k) => format!("gap_{k}"),
        DistortionBound::Uniform => "uniform".into(),
    }
}

fn run_distort(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("distort", &cfg.distort)?;
    let bands = match (&spec.bands, &spec.bands_file) {
        (Some(b), None) => b.clone(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config("distort.bands_file", format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::config("distort.bands_file", e))?
        }
        _ => {
            return Err(Error::config(
                "distort",
                "give exactly one of `bands` and `bands_file`",
            ))
        }
    };
    let map = MoebiusMap::new(spec.omega);
    let gaps = bands.gaps().count();
    let variants: Vec<DistortionBound> = match spec.variant {
        VariantSelection::Uniform => vec![DistortionBound::Uniform],
        VariantSelection::HalfPlane => vec![DistortionBound::HalfPlane],
        VariantSelection::Gaps => (0..gaps).map(DistortionBound::Gap).collect(),
        VariantSelection::All => std::iter::once(DistortionBound::Uniform)
            .chain(std::iter::once(DistortionBound::HalfPlane))
            .chain((0..gaps).map(DistortionBound::Gap))
            .collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for v in variants {
        let mut sampler = region_sampler(&bands, &map, v);
        let report = verify_distortion(&bands, &map, v, sampler.as_mut(), spec.samples, &mut rng)?;
        results.push(DistortResult { variant: v, report });
    }
    let rows: Vec<DistortRow> = results
        .iter()
        .map(|r| DistortRow {
            variant: variant_label(r.variant),
            samples: r.report.samples,
            rejected: r.report.rejected,
            violations: r.report.violations.len(),
            min_quotient: r.report.min_quotient,
            near_equality: r.report.near_equality,
        })
        .collect();
    let total: usize = rows.iter().map(|r| r.violations).sum();
    let summary = format!("{} bound(s) checked, violations = {total}", rows.len());
    sink.json(&DistortOutput {
        omega: spec.omega,
        bands,
        seed,
        generator: GENERATOR.to_string(),
        results,
    })?;
    sink.csv(&rows)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SpectrumOutput {
    pub N: usize,
    pub h: f64,
    pub L: f64,
    pub boundary: Boundary,
    pub eigenvalues: Vec<Complex64>,
    pub discrete: Vec<Candidate>,
    pub delta: f64,
    pub bands: BandSet,
    pub beyond_cap: usize,
    pub omega1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub re: f64,
    pub im: f64,
    pub dist: Option<f64>,
    pub candidate: bool,
    pub boundary_artifact: bool,
}

fn run_spectrum(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("model", &cfg.model)?;
    let model = spec.build()?;
    let report = model.spectrum()?;
    let omega1 = model.operator.numerical_range_abscissa()?;
    let rows = eigen_rows(&report);
    let summary = format!(
        "{} eigenvalues, {} discrete candidate(s) (δ = {}), ω₁ = {omega1}",
        report.eigenvalues.len(),
        report.discrete.len(),
        report.delta
    );
    let op = &model.operator;
    sink.json(&SpectrumOutput {
        N: op.size(),
        h: op.spacing(),
        L: op.length(),
        boundary: op.boundary(),
        eigenvalues: report.eigenvalues.clone(),
        discrete: report.discrete.clone(),
        delta: report.delta,
        bands: report.band_set.clone(),
        beyond_cap: report.beyond_cap,
        omega1,
    })?;
    sink.csv(&rows)?;
    if cfg.output.svg.is_some() {
        let path = sink.path(&cfg.output.svg, "svg");
        let svg = svg_scatter(&report);
        sink.write_bytes(path, svg.as_bytes())?;
    }
    Ok(summary)
}

fn eigen_rows(report: &SpectrumReport) -> Vec<EigenRow> {
    report
        .eigenvalues
        .iter()
        .map(|&z| {
            let cand = report.discrete.iter().find(|c| c.z == z);
            EigenRow {
                re: z.re,
                im: z.im,
                dist: report.band_set.dist(z).ok(),
                candidate: cand.is_some(),
                boundary_artifact: cand.is_some_and(|c| c.boundary_artifact),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtOutput {
    pub report: LtReport,
    pub context: LtContext,
    pub discrete: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<ProfileRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
}

/// Flat CSV form of an [`LtReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtRow {
    pub theorem: Theorem,
    pub p: f64,
    pub omega: Option<f64>,
    pub omega_prime: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: f64,
    pub bands: String,
    pub lhs: f64,
    pub rhs_structure: f64,
    pub empirical_ratio: Option<f64>,
    pub eigenvalue_count: usize,
    pub artifacts_excluded: usize,
}

impl From<&LtReport> for LtRow {
    fn from(r: &LtReport) -> Self {
        Self {
            theorem: r.theorem,
            p: r.parameters.p,
            omega: r.parameters.omega,
            omega_prime: r.parameters.omega_prime,
            epsilon: r.parameters.epsilon,
            delta: r.parameters.delta,
            bands: r.parameters.bands.clone(),
            lhs: r.lhs,
            rhs_structure: r.rhs_structure,
            empirical_ratio: r.empirical_ratio,
            eigenvalue_count: r.eigenvalue_count,
            artifacts_excluded: r.artifacts_excluded,
        }
    }
}

fn run_ltcheck(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("model", &cfg.model)?;
    let lt = ExperimentConfig::section("lt", &cfg.lt)?;
    let run = run_lt(spec, lt)?;
    let profile = if lt.theorem == Theorem::Accretive {
        let a_values: Vec<f64> = (-3..=3).map(|k| 10f64.powi(k)).collect();
        accretive_profile(&run.spectrum, &run.context, &a_values)
    } else {
        Vec::new()
    };
    let chain = match (lt.chain, lt.theorem, run.report.parameters.omega) {
        (true, Theorem::Shifted, Some(omega)) => {
            Some(shifted_chain(&run.model.operator, &run.spectrum, &run.context, omega)?)
        }
        (true, _, _) => return Err(Error::config("lt.chain", "only available for theorem T1")),
        _ => None,
    };
    let summary = format!(
        "{}: lhs = {:e}, rhs_structure = {:e}, ratio = {}",
        run.report.theorem.label(),
        run.report.lhs,
        run.report.rhs_structure,
        run.report
            .empirical_ratio
            .map_or("undefined".to_string(), |r| format!("{r:e}"))
    );
    sink.csv(&[LtRow::from(&run.report)])?;
    sink.json(&LtOutput {
        discrete: run.spectrum.genuine().copied().collect(),
        report: run.report,
        context: run.context,
        profile,
        chain,
    })?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub index: usize,
    pub ratio: f64,
}

fn run_hansmann(cfg: &ExperimentConfig, seed: u64, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("hansmann", &cfg.hansmann)?;
    let report: HansmannReport = hansmann_ensemble(spec.n, spec.trials, spec.p, spec.scale, seed)?;
    let rows: Vec<TrialRow> = report
        .ratios
        .iter()
        .enumerate()
        .map(|(index, &ratio)| TrialRow { index, ratio })
        .collect();
    let summary = format!(
        "{} finite ratio(s), {} degenerate, {} failed; max ratio = {}",
        report.ratios.len(),
        report.degenerate,
        report.failed,
        report.max.map_or("n/a".into(), |m| format!("{m:e}"))
    );
    sink.json(&report)?;
    sink.csv(&rows)?;
    Ok(summary)
}

fn run_sweep(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<String, Error> {
    let spec = ExperimentConfig::section("model", &cfg.model)?;
    let lt = ExperimentConfig::section("lt", &cfg.lt)?;
    let sweep = ExperimentConfig::section("sweep", &cfg.sweep)?;
    let report: SweepReport = coupling_sweep(spec, lt, &sweep.alphas)?;
    let summary = format!(
        "{} coupling(s); spread of lhs/α^p over the three smallest α = {}{}",
        report.rows.len(),
        report.scaling_spread.map_or("n/a".into(), |s| format!("{s:.3}")),
        if report.flagged { " (flagged)" } else { "" }
    );
    sink.csv(&report.rows)?;
    sink.json(&report)?;
    Ok(summary)
}

/// Static scatter plot of a spectrum: bands on the real axis, the δ-tube
/// around them, all eigenvalues, and the discrete candidates highlighted.
pub fn svg_scatter(report: &SpectrumReport) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const M: f64 = 40.0;
    let bands = &report.band_set;
    let delta = report.delta;
    let mut x_min = bands.bottom() - delta;
    let mut x_max = bands.last_edge() + delta;
    let mut y_max = 2.0 * delta;
    for z in &report.eigenvalues {
        x_min = x_min.min(z.re);
        x_max = x_max.max(z.re);
        y_max = y_max.max(z.im.abs());
    }
    let pad = 0.05 * (x_max - x_min).max(1e-12);
    x_min -= pad;
    x_max += pad;
    y_max *= 1.1;
    let sx = |x: f64| M + (x - x_min) / (x_max - x_min) * (W - 2.0 * M);
    let sy = |y: f64| H / 2.0 - y / y_max * (H / 2.0 - M);
    let scale_y = (H / 2.0 - M) / y_max;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<line x1="{M}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#999" stroke-width="1"/>"##,
        sy(0.0),
        W - M,
        sy(0.0)
    );
    let _ = writeln!(s, r##"<g id="tube" fill="#cfe2f3" fill-opacity="0.6">"##);
    for &(a, b) in bands.bands() {
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            sx(a - delta),
            sy(delta),
            sx(b + delta) - sx(a - delta),
            2.0 * delta * scale_y
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="bands" stroke="#1f4e79" stroke-width="4">"##);
    for &(a, b) in bands.bands() {
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            sx(a),
            sy(0.0),
            sx(b),
            sy(0.0)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="eigenvalues" fill="#555">"##);
    for z in &report.eigenvalues {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="1.5"/>"#, sx(z.re), sy(z.im));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="candidates" fill="none" stroke="#c00000" stroke-width="1.5">"##);
    for c in &report.discrete {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="5"/>"#, sx(c.z.re), sy(c.z.im));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
