//! Serializable descriptions of `V₀`, `V` and the grid, and the pipeline that
//! turns them into an operator, a band set and a classified spectrum.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandset::BandSet;
use crate::error::Error;
use crate::hill::{floquet_bands, LatticeHill, MergedGap, PeriodicPotential};
use crate::ltsums::{
    default_omega, lt_sum_t1, lt_sum_t1_simplified, lt_sum_t2, lt_sum_t3, LtContext, LtReport,
    Theorem,
};
use crate::operator::{discretize, grid_points, Boundary, DiscretizedOperator, SpectrumReport};

/// `"auto"` or an explicit number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AutoOr {
    #[default]
    Auto,
    Value(f64),
}

impl Serialize for AutoOr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AutoOr::Auto => s.serialize_str("auto"),
            AutoOr::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for AutoOr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(AutoOr::Value(v)),
            Raw::Text(t) if t == "auto" => Ok(AutoOr::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected \"auto\" or a number, got {t:?}"
            ))),
        }
    }
}

impl AutoOr {
    pub fn value(self) -> Option<f64> {
        match self {
            AutoOr::Auto => None,
            AutoOr::Value(v) => Some(v),
        }
    }
}

/// `V₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BackgroundSpec {
    Free {
        #[serde(default = "default_period")]
        period: f64,
    },
    /// `offset + amplitude·cos(2πx/period)`; `offset` defaults to `|amplitude|`.
    Cos {
        amplitude: f64,
        #[serde(default)]
        offset: Option<f64>,
        #[serde(default = "default_period")]
        period: f64,
    },
    /// One period of uniform samples, linearly interpolated.
    Samples { period: f64, values: Vec<f64> },
}

fn default_period() -> f64 {
    TAU
}

impl BackgroundSpec {
    pub fn potential(&self) -> Result<PeriodicPotential, Error> {
        Ok(match self {
            BackgroundSpec::Free { period } => PeriodicPotential::free(*period)?,
            BackgroundSpec::Cos {
                amplitude,
                offset,
                period,
            } => PeriodicPotential::cosine(*amplitude, offset.unwrap_or(amplitude.abs()), *period)?,
            BackgroundSpec::Samples { period, values } => {
                PeriodicPotential::samples(*period, values.clone())?
            }
        })
    }
}

/// `V`; complex amplitudes are written `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PerturbationSpec {
    Zero,
    Constant {
        value: [f64; 2],
    },
    /// `amplitude·exp(−(x − center)²/(2 width²))`.
    Gaussian {
        center: f64,
        width: f64,
        amplitude: [f64; 2],
    },
    /// `amplitude` on `[start, end]`, zero elsewhere.
    Box {
        start: f64,
        end: f64,
        amplitude: [f64; 2],
    },
    /// One value per grid point.
    Samples {
        values: Vec<[f64; 2]>,
    },
    Sum {
        terms: Vec<PerturbationSpec>,
    },
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl PerturbationSpec {
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<Complex64>, Error> {
        let zero = Complex64::new(0.0, 0.0);
        Ok(match self {
            PerturbationSpec::Zero => vec![zero; xs.len()],
            PerturbationSpec::Constant { value } => vec![c(*value); xs.len()],
            PerturbationSpec::Gaussian {
                center,
                width,
                amplitude,
            } => {
                if !(*width > 0.0) {
                    return Err(Error::config("perturbation.width", "must be positive"));
                }
                xs.iter()
                    .map(|x| c(*amplitude) * (-(x - center).powi(2) / (2.0 * width * width)).exp())
                    .collect()
            }
            PerturbationSpec::Box {
                start,
                end,
                amplitude,
            } => xs
                .iter()
                .map(|x| if x >= start && x <= end { c(*amplitude) } else { zero })
                .collect(),
            PerturbationSpec::Samples { values } => {
                if values.len() != xs.len() {
                    return Err(Error::config(
                        "perturbation.values",
                        format!("{} samples for {} grid points", values.len(), xs.len()),
                    ));
                }
                values.iter().map(|v| c(*v)).collect()
            }
            PerturbationSpec::Sum { terms } => {
                let mut acc = vec![zero; xs.len()];
                for t in terms {
                    for (a, b) in acc.iter_mut().zip(t.sample(xs)?) {
                        *a += b;
                    }
                }
                acc
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Domain length; give this or `periods`.
    #[serde(default)]
    pub length: Option<f64>,
    /// Domain length as a whole number of `V₀` periods.
    #[serde(default)]
    pub periods: Option<u32>,
    pub n: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn length(&self, period: f64) -> Result<f64, Error> {
        match (self.length, self.periods) {
            (Some(l), None) => Ok(l),
            (None, Some(k)) if k > 0 => Ok(k as f64 * period),
            (None, Some(_)) => Err(Error::config("grid.periods", "must be positive")),
            _ => Err(Error::config("grid", "give exactly one of `length` and `periods`")),
        }
    }
}

/// Where the band set used for classification comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum BandSource {
    /// Essential spectrum of the three-point grid model with the same `V₀` samples.
    Lattice,
    /// Bands of the continuum Hill operator up to `e_max`.
    Continuum {
        e_max: f64,
        #[serde(default)]
        scan_step: Option<f64>,
    },
    Explicit {
        bands: BandSet,
    },
}

impl Default for BandSource {
    fn default() -> Self {
        BandSource::Lattice
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub background: BackgroundSpec,
    #[serde(default = "zero_perturbation")]
    pub perturbation: PerturbationSpec,
    /// Multiplies `V`.
    #[serde(default = "one")]
    pub coupling: f64,
    pub grid: GridSpec,
    #[serde(default)]
    pub bands: BandSource,
    /// Classification threshold.
    #[serde(default)]
    pub delta: AutoOr,
}

fn zero_perturbation() -> PerturbationSpec {
    PerturbationSpec::Zero
}

fn one() -> f64 {
    1.0
}

/// Assembled operator with its band set, before any eigenvalue work.
#[derive(Debug, Clone)]
pub struct Model {
    pub operator: DiscretizedOperator,
    pub bands: BandSet,
    pub merged_gaps: Vec<MergedGap>,
    pub delta: f64,
}

impl ModelSpec {
    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self {
            coupling,
            ..self.clone()
        }
    }

    /// Grid, potentials and the operator matrix.
    pub fn operator(&self) -> Result<DiscretizedOperator, Error> {
        if !self.coupling.is_finite() {
            return Err(Error::config("coupling", "must be finite"));
        }
        let v0 = self.background.potential()?;
        let length = self.grid.length(v0.period())?;
        let xs = grid_points(length, self.grid.n, self.grid.boundary);
        let v0_samples: Vec<f64> = xs.iter().map(|&x| v0.evaluate(x)).collect();
        let v: Vec<Complex64> = self
            .perturbation
            .sample(&xs)?
            .into_iter()
            .map(|z| z * self.coupling)
            .collect();
        Ok(discretize(&v0_samples, &v, length, self.grid.boundary)?)
    }

    pub fn band_set(&self, op: &DiscretizedOperator) -> Result<(BandSet, Vec<MergedGap>), Error> {
        match &self.bands {
            BandSource::Explicit { bands } => Ok((bands.clone(), Vec::new())),
            BandSource::Continuum { e_max, scan_step } => {
                let out = crate::hill::band_structure(&self.background.potential()?, *e_max, *scan_step)?;
                Ok((out.bands, out.merged_gaps))
            }
            BandSource::Lattice => {
                let period = self.background.potential()?.period();
                let h = op.spacing();
                let steps = period / h;
                let m = steps.round();
                if (steps - m).abs() > 1e-9 * steps.max(1.0) || m < 1.0 || m as usize > op.size() {
                    return Err(Error::config(
                        "bands.source",
                        format!(
                            "lattice bands need the V₀ period to be a whole number of grid steps (period/h = {steps})"
                        ),
                    ));
                }
                let lattice = LatticeHill::new(op.background()[..m as usize].to_vec(), h)?;
                let out = floquet_bands(&lattice, lattice.spectral_ceiling() + 1.0, None)?;
                Ok((out.bands.completed(), out.merged_gaps))
            }
        }
    }

    pub fn build(&self) -> Result<Model, Error> {
        let operator = self.operator()?;
        let (bands, merged_gaps) = self.band_set(&operator)?;
        let delta = self
            .delta
            .value()
            .unwrap_or_else(|| operator.default_delta(&bands));
        Ok(Model {
            operator,
            bands,
            merged_gaps,
            delta,
        })
    }
}

impl Model {
    pub fn spectrum(&self) -> Result<SpectrumReport, Error> {
        Ok(self.operator.spectrum_report(&self.bands, Some(self.delta))?)
    }

    pub fn context(&self, p: f64) -> Result<LtContext, Error> {
        Ok(LtContext::from_operator(&self.operator, &self.bands, p)?)
    }
}

/// Parameters of a single Lieb–Thirring evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LtSpec {
    pub theorem: Theorem,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub omega: AutoOr,
    /// Also walk the resolvent chain (shifted sum only).
    #[serde(default)]
    pub chain: bool,
}

fn two() -> f64 {
    2.0
}

impl LtSpec {
    pub fn evaluate(&self, report: &SpectrumReport, ctx: &LtContext) -> Result<LtReport, Error> {
        let omega = self.omega.value().unwrap_or_else(|| default_omega(ctx.omega1));
        Ok(match self.theorem {
            Theorem::Shifted => lt_sum_t1(report, ctx, omega)?,
            Theorem::ShiftedSimplified => lt_sum_t1_simplified(report, ctx, omega)?,
            Theorem::OmegaFree => lt_sum_t2(report, ctx)?,
            Theorem::Accretive => {
                let eps = self
                    .epsilon
                    .ok_or_else(|| Error::config("lt.epsilon", "required for T3"))?;
                lt_sum_t3(report, ctx, eps)?
            }
        })
    }
}

/// Everything a single `ltcheck` run produces.
#[derive(Debug, Clone)]
pub struct LtRun {
    pub model: Model,
    pub spectrum: SpectrumReport,
    pub context: LtContext,
    pub report: LtReport,
}

pub fn run_lt(spec: &ModelSpec, lt: &LtSpec) -> Result<LtRun, Error> {
    let model = spec.build()?;
    let context = model.context(lt.p)?;
    // Hypotheses on V are checked before the expensive eigenvalue solve.
    if lt.theorem == Theorem::Accretive && context.min_re_v < 0.0 {
        return Err(crate::ltsums::LtError::NotAccretive {
            index: context.min_re_v_index,
            re: context.min_re_v,
        }
        .into());
    }
    let spectrum = model.spectrum()?;
    let report = lt.evaluate(&spectrum, &context)?;
    Ok(LtRun {
        model,
        spectrum,
        context,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub lhs: f64,
    pub rhs_structure: f64,
    pub empirical_ratio: Option<f64>,
    /// `lhs / α^p`; absent at `α = 0`.
    pub lhs_scaled: Option<f64>,
    pub eigenvalue_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub theorem: Theorem,
    pub p: f64,
    pub rows: Vec<SweepRow>,
    /// `max/min` of `lhs/α^p` over the three smallest positive `α`.
    pub scaling_spread: Option<f64>,
    /// Set when the spread reaches 4 or cannot be formed.
    pub flagged: bool,
}

/// Runs the pipeline with `V → αV` for each `α`; the band set is shared.
pub fn coupling_sweep(spec: &ModelSpec, lt: &LtSpec, alphas: &[f64]) -> Result<SweepReport, Error> {
    if let Some(&a) = alphas.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
        return Err(crate::ltsums::LtError::BadCoupling(a).into());
    }
    let base = spec.build()?;
    let rows: Vec<SweepRow> = alphas
        .par_iter()
        .map(|&alpha| -> Result<SweepRow, Error> {
            let scaled = spec.with_coupling(spec.coupling * alpha);
            let op = scaled.operator()?;
            let model = Model {
                operator: op,
                bands: base.bands.clone(),
                merged_gaps: base.merged_gaps.clone(),
                delta: base.delta,
            };
            let ctx = model.context(lt.p)?;
            let report = lt.evaluate(&model.spectrum()?, &ctx)?;
            Ok(SweepRow {
                alpha,
                lhs: report.lhs,
                rhs_structure: report.rhs_structure,
                empirical_ratio: report.empirical_ratio,
                lhs_scaled: (alpha > 0.0).then(|| report.lhs / alpha.powf(lt.p)),
                eigenvalue_count: report.eigenvalue_count,
            })
        })
        .collect::<Result<_, _>>()?;
    let mut positive: Vec<&SweepRow> = rows.iter().filter(|r| r.alpha > 0.0).collect();
    positive.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let scaling_spread = if positive.len() >= 3 {
        let vals: Vec<f64> = positive[..3].iter().filter_map(|r| r.lhs_scaled).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(0.0, f64::max);
        (lo > 0.0).then(|| hi / lo)
    } else {
        None
    };
    Ok(SweepReport {
        theorem: lt.theorem,
        p: lt.p,
        rows,
        flagged: scaling_spread.is_none_or(|s| s >= 4.0),
        scaling_spread,
    })
}
