//! Lieb–Thirring type eigenvalue sums on computed discrete spectra.
//!
//! Every sum is reported next to the part of its right side that can be
//! computed (`rhs_structure`); the unknown constant in front is what the
//! ratio `lhs / rhs_structure` estimates from below.

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandset::{BandSet, BandSetError};
use crate::moebius::{
    distortion_bound, distortion_ratio, DistortionBound, MoebiusError, MoebiusMap, BOUND_REL_TOL,
};
use crate::operator::{matrix_eigenvalues, DiscretizedOperator, OperatorError, SpectrumReport};
use crate::schatten::{
    norm_from_singular_values, omega_prime, resolvent_diff_bound, singular_values, NormBundle,
    SchattenError,
};

/// Name of the generator behind every random ensemble.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64, stream = trial index";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LtError {
    #[error("exponent p = {p} outside the admissible range ({range})")]
    BadExponent { p: f64, range: &'static str },
    #[error("ω = {omega} must satisfy {requirement} (ω₁ = {omega1})")]
    OmegaOrder {
        omega: f64,
        omega1: f64,
        requirement: &'static str,
    },
    #[error("ε = {0} must lie in (0, 1)")]
    BadEpsilon(f64),
    #[error("Re V = {re} < 0 at grid index {index}; the accretive bound needs Re V ≥ 0")]
    NotAccretive { index: usize, re: f64 },
    #[error("matrix size must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("coupling α = {0} must be nonnegative and finite")]
    BadCoupling(f64),
    #[error(transparent)]
    Schatten(#[from] SchattenError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Bands(#[from] BandSetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// Shifted kernel `(|z−ω| + |ω|)^{−2p}` at a point `ω` left of the numerical range.
    #[serde(rename = "T1")]
    Shifted,
    /// Kernel `(1 + |z|)^{−2p}` for `ω < ω₁ − 1`.
    #[serde(rename = "T1simplified")]
    ShiftedSimplified,
    /// Kernel `(1 + |z|)^{−2p}` with `ω` eliminated.
    #[serde(rename = "T2")]
    OmegaFree,
    /// Split kernel `|z|^{−(1/2 ∓ ε)}` for accretive `V`.
    #[serde(rename = "T3")]
    Accretive,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Shifted => "T1",
            Theorem::ShiftedSimplified => "T1simplified",
            Theorem::OmegaFree => "T2",
            Theorem::Accretive => "T3",
        }
    }
}

/// Operator data the bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LtContext {
    pub norms: NormBundle,
    /// Smallest eigenvalue of the Hermitian part of the matrix of `H`.
    pub omega1: f64,
    /// Bottom of the band set.
    pub a1: f64,
    /// `min Re V` over the grid.
    pub min_re_v: f64,
    /// Grid index where `min Re V` is attained.
    pub min_re_v_index: usize,
}

impl LtContext {
    pub fn from_operator(
        op: &DiscretizedOperator,
        bands: &BandSet,
        p: f64,
    ) -> Result<Self, LtError> {
        let norms = NormBundle::from_samples(p, op.perturbation(), op.background(), op.spacing())?;
        let (min_re_v_index, min_re_v) = op
            .perturbation()
            .iter()
            .map(|v| v.re)
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        Ok(Self {
            norms,
            omega1: op.numerical_range_abscissa()?,
            a1: bands.bottom(),
            min_re_v,
            min_re_v_index,
        })
    }
}

/// `ω = ω₁' − max(1, |ω₁'|)` with `ω₁' = min(ω₁, 0)`.
pub fn default_omega(omega1: f64) -> f64 {
    let w = omega1.min(0.0);
    w - w.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtParameters {
    pub p: f64,
    pub omega: Option<f64>,
    pub omega_prime: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: f64,
    pub bands: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtReport {
    pub theorem: Theorem,
    pub lhs: f64,
    pub rhs_structure: f64,
    /// `lhs / rhs_structure`; `0` when both vanish, `None` when only the right side does.
    pub empirical_ratio: Option<f64>,
    pub parameters: LtParameters,
    /// Candidates that entered the sum.
    pub eigenvalue_count: usize,
    /// Candidates dropped as boundary artifacts.
    pub artifacts_excluded: usize,
    /// For the accretive sum: the `|z| < 1` and `|z| ≥ 1` parts.
    pub split: Option<(f64, f64)>,
}

fn ratio(lhs: f64, rhs: f64) -> Option<f64> {
    if rhs > 0.0 {
        Some(lhs / rhs)
    } else if lhs == 0.0 {
        Some(0.0)
    } else {
        None
    }
}

fn check_p(p: f64, min: f64, range: &'static str) -> Result<(), LtError> {
    if p >= min && p.is_finite() {
        Ok(())
    } else {
        Err(LtError::BadExponent { p, range })
    }
}

fn build(
    theorem: Theorem,
    report: &SpectrumReport,
    lhs: f64,
    rhs: f64,
    parameters: LtParameters,
    split: Option<(f64, f64)>,
) -> LtReport {
    LtReport {
        theorem,
        lhs,
        rhs_structure: rhs,
        empirical_ratio: ratio(lhs, rhs),
        parameters,
        eigenvalue_count: report.genuine().count(),
        artifacts_excluded: report.artifact_count(),
        split,
    }
}

fn params(report: &SpectrumReport, p: f64) -> LtParameters {
    LtParameters {
        p,
        omega: None,
        omega_prime: None,
        epsilon: None,
        delta: report.delta,
        bands: report.band_set.digest(),
    }
}

/// `Σ dist^p(z, I) / (|z−ω| + |ω|)^{2p}` against
/// `‖V‖_p^p / ((ω₁−ω)^p |ω|^{p−1/2}) · (1 + ‖V₀‖_∞/(a₁+|ω|))^p`.
pub fn lt_sum_t1(report: &SpectrumReport, ctx: &LtContext, omega: f64) -> Result<LtReport, LtError> {
    let p = ctx.norms.p;
    check_p(p, 2.0, "p ≥ 2")?;
    if !(omega < ctx.omega1 && omega < 0.0) {
        return Err(LtError::OmegaOrder {
            omega,
            omega1: ctx.omega1,
            requirement: "ω < min(ω₁, 0)",
        });
    }
    let w = omega.abs();
    let lhs = report
        .genuine()
        .map(|c| c.dist.powf(p) / ((c.z - omega).norm() + w).powf(2.0 * p))
        .sum();
    let nb = &ctx.norms;
    let rhs = nb.v_p.powf(p) / ((ctx.omega1 - omega).powf(p) * w.powf(p - 0.5))
        * (1.0 + nb.v0_inf / (ctx.a1 + w)).powf(p);
    let mut parameters = params(report, p);
    parameters.omega = Some(omega);
    Ok(build(Theorem::Shifted, report, lhs, rhs, parameters, None))
}

/// `Σ dist^p(z, I) / (1+|z|)^{2p}` against `|ω|^{p+1/2} (1+‖V₀‖_∞)^p ‖V‖_p^p`.
pub fn lt_sum_t1_simplified(
    report: &SpectrumReport,
    ctx: &LtContext,
    omega: f64,
) -> Result<LtReport, LtError> {
    let p = ctx.norms.p;
    check_p(p, 2.0, "p ≥ 2")?;
    if !(omega < ctx.omega1 - 1.0 && omega < 0.0) {
        return Err(LtError::OmegaOrder {
            omega,
            omega1: ctx.omega1,
            requirement: "ω < min(ω₁ − 1, 0)",
        });
    }
    let lhs = unit_kernel_sum(report, p);
    let nb = &ctx.norms;
    let rhs = omega.abs().powf(p + 0.5) * (1.0 + nb.v0_inf).powf(p) * nb.v_p.powf(p);
    let mut parameters = params(report, p);
    parameters.omega = Some(omega);
    Ok(build(Theorem::ShiftedSimplified, report, lhs, rhs, parameters, None))
}

fn unit_kernel_sum(report: &SpectrumReport, p: f64) -> f64 {
    report
        .genuine()
        .map(|c| c.dist.powf(p) / (1.0 + c.z.norm()).powf(2.0 * p))
        .sum()
}

/// `Σ dist^p(z, I) / (1+|z|)^{2p}` against
/// `(1+‖V₀‖_∞)^p (1+‖V‖_p)^{p(2p+1)/(2p−1)} ‖V‖_p^p`.
pub fn lt_sum_t2(report: &SpectrumReport, ctx: &LtContext) -> Result<LtReport, LtError> {
    let p = ctx.norms.p;
    check_p(p, 2.0, "p ≥ 2")?;
    let nb = &ctx.norms;
    let lhs = unit_kernel_sum(report, p);
    let growth = p * (2.0 * p + 1.0) / (2.0 * p - 1.0);
    let rhs = (1.0 + nb.v0_inf).powf(p) * (1.0 + nb.v_p).powf(growth) * nb.v_p.powf(p);
    let mut parameters = params(report, p);
    parameters.omega_prime = Some(omega_prime(ctx.a1, nb.v0_inf, nb));
    Ok(build(Theorem::OmegaFree, report, lhs, rhs, parameters, None))
}

/// Kernel exponent for the accretive sum; `|z| = 1` belongs to the outer part.
pub fn accretive_exponent(z: Complex64, epsilon: f64) -> f64 {
    if z.norm() < 1.0 {
        0.5 - epsilon
    } else {
        0.5 + epsilon
    }
}

/// `Σ_{|z|<1} dist^p/|z|^{1/2−ε} + Σ_{|z|≥1} dist^p/|z|^{1/2+ε}` against `‖V‖_p^p`.
pub fn lt_sum_t3(
    report: &SpectrumReport,
    ctx: &LtContext,
    epsilon: f64,
) -> Result<LtReport, LtError> {
    let p = ctx.norms.p;
    if !(p > 1.0) {
        return Err(LtError::BadExponent { p, range: "p > 1" });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(LtError::BadEpsilon(epsilon));
    }
    if ctx.min_re_v < 0.0 {
        return Err(LtError::NotAccretive {
            index: ctx.min_re_v_index,
            re: ctx.min_re_v,
        });
    }
    let (mut inner, mut outer) = (0.0, 0.0);
    for c in report.genuine() {
        let term = c.dist.powf(p) / c.z.norm().powf(accretive_exponent(c.z, epsilon));
        if c.z.norm() < 1.0 {
            inner += term;
        } else {
            outer += term;
        }
    }
    let rhs = ctx.norms.v_p.powf(p);
    let mut parameters = params(report, p);
    parameters.epsilon = Some(epsilon);
    Ok(build(
        Theorem::Accretive,
        report,
        inner + outer,
        rhs,
        parameters,
        Some((inner, outer)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub a: f64,
    pub lhs: f64,
    pub rhs_structure: f64,
    pub empirical_ratio: Option<f64>,
}

/// `Σ dist^p(z, I)/(|z| + a)^{2p}` against `a^{−(2p−1/2)} ‖V‖_p^p` for each `a > 0`.
pub fn accretive_profile(report: &SpectrumReport, ctx: &LtContext, a_values: &[f64]) -> Vec<ProfileRow> {
    let p = ctx.norms.p;
    a_values
        .iter()
        .map(|&a| {
            let lhs = report
                .genuine()
                .map(|c| c.dist.powf(p) / (c.z.norm() + a).powf(2.0 * p))
                .sum();
            let rhs = a.powf(-(2.0 * p - 0.5)) * ctx.norms.v_p.powf(p);
            ProfileRow {
                a,
                lhs,
                rhs_structure: rhs,
                empirical_ratio: ratio(lhs, rhs),
            }
        })
        .collect()
}

/// `Σ_{λ ∈ σ(A₀+B)} dist^p(λ, σ(A₀)) / ‖B‖_{S_p}^p` for diagonal `A₀`;
/// `None` when `B = 0`.
pub fn hansmann_ratio(a0: &[f64], b: &Mat<Complex64>, p: f64) -> Result<Option<f64>, LtError> {
    let n = a0.len();
    let s = singular_values(b)?;
    let b_norm = norm_from_singular_values(&s, p);
    if b_norm == 0.0 {
        return Ok(None);
    }
    let a = Mat::from_fn(n, n, |i, j| {
        let d = if i == j { Complex64::new(a0[i], 0.0) } else { Complex64::new(0.0, 0.0) };
        d + b[(i, j)]
    });
    let eigs = matrix_eigenvalues(&a)?;
    let reference: Vec<Complex64> = a0.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let sum = spectral_distance_sum(&eigs, &reference, p);
    Ok(Some(sum / b_norm.powf(p)))
}

/// `Σ_λ min_μ |λ − μ|^p` with `λ` over `eigs` and `μ` over `reference`.
pub fn spectral_distance_sum(eigs: &[Complex64], reference: &[Complex64], p: f64) -> f64 {
    eigs.iter()
        .map(|l| {
            reference
                .iter()
                .map(|m| (l - m).norm())
                .fold(f64::INFINITY, f64::min)
                .powf(p)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HansmannReport {
    pub n: usize,
    pub trials: usize,
    pub p: f64,
    pub scale: f64,
    pub seed: u64,
    pub generator: String,
    /// Finite ratios in trial order.
    pub ratios: Vec<f64>,
    pub degenerate: usize,
    pub failed: usize,
    pub min: Option<f64>,
    pub median: Option<f64>,
    /// Empirical lower estimate of the constant.
    pub max: Option<f64>,
}

/// One ensemble draw: `A₀` real diagonal with standard normal entries, `B` with
/// i.i.d. complex Gaussian entries rescaled to `‖B‖_{S_p} = scale`.
pub fn hansmann_draw(n: usize, p: f64, scale: f64, seed: u64, trial: u64) -> Result<(Vec<f64>, Mat<Complex64>), LtError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let a0: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let raw = Mat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let norm = norm_from_singular_values(&singular_values(&raw)?, p);
    let factor = if norm > 0.0 { scale / norm } else { 0.0 };
    Ok((a0, Mat::from_fn(n, n, |i, j| raw[(i, j)] * factor)))
}

pub fn hansmann_ensemble(
    n: usize,
    trials: usize,
    p: f64,
    scale: f64,
    seed: u64,
) -> Result<HansmannReport, LtError> {
    if n < 2 {
        return Err(LtError::TooSmall(n));
    }
    if !(p > 1.0) {
        return Err(LtError::BadExponent { p, range: "p > 1" });
    }
    let outcomes: Vec<Result<Option<f64>, LtError>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let (a0, b) = hansmann_draw(n, p, scale, seed, t)?;
            hansmann_ratio(&a0, &b, p)
        })
        .collect();
    let mut ratios = Vec::with_capacity(trials);
    let (mut degenerate, mut failed) = (0, 0);
    for o in outcomes {
        match o {
            Ok(Some(r)) if r.is_finite() => ratios.push(r),
            Ok(Some(_)) | Err(_) => failed += 1,
            Ok(None) => degenerate += 1,
        }
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.is_empty() {
        None
    } else if sorted.len() % 2 == 1 {
        Some(sorted[sorted.len() / 2])
    } else {
        let m = sorted.len() / 2;
        Some(0.5 * (sorted[m - 1] + sorted[m]))
    };
    Ok(HansmannReport {
        n,
        trials,
        p,
        scale,
        seed,
        generator: GENERATOR.to_string(),
        min: sorted.first().copied(),
        median,
        max: sorted.last().copied(),
        ratios,
        degenerate,
        failed,
    })
}

/// Draws `A₀ = diag(0, 1, …, n−1)` and a diagonal `B` with `|b_j| < 1/2`, for
/// which the eigenvalue-distance sum equals `‖B‖_{S_p}^p`.
pub fn commuting_pair(n: usize, seed: u64) -> (Vec<f64>, Mat<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0: Vec<f64> = (0..n).map(|j| j as f64).collect();
    let entries: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(0.49 * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>()))
        .collect();
    let b = Mat::from_fn(n, n, |i, j| if i == j { entries[i] } else { Complex64::new(0.0, 0.0) });
    (a0, b)
}

/// Link-by-link check of the resolvent chain behind the shifted sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub omega: f64,
    pub p: f64,
    /// Which distortion bound was used for the per-eigenvalue link.
    pub distortion_variant: String,
    pub distortion_checked: usize,
    /// Candidates right of the last band of a complete set, where no bound applies.
    pub distortion_skipped: usize,
    pub distortion_violations: usize,
    /// Smallest observed `ratio / bound` over the candidates.
    pub distortion_min_quotient: Option<f64>,
    /// `Σ dist^p(λ_ω(z), λ_ω(I))` over the candidates.
    pub image_sum: f64,
    /// `Σ_{λ ∈ σ(R_H)} dist^p(λ, σ(R_{H₀}))` over all eigenvalues.
    pub hansmann_sum: f64,
    /// `‖R_H(ω) − R_{H₀}(ω)‖_{S_p}^p`.
    pub resolvent_diff_pow: f64,
    pub hansmann_ratio: Option<f64>,
    /// `‖R_H(ω)‖`.
    pub resolvent_norm: f64,
    /// `1/(ω₁ − ω)`.
    pub resolvent_bound: f64,
    /// `‖V·R_{H₀}(ω)‖_{S_p}^p`.
    pub w_pow: f64,
    /// `‖R_H‖^p · ‖W‖_{S_p}^p`, which dominates `resolvent_diff_pow`.
    pub holder_rhs: f64,
    /// Analytic bound on `resolvent_diff_pow` with constant `C₁(p)^p`.
    pub analytic_bound: f64,
    /// `resolvent_diff_pow / analytic_bound`.
    pub analytic_margin: Option<f64>,
    pub lhs: f64,
    /// `lhs / resolvent_diff_pow`.
    pub composite: Option<f64>,
}

impl ChainReport {
    pub fn resolvent_link_holds(&self, tol: f64) -> bool {
        self.resolvent_norm <= self.resolvent_bound * (1.0 + tol)
    }

    pub fn holder_link_holds(&self, tol: f64) -> bool {
        self.resolvent_diff_pow <= self.holder_rhs * (1.0 + tol)
    }
}

/// Walks the chain for `H = op` and `H₀ = op.unperturbed()` at the real shift `ω`.
pub fn shifted_chain(
    op: &DiscretizedOperator,
    report: &SpectrumReport,
    ctx: &LtContext,
    omega: f64,
) -> Result<ChainReport, LtError> {
    let p = ctx.norms.p;
    let t1 = lt_sum_t1(report, ctx, omega)?;
    let bands = &report.band_set;
    let map = MoebiusMap::new(omega);

    let variant = match bands.gap_ratio() {
        Ok(_) => None,
        Err(BandSetError::NoGaps) => Some(()),
        Err(e) => return Err(e.into()),
    };
    let mut distortion_checked = 0;
    let mut distortion_violations = 0;
    let mut distortion_min_quotient: Option<f64> = None;
    let mut image_sum = 0.0;
    let mut distortion_skipped = 0;
    for c in report.genuine() {
        if bands.locate(c.z.re) == crate::bandset::Location::Beyond {
            distortion_skipped += 1;
            continue;
        }
        let bound_kind = match variant {
            None => DistortionBound::Uniform,
            Some(()) => match bands.locate(c.z.re) {
                crate::bandset::Location::Gap(k) => DistortionBound::Gap(k),
                _ => DistortionBound::HalfPlane,
            },
        };
        let r = distortion_ratio(c.z, bands, &map)?;
        let b = distortion_bound(c.z, bands, &map, bound_kind)?;
        distortion_checked += 1;
        if r < b * (1.0 - BOUND_REL_TOL) {
            distortion_violations += 1;
        }
        let q = r / b;
        distortion_min_quotient = Some(distortion_min_quotient.map_or(q, |m: f64| m.min(q)));
        image_sum += (r * c.dist).powf(p);
    }

    let h0 = op.unperturbed();
    let z = Complex64::new(omega, 0.0);
    let r_h = op.resolvent(z)?;
    let r_h0 = h0.resolvent(z)?;
    let n = op.size();
    let diff = Mat::from_fn(n, n, |i, j| r_h[(i, j)] - r_h0[(i, j)]);
    let resolvent_diff_pow = norm_from_singular_values(&singular_values(&diff)?, p).powf(p);

    let to_image = |x: Complex64| (x - omega).inv();
    let image_h: Vec<Complex64> = op.eigenvalues()?.iter().map(|&x| to_image(x)).collect();
    let image_h0: Vec<Complex64> = h0
        .self_adjoint_eigenvalues()?
        .into_iter()
        .map(|x| to_image(Complex64::new(x, 0.0)))
        .collect();
    let hansmann_sum = spectral_distance_sum(&image_h, &image_h0, p);

    let resolvent_norm = singular_values(&r_h)?.into_iter().fold(0.0, f64::max);
    let v = op.perturbation();
    let w = Mat::from_fn(n, n, |i, j| v[i] * r_h0[(i, j)]);
    let w_pow = norm_from_singular_values(&singular_values(&w)?, p).powf(p);
    let analytic = resolvent_diff_bound(omega, ctx.omega1, &ctx.norms, ctx.a1)?;

    Ok(ChainReport {
        omega,
        p,
        distortion_variant: match variant {
            None => "uniform".into(),
            Some(()) => "regional".into(),
        },
        distortion_checked,
        distortion_skipped,
        distortion_violations,
        distortion_min_quotient,
        image_sum,
        hansmann_sum,
        resolvent_diff_pow,
        hansmann_ratio: ratio(hansmann_sum, resolvent_diff_pow),
        resolvent_norm,
        resolvent_bound: 1.0 / (ctx.omega1 - omega),
        w_pow,
        holder_rhs: resolvent_norm.powf(p) * w_pow,
        analytic_bound: analytic.value,
        analytic_margin: ratio(resolvent_diff_pow, analytic.value),
        lhs: t1.lhs,
        composite: ratio(t1.lhs, resolvent_diff_pow),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::classify_discrete;

    fn ctx(p: f64, v_p: f64, omega1: f64) -> LtContext {
        LtContext {
            norms: NormBundle::new(p, v_p, 0.0).unwrap(),
            omega1,
            a1: 0.0,
            min_re_v: 0.0,
            min_re_v_index: 0,
        }
    }

    fn report(bands: &[(f64, f64)], eigs: &[Complex64]) -> SpectrumReport {
        classify_discrete(eigs, &BandSet::new(bands).unwrap(), 1e-6).unwrap()
    }

    #[test]
    fn empty_spectrum_sums_vanish() {
        let r = report(&[(0.0, 1.0), (2.0, 3.0)], &[]);
        let c = ctx(2.0, 1.0, 0.0);
        assert_eq!(lt_sum_t1(&r, &c, -1.0).unwrap().lhs, 0.0);
        assert_eq!(lt_sum_t1_simplified(&r, &c, -2.0).unwrap().lhs, 0.0);
        assert_eq!(lt_sum_t3(&r, &c, 0.5).unwrap().lhs, 0.0);
        let t2 = lt_sum_t2(&r, &c.clone()).unwrap();
        assert_eq!(t2.lhs, 0.0);
        assert_eq!(t2.empirical_ratio, Some(0.0));
    }

    #[test]
    fn single_term_values() {
        let r = report(&[(0.0, 1.0), (2.0, 3.0)], &[Complex64::new(1.0, 1.0)]);
        let t1 = lt_sum_t1(&r, &ctx(2.0, 1.0, 0.0), -1.0).unwrap();
        let expected = 1.0 / (5f64.sqrt() + 1.0).powi(4);
        assert!((t1.lhs - expected).abs() < 1e-15);

        let r = report(&[(0.0, 2.0), (4.0, 5.0)], &[Complex64::new(3.0, 0.0)]);
        let t = lt_sum_t1_simplified(&r, &ctx(2.0, 1.0, 0.0), -2.0).unwrap();
        assert!((t.lhs - 1.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn t3_split_and_boundary_convention() {
        let r = report(&[(1.0, 2.0), (3.0, 4.0)], &[Complex64::new(0.0, 1.0), Complex64::new(0.25, 0.0)]);
        let t = lt_sum_t3(&r, &ctx(2.0, 1.0, 0.0), 0.5).unwrap();
        let (inner, outer) = t.split.unwrap();
        // 0.25 is 0.75 away from [1, 2]; kernel exponent 0 inside the disc.
        assert!((inner - 0.75f64.powi(2)).abs() < 1e-15);
        // i has |z| = 1, so it is in the outer part with exponent 1.
        assert!((outer - 2.0).abs() < 1e-14);
    }

    #[test]
    fn t3_rejects_non_accretive_and_bad_epsilon() {
        let r = report(&[(0.0, 1.0), (2.0, 3.0)], &[]);
        let mut c = ctx(2.0, 1.0, 0.0);
        assert!(matches!(lt_sum_t3(&r, &c, 1.0), Err(LtError::BadEpsilon(_))));
        c.min_re_v = -0.1;
        assert!(matches!(lt_sum_t3(&r, &c, 0.5), Err(LtError::NotAccretive { .. })));
    }

    #[test]
    fn omega_preconditions() {
        let r = report(&[(0.0, 1.0), (2.0, 3.0)], &[]);
        let c = ctx(2.0, 1.0, 0.0);
        assert!(lt_sum_t1(&r, &c, 0.5).is_err());
        assert!(lt_sum_t1_simplified(&r, &c, -0.5).is_err());
        assert_eq!(default_omega(0.3), -1.0);
        assert_eq!(default_omega(-3.0), -6.0);
        assert_eq!(default_omega(-0.5), -1.5);
    }

    #[test]
    fn t2_growth_exponent_at_two() {
        let r = report(&[(0.0, 1.0), (2.0, 3.0)], &[]);
        let t = lt_sum_t2(&r, &ctx(2.0, 1.0, 0.0)).unwrap();
        assert!((t.rhs_structure - 2f64.powf(10.0 / 3.0)).abs() < 1e-12);
        assert!((t.parameters.omega_prime.unwrap() - omega_prime(0.0, 0.0, &NormBundle::new(2.0, 1.0, 0.0).unwrap())).abs() == 0.0);
    }

    #[test]
    fn commuting_diagonal_ratio_is_one() {
        let a0 = [0.0, 1.0];
        let b = Mat::from_fn(2, 2, |i, j| {
            if (i, j) == (1, 1) { Complex64::new(0.1, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let r = hansmann_ratio(&a0, &b, 2.0).unwrap().unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let zero = Mat::<Complex64>::zeros(2, 2);
        assert_eq!(hansmann_ratio(&a0, &zero, 2.0).unwrap(), None);
    }

    #[test]
    fn ensemble_is_seeded() {
        let a = hansmann_ensemble(6, 5, 2.0, 0.5, 7).unwrap();
        let b = hansmann_ensemble(6, 5, 2.0, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ratios.len(), 5);
        assert!(a.min.unwrap() <= a.median.unwrap() && a.median.unwrap() <= a.max.unwrap());
        let z = hansmann_ensemble(4, 3, 2.0, 0.0, 1).unwrap();
        assert_eq!(z.degenerate, 3);
    }
}
