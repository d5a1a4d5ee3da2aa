//! The map `λ_ω(z) = 1/(z − ω)` and lower bounds on how much it can shrink
//! distances to a band set.
//!
//! For `ω < a_1` the image of `[a_k, b_k]` is `[1/(b_k − ω), 1/(a_k − ω)]`, so
//! later bands land closer to the origin and the images accumulate at 0. The
//! quantity of interest is the distortion ratio
//!
//! ```text
//! dist(λ_ω(z), λ_ω(I)) / dist(z, I)
//! ```
//!
//! which is bounded from below by three explicit expressions depending on
//! where `Re z` sits (see [`DistortionBound`]).

use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandset::{BandSet, BandSetError, Location};

/// Relative tolerance used when comparing an observed ratio against a bound.
pub const BOUND_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoebiusError {
    #[error("z coincides with the pole ω = {0}")]
    Pole(f64),
    #[error("ω = {omega} must lie strictly below a_1 = {a1}")]
    OmegaNotBelowSpectrum { omega: f64, a1: f64 },
    #[error("the uniform bound requires ω ≤ 0, got ω = {0}")]
    OmegaPositive(f64),
    #[error("z = {0} lies in the band set, distortion ratio undefined")]
    InBand(Complex64),
    #[error("{variant:?} bound requires {admissible}, but Re z = {re}")]
    RegionMismatch {
        variant: DistortionBound,
        re: f64,
        admissible: String,
    },
    #[error(transparent)]
    Bands(#[from] BandSetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    omega: f64,
}

impl MoebiusMap {
    pub fn new(omega: f64) -> Self {
        Self { omega }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64, MoebiusError> {
        let w = z - self.omega;
        if w == Complex64::new(0.0, 0.0) {
            return Err(MoebiusError::Pole(self.omega));
        }
        Ok(w.inv())
    }

    fn check_below(&self, bands: &BandSet) -> Result<(), MoebiusError> {
        if self.omega < bands.bottom() {
            Ok(())
        } else {
            Err(MoebiusError::OmegaNotBelowSpectrum {
                omega: self.omega,
                a1: bands.bottom(),
            })
        }
    }
}

/// Image `λ_ω(I)` of a band set: interval `k` is `[β_k, α_k]`, the image of
/// band `k`, so the list runs from the interval farthest from 0 to the nearest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoebiusImage {
    intervals: Vec<(f64, f64)>,
    /// `1/(a_{K+1} − ω)`: the terminal ray maps onto `(0, α_{K+1}]`.
    ray_image: Option<f64>,
    accumulation_at_zero: bool,
}

impl MoebiusImage {
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn ray_image(&self) -> Option<f64> {
        self.ray_image
    }

    pub fn accumulation_at_zero(&self) -> bool {
        self.accumulation_at_zero
    }

    /// Marks the image as that of a conceptually infinite band set, adding
    /// the accumulation point 0 to distance queries.
    pub fn with_accumulation(mut self, accumulate: bool) -> Self {
        self.accumulation_at_zero = accumulate || self.ray_image.is_some();
        self
    }
}

pub fn image_bands(bands: &BandSet, map: &MoebiusMap) -> Result<MoebiusImage, MoebiusError> {
    map.check_below(bands)?;
    let w = map.omega;
    let intervals = bands
        .bands()
        .iter()
        .map(|&(a, b)| (1.0 / (b - w), 1.0 / (a - w)))
        .collect();
    let ray_image = bands.terminal_ray().map(|r| 1.0 / (r - w));
    Ok(MoebiusImage {
        intervals,
        ray_image,
        accumulation_at_zero: ray_image.is_some(),
    })
}

fn dist_to_segment(z: Complex64, lo: f64, hi: f64) -> f64 {
    let dx = if z.re < lo {
        lo - z.re
    } else if z.re > hi {
        z.re - hi
    } else {
        0.0
    };
    dx.hypot(z.im)
}

pub fn dist_to_image(lambda: Complex64, image: &MoebiusImage) -> f64 {
    let mut d = image
        .intervals
        .iter()
        .map(|&(lo, hi)| dist_to_segment(lambda, lo, hi))
        .fold(f64::INFINITY, f64::min);
    if let Some(top) = image.ray_image {
        d = d.min(dist_to_segment(lambda, 0.0, top));
    }
    if image.accumulation_at_zero {
        d = d.min(lambda.norm());
    }
    d
}

/// `dist(λ_ω(z), λ_ω(I)) / dist(z, I)` for `z ∉ I`.
pub fn distortion_ratio(
    z: Complex64,
    bands: &BandSet,
    map: &MoebiusMap,
) -> Result<f64, MoebiusError> {
    let image = image_bands(bands, map)?;
    ratio_with_image(z, bands, map, &image)
}

fn ratio_with_image(
    z: Complex64,
    bands: &BandSet,
    map: &MoebiusMap,
    image: &MoebiusImage,
) -> Result<f64, MoebiusError> {
    let denom = bands.dist(z)?;
    if denom == 0.0 {
        return Err(MoebiusError::InBand(z));
    }
    let lambda = map.apply(z)?;
    Ok(dist_to_image(lambda, image) / denom)
}

/// Which lower bound on the distortion ratio to evaluate.
///
/// * `HalfPlane`: `Re z < a_1` or `Re z ∈ I`;
///   bound `1 / (3|z−ω|(|z−ω| + a_1 − ω))`.
/// * `Gap(k)`: `b_k < Re z < a_{k+1}` (zero-based gap index, see
///   [`Location::Gap`]); bound `(1/(2|z−ω|²)) · (1 + r_k/(b_k − ω))⁻¹`.
/// * `Uniform`: any `z ∉ I`, needs `ω ≤ 0` and at least one gap;
///   bound `1/(5(1 + r(I))) · 1/(|z−ω|(|z−ω| + a_1 − ω))`.
///
/// A real part equal to a band edge counts as over the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionBound {
    HalfPlane,
    Gap(usize),
    Uniform,
}

pub fn distortion_bound(
    z: Complex64,
    bands: &BandSet,
    map: &MoebiusMap,
    variant: DistortionBound,
) -> Result<f64, MoebiusError> {
    map.check_below(bands)?;
    let omega = map.omega;
    let w = (z - omega).norm();
    let shift = bands.bottom() - omega;
    let location = bands.locate(z.re);
    if location == Location::Beyond && bands.is_complete() {
        return Err(MoebiusError::RegionMismatch {
            variant,
            re: z.re,
            admissible: format!("Re z ≤ b_K = {}", bands.last_edge()),
        });
    }
    if location == Location::Beyond {
        return Err(BandSetError::OutsideValidity {
            re: z.re,
            cap: bands.validity_cap(),
        }
        .into());
    }
    match variant {
        DistortionBound::HalfPlane => match location {
            Location::Below | Location::Band(_) => Ok(1.0 / (3.0 * w * (w + shift))),
            _ => Err(MoebiusError::RegionMismatch {
                variant,
                re: z.re,
                admissible: "Re z < a_1 or Re z in a band".into(),
            }),
        },
        DistortionBound::Gap(k) => {
            if location != Location::Gap(k) {
                let (b, a_next) = bands.gaps().nth(k).unwrap_or((f64::NAN, f64::NAN));
                return Err(MoebiusError::RegionMismatch {
                    variant,
                    re: z.re,
                    admissible: format!("{b} < Re z < {a_next}"),
                });
            }
            let (b, a_next) = bands.gaps().nth(k).expect("located gap exists");
            let rel_gap = (a_next - b) / (b - omega);
            Ok(1.0 / (2.0 * w * w * (1.0 + rel_gap)))
        }
        DistortionBound::Uniform => {
            if omega > 0.0 {
                return Err(MoebiusError::OmegaPositive(omega));
            }
            let r = bands.gap_ratio()?;
            Ok(1.0 / (5.0 * (1.0 + r) * w * (w + shift)))
        }
    }
}

/// Source of trial points for [`verify_distortion`].
pub trait PointSampler {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Complex64;
}

impl<F: FnMut(&mut dyn RngCore) -> Complex64> PointSampler for F {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Complex64 {
        self(rng)
    }
}

/// `|z − center|` log-uniform on `[r_min, r_max]`, argument uniform.
#[derive(Debug, Clone, Copy)]
pub struct LogPolarSampler {
    pub center: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl LogPolarSampler {
    pub fn around(center: f64) -> Self {
        Self {
            center,
            r_min: 1e-3,
            r_max: 1e3,
        }
    }
}

impl PointSampler for LogPolarSampler {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Complex64 {
        let (lo, hi) = (self.r_min.ln(), self.r_max.ln());
        let r = (lo + (hi - lo) * rng.random::<f64>()).exp();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        Complex64::from_polar(r, theta) + self.center
    }
}

/// `Re z` uniform on `(x_min, x_max)`, `|Im z|` log-uniform on
/// `[y_min, y_max]` with a random sign.
#[derive(Debug, Clone, Copy)]
pub struct StripSampler {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl PointSampler for StripSampler {
    fn sample(&mut self, rng: &mut dyn RngCore) -> Complex64 {
        let x = self.x_min + (self.x_max - self.x_min) * rng.random::<f64>();
        let (lo, hi) = (self.y_min.ln(), self.y_max.ln());
        let y = (lo + (hi - lo) * rng.random::<f64>()).exp();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        Complex64::new(x, sign * y)
    }
}

/// Default trial points for each bound: log-polar around `ω` for the uniform
/// bound, a strip over `[2ω − b_K, b_K]` for the half-plane bound and a strip
/// over the gap itself for a gap bound.
pub fn region_sampler(
    bands: &BandSet,
    map: &MoebiusMap,
    variant: DistortionBound,
) -> Box<dyn PointSampler + Send> {
    let omega = map.omega;
    let top = bands.last_edge();
    match variant {
        DistortionBound::Uniform => Box::new(LogPolarSampler::around(omega)),
        DistortionBound::HalfPlane => Box::new(StripSampler {
            x_min: omega - (top - omega),
            x_max: top,
            y_min: 1e-3,
            y_max: 1e3,
        }),
        DistortionBound::Gap(k) => {
            let (lo, hi) = bands.gaps().nth(k).unwrap_or((top, top));
            Box::new(StripSampler {
                x_min: lo,
                x_max: hi,
                y_min: 1e-4,
                y_max: 1e3,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub z: [f64; 2],
    pub ratio: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples: usize,
    pub rejected: usize,
    pub violations: Vec<Violation>,
    /// Smallest `ratio / bound` seen; `None` when nothing was accepted.
    pub min_quotient: Option<f64>,
    /// Accepted points with `ratio / bound < 1 + 1e-9`.
    pub near_equality: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws points until `n` of them fall in the admissible region of `variant`
/// (outside `I`, inside the validity cap) and checks the distortion ratio
/// against the bound at each. Rejected draws are counted; the loop gives up
/// after `1000·n + 1000` draws.
pub fn verify_distortion(
    bands: &BandSet,
    map: &MoebiusMap,
    variant: DistortionBound,
    sampler: &mut dyn PointSampler,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<VerificationReport, MoebiusError> {
    let image = image_bands(bands, map)?;
    if variant == DistortionBound::Uniform {
        if map.omega > 0.0 {
            return Err(MoebiusError::OmegaPositive(map.omega));
        }
        bands.gap_ratio()?;
    }
    let mut report = VerificationReport {
        samples: 0,
        rejected: 0,
        violations: Vec::new(),
        min_quotient: None,
        near_equality: 0,
    };
    let max_draws = 1000 * n + 1000;
    let mut draws = 0;
    while report.samples < n && draws < max_draws {
        draws += 1;
        let z = sampler.sample(rng);
        let ratio = match ratio_with_image(z, bands, map, &image) {
            Ok(r) => r,
            Err(_) => {
                report.rejected += 1;
                continue;
            }
        };
        let bound = match distortion_bound(z, bands, map, variant) {
            Ok(b) => b,
            Err(_) => {
                report.rejected += 1;
                continue;
            }
        };
        report.samples += 1;
        let q = ratio / bound;
        report.min_quotient = Some(report.min_quotient.map_or(q, |m: f64| m.min(q)));
        if q < 1.0 + 1e-9 {
            report.near_equality += 1;
        }
        if ratio < bound * (1.0 - BOUND_REL_TOL) {
            report.violations.push(Violation {
                z: [z.re, z.im],
                ratio,
                bound,
            });
        }
    }
    Ok(report)
}
