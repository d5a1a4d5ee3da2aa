//! Band spectrum of `−y″ + V₀y = Ey` with a periodic potential, computed from
//! the Floquet monodromy matrix.
//!
//! `E` is in the spectrum iff the discriminant `D(E) = tr M(E)` satisfies
//! `|D| ≤ 2`. Near a narrow gap `D ∓ 2` is a difference of nearly equal
//! numbers, so the edge finder works with `det(M ∓ I) = 2 ∓ D` evaluated from
//! the entries of `M ∓ I`, which are themselves small there. That keeps gaps of
//! width well below `√ε` resolvable.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandset::{BandSet, BandSetError};

/// Bisection tolerance on band edges.
pub const EDGE_TOL: f64 = 1e-10;
/// Gaps shorter than this are treated as closed and merged.
pub const DEGENERATE_GAP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HillError {
    #[error("period must be positive and finite, got {0}")]
    BadPeriod(f64),
    #[error("potential is negative at x = {x} (V₀ = {value}); V₀ ≥ 0 is required")]
    NegativePotential { x: f64, value: f64 },
    #[error("potential is not finite at x = {0}")]
    NonFinitePotential(f64),
    #[error("potential is not periodic at x = {x}: |V₀(x+T) − V₀(x)| = {mismatch}")]
    NotPeriodic { x: f64, mismatch: f64 },
    #[error("at least 100 integration steps are required, got {0}")]
    TooFewSteps(usize),
    #[error("need at least two potential samples, got {0}")]
    TooFewSamples(usize),
    #[error("no band found below E_max = {0}")]
    NoBand(f64),
    #[error("unresolved band edge in [{lo}, {hi}]")]
    UnresolvedEdge { lo: f64, hi: f64 },
    #[error("E_max must be positive, got {0}")]
    BadEnergyRange(f64),
    #[error(transparent)]
    Bands(#[from] BandSetError),
}

#[derive(Clone)]
enum Shape {
    Free,
    Cosine { amplitude: f64, offset: f64 },
    Samples(Arc<[f64]>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A nonnegative periodic potential `V₀` with period `T`.
#[derive(Clone)]
pub struct PeriodicPotential {
    period: f64,
    shape: Shape,
    sup_norm: f64,
}

impl fmt::Debug for PeriodicPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.shape {
            Shape::Free => "free".to_string(),
            Shape::Cosine { amplitude, offset } => format!("cos(amplitude={amplitude}, offset={offset})"),
            Shape::Samples(v) => format!("samples(n={})", v.len()),
            Shape::Custom(_) => "custom".to_string(),
        };
        f.debug_struct("PeriodicPotential")
            .field("period", &self.period)
            .field("shape", &kind)
            .field("sup_norm", &self.sup_norm)
            .finish()
    }
}

fn check_period(period: f64) -> Result<(), HillError> {
    if period > 0.0 && period.is_finite() {
        Ok(())
    } else {
        Err(HillError::BadPeriod(period))
    }
}

impl PeriodicPotential {
    pub fn free(period: f64) -> Result<Self, HillError> {
        check_period(period)?;
        Ok(Self {
            period,
            shape: Shape::Free,
            sup_norm: 0.0,
        })
    }

    /// `V₀(x) = offset + amplitude · cos(2πx/T)`; requires `offset ≥ |amplitude|`.
    pub fn cosine(amplitude: f64, offset: f64, period: f64) -> Result<Self, HillError> {
        check_period(period)?;
        if !amplitude.is_finite() || !offset.is_finite() {
            return Err(HillError::NonFinitePotential(0.0));
        }
        if offset < amplitude.abs() {
            let x = if amplitude > 0.0 { period / 2.0 } else { 0.0 };
            return Err(HillError::NegativePotential {
                x,
                value: offset - amplitude.abs(),
            });
        }
        Ok(Self {
            period,
            shape: Shape::Cosine { amplitude, offset },
            sup_norm: offset + amplitude.abs(),
        })
    }

    /// Uniform samples `V₀(jT/n)`, `j = 0..n`, linearly interpolated with
    /// periodic wrap-around.
    pub fn samples(period: f64, values: Vec<f64>) -> Result<Self, HillError> {
        check_period(period)?;
        if values.len() < 2 {
            return Err(HillError::TooFewSamples(values.len()));
        }
        let h = period / values.len() as f64;
        let mut sup: f64 = 0.0;
        for (j, &v) in values.iter().enumerate() {
            let x = j as f64 * h;
            if !v.is_finite() {
                return Err(HillError::NonFinitePotential(x));
            }
            if v < 0.0 {
                return Err(HillError::NegativePotential { x, value: v });
            }
            sup = sup.max(v);
        }
        Ok(Self {
            period,
            shape: Shape::Samples(values.into()),
            sup_norm: sup,
        })
    }

    /// Closed-form potential. Nonnegativity and periodicity are checked at
    /// `check_points` uniformly spaced points of one period; `‖V₀‖_∞` is
    /// estimated as the maximum over those points.
    pub fn from_fn<F>(period: f64, f: F, check_points: usize) -> Result<Self, HillError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_period(period)?;
        let n = check_points.max(2);
        let mut sup: f64 = 0.0;
        for j in 0..n {
            let x = period * j as f64 / n as f64;
            let v = f(x);
            if !v.is_finite() {
                return Err(HillError::NonFinitePotential(x));
            }
            if v < 0.0 {
                return Err(HillError::NegativePotential { x, value: v });
            }
            let mismatch = (f(x + period) - v).abs();
            if mismatch > 1e-12 * (1.0 + v.abs()) {
                return Err(HillError::NotPeriodic { x, mismatch });
            }
            sup = sup.max(v);
        }
        Ok(Self {
            period,
            shape: Shape::Custom(Arc::new(f)),
            sup_norm: sup,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `‖V₀‖_∞`.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn is_free(&self) -> bool {
        matches!(self.shape, Shape::Free)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Free => 0.0,
            Shape::Cosine { amplitude, offset } => {
                offset + amplitude * (2.0 * PI * x / self.period).cos()
            }
            Shape::Samples(values) => {
                let n = values.len();
                let t = (x / self.period).rem_euclid(1.0) * n as f64;
                let j = (t.floor() as usize).min(n - 1);
                let frac = t - j as f64;
                values[j] * (1.0 - frac) + values[(j + 1) % n] * frac
            }
            Shape::Custom(f) => f(x),
        }
    }
}

/// Fundamental matrix over one period, columns are the solutions with
/// initial data `(1, 0)` and `(0, 1)`:
///
/// ```text
/// M = [[y₁(T), y₂(T)], [y₁′(T), y₂′(T)]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monodromy {
    pub entries: [[f64; 2]; 2],
    pub energy: f64,
}

impl Monodromy {
    pub fn trace(&self) -> f64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> f64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `|det M − 1|`, zero for exact integration.
    pub fn wronskian_defect(&self) -> f64 {
        (self.det() - 1.0).abs()
    }

    /// `det(M − sI)`, equal to `1 − sD + s²` when `det M = 1`.
    fn det_shifted(&self, s: f64) -> f64 {
        let m = &self.entries;
        (m[0][0] - s) * (m[1][1] - s) - m[0][1] * m[1][0]
    }

    /// `det(M − I) = 2 − D`; negative in gaps where `D > 2`.
    pub fn det_minus_identity(&self) -> f64 {
        self.det_shifted(1.0)
    }

    /// `det(M + I) = 2 + D`; negative in gaps where `D < −2`.
    pub fn det_plus_identity(&self) -> f64 {
        self.det_shifted(-1.0)
    }
}

/// A periodic problem whose spectrum is read off a one-period monodromy
/// matrix with unit determinant.
pub trait Floquet: Sync {
    fn period(&self) -> f64;
    fn period_monodromy(&self, energy: f64) -> Result<Monodromy, HillError>;
}

impl Floquet for PeriodicPotential {
    fn period(&self) -> f64 {
        self.period
    }

    fn period_monodromy(&self, energy: f64) -> Result<Monodromy, HillError> {
        monodromy_default(self, energy)
    }
}

/// Grid counterpart of the Hill operator: `(1/h²)(2y_j − y_{j−1} − y_{j+1})
/// + V₀_j y_j` with `V₀` given by one period of samples. Its bands are the
/// exact essential spectrum of the three-point model on the whole line.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeHill {
    samples: Vec<f64>,
    h: f64,
}

impl LatticeHill {
    pub fn new(samples: Vec<f64>, h: f64) -> Result<Self, HillError> {
        if samples.is_empty() {
            return Err(HillError::TooFewSamples(0));
        }
        check_period(h)?;
        for (j, &v) in samples.iter().enumerate() {
            let x = j as f64 * h;
            if !v.is_finite() {
                return Err(HillError::NonFinitePotential(x));
            }
            if v < 0.0 {
                return Err(HillError::NegativePotential { x, value: v });
            }
        }
        Ok(Self { samples, h })
    }

    /// Top of the lattice spectrum is at most `4/h² + max V₀`.
    pub fn spectral_ceiling(&self) -> f64 {
        4.0 / (self.h * self.h) + self.samples.iter().copied().fold(0.0, f64::max)
    }
}

impl Floquet for LatticeHill {
    fn period(&self) -> f64 {
        self.h * self.samples.len() as f64
    }

    /// Product of the site transfer matrices `[[2 + h²(V₀_j − E), −1], [1, 0]]`
    /// acting on `(y_j, y_{j−1})`.
    fn period_monodromy(&self, energy: f64) -> Result<Monodromy, HillError> {
        let h2 = self.h * self.h;
        let mut m = [[1.0, 0.0], [0.0, 1.0]];
        for &v in &self.samples {
            let d = 2.0 + h2 * (v - energy);
            m = [
                [d * m[0][0] - m[1][0], d * m[0][1] - m[1][1]],
                [m[0][0], m[0][1]],
            ];
        }
        Ok(Monodromy {
            entries: m,
            energy,
        })
    }
}

/// Steps per period used by [`discriminant`] and the edge finder.
pub fn default_steps(energy: f64, period: f64) -> usize {
    let scaled = (150.0 * energy.abs().sqrt() * period).ceil();
    (scaled as usize).max(1000)
}

/// Integrates the period problem with classical fixed-step RK4.
pub fn monodromy(
    v0: &PeriodicPotential,
    energy: f64,
    steps: usize,
) -> Result<Monodromy, HillError> {
    if steps < 100 {
        return Err(HillError::TooFewSteps(steps));
    }
    let h = v0.period / steps as f64;
    // state: [y1, y1', y2, y2']
    let mut s = [1.0, 0.0, 0.0, 1.0];
    let deriv = |q: f64, s: &[f64; 4]| [s[1], q * s[0], s[3], q * s[2]];
    let potential = |x: f64| -> Result<f64, HillError> {
        let v = v0.evaluate(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HillError::NonFinitePotential(x))
        }
    };
    let mut q_left = potential(0.0)? - energy;
    for j in 0..steps {
        let x = j as f64 * h;
        let q_mid = potential(x + 0.5 * h)? - energy;
        let q_right = potential(x + h)? - energy;
        let k1 = deriv(q_left, &s);
        let s2 = std::array::from_fn(|i| s[i] + 0.5 * h * k1[i]);
        let k2 = deriv(q_mid, &s2);
        let s3 = std::array::from_fn(|i| s[i] + 0.5 * h * k2[i]);
        let k3 = deriv(q_mid, &s3);
        let s4 = std::array::from_fn(|i| s[i] + h * k3[i]);
        let k4 = deriv(q_right, &s4);
        for i in 0..4 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        q_left = q_right;
    }
    Ok(Monodromy {
        entries: [[s[0], s[2]], [s[1], s[3]]],
        energy,
    })
}

fn monodromy_default(v0: &PeriodicPotential, energy: f64) -> Result<Monodromy, HillError> {
    monodromy(v0, energy, default_steps(energy, v0.period))
}

/// Floquet discriminant `D(E) = tr M(E)`.
pub fn discriminant(v0: &PeriodicPotential, energy: f64) -> Result<f64, HillError> {
    Ok(monodromy_default(v0, energy)?.trace())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    /// `D > 2`.
    Above,
    Band,
    /// `D < −2`.
    Below,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    energy: f64,
    f_plus: f64,
    f_minus: f64,
}

impl Sample {
    fn at(sys: &dyn Floquet, energy: f64) -> Result<Self, HillError> {
        let m = sys.period_monodromy(energy)?;
        Ok(Self {
            energy,
            f_plus: m.det_minus_identity(),
            f_minus: m.det_plus_identity(),
        })
    }

    fn class(&self) -> Class {
        if self.f_plus < 0.0 {
            Class::Above
        } else if self.f_minus < 0.0 {
            Class::Below
        } else {
            Class::Band
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Edge {
    Lower(f64),
    Upper(f64),
}

impl Edge {
    fn energy(&self) -> f64 {
        match *self {
            Edge::Lower(e) | Edge::Upper(e) => e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// `det(M − I)`.
    Plus,
    /// `det(M + I)`.
    Minus,
}

impl Branch {
    fn eval(self, sys: &dyn Floquet, energy: f64) -> Result<f64, HillError> {
        let m = sys.period_monodromy(energy)?;
        Ok(match self {
            Branch::Plus => m.det_minus_identity(),
            Branch::Minus => m.det_plus_identity(),
        })
    }

    fn of(self, s: &Sample) -> f64 {
        match self {
            Branch::Plus => s.f_plus,
            Branch::Minus => s.f_minus,
        }
    }
}

/// Bisects a sign change of `branch` on `[lo, hi]` and returns the endpoint on
/// the band side (where the function is nonnegative).
fn bisect(
    v0: &dyn Floquet,
    branch: Branch,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64, HillError> {
    let (orig_lo, orig_hi) = (lo, hi);
    let f_lo = branch.eval(v0, lo)?;
    let f_hi = branch.eval(v0, hi)?;
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(HillError::UnresolvedEdge {
            lo: orig_lo,
            hi: orig_hi,
        });
    }
    let lo_inside = f_lo >= 0.0;
    while hi - lo > EDGE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let inside = branch.eval(v0, mid)? >= 0.0;
        if inside == lo_inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if lo_inside { lo } else { hi })
}

/// Golden-section minimisation of `branch` on `[lo, hi]`.
fn golden_min(
    v0: &dyn Floquet,
    branch: Branch,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64), HillError> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = branch.eval(v0, x1)?;
    let mut f2 = branch.eval(v0, x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = branch.eval(v0, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = branch.eval(v0, x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

/// A gap shorter than [`DEGENERATE_GAP`] that was closed up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergedGap {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillBands {
    pub bands: BandSet,
    pub merged_gaps: Vec<MergedGap>,
    /// Number of discriminant evaluations on the scan grid.
    pub scan_points: usize,
}

/// Band set of the Hill operator up to `e_max`. See [`band_structure`] for
/// the scan and for the merged-gap metadata.
pub fn band_edges(
    v0: &PeriodicPotential,
    e_max: f64,
    scan_step: Option<f64>,
) -> Result<BandSet, HillError> {
    Ok(band_structure(v0, e_max, scan_step)?.bands)
}

fn scan_grid(v0: &dyn Floquet, e_lo: f64, e_max: f64, scan_step: Option<f64>) -> Vec<f64> {
    let e_ref = (PI / v0.period()).powi(2);
    let mut grid = vec![e_lo];
    let mut e = e_lo;
    while e < e_max {
        let step = match scan_step {
            Some(s) => s,
            None => 1e-2 * e_ref * (e.max(0.0) / e_ref).sqrt().max(1.0),
        };
        e = (e + step).min(e_max);
        grid.push(e);
    }
    grid
}

/// Scans `D(E)` on `[−1, e_max]`, locates every band edge (including gaps too
/// narrow for the scan grid, found from local minima of `det(M ∓ I)`), and
/// merges gaps shorter than [`DEGENERATE_GAP`].
///
/// `scan_step` fixes a constant spacing; by default it starts at
/// `10⁻²·(π/T)²` and grows like `√E`.
pub fn band_structure(
    v0: &PeriodicPotential,
    e_max: f64,
    scan_step: Option<f64>,
) -> Result<HillBands, HillError> {
    floquet_bands(v0, e_max, scan_step)
}

/// [`band_structure`] for any one-period transfer problem.
pub fn floquet_bands(
    v0: &dyn Floquet,
    e_max: f64,
    scan_step: Option<f64>,
) -> Result<HillBands, HillError> {
    if !(e_max > 0.0) || !e_max.is_finite() {
        return Err(HillError::BadEnergyRange(e_max));
    }
    let grid = scan_grid(v0, -1.0, e_max, scan_step);
    let samples: Vec<Sample> = grid
        .par_iter()
        .map(|&e| Sample::at(v0, e))
        .collect::<Result<_, _>>()?;

    let mut edges = Vec::new();
    if samples[0].class() == Class::Band {
        edges.push(Edge::Lower(samples[0].energy));
    }
    for w in samples.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        let (lo, hi) = (l.energy, r.energy);
        match (l.class(), r.class()) {
            (Class::Band, Class::Band) | (Class::Above, Class::Above) | (Class::Below, Class::Below) => {}
            (Class::Above, Class::Band) => edges.push(Edge::Lower(bisect(v0, Branch::Plus, lo, hi)?)),
            (Class::Below, Class::Band) => edges.push(Edge::Lower(bisect(v0, Branch::Minus, lo, hi)?)),
            (Class::Band, Class::Above) => edges.push(Edge::Upper(bisect(v0, Branch::Plus, lo, hi)?)),
            (Class::Band, Class::Below) => edges.push(Edge::Upper(bisect(v0, Branch::Minus, lo, hi)?)),
            (Class::Above, Class::Below) => {
                edges.push(Edge::Lower(bisect(v0, Branch::Plus, lo, hi)?));
                edges.push(Edge::Upper(bisect(v0, Branch::Minus, lo, hi)?));
            }
            (Class::Below, Class::Above) => {
                edges.push(Edge::Lower(bisect(v0, Branch::Minus, lo, hi)?));
                edges.push(Edge::Upper(bisect(v0, Branch::Plus, lo, hi)?));
            }
        }
    }
    // Gaps that open and close between two grid points.
    for w in samples.windows(3) {
        if w.iter().any(|s| s.class() != Class::Band) {
            continue;
        }
        for branch in [Branch::Plus, Branch::Minus] {
            let (a, b, c) = (branch.of(&w[0]), branch.of(&w[1]), branch.of(&w[2]));
            if !(b < a && b <= c) {
                continue;
            }
            let (e_star, f_star) = golden_min(v0, branch, w[0].energy, w[2].energy)?;
            if f_star < 0.0 {
                edges.push(Edge::Upper(bisect(v0, branch, w[0].energy, e_star)?));
                edges.push(Edge::Lower(bisect(v0, branch, e_star, w[2].energy)?));
            }
        }
    }
    if samples[samples.len() - 1].class() == Class::Band {
        edges.push(Edge::Upper(e_max));
    }
    edges.sort_by(|x, y| x.energy().total_cmp(&y.energy()));

    let mut raw = Vec::new();
    let mut iter = edges.chunks(2);
    for pair in &mut iter {
        match pair {
            [Edge::Lower(a), Edge::Upper(b)] if a <= b => raw.push((*a, *b)),
            _ => {
                let lo = pair[0].energy();
                let hi = pair.get(1).map_or(e_max, |e| e.energy());
                return Err(HillError::UnresolvedEdge { lo, hi });
            }
        }
    }
    if raw.is_empty() {
        return Err(HillError::NoBand(e_max));
    }

    let mut merged_gaps = Vec::new();
    let mut bands: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (a, b) in raw {
        match bands.last_mut() {
            Some(last) if a - last.1 < DEGENERATE_GAP => {
                merged_gaps.push(MergedGap {
                    lower: last.1,
                    upper: a,
                });
                last.1 = b;
            }
            _ => bands.push((a, b)),
        }
    }
    // Drop zero-length slivers (a band edge coinciding with e_max).
    bands.retain(|&(a, b)| b > a);
    if bands.is_empty() {
        return Err(HillError::NoBand(e_max));
    }
    // V₀ ≥ 0 puts the spectrum in [0, ∞); a bottom edge within the edge
    // tolerance of zero is zero.
    if bands[0].0.abs() < 10.0 * EDGE_TOL {
        bands[0].0 = 0.0;
    }
    Ok(HillBands {
        bands: BandSet::new(&bands)?,
        merged_gaps,
        scan_points: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_monodromy_examples() {
        let free = PeriodicPotential::free(1.0).unwrap();
        let m = monodromy(&free, PI * PI, 2000).unwrap();
        assert!((m.trace() + 2.0).abs() < 1e-8);
        let m = monodromy(&free, 0.0, 1000).unwrap();
        let expected = [[1.0, 1.0], [0.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.entries[i][j] - expected[i][j]).abs() < 1e-12);
            }
        }
        let m = monodromy(&free, 4.0 * PI * PI, 2000).unwrap();
        assert!((m.trace() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn steps_guard() {
        let free = PeriodicPotential::free(1.0).unwrap();
        assert_eq!(monodromy(&free, 1.0, 99).unwrap_err(), HillError::TooFewSteps(99));
    }

    #[test]
    fn potential_validation() {
        assert!(matches!(
            PeriodicPotential::cosine(2.0, 1.0, 1.0),
            Err(HillError::NegativePotential { .. })
        ));
        assert!(matches!(
            PeriodicPotential::samples(1.0, vec![1.0, -0.5, 2.0]),
            Err(HillError::NegativePotential { .. })
        ));
        assert!(matches!(
            PeriodicPotential::from_fn(1.0, |x| x * x, 64),
            Err(HillError::NotPeriodic { .. })
        ));
        assert!(matches!(
            PeriodicPotential::free(0.0),
            Err(HillError::BadPeriod(_))
        ));
        let cos = PeriodicPotential::cosine(2.0, 2.0, 2.0 * PI).unwrap();
        assert_eq!(cos.sup_norm(), 4.0);
        assert!((cos.evaluate(PI) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn sampled_potential_interpolates_and_wraps() {
        let v = PeriodicPotential::samples(2.0, vec![0.0, 2.0]).unwrap();
        assert_eq!(v.evaluate(0.5), 1.0);
        assert_eq!(v.evaluate(1.5), 1.0);
        assert_eq!(v.evaluate(2.0), 0.0);
        assert_eq!(v.evaluate(-1.0), 2.0);
    }

    #[test]
    fn non_finite_custom_potential_fails() {
        let v = PeriodicPotential {
            period: 1.0,
            shape: Shape::Custom(Arc::new(|x| if x > 0.5 { f64::NAN } else { 0.0 })),
            sup_norm: 0.0,
        };
        assert!(matches!(
            monodromy(&v, 1.0, 100),
            Err(HillError::NonFinitePotential(_))
        ));
    }

    #[test]
    fn free_band_is_single_merged_band() {
        let free = PeriodicPotential::free(1.0).unwrap();
        let out = band_structure(&free, 50.0, None).unwrap();
        assert_eq!(out.bands.len(), 1);
        let (a, b) = out.bands.bands()[0];
        assert!(a.abs() < 1e-9, "a_1 = {a}");
        assert_eq!(b, 50.0);
        assert_eq!(out.bands.validity_cap(), 50.0);
    }

    #[test]
    fn free_lattice_band_is_cosine_band() {
        let h = 0.25;
        let lattice = LatticeHill::new(vec![0.0; 4], h).unwrap();
        let ceiling = lattice.spectral_ceiling();
        assert_eq!(ceiling, 64.0);
        let out = floquet_bands(&lattice, ceiling + 1.0, None).unwrap();
        assert_eq!(out.bands.len(), 1);
        let (a, b) = out.bands.bands()[0];
        assert!(a.abs() < 1e-9 && (b - 64.0).abs() < 1e-9, "[{a}, {b}]");
    }

    #[test]
    fn lattice_monodromy_is_unimodular() {
        let lattice = LatticeHill::new(vec![0.0, 1.0, 3.0, 0.5], 0.3).unwrap();
        for e in [-1.0, 0.0, 2.5, 17.0, 40.0] {
            let m = lattice.period_monodromy(e).unwrap();
            assert!(m.wronskian_defect() < 1e-10);
        }
    }

    #[test]
    fn no_band_below_bottom() {
        let v = PeriodicPotential::cosine(1.0, 5.0, 1.0).unwrap();
        assert_eq!(band_edges(&v, 2.0, None).unwrap_err(), HillError::NoBand(2.0));
    }
}
