//! Finite-difference models of `H₀ = −d²/dx² + V₀` and `H = H₀ + V` on `[0, L]`.
//!
//! The kinetic part is the three-point stencil `(1/h²)·tridiag(−1, 2, −1)`,
//! with corner couplings for periodic ends. Potentials are diagonal.

use std::sync::OnceLock;

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandset::{BandSet, BandSetError};

/// Largest matrix the dense eigensolvers accept by default.
pub const DEFAULT_DENSE_CAP: usize = 4000;
/// Minimum distance between a resolvent shift and the spectrum.
pub const RESOLVENT_GUARD: f64 = 1e-8;
/// Grid points at each end that count towards the boundary mass.
pub const BOUNDARY_LAYER: usize = 5;
/// Boundary mass above which a Dirichlet eigenvector is flagged.
pub const BOUNDARY_MASS_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("need at least 3 grid points, got {0}")]
    TooFewPoints(usize),
    #[error("domain length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("V₀ and V sample counts differ: {v0} vs {v}")]
    LengthMismatch { v0: usize, v: usize },
    #[error("V₀ is negative at grid index {index} (value {value}); V₀ ≥ 0 is required")]
    NegativeBackground { index: usize, value: f64 },
    #[error("non-finite potential sample at grid index {0}")]
    NonFinite(usize),
    #[error("matrix size {n} exceeds the dense solver cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("eigensolver did not converge for a {n}×{n} matrix ({kind})")]
    NoConvergence { n: usize, kind: &'static str },
    #[error("shift z = {z} is within {distance:e} of the eigenvalue {nearest}")]
    NearSingular {
        z: Complex64,
        nearest: Complex64,
        distance: f64,
    },
    #[error("classification threshold δ must be positive, got {0}")]
    BadDelta(f64),
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not self-adjoint (Im V ≠ 0)")]
    NotSelfAdjoint,
    #[error(transparent)]
    Bands(#[from] BandSetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Dirichlet,
    Periodic,
}

impl Boundary {
    pub fn spacing(self, length: f64, n: usize) -> f64 {
        match self {
            Boundary::Dirichlet => length / (n as f64 + 1.0),
            Boundary::Periodic => length / n as f64,
        }
    }
}

/// Sample positions for potentials: the centres of the `n` grid cells of width `h`.
///
/// Dirichlet nodes sit at `h, 2h, …, nh`; periodic nodes at `(j + ½)h`.
pub fn grid_points(length: f64, n: usize, boundary: Boundary) -> Vec<f64> {
    let h = boundary.spacing(length, n);
    match boundary {
        Boundary::Dirichlet => (1..=n).map(|j| j as f64 * h).collect(),
        Boundary::Periodic => (0..n).map(|j| (j as f64 + 0.5) * h).collect(),
    }
}

#[derive(Debug)]
pub struct DiscretizedOperator {
    n: usize,
    h: f64,
    length: f64,
    boundary: Boundary,
    v0: Vec<f64>,
    v: Vec<Complex64>,
    matrix: Mat<Complex64>,
    dense_cap: usize,
    eigen_cache: OnceLock<Vec<Complex64>>,
}

impl Clone for DiscretizedOperator {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(e) = self.eigen_cache.get() {
            let _ = cache.set(e.clone());
        }
        Self {
            n: self.n,
            h: self.h,
            length: self.length,
            boundary: self.boundary,
            v0: self.v0.clone(),
            v: self.v.clone(),
            matrix: self.matrix.clone(),
            dense_cap: self.dense_cap,
            eigen_cache: cache,
        }
    }
}

/// Assembles `kinetic + diag(V₀) + diag(V)` on `N = v0.len()` grid points.
pub fn discretize(
    v0: &[f64],
    v: &[Complex64],
    length: f64,
    boundary: Boundary,
) -> Result<DiscretizedOperator, OperatorError> {
    let n = v0.len();
    if n < 3 {
        return Err(OperatorError::TooFewPoints(n));
    }
    if v.len() != n {
        return Err(OperatorError::LengthMismatch { v0: n, v: v.len() });
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(OperatorError::BadLength(length));
    }
    for (index, &value) in v0.iter().enumerate() {
        if !value.is_finite() {
            return Err(OperatorError::NonFinite(index));
        }
        if value < 0.0 {
            return Err(OperatorError::NegativeBackground { index, value });
        }
    }
    if let Some(index) = v.iter().position(|z| !z.is_finite()) {
        return Err(OperatorError::NonFinite(index));
    }
    let h = boundary.spacing(length, n);
    let inv_h2 = 1.0 / (h * h);
    let mut matrix = Mat::<Complex64>::zeros(n, n);
    for i in 0..n {
        matrix[(i, i)] = Complex64::new(2.0 * inv_h2 + v0[i], 0.0) + v[i];
        if i + 1 < n {
            matrix[(i, i + 1)] = Complex64::new(-inv_h2, 0.0);
            matrix[(i + 1, i)] = Complex64::new(-inv_h2, 0.0);
        }
    }
    if boundary == Boundary::Periodic {
        matrix[(0, n - 1)] += Complex64::new(-inv_h2, 0.0);
        matrix[(n - 1, 0)] += Complex64::new(-inv_h2, 0.0);
    }
    Ok(DiscretizedOperator {
        n,
        h,
        length,
        boundary,
        v0: v0.to_vec(),
        v: v.to_vec(),
        matrix,
        dense_cap: DEFAULT_DENSE_CAP,
        eigen_cache: OnceLock::new(),
    })
}

fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn check_square(m: &Mat<Complex64>) -> Result<usize, OperatorError> {
    if m.nrows() != m.ncols() {
        return Err(OperatorError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// All eigenvalues of a square matrix from the dense non-Hermitian solver,
/// sorted by real then imaginary part.
pub fn matrix_eigenvalues(m: &Mat<Complex64>) -> Result<Vec<Complex64>, OperatorError> {
    let n = check_square(m)?;
    let mut values = m
        .eigenvalues()
        .map_err(|_| OperatorError::NoConvergence { n, kind: "general" })?;
    sort_spectrum(&mut values);
    Ok(values)
}

/// Eigenvalues of the Hermitian matrix `m`, ascending. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(m: &Mat<Complex64>) -> Result<Vec<f64>, OperatorError> {
    let n = check_square(m)?;
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| OperatorError::NoConvergence { n, kind: "hermitian" })
}

/// Smallest eigenvalue of `(m + m*)/2`, i.e. `min Re⟨m f, f⟩` over unit `f`.
pub fn matrix_numerical_range_abscissa(m: &Mat<Complex64>) -> Result<f64, OperatorError> {
    let n = check_square(m)?;
    let herm = Mat::<Complex64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let values = hermitian_eigenvalues(&herm)?;
    Ok(values[0])
}

/// `(m − z)⁻¹` from a partial-pivoting LU factorization, with no spectral guard.
pub fn resolvent_matrix(m: &Mat<Complex64>, z: Complex64) -> Result<Mat<Complex64>, OperatorError> {
    let n = check_square(m)?;
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= z;
    }
    let inv = shifted.partial_piv_lu().inverse();
    if inv.col_iter().any(|c| c.iter().any(|x| !x.is_finite())) {
        return Err(OperatorError::NearSingular {
            z,
            nearest: z,
            distance: 0.0,
        });
    }
    Ok(inv)
}

/// `max |a_ij|`.
pub fn max_abs(m: &Mat<Complex64>) -> f64 {
    m.col_iter()
        .flat_map(|c| c.iter().map(|x| x.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

impl DiscretizedOperator {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn background(&self) -> &[f64] {
        &self.v0
    }

    pub fn perturbation(&self) -> &[Complex64] {
        &self.v
    }

    pub fn matrix(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    /// The same grid and background with `V` dropped.
    pub fn unperturbed(&self) -> DiscretizedOperator {
        let zero = vec![Complex64::new(0.0, 0.0); self.n];
        discretize(&self.v0, &zero, self.length, self.boundary)
            .expect("validated at construction")
            .with_dense_cap(self.dense_cap)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.v.iter().all(|z| z.im == 0.0)
    }

    fn check_cap(&self) -> Result<(), OperatorError> {
        if self.n > self.dense_cap {
            Err(OperatorError::TooLarge {
                n: self.n,
                cap: self.dense_cap,
            })
        } else {
            Ok(())
        }
    }

    /// All `N` eigenvalues (general solver), cached after the first call.
    pub fn eigenvalues(&self) -> Result<&[Complex64], OperatorError> {
        if let Some(values) = self.eigen_cache.get() {
            return Ok(values);
        }
        self.check_cap()?;
        let values = matrix_eigenvalues(&self.matrix)?;
        Ok(self.eigen_cache.get_or_init(|| values))
    }

    /// Eigenvalues through the Hermitian solver; requires real `V`.
    pub fn self_adjoint_eigenvalues(&self) -> Result<Vec<f64>, OperatorError> {
        if !self.is_self_adjoint() {
            return Err(OperatorError::NotSelfAdjoint);
        }
        self.check_cap()?;
        hermitian_eigenvalues(&self.matrix)
    }

    /// `ω₁`: smallest eigenvalue of the Hermitian part of the matrix.
    pub fn numerical_range_abscissa(&self) -> Result<f64, OperatorError> {
        self.check_cap()?;
        if self.is_self_adjoint() {
            return Ok(hermitian_eigenvalues(&self.matrix)?[0]);
        }
        matrix_numerical_range_abscissa(&self.matrix)
    }

    /// `(H − z)⁻¹`. Refuses shifts within [`RESOLVENT_GUARD`] of the spectrum.
    pub fn resolvent(&self, z: Complex64) -> Result<Mat<Complex64>, OperatorError> {
        let eigs = self.eigenvalues()?;
        if let Some(nearest) = eigs
            .iter()
            .copied()
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
        {
            let distance = (nearest - z).norm();
            if distance < RESOLVENT_GUARD {
                return Err(OperatorError::NearSingular {
                    z,
                    nearest,
                    distance,
                });
            }
        }
        resolvent_matrix(&self.matrix, z)
    }

    /// Default classification threshold `max(10h², 10⁻³)·(1 + b_K)`.
    pub fn default_delta(&self, bands: &BandSet) -> f64 {
        (10.0 * self.h * self.h).max(1e-3) * (1.0 + bands.last_edge().abs())
    }

    /// Fraction of the eigenvector norm² within [`BOUNDARY_LAYER`] points of
    /// either end, for the eigenvalue closest to `z`. Uses inverse iteration.
    pub fn boundary_mass(&self, z: Complex64) -> Result<f64, OperatorError> {
        let n = self.n;
        let shift = z + Complex64::new(1e-9 * (1.0 + z.norm()), 0.0);
        let mut shifted = self.matrix.clone();
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        let lu = shifted.partial_piv_lu();
        let mut x = Mat::<Complex64>::from_fn(n, 1, |i, _| {
            Complex64::new(1.0 + 0.1 * (i as f64).sin(), 0.0)
        });
        for _ in 0..4 {
            x = lu.solve(&x);
            let norm = x.col(0).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(OperatorError::NearSingular {
                    z,
                    nearest: z,
                    distance: 0.0,
                });
            }
            x = Mat::from_fn(n, 1, |i, _| x[(i, 0)] / norm);
        }
        let layer = BOUNDARY_LAYER.min(n / 2);
        let edge: f64 = (0..layer)
            .chain(n - layer..n)
            .map(|i| x[(i, 0)].norm_sqr())
            .sum();
        Ok(edge)
    }

    /// Eigenvalues classified against `bands`; Dirichlet candidates carrying
    /// most of their mass at the ends are flagged as boundary artifacts.
    pub fn spectrum_report(
        &self,
        bands: &BandSet,
        delta: Option<f64>,
    ) -> Result<SpectrumReport, OperatorError> {
        let delta = delta.unwrap_or_else(|| self.default_delta(bands));
        let mut report = classify_discrete(self.eigenvalues()?, bands, delta)?;
        if self.boundary == Boundary::Dirichlet {
            for c in &mut report.discrete {
                c.boundary_artifact = self.boundary_mass(c.z)? > BOUNDARY_MASS_THRESHOLD;
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub z: Complex64,
    pub dist: f64,
    pub boundary_artifact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub discrete: Vec<Candidate>,
    pub delta: f64,
    pub band_set: BandSet,
    /// Eigenvalues with `Re z` past the band set's validity cap; never candidates.
    pub beyond_cap: usize,
}

impl SpectrumReport {
    /// Candidates not flagged as boundary artifacts.
    pub fn genuine(&self) -> impl Iterator<Item = &Candidate> + '_ {
        self.discrete.iter().filter(|c| !c.boundary_artifact)
    }

    pub fn artifact_count(&self) -> usize {
        self.discrete.iter().filter(|c| c.boundary_artifact).count()
    }
}

/// Keeps the eigenvalues farther than `delta` from the band set.
pub fn classify_discrete(
    eigs: &[Complex64],
    bands: &BandSet,
    delta: f64,
) -> Result<SpectrumReport, OperatorError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(OperatorError::BadDelta(delta));
    }
    let cap = bands.validity_cap();
    let mut discrete = Vec::new();
    let mut beyond_cap = 0;
    for &z in eigs {
        if z.re > cap {
            beyond_cap += 1;
            continue;
        }
        let dist = bands.dist(z)?;
        if dist > delta {
            discrete.push(Candidate {
                z,
                dist,
                boundary_artifact: false,
            });
        }
    }
    Ok(SpectrumReport {
        eigenvalues: eigs.to_vec(),
        discrete,
        delta,
        band_set: bands.clone(),
        beyond_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zeros(n: usize) -> Vec<Complex64> {
        vec![c(0.0, 0.0); n]
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn tridiagonal_examples() {
        let s2 = 2f64.sqrt();
        let op = discretize(&[0.0; 3], &zeros(3), 4.0, Boundary::Dirichlet).unwrap();
        assert_eq!(op.spacing(), 1.0);
        let e = op.eigenvalues().unwrap();
        for (got, want) in e.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!(close(*got, c(want, 0.0), 1e-10));
        }
        let op = discretize(&[1.0; 3], &zeros(3), 4.0, Boundary::Dirichlet).unwrap();
        let e = op.eigenvalues().unwrap();
        for (got, want) in e.iter().zip([3.0 - s2, 3.0, 3.0 + s2]) {
            assert!(close(*got, c(want, 0.0), 1e-10));
        }
        let op = discretize(&[0.0; 3], &[c(0.0, 1.0); 3], 4.0, Boundary::Dirichlet).unwrap();
        let e = op.eigenvalues().unwrap();
        for (got, want) in e.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!(close(*got, c(want, 1.0), 1e-10));
        }
    }

    #[test]
    fn assembly_is_exact_and_periodic_has_corners() {
        let v0 = [0.5, 1.0, 0.0, 2.0];
        let v = [c(0.1, 0.2), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, -3.0)];
        let op = discretize(&v0, &v, 4.0, Boundary::Periodic).unwrap();
        assert_eq!(op.spacing(), 1.0);
        let m = op.matrix();
        for i in 0..4 {
            assert_eq!(m[(i, i)], c(2.0 + v0[i], 0.0) + v[i]);
        }
        assert_eq!(m[(0, 3)], c(-1.0, 0.0));
        assert_eq!(m[(3, 0)], c(-1.0, 0.0));
        let op = discretize(&v0, &v, 5.0, Boundary::Dirichlet).unwrap();
        assert_eq!(op.matrix()[(0, 3)], c(0.0, 0.0));
    }

    #[test]
    fn discretize_rejects_bad_input() {
        assert_eq!(
            discretize(&[0.0, -1.0, 0.0], &zeros(3), 1.0, Boundary::Dirichlet).unwrap_err(),
            OperatorError::NegativeBackground { index: 1, value: -1.0 }
        );
        assert_eq!(
            discretize(&[0.0; 3], &[c(0.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0)], 1.0, Boundary::Dirichlet)
                .unwrap_err(),
            OperatorError::NonFinite(1)
        );
        assert_eq!(
            discretize(&[0.0; 2], &zeros(2), 1.0, Boundary::Dirichlet).unwrap_err(),
            OperatorError::TooFewPoints(2)
        );
    }

    #[test]
    fn general_eigenvalues_of_diagonal() {
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (1, 1) => c(2.0, 3.0),
            _ => c(0.0, 0.0),
        });
        let e = matrix_eigenvalues(&m).unwrap();
        assert!(close(e[0], c(1.0, 0.0), 1e-14));
        assert!(close(e[1], c(2.0, 3.0), 1e-14));
    }

    #[test]
    fn numerical_range_examples() {
        let nil = Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!((matrix_numerical_range_abscissa(&nil).unwrap() + 0.5).abs() < 1e-14);
        let d = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 5.0),
            (1, 1) => c(2.0, -3.0),
            _ => c(0.0, 0.0),
        });
        assert!((matrix_numerical_range_abscissa(&d).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let bands = BandSet::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let eigs = [c(0.5, 0.0), c(1.5, 0.2), c(1.0, 0.0)];
        let r = classify_discrete(&eigs, &bands, 0.1).unwrap();
        assert_eq!(r.discrete.len(), 1);
        assert_eq!(r.discrete[0].z, c(1.5, 0.2));
        let r = classify_discrete(&eigs, &bands, 10.0).unwrap();
        assert!(r.discrete.is_empty());
        assert!(classify_discrete(&eigs, &bands, 0.0).is_err());
    }

    #[test]
    fn beyond_cap_is_counted_not_classified() {
        let bands = BandSet::new(&[(0.0, 1.0)]).unwrap();
        let r = classify_discrete(&[c(5.0, 0.0)], &bands, 0.1).unwrap();
        assert_eq!(r.beyond_cap, 1);
        assert!(r.discrete.is_empty());
    }

    #[test]
    fn resolvent_examples() {
        let op = discretize(&[0.0; 3], &zeros(3), 4.0, Boundary::Dirichlet).unwrap();
        let r = op.resolvent(c(-1.0, 0.0)).unwrap();
        let shifted = Mat::from_fn(3, 3, |i, j| {
            if i == j {
                c(3.0, 0.0)
            } else if i.abs_diff(j) == 1 {
                c(-1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let mut residual = &shifted * &r;
        for i in 0..3 {
            residual[(i, i)] -= c(1.0, 0.0);
        }
        assert!(max_abs(&residual) <= 1e-10);
        assert!(matches!(
            op.resolvent(c(2.0, 0.0)),
            Err(OperatorError::NearSingular { .. })
        ));
    }

    #[test]
    fn dense_cap_is_enforced() {
        let op = discretize(&[0.0; 5], &zeros(5), 1.0, Boundary::Dirichlet)
            .unwrap()
            .with_dense_cap(4);
        assert_eq!(
            op.eigenvalues().unwrap_err(),
            OperatorError::TooLarge { n: 5, cap: 4 }
        );
    }

    #[test]
    fn dirichlet_edge_state_is_flagged() {
        // A deep well next to the left wall binds a state that lives in the
        // first few grid cells.
        let n = 60;
        let mut v = zeros(n);
        v[0] = c(-400.0, 0.0);
        v[1] = c(-400.0, 0.0);
        let op = discretize(&vec![0.0; n], &v, 6.0, Boundary::Dirichlet).unwrap();
        let bands = BandSet::new(&[(0.0, 1000.0)]).unwrap();
        let report = op.spectrum_report(&bands, Some(1.0)).unwrap();
        assert!(!report.discrete.is_empty());
        assert!(report.discrete.iter().all(|c| c.boundary_artifact));
        assert_eq!(report.genuine().count(), 0);
    }
}
