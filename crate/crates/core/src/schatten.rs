//! Schatten norms, discrete `L^p` norms, the constant `C₁(p)` and the analytic
//! bounds on `W(z) = V·R(z, H₀)` and on resolvent differences.

use std::f64::consts::{PI, SQRT_2};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{resolvent_matrix, DiscretizedOperator, OperatorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchattenError {
    #[error("exponent p = {p} outside the admissible range ({range})")]
    BadExponent { p: f64, range: &'static str },
    #[error("singular value decomposition did not converge for a {rows}×{cols} matrix")]
    Svd { rows: usize, cols: usize },
    #[error("bound requires Re z < 0, got z = {0}")]
    NotInLeftHalfPlane(Complex64),
    #[error("need ω < min(ω₁, 0), got ω = {omega}, ω₁ = {omega1}")]
    OmegaOrder { omega: f64, omega1: f64 },
    #[error("{expected} samples expected, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

pub fn singular_values(m: &Mat<Complex64>) -> Result<Vec<f64>, SchattenError> {
    m.singular_values().map_err(|_| SchattenError::Svd {
        rows: m.nrows(),
        cols: m.ncols(),
    })
}

fn check_p(p: f64) -> Result<(), SchattenError> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(SchattenError::BadExponent { p, range: "p ≥ 1" })
    }
}

/// `(Σ s_j^p)^{1/p}` over the singular values; `p = ∞` gives the largest one.
pub fn schatten_norm(m: &Mat<Complex64>, p: f64) -> Result<f64, SchattenError> {
    check_p(p)?;
    Ok(norm_from_singular_values(&singular_values(m)?, p))
}

/// `‖m‖_{S_p}^p = Σ s_j^p`.
pub fn schatten_norm_pow(m: &Mat<Complex64>, p: f64) -> Result<f64, SchattenError> {
    check_p(p)?;
    Ok(singular_values(m)?.iter().map(|s| s.powf(p)).sum())
}

/// Schatten norm from precomputed singular values, scaled to avoid overflow.
pub fn norm_from_singular_values(values: &[f64], p: f64) -> f64 {
    let top = values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    top * values.iter().map(|s| (s / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Largest singular value.
pub fn operator_norm(m: &Mat<Complex64>) -> Result<f64, SchattenError> {
    Ok(singular_values(m)?.into_iter().fold(0.0, f64::max))
}

/// `(h·Σ|v_i|^p)^{1/p}`.
pub fn lp_norm(samples: &[Complex64], h: f64, p: f64) -> f64 {
    let top = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let sum: f64 = samples.iter().map(|v| (v.norm() / top).powf(p)).sum();
    top * (h * sum).powf(1.0 / p)
}

pub fn sup_norm(samples: &[f64]) -> f64 {
    samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `C₁(p) = √2·((1/2π)·∫_ℝ dx/(1+x²)^p)^{1/p}`, for `p > 1/2`.
///
/// With `x = tan t` the integral is `2∫_0^{π/2} cos^{2p−2} t dt`.
pub fn c1_constant(p: f64) -> Result<f64, SchattenError> {
    if !(p > 0.5) || !p.is_finite() {
        return Err(SchattenError::BadExponent {
            p,
            range: "p > 1/2",
        });
    }
    let integral = 2.0 * half_cos_power_integral(2.0 * p - 2.0);
    Ok(SQRT_2 * (integral / (2.0 * PI)).powf(1.0 / p))
}

fn half_cos_power_integral(power: f64) -> f64 {
    if power == 0.0 {
        return PI / 2.0;
    }
    if power < 0.0 {
        // ∫_0^{π/2} sin^q s ds with s = w^{1/(q+1)} becomes
        // (1/(q+1)) ∫_0^{(π/2)^{q+1}} (sin s / s)^q dw, which is smooth.
        let k = power + 1.0;
        let out = quadrature::double_exponential::integrate(
            |w| {
                let s = w.powf(1.0 / k);
                if s == 0.0 {
                    1.0
                } else {
                    (s.sin() / s).powf(power)
                }
            },
            0.0,
            (PI / 2.0).powf(k),
            1e-14,
        );
        return out.integral / k;
    }
    // cos t = sin(π/2 − t) keeps full relative accuracy near the endpoint.
    let out = quadrature::double_exponential::integrate(
        |t| (PI / 2.0 - t).sin().powf(power),
        0.0,
        PI / 2.0,
        1e-14,
    );
    out.integral
}

/// Norms entering the bounds, with `C₁(p)` attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBundle {
    pub p: f64,
    pub v_p: f64,
    pub v0_inf: f64,
    pub c1: f64,
}

impl NormBundle {
    pub fn new(p: f64, v_p: f64, v0_inf: f64) -> Result<Self, SchattenError> {
        if !(p > 1.0) {
            return Err(SchattenError::BadExponent { p, range: "p > 1" });
        }
        Ok(Self {
            p,
            v_p,
            v0_inf,
            c1: c1_constant(p)?,
        })
    }

    pub fn from_samples(
        p: f64,
        v: &[Complex64],
        v0: &[f64],
        h: f64,
    ) -> Result<Self, SchattenError> {
        Self::new(p, lp_norm(v, h, p), sup_norm(v0))
    }

    /// Same background and exponent, `‖V‖_p` replaced.
    pub fn with_v_p(self, v_p: f64) -> Self {
        Self { v_p, ..self }
    }
}

/// `C₁(p)·‖V‖_p·|z|^{−(1−1/2p)}·(1 + ‖V₀‖_∞/|a₁ − z|)`, an upper bound on
/// `‖V·R(z, H₀)‖_{S_p}` for `Re z < 0`.
pub fn bound_w(z: Complex64, nb: &NormBundle, a1: f64) -> Result<f64, SchattenError> {
    if !(z.re < 0.0) {
        return Err(SchattenError::NotInLeftHalfPlane(z));
    }
    let decay = z.norm().powf(-(1.0 - 0.5 / nb.p));
    let background = 1.0 + nb.v0_inf / (a1 - z).norm();
    Ok(nb.c1 * nb.v_p * decay * background)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventDiffBound {
    /// `w_factor · resolvent_factor`.
    pub value: f64,
    /// `C₁(p)^p·‖V‖_p^p/|ω|^{p−1/2}·(1 + ‖V₀‖_∞/(a₁+|ω|))^p`.
    pub w_factor: f64,
    /// `(ω₁ − ω)^{−p}`.
    pub resolvent_factor: f64,
}

/// Upper bound on `‖R(ω, H) − R(ω, H₀)‖_{S_p}^p` for real `ω < min(ω₁, 0)`,
/// with the constant taken as `C₁(p)^p`.
pub fn resolvent_diff_bound(
    omega: f64,
    omega1: f64,
    nb: &NormBundle,
    a1: f64,
) -> Result<ResolventDiffBound, SchattenError> {
    if !(omega < omega1 && omega < 0.0) {
        return Err(SchattenError::OmegaOrder { omega, omega1 });
    }
    let p = nb.p;
    let abs = omega.abs();
    let w_factor = nb.c1.powf(p) * nb.v_p.powf(p) / abs.powf(p - 0.5)
        * (1.0 + nb.v0_inf / (a1 + abs)).powf(p);
    let resolvent_factor = (omega1 - omega).powf(-p);
    Ok(ResolventDiffBound {
        value: w_factor * resolvent_factor,
        w_factor,
        resolvent_factor,
    })
}

/// `ω′ = −2·(a₁/2 + 1 + ‖V₀‖_∞ + (4C₁(1 + ‖V‖_p))^{1/(1−1/2p)})`, a real point
/// where `‖W(ω′)‖ < 1/2` is guaranteed. Meant for `p ≥ 2`.
pub fn omega_prime(a1: f64, v0_inf: f64, nb: &NormBundle) -> f64 {
    let exponent = 1.0 / (1.0 - 0.5 / nb.p);
    let growth = (4.0 * nb.c1 * (1.0 + nb.v_p)).powf(exponent);
    -2.0 * (a1 / 2.0 + 1.0 + v0_inf + growth)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WSmallness {
    pub z: Complex64,
    pub operator_norm: f64,
    pub schatten_norm: f64,
    /// Analytic bound at `z` when `Re z < 0`.
    pub bound: Option<f64>,
    /// `‖W‖ < 1/2`.
    pub small: bool,
}

/// Builds `W(z) = diag(V)·R(z, H₀)` on the matrix model and measures it.
pub fn w_smallness_check(
    h0: &DiscretizedOperator,
    v: &[Complex64],
    z: Complex64,
    nb: &NormBundle,
    a1: f64,
) -> Result<WSmallness, SchattenError> {
    let n = h0.size();
    if v.len() != n {
        return Err(SchattenError::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let r = h0.resolvent(z)?;
    let w = Mat::from_fn(n, n, |i, j| v[i] * r[(i, j)]);
    let s = singular_values(&w)?;
    let operator_norm = s.iter().copied().fold(0.0, f64::max);
    let bound = if z.re < 0.0 {
        Some(bound_w(z, nb, a1)?)
    } else {
        None
    };
    Ok(WSmallness {
        z,
        operator_norm,
        schatten_norm: norm_from_singular_values(&s, nb.p),
        bound,
        small: operator_norm < 0.5,
    })
}

/// `‖(m − ω)⁻¹‖` next to `1/(ω₁ − ω)`, returned as `(norm, bound)`.
pub fn resolvent_norm_check(
    m: &Mat<Complex64>,
    omega: f64,
    omega1: f64,
) -> Result<(f64, f64), SchattenError> {
    let r = resolvent_matrix(m, Complex64::new(omega, 0.0))?;
    Ok((operator_norm(&r)?, 1.0 / (omega1 - omega)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[Complex64]) -> Mat<Complex64> {
        let n = values.len();
        Mat::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) })
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn schatten_examples() {
        let m = diag(&[re(3.0), re(4.0)]);
        assert!((schatten_norm(&m, 2.0).unwrap() - 5.0).abs() < 1e-12);
        let big = schatten_norm(&m, 64.0).unwrap();
        assert!((big - 4.0).abs() < 0.04);
        assert_eq!(schatten_norm(&m, f64::INFINITY).unwrap(), 4.0);
        assert!(schatten_norm(&m, 0.5).is_err());
    }

    #[test]
    fn lp_examples() {
        let v = vec![re(2.0); 10];
        assert!((lp_norm(&v, 0.1, 2.0) - 2.0).abs() < 1e-14);
        assert_eq!(lp_norm(&[re(0.0); 4], 0.1, 3.0), 0.0);
        let w = [re(1.0), Complex64::new(0.5, -2.0), re(-0.25)];
        let a = Complex64::new(3.0, 4.0);
        let scaled: Vec<_> = w.iter().map(|x| a * x).collect();
        assert!((lp_norm(&scaled, 0.3, 2.5) - 5.0 * lp_norm(&w, 0.3, 2.5)).abs() < 1e-13);
    }

    #[test]
    fn c1_examples() {
        assert!((c1_constant(2.0).unwrap() - SQRT_2 / 2.0).abs() < 1e-12);
        assert!((c1_constant(1.0).unwrap() - SQRT_2 / 2.0).abs() < 1e-12);
        assert!(c1_constant(0.5).is_err());
    }

    #[test]
    fn bound_w_examples() {
        let nb = NormBundle::new(2.0, 1.0, 0.0).unwrap();
        assert!((bound_w(re(-1.0), &nb, 0.0).unwrap() - SQRT_2 / 2.0).abs() < 1e-12);
        assert_eq!(bound_w(re(-1.0), &nb.with_v_p(0.0), 0.0).unwrap(), 0.0);
        assert!(bound_w(re(1.0), &nb, 0.0).is_err());
        assert!(bound_w(re(-2.0), &nb, 0.0).unwrap() < bound_w(re(-1.0), &nb, 0.0).unwrap());
    }

    #[test]
    fn resolvent_diff_examples() {
        let nb = NormBundle::new(2.0, 1.0, 0.0).unwrap();
        let b = resolvent_diff_bound(-10.0, 0.0, &nb, 0.0).unwrap();
        assert!((b.value - 0.5 / 10f64.powf(3.5)).abs() < 1e-15);
        assert!((b.value - 1.5811e-4).abs() < 1e-8);
        assert_eq!(resolvent_diff_bound(-10.0, 0.0, &nb.with_v_p(0.0), 0.0).unwrap().value, 0.0);
        assert!(resolvent_diff_bound(1.0, 0.0, &nb, 0.0).is_err());
    }

    #[test]
    fn omega_prime_examples() {
        let nb = NormBundle::new(2.0, 0.0, 0.0).unwrap();
        assert!((omega_prime(0.0, 0.0, &nb) + 10.0).abs() < 1e-9);
        assert!((omega_prime(2.0, 0.0, &nb) - omega_prime(0.0, 0.0, &nb) + 2.0).abs() < 1e-12);
        assert!(omega_prime(0.0, 0.0, &nb.with_v_p(1.0)) < omega_prime(0.0, 0.0, &nb));
    }
}
