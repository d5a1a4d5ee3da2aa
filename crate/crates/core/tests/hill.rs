use std::f64::consts::{PI, TAU};

use band_lt::hill::{
    band_edges, band_structure, default_steps, discriminant, floquet_bands, monodromy, Floquet,
    LatticeHill, DEGENERATE_GAP,
};
use band_lt::{HillError, PeriodicPotential};
use faer::{Mat, Side};
use num_complex::Complex64;

fn constant(c: f64, period: f64) -> PeriodicPotential {
    PeriodicPotential::from_fn(period, move |_| c, 16).unwrap()
}

#[test]
fn constant_potential_discriminant_is_closed_form() {
    let (c, t) = (3.0, 1.5);
    let v = constant(c, t);
    for k in 0..200 {
        let e = 60.0 * k as f64 / 199.0;
        let expected = if e >= c {
            2.0 * ((e - c).sqrt() * t).cos()
        } else {
            2.0 * ((c - e).sqrt() * t).cosh()
        };
        let d = discriminant(&v, e).unwrap();
        assert!((d - expected).abs() <= 1e-8 * expected.abs().max(1.0), "E = {e}: {d} vs {expected}");
    }
    let bands = band_edges(&v, 40.0, None).unwrap();
    assert_eq!(bands.len(), 1);
    assert!((bands.bottom() - c).abs() < 1e-8);
    assert_eq!(bands.last_edge(), 40.0);
}

#[test]
fn free_bands_are_one_half_line_for_every_period() {
    for t in [0.5, 1.0, TAU] {
        let b = band_edges(&PeriodicPotential::free(t).unwrap(), 50.0, None).unwrap();
        assert_eq!(b.bands(), &[(0.0, 50.0)], "T = {t}");
    }
}

#[test]
fn monodromy_stays_unimodular() {
    let v = PeriodicPotential::cosine(3.0, 4.0, 2.0).unwrap();
    for k in 0..100 {
        let e = -5.0 + 205.0 * k as f64 / 99.0;
        let m = monodromy(&v, e, default_steps(e, 2.0)).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-10, "E = {e}: det = {}", m.det());
    }
}

#[test]
fn rescaling_the_line_rescales_the_edges() {
    let s: f64 = 2.0;
    let base = band_edges(&PeriodicPotential::cosine(2.0, 2.0, TAU).unwrap(), 30.0, None).unwrap();
    let scaled = band_edges(
        &PeriodicPotential::cosine(2.0 * s * s, 2.0 * s * s, TAU / s).unwrap(),
        30.0 * s * s,
        None,
    )
    .unwrap();
    assert_eq!(base.len(), scaled.len());
    for (&(a, b), &(sa, sb)) in base.bands().iter().zip(scaled.bands()) {
        assert!((sa - s * s * a).abs() < 1e-6 * (1.0 + sa), "{sa} vs {}", s * s * a);
        assert!((sb - s * s * b).abs() < 1e-6 * (1.0 + sb), "{sb} vs {}", s * s * b);
    }
}

#[test]
fn translation_does_not_move_the_edges() {
    let base = band_edges(&PeriodicPotential::cosine(2.0, 2.0, TAU).unwrap(), 30.0, None).unwrap();
    let shifted = band_edges(
        &PeriodicPotential::from_fn(TAU, |x| 2.0 + 2.0 * (x + 1.3).cos(), 64).unwrap(),
        30.0,
        None,
    )
    .unwrap();
    assert_eq!(base.len(), shifted.len());
    for (&(a, b), &(sa, sb)) in base.bands().iter().zip(shifted.bands()) {
        assert!((a - sa).abs() < 1e-7 && (b - sb).abs() < 1e-7);
    }
}

#[test]
fn merged_gaps_are_below_threshold_and_reported() {
    let out = band_structure(&PeriodicPotential::cosine(2.0, 2.0, TAU).unwrap(), 30.0, None).unwrap();
    assert!(!out.merged_gaps.is_empty());
    for g in &out.merged_gaps {
        assert!(g.upper - g.lower < DEGENERATE_GAP);
        assert!(out.bands.contains(0.5 * (g.lower + g.upper)));
    }
}

/// Eigenvalues of the periodic tridiagonal cell with Bloch phase `θ` in the corners.
fn bloch_cell(samples: &[f64], h: f64, theta: f64) -> Vec<f64> {
    let m = samples.len();
    let inv = 1.0 / (h * h);
    let mut a = Mat::<Complex64>::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = Complex64::new(2.0 * inv + samples[i], 0.0);
        if i + 1 < m {
            a[(i, i + 1)] = Complex64::new(-inv, 0.0);
            a[(i + 1, i)] = Complex64::new(-inv, 0.0);
        }
    }
    a[(m - 1, 0)] += Complex64::from_polar(-inv, theta);
    a[(0, m - 1)] += Complex64::from_polar(-inv, -theta);
    a.self_adjoint_eigenvalues(Side::Lower).unwrap()
}

#[test]
fn lattice_edges_match_bloch_cell_eigenvalues() {
    let m = 24;
    let h = TAU / m as f64;
    let samples: Vec<f64> = (0..m).map(|j| 1.5 + (j as f64 * h).cos() + 0.3 * (2.0 * j as f64 * h).sin()).collect();
    let lattice = LatticeHill::new(samples.clone(), h).unwrap();
    let found = floquet_bands(&lattice, lattice.spectral_ceiling() + 1.0, None).unwrap().bands;
    let mut all: Vec<f64> = bloch_cell(&samples, h, 0.0);
    all.extend(bloch_cell(&samples, h, PI));
    all.sort_by(f64::total_cmp);
    let oracle: Vec<(f64, f64)> = all.chunks(2).map(|p| (p[0], p[1])).collect();
    let merged: Vec<(f64, f64)> = oracle.iter().fold(Vec::new(), |mut acc: Vec<(f64, f64)>, &(a, b)| {
        match acc.last_mut() {
            Some(last) if a - last.1 < DEGENERATE_GAP => last.1 = b,
            _ => acc.push((a, b)),
        }
        acc
    });
    assert_eq!(found.len(), merged.len());
    for (&(a, b), &(oa, ob)) in found.bands().iter().zip(&merged) {
        assert!((a - oa).abs() < 1e-8 * (1.0 + oa) && (b - ob).abs() < 1e-8 * (1.0 + ob), "[{a}, {b}] vs [{oa}, {ob}]");
    }
    assert!((lattice.period() - TAU).abs() < 1e-12);
}

#[test]
fn invalid_potentials_are_rejected() {
    assert!(matches!(
        PeriodicPotential::cosine(2.0, 1.0, 1.0),
        Err(HillError::NegativePotential { .. })
    ));
    assert!(matches!(
        PeriodicPotential::from_fn(1.0, |x| 1.0 + x, 8),
        Err(HillError::NotPeriodic { .. })
    ));
    assert!(matches!(PeriodicPotential::free(0.0), Err(HillError::BadPeriod(_))));
    assert!(matches!(
        PeriodicPotential::samples(1.0, vec![1.0, f64::NAN]),
        Err(HillError::NonFinitePotential(_))
    ));
    let v = PeriodicPotential::free(1.0).unwrap();
    assert!(matches!(band_edges(&v, -1.0, None), Err(HillError::BadEnergyRange(_))));
    assert!(monodromy(&v, 1.0, 10).is_err());
    let high = constant(10.0, 1.0);
    assert!(matches!(band_edges(&high, 5.0, None), Err(HillError::NoBand(_))));
}
