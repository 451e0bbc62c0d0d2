//! Eigendecomposition, mode classification, strength sweeps and
//! exceptional-point search.

mod classify;
mod eigen;
mod ep;
mod sweep;

pub use classify::{classify_modes, isolation_score, zero_mode_profile, zero_mode_tolerance, ModeClassification};
pub use ep::{
    locate_exceptional_point, locate_exceptional_point_scan, locate_exceptional_point_with, pair_sample, EPReport, PairSample,
    SCAN_POINTS,
};
pub use sweep::{linspace, sweep_defect_strength, SweepRow, SweepTable};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Hamiltonian;
use crate::profile::fix_phase;

/// Residual bound for generic matrices.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Residual bound when the defect strength is within [`CRITICAL_WINDOW`] of `c`.
pub const RESIDUAL_TOLERANCE_NEAR_EP: f64 = 1e-6;
pub const CRITICAL_WINDOW: f64 = 1e-3;

/// Eigenpairs sorted by real part, then imaginary part.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Unit 2-norm; largest component real positive.
    #[serde(skip)]
    pub right_eigenvectors: Vec<DVector<Complex64>>,
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Eigenvectors as matrix columns, in eigenvalue order.
    pub fn eigenvector_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_columns(&self.right_eigenvectors)
    }
}

/// Residual tolerance that applies to `h`.
pub fn residual_tolerance(h: &Hamiltonian) -> f64 {
    match h.origin() {
        Some(spec) if spec.near_critical(CRITICAL_WINDOW) => RESIDUAL_TOLERANCE_NEAR_EP,
        _ => RESIDUAL_TOLERANCE,
    }
}

pub fn eigendecompose(h: &Hamiltonian) -> Result<Spectrum> {
    eigendecompose_with_tolerance(h, residual_tolerance(h))
}

pub fn eigendecompose_with_tolerance(h: &Hamiltonian, tolerance: f64) -> Result<Spectrum> {
    let a = h.matrix();
    let schur = eigen::schur(a)?;
    let vectors = eigen::eigenvectors(&schur);

    let mut pairs: Vec<(Complex64, DVector<Complex64>)> = vectors
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let mut v = v.unscale(v.norm());
            fix_phase(v.as_mut_slice());
            (schur.t[(i, i)], v)
        })
        .collect();

    // Real parts below this are rounding noise and sort as exact zero.
    let snap = 1e-12 * h.norm_inf().max(1.0);
    let key = |z: &Complex64| if z.re.abs() < snap { 0.0 } else { z.re };
    pairs.sort_by(|(x, _), (y, _)| key(x).total_cmp(&key(y)).then(x.im.total_cmp(&y.im)));

    let residuals: Vec<f64> = pairs
        .iter()
        .map(|(e, v)| (a * v - v * *e).norm())
        .collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > tolerance {
        return Err(Error::ResidualExceeded {
            residual: worst,
            tolerance,
        });
    }

    let (eigenvalues, right_eigenvectors) = pairs.into_iter().unzip();
    Ok(Spectrum {
        eigenvalues,
        right_eigenvectors,
        residuals,
    })
}

/// Largest distance from any eigenvalue `e` to the nearest unused member of
/// `{ mirror(e') }`, matched greedily. Zero for a multiset invariant under `mirror`.
pub fn mirror_mismatch(eigenvalues: &[Complex64], mirror: impl Fn(Complex64) -> Complex64) -> f64 {
    let mirrored: Vec<Complex64> = eigenvalues.iter().map(|&e| mirror(e)).collect();
    let mut used = vec![false; mirrored.len()];
    let mut worst: f64 = 0.0;
    for e in eigenvalues {
        let (best, dist) = mirrored
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, m)| (j, (m - e).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if best == usize::MAX {
            return f64::INFINITY;
        }
        used[best] = true;
        worst = worst.max(dist);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dimer(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Hamiltonian {
        Hamiltonian::from_rows(&[vec![a, b], vec![cc, d]]).unwrap()
    }

    fn assert_eigs(s: &Spectrum, expected: &[Complex64]) {
        assert_eq!(s.dim(), expected.len());
        for (got, want) in s.eigenvalues.iter().zip(expected) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn hermitian_dimer() {
        let s = eigendecompose(&dimer(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_eigs(&s, &[c(-1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn asymmetric_dimer() {
        let s = eigendecompose(&dimer(c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        let r = 0.5f64.sqrt();
        assert_eigs(&s, &[c(-r, 0.0), c(r, 0.0)]);
    }

    #[test]
    fn pt_dimer_exact_and_broken() {
        let s = eigendecompose(&dimer(c(0.0, 0.5), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -0.5))).unwrap();
        let r = 0.75f64.sqrt();
        assert_eigs(&s, &[c(-r, 0.0), c(r, 0.0)]);
        let s = eigendecompose(&dimer(c(0.0, 1.25), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.25))).unwrap();
        assert_eigs(&s, &[c(0.0, -0.75), c(0.0, 0.75)]);
    }

    #[test]
    fn eigenvectors_are_unit_and_phase_fixed() {
        let s = eigendecompose(&dimer(c(0.0, 1.25), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.25))).unwrap();
        for v in &s.right_eigenvectors {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let r = v[crate::profile::phase_reference(v.as_slice())];
            assert!(r.im == 0.0 && r.re > 0.0);
        }
        assert!(s.max_residual() < 1e-12);
    }

    #[test]
    fn mirror_mismatch_detects_asymmetry() {
        let sym = [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(mirror_mismatch(&sym, |e| -e), 0.0);
        let lop = [c(-1.0, 0.0), c(0.5, 0.0)];
        assert!((mirror_mismatch(&lop, |e| -e) - 0.5).abs() < 1e-15);
    }
}
