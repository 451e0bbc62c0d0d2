//! Propagation of excitations under `i dpsi/dz = H psi`.
//!
//! The default route is a fixed-step classical Runge-Kutta integrator, which
//! stays valid at exceptional points. [`propagate_eigen`] evaluates the
//! eigen-expansion `psi(z) = sum_j a_j exp(-i E_j z) v_j` instead and is only
//! available for matrices that are safely diagonalizable.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Hamiltonian;
use crate::spectral::{eigendecompose, CRITICAL_WINDOW};

/// Largest `h |lambda|` for which classical RK4 is stable on the imaginary axis.
pub const RK4_STABILITY_LIMIT: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Clone, Debug, Serialize)]
pub struct EvolutionRecord {
    pub z_grid: Vec<f64>,
    #[serde(skip)]
    pub fields: Vec<DVector<Complex64>>,
    /// `|psi_n(z)|^2 / sum_n |psi_n(z)|^2`, one row per z.
    pub normalized_intensities: Vec<Vec<f64>>,
    /// Set when the Hamiltonian comes from a lattice whose defect strength is
    /// within the critical window of `c`.
    pub near_exceptional: bool,
}

impl EvolutionRecord {
    pub fn n_sites(&self) -> usize {
        self.fields.first().map_or(0, |f| f.len())
    }

    /// Raw (unnormalized) total intensity at each z.
    pub fn total_intensity(&self) -> Vec<f64> {
        self.fields.iter().map(|f| f.norm_squared()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PropagateOptions {
    /// Internal step is at most `step_factor / ||H||_inf`.
    pub step_factor: f64,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        PropagateOptions { step_factor: 0.01 }
    }
}

/// Unit vector at 1-based `site`.
pub fn delta_excitation(n_sites: usize, site: usize) -> Result<DVector<Complex64>> {
    if site < 1 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let mut psi = DVector::zeros(n_sites);
    psi[site - 1] = Complex64::new(1.0, 0.0);
    Ok(psi)
}

fn check_inputs(h: &Hamiltonian, psi0: &DVector<Complex64>, z_max: f64, steps: usize) -> Result<()> {
    if psi0.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi0.len(),
        });
    }
    if !(psi0.norm() > 0.0) {
        return Err(Error::InvalidArgument("initial field must be nonzero".into()));
    }
    if !(z_max > 0.0) || !z_max.is_finite() {
        return Err(Error::InvalidArgument(format!("z_max must be positive, got {z_max}")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    Ok(())
}

fn near_exceptional(h: &Hamiltonian) -> bool {
    h.origin().is_some_and(|spec| spec.near_critical(CRITICAL_WINDOW))
}

fn record(z_grid: Vec<f64>, fields: Vec<DVector<Complex64>>, near_exceptional: bool) -> EvolutionRecord {
    let normalized_intensities = fields
        .iter()
        .map(|f| {
            let total = f.norm_squared();
            f.iter().map(|z| z.norm_sqr() / total).collect()
        })
        .collect();
    EvolutionRecord {
        z_grid,
        fields,
        normalized_intensities,
        near_exceptional,
    }
}

fn z_grid(z_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| z_max * i as f64 / steps as f64).collect()
}

pub fn propagate(h: &Hamiltonian, psi0: &DVector<Complex64>, z_max: f64, steps: usize) -> Result<EvolutionRecord> {
    propagate_with(h, psi0, z_max, steps, PropagateOptions::default())
}

pub fn propagate_with(
    h: &Hamiltonian,
    psi0: &DVector<Complex64>,
    z_max: f64,
    steps: usize,
    options: PropagateOptions,
) -> Result<EvolutionRecord> {
    check_inputs(h, psi0, z_max, steps)?;
    let norm = h.norm_inf();
    if !(options.step_factor > 0.0) || options.step_factor > RK4_STABILITY_LIMIT {
        return Err(Error::StepSize {
            step: options.step_factor / norm.max(f64::MIN_POSITIVE),
            bound: RK4_STABILITY_LIMIT / norm.max(f64::MIN_POSITIVE),
        });
    }
    let near = near_exceptional(h);
    if near {
        log::warn!("defect strength within {CRITICAL_WINDOW} of c: matrix is close to defective");
    }

    let grid = z_grid(z_max, steps);
    let dz = z_max / steps as f64;
    let substeps = if norm == 0.0 {
        1
    } else {
        (dz * norm / options.step_factor).ceil().max(1.0) as usize
    };
    let step = dz / substeps as f64;

    let minus_i = Complex64::new(0.0, -1.0);
    let a = h.matrix();
    let rhs = |psi: &DVector<Complex64>| (a * psi) * minus_i;

    let half = Complex64::new(step / 2.0, 0.0);
    let full = Complex64::new(step, 0.0);
    let sixth = Complex64::new(step / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);

    let mut psi = psi0.clone();
    let mut fields = Vec::with_capacity(steps + 1);
    fields.push(psi.clone());
    for _ in 0..steps {
        for _ in 0..substeps {
            let k1 = rhs(&psi);
            let k2 = rhs(&(&psi + &k1 * half));
            let k3 = rhs(&(&psi + &k2 * half));
            let k4 = rhs(&(&psi + &k3 * full));
            psi += (k1 + k2 * two + k3 * two + k4) * sixth;
        }
        fields.push(psi.clone());
    }
    Ok(record(grid, fields, near))
}

/// Evolution through the biorthogonal eigen-expansion. Refused near
/// exceptional points, where the eigenvector basis degenerates.
pub fn propagate_eigen(h: &Hamiltonian, psi0: &DVector<Complex64>, z_max: f64, steps: usize) -> Result<EvolutionRecord> {
    check_inputs(h, psi0, z_max, steps)?;
    if near_exceptional(h) {
        return Err(Error::NearDefective);
    }
    let spectrum = eigendecompose(h)?;
    let v = spectrum.eigenvector_matrix();
    let coefficients = v.clone().lu().solve(psi0).ok_or(Error::NearDefective)?;
    if (&v * &coefficients - psi0).norm() > 1e-10 * psi0.norm() {
        return Err(Error::NearDefective);
    }

    let grid = z_grid(z_max, steps);
    let fields = grid
        .iter()
        .map(|&z| {
            let weights = DVector::from_iterator(
                spectrum.dim(),
                spectrum
                    .eigenvalues
                    .iter()
                    .zip(coefficients.iter())
                    .map(|(e, a)| a * (Complex64::new(0.0, -z) * e).exp()),
            );
            &v * weights
        })
        .collect();
    Ok(record(grid, fields, false))
}

/// Mean normalized intensity at 1-based `site` over the second half of the
/// z-grid.
///
/// # Panics
///
/// If `site` is outside the record.
pub fn localization_score(record: &EvolutionRecord, site: usize) -> f64 {
    let rows = &record.normalized_intensities;
    let tail = &rows[rows.len() / 2..];
    tail.iter().map(|row| row[site - 1]).sum::<f64>() / tail.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_hamiltonian, DefectSpec, LatticeSpec};
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_vectors() {
        assert_eq!(delta_excitation(3, 1).unwrap().as_slice(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(delta_excitation(25, 25).unwrap()[24], c(1.0, 0.0));
        assert_eq!(delta_excitation(25, 13).unwrap().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert!(delta_excitation(25, 0).is_err());
        assert!(delta_excitation(25, 26).is_err());
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = Hamiltonian::from_matrix(DMatrix::zeros(1, 1)).unwrap();
        let rec = propagate(&h, &delta_excitation(1, 1).unwrap(), 5.0, 10).unwrap();
        assert!(rec.fields.iter().all(|f| f[0] == c(1.0, 0.0)));
        assert_eq!(localization_score(&rec, 1), 1.0);
    }

    #[test]
    fn rabi_oscillation() {
        let h = Hamiltonian::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let rec = propagate(&h, &delta_excitation(2, 1).unwrap(), PI, 2).unwrap();
        assert!(rec.fields[1][0].norm_sqr() < 1e-10);
        assert!((rec.fields[2][0].norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn single_site_gain() {
        let h = Hamiltonian::from_matrix(DMatrix::from_element(1, 1, c(0.0, 0.3))).unwrap();
        let rec = propagate(&h, &delta_excitation(1, 1).unwrap(), 1.0, 4).unwrap();
        assert!((rec.fields[4][0].norm_sqr() - 0.6f64.exp()).abs() < 1e-10);
        assert_eq!(rec.normalized_intensities[4][0], 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = Hamiltonian::from_matrix(DMatrix::zeros(2, 2)).unwrap();
        let psi = delta_excitation(2, 1).unwrap();
        assert!(propagate(&h, &DVector::zeros(2), 1.0, 1).is_err());
        assert!(propagate(&h, &psi, 0.0, 1).is_err());
        assert!(propagate(&h, &psi, 1.0, 0).is_err());
        assert!(propagate(&h, &delta_excitation(3, 1).unwrap(), 1.0, 1).is_err());
        let err = propagate_with(&h, &psi, 1.0, 1, PropagateOptions { step_factor: 3.0 }).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }

    #[test]
    fn eigen_route_refused_near_ep() {
        let spec = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::pt(12, 1.0));
        let h = build_hamiltonian(&spec).unwrap();
        let psi = delta_excitation(25, 25).unwrap();
        assert!(matches!(propagate_eigen(&h, &psi, 1.0, 10), Err(Error::NearDefective)));
        assert!(propagate(&h, &psi, 1.0, 10).unwrap().near_exceptional);
    }

    #[test]
    fn time_reversal_returns_initial_field() {
        let h = build_hamiltonian(&LatticeSpec::clean(25, 0.5, 1.0)).unwrap();
        let psi0 = delta_excitation(25, 7).unwrap();
        let forward = propagate(&h, &psi0, 10.0, 50).unwrap();
        let back = propagate(&h.scaled(-1.0), forward.fields.last().unwrap(), 10.0, 50).unwrap();
        let err = (back.fields.last().unwrap() - &psi0).camax();
        assert!(err < 1e-8, "{err}");
    }
}
