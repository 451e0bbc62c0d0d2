use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{classify_modes, eigendecompose, ModeClassification};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, LatticeSpec};

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub strength: f64,
    pub eigenvalues: Vec<Complex64>,
    pub classification: ModeClassification,
    /// `|v_1|^2` for every eigenvector, in eigenvalue order.
    pub site1_intensities: Vec<f64>,
    /// `|v_{2m+1}|^2` for every eigenvector.
    pub defect_site_intensities: Vec<f64>,
}

impl SweepRow {
    pub fn zero_mode(&self) -> Complex64 {
        self.eigenvalues[self.classification.zero_mode_index]
    }

    pub fn bound_pair(&self) -> Option<(Complex64, Complex64)> {
        self.classification
            .bound_pair_indices
            .map(|(a, b)| (self.eigenvalues[a], self.eigenvalues[b]))
    }

    pub fn zero_mode_site1_intensity(&self) -> f64 {
        self.site1_intensities[self.classification.zero_mode_index]
    }

    pub fn zero_mode_defect_site_intensity(&self) -> f64 {
        self.defect_site_intensities[self.classification.zero_mode_index]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub template: LatticeSpec,
    pub rows: Vec<SweepRow>,
}

fn sweep_point(template: &LatticeSpec, strength: f64) -> Result<SweepRow> {
    let spec = template.with_strength(strength);
    let spectrum = eigendecompose(&build_hamiltonian(&spec)?)?;
    let classification = classify_modes(&spec, &spectrum)?;
    let defect_site = spec.defect_site();
    let site1_intensities = spectrum.right_eigenvectors.iter().map(|v| v[0].norm_sqr()).collect();
    let defect_site_intensities = spectrum
        .right_eigenvectors
        .iter()
        .map(|v| v[defect_site - 1].norm_sqr())
        .collect();
    Ok(SweepRow {
        strength,
        eigenvalues: spectrum.eigenvalues,
        classification,
        site1_intensities,
        defect_site_intensities,
    })
}

/// Solves the lattice at each defect strength. Points run on the current
/// rayon pool; rows keep the input order.
pub fn sweep_defect_strength(template: &LatticeSpec, strengths: &[f64]) -> Result<SweepTable> {
    if strengths.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one strength".into()));
    }
    if !template.defect.is_present() {
        return Err(Error::InvalidArgument("sweep needs a defect variant other than none".into()));
    }
    if let Some(&bad) = strengths.iter().find(|s| !(**s >= 0.0) || !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("strength {bad} must be finite and >= 0")));
    }
    template.with_strength(strengths[0]).validate()?;

    let rows = strengths
        .par_iter()
        .map(|&s| {
            sweep_point(template, s).map_err(|e| Error::AtStrength {
                strength: s,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        template: *template,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DefectSpec;

    #[test]
    fn linspace_hits_endpoints_exactly() {
        let g = linspace(0.0, 1.5, 151);
        assert_eq!(g.len(), 151);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(g[150], 1.5);
        assert_eq!(linspace(0.3, 0.7, 1), vec![0.3]);
    }

    #[test]
    fn zero_mode_stays_real_for_asymmetric_coupling() {
        let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::asym(5, 0.0));
        let table = sweep_defect_strength(&template, &[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(table.rows.len(), 4);
        for row in &table.rows {
            assert!(row.zero_mode().im.abs() < 1e-8);
        }
        assert_eq!(table.rows[0].bound_pair(), None);
        assert!(table.rows[1].bound_pair().is_some());
    }

    #[test]
    fn pt_rightmost_dimer_at_c_is_imaginary() {
        let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::pt(12, 0.0));
        let table = sweep_defect_strength(&template, &[1.0]).unwrap();
        let e = table.rows[0].zero_mode();
        assert!(e.re.abs() < 1e-8);
        assert!(e.im.abs() > 1e-4);
    }

    #[test]
    fn rejects_bad_input() {
        let template = LatticeSpec::clean(25, 0.5, 1.0).with_defect(DefectSpec::asym(5, 0.0));
        assert!(sweep_defect_strength(&template, &[]).is_err());
        assert!(sweep_defect_strength(&template, &[0.1, -0.2]).is_err());
        assert!(sweep_defect_strength(&LatticeSpec::clean(25, 0.5, 1.0), &[0.1]).is_err());
    }
}
