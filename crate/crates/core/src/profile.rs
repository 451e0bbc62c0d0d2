use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileSource {
    Analytic,
    Numeric,
}

/// Per-site amplitudes of a single mode, phase-fixed, with normalized
/// intensities. Index 0 holds site 1.
#[derive(Clone, Debug, Serialize)]
pub struct ModeProfile {
    pub amplitudes: Vec<Complex64>,
    pub intensities: Vec<f64>,
    pub source: ProfileSource,
}

impl ModeProfile {
    /// Normalizes `amplitudes` to unit 2-norm and applies [`fix_phase`].
    pub fn new(amplitudes: &[Complex64], source: ProfileSource) -> ModeProfile {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut amplitudes: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        fix_phase(&mut amplitudes);
        let intensities = amplitudes.iter().map(|z| z.norm_sqr()).collect();
        ModeProfile {
            amplitudes,
            intensities,
            source,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.amplitudes.len()
    }

    /// Intensity at 1-based `site`.
    pub fn intensity(&self, site: usize) -> f64 {
        self.intensities[site - 1]
    }

    pub fn amplitude(&self, site: usize) -> Complex64 {
        self.amplitudes[site - 1]
    }

    /// 1-based site of maximal intensity (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.intensities.iter().enumerate() {
            if v > self.intensities[best] {
                best = i;
            }
        }
        best + 1
    }

    /// Max-norm distance between the amplitude vectors.
    pub fn max_distance(&self, other: &ModeProfile) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }
}

/// Index of the reference component used for phase fixing: the first entry
/// whose magnitude is within a relative 1e-12 of the maximum.
pub fn phase_reference(v: &[Complex64]) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

/// Rotates `v` by a global phase so its reference component is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    if v.is_empty() {
        return;
    }
    let r = v[phase_reference(v)];
    if r.norm() == 0.0 {
        return;
    }
    let rot = r.conj() / r.norm();
    for z in v.iter_mut() {
        *z *= rot;
    }
    let i = phase_reference(v);
    v[i] = Complex64::new(v[i].norm(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_fixes_phase() {
        let p = ModeProfile::new(
            &[Complex64::new(0.0, -2.0), Complex64::new(1.0, 0.0)],
            ProfileSource::Numeric,
        );
        assert_eq!(p.amplitude(1), Complex64::new(2.0 / 5f64.sqrt(), 0.0));
        assert!((p.amplitude(2) - Complex64::new(0.0, 1.0 / 5f64.sqrt())).norm() < 1e-15);
        assert!((p.intensities.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(p.argmax(), 1);
    }
}
