use num_complex::Complex64;
use serde::Serialize;

use super::Spectrum;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::profile::{ModeProfile, ProfileSource};

/// Indices into [`Spectrum::eigenvalues`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeClassification {
    pub zero_mode_index: usize,
    /// The two defect-bound gap modes, lower index first.
    pub bound_pair_indices: Option<(usize, usize)>,
    pub band_indices: Vec<usize>,
}

pub fn zero_mode_tolerance(c: f64) -> f64 {
    1e-8 * c.max(1.0)
}

/// Distance in the complex plane from `e` to the clean infinite-lattice bands
/// `[-(c+k), -(c-k)]` and `[c-k, c+k]`.
pub fn isolation_score(e: Complex64, k: f64, c: f64) -> f64 {
    let (inner, outer) = (c - k, c + k);
    let x = e.re.abs();
    let dx = if x < inner {
        inner - x
    } else if x > outer {
        x - outer
    } else {
        0.0
    };
    dx.hypot(e.im)
}

/// Picks the zero mode among eigenvalues with `|Re E|` below tolerance (the
/// smallest `|E|` wins) and, when a defect is switched on, the two most
/// isolated remaining eigenvalues as the bound pair.
pub fn classify_modes(spec: &LatticeSpec, spectrum: &Spectrum) -> Result<ModeClassification> {
    let tol = zero_mode_tolerance(spec.c);
    let eigs = &spectrum.eigenvalues;

    let mut candidates: Vec<usize> = (0..eigs.len()).filter(|&i| eigs[i].re.abs() < tol).collect();
    candidates.sort_by(|&a, &b| eigs[a].norm().total_cmp(&eigs[b].norm()).then(a.cmp(&b)));
    let zero = *candidates.first().ok_or(Error::NoZeroMode { tolerance: tol })?;
    if let Some(&rival) = candidates.iter().skip(1).find(|&&j| (eigs[j] - eigs[zero]).norm() < tol) {
        return Err(Error::AmbiguousZeroMode {
            first: eigs[zero].to_string(),
            second: eigs[rival].to_string(),
        });
    }

    let bound_pair = if spec.defect.is_present() && spec.defect.strength > 0.0 {
        let mut rest: Vec<(usize, f64)> = (0..eigs.len())
            .filter(|&i| i != zero)
            .map(|i| (i, isolation_score(eigs[i], spec.k, spec.c)))
            .collect();
        rest.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        match rest.as_slice() {
            [a, b, ..] => Some((a.0.min(b.0), a.0.max(b.0))),
            _ => None,
        }
    } else {
        None
    };

    let band_indices = (0..eigs.len())
        .filter(|&i| i != zero && bound_pair.map_or(true, |(a, b)| i != a && i != b))
        .collect();

    Ok(ModeClassification {
        zero_mode_index: zero,
        bound_pair_indices: bound_pair,
        band_indices,
    })
}

pub fn zero_mode_profile(spec: &LatticeSpec, spectrum: &Spectrum) -> Result<ModeProfile> {
    let class = classify_modes(spec, spectrum)?;
    let v = &spectrum.right_eigenvectors[class.zero_mode_index];
    Ok(ModeProfile::new(v.as_slice(), ProfileSource::Numeric))
}
