use num_complex::Complex64;
use serde::Serialize;

use super::{classify_modes, eigendecompose, Spectrum};
use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, LatticeSpec};

/// Default number of points in the coarse scan.
pub const SCAN_POINTS: usize = 41;
/// Overlap the best point must exceed to count as an exceptional point.
const MIN_OVERLAP: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EPReport {
    pub parameter_value: f64,
    pub min_eigenvalue_gap: f64,
    pub max_eigenvector_overlap: f64,
}

/// Eigenvalue gap and eigenvector overlap of one tracked pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSample {
    pub gap: f64,
    pub overlap: f64,
}

pub fn pair_sample(spectrum: &Spectrum, i: usize, j: usize) -> PairSample {
    let (vi, vj) = (&spectrum.right_eigenvectors[i], &spectrum.right_eigenvectors[j]);
    let inner: Complex64 = vi.dotc(vj);
    PairSample {
        gap: (spectrum.eigenvalues[i] - spectrum.eigenvalues[j]).norm(),
        overlap: inner.norm() / (vi.norm() * vj.norm()),
    }
}

/// Maximizes the pair overlap returned by `sample` over `bracket`: a coarse
/// scan locates the peak, golden-section search refines it to `tolerance`.
pub fn locate_exceptional_point_with<F>(bracket: (f64, f64), tolerance: f64, sample: F) -> Result<EPReport>
where
    F: Fn(f64) -> Result<PairSample>,
{
    search(bracket, tolerance, SCAN_POINTS, sample)
}

fn search<F>(bracket: (f64, f64), tolerance: f64, scan_points: usize, sample: F) -> Result<EPReport>
where
    F: Fn(f64) -> Result<PairSample>,
{
    let (lo, hi) = bracket;
    if !(lo < hi) || !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bad bracket [{lo}, {hi}] or tolerance {tolerance}"
        )));
    }
    if scan_points < 3 {
        return Err(Error::InvalidArgument(format!("scan needs at least 3 points, got {scan_points}")));
    }

    let mut best = (lo, sample(lo)?);
    let consider = |x: f64, s: PairSample, best: &mut (f64, PairSample)| {
        if s.overlap > best.1.overlap {
            *best = (x, s);
        }
    };

    let step = (hi - lo) / (scan_points - 1) as f64;
    let mut peak = 0;
    for i in 1..scan_points {
        let x = lo + (hi - lo) * i as f64 / (scan_points - 1) as f64;
        let s = sample(x)?;
        if s.overlap > best.1.overlap {
            peak = i;
        }
        consider(x, s, &mut best);
    }

    let centre = lo + step * peak as f64;
    let (mut a, mut b) = ((centre - step).max(lo), (centre + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    // Inside the refinement window a failed sample means the eigenproblem has
    // become too ill-conditioned to resolve the pair; keep the best point so far.
    let refine = |x: f64| match sample(x) {
        Ok(s) => Ok(Some(s)),
        Err(Error::NoZeroMode { .. } | Error::AmbiguousZeroMode { .. } | Error::ResidualExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let (Some(mut s1), Some(mut s2)) = (refine(x1)?, refine(x2)?) else {
        return finish(lo, hi, best);
    };
    consider(x1, s1, &mut best);
    consider(x2, s2, &mut best);
    while b - a > tolerance {
        if s1.overlap >= s2.overlap {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - inv_phi * (b - a);
            let Some(s) = refine(x1)? else { break };
            s1 = s;
            consider(x1, s1, &mut best);
        } else {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + inv_phi * (b - a);
            let Some(s) = refine(x2)? else { break };
            s2 = s;
            consider(x2, s2, &mut best);
        }
    }
    finish(lo, hi, best)
}

fn finish(lo: f64, hi: f64, best: (f64, PairSample)) -> Result<EPReport> {
    let (x, s) = best;
    if s.overlap <= MIN_OVERLAP {
        return Err(Error::NoExceptionalPoint {
            lo,
            hi,
            best_overlap: s.overlap,
        });
    }
    Ok(EPReport {
        parameter_value: x,
        min_eigenvalue_gap: s.gap,
        max_eigenvector_overlap: s.overlap.min(1.0),
    })
}

/// Exceptional point of the defect-bound pair as the defect strength varies.
pub fn locate_exceptional_point(template: &LatticeSpec, bracket: (f64, f64), tolerance: f64) -> Result<EPReport> {
    locate_exceptional_point_scan(template, bracket, tolerance, SCAN_POINTS)
}

/// As [`locate_exceptional_point`] with an explicit coarse-scan resolution.
pub fn locate_exceptional_point_scan(
    template: &LatticeSpec,
    bracket: (f64, f64),
    tolerance: f64,
    scan_points: usize,
) -> Result<EPReport> {
    if !template.defect.is_present() {
        return Err(Error::InvalidArgument("exceptional point search needs a defect".into()));
    }
    search(bracket, tolerance, scan_points, |strength| {
        let spec = template.with_strength(strength);
        let spectrum = eigendecompose(&build_hamiltonian(&spec)?)?;
        let class = classify_modes(&spec, &spectrum)?;
        // Without the defect the lattice is Hermitian and no pair is tracked;
        // eigenvectors there are orthogonal.
        Ok(match class.bound_pair_indices {
            Some((i, j)) => pair_sample(&spectrum, i, j),
            None => PairSample {
                gap: f64::INFINITY,
                overlap: 0.0,
            },
        })
    })
}
