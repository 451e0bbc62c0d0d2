//! Closed-form zero modes obtained by wave matching, used as oracles for the
//! numerical eigensolver.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_hamiltonian, DefectSpec, DefectVariant, Hamiltonian, LatticeSpec};
use crate::profile::{ModeProfile, ProfileSource};
use crate::spectral::eigendecompose;

pub use crate::profile::fix_phase;

const BLOWUP: f64 = 1e12;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Zero mode of the defect-free chain: even sites vanish and
/// `psi_{2l+1} = (-k/c)^l psi_1`.
pub fn clean_zero_mode(n_sites: usize, k: f64, c: f64) -> Result<ModeProfile> {
    LatticeSpec::clean(n_sites, k, c).validate()?;
    let ratio = -k / c;
    let amplitudes: Vec<Complex64> = (0..n_sites)
        .map(|i| {
            if i % 2 == 0 {
                Complex64::new(ratio.powi((i / 2) as i32), 0.0)
            } else {
                zero()
            }
        })
        .collect();
    Ok(ModeProfile::new(&amplitudes, ProfileSource::Analytic))
}

/// Zero mode with an asymmetric coupling at `g = c` on dimer `m`. Row `2m`
/// reduces to `k psi_{2m-1} = 0`, so every site up to `2m` is dark and the
/// decaying tail restarts at site `2m+1`.
pub fn relocated_zero_mode_at_gc(spec: &LatticeSpec) -> Result<ModeProfile> {
    spec.validate()?;
    if spec.defect.variant != DefectVariant::Asym {
        return Err(Error::DefectMismatch {
            expected: DefectVariant::Asym.name(),
            found: spec.defect.variant.name(),
        });
    }
    if spec.defect.strength != spec.c {
        return Err(Error::InvalidArgument(format!(
            "relocated mode needs g = c = {}, got {}",
            spec.c, spec.defect.strength
        )));
    }
    let start = spec.defect_site() - 1;
    let ratio = -spec.k / spec.c;
    let amplitudes: Vec<Complex64> = (0..spec.n_sites)
        .map(|i| {
            if i < start || (i - start) % 2 == 1 {
                zero()
            } else {
                Complex64::new(ratio.powi(((i - start) / 2) as i32), 0.0)
            }
        })
        .collect();
    Ok(ModeProfile::new(&amplitudes, ProfileSource::Analytic))
}

fn require_rightmost_pt(spec: &LatticeSpec) -> Result<()> {
    spec.validate()?;
    if spec.defect.variant != DefectVariant::Pt {
        return Err(Error::DefectMismatch {
            expected: DefectVariant::Pt.name(),
            found: spec.defect.variant.name(),
        });
    }
    if spec.defect.m != spec.max_dimer() {
        return Err(Error::InvalidArgument(format!(
            "gain/loss dimer must be the rightmost one (m = {}), got m = {}",
            spec.max_dimer(),
            spec.defect.m
        )));
    }
    Ok(())
}

/// Amplitudes from a backward sweep starting at `psi_N = 1`: row `r` of
/// `E psi = H psi` is solved for `psi_{r-1}`. Entry 0 is site 1.
fn backward_recursion(h: &Hamiltonian, e: Complex64) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut psi = vec![zero(); n + 2];
    psi[n] = Complex64::new(1.0, 0.0);
    for r in (2..=n).rev() {
        let right = if r < n { h.entry(r, r + 1) * psi[r + 1] } else { zero() };
        psi[r - 1] = ((e - h.entry(r, r)) * psi[r] - right) / h.entry(r, r - 1);
        let magnitude = psi[r - 1].norm();
        if !(magnitude <= BLOWUP) {
            return Err(Error::RecursionBlowup { site: r - 1, magnitude });
        }
    }
    Ok(psi[1..=n].to_vec())
}

/// Right-edge mode for a gain/loss dimer on the last two sites at `gamma = c`.
/// `e_t` is the (purely imaginary) zero-mode eigenvalue from the eigensolver.
pub fn pt_right_edge_mode_at_gamma_c(spec: &LatticeSpec, e_t: Complex64) -> Result<ModeProfile> {
    require_rightmost_pt(spec)?;
    if spec.defect.strength != spec.c {
        return Err(Error::InvalidArgument(format!(
            "right-edge recursion needs gamma = c = {}, got {}",
            spec.c, spec.defect.strength
        )));
    }
    let h = build_hamiltonian(spec)?;
    let amplitudes = backward_recursion(&h, e_t)?;
    Ok(ModeProfile::new(&amplitudes, ProfileSource::Analytic))
}

/// `|| H psi - E psi ||_2` for a profile.
pub fn profile_residual(h: &Hamiltonian, profile: &ModeProfile, e: Complex64) -> f64 {
    let psi = profile.to_vector();
    (h.apply(&psi) - &psi * e).norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationStep {
    /// Row of the coupled-mode equations that was solved.
    pub row: usize,
    /// Site fixed by that row.
    pub site: usize,
    /// `psi_site / psi_N`.
    pub coefficient: Complex64,
    pub forced_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationReport {
    /// False unless `gamma = c`.
    pub applicable: bool,
    pub steps: Vec<EliminationStep>,
    /// Sites forced to vanish by the chain, ascending.
    pub forced_zero_sites: Vec<usize>,
    /// `(E psi_1 - k psi_2) / psi_N` with `E = 0`; nonzero forces `psi_N = 0`.
    pub closure_coefficient: Complex64,
    pub trivial_solution_forced: bool,
    pub min_abs_eigenvalue: f64,
    pub conclusion: String,
}

/// Assumes `E = 0` with the gain/loss dimer at the right edge, propagates the
/// coupled-mode rows from site N back to site 1 and checks that the last
/// unused row (row 1) can only be met by the zero vector.
pub fn verify_no_real_zero(spec: &LatticeSpec) -> Result<EliminationReport> {
    require_rightmost_pt(spec)?;
    let h = build_hamiltonian(spec)?;
    let spectrum = eigendecompose(&h)?;
    let min_abs_eigenvalue = spectrum
        .eigenvalues
        .iter()
        .map(|e| e.norm())
        .fold(f64::INFINITY, f64::min);

    let applicable = spec.defect.strength == spec.c;
    let coefficients = backward_recursion(&h, zero())?;
    let n = spec.n_sites;
    let steps: Vec<EliminationStep> = (2..=n)
        .rev()
        .map(|row| EliminationStep {
            row,
            site: row - 1,
            coefficient: coefficients[row - 2],
            forced_zero: coefficients[row - 2] == zero(),
        })
        .collect();
    let mut forced_zero_sites: Vec<usize> = steps.iter().filter(|s| s.forced_zero).map(|s| s.site).collect();
    forced_zero_sites.sort_unstable();
    let closure_coefficient = h.entry(1, 1) * coefficients[0] + h.entry(1, 2) * coefficients[1];
    let trivial_solution_forced = applicable && closure_coefficient != zero();

    let conclusion = if !applicable {
        format!(
            "not applicable: gamma = {} != c = {}; min |E| = {:e}",
            spec.defect.strength, spec.c, min_abs_eigenvalue
        )
    } else if trivial_solution_forced {
        format!(
            "trivial solution forced: sites {:?} vanish and row 1 requires psi_{} = 0; min |E| = {:e}",
            forced_zero_sites, n, min_abs_eigenvalue
        )
    } else {
        format!("row 1 closes with a nonzero psi_{n}; E = 0 admits a mode")
    };

    Ok(EliminationReport {
        applicable,
        steps,
        forced_zero_sites,
        closure_coefficient,
        trivial_solution_forced,
        min_abs_eigenvalue,
        conclusion,
    })
}

pub fn verify_no_real_zero_at_gamma_c(n_sites: usize, k: f64, c: f64) -> Result<EliminationReport> {
    let spec = LatticeSpec::clean(n_sites, k, c).with_defect(DefectSpec::pt((n_sites.max(3) - 1) / 2, c));
    verify_no_real_zero(&spec)
}
