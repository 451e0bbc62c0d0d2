//! Lattice and defect descriptions, and the dense coupled-mode Hamiltonian.
//!
//! Sites are numbered `1..=n_sites`. Bond `(n, n+1)` carries the weak coupling
//! `k` when `n` is odd and the strong coupling `c` when `n` is even. With an
//! odd site count the first bond is weak and the last one strong, so the left
//! edge hosts the zero mode. A defect always sits on the strong bond
//! `(2m, 2m+1)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectVariant {
    None,
    /// Hopping `2m+1 -> 2m` reduced to `c - g`; the reverse hop stays `c`.
    Asym,
    /// Gain `+i gamma` on site `2m`, loss `-i gamma` on site `2m+1`.
    Pt,
}

impl DefectVariant {
    pub fn name(self) -> &'static str {
        match self {
            DefectVariant::None => "none",
            DefectVariant::Asym => "asym",
            DefectVariant::Pt => "pt",
        }
    }
}

impl std::str::FromStr for DefectVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DefectVariant::None),
            "asym" => Ok(DefectVariant::Asym),
            "pt" => Ok(DefectVariant::Pt),
            other => Err(Error::InvalidArgument(format!(
                "unknown defect variant `{other}` (expected none, asym or pt)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectSpec {
    pub variant: DefectVariant,
    /// Dimer index; the defect occupies sites `2m` and `2m+1`.
    pub m: usize,
    /// `g` for [`DefectVariant::Asym`], `gamma` for [`DefectVariant::Pt`].
    pub strength: f64,
}

impl DefectSpec {
    pub fn none() -> Self {
        DefectSpec {
            variant: DefectVariant::None,
            m: 1,
            strength: 0.0,
        }
    }

    pub fn asym(m: usize, g: f64) -> Self {
        DefectSpec {
            variant: DefectVariant::Asym,
            m,
            strength: g,
        }
    }

    pub fn pt(m: usize, gamma: f64) -> Self {
        DefectSpec {
            variant: DefectVariant::Pt,
            m,
            strength: gamma,
        }
    }

    pub fn is_present(&self) -> bool {
        self.variant != DefectVariant::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n_sites: usize,
    pub k: f64,
    pub c: f64,
    pub defect: DefectSpec,
}

impl LatticeSpec {
    pub fn clean(n_sites: usize, k: f64, c: f64) -> Self {
        LatticeSpec {
            n_sites,
            k,
            c,
            defect: DefectSpec::none(),
        }
    }

    pub fn with_defect(self, defect: DefectSpec) -> Self {
        LatticeSpec { defect, ..self }
    }

    pub fn with_strength(self, strength: f64) -> Self {
        LatticeSpec {
            defect: DefectSpec {
                strength,
                ..self.defect
            },
            ..self
        }
    }

    /// Largest admissible dimer index.
    pub fn max_dimer(&self) -> usize {
        self.n_sites.saturating_sub(1) / 2
    }

    /// Site `2m+1`, the right-hand member of the defect dimer.
    pub fn defect_site(&self) -> usize {
        2 * self.defect.m + 1
    }

    /// Coupling on bond `(n, n+1)` of the defect-free chain.
    pub fn bond(&self, n: usize) -> f64 {
        if n % 2 == 1 {
            self.k
        } else {
            self.c
        }
    }

    /// Whether the defect strength is within `window` of the strong coupling.
    pub fn near_critical(&self, window: f64) -> bool {
        self.defect.is_present() && (self.defect.strength - self.c).abs() < window
    }

    pub fn validate(&self) -> Result<()> {
        let violations = validate_spec(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(violations))
        }
    }
}

/// Lists every violated invariant; empty when the spec is valid.
pub fn validate_spec(spec: &LatticeSpec) -> Vec<String> {
    let mut violations = Vec::new();
    if spec.n_sites % 2 == 0 {
        violations.push("n_sites must be odd".to_string());
    }
    if spec.n_sites < 3 {
        violations.push("n_sites must be at least 3".to_string());
    }
    if !spec.c.is_finite() || !(0.0 < spec.k && spec.k < spec.c) {
        violations.push("k must satisfy 0 < k < c".to_string());
    }
    if spec.defect.is_present() {
        let max = spec.max_dimer();
        if spec.defect.m < 1 || spec.defect.m > max {
            violations.push(format!(
                "m must satisfy 1 <= m <= (n_sites - 1)/2 = {max}"
            ));
        }
        if !(spec.defect.strength >= 0.0) || !spec.defect.strength.is_finite() {
            violations.push("defect strength must be finite and non-negative".to_string());
        }
    }
    violations
}

/// Dense complex matrix of the coupled-mode eigenproblem `E psi = H psi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<Complex64>,
    origin: Option<LatticeSpec>,
}

impl Hamiltonian {
    /// Wraps an arbitrary square matrix (no lattice provenance).
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        Ok(Hamiltonian {
            matrix,
            origin: None,
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row - 1, col - 1)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn origin(&self) -> Option<&LatticeSpec> {
        self.origin.as_ref()
    }

    pub fn apply(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * psi
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Hamiltonian {
        Hamiltonian {
            matrix: self.matrix.map(|z| z * factor),
            origin: None,
        }
    }
}

pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for site in 1..n {
        let t = Complex64::new(spec.bond(site), 0.0);
        h[(site - 1, site)] = t;
        h[(site, site - 1)] = t;
    }

    let m = spec.defect.m;
    let s = spec.defect.strength;
    match spec.defect.variant {
        DefectVariant::None => {}
        DefectVariant::Asym => {
            // row 2m couples to 2m+1 through c - g; row 2m+1 keeps c.
            h[(2 * m - 1, 2 * m)] = Complex64::new(spec.c - s, 0.0);
        }
        DefectVariant::Pt => {
            h[(2 * m - 1, 2 * m - 1)] = Complex64::new(0.0, s);
            h[(2 * m, 2 * m)] = Complex64::new(0.0, 0.0 - s);
        }
    }

    Ok(Hamiltonian {
        matrix: h,
        origin: Some(*spec),
    })
}
