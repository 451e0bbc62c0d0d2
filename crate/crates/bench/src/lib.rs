//! Fixtures shared by the criterion benches.

use nhssh::{DefectSpec, LatticeSpec};

/// `n`-site lattice with `k = 0.5`, `c = 1` and a gain/loss dimer in the
/// middle at `gamma = 0.5`.
pub fn pt_lattice(n_sites: usize) -> LatticeSpec {
    let clean = LatticeSpec::clean(n_sites, 0.5, 1.0);
    let m = (clean.max_dimer() + 1) / 2;
    clean.with_defect(DefectSpec::pt(m, 0.5))
}
