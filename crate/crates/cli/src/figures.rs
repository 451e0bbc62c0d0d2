//! Parameter sets for each reproducible figure panel.
//!
//! All panels use a 25-site lattice with `k = 0.5`, `c = 1`.
//!
//! | panel        | lattice                   | pipeline                               |
//! |--------------|---------------------------|----------------------------------------|
//! | 2a, 2b       | asym, m = 5               | sweep g over 0:1.5:151                 |
//! | 2c, 2d, 2e, 2f | asym, m = 5             | zero mode at g = 0, 0.5, 1, 1.5        |
//! | 3a, 3b       | pt, m = 5                 | sweep gamma over 0:1.5:151             |
//! | 3c, 3d, 3e, 3f | pt, m = 5               | zero mode at gamma = 0, 0.2, 1, 1.1    |
//! | 4a           | pt, m = 12, gamma = 0     | excite site 1, z to 30 in 600 steps    |
//! | 4b           | pt, m = 12, gamma = 0     | excite site 25                         |
//! | 4c           | pt, m = 12, gamma = 0.5   | excite site 25                         |
//! | 4d           | pt, m = 12, gamma = 1     | excite site 25                         |
//!
//! Panels a and b of figures 2 and 3 share one table (real and imaginary
//! parts of the same sweep). Figure 4 panels write the dense grid layout.

use std::fmt;

use clap::ValueEnum;
use nhssh::{DefectSpec, LatticeSpec};

use crate::config::{CommandParams, EvolutionLayout, DEFAULT_STEPS, DEFAULT_Z_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Figure {
    #[value(name = "2a")]
    F2a,
    #[value(name = "2b")]
    F2b,
    #[value(name = "2c")]
    F2c,
    #[value(name = "2d")]
    F2d,
    #[value(name = "2e")]
    F2e,
    #[value(name = "2f")]
    F2f,
    #[value(name = "3a")]
    F3a,
    #[value(name = "3b")]
    F3b,
    #[value(name = "3c")]
    F3c,
    #[value(name = "3d")]
    F3d,
    #[value(name = "3e")]
    F3e,
    #[value(name = "3f")]
    F3f,
    #[value(name = "4a")]
    F4a,
    #[value(name = "4b")]
    F4b,
    #[value(name = "4c")]
    F4c,
    #[value(name = "4d")]
    F4d,
}

const N: usize = 25;
const K: f64 = 0.5;
const C: f64 = 1.0;
const DIMER: usize = 5;

impl Figure {
    pub const ALL: [Figure; 16] = [
        Figure::F2a,
        Figure::F2b,
        Figure::F2c,
        Figure::F2d,
        Figure::F2e,
        Figure::F2f,
        Figure::F3a,
        Figure::F3b,
        Figure::F3c,
        Figure::F3d,
        Figure::F3e,
        Figure::F3f,
        Figure::F4a,
        Figure::F4b,
        Figure::F4c,
        Figure::F4d,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Figure::F2a => "2a",
            Figure::F2b => "2b",
            Figure::F2c => "2c",
            Figure::F2d => "2d",
            Figure::F2e => "2e",
            Figure::F2f => "2f",
            Figure::F3a => "3a",
            Figure::F3b => "3b",
            Figure::F3c => "3c",
            Figure::F3d => "3d",
            Figure::F3e => "3e",
            Figure::F3f => "3f",
            Figure::F4a => "4a",
            Figure::F4b => "4b",
            Figure::F4c => "4c",
            Figure::F4d => "4d",
        }
    }

    pub fn lattice(self) -> LatticeSpec {
        let base = LatticeSpec::clean(N, K, C);
        let defect = match self {
            Figure::F2a | Figure::F2b | Figure::F2c => DefectSpec::asym(DIMER, 0.0),
            Figure::F2d => DefectSpec::asym(DIMER, 0.5),
            Figure::F2e => DefectSpec::asym(DIMER, C),
            Figure::F2f => DefectSpec::asym(DIMER, 1.5),
            Figure::F3a | Figure::F3b | Figure::F3c => DefectSpec::pt(DIMER, 0.0),
            Figure::F3d => DefectSpec::pt(DIMER, 0.2),
            Figure::F3e => DefectSpec::pt(DIMER, 1.0),
            Figure::F3f => DefectSpec::pt(DIMER, 1.1),
            Figure::F4a | Figure::F4b => DefectSpec::pt(base.max_dimer(), 0.0),
            Figure::F4c => DefectSpec::pt(base.max_dimer(), 0.5 * C),
            Figure::F4d => DefectSpec::pt(base.max_dimer(), C),
        };
        base.with_defect(defect)
    }

    pub fn params(self) -> CommandParams {
        let propagate = |site| CommandParams::Propagate {
            z_max: DEFAULT_Z_MAX,
            steps: DEFAULT_STEPS,
            site,
            layout: EvolutionLayout::Grid,
            grid: None,
        };
        match self {
            Figure::F2a | Figure::F2b | Figure::F3a | Figure::F3b => CommandParams::Sweep {
                start: 0.0,
                stop: 1.5,
                count: 151,
            },
            Figure::F4a => propagate(1),
            Figure::F4b | Figure::F4c | Figure::F4d => propagate(N),
            _ => CommandParams::Mode,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_panel_has_a_valid_lattice() {
        for fig in Figure::ALL {
            assert!(fig.lattice().validate().is_ok(), "{fig}");
            let parsed = Figure::from_str(fig.id(), false).unwrap();
            assert_eq!(parsed, fig);
        }
    }

    #[test]
    fn propagation_panels_excite_the_documented_edges() {
        assert!(matches!(Figure::F4a.params(), CommandParams::Propagate { site: 1, .. }));
        assert!(matches!(Figure::F4d.params(), CommandParams::Propagate { site: 25, .. }));
        assert_eq!(Figure::F4d.lattice().defect, DefectSpec::pt(12, 1.0));
        assert_eq!(Figure::F4c.lattice().defect.strength, 0.5);
    }
}
