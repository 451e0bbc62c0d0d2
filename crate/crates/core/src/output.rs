//! CSV writers. Floats use the shortest representation that round-trips
//! (at most 17 significant digits), switching to exponent notation outside
//! `[1e-5, 1e16)`, so identical inputs give byte-identical files.

use std::io::{self, Write};

use crate::dynamics::EvolutionRecord;
use crate::profile::ModeProfile;
use crate::spectral::{Spectrum, SweepTable};

pub const SPECTRUM_HEADER: &str = "index,re_E,im_E,residual";
pub const SWEEP_HEADER: &str = "param,mode_index,re_E,im_E,site1_intensity,defect_site_intensity";
pub const PROFILE_HEADER: &str = "site,re_psi,im_psi,intensity";
pub const EVOLUTION_HEADER: &str = "z,site,norm_intensity";

pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &Spectrum) -> io::Result<()> {
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for (i, (e, r)) in spectrum.eigenvalues.iter().zip(&spectrum.residuals).enumerate() {
        writeln!(w, "{},{},{},{}", i + 1, fmt_f64(e.re), fmt_f64(e.im), fmt_f64(*r))?;
    }
    Ok(())
}

/// One line per (strength, mode); `mode_index` is the 1-based position in the
/// sorted eigenvalue list and the intensities belong to that mode.
pub fn write_sweep_csv<W: Write>(mut w: W, table: &SweepTable) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for row in &table.rows {
        for (i, e) in row.eigenvalues.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(row.strength),
                i + 1,
                fmt_f64(e.re),
                fmt_f64(e.im),
                fmt_f64(row.site1_intensities[i]),
                fmt_f64(row.defect_site_intensities[i])
            )?;
        }
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(mut w: W, profile: &ModeProfile) -> io::Result<()> {
    writeln!(w, "{PROFILE_HEADER}")?;
    for (i, (a, p)) in profile.amplitudes.iter().zip(&profile.intensities).enumerate() {
        writeln!(w, "{},{},{},{}", i + 1, fmt_f64(a.re), fmt_f64(a.im), fmt_f64(*p))?;
    }
    Ok(())
}

/// Long format: one line per (z, site).
pub fn write_evolution_csv<W: Write>(mut w: W, record: &EvolutionRecord) -> io::Result<()> {
    writeln!(w, "{EVOLUTION_HEADER}")?;
    for (z, row) in record.z_grid.iter().zip(&record.normalized_intensities) {
        let z = fmt_f64(*z);
        for (site, p) in row.iter().enumerate() {
            writeln!(w, "{z},{},{}", site + 1, fmt_f64(*p))?;
        }
    }
    Ok(())
}

/// Dense grid: a `# zsteps=<rows> nsites=<cols>` line, then one comma-separated
/// row of normalized intensities per z.
pub fn write_evolution_grid<W: Write>(mut w: W, record: &EvolutionRecord) -> io::Result<()> {
    writeln!(w, "# zsteps={} nsites={}", record.z_grid.len(), record.n_sites())?;
    for row in &record.normalized_intensities {
        let line: Vec<String> = row.iter().map(|p| fmt_f64(*p)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileSource;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(-1.5), "-1.5");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(fmt_f64(1e-12), "1e-12");
        assert_eq!(fmt_f64(2.5e20), "2.5e20");
    }

    #[test]
    fn profile_csv_layout() {
        let p = ModeProfile::new(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], ProfileSource::Analytic);
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &p).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "site,re_psi,im_psi,intensity\n1,1,0,1\n2,0,0,0\n");
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_f64(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            let digits = s.trim_start_matches('-').split('e').next().unwrap()
                .chars().filter(|ch| ch.is_ascii_digit()).collect::<String>();
            prop_assert!(digits.trim_start_matches('0').len() <= 17);
        }
    }
}
