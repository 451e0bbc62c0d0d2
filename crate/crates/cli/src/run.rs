//! Executes a [`RunConfig`] and writes its artifacts.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use nhssh::dynamics::{delta_excitation, localization_score, propagate, EvolutionRecord};
use nhssh::output::{
    fmt_f64, write_evolution_csv, write_evolution_grid, write_profile_csv, write_spectrum_csv, write_sweep_csv,
};
use nhssh::spectral::{
    classify_modes, linspace, locate_exceptional_point_scan, sweep_defect_strength, EPReport, ModeClassification,
};
use nhssh::{build_hamiltonian, eigendecompose, Complex64, LatticeSpec, ModeProfile, ProfileSource, Spectrum};

use crate::config::{CommandParams, EvolutionLayout, OutputFormat, RunConfig};

pub const EP_HEADER: &str = "parameter_value,min_eigenvalue_gap,max_eigenvector_overlap";

/// Runs the pipeline, writes the output and returns the one-line summary.
pub fn run(config: &RunConfig) -> Result<String> {
    match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.get())
            .build()
            .context("cannot start worker pool")?
            .install(|| execute(config)),
        None => execute(config),
    }
}

fn execute(config: &RunConfig) -> Result<String> {
    let spec = &config.lattice;
    let json = config.output_format == OutputFormat::Json;
    let mut out = Vec::new();

    let result = match &config.params {
        CommandParams::Spectrum => {
            let spectrum = eigendecompose(&build_hamiltonian(spec)?)?;
            if json {
                write_json(&mut out, &SpectrumDoc { lattice: spec, spectrum: &spectrum })?;
            } else {
                write_spectrum_csv(&mut out, &spectrum)?;
            }
            let zero = match classify_modes(spec, &spectrum) {
                Ok(class) => format!("zero mode E = {}", fmt_complex(spectrum.eigenvalues[class.zero_mode_index])),
                Err(e) => format!("no zero mode ({e})"),
            };
            format!(
                "{} eigenvalues, {zero}, max residual {}",
                spectrum.dim(),
                fmt_f64(spectrum.max_residual())
            )
        }
        CommandParams::Mode => {
            let spectrum = eigendecompose(&build_hamiltonian(spec)?)?;
            let class = classify_modes(spec, &spectrum)?;
            let energy = spectrum.eigenvalues[class.zero_mode_index];
            let profile = ModeProfile::new(
                spectrum.right_eigenvectors[class.zero_mode_index].as_slice(),
                ProfileSource::Numeric,
            );
            if json {
                write_json(
                    &mut out,
                    &ModeDoc {
                        lattice: spec,
                        energy,
                        classification: &class,
                        profile: &profile,
                    },
                )?;
            } else {
                write_profile_csv(&mut out, &profile)?;
            }
            format!(
                "zero mode E = {}, argmax site {}, site-1 intensity {}",
                fmt_complex(energy),
                profile.argmax(),
                fmt_f64(profile.intensity(1))
            )
        }
        CommandParams::Sweep { start, stop, count } => {
            let table = sweep_defect_strength(spec, &linspace(*start, *stop, *count))?;
            if json {
                write_json(&mut out, &table)?;
            } else {
                write_sweep_csv(&mut out, &table)?;
            }
            let last = table.rows.last().expect("sweep has rows");
            format!(
                "{} points over [{}, {}], zero mode at {} is E = {}",
                table.rows.len(),
                fmt_f64(*start),
                fmt_f64(*stop),
                fmt_f64(last.strength),
                fmt_complex(last.zero_mode())
            )
        }
        CommandParams::Ep {
            bracket,
            scan_points,
            tol,
        } => {
            let report = locate_exceptional_point_scan(spec, *bracket, *tol, *scan_points)?;
            if json {
                write_json(&mut out, &EpDoc { lattice: spec, bracket: *bracket, report: &report })?;
            } else {
                writeln!(out, "{EP_HEADER}")?;
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(report.parameter_value),
                    fmt_f64(report.min_eigenvalue_gap),
                    fmt_f64(report.max_eigenvector_overlap)
                )?;
            }
            format!(
                "exceptional point at strength {} (overlap {}, gap {})",
                fmt_f64(report.parameter_value),
                fmt_f64(report.max_eigenvector_overlap),
                fmt_f64(report.min_eigenvalue_gap)
            )
        }
        CommandParams::Propagate {
            z_max,
            steps,
            site,
            layout,
            grid,
        } => {
            let h = build_hamiltonian(spec)?;
            let record = propagate(&h, &delta_excitation(spec.n_sites, *site)?, *z_max, *steps)?;
            if json {
                write_json(&mut out, &EvolutionDoc { lattice: spec, site: *site, record: &record })?;
            } else {
                match layout {
                    EvolutionLayout::Long => write_evolution_csv(&mut out, &record)?,
                    EvolutionLayout::Grid => write_evolution_grid(&mut out, &record)?,
                }
            }
            if let Some(path) = grid {
                let mut buf = Vec::new();
                write_evolution_grid(&mut buf, &record)?;
                write_atomic(path, &buf)?;
            }
            format!(
                "excite site {site}, z_max {}, {steps} steps, localization at site {site} = {}",
                fmt_f64(*z_max),
                fmt_f64(localization_score(&record, *site))
            )
        }
    };

    match &config.output_path {
        Some(path) => write_atomic(path, &out)?,
        None => io::stdout().lock().write_all(&out)?,
    }
    Ok(summary_prefix(config) + &result)
}

fn summary_prefix(config: &RunConfig) -> String {
    let spec = &config.lattice;
    let figure = config.figure.map(|f| format!(" {f}")).unwrap_or_default();
    let defect = if spec.defect.is_present() {
        format!(
            "{} m={} strength={}",
            spec.defect.variant.name(),
            spec.defect.m,
            fmt_f64(spec.defect.strength)
        )
    } else {
        "none".to_string()
    };
    format!("{}{figure}: n={} defect={defect}: ", config.command.name(), spec.n_sites)
}

pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

fn write_json<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.push(b'\n');
    Ok(())
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumDoc<'a> {
    lattice: &'a LatticeSpec,
    spectrum: &'a Spectrum,
}

#[derive(Serialize)]
struct ModeDoc<'a> {
    lattice: &'a LatticeSpec,
    energy: Complex64,
    classification: &'a ModeClassification,
    profile: &'a ModeProfile,
}

#[derive(Serialize)]
struct EpDoc<'a> {
    lattice: &'a LatticeSpec,
    bracket: (f64, f64),
    report: &'a EPReport,
}

#[derive(Serialize)]
struct EvolutionDoc<'a> {
    lattice: &'a LatticeSpec,
    site: usize,
    record: &'a EvolutionRecord,
}
