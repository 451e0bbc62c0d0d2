//! Simulation and analysis of one-dimensional SSH coupled-resonator lattices
//! carrying a single non-Hermitian defect: either an asymmetric strong
//! coupling or a balanced gain/loss dimer.
//!
//! The pieces are
//! - [`lattice`]: lattice specs and the dense Hamiltonian,
//! - [`spectral`]: eigendecomposition, zero-mode and bound-pair
//!   classification, strength sweeps, exceptional-point search,
//! - [`analytic`]: wave-matching zero-mode oracles,
//! - [`dynamics`]: propagation of `i dpsi/dz = H psi`,
//! - [`output`]: CSV writers with fixed float formatting.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod output;
pub mod profile;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{build_hamiltonian, validate_spec, DefectSpec, DefectVariant, Hamiltonian, LatticeSpec};
pub use profile::{ModeProfile, ProfileSource};
pub use spectral::{eigendecompose, Spectrum};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
