//! Energies of an electron in a uniform magnetic field with a parallel
//! linear electric field, together with the first- and second-order
//! relativistic corrections to those energies.
//!
//! Everything below [`units`] works in dimensionless form: energies are in
//! units of `ħω_z`, the field strength enters through the frequency ratio
//! `w = ω_c/ω_z`, and the relativistic smallness is `ε = ħω_z/(m_e c²)`.
//!
//! * [`closed_form`] evaluates the analytic energy expressions, exactly when
//!   the inputs are rational.
//! * [`fock_oracle`] recomputes the same corrections by brute force on a
//!   truncated oscillator basis, with no knowledge of the closed forms.
//! * [`verify`] compares the two over a grid of quantum numbers.
//! * [`spectrum`] enumerates levels, groups degeneracies and locates the
//!   shifted level crossings of the perturbed spectrum.

pub mod closed_form;
pub mod error;
pub mod fock_oracle;
pub mod rational;
pub mod spectrum;
pub mod units;
pub mod verify;

pub use closed_form::{CaseId, EnergyDecomposition, FirstOrderTerms, ModelParams, Order, QuantumNumbers};
pub use error::{Error, Result};
pub use fock_oracle::{OracleConfig, TruncatedOperator};
pub use rational::{Rational, Scalar};
pub use spectrum::{Crossing, CrossingCluster, DegeneracyGroup, PairOutcome, SpectralLine};

pub use units::{PhysicalConfig, PhysicalConstants};

/// Crate version, recorded in CLI run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
