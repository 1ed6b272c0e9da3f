//! Exact solution of one-dimensional n-cluster spin chains in a transverse
//! field.
//!
//! The chain `H = -J cos(phi) sum x z..z x + J sin(phi) sum z` maps to free
//! fermions. Everything downstream is built on the two-point function
//! `G_r` ([`correlators`]): spin and cluster correlators are Pfaffians of
//! contraction matrices ([`pauli`], [`wick`], [`observables`]), entanglement
//! comes from the same data ([`entanglement`]), and [`ed`] diagonalizes small
//! rings by brute force as an independent check.

pub mod correlators;
pub mod ed;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod observables;
pub mod params;
pub mod pauli;
pub mod quadrature;
pub mod wick;

pub use correlators::{
    build_table, finite_ring_table, g_correlator, CorrelatorTable, RingSector, TableCache,
};
pub use error::{Error, Result};
pub use model::{d2_energy_scan, energy_density, D2EnergyScan};
pub use params::{ModelParams, PHI_CRITICAL};
pub use pauli::{compile, Axis, Compiled, MajoranaMonomial, PauliString};
pub use quadrature::QuadratureSpec;
