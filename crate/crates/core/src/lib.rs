//! Quantum transmission through 1-D arrays of δ-function barriers.
//!
//! The engine works in reduced units: positions in nm, barrier strengths as
//! `g = 2mJ/ħ²` in nm⁻¹ and wave numbers `k` in nm⁻¹, so the dimensionless
//! strength of barrier `n` at `k` is `λ = g/k`. The [`units`] module converts
//! from effective masses, eV·Å and meV.

pub mod array;
pub mod error;
pub mod filter;
pub mod matrix;
pub mod reduction;
pub mod resonance;
pub mod transfer;
pub mod units;

pub use array::{Barrier, BarrierArray, WaveNumber};
pub use error::{Error, Result};
pub use matrix::{lmatrix, single_transfer, Complex2x2, TransferMatrix};
pub use transfer::{compose, compose_expansion, m22_n2, reflection, transmission};
pub use units::Material;
