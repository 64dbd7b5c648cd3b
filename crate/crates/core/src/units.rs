//! Physical units layer.
//!
//! Converts effective masses, eV·Å strengths, nm positions and meV energies
//! into the reduced quantities used by the engine (`g` and `k`, both nm⁻¹).
//! The constants below are fixed so conversions are bit-stable.

use serde::Serialize;

use crate::array::{Barrier, BarrierArray};
use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.1093837015e-31;
/// One electronvolt, J.
pub const ELECTRON_VOLT: f64 = 1.602176634e-19;
/// One ångström, m.
pub const ANGSTROM: f64 = 1e-10;
/// One nanometre, m.
pub const NANOMETRE: f64 = 1e-9;

/// Name/value table of the pinned constants.
pub const CONSTANTS: [(&str, f64, &str); 5] = [
    ("hbar", HBAR, "J s"),
    ("electron_mass", ELECTRON_MASS, "kg"),
    ("electron_volt", ELECTRON_VOLT, "J"),
    ("angstrom", ANGSTROM, "m"),
    ("nanometre", NANOMETRE, "m"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Material {
    effective_mass_ratio: f64,
    label: String,
}

impl Material {
    pub fn new(label: impl Into<String>, effective_mass_ratio: f64) -> Result<Self> {
        if !(effective_mass_ratio > 0.0 && effective_mass_ratio.is_finite()) {
            return Err(Error::InvalidMaterial(format!(
                "effective mass ratio must be positive, got {effective_mass_ratio}"
            )));
        }
        Ok(Self { effective_mass_ratio, label: label.into() })
    }

    pub fn gaas() -> Self {
        Self { effective_mass_ratio: 0.067, label: "GaAs".into() }
    }

    pub fn vacuum() -> Self {
        Self { effective_mass_ratio: 1.0, label: "vacuum".into() }
    }

    /// Built-in presets, matched case-insensitively.
    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gaas" => Ok(Self::gaas()),
            "vacuum" => Ok(Self::vacuum()),
            _ => Err(Error::InvalidMaterial(format!("unknown preset {name:?}"))),
        }
    }

    pub fn effective_mass_ratio(&self) -> f64 {
        self.effective_mass_ratio
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn mass(&self) -> f64 {
        self.effective_mass_ratio * ELECTRON_MASS
    }
}

/// `g = 2mJ/ħ²` in nm⁻¹ for a strength `j_ev_angstrom` in eV·Å.
pub fn reduced_strength(j_ev_angstrom: f64, material: &Material) -> f64 {
    let j = j_ev_angstrom * ELECTRON_VOLT * ANGSTROM;
    2.0 * material.mass() * j / (HBAR * HBAR) * NANOMETRE
}

/// `k = √(2mε)/ħ` in nm⁻¹ for an energy in meV.
pub fn k_from_energy(energy_mev: f64, material: &Material) -> Result<f64> {
    if !(energy_mev > 0.0 && energy_mev.is_finite()) {
        return Err(Error::NonPositiveEnergy(energy_mev));
    }
    let e = energy_mev * 1e-3 * ELECTRON_VOLT;
    Ok((2.0 * material.mass() * e).sqrt() / HBAR * NANOMETRE)
}

/// Inverse of [`k_from_energy`].
pub fn energy_from_k(k: f64, material: &Material) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::NonPositiveWaveNumber(k));
    }
    let p = k / NANOMETRE * HBAR;
    Ok(p * p / (2.0 * material.mass()) / ELECTRON_VOLT * 1e3)
}

/// Barriers in physical units: positions in nm, strengths in eV·Å.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalArraySpec {
    pub material: Material,
    barriers: Vec<(f64, f64)>,
}

impl PhysicalArraySpec {
    pub fn new(material: Material, barriers: Vec<(f64, f64)>) -> Result<Self> {
        // validates ordering and finiteness
        BarrierArray::from_pairs(barriers.iter().copied())?;
        Ok(Self { material, barriers })
    }

    pub fn barriers(&self) -> &[(f64, f64)] {
        &self.barriers
    }

    pub fn to_reduced(&self) -> BarrierArray {
        let barriers = self
            .barriers
            .iter()
            .map(|&(x, j)| Barrier { x, g: reduced_strength(j, &self.material) })
            .collect();
        BarrierArray::new(barriers).expect("validated at construction")
    }
}
