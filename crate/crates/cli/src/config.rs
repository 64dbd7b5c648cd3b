//! JSON experiment description, schema version 1.

use std::path::Path;

use deltarray_core::filter::{flatten, Cell, Composition};
use deltarray_core::units::{reduced_strength, Material, PhysicalArraySpec};
use deltarray_core::BarrierArray;
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Preset(String),
    Custom { label: String, effective_mass_ratio: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BarrierSpec {
    pub x_nm: f64,
    #[serde(rename = "J_eVA")]
    pub j_eva: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CellSpec {
    #[serde(default)]
    pub label: Option<String>,
    pub barriers: Vec<BarrierSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[allow(non_snake_case)]
pub struct ScanSpec {
    pub emin_meV: f64,
    pub emax_meV: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
pub struct ResonanceSpec {
    pub grid: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
pub struct ReduceSpec {
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
pub struct DesignSpec {
    #[serde(rename = "J_eVA")]
    pub j_eva: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub material: MaterialSpec,
    #[serde(default)]
    pub barriers: Option<Vec<BarrierSpec>>,
    #[serde(default)]
    pub cells: Option<Vec<CellSpec>>,
    #[serde(default)]
    pub spacers_nm: Option<Vec<f64>>,
    #[serde(default)]
    pub scan: Option<ScanSpec>,
    #[serde(default)]
    pub resonances: ResonanceSpec,
    #[serde(default)]
    pub reduce: ReduceSpec,
    #[serde(default)]
    pub design: DesignSpec,
}

/// Config after validation, with the barrier geometry in reduced units.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub material: Material,
    pub array: BarrierArray,
    /// Physical (x nm, J eV·Å) of the flattened array.
    pub physical: Vec<(f64, f64)>,
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(config_err)?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                cfg.schema
            )));
        }
        if let Some(s) = cfg.scan {
            if !(s.emin_meV > 0.0 && s.emin_meV < s.emax_meV && s.emax_meV.is_finite()) || s.points < 2 {
                return Err(CliError::Config(format!(
                    "bad scan range: [{}, {}] meV with {} points",
                    s.emin_meV, s.emax_meV, s.points
                )));
            }
        }
        Ok(cfg)
    }

    pub fn material(&self) -> Result<Material, CliError> {
        match &self.material {
            MaterialSpec::Preset(name) => Material::preset(name).map_err(config_err),
            MaterialSpec::Custom { label, effective_mass_ratio } => {
                Material::new(label.clone(), *effective_mass_ratio).map_err(config_err)
            }
        }
    }

    pub fn build(self) -> Result<Experiment, CliError> {
        let material = self.material()?;
        let physical: Vec<(f64, f64)> = match (&self.barriers, &self.cells) {
            (Some(b), None) => b.iter().map(|b| (b.x_nm, b.j_eva)).collect(),
            (None, Some(cells)) => {
                let built = cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let arr = BarrierArray::from_pairs(c.barriers.iter().map(|b| (b.x_nm, b.j_eva)))
                            .map_err(config_err)?;
                        Cell::new(arr, c.label.clone().unwrap_or_else(|| format!("cell{i}")))
                            .map_err(config_err)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let spacers = self.spacers_nm.clone().unwrap_or_default();
                let comp = Composition::new(built, spacers).map_err(config_err)?;
                // flattened in physical units: J rides along in the g slot
                flatten(&comp)
                    .map_err(config_err)?
                    .barriers()
                    .iter()
                    .map(|b| (b.x, b.g))
                    .collect()
            }
            _ => return Err(CliError::Config("exactly one of `barriers` or `cells` must be present".into())),
        };
        if physical.is_empty() {
            return Err(CliError::Config("empty array".into()));
        }
        let spec = PhysicalArraySpec::new(material.clone(), physical.clone()).map_err(config_err)?;
        Ok(Experiment { array: spec.to_reduced(), material, physical, config: self })
    }
}

impl Experiment {
    pub fn scan(&self) -> Result<ScanSpec, CliError> {
        self.config.scan.ok_or_else(|| CliError::Config("missing `scan` block".into()))
    }

    /// eV·Å equivalent of a reduced strength.
    pub fn strength_ev_angstrom(&self, g: f64) -> f64 {
        g / reduced_strength(1.0, &self.material)
    }
}
