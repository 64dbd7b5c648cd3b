//! Cell composition and shared-resonance energy filters.
//!
//! A cell is a small array that tunnels perfectly at its own set of energies.
//! Cells placed in series tunnel perfectly only where every cell does, so two
//! cells sharing exactly one resonance select that energy.

use std::f64::consts::PI;

use serde::Serialize;

use crate::array::{Barrier, BarrierArray};
use crate::error::{Error, Result};
use crate::resonance::{find_perfect_tunnelling, SearchOptions, Spectrum};
use crate::units::{k_from_energy, reduced_strength, Material};

/// Default tolerance for pairing cell resonances, meV.
pub const DEFAULT_MATCH_TOL_MEV: f64 = 0.05;
/// Default peak prominence, probability units.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    array: BarrierArray,
    pub label: String,
}

impl Cell {
    /// Cell-local positions must start at 0.
    pub fn new(array: BarrierArray, label: impl Into<String>) -> Result<Self> {
        match array.barriers().first() {
            None => Err(Error::EmptyArray),
            Some(b) if b.x != 0.0 => Err(Error::InvalidCell(format!(
                "first barrier must sit at 0, found {}",
                b.x
            ))),
            Some(_) => Ok(Self { array, label: label.into() }),
        }
    }

    /// Equal-strength pair at `0` and `d`.
    pub fn pair(g: f64, d: f64, label: impl Into<String>) -> Result<Self> {
        Self::new(BarrierArray::from_pairs([(0.0, g), (d, g)])?, label)
    }

    pub fn array(&self) -> &BarrierArray {
        &self.array
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Composition {
    cells: Vec<Cell>,
    spacers: Vec<f64>,
}

impl Composition {
    /// `spacers[i]` is the gap between the last barrier of cell `i` and the
    /// first barrier of cell `i + 1`.
    pub fn new(cells: Vec<Cell>, spacers: Vec<f64>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyArray);
        }
        if spacers.len() != cells.len() - 1 {
            return Err(Error::InvalidInput(format!(
                "{} cells need {} spacers, got {}",
                cells.len(),
                cells.len() - 1,
                spacers.len()
            )));
        }
        if let Some((index, &value)) = spacers.iter().enumerate().find(|(_, &s)| !(s > 0.0)) {
            return Err(Error::OverlappingCells { index, value });
        }
        Ok(Self { cells, spacers })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn spacers(&self) -> &[f64] {
        &self.spacers
    }
}

/// Concatenates the cells into one global array.
pub fn flatten(comp: &Composition) -> Result<BarrierArray> {
    let mut out = Vec::new();
    let mut offset = 0.0;
    for (i, cell) in comp.cells.iter().enumerate() {
        if i > 0 {
            offset += comp.cells[i - 1].array.extent() + comp.spacers[i - 1];
        }
        out.extend(cell.array.barriers().iter().map(|b| Barrier { x: b.x + offset, g: b.g }));
    }
    BarrierArray::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharedResonance {
    pub energy_a: f64,
    pub energy_b: f64,
    pub matched: f64,
}

/// Pairs perfect-tunnelling energies of two cells that lie within
/// `match_tol_mev` of each other. Each resonance is used at most once; the
/// closest pairs are taken first.
pub fn shared_resonances(
    a: &Cell,
    b: &Cell,
    material: &Material,
    k_min: f64,
    k_max: f64,
    match_tol_mev: f64,
    opts: SearchOptions,
) -> Result<Vec<SharedResonance>> {
    let energies = |c: &Cell| -> Result<Vec<f64>> {
        Ok(find_perfect_tunnelling(&c.array, k_min, k_max, opts)?
            .with_material(material)
            .resonances
            .iter()
            .filter_map(|r| r.energy_mev)
            .collect())
    };
    let ea = energies(a)?;
    let eb = energies(b)?;

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in ea.iter().enumerate() {
        for (j, y) in eb.iter().enumerate() {
            let d = (x - y).abs();
            if d <= match_tol_mev {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut used_a, mut used_b) = (vec![false; ea.len()], vec![false; eb.len()]);
    let mut out = Vec::new();
    for (_, i, j) in candidates {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        out.push(SharedResonance { energy_a: ea[i], energy_b: eb[j], matched: 0.5 * (ea[i] + eb[j]) });
    }
    out.sort_by(|p, q| p.matched.total_cmp(&q.matched));
    Ok(out)
}

/// Spacing of an equal pair of strength `j_ev_angstrom` that tunnels perfectly
/// at `target_mev`: `d = (π + 2·atan(λ/2) + 2π·branch) / 2k`.
pub fn design_pair_cell(target_mev: f64, material: &Material, j_ev_angstrom: f64, branch: u32) -> Result<f64> {
    if !(j_ev_angstrom != 0.0 && j_ev_angstrom.is_finite()) {
        return Err(Error::InvalidInput(format!("barrier strength must be nonzero, got {j_ev_angstrom}")));
    }
    let k = k_from_energy(target_mev, material)?;
    let lambda = reduced_strength(j_ev_angstrom, material) / k;
    Ok((PI + 2.0 * (0.5 * lambda).atan() + 2.0 * PI * branch as f64) / (2.0 * k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub k: f64,
    pub energy_mev: Option<f64>,
    pub t_max: f64,
    pub prominence: f64,
    /// Full width at half maximum along energy when the spectrum carries
    /// energies, otherwise along k. `None` if a half-maximum crossing is not
    /// reached before the scan edge.
    pub fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSet {
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn highest(&self) -> Option<&Peak> {
        self.peaks.iter().max_by(|a, b| a.t_max.total_cmp(&b.t_max))
    }
}

/// Interior local maxima of T whose prominence exceeds `prominence`.
pub fn peak_analysis(spec: &Spectrum, prominence: f64) -> Result<PeakSet> {
    let pts = &spec.points;
    let n = pts.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let t: Vec<f64> = pts.iter().map(|p| p.transmission).collect();
    let axis: Vec<f64> = pts.iter().map(|p| p.energy_mev.unwrap_or(p.k)).collect();

    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if t[i] > t[i - 1] {
            // walk across a flat top
            let mut j = i;
            while j + 1 < n && t[j + 1] == t[i] {
                j += 1;
            }
            if j < n - 1 && t[j + 1] < t[i] {
                let top = (i + j) / 2;
                let prom = prominence_at(&t, top);
                if prom > prominence {
                    peaks.push(Peak {
                        k: pts[top].k,
                        energy_mev: pts[top].energy_mev,
                        t_max: t[top],
                        prominence: prom,
                        fwhm: fwhm_at(&t, &axis, top),
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(PeakSet { peaks })
}

fn prominence_at(t: &[f64], i: usize) -> f64 {
    let h = t[i];
    let mut left_min = h;
    for &v in t[..i].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &t[i + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

fn fwhm_at(t: &[f64], axis: &[f64], i: usize) -> Option<f64> {
    let half = 0.5 * t[i];
    let cross = |a: usize, b: usize| {
        let f = (half - t[a]) / (t[b] - t[a]);
        axis[a] + f * (axis[b] - axis[a])
    };
    let left = (1..=i).rev().find(|&j| t[j - 1] < half).map(|j| cross(j - 1, j))?;
    let right = (i..t.len() - 1).find(|&j| t[j + 1] < half).map(|j| cross(j + 1, j))?;
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::SpectrumPoint;

    fn spectrum(ts: &[f64]) -> Spectrum {
        Spectrum {
            points: ts
                .iter()
                .enumerate()
                .map(|(i, &t)| SpectrumPoint {
                    k: 1.0 + i as f64,
                    energy_mev: None,
                    transmission: t,
                    reflection: 1.0 - t,
                })
                .collect(),
        }
    }

    #[test]
    fn flatten_offsets() {
        let a = Cell::pair(1.0, 100.0, "long").unwrap();
        let b = Cell::pair(1.0, 29.0, "short").unwrap();
        let comp = Composition::new(vec![a, b], vec![150.0]).unwrap();
        let xs: Vec<f64> = flatten(&comp).unwrap().barriers().iter().map(|b| b.x).collect();
        assert_eq!(xs, vec![0.0, 100.0, 250.0, 279.0]);
    }

    #[test]
    fn single_cell_flatten_is_identity() {
        let a = Cell::pair(0.4, 7.0, "a").unwrap();
        let comp = Composition::new(vec![a.clone()], vec![]).unwrap();
        assert_eq!(&flatten(&comp).unwrap(), a.array());
    }

    #[test]
    fn composition_errors() {
        let a = Cell::pair(1.0, 10.0, "a").unwrap();
        assert!(matches!(
            Composition::new(vec![a.clone(), a.clone()], vec![0.0]),
            Err(Error::OverlappingCells { index: 0, .. })
        ));
        assert!(Composition::new(vec![a.clone(), a], vec![]).is_err());
        let shifted = BarrierArray::from_pairs([(1.0, 1.0)]).unwrap();
        assert!(matches!(Cell::new(shifted, "x"), Err(Error::InvalidCell(_))));
    }

    #[test]
    fn monotone_spectrum_has_no_peaks() {
        let s = spectrum(&[0.1, 0.2, 0.3, 0.5, 0.9]);
        assert!(peak_analysis(&s, DEFAULT_PROMINENCE).unwrap().peaks.is_empty());
    }

    #[test]
    fn triangle_peak_width() {
        let s = spectrum(&[0.0, 0.5, 1.0, 0.5, 0.0]);
        let p = peak_analysis(&s, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(p.peaks.len(), 1);
        let peak = p.peaks[0];
        assert_eq!(peak.k, 3.0);
        assert_eq!(peak.prominence, 1.0);
        assert!((peak.fwhm.unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_bumps_filtered_by_prominence() {
        let s = spectrum(&[0.1, 0.12, 0.11, 0.5, 0.9, 0.2]);
        let p = peak_analysis(&s, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(p.peaks.len(), 1);
        assert_eq!(p.peaks[0].t_max, 0.9);
    }

    #[test]
    fn too_few_points() {
        assert!(peak_analysis(&spectrum(&[0.1, 0.2]), 0.0).is_err());
    }

    #[test]
    fn design_limits_and_errors() {
        let m = Material::gaas();
        assert!(design_pair_cell(0.0, &m, 2.0, 0).is_err());
        assert!(design_pair_cell(4.56, &m, 0.0, 0).is_err());
        let k = k_from_energy(4.56, &m).unwrap();
        for n in 0..3 {
            let d = design_pair_cell(4.56, &m, 1e-9, n).unwrap();
            let free = (PI + 2.0 * PI * n as f64) / (2.0 * k);
            assert!((d - free).abs() / free < 1e-8);
        }
    }
}
