//! Barrier geometry in reduced units.
//!
//! Positions are lengths (nm by convention) and strengths are the reduced
//! strength `g = 2mJ/ħ²` (inverse length), so the dimensionless strength at
//! wave number `k` is `g / k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    pub x: f64,
    pub g: f64,
}

impl Barrier {
    pub fn new(x: f64, g: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite("barrier position"));
        }
        if !g.is_finite() {
            return Err(Error::NonFinite("barrier strength"));
        }
        Ok(Self { x, g })
    }

    /// Dimensionless strength at wave number `k`.
    pub fn lambda(&self, k: WaveNumber) -> f64 {
        self.g / k.get()
    }

    /// Phase `k·x`.
    pub fn phase(&self, k: WaveNumber) -> f64 {
        k.get() * self.x
    }
}

/// Ordered barriers with strictly increasing positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierArray {
    barriers: Vec<Barrier>,
}

impl BarrierArray {
    pub fn new(barriers: Vec<Barrier>) -> Result<Self> {
        for (i, b) in barriers.iter().enumerate() {
            Barrier::new(b.x, b.g)?;
            if i > 0 && b.x <= barriers[i - 1].x {
                return Err(Error::NonIncreasingPositions(i));
            }
        }
        Ok(Self { barriers })
    }

    /// Builds an array from `(x, g)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(x, g)| Barrier { x, g }).collect())
    }

    /// `n` barriers of strength `g` at `0, spacing, 2·spacing, ...`.
    pub fn equally_spaced(n: usize, g: f64, spacing: f64) -> Result<Self> {
        Self::from_pairs((0..n).map(|i| (i as f64 * spacing, g)))
    }

    pub fn barriers(&self) -> &[Barrier] {
        &self.barriers
    }

    pub fn len(&self) -> usize {
        self.barriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.barriers.is_empty()
    }

    pub fn total_strength(&self) -> f64 {
        self.barriers.iter().map(|b| b.g).sum()
    }

    /// Distance from the first to the last barrier.
    pub fn extent(&self) -> f64 {
        match (self.barriers.first(), self.barriers.last()) {
            (Some(a), Some(b)) => b.x - a.x,
            _ => 0.0,
        }
    }

    /// Same array shifted by `dx`.
    pub fn translated(&self, dx: f64) -> Result<Self> {
        Self::from_pairs(self.barriers.iter().map(|b| (b.x + dx, b.g)))
    }

    /// Positions scaled by `s`, strengths by `1/s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {s}")));
        }
        Self::from_pairs(self.barriers.iter().map(|b| (b.x * s, b.g / s)))
    }
}

/// Strictly positive wave number (inverse length).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct WaveNumber(pub(crate) f64);

impl WaveNumber {
    pub fn new(k: f64) -> Result<Self> {
        if k > 0.0 && k.is_finite() {
            Ok(Self(k))
        } else {
            Err(Error::NonPositiveWaveNumber(k))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_coincident_and_decreasing_positions() {
        assert_eq!(
            BarrierArray::from_pairs([(0.0, 1.0), (0.0, 1.0)]),
            Err(Error::NonIncreasingPositions(1))
        );
        assert_eq!(
            BarrierArray::from_pairs([(0.0, 1.0), (2.0, 1.0), (1.0, 1.0)]),
            Err(Error::NonIncreasingPositions(2))
        );
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Barrier::new(f64::NAN, 1.0).is_err());
        assert!(BarrierArray::from_pairs([(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn wave_number_must_be_positive() {
        assert!(WaveNumber::new(0.0).is_err());
        assert!(WaveNumber::new(-1.0).is_err());
        assert!(WaveNumber::new(f64::NAN).is_err());
        assert_eq!(WaveNumber::new(0.5).unwrap().get(), 0.5);
    }

    #[test]
    fn negative_strengths_are_allowed() {
        let a = BarrierArray::from_pairs([(0.0, -1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(a.total_strength(), 1.0);
        assert_eq!(a.extent(), 1.0);
    }
}
