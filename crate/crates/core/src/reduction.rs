//! Resonance-induced reduction of barrier arrays.
//!
//! Two barriers whose separation satisfies `k·Δx ≡ 0 (mod π)` carry the same
//! phase factor and hence the same L-matrix. Because `L² = 0`, neighbouring
//! barriers with equal L-matrices compose exactly like one barrier of summed
//! strength. Equal phases between barriers that are not neighbours leave the
//! geometry untouched and are only recorded.

use std::f64::consts::PI;

use serde::Serialize;

use crate::array::{Barrier, BarrierArray, WaveNumber};
use crate::error::{Error, Result};
use crate::matrix::{lmatrix, Complex2x2};
use crate::transfer::{compose_unchecked, transmission};

/// Default phase tolerance, as a fraction of π.
pub const DEFAULT_PHASE_TOL: f64 = 1e-9;

/// Relative transmission agreement required before a merge is accepted.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    EffectiveSingle,
    EffectivePair,
    EffectiveTriple,
    GenuineN(usize),
}

/// Equality patterns among the four L-matrices of a four-barrier array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FourBarrierPattern {
    /// All four equal: one effective barrier.
    AllEqual,
    /// L1 = L2 = L3, L4 distinct.
    LeadingTriple,
    /// L2 = L3 = L4, L1 distinct.
    TrailingTriple,
    /// L1 = L2 and L3 = L4.
    TwoPairs,
    /// Only L1 = L2.
    FirstPair,
    /// L1 = L2 = L4.
    FirstPairWithLast,
    /// Only L2 = L3.
    MiddlePair,
    /// L2 = L3 and L4 = L1.
    MiddlePairWithOuter,
    /// Only L3 = L4.
    LastPair,
    /// L3 = L4 = L1; algebraically the mirror of `MiddlePairWithOuter` once
    /// strengths are relabelled.
    LastPairWithFirst,
    /// No two neighbours equal.
    Genuine,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MergeRecord {
    /// Input barriers `members` became effective barrier `effective`.
    Merged { members: Vec<usize>, effective: usize },
    /// Effective barriers `first` and `second` share a phase but are not
    /// neighbours; geometry kept.
    NonAdjacentEquality { first: usize, second: usize, note: String },
    /// Adjacent merge rejected because transmission changed.
    VerificationFailed { relative_error: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionResult {
    pub effective: BarrierArray,
    pub classification: Classification,
    pub merge_log: Vec<MergeRecord>,
    pub four_barrier_pattern: Option<FourBarrierPattern>,
    /// Transmission of the input array at the probe k.
    pub transmission: f64,
}

impl ReductionResult {
    pub fn effective_order(&self) -> usize {
        self.effective.len()
    }

    /// True when everything merged into one barrier of zero strength.
    pub fn is_zero_strength_single(&self) -> bool {
        self.classification == Classification::EffectiveSingle
            && self.effective.barriers()[0].g == 0.0
    }
}

/// `k·(x_b − x_a)` is an integer multiple of π to within `tol` (fraction of π).
pub fn phase_equal(x_a: f64, x_b: f64, k: f64, tol: f64) -> bool {
    let r = k * (x_b - x_a) / PI;
    (r - r.round()).abs() <= tol
}

/// Merges maximal runs of neighbouring barriers that are phase-equal to the
/// run's first barrier, placing the merged barrier at that first position.
pub fn reduce(array: &BarrierArray, k: f64, tol: f64) -> Result<ReductionResult> {
    if array.is_empty() {
        return Err(Error::EmptyArray);
    }
    let wk = WaveNumber::new(k)?;
    let n = array.len();
    let t_in = transmission(&compose_unchecked(array, wk));

    let mut runs: Vec<Vec<usize>> = Vec::new();
    for (i, b) in array.barriers().iter().enumerate() {
        match runs.last_mut() {
            Some(run) if phase_equal(array.barriers()[run[0]].x, b.x, k, tol) => run.push(i),
            _ => runs.push(vec![i]),
        }
    }

    let mut log = Vec::new();
    let effective = if runs.len() < n {
        let merged = BarrierArray::new(
            runs.iter()
                .map(|run| Barrier {
                    x: array.barriers()[run[0]].x,
                    g: run.iter().map(|&i| array.barriers()[i].g).sum(),
                })
                .collect(),
        )?;
        let t_eff = transmission(&compose_unchecked(&merged, wk));
        let rel = (t_eff - t_in).abs() / t_in;
        if rel <= VERIFY_TOL {
            for (e, run) in runs.iter().enumerate().filter(|(_, r)| r.len() > 1) {
                log.push(MergeRecord::Merged { members: run.clone(), effective: e });
            }
            merged
        } else {
            log.push(MergeRecord::VerificationFailed { relative_error: rel });
            array.clone()
        }
    } else {
        array.clone()
    };

    let eff = effective.barriers();
    for i in 0..eff.len() {
        for j in i + 2..eff.len() {
            if phase_equal(eff[i].x, eff[j].x, k, tol) {
                log.push(MergeRecord::NonAdjacentEquality {
                    first: i,
                    second: j,
                    note: "pattern matches, product-rank reduced; geometry kept".into(),
                });
            }
        }
    }

    let four_barrier_pattern = (n == 4).then(|| four_barrier_pattern(array, k, tol));
    if four_barrier_pattern == Some(FourBarrierPattern::LastPairWithFirst) {
        log.push(MergeRecord::NonAdjacentEquality {
            first: 0,
            second: 2,
            note: "equivalent to L2 = L3, L4 = L1 with strengths relabelled".into(),
        });
    }

    let m = effective.len();
    let classification = if m < n {
        match m {
            1 => Classification::EffectiveSingle,
            2 => Classification::EffectivePair,
            3 => Classification::EffectiveTriple,
            _ => Classification::GenuineN(m),
        }
    } else {
        Classification::GenuineN(n)
    };

    Ok(ReductionResult {
        effective,
        classification,
        merge_log: log,
        four_barrier_pattern,
        transmission: t_in,
    })
}

/// Number of barriers left after [`reduce`].
pub fn genuine_order(array: &BarrierArray, k: f64, tol: f64) -> Result<usize> {
    reduce(array, k, tol).map(|r| r.effective_order())
}

/// Classifies a four-barrier array by which of its L-matrices coincide.
///
/// Panics if `array` does not hold exactly four barriers.
pub fn four_barrier_pattern(array: &BarrierArray, k: f64, tol: f64) -> FourBarrierPattern {
    use FourBarrierPattern::*;
    let b = array.barriers();
    assert_eq!(b.len(), 4, "four-barrier pattern needs four barriers");
    let eq = |i: usize, j: usize| phase_equal(b[i].x, b[j].x, k, tol);
    let (e12, e23, e34) = (eq(0, 1), eq(1, 2), eq(2, 3));
    match (e12, e23, e34) {
        (true, true, true) => AllEqual,
        (true, true, false) => LeadingTriple,
        (false, true, true) => TrailingTriple,
        (true, false, true) => TwoPairs,
        (true, false, false) if eq(0, 3) => FirstPairWithLast,
        (true, false, false) => FirstPair,
        (false, true, false) if eq(0, 3) => MiddlePairWithOuter,
        (false, true, false) => MiddlePair,
        (false, false, true) if eq(0, 2) => LastPairWithFirst,
        (false, false, true) => LastPair,
        (false, false, false) => Genuine,
    }
}

/// Ordered product `L_N ··· L_1` of the array's L-matrices at wave number `k`.
///
/// It vanishes exactly when some pair of neighbours shares a phase factor.
pub fn ordered_l_product(array: &BarrierArray, k: f64) -> Complex2x2 {
    array
        .barriers()
        .iter()
        .fold(Complex2x2::identity(), |acc, b| lmatrix(k * b.x) * acc)
}
