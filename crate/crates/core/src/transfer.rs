//! Array composition and transmission extraction.

use num_complex::Complex64;

use crate::array::{BarrierArray, WaveNumber};
use crate::error::{Error, Result};
use crate::matrix::{lmatrix, single_transfer, Complex2x2, TransferMatrix};

/// Largest array accepted by [`compose_expansion`] (it sums `2^N` terms).
pub const EXPANSION_LIMIT: usize = 20;

fn check(array: &BarrierArray, k: f64) -> Result<WaveNumber> {
    if array.is_empty() {
        return Err(Error::EmptyArray);
    }
    WaveNumber::new(k)
}

/// Transfer matrix of the whole array, `M_N · ... · M_2 · M_1`.
///
/// Factors are accumulated strictly left-multiplying in barrier order.
pub fn compose(array: &BarrierArray, k: f64) -> Result<TransferMatrix> {
    let k = check(array, k)?;
    Ok(compose_unchecked(array, k))
}

pub(crate) fn compose_unchecked(array: &BarrierArray, k: WaveNumber) -> TransferMatrix {
    array
        .barriers()
        .iter()
        .fold(TransferMatrix::identity(), |acc, b| {
            single_transfer(b.lambda(k), b.phase(k)) * acc
        })
}

/// Transfer matrix from the ordered multilinear expansion in L-matrices:
///
/// `I + Σ_m (-i/2)^m Σ_{n1>...>nm} λ_{n1}L_{n1} ··· λ_{nm}L_{nm}`.
///
/// Independent of [`compose`]; it exists to cross-check it.
pub fn compose_expansion(array: &BarrierArray, k: f64) -> Result<Complex2x2> {
    let k = check(array, k)?;
    let n = array.len();
    if n > EXPANSION_LIMIT {
        return Err(Error::ExpansionTooLarge(n));
    }
    let terms: Vec<Complex2x2> = array
        .barriers()
        .iter()
        .map(|b| lmatrix(b.phase(k)).scale(Complex64::new(0.0, -0.5 * b.lambda(k))))
        .collect();

    let mut total = Complex2x2::zero();
    for mask in 0u32..(1u32 << n) {
        // highest index leftmost
        let mut prod = Complex2x2::identity();
        for idx in (0..n).rev() {
            if mask & (1 << idx) != 0 {
                prod = prod * terms[idx];
            }
        }
        total = total + prod;
    }
    Ok(total)
}

/// `T = 1/|m22|²`.
pub fn transmission(tm: &TransferMatrix) -> f64 {
    1.0 / tm.matrix().m22.norm_sqr()
}

/// `R = |m21/m22|²`.
pub fn reflection(tm: &TransferMatrix) -> f64 {
    let m = tm.matrix();
    m.m21.norm_sqr() / m.m22.norm_sqr()
}

/// Transmission of `array` at wave number `k`.
pub fn array_transmission(array: &BarrierArray, k: f64) -> Result<f64> {
    compose(array, k).map(|tm| transmission(&tm))
}

/// `|m21|²` of the composed matrix; zero exactly at perfect tunnelling.
pub fn m21_sq(array: &BarrierArray, k: f64) -> Result<f64> {
    compose(array, k).map(|tm| tm.matrix().m21.norm_sqr())
}

/// Closed-form `m22` of a barrier pair: `(z2·z1 + λ2·λ1·e^{iθ})/4` with
/// `z = 2 + iλ` and `θ = 2k(x2 − x1)`.
pub fn m22_n2(lambda1: f64, lambda2: f64, theta: f64) -> Complex64 {
    let z1 = Complex64::new(2.0, lambda1);
    let z2 = Complex64::new(2.0, lambda2);
    (z2 * z1 + Complex64::from_polar(lambda1 * lambda2, theta)) / 4.0
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn empty_and_bad_k() {
        let empty = BarrierArray::new(vec![]).unwrap();
        assert_eq!(compose(&empty, 1.0), Err(Error::EmptyArray));
        let one = BarrierArray::from_pairs([(0.0, 1.0)]).unwrap();
        assert_eq!(compose(&one, 0.0), Err(Error::NonPositiveWaveNumber(0.0)));
        assert_eq!(compose(&one, -2.0), Err(Error::NonPositiveWaveNumber(-2.0)));
    }

    #[test]
    fn single_barrier_matches_single_transfer() {
        let a = BarrierArray::from_pairs([(0.7, 1.3)]).unwrap();
        let k = 0.9;
        let m = compose(&a, k).unwrap();
        let s = single_transfer(1.3 / k, k * 0.7);
        assert!(m.matrix().max_abs_diff(s.matrix()) < 1e-15);
    }

    #[test]
    fn pi_spaced_pair_acts_as_one_barrier() {
        let k = 1.7;
        let g = 0.8;
        let x1 = 0.3;
        let a = BarrierArray::from_pairs([(x1, g), (x1 + PI / k, g)]).unwrap();
        let m = compose(&a, k).unwrap();
        let s = single_transfer(2.0 * g / k, k * x1);
        assert!(m.matrix().max_abs_diff(s.matrix()) < 1e-14);
    }

    #[test]
    fn pi_spaced_triple_has_known_transmission() {
        let k = 1.0;
        let a = BarrierArray::equally_spaced(3, 1.0, PI).unwrap();
        let t = array_transmission(&a, k).unwrap();
        assert!((t - 4.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn single_barrier_lambda_two_half_transmission() {
        let tm = single_transfer(2.0, 0.4);
        assert!((transmission(&tm) - 0.5).abs() < 1e-15);
        assert!((reflection(&tm) - 0.5).abs() < 1e-15);
        assert_eq!(transmission(&TransferMatrix::identity()), 1.0);
    }

    #[test]
    fn symmetric_triple_at_half_pi_tunnels() {
        // λ = 1 with kx2 = π/2, x3 = 2x2
        let a = BarrierArray::equally_spaced(3, 1.0, PI / 2.0).unwrap();
        let t = array_transmission(&a, 1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-14);
    }

    #[test]
    fn expansion_small_cases() {
        let a = BarrierArray::from_pairs([(0.4, 1.1)]).unwrap();
        let e = compose_expansion(&a, 1.3).unwrap();
        assert!(e.max_abs_diff(single_transfer(1.1 / 1.3, 1.3 * 0.4).matrix()) < 1e-15);

        // N = 2: I − (iλ2/2)L2 − (iλ1/2)L1 − (λ2λ1/4)L2L1
        let k = 0.8;
        let b = BarrierArray::from_pairs([(0.0, 0.6), (1.9, 1.4)]).unwrap();
        let (l1, l2) = (0.6 / k, 1.4 / k);
        let (m1, m2) = (lmatrix(0.0), lmatrix(1.9 * k));
        let i = Complex64::new(0.0, 1.0);
        let want = Complex2x2::identity() - m2.scale(i * l2 / 2.0) - m1.scale(i * l1 / 2.0)
            - (m2 * m1).scale(Complex64::new(l1 * l2 / 4.0, 0.0));
        assert!(compose_expansion(&b, k).unwrap().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn expansion_limit() {
        let a = BarrierArray::equally_spaced(21, 0.1, 1.0).unwrap();
        assert_eq!(compose_expansion(&a, 1.0), Err(Error::ExpansionTooLarge(21)));
        let b = BarrierArray::equally_spaced(12, 0.1, 1.0).unwrap();
        let d = compose_expansion(&b, 1.0).unwrap().max_abs_diff(compose(&b, 1.0).unwrap().matrix());
        assert!(d < 1e-12);
    }

    #[test]
    fn m22_n2_cases() {
        assert!((m22_n2(0.0, 0.0, 1.234) - 1.0).norm() < 1e-15);
        assert!((m22_n2(2.0, 2.0, 1.5 * PI).norm() - 1.0).abs() < 1e-14);
        // θ = 0 collapses to one barrier of strength 2λ
        let lam = 0.9;
        let one = single_transfer(2.0 * lam, 0.0);
        assert!((m22_n2(lam, lam, 0.0) - one.matrix().m22).norm() < 1e-15);
    }

    #[test]
    fn m22_n2_matches_compose() {
        let k = 1.3;
        for (g1, g2, d) in [(0.5, 1.5, 0.7), (2.0, -1.0, 3.1), (0.1, 0.1, 10.0)] {
            let a = BarrierArray::from_pairs([(0.0, g1), (d, g2)]).unwrap();
            let m = compose(&a, k).unwrap();
            let c = m22_n2(g1 / k, g2 / k, 2.0 * k * d);
            assert!((m.matrix().m22 - c).norm() < 1e-12);
        }
    }
}
