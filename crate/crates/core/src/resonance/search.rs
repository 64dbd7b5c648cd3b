use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::array::{BarrierArray, WaveNumber};
use crate::error::{Error, Result};
use crate::transfer::{compose_unchecked, reflection, transmission};
use crate::units::{energy_from_k, Material};

/// `|m21|²` below this counts as perfect tunnelling.
pub const PERFECT_TOL: f64 = 1e-10;
/// `|m21|²` below this (but above [`PERFECT_TOL`]) is a resonant maximum.
pub const NEAR_MISS_TOL: f64 = 1e-3;

const GOLDEN_MAX_ITER: usize = 200;
const GOLDEN_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub k: f64,
    pub energy_mev: Option<f64>,
    pub transmission: f64,
    pub reflection: f64,
}

/// Transmission sampled on an increasing wave-number grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub points: Vec<SpectrumPoint>,
}

impl Spectrum {
    /// Fills in energies for `material`.
    pub fn with_material(mut self, material: &Material) -> Self {
        for p in &mut self.points {
            p.energy_mev = energy_from_k(p.k, material).ok();
        }
        self
    }
}

fn check_range(lo: f64, hi: f64, n: usize, min_points: usize) -> Result<()> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::BadScanRange(lo, hi, n));
    }
    if n < min_points {
        return Err(Error::TooFewPoints { needed: min_points, got: n });
    }
    Ok(())
}

fn grid(lo: f64, hi: f64, n: usize) -> impl IndexedParallelIterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map(move |i| if i == n - 1 { hi } else { lo + step * i as f64 })
}

/// Samples T and R on a uniform grid of `n_points` wave numbers in `[k_min, k_max]`.
pub fn scan(array: &BarrierArray, k_min: f64, k_max: f64, n_points: usize) -> Result<Spectrum> {
    if array.is_empty() {
        return Err(Error::EmptyArray);
    }
    check_range(k_min, k_max, n_points, 2)?;
    let points = grid(k_min, k_max, n_points)
        .map(|k| {
            let tm = compose_unchecked(array, WaveNumber(k));
            SpectrumPoint {
                k,
                energy_mev: None,
                transmission: transmission(&tm),
                reflection: reflection(&tm),
            }
        })
        .collect();
    Ok(Spectrum { points })
}

/// Energy-range convenience over [`scan`]; the grid is still uniform in k.
pub fn scan_energy(
    array: &BarrierArray,
    material: &Material,
    e_min_mev: f64,
    e_max_mev: f64,
    n_points: usize,
) -> Result<Spectrum> {
    if !(e_min_mev > 0.0 && e_min_mev < e_max_mev) {
        return Err(Error::BadScanRange(e_min_mev, e_max_mev, n_points));
    }
    let lo = crate::units::k_from_energy(e_min_mev, material)?;
    let hi = crate::units::k_from_energy(e_max_mev, material)?;
    Ok(scan(array, lo, hi, n_points)?.with_material(material))
}

/// Golden-section minimisation of `f` on `[a, b]`; returns `(x_min, f(x_min))`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_MAX_ITER {
        if (b - a).abs() <= GOLDEN_REL_TOL * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub k: f64,
    pub energy_mev: Option<f64>,
    pub transmission: f64,
    pub m21_sq: f64,
    pub bracket_width: f64,
    /// Branch index for pair resonances found from the closed-form condition.
    pub branch: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    OracleRootFind,
    TranscendentalN2,
    TranscendentalN3,
    TranscendentalN4,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceReport {
    pub resonances: Vec<Resonance>,
    /// Local minima of `|m21|²` below [`NEAR_MISS_TOL`] that are not perfect.
    pub near_misses: Vec<Resonance>,
    pub method: Method,
}

impl ResonanceReport {
    pub fn with_material(mut self, material: &Material) -> Self {
        for r in self.resonances.iter_mut().chain(self.near_misses.iter_mut()) {
            r.energy_mev = energy_from_k(r.k, material).ok();
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub grid: usize,
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { grid: 2000, tol: PERFECT_TOL }
    }
}

/// Zeros of the nonnegative function `f` on `[lo, hi]`.
///
/// Grid local minima are refined by golden-section search over the two
/// neighbouring grid cells. Returns `(perfect, near_misses)` as
/// `(x, f(x), bracket_width)` triples.
pub fn find_zeros(
    f: impl Fn(f64) -> f64 + Sync,
    lo: f64,
    hi: f64,
    opts: SearchOptions,
) -> Result<(Vec<(f64, f64, f64)>, Vec<(f64, f64, f64)>)> {
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::BadScanRange(lo, hi, opts.grid));
    }
    if opts.grid < 16 {
        return Err(Error::TooFewPoints { needed: 16, got: opts.grid });
    }
    let n = opts.grid;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();

    let mut perfect = Vec::new();
    let mut near = Vec::new();
    for i in 1..n - 1 {
        if !(fs[i] <= fs[i - 1] && fs[i] < fs[i + 1]) {
            continue;
        }
        let (a, b) = (xs[i - 1], xs[i + 1]);
        let (x, fx) = golden_section_min(&f, a, b);
        let entry = (x, fx, b - a);
        if fx < opts.tol {
            perfect.push(entry);
        } else if fx < NEAR_MISS_TOL {
            near.push(entry);
        }
    }
    Ok((perfect, near))
}

/// Perfect-tunnelling wave numbers of `array` in `[k_min, k_max]`, found as
/// zeros of `|m21(k)|²`.
pub fn find_perfect_tunnelling(
    array: &BarrierArray,
    k_min: f64,
    k_max: f64,
    opts: SearchOptions,
) -> Result<ResonanceReport> {
    if array.is_empty() {
        return Err(Error::EmptyArray);
    }
    check_range(k_min, k_max, opts.grid, 16)?;
    let f = |k: f64| compose_unchecked(array, WaveNumber(k)).matrix().m21.norm_sqr();
    let (perfect, near) = find_zeros(f, k_min, k_max, opts)?;
    let to_res = |(k, m21_sq, w): (f64, f64, f64)| Resonance {
        k,
        energy_mev: None,
        transmission: transmission(&compose_unchecked(array, WaveNumber(k))),
        m21_sq,
        bracket_width: w,
        branch: None,
    };
    Ok(ResonanceReport {
        resonances: perfect.into_iter().map(to_res).collect(),
        near_misses: near.into_iter().map(to_res).collect(),
        method: Method::OracleRootFind,
    })
}

/// Perfect-tunnelling phases `s = k·spacing` in `(lo, hi)` of `n` equal
/// barriers with fixed dimensionless strength `lambda`, equally spaced.
///
/// Uses `k = 1`, `g = lambda`, positions `0, s, 2s, ...`.
pub fn symmetric_phase_roots(
    n: usize,
    lambda: f64,
    lo: f64,
    hi: f64,
    opts: SearchOptions,
) -> Result<Vec<(f64, f64, f64)>> {
    if n == 0 {
        return Err(Error::EmptyArray);
    }
    let f = |s: f64| symmetric_m21_sq(n, lambda, s);
    find_zeros(f, lo, hi, opts).map(|(p, _)| p)
}

pub(crate) fn symmetric_transfer(n: usize, lambda: f64, s: f64) -> crate::matrix::TransferMatrix {
    (0..n).fold(crate::matrix::TransferMatrix::identity(), |acc, i| {
        crate::matrix::single_transfer(lambda, i as f64 * s) * acc
    })
}

fn symmetric_m21_sq(n: usize, lambda: f64, s: f64) -> f64 {
    symmetric_transfer(n, lambda, s).matrix().m21.norm_sqr()
}

/// Wave number of perfect tunnelling of an equal pair with reduced strength
/// `g` and spacing `d`, solving `2kd = π + 2·atan(g/2k) + 2π·branch`.
pub fn pair_resonance_k(g: f64, d: f64, branch: u32) -> Result<f64> {
    if !g.is_finite() {
        return Err(Error::NonFinite("strength"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidInput(format!("spacing must be positive, got {d}")));
    }
    let target = PI + 2.0 * PI * branch as f64;
    let h = |k: f64| 2.0 * k * d - 2.0 * (g / (2.0 * k)).atan() - target;

    let mut hi = (target + PI) / (2.0 * d);
    while h(hi) <= 0.0 {
        hi *= 2.0;
    }
    // h' = 2d + 4g/(4k² + g²): increasing for g ≥ 0. For g < 0, h starts at
    // π − target and dips below it only when d·|g| < 2.
    let lo = if g >= 0.0 || branch > 0 {
        0.0
    } else if d * g.abs() < 2.0 {
        0.5 * (2.0 * g.abs() / d - g * g).sqrt()
    } else {
        return Err(Error::BranchEmpty(branch));
    };
    if lo > 0.0 && h(lo) >= 0.0 {
        return Err(Error::BranchEmpty(branch));
    }
    Ok(bisect(h, lo, hi))
}

/// Bisection for an increasing sign change of `h` on `(lo, hi]`; `h(lo)` is
/// never evaluated.
fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form pair resonances of an equal-strength pair within `[k_min, k_max]`.
pub fn pair_resonances(g: f64, d: f64, k_min: f64, k_max: f64) -> Result<ResonanceReport> {
    check_range(k_min, k_max, 2, 2)?;
    let array = BarrierArray::from_pairs([(0.0, g), (d, g)])?;
    let mut resonances = Vec::new();
    for branch in 0.. {
        let k = match pair_resonance_k(g, d, branch) {
            Ok(k) => k,
            Err(Error::BranchEmpty(_)) => continue,
            Err(e) => return Err(e),
        };
        if k > k_max {
            break;
        }
        if k >= k_min {
            let tm = compose_unchecked(&array, WaveNumber(k));
            resonances.push(Resonance {
                k,
                energy_mev: None,
                transmission: transmission(&tm),
                m21_sq: tm.matrix().m21.norm_sqr(),
                bracket_width: 0.0,
                branch: Some(branch),
            });
        }
    }
    Ok(ResonanceReport { resonances, near_misses: vec![], method: Method::TranscendentalN2 })
}
