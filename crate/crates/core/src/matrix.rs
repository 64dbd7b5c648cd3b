//! Complex 2x2 algebra for transfer matrices and their nilpotent building blocks.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Complex2x2 {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::scalar(Complex64::new(0.0, 0.0))
    }

    pub fn scalar(s: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(s, z, z, s)
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    /// Max entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_norm()
    }
}

impl Add for Complex2x2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.m11 + rhs.m11,
            self.m12 + rhs.m12,
            self.m21 + rhs.m21,
            self.m22 + rhs.m22,
        )
    }
}

impl Sub for Complex2x2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.m11 - rhs.m11,
            self.m12 - rhs.m12,
            self.m21 - rhs.m21,
            self.m22 - rhs.m22,
        )
    }
}

impl Mul for Complex2x2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

/// Unit-determinant matrix with `m11 = conj(m22)` and `m12 = conj(m21)`.
///
/// Values are only produced by [`single_transfer`] and products of transfer
/// matrices, so the structure holds up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(Complex2x2);

impl TransferMatrix {
    pub fn identity() -> Self {
        Self(Complex2x2::identity())
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.0
    }

    /// Wraps an arbitrary matrix after checking the transfer-matrix structure
    /// to absolute tolerance `tol`.
    pub fn from_matrix(mat: Complex2x2, tol: f64) -> Option<Self> {
        let det_ok = (mat.det() - 1.0).norm() <= tol;
        let diag_ok = (mat.m11 - mat.m22.conj()).norm() <= tol;
        let off_ok = (mat.m12 - mat.m21.conj()).norm() <= tol;
        (det_ok && diag_ok && off_ok).then_some(Self(mat))
    }

    /// Deviation from the pseudo-unitary structure (max of the three defects).
    pub fn structure_defect(&self) -> f64 {
        let m = &self.0;
        [
            (m.det() - 1.0).norm(),
            (m.m11 - m.m22.conj()).norm(),
            (m.m12 - m.m21.conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl Mul for TransferMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Phase factor `exp(2i·phi)` of a barrier at phase `phi = k·x`.
pub fn phase_factor(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * phi)
}

/// Nilpotent L-matrix `[[1, conj(E)], [-E, -1]]` with `E = exp(2i·phi)`.
pub fn lmatrix(phi: f64) -> Complex2x2 {
    let e = phase_factor(phi);
    let one = Complex64::new(1.0, 0.0);
    Complex2x2::new(one, e.conj(), -e, -one)
}

/// Single-barrier transfer matrix for dimensionless strength `lambda` at phase `phi`.
pub fn single_transfer(lambda: f64, phi: f64) -> TransferMatrix {
    let e = phase_factor(phi);
    let half = 0.5 * lambda;
    TransferMatrix(Complex2x2::new(
        Complex64::new(1.0, -half),
        -I * half * e.conj(),
        I * half * e,
        Complex64::new(1.0, half),
    ))
}

/// Same matrix as [`single_transfer`], built as `I - (i·lambda/2)·L`.
pub fn single_transfer_from_l(lambda: f64, phi: f64) -> Complex2x2 {
    Complex2x2::identity() - lmatrix(phi).scale(I * (0.5 * lambda))
}
