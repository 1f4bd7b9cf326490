//! Arithmetic of the Hamilton algebra ℍ and its complexification 𝕄 = ℍ + iℍ.
//!
//! The imaginary units of ℍ are written `j`, `k`, `l` with
//! `jk = -kj = l`, `kl = -lk = j`, `lj = -jl = k` and `j² = k² = l² = -1`.
//! The external unit `i` of 𝕄 commutes with every quaternion.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complex number, embedded in 𝕄 as `re·1 + i(im·1)`.
pub type ComplexScalar = Complex64;

/// An element `w + x·j + y·k + z·l` of ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const L: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Real part `ℜq`.
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `ℑq = x·j + y·k + z·l`.
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Euclidean norm, which is multiplicative on ℍ.
    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge inputs finite
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = self.scale(1.0 / m);
        m * s.norm_sqr().sqrt()
    }

    /// Norm of the imaginary part.
    pub fn im_norm(self) -> f64 {
        self.im().norm()
    }

    fn max_abs(self) -> f64 {
        self.w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    /// The involution `q* = w - x·j - y·k - z·l`.
    pub fn involution(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `q⁻¹ = ‖q‖⁻² q*`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroDivision);
        }
        Ok(self.involution().scale(1.0 / n2))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}j + {}k + {}l", self.w, self.x, self.y, self.z)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 4]>::deserialize(d).map(Self::from_array)
    }
}

/// An element `re + i·im` of 𝕄 with `re, im ∈ ℍ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Biquaternion {
    pub re: Quaternion,
    pub im: Quaternion,
}

impl Biquaternion {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);
    /// The external imaginary unit `i`.
    pub const I: Self = Self::new(Quaternion::ZERO, Quaternion::ONE);

    pub const fn new(re: Quaternion, im: Quaternion) -> Self {
        Self { re, im }
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self::new(
            Quaternion::new(a[0], a[1], a[2], a[3]),
            Quaternion::new(a[4], a[5], a[6], a[7]),
        )
    }

    /// `[re.w, re.x, re.y, re.z, im.w, im.x, im.y, im.z]`
    pub fn to_array(self) -> [f64; 8] {
        let (r, i) = (self.re, self.im);
        [r.w, r.x, r.y, r.z, i.w, i.x, i.y, i.z]
    }

    pub fn scalar(z: ComplexScalar) -> Self {
        Self::new(Quaternion::real(z.re), Quaternion::real(z.im))
    }

    /// The conjugation `b + ic ↦ b - ic`; fixes exactly the embedded ℍ.
    pub fn bar(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// The involution `(x₁ + ix₂)* = x₁* - i x₂*`.
    pub fn star(self) -> Self {
        Self::new(self.re.involution(), -self.im.involution())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re.scale(s), self.im.scale(s))
    }

    /// Multiplication by an embedded complex scalar, which is central in 𝕄.
    pub fn scale_complex(self, z: ComplexScalar) -> Self {
        Self::new(
            self.re.scale(z.re) - self.im.scale(z.im),
            self.im.scale(z.re) + self.re.scale(z.im),
        )
    }

    pub fn is_quaternion(self) -> bool {
        self.im == Quaternion::ZERO
    }

    /// Largest absolute component, a cheap norm for stopping criteria.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// The *-representation of 𝕄 on ℂ²:
    /// `1 ↦ I`, `j ↦ [[i,0],[0,-i]]`, `k ↦ [[0,1],[-1,0]]`, `l ↦ [[0,i],[i,0]]`,
    /// extended ℂ-linearly in the external unit.
    pub fn matrix_rep(self) -> Mat2 {
        let rep_h = |q: Quaternion| -> Mat2 {
            Mat2([
                [Complex64::new(q.w, q.x), Complex64::new(q.y, q.z)],
                [Complex64::new(-q.y, q.z), Complex64::new(q.w, -q.x)],
            ])
        };
        let a = rep_h(self.re);
        let b = rep_h(self.im);
        let i = Complex64::i();
        let mut m = [[Complex64::default(); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = a.0[r][c] + i * b.0[r][c];
            }
        }
        Mat2(m)
    }

    /// Inverse of [`Biquaternion::matrix_rep`].
    pub fn from_matrix(m: Mat2) -> Self {
        // rep(b + ic) = A + iB with A = rep(b), B = rep(c) of quaternion shape
        // [[α, β], [-β̄, ᾱ]]; split M into its two quaternion-shaped halves.
        let [[m00, m01], [m10, m11]] = m.0;
        let alpha_a = (m00 + m11.conj()) * 0.5;
        let alpha_b = (m00 - m11.conj()) * Complex64::new(0.0, -0.5);
        let beta_a = (m01 - m10.conj()) * 0.5;
        let beta_b = (m01 + m10.conj()) * Complex64::new(0.0, -0.5);
        Self::new(
            Quaternion::new(alpha_a.re, alpha_a.im, beta_a.re, beta_a.im),
            Quaternion::new(alpha_b.re, alpha_b.im, beta_b.re, beta_b.im),
        )
    }

    /// The C*-norm: operator norm of [`Biquaternion::matrix_rep`].
    pub fn cstar_norm(self) -> f64 {
        self.matrix_rep().spectral_norm()
    }

    /// Inverse in 𝕄, via the determinant of the matrix representation.
    pub fn inverse(self) -> Result<Self> {
        let m = self.matrix_rep();
        let det = m.det();
        let scale = m.frobenius_sqr();
        if scale == 0.0 || det.norm() <= 1e-300_f64.max(f64::EPSILON * f64::EPSILON * scale) {
            return Err(Error::ZeroDivision);
        }
        let [[a, b], [c, d]] = m.0;
        let inv = Mat2([[d / det, -b / det], [-c / det, a / det]]);
        Ok(Self::from_matrix(inv))
    }
}

impl From<Quaternion> for Biquaternion {
    fn from(q: Quaternion) -> Self {
        Self::new(q, Quaternion::ZERO)
    }
}

impl From<ComplexScalar> for Biquaternion {
    fn from(z: ComplexScalar) -> Self {
        Self::scalar(z)
    }
}

impl From<f64> for Biquaternion {
    fn from(x: f64) -> Self {
        Self::from(Quaternion::real(x))
    }
}

impl Add for Biquaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Biquaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Biquaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Biquaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for Biquaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Mul<Quaternion> for Biquaternion {
    type Output = Self;
    fn mul(self, q: Quaternion) -> Self {
        Self::new(self.re * q, self.im * q)
    }
}

impl Mul<Biquaternion> for Quaternion {
    type Output = Biquaternion;
    fn mul(self, a: Biquaternion) -> Biquaternion {
        Biquaternion::new(self * a.re, self * a.im)
    }
}

impl Mul<f64> for Biquaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + i({})", self.re, self.im)
    }
}

impl Serialize for Biquaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Biquaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 8]>::deserialize(d).map(Self::from_array)
    }
}

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::default());
        Mat2([[o, z], [z, o]])
    }

    pub fn det(&self) -> Complex64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn conj_transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a.conj(), c.conj()], [b.conj(), d.conj()]])
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest singular value: the square root of the top eigenvalue of the
    /// Hermitian `H = M Mᴴ`, `(h₁₁ + h₂₂ + hypot(h₁₁ - h₂₂, 2|h₁₂|))/2`.
    ///
    /// The discriminant is a sum of squares, so nearly equal singular values
    /// (every quaternion) lose no digits; the `‖M‖_F² - 4|det M|²` form would
    /// keep only half of them.
    pub fn spectral_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        let h11 = a.norm_sqr() + b.norm_sqr();
        let h22 = c.norm_sqr() + d.norm_sqr();
        let h12 = (a * c.conj() + b * d.conj()).norm();
        (0.5 * (h11 + h22 + (h11 - h22).hypot(2.0 * h12))).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = [[Complex64::default(); 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.0[r][0] * o.0[0][c] + self.0[r][1] * o.0[1][c];
            }
        }
        Mat2(m)
    }
}
