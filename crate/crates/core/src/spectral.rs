//! Spectrum, resolvent, eigen-idempotents and spectral projections of a
//! quaternion regarded as an element of 𝕄.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Neg;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::algebra::{Biquaternion, ComplexScalar, Quaternion};
use crate::error::{Error, Result};
use crate::quadrature::{complex_pair, CircleRule};

/// Default relative threshold below which `‖ℑq‖` counts as zero.
pub const EPS_SPEC: f64 = 1e-12;

/// The eigenvalue pair `s± = ℜq ± i‖ℑq‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    #[serde(with = "complex_pair")]
    pub s_plus: ComplexScalar,
    #[serde(with = "complex_pair")]
    pub s_minus: ComplexScalar,
    pub is_real: bool,
}

impl Spectrum {
    pub fn of(q: Quaternion) -> Self {
        spectrum_of(q, EPS_SPEC)
    }

    pub fn points(&self) -> [ComplexScalar; 2] {
        [self.s_plus, self.s_minus]
    }

    /// Whether `λ ∈ σ(q)` up to `tol` in modulus.
    pub fn contains(&self, lambda: ComplexScalar, tol: f64) -> bool {
        self.points().iter().any(|s| (s - lambda).norm() <= tol)
    }
}

fn is_numerically_real(q: Quaternion, eps_spec: f64) -> bool {
    q.im_norm() <= eps_spec * (1.0 + q.norm())
}

pub fn spectrum_of(q: Quaternion, eps_spec: f64) -> Spectrum {
    if is_numerically_real(q, eps_spec) {
        let s = Complex64::new(q.re(), 0.0);
        return Spectrum {
            s_plus: s,
            s_minus: s,
            is_real: true,
        };
    }
    let t = q.im_norm();
    Spectrum {
        s_plus: Complex64::new(q.re(), t),
        s_minus: Complex64::new(q.re(), -t),
        is_real: false,
    }
}

/// `(λ - q)⁻¹ = (λ² - 2λℜq + ‖q‖²)⁻¹(λ - q*)`.
pub fn resolvent(q: Quaternion, lambda: ComplexScalar) -> Result<Biquaternion> {
    let nq = q.norm_sqr();
    let denom = lambda * lambda - lambda * (2.0 * q.re()) + nq;
    let scale = lambda.norm_sqr() + 2.0 * lambda.norm() * q.re().abs() + nq;
    if denom.norm() <= 1e-14 * scale || denom.norm() == 0.0 {
        return Err(Error::SpectrumHit(denom.norm()));
    }
    let num = Biquaternion::scalar(lambda) - Biquaternion::from(q.involution());
    Ok(num.scale_complex(denom.inv()))
}

/// A purely imaginary unit quaternion; squares to `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitImaginary(Quaternion);

impl UnitImaginary {
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);
    pub const L: Self = Self(Quaternion::L);

    /// Normalizes the imaginary part of `v`.
    pub fn new(v: Quaternion) -> Result<Self> {
        let im = v.im();
        let n = im.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "unit imaginary needs a nonzero imaginary direction".into(),
            ));
        }
        Ok(Self(im.scale(1.0 / n)))
    }

    /// `𝔰_q̃ = ℑq/‖ℑq‖`.
    pub fn of(q: Quaternion) -> Result<Self> {
        if is_numerically_real(q, EPS_SPEC) {
            return Err(Error::RealQuaternion);
        }
        Self::new(q)
    }

    pub fn as_quaternion(self) -> Quaternion {
        self.0
    }

    /// The quaternion `x + y·𝔰` on this slice.
    pub fn point(self, x: f64, y: f64) -> Quaternion {
        Quaternion::real(x) + self.0.scale(y)
    }

    /// `j, k, l, (j+k)/√2, (j+k+l)/√3`.
    pub fn standard_family() -> [Self; 5] {
        let r3 = 1.0 / 3f64.sqrt();
        [
            Self::J,
            Self::K,
            Self::L,
            Self(Quaternion::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)),
            Self(Quaternion::new(0.0, r3, r3, r3)),
        ]
    }

    /// Uniform on the sphere 𝕊.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
        Self(Quaternion::new(0.0, x, y, z))
    }
}

impl Neg for UnitImaginary {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// `ι±(𝔰) = (1 ∓ i𝔰)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdempotentPair {
    pub iota_plus: Biquaternion,
    pub iota_minus: Biquaternion,
}

impl IdempotentPair {
    pub fn of(s: UnitImaginary) -> Self {
        let is = Biquaternion::new(Quaternion::ZERO, s.as_quaternion());
        Self {
            iota_plus: (Biquaternion::ONE - is).scale(0.5),
            iota_minus: (Biquaternion::ONE + is).scale(0.5),
        }
    }
}

/// `(P₊a, P₋a) = (ι₊(𝔰_q̃)a, ι₋(𝔰_q̃)a)`.
pub fn spectral_project(q: Quaternion, a: Biquaternion) -> Result<(Biquaternion, Biquaternion)> {
    let pair = IdempotentPair::of(UnitImaginary::of(q)?);
    Ok((pair.iota_plus * a, pair.iota_minus * a))
}

/// Riesz projections `P± = (2πi)⁻¹∮_{Γ±}(ζ - q)⁻¹dζ` by the trapezoidal rule on
/// circles of radius `r` about `s±`.
pub fn projections_via_contour(
    q: Quaternion,
    r: f64,
    n_nodes: usize,
) -> Result<(Biquaternion, Biquaternion)> {
    let (plus, minus) = riesz_rules(q, r, n_nodes)?;
    Ok((plus.value(), minus.value()))
}

fn riesz_rules(q: Quaternion, r: f64, n_nodes: usize) -> Result<(CircleRule, CircleRule)> {
    let spec = Spectrum::of(q);
    if spec.is_real {
        return Err(Error::RealQuaternion);
    }
    if n_nodes == 0 {
        return Err(Error::InvalidArgument("n_nodes must be positive".into()));
    }
    if !(r > 0.0) || r >= q.im_norm() {
        return Err(Error::ContourTouchesSpectrum);
    }
    let kernel = |z: ComplexScalar| resolvent(q, z);
    Ok((
        CircleRule::new(spec.s_plus, r, n_nodes, &kernel)?,
        CircleRule::new(spec.s_minus, r, n_nodes, &kernel)?,
    ))
}

/// Riesz projections on circles of radius `min(0.5, ‖ℑq‖/2)`, starting at 64
/// nodes and doubling until successive results agree to `1e-12` componentwise.
pub fn projections_via_contour_default(q: Quaternion) -> Result<(Biquaternion, Biquaternion)> {
    const MAX_NODES: usize = 1 << 14;
    let r = (0.5_f64).min(q.im_norm() / 2.0);
    let (mut plus, mut minus) = riesz_rules(q, r, 64)?;
    let kernel = |z: ComplexScalar| resolvent(q, z);
    loop {
        let (p0, m0) = (plus.value(), minus.value());
        plus.refine(&kernel)?;
        minus.refine(&kernel)?;
        let delta = (plus.value() - p0)
            .max_abs()
            .max((minus.value() - m0).max_abs());
        if delta < 1e-12 {
            return Ok((plus.value(), minus.value()));
        }
        if plus.nodes() >= MAX_NODES {
            return Err(Error::NoConvergence {
                nodes: plus.nodes(),
                delta,
            });
        }
    }
}
