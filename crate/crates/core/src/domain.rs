//! Conjugate-symmetric plane domains and the spectrally saturated quaternionic
//! sets they induce.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexScalar, Quaternion};
use crate::error::{Error, Result};
use crate::quadrature::complex_pair;
use crate::spectral::{Spectrum, UnitImaginary};

/// An open primitive region of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Disk {
        #[serde(with = "complex_pair")]
        center: ComplexScalar,
        radius: f64,
    },
    Rect {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
}

impl Piece {
    pub fn disk(re: f64, im: f64, radius: f64) -> Self {
        Piece::Disk {
            center: Complex64::new(re, im),
            radius,
        }
    }

    pub fn rect(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Piece::Rect {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// Positive inside, with magnitude a lower bound for the distance to the
    /// piece's complement.
    pub fn inner_distance(&self, z: ComplexScalar) -> f64 {
        match *self {
            Piece::Disk { center, radius } => radius - (z - center).norm(),
            Piece::Rect {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (z.re - x_min)
                .min(x_max - z.re)
                .min(z.im - y_min)
                .min(y_max - z.im),
        }
    }

    pub fn contains(&self, z: ComplexScalar) -> bool {
        self.inner_distance(z) > 0.0
    }

    pub fn mirror(&self) -> Self {
        match *self {
            Piece::Disk { center, radius } => Piece::Disk {
                center: center.conj(),
                radius,
            },
            Piece::Rect {
                x_min,
                x_max,
                y_min,
                y_max,
            } => Piece::Rect {
                x_min,
                x_max,
                y_min: -y_max,
                y_max: -y_min,
            },
        }
    }

    fn bbox(&self) -> [f64; 4] {
        match *self {
            Piece::Disk { center, radius } => [
                center.re - radius,
                center.re + radius,
                center.im - radius,
                center.im + radius,
            ],
            Piece::Rect {
                x_min,
                x_max,
                y_min,
                y_max,
            } => [x_min, x_max, y_min, y_max],
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Piece::Disk { center, radius } => {
                radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()
            }
            Piece::Rect {
                x_min,
                x_max,
                y_min,
                y_max,
            } => {
                x_min < x_max
                    && y_min < y_max
                    && [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "degenerate domain piece {self:?}"
            )))
        }
    }
}

/// A finite union of open disks and rectangles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneDomain {
    pub pieces: Vec<Piece>,
}

impl PlaneDomain {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidSpec("domain has no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        Ok(Self { pieces })
    }

    pub fn disk(re: f64, im: f64, radius: f64) -> Self {
        Self {
            pieces: vec![Piece::disk(re, im, radius)],
        }
    }

    pub fn rect(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            pieces: vec![Piece::rect(x_min, x_max, y_min, y_max)],
        }
    }

    pub fn contains(&self, z: ComplexScalar) -> bool {
        self.pieces.iter().any(|p| p.contains(z))
    }

    /// Lower bound for the distance from `z` to the complement; non-positive
    /// outside the domain.
    pub fn inner_distance(&self, z: ComplexScalar) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.inner_distance(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every piece has its mirror image among the pieces.
    pub fn is_symmetrized(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| self.pieces.iter().any(|o| *o == p.mirror()))
    }

    /// Union with the mirror image under complex conjugation.
    pub fn symmetrize(&self) -> Self {
        let mut pieces = self.pieces.clone();
        for p in &self.pieces {
            let m = p.mirror();
            if !pieces.contains(&m) {
                pieces.push(m);
            }
        }
        Self { pieces }
    }

    /// `[x_min, x_max, y_min, y_max]` of the union.
    pub fn bounding_box(&self) -> [f64; 4] {
        self.pieces.iter().map(Piece::bbox).fold(
            [
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
            ],
            |a, b| {
                [
                    a[0].min(b[0]),
                    a[1].max(b[1]),
                    a[2].min(b[2]),
                    a[3].max(b[3]),
                ]
            },
        )
    }

    /// Up to `n` points of the Halton (2, 3) sequence over the bounding box
    /// that lie in the domain.
    pub fn halton_points(&self, n: usize) -> Vec<ComplexScalar> {
        let [x0, x1, y0, y1] = self.bounding_box();
        let mut out = Vec::with_capacity(n);
        let mut idx = 1u64;
        let cap = 64 * n as u64 + 64;
        while out.len() < n && idx < cap {
            let z = Complex64::new(
                x0 + (x1 - x0) * radical_inverse(idx, 2),
                y0 + (y1 - y0) * radical_inverse(idx, 3),
            );
            if self.contains(z) {
                out.push(z);
            }
            idx += 1;
        }
        out
    }

    /// Uniform random points whose distance to the complement exceeds `margin`.
    pub fn random_points<R: Rng + ?Sized>(
        &self,
        n: usize,
        margin: f64,
        rng: &mut R,
    ) -> Vec<ComplexScalar> {
        let [x0, x1, y0, y1] = self.bounding_box();
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while out.len() < n && attempts < 10_000 * (n + 1) {
            attempts += 1;
            let z = Complex64::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
            if self.inner_distance(z) > margin {
                out.push(z);
            }
        }
        out
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Membership in a subset of ℍ, plus a radius containing every member.
pub trait QuaternionSet {
    fn contains(&self, q: Quaternion) -> bool;
    fn bounding_radius(&self) -> f64;
}

/// `S_ℍ = {q ∈ ℍ : σ(q) ⊂ S}` for a conjugate-symmetric plane set `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturatedSet {
    pub base: PlaneDomain,
}

pub fn saturate(domain: &PlaneDomain) -> Result<SaturatedSet> {
    if !domain.is_symmetrized() {
        return Err(Error::NotSymmetric);
    }
    Ok(SaturatedSet {
        base: domain.clone(),
    })
}

impl SaturatedSet {
    /// Depends only on `(ℜq, ‖ℑq‖)`; `s₋ = conj s₊` lies in the base whenever
    /// `s₊` does.
    pub fn contains(&self, q: Quaternion) -> bool {
        self.base.contains(Spectrum::of(q).s_plus)
    }
}

impl QuaternionSet for SaturatedSet {
    fn contains(&self, q: Quaternion) -> bool {
        SaturatedSet::contains(self, q)
    }

    fn bounding_radius(&self) -> f64 {
        let [x0, x1, y0, y1] = self.base.bounding_box();
        x0.abs().max(x1.abs()).hypot(y0.abs().max(y1.abs()))
    }
}

/// Samples members `u + v𝔰` and checks that `u + v𝔰'` is a member for a random
/// `𝔰' ∈ 𝕊`. Candidate slices alternate between the standard family and random
/// directions, so sets concentrated on one slice are still hit.
pub fn is_axially_symmetric_sample<S: QuaternionSet + ?Sized>(
    set: &S,
    samples: usize,
    rng_seed: u64,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let r = set.bounding_radius();
    let family = UnitImaginary::standard_family();
    let mut checked = 0usize;
    let mut draws = 0usize;
    while checked < samples && draws < 1000 * samples.max(1) {
        let u = rng.gen_range(-r..=r);
        let v = rng.gen_range(-r..=r);
        let s = if draws % 2 == 0 {
            family[(draws / 2) % family.len()]
        } else {
            UnitImaginary::random(&mut rng)
        };
        draws += 1;
        let q = s.point(u, v);
        if !set.contains(q) || v == 0.0 {
            continue;
        }
        checked += 1;
        let other = UnitImaginary::random(&mut rng);
        if !set.contains(other.point(u, v)) {
            return false;
        }
    }
    true
}
