//! Evaluatable 𝕄-valued functions on conjugate-symmetric plane domains.
//!
//! Coefficient-backed kinds (polynomials, power series, resolvent kernels and
//! their sums and products) declare analyticity and carry symbolic derivatives
//! and Taylor coefficients. Closure-backed kinds are evaluatable only.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Biquaternion, ComplexScalar, Quaternion};
use crate::domain::PlaneDomain;
use crate::error::{Error, Result};
use crate::quadrature::complex_pair;

/// Number of Halton points used by [`verify_stem`] when no count is given.
pub const DEFAULT_STEM_GRID: usize = 257;

pub type ScalarFn = Arc<dyn Fn(ComplexScalar) -> Biquaternion + Send + Sync>;
pub type FallibleFn = Arc<dyn Fn(ComplexScalar) -> Result<Biquaternion> + Send + Sync>;

#[derive(Clone)]
pub enum Kind {
    /// `Σ aₖ ζᵏ`, ascending degree.
    Polynomial {
        coeffs: Vec<Biquaternion>,
    },
    /// `Σ aₖ (ζ - center)ᵏ`, valid for `|ζ - center| < radius`.
    PowerSeries {
        coeffs: Vec<Biquaternion>,
        center: f64,
        radius: f64,
    },
    /// `coeff·(ζ - pole)^(-power)`.
    Resolvent {
        pole: ComplexScalar,
        power: u32,
        coeff: Biquaternion,
    },
    Sum(Box<Kind>, Box<Kind>),
    /// Pointwise product, left factor first.
    Product(Box<Kind>, Box<Kind>),
    /// A user-supplied function; analyticity is not declared.
    Closure(ScalarFn),
    /// A function rebuilt from one slice of a quaternionic function.
    Reconstructed(FallibleFn),
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Polynomial { coeffs } => f
                .debug_struct("Polynomial")
                .field("coeffs", coeffs)
                .finish(),
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            } => f
                .debug_struct("PowerSeries")
                .field("coeffs", &coeffs.len())
                .field("center", center)
                .field("radius", radius)
                .finish(),
            Kind::Resolvent { pole, power, coeff } => f
                .debug_struct("Resolvent")
                .field("pole", pole)
                .field("power", power)
                .field("coeff", coeff)
                .finish(),
            Kind::Sum(a, b) => f.debug_tuple("Sum").field(a).field(b).finish(),
            Kind::Product(a, b) => f.debug_tuple("Product").field(a).field(b).finish(),
            Kind::Closure(_) => f.write_str("Closure"),
            Kind::Reconstructed(_) => f.write_str("Reconstructed"),
        }
    }
}

fn horner(coeffs: &[Biquaternion], t: ComplexScalar) -> Biquaternion {
    coeffs
        .iter()
        .rev()
        .fold(Biquaternion::ZERO, |acc, a| acc.scale_complex(t) + *a)
}

/// Coefficients of `p(t + shift)` from those of `p(t)`.
fn taylor_shift(coeffs: &[Biquaternion], shift: ComplexScalar) -> Vec<Biquaternion> {
    let mut b = coeffs.to_vec();
    let n = b.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let next = b[j + 1];
            b[j] += next.scale_complex(shift);
        }
    }
    b
}

fn differentiate(coeffs: &[Biquaternion]) -> Vec<Biquaternion> {
    if coeffs.len() <= 1 {
        return vec![Biquaternion::ZERO];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a.scale(k as f64))
        .collect()
}

impl Kind {
    pub fn eval(&self, z: ComplexScalar) -> Result<Biquaternion> {
        match self {
            Kind::Polynomial { coeffs } => Ok(horner(coeffs, z)),
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            } => {
                let t = z - center;
                if t.norm() >= *radius {
                    return Err(Error::SeriesDivergence {
                        distance: t.norm(),
                        radius: *radius,
                    });
                }
                Ok(horner(coeffs, t))
            }
            Kind::Resolvent { pole, power, coeff } => {
                let t = z - pole;
                if t.norm() == 0.0 {
                    return Err(Error::OutOfDomain(format!("{z} is the pole")));
                }
                Ok(coeff.scale_complex(t.powi(-(*power as i32))))
            }
            Kind::Sum(a, b) => Ok(a.eval(z)? + b.eval(z)?),
            Kind::Product(a, b) => Ok(a.eval(z)? * b.eval(z)?),
            Kind::Closure(f) => Ok(f(z)),
            Kind::Reconstructed(f) => f(z),
        }
    }

    /// Coefficient-backed kinds declare analyticity on their domain.
    pub fn is_analytic(&self) -> bool {
        match self {
            Kind::Polynomial { .. } | Kind::PowerSeries { .. } | Kind::Resolvent { .. } => true,
            Kind::Sum(a, b) | Kind::Product(a, b) => a.is_analytic() && b.is_analytic(),
            Kind::Closure(_) | Kind::Reconstructed(_) => false,
        }
    }

    /// Exact coefficient check: real-axis symmetric data with ℍ coefficients.
    pub fn certified_stem(&self) -> bool {
        match self {
            Kind::Polynomial { coeffs } | Kind::PowerSeries { coeffs, .. } => {
                coeffs.iter().all(|a| a.is_quaternion())
            }
            Kind::Resolvent { pole, coeff, .. } => pole.im == 0.0 && coeff.is_quaternion(),
            Kind::Sum(a, b) | Kind::Product(a, b) => a.certified_stem() && b.certified_stem(),
            Kind::Closure(_) | Kind::Reconstructed(_) => false,
        }
    }

    /// All coefficients have vanishing quaternion-imaginary parts.
    pub fn is_complex_valued(&self) -> Option<bool> {
        let cplx = |a: &Biquaternion| a.re.im_norm() == 0.0 && a.im.im_norm() == 0.0;
        match self {
            Kind::Polynomial { coeffs } | Kind::PowerSeries { coeffs, .. } => {
                Some(coeffs.iter().all(cplx))
            }
            Kind::Resolvent { coeff, .. } => Some(cplx(coeff)),
            Kind::Sum(a, b) | Kind::Product(a, b) => {
                Some(a.is_complex_valued()? && b.is_complex_valued()?)
            }
            Kind::Closure(_) | Kind::Reconstructed(_) => None,
        }
    }

    /// Symbolic derivative.
    pub fn derivative(&self) -> Result<Kind> {
        Ok(match self {
            Kind::Polynomial { coeffs } => Kind::Polynomial {
                coeffs: differentiate(coeffs),
            },
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            } => Kind::PowerSeries {
                coeffs: differentiate(coeffs),
                center: *center,
                radius: *radius,
            },
            Kind::Resolvent { pole, power, coeff } => Kind::Resolvent {
                pole: *pole,
                power: power + 1,
                coeff: coeff.scale(-(*power as f64)),
            },
            Kind::Sum(a, b) => Kind::Sum(Box::new(a.derivative()?), Box::new(b.derivative()?)),
            Kind::Product(a, b) => Kind::Sum(
                Box::new(Kind::Product(Box::new(a.derivative()?), b.clone())),
                Box::new(Kind::Product(a.clone(), Box::new(b.derivative()?))),
            ),
            Kind::Closure(_) | Kind::Reconstructed(_) => return Err(Error::DerivativeUnavailable),
        })
    }

    /// Radius of the largest disk about `c` on which the Taylor series at `c`
    /// converges.
    pub fn convergence_radius(&self, c: ComplexScalar) -> f64 {
        match self {
            Kind::Polynomial { .. } => f64::INFINITY,
            Kind::PowerSeries { center, radius, .. } => radius - (c - center).norm(),
            Kind::Resolvent { pole, .. } => (c - pole).norm(),
            Kind::Sum(a, b) | Kind::Product(a, b) => {
                a.convergence_radius(c).min(b.convergence_radius(c))
            }
            Kind::Closure(_) | Kind::Reconstructed(_) => 0.0,
        }
    }

    /// `F⁽ᵏ⁾(c)/k!` for `k < n`.
    pub fn taylor_coeffs(&self, c: ComplexScalar, n: usize) -> Result<Vec<Biquaternion>> {
        let pad = |mut v: Vec<Biquaternion>| {
            v.resize(n.max(v.len()), Biquaternion::ZERO);
            v.truncate(n);
            v
        };
        match self {
            Kind::Polynomial { coeffs } => Ok(pad(taylor_shift(coeffs, c))),
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            } => {
                let shift = c - center;
                if shift.norm() >= *radius {
                    return Err(Error::SeriesDivergence {
                        distance: shift.norm(),
                        radius: *radius,
                    });
                }
                Ok(pad(taylor_shift(coeffs, shift)))
            }
            Kind::Resolvent { pole, power, coeff } => {
                let d = c - pole;
                if d.norm() == 0.0 {
                    return Err(Error::OutOfDomain(format!("{c} is the pole")));
                }
                // (d + t)^(-m) = Σ (-1)^k C(m+k-1, k) d^(-m-k) t^k
                let m = *power as f64;
                let inv = d.inv();
                let mut term = inv.powi(*power as i32);
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    out.push(coeff.scale_complex(term));
                    term = term * inv * (-(m + k as f64) / (k as f64 + 1.0));
                }
                Ok(out)
            }
            Kind::Sum(a, b) => {
                let (x, y) = (a.taylor_coeffs(c, n)?, b.taylor_coeffs(c, n)?);
                Ok(x.into_iter().zip(y).map(|(p, q)| p + q).collect())
            }
            Kind::Product(a, b) => {
                let (x, y) = (a.taylor_coeffs(c, n)?, b.taylor_coeffs(c, n)?);
                Ok((0..n)
                    .map(|k| (0..=k).fold(Biquaternion::ZERO, |acc, j| acc + x[j] * y[k - j]))
                    .collect())
            }
            Kind::Closure(_) | Kind::Reconstructed(_) => Err(Error::DerivativeUnavailable),
        }
    }
}

/// An 𝕄-valued function on a conjugate-symmetric open plane domain.
#[derive(Clone, Debug)]
pub struct StemFunctionSpec {
    pub kind: Kind,
    pub domain: PlaneDomain,
    pub declared_stem: bool,
}

impl StemFunctionSpec {
    /// Symmetrizes `domain`; `declared_stem` defaults to the exact
    /// coefficient check.
    pub fn new(kind: Kind, domain: PlaneDomain) -> Result<Self> {
        let declared_stem = kind.certified_stem();
        Self::with_declared(kind, domain, declared_stem)
    }

    pub fn with_declared(kind: Kind, domain: PlaneDomain, declared_stem: bool) -> Result<Self> {
        let domain = domain.symmetrize();
        check_kind(&kind, &domain)?;
        Ok(Self {
            kind,
            domain,
            declared_stem,
        })
    }

    pub fn polynomial(coeffs: Vec<Biquaternion>, domain: PlaneDomain) -> Result<Self> {
        Self::new(Kind::Polynomial { coeffs }, domain)
    }

    /// Polynomial with quaternion coefficients, `Σ aₖζᵏ`.
    pub fn quaternion_polynomial(coeffs: &[Quaternion], domain: PlaneDomain) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&q| q.into()).collect(), domain)
    }

    pub fn power_series(
        coeffs: Vec<Biquaternion>,
        center: f64,
        radius: f64,
        domain: PlaneDomain,
    ) -> Result<Self> {
        Self::new(
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            },
            domain,
        )
    }

    /// The exponential as a truncated series `Σ_{k<terms} ζᵏ/k!`.
    pub fn exp(terms: usize, domain: PlaneDomain) -> Result<Self> {
        Self::new(exp_kind(terms), domain)
    }

    /// `ζ ↦ (ζ - pole)⁻¹`.
    pub fn resolvent(pole: ComplexScalar, domain: PlaneDomain) -> Result<Self> {
        Self::new(
            Kind::Resolvent {
                pole,
                power: 1,
                coeff: Biquaternion::ONE,
            },
            domain,
        )
    }

    /// `ζ ↦ (ζ - pole)⁻¹(ζ - pole̅)⁻¹`, which is a stem function.
    pub fn resolvent_pair(pole: ComplexScalar, domain: PlaneDomain) -> Result<Self> {
        let kind = resolvent_pair_kind(pole);
        Self::with_declared(kind, domain, true)
    }

    /// `ζ ↦ (1 - ζ)⁻¹ = Σ ζᵏ` on the unit disk.
    pub fn geometric() -> Result<Self> {
        Self::new(
            Kind::Resolvent {
                pole: Complex64::new(1.0, 0.0),
                power: 1,
                coeff: -Biquaternion::ONE,
            },
            PlaneDomain::disk(0.0, 0.0, 1.0),
        )
    }

    pub fn from_closure<F>(f: F, domain: PlaneDomain, declared_stem: bool) -> Result<Self>
    where
        F: Fn(ComplexScalar) -> Biquaternion + Send + Sync + 'static,
    {
        Self::with_declared(Kind::Closure(Arc::new(f)), domain, declared_stem)
    }

    /// Pointwise sum on the intersection-free common domain of `self`.
    pub fn sum(&self, other: &StemFunctionSpec) -> Self {
        Self {
            kind: Kind::Sum(Box::new(self.kind.clone()), Box::new(other.kind.clone())),
            domain: self.domain.clone(),
            declared_stem: self.declared_stem && other.declared_stem,
        }
    }

    /// Pointwise product `self·other` on the domain of `self`.
    pub fn product(&self, other: &StemFunctionSpec) -> Self {
        Self {
            kind: Kind::Product(Box::new(self.kind.clone()), Box::new(other.kind.clone())),
            domain: self.domain.clone(),
            declared_stem: self.declared_stem && other.declared_stem,
        }
    }

    /// `a·F` for a constant `a ∈ 𝕄` (left factor).
    pub fn scaled(&self, a: Biquaternion) -> Self {
        Self {
            kind: Kind::Product(
                Box::new(Kind::Polynomial { coeffs: vec![a] }),
                Box::new(self.kind.clone()),
            ),
            domain: self.domain.clone(),
            declared_stem: self.declared_stem && a.is_quaternion(),
        }
    }

    /// `F + a` for a constant `a ∈ 𝕄`.
    pub fn shifted(&self, a: Biquaternion) -> Self {
        Self {
            kind: Kind::Sum(
                Box::new(self.kind.clone()),
                Box::new(Kind::Polynomial { coeffs: vec![a] }),
            ),
            domain: self.domain.clone(),
            declared_stem: self.declared_stem && a.is_quaternion(),
        }
    }

    /// `F⁽ⁿ⁾` as a coefficient-backed spec on the same domain.
    pub fn nth_derivative(&self, n: usize) -> Result<Self> {
        let mut kind = self.kind.clone();
        for _ in 0..n {
            kind = kind.derivative()?;
        }
        Ok(Self {
            kind,
            domain: self.domain.clone(),
            declared_stem: self.declared_stem,
        })
    }

    pub fn is_analytic(&self) -> bool {
        self.kind.is_analytic()
    }

    pub fn evaluate(&self, lambda: ComplexScalar) -> Result<Biquaternion> {
        if !self.domain.contains(lambda) {
            return Err(Error::OutOfDomain(format!("{lambda}")));
        }
        self.kind.eval(lambda)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = SpecDoc {
            kind: KindDoc::from_kind(&self.kind)?,
            domain: self.domain.clone(),
            declared_stem: Some(self.declared_stem),
        };
        serde_json::to_string(&doc).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SpecDoc =
            serde_json::from_str(s).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let kind = doc.kind.into_kind()?;
        match doc.declared_stem {
            Some(d) => Self::with_declared(kind, doc.domain, d),
            None => Self::new(kind, doc.domain),
        }
    }
}

fn exp_kind(terms: usize) -> Kind {
    let mut coeffs = Vec::with_capacity(terms);
    let mut c = 1.0;
    for k in 0..terms {
        coeffs.push(Biquaternion::from(c));
        c /= (k + 1) as f64;
    }
    Kind::PowerSeries {
        coeffs,
        center: 0.0,
        radius: f64::INFINITY,
    }
}

fn resolvent_pair_kind(pole: ComplexScalar) -> Kind {
    let r = |p| Kind::Resolvent {
        pole: p,
        power: 1,
        coeff: Biquaternion::ONE,
    };
    Kind::Product(Box::new(r(pole)), Box::new(r(pole.conj())))
}

fn check_kind(kind: &Kind, domain: &PlaneDomain) -> Result<()> {
    match kind {
        Kind::Polynomial { coeffs } | Kind::PowerSeries { coeffs, .. } if coeffs.is_empty() => {
            Err(Error::InvalidSpec("empty coefficient list".into()))
        }
        Kind::PowerSeries { radius, .. } if !(*radius > 0.0) => Err(Error::InvalidSpec(
            "power series radius must be positive".into(),
        )),
        Kind::Resolvent { pole, .. } if domain.contains(*pole) || domain.contains(pole.conj()) => {
            Err(Error::InvalidSpec(format!(
                "pole {pole} lies inside the domain"
            )))
        }
        Kind::Sum(a, b) | Kind::Product(a, b) => {
            check_kind(a, domain)?;
            check_kind(b, domain)
        }
        _ => Ok(()),
    }
}

/// Checks `F(λ̄) = bar(F(λ))`. Coefficient-backed specs with ℍ data are
/// certified exactly; everything else is sampled on `grid_points` Halton points.
pub fn verify_stem(f: &StemFunctionSpec, grid_points: usize, tol: f64) -> bool {
    if f.kind.certified_stem() {
        return true;
    }
    stem_residual(f, grid_points)
        .map(|worst| worst <= tol)
        .unwrap_or(false)
}

/// Largest relative stem defect `‖F(λ̄) - bar F(λ)‖/(1 + ‖F(λ)‖)` over the grid.
pub fn stem_residual(f: &StemFunctionSpec, grid_points: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for z in f.domain.halton_points(grid_points.max(1)) {
        let v = f.evaluate(z)?;
        let w = f.evaluate(z.conj())?;
        worst = worst.max((w - v.bar()).cstar_norm() / (1.0 + v.cstar_norm()));
    }
    Ok(worst)
}

// JSON documents

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    #[serde(flatten)]
    kind: KindDoc,
    domain: PlaneDomain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    declared_stem: Option<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KindDoc {
    Polynomial {
        coeffs: Vec<Biquaternion>,
    },
    PowerSeries {
        coeffs: Vec<Biquaternion>,
        #[serde(default)]
        center: f64,
        /// `null` or absent means an infinite radius.
        #[serde(default)]
        radius: Option<f64>,
    },
    Exp {
        #[serde(default = "default_exp_terms")]
        terms: usize,
    },
    Resolvent {
        #[serde(with = "complex_pair")]
        pole: ComplexScalar,
        #[serde(default = "one")]
        power: u32,
        #[serde(default)]
        coeff: Option<Biquaternion>,
        #[serde(default)]
        paired: bool,
    },
    Sum {
        terms: Vec<KindDoc>,
    },
    Product {
        factors: Vec<KindDoc>,
    },
}

fn default_exp_terms() -> usize {
    40
}

fn one() -> u32 {
    1
}

impl KindDoc {
    fn into_kind(self) -> Result<Kind> {
        Ok(match self {
            KindDoc::Polynomial { coeffs } => Kind::Polynomial { coeffs },
            KindDoc::PowerSeries {
                coeffs,
                center,
                radius,
            } => Kind::PowerSeries {
                coeffs,
                center,
                radius: radius.unwrap_or(f64::INFINITY),
            },
            KindDoc::Exp { terms } => {
                if terms == 0 {
                    return Err(Error::InvalidSpec("exp needs at least one term".into()));
                }
                exp_kind(terms)
            }
            KindDoc::Resolvent {
                pole,
                power,
                coeff,
                paired,
            } => {
                if power == 0 {
                    return Err(Error::InvalidSpec(
                        "resolvent power must be positive".into(),
                    ));
                }
                let single = |p| Kind::Resolvent {
                    pole: p,
                    power,
                    coeff: Biquaternion::ONE,
                };
                let base = if paired {
                    Kind::Product(Box::new(single(pole)), Box::new(single(pole.conj())))
                } else {
                    single(pole)
                };
                match coeff {
                    Some(a) => Kind::Product(
                        Box::new(Kind::Polynomial { coeffs: vec![a] }),
                        Box::new(base),
                    ),
                    None => base,
                }
            }
            KindDoc::Sum { terms } => fold_kinds(terms, Kind::Sum)?,
            KindDoc::Product { factors } => fold_kinds(factors, Kind::Product)?,
        })
    }

    fn from_kind(kind: &Kind) -> Result<Self> {
        Ok(match kind {
            Kind::Polynomial { coeffs } => KindDoc::Polynomial {
                coeffs: coeffs.clone(),
            },
            Kind::PowerSeries {
                coeffs,
                center,
                radius,
            } => KindDoc::PowerSeries {
                coeffs: coeffs.clone(),
                center: *center,
                radius: radius.is_finite().then_some(*radius),
            },
            Kind::Resolvent { pole, power, coeff } => KindDoc::Resolvent {
                pole: *pole,
                power: *power,
                coeff: (*coeff != Biquaternion::ONE).then_some(*coeff),
                paired: false,
            },
            Kind::Sum(a, b) => KindDoc::Sum {
                terms: vec![Self::from_kind(a)?, Self::from_kind(b)?],
            },
            Kind::Product(a, b) => KindDoc::Product {
                factors: vec![Self::from_kind(a)?, Self::from_kind(b)?],
            },
            Kind::Closure(_) | Kind::Reconstructed(_) => {
                return Err(Error::InvalidSpec(
                    "closure-backed specs have no JSON form".into(),
                ))
            }
        })
    }
}

fn fold_kinds(items: Vec<KindDoc>, join: fn(Box<Kind>, Box<Kind>) -> Kind) -> Result<Kind> {
    let mut it = items.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidSpec("empty composition".into()))?
        .into_kind()?;
    it.try_fold(first, |acc, k| {
        Ok(join(Box::new(acc), Box::new(k.into_kind()?)))
    })
}
