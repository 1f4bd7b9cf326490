//! The quaternionic Cauchy transform `C[F](q) = (2πi)⁻¹∮_Γ F(ζ)(ζ - q)⁻¹dζ`,
//! extended derivatives and Taylor expansion about real points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Biquaternion, ComplexScalar, Quaternion};
use crate::calculus::fc_eval;
use crate::domain::PlaneDomain;
use crate::error::{Error, Result};
use crate::quadrature::{Circle, CircleRule};
use crate::spectral::{resolvent, Spectrum};
use crate::stem::StemFunctionSpec;

pub const DEFAULT_TOL: f64 = 1e-11;
pub const DEFAULT_NODES: usize = 32;
pub const MAX_NODES: usize = 1 << 14;

/// Positively oriented circles bounding a Cauchy domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub circles: Vec<Circle>,
}

impl ContourSpec {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        for c in &mut self.circles {
            c.nodes = nodes;
        }
        self
    }

    /// Checks node counts, disjointness, containment in `domain`, and that
    /// every point of `σ(q)` lies strictly inside some circle.
    pub fn validate(&self, q: Quaternion, domain: &PlaneDomain) -> Result<()> {
        if self.circles.is_empty() {
            return Err(Error::InvalidArgument("contour has no circles".into()));
        }
        for c in &self.circles {
            if c.nodes < 8 || !c.nodes.is_power_of_two() {
                return Err(Error::InvalidArgument(format!(
                    "node count {} must be a power of two ≥ 8",
                    c.nodes
                )));
            }
            if !(c.radius > 0.0) {
                return Err(Error::InvalidArgument(
                    "circle radius must be positive".into(),
                ));
            }
            if domain.inner_distance(c.center) <= c.radius {
                return Err(Error::InvalidArgument(format!(
                    "circle at {} with radius {} leaves the domain",
                    c.center, c.radius
                )));
            }
        }
        for (i, a) in self.circles.iter().enumerate() {
            for b in &self.circles[i + 1..] {
                if (a.center - b.center).norm() <= a.radius + b.radius {
                    return Err(Error::InvalidArgument("contour circles overlap".into()));
                }
            }
        }
        for s in Spectrum::of(q).points() {
            let mut inside = false;
            for c in &self.circles {
                let d = (s - c.center).norm();
                if (d - c.radius).abs() <= 1e-12 * (1.0 + c.radius) {
                    return Err(Error::ContourTouchesSpectrum);
                }
                inside |= d < c.radius;
            }
            if !inside {
                return Err(Error::ContourTouchesSpectrum);
            }
        }
        Ok(())
    }
}

/// Circles of radius `min(‖ℑq‖/2, d/2)` about `s±`, where `d` bounds the
/// distance from `σ(q)` to the domain boundary; one circle of radius `d/2` when
/// `q` is real.
pub fn default_contour(q: Quaternion, domain: &PlaneDomain) -> Result<ContourSpec> {
    let spec = Spectrum::of(q);
    let d = spec
        .points()
        .iter()
        .map(|s| domain.inner_distance(*s))
        .fold(f64::INFINITY, f64::min);
    if d < 0.0 {
        return Err(Error::SpectrumOutsideDomain);
    }
    if d == 0.0 {
        return Err(Error::DegenerateDomain);
    }
    let circle = |center: ComplexScalar, radius: f64| Circle {
        center,
        radius,
        nodes: DEFAULT_NODES,
    };
    let circles = if spec.is_real {
        vec![circle(Complex64::new(q.re(), 0.0), d / 2.0)]
    } else {
        let r = (q.im_norm() / 2.0).min(d / 2.0);
        vec![circle(spec.s_plus, r), circle(spec.s_minus, r)]
    };
    Ok(ContourSpec { circles })
}

/// Value of a Cauchy transform together with its quadrature metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyResult {
    pub value: Biquaternion,
    /// Norm of the change produced by the last node doubling.
    pub error_estimate: f64,
    /// Nodes per circle at termination.
    pub nodes_used: usize,
    pub contour: ContourSpec,
}

/// Trapezoidal quadrature on every circle, doubling nodes until the change
/// `δ` satisfies `δ ≤ tol·max(1, ‖C[F](q)‖)`.
pub fn cauchy_transform(
    f: &StemFunctionSpec,
    q: Quaternion,
    contour: &ContourSpec,
    tol: f64,
) -> Result<CauchyResult> {
    if !f.is_analytic() {
        return Err(Error::AnalyticityUndeclared);
    }
    contour.validate(q, &f.domain)?;
    let integrand = |z: ComplexScalar| -> Result<Biquaternion> {
        let kernel = resolvent(q, z).map_err(|_| Error::ContourTouchesSpectrum)?;
        Ok(f.evaluate(z)? * kernel)
    };
    let mut rules = contour
        .circles
        .iter()
        .map(|c| CircleRule::new(c.center, c.radius, c.nodes, &integrand))
        .collect::<Result<Vec<_>>>()?;
    let total = |rules: &[CircleRule]| {
        rules
            .iter()
            .fold(Biquaternion::ZERO, |acc, r| acc + r.value())
    };
    let mut value = total(&rules);
    loop {
        for r in &mut rules {
            r.refine(&integrand)?;
        }
        let next = total(&rules);
        let delta = (next - value).cstar_norm();
        value = next;
        if delta <= tol * value.cstar_norm().max(1.0) {
            return Ok(CauchyResult {
                value,
                error_estimate: delta,
                nodes_used: rules[0].nodes(),
                contour: ContourSpec {
                    circles: rules.iter().map(CircleRule::circle).collect(),
                },
            });
        }
        if rules[0].nodes() >= MAX_NODES {
            return Err(Error::NoConvergence {
                nodes: rules[0].nodes(),
                delta,
            });
        }
    }
}

/// [`cauchy_transform`] on [`default_contour`] with tolerance [`DEFAULT_TOL`].
pub fn cauchy_transform_default(f: &StemFunctionSpec, q: Quaternion) -> Result<CauchyResult> {
    let contour = default_contour(q, &f.domain)?;
    cauchy_transform(f, q, &contour, DEFAULT_TOL)
}

/// `‖C[F](q) - F_ℍ(q)‖` with the transform on the default contour.
pub fn check_spectral_equivalence(f: &StemFunctionSpec, q: Quaternion, tol: f64) -> Result<f64> {
    let contour = default_contour(q, &f.domain)?;
    let c = cauchy_transform(f, q, &contour, tol)?;
    Ok((c.value - fc_eval(f, q)?).cstar_norm())
}

/// `C[F⁽ⁿ⁾](q)`, with `F⁽ⁿ⁾` the symbolic derivative.
pub fn extended_derivative(f: &StemFunctionSpec, n: usize, q: Quaternion) -> Result<Biquaternion> {
    let d = f.nth_derivative(n)?;
    Ok(cauchy_transform_default(&d, q)?.value)
}

/// Largest radius `r` such that the Taylor series of `F` about the real point
/// `s0` converges on `Disk(s0, r)` and the disk lies in the domain.
pub fn taylor_radius(f: &StemFunctionSpec, s0: f64) -> Result<f64> {
    let c = Complex64::new(s0, 0.0);
    if !f.domain.contains(c) {
        return Err(Error::OutOfDomain(format!("{s0}")));
    }
    if !f.is_analytic() {
        return Err(Error::DerivativeUnavailable);
    }
    Ok(f.domain.inner_distance(c).min(f.kind.convergence_radius(c)))
}

/// `Σ_{n<terms} F⁽ⁿ⁾(s0)/n!·(q - s0)ⁿ`, coefficients on the left.
pub fn taylor_eval(
    f: &StemFunctionSpec,
    s0: f64,
    q: Quaternion,
    terms: usize,
) -> Result<Biquaternion> {
    let radius = taylor_radius(f, s0)?;
    let h = q - Quaternion::real(s0);
    let distance = h.norm();
    if distance >= radius {
        return Err(Error::OutsideConvergenceDisk { distance, radius });
    }
    let coeffs = f.kind.taylor_coeffs(Complex64::new(s0, 0.0), terms)?;
    Ok(coeffs
        .iter()
        .rev()
        .fold(Biquaternion::ZERO, |acc, c| acc * h + *c))
}

pub fn taylor_at_zero(f: &StemFunctionSpec, q: Quaternion, terms: usize) -> Result<Biquaternion> {
    taylor_eval(f, 0.0, q, terms)
}
