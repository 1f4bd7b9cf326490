//! Numerical slice regularity: the operator `∂̄_𝔰 = ½(∂ₓ + R_𝔰∂_y)` on slices
//! `ℝ + ℝ𝔰`, the representation formula and reconstruction of a function of
//! one complex variable from a single slice.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Biquaternion, ComplexScalar, Quaternion};
use crate::calculus::fc_eval;
use crate::domain::{saturate, PlaneDomain, SaturatedSet};
use crate::error::{Error, Result};
use crate::spectral::{IdempotentPair, UnitImaginary};
use crate::stem::{verify_stem, Kind, StemFunctionSpec, DEFAULT_STEM_GRID};

pub const DEFAULT_H: f64 = 1e-5;
pub const DEFAULT_TOL: f64 = 1e-7;
/// Agreement required between a reconstruction and the original function.
pub const ROUNDTRIP_TOL: f64 = 1e-9;

pub type QuaternionFn = Arc<dyn Fn(Quaternion) -> Result<Biquaternion> + Send + Sync>;

/// An 𝕄-valued function of `q = x + y𝔰` on a spectrally saturated set.
///
/// Arguments are formed as `x + y·𝔰` componentwise, so `(x, y, 𝔰)` and
/// `(x, -y, -𝔰)` produce the same quaternion bit for bit.
#[derive(Clone)]
pub struct SliceFunction {
    f: QuaternionFn,
    pub domain: SaturatedSet,
}

impl SliceFunction {
    pub fn new<F>(f: F, domain: SaturatedSet) -> Self
    where
        F: Fn(Quaternion) -> Result<Biquaternion> + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            domain,
        }
    }

    /// `q ↦ F_ℍ(q)` on the saturation of `F`'s domain.
    pub fn from_spec(spec: &StemFunctionSpec) -> Result<Self> {
        let domain = saturate(&spec.domain)?;
        let spec = spec.clone();
        Ok(Self::new(move |q| fc_eval(&spec, q), domain))
    }

    /// The ℍ-part `q ↦ ℜ_𝕄 F_ℍ(q)` (drops the coefficient of `i`).
    pub fn quaternion_part(&self) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |q| Ok(Biquaternion::from(f(q)?.re))),
            domain: self.domain.clone(),
        }
    }

    pub fn eval_q(&self, q: Quaternion) -> Result<Biquaternion> {
        if !self.domain.contains(q) {
            return Err(Error::OutOfDomain(format!("{q}")));
        }
        (self.f)(q)
    }

    pub fn eval(&self, x: f64, y: f64, s: UnitImaginary) -> Result<Biquaternion> {
        self.eval_q(s.point(x, y))
    }
}

/// Central-difference approximation of `∂̄_𝔰 f` at `x + y𝔰`:
/// `½[(f(x+h) - f(x-h))/2h + ((f(y+h) - f(y-h))/2h)·𝔰]`.
pub fn dbar_s(f: &SliceFunction, x: f64, y: f64, s: UnitImaginary, h: f64) -> Result<Biquaternion> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let at = |x: f64, y: f64| {
        let q = s.point(x, y);
        if !f.domain.contains(q) {
            return Err(Error::StencilOutsideDomain);
        }
        (f.f)(q)
    };
    let dx = (at(x + h, y)? - at(x - h, y)?).scale(0.5 / h);
    let dy = (at(x, y + h)? - at(x, y - h)?).scale(0.5 / h);
    Ok((dx + dy * s.as_quaternion()).scale(0.5))
}

/// Sampling parameters for the regularity checks.
#[derive(Debug, Clone)]
pub struct SliceCheckConfig {
    /// Points per slice.
    pub samples: usize,
    pub h: f64,
    pub tol: f64,
    pub seed: u64,
    /// Seeded random directions added to the fixed family.
    pub random_slices: usize,
}

impl Default for SliceCheckConfig {
    fn default() -> Self {
        Self {
            samples: 50,
            h: DEFAULT_H,
            tol: DEFAULT_TOL,
            seed: 0,
            random_slices: 0,
        }
    }
}

impl SliceCheckConfig {
    fn slices(&self, rng: &mut ChaCha8Rng) -> Vec<UnitImaginary> {
        let mut out = UnitImaginary::standard_family().to_vec();
        out.extend((0..self.random_slices).map(|_| UnitImaginary::random(rng)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub max_residual: f64,
    pub h: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Max of `‖∂̄_𝔰 f‖` over sampled points on the fixed slices
/// `j, k, l, (j+k)/√2, (j+k+l)/√3` (plus optional random ones).
pub fn check_slice_regular(
    f: &SliceFunction,
    samples: usize,
    h: f64,
    tol: f64,
) -> RegularityReport {
    check_slice_regular_with(
        f,
        &SliceCheckConfig {
            samples,
            h,
            tol,
            ..SliceCheckConfig::default()
        },
    )
}

pub fn check_slice_regular_with(f: &SliceFunction, cfg: &SliceCheckConfig) -> RegularityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let slices = cfg.slices(&mut rng);
    let mut worst = 0.0_f64;
    let mut count = 0usize;
    for s in slices {
        let points = f
            .domain
            .base
            .random_points(cfg.samples, 2.0 * cfg.h, &mut rng);
        for z in points {
            let r = dbar_s(f, z.re, z.im, s, cfg.h)
                .map(|v| v.cstar_norm())
                .unwrap_or(f64::INFINITY);
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
            count += 1;
        }
    }
    RegularityReport {
        max_residual: worst,
        h: cfg.h,
        samples: count,
        pass: count > 0 && worst <= cfg.tol,
    }
}

/// Both sides of `F(x + iy) = F_ℍ(x + y𝔰)(1 - i𝔰)/2 + F_ℍ(x - y𝔰)(1 + i𝔰)/2`.
pub fn representation_formula(
    f: &StemFunctionSpec,
    x: f64,
    y: f64,
    s: UnitImaginary,
) -> Result<(Biquaternion, Biquaternion)> {
    let lhs = f.evaluate(Complex64::new(x, y))?;
    let pair = IdempotentPair::of(s);
    let outside = |e: Error| match e {
        Error::SpectrumOutsideDomain => Error::OutOfDomain(format!("{x} ± {y}i")),
        other => other,
    };
    let plus = fc_eval(f, s.point(x, y)).map_err(outside)?;
    let minus = fc_eval(f, s.point(x, -y)).map_err(outside)?;
    Ok((lhs, plus * pair.iota_plus + minus * pair.iota_minus))
}

/// The lower-sign form
/// `F(x - iy) = F_ℍ(x - y𝔰)(1 - i𝔰)/2 + F_ℍ(x + y𝔰)(1 + i𝔰)/2`.
pub fn representation_formula_conjugate(
    f: &StemFunctionSpec,
    x: f64,
    y: f64,
    s: UnitImaginary,
) -> Result<(Biquaternion, Biquaternion)> {
    representation_formula(f, x, -y, s)
}

/// `F(x + iy) = [ψ(x + y𝔰)(1 - i𝔰) + ψ(x - y𝔰)(1 + i𝔰)]/2`, for every sign of `y`.
fn reconstruct_value(
    psi: &SliceFunction,
    s: UnitImaginary,
    z: ComplexScalar,
) -> Result<Biquaternion> {
    let pair = IdempotentPair::of(s);
    Ok(psi.eval(z.re, z.im, s)? * pair.iota_plus + psi.eval(z.re, -z.im, s)? * pair.iota_minus)
}

/// Builds `F` on `domain` from the values of `psi` on the slice `ℝ + ℝ𝔰`.
///
/// `∂̄_𝔰ψ` and `∂̄_{-𝔰}ψ` are checked at sampled points first; for a
/// well-defined slice function the two conditions coincide under
/// `(y, 𝔰) ↦ (-y, -𝔰)`, but both are evaluated.
pub fn reconstruct_stem_from_slice(
    psi: &SliceFunction,
    s: UnitImaginary,
    domain: &PlaneDomain,
    cfg: &SliceCheckConfig,
) -> Result<StemFunctionSpec> {
    let domain = domain.symmetrize();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0_f64;
    for z in domain.random_points(cfg.samples, 2.0 * cfg.h, &mut rng) {
        for dir in [s, -s] {
            let r = dbar_s(psi, z.re, z.im, dir, cfg.h)?.cstar_norm();
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
    }
    if worst > cfg.tol {
        return Err(Error::NotSliceHolomorphic(worst));
    }
    let source = psi.clone();
    let kind = Kind::Reconstructed(Arc::new(move |z| reconstruct_value(&source, s, z)));
    let mut spec = StemFunctionSpec::with_declared(kind, domain, false)?;
    spec.declared_stem = verify_stem(&spec, DEFAULT_STEM_GRID, 1e-12);
    Ok(spec)
}

/// Roundtrip from one source slice.
#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub source: Quaternion,
    /// Largest relative mismatch on each target slice, in order.
    pub slice_errors: Vec<f64>,
    pub reconstructed_is_stem: bool,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub regularity: RegularityReport,
    pub roundtrips: Vec<RoundtripReport>,
    pub pass: bool,
}

/// Source and target slices of the roundtrip: `j`, `k`, `(j+k+l)/√3`.
pub fn roundtrip_slices() -> [UnitImaginary; 3] {
    let f = UnitImaginary::standard_family();
    [f[0], f[1], f[4]]
}

/// Largest `‖G_ℍ(q) - F_ℍ(q)‖/max(1, ‖F_ℍ(q)‖)` over the points `x + y𝔰`.
pub fn max_slice_mismatch(
    original: &StemFunctionSpec,
    other: &StemFunctionSpec,
    points: &[ComplexScalar],
    s: UnitImaginary,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for z in points {
        let q = s.point(z.re, z.im);
        let a = fc_eval(original, q)?;
        let b = fc_eval(other, q)?;
        worst = worst.max((a - b).cstar_norm() / a.cstar_norm().max(1.0));
    }
    Ok(worst)
}

/// Checks both directions of "slice regular ⇔ Cauchy transform of a stem
/// function" for `F_ℍ`: slice regularity of `q ↦ F_ℍ(q)`, and for each of
/// three slices, reconstruction from the ℍ-part of `F_ℍ` on that slice,
/// compared against `F_ℍ` on all three slices.
pub fn equivalence_harness(f: &StemFunctionSpec, samples: usize) -> Result<EquivalenceReport> {
    equivalence_harness_with(
        f,
        &SliceCheckConfig {
            samples,
            ..SliceCheckConfig::default()
        },
    )
}

pub fn equivalence_harness_with(
    f: &StemFunctionSpec,
    cfg: &SliceCheckConfig,
) -> Result<EquivalenceReport> {
    let full = SliceFunction::from_spec(f)?;
    let regularity = check_slice_regular_with(&full, cfg);
    let psi = full.quaternion_part();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let points = f.domain.random_points(cfg.samples, 0.0, &mut rng);
    let targets = roundtrip_slices();
    let mut roundtrips = Vec::new();
    for source in targets {
        let report = match reconstruct_stem_from_slice(&psi, source, &f.domain, cfg) {
            Ok(rec) => {
                let slice_errors = targets
                    .iter()
                    .map(|t| max_slice_mismatch(f, &rec, &points, *t).unwrap_or(f64::INFINITY))
                    .collect::<Vec<_>>();
                let ok = slice_errors.iter().all(|e| *e <= ROUNDTRIP_TOL);
                RoundtripReport {
                    source: source.as_quaternion(),
                    slice_errors,
                    reconstructed_is_stem: rec.declared_stem,
                    error: None,
                    pass: ok && rec.declared_stem,
                }
            }
            Err(e) => RoundtripReport {
                source: source.as_quaternion(),
                slice_errors: Vec::new(),
                reconstructed_is_stem: false,
                error: Some(e.to_string()),
                pass: false,
            },
        };
        roundtrips.push(report);
    }
    let pass = regularity.pass && roundtrips.iter().all(|r| r.pass);
    Ok(EquivalenceReport {
        regularity,
        roundtrips,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const L: Quaternion = Quaternion::L;
    const O: Quaternion = Quaternion::ONE;
    const Z: Quaternion = Quaternion::ZERO;

    fn ball(r: f64) -> SaturatedSet {
        saturate(&PlaneDomain::disk(0.0, 0.0, r)).unwrap()
    }

    fn poly(c: &[Quaternion], r: f64) -> StemFunctionSpec {
        StemFunctionSpec::quaternion_polynomial(c, PlaneDomain::disk(0.0, 0.0, r)).unwrap()
    }

    #[test]
    fn dbar_examples() {
        let sq = SliceFunction::new(|q| Ok((q * q).into()), ball(3.0));
        let s = UnitImaginary::new(Quaternion::new(0.0, 1.0, -2.0, 0.5)).unwrap();
        let r = dbar_s(&sq, 0.4, 0.7, s, 1e-5).unwrap();
        assert!(r.cstar_norm() < 1e-8);

        let anti = SliceFunction::new(|q| Ok(q.involution().into()), ball(3.0));
        let r = dbar_s(&anti, 0.4, 0.7, s, 1e-5).unwrap();
        assert!((r - Biquaternion::ONE).cstar_norm() < 1e-9);

        let konst = SliceFunction::new(|_| Ok(Biquaternion::new(J, K)), ball(3.0));
        assert_eq!(
            dbar_s(&konst, 0.1, 0.2, s, 1e-5).unwrap(),
            Biquaternion::ZERO
        );

        assert_eq!(
            dbar_s(&konst, 2.99999, 0.0, s, 1e-4),
            Err(Error::StencilOutsideDomain)
        );
    }

    #[test]
    fn slice_function_is_well_defined() {
        let f = SliceFunction::from_spec(&poly(&[J, K, L, O], 3.0)).unwrap();
        for s in UnitImaginary::standard_family() {
            for (x, y) in [(0.1, 0.3), (-0.7, 1.1), (0.0, -0.4)] {
                assert_eq!(f.eval(x, y, s).unwrap(), f.eval(x, -y, -s).unwrap());
            }
        }
    }

    #[test]
    fn check_slice_regular_examples() {
        let f = SliceFunction::from_spec(&poly(&[J, K, L, O], 2.0)).unwrap();
        let rep = check_slice_regular(&f, 20, DEFAULT_H, DEFAULT_TOL);
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.samples, 100);

        let re = SliceFunction::new(|q: Quaternion| Ok(Biquaternion::from(q.re())), ball(2.0));
        let rep = check_slice_regular(&re, 20, DEFAULT_H, DEFAULT_TOL);
        assert!(!rep.pass);
        assert!((rep.max_residual - 0.5).abs() < 1e-6);

        // ζ₀ = 3 lies outside the ball of radius 2
        let zeta0 = Complex64::new(3.0, 0.0);
        let kernel = SliceFunction::new(
            move |q| {
                let d = Biquaternion::scalar(zeta0) - Biquaternion::from(q);
                d.inverse()
            },
            ball(2.0),
        );
        assert!(check_slice_regular(&kernel, 20, DEFAULT_H, DEFAULT_TOL).pass);
    }

    #[test]
    fn cauchy_kernel_with_complex_pole_is_slice_regular() {
        let zeta = Complex64::new(0.3, 2.5);
        let kernel = SliceFunction::new(move |q| crate::spectral::resolvent(q, zeta), ball(2.0));
        let rep = check_slice_regular(&kernel, 20, DEFAULT_H, DEFAULT_TOL);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn representation_formula_examples() {
        let id = poly(&[Z, O], 3.0);
        let (l, r) = representation_formula(&id, 0.0, 1.0, UnitImaginary::J).unwrap();
        assert_eq!(l, Biquaternion::I);
        assert!((r - Biquaternion::I).cstar_norm() < 1e-15);

        let f = poly(&[J, K, L, Quaternion::new(0.5, 0.0, 1.0, 0.0)], 3.0);
        let s = UnitImaginary::new(Quaternion::new(0.0, 0.2, 0.3, -0.9)).unwrap();
        let (l, r) = representation_formula(&f, 0.7, 0.0, s).unwrap();
        assert!((l - r).cstar_norm() < 1e-14);
        assert!((l - f.evaluate(Complex64::new(0.7, 0.0)).unwrap()).cstar_norm() == 0.0);

        let e = StemFunctionSpec::exp(40, PlaneDomain::disk(0.0, 0.0, 4.0)).unwrap();
        for s in UnitImaginary::standard_family() {
            let (l, r) = representation_formula(&e, 0.0, PI, s).unwrap();
            assert!((l + Biquaternion::ONE).cstar_norm() < 1e-12);
            assert!((r + Biquaternion::ONE).cstar_norm() < 1e-12);
        }
    }

    #[test]
    fn representation_formula_conjugate_sign() {
        let id = poly(&[Z, O], 3.0);
        let (l, r) = representation_formula_conjugate(&id, 0.0, 1.0, UnitImaginary::J).unwrap();
        assert_eq!(l, -Biquaternion::I);
        assert!((r + Biquaternion::I).cstar_norm() < 1e-15);
        assert!(matches!(
            representation_formula(&id, 5.0, 0.0, UnitImaginary::J),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn reconstruct_square_from_slice_j() {
        let domain = PlaneDomain::disk(0.0, 0.0, 2.0);
        let psi = SliceFunction::new(|q| Ok((q * q).into()), saturate(&domain).unwrap());
        let rec = reconstruct_stem_from_slice(
            &psi,
            UnitImaginary::J,
            &domain,
            &SliceCheckConfig::default(),
        )
        .unwrap();
        assert!(rec.declared_stem);
        let sq = poly(&[Z, Z, O], 2.0);
        let diag = UnitImaginary::new(Quaternion::new(0.0, 1.0, 1.0, 0.0)).unwrap();
        let pts = [
            Complex64::new(0.3, 0.4),
            Complex64::new(-1.0, 0.2),
            Complex64::new(0.5, -1.1),
        ];
        for s in [UnitImaginary::K, diag] {
            assert!(max_slice_mismatch(&sq, &rec, &pts, s).unwrap() < 1e-14);
        }
    }

    #[test]
    fn reconstruct_exp_from_slice_k() {
        let domain = PlaneDomain::disk(0.0, 0.0, 3.0);
        let e = StemFunctionSpec::exp(40, domain.clone()).unwrap();
        let psi = SliceFunction::from_spec(&e).unwrap();
        let rec = reconstruct_stem_from_slice(
            &psi,
            UnitImaginary::K,
            &domain,
            &SliceCheckConfig::default(),
        )
        .unwrap();
        let pts = domain.halton_points(30);
        for s in roundtrip_slices() {
            assert!(max_slice_mismatch(&e, &rec, &pts, s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn reconstruct_rejects_real_part() {
        let domain = PlaneDomain::disk(0.0, 0.0, 2.0);
        let psi = SliceFunction::new(
            |q: Quaternion| Ok(Biquaternion::from(q.re())),
            saturate(&domain).unwrap(),
        );
        assert!(matches!(
            reconstruct_stem_from_slice(
                &psi,
                UnitImaginary::J,
                &domain,
                &SliceCheckConfig::default()
            ),
            Err(Error::NotSliceHolomorphic(_))
        ));
    }

    #[test]
    fn reconstruction_is_slice_independent() {
        let domain = PlaneDomain::disk(0.0, 0.0, 2.0);
        let f = poly(&[J, Quaternion::new(0.5, -1.0, 0.0, 0.3), K, L], 2.0);
        let psi = SliceFunction::from_spec(&f).unwrap();
        let cfg = SliceCheckConfig::default();
        let a = reconstruct_stem_from_slice(&psi, UnitImaginary::J, &domain, &cfg).unwrap();
        let b =
            reconstruct_stem_from_slice(&psi, UnitImaginary::standard_family()[3], &domain, &cfg)
                .unwrap();
        for z in domain.halton_points(50) {
            let d = a.evaluate(z).unwrap() - b.evaluate(z).unwrap();
            assert!(d.cstar_norm() < 1e-10);
        }
    }

    #[test]
    fn harness_passes_for_polynomial_and_exp() {
        let f = poly(&[J, K, L, O, Quaternion::new(0.1, 0.2, 0.3, 0.4)], 1.5);
        let rep = equivalence_harness(&f, 20).unwrap();
        assert!(rep.pass, "{rep:?}");
        let e = StemFunctionSpec::exp(40, PlaneDomain::disk(0.0, 0.0, 3.0)).unwrap();
        assert!(equivalence_harness(&e, 20).unwrap().pass);
    }

    #[test]
    fn harness_reports_perturbed_spec() {
        let f = poly(&[J, K, O], 2.0).shifted(Biquaternion::I.scale(1e-3));
        let rep = equivalence_harness(&f, 20).unwrap();
        assert!(rep.regularity.pass);
        assert!(!rep.pass);
        let first = &rep.roundtrips[0];
        assert!(first.slice_errors[1] > 5e-4, "{first:?}");
    }
}
