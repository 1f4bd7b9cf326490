//! The functional calculus `q ↦ F_ℍ(q) = F(s₊)ι₊(𝔰_q̃) + F(s₋)ι₋(𝔰_q̃)`.

use crate::algebra::{Biquaternion, Quaternion};
use crate::error::{Error, Result};
use crate::spectral::{IdempotentPair, Spectrum, UnitImaginary};
use crate::stem::StemFunctionSpec;

/// Tolerance for the numerical centrality check on closure-backed factors.
pub const CENTRALITY_TOL: f64 = 1e-12;

fn eval_on_spectrum(f: &StemFunctionSpec, spec: &Spectrum) -> Result<(Biquaternion, Biquaternion)> {
    if !spec.points().iter().all(|s| f.domain.contains(*s)) {
        return Err(Error::SpectrumOutsideDomain);
    }
    let lift = |e: Error| match e {
        Error::OutOfDomain(_) => Error::SpectrumOutsideDomain,
        other => other,
    };
    let plus = f.evaluate(spec.s_plus).map_err(lift)?;
    if spec.is_real {
        return Ok((plus, plus));
    }
    Ok((plus, f.evaluate(spec.s_minus).map_err(lift)?))
}

/// `F_ℍ(q)`. Real `q` takes the value `F(ℜq)`; otherwise the value of `F` at
/// each eigenvalue multiplies the matching idempotent from the left.
pub fn fc_eval(f: &StemFunctionSpec, q: Quaternion) -> Result<Biquaternion> {
    let spec = Spectrum::of(q);
    let (fp, fm) = eval_on_spectrum(f, &spec)?;
    if spec.is_real {
        return Ok(fp);
    }
    let pair = IdempotentPair::of(UnitImaginary::of(q)?);
    Ok(fp * pair.iota_plus + fm * pair.iota_minus)
}

/// Whether `F_ℍ(q)` lies in ℍ, relative to its size.
pub fn fc_is_quaternion(f: &StemFunctionSpec, q: Quaternion, tol: f64) -> Result<bool> {
    let v = fc_eval(f, q)?;
    Ok(v.im.norm() <= tol * (1.0 + v.cstar_norm()))
}

/// Whether `q` is (numerically) a zero of `F_ℍ`; exactly when `F` vanishes on
/// `σ(q)`.
pub fn fc_zero_set_test(f: &StemFunctionSpec, q: Quaternion, tol: f64) -> Result<bool> {
    Ok(fc_eval(f, q)?.cstar_norm() <= tol)
}

fn is_central(v: Biquaternion) -> bool {
    let defect = v.re.im_norm().hypot(v.im.im_norm());
    defect <= CENTRALITY_TOL * (1.0 + v.cstar_norm())
}

fn check_complex_valued(f: &StemFunctionSpec, q: Quaternion) -> Result<()> {
    match f.kind.is_complex_valued() {
        Some(true) => Ok(()),
        Some(false) => Err(Error::NotComplexValued),
        None => {
            let spec = Spectrum::of(q);
            let mut points: Vec<_> = spec.points().to_vec();
            points.extend(f.domain.halton_points(32));
            for z in points {
                if !is_central(f.evaluate(z)?) {
                    return Err(Error::NotComplexValued);
                }
            }
            Ok(())
        }
    }
}

/// Both sides of `(Ff)_ℍ(q) = F_ℍ(q)·f_ℍ(q)` for complex-valued `f`.
pub fn fc_module_law(
    big_f: &StemFunctionSpec,
    f: &StemFunctionSpec,
    q: Quaternion,
) -> Result<(Biquaternion, Biquaternion)> {
    check_complex_valued(f, q)?;
    let rhs = fc_eval(big_f, q)? * fc_eval(f, q)?;
    let lhs = fc_eval(&big_f.product(f), q)?;
    Ok((lhs, rhs))
}

/// `Σ aₙqⁿ` with coefficients on the left, by Horner's rule.
pub fn fc_poly_eval(coeffs: &[Quaternion], q: Quaternion) -> Quaternion {
    coeffs
        .iter()
        .rev()
        .fold(Quaternion::ZERO, |acc, &a| acc * q + a)
}
