use num_complex::Complex64;
use proptest::prelude::*;
use quatcalc::calculus::{fc_eval, fc_poly_eval};
use quatcalc::spectral::{resolvent, IdempotentPair};
use quatcalc::{Biquaternion, PlaneDomain, Quaternion, Spectrum, StemFunctionSpec, UnitImaginary};

fn quat(scale: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-scale..scale).prop_map(Quaternion::from_array)
}

fn biquat(scale: f64) -> impl Strategy<Value = Biquaternion> {
    (quat(scale), quat(scale)).prop_map(|(a, b)| Biquaternion::new(a, b))
}

fn unit() -> impl Strategy<Value = UnitImaginary> {
    quat(1.0)
        .prop_filter("needs an imaginary part", |q| q.im_norm() > 1e-3)
        .prop_map(|q| UnitImaginary::new(q).unwrap())
}

fn close(a: Biquaternion, b: Biquaternion, tol: f64) -> bool {
    (a - b).cstar_norm() <= tol * a.cstar_norm().max(b.cstar_norm()).max(1.0)
}

fn qclose(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #[test]
    fn quaternion_ring_laws(a in quat(3.0), b in quat(3.0), c in quat(3.0)) {
        prop_assert!(qclose((a * b) * c, a * (b * c), 1e-14));
        prop_assert!(qclose(a * (b + c), a * b + a * c, 1e-14));
        prop_assert!(qclose((a * b).involution(), b.involution() * a.involution(), 1e-15));
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-14 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn quaternion_inverse(a in quat(3.0)) {
        prop_assume!(a.norm() > 1e-3);
        let inv = a.inverse().unwrap();
        prop_assert!(qclose(a * inv, Quaternion::ONE, 1e-13));
        prop_assert!(qclose(inv * a, Quaternion::ONE, 1e-13));
    }

    #[test]
    fn biquaternion_algebra(a in biquat(2.0), b in biquat(2.0), c in biquat(2.0)) {
        prop_assert!(close((a * b) * c, a * (b * c), 1e-14));
        prop_assert!(close((a * b).star(), b.star() * a.star(), 1e-15));
        prop_assert!(close((a * b).bar(), a.bar() * b.bar(), 1e-15));
        prop_assert_eq!(a.star().star(), a);
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn matrix_rep_is_a_faithful_homomorphism(a in biquat(2.0), b in biquat(2.0)) {
        let lhs = (a * b).matrix_rep();
        let rhs = a.matrix_rep() * b.matrix_rep();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14 * (1.0 + a.cstar_norm() * b.cstar_norm()));
        prop_assert!(close(Biquaternion::from_matrix(a.matrix_rep()), a, 1e-15));
        // star is the conjugate transpose
        prop_assert!(a.star().matrix_rep().max_abs_diff(&a.matrix_rep().conj_transpose()) <= 1e-15 * (1.0 + a.cstar_norm()));
    }

    #[test]
    fn cstar_norm_is_the_top_singular_value(a in biquat(3.0)) {
        // σ² solves t² - ‖M‖_F² t + |det M|² = 0, and is the larger root
        let m = a.matrix_rep();
        let fro = m.frobenius_sqr();
        let det = m.det().norm();
        let t = a.cstar_norm().powi(2);
        prop_assert!(t >= 0.5 * fro * (1.0 - 1e-14));
        prop_assert!((t * t - fro * t + det * det).abs() <= 1e-12 * fro * fro + 1e-300);
    }

    #[test]
    fn cstar_axioms(a in biquat(2.0), b in biquat(2.0)) {
        let n = a.cstar_norm();
        prop_assert!(((a.star() * a).cstar_norm() - n * n).abs() <= 1e-13 * (1.0 + n * n));
        prop_assert!((a * b).cstar_norm() <= n * b.cstar_norm() * (1.0 + 1e-13) + 1e-15);
        prop_assert!((a + b).cstar_norm() <= (n + b.cstar_norm()) * (1.0 + 1e-14) + 1e-15);
        let aa = a.star() * a;
        prop_assert!(aa.cstar_norm() <= (aa + b.star() * b).cstar_norm() * (1.0 + 1e-13) + 1e-15);
        prop_assert!((a.star().cstar_norm() - n).abs() <= 1e-14 * (1.0 + n));
    }

    #[test]
    fn spectrum_is_similarity_invariant(q in quat(2.0), p in quat(2.0)) {
        prop_assume!(p.norm() > 1e-2);
        let r = p * q * p.inverse().unwrap();
        let (a, b) = (Spectrum::of(q), Spectrum::of(r));
        prop_assert!((a.s_plus - b.s_plus).norm() <= 1e-12 * (1.0 + q.norm()));
        prop_assert!((a.s_minus - b.s_minus).norm() <= 1e-12 * (1.0 + q.norm()));
    }

    #[test]
    fn resolvent_identity(q in quat(2.0), l in prop::array::uniform2(-3.0..3.0f64), m in prop::array::uniform2(-3.0..3.0f64)) {
        let (l, m) = (Complex64::new(l[0], l[1]), Complex64::new(m[0], m[1]));
        let s = Spectrum::of(q);
        for z in s.points() {
            prop_assume!((z - l).norm() > 0.05 && (z - m).norm() > 0.05);
        }
        let (rl, rm) = (resolvent(q, l).unwrap(), resolvent(q, m).unwrap());
        // R(λ) - R(μ) = (μ - λ) R(λ) R(μ), and the resolvents commute
        let lhs = rl - rm;
        let rhs = (rl * rm).scale_complex(m - l);
        prop_assert!((lhs - rhs).cstar_norm() <= 1e-10 * (1.0 + rl.cstar_norm() * rm.cstar_norm()));
        prop_assert!(close(rl * rm, rm * rl, 1e-12));
    }

    #[test]
    fn idempotents_split_the_algebra(s in unit()) {
        let p = IdempotentPair::of(s);
        let i = Biquaternion::I;
        let sq = Biquaternion::from(s.as_quaternion());
        prop_assert!(close(p.iota_plus * p.iota_plus, p.iota_plus, 1e-15));
        prop_assert!(close(p.iota_minus * p.iota_minus, p.iota_minus, 1e-15));
        prop_assert!((p.iota_plus * p.iota_minus).cstar_norm() <= 1e-15);
        prop_assert!(close(p.iota_plus + p.iota_minus, Biquaternion::ONE, 1e-16));
        prop_assert!(close(p.iota_plus * sq, i * p.iota_plus, 1e-15));
        prop_assert!(close(p.iota_minus * sq, -(i * p.iota_minus), 1e-15));
    }

    #[test]
    fn calculus_matches_direct_polynomial(coeffs in prop::collection::vec(quat(1.0), 1..7), q in quat(0.9)) {
        let f = StemFunctionSpec::quaternion_polynomial(&coeffs, PlaneDomain::disk(0.0, 0.0, 3.0)).unwrap();
        let v = fc_eval(&f, q).unwrap();
        prop_assert!(v.im.norm() <= 1e-13 * (1.0 + v.cstar_norm()));
        prop_assert!(qclose(v.re, fc_poly_eval(&coeffs, q), 1e-13));
    }

    #[test]
    fn real_coefficients_commute_with_rotations(coeffs in prop::collection::vec(-1.0..1.0f64, 1..7), q in quat(0.9), p in quat(1.0)) {
        prop_assume!(p.norm() > 1e-2);
        let c: Vec<Quaternion> = coeffs.iter().map(|x| Quaternion::real(*x)).collect();
        let f = StemFunctionSpec::quaternion_polynomial(&c, PlaneDomain::disk(0.0, 0.0, 3.0)).unwrap();
        let pinv = p.inverse().unwrap();
        let lhs = fc_eval(&f, p * q * pinv).unwrap();
        let rhs = Biquaternion::from(p) * fc_eval(&f, q).unwrap() * Biquaternion::from(pinv);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn spec_json_roundtrip(coeffs in prop::collection::vec(biquat(1.0), 1..5), r in 0.5..4.0f64) {
        let f = StemFunctionSpec::polynomial(coeffs, PlaneDomain::disk(0.0, 0.0, r)).unwrap();
        let g = StemFunctionSpec::from_json(&f.to_json().unwrap()).unwrap();
        prop_assert_eq!(f.to_json().unwrap(), g.to_json().unwrap());
        let z = Complex64::new(0.1, 0.2);
        prop_assert_eq!(f.evaluate(z).unwrap(), g.evaluate(z).unwrap());
    }

    #[test]
    fn biquaternion_json_is_eight_reals(a in biquat(5.0)) {
        let s = serde_json::to_string(&a).unwrap();
        let back: [f64; 8] = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(Biquaternion::from_array(back), a);
    }
}
