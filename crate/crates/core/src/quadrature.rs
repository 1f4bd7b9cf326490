//! Trapezoidal quadrature of `(2πi)⁻¹∮ f(ζ) dζ` over positively oriented circles.
//!
//! With `ζ = c + r·e^{iθ}` the integral becomes `(2π)⁻¹∫ f(ζ)·r·e^{iθ} dθ`, which
//! the equispaced rule approximates by `N⁻¹ Σ f(ζ_k)·r·e^{iθ_k}`. For periodic
//! analytic integrands the error decays geometrically in `N`. Doubling `N` reuses
//! every previous node.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Biquaternion, ComplexScalar};
use crate::error::Result;

/// Compensated (Neumaier) accumulator over the eight real components.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: [f64; 8],
    comp: [f64; 8],
}

impl CompensatedSum {
    pub fn add(&mut self, v: Biquaternion) {
        for (idx, x) in v.to_array().into_iter().enumerate() {
            let s = self.sum[idx];
            let t = s + x;
            if s.abs() >= x.abs() {
                self.comp[idx] += (s - t) + x;
            } else {
                self.comp[idx] += (x - t) + s;
            }
            self.sum[idx] = t;
        }
    }

    pub fn total(&self) -> Biquaternion {
        let mut out = [0.0; 8];
        for (o, (s, c)) in out.iter_mut().zip(self.sum.iter().zip(self.comp.iter())) {
            *o = s + c;
        }
        Biquaternion::from_array(out)
    }
}

/// A positively oriented circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    #[serde(with = "complex_pair")]
    pub center: ComplexScalar,
    pub radius: f64,
    pub nodes: usize,
}

/// Trapezoidal rule on one circle, refinable by node doubling.
#[derive(Debug, Clone)]
pub struct CircleRule {
    center: ComplexScalar,
    radius: f64,
    nodes: usize,
    acc: CompensatedSum,
}

impl CircleRule {
    pub fn new<F>(center: ComplexScalar, radius: f64, nodes: usize, f: &F) -> Result<Self>
    where
        F: Fn(ComplexScalar) -> Result<Biquaternion>,
    {
        let mut rule = Self {
            center,
            radius,
            nodes,
            acc: CompensatedSum::default(),
        };
        for k in 0..nodes {
            rule.accumulate(k, nodes, f)?;
        }
        Ok(rule)
    }

    fn accumulate<F>(&mut self, k: usize, n: usize, f: &F) -> Result<()>
    where
        F: Fn(ComplexScalar) -> Result<Biquaternion>,
    {
        let theta = TAU * k as f64 / n as f64;
        let w = Complex64::from_polar(self.radius, theta);
        let v = f(self.center + w)?;
        self.acc.add(v.scale_complex(w));
        Ok(())
    }

    /// Doubles the node count, evaluating only the new midpoints.
    pub fn refine<F>(&mut self, f: &F) -> Result<()>
    where
        F: Fn(ComplexScalar) -> Result<Biquaternion>,
    {
        let n2 = self.nodes * 2;
        for k in (1..n2).step_by(2) {
            self.accumulate(k, n2, f)?;
        }
        self.nodes = n2;
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn value(&self) -> Biquaternion {
        self.acc.total().scale(1.0 / self.nodes as f64)
    }

    pub fn circle(&self) -> Circle {
        Circle {
            center: self.center,
            radius: self.radius,
            nodes: self.nodes,
        }
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(z: ComplexScalar) -> Biquaternion {
        Biquaternion::scalar(z)
    }

    #[test]
    fn cauchy_integral_of_simple_pole() {
        let c = Complex64::new(0.3, -0.2);
        let f = |z: ComplexScalar| Ok(scalar(Complex64::new(1.0, 0.0) / (z - c)));
        let rule = CircleRule::new(Complex64::new(0.0, 0.0), 1.0, 64, &f).unwrap();
        let v = rule.value();
        assert!((v - Biquaternion::ONE).max_abs() < 1e-13);
    }

    #[test]
    fn refine_matches_direct_evaluation() {
        let f = |z: ComplexScalar| Ok(scalar(z.exp() / (z - Complex64::new(0.1, 0.1))));
        let mut a = CircleRule::new(Complex64::new(0.0, 0.0), 0.7, 8, &f).unwrap();
        a.refine(&f).unwrap();
        a.refine(&f).unwrap();
        let b = CircleRule::new(Complex64::new(0.0, 0.0), 0.7, 32, &f).unwrap();
        assert_eq!(a.nodes(), 32);
        assert!((a.value() - b.value()).max_abs() < 1e-15);
        let exact = Complex64::new(0.1, 0.1).exp();
        assert!((a.value() - scalar(exact)).max_abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(Biquaternion::from(1e16));
        for _ in 0..10 {
            s.add(Biquaternion::from(1.0));
        }
        s.add(Biquaternion::from(-1e16));
        assert_eq!(s.total().re.w, 10.0);
    }
}
