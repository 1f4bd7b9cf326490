use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    ZeroDivision,
    #[error("λ lies in the spectrum (|λ² - 2λℜq + ‖q‖²| = {0:e})")]
    SpectrumHit(f64),
    #[error("quaternion is numerically real")]
    RealQuaternion,
    #[error("contour touches or encloses the wrong part of the spectrum")]
    ContourTouchesSpectrum,
    #[error("domain is not conjugate symmetric")]
    NotSymmetric,
    #[error("point {0} is outside the function domain")]
    OutOfDomain(String),
    #[error("power series evaluated at distance {distance} ≥ radius {radius}")]
    SeriesDivergence { distance: f64, radius: f64 },
    #[error("spectrum of the quaternion is not contained in the domain")]
    SpectrumOutsideDomain,
    #[error("spectrum lies on the domain boundary")]
    DegenerateDomain,
    #[error("quadrature did not converge with {nodes} nodes per circle (last change {delta:e})")]
    NoConvergence { nodes: usize, delta: f64 },
    #[error("no symbolic derivative for this function kind")]
    DerivativeUnavailable,
    #[error("function kind does not declare analyticity")]
    AnalyticityUndeclared,
    #[error("‖q - s0‖ = {distance} is outside the convergence disk of radius {radius}")]
    OutsideConvergenceDisk { distance: f64, radius: f64 },
    #[error("finite-difference stencil leaves the domain")]
    StencilOutsideDomain,
    #[error("slice function is not holomorphic (∂̄ residual {0:e})")]
    NotSliceHolomorphic(f64),
    #[error("function is not complex valued")]
    NotComplexValued,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),
}
