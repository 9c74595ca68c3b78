use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("fractional or non-constant exponent at position {pos}")]
    FractionalExponent { pos: usize },
    #[error("division by a non-constant expression at position {pos}")]
    DivisionByNonConstant { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("root finder did not converge after {iterations} iterations (max residual {residual:e})")]
    RootsNotConverged { iterations: usize, residual: f64 },
    #[error("point {x} is too close to a turning point")]
    TurningPointProximity { x: Complex64 },
    #[error("branch continuation collapsed near parameter {at}")]
    StepCollapse { at: f64 },
    #[error("quadrature tolerance not met (achieved error {achieved:e})")]
    Tolerance { achieved: f64 },
    #[error("multiple turning point at {x} (multiplicity {multiplicity})")]
    MultipleTurningPoint { x: Complex64, multiplicity: usize },
    #[error("Stokes line tracer stalled at {x}")]
    TracerStall { x: Complex64 },
    #[error("no canonical path from sector {sector} to {x}")]
    NoCanonicalPath { sector: usize, x: Complex64 },
    #[error("spectral resolution not reached (tail {tail:e})")]
    SpectralResolution { tail: f64 },
    #[error("path is not canonical (first violation at arc length {at})")]
    Canonicality { at: f64 },
    #[error("series has zero leading coefficient")]
    ZeroLeading,
    #[error("Pade system degenerate after reduction to M = 0")]
    DegeneratePade,
    #[error("pole {pole} lies on the integration ray")]
    PoleOnRay { pole: Complex64 },
    #[error("Laplace kernel does not decay along ray angle {ray}")]
    Divergent { ray: f64 },
    #[error("singularity at {point} obstructs the straight contour")]
    ContourSingularity { point: Complex64 },
    #[error("ill-conditioned basis (condition number {cond:e})")]
    IllConditioned { cond: f64 },
    #[error("bracket exhausted: found {found} of {wanted} eigenvalues")]
    BracketExhausted { found: usize, wanted: usize },
    #[error("ODE step underflow at arc position {at}")]
    StepUnderflow { at: f64 },
    #[error("parity violation {size:e} in exponential representation")]
    Parity { size: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
