//! Floating bodies and floating areas of convex bodies in real space forms.
//!
//! A real space form of curvature `lambda` is modeled on a ball `B^n(lambda)`
//! in Euclidean space: the open ball of radius `1/sqrt(-lambda)` for negative
//! curvature (the projective Beltrami–Klein picture), all of `R^n` otherwise.
//! Geodesics of the model are straight chords, so geodesically convex bodies
//! are ordinary Euclidean convex bodies inside the model domain, and all
//! curved-space quantities (distances, volumes, boundary measures, normal
//! curvatures) become explicit Euclidean integrals with densities depending
//! on `lambda`.
//!
//! On top of that model the crate computes
//!
//! * the floating body of a convex body: the intersection of all half-spaces
//!   that cut off at most a fixed amount of curved volume,
//! * the floating area: a curvature integral over the boundary that reduces
//!   to the classical affine surface area in the flat case,
//! * the derivative link between the two: the volume deficit of the floating
//!   body, divided by the cut parameter, converges to a dimensional constant
//!   times the floating area,
//! * structural properties (sandwich bounds by flat floating bodies, the
//!   valuation identity, isometry invariance, upper semi-continuity probes,
//!   an isoperimetric probe over ellipse families).
//!
//! Start with [`SpaceForm`] and [`ConvexBody`]; the numbered experiments in
//! [`experiments`] are the scripted end-to-end runs, and `examples/` in the
//! crate root shows one runnable program per capability.

pub mod bodies;
pub mod capvolume;
pub mod cli;
pub mod experiments;
pub mod floatarea;
pub mod numerics;
pub mod spaceform;

pub use bodies::{BodyKind, BoundarySample, ConvexBody, DirectionGrid};
pub use capvolume::{CapDepthProfile, FloatingBodyResult};
pub use floatarea::{ConvergenceReport, FloatingAreaResult};
pub use spaceform::{Direction, Motion, Point, SpaceForm, TangentVector};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the model domain, or a body sticks out of it.
    OutsideModel(String),
    /// Invalid construction parameters (dimension, convexity, emptiness...).
    InvalidBody(String),
    /// An argument was outside the admissible range of an operation.
    OutOfRange(String),
    /// Function argument outside the principal branch of `tan^lambda`.
    TanDomain(String),
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure(String),
    /// A bracketed root solve failed to converge.
    SolverFailure(String),
    /// The Wulff shape of a profile is empty.
    EmptyWulff,
    /// Malformed input file or flag value.
    Parse(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::OutsideModel(m) => write!(f, "outside model domain: {m}"),
            Error::InvalidBody(m) => write!(f, "invalid body: {m}"),
            Error::OutOfRange(m) => write!(f, "argument out of range: {m}"),
            Error::TanDomain(m) => write!(f, "tan^lambda domain error: {m}"),
            Error::QuadratureFailure(m) => write!(f, "quadrature failure: {m}"),
            Error::SolverFailure(m) => write!(f, "solver failure: {m}"),
            Error::EmptyWulff => write!(f, "empty Wulff shape"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Numeric tolerances and iteration caps shared by the solvers and
/// quadratures. Every field can be overridden; `Default` gives the values
/// used throughout the test suite.
#[derive(Debug, Clone)]
pub struct NumericParams {
    /// Relative tolerance for adaptive quadrature.
    pub quad_rel_tol: f64,
    /// Maximum bisection depth of the adaptive quadrature.
    pub quad_max_depth: u32,
    /// Absolute tolerance on the depth variable in cap-depth solves.
    pub depth_tol: f64,
    /// Cap-depth residual bound as a fraction of the total body measure.
    pub residual_factor: f64,
    /// Iteration cap for bracketed root solves.
    pub max_iter: u32,
    /// Unit-norm check tolerance for directions.
    pub unit_tol: f64,
    /// Tolerance for geometric round trips (exp/log, isometries).
    pub geom_tol: f64,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            quad_rel_tol: 1e-10,
            quad_max_depth: 48,
            depth_tol: 1e-12,
            residual_factor: 1e-10,
            max_iter: 200,
            unit_tol: 1e-12,
            geom_tol: 1e-10,
        }
    }
}
