//! Analysis toolkit for acyclic networks of error-free bit pipes.
//!
//! The crate models a network with rational edge capacities, linear and
//! general network codes over it, and the constructions that bound how much
//! the achievable rate region can shrink when one edge loses `delta` units of
//! capacity:
//!
//! * [`perturb`] restricts a GF(2) linear code to per-source kernels so the
//!   perturbed edge carries a constant word;
//! * [`cutset`] checks that cut-set regions lose at most `delta` per bound;
//! * [`theorem`] evaluates the multiple-access / deterministic-broadcast
//!   inequality chain on k-unicast networks with a single relay separator;
//! * [`oracle`] enumerates every code on tiny instances to ground-truth the
//!   above.
//!
//! Exact quantities (capacities, rates, flows, cut bounds) use [`Rational`];
//! entropies are evaluated in a floating scalar, [`Real`] by default.

pub mod code;
pub mod cutset;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod gf2;
pub mod info;
pub mod net;
pub mod oracle;
pub mod perturb;
pub mod rational;
pub mod region;
pub mod report;
pub mod scalar;
pub mod theorem;

pub use error::{Error, Result};
pub use scalar::{RealScalar, Scalar};

/// Exact scalar for capacities, rates and cut bounds.
pub type Rational = num_rational::Ratio<i64>;

/// Floating scalar used for entropies and information quantities.
pub type Real = f64;

/// Rate region with exact bounds (cut-set regions and their combinations).
pub type ExactRegion = region::RateRegion<Rational>;

/// Rate region with entropy-valued bounds (MAC and broadcast regions).
pub type RealRegion = region::RateRegion<Real>;

/// Tolerance used for every floating comparison of information quantities.
pub const TOLERANCE: Real = 1e-9;
