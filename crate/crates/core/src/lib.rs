//! Simulation and analytical numerics for a random graph model with
//! preferential edge attachment and detachment.
//!
//! The toolkit has three layers:
//!
//! * **Simulation** — [`graph_process`] runs the discrete-time in-degree
//!   chain of the graph model; [`yule_process`] runs the equivalent
//!   continuous-time household model (a generalized Yule process with
//!   births and deaths) via exponential-clock dynamics. The state of the
//!   Yule model observed at its census times has the same law as the
//!   graph chain, and [`analysis`] can test that equivalence empirically.
//! * **Exact limits** — [`limit_dist`] evaluates the limit in-degree
//!   distribution of a uniformly chosen vertex in closed form in all four
//!   parameter regimes, together with tail asymptotics, moments, and an
//!   independent Laplace-integral oracle.
//! * **Special functions** — [`specfun`] provides the from-scratch
//!   log-Gamma, Beta, Gauss hypergeometric, confluent hypergeometric and
//!   Bessel K₁ evaluations the closed forms require.
//!
//! Everything is deterministic given a seed: trajectories are keyed by
//! `(seed, stream)` pairs of a counter-based generator, so ensembles
//! reproduce bit-for-bit under any parallel schedule.
//!
//! ```
//! use yulegraph::{ModelParams, Regime};
//! use yulegraph::limit_dist::{limit_pmf, expectation, Moment};
//!
//! let params = ModelParams::new(1.0, 1.0, 0.0).unwrap();
//! assert_eq!(params.regime(), Regime::NoDetachment);
//!
//! // With no detachment and equal rates the limit law is Yule-Simon:
//! // p_j = 1/(j(j+1)).
//! let pmf = limit_pmf(&params, 10).unwrap();
//! assert!((pmf.values[1] - 0.5).abs() < 1e-14);
//! assert!((pmf.values[2] - 1.0 / 6.0).abs() < 1e-14);
//!
//! // Here too many edges are produced for a finite mean degree.
//! assert_eq!(expectation(&params), Moment::Infinite);
//! ```

pub mod analysis;
pub mod fenwick;
pub mod graph_process;
pub mod limit_dist;
mod model;
mod numeric;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod yule_process;

pub use model::{ModelParams, Regime};

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series did not reach its truncation criterion within the term cap.
    #[error("series did not converge within {max_terms} terms")]
    NonConvergence { max_terms: usize },
    /// Adaptive quadrature exhausted its refinement budget.
    #[error("quadrature failed to converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },
    /// The operation is not defined in the given parameter regime.
    #[error("unsupported regime {0:?}: {1}")]
    UnsupportedRegime(Regime, String),
    /// Inputs to a distribution comparison were not (near-)distributions.
    #[error("inputs are not normalized distributions: {0}")]
    Normalization(String),
    /// Too few cells remained after pooling a sampled comparison.
    #[error("insufficient samples: pooling left {cells} cells")]
    InsufficientSamples { cells: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
