//! Hypergeometric states of a single-mode quantized field.
//!
//! The hypergeometric state `|L, M, η⟩` is a superposition of the Fock
//! states `|0⟩ … |M⟩` whose photon distribution is the hypergeometric
//! distribution. It reduces to the binomial state as `L → ∞`, and through
//! it to the number and coherent states.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfn`]: generalized binomials in log domain, Laguerre polynomials.
//! - [`states`]: HGS, binomial, coherent and number state vectors.
//! - [`algebra`]: truncated Fock-space operators, the ladder-operator
//!   eigenvalue equation and the deformed oscillator algebra.
//! - [`statistics`]: photon statistics and squeezing, closed forms next to
//!   a direct route from amplitudes and operator matrices.
//! - [`phasespace`]: Q and Wigner functions on grids.
//! - [`oracle`]: exact urn-model probabilities, reference pmfs and a
//!   matrix-exponential displacement operator.
//! - [`output`]: CSV/JSON writers for the emitted tables and grids.
//! - [`verify`]: the invariant suite behind `hgstate verify`.

pub mod algebra;
pub mod error;
pub mod oracle;
pub mod output;
pub mod phasespace;
pub mod specfn;
pub mod states;
pub mod statistics;
pub mod verify;

pub use algebra::OperatorMatrix;
pub use error::{Error, Result};
pub use phasespace::{GridKind, GridSpec, PhaseSpaceGrid};
pub use specfn::LogValue;
pub use states::{HgsParams, StateVector};
pub use statistics::{LoweringCoefficients, PhotonStatistics};

pub use num_complex::Complex64;
