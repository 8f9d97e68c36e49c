//! Pulse-level simulation of a three-qubit controlled-phase (CCZ) gate built
//! from three four-level systems sharing one resonant cavity mode.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: the composite space (3 × ququart ⊗ truncated Fock space),
//!   basis indexing, logical encoding and operator embedding.
//! - [`dynamics`]: interaction-picture Hamiltonians, closed-form propagators,
//!   a numerical matrix-exponential oracle and a Lindblad integrator.
//! - [`protocol`]: the five-step CCZ pulse schedule, its text format and
//!   pure/mixed-state execution.
//! - [`analysis`]: gate extraction, fidelities, feasibility margins, the
//!   25-gate conventional decomposition and Ω/g error sweeps.
//!
//! All rates are angular (rad/s) with ħ = 1.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod linalg;
pub mod protocol;

pub use error::{Result, SimError};
pub use exec::Exec;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
