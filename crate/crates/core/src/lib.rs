//! Orbit-reduced cubic Fourier–Galerkin truncation of the 3D incompressible
//! Navier–Stokes equations.
//!
//! * [`lattice`]: the truncated lattice `Λ_N`, shells and exact triad counts.
//! * [`symmetry`]: the 48-element octahedral group and orbit enumeration.
//! * [`incidence`]: shell slices, face-normalized patches, `r₂`, and the
//!   orbit–triad incidence counts `Γ_αβ`.
//! * [`spectral`]: truncated states, the Galerkin nonlinearity, the
//!   orbit-level transfer matrix and Sobolev bound quantities.
//! * [`dynamics`]: RK4 integration and the orbit-level enstrophy balance.
//!
//! Integer combinatorics are exact. Floating-point code is generic over
//! [`Real`]; the `f64` aliases below are what the CLI and tests use.

// `!(x > 0)` style guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod incidence;
pub mod lattice;
pub mod scalar;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Invariant, Result};
pub use lattice::{Lattice, Mode};
pub use scalar::Real;
pub use spectral::NonlinearForm;
pub use symmetry::{Orbit, OrbitCatalog, OrbitLabel};

pub type State = spectral::TruncatedState<f64>;
pub type StateF32 = spectral::TruncatedState<f32>;
pub type Transfer = spectral::TransferMatrix<f64>;
pub type Balance = dynamics::EnstrophyBalance<f64>;
pub type OrbitDiagnostics = dynamics::OrbitDiagnostics<f64>;
pub type Record = dynamics::DiagnosticsRecord<f64>;
pub type SimulationConfig = dynamics::SimulationConfig<f64>;
pub type RowSumReport = spectral::RowSumReport<f64>;
