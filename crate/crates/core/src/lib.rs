//! Channel capacity and order-alpha capacities of discrete memoryless
//! channels by alternating maximization.
//!
//! The crate computes the classic channel capacity together with the Sibson
//! and Arimoto capacities of order alpha, using five closed-form
//! alternating-maximization schemes (the classic Arimoto-Blahut iteration
//! plus the four order-alpha variants S1, S2, A1, A2). On top of the solvers
//! it ships the measure layer (Renyi entropy/divergence, Gallager E0, Sibson
//! and Arimoto mutual information, each in its cross-checkable closed forms),
//! brute-force simplex-grid oracles, and a harness that verifies the pairwise
//! equivalence of the four alpha algorithms run for run.
//!
//! ```
//! use alphacap::{channels, solver, ObjectiveKind, SolverConfig};
//!
//! let w = channels::bsc(0.1).unwrap();
//! let result = solver::solve(ObjectiveKind::S1, &w, &SolverConfig::new(2.0, 1e-10)).unwrap();
//! assert!(result.converged);
//! assert!((result.capacity.value() - 0.4946962418361072).abs() < 1e-9);
//! ```
//!
//! All information values are in nats; conversion to bits is presentation
//! only. Computations stay in the linear domain except where the update
//! exponents force log-domain normalization.

#![forbid(unsafe_code)]

pub mod channels;
mod error;
pub mod measures;
pub mod objectives;
pub mod simplex;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use measures::Nats;
pub use objectives::ObjectiveKind;
pub use simplex::{Channel, Distribution, ReverseConditional};
pub use solver::{InitPolicy, SolveResult, SolverConfig};
pub use verify::{EquivalenceReport, GridSpec, PairKind};
