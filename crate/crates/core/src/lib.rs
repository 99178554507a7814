//! Exact diagonalization of one-dimensional chains obtained from pure-gauge
//! flux ladders (SU(2) in the hardcore-gluon truncation, ℤ_N clock chains and
//! the gauge-fixed D₃ chain), together with three quantum-resource measures
//! evaluated on their ground states:
//!
//! - the generalized geometric measure of multipartite entanglement ([`resources::ggm`]),
//! - the stabilizer Rényi entropy ([`resources::sre`]),
//! - the fermionic antiflatness under a Jordan–Wigner mapping ([`resources::faf`]).
//!
//! Basis convention shared by every module: a chain of `L` qudits of local
//! dimension `d` is stored as a dense vector of length `d^L`, and amplitude
//! index `i` encodes the configuration in base `d` with site 0 the least
//! significant digit.
//!
//! ```
//! use lgt_resources::models::ModelConfig;
//! use lgt_resources::solver::{ground_state, SolverOptions};
//! use lgt_resources::resources::ggm;
//!
//! let cfg = ModelConfig::zn(2, 0, 4, 1000.0);
//! let spec = cfg.build().unwrap();
//! let (_, psi) = ground_state(&spec, &SolverOptions::default()).unwrap();
//! assert!(ggm(&psi).unwrap() < 1e-4);
//! ```

pub mod error;
pub mod group_algebra;
pub mod hilbert;
pub mod models;
pub mod resources;
pub mod solver;
pub mod sweep;
pub mod zn_analytics;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
