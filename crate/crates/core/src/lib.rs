//! Exact arithmetic for level-one modular forms modulo prime powers `p^m`
//! (`p >= 5`): Eisenstein series, the Miller basis, weight filtrations, Hecke
//! operators, and the theta operator `M_k -> M_{k + 2 + 2p^{m-1}(p-1)}` built
//! from a decomposition of `G_2` modulo `p^m`.

pub mod arith;
pub mod checks;
pub mod eisenstein;
pub mod error;
pub mod forms;
pub mod qseries;
pub mod registry;
pub mod thetapm;

pub use error::{Error, Result};
