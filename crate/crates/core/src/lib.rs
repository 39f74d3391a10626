//! Prime-characteristic singularity invariants of twisted Cartier structures
//! on polynomial rings over F_p: ν-invariants, Bernstein–Sato roots as p-adic
//! rationals, test ideals and F-jumping exponents.

pub mod algebra;
pub mod cartier;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod job;
pub mod oracle;
pub mod padic;
pub mod verify;

pub use error::{Error, Result};
