//! Executable kernel for the order and incidence axioms of Minkowski
//! spacetime over finite structures.

pub mod chain;
pub mod checker;
pub mod corpus;
pub mod error;
pub mod interval;
pub mod model;
pub mod order;
pub mod structure;

pub use error::{Error, Result};
