//! Weakly-unambiguous Parikh automata: exact counting, holonomic generating
//! series and language inclusion.
pub mod algebra;
pub mod automata;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod holonomic;
pub mod inclusion;
pub mod limits;
pub mod semilinear;

pub use error::{Error, Result};
pub use limits::Limits;
