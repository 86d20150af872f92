pub mod algebra;
pub mod clifford;
pub mod cocycles;
pub mod error;
pub mod forms;
pub mod groups;
pub mod models;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Rational, Sign};
