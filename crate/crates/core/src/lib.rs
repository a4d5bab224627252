pub mod clifford;
pub mod comodule;
pub mod error;
pub mod exec;
pub mod hopf;
pub mod inner;
pub mod linalg;
pub mod quadratic;
pub mod report;
pub mod scalars;
pub mod tensor;

pub use error::{Error, Result};
