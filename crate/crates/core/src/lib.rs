pub mod algebra;
pub mod braided;
pub mod cli;
pub mod error;
pub mod galg;
pub mod group;
pub mod linalg;
pub mod report;
pub mod rmatrix;
pub mod specs;
pub mod suite;
pub mod theorems;
pub mod tol;

pub use error::{Error, Result};
