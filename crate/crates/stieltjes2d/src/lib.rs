pub mod bounds;
pub mod core;
pub mod cubature;
pub mod error;
pub mod gruss;
pub mod io;
pub mod quad;
pub mod univariate;
pub mod rs_sum;
pub mod sweep;
pub mod taylor;
pub mod variation;

pub use crate::core::*;
pub use crate::error::{Error, Result};
