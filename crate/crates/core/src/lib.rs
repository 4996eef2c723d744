pub mod coupling;
pub mod error;
pub mod fem;
pub mod fluid;
pub mod mesh;
pub mod problem;
pub mod solid;
pub mod study;

pub use error::{FsiError, Result};
