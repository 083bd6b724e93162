pub mod coeff;
pub mod error;
pub mod grlinalg;
pub mod cdga;
pub mod cohomology;
pub mod models;
pub mod sectional;
pub mod cli;

pub use error::{MildError, Result};
