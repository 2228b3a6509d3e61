pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod cohomology_ce;
pub mod error;
pub mod gf;
pub mod rinehart;
pub mod sweep;

pub use error::{Error, Result};
pub mod cohomology_char2;
pub mod cohomology_restricted;
pub mod deformation;
pub mod document;
