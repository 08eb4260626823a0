//! Pairwise balanced designs with block sizes in {3,4,5}: finite geometries,
//! flats and dimension, Wilson's fundamental construction, GDD search, and
//! the recipes and applications built on them.

pub mod arith;
pub mod bibd;
pub mod cli;
pub mod coverage;
pub mod design;
pub mod error;
pub mod feasibility;
pub mod field;
pub mod fill;
pub mod flats;
pub mod format;
pub mod geometry;
pub mod ingredients;
pub mod latin;
pub mod pointset;
pub mod recipes;
pub mod report;
pub mod search;
pub mod truncate;
pub mod wfc;

pub use error::{Error, Result};
