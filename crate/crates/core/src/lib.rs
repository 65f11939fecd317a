//! Verification library for lattice-valued Dobrakov submeasures on finite
//! rings of sets, with a floating-point dyadic model for limit behaviour.

pub mod catalog;
pub mod choquet;
pub mod dyadic;
pub mod error;
pub mod extension;
pub mod fntopology;
pub mod lattice;
pub mod numeric;
pub mod report;
pub mod setring;
pub mod submeasure;

pub use error::{Error, Result};
