//! Toroidal actions, Kummer blowups and destackification of toroidal
//! orbifolds, computed combinatorially on monoid charts.

pub mod blowup;
pub mod chart;
pub mod cli;
pub mod error;
pub mod format;
pub mod ideal;
pub mod lattice;
pub mod monoid;

pub use error::{Error, Result};
