//! Rank-two representations over local fields and number fields: exact
//! arithmetic, the Bruhat-Tits tree, SL(2) diagnostics and related tools.

pub mod arith;
pub mod bttree;
pub mod hodgesign;
pub mod error;
pub mod integrality;
pub mod matrix;
pub mod orbicurve;
pub mod repcli;
pub mod rigidkit;
pub mod sl2kit;
pub mod treeharm;

pub use error::{Error, Result};
