//! Support code for the `pif` binary: input parsing and the shipped JSON
//! schemas.

pub mod input;
pub mod schema;
