//! Representations of `GL2`/`SL2` over finite fields and finite-level models of
//! `SL2(Q_p)`: exact constructions, a Meataxe decomposition oracle, and the
//! closed-form classification rules checked against brute-force enumeration.

pub mod error;
pub mod exactla;
pub mod groups;
pub mod reps;
pub mod meataxe;
pub mod localfield;
pub mod packets;
pub mod asymptotics;
pub mod whittakerf2;
pub mod cli;

pub use error::{Error, Result};
