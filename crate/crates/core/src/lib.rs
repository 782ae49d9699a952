//! Finite group actions on pitch-class segments.

pub mod analysis;
pub mod bijection;
pub mod catalog;
pub mod config;
pub mod error;
pub mod expr;
pub mod extension;
pub mod perm;
pub mod scales;
pub mod pitchclass;
pub mod transforms;
pub mod voicing;

pub use error::{Error, Result};
