//! Exact arithmetic for arithmetic covers of the projective line over the
//! field with one element and the structures around it.

pub mod adams;
pub mod arith;
pub mod bigpicture;
pub mod error;
pub mod habiro;
pub mod hring;
pub mod nimber;
mod serde_str;
pub mod smirnov;
pub mod witt;

pub use error::{Error, Result};
