//! Group trellis sections over finite groups: Schreier matrix forms,
//! chain-coset generator tables, shift/shove-register encoders, and the
//! composition-series refinement of both.

pub mod encoder;
pub mod error;
pub mod format;
pub mod generators;
pub mod group;
pub mod refine;
pub mod report;
pub mod schreier;
pub mod search;
pub mod section;
pub mod verify;

pub use error::{Error, Result};
