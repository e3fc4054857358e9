//! Word metrics on wreath products, explicit embeddings into sequence
//! spaces, and random-walk statistics, with reproducible Monte Carlo.

pub mod distortion;
pub mod embed;
pub mod error;
pub mod group;
pub mod metric;
pub mod report;
pub mod rng;
pub mod smooth;
pub mod sparse;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use group::{display_element, parse_element, Element, GroupSpec, WreathElement};
pub use sparse::{CoordKey, SparseVec};
