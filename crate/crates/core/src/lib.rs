//! Exact computation in group algebras of free groups presented as free
//! products.
//!
//! The crate provides reduced-word arithmetic ([`words`]), sparse rational
//! group-algebra elements ([`algebra`]), certified two-sided bounds on the
//! reduced operator norm ([`norms`]), the retractions `a -> h g h^-1` with
//! their injectivity and norm-transfer checks ([`selfless`]) and Cayley-tree
//! geometry of loxodromic elements ([`treegeo`]).

pub mod algebra;
pub mod budget;
pub mod error;
pub mod norms;
pub mod selfless;
pub mod treegeo;
pub mod words;

pub use budget::Budget;
pub use error::{Error, Result};
