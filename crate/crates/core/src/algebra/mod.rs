//! Sparse exact-rational elements of the group algebra.

mod element;
mod parse;

pub use element::{AlgebraElement, ElementNorms, LayeredL2Profile};
