//! Reduced words in free products of free groups.

mod ball;
mod context;
pub(crate) mod parse;
mod word;

pub use ball::{ball_size, BallIter};
pub use context::GroupContext;
pub use parse::parse_rational;
pub use word::{Letter, Syllable, Word};
