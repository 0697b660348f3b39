use crate::error::{Error, Result};

/// Resource limits checked before large allocations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of words or terms a single operation may materialize.
    pub max_terms: u64,
    /// Optional cap on the bit length of any numerator or denominator.
    pub max_coeff_bits: Option<u64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_terms: 20_000_000,
            max_coeff_bits: None,
        }
    }
}

impl Budget {
    pub fn with_max_terms(max_terms: u64) -> Self {
        Budget {
            max_terms,
            ..Budget::default()
        }
    }

    /// Fails when `predicted` (None meaning "does not fit in u128") exceeds the term budget.
    pub fn admit(&self, what: &str, predicted: Option<u128>) -> Result<()> {
        match predicted {
            Some(n) if n <= self.max_terms as u128 => Ok(()),
            Some(n) => Err(Error::budget(what, n, self.max_terms)),
            None => Err(Error::budget(what, u128::MAX, self.max_terms)),
        }
    }
}
