use std::collections::HashMap;
use std::fmt;

use super::ball::{ball_size, BallIter};
use super::parse::Cursor;
use super::word::{Syllable, Word};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// A free product of free groups, each factor given by its generator names.
///
/// The product is itself free on the concatenated alphabet, so reduced words
/// are normal forms. Generator `i` of the alphabet is the `i`-th name when the
/// factors are read left to right.
#[derive(Clone)]
pub struct GroupContext {
    factors: Vec<Vec<String>>,
    alphabet: Vec<String>,
    factor_of: Vec<usize>,
    index: HashMap<String, u32>,
}

impl PartialEq for GroupContext {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for GroupContext {}

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupContext({})", self.spec())
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "e"
}

impl GroupContext {
    pub fn new(factors: Vec<Vec<String>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("a group needs at least one factor".into()));
        }
        let mut alphabet = Vec::new();
        let mut factor_of = Vec::new();
        let mut index = HashMap::new();
        for (fi, factor) in factors.iter().enumerate() {
            if factor.is_empty() {
                return Err(Error::InvalidArgument(format!("factor {fi} is empty")));
            }
            for name in factor {
                if !valid_name(name) {
                    return Err(Error::InvalidArgument(format!(
                        "invalid generator name {name:?}"
                    )));
                }
                if index.insert(name.clone(), alphabet.len() as u32).is_some() {
                    return Err(Error::InvalidArgument(format!(
                        "generator {name:?} appears twice"
                    )));
                }
                alphabet.push(name.clone());
                factor_of.push(fi);
            }
        }
        Ok(GroupContext {
            factors,
            alphabet,
            factor_of,
            index,
        })
    }

    /// Parses a group spec such as `x|y|a` or `a,b|c`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut offset = 0;
        for part in spec.split('|') {
            let mut names = Vec::new();
            for name in part.split(',') {
                let trimmed = name.trim();
                if !valid_name(trimmed) {
                    let pos = offset + name.find(trimmed).unwrap_or(0);
                    return Err(Error::parse(
                        pos,
                        format!("invalid generator name {trimmed:?}"),
                    ));
                }
                names.push(trimmed.to_string());
                offset += name.len() + 1;
            }
            factors.push(names);
        }
        GroupContext::new(factors)
    }

    /// Canonical spec string, the inverse of [`GroupContext::parse`].
    pub fn spec(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.join(","))
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn factors(&self) -> &[Vec<String>] {
        &self.factors
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn generator(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, gen: u32) -> &str {
        &self.alphabet[gen as usize]
    }

    pub fn factor_of(&self, gen: u32) -> usize {
        self.factor_of[gen as usize]
    }

    /// Generator indices of factor `factor`, in order.
    pub fn factor_generators(&self, factor: usize) -> Vec<u32> {
        (0..self.rank() as u32)
            .filter(|&g| self.factor_of(g) == factor)
            .collect()
    }

    /// The factor containing the generator called `name`.
    pub fn factor_by_name(&self, name: &str) -> Option<usize> {
        self.generator(name).map(|g| self.factor_of(g))
    }

    /// Whether every letter of `w` lies in one of `factors`.
    pub fn word_in_factors(&self, w: &Word, factors: &[usize]) -> bool {
        w.syllables()
            .iter()
            .all(|s| factors.contains(&self.factor_of(s.gen)))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_gen() {
            Some(g) if g as usize >= self.rank() => Err(Error::ContextMismatch(format!(
                "word uses generator index {g} but {} has rank {}",
                self.spec(),
                self.rank()
            ))),
            _ => Ok(()),
        }
    }

    /// Group law with a context check on both operands.
    pub fn multiply(&self, w1: &Word, w2: &Word) -> Result<Word> {
        self.check_word(w1)?;
        self.check_word(w2)?;
        Ok(w1 * w2)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (i, s) in w.syllables().iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            out.push_str(self.name(s.gen));
            if s.exp != 1 {
                out.push('^');
                out.push_str(&s.exp.to_string());
            }
        }
        out
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut c = Cursor::new(text);
        c.skip_ws();
        let w = self.parse_word_at(&mut c)?;
        c.skip_ws();
        if !c.at_end() {
            return Err(c.error("trailing characters after word"));
        }
        Ok(w)
    }

    pub(crate) fn parse_word_at(&self, c: &mut Cursor<'_>) -> Result<Word> {
        let start = c.pos();
        let first = c.ident()?;
        if first == "e" {
            return Ok(Word::identity());
        }
        let mut syllables = Vec::new();
        let mut name = first;
        let mut name_pos = start;
        loop {
            let gen = self
                .generator(name)
                .ok_or_else(|| Error::parse(name_pos, format!("unknown generator {name:?}")))?;
            let mut exp = 1i64;
            if c.eat('^') {
                let exp_pos = c.pos();
                exp = c.signed_int()?;
                if exp == 0 {
                    return Err(Error::parse(exp_pos, "exponent must be nonzero"));
                }
                if i32::try_from(exp).is_err() {
                    return Err(Error::parse(exp_pos, "exponent out of range"));
                }
            }
            syllables.push(Syllable::new(gen, exp as i32));
            if !c.eat('.') {
                break;
            }
            name_pos = c.pos();
            name = c.ident()?;
            if name == "e" {
                return Err(Error::parse(name_pos, "`e` cannot appear inside a word"));
            }
        }
        Ok(Word::from_syllables(syllables))
    }

    /// Closed-form size of the ball of radius `r`, or `None` on overflow.
    pub fn ball_size(&self, r: usize) -> Option<u128> {
        ball_size(self.rank(), r)
    }

    /// Streams `B(r)` in ShortLex order after checking the size against the budget.
    pub fn enumerate_ball(&self, r: usize, budget: &Budget) -> Result<BallIter> {
        budget.admit(&format!("ball of radius {r}"), self.ball_size(r))?;
        Ok(BallIter::new(self.rank(), r))
    }

    /// Sphere of radius `r` (words of length exactly `r`), in ShortLex order.
    pub fn sphere(&self, r: usize) -> BallIter {
        BallIter::sphere(self.rank(), r)
    }
}
