use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A generator raised to a nonzero power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: u32,
    pub exp: i32,
}

impl Syllable {
    pub fn new(gen: u32, exp: i32) -> Self {
        Syllable { gen, exp }
    }
}

/// A single generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    /// Position in the letter order `x0, x0^-1, x1, x1^-1, ...`.
    #[inline]
    pub fn key(self) -> u32 {
        2 * self.gen + self.inverse as u32
    }

    #[inline]
    pub fn from_key(key: u32) -> Self {
        Letter {
            gen: key / 2,
            inverse: key % 2 == 1,
        }
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

fn push_syllable(stack: &mut Vec<Syllable>, s: Syllable) {
    if s.exp == 0 {
        return;
    }
    if let Some(last) = stack.last_mut() {
        if last.gen == s.gen {
            let exp = last
                .exp
                .checked_add(s.exp)
                .expect("syllable exponent overflowed i32");
            if exp == 0 {
                stack.pop();
            } else {
                last.exp = exp;
            }
            return;
        }
    }
    stack.push(s);
}

/// A freely reduced word in syllable form.
///
/// Words carry generator indices only; names and factor structure live in
/// [`GroupContext`](super::GroupContext). Equality is equality of group
/// elements because the representation is canonical. `Ord` is ShortLex:
/// shorter words first, ties broken letter by letter in the order
/// `x0 < x0^-1 < x1 < x1^-1 < ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(gen: u32) -> Self {
        Word {
            syllables: vec![Syllable::new(gen, 1)],
        }
    }

    pub fn power_of(gen: u32, exp: i32) -> Self {
        Word::from_syllables([Syllable::new(gen, exp)])
    }

    /// Reduces an arbitrary syllable sequence.
    pub fn from_syllables<I: IntoIterator<Item = Syllable>>(syllables: I) -> Self {
        let mut stack = Vec::new();
        for s in syllables {
            push_syllable(&mut stack, s);
        }
        Word { syllables: stack }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word::from_syllables(
            letters
                .into_iter()
                .map(|l| Syllable::new(l.gen, if l.inverse { -1 } else { 1 })),
        )
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            std::iter::repeat_n(Letter::new(s.gen, s.exp < 0), s.exp.unsigned_abs() as usize)
        })
    }

    pub fn letter_vec(&self) -> Vec<Letter> {
        self.letters().collect()
    }

    /// Word length with respect to the full alphabet.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exp.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.syllables.first().map(|s| Letter::new(s.gen, s.exp < 0))
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.syllables.last().map(|s| Letter::new(s.gen, s.exp < 0))
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<u32> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    pub fn uses_gen(&self, gen: u32) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.gen, -s.exp))
                .collect(),
        }
    }

    pub fn mul_ref(&self, rhs: &Word) -> Word {
        let mut stack = Vec::with_capacity(self.syllables.len() + rhs.syllables.len());
        stack.extend_from_slice(&self.syllables);
        for &s in &rhs.syllables {
            push_syllable(&mut stack, s);
        }
        Word { syllables: stack }
    }

    /// Right multiplication by a single syllable, in place.
    pub fn push(&mut self, s: Syllable) {
        push_syllable(&mut self.syllables, s);
    }

    pub fn push_letter(&mut self, l: Letter) {
        self.push(Syllable::new(l.gen, if l.inverse { -1 } else { 1 }));
    }

    /// `u * self * u^-1`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.mul_ref(self).mul_ref(&u.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_identity() {
            return Word::identity();
        }
        let (core, conj) = self.cyclic_reduce();
        let base = if k < 0 { core.inverse() } else { core };
        let reps = k.unsigned_abs() as usize;
        let mut body = Vec::with_capacity(base.syllables.len() * reps);
        for _ in 0..reps {
            for &s in &base.syllables {
                push_syllable(&mut body, s);
            }
        }
        Word { syllables: body }.conjugate_by(&conj)
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core` cyclically
    /// reduced. The core has minimal length in the conjugacy class.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let letters = self.letter_vec();
        if letters.is_empty() {
            return (Word::identity(), Word::identity());
        }
        let (mut i, mut j) = (0usize, letters.len() - 1);
        while i < j && letters[i] == letters[j].inv() {
            i += 1;
            j -= 1;
        }
        let core = Word::from_letters(letters[i..=j].iter().copied());
        let conj = Word::from_letters(letters[..i].iter().copied());
        (core, conj)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first_letter(), self.last_letter()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inv(),
            _ => true,
        }
    }

    /// Returns `(root, k)` with `self = root^k`, `k >= 1` and `root` not a
    /// proper power.
    pub fn primitive_root(&self) -> Result<(Word, u32)> {
        if self.is_identity() {
            return Err(Error::InvalidArgument(
                "the identity has no primitive root".into(),
            ));
        }
        let (core, conj) = self.cyclic_reduce();
        let letters = core.letter_vec();
        let n = letters.len();
        // Smallest period dividing n such that the core is a repetition of its prefix.
        let period = (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (p..n).all(|i| letters[i] == letters[i - p]))
            .unwrap_or(n);
        let root_core = Word::from_letters(letters[..period].iter().copied());
        Ok((root_core.conjugate_by(&conj), (n / period) as u32))
    }

    /// ShortLex comparison (also the `Ord` implementation).
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (a, b) in self.letters().zip(other.letters()) {
                match a.key().cmp(&b.key()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    /// Length of the longest common prefix of the two reduced words.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.letters()
            .zip(other.letters())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Distance in the Cayley tree, `|self^-1 other|`.
    pub fn tree_distance(&self, other: &Word) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.mul_ref(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        self.mul_ref(&rhs)
    }
}

/// Debug-friendly rendering with generator indices (`g0^2.g1^-1`).
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if s.exp == 1 {
                write!(f, "g{}", s.gen)?;
            } else {
                write!(f, "g{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}
