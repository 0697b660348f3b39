use super::word::{Letter, Word};

/// `|B(r)|` for a free group of rank `rank`, or `None` on overflow.
pub fn ball_size(rank: usize, r: usize) -> Option<u128> {
    match rank {
        0 => Some(1),
        1 => (r as u128).checked_mul(2)?.checked_add(1),
        k => {
            let k = k as u128;
            let base = 2 * k - 1;
            let pow = base.checked_pow(u32::try_from(r).ok()?)?;
            (2 * k).checked_mul(pow - 1).map(|t| 1 + t / (2 * k - 2))
        }
    }
}

/// ShortLex stream of reduced words, one length at a time.
///
/// Within a length the letters form an odometer in which position `i + 1`
/// may not hold the inverse of position `i`; advancing it in letter order
/// yields lexicographic order, so the whole stream is ShortLex.
#[derive(Clone, Debug)]
pub struct BallIter {
    alphabet: u32,
    max_len: usize,
    len: usize,
    digits: Vec<u32>,
    done: bool,
}

impl BallIter {
    pub(crate) fn new(rank: usize, r: usize) -> Self {
        BallIter {
            alphabet: 2 * rank as u32,
            max_len: r,
            len: 0,
            digits: Vec::new(),
            done: false,
        }
    }

    pub(crate) fn sphere(rank: usize, r: usize) -> Self {
        let mut it = BallIter::new(rank, r);
        it.start_length(r);
        it
    }

    fn smallest_after(&self, prev: Option<u32>, from: u32) -> Option<u32> {
        let forbidden = prev.map(|p| p ^ 1);
        (from..self.alphabet).find(|&k| Some(k) != forbidden)
    }

    fn start_length(&mut self, len: usize) {
        self.len = len;
        self.digits.clear();
        if len > 0 && self.alphabet == 0 {
            self.done = true;
            return;
        }
        for i in 0..len {
            let prev = if i == 0 { None } else { Some(self.digits[i - 1]) };
            let d = self.smallest_after(prev, 0).expect("alphabet has a letter");
            self.digits.push(d);
        }
    }

    fn advance(&mut self) {
        let mut i = self.len;
        while i > 0 {
            i -= 1;
            let prev = if i == 0 { None } else { Some(self.digits[i - 1]) };
            if let Some(d) = self.smallest_after(prev, self.digits[i] + 1) {
                self.digits[i] = d;
                for j in i + 1..self.len {
                    let p = Some(self.digits[j - 1]);
                    self.digits[j] = self.smallest_after(p, 0).unwrap();
                }
                return;
            }
        }
        if self.len < self.max_len {
            self.start_length(self.len + 1);
        } else {
            self.done = true;
        }
    }
}

impl Iterator for BallIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let w = Word::from_letters(self.digits.iter().map(|&k| Letter::from_key(k)));
        self.advance();
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small() {
        assert_eq!(ball_size(2, 1), Some(5));
        assert_eq!(ball_size(2, 2), Some(17));
        assert_eq!(ball_size(3, 1), Some(7));
        assert_eq!(ball_size(3, 4), Some(937));
        assert_eq!(ball_size(3, 6), Some(23_437));
        assert_eq!(ball_size(1, 5), Some(11));
    }

    #[test]
    fn enumeration_matches_closed_form() {
        for rank in 1..=4 {
            for r in 0..=5 {
                let n = BallIter::new(rank, r).count() as u128;
                assert_eq!(Some(n), ball_size(rank, r), "rank {rank} radius {r}");
            }
        }
    }

    #[test]
    fn stream_is_strictly_shortlex() {
        let words: Vec<Word> = BallIter::new(3, 4).collect();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        assert!(words.iter().all(|w| w.len() <= 4));
    }

    #[test]
    fn sphere_only() {
        let words: Vec<Word> = BallIter::sphere(2, 3).collect();
        assert_eq!(words.len(), 4 * 3 * 3);
        assert!(words.iter().all(|w| w.len() == 3));
    }
}
