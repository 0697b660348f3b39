use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::words::{ball_size, GroupContext, Word};

/// A finitely supported element of the rational group algebra.
///
/// Terms are kept in ShortLex order of their words with no zero
/// coefficients, so two elements are equal exactly when their canonical
/// serializations are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    ctx: Arc<GroupContext>,
    terms: BTreeMap<Word, BigRational>,
}

/// Squared l2-mass of each length layer, indexed by word length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredL2Profile {
    pub layers: Vec<BigRational>,
}

impl LayeredL2Profile {
    pub fn total(&self) -> BigRational {
        self.layers
            .iter()
            .fold(BigRational::zero(), |acc, l| acc + l)
    }

    pub fn radius(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementNorms {
    pub l1: BigRational,
    pub l2_squared: BigRational,
    pub trace: BigRational,
    pub layered: LayeredL2Profile,
}

fn same_context(a: &Arc<GroupContext>, b: &Arc<GroupContext>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!(
            "elements over {} and {}",
            a.spec(),
            b.spec()
        )))
    }
}

/// Integer numerators over a common denominator.
fn integral_form(terms: &BTreeMap<Word, BigRational>) -> (Vec<(&Word, BigInt)>, BigInt) {
    let den = terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = terms
        .iter()
        .map(|(w, c)| (w, c.numer() * (&den / c.denom())))
        .collect();
    (nums, den)
}

fn merge_into(mut big: HashMap<Word, BigInt>, small: HashMap<Word, BigInt>) -> HashMap<Word, BigInt> {
    for (w, c) in small {
        *big.entry(w).or_insert_with(BigInt::zero) += c;
    }
    big
}

impl AlgebraElement {
    pub fn zero(ctx: Arc<GroupContext>) -> Self {
        AlgebraElement {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1 * e`.
    pub fn one(ctx: Arc<GroupContext>) -> Self {
        AlgebraElement::from_word(ctx, Word::identity(), BigRational::one())
    }

    pub fn from_word(ctx: Arc<GroupContext>, w: Word, c: BigRational) -> Self {
        AlgebraElement::from_terms(ctx, [(w, c)])
    }

    /// Sums the given terms, merging repeated words and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(
        ctx: Arc<GroupContext>,
        terms: I,
    ) -> Self {
        let mut map: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (w, c) in terms {
            *map.entry(w).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        AlgebraElement { ctx, terms: map }
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Word, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal word length over the support; 0 for the zero element.
    pub fn radius(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// `self + c * other`.
    pub fn combine(&self, c: &BigRational, other: &AlgebraElement) -> Result<AlgebraElement> {
        same_context(&self.ctx, &other.ctx)?;
        let mut terms = self.terms.clone();
        if !c.is_zero() {
            for (w, y) in &other.terms {
                let slot = terms.entry(w.clone()).or_insert_with(BigRational::zero);
                *slot += c * y;
                if slot.is_zero() {
                    terms.remove(w);
                }
            }
        }
        Ok(AlgebraElement {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &BigRational) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero(self.ctx.clone());
        }
        AlgebraElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Upper bound on the support size of `self * other`.
    pub fn predicted_product_terms(&self, other: &AlgebraElement) -> Option<u128> {
        let pairs = (self.terms.len() as u128).checked_mul(other.terms.len() as u128);
        let ball = ball_size(self.ctx.rank(), self.radius() + other.radius());
        match (pairs, ball) {
            (Some(p), Some(b)) => Some(p.min(b)),
            (Some(p), None) => Some(p),
            (None, b) => b,
        }
    }

    /// Exact convolution product.
    ///
    /// Term pairs are split across the current rayon pool; partial sums are
    /// merged with exact integer addition, so the result does not depend on
    /// the number of threads.
    pub fn convolve(&self, other: &AlgebraElement, budget: &Budget) -> Result<AlgebraElement> {
        same_context(&self.ctx, &other.ctx)?;
        budget.admit("convolution", self.predicted_product_terms(other))?;
        if self.is_zero() || other.is_zero() {
            return Ok(AlgebraElement::zero(self.ctx.clone()));
        }

        let (xs, dx) = integral_form(&self.terms);
        let (ys, dy) = integral_form(&other.terms);
        let chunk = (xs.len() / (rayon::current_num_threads() * 4)).max(1);
        let acc = xs
            .par_chunks(chunk)
            .map(|chunk| {
                let mut acc: HashMap<Word, BigInt> = HashMap::new();
                for (wx, cx) in chunk {
                    for (wy, cy) in &ys {
                        *acc.entry(wx.mul_ref(wy)).or_insert_with(BigInt::zero) += cx * cy;
                    }
                }
                acc
            })
            .reduce(HashMap::new, |a, b| {
                if a.len() >= b.len() {
                    merge_into(a, b)
                } else {
                    merge_into(b, a)
                }
            });

        let den = dx * dy;
        let terms: BTreeMap<Word, BigRational> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w, BigRational::new(c, den.clone())))
            .collect();
        let out = AlgebraElement {
            ctx: self.ctx.clone(),
            terms,
        };
        out.check_coefficient_bits(budget)?;
        Ok(out)
    }

    fn check_coefficient_bits(&self, budget: &Budget) -> Result<()> {
        if let Some(cap) = budget.max_coeff_bits {
            let bits = self
                .terms
                .values()
                .map(|c| c.numer().bits().max(c.denom().bits()))
                .max()
                .unwrap_or(0);
            if bits > cap {
                return Err(Error::CoefficientTooLarge { bits, cap });
            }
        }
        Ok(())
    }

    /// `x*`: moves each coefficient from `g` to `g^-1`.
    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.inverse(), c.clone()))
                .collect(),
        }
    }

    /// `m`-th convolution power by repeated squaring; `m` must be a power of two.
    pub fn power(&self, m: u64, budget: &Budget) -> Result<AlgebraElement> {
        if m == 0 || !m.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "power exponent must be a positive power of two, got {m}"
            )));
        }
        let mut p = self.clone();
        for _ in 0..m.trailing_zeros() {
            p = p.convolve(&p, budget)?;
        }
        Ok(p)
    }

    pub fn l1(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    pub fn l2_squared(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c * c)
    }

    /// Coefficient at the identity.
    pub fn trace(&self) -> BigRational {
        self.coefficient(&Word::identity())
    }

    pub fn layered_profile(&self) -> LayeredL2Profile {
        let mut layers = vec![BigRational::zero(); self.radius() + 1];
        if self.is_zero() {
            layers.clear();
        }
        for (w, c) in &self.terms {
            layers[w.len()] += c * c;
        }
        LayeredL2Profile { layers }
    }

    pub fn norms(&self) -> ElementNorms {
        ElementNorms {
            l1: self.l1(),
            l2_squared: self.l2_squared(),
            trace: self.trace(),
            layered: self.layered_profile(),
        }
    }

    /// Canonical text: ShortLex-ordered terms `c*word` joined by ` + `, or `0`.
    pub fn canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{}*{}", c, self.ctx.format_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// SHA-256 over the group spec and the canonical serialization.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.ctx.spec().as_bytes());
        h.update(b"\n");
        h.update(self.canonical().as_bytes());
        hex::encode(h.finalize())
    }

    /// Applies `f` to every word and sums the pushed-forward terms.
    pub fn map_words<F>(&self, ctx: Arc<GroupContext>, f: F) -> AlgebraElement
    where
        F: Fn(&Word) -> Word,
    {
        AlgebraElement::from_terms(ctx, self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<GroupContext> {
        Arc::new(GroupContext::parse("a|b").unwrap())
    }

    fn el(ctx: &Arc<GroupContext>, s: &str) -> AlgebraElement {
        AlgebraElement::parse(ctx.clone(), s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn combine_examples() {
        let c = ctx();
        let x = el(&c, "e + a");
        assert!(x.combine(&q(-1, 1), &x).unwrap().is_zero());
        assert_eq!(
            el(&c, "e").combine(&q(1, 2), &el(&c, "a")).unwrap(),
            el(&c, "e + 1/2*a")
        );
        assert_eq!(
            x.combine(&q(1, 1), &el(&c, "e + a^-1")).unwrap(),
            el(&c, "2*e + a + a^-1")
        );
    }

    #[test]
    fn convolve_examples() {
        let c = ctx();
        let b = Budget::default();
        assert_eq!(
            el(&c, "e + a").convolve(&el(&c, "e + a^-1"), &b).unwrap(),
            el(&c, "2*e + a + a^-1")
        );
        let g = el(&c, "a.b^-1");
        assert_eq!(g.convolve(&g.adjoint(), &b).unwrap(), el(&c, "e"));

        let s = el(&c, "a + a^-1 + b + b^-1");
        let sq = s.convolve(&s, &b).unwrap();
        assert_eq!(sq.trace(), q(4, 1));
        assert_eq!(sq.support_len(), 13);
        assert!(sq
            .terms()
            .iter()
            .filter(|(w, _)| w.len() == 2)
            .all(|(_, c)| c == &q(1, 1)));
    }

    #[test]
    fn convolve_rejects_foreign_context() {
        let other = Arc::new(GroupContext::parse("a|c").unwrap());
        let x = el(&ctx(), "a");
        let y = AlgebraElement::parse(other, "c").unwrap();
        assert!(matches!(
            x.convolve(&y, &Budget::default()),
            Err(Error::ContextMismatch(_))
        ));
    }

    #[test]
    fn convolve_budget_reports_prediction() {
        let c = ctx();
        let s = el(&c, "a + a^-1 + b + b^-1");
        let err = s.convolve(&s, &Budget::with_max_terms(10)).unwrap_err();
        assert_eq!(err, Error::budget("convolution", 16, 10));
    }

    #[test]
    fn coefficient_cap() {
        let c = ctx();
        let x = el(&c, "1000*e + a");
        let budget = Budget {
            max_terms: 1000,
            max_coeff_bits: Some(12),
        };
        assert!(matches!(
            x.convolve(&x, &budget),
            Err(Error::CoefficientTooLarge { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let c = ctx();
        assert_eq!(el(&c, "2*a.b").adjoint(), el(&c, "2*b^-1.a^-1"));
        let s = el(&c, "a + a^-1");
        assert_eq!(s.adjoint(), s);
        assert_eq!(el(&c, "e + 1/3*a").adjoint(), el(&c, "e + 1/3*a^-1"));
    }

    #[test]
    fn norms_examples() {
        let c = ctx();
        assert_eq!(el(&c, "1/2*e + 1/2*a").l1(), q(1, 1));
        assert_eq!(el(&c, "e + a").l2_squared(), q(2, 1));
        assert_eq!(el(&c, "3*e + 2*a").trace(), q(3, 1));
        let n = el(&c, "e + 2*a + a.b - 1/2*b^-1").norms();
        assert_eq!(n.layered.layers, vec![q(1, 1), q(17, 4), q(1, 1)]);
        assert_eq!(n.layered.total(), n.l2_squared);
    }

    #[test]
    fn power_examples() {
        let c = ctx();
        let b = Budget::default();
        assert_eq!(el(&c, "e").power(8, &b).unwrap(), el(&c, "e"));
        let y = el(&c, "2*e + a + a^-1");
        assert_eq!(
            y.power(2, &b).unwrap(),
            el(&c, "6*e + 4*a + 4*a^-1 + a^2 + a^-2")
        );
        let x = el(&c, "e + a");
        let xx = x.adjoint().convolve(&x, &b).unwrap().power(1, &b).unwrap();
        assert_eq!(xx, y);
        assert_eq!(xx.l2_squared(), q(6, 1));
        assert!(y.power(3, &b).is_err());
        assert!(y.power(0, &b).is_err());
    }

    #[test]
    fn canonical_text() {
        let c = ctx();
        let x = el(&c, "b - 1/2*a + 3*e");
        assert_eq!(x.canonical(), "3*e + -1/2*a + 1*b");
        assert_eq!(AlgebraElement::zero(c).canonical(), "0");
    }
}
