use num_rational::BigRational;
use rayon::prelude::*;

use super::axis::elementary_membership;
use super::constants::ConstantProvider;
use super::path::cascade_for;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::words::{GroupContext, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub h_radius: usize,
    pub m: usize,
    /// Size of `B(h_radius) \ E(g)`.
    pub h_count: usize,
    pub tuple_count: u128,
    /// Exponents range over `1 <= |n_i| <= exponent_box`, with `n_m = 0` also allowed.
    pub exponent_box: u64,
    pub products_checked: u128,
    pub trivial_count: u128,
    /// A trivial product whose smallest exponent is largest.
    pub witness: Option<(Vec<Word>, Vec<i64>)>,
    /// Least `N` for which every product in the box with all `|n_i| >= N` is nontrivial.
    pub n_emp: u64,
    pub threshold: BigRational,
    pub within_threshold: bool,
}

/// Smallest exponent magnitude of a product, a final zero excepted.
fn min_exponent(ns: &[i64]) -> u64 {
    let last = ns.len() - 1;
    ns.iter()
        .enumerate()
        .filter(|&(i, &e)| !(i == last && e == 0))
        .map(|(_, e)| e.unsigned_abs())
        .min()
        .unwrap_or(u64::MAX)
}

/// Exhaustive search for trivial products `h_1 g^(n_1) ... h_m g^(n_m)` with
/// `h_i` in `B(h_radius) \ E(g)` and exponents in a box of half-width
/// `m h_radius + |g| + 2`.
pub fn minimal_exponent_search(
    ctx: &GroupContext,
    g: &Word,
    h_radius: usize,
    m: usize,
    provider: &ConstantProvider,
    budget: &Budget,
) -> Result<SearchReport> {
    ctx.check_word(g)?;
    if g.is_identity() {
        return Err(Error::Hypothesis("g = e has no axis".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let cascade = cascade_for(g, provider)?;
    let hs: Vec<Word> = ctx
        .enumerate_ball(h_radius, budget)?
        .filter(|h| !elementary_membership(g, h).expect("g != e"))
        .collect();
    let exponent_box = (m * h_radius + g.len() + 2) as u64;
    let inner: Vec<i64> = (-(exponent_box as i64)..=exponent_box as i64)
        .filter(|&e| e != 0)
        .collect();
    let last: Vec<i64> = (-(exponent_box as i64)..=exponent_box as i64).collect();

    let tuple_count = (hs.len() as u128).pow(m as u32);
    let per_tuple = (inner.len() as u128).pow(m as u32 - 1) * last.len() as u128;
    budget.admit("exponent search products", tuple_count.checked_mul(per_tuple))?;

    let powers: Vec<Word> = last.iter().map(|&e| g.pow(e)).collect();
    let power = |e: i64| &powers[(e + exponent_box as i64) as usize];

    let decode = |mut idx: u128, base: u128, out: &mut [usize]| {
        for slot in out.iter_mut().rev() {
            *slot = (idx % base) as usize;
            idx /= base;
        }
    };

    type Best = Option<(u64, u128, Vec<i64>)>;
    let pick = |a: Best, b: Best| match (a, b) {
        (Some(x), Some(y)) => Some(if (y.0, std::cmp::Reverse(y.1)) > (x.0, std::cmp::Reverse(x.1)) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    };

    let (trivial_count, best) = (0..tuple_count)
        .into_par_iter()
        .map(|t| {
            let mut hi = vec![0usize; m];
            decode(t, hs.len() as u128, &mut hi);
            let mut ei = vec![0usize; m];
            let mut count = 0u128;
            let mut best: Best = None;
            for c in 0..per_tuple {
                let mut rest = c;
                ei[m - 1] = (rest % last.len() as u128) as usize;
                rest /= last.len() as u128;
                decode(rest, inner.len() as u128, &mut ei[..m - 1]);
                let ns: Vec<i64> = (0..m)
                    .map(|i| if i + 1 == m { last[ei[i]] } else { inner[ei[i]] })
                    .collect();
                let mut w = Word::identity();
                for i in 0..m {
                    w = w.mul_ref(&hs[hi[i]]).mul_ref(power(ns[i]));
                }
                if w.is_identity() {
                    count += 1;
                    best = pick(best, Some((min_exponent(&ns), t, ns)));
                }
            }
            (count, best)
        })
        .reduce(|| (0, None), |a, b| (a.0 + b.0, pick(a.1, b.1)));

    let witness = best.as_ref().map(|(_, t, ns)| {
        let mut hi = vec![0usize; m];
        decode(*t, hs.len() as u128, &mut hi);
        (hi.iter().map(|&i| hs[i].clone()).collect(), ns.clone())
    });
    let n_emp = best.map_or(1, |(k, _, _)| k + 1);
    let within_threshold = BigRational::from_integer(n_emp.into()) <= cascade.threshold;
    Ok(SearchReport {
        h_radius,
        m,
        h_count: hs.len(),
        tuple_count,
        exponent_box,
        products_checked: tuple_count * per_tuple,
        trivial_count,
        witness,
        n_emp,
        threshold: cascade.threshold,
        within_threshold,
    })
}
