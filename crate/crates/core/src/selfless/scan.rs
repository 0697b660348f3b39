use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::retraction::{RetractionFamily, Substitution};
use crate::budget::Budget;
use crate::error::Result;
use crate::words::Word;

/// Most collision pairs kept in a report; the total is always counted.
pub const MAX_REPORTED_COLLISIONS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub radius: usize,
    pub ball_size: usize,
    /// Pairs `(u, v)` of distinct words with equal images, `u` the ShortLex
    /// least member of its fiber. Truncated to [`MAX_REPORTED_COLLISIONS`].
    pub collisions: Vec<(Word, Word)>,
    pub collision_count: usize,
    pub max_fiber: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collision_count == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberStatistics {
    pub radius: usize,
    pub ball_size: usize,
    pub max_fiber: usize,
    /// Fiber size -> number of fibers of that size.
    pub histogram: BTreeMap<usize, usize>,
    /// One fiber of maximal size, in ShortLex order.
    pub largest_fiber: Vec<Word>,
}

struct Fibers {
    ball: Vec<Word>,
    /// Preimage indices per image, ordered by the first preimage.
    groups: Vec<Vec<usize>>,
}

fn fibers(map: &Substitution, radius: usize, budget: &Budget) -> Result<Fibers> {
    let ball: Vec<Word> = map.context().enumerate_ball(radius, budget)?.collect();
    let images: Vec<Word> = ball.par_iter().map(|w| map.apply_word(w)).collect();
    // HashMap equality on canonical words is exact recomparison of images.
    let mut slot: HashMap<&Word, usize> = HashMap::with_capacity(images.len());
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, img) in images.iter().enumerate() {
        match slot.get(img) {
            Some(&g) => groups[g].push(i),
            None => {
                slot.insert(img, groups.len());
                groups.push(vec![i]);
            }
        }
    }
    Ok(Fibers { ball, groups })
}

/// Exhaustive scan of `B(radius)` for pairs with equal images.
pub fn check_injectivity(
    map: &Substitution,
    radius: usize,
    budget: &Budget,
) -> Result<InjectivityReport> {
    let f = fibers(map, radius, budget)?;
    let mut collisions = Vec::new();
    let mut collision_count = 0;
    for group in f.groups.iter().filter(|g| g.len() > 1) {
        for &j in &group[1..] {
            collision_count += 1;
            if collisions.len() < MAX_REPORTED_COLLISIONS {
                collisions.push((f.ball[group[0]].clone(), f.ball[j].clone()));
            }
        }
    }
    Ok(InjectivityReport {
        radius,
        ball_size: f.ball.len(),
        collisions,
        collision_count,
        max_fiber: f.groups.iter().map(Vec::len).max().unwrap_or(0),
    })
}

pub fn fiber_statistics(
    map: &Substitution,
    radius: usize,
    budget: &Budget,
) -> Result<FiberStatistics> {
    let f = fibers(map, radius, budget)?;
    let mut histogram = BTreeMap::new();
    for g in &f.groups {
        *histogram.entry(g.len()).or_insert(0) += 1;
    }
    let largest = f
        .groups
        .iter()
        .reduce(|best, g| if g.len() > best.len() { g } else { best });
    Ok(FiberStatistics {
        radius,
        ball_size: f.ball.len(),
        max_fiber: largest.map_or(0, Vec::len),
        histogram,
        largest_fiber: largest
            .map(|g| g.iter().map(|&i| f.ball[i].clone()).collect())
            .unwrap_or_default(),
    })
}

/// Maximal image length over `B(radius)`.
pub fn max_image_length(map: &Substitution, radius: usize, budget: &Budget) -> Result<usize> {
    let ball: Vec<Word> = map.context().enumerate_ball(radius, budget)?.collect();
    Ok(ball
        .par_iter()
        .map(|w| map.apply_word(w).len())
        .max()
        .unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthPoint {
    pub n: usize,
    pub ball_size: usize,
    /// Largest `|phi_n(w)|` over `w` in `B(n)`.
    pub f_measured: usize,
    /// `n (4n + 2 + |g|)`: every letter maps to a word of length at most `4n + 2 + |g|`.
    pub envelope: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub g_length: usize,
    pub points: Vec<GrowthPoint>,
}

impl GrowthProfile {
    pub fn nondecreasing(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[0].f_measured <= w[1].f_measured)
    }

    pub fn within_envelope(&self) -> bool {
        self.points.iter().all(|p| p.f_measured <= p.envelope)
    }

    /// `f(n)^(1/n) > f(n+1)^(1/(n+1))` for consecutive `n >= from`, compared
    /// exactly as `f(n)^(n+1) > f(n+1)^n`.
    pub fn root_strictly_decreasing_from(&self, from: usize) -> bool {
        self.points
            .windows(2)
            .filter(|w| w[0].n >= from && w[0].n >= 1)
            .all(|w| {
                let (a, b) = (&w[0], &w[1]);
                num_traits::pow(BigInt::from(a.f_measured), b.n)
                    > num_traits::pow(BigInt::from(b.f_measured), a.n)
            })
    }
}

/// `f_measured(n)` for `n = 1..=radius_max`, each from an exhaustive scan of
/// `B(n)` under `phi_n`.
pub fn growth_profile(
    family: &RetractionFamily,
    radius_max: usize,
    budget: &Budget,
) -> Result<GrowthProfile> {
    let g_length = family.g.len();
    let points = (1..=radius_max)
        .map(|n| {
            let ret = family.member(n as u64);
            let f_measured = max_image_length(ret.substitution(), n, budget)?;
            Ok(GrowthPoint {
                n,
                ball_size: family.context().ball_size(n).unwrap_or(u128::MAX) as usize,
                f_measured,
                envelope: n * (4 * n + 2 + g_length),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthProfile { g_length, points })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::words::GroupContext;

    fn ctx() -> Arc<GroupContext> {
        Arc::new(GroupContext::parse("x|y|a").unwrap())
    }

    fn family() -> RetractionFamily {
        let c = ctx();
        RetractionFamily::new(c.clone(), c.parse_word("x").unwrap(), 1, 2).unwrap()
    }

    #[test]
    fn retraction_is_injective_on_its_ball() {
        let b = Budget::default();
        let r = check_injectivity(family().member(2).substitution(), 2, &b).unwrap();
        assert!(r.injective());
        assert_eq!(r.max_fiber, 1);
        let r4 = check_injectivity(family().member(4).substitution(), 4, &b).unwrap();
        assert!(r4.injective());
        assert_eq!(r4.ball_size, 937);
    }

    #[test]
    fn degenerate_map_collides() {
        let c = ctx();
        let map = Substitution::parse(c.clone(), "a=x").unwrap();
        let r = check_injectivity(&map, 1, &Budget::default()).unwrap();
        assert!(!r.injective());
        let x = c.parse_word("x").unwrap();
        let a = c.parse_word("a").unwrap();
        assert!(r.collisions.contains(&(x, a)));
        assert_eq!(r.max_fiber, 2);
    }

    #[test]
    fn fiber_examples() {
        let c = ctx();
        let b = Budget::default();
        let inj = fiber_statistics(family().member(1).substitution(), 1, &b).unwrap();
        assert_eq!(inj.max_fiber, 1);
        assert_eq!(inj.histogram, BTreeMap::from([(1, 7)]));

        let deg = fiber_statistics(&Substitution::parse(c.clone(), "a=x").unwrap(), 1, &b).unwrap();
        assert_eq!(deg.max_fiber, 2);

        let collapse = fiber_statistics(&Substitution::parse(c.clone(), "a=e").unwrap(), 1, &b).unwrap();
        assert_eq!(collapse.max_fiber, 3);
        let expect: Vec<Word> = ["e", "a", "a^-1"].iter().map(|s| c.parse_word(s).unwrap()).collect();
        let mut got = collapse.largest_fiber.clone();
        got.sort();
        let mut expect_sorted = expect;
        expect_sorted.sort();
        assert_eq!(got, expect_sorted);
    }

    #[test]
    fn growth_first_values() {
        let p = growth_profile(&family(), 4, &Budget::default()).unwrap();
        assert_eq!(p.points[0].f_measured, 7);
        assert!(p.nondecreasing());
        assert!(p.within_envelope());
    }

    #[test]
    fn budget_blocks_large_balls() {
        let r = check_injectivity(family().member(6).substitution(), 6, &Budget::with_max_terms(1000));
        assert!(matches!(r, Err(crate::Error::BudgetExceeded { .. })));
    }
}
