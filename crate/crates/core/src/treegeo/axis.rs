use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// `[g] = min_v d(g v, v)`: the length of the cyclic core.
pub fn translation_length(g: &Word) -> usize {
    g.cyclic_reduce().0.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLength {
    pub exact: usize,
    /// `(n, |g^n|)` for each sample; `|g^n| = n [g] + 2 |u|` with `u` the conjugator.
    pub samples: Vec<(u64, usize)>,
    pub conjugator_length: usize,
}

impl StableLength {
    pub fn ratios(&self) -> Vec<BigRational> {
        self.samples
            .iter()
            .map(|&(n, len)| BigRational::new(len.into(), n.into()))
            .collect()
    }

    /// `|d(g^n, e)/n - tau| <= 2|u|/n` for every sample.
    pub fn within_conjugator_bound(&self) -> bool {
        self.samples.iter().all(|&(n, len)| {
            let n = n as usize;
            len.abs_diff(n * self.exact) <= 2 * self.conjugator_length
        })
    }
}

/// `tau(g) = lim d(g^n, e)/n`, which in a tree equals `[g]`.
pub fn stable_length(g: &Word, samples: &[u64]) -> Result<StableLength> {
    if g.is_identity() {
        return Err(Error::InvalidArgument("the identity has no axis".into()));
    }
    if samples.contains(&0) {
        return Err(Error::InvalidArgument("sample powers must be positive".into()));
    }
    let (core, conj) = g.cyclic_reduce();
    Ok(StableLength {
        exact: core.len(),
        samples: samples
            .iter()
            .map(|&n| (n, g.pow(n as i64).len()))
            .collect(),
        conjugator_length: conj.len(),
    })
}

/// The axis of `g = u c u^-1`: the line through `u` along `u c^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub g: Word,
    pub core: Word,
    pub conjugator: Word,
    forward: Vec<Letter>,
    backward: Vec<Letter>,
}

impl Axis {
    pub fn new(g: &Word) -> Result<Self> {
        if g.is_identity() {
            return Err(Error::InvalidArgument("the identity has no axis".into()));
        }
        let (core, conjugator) = g.cyclic_reduce();
        let forward = core.letter_vec();
        let backward = core.inverse().letter_vec();
        Ok(Axis {
            g: g.clone(),
            core,
            conjugator,
            forward,
            backward,
        })
    }

    pub fn translation(&self) -> usize {
        self.core.len()
    }

    /// The point at signed distance `t` from `e` along the axis through `e` of
    /// the core, i.e. the prefix of `c^(+inf)` or `c^(-inf)` of length `|t|`.
    pub fn base_point(&self, t: i64) -> Word {
        let letters = if t >= 0 { &self.forward } else { &self.backward };
        Word::from_letters(letters.iter().copied().cycle().take(t.unsigned_abs() as usize))
    }

    /// `u * base_point(t)`.
    pub fn vertex(&self, t: i64) -> Word {
        self.conjugator.mul_ref(&self.base_point(t))
    }

    /// `v` lies on the axis iff `d(g v, v) = [g]`.
    pub fn contains(&self, v: &Word) -> bool {
        v.inverse().mul_ref(&self.g).mul_ref(v).len() == self.translation()
    }

    /// Nearest-point parameter of `w` on the axis through `e` of the core.
    fn base_projection(&self, w: &Word) -> i64 {
        let along = |letters: &[Letter]| {
            w.letters()
                .zip(letters.iter().copied().cycle())
                .take_while(|(a, b)| a == b)
                .count() as i64
        };
        let f = along(&self.forward);
        if f > 0 {
            f
        } else {
            -along(&self.backward)
        }
    }
}

/// `h in E(g)`, which for a free group is `h in <primitive_root(g)>`.
pub fn elementary_membership(g: &Word, h: &Word) -> Result<bool> {
    let (root, _) = g.primitive_root()?;
    if h.is_identity() {
        return Ok(true);
    }
    let (hroot, _) = h.primitive_root()?;
    Ok(hroot == root || hroot == root.inverse())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Diameter of the projection of `h axis(g)` onto `axis(g)`, with the
    /// window `|s| <= window` of axis parameters on which it was computed and the
    /// extreme projection parameters.
    Bounded {
        diameter: usize,
        window: usize,
        low: i64,
        high: i64,
    },
    /// `h in E(g)`: the two axes coincide.
    Unbounded,
}

impl Projection {
    pub fn diameter(&self) -> Option<usize> {
        match self {
            Projection::Bounded { diameter, .. } => Some(*diameter),
            Projection::Unbounded => None,
        }
    }
}

/// `||pi_{axis(g)}(h axis(g))||`, exact.
///
/// After conjugating by `u`, the points `k p(s)` with `k = u^-1 h u` are projected
/// onto the core axis for `|s|` in a window. The window is accepted once both
/// ends are certified: the next step only appends a letter, and the point
/// has already left the axis, so projections stay constant beyond it.
pub fn projection_diameter(g: &Word, h: &Word) -> Result<Projection> {
    if elementary_membership(g, h)? {
        return Ok(Projection::Unbounded);
    }
    let axis = Axis::new(g)?;
    let k = axis.conjugator.inverse().mul_ref(h).mul_ref(&axis.conjugator);
    let c = axis.translation();
    let mut window = 2 * k.len() + c + 1;
    let limit = 64 * (k.len() + c + 1);
    loop {
        let point = |s: i64| k.mul_ref(&axis.base_point(s));
        let certified = [-(window as i64), window as i64].iter().all(|&s| {
            let here = point(s);
            let next = point(s + s.signum());
            let on_axis = axis.base_projection(&here).unsigned_abs() as usize == here.len();
            next.len() == here.len() + 1 && !on_axis
        });
        if certified {
            let (low, high) = (-(window as i64)..=window as i64)
                .map(|s| axis.base_projection(&point(s)))
                .fold((i64::MAX, i64::MIN), |(lo, hi), t| (lo.min(t), hi.max(t)));
            return Ok(Projection::Bounded {
                diameter: (high - low) as usize,
                window,
                low,
                high,
            });
        }
        if window > limit {
            return Err(Error::Hypothesis(format!(
                "projection window did not stabilise within {limit}"
            )));
        }
        window *= 2;
    }
}
