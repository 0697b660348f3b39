use num_bigint::BigInt;
use num_rational::BigRational;

use super::rounding::{root_rounded, Dyadic, Rounding};
use crate::algebra::{AlgebraElement, LayeredL2Profile};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// The rapid-decay polynomial `P(r) = (sum_{k<=r} (k+1)^2)^(1/2)` together
/// with its per-layer weights `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RapidDecayBound {
    pub radius: usize,
}

impl RapidDecayBound {
    pub fn new(radius: usize) -> Self {
        RapidDecayBound { radius }
    }

    pub fn weights(&self) -> Vec<u64> {
        (1..=self.radius as u64 + 1).collect()
    }

    /// `P(r)^2 = (r+1)(r+2)(2r+3)/6`, exact.
    pub fn poly_squared(&self) -> BigInt {
        let r = BigInt::from(self.radius);
        (&r + 1) * (&r + 2) * (BigInt::from(2) * &r + 3) / 6
    }

    pub fn value(&self, scale: u32) -> Dyadic {
        root_rounded(
            &BigRational::from_integer(self.poly_squared()),
            2,
            scale,
            Rounding::Up,
        )
    }
}

/// Haagerup-type upper bound for `||lambda(x)||` on a free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaagerupBound {
    pub profile: LayeredL2Profile,
    /// `sum_k (k+1) ||x_k||_2`, rounded up.
    pub layered: Dyadic,
    /// `P(r)^2 ||x||_2^2`, the exact radicand of the flat bound.
    pub flat_radicand: BigRational,
    /// `P(r) ||x||_2`, rounded up.
    pub flat: Dyadic,
    /// The smaller of the two.
    pub value: Dyadic,
}

/// Upper bound `min(sum_k (k+1)||x_k||_2, P(r)||x||_2)` with outward rounding.
pub fn haagerup_upper(x: &AlgebraElement, scale: u32) -> HaagerupBound {
    let profile = x.layered_profile();
    let layered = profile
        .layers
        .iter()
        .enumerate()
        .map(|(k, l2)| root_rounded(l2, 2, scale, Rounding::Up).mul_int(k as u64 + 1))
        .fold(Dyadic::zero(scale), |acc, d| acc.add(&d));
    let poly = RapidDecayBound::new(profile.radius()).poly_squared();
    let flat_radicand = BigRational::from_integer(poly) * profile.total();
    let flat = root_rounded(&flat_radicand, 2, scale, Rounding::Up);
    let value = layered.clone().min(flat.clone());
    HaagerupBound {
        profile,
        layered,
        flat_radicand,
        flat,
        value,
    }
}

/// A lower bound `radicand^(1/root)` with its exact radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub radicand: BigRational,
    pub root: u32,
    pub value: Dyadic,
}

impl LowerBound {
    pub fn new(radicand: BigRational, root: u32, scale: u32) -> Self {
        let value = root_rounded(&radicand, root, scale, Rounding::Down);
        LowerBound {
            radicand,
            root,
            value,
        }
    }
}

/// `x* x`.
pub fn gram(x: &AlgebraElement, budget: &Budget) -> Result<AlgebraElement> {
    x.adjoint().convolve(x, budget)
}

/// `||(x*x)^m||_2^(1/2m)`, which never exceeds `||lambda(x)||`.
///
/// The radicand is `c_m = ||(x*x)^m||_2^2` and the bound is `c_m^(1/4m)`.
pub fn power_lower(x: &AlgebraElement, m: u64, budget: &Budget, scale: u32) -> Result<LowerBound> {
    let y = gram(x, budget)?.power(m, budget)?;
    Ok(LowerBound::new(y.l2_squared(), 4 * m as u32, scale))
}

/// `||x * probe||_2 / ||probe||_2`.
pub fn vector_lower(
    x: &AlgebraElement,
    probe: &AlgebraElement,
    budget: &Budget,
    scale: u32,
) -> Result<LowerBound> {
    if probe.is_zero() {
        return Err(Error::InvalidArgument("probe vector must be nonzero".into()));
    }
    let image = x.convolve(probe, budget)?;
    let radicand = image.l2_squared() / probe.l2_squared();
    Ok(LowerBound::new(radicand, 2, scale))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::words::GroupContext;

    fn el(s: &str) -> AlgebraElement {
        let ctx = Arc::new(GroupContext::parse("a|b").unwrap());
        AlgebraElement::parse(ctx, s).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(RapidDecayBound::new(0).poly_squared(), 1.into());
        assert_eq!(RapidDecayBound::new(2).poly_squared(), 14.into());
        assert_eq!(RapidDecayBound::new(3).weights(), vec![1, 2, 3, 4]);
        let p: Vec<BigInt> = (0..20).map(|r| RapidDecayBound::new(r).poly_squared()).collect();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn haagerup_examples() {
        for (w, k) in [("e", 0i64), ("a", 1), ("a.b^-2", 3)] {
            assert_eq!(haagerup_upper(&el(w), 64).value.to_rational(), q(k + 1));
        }
        assert_eq!(haagerup_upper(&el("e + a"), 64).value.to_rational(), q(3));
        assert_eq!(haagerup_upper(&el("0"), 64).value.to_rational(), q(0));
    }

    #[test]
    fn layered_never_exceeds_flat() {
        for s in ["e + a", "3*e - a.b + 1/2*b^2 + a^-1", "a + a^-1 + b + b^-1"] {
            let h = haagerup_upper(&el(s), 64);
            // Cauchy-Schwarz: sum (k+1)|x_k| <= P(r) ||x||; rounding may add one ulp per layer.
            let slack = BigRational::new(h.profile.layers.len().into(), BigInt::from(1) << 63);
            assert!(h.layered.to_rational() <= h.flat.to_rational() + slack);
        }
    }

    #[test]
    fn power_lower_examples() {
        let b = Budget::default();
        for m in [1, 2, 4] {
            let g = power_lower(&el("a.b"), m, &b, 64).unwrap();
            assert_eq!(g.radicand, q(1));
            assert_eq!(g.value.to_rational(), q(1));
        }
        let l = power_lower(&el("e + a"), 1, &b, 64).unwrap();
        assert_eq!(l.radicand, q(6));
        assert_eq!(l.root, 4);
        assert_eq!(l.value.to_decimal(4, Rounding::Down), "1.5650");
    }

    #[test]
    fn vector_lower_examples() {
        let b = Budget::default();
        let x = el("e + a");
        let delta = vector_lower(&x, &el("e"), &b, 64).unwrap();
        assert_eq!(delta.radicand, x.l2_squared());
        let g = vector_lower(&el("a.b^-1"), &el("e + 2*b - a"), &b, 64).unwrap();
        assert_eq!(g.radicand, q(1));
        let better = vector_lower(&x, &el("e + a^-1"), &b, 64).unwrap();
        assert!(better.radicand > delta.radicand);
        assert!(vector_lower(&x, &el("0"), &b, 64).is_err());
    }
}
