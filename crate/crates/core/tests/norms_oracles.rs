use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use selfless_core::algebra::AlgebraElement;
use selfless_core::norms::{
    certify_norm, haagerup_upper, power_lower, root_cmp, CertifyOptions,
};
use selfless_core::words::GroupContext;
use selfless_core::Budget;

/// Closed walks of length `len` at the root of the `degree`-regular tree,
/// by dynamic programming on the distance to the root.
fn closed_walks(degree: u64, len: usize) -> BigInt {
    let mut at = vec![BigInt::zero(); len + 2];
    at[0] = BigInt::one();
    for _ in 0..len {
        let mut next = vec![BigInt::zero(); len + 2];
        for d in 0..=len {
            if at[d].is_zero() {
                continue;
            }
            if d == 0 {
                next[1] += &at[0] * degree;
            } else {
                next[d - 1] += &at[d];
                next[d + 1] += &at[d] * (degree - 1);
            }
        }
        at = next;
    }
    at[0].clone()
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn element(spec: &str, text: &str) -> AlgebraElement {
    AlgebraElement::parse(Arc::new(GroupContext::parse(spec).unwrap()), text).unwrap()
}

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

#[test]
fn walk_oracle_sanity() {
    assert_eq!(closed_walks(4, 2), BigInt::from(4));
    assert_eq!(closed_walks(4, 4), BigInt::from(28));
    assert_eq!(closed_walks(2, 6), binomial(6, 3));
}

#[test]
fn laplacian_radicands_are_closed_walk_counts() {
    let x = element("a|b", "a + a^-1 + b + b^-1");
    let opts = CertifyOptions {
        m_max: 4,
        ..CertifyOptions::default()
    };
    let cert = certify_norm(&x, &opts).unwrap();
    assert!(cert.truncated.is_none());
    for step in &cert.steps {
        assert_eq!(step.radicand, int(closed_walks(4, 4 * step.m as usize)));
    }
    assert!(cert.lower_monotone);
    // 2 sqrt 3 lies inside, checked on squares: 12 vs bound^2.
    let twelve = BigRational::from_integer(12.into());
    let lo = cert.best_lower.clone().unwrap().to_rational();
    let hi = cert.best_upper.clone().unwrap().to_rational();
    assert!(&lo * &lo <= twelve && &hi * &hi >= twelve);
    assert!(lo >= BigRational::new(5.into(), 2.into()));
}

#[test]
fn haar_unitary_radicands_are_binomials() {
    let x = element("a|b", "e + a");
    let opts = CertifyOptions {
        m_max: 8,
        ..CertifyOptions::default()
    };
    let cert = certify_norm(&x, &opts).unwrap();
    let two = BigRational::from_integer(2.into());
    for step in &cert.steps {
        assert_eq!(step.radicand, int(binomial(4 * step.m, 2 * step.m)));
        assert!(step.lower.to_rational() <= two && step.upper.to_rational() >= two);
    }
    assert_eq!(cert.steps[0].radicand, int(6.into()));
    assert!(cert.lower_monotone);
}

#[test]
fn monotone_radicands_compare_exactly() {
    let x = element("a|b", "1/2*e + a - 1/3*b^2");
    let b = Budget::default();
    let l1 = power_lower(&x, 1, &b, 64).unwrap();
    let l2 = power_lower(&x, 2, &b, 64).unwrap();
    assert!(root_cmp(&l2.radicand, 8, &l1.radicand, 4).is_ge());
    assert!(l1.value <= l2.value);
}

#[test]
fn haagerup_dominates_operator_norm_lower_bounds() {
    for text in ["a + b", "e + a.b - 2*b^-1", "1/2*a + 1/2*a^-1 + b.a"] {
        let x = element("a|b", text);
        let cert = certify_norm(&x, &CertifyOptions::default()).unwrap();
        assert!(cert.is_consistent());
        let h = haagerup_upper(&x, 64);
        assert!(cert.best_lower.clone().unwrap() <= h.value);
        // l1 is always an upper bound for the operator norm.
        let l1 = x.l1();
        assert!(cert.best_lower.clone().unwrap().cmp_rational(&l1).is_le());
    }
}
