use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction of outward rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// The exact value `mantissa / 2^scale`.
///
/// Certified reals are carried as dyadic rationals obtained by rounding an
/// exact quantity in a known direction, so comparisons against them are
/// exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    scale: u32,
}

fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits
}

fn floor_rational(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

fn ceil_rational(r: &BigRational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

impl Dyadic {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Dyadic { mantissa, scale }
    }

    pub fn zero(scale: u32) -> Self {
        Dyadic::new(BigInt::zero(), scale)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Rounds an exact rational to `scale` fractional bits.
    pub fn from_rational(r: &BigRational, scale: u32, dir: Rounding) -> Self {
        let shifted = r * BigRational::from_integer(pow2(scale as u64));
        let mantissa = match dir {
            Rounding::Down => floor_rational(&shifted),
            Rounding::Up => ceil_rational(&shifted),
        };
        Dyadic { mantissa, scale }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow2(self.scale as u64))
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.to_rational().cmp(r)
    }

    /// Sum of two dyadics with the same scale.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        assert_eq!(self.scale, other.scale, "dyadic scales differ");
        Dyadic::new(&self.mantissa + &other.mantissa, self.scale)
    }

    pub fn mul_int(&self, k: u64) -> Dyadic {
        Dyadic::new(&self.mantissa * BigInt::from(k), self.scale)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: usize, dir: Rounding) -> String {
        let scaled = self.to_rational() * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
        let n = match dir {
            Rounding::Down => floor_rational(&scaled),
            Rounding::Up => ceil_rational(&scaled),
        };
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// Nearest `f64` on the requested side of the exact value.
    pub fn to_f64(&self, dir: Rounding) -> f64 {
        let exact = self.to_rational();
        let mut f = self.mantissa.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.scale as i32);
        if !f.is_finite() {
            return f;
        }
        loop {
            let fr = BigRational::from_float(f).expect("finite float");
            match dir {
                Rounding::Down if fr > exact => f = f.next_down(),
                Rounding::Up if fr < exact => f = f.next_up(),
                _ => return f,
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.mantissa, self.scale)
    }
}

/// `r^(1/n)` rounded in `dir` to `scale` fractional bits; `r` must be nonnegative.
pub fn root_rounded(r: &BigRational, n: u32, scale: u32, dir: Rounding) -> Dyadic {
    assert!(n >= 1, "root index must be positive");
    assert!(!r.is_negative(), "root of a negative rational");
    let shifted = r * BigRational::from_integer(pow2(scale as u64 * n as u64));
    let mantissa = match dir {
        Rounding::Down => floor_rational(&shifted).nth_root(n),
        Rounding::Up => {
            let t = ceil_rational(&shifted);
            let s = t.nth_root(n);
            if num_traits::pow(s.clone(), n as usize) < t {
                s + 1
            } else {
                s
            }
        }
    };
    Dyadic::new(mantissa, scale)
}

/// Exact comparison of `a^(1/p)` with `b^(1/q)` for nonnegative rationals,
/// by comparing `a^q` with `b^p`.
pub fn root_cmp(a: &BigRational, p: u32, b: &BigRational, q: u32) -> Ordering {
    assert!(p >= 1 && q >= 1);
    num_traits::pow(a.clone(), q as usize).cmp(&num_traits::pow(b.clone(), p as usize))
}

/// Decimal digits that `bits` binary digits of precision support.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}
