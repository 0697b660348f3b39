use std::cmp::Ordering;

use num_rational::BigRational;

use super::bounds::{gram, haagerup_upper, HaagerupBound, LowerBound};
use super::rounding::{root_cmp, root_rounded, Dyadic, Rounding};
use crate::algebra::{AlgebraElement, LayeredL2Profile};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Storage for convolution powers `(x*x)^m`, keyed by the base `x*x` and `m`.
pub trait PowerCache {
    fn load(&mut self, base: &AlgebraElement, m: u64) -> Option<AlgebraElement>;
    fn store(&mut self, base: &AlgebraElement, m: u64, power: &AlgebraElement);
}

/// A cache that never hits.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCache;

impl PowerCache for NoCache {
    fn load(&mut self, _: &AlgebraElement, _: u64) -> Option<AlgebraElement> {
        None
    }

    fn store(&mut self, _: &AlgebraElement, _: u64, _: &AlgebraElement) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Largest power in the doubling schedule `1, 2, 4, ..., m_max`.
    pub m_max: u64,
    pub budget: Budget,
    /// Fractional bits of the outward-rounded bounds.
    pub precision_bits: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            m_max: 4,
            budget: Budget::default(),
            precision_bits: 64,
        }
    }
}

/// Data recorded for one power `m` of the schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerStep {
    pub m: u64,
    /// Support size and radius of `(x*x)^m`.
    pub support_len: usize,
    pub radius: usize,
    /// `c_m = ||(x*x)^m||_2^2` with its layer decomposition.
    pub radicand: BigRational,
    pub profile: LayeredL2Profile,
    /// `c_m^(1/4m)`, rounded down.
    pub lower: Dyadic,
    /// Haagerup bound of `(x*x)^m`.
    pub haagerup: HaagerupBound,
    /// `haagerup^(1/2m)`, rounded up.
    pub upper: Dyadic,
}

/// Two-sided bounds on `||lambda(x)||` along a doubling schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCertificate {
    pub element_hash: String,
    pub precision_bits: u32,
    pub schedule: Vec<u64>,
    pub steps: Vec<PowerStep>,
    pub best_lower: Option<Dyadic>,
    pub best_upper: Option<Dyadic>,
    /// `lower(2m) >= lower(m)` checked on exact radicands for every consecutive pair.
    pub lower_monotone: bool,
    /// Set when the schedule stopped early; holds the error that stopped it.
    pub truncated: Option<Error>,
}

impl NormCertificate {
    /// Every step satisfies `lower <= upper` and the best pair is ordered.
    pub fn is_consistent(&self) -> bool {
        self.steps.iter().all(|s| s.lower <= s.upper)
            && match (&self.best_lower, &self.best_upper) {
                (Some(l), Some(u)) => l <= u,
                _ => true,
            }
    }

    /// Whether `value` is certified to lie in `[best_lower, best_upper]`.
    pub fn contains(&self, value: &BigRational) -> bool {
        match (&self.best_lower, &self.best_upper) {
            (Some(l), Some(u)) => l.cmp_rational(value).is_le() && u.cmp_rational(value).is_ge(),
            _ => false,
        }
    }
}

/// `1, 2, 4, ..., m_max`; `m_max` must be a power of two.
pub fn doubling_schedule(m_max: u64) -> Result<Vec<u64>> {
    if m_max == 0 || !m_max.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "m_max must be a positive power of two, got {m_max}"
        )));
    }
    Ok((0..=m_max.trailing_zeros()).map(|k| 1u64 << k).collect())
}

fn step_for(m: u64, y: &AlgebraElement, scale: u32) -> PowerStep {
    let profile = y.layered_profile();
    let radicand = profile.total();
    let lower = LowerBound::new(radicand.clone(), 4 * m as u32, scale).value;
    let haagerup = haagerup_upper(y, scale);
    let upper = root_rounded(&haagerup.value.to_rational(), 2 * m as u32, scale, Rounding::Up);
    PowerStep {
        m,
        support_len: y.support_len(),
        radius: y.radius(),
        radicand,
        profile,
        lower,
        haagerup,
        upper,
    }
}

pub fn certify_norm(x: &AlgebraElement, opts: &CertifyOptions) -> Result<NormCertificate> {
    certify_norm_cached(x, opts, &mut NoCache)
}

/// Runs the doubling schedule, squaring `(x*x)^m` into `(x*x)^(2m)`.
///
/// A budget failure ends the schedule; the certificate built so far is
/// returned with `truncated` set.
pub fn certify_norm_cached(
    x: &AlgebraElement,
    opts: &CertifyOptions,
    cache: &mut dyn PowerCache,
) -> Result<NormCertificate> {
    let schedule = doubling_schedule(opts.m_max)?;
    let scale = opts.precision_bits;
    let mut cert = NormCertificate {
        element_hash: x.content_hash(),
        precision_bits: scale,
        schedule: schedule.clone(),
        steps: Vec::new(),
        best_lower: None,
        best_upper: None,
        lower_monotone: true,
        truncated: None,
    };

    let base = match gram(x, &opts.budget) {
        Ok(b) => b,
        Err(e) => {
            cert.truncated = Some(e);
            return Ok(cert);
        }
    };

    let mut current: Option<AlgebraElement> = None;
    for &m in &schedule {
        let next = match (m, cache.load(&base, m)) {
            (_, Some(hit)) => Ok(hit),
            (1, None) => Ok(base.clone()),
            (_, None) => {
                let prev = current.as_ref().expect("schedule starts at 1");
                prev.convolve(prev, &opts.budget)
            }
        };
        let y = match next {
            Ok(y) => y,
            Err(e) => {
                cert.truncated = Some(e);
                break;
            }
        };
        if m > 1 {
            cache.store(&base, m, &y);
        }
        cert.steps.push(step_for(m, &y, scale));
        current = Some(y);
    }

    cert.lower_monotone = cert.steps.windows(2).all(|w| {
        root_cmp(&w[1].radicand, 4 * w[1].m as u32, &w[0].radicand, 4 * w[0].m as u32)
            != Ordering::Less
    });
    cert.best_lower = cert.steps.iter().map(|s| s.lower.clone()).max();
    cert.best_upper = cert.steps.iter().map(|s| s.upper.clone()).min();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::words::GroupContext;

    fn el(spec: &str, s: &str) -> AlgebraElement {
        AlgebraElement::parse(Arc::new(GroupContext::parse(spec).unwrap()), s).unwrap()
    }

    #[test]
    fn schedule_shape() {
        assert_eq!(doubling_schedule(1).unwrap(), vec![1]);
        assert_eq!(doubling_schedule(8).unwrap(), vec![1, 2, 4, 8]);
        assert!(doubling_schedule(6).is_err());
        assert!(doubling_schedule(0).is_err());
    }

    #[test]
    fn identity_is_exact() {
        let cert = certify_norm(&el("a|b", "e"), &CertifyOptions::default()).unwrap();
        let one = BigRational::from_integer(1.into());
        assert_eq!(cert.best_lower.unwrap().to_rational(), one);
        assert_eq!(cert.best_upper.unwrap().to_rational(), one);
    }

    #[test]
    fn truncation_keeps_completed_steps() {
        let x = el("a|b", "a + a^-1 + b + b^-1");
        let opts = CertifyOptions {
            m_max: 8,
            budget: Budget::with_max_terms(200),
            precision_bits: 64,
        };
        let cert = certify_norm(&x, &opts).unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert!(matches!(cert.truncated, Some(Error::BudgetExceeded { .. })));
        assert!(cert.is_consistent());
    }

    #[test]
    fn zero_element() {
        let cert = certify_norm(&el("a|b", "0"), &CertifyOptions::default()).unwrap();
        assert!(cert.steps.iter().all(|s| s.upper.to_rational() == BigRational::from_integer(0.into())));
    }

    struct Recording(Vec<u64>);

    impl PowerCache for Recording {
        fn load(&mut self, _: &AlgebraElement, _: u64) -> Option<AlgebraElement> {
            None
        }
        fn store(&mut self, _: &AlgebraElement, m: u64, _: &AlgebraElement) {
            self.0.push(m);
        }
    }

    #[test]
    fn cache_sees_each_computed_power() {
        let mut rec = Recording(Vec::new());
        let opts = CertifyOptions {
            m_max: 8,
            ..CertifyOptions::default()
        };
        certify_norm_cached(&el("a", "e + a"), &opts, &mut rec).unwrap();
        assert_eq!(rec.0, vec![2, 4, 8]);
    }
}
