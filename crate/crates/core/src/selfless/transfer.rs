use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::retraction::RetractionFamily;
use super::scan::max_image_length;
use crate::algebra::AlgebraElement;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::norms::{gram, root_rounded, Dyadic, RapidDecayBound, Rounding};

/// One `(m, n)` row of the norm-transfer experiment for `b = phi_n(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferStep {
    pub m: u64,
    pub n: u64,
    /// `c_z = ||(z*z)^m||_2^2`.
    pub source_radicand: BigRational,
    /// `c_b = ||(b*b)^m||_2^2`, computed from `b` independently.
    pub image_radicand: BigRational,
    pub l2_equal: bool,
    /// Radius `2mR` of the support of `(z*z)^m`.
    pub growth_radius: usize,
    /// Largest `|phi_n(w)|` over `w` in `B(2mR)`.
    pub f_measured: usize,
    /// `P(f)^2`.
    pub poly_squared: BigInt,
    /// `P(f)^(1/2m)`, rounded up.
    pub factor: Dyadic,
    /// `P(f)^2 c_b` and `P(f)^2 c_z`: the radicands of `upper(b)^(4m)` and
    /// `(factor * lower(z))^(4m)`.
    pub chain_image: BigRational,
    pub chain_source: BigRational,
    pub chain_equal: bool,
    /// `(P(f)^2 c_b)^(1/4m)`, rounded up; bounds `||lambda(b)||`.
    pub image_upper: Dyadic,
    /// `c_z^(1/4m)`, rounded down; bounds `||lambda(z)||`.
    pub source_lower: Dyadic,
    /// `factor < 1 + epsilon`, decided exactly.
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub element_hash: String,
    pub radius: usize,
    pub epsilon: BigRational,
    pub steps: Vec<TransferStep>,
}

impl TransferReport {
    pub fn factors_strictly_decreasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[1].factor < w[0].factor)
    }
}

/// `(m, 2mR)` for each `m` of the schedule.
pub fn default_transfer_schedule(ms: &[u64], radius: usize) -> Vec<(u64, u64)> {
    ms.iter().map(|&m| (m, 2 * m * radius as u64)).collect()
}

/// Compares `||lambda(phi_n(z))||` with `||lambda(z)||` through the power trick.
///
/// Requires `||z||_1 = 1` and `n >= 2mR` for every step.
pub fn transfer_experiment(
    z: &AlgebraElement,
    family: &RetractionFamily,
    epsilon: &BigRational,
    steps: &[(u64, u64)],
    budget: &Budget,
    scale: u32,
) -> Result<TransferReport> {
    if **z.context() != **family.context() {
        return Err(Error::ContextMismatch(format!(
            "element over {} but retractions over {}",
            z.context().spec(),
            family.context().spec()
        )));
    }
    if z.l1() != BigRational::one() {
        return Err(Error::Hypothesis(format!("||z||_1 = {} is not 1", z.l1())));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let radius = z.radius();
    let zz = gram(z, budget)?;
    let one_plus = BigRational::one() + epsilon;

    let mut out = Vec::with_capacity(steps.len());
    for &(m, n) in steps {
        let growth_radius = 2 * m as usize * radius;
        if (n as usize) < growth_radius {
            return Err(Error::Hypothesis(format!(
                "n = {n} is below 2mR = {growth_radius} for m = {m}"
            )));
        }
        let ret = family.member(n);
        let b = ret.apply_element(z)?;
        let source_radicand = zz.power(m, budget)?.l2_squared();
        let image_radicand = gram(&b, budget)?.power(m, budget)?.l2_squared();
        let f_measured = max_image_length(ret.substitution(), growth_radius, budget)?;
        let poly_squared = RapidDecayBound::new(f_measured).poly_squared();
        let root = 4 * m as u32;
        let s = BigRational::from_integer(poly_squared.clone());
        let chain_image = &s * &image_radicand;
        let chain_source = &s * &source_radicand;
        out.push(TransferStep {
            m,
            n,
            l2_equal: source_radicand == image_radicand,
            chain_equal: chain_image == chain_source,
            growth_radius,
            f_measured,
            factor: root_rounded(&s, root, scale, Rounding::Up),
            image_upper: root_rounded(&chain_image, root, scale, Rounding::Up),
            source_lower: root_rounded(&source_radicand, root, scale, Rounding::Down),
            success: s < num_traits::pow(one_plus.clone(), root as usize),
            poly_squared,
            chain_image,
            chain_source,
            source_radicand,
            image_radicand,
        });
    }
    Ok(TransferReport {
        element_hash: z.content_hash(),
        radius,
        epsilon: epsilon.clone(),
        steps: out,
    })
}
