//! Certified two-sided bounds on the reduced operator norm.
//!
//! Lower bounds come from the power trick `||lambda(x)||^(2m) =
//! ||lambda((x*x)^m)|| >= ||(x*x)^m||_2`, upper bounds from the Haagerup
//! inequality applied to `(x*x)^m`. All reals are dyadic rationals rounded
//! outward from exact radicands.

mod bounds;
mod certificate;
mod rounding;

pub use bounds::{
    gram, haagerup_upper, power_lower, vector_lower, HaagerupBound, LowerBound, RapidDecayBound,
};
pub use certificate::{
    certify_norm, certify_norm_cached, doubling_schedule, CertifyOptions, NoCache,
    NormCertificate, PowerCache, PowerStep,
};
pub use rounding::{decimal_digits, root_cmp, root_rounded, Dyadic, Rounding};
