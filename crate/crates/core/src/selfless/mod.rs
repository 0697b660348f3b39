//! Retractions `phi_n` of `G * H * <a>` onto `G * H` and the checks run on them:
//! ball injectivity, fiber statistics, image growth, regrouped products and
//! norm transfer.

mod product;
mod retraction;
mod scan;
mod transfer;

pub use product::{product_nontriviality, ProductWitness};
pub use retraction::{
    build_retraction, default_roles, Retraction, RetractionFamily, RetractionSpec, Substitution,
};
pub use scan::{
    check_injectivity, fiber_statistics, growth_profile, max_image_length, FiberStatistics,
    GrowthPoint, GrowthProfile, InjectivityReport, MAX_REPORTED_COLLISIONS,
};
pub use transfer::{default_transfer_schedule, transfer_experiment, TransferReport, TransferStep};
