//! Geometry of the free group acting on its Cayley tree: displacement, stable
//! length, axes and projections, the constant cascade behind the exponent
//! threshold, and admissible-path products.

mod axis;
mod constants;
mod path;
mod search;

pub use axis::{
    elementary_membership, projection_diameter, stable_length, translation_length, Axis,
    Projection, StableLength,
};
pub use constants::{
    constant_cascade, quasi_geodesic_constant, CascadeReport, ConstantProvider, Quadratic,
};
pub use path::{
    admissible_path_check, cascade_for, quasi_axis_constant, PathReport, MAX_STORED_BREAKPOINTS,
};
pub use search::{minimal_exponent_search, SearchReport};
