//! Exact finite-topology engine: point-set lattice operations, covers and
//! developments, map classification and small images.

mod family;
mod map;
mod pointset;
mod regular;
mod space;

pub use family::{
    family_role_check, is_development, is_point_finite, is_refinement, maximal_subfamily, star,
    CoverSequence, PointFiniteness, Role, SetFamily,
};
pub(crate) use family::{maximal_members, same_space};
pub use map::{kpv_condition, map_report, small_image, MapReport, SpaceMap};
pub use pointset::{PointSet, Points, MAX_POINTS};
pub use regular::{ro_family, RegularOpenAlgebra};
pub use space::{ClosureReport, FiniteSpace};
