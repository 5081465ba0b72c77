//! Weighted families of curve fragments and the measures they induce.

pub mod cover;
pub mod defect;
pub mod disintegrate;
pub mod divergence;
pub mod error;
pub mod family;
pub mod layer;
pub mod localized;

pub use cover::{aperture, build_cone_cover, cone_cover_refine, ConeCover, ConeRefinement};
pub use defect::{defect_ball_mass, defect_family, defect_measure, GoodSetCache};
pub use disintegrate::{
    disintegrate, disintegrate_scalar, disintegrate_vector, family_ball_mass, portions, Disintegration, Mode, Portion,
};
pub use divergence::{divergence_of_disintegration, DivergenceReport, GRID_TOLERANCE};
pub use error::{AlbertiError, Result};
pub use family::{DefectParams, DensityProfile, FamilyEntry, FragmentFamily};
pub use layer::{layer_cake_refine, LayerCake, LayerReport, MAX_LEVELS};
pub use localized::{extended_families, localized_estimates, LocalizedReport};
