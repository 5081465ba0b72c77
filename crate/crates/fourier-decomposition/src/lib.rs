//! Fourier-multiplier splitting of a measure `mu` coupled to a matrix measure
//! `T` into an `L^p` part and a part controlled by the defect `I mu - T`.

pub mod decompose;
pub mod error;
pub mod frame;
pub mod support;
pub mod symbol;
pub mod weak;

pub use decompose::{
    check_exponent, conjugate_reciprocal, decompose_divergence, default_exponent, positivity_correction,
    scaled_decompose, Branch, DecompositionRequest, DecompositionResult, NormReport,
};
pub use error::{DecompError, Result};
pub use frame::FrameMatrix;
pub use support::{
    admissible_defect, quantified_support_bound, quantified_support_bound_with, support_lower_bound, SupportBound,
    SupportEstimate, DEFECT_CALIBRATION,
};
pub use symbol::{
    apply_general_multiplier, general_decomposition, sphere_samples, wave_cone_gap, wave_cone_gap_with, Coefficient,
    GeneralDecomposition, SymbolSpec, WaveConeGap, SPHERE_SAMPLES, WAVE_CONE_TOL,
};
pub use weak::{fourier_norm, weak_type_terms, WeakTypeTerms};
