//! One-dimensional fragments: 1-Lipschitz maps from compact subsets of `[0, 1]`,
//! their cones, density-good parameters and extensions.

pub mod ball;
pub mod error;
pub mod extend;
pub mod fragment;
pub mod good;
pub mod hausdorff;
pub mod interval;
pub mod io;
pub mod map;

pub use ball::{first_good_point, fragment_ball_mass, good_points_near, pushforward_ball_mass, BallMassReport};
pub use error::{FragmentError, Result};
pub use extend::{distance_integral, extend_curve, extend_cutoff, CutoffProfile, CutoffSpec, FullCurve, ProfilePiece};
pub use fragment::{segment_ball_times, Fragment, Knot, MetricDerivative, Segment};
pub use good::density_good_set;
pub use hausdorff::{hausdorff_intervals, hausdorff_points};
pub use interval::IntervalUnion;
pub use io::{read_ndjson, write_ndjson};
pub use map::{cone_membership, in_cone, ConeClass, ConeMembership, ConeSpec, LipschitzMap};
