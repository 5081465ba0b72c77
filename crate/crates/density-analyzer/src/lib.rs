//! Lower-density certificates from the doubling dichotomy, and the singular-part
//! ratio scan of matrix-valued measures.

pub mod certificate;
pub mod config;
pub mod error;
pub mod family;
pub mod local;
pub mod scan;

pub use certificate::{scale_induction_certificate, CertificateStatus, DensityCertificate};
pub use config::{AnalyzerConfig, Ladder};
pub use error::{AnalyzerError, Result};
pub use family::{frame_of, localize, reference_ball_mass, DirectedFamily};
pub use local::{local_support_estimate, Branch, PdeReport, StepReport};
pub use scan::{resolution_growth, RATIO_FLOOR, singular_ratio_scan, singular_ratio_scan_with, RatioTable, ScanRow};
