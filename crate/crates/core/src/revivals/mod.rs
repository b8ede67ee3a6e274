//! Diagnostic time series and the detection of revivals, fractional
//! revivals and collapse in them.

mod detection;
mod diagnostics;
mod report;

pub use detection::{
    classify_fractions, collapse_estimate, detect_extrema, smooth, Classification, Extremum,
    Fraction,
};
pub use diagnostics::{run_diagnostics, time_grid, DiagnosticSeries, MIN_SAMPLES_PER_PERIOD};
pub use report::{
    analyze, analyze_column, DetectionParams, ReportedExtremum, ResolvedDetection, RevivalReport,
};
