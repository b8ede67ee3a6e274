use serde::{Deserialize, Serialize};

use super::detection::{classify_fractions, detect_extrema, smooth, Extremum};
use super::diagnostics::{check_times, DiagnosticSeries};
use crate::error::{Error, Result};
use crate::systems::Timescales;

/// Detection settings; unset fields are derived from the sampling rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionParams {
    /// Half-width in samples of the strict-extremum test. Default
    /// `max(3, samples per T_cl / 4)`.
    pub window: Option<usize>,
    /// Minimum prominence as a fraction of the (smoothed) series range.
    /// Default 0.02.
    pub prominence: Option<f64>,
    /// Moving-average width in samples applied before detection; 1 turns it
    /// off. Default: samples per T_cl, which averages over the classical
    /// motion. Extrema closer to either end than half this width are
    /// dropped.
    pub smoothing: Option<usize>,
    pub q_max: u64,
    /// Classification tolerance as a fraction of T_rev.
    pub tolerance: f64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self {
            window: None,
            prominence: None,
            smoothing: None,
            q_max: 10,
            tolerance: 0.01,
        }
    }
}

/// Detection settings after defaults are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedDetection {
    pub window: usize,
    pub prominence: f64,
    pub smoothing: usize,
    pub q_max: u64,
    pub tolerance: f64,
}

impl DetectionParams {
    pub fn validate(&self) -> Result<()> {
        if self.window == Some(0) {
            return Err(Error::Config("detection window must be at least 1".into()));
        }
        if let Some(p) = self.prominence {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::Config(format!(
                    "prominence {p} must be a non-negative fraction"
                )));
            }
        }
        if self.smoothing == Some(0) {
            return Err(Error::Config("smoothing width must be at least 1".into()));
        }
        if self.q_max < 2 {
            return Err(Error::Config(format!(
                "q_max {} must be at least 2",
                self.q_max
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn resolve(&self, times: &[f64], classical_period: f64) -> Result<ResolvedDetection> {
        self.validate()?;
        if times.len() < 2 {
            return Err(Error::Contract("need at least two sample times".into()));
        }
        let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        let per_period = classical_period / dt;
        let default_smoothing = if per_period.is_finite() {
            (per_period.round() as usize).max(1)
        } else {
            1
        };
        let default_window = if per_period.is_finite() {
            ((per_period / 4.0).round() as usize).max(3)
        } else {
            3
        };
        Ok(ResolvedDetection {
            window: self.window.unwrap_or(default_window),
            prominence: self.prominence.unwrap_or(0.02),
            smoothing: self.smoothing.unwrap_or(default_smoothing),
            q_max: self.q_max,
            tolerance: self.tolerance,
        })
    }
}

/// An extremum with its position relative to the revival time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportedExtremum {
    pub time: f64,
    pub value: f64,
    pub prominence: f64,
    /// `t / T_rev`.
    pub ratio: Option<f64>,
    /// `p/q` when the time lies within tolerance of that fraction.
    pub fraction: Option<String>,
    /// `|t - (p/q) T_rev|`.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevivalReport {
    pub column: String,
    pub minima: Vec<ReportedExtremum>,
    pub maxima: Vec<ReportedExtremum>,
    /// Time of the first detected maximum.
    pub collapse_estimate: Option<f64>,
    /// Why `collapse_estimate` is missing or should be read with care.
    pub collapse_note: Option<String>,
    pub timescales: Timescales,
    pub detection: ResolvedDetection,
}

impl RevivalReport {
    /// Classified minima as `(fraction, time)`.
    pub fn classified_minima(&self) -> impl Iterator<Item = (&str, f64)> {
        self.minima
            .iter()
            .filter_map(|e| e.fraction.as_deref().map(|f| (f, e.time)))
    }
}

fn report_extrema(
    found: &[Extremum],
    timescales: &Timescales,
    params: &ResolvedDetection,
) -> Result<Vec<ReportedExtremum>> {
    let times: Vec<f64> = found.iter().map(|e| e.time).collect();
    let classes = match timescales.revival {
        Some(t_rev) => classify_fractions(&times, t_rev, params.q_max, params.tolerance * t_rev)?,
        None => vec![None; found.len()],
    };
    Ok(found
        .iter()
        .zip(classes)
        .map(|(e, c)| ReportedExtremum {
            time: e.time,
            value: e.value,
            prominence: e.prominence,
            ratio: timescales.revival.map(|t| e.time / t),
            fraction: c.map(|c| c.fraction.to_string()),
            residual: c.map(|c| c.residual),
        })
        .collect())
}

/// Smooths, detects, classifies and estimates the collapse time for one
/// diagnostic column.
pub fn analyze_column(
    column: &str,
    values: &[f64],
    times: &[f64],
    timescales: &Timescales,
    params: &DetectionParams,
) -> Result<RevivalReport> {
    check_times(times)?;
    let resolved = params.resolve(times, timescales.classical)?;
    let smoothed = smooth(values, resolved.smoothing);
    let lo = smoothed.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = smoothed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let prominence = resolved.prominence * (hi - lo);
    // near the ends the moving average is truncated and not comparable
    let edge = (resolved.smoothing / 2).min(times.len().saturating_sub(1) / 2);
    let span = edge..times.len() - edge;
    let (minima, maxima) = detect_extrema(
        &smoothed[span.clone()],
        &times[span],
        resolved.window,
        prominence,
    )?;
    let shift = |v: Vec<Extremum>| -> Vec<Extremum> {
        v.into_iter()
            .map(|e| Extremum {
                index: e.index + edge,
                ..e
            })
            .collect()
    };
    let (minima, maxima) = (shift(minima), shift(maxima));
    let (collapse_estimate, collapse_note) = match (maxima.first(), timescales.collapse) {
        (Some(first), Some(_)) => (Some(first.time), None),
        (Some(first), None) => (
            Some(first.time),
            Some("system has no collapse time scale; first maximum reported".into()),
        ),
        (None, _) => (
            None,
            Some(Error::Detection("no maximum detected".into()).to_string()),
        ),
    };
    Ok(RevivalReport {
        column: column.to_string(),
        minima: report_extrema(&minima, timescales, &resolved)?,
        maxima: report_extrema(&maxima, timescales, &resolved)?,
        collapse_estimate,
        collapse_note,
        timescales: *timescales,
        detection: resolved,
    })
}

/// One report per diagnostic column.
pub fn analyze(
    series: &DiagnosticSeries,
    timescales: &Timescales,
    params: &DetectionParams,
) -> Result<Vec<RevivalReport>> {
    series.validate()?;
    series
        .columns()
        .into_iter()
        .map(|(name, values)| analyze_column(&name, values, &series.times, timescales, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ts(t_rev: Option<f64>, collapse: Option<f64>) -> Timescales {
        Timescales {
            classical: 0.01,
            revival: t_rev,
            collapse,
            n0: None,
        }
    }

    fn times(n: usize, end: f64) -> Vec<f64> {
        (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn defaults_follow_sampling() {
        let t = times(1001, 1.0);
        let r = DetectionParams::default().resolve(&t, 0.02).unwrap();
        assert_eq!((r.window, r.smoothing, r.q_max), (5, 20, 10));
        assert_eq!(r.prominence, 0.02);
        let r = DetectionParams::default().resolve(&t, 0.004).unwrap();
        assert_eq!((r.window, r.smoothing), (3, 4));
        let bad = DetectionParams {
            q_max: 1,
            ..Default::default()
        };
        assert!(matches!(bad.resolve(&t, 0.02), Err(Error::Config(_))));
    }

    #[test]
    fn slow_envelope_under_fast_oscillation() {
        // envelope minima at 1/4 and 1/2 of T_rev = 1 under an oscillation
        // at the classical period
        let t = times(2001, 0.6);
        let y: Vec<f64> = t
            .iter()
            .map(|t| -(8.0 * PI * t).cos() + 0.3 * (2.0 * PI * t / 0.01).sin())
            .collect();
        let r = analyze_column(
            "x",
            &y,
            &t,
            &ts(Some(1.0), Some(0.1)),
            &DetectionParams::default(),
        )
        .unwrap();
        let fractions: Vec<&str> = r.classified_minima().map(|(f, _)| f).collect();
        assert_eq!(fractions, vec!["1/4", "1/2"]);
        let maxima: Vec<&str> = r
            .maxima
            .iter()
            .filter_map(|e| e.fraction.as_deref())
            .collect();
        assert_eq!(maxima, vec!["1/8", "3/8"]);
        assert!((r.collapse_estimate.unwrap() - 0.125).abs() < 0.002);
    }

    #[test]
    fn constant_series_flags_missing_collapse() {
        let t = times(200, 1.0);
        let r = analyze_column(
            "c",
            &[2.0; 200],
            &t,
            &ts(Some(1.0), Some(0.1)),
            &DetectionParams::default(),
        )
        .unwrap();
        assert!(r.minima.is_empty() && r.maxima.is_empty());
        assert!(r.collapse_estimate.is_none());
        assert!(r.collapse_note.unwrap().contains("no maximum"));
    }

    #[test]
    fn periodic_series_without_collapse_scale_is_flagged() {
        let t = times(400, 1.0);
        let y: Vec<f64> = t.iter().map(|t| (2.0 * PI * t / 0.25).sin()).collect();
        let params = DetectionParams {
            smoothing: Some(1),
            ..Default::default()
        };
        let r = analyze_column("p", &y, &t, &ts(None, None), &params).unwrap();
        assert!((r.collapse_estimate.unwrap() - 0.0625).abs() < 0.003);
        assert!(r.collapse_note.is_some());
        assert!(r
            .minima
            .iter()
            .all(|e| e.fraction.is_none() && e.ratio.is_none()));
    }
}
