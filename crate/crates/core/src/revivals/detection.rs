use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A detected relative extremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub time: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Interior relative extrema.
///
/// Index `i` is a minimum when `series[i]` is strictly below every other
/// value within `i +- window` (the whole window lying inside the series) and
/// its depth below the lower of the two bounding maxima exceeds
/// `prominence`. The bounding maximum on each side is the largest value
/// between `i` and the nearest lower sample on that side (or the series
/// end). Maxima are defined symmetrically.
pub fn detect_extrema(
    series: &[f64],
    times: &[f64],
    window: usize,
    prominence: f64,
) -> Result<(Vec<Extremum>, Vec<Extremum>)> {
    if window < 1 || !(prominence >= 0.0) {
        return Err(Error::Contract(format!(
            "window {window} must be >= 1 and prominence {prominence} >= 0"
        )));
    }
    if series.len() != times.len() {
        return Err(Error::Dimension(format!(
            "{} values beside {} times",
            series.len(),
            times.len()
        )));
    }
    if series.len() < 2 * window + 1 {
        return Err(Error::Contract(format!(
            "series of {} samples is shorter than 2 * window + 1 = {}",
            series.len(),
            2 * window + 1
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("series contains non-finite values".into()));
    }
    let negated: Vec<f64> = series.iter().map(|v| -v).collect();
    let minima = peaks(&negated, times, window, prominence)
        .into_iter()
        .map(|e| Extremum {
            value: -e.value,
            ..e
        })
        .collect();
    let maxima = peaks(series, times, window, prominence);
    Ok((minima, maxima))
}

fn peaks(x: &[f64], times: &[f64], window: usize, prominence: f64) -> Vec<Extremum> {
    let n = x.len();
    let mut out = Vec::new();
    for i in window..n - window {
        let strict = (i - window..=i + window).all(|j| j == i || x[j] < x[i]);
        if !strict {
            continue;
        }
        let p = topographic_prominence(x, i);
        if p > prominence {
            out.push(Extremum {
                index: i,
                time: times[i],
                value: x[i],
                prominence: p,
            });
        }
    }
    out
}

/// Height of peak `i` above the higher of its two bases.
fn topographic_prominence(x: &[f64], i: usize) -> f64 {
    let side = |range: &mut dyn Iterator<Item = usize>| {
        let mut lowest = x[i];
        for j in range {
            if x[j] > x[i] {
                break;
            }
            lowest = lowest.min(x[j]);
        }
        lowest
    };
    let left = side(&mut (0..i).rev());
    let right = side(&mut (i + 1..x.len()));
    x[i] - left.max(right)
}

/// Centred moving average spanning `width` sample intervals. An even
/// width averages over exactly `width` intervals (half weights at the two
/// ends); near the series ends the window shrinks symmetrically.
pub fn smooth(series: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    if half == 0 {
        return series.to_vec();
    }
    let n = series.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in series {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            let sum = prefix[i + h + 1] - prefix[i - h];
            if h == half && width % 2 == 0 {
                (sum - 0.5 * (series[i - h] + series[i + h])) / width as f64
            } else {
                sum / (2 * h + 1) as f64
            }
        })
        .collect()
}

/// Nearest rational `p/q` with `q <= q_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub p: u64,
    pub q: u64,
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A time matched to `p/q` of the revival time; `residual` is
/// `|t - (p/q) T_rev|` in time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub fraction: Fraction,
    pub residual: f64,
}

fn nearest_fraction(ratio: f64, q_max: u64) -> (Fraction, f64) {
    let mut best = (Fraction { p: 0, q: 1 }, f64::INFINITY);
    for q in 1..=q_max {
        let scaled = ratio * q as f64;
        for p in [scaled.floor(), scaled.ceil()] {
            if p < 0.0 {
                continue;
            }
            let d = (ratio - p / q as f64).abs();
            // equal residuals keep the earlier, smaller denominator
            if d < best.1 - 1e-12 {
                best = (Fraction { p: p as u64, q }, d);
            }
        }
    }
    best
}

/// Nearest fraction of `t_rev` for each time, or `None` when the residual
/// exceeds `tolerance` (time units).
pub fn classify_fractions(
    times: &[f64],
    t_rev: f64,
    q_max: u64,
    tolerance: f64,
) -> Result<Vec<Option<Classification>>> {
    if !(t_rev > 0.0) || q_max < 2 {
        return Err(Error::Contract(format!(
            "classification needs T_rev > 0 and q_max >= 2 (got {t_rev}, {q_max})"
        )));
    }
    Ok(times
        .iter()
        .map(|&t| {
            let (fraction, d) = nearest_fraction(t / t_rev, q_max);
            let residual = d * t_rev;
            (residual <= tolerance).then_some(Classification { fraction, residual })
        })
        .collect())
}

/// Time of the first detected maximum.
pub fn collapse_estimate(
    series: &[f64],
    times: &[f64],
    window: usize,
    prominence: f64,
) -> Result<f64> {
    let (_, maxima) = detect_extrema(series, times, window, prominence)?;
    maxima
        .first()
        .map(|e| e.time)
        .ok_or_else(|| Error::Detection("no maximum detected".into()))
}
