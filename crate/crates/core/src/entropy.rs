//! Renyi and Shannon entropies of sampled densities and the entropic
//! uncertainty bound for conjugate orders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::integrate;
use crate::state::Density;

/// Renyi order `alpha` in `(0, inf]`. `1` selects the Shannon entropy and
/// `inf` the min-entropy `-ln max f`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);
    pub const INFINITY: RenyiOrder = RenyiOrder(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::Contract(format!(
                "Renyi order must be positive, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        self.0 == 1.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `-ln(alpha) / (2 (1 - alpha))`, continued to `1/2` at `alpha = 1` and
    /// `0` at infinity. The Gaussian Renyi entropy is `ln(sqrt(2 pi) s)` plus
    /// this term.
    pub fn gaussian_offset(self) -> f64 {
        let a = self.0;
        if a.is_infinite() {
            0.0
        } else if (a - 1.0).abs() < 1e-8 {
            // ln(a)/(a-1) = 1 - (a-1)/2 + ...
            0.5 * (1.0 - 0.5 * (a - 1.0))
        } else {
            -a.ln() / (2.0 * (1.0 - a))
        }
    }

    /// Label used in CSV column names: decimal with at most six digits, or
    /// `inf`.
    pub fn column_label(self) -> String {
        if self.is_infinite() {
            return "inf".into();
        }
        let s = format!("{:.6}", self.0);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

/// Small-denominator rational form, if one matches to round-off.
fn as_fraction(x: f64) -> Option<(u64, u64)> {
    (1..=12u64).find_map(|q| {
        let p = (x * q as f64).round();
        ((p / q as f64 - x).abs() <= 1e-12 * x.max(1.0) && p >= 1.0).then_some((p as u64, q))
    })
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            return f.write_str("inf");
        }
        match as_fraction(self.0) {
            Some((p, 1)) => write!(f, "{p}"),
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{}", self.0),
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse Renyi order {s:?}"));
        let value = match s {
            "inf" | "infinity" | "Infinity" | "∞" => f64::INFINITY,
            _ => match s.split_once('/') {
                Some((p, q)) => {
                    let p: f64 = p.trim().parse().map_err(|_| bad())?;
                    let q: f64 = q.trim().parse().map_err(|_| bad())?;
                    p / q
                }
                None => s.parse().map_err(|_| bad())?,
            },
        };
        RenyiOrder::new(value).map_err(|e| Error::Config(e.to_string()))
    }
}

impl Serialize for RenyiOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RenyiOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => RenyiOrder::new(v).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Orders with `1/alpha + 1/beta = 2`; `alpha` applies to the position
/// density and `beta` to the momentum density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "(RenyiOrder, RenyiOrder)",
    into = "(RenyiOrder, RenyiOrder)"
)]
pub struct ConjugatePair {
    alpha: RenyiOrder,
    beta: RenyiOrder,
}

impl ConjugatePair {
    pub fn new(alpha: RenyiOrder, beta: RenyiOrder) -> Result<Self> {
        let sum = alpha.0.recip() + beta.0.recip();
        if (sum - 2.0).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "orders ({alpha}, {beta}) are not conjugate: 1/alpha + 1/beta = {sum}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Pair completed from `alpha >= 1/2`.
    pub fn from_alpha(alpha: RenyiOrder) -> Result<Self> {
        let a = alpha.0;
        if a < 0.5 {
            return Err(Error::Contract(format!(
                "no conjugate order exists for alpha = {a} < 1/2"
            )));
        }
        let beta = if a == 0.5 {
            f64::INFINITY
        } else if a.is_infinite() {
            0.5
        } else {
            a / (2.0 * a - 1.0)
        };
        Self::new(alpha, RenyiOrder(beta))
    }

    pub fn alpha(&self) -> RenyiOrder {
        self.alpha
    }

    pub fn beta(&self) -> RenyiOrder {
        self.beta
    }

    /// `esum_<alpha>_<beta>`.
    pub fn column_name(&self) -> String {
        format!(
            "esum_{}_{}",
            self.alpha.column_label(),
            self.beta.column_label()
        )
    }
}

impl TryFrom<(RenyiOrder, RenyiOrder)> for ConjugatePair {
    type Error = Error;

    fn try_from((a, b): (RenyiOrder, RenyiOrder)) -> Result<Self> {
        ConjugatePair::new(a, b)
    }
}

impl From<ConjugatePair> for (RenyiOrder, RenyiOrder) {
    fn from(p: ConjugatePair) -> Self {
        (p.alpha, p.beta)
    }
}

impl fmt::Display for ConjugatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Renyi entropy of `d`; Shannon at order 1 and min-entropy at infinity.
pub fn renyi(d: &Density, order: RenyiOrder) -> Result<f64> {
    if order.is_infinite() {
        let max = d.max_value();
        if !(max > 0.0) {
            return Err(Error::Numeric("min-entropy of an all-zero density".into()));
        }
        return Ok(-max.ln());
    }
    if order.is_shannon() {
        let integrand: Vec<f64> = d
            .values()
            .iter()
            .map(|&v| if v > 0.0 { -v * v.ln() } else { 0.0 })
            .collect();
        return integrate(&integrand, d.grid());
    }
    let a = order.0;
    let integrand: Vec<f64> = d.values().iter().map(|v| v.powf(a)).collect();
    let total = integrate(&integrand, d.grid())?;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Numeric(format!(
            "integral of density^{a} is {total:e}; grid too small or order too large"
        )));
    }
    Ok(total.ln() / (1.0 - a))
}

/// Lower bound on `R_rho^(alpha) + R_gamma^(beta)` in units with
/// `hbar = 1`:
/// `-ln(alpha/pi) / (2(1-alpha)) - ln(beta/pi) / (2(1-beta))`.
///
/// Conjugacy makes the `ln pi` parts sum to exactly `ln pi`, which is how
/// the `alpha = 1` and `beta = inf` limits are taken.
pub fn renyi_bound(pair: &ConjugatePair) -> f64 {
    std::f64::consts::PI.ln() + pair.alpha.gaussian_offset() + pair.beta.gaussian_offset()
}

/// [`renyi_bound`] for momentum densities measured in units where
/// `hbar != 1`.
pub fn renyi_bound_with_hbar(pair: &ConjugatePair, hbar: f64) -> f64 {
    renyi_bound(pair) + hbar.ln()
}

/// `R_rho^(alpha) + R_gamma^(beta)`.
pub fn entropy_sum(rho: &Density, gamma: &Density, pair: &ConjugatePair) -> Result<f64> {
    Ok(renyi(rho, pair.alpha)? + renyi(gamma, pair.beta)?)
}
