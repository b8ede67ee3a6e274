use serde::{Deserialize, Serialize};

use crate::entropy::{ConjugatePair, RenyiOrder};
use crate::error::{Error, Result};
use crate::revivals::{time_grid, DetectionParams};
use crate::systems::{
    timescales, BouncerSystem, GaussianPacket, OscillatorSystem, System, Timescales, WellSystem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Sho,
    Well,
    Bouncer,
}

/// Unit of `t_start` / `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    /// Plain time in the system's units.
    #[default]
    Absolute,
    /// Multiples of the revival time.
    Revival,
    /// Multiples of the classical period.
    Classical,
}

/// A run, as one flat JSON object. Unset system parameters take the
/// scaled-unit defaults: `m = omega = hbar = 1` for the oscillator,
/// `m = 1/2, L = hbar = 1` for the well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,

    pub x0: f64,
    #[serde(default)]
    pub p0: f64,
    pub sigma: f64,

    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default)]
    pub time_unit: TimeUnit,
    pub samples: usize,

    pub pairs: Vec<ConjugatePair>,
    /// Also write the individual position and momentum entropies.
    #[serde(default)]
    pub components: bool,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prominence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A configuration error tied to one field, so the CLI can point at the
/// line holding it.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

impl FieldError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }

    fn from_error(field: &'static str, e: Error) -> Self {
        match e {
            Error::Config(m) | Error::Contract(m) => Self::new(field, m),
            other => Self::new(field, other.to_string()),
        }
    }
}

/// Everything a validated configuration resolves to.
#[derive(Debug, Clone)]
pub struct Plan {
    pub system: System,
    pub packet: GaussianPacket,
    pub timescales: Timescales,
    pub times: Vec<f64>,
    pub pairs: Vec<ConjugatePair>,
    pub components: bool,
    pub detection: DetectionParams,
}

fn positive(
    field: &'static str,
    v: Option<f64>,
    default: f64,
) -> std::result::Result<f64, FieldError> {
    let v = v.unwrap_or(default);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(FieldError::new(field, format!("must be positive, got {v}")))
    }
}

fn unused(config: &RunConfig, fields: &[&'static str]) -> std::result::Result<(), FieldError> {
    for &f in fields {
        let set = match f {
            "omega" => config.omega.is_some(),
            "length" => config.length.is_some(),
            "n_min" => config.n_min.is_some(),
            "n_max" => config.n_max.is_some(),
            "m" => config.m.is_some(),
            "hbar" => config.hbar.is_some(),
            _ => false,
        };
        if set {
            return Err(FieldError::new(
                f,
                format!("not a parameter of the {:?} system", config.system),
            ));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn detection(&self) -> DetectionParams {
        let d = DetectionParams::default();
        DetectionParams {
            window: self.window,
            prominence: self.prominence,
            smoothing: self.smoothing,
            q_max: self.q_max.unwrap_or(d.q_max),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
        }
    }

    /// Checks every field against the target system's preconditions and
    /// builds the run.
    pub fn plan(&self) -> std::result::Result<Plan, FieldError> {
        let packet = GaussianPacket::new(self.x0, self.p0, self.sigma)
            .map_err(|e| FieldError::from_error("sigma", e))?;
        let system = match self.system {
            SystemKind::Sho => {
                unused(self, &["length", "n_min", "n_max"])?;
                System::Oscillator(
                    OscillatorSystem::new(
                        positive("m", self.m, 1.0)?,
                        positive("omega", self.omega, 1.0)?,
                        positive("hbar", self.hbar, 1.0)?,
                    )
                    .map_err(|e| FieldError::from_error("m", e))?,
                )
            }
            SystemKind::Well => {
                unused(self, &["omega"])?;
                let m = positive("m", self.m, 0.5)?;
                let length = positive("length", self.length, 1.0)?;
                let hbar = positive("hbar", self.hbar, 1.0)?;
                if !(self.x0 > 0.0 && self.x0 < length) {
                    return Err(FieldError::new(
                        "x0",
                        "packet centre must lie inside (0, length)",
                    ));
                }
                let around = WellSystem::around(m, length, hbar, &packet)
                    .map_err(|e| FieldError::from_error("length", e))?;
                let n_min = self.n_min.unwrap_or(around.n_min);
                let n_max = self.n_max.unwrap_or(around.n_max);
                System::Well(
                    WellSystem::new(m, length, hbar, n_min, n_max)
                        .map_err(|e| FieldError::from_error("n_min", e))?,
                )
            }
            SystemKind::Bouncer => {
                unused(self, &["omega", "length", "n_min", "m", "hbar"])?;
                if self.p0 != 0.0 {
                    return Err(FieldError::new(
                        "p0",
                        "bouncer packets start at rest (p0 = 0)",
                    ));
                }
                if self.x0 < 5.0 * self.sigma {
                    return Err(FieldError::new(
                        "x0",
                        "packet must start at least 5 sigma above the floor",
                    ));
                }
                let sys = match self.n_max {
                    Some(n) if n >= 1 => BouncerSystem::new(n),
                    Some(_) => return Err(FieldError::new("n_max", "must be at least 1")),
                    None => BouncerSystem::for_packet(&packet),
                };
                System::Bouncer(sys.map_err(|e| FieldError::from_error("n_max", e))?)
            }
        };
        let ts = timescales(&system, &packet);
        let unit = match self.time_unit {
            TimeUnit::Absolute => 1.0,
            TimeUnit::Classical => ts.classical,
            TimeUnit::Revival => ts
                .revival
                .ok_or_else(|| FieldError::new("time_unit", "this system has no revival time"))?,
        };
        if !(self.t_start.is_finite() && self.t_start >= 0.0) {
            return Err(FieldError::new(
                "t_start",
                "must be finite and non-negative",
            ));
        }
        let times = time_grid(self.t_start * unit, self.t_end * unit, self.samples)
            .map_err(|e| FieldError::from_error("t_end", e))?;
        if self.pairs.is_empty() {
            return Err(FieldError::new(
                "pairs",
                "at least one conjugate pair is required",
            ));
        }
        let detection = self.detection();
        detection.validate().map_err(|e| {
            let field = if self.q_max.is_some_and(|q| q < 2) {
                "q_max"
            } else if self.tolerance.is_some() {
                "tolerance"
            } else {
                "window"
            };
            FieldError::from_error(field, e)
        })?;
        Ok(Plan {
            system,
            packet,
            timescales: ts,
            times,
            pairs: self.pairs.clone(),
            components: self.components,
            detection,
        })
    }
}

/// Parses and validates a configuration document; errors name the line of
/// the offending field.
pub fn parse_config(text: &str, origin: &str) -> Result<(RunConfig, Plan)> {
    let config: RunConfig = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
    let plan = config.plan().map_err(|e| {
        Error::Config(format!(
            "{origin}:{}: {}: {}",
            field_line(text, e.field),
            e.field,
            e.message
        ))
    })?;
    Ok((config, plan))
}

/// 1-based line of `"field"` in `text`, or 1 when absent.
fn field_line(text: &str, field: &str) -> usize {
    let key = format!("\"{field}\"");
    text.lines()
        .position(|l| l.contains(&key))
        .map_or(1, |i| i + 1)
}

pub(crate) fn pair(a: &str, b: &str) -> ConjugatePair {
    ConjugatePair::new(
        a.parse::<RenyiOrder>().expect("valid order"),
        b.parse().expect("valid order"),
    )
    .expect("conjugate")
}
