use num_complex::Complex64;
use rayon::prelude::*;

use crate::entropy::{renyi, renyi_bound_with_hbar, ConjugatePair, RenyiOrder};
use crate::error::{Error, Result};
use crate::state::{autocorrelation, density, moments, WaveFunction};
use crate::systems::Propagator;

/// Minimum number of samples per classical period accepted by
/// [`run_diagnostics`].
pub const MIN_SAMPLES_PER_PERIOD: f64 = 6.0;

/// Diagnostics sampled over time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub times: Vec<f64>,
    pub autocorr_sq: Vec<f64>,
    pub uncertainty_product: Vec<f64>,
    pub entropy_sums: Vec<(ConjugatePair, Vec<f64>)>,
    /// Position entropies `R_rho^(alpha)` per distinct `alpha`, when requested.
    pub position_entropies: Vec<(RenyiOrder, Vec<f64>)>,
    /// Momentum entropies `R_gamma^(beta)` per distinct `beta`, when requested.
    pub momentum_entropies: Vec<(RenyiOrder, Vec<f64>)>,
    /// `hbar` of the run, needed for the entropic bound.
    pub hbar: f64,
}

impl DiagnosticSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Checks lengths and strict ordering of the times.
    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        let lengths = [self.autocorr_sq.len(), self.uncertainty_product.len()]
            .into_iter()
            .chain(self.entropy_sums.iter().map(|(_, v)| v.len()))
            .chain(self.position_entropies.iter().map(|(_, v)| v.len()))
            .chain(self.momentum_entropies.iter().map(|(_, v)| v.len()));
        for len in lengths {
            if len != n {
                return Err(Error::Dimension(format!(
                    "series of length {len} beside {n} times"
                )));
            }
        }
        check_times(&self.times)
    }

    /// Named columns in output order: `autocorr_sq`, `dxdp`, the entropy
    /// sums, then any component entropies as `rrho_<alpha>` and
    /// `rgamma_<beta>`.
    pub fn columns(&self) -> Vec<(String, &[f64])> {
        let mut out: Vec<(String, &[f64])> = vec![
            ("autocorr_sq".into(), &self.autocorr_sq),
            ("dxdp".into(), &self.uncertainty_product),
        ];
        out.extend(
            self.entropy_sums
                .iter()
                .map(|(p, v)| (p.column_name(), v.as_slice())),
        );
        out.extend(
            self.position_entropies
                .iter()
                .map(|(o, v)| (format!("rrho_{}", o.column_label()), v.as_slice())),
        );
        out.extend(
            self.momentum_entropies
                .iter()
                .map(|(o, v)| (format!("rgamma_{}", o.column_label()), v.as_slice())),
        );
        out
    }

    /// Smallest `entropy_sum - bound` over all pairs and times.
    pub fn worst_bound_margin(&self) -> f64 {
        self.entropy_sums
            .iter()
            .flat_map(|(pair, v)| {
                let bound = renyi_bound_with_hbar(pair, self.hbar);
                v.iter().map(move |s| s - bound)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Contract("non-finite sample time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract(
            "sample times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `count` equally spaced times on `[start, end]`.
pub fn time_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(end > start) {
        return Err(Error::Config(format!(
            "time span [{start}, {end}] with {count} samples is empty"
        )));
    }
    let dt = (end - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + i as f64 * dt).collect())
}

struct Sample {
    autocorr_sq: f64,
    uncertainty_product: f64,
    position: Vec<f64>,
    momentum: Vec<f64>,
}

fn distinct(orders: impl Iterator<Item = RenyiOrder>) -> Vec<RenyiOrder> {
    let mut out: Vec<RenyiOrder> = Vec::new();
    for o in orders {
        if !out.contains(&o) {
            out.push(o);
        }
    }
    out
}

fn sample(
    prop: &dyn Propagator,
    psi0: &WaveFunction,
    t: f64,
    alphas: &[RenyiOrder],
    betas: &[RenyiOrder],
) -> Result<Sample> {
    let snap = prop.evolve(t)?;
    let a: Complex64 = autocorrelation(&snap.position, psi0)?;
    let rho = density(&snap.position);
    let gamma = density(&snap.momentum);
    let dx = moments(&rho)?.std_dev();
    let dp = moments(&gamma)?.std_dev();
    Ok(Sample {
        autocorr_sq: a.norm_sqr(),
        uncertainty_product: dx * dp,
        position: alphas
            .iter()
            .map(|&o| renyi(&rho, o))
            .collect::<Result<_>>()?,
        momentum: betas
            .iter()
            .map(|&o| renyi(&gamma, o))
            .collect::<Result<_>>()?,
    })
}

/// Evolves the propagator's state to every time, in parallel, and records
/// `|A|^2`, `dx dp` and `R_rho^(alpha) + R_gamma^(beta)` for each pair.
/// With `components` the individual entropies are kept as well.
pub fn run_diagnostics(
    prop: &dyn Propagator,
    times: &[f64],
    pairs: &[ConjugatePair],
    components: bool,
) -> Result<DiagnosticSeries> {
    if times.len() < 2 {
        return Err(Error::Contract("need at least two sample times".into()));
    }
    check_times(times)?;
    let period = prop.timescales().classical;
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if period / dt < MIN_SAMPLES_PER_PERIOD * (1.0 - 1e-9) {
        return Err(Error::Contract(format!(
            "{:.2} samples per classical period; at least {MIN_SAMPLES_PER_PERIOD} needed",
            period / dt
        )));
    }
    let alphas = distinct(pairs.iter().map(|p| p.alpha()));
    let betas = distinct(pairs.iter().map(|p| p.beta()));
    let psi0 = prop.evolve(0.0).map_err(|e| e.at_time(0.0))?.position;

    let samples: Vec<Sample> = times
        .par_iter()
        .map(|&t| sample(prop, &psi0, t, &alphas, &betas).map_err(|e| e.at_time(t)))
        .collect::<Result<_>>()?;

    let column = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).collect::<Vec<f64>>();
    let entropy_sums = pairs
        .iter()
        .map(|p| {
            let ia = alphas
                .iter()
                .position(|&o| o == p.alpha())
                .expect("collected above");
            let ib = betas
                .iter()
                .position(|&o| o == p.beta())
                .expect("collected above");
            (*p, column(&|s| s.position[ia] + s.momentum[ib]))
        })
        .collect();
    let (position_entropies, momentum_entropies) = if components {
        (
            alphas
                .iter()
                .enumerate()
                .map(|(i, &o)| (o, column(&|s| s.position[i])))
                .collect(),
            betas
                .iter()
                .enumerate()
                .map(|(i, &o)| (o, column(&|s| s.momentum[i])))
                .collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(DiagnosticSeries {
        times: times.to_vec(),
        autocorr_sq: column(&|s| s.autocorr_sq),
        uncertainty_product: column(&|s| s.uncertainty_product),
        entropy_sums,
        position_entropies,
        momentum_entropies,
        hbar: prop.hbar(),
    })
}
