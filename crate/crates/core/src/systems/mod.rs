//! The three model systems, their initial Gaussian packets, time evolution
//! and characteristic time scales.
//!
//! The well and the bouncer are evolved in their eigenbases; the oscillator
//! uses the closed-form Gaussian solution. Each system also provides a
//! [`Propagator`], which caches grids and basis tables so that many time
//! samples can be evaluated cheaply and concurrently.

mod bouncer;
mod expansion;
mod oscillator;
mod well;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::UniformGrid;
use crate::state::{Representation, WaveFunction};

pub use bouncer::{
    bouncer_coefficients, bouncer_evolve, bouncer_momentum, BouncerPropagator, BouncerSystem,
    BOUNCER_MAX_STEP, BOUNCER_PAD_FACTOR,
};
pub use expansion::{Basis, EigenExpansion};
pub use oscillator::{
    sho_evolve, sho_momentum, sho_renyi_analytic, sho_uncertainties, OscillatorPropagator,
    OscillatorSystem,
};
pub use well::{
    momentum_eigenfunction, well_coefficients, well_coefficients_truncated, well_evolve,
    well_expansion, WellPropagator, WellSystem, SINGULARITY_WINDOW,
};

/// Relative cut below which eigen-expansion terms are not evolved.
pub const TRIM_RELATIVE: f64 = 1e-15;

/// Initial state
/// `psi(x, 0) = (sigma sqrt(pi))^{-1/2} exp(i p0 x / hbar) exp(-(x - x0)^2 / (2 sigma^2))`.
/// For the bouncer `x0` is the drop height `z0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub x0: f64,
    pub p0: f64,
    pub sigma: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, p0: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Contract(format!(
                "packet width must be positive, got {sigma}"
            )));
        }
        if !(x0.is_finite() && p0.is_finite()) {
            return Err(Error::Contract(
                "packet centre and momentum must be finite".into(),
            ));
        }
        Ok(Self { x0, p0, sigma })
    }

    pub fn amplitude(&self, x: f64, hbar: f64) -> Complex64 {
        let norm = (self.sigma * std::f64::consts::PI.sqrt()).powf(-0.5);
        let u = (x - self.x0) / self.sigma;
        Complex64::from_polar(norm * (-0.5 * u * u).exp(), self.p0 * x / hbar)
    }

    pub fn wave_function(&self, grid: &UniformGrid, hbar: f64) -> Result<WaveFunction> {
        let amps = grid.points().map(|x| self.amplitude(x, hbar)).collect();
        WaveFunction::new(*grid, amps, Representation::Position)
    }
}

/// System descriptor.
#[derive(Debug, Clone)]
pub enum System {
    Oscillator(OscillatorSystem),
    Well(WellSystem),
    Bouncer(BouncerSystem),
}

impl System {
    pub fn hbar(&self) -> f64 {
        match self {
            System::Oscillator(s) => s.hbar,
            System::Well(s) => s.hbar,
            System::Bouncer(_) => 1.0,
        }
    }
}

/// Classical period, revival time and collapse time. The oscillator has
/// neither revivals nor collapse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timescales {
    pub classical: f64,
    pub revival: Option<f64>,
    pub collapse: Option<f64>,
    /// Quantum number the packet is centred on, where meaningful.
    pub n0: Option<usize>,
}

pub fn timescales(system: &System, packet: &GaussianPacket) -> Timescales {
    match system {
        System::Oscillator(s) => Timescales {
            classical: 2.0 * std::f64::consts::PI / s.omega,
            revival: None,
            collapse: None,
            n0: None,
        },
        System::Well(s) => s.timescales(packet),
        System::Bouncer(_) => BouncerSystem::timescales(packet),
    }
}

/// Position and momentum wave functions at one time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub position: WaveFunction,
    pub momentum: WaveFunction,
}

/// Evaluates a fixed initial state at arbitrary times on fixed grids.
pub trait Propagator: Sync {
    fn hbar(&self) -> f64;

    fn position_grid(&self) -> &UniformGrid;

    fn momentum_grid(&self) -> &UniformGrid;

    fn timescales(&self) -> Timescales;

    fn evolve(&self, t: f64) -> Result<Snapshot>;
}

/// Propagator for `packet` in `system`, with default grids.
pub fn propagator(system: &System, packet: &GaussianPacket) -> Result<Box<dyn Propagator>> {
    Ok(match system {
        System::Oscillator(s) => Box::new(OscillatorPropagator::new(*s, *packet)?),
        System::Well(s) => Box::new(WellPropagator::new(s, packet)?),
        System::Bouncer(s) => Box::new(BouncerPropagator::new(s, packet)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;
    use std::f64::consts::PI;

    #[test]
    fn packet_is_normalised() {
        let p = GaussianPacket::new(0.3, 12.0, 0.05).unwrap();
        let g = UniformGrid::spanning(-0.5, 1.0, 6001).unwrap();
        let wf = p.wave_function(&g, 1.0).unwrap();
        assert!((wf.norm_sqr().unwrap() - 1.0).abs() < 1e-12);
        let phase = (p.amplitude(0.31, 1.0) / p.amplitude(0.30, 1.0)).arg();
        assert!((phase - 0.12).abs() < 1e-12);
        assert!(GaussianPacket::new(0.0, 0.0, 0.0).is_err());
        assert!(GaussianPacket::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn timescale_values() {
        let well = WellSystem::new(0.5, 1.0, 1.0, 300, 500).unwrap();
        let packet = GaussianPacket::new(0.5, 400.0 * PI, 2f64.sqrt() / 20.0).unwrap();
        let ts = timescales(&System::Well(well), &packet);
        assert!((ts.classical - 1.0 / (400.0 * PI)).abs() < 1e-15);
        assert!((ts.classical - 7.9577e-4).abs() < 1e-8);
        assert!((ts.revival.unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!((ts.revival.unwrap() - 0.63662).abs() < 1e-5);
        assert!((ts.collapse.unwrap() - 0.01443).abs() < 1e-5);
        assert_eq!(ts.n0, Some(400));

        let bouncer = BouncerSystem::new(300).unwrap();
        let packet = GaussianPacket::new(100.0, 0.0, 1.0).unwrap();
        let ts = timescales(&System::Bouncer(bouncer), &packet);
        assert!((ts.classical - 20.0).abs() < 1e-12);
        assert!((ts.revival.unwrap() - 12732.395).abs() < 1e-3);
        assert!((ts.collapse.unwrap() - 1414.21).abs() < 1e-2);
        assert_eq!(ts.n0, Some(212));

        let sho = OscillatorSystem::new(1.0, 1.0, 1.0).unwrap();
        let ts = timescales(&System::Oscillator(sho), &packet);
        assert_eq!(ts.classical, 2.0 * PI);
        assert!(ts.revival.is_none() && ts.collapse.is_none());
    }

    #[test]
    fn propagators_conserve_norm() {
        let cases: Vec<(System, GaussianPacket, f64)> = vec![
            (
                System::Oscillator(OscillatorSystem::new(1.0, 1.0, 1.0).unwrap()),
                GaussianPacket::new(2.0, 0.5, 1.7).unwrap(),
                2.3,
            ),
            (
                System::Well(WellSystem::new(0.5, 1.0, 1.0, 1, 120).unwrap()),
                GaussianPacket::new(0.4, 60.0 * PI, 0.06).unwrap(),
                0.0371,
            ),
        ];
        for (sys, packet, t) in cases {
            let prop = propagator(&sys, &packet).unwrap();
            for time in [0.0, t, 3.1 * t] {
                let s = prop.evolve(time).unwrap();
                let rho: Vec<f64> = s
                    .position
                    .amplitudes()
                    .iter()
                    .map(|a| a.norm_sqr())
                    .collect();
                let gamma: Vec<f64> = s
                    .momentum
                    .amplitudes()
                    .iter()
                    .map(|a| a.norm_sqr())
                    .collect();
                assert!((integrate(&rho, prop.position_grid()).unwrap() - 1.0).abs() < 1e-5);
                assert!((integrate(&gamma, prop.momentum_grid()).unwrap() - 1.0).abs() < 1e-5);
            }
        }
    }
}
