use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::UniformGrid;
use crate::error::{Error, Result};
use crate::state::{Representation, WaveFunction};

/// Discrete realisation of
/// `phi(p) = (2 pi hbar)^{-1/2} \int psi(x) exp(-i p x / hbar) dx`
/// for a fixed position grid.
///
/// The momentum grid has `dp = 2 pi hbar / (N dx)` and is centred on zero
/// (`p_k = (k - N/2) dp`). The transform is unitary with respect to the
/// `dx`- and `dp`-weighted sums, so `to_position` inverts it exactly.
pub struct MomentumTransform {
    position: UniformGrid,
    momentum: UniformGrid,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    centre_shift: Vec<Complex64>,
    origin_phase: Vec<Complex64>,
    forward_scale: f64,
    inverse_scale: f64,
}

impl MomentumTransform {
    pub fn new(position: UniformGrid, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::Contract(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        let n = position.count();
        let dx = position.step();
        let dp = 2.0 * PI * hbar / (n as f64 * dx);
        let half = n / 2;
        let momentum = UniformGrid::new(-(half as f64) * dp, dp, n)?;

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);

        let centre_shift = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * ((half * j) % n) as f64 / n as f64))
            .collect();
        let x0 = position.start();
        let origin_phase = momentum
            .points()
            .map(|p| Complex64::from_polar(1.0, -p * x0 / hbar))
            .collect();

        Ok(Self {
            position,
            momentum,
            fft,
            ifft,
            centre_shift,
            origin_phase,
            forward_scale: dx / (2.0 * PI * hbar).sqrt(),
            inverse_scale: dp / (2.0 * PI * hbar).sqrt(),
        })
    }

    pub fn position_grid(&self) -> &UniformGrid {
        &self.position
    }

    pub fn momentum_grid(&self) -> &UniformGrid {
        &self.momentum
    }

    /// Momentum amplitudes of position-space samples on this transform's grid.
    pub fn forward(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.position.count() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a transform of size {}",
                amplitudes.len(),
                self.position.count()
            )));
        }
        let mut buf: Vec<Complex64> = amplitudes
            .iter()
            .zip(&self.centre_shift)
            .map(|(a, s)| a * s)
            .collect();
        self.fft.process(&mut buf);
        for (v, ph) in buf.iter_mut().zip(&self.origin_phase) {
            *v *= ph * self.forward_scale;
        }
        Ok(buf)
    }

    pub fn inverse(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.momentum.count() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a transform of size {}",
                amplitudes.len(),
                self.momentum.count()
            )));
        }
        let mut buf: Vec<Complex64> = amplitudes
            .iter()
            .zip(&self.origin_phase)
            .map(|(a, ph)| a * ph.conj())
            .collect();
        self.ifft.process(&mut buf);
        for (v, s) in buf.iter_mut().zip(&self.centre_shift) {
            *v *= s.conj() * self.inverse_scale;
        }
        Ok(buf)
    }

    pub fn to_momentum(&self, wf: &WaveFunction) -> Result<WaveFunction> {
        expect_representation(wf, Representation::Position)?;
        if !wf.grid().matches(&self.position) {
            return Err(Error::Dimension(
                "wave function grid differs from the transform's position grid".into(),
            ));
        }
        let amps = self.forward(wf.amplitudes())?;
        WaveFunction::new(self.momentum, amps, Representation::Momentum)
    }

    pub fn to_position(&self, wf: &WaveFunction) -> Result<WaveFunction> {
        expect_representation(wf, Representation::Momentum)?;
        if !wf.grid().matches(&self.momentum) {
            return Err(Error::Dimension(
                "wave function grid differs from the transform's momentum grid".into(),
            ));
        }
        let amps = self.inverse(wf.amplitudes())?;
        WaveFunction::new(self.position, amps, Representation::Position)
    }
}

fn expect_representation(wf: &WaveFunction, want: Representation) -> Result<()> {
    if wf.representation() != want {
        return Err(Error::Contract(format!(
            "expected a {want:?}-space wave function, got {:?}",
            wf.representation()
        )));
    }
    Ok(())
}

/// Fourier transform of a position-space wave function.
///
/// For repeated transforms on one grid build a [`MomentumTransform`] once.
pub fn to_momentum(wf: &WaveFunction, hbar: f64) -> Result<WaveFunction> {
    MomentumTransform::new(*wf.grid(), hbar)?.to_momentum(wf)
}

/// Inverse of [`to_momentum`]; `position` is the grid the momentum grid was
/// derived from.
pub fn to_position(wf: &WaveFunction, position: &UniformGrid, hbar: f64) -> Result<WaveFunction> {
    MomentumTransform::new(*position, hbar)?.to_position(wf)
}

/// Extends a position-space wave function with zeros to `count` points.
pub fn zero_pad(wf: &WaveFunction, count: usize) -> Result<WaveFunction> {
    let grid = wf.grid();
    if count < grid.count() {
        return Err(Error::Contract(format!(
            "cannot pad {} points down to {count}",
            grid.count()
        )));
    }
    let mut amps = wf.amplitudes().to_vec();
    amps.resize(count, Complex64::new(0.0, 0.0));
    WaveFunction::new(
        UniformGrid::new(grid.start(), grid.step(), count)?,
        amps,
        wf.representation(),
    )
}
