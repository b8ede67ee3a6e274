use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GaussianPacket, Propagator, Snapshot, Timescales};
use crate::entropy::RenyiOrder;
use crate::error::{Error, Result};
use crate::numerics::UniformGrid;
use crate::state::{Representation, WaveFunction};

/// Harmonic oscillator `V = m omega^2 x^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSystem {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorSystem {
    pub fn new(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Contract(format!(
                    "oscillator {name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self { m, omega, hbar })
    }

    /// Width `sqrt(hbar / (m omega))` of the coherent state.
    pub fn coherent_width(&self) -> f64 {
        (self.hbar / (self.m * self.omega)).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `L(t) = sigma cos(omega t) + i hbar sin(omega t) / (m omega sigma)`.
    pub fn l_factor(&self, packet: &GaussianPacket, t: f64) -> Complex64 {
        let (s, c) = (self.omega * t).sin_cos();
        Complex64::new(
            packet.sigma * c,
            self.hbar * s / (self.m * self.omega * packet.sigma),
        )
    }

    /// Position-space grid over the packet's full excursion, fine enough
    /// that the grid maximum of the density is within `1e-7` (relative) of
    /// the true maximum.
    pub fn position_grid(&self, packet: &GaussianPacket) -> Result<UniformGrid> {
        let mw = self.m * self.omega;
        let amplitude = packet.x0.hypot(packet.p0 / mw);
        let (lo, hi) = minmax(packet.sigma, self.hbar / (mw * packet.sigma));
        symmetric_grid(amplitude, lo / 2f64.sqrt(), hi / 2f64.sqrt())
    }

    /// Momentum-space counterpart of [`OscillatorSystem::position_grid`].
    pub fn momentum_grid(&self, packet: &GaussianPacket) -> Result<UniformGrid> {
        let mw = self.m * self.omega;
        let amplitude = packet.p0.hypot(mw * packet.x0);
        let (lo, hi) = minmax(self.hbar / packet.sigma, mw * packet.sigma);
        symmetric_grid(amplitude, lo / 2f64.sqrt(), hi / 2f64.sqrt())
    }
}

/// Odd grid symmetric about zero covering `amplitude + 12 widest` with
/// step `narrowest / 1000`.
fn symmetric_grid(amplitude: f64, narrowest: f64, widest: f64) -> Result<UniformGrid> {
    let half = amplitude + 12.0 * widest;
    let step = narrowest / 1000.0;
    let n = (half / step).ceil() as usize;
    if n > 1 << 21 {
        return Err(Error::GridConfig(format!(
            "oscillator grid would need {} points; width ratio too extreme",
            2 * n + 1
        )));
    }
    UniformGrid::new(-(n as f64) * step, step, 2 * n + 1)
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    (a.min(b), a.max(b))
}

/// Closed-form Gaussian evolution,
/// `psi = (|L| sqrt(pi))^{-1/2} exp(S(x, t) / (2 sigma L))`, renormalised on
/// `grid`.
pub fn sho_evolve(
    sys: &OscillatorSystem,
    packet: &GaussianPacket,
    t: f64,
    grid: &UniformGrid,
) -> Result<WaveFunction> {
    let g = ComplexGaussian::at(sys, packet, t);
    let amps = grid.points().map(|x| g.position(x)).collect();
    renormalised(WaveFunction::new(*grid, amps, Representation::Position)?)
}

/// Momentum-space wave function at time `t`, the exact transform of
/// [`sho_evolve`]'s closed form, renormalised on `grid`.
pub fn sho_momentum(
    sys: &OscillatorSystem,
    packet: &GaussianPacket,
    t: f64,
    grid: &UniformGrid,
) -> Result<WaveFunction> {
    let g = ComplexGaussian::at(sys, packet, t);
    let amps = grid.points().map(|p| g.momentum(p, sys.hbar)).collect();
    renormalised(WaveFunction::new(*grid, amps, Representation::Momentum)?)
}

fn renormalised(wf: WaveFunction) -> Result<WaveFunction> {
    let (wf, scale) = wf.normalized()?;
    if (scale - 1.0).abs() > 1e-3 {
        return Err(Error::DomainCoverage(format!(
            "oscillator packet renormalised by {scale}; widen the grid"
        )));
    }
    Ok(wf)
}

/// `norm * exp(a x^2 + b x + c)`.
struct ComplexGaussian {
    norm: f64,
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl ComplexGaussian {
    /// `psi = (|L| sqrt(pi))^{-1/2} exp(S(x, t) / (2 sigma L))`.
    fn at(sys: &OscillatorSystem, packet: &GaussianPacket, t: f64) -> Self {
        let (sn, cs) = (sys.omega * t).sin_cos();
        let mw = sys.m * sys.omega;
        let (x0, p0, s, hb) = (packet.x0, packet.p0, packet.sigma, sys.hbar);
        let l = sys.l_factor(packet, t);
        let i = Complex64::i();
        let denom = 2.0 * s * l;
        Self {
            norm: (l.norm() * PI.sqrt()).powf(-0.5),
            a: -(cs + i * mw * s * s * sn / hb) / denom,
            b: 2.0 * (x0 + i * s * s * p0 / hb) / denom,
            c: (-x0 * x0 * cs - 2.0 * x0 * p0 * sn / mw - i * s * s * p0 * p0 * sn / (mw * hb))
                / denom,
        }
    }

    fn position(&self, x: f64) -> Complex64 {
        self.norm * (self.a * x * x + self.b * x + self.c).exp()
    }

    /// `(2 pi hbar)^{-1/2} \int psi(x) exp(-i p x / hbar) dx`.
    fn momentum(&self, p: f64, hbar: f64) -> Complex64 {
        let k = self.b - Complex64::i() * p / hbar;
        let gauss = (PI / -self.a).sqrt();
        self.norm / (2.0 * PI * hbar).sqrt() * gauss * (self.c - k * k / (4.0 * self.a)).exp()
    }
}

/// `(dx, dp)` at time `t`.
pub fn sho_uncertainties(sys: &OscillatorSystem, packet: &GaussianPacket, t: f64) -> (f64, f64) {
    let (sn, cs) = (sys.omega * t).sin_cos();
    let dx = sys.l_factor(packet, t).norm() / 2f64.sqrt();
    let a = sys.hbar / packet.sigma * cs;
    let b = sys.m * sys.omega * packet.sigma * sn;
    let dp = ((a * a + b * b) / 2.0).sqrt();
    (dx, dp)
}

/// Renyi entropy of the position density, `ln(sqrt(pi) |L|)` plus the
/// Gaussian order term, or of the momentum density,
/// `ln(sqrt(pi) hbar / |L|)` plus the same term.
///
/// The momentum form describes a Gaussian of width `hbar / (sqrt 2 |L|)`,
/// which is the true momentum width only at multiples of a quarter period
/// (or for coherent states).
pub fn sho_renyi_analytic(
    sys: &OscillatorSystem,
    packet: &GaussianPacket,
    order: RenyiOrder,
    t: f64,
    space: Representation,
) -> f64 {
    let l = sys.l_factor(packet, t).norm();
    let spread = match space {
        Representation::Position => PI.sqrt() * l,
        Representation::Momentum => PI.sqrt() * sys.hbar / l,
    };
    spread.ln() + order.gaussian_offset()
}

/// Closed-form oscillator evolution in both representations.
pub struct OscillatorPropagator {
    sys: OscillatorSystem,
    packet: GaussianPacket,
    position: UniformGrid,
    momentum: UniformGrid,
}

impl OscillatorPropagator {
    pub fn new(sys: OscillatorSystem, packet: GaussianPacket) -> Result<Self> {
        Ok(Self {
            sys,
            packet,
            position: sys.position_grid(&packet)?,
            momentum: sys.momentum_grid(&packet)?,
        })
    }
}

impl Propagator for OscillatorPropagator {
    fn hbar(&self) -> f64 {
        self.sys.hbar
    }

    fn position_grid(&self) -> &UniformGrid {
        &self.position
    }

    fn momentum_grid(&self) -> &UniformGrid {
        &self.momentum
    }

    fn timescales(&self) -> Timescales {
        Timescales {
            classical: self.sys.period(),
            revival: None,
            collapse: None,
            n0: None,
        }
    }

    fn evolve(&self, t: f64) -> Result<Snapshot> {
        let position = sho_evolve(&self.sys, &self.packet, t, &self.position)?;
        let momentum = sho_momentum(&self.sys, &self.packet, t, &self.momentum)?;
        Ok(Snapshot { position, momentum })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::renyi;
    use crate::state::{density, moments};

    fn unit() -> OscillatorSystem {
        OscillatorSystem::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn initial_packet_is_reproduced() {
        let sys = OscillatorSystem::new(2.0, 0.7, 1.3).unwrap();
        let packet = GaussianPacket::new(1.5, -0.8, 0.9).unwrap();
        let grid = sys.position_grid(&packet).unwrap();
        let wf = sho_evolve(&sys, &packet, 0.0, &grid).unwrap();
        for (x, a) in grid.points().zip(wf.amplitudes()) {
            assert!((a - packet.amplitude(x, sys.hbar)).norm() < 1e-10);
        }
    }

    /// Residual of `i hbar psi_t = -hbar^2/(2m) psi_xx + m omega^2 x^2 psi / 2`
    /// by finite differences, after restoring the dynamical phase the
    /// modulus prefactor drops.
    #[test]
    fn closed_form_solves_the_schrodinger_equation() {
        let sys = OscillatorSystem::new(1.3, 0.8, 0.9).unwrap();
        let packet = GaussianPacket::new(0.7, 0.4, 0.6).unwrap();
        let psi = |x: f64, t: f64| {
            let l = sys.l_factor(&packet, t);
            let (mw, s) = (sys.m * sys.omega, packet.sigma);
            let (sn, cs) = (sys.omega * t).sin_cos();
            let i = Complex64::i();
            let (x0, p0, hb) = (packet.x0, packet.p0, sys.hbar);
            let sfun =
                -x0 * x0 * cs - 2.0 * x0 * p0 * sn / mw - i * s * s * p0 * p0 * sn / (mw * hb)
                    + 2.0 * (x0 + i * s * s * p0 / hb) * x
                    - (cs + i * mw * s * s * sn / hb) * x * x;
            (l.norm() / l).sqrt() * (l.norm() * PI.sqrt()).powf(-0.5) * (sfun / (2.0 * s * l)).exp()
        };
        let (h, k) = (1e-3, 1e-4);
        for &(x, t) in &[(0.3, 0.4), (1.1, 2.0), (-0.5, 3.7)] {
            let dt = (psi(x, t + k) - psi(x, t - k)) / (2.0 * k);
            let dxx = (psi(x + h, t) - 2.0 * psi(x, t) + psi(x - h, t)) / (h * h);
            let lhs = Complex64::i() * sys.hbar * dt;
            let rhs = -sys.hbar * sys.hbar / (2.0 * sys.m) * dxx
                + 0.5 * sys.m * sys.omega * sys.omega * x * x * psi(x, t);
            assert!(
                (lhs - rhs).norm() < 1e-5 * psi(x, t).norm().max(1e-3),
                "{x} {t}"
            );
        }
    }

    #[test]
    fn coherent_shape_is_invariant() {
        let sys = unit();
        let packet = GaussianPacket::new(2.0, 0.0, sys.coherent_width()).unwrap();
        let grid = sys.position_grid(&packet).unwrap();
        let t = sys.period() / 3.0;
        let rho = density(&sho_evolve(&sys, &packet, t, &grid).unwrap());
        let centre = packet.x0 * (sys.omega * t).cos();
        let shifted = GaussianPacket::new(centre, 0.0, packet.sigma).unwrap();
        for (x, v) in grid.points().zip(rho.values()) {
            assert!((v - shifted.amplitude(x, 1.0).norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn half_period_reflects_through_origin() {
        let sys = unit();
        let packet = GaussianPacket::new(1.5, 0.0, 0.6).unwrap();
        let grid = sys.position_grid(&packet).unwrap();
        let r0 = density(&sho_evolve(&sys, &packet, 0.0, &grid).unwrap());
        let rh = density(&sho_evolve(&sys, &packet, sys.period() / 2.0, &grid).unwrap());
        let n = grid.count();
        for k in 0..n {
            assert!((rh.values()[k] - r0.values()[n - 1 - k]).abs() < 1e-10);
        }
    }

    #[test]
    fn uncertainty_closed_forms() {
        let sys = OscillatorSystem::new(1.0, 2.0, 0.5).unwrap();
        let sc = sys.coherent_width();
        let coherent = GaussianPacket::new(1.0, 0.3, sc).unwrap();
        for t in [0.0, 0.3, 1.7, 4.0] {
            let (dx, dp) = sho_uncertainties(&sys, &coherent, t);
            assert!((dx - sc / 2f64.sqrt()).abs() < 1e-14);
            assert!((dp - sys.hbar / (2f64.sqrt() * sc)).abs() < 1e-14);
            assert!((dx * dp - sys.hbar / 2.0).abs() < 1e-14);
        }
        let other = GaussianPacket::new(1.0, 0.3, 0.37).unwrap();
        let (dx, dp) = sho_uncertainties(&sys, &other, 0.0);
        assert!((dx - 0.37 / 2f64.sqrt()).abs() < 1e-15);
        assert!((dp - sys.hbar / (2f64.sqrt() * 0.37)).abs() < 1e-15);
        // half-period periodicity
        let a = sho_uncertainties(&sys, &other, 0.4);
        let b = sho_uncertainties(&sys, &other, 0.4 + sys.period() / 2.0);
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }

    #[test]
    fn squeezed_quarter_period_matches_numeric_moments() {
        let sys = unit();
        let sc = sys.coherent_width();
        let packet = GaussianPacket::new(2.0, 0.0, 2.0 * sc).unwrap();
        let prop = OscillatorPropagator::new(sys, packet).unwrap();
        let t = sys.period() / 4.0;
        let (dx, dp) = sho_uncertainties(&sys, &packet, t);
        assert!((dx - sys.hbar / (2f64.sqrt() * 2.0 * sc)).abs() < 1e-12);
        let snap = prop.evolve(t).unwrap();
        assert!((moments(&density(&snap.position)).unwrap().std_dev() - dx).abs() < 1e-6);
        assert!((moments(&density(&snap.momentum)).unwrap().std_dev() - dp).abs() < 1e-6);
    }

    #[test]
    fn analytic_renyi_matches_numeric() {
        let sys = unit();
        let packet = GaussianPacket::new(2.0, 0.0, 2.0).unwrap();
        let prop = OscillatorPropagator::new(sys, packet).unwrap();
        let tc = sys.period();
        let orders: Vec<RenyiOrder> = ["1/2", "2/3", "2", "5"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for t in [0.0, 0.13 * tc, 0.3 * tc, 0.62 * tc] {
            let snap = prop.evolve(t).unwrap();
            for &o in &orders {
                let num = renyi(&density(&snap.position), o).unwrap();
                let ana = sho_renyi_analytic(&sys, &packet, o, t, Representation::Position);
                assert!((num - ana).abs() < 1e-6, "position t={t} alpha={o}");
            }
        }
        for k in 0..4 {
            let t = k as f64 * tc / 2.0;
            let snap = prop.evolve(t).unwrap();
            for &o in &orders {
                let num = renyi(&density(&snap.momentum), o).unwrap();
                let ana = sho_renyi_analytic(&sys, &packet, o, t, Representation::Momentum);
                assert!((num - ana).abs() < 1e-6, "momentum t={t} beta={o}");
            }
        }
    }

    #[test]
    fn coherent_position_entropy_closed_form() {
        let sys = unit();
        let sc = sys.coherent_width();
        let packet = GaussianPacket::new(1.0, 0.0, sc).unwrap();
        let two: RenyiOrder = "2".parse().unwrap();
        let r = sho_renyi_analytic(&sys, &packet, two, 1.234, Representation::Position);
        assert!((r - ((PI.sqrt() * sc).ln() + 2f64.sqrt().ln())).abs() < 1e-14);
    }

    #[test]
    fn closed_form_momentum_matches_transform() {
        let sys = OscillatorSystem::new(1.2, 0.9, 0.8).unwrap();
        let packet = GaussianPacket::new(1.1, 0.7, 0.5).unwrap();
        let grid = UniformGrid::new(-12.8, 0.0125, 2048).unwrap();
        for t in [0.0, 0.9, 2.6] {
            let psi = sho_evolve(&sys, &packet, t, &grid).unwrap();
            let fft = crate::numerics::to_momentum(&psi, sys.hbar).unwrap();
            let exact = sho_momentum(&sys, &packet, t, fft.grid()).unwrap();
            for (a, b) in fft.amplitudes().iter().zip(exact.amplitudes()) {
                assert!((a - b).norm() < 1e-9, "t = {t}");
            }
        }
    }

    #[test]
    fn truncating_grid_is_rejected() {
        let sys = unit();
        let packet = GaussianPacket::new(0.0, 0.0, 1.0).unwrap();
        let grid = UniformGrid::spanning(-1.0, 1.0, 201).unwrap();
        assert!(matches!(
            sho_evolve(&sys, &packet, 0.0, &grid),
            Err(Error::DomainCoverage(_))
        ));
    }
}
