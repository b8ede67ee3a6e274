use std::f64::consts::PI;

use super::{
    Basis, EigenExpansion, GaussianPacket, Propagator, Snapshot, Timescales, TRIM_RELATIVE,
};
use crate::error::{Error, Result};
use crate::numerics::{ai_and_derivative, airy_zeros, AiryTable, MomentumTransform, UniformGrid};
use crate::state::{Representation, WaveFunction};
use num_complex::Complex64;

/// Largest position step that resolves the Airy oscillations.
pub const BOUNCER_MAX_STEP: f64 = 0.05;

/// Minimum zero-padding factor before the momentum transform.
pub const BOUNCER_PAD_FACTOR: usize = 4;

/// Quantum bouncer `H = -d^2/dz^2 + z` on `z > 0` (lengths in units of the
/// gravitational length, energies in `m g l_g`), with
/// `u_n(z) = N_n Ai(z - z_n)` and `E_n = z_n`.
#[derive(Debug, Clone)]
pub struct BouncerSystem {
    n_max: usize,
    airy: AiryTable,
}

impl BouncerSystem {
    pub fn new(n_max: usize) -> Result<Self> {
        Ok(Self {
            n_max,
            airy: airy_zeros(n_max)?,
        })
    }

    /// Enough levels to hold `packet` with a wide margin.
    pub fn for_packet(packet: &GaussianPacket) -> Result<Self> {
        Self::new(default_n_max(packet))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn airy(&self) -> &AiryTable {
        &self.airy
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.airy.zero(n)
    }

    pub fn eigenfunction(&self, n: usize, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        self.airy.normalization(n) * ai_and_derivative(z - self.airy.zero(n)).0
    }

    /// `n0` from `z0 = E_{n0}` through the asymptotic zero formula.
    pub fn central_quantum_number(z0: f64) -> usize {
        ((8.0 * z0.max(0.0).powf(1.5) / (3.0 * PI) + 1.0) / 4.0)
            .round()
            .max(1.0) as usize
    }

    /// `T_cl = 2 sqrt(z0)`, `T_rev = 4 z0^2 / pi`,
    /// `T_coll = T_cl^3 / (4 sqrt 2 sigma)`.
    pub fn timescales(packet: &GaussianPacket) -> Timescales {
        let t_cl = 2.0 * packet.x0.sqrt();
        Timescales {
            classical: t_cl,
            revival: Some(4.0 * packet.x0 * packet.x0 / PI),
            collapse: Some(t_cl.powi(3) / (4.0 * 2f64.sqrt() * packet.sigma)),
            n0: Some(Self::central_quantum_number(packet.x0)),
        }
    }

    /// `[0, z_max]` with `z_max = z0 + 8 max(sigma, z_{n_max} - z0)` and
    /// step at most [`BOUNCER_MAX_STEP`].
    pub fn position_grid(&self, packet: &GaussianPacket, n_max: usize) -> Result<UniformGrid> {
        let z_max = required_extent(self, packet, n_max);
        let count = (z_max / BOUNCER_MAX_STEP).ceil() as usize + 1;
        UniformGrid::new(0.0, BOUNCER_MAX_STEP, count)
    }
}

fn default_n_max(packet: &GaussianPacket) -> usize {
    let s = packet.sigma;
    let e = packet.x0 + 0.5 / (s * s) + 20.0 * (s + 1.0 / s);
    BouncerSystem::central_quantum_number(e) + 5
}

fn required_extent(sys: &BouncerSystem, packet: &GaussianPacket, n_max: usize) -> f64 {
    packet.x0 + 8.0 * packet.sigma.max(sys.energy(n_max) - packet.x0)
}

/// Expansion coefficients of a Gaussian at rest at height `z0`:
/// `a_n = N_n (4 pi sigma^2)^{1/4} Ai(z0 - z_n + sigma^4/4)
///        exp(sigma^2 (z0 - z_n) / 2 + sigma^6 / 12)`,
/// exact up to the packet's tail below the floor.
pub fn bouncer_coefficients(
    sys: &BouncerSystem,
    packet: &GaussianPacket,
) -> Result<EigenExpansion> {
    let (z0, s) = (packet.x0, packet.sigma);
    if packet.p0 != 0.0 {
        return Err(Error::Contract(format!(
            "bouncer packets start at rest; got p0 = {}",
            packet.p0
        )));
    }
    if !(z0 > 0.0) || z0 < 5.0 * s {
        return Err(Error::Contract(format!(
            "packet z0 = {z0}, sigma = {s} is not clear of the floor"
        )));
    }
    let s2 = s * s;
    let pre = (4.0 * PI * s2).powf(0.25);
    let ns: Vec<usize> = (1..=sys.n_max).collect();
    let mut coefficients = Vec::with_capacity(ns.len());
    for &n in &ns {
        let d = z0 - sys.energy(n);
        let ai = ai_and_derivative(d + s2 * s2 / 4.0).0;
        let a = if ai == 0.0 {
            0.0
        } else {
            sys.airy.normalization(n) * pre * ai * (0.5 * s2 * d + s2 * s2 * s2 / 12.0).exp()
        };
        if !a.is_finite() {
            return Err(Error::Numeric(format!("bouncer coefficient {n} is {a}")));
        }
        coefficients.push(Complex64::new(a, 0.0));
    }
    let energies = ns.iter().map(|&n| sys.energy(n)).collect();
    let exp = EigenExpansion::new(Basis::Bouncer, ns, coefficients, energies)?;
    let total = exp.completeness();
    if total < 1.0 - 1e-3 {
        return Err(Error::Truncation {
            achieved: total,
            advice: format!("raise n_max above {}", sys.n_max),
        });
    }
    Ok(exp)
}

fn check_bouncer(exp: &EigenExpansion) -> Result<()> {
    if exp.basis() != Basis::Bouncer {
        return Err(Error::Contract(
            "expansion is not in the bouncer basis".into(),
        ));
    }
    Ok(())
}

fn check_grid(
    sys: &BouncerSystem,
    packet: &GaussianPacket,
    exp: &EigenExpansion,
    grid: &UniformGrid,
) -> Result<()> {
    let z_max = required_extent(sys, packet, exp.max_quantum_number());
    if grid.step() > BOUNCER_MAX_STEP * (1.0 + 1e-12) {
        return Err(Error::GridConfig(format!(
            "step {} exceeds {BOUNCER_MAX_STEP}",
            grid.step()
        )));
    }
    if grid.start() > 0.0 || grid.end() < z_max {
        return Err(Error::GridConfig(format!(
            "grid [{}, {}] does not cover [0, {z_max}]",
            grid.start(),
            grid.end()
        )));
    }
    Ok(())
}

fn basis_table(sys: &BouncerSystem, exp: &EigenExpansion, grid: &UniformGrid) -> Vec<f64> {
    exp.quantum_numbers()
        .iter()
        .flat_map(|&n| grid.points().map(move |z| sys.eigenfunction(n, z)))
        .collect()
}

fn superpose(phased: &[Complex64], table: &[f64], grid: &UniformGrid) -> Result<WaveFunction> {
    let count = grid.count();
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    for (c, row) in phased.iter().zip(table.chunks_exact(count)) {
        for (o, &u) in out.iter_mut().zip(row) {
            *o += c * u;
        }
    }
    let (wf, scale) = WaveFunction::new(*grid, out, Representation::Position)?.normalized()?;
    if (scale - 1.0).abs() > 1e-3 {
        return Err(Error::GridConfig(format!(
            "bouncer wave function needed renormalisation by {scale}"
        )));
    }
    Ok(wf)
}

/// Position-space wave function at time `t` (renormalised on `grid`).
pub fn bouncer_evolve(
    sys: &BouncerSystem,
    packet: &GaussianPacket,
    exp: &EigenExpansion,
    t: f64,
    grid: &UniformGrid,
) -> Result<WaveFunction> {
    check_bouncer(exp)?;
    check_grid(sys, packet, exp, grid)?;
    superpose(&exp.phased(t, 1.0), &basis_table(sys, exp, grid), grid)
}

/// Momentum wave function from a position wave function zero-padded by
/// [`BOUNCER_PAD_FACTOR`] (rounded up to a power of two).
pub fn bouncer_momentum(position: &WaveFunction) -> Result<WaveFunction> {
    let count = (BOUNCER_PAD_FACTOR * position.grid().count()).next_power_of_two();
    let padded = crate::numerics::zero_pad(position, count)?;
    crate::numerics::to_momentum(&padded, 1.0)
}

/// Bouncer evolution with tabulated Airy eigenfunctions and a cached padded
/// transform.
pub struct BouncerPropagator {
    expansion: EigenExpansion,
    timescales: Timescales,
    position: UniformGrid,
    table: Vec<f64>,
    transform: MomentumTransform,
}

impl BouncerPropagator {
    pub fn new(sys: &BouncerSystem, packet: &GaussianPacket) -> Result<Self> {
        let expansion = bouncer_coefficients(sys, packet)?.trimmed(TRIM_RELATIVE);
        let position = sys.position_grid(packet, expansion.max_quantum_number())?;
        check_grid(sys, packet, &expansion, &position)?;
        let padded_count = (BOUNCER_PAD_FACTOR * position.count()).next_power_of_two();
        let padded = UniformGrid::new(0.0, position.step(), padded_count)?;
        Ok(Self {
            timescales: BouncerSystem::timescales(packet),
            table: basis_table(sys, &expansion, &position),
            transform: MomentumTransform::new(padded, 1.0)?,
            expansion,
            position,
        })
    }

    pub fn expansion(&self) -> &EigenExpansion {
        &self.expansion
    }
}

impl Propagator for BouncerPropagator {
    fn hbar(&self) -> f64 {
        1.0
    }

    fn position_grid(&self) -> &UniformGrid {
        &self.position
    }

    fn momentum_grid(&self) -> &UniformGrid {
        self.transform.momentum_grid()
    }

    fn timescales(&self) -> Timescales {
        self.timescales
    }

    fn evolve(&self, t: f64) -> Result<Snapshot> {
        let position = superpose(&self.expansion.phased(t, 1.0), &self.table, &self.position)?;
        let mut padded = position.amplitudes().to_vec();
        padded.resize(
            self.transform.position_grid().count(),
            Complex64::new(0.0, 0.0),
        );
        let momentum = WaveFunction::new(
            *self.transform.momentum_grid(),
            self.transform.forward(&padded)?,
            Representation::Momentum,
        )?;
        Ok(Snapshot { position, momentum })
    }
}
