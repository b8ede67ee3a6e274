use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    Basis, EigenExpansion, GaussianPacket, Propagator, Snapshot, Timescales, TRIM_RELATIVE,
};
use crate::error::{Error, Result};
use crate::numerics::UniformGrid;
use crate::state::{Representation, WaveFunction};

/// Relative half-width around `+-p_n` inside which the momentum
/// eigenfunction is evaluated from its series about the removable
/// singularity.
pub const SINGULARITY_WINDOW: f64 = 1e-6;

/// Infinite square well on `[0, L]` with `u_n = sqrt(2/L) sin(n pi x / L)`
/// and `E_n = n^2 hbar^2 pi^2 / (2 m L^2)`, expanded over
/// `n_min ..= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSystem {
    pub m: f64,
    pub length: f64,
    pub hbar: f64,
    pub n_min: usize,
    pub n_max: usize,
}

impl WellSystem {
    pub fn new(m: f64, length: f64, hbar: f64, n_min: usize, n_max: usize) -> Result<Self> {
        for (name, v) in [("m", m), ("L", length), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Contract(format!(
                    "well {name} must be positive, got {v}"
                )));
            }
        }
        if n_min < 1 || n_min > n_max {
            return Err(Error::Contract(format!(
                "invalid quantum-number range [{n_min}, {n_max}]"
            )));
        }
        Ok(Self {
            m,
            length,
            hbar,
            n_min,
            n_max,
        })
    }

    /// Range `[n0 - 100, n0 + 100]` (clipped at 1) around the packet's
    /// central quantum number.
    pub fn around(m: f64, length: f64, hbar: f64, packet: &GaussianPacket) -> Result<Self> {
        let probe = Self::new(m, length, hbar, 1, 1)?;
        let n0 = probe.central_quantum_number(packet);
        Self::new(m, length, hbar, n0.saturating_sub(100).max(1), n0 + 100)
    }

    pub fn energy(&self, n: usize) -> f64 {
        let k = self.wavenumber(n);
        self.hbar * self.hbar * k * k / (2.0 * self.m)
    }

    /// `n pi / L`.
    pub fn wavenumber(&self, n: usize) -> f64 {
        n as f64 * PI / self.length
    }

    /// `round(p0 L / (pi hbar))`.
    pub fn central_quantum_number(&self, packet: &GaussianPacket) -> usize {
        (packet.p0.abs() * self.length / (PI * self.hbar)).round() as usize
    }

    pub fn eigenfunction(&self, n: usize, x: f64) -> f64 {
        if !(0.0..=self.length).contains(&x) {
            return 0.0;
        }
        (2.0 / self.length).sqrt() * (self.wavenumber(n) * x).sin()
    }

    /// `T_cl = 2 m L^2 / (hbar pi n0)`, `T_rev = 4 m L^2 / (hbar pi)` and
    /// `T_coll = m L sigma / (sqrt 6 hbar)`. A packet at rest is assigned
    /// `n0 = 1` for the classical period.
    pub fn timescales(&self, packet: &GaussianPacket) -> Timescales {
        let n0 = self.central_quantum_number(packet);
        let ml2 = self.m * self.length * self.length;
        Timescales {
            classical: 2.0 * ml2 / (self.hbar * PI * n0.max(1) as f64),
            revival: Some(4.0 * ml2 / (self.hbar * PI)),
            collapse: Some(self.m * self.length * packet.sigma / (6f64.sqrt() * self.hbar)),
            n0: Some(n0),
        }
    }

    /// `[0, L]` with `dx = L / (8 n_max)`.
    pub fn position_grid(&self, n_max: usize) -> Result<UniformGrid> {
        UniformGrid::spanning(0.0, self.length, 8 * n_max + 1)
    }

    /// Symmetric momentum grid with `dp = pi hbar / (4 L)` reaching six
    /// times the required `(n_max + 20) pi hbar / L`, so that the `p^-4`
    /// tails of packets touching the walls are captured.
    pub fn momentum_grid(&self, n_max: usize) -> Result<UniformGrid> {
        let dp = PI * self.hbar / (4.0 * self.length);
        let half = 24 * (n_max + 20);
        UniformGrid::new(-(half as f64) * dp, dp, 2 * half + 1)
    }
}

/// Expansion coefficients of a Gaussian packet, in closed form with the
/// overlap integral extended over the whole line:
/// `a_n = sqrt(4 pi sigma / (L sqrt pi)) exp(i p0 x0 / hbar) / (2i)
///        [exp(i k x0 - sigma^2 (p0/hbar + k)^2 / 2) - exp(-i k x0 - sigma^2 (p0/hbar - k)^2 / 2)]`
/// with `k = n pi / L`.
pub fn well_coefficients(sys: &WellSystem, packet: &GaussianPacket) -> Result<EigenExpansion> {
    let (x0, s) = (packet.x0, packet.sigma);
    if x0 - 5.0 * s <= 0.0 || x0 + 5.0 * s >= sys.length {
        return Err(Error::Contract(format!(
            "packet x0 = {x0}, sigma = {s} not well inside (0, {})",
            sys.length
        )));
    }
    let q0 = packet.p0 / sys.hbar;
    let pre = (4.0 * PI * s / (sys.length * PI.sqrt())).sqrt();
    let global = Complex64::from_polar(pre, q0 * x0) / (2.0 * Complex64::i());
    let ns: Vec<usize> = (sys.n_min..=sys.n_max).collect();
    let coefficients = ns
        .iter()
        .map(|&n| {
            let k = sys.wavenumber(n);
            let plus = Complex64::from_polar((-0.5 * s * s * (q0 + k).powi(2)).exp(), k * x0);
            let minus = Complex64::from_polar((-0.5 * s * s * (q0 - k).powi(2)).exp(), -k * x0);
            global * (plus - minus)
        })
        .collect();
    let energies = ns.iter().map(|&n| sys.energy(n)).collect();
    let exp = EigenExpansion::new(Basis::Well, ns, coefficients, energies)?;
    let total = exp.completeness();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Truncation {
            achieved: total,
            advice: format!(
                "widen n_range [{}, {}] around n0 = {}",
                sys.n_min,
                sys.n_max,
                sys.central_quantum_number(packet)
            ),
        });
    }
    Ok(exp)
}

/// Expansion of the packet as the well sees it: the closed form when the
/// packet clears both walls by five widths, otherwise overlaps of the packet
/// cut off at the walls and renormalised on `[0, L]`.
pub fn well_expansion(sys: &WellSystem, packet: &GaussianPacket) -> Result<EigenExpansion> {
    if packet.x0 - 5.0 * packet.sigma > 0.0 && packet.x0 + 5.0 * packet.sigma < sys.length {
        well_coefficients(sys, packet)
    } else {
        well_coefficients_truncated(sys, packet)
    }
}

/// Overlaps `<u_n|psi>` of the packet restricted to `[0, L]`, by the
/// trapezoid rule with its first end correction. The integrand vanishes at
/// both walls, so only the derivative term survives.
pub fn well_coefficients_truncated(
    sys: &WellSystem,
    packet: &GaussianPacket,
) -> Result<EigenExpansion> {
    let (l, hb) = (sys.length, sys.hbar);
    if !(packet.x0 > 0.0 && packet.x0 < l) {
        return Err(Error::Contract(format!(
            "packet centre {} outside (0, {l})",
            packet.x0
        )));
    }
    let n0 = sys.central_quantum_number(packet);
    let grid = UniformGrid::spanning(0.0, l, 64 * (sys.n_max + n0) + 1)?;
    let h = grid.step();
    let psi: Vec<Complex64> = grid.points().map(|x| packet.amplitude(x, hb)).collect();
    let mass =
        crate::numerics::integrate(&psi.iter().map(|a| a.norm_sqr()).collect::<Vec<_>>(), &grid)?;
    let scale = mass.sqrt().recip();
    let (left, right) = (psi[0], psi[psi.len() - 1]);
    let ns: Vec<usize> = (sys.n_min..=sys.n_max).collect();
    let norm = (2.0 / l).sqrt();
    let coefficients = ns
        .iter()
        .map(|&n| {
            let k = sys.wavenumber(n);
            let mut sum = Complex64::new(0.0, 0.0);
            for (i, a) in psi.iter().enumerate().skip(1).take(psi.len() - 2) {
                sum += a * (k * grid.point(i)).sin();
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let end = (right * sign - left) * k * h * h / 12.0;
            (sum * h - end) * norm * scale
        })
        .collect();
    let energies = ns.iter().map(|&n| sys.energy(n)).collect();
    let exp = EigenExpansion::new(Basis::Well, ns, coefficients, energies)?;
    let total = exp.completeness();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Truncation {
            achieved: total,
            advice: format!(
                "widen n_range [{}, {}] around n0 = {n0}",
                sys.n_min, sys.n_max
            ),
        });
    }
    Ok(exp)
}

/// Momentum-space eigenfunction for the transform convention
/// `phi(p) = (2 pi hbar)^{-1/2} \int u(x) exp(-i p x / hbar) dx`:
/// `phi_n(p) = sqrt(hbar / (pi L)) p_n / (p^2 - p_n^2) [(-1)^n exp(-i p L / hbar) - 1]`.
///
/// Within [`SINGULARITY_WINDOW`] of `+-p_n` the bracket is expanded about
/// the pole; at the pole itself the value is `-+(i/2) sqrt(L / (pi hbar))`.
pub fn momentum_eigenfunction(sys: &WellSystem, n: usize, p: f64) -> Complex64 {
    let (hb, l) = (sys.hbar, sys.length);
    let pn = sys.wavenumber(n) * hb;
    let c = (hb / (PI * l)).sqrt();
    for pole in [pn, -pn] {
        let d = p - pole;
        if d.abs() < SINGULARITY_WINDOW * pn {
            // bracket = exp(-i d L / hbar) - 1 there
            let u = d * l / hb;
            return c * pn / (p + pole) * (l / hb) * expm1_over(u);
        }
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let bracket = Complex64::from_polar(sign, -p * l / hb) - 1.0;
    c * pn / (p * p - pn * pn) * bracket
}

/// `(exp(-i u) - 1) / u` for small `u`.
fn expm1_over(u: f64) -> Complex64 {
    let i = Complex64::i();
    -i * (1.0 - i * u / 2.0 - u * u / 6.0 + i * u * u * u / 24.0)
}

fn check_well_basis(exp: &EigenExpansion) -> Result<()> {
    if exp.basis() != Basis::Well {
        return Err(Error::Contract("expansion is not in the well basis".into()));
    }
    Ok(())
}

fn check_position_grid(sys: &WellSystem, exp: &EigenExpansion, grid: &UniformGrid) -> Result<()> {
    let limit = sys.length / (8.0 * exp.max_quantum_number() as f64);
    if grid.step() > limit * (1.0 + 1e-12) {
        return Err(Error::GridConfig(format!(
            "position step {} exceeds L / (8 n_max) = {limit}",
            grid.step()
        )));
    }
    Ok(())
}

fn check_momentum_grid(sys: &WellSystem, exp: &EigenExpansion, grid: &UniformGrid) -> Result<()> {
    let need = (exp.max_quantum_number() + 20) as f64 * PI * sys.hbar / sys.length;
    if grid.start() > -need || grid.end() < need {
        return Err(Error::GridConfig(format!(
            "momentum grid [{}, {}] does not cover +-{need}",
            grid.start(),
            grid.end()
        )));
    }
    check_singularity_windows(sys, exp.quantum_numbers(), grid)
}

/// Fails if a grid point falls inside the singularity windows of two
/// different `p_n`.
fn check_singularity_windows(sys: &WellSystem, ns: &[usize], grid: &UniformGrid) -> Result<()> {
    let window = |n: usize| {
        let pn = sys.wavenumber(n) * sys.hbar;
        (
            pn * (1.0 - SINGULARITY_WINDOW),
            pn * (1.0 + SINGULARITY_WINDOW),
        )
    };
    for w in ns.windows(2) {
        let (lo_a, hi_a) = window(w[0]);
        let (lo_b, hi_b) = window(w[1]);
        let (lo, hi) = (lo_a.max(lo_b), hi_a.min(hi_b));
        if lo < hi {
            for sign in [1.0, -1.0] {
                let (a, b) = if sign > 0.0 { (lo, hi) } else { (-hi, -lo) };
                let i = grid.nearest_index(0.5 * (a + b));
                let p = grid.point(i);
                if p > a && p < b {
                    return Err(Error::GridConfig(format!(
                        "grid point p = {p} lies in the singularity windows of n = {} and n = {}",
                        w[0], w[1]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn position_basis(sys: &WellSystem, exp: &EigenExpansion, grid: &UniformGrid) -> Vec<f64> {
    exp.quantum_numbers()
        .iter()
        .flat_map(|&n| grid.points().map(move |x| sys.eigenfunction(n, x)))
        .collect()
}

fn momentum_basis(sys: &WellSystem, exp: &EigenExpansion, grid: &UniformGrid) -> Vec<Complex64> {
    exp.quantum_numbers()
        .iter()
        .flat_map(|&n| {
            grid.points()
                .map(move |p| momentum_eigenfunction(sys, n, p))
        })
        .collect()
}

fn superpose<T: Copy>(phased: &[Complex64], basis: &[T], count: usize) -> Vec<Complex64>
where
    Complex64: std::ops::Mul<T, Output = Complex64>,
{
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    for (c, row) in phased.iter().zip(basis.chunks_exact(count)) {
        for (o, &b) in out.iter_mut().zip(row) {
            *o += *c * b;
        }
    }
    out
}

fn check_norm(wf: &WaveFunction, exp: &EigenExpansion) -> Result<()> {
    let norm = wf.norm_sqr()?;
    if (norm - exp.completeness()).abs() > 1e-3 {
        return Err(Error::DomainCoverage(format!(
            "{:?}-space norm {norm} on the evaluation grid",
            wf.representation()
        )));
    }
    Ok(())
}

/// Eigen-expansion evaluated at time `t` on `grid`, in position space
/// (sine basis) or momentum space (analytic `phi_n`).
pub fn well_evolve(
    sys: &WellSystem,
    exp: &EigenExpansion,
    t: f64,
    grid: &UniformGrid,
    representation: Representation,
) -> Result<WaveFunction> {
    check_well_basis(exp)?;
    let phased = exp.phased(t, sys.hbar);
    let amps = match representation {
        Representation::Position => {
            check_position_grid(sys, exp, grid)?;
            superpose(&phased, &position_basis(sys, exp, grid), grid.count())
        }
        Representation::Momentum => {
            check_momentum_grid(sys, exp, grid)?;
            superpose(&phased, &momentum_basis(sys, exp, grid), grid.count())
        }
    };
    let wf = WaveFunction::new(*grid, amps, representation)?;
    check_norm(&wf, exp)?;
    Ok(wf)
}

/// Well evolution with the basis tabulated once on the default grids.
pub struct WellPropagator {
    sys: WellSystem,
    expansion: EigenExpansion,
    timescales: Timescales,
    position: UniformGrid,
    momentum: UniformGrid,
    position_basis: Vec<f64>,
    momentum_basis: Vec<Complex64>,
}

impl WellPropagator {
    pub fn new(sys: &WellSystem, packet: &GaussianPacket) -> Result<Self> {
        let expansion = well_expansion(sys, packet)?.trimmed(TRIM_RELATIVE);
        let n_max = expansion.max_quantum_number();
        let position = sys.position_grid(n_max)?;
        let momentum = sys.momentum_grid(n_max)?;
        check_position_grid(sys, &expansion, &position)?;
        check_momentum_grid(sys, &expansion, &momentum)?;
        Ok(Self {
            sys: *sys,
            timescales: sys.timescales(packet),
            position_basis: position_basis(sys, &expansion, &position),
            momentum_basis: momentum_basis(sys, &expansion, &momentum),
            expansion,
            position,
            momentum,
        })
    }

    pub fn expansion(&self) -> &EigenExpansion {
        &self.expansion
    }
}

impl Propagator for WellPropagator {
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
        self.timescales
    }

    fn evolve(&self, t: f64) -> Result<Snapshot> {
        let phased = self.expansion.phased(t, self.sys.hbar);
        let position = WaveFunction::new(
            self.position,
            superpose(&phased, &self.position_basis, self.position.count()),
            Representation::Position,
        )?;
        let momentum = WaveFunction::new(
            self.momentum,
            superpose(&phased, &self.momentum_basis, self.momentum.count()),
            Representation::Momentum,
        )?;
        check_norm(&position, &self.expansion)?;
        check_norm(&momentum, &self.expansion)?;
        Ok(Snapshot { position, momentum })
    }
}
