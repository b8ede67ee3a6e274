//! Airy function `Ai` and its derivative for real arguments, plus the zeros
//! `Ai(-z_n) = 0` used as the bouncer spectrum.
//!
//! Small arguments use the Maclaurin series; beyond [`AIRY_SERIES_SWITCH`]
//! the Poincare asymptotic expansions take over (exponentially decaying for
//! `x > 0`, oscillatory for `x < 0`), truncated at their smallest term.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// `|x|` at which evaluation switches from the Maclaurin series to the
/// asymptotic expansions.
pub const AIRY_SERIES_SWITCH: f64 = 7.0;

const AI_0: f64 = 0.355_028_053_887_817_239_26;
const AI_PRIME_0: f64 = -0.258_819_403_792_806_798_41;

const MIN_ARG: f64 = -600.0;
const MAX_ARG: f64 = 200.0;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const ZERO_RESIDUAL: f64 = 1e-10;

pub fn airy_ai(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(ai_and_derivative(x).0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(ai_and_derivative(x).1)
}

fn check_domain(x: f64) -> Result<()> {
    if x.is_nan() || !(MIN_ARG..=MAX_ARG).contains(&x) {
        return Err(Error::Domain {
            arg: x,
            domain: "[-600, 200]",
        });
    }
    Ok(())
}

/// `(Ai(x), Ai'(x))` without the domain check; large positive arguments
/// underflow to zero.
pub(crate) fn ai_and_derivative(x: f64) -> (f64, f64) {
    if x.abs() <= AIRY_SERIES_SWITCH {
        maclaurin(x)
    } else if x > 0.0 {
        decaying(x)
    } else {
        oscillating(-x)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (x, x);
    let (mut fp, mut tfp) = (0.0, x * x / 2.0);
    let (mut gp, mut tgp) = (1.0, 1.0);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        tgp *= x3 / ((k3 - 2.0) * k3);
        f += tf;
        g += tg;
        gp += tgp;
        fp += tfp;
        tfp *= x3 / (k3 * (k3 + 2.0));
        if tf.abs() + tg.abs() + tfp.abs() + tgp.abs() < 1e-22 {
            break;
        }
    }
    (AI_0 * f + AI_PRIME_0 * g, AI_0 * fp + AI_PRIME_0 * gp)
}

/// Terms `u_k / zeta^k` and `v_k / zeta^k` of the asymptotic expansions, up
/// to (not including) the first term that stops decreasing.
fn asymptotic_terms(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut us = vec![1.0];
    let mut vs = vec![1.0];
    let mut u = 1.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zk *= zeta;
        let tu = u / zk;
        let tv = v / zk;
        let size = tu.abs().max(tv.abs());
        if size >= last {
            break;
        }
        us.push(tu);
        vs.push(tv);
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    (us, vs)
}

fn decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (us, vs) = asymptotic_terms(zeta);
    let alt = |ts: &[f64]| -> f64 {
        ts.iter()
            .enumerate()
            .map(|(k, t)| if k % 2 == 0 { *t } else { -*t })
            .sum()
    };
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * alt(&us), -e * q * alt(&vs))
}

fn oscillating(y: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let (us, vs) = asymptotic_terms(zeta);
    // even and odd parts with alternating signs
    let split = |ts: &[f64]| -> (f64, f64) {
        let (mut even, mut odd) = (0.0, 0.0);
        for (k, t) in ts.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * t;
            } else {
                odd += sign * t;
            }
        }
        (even, odd)
    };
    let (pu, qu) = split(&us);
    let (pv, qv) = split(&vs);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let q = y.powf(0.25);
    let norm = PI.sqrt().recip();
    let ai = norm / q * (c * pu + s * qu);
    let aip = norm * q * (s * pv - c * qv);
    (ai, aip)
}

/// Zeros `z_n` (so that `Ai(-z_n) = 0`) with `Ai'(-z_n)` at each.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryTable {
    zeros: Vec<f64>,
    derivative_at_zeros: Vec<f64>,
}

impl AiryTable {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn derivative_at_zeros(&self) -> &[f64] {
        &self.derivative_at_zeros
    }

    /// `z_n` for 1-based `n`.
    pub fn zero(&self, n: usize) -> f64 {
        self.zeros[n - 1]
    }

    /// `N_n = 1 / |Ai'(-z_n)|`, normalising `Ai(z - z_n)` on `z > 0`.
    pub fn normalization(&self, n: usize) -> f64 {
        self.derivative_at_zeros[n - 1].abs().recip()
    }
}

/// Asymptotic estimate `z_n ~ [3 pi (4n - 1) / 8]^{2/3}`.
pub fn airy_zero_estimate(n: usize) -> f64 {
    (3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0).powf(2.0 / 3.0)
}

/// First `n_max` zeros, each refined by Newton iteration from the
/// asymptotic estimate.
pub fn airy_zeros(n_max: usize) -> Result<AiryTable> {
    if n_max == 0 {
        return Err(Error::Contract("airy_zeros needs n_max >= 1".into()));
    }
    let mut zeros = Vec::with_capacity(n_max);
    let mut derivs = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (z, d) = refine_zero(n)?;
        if let Some(&prev) = zeros.last() {
            if z <= prev {
                return Err(Error::Numeric(format!(
                    "Airy zero {n} ({z}) not above zero {} ({prev})",
                    n - 1
                )));
            }
        }
        zeros.push(z);
        derivs.push(d);
    }
    Ok(AiryTable {
        zeros,
        derivative_at_zeros: derivs,
    })
}

fn refine_zero(n: usize) -> Result<(f64, f64)> {
    let mut z = airy_zero_estimate(n);
    for _ in 0..NEWTON_MAX_ITER {
        let (ai, aip) = ai_and_derivative(-z);
        // d/dz Ai(-z) = -Ai'(-z)
        let step = ai / aip;
        z += step;
        if step.abs() <= NEWTON_TOL {
            let (ai, aip) = ai_and_derivative(-z);
            if ai.abs() > ZERO_RESIDUAL {
                return Err(Error::Numeric(format!(
                    "Airy zero {n} converged to {z} but |Ai(-z)| = {:e}",
                    ai.abs()
                )));
            }
            return Ok((z, aip));
        }
    }
    Err(Error::Convergence {
        what: format!("Newton iteration for Airy zero {n}"),
        iterations: NEWTON_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values (x, Ai(x), Ai'(x)).
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (-2.5, -0.11232506769296608919, 0.67885273426479436337),
        (4.0, 0.00095156385120480187362, -0.0019586409502041789001),
        (-4.0, -0.070265532949289515099, -0.7906285753685813803),
        (5.9, 0.000012747094509184476376, -0.000031481297117112737521),
        (-5.9, -0.28512277955518009118, 0.5296285725630017807),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (-6.0, -0.32914517362982310523, 0.34593548728134289493),
        (6.5, 2.7958823432049135855e-6, -7.2319314666017925598e-6),
        (-6.5, -0.23802030199711580359, -0.674952492513202173),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (7.5, 1.9172560675134307516e-7, -5.3127139597205446848e-7),
        (-7.5, 0.32177571638064787527, 0.31880950669855459621),
        (9.0, 2.4711684308724898433e-9, -7.4806413896589464128e-9),
        (-9.0, -0.022133721547341403674, -0.97566398092633159471),
        (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
        (-12.0, -0.066555175054373129474, 1.0231104533679707299),
        (-30.0, -0.087968188456842162833, 1.2286206026374851347),
        (-126.3, -0.16670304341046307354, 0.2592956183281271573),
        (-600.0, -0.013292973706720281535, 2.7732499719997586924),
        (25.0, 8.1160268246913866838e-38, -4.0660893372432810053e-37),
        (
            150.0,
            1.0148649497482194626e-533,
            -1.2431197290204203888e-532,
        ),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, ai, aip) in REFERENCE {
            let (a, d) = ai_and_derivative(x);
            assert!((a - ai).abs() <= 1e-10, "Ai({x}) = {a}, want {ai}");
            // Ai' grows like |x|^{1/4}; keep the same relative budget.
            let tol = 1e-10 * x.abs().max(1.0).powf(0.25);
            assert!((d - aip).abs() <= tol, "Ai'({x}) = {d}, want {aip}");
        }
    }

    #[test]
    fn closed_forms_at_origin() {
        // 3^{-2/3} / Gamma(2/3) and -3^{-1/3} / Gamma(1/3)
        let gamma_one_third = 2.678_938_534_707_747_6;
        let gamma_two_thirds = 1.354_117_939_426_400_4;
        let ai0 = 3f64.powf(-2.0 / 3.0) / gamma_two_thirds;
        let aip0 = -(3f64.powf(-1.0 / 3.0)) / gamma_one_third;
        assert!((airy_ai(0.0).unwrap() - ai0).abs() < 1e-9);
        assert!((airy_ai_prime(0.0).unwrap() - aip0).abs() < 1e-9);
        assert!((airy_ai(0.0).unwrap() - 0.3550280539).abs() < 1e-9);
        assert!((airy_ai_prime(0.0).unwrap() + 0.2588194038).abs() < 1e-9);
    }

    /// Both branches must agree where they meet.
    #[test]
    fn series_and_asymptotic_agree_across_switch() {
        for i in 0..=40 {
            let r = AIRY_SERIES_SWITCH - 0.5 + i as f64 * 0.025;
            for x in [r, -r] {
                let (sa, sd) = maclaurin(x);
                let (aa, ad) = if x > 0.0 {
                    decaying(x)
                } else {
                    oscillating(-x)
                };
                assert!((sa - aa).abs() < 1e-10, "Ai({x}): {sa} vs {aa}");
                assert!((sd - ad).abs() < 2e-10, "Ai'({x}): {sd} vs {ad}");
            }
        }
    }

    #[test]
    fn first_zero_by_bisection_oracle() {
        // bisection on the series branch alone
        let (mut lo, mut hi) = (2.0, 2.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if maclaurin(-lo).0.signum() == maclaurin(-mid).0.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let table = airy_zeros(3).unwrap();
        assert!((table.zero(1) - 0.5 * (lo + hi)).abs() < 1e-8);
        assert!((table.zero(1) - 2.3381074105).abs() < 1e-8);
        assert!(airy_ai(-2.3381074105).unwrap().abs() < 1e-9);
    }

    #[test]
    fn zeros_match_reference() {
        let table = airy_zeros(300).unwrap();
        let reference = [
            (1, 2.3381074104597670385, 0.70121082272069136249),
            (2, 4.0879494441309706166, -0.80311136965486396363),
            (3, 5.5205598280955510591, 0.86520402589415193084),
            (10, 12.8287767528657572, -1.0677938591574278347),
            (50, 38.021008677255254433, -1.4009788839497689752),
            (100, 60.455557274116698707, -1.5732012195680693354),
            (212, 99.856516731275561962, -1.7834839315509236525),
            (300, 125.8926102729785012, -1.8898404495104150936),
        ];
        for (n, z, d) in reference {
            assert!((table.zero(n) - z).abs() < 1e-10, "z_{n}");
            assert!(
                (table.derivative_at_zeros()[n - 1] - d).abs() < 1e-9,
                "Ai'(-z_{n})"
            );
        }
    }

    #[test]
    fn zero_212_close_to_asymptotic_seed() {
        let table = airy_zeros(212).unwrap();
        let seed = (3.0 * PI * 847.0 / 8.0).powf(2.0 / 3.0);
        assert!((table.zero(212) - seed).abs() < 1e-4);
    }

    #[test]
    fn table_invariants() {
        let table = airy_zeros(300).unwrap();
        for n in 1..=300 {
            assert!(ai_and_derivative(-table.zero(n)).0.abs() <= 1e-10);
            let d = table.derivative_at_zeros()[n - 1];
            assert_eq!(d > 0.0, n % 2 == 1, "sign of Ai'(-z_{n})");
            if n > 1 {
                assert!(table.zero(n) > table.zero(n - 1));
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(airy_ai(-600.5), Err(Error::Domain { .. })));
        assert!(matches!(airy_ai_prime(201.0), Err(Error::Domain { .. })));
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_zeros(0).is_err());
    }
}
