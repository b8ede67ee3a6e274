use num_complex::Complex64;

use super::UniformGrid;
use crate::error::{Error, Result};

/// Trapezoid weight of sample `i` out of `count`, in units of the step.
#[inline]
pub fn trapezoid_weight(i: usize, count: usize) -> f64 {
    if i == 0 || i + 1 == count {
        0.5
    } else {
        1.0
    }
}

/// Composite trapezoid rule over `grid`.
pub fn integrate(samples: &[f64], grid: &UniformGrid) -> Result<f64> {
    check_len(samples.len(), grid)?;
    let mut sum = 0.0;
    for (i, &v) in samples.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite integrand {v} at x = {}",
                grid.point(i)
            )));
        }
        sum += trapezoid_weight(i, samples.len()) * v;
    }
    Ok(sum * grid.step())
}

/// Composite trapezoid rule for complex samples.
pub fn integrate_complex(samples: &[Complex64], grid: &UniformGrid) -> Result<Complex64> {
    check_len(samples.len(), grid)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, v) in samples.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite integrand at x = {}",
                grid.point(i)
            )));
        }
        sum += v * trapezoid_weight(i, samples.len());
    }
    Ok(sum * grid.step())
}

fn check_len(len: usize, grid: &UniformGrid) -> Result<()> {
    if len != grid.count() {
        return Err(Error::Dimension(format!(
            "{len} samples on a grid of {} points",
            grid.count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_integrand_is_exact() {
        let g = UniformGrid::spanning(0.0, 1.0, 101).unwrap();
        let v = integrate(&vec![1.0; 101], &g).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_integrand_is_exact() {
        let g = UniformGrid::spanning(0.0, 1.0, 101).unwrap();
        let f: Vec<f64> = g.points().collect();
        assert!((integrate(&f, &g).unwrap() - 0.5).abs() < 1e-12);
    }

    /// Normalised Gaussian on [-1, 1], sigma = 0.1. The mass outside the
    /// domain is erfc(10 / sqrt 2) ~ 1.5e-23, so the exact value is 1 to
    /// double precision.
    #[test]
    fn gaussian_matches_error_function_oracle() {
        let s = 0.1;
        let g = UniformGrid::spanning(-1.0, 1.0, 2001).unwrap();
        let f: Vec<f64> = g
            .points()
            .map(|x| (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt()))
            .collect();
        assert!((integrate(&f, &g).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn length_mismatch_is_dimension_error() {
        let g = UniformGrid::spanning(0.0, 1.0, 11).unwrap();
        assert!(matches!(
            integrate(&[1.0; 10], &g),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn non_finite_sample_is_numeric_error() {
        let g = UniformGrid::spanning(0.0, 1.0, 3).unwrap();
        assert!(matches!(
            integrate(&[1.0, f64::NAN, 1.0], &g),
            Err(Error::Numeric(_))
        ));
    }
}
