use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Well,
    Bouncer,
}

/// `psi(t) = sum_n a_n u_n exp(-i E_n t / hbar)` over a finite set of
/// quantum numbers.
#[derive(Debug, Clone)]
pub struct EigenExpansion {
    basis: Basis,
    quantum_numbers: Vec<usize>,
    coefficients: Vec<Complex64>,
    energies: Vec<f64>,
}

impl EigenExpansion {
    pub fn new(
        basis: Basis,
        quantum_numbers: Vec<usize>,
        coefficients: Vec<Complex64>,
        energies: Vec<f64>,
    ) -> Result<Self> {
        if quantum_numbers.len() != coefficients.len() || energies.len() != coefficients.len() {
            return Err(Error::Dimension(format!(
                "{} quantum numbers, {} coefficients, {} energies",
                quantum_numbers.len(),
                coefficients.len(),
                energies.len()
            )));
        }
        if quantum_numbers.is_empty() {
            return Err(Error::Contract("empty eigen-expansion".into()));
        }
        if quantum_numbers.windows(2).any(|w| w[0] >= w[1]) || quantum_numbers[0] == 0 {
            return Err(Error::Contract(
                "quantum numbers must be positive and strictly increasing".into(),
            ));
        }
        Ok(Self {
            basis,
            quantum_numbers,
            coefficients,
            energies,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn quantum_numbers(&self) -> &[usize] {
        &self.quantum_numbers
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn max_quantum_number(&self) -> usize {
        *self
            .quantum_numbers
            .last()
            .expect("non-empty by construction")
    }

    /// `sum |a_n|^2`.
    pub fn completeness(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Quantum number with the largest `|a_n|`.
    pub fn peak(&self) -> usize {
        let (i, _) = self
            .coefficients
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| {
                if a.norm() > best.1 {
                    (i, a.norm())
                } else {
                    best
                }
            });
        self.quantum_numbers[i]
    }

    /// Coefficient for quantum number `n`, zero if not retained.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.quantum_numbers
            .binary_search(&n)
            .map(|i| self.coefficients[i])
            .unwrap_or_default()
    }

    /// Drops terms with `|a_n| < relative * max |a_n|`.
    pub fn trimmed(&self, relative: f64) -> Self {
        let max = self
            .coefficients
            .iter()
            .map(|a| a.norm())
            .fold(0.0, f64::max);
        let cut = relative * max;
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.coefficients[i].norm() >= cut)
            .collect();
        Self {
            basis: self.basis,
            quantum_numbers: keep.iter().map(|&i| self.quantum_numbers[i]).collect(),
            coefficients: keep.iter().map(|&i| self.coefficients[i]).collect(),
            energies: keep.iter().map(|&i| self.energies[i]).collect(),
        }
    }

    /// `a_n exp(-i E_n t / hbar)`.
    pub fn phased(&self, t: f64, hbar: f64) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .zip(&self.energies)
            .map(|(a, e)| a * Complex64::from_polar(1.0, -e * t / hbar))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EigenExpansion {
        let c = |re: f64| Complex64::new(re, 0.0);
        EigenExpansion::new(
            Basis::Well,
            vec![1, 2, 3, 5],
            vec![c(0.6), c(1e-18), c(0.8), c(0.0)],
            vec![1.0, 4.0, 9.0, 25.0],
        )
        .unwrap()
    }

    #[test]
    fn completeness_peak_and_lookup() {
        let e = sample();
        assert!((e.completeness() - 1.0).abs() < 1e-15);
        assert_eq!(e.peak(), 3);
        assert_eq!(e.coefficient(1).re, 0.6);
        assert_eq!(e.coefficient(4), Complex64::default());
        assert_eq!(e.max_quantum_number(), 5);
    }

    #[test]
    fn trimming_drops_negligible_terms() {
        let t = sample().trimmed(1e-15);
        assert_eq!(t.quantum_numbers(), &[1, 3]);
        assert_eq!(t.energies(), &[1.0, 9.0]);
    }

    #[test]
    fn phases_rotate_with_energy() {
        let p = sample().phased(std::f64::consts::PI, 1.0);
        assert!((p[0] + Complex64::new(0.6, 0.0)).norm() < 1e-12);
        assert!((p[2] + Complex64::new(0.8, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_inconsistent_input() {
        let c = Complex64::default();
        assert!(EigenExpansion::new(Basis::Well, vec![1], vec![c, c], vec![1.0]).is_err());
        assert!(EigenExpansion::new(Basis::Well, vec![2, 1], vec![c, c], vec![1.0, 2.0]).is_err());
        assert!(EigenExpansion::new(Basis::Well, vec![0], vec![c], vec![1.0]).is_err());
    }
}
