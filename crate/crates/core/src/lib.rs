//! Gaussian wave-packet revivals in three bound one-dimensional systems.
//!
//! The crate evolves Gaussian packets in the harmonic oscillator (closed
//! form), the infinite square well (sine eigenbasis) and the quantum bouncer
//! (Airy eigenbasis), and tracks three diagnostics over time:
//!
//! * the squared autocorrelation `|A(t)|^2`,
//! * the Heisenberg product `dx * dp`,
//! * sums of position and momentum Renyi entropies for conjugate orders
//!   `1/alpha + 1/beta = 2`, compared against the entropic lower bound.
//!
//! Fractional revivals show up as relative minima of the entropy sums; the
//! [`revivals`] module detects them and classifies their times as rational
//! fractions of the revival time.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod numerics;
pub mod revivals;
pub mod state;
pub mod systems;

pub use error::{Error, Result};
