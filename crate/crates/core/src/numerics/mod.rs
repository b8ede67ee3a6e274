//! Grid arithmetic, quadrature, the position/momentum transform and Airy
//! functions.

mod airy;
mod fourier;
mod grid;
mod quadrature;

pub(crate) use airy::ai_and_derivative;
pub use airy::{airy_ai, airy_ai_prime, airy_zeros, AiryTable, AIRY_SERIES_SWITCH};
pub use fourier::{to_momentum, to_position, zero_pad, MomentumTransform};
pub use grid::UniformGrid;
pub use quadrature::{integrate, integrate_complex, trapezoid_weight};
