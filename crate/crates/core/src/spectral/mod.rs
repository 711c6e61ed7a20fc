//! Divergence-free velocity fields on the channel.
//!
//! Horizontal directions are Fourier series with the `2π`-periodic
//! convention `exp(2πi(j x/L_x + l y/L_y))`; the wall-normal direction is
//! nodal on Chebyshev–Gauss–Lobatto points (see [`crate::cheb`]). The full
//! complex spectrum is stored, conjugate symmetric for real fields, with the
//! Nyquist planes kept at zero.

mod field;
mod random;
mod shells;
pub mod snapshot;
pub mod transform;
mod trilinear;

pub use field::{signed_index, ModeIndex, Resolution, SpectralField};
pub use random::random_divfree;
pub use shells::ShellDecomposition;
pub use trilinear::{trilinear, trilinear_with, Dealias, QuadratureGrid, ResolvedField};
