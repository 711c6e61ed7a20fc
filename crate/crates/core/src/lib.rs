//! Channel-flow bounds laboratory.
//!
//! Closed-form estimates for pressure-driven flow between two no-slip
//! plates (periodic in the two wall-parallel directions), the exact plane
//! Poiseuille solution used as an oracle, the background-flow machinery
//! behind the lower bounds, the scale-by-scale energy injection of the
//! pressure forcing, and the Fourier–Fourier–Chebyshev field type shared
//! with the simulator in `chanlab-dns`.
//!
//! Units are kinematic throughout: the pressure drop `p` is already divided
//! by the fluid density, so it carries length²/time².

pub mod background;
pub mod bounds;
pub mod cheb;
mod error;
pub mod injection;
pub mod par;
pub mod params;
pub mod poiseuille;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{ChannelParams, DerivedNumbers, FlowDiagnostics};
pub use spectral::{ModeIndex, Resolution, ShellDecomposition, SpectralField};
