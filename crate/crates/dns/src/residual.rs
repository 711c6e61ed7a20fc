//! Residual of the time-averaged momentum balance `νA⟨u⟩ + ⟨B(u,u)⟩ = f_P`.
//!
//! The residual lives in the dual of the enstrophy space. With
//! `M = f + νΔ⟨u⟩ − ⟨(u·∇)u⟩`, which differs from the residual by a gradient,
//! `w = (νA)^{-1} P M` gives `‖P M‖_{V'} = |A^{-1/2} P M|₀ = ν‖w‖`.

use serde::Serialize;

use chanlab_core::params::forcing_dual_norm_sq;
use chanlab_core::SpectralField;

use crate::error::{DnsError, Result};
use crate::operators::{laplacian, stokes_inverse, uniform_x};

/// A field averaged over `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct TimeAverage {
    pub t0: f64,
    pub t1: f64,
    pub field: SpectralField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReynoldsResidual {
    /// `‖νA⟨u⟩ + ⟨B(u,u)⟩ − f‖_{V'}`.
    pub dual_norm: f64,
    /// Relative to `|A^{-1/2} f|₀`, or to `ν‖⟨u⟩‖` without forcing.
    pub relative: f64,
}

/// `forcing` is the body force `P/L_x` actually applied (0 for free decay).
pub fn reynolds_residual(u_avg: &TimeAverage, b_avg: &TimeAverage, forcing: f64) -> Result<ReynoldsResidual> {
    if u_avg.t0 != b_avg.t0 || u_avg.t1 != b_avg.t1 {
        return Err(DnsError::WindowMismatch {
            a0: u_avg.t0,
            a1: u_avg.t1,
            b0: b_avg.t0,
            b1: b_avg.t1,
        });
    }
    let u = &u_avg.field;
    u.same_space(&b_avg.field)?;
    let p = *u.params();
    let res = u.resolution();
    let mut m = uniform_x(p, res, forcing);
    m.axpy(p.nu, &laplacian(u))?;
    m.axpy(-1.0, &b_avg.field)?;
    let dual_norm = p.nu * stokes_inverse(&m).grad_norm();
    let scale = if forcing != 0.0 {
        forcing_dual_norm_sq(&p).sqrt() * (forcing / p.forcing()).abs()
    } else {
        p.nu * u.grad_norm()
    };
    Ok(ReynoldsResidual {
        dual_norm,
        relative: dual_norm / scale,
    })
}
