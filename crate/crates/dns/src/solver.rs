//! Time stepping.
//!
//! Euler: `(u^{n+1} − u^n)/Δt = H^n + f + νΔu^{n+1}`.
//! SBDF2: `(3u^{n+1} − 4u^n + u^{n−1})/(2Δt) = 2H^n − H^{n−1} + f + νΔu^{n+1}`,
//! started with one Euler step. Both act on `(Lv, η)` per mode and on the
//! mean profile; the forcing enters the mean solve only.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use chanlab_core::par;
use chanlab_core::spectral::snapshot;
use chanlab_core::{ChannelParams, Resolution, SpectralField};

use crate::config::Integrator;
use crate::error::{DnsError, Result};
use crate::operators::{forcing_view, state_view, Advection, ImplicitSolver, ModeRhs};

/// CFL estimate above which a step is reported as a blowup.
pub const CFL_BLOWUP: f64 = 1.0;

const HIST_MAGIC: &[u8; 4] = b"HIST";

#[derive(Debug, Clone)]
struct History {
    u_prev: SpectralField,
    h_prev: SpectralField,
}

#[derive(Debug, Clone)]
pub struct Solver {
    params: ChannelParams,
    res: Resolution,
    dt: f64,
    integrator: Integrator,
    /// `P/L_x`, or 0 for free decay.
    forcing: f64,
    advection: Advection,
    euler: Option<ImplicitSolver>,
    sbdf2: Option<ImplicitSolver>,
    u: SpectralField,
    t: f64,
    step: u64,
    hist: Option<History>,
    /// `H(u^n)` and its CFL speed, once computed.
    current: Option<(SpectralField, f64)>,
}

impl Solver {
    pub fn new(u0: SpectralField, dt: f64, integrator: Integrator, dealias: bool, forced: bool) -> Self {
        let params = *u0.params();
        let res = u0.resolution();
        Self {
            params,
            res,
            dt,
            integrator,
            forcing: if forced { params.forcing() } else { 0.0 },
            advection: Advection::new(params, res, dealias),
            euler: None,
            sbdf2: None,
            u: u0,
            t: 0.0,
            step: 0,
            hist: None,
            current: None,
        }
    }

    pub fn state(&self) -> &SpectralField {
        &self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Body force applied to the mean mode.
    pub fn forcing(&self) -> f64 {
        self.forcing
    }

    /// `H(u^n) = −(u^n·∇)u^n`, cached.
    pub fn advection(&mut self) -> &SpectralField {
        self.ensure_current();
        &self.current.as_ref().expect("just computed").0
    }

    /// `Δt · max(|u₁|/Δx + |u₂|/Δy + |u₃|/Δz)` of the current state.
    pub fn cfl(&mut self) -> f64 {
        self.ensure_current();
        self.dt * self.current.as_ref().expect("just computed").1
    }

    fn ensure_current(&mut self) {
        if self.current.is_none() {
            self.current = Some(self.advection.evaluate(&self.u));
        }
    }

    fn implicit(&mut self, second_order: bool) -> &ImplicitSolver {
        let (slot, sigma) = if second_order {
            (&mut self.sbdf2, 1.5 / self.dt)
        } else {
            (&mut self.euler, 1.0 / self.dt)
        };
        slot.get_or_insert_with(|| ImplicitSolver::new(self.params, self.res, sigma))
    }

    /// Advances one step. A non-finite state or a CFL estimate above
    /// [`CFL_BLOWUP`] is reported with the step index.
    pub fn step(&mut self) -> Result<()> {
        let cfl = self.cfl();
        if !cfl.is_finite() || cfl > CFL_BLOWUP {
            return Err(self.diverged(format!("CFL estimate {cfl:.3e} exceeds {CFL_BLOWUP}")));
        }
        let (h_now, _) = self.current.take().expect("computed by cfl()");
        let second = self.integrator == Integrator::Sbdf2 && self.hist.is_some();
        let dt = self.dt;
        let f = self.forcing;
        let s_now = state_view(&self.u);
        let g_now = forcing_view(&h_now);
        let rhs: Vec<ModeRhs> = if second {
            let hist = self.hist.as_ref().expect("checked");
            let s_prev = state_view(&hist.u_prev);
            let g_prev = forcing_view(&hist.h_prev);
            par::map_range(s_now.len(), |m| {
                let comb = |a: &[Complex64], b: &[Complex64], ga: &[Complex64], gb: &[Complex64]| {
                    a.iter()
                        .zip(b)
                        .zip(ga.iter().zip(gb))
                        .map(|((x, y), (p, q))| (x * 2.0 - y * 0.5) / dt + p * 2.0 - q)
                        .collect::<Vec<_>>()
                };
                let mut r1 = comb(&s_now[m].a, &s_prev[m].a, &g_now[m].a, &g_prev[m].a);
                let r2 = comb(&s_now[m].b, &s_prev[m].b, &g_now[m].b, &g_prev[m].b);
                if m == 0 {
                    r1.iter_mut().for_each(|v| *v += f);
                }
                (r1, r2)
            })
        } else {
            par::map_range(s_now.len(), |m| {
                let comb = |a: &[Complex64], ga: &[Complex64]| {
                    a.iter().zip(ga).map(|(x, p)| x / dt + p).collect::<Vec<_>>()
                };
                let mut r1 = comb(&s_now[m].a, &g_now[m].a);
                let r2 = comb(&s_now[m].b, &g_now[m].b);
                if m == 0 {
                    r1.iter_mut().for_each(|v| *v += f);
                }
                (r1, r2)
            })
        };
        let next = self.implicit(second).solve(&rhs);
        if next.data().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(self.diverged("non-finite velocity".into()));
        }
        let prev = std::mem::replace(&mut self.u, next);
        if self.integrator == Integrator::Sbdf2 {
            self.hist = Some(History {
                u_prev: prev,
                h_prev: h_now,
            });
        }
        self.step += 1;
        self.t = self.step as f64 * dt;
        Ok(())
    }

    fn diverged(&self, reason: String) -> DnsError {
        DnsError::Diverged {
            step: self.step,
            t: self.t,
            reason,
        }
    }

    /// Snapshot of the current state followed by the history block:
    /// `HIST`, step `u64`, `t` and `Δt` as `f64`, integrator order `u8`, a
    /// `u8` flag and, when set, `u^{n−1}` and `H^{n−1}` as snapshot payloads.
    pub fn write_restart(&self, w: &mut impl Write) -> Result<()> {
        snapshot::write_field(w, &self.u)?;
        w.write_all(HIST_MAGIC)?;
        w.write_all(&self.step.to_le_bytes())?;
        snapshot::write_f64(w, self.t)?;
        snapshot::write_f64(w, self.dt)?;
        w.write_all(&[self.integrator.order() as u8])?;
        match &self.hist {
            Some(h) => {
                w.write_all(&[1])?;
                snapshot::write_complex(w, h.u_prev.data())?;
                snapshot::write_complex(w, h.h_prev.data())?;
            }
            None => w.write_all(&[0])?,
        }
        Ok(())
    }

    pub fn save_restart(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_restart(&mut w)?;
        w.flush()?;
        Ok(())
    }

    /// Reads a plain snapshot or a restart file. A history block must match
    /// `dt` and `integrator`.
    pub fn read_restart(
        r: &mut impl Read,
        dt: f64,
        integrator: Integrator,
        dealias: bool,
        forced: bool,
    ) -> Result<Self> {
        let u = snapshot::read_field(r)?;
        let mut solver = Self::new(u, dt, integrator, dealias, forced);
        let mut magic = [0u8; 4];
        match r.read_exact(&mut magic) {
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(solver),
            other => other?,
        }
        if &magic != HIST_MAGIC {
            return Err(DnsError::Restart(format!("bad history magic {magic:?}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let step = u64::from_le_bytes(b8);
        let t = snapshot::read_f64(r)?;
        let saved_dt = snapshot::read_f64(r)?;
        let mut b1 = [0u8; 1];
        r.read_exact(&mut b1)?;
        if saved_dt != dt || b1[0] as u32 != integrator.order() {
            return Err(DnsError::Restart(format!(
                "history written with dt = {saved_dt}, order {}; requested dt = {dt}, order {}",
                b1[0],
                integrator.order()
            )));
        }
        r.read_exact(&mut b1)?;
        if b1[0] == 1 {
            let n = solver.res.len();
            let mut u_prev = solver.u.scaled(0.0);
            u_prev.data_mut().copy_from_slice(&snapshot::read_complex(r, n)?);
            let mut h_prev = solver.u.scaled(0.0);
            h_prev.data_mut().copy_from_slice(&snapshot::read_complex(r, n)?);
            solver.hist = Some(History { u_prev, h_prev });
        }
        solver.step = step;
        solver.t = t;
        Ok(solver)
    }

    pub fn load_restart(
        path: impl AsRef<Path>,
        dt: f64,
        integrator: Integrator,
        dealias: bool,
        forced: bool,
    ) -> Result<Self> {
        Self::read_restart(&mut BufReader::new(File::open(path)?), dt, integrator, dealias, forced)
    }
}
