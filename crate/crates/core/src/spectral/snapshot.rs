//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `CHNF` |
//! | 4 | version `u32` (currently 1) |
//! | 40 | `lx, ly, h, nu, p` as `f64` |
//! | 12 | `nx, ny, nz` as `u32` |
//! | 1 | basis tag `u8` (0: Fourier × Chebyshev–Gauss–Lobatto nodal) |
//! | 48·nx·ny·nz | components 1..3, each `[jx][jy][iz]`, `(re, im)` as `f64` |
//!
//! The flat index within a component is `((jx·ny) + jy)·nz + iz`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::{Resolution, SpectralField};
use crate::error::{Error, Result};
use crate::params::ChannelParams;

pub const MAGIC: &[u8; 4] = b"CHNF";
pub const VERSION: u32 = 1;
pub const BASIS_CGL_NODAL: u8 = 0;

pub fn write_f64(w: &mut impl Write, x: f64) -> Result<()> {
    w.write_all(&x.to_le_bytes())?;
    Ok(())
}

pub fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn write_u32(w: &mut impl Write, x: u32) -> Result<()> {
    w.write_all(&x.to_le_bytes())?;
    Ok(())
}

pub fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn write_complex(w: &mut impl Write, data: &[Complex64]) -> Result<()> {
    let mut buf = Vec::with_capacity(16 * data.len());
    for v in data {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_complex(r: &mut impl Read, n: usize) -> Result<Vec<Complex64>> {
    let mut buf = vec![0u8; 16 * n];
    r.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

pub fn write_field(w: &mut impl Write, u: &SpectralField) -> Result<()> {
    w.write_all(MAGIC)?;
    write_u32(w, VERSION)?;
    let p = u.params();
    for x in [p.lx, p.ly, p.h, p.nu, p.p] {
        write_f64(w, x)?;
    }
    let r = u.resolution();
    for n in [r.nx, r.ny, r.nz] {
        write_u32(w, n as u32)?;
    }
    w.write_all(&[BASIS_CGL_NODAL])?;
    write_complex(w, u.data())
}

pub fn read_field(r: &mut impl Read) -> Result<SpectralField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let mut v = [0.0; 5];
    for x in &mut v {
        *x = read_f64(r)?;
    }
    let params = ChannelParams::new(v[0], v[1], v[2], v[3], v[4])?;
    let nx = read_u32(r)? as usize;
    let ny = read_u32(r)? as usize;
    let nz = read_u32(r)? as usize;
    let res = Resolution::new(nx, ny, nz)?;
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    if tag[0] != BASIS_CGL_NODAL {
        return Err(Error::Format(format!("unknown basis tag {}", tag[0])));
    }
    let data = read_complex(r, res.len())?;
    SpectralField::from_data(params, res, data)
}

pub fn save(path: impl AsRef<Path>, u: &SpectralField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(&mut w, u)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<SpectralField> {
    read_field(&mut BufReader::new(File::open(path)?))
}
