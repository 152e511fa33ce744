//! Binary cache of synthesized fields.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `TLACWF01` |
//! | 4+4   | ny, nz (u32) |
//! | 3×8   | extent, hub_height, rotor_radius (f64) |
//! | 8+8   | dt, duration (f64) |
//! | 8     | seed (u64) |
//! | 1     | model (0 = NTM, 1 = ETM) |
//! | 5×8   | mean_wind, i_ref, v_ref, shear_exponent, direction (f64) |
//! | 4     | n_steps (u32) |
//! | 3×P×T×4 | u, v, w as f32, each `[point][time]` |
//!
//! Files are named by the SHA-256 of the header, so a cache hit always
//! matches the requesting spec. Values are rounded to f32 on write.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::field::{steps_for, TurbulenceModel, TurbulenceSpec, WindField};
use super::grid::GridSpec;
use super::synthesis::synthesize;
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"TLACWF01";

fn header(grid: &GridSpec, turb: &TurbulenceSpec, dt: f64, duration: f64, n_steps: usize) -> Vec<u8> {
    let mut h = Vec::with_capacity(128);
    h.extend_from_slice(MAGIC);
    h.extend_from_slice(&(grid.ny as u32).to_le_bytes());
    h.extend_from_slice(&(grid.nz as u32).to_le_bytes());
    for x in [grid.extent, grid.hub_height, grid.rotor_radius, dt, duration] {
        h.extend_from_slice(&x.to_le_bytes());
    }
    h.extend_from_slice(&turb.seed.to_le_bytes());
    h.push(match turb.model {
        TurbulenceModel::Ntm => 0,
        TurbulenceModel::Etm => 1,
    });
    for x in [turb.mean_wind, turb.i_ref, turb.v_ref, turb.shear_exponent, turb.direction] {
        h.extend_from_slice(&x.to_le_bytes());
    }
    h.extend_from_slice(&(n_steps as u32).to_le_bytes());
    h
}

/// Content hash of a field request, hex encoded.
pub fn cache_key(grid: &GridSpec, turb: &TurbulenceSpec, dt: f64, duration: f64) -> Result<String> {
    let n = steps_for(dt, duration)?;
    let digest = Sha256::digest(header(grid, turb, dt, duration, n));
    Ok(hex::encode(&digest[..16]))
}

pub fn write_field(field: &WindField, path: &Path) -> Result<()> {
    let mut buf = header(
        &field.grid,
        &field.turbulence,
        field.dt,
        field.duration(),
        field.n_steps,
    );
    buf.reserve(3 * field.u.len() * 4);
    for comp in [&field.u, &field.v, &field.w] {
        for &x in comp.iter() {
            buf.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Parse {
                path: self.path.to_path_buf(),
                detail: "truncated field cache".into(),
            });
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn read_field(path: &Path) -> Result<WindField> {
    let mut data = Vec::new();
    fs::File::open(path)?.read_to_end(&mut data)?;
    let bad = |detail: &str| Error::Parse {
        path: path.to_path_buf(),
        detail: detail.into(),
    };
    let mut c = Cursor {
        data: &data,
        pos: 0,
        path,
    };
    if c.take(8)? != MAGIC {
        return Err(bad("bad magic"));
    }
    let ny = c.u32()? as usize;
    let nz = c.u32()? as usize;
    let extent = c.f64()?;
    let hub_height = c.f64()?;
    let rotor_radius = c.f64()?;
    let dt = c.f64()?;
    let _duration = c.f64()?;
    let seed = c.u64()?;
    let model = match c.take(1)?[0] {
        0 => TurbulenceModel::Ntm,
        1 => TurbulenceModel::Etm,
        _ => return Err(bad("unknown turbulence model")),
    };
    let mean_wind = c.f64()?;
    let i_ref = c.f64()?;
    let v_ref = c.f64()?;
    let shear_exponent = c.f64()?;
    let direction = c.f64()?;
    let n_steps = c.u32()? as usize;
    let grid = GridSpec {
        ny,
        nz,
        extent,
        hub_height,
        rotor_radius,
    };
    let len = grid.n_points() * n_steps;
    let read = |c: &mut Cursor| -> Result<Vec<f64>> { (0..len).map(|_| c.f32().map(f64::from)).collect() };
    let u = read(&mut c)?;
    let v = read(&mut c)?;
    let w = read(&mut c)?;
    if c.pos != data.len() {
        return Err(bad("trailing bytes"));
    }
    Ok(WindField {
        grid,
        turbulence: TurbulenceSpec {
            model,
            mean_wind,
            i_ref,
            v_ref,
            shear_exponent,
            direction,
            seed,
        },
        dt,
        n_steps,
        u,
        v,
        w,
    })
}

/// Load a field from `dir` if cached, otherwise synthesize and store it.
pub fn load_or_synthesize(
    dir: &Path,
    grid: &GridSpec,
    turb: &TurbulenceSpec,
    dt: f64,
    duration: f64,
) -> Result<WindField> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, grid, turb, dt, duration)?;
    if path.exists() {
        return read_field(&path);
    }
    let field = synthesize(grid, turb, dt, duration)?;
    write_field(&field, &path)?;
    // serve the stored (f32-rounded) values so hits and misses agree
    read_field(&path)
}

pub fn cache_path(dir: &Path, grid: &GridSpec, turb: &TurbulenceSpec, dt: f64, duration: f64) -> Result<PathBuf> {
    Ok(dir.join(format!("{}.tlwf", cache_key(grid, turb, dt, duration)?)))
}
