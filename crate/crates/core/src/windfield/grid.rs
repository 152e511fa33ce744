use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rectangular grid of wind points in the rotor plane, centred on the hub.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points along the horizontal axis (positive to the left seen from upwind).
    pub ny: usize,
    /// Points along the vertical axis (positive upwards).
    pub nz: usize,
    /// Half-width of the square grid, m.
    pub extent: f64,
    /// Height of the grid centre above ground, m.
    pub hub_height: f64,
    /// Radius of the disk used for rotor averages, m.
    pub rotor_radius: f64,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 15;

    pub fn new(ny: usize, nz: usize, extent: f64, hub_height: f64, rotor_radius: f64) -> Result<Self> {
        let grid = Self {
            ny,
            nz,
            extent,
            hub_height,
            rotor_radius,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// 15 x 15 points over a square of half-width `rotor_radius`.
    pub fn rotor_default(rotor_radius: f64, hub_height: f64) -> Self {
        Self {
            ny: Self::DEFAULT_POINTS,
            nz: Self::DEFAULT_POINTS,
            extent: rotor_radius,
            hub_height,
            rotor_radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ny < 2 || self.nz < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points per axis, got {} x {}",
                self.ny, self.nz
            )));
        }
        if !(self.rotor_radius > 0.0) || !self.rotor_radius.is_finite() {
            return Err(Error::InvalidGrid("rotor radius must be positive".into()));
        }
        if self.extent < self.rotor_radius {
            return Err(Error::InvalidGrid(format!(
                "extent {} m does not cover rotor radius {} m",
                self.extent, self.rotor_radius
            )));
        }
        if self.hub_height <= self.extent {
            return Err(Error::InvalidGrid(format!(
                "grid reaches below ground (hub height {} m, extent {} m)",
                self.hub_height, self.extent
            )));
        }
        let n = self.disk_indices().len();
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "only {n} grid points inside the rotor disk, need at least 3"
            )));
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        self.ny * self.nz
    }

    pub fn spacing(&self) -> (f64, f64) {
        (
            2.0 * self.extent / (self.ny - 1) as f64,
            2.0 * self.extent / (self.nz - 1) as f64,
        )
    }

    pub fn y_offset(&self, iy: usize) -> f64 {
        -self.extent + iy as f64 * self.spacing().0
    }

    pub fn z_offset(&self, iz: usize) -> f64 {
        -self.extent + iz as f64 * self.spacing().1
    }

    /// Flat point index, row-major in z.
    pub fn index(&self, iy: usize, iz: usize) -> usize {
        iz * self.ny + iy
    }

    /// Offsets `(dy, dz)` from the hub for every grid point.
    pub fn offsets(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.n_points());
        for iz in 0..self.nz {
            for iy in 0..self.ny {
                out.push((self.y_offset(iy), self.z_offset(iz)));
            }
        }
        out
    }

    /// Indices of the points inside the rotor disk.
    pub fn disk_indices(&self) -> Vec<usize> {
        let r2 = self.rotor_radius * self.rotor_radius * (1.0 + 1e-12);
        self.offsets()
            .iter()
            .enumerate()
            .filter(|(_, (dy, dz))| dy * dy + dz * dz <= r2)
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the point closest to the hub.
    pub fn hub_index(&self) -> usize {
        self.offsets()
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let ra = a.1 .0.hypot(a.1 .1);
                let rb = b.1 .0.hypot(b.1 .1);
                ra.total_cmp(&rb)
            })
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Bilinear interpolation stencil for an arbitrary rotor-plane offset,
    /// clamped to the grid boundary: `[(index, weight); 4]`.
    pub fn stencil(&self, dy: f64, dz: f64) -> [(usize, f64); 4] {
        let (hy, hz) = self.spacing();
        let fy = ((dy + self.extent) / hy).clamp(0.0, (self.ny - 1) as f64);
        let fz = ((dz + self.extent) / hz).clamp(0.0, (self.nz - 1) as f64);
        let iy = (fy.floor() as usize).min(self.ny - 2);
        let iz = (fz.floor() as usize).min(self.nz - 2);
        let ty = fy - iy as f64;
        let tz = fz - iz as f64;
        [
            (self.index(iy, iz), (1.0 - ty) * (1.0 - tz)),
            (self.index(iy + 1, iz), ty * (1.0 - tz)),
            (self.index(iy, iz + 1), (1.0 - ty) * tz),
            (self.index(iy + 1, iz + 1), ty * tz),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_valid_and_centred() {
        let g = GridSpec::rotor_default(89.15, 119.0);
        g.validate().unwrap();
        let hub = g.hub_index();
        assert_eq!(hub, g.index(7, 7));
        let (dy, dz) = g.offsets()[hub];
        assert!(dy.abs() < 1e-12 && dz.abs() < 1e-12);
        // corners fall outside the disk, axis tips inside
        let disk = g.disk_indices();
        assert!(!disk.contains(&g.index(0, 0)));
        assert!(disk.contains(&g.index(0, 7)));
        assert!(disk.contains(&g.index(7, 14)));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(1, 5, 90.0, 119.0, 89.0).is_err());
        assert!(GridSpec::new(5, 5, 80.0, 119.0, 89.0).is_err());
        assert!(GridSpec::new(5, 5, 90.0, 80.0, 89.0).is_err());
        // 2 x 2 grid has only corner points, all outside the disk
        assert!(matches!(
            GridSpec::new(2, 2, 90.0, 119.0, 89.0),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn stencil_reproduces_affine_functions() {
        let g = GridSpec::rotor_default(89.15, 119.0);
        let f = |dy: f64, dz: f64| 3.0 - 0.2 * dy + 0.05 * dz;
        let offsets = g.offsets();
        for &(dy, dz) in &[(0.0, 0.0), (13.7, -41.2), (-88.0, 88.0), (89.15, 0.0)] {
            let v: f64 = g
                .stencil(dy, dz)
                .iter()
                .map(|&(i, w)| w * f(offsets[i].0, offsets[i].1))
                .sum();
            assert!((v - f(dy, dz)).abs() < 1e-12);
        }
    }
}
