//! Tabulated thrust and power coefficient surfaces.
//!
//! File format (plain text, `#` starts a comment line):
//!
//! ```text
//! [pitch_deg] <n_pitch>
//! <n_pitch ascending pitch angles, deg>
//! [tsr] <n_tsr>
//! <n_tsr ascending tip-speed ratios>
//! [ct] <n_pitch> <n_tsr>
//! <n_pitch rows of n_tsr values>
//! [cp] <n_pitch> <n_tsr>
//! <n_pitch rows of n_tsr values>
//! ```
//!
//! Values may be split over lines freely; each section is read as a
//! whitespace-separated token stream of the announced length.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Shipped surfaces, generated by [`surrogate_surfaces`].
pub const SHIPPED_SURFACES: &str = include_str!("../../data/dtu10mw_surfaces.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSurface {
    pitch_deg: Vec<f64>,
    tsr: Vec<f64>,
    /// Row-major `[pitch][tsr]`.
    ct: Vec<f64>,
    cp: Vec<f64>,
}

impl CoefficientSurface {
    pub fn new(pitch_deg: Vec<f64>, tsr: Vec<f64>, ct: Vec<f64>, cp: Vec<f64>) -> Result<Self> {
        let n = pitch_deg.len() * tsr.len();
        if pitch_deg.len() < 2 || tsr.len() < 2 {
            return Err(Error::Table("need at least two grid points per axis".into()));
        }
        if ct.len() != n || cp.len() != n {
            return Err(Error::Table(format!(
                "expected {n} coefficients, got ct {} / cp {}",
                ct.len(),
                cp.len()
            )));
        }
        let ascending = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        if !ascending(&pitch_deg) || !ascending(&tsr) {
            return Err(Error::Table("grids must be strictly ascending".into()));
        }
        if ct.iter().chain(&cp).any(|x| !x.is_finite()) {
            return Err(Error::Table("non-finite coefficient".into()));
        }
        Ok(Self { pitch_deg, tsr, ct, cp })
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED_SURFACES).expect("shipped coefficient table is valid")
    }

    pub fn pitch_grid_deg(&self) -> &[f64] {
        &self.pitch_deg
    }

    pub fn tsr_grid(&self) -> &[f64] {
        &self.tsr
    }

    pub fn ct_table(&self) -> &[f64] {
        &self.ct
    }

    pub fn cp_table(&self) -> &[f64] {
        &self.cp
    }

    /// Thrust coefficient at pitch `pitch` (rad) and tip-speed ratio `tsr`.
    pub fn ct(&self, pitch: f64, tsr: f64) -> f64 {
        self.bilinear(&self.ct, pitch.to_degrees(), tsr)
    }

    /// Power coefficient at pitch `pitch` (rad) and tip-speed ratio `tsr`.
    pub fn cp(&self, pitch: f64, tsr: f64) -> f64 {
        self.bilinear(&self.cp, pitch.to_degrees(), tsr)
    }

    fn bilinear(&self, table: &[f64], pitch_deg: f64, tsr: f64) -> f64 {
        let (i, a) = locate(&self.pitch_deg, pitch_deg);
        let (j, b) = locate(&self.tsr, tsr);
        let nt = self.tsr.len();
        let v00 = table[i * nt + j];
        let v01 = table[i * nt + j + 1];
        let v10 = table[(i + 1) * nt + j];
        let v11 = table[(i + 1) * nt + j + 1];
        (1.0 - a) * ((1.0 - b) * v00 + b * v01) + a * ((1.0 - b) * v10 + b * v11)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Tokens(Box::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.starts_with('#'))
                .flat_map(str::split_whitespace),
        ));
        let np = t.section("pitch_deg", 1)?[0];
        let pitch = t.values(np, "pitch_deg")?;
        let nt = t.section("tsr", 1)?[0];
        let tsr = t.values(nt, "tsr")?;
        let mut tables = Vec::with_capacity(2);
        for name in ["ct", "cp"] {
            let dims = t.section(name, 2)?;
            if dims != [np, nt] {
                return Err(Error::Table(format!("[{name}] dimensions {dims:?} != [{np}, {nt}]")));
            }
            tables.push(t.values(np * nt, name)?);
        }
        if let Some(extra) = t.0.next() {
            return Err(Error::Table(format!("unexpected trailing token `{extra}`")));
        }
        let cp = tables.pop().unwrap();
        let ct = tables.pop().unwrap();
        Self::new(pitch, tsr, ct, cp)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Thrust and power coefficient surfaces, rows = pitch, columns = tip-speed ratio");
        let row = |s: &mut String, vals: &[f64], prec: usize| {
            let line: Vec<String> = vals.iter().map(|v| format!("{v:.prec$}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        };
        let _ = writeln!(s, "[pitch_deg] {}", self.pitch_deg.len());
        row(&mut s, &self.pitch_deg, 3);
        let _ = writeln!(s, "[tsr] {}", self.tsr.len());
        row(&mut s, &self.tsr, 3);
        let nt = self.tsr.len();
        for (name, table) in [("ct", &self.ct), ("cp", &self.cp)] {
            let _ = writeln!(s, "[{name}] {} {}", self.pitch_deg.len(), nt);
            for r in table.chunks(nt) {
                row(&mut s, r, 7);
            }
        }
        s
    }
}

struct Tokens<'a>(Box<dyn Iterator<Item = &'a str> + 'a>);

impl Tokens<'_> {
    fn next(&mut self, what: &str) -> Result<String> {
        self.0
            .next()
            .map(str::to_owned)
            .ok_or_else(|| Error::Table(format!("[{what}] ended early")))
    }

    fn section(&mut self, name: &str, dims: usize) -> Result<Vec<usize>> {
        let tag = self.next(name)?;
        if tag != format!("[{name}]") {
            return Err(Error::Table(format!("expected [{name}], found `{tag}`")));
        }
        (0..dims)
            .map(|_| {
                self.next(name)?
                    .parse()
                    .map_err(|_| Error::Table(format!("bad size in [{name}]")))
            })
            .collect()
    }

    fn values(&mut self, n: usize, name: &str) -> Result<Vec<f64>> {
        (0..n)
            .map(|_| {
                self.next(name)?
                    .parse::<f64>()
                    .map_err(|e| Error::Table(format!("[{name}]: {e}")))
            })
            .collect()
    }
}

/// Cell index and fractional position, clamped to the grid.
fn locate(grid: &[f64], x: f64) -> (usize, f64) {
    let n = grid.len();
    if x <= grid[0] {
        return (0, 0.0);
    }
    if x >= grid[n - 1] {
        return (n - 2, 1.0);
    }
    let i = grid.partition_point(|&g| g <= x) - 1;
    let i = i.min(n - 2);
    (i, (x - grid[i]) / (grid[i + 1] - grid[i]))
}

/// Exponential-family surrogate behind the shipped table.
///
/// Power: the Heier form `c1 (c2/λi − c3 β − c4) exp(−c5/λi) + c6 λ`,
/// stretched in λ and scaled so the optimum sits at λ = 7.5 with Cp = 0.476,
/// clipped at zero.
///
/// Thrust: `λ² h(k1/λ − β)` with `h` a softplus of the effective inflow angle,
/// so that blade thrust is linear in wind speed and pitch in attached flow and
/// its wind-speed sensitivity does not depend on pitch.
pub mod surrogate {
    pub const TSR_OPT: f64 = 7.5;
    pub const CP_MAX: f64 = 0.476;
    pub const CT_SLOPE: f64 = 0.045;
    pub const CT_INFLOW_GAIN: f64 = 2.37;
    pub const CT_SOFTNESS: f64 = 0.02;

    const HEIER: [f64; 6] = [0.5176, 116.0, 0.4, 5.0, 21.0, 0.0068];

    fn heier(tsr: f64, pitch_deg: f64) -> f64 {
        let inv = 1.0 / (tsr + 0.08 * pitch_deg) - 0.035 / (pitch_deg.powi(3) + 1.0);
        HEIER[0] * (HEIER[1] * inv - HEIER[2] * pitch_deg - HEIER[3]) * (-HEIER[4] * inv).exp() + HEIER[5] * tsr
    }

    /// Optimum of the unscaled form at zero pitch, by golden-section search.
    fn heier_optimum() -> (f64, f64) {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (4.0, 12.0);
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if heier(c, 0.0) > heier(d, 0.0) {
                b = d;
            } else {
                a = c;
            }
        }
        let x = 0.5 * (a + b);
        (x, heier(x, 0.0))
    }

    pub fn cp(pitch_deg: f64, tsr: f64) -> f64 {
        let (tsr_h, cp_h) = heier_optimum();
        let stretch = tsr_h / TSR_OPT;
        (CP_MAX / cp_h * heier(tsr * stretch, pitch_deg)).max(0.0)
    }

    pub fn ct(pitch_deg: f64, tsr: f64) -> f64 {
        let x = CT_INFLOW_GAIN / tsr - pitch_deg.to_radians();
        let z = x / CT_SOFTNESS;
        let softplus = if z > 30.0 { z } else { z.exp().ln_1p() };
        tsr * tsr * CT_SLOPE * CT_SOFTNESS * softplus
    }
}

/// Build the tabulated surfaces from [`surrogate`]: pitch 0..40 deg in 0.5 deg
/// steps, tip-speed ratio 1.5..16 in 0.25 steps.
pub fn surrogate_surfaces() -> CoefficientSurface {
    let pitch: Vec<f64> = (0..=80).map(|i| i as f64 * 0.5).collect();
    let tsr: Vec<f64> = (0..=58).map(|j| 1.5 + j as f64 * 0.25).collect();
    let mut ct = Vec::with_capacity(pitch.len() * tsr.len());
    let mut cp = Vec::with_capacity(pitch.len() * tsr.len());
    for &b in &pitch {
        for &l in &tsr {
            ct.push(surrogate::ct(b, l));
            cp.push(surrogate::cp(b, l));
        }
    }
    CoefficientSurface::new(pitch, tsr, ct, cp).expect("surrogate grid is valid")
}
