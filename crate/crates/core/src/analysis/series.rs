//! Column-oriented case time series and its text format.
//!
//! ```text
//! # tlac case series v1
//! time u_eff_true ... degenerate
//! 100 11.93 ... 0
//! ```
//!
//! One header line of column names, then one whitespace-separated row per
//! sample. Numbers use the shortest representation that round-trips.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

macro_rules! case_series {
    ($($(#[$doc:meta])* $name:ident),* $(,)?) => {
        /// Decimated closed-loop signals of one case. Shears in 1/s, moments in
        /// N m, forces in N, power in W, angles in rad.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        pub struct CaseSeries {
            $($(#[$doc])* pub $name: Vec<f64>,)*
        }

        impl CaseSeries {
            pub const COLUMNS: &'static [&'static str] = &[$(stringify!($name)),*];

            pub fn column(&self, name: &str) -> Option<&[f64]> {
                match name {
                    $(stringify!($name) => Some(&self.$name),)*
                    _ => None,
                }
            }

            fn columns(&self) -> Vec<&Vec<f64>> {
                vec![$(&self.$name),*]
            }

            fn columns_mut(&mut self) -> Vec<&mut Vec<f64>> {
                vec![$(&mut self.$name),*]
            }
        }
    };
}

case_series! {
    /// s
    time,
    u_eff_true,
    delta_h_true,
    delta_v_true,
    delta_true,
    /// Unfiltered estimate.
    u_eff_raw,
    delta_v_raw,
    delta_h_raw,
    /// Filtered estimate with the run's bias table removed.
    u_eff_est,
    delta_v_est,
    delta_h_est,
    delta_est,
    rotor_speed,
    pitch,
    gen_torque,
    /// Electrical power.
    power,
    thrust,
    m_oop1,
    m_oop2,
    m_oop3,
    m_tower_fa,
    m_hub_tilt,
    p_sp,
    /// Numeric [`crate::controller::ControlMode`] code.
    mode,
    /// 1 when the estimator held a value.
    degenerate,
}

impl CaseSeries {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Append one row in [`Self::COLUMNS`] order.
    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), Self::COLUMNS.len());
        for (col, v) in self.columns_mut().into_iter().zip(row) {
            col.push(*v);
        }
    }

    /// Rows with index in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        let mut out = Self::default();
        for (dst, src) in out.columns_mut().into_iter().zip(self.columns()) {
            dst.extend_from_slice(&src[range.clone()]);
        }
        out
    }

    /// Rows with `time >= t0`.
    pub fn since(&self, t0: f64) -> Self {
        let k = self.time.partition_point(|&t| t < t0 - 1e-9);
        self.slice(k..self.len())
    }

    pub fn dt(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        (self.time[self.len() - 1] - self.time[0]) / (self.len() - 1) as f64
    }

    pub fn to_text(&self) -> String {
        let cols = self.columns();
        let mut s = String::with_capacity(self.len() * cols.len() * 12);
        s.push_str("# tlac case series v1\n");
        s.push_str(&Self::COLUMNS.join(" "));
        s.push('\n');
        for k in 0..self.len() {
            for (j, c) in cols.iter().enumerate() {
                if j > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", c[k]);
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty series".into()))?
            .split_whitespace()
            .collect();
        if header != Self::COLUMNS {
            return Err(Error::InvalidArgument("series header does not match the expected columns".into()));
        }
        let mut out = Self::default();
        let mut row = Vec::with_capacity(header.len());
        for (n, line) in lines.enumerate() {
            row.clear();
            for tok in line.split_whitespace() {
                row.push(
                    tok.parse::<f64>()
                        .map_err(|e| Error::InvalidArgument(format!("series row {}: {e}", n + 1)))?,
                );
            }
            if row.len() != header.len() {
                return Err(Error::InvalidArgument(format!("series row {} has {} values", n + 1, row.len())));
            }
            out.push_row(&row);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let mut s = CaseSeries::default();
        for k in 0..5 {
            let row: Vec<f64> = (0..CaseSeries::COLUMNS.len())
                .map(|j| (k * 31 + j) as f64 / 7.0 + 1e-13)
                .collect();
            s.push_row(&row);
        }
        let back = CaseSeries::parse(&s.to_text()).unwrap();
        assert_eq!(s, back);
        assert_eq!(s.column("m_oop2").unwrap(), back.m_oop2.as_slice());
    }

    #[test]
    fn since_drops_leading_rows() {
        let mut s = CaseSeries::default();
        for k in 0..10 {
            let mut row = vec![0.0; CaseSeries::COLUMNS.len()];
            row[0] = k as f64;
            s.push_row(&row);
        }
        assert_eq!(s.since(4.0).time, vec![4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
    }
}
