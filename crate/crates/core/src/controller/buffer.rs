//! Sliding-window mean and population standard deviation.

use std::collections::VecDeque;

/// Fixed-length window with running sums. Values are shifted by an anchor
/// (the first sample since the last rebuild) to limit cancellation, and the
/// sums are rebuilt from scratch once per window length.
#[derive(Debug, Clone)]
pub struct SlidingStats {
    len: usize,
    buf: VecDeque<f64>,
    anchor: f64,
    sum: f64,
    sum_sq: f64,
    since_rebuild: usize,
}

impl SlidingStats {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "window length must be positive");
        Self {
            len,
            buf: VecDeque::with_capacity(len),
            anchor: 0.0,
            sum: 0.0,
            sum_sq: 0.0,
            since_rebuild: 0,
        }
    }

    /// Window of `window` seconds at sample interval `dt`.
    pub fn with_duration(window: f64, dt: f64) -> Self {
        Self::new(((window / dt).round() as usize).max(1))
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn is_ready(&self) -> bool {
        self.buf.len() == self.len
    }

    pub fn push(&mut self, x: f64) {
        if self.buf.is_empty() {
            self.anchor = x;
        }
        if self.buf.len() == self.len {
            let old = self.buf.pop_front().unwrap() - self.anchor;
            self.sum -= old;
            self.sum_sq -= old * old;
        }
        self.buf.push_back(x);
        let d = x - self.anchor;
        self.sum += d;
        self.sum_sq += d * d;
        self.since_rebuild += 1;
        if self.since_rebuild >= self.len {
            self.rebuild();
        }
    }

    fn rebuild(&mut self) {
        self.anchor = self.buf.front().copied().unwrap_or(0.0);
        self.sum = 0.0;
        self.sum_sq = 0.0;
        for &x in &self.buf {
            let d = x - self.anchor;
            self.sum += d;
            self.sum_sq += d * d;
        }
        self.since_rebuild = 0;
    }

    /// `(mean, population std)` once the window is full.
    pub fn stats(&self) -> Option<(f64, f64)> {
        if !self.is_ready() {
            return None;
        }
        let n = self.len as f64;
        let m = self.sum / n;
        let var = (self.sum_sq / n - m * m).max(0.0);
        Some((self.anchor + m, var.sqrt()))
    }

    pub fn clear(&mut self) {
        self.buf.clear();
        self.sum = 0.0;
        self.sum_sq = 0.0;
        self.since_rebuild = 0;
    }
}
