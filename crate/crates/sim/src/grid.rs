//! Periodic grids and the field containers that live on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Periodic cubic grid plus the time parameters of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Points per axis (even, at least 4).
    pub n: usize,
    /// Physical edge length.
    #[serde(rename = "box")]
    pub box_len: f64,
    /// Wave speed.
    pub c: f64,
    /// Snapshot interval.
    pub dt: f64,
    /// Snapshot count.
    pub steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 32,
            box_len: 2.0 * PI,
            c: 1.0,
            dt: 0.05,
            steps: 100,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return Err(SimError::BadGridSize(self.n));
        }
        for (name, value) in [("box", self.box_len), ("c", self.c), ("dt", self.dt)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SimError::NonPositive { name, value });
            }
        }
        Ok(())
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn points(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn spacing(&self) -> f64 {
        self.box_len / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Flat index; `z` varies fastest.
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    pub fn unindex(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        let h = self.spacing();
        [ix as f64 * h, iy as f64 * h, iz as f64 * h]
    }

    /// Signed integer mode for FFT bin `i`, in `[−n/2, n/2)`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Angular wavenumber used for differentiation and propagation; the
    /// Nyquist bin is mapped to zero so real fields stay real.
    pub fn wavenumber(&self, i: usize) -> f64 {
        if i == self.n / 2 {
            0.0
        } else {
            2.0 * PI * self.mode(i) as f64 / self.box_len
        }
    }

    /// Wave vector of the FFT bin at flat index `idx`.
    pub fn k_vector(&self, idx: usize) -> [f64; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        [self.wavenumber(ix), self.wavenumber(iy), self.wavenumber(iz)]
    }

    /// Snapshot times `s·dt`, `s = 0..steps`.
    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|s| s as f64 * self.dt).collect()
    }

    /// Same lattice (size and box); time parameters may differ.
    pub fn same_lattice(&self, other: &GridSpec) -> bool {
        self.n == other.n && self.box_len == other.box_len
    }
}

/// Complex `m`-component field on the grid, stored component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub grid: GridSpec,
    pub m: usize,
    pub data: Vec<Complex64>,
}

impl SpinorField {
    pub fn zeros(grid: GridSpec, m: usize) -> Self {
        Self {
            grid,
            m,
            data: vec![Complex64::new(0.0, 0.0); m * grid.points()],
        }
    }

    pub fn from_fn(grid: GridSpec, m: usize, f: impl Fn([f64; 3]) -> Vec<Complex64>) -> Self {
        let mut out = Self::zeros(grid, m);
        let np = grid.points();
        for idx in 0..np {
            let v = f(grid.coords(idx));
            for (c, val) in v.into_iter().enumerate().take(m) {
                out.data[c * np + idx] = val;
            }
        }
        out
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let np = self.grid.points();
        &self.data[c * np..(c + 1) * np]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let np = self.grid.points();
        &mut self.data[c * np..(c + 1) * np]
    }

    /// Values of all components at one grid point.
    pub fn at(&self, idx: usize) -> Vec<Complex64> {
        let np = self.grid.points();
        (0..self.m).map(|c| self.data[c * np + idx]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            grid: self.grid,
            m: self.m,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Real `E`, `B`, `E⁰`, `B⁰` grids, stored in the order
/// `E1, E2, E3, B1, B2, B3, E0, B0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub grid: GridSpec,
    pub components: [Vec<f64>; 8],
}

impl FieldState {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            components: std::array::from_fn(|_| vec![0.0; grid.points()]),
        }
    }

    pub fn uniform(grid: GridSpec, values: [f64; 8]) -> Self {
        Self {
            grid,
            components: values.map(|v| vec![v; grid.points()]),
        }
    }

    pub fn e(&self, k: usize) -> &[f64] {
        &self.components[k]
    }

    pub fn b(&self, k: usize) -> &[f64] {
        &self.components[3 + k]
    }

    pub fn e0(&self) -> &[f64] {
        &self.components[6]
    }

    pub fn b0(&self) -> &[f64] {
        &self.components[7]
    }

    pub fn at(&self, idx: usize) -> [f64; 8] {
        std::array::from_fn(|c| self.components[c][idx])
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude in the scalar channels `E⁰`, `B⁰`.
    pub fn scalar_channel_max(&self) -> f64 {
        self.components[6..]
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `∫ (|E|² + |B|²) dV`.
    pub fn energy(&self) -> f64 {
        let dv = self.grid.cell_volume();
        self.components[..6]
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v * v)
            .sum::<f64>()
            * dv
    }

    /// Discrete L2 norm over the listed components.
    pub fn l2_norm_of(&self, comps: &[usize]) -> f64 {
        let dv = self.grid.cell_volume();
        (comps
            .iter()
            .flat_map(|&c| self.components[c].iter())
            .map(|v| v * v)
            .sum::<f64>()
            * dv)
            .sqrt()
    }

    pub fn zero_scalar_channels(mut self) -> Self {
        for c in 6..8 {
            self.components[c].iter_mut().for_each(|v| *v = 0.0);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::default().validate().is_ok());
        let bad = GridSpec {
            n: 5,
            ..GridSpec::default()
        };
        assert!(matches!(bad.validate(), Err(SimError::BadGridSize(5))));
        let bad = GridSpec {
            dt: 0.0,
            ..GridSpec::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn modes_and_nyquist() {
        let g = GridSpec {
            n: 8,
            ..GridSpec::default()
        };
        let modes: Vec<i64> = (0..8).map(|i| g.mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.wavenumber(4), 0.0);
        assert!((g.wavenumber(7) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn index_roundtrip() {
        let g = GridSpec {
            n: 6,
            ..GridSpec::default()
        };
        for idx in [0, 1, 7, 100, 215] {
            let (a, b, c) = g.unindex(idx);
            assert_eq!(g.index(a, b, c), idx);
        }
    }
}
