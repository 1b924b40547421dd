//! Three-dimensional complex FFT on the periodic grid, built from 1-D passes.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n: grid.n,
            forward: planner.plan_fft_forward(grid.n),
            inverse: planner.plan_fft_inverse(grid.n),
        }
    }

    fn passes(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        // z lines are contiguous
        fft.process(data);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        // y lines: stride n
        for ix in 0..n {
            for iz in 0..n {
                for iy in 0..n {
                    line[iy] = data[(ix * n + iy) * n + iz];
                }
                fft.process(&mut line);
                for iy in 0..n {
                    data[(ix * n + iy) * n + iz] = line[iy];
                }
            }
        }
        // x lines: stride n²
        for iy in 0..n {
            for iz in 0..n {
                for ix in 0..n {
                    line[ix] = data[(ix * n + iy) * n + iz];
                }
                fft.process(&mut line);
                for ix in 0..n {
                    data[(ix * n + iy) * n + iz] = line[ix];
                }
            }
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.passes(data, &self.forward);
    }

    /// Normalized inverse: `inverse(forward(x)) == x`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.passes(data, &self.inverse);
        let s = 1.0 / (self.n * self.n * self.n) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}
