//! Residuals of the generalized Maxwell system on reconstructed trajectories.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::SimError;
use crate::fft::Fft3;
use crate::grid::{FieldState, GridSpec};

pub const EQUATION_LABELS: [&str; 8] = [
    "dtE0/c + div E",
    "dtB0/c + div B",
    "dtE1/c - (curl B)_1 + dxE0",
    "dtE2/c - (curl B)_2 + dyE0",
    "dtE3/c - (curl B)_3 + dzE0",
    "dtB1/c + (curl E)_1 + dxB0",
    "dtB2/c + (curl E)_2 + dyB0",
    "dtB3/c + (curl E)_3 + dzB0",
];

/// Which component is differentiated in time in each equation.
const TIME_VAR: [usize; 8] = [6, 7, 0, 1, 2, 3, 4, 5];

/// Max-norm residual of each equation at interior snapshots.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualSeries {
    pub swapped: bool,
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub values: Vec<[f64; 8]>,
}

impl ResidualSeries {
    /// Largest residual over time, per equation.
    pub fn max_per_equation(&self) -> [f64; 8] {
        let mut out = [0.0f64; 8];
        for row in &self.values {
            for (o, v) in out.iter_mut().zip(row) {
                *o = o.max(*v);
            }
        }
        out
    }

    pub fn max(&self) -> f64 {
        self.max_per_equation().into_iter().fold(0.0, f64::max)
    }
}

/// Consumes snapshots one at a time and emits residuals with a centered
/// time difference, so long runs need only three snapshots in memory.
pub struct ResidualTracker {
    grid: GridSpec,
    dt: f64,
    swapped: bool,
    fft: Fft3,
    window: Vec<FieldState>,
    count: usize,
    series: ResidualSeries,
}

impl ResidualTracker {
    /// `swapped` evaluates the system with `E⁰` and `B⁰` interchanged.
    pub fn new(grid: GridSpec, dt: f64, swapped: bool) -> Self {
        Self {
            grid,
            dt,
            swapped,
            fft: Fft3::new(&grid),
            window: Vec::with_capacity(3),
            count: 0,
            series: ResidualSeries {
                swapped,
                labels: EQUATION_LABELS.iter().map(|s| s.to_string()).collect(),
                times: Vec::new(),
                values: Vec::new(),
            },
        }
    }

    pub fn push(&mut self, state: FieldState) -> Result<(), SimError> {
        if !state.grid.same_lattice(&self.grid) {
            return Err(SimError::GridMismatch);
        }
        let state = if self.swapped {
            let mut s = state;
            s.components.swap(6, 7);
            s
        } else {
            state
        };
        if self.window.len() == 3 {
            self.window.remove(0);
        }
        self.window.push(state);
        self.count += 1;
        if self.window.len() == 3 {
            let values = self.evaluate();
            self.series.times.push((self.count - 2) as f64 * self.dt);
            self.series.values.push(values);
        }
        Ok(())
    }

    fn evaluate(&self) -> [f64; 8] {
        let g = self.grid;
        let np = g.points();
        let mid = &self.window[1];
        let spectra: Vec<Vec<Complex64>> = mid
            .components
            .iter()
            .map(|c| {
                let mut buf: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                self.fft.forward(&mut buf);
                buf
            })
            .collect();
        let i = Complex64::new(0.0, 1.0);
        let inv_c2dt = 1.0 / (2.0 * self.dt * g.c);
        let mut out = [0.0; 8];
        for (eq, slot) in out.iter_mut().enumerate() {
            let mut buf = vec![Complex64::new(0.0, 0.0); np];
            for (idx, z) in buf.iter_mut().enumerate() {
                let k = g.k_vector(idx);
                let d = |var: usize, axis: usize| i * k[axis] * spectra[var][idx];
                *z = match eq {
                    0 => d(0, 0) + d(1, 1) + d(2, 2),
                    1 => d(3, 0) + d(4, 1) + d(5, 2),
                    2..=4 => {
                        let a = eq - 2;
                        let (p, q) = ((a + 1) % 3, (a + 2) % 3);
                        -(d(3 + q, p) - d(3 + p, q)) + d(6, a)
                    }
                    _ => {
                        let a = eq - 5;
                        let (p, q) = ((a + 1) % 3, (a + 2) % 3);
                        (d(q, p) - d(p, q)) + d(7, a)
                    }
                };
            }
            self.fft.inverse(&mut buf);
            let var = TIME_VAR[eq];
            let (prev, next) = (&self.window[0].components[var], &self.window[2].components[var]);
            *slot = buf
                .iter()
                .enumerate()
                .map(|(idx, z)| ((next[idx] - prev[idx]) * inv_c2dt + z.re).abs())
                .fold(0.0, f64::max);
        }
        out
    }

    pub fn finish(self) -> ResidualSeries {
        self.series
    }
}

/// Residuals of a stored trajectory sampled every `dt`.
pub fn residual_generalized_maxwell(
    trajectory: &[FieldState],
    dt: f64,
    swapped: bool,
) -> Result<ResidualSeries, SimError> {
    if trajectory.len() < 3 {
        return Err(SimError::TooFewSnapshots {
            needed: 3,
            got: trajectory.len(),
        });
    }
    let mut tracker = ResidualTracker::new(trajectory[0].grid, dt, swapped);
    for s in trajectory {
        tracker.push(s.clone())?;
    }
    Ok(tracker.finish())
}

/// Tolerance for centered-difference residuals of band-limited data:
/// `max(1e−10, 5·(c·k_max)²·dt²·‖u‖_∞)` with `k_max = (2π/box)·band·√3`.
pub fn residual_budget(grid: &GridSpec, band: usize, field_max: f64) -> f64 {
    let kmax = 2.0 * std::f64::consts::PI / grid.box_len * band as f64 * 3f64.sqrt();
    (5.0 * (grid.c * kmax).powi(2) * grid.dt.powi(2) * field_max).max(1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::state_from_fn;

    #[test]
    fn exact_vacuum_wave_has_small_residual() {
        // E = ŷ cos(x − t), B = ẑ cos(x − t)
        let g = GridSpec {
            n: 8,
            dt: 0.01,
            ..GridSpec::default()
        };
        let traj: Vec<FieldState> = (0..5)
            .map(|s| {
                let t = s as f64 * g.dt;
                state_from_fn(g, |x| {
                    let v = (x[0] - t).cos();
                    [0.0, v, 0.0, 0.0, 0.0, v, 0.0, 0.0]
                })
            })
            .collect();
        let r = residual_generalized_maxwell(&traj, g.dt, false).unwrap();
        assert_eq!(r.values.len(), 3);
        assert!(r.max() < 1e-4);
        assert!(r.max() <= residual_budget(&g, 1, 1.0));
        // time-reversed wave fails
        let bad: Vec<FieldState> = traj.iter().rev().cloned().collect();
        let r = residual_generalized_maxwell(&bad, g.dt, false).unwrap();
        assert!(r.max() > 0.5);
    }

    #[test]
    fn needs_three_snapshots() {
        let g = GridSpec {
            n: 4,
            ..GridSpec::default()
        };
        let s = FieldState::zeros(g);
        assert!(matches!(
            residual_generalized_maxwell(&[s.clone(), s], 0.1, false),
            Err(SimError::TooFewSnapshots { .. })
        ));
    }
}
