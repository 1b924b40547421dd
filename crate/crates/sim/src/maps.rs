//! Pointwise field packings on grids: `FieldState ↔ SpinorField`.

use num_complex::Complex64;
use zeromass_core::{FieldPacking, PackingName};

use crate::error::SimError;
use crate::grid::{FieldState, GridSpec, SpinorField};

/// Floating-point copy of a packing and its exact left inverse.
#[derive(Clone, Debug)]
pub struct NumericPacking {
    pub name: String,
    pub kind: Option<PackingName>,
    pub dim: usize,
    forward: Vec<Complex64>,
    used: Vec<usize>,
    inverse: Vec<f64>,
}

impl NumericPacking {
    pub fn new(packing: &FieldPacking) -> Self {
        let dim = packing.dim();
        let forward = packing
            .matrix
            .entries()
            .iter()
            .map(|z| {
                let (re, im) = z.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect();
        let used: Vec<usize> = packing.used_vars.iter().map(|v| v.index()).collect();
        let inverse = packing
            .left_inverse()
            .entries()
            .iter()
            .map(|z| z.to_f64_pair().0)
            .collect();
        Self {
            name: packing.name.clone(),
            kind: packing.kind,
            dim,
            forward,
            used,
            inverse,
        }
    }

    pub fn used_components(&self) -> &[usize] {
        &self.used
    }

    fn pack_point(&self, u: &[f64; 8]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..8).map(|c| self.forward[r * 8 + c] * u[c]).sum())
            .collect()
    }

    /// Least-squares `u` on the used components, plus the pointwise
    /// off-image residual `|ψ − L u|_∞`.
    fn unpack_point(&self, psi: &[Complex64]) -> ([f64; 8], f64) {
        let w: Vec<f64> = psi
            .iter()
            .map(|z| z.re)
            .chain(psi.iter().map(|z| z.im))
            .collect();
        let cols = 2 * self.dim;
        let mut u = [0.0; 8];
        for (r, &var) in self.used.iter().enumerate() {
            u[var] = (0..cols).map(|c| self.inverse[r * cols + c] * w[c]).sum();
        }
        let back = self.pack_point(&u);
        let res = back
            .iter()
            .zip(psi)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        (u, res)
    }
}

/// `ψ = L u` at every grid point.
pub fn fields_to_wavefunction(packing: &NumericPacking, state: &FieldState) -> SpinorField {
    let g = state.grid;
    let np = g.points();
    let mut out = SpinorField::zeros(g, packing.dim);
    for idx in 0..np {
        let v = packing.pack_point(&state.at(idx));
        for (c, z) in v.into_iter().enumerate() {
            out.data[c * np + idx] = z;
        }
    }
    out
}

/// Inverse of [`fields_to_wavefunction`] on the image of the packing.
/// Components the packing does not use come back as zero. Fails at the first
/// grid point whose off-image residual exceeds `tol`; otherwise returns the
/// largest residual seen.
pub fn wavefunction_to_fields(
    packing: &NumericPacking,
    psi: &SpinorField,
    tol: f64,
) -> Result<(FieldState, f64), SimError> {
    if psi.m != packing.dim {
        return Err(SimError::Dimension {
            what: format!("packing {}", packing.name),
            expected: packing.dim,
            got: psi.m,
        });
    }
    let g = psi.grid;
    let np = g.points();
    let mut state = FieldState::zeros(g);
    let mut worst = 0.0f64;
    for idx in 0..np {
        let (u, res) = packing.unpack_point(&psi.at(idx));
        // also rejects NaN
        if res.is_nan() || res > tol {
            return Err(SimError::OffImage {
                residual: res,
                point: g.unindex(idx),
                tol,
            });
        }
        worst = worst.max(res);
        for (c, v) in u.into_iter().enumerate() {
            state.components[c][idx] = v;
        }
    }
    Ok((state, worst))
}

/// `F = E + i c B` at one point.
pub fn rs_vector(e: [f64; 3], b: [f64; 3], c: f64) -> [Complex64; 3] {
    std::array::from_fn(|k| Complex64::new(e[k], c * b[k]))
}

/// Builds a field state from a closure of position.
pub fn state_from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> [f64; 8]) -> FieldState {
    let mut s = FieldState::zeros(grid);
    for idx in 0..grid.points() {
        let v = f(grid.coords(idx));
        for c in 0..8 {
            s.components[c][idx] = v[c];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use zeromass_core::packing;

    fn grid() -> GridSpec {
        GridSpec {
            n: 4,
            ..GridSpec::default()
        }
    }

    #[test]
    fn bijective_roundtrip() {
        let g = grid();
        let s = state_from_fn(g, |x| {
            std::array::from_fn(|c| (c as f64 + 1.0) * (x[0] + 0.5 * x[1] - x[2]).sin())
        });
        for name in [PackingName::Phi, PackingName::PhiTilde, PackingName::Theta] {
            let p = NumericPacking::new(&packing(name));
            let psi = fields_to_wavefunction(&p, &s);
            let (back, res) = wavefunction_to_fields(&p, &psi, 1e-12).unwrap();
            assert!(res < 1e-13);
            for c in 0..8 {
                for (a, b) in back.components[c].iter().zip(&s.components[c]) {
                    assert!((a - b).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn off_image_is_reported_with_location() {
        let g = grid();
        let p = NumericPacking::new(&packing(PackingName::RsSpinor));
        let mut psi = SpinorField::zeros(g, 4);
        // RS has equal middle components; break that at one point.
        let idx = g.index(1, 2, 3);
        psi.component_mut(1)[idx] = Complex64::new(1.0, 0.0);
        match wavefunction_to_fields(&p, &psi, 1e-10) {
            Err(SimError::OffImage { point, .. }) => assert_eq!(point, (1, 2, 3)),
            other => panic!("expected off-image error, got {other:?}"),
        }
    }

    #[test]
    fn rs_vector_scales_b() {
        let f = rs_vector([1.0, 0.0, 0.0], [0.0, 2.0, 0.0], 3.0);
        assert_eq!(f[1], Complex64::new(0.0, 6.0));
    }
}
