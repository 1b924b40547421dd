//! Spectral solver for `∂tψ = −s·c·M·∇ψ` on the periodic grid.

use num_complex::Complex64;
use serde::Serialize;
use zeromass_core::{verify_pauli_algebra, ExactMatrix, Orientation, RepresentationSet};

use crate::error::SimError;
use crate::fft::Fft3;
use crate::grid::{GridSpec, SpinorField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_exact(m: &ExactMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        let data = m
            .entries()
            .iter()
            .map(|z| {
                let (re, im) = z.to_f64_pair();
                Complex64::new(re, im)
            })
            .collect();
        Self { n, data }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|r| (0..n).map(|c| self.data[r * n + c] * v[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    /// Largest entrywise distance.
    pub fn max_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A representation whose Pauli algebra has been certified exactly, with
/// floating-point copies of its matrices.
#[derive(Clone, Debug)]
pub struct CertifiedRep {
    pub name: String,
    pub dim: usize,
    pub orientation: Orientation,
    pub spatial: [CMatrix; 3],
    pub exact: RepresentationSet,
}

impl CertifiedRep {
    pub fn new(rep: &RepresentationSet) -> Result<Self, SimError> {
        let cert = verify_pauli_algebra(rep);
        if !cert.passed {
            return Err(SimError::Uncertified {
                name: rep.name.clone(),
                failures: cert.failures().map(|f| f.identity.clone()).collect(),
            });
        }
        Ok(Self {
            name: rep.name.clone(),
            dim: rep.dim,
            orientation: rep.orientation,
            spatial: std::array::from_fn(|i| CMatrix::from_exact(&rep.spatial[i])),
            exact: rep.clone(),
        })
    }

    pub fn with_orientation(&self, orientation: Orientation) -> Self {
        let mut out = self.clone();
        out.orientation = orientation;
        out.exact = out.exact.with_orientation(orientation);
        out
    }

    pub fn sign(&self) -> f64 {
        self.orientation.as_f64()
    }

    /// `M·v` for a real vector.
    pub fn dot(&self, v: [f64; 3]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        for (m, &x) in self.spatial.iter().zip(&v) {
            for (o, a) in out.data.iter_mut().zip(&m.data) {
                *o += a * x;
            }
        }
        out
    }
}

fn norm3(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// Closed-form `exp(−i·s·c·t·M·k) = cos(c|k|t) − i·s·sin(c|k|t)·M·k̂`.
pub fn propagator_matrix(rep: &CertifiedRep, k: [f64; 3], c: f64, t: f64) -> CMatrix {
    let kn = norm3(k);
    let mut out = CMatrix::identity(rep.dim);
    if kn == 0.0 {
        return out;
    }
    let theta = c * kn * t;
    let (s, co) = theta.sin_cos();
    let a = rep.dot([k[0] / kn, k[1] / kn, k[2] / kn]);
    let coef = -I * rep.sign() * s;
    for (o, x) in out.data.iter_mut().zip(&a.data) {
        *o = *o * co + coef * x;
    }
    out
}

/// Holds the spectrum of an initial field and the per-mode symbol `M·k̂`, so
/// that many snapshot times can be produced cheaply.
pub struct Evolver {
    rep: CertifiedRep,
    grid: GridSpec,
    fft: Fft3,
    spectrum: Vec<Complex64>,
    knorm: Vec<f64>,
    symbol: Vec<Complex64>,
}

impl Evolver {
    pub fn new(rep: &CertifiedRep, psi: &SpinorField) -> Result<Self, SimError> {
        if psi.m != rep.dim {
            return Err(SimError::Dimension {
                what: format!("representation {}", rep.name),
                expected: rep.dim,
                got: psi.m,
            });
        }
        psi.grid.validate()?;
        let g = psi.grid;
        let fft = Fft3::new(&g);
        let mut spectrum = psi.data.clone();
        let np = g.points();
        for c in 0..psi.m {
            fft.forward(&mut spectrum[c * np..(c + 1) * np]);
        }
        let d2 = rep.dim * rep.dim;
        let mut knorm = vec![0.0; np];
        let mut symbol = vec![ZERO; np * d2];
        for idx in 0..np {
            let k = g.k_vector(idx);
            let kn = norm3(k);
            knorm[idx] = kn;
            if kn > 0.0 {
                let a = rep.dot([k[0] / kn, k[1] / kn, k[2] / kn]);
                symbol[idx * d2..(idx + 1) * d2].copy_from_slice(&a.data);
            }
        }
        Ok(Self {
            rep: rep.clone(),
            grid: g,
            fft,
            spectrum,
            knorm,
            symbol,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// The field at time `t`, using the grid's wave speed. Same arithmetic
    /// as [`propagator_matrix`] applied per mode.
    pub fn at(&self, t: f64) -> SpinorField {
        let g = self.grid;
        let np = g.points();
        let m = self.rep.dim;
        let d2 = m * m;
        let sign = self.rep.sign();
        let mut out = vec![ZERO; m * np];
        let mut v = vec![ZERO; m];
        for idx in 0..np {
            for (c, slot) in v.iter_mut().enumerate() {
                *slot = self.spectrum[c * np + idx];
            }
            let kn = self.knorm[idx];
            if kn == 0.0 {
                for r in 0..m {
                    out[r * np + idx] = v[r];
                }
                continue;
            }
            let (s, co) = (g.c * kn * t).sin_cos();
            let coef = -I * sign * s;
            let a = &self.symbol[idx * d2..(idx + 1) * d2];
            for r in 0..m {
                let mut acc = ZERO;
                for c in 0..m {
                    acc += a[r * m + c] * v[c];
                }
                out[r * np + idx] = v[r] * co + coef * acc;
            }
        }
        for c in 0..m {
            self.fft.inverse(&mut out[c * np..(c + 1) * np]);
        }
        SpinorField { grid: g, m, data: out }
    }
}

/// `ψ(t)` from `ψ(0)`, exact in time for band-limited data.
pub fn evolve(rep: &CertifiedRep, psi: &SpinorField, t: f64) -> Result<SpinorField, SimError> {
    Ok(Evolver::new(rep, psi)?.at(t))
}

/// A helicity eigenmode `amplitude·χ·e^{i k·x}` with `(M·k̂)χ = hχ`, and its
/// angular frequency `ω = s·h·c|k|` in the convention `e^{i(k·x − ωt)}`.
pub fn plane_wave(
    rep: &CertifiedRep,
    grid: &GridSpec,
    mode: [i64; 3],
    helicity: i8,
    amplitude: Complex64,
) -> Result<(SpinorField, f64), SimError> {
    grid.validate()?;
    if mode == [0, 0, 0] {
        return Err(SimError::ZeroMode);
    }
    let half = (grid.n / 2) as i64;
    for &m in &mode {
        if m >= half || m < -half + 1 {
            return Err(SimError::ModeOutOfRange {
                component: m,
                n: grid.n,
            });
        }
    }
    let h = if helicity >= 0 { 1.0 } else { -1.0 };
    let scale = 2.0 * std::f64::consts::PI / grid.box_len;
    let k = mode.map(|m| m as f64 * scale);
    let kn = norm3(k);
    let a = rep.dot([k[0] / kn, k[1] / kn, k[2] / kn]);
    let chi = eigenvector(&a, h);
    let field = SpinorField::from_fn(*grid, rep.dim, |x| {
        let phase = Complex64::new(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).exp();
        chi.iter().map(|z| amplitude * z * phase).collect()
    });
    let omega = rep.sign() * h * grid.c * kn;
    Ok((field, omega))
}

/// Unit eigenvector of an involution `A` for eigenvalue `h`, taken as the
/// largest column of the projector `(1 + hA)/2`.
fn eigenvector(a: &CMatrix, h: f64) -> Vec<Complex64> {
    let n = a.n;
    let mut proj = CMatrix::identity(n);
    for (p, x) in proj.data.iter_mut().zip(&a.data) {
        *p = (*p + x * h) * 0.5;
    }
    let col_norm = |c: usize| (0..n).map(|r| proj.get(r, c).norm_sqr()).sum::<f64>();
    let best = (0..n)
        .max_by(|&x, &y| col_norm(x).total_cmp(&col_norm(y)))
        .expect("nonempty");
    let nrm = col_norm(best).sqrt();
    (0..n).map(|r| proj.get(r, best) / nrm).collect()
}

/// Norm of the part of `ψ̂(k)` outside the `h` eigenspace of `M·k̂`,
/// relative to the norm of `ψ`. Zero modes are ignored.
pub fn helicity_leakage(rep: &CertifiedRep, psi: &SpinorField, helicity: i8) -> f64 {
    let g = psi.grid;
    let np = g.points();
    let fft = Fft3::new(&g);
    let mut spec = psi.data.clone();
    for c in 0..psi.m {
        fft.forward(&mut spec[c * np..(c + 1) * np]);
    }
    let h = if helicity >= 0 { 1.0 } else { -1.0 };
    let (mut leak, mut total) = (0.0, 0.0);
    let mut v = vec![ZERO; psi.m];
    for idx in 0..np {
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = spec[c * np + idx];
        }
        total += v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let k = g.k_vector(idx);
        let kn = norm3(k);
        if kn == 0.0 {
            continue;
        }
        let av = rep.dot([k[0] / kn, k[1] / kn, k[2] / kn]).apply(&v);
        // (1 − hA)/2 v
        leak += v
            .iter()
            .zip(&av)
            .map(|(x, y)| ((x - y * h) * 0.5).norm_sqr())
            .sum::<f64>();
    }
    if total == 0.0 {
        0.0
    } else {
        (leak / total).sqrt()
    }
}

/// Spectral derivative of one complex grid function along `axis`.
pub fn spectral_derivative(grid: &GridSpec, data: &[Complex64], axis: usize) -> Vec<Complex64> {
    let fft = Fft3::new(grid);
    let mut spec = data.to_vec();
    fft.forward(&mut spec);
    for (idx, z) in spec.iter_mut().enumerate() {
        *z *= I * grid.k_vector(idx)[axis];
    }
    fft.inverse(&mut spec);
    spec
}

/// Spectral derivative of a real grid function.
pub fn spectral_derivative_real(grid: &GridSpec, data: &[f64], axis: usize) -> Vec<f64> {
    let cdata: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    spectral_derivative(grid, &cdata, axis)
        .into_iter()
        .map(|z| z.re)
        .collect()
}

fn real_spectrum(fft: &Fft3, data: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft.forward(&mut buf);
    buf
}

/// `Σ_a ∂_a v_a`, from one forward transform per component.
pub fn divergence(grid: &GridSpec, v: [&[f64]; 3]) -> Vec<f64> {
    let fft = Fft3::new(grid);
    let spec = v.map(|c| real_spectrum(&fft, c));
    let mut acc: Vec<Complex64> = (0..grid.points())
        .map(|idx| {
            let k = grid.k_vector(idx);
            I * (k[0] * spec[0][idx] + k[1] * spec[1][idx] + k[2] * spec[2][idx])
        })
        .collect();
    fft.inverse(&mut acc);
    acc.into_iter().map(|z| z.re).collect()
}

pub fn curl(grid: &GridSpec, v: [&[f64]; 3]) -> [Vec<f64>; 3] {
    let fft = Fft3::new(grid);
    let spec = v.map(|c| real_spectrum(&fft, c));
    std::array::from_fn(|a| {
        let (p, q) = ((a + 1) % 3, (a + 2) % 3);
        let mut acc: Vec<Complex64> = (0..grid.points())
            .map(|idx| {
                let k = grid.k_vector(idx);
                I * (k[p] * spec[q][idx] - k[q] * spec[p][idx])
            })
            .collect();
        fft.inverse(&mut acc);
        acc.into_iter().map(|z| z.re).collect()
    })
}

/// Discrete L2 norm `sqrt(Σ|ψ|² h³)`.
pub fn l2_norm(psi: &SpinorField) -> f64 {
    (psi.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * psi.grid.cell_volume()).sqrt()
}

/// `‖a − b‖ / max(‖a‖, ‖b‖)`, with `0/0 = 0`.
pub fn l2_rel_diff(a: &SpinorField, b: &SpinorField) -> Result<f64, SimError> {
    if !a.grid.same_lattice(&b.grid) {
        return Err(SimError::GridMismatch);
    }
    if a.m != b.m {
        return Err(SimError::Dimension {
            what: "spinor comparison".into(),
            expected: a.m,
            got: b.m,
        });
    }
    let diff: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = l2_norm(a).max(l2_norm(b)) / a.grid.cell_volume().sqrt();
    Ok(if scale == 0.0 { 0.0 } else { diff / scale })
}

/// Per-mode summary used in reports.
#[derive(Clone, Debug, Serialize)]
pub struct ModeCheck {
    pub mode: [i64; 3],
    pub helicity: i8,
    pub omega: f64,
    pub max_error: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use zeromass_core::{build_rep, RepName};

    fn rep(name: RepName) -> CertifiedRep {
        CertifiedRep::new(&build_rep(name)).unwrap()
    }

    fn small() -> GridSpec {
        GridSpec {
            n: 8,
            ..GridSpec::default()
        }
    }

    #[test]
    fn propagator_is_unitary_and_composes() {
        for name in RepName::ALL {
            let r = rep(name);
            let k = [0.3, -1.2, 2.0];
            let p = propagator_matrix(&r, k, 1.3, 0.7);
            let id = CMatrix::identity(r.dim);
            assert!(p.mul(&p.adjoint()).max_diff(&id) < 1e-14);
            let q = propagator_matrix(&r, k, 1.3, 0.4);
            let pq = propagator_matrix(&r, k, 1.3, 1.1);
            assert!(p.mul(&q).max_diff(&pq) < 1e-14);
        }
    }

    #[test]
    fn zero_mode_rejected() {
        let g = small();
        let err = plane_wave(&rep(RepName::Weyl), &g, [0, 0, 0], 1, Complex64::new(1.0, 0.0));
        assert!(matches!(err, Err(SimError::ZeroMode)));
    }

    #[test]
    fn plane_wave_is_eigenmode() {
        let g = small();
        let r = rep(RepName::Sigma);
        let (psi, omega) = plane_wave(&r, &g, [1, 0, 0], 1, Complex64::new(1.0, 0.0)).unwrap();
        // Σ carries orientation −1
        assert!((omega + 1.0).abs() < 1e-15);
        let t = 0.9;
        let got = evolve(&r, &psi, t).unwrap();
        let want = psi.scaled(Complex64::new(0.0, -omega * t).exp());
        assert!(l2_rel_diff(&got, &want).unwrap() < 1e-13);
    }

    #[test]
    fn weyl_along_z() {
        // For k ∥ z the +1 eigenvector of σ³ is (1, 0).
        let g = small();
        let r = rep(RepName::Weyl);
        let (psi, omega) = plane_wave(&r, &g, [0, 0, 1], 1, Complex64::new(1.0, 0.0)).unwrap();
        assert!((omega - 1.0).abs() < 1e-15);
        assert!(psi.component(1).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn derivative_of_sine() {
        let g = small();
        let f: Vec<f64> = (0..g.points()).map(|i| (2.0 * g.coords(i)[1]).sin()).collect();
        let d = spectral_derivative_real(&g, &f, 1);
        for (i, v) in d.iter().enumerate() {
            assert!((v - 2.0 * (2.0 * g.coords(i)[1]).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn rel_diff_conventions() {
        let g = small();
        let z = SpinorField::zeros(g, 2);
        assert_eq!(l2_rel_diff(&z, &z).unwrap(), 0.0);
        let other = SpinorField::zeros(GridSpec { n: 6, ..g }, 2);
        assert!(matches!(l2_rel_diff(&z, &other), Err(SimError::GridMismatch)));
    }
}
