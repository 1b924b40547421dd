//! Deterministic band-limited initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::fft::Fft3;
use crate::grid::{FieldState, GridSpec, SpinorField};

/// Nonzero integer modes with every component in `[−band, band]`.
fn band_modes(band: usize) -> Vec<[i64; 3]> {
    let b = band as i64;
    let mut out = Vec::new();
    for mx in -b..=b {
        for my in -b..=b {
            for mz in -b..=b {
                if [mx, my, mz] != [0, 0, 0] {
                    out.push([mx, my, mz]);
                }
            }
        }
    }
    out
}

fn bin(grid: &GridSpec, mode: [i64; 3]) -> usize {
    let n = grid.n as i64;
    let w = |m: i64| m.rem_euclid(n) as usize;
    grid.index(w(mode[0]), w(mode[1]), w(mode[2]))
}

fn check_band(grid: &GridSpec, band: usize) -> Result<(), SimError> {
    grid.validate()?;
    if band == 0 || band >= grid.n / 2 {
        return Err(SimError::BandTooLarge {
            band,
            half: grid.n / 2,
        });
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Spectra for `count` scalar fields, normalized so the fields are O(1).
fn random_spectra(
    grid: &GridSpec,
    rng: &mut ChaCha8Rng,
    band: usize,
    count: usize,
) -> (Vec<[i64; 3]>, Vec<Vec<Complex64>>) {
    let modes = band_modes(band);
    let np = grid.points() as f64;
    let norm = np / (modes.len() as f64).sqrt();
    let coefs = (0..count)
        .map(|_| modes.iter().map(|_| draw(rng) * norm).collect())
        .collect();
    (modes, coefs)
}

/// Random real `E`, `B` built from Fourier modes with `|m_i| ≤ band`.
///
/// Without sources the fields are projected divergence-free and `E⁰ = B⁰ = 0`.
/// With sources nothing is projected and `E⁰`, `B⁰` are random as well.
pub fn make_initial_em(
    grid: &GridSpec,
    seed: u64,
    band: usize,
    with_sources: bool,
) -> Result<FieldState, SimError> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if with_sources { 8 } else { 6 };
    let (modes, mut coefs) = random_spectra(grid, &mut rng, band, count);
    if !with_sources {
        for (j, m) in modes.iter().enumerate() {
            let kn = (m.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt();
            let khat = m.map(|x| x as f64 / kn);
            for base in [0, 3] {
                let dot: Complex64 = (0..3).map(|a| coefs[base + a][j] * khat[a]).sum();
                for a in 0..3 {
                    coefs[base + a][j] -= dot * khat[a];
                }
            }
        }
    }
    let fft = Fft3::new(grid);
    let mut state = FieldState::zeros(*grid);
    for (c, spectrum) in coefs.iter().enumerate() {
        let mut buf = vec![Complex64::new(0.0, 0.0); grid.points()];
        for (m, z) in modes.iter().zip(spectrum) {
            buf[bin(grid, *m)] += z;
        }
        fft.inverse(&mut buf);
        state.components[c] = buf.iter().map(|z| z.re).collect();
    }
    Ok(state)
}

/// Random complex `m`-component band-limited field.
pub fn random_spinor(
    grid: &GridSpec,
    seed: u64,
    band: usize,
    m: usize,
) -> Result<SpinorField, SimError> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (modes, coefs) = random_spectra(grid, &mut rng, band, m);
    let fft = Fft3::new(grid);
    let mut out = SpinorField::zeros(*grid, m);
    for (c, spectrum) in coefs.iter().enumerate() {
        let buf = out.component_mut(c);
        for (mode, z) in modes.iter().zip(spectrum) {
            buf[bin(grid, *mode)] += z;
        }
        fft.inverse(buf);
    }
    Ok(out)
}

/// Random unit vector in `Cⁿ`.
pub fn random_unit_vector(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..n).map(|_| draw(&mut rng)).collect();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / nrm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::divergence;

    fn grid() -> GridSpec {
        GridSpec {
            n: 16,
            ..GridSpec::default()
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let g = grid();
        let a = make_initial_em(&g, 7, 3, false).unwrap();
        let b = make_initial_em(&g, 7, 3, false).unwrap();
        let c = make_initial_em(&g, 8, 3, false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn divergence_free_without_sources() {
        let g = grid();
        let s = make_initial_em(&g, 1, 3, false).unwrap();
        assert!(s.max_abs() > 0.1);
        assert_eq!(s.scalar_channel_max(), 0.0);
        for base in [0, 3] {
            let d = divergence(&g, [&s.components[base], &s.components[base + 1], &s.components[base + 2]]);
            assert!(d.iter().all(|v| v.abs() < 1e-10));
        }
        let with = make_initial_em(&g, 1, 3, true).unwrap();
        let d = divergence(&g, [with.e(0), with.e(1), with.e(2)]);
        assert!(d.iter().any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn band_limit_enforced() {
        let g = grid();
        assert!(matches!(
            make_initial_em(&g, 1, 8, false),
            Err(SimError::BandTooLarge { .. })
        ));
    }
}
