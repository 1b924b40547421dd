//! Cross-formulation runs: duality, neutrino sectors, constraints, sources
//! and dispersion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use zeromass_core::representations::{
    mo_neutrino_spinor, neutrino_transform, pauli, verify_mo_neutrino_reduction,
    verify_spinor_neutrino_reduction,
};
use zeromass_core::{
    build_rep, packing, projector, ExactMatrix, ExactScalar, Orientation, PackingName,
    ProjectorName, RepName, RepresentationSet, Var,
};

use crate::error::SimError;
use crate::fft::Fft3;
use crate::grid::{FieldState, GridSpec, SpinorField};
use crate::initial::{make_initial_em, random_spinor, random_unit_vector};
use crate::maps::{fields_to_wavefunction, wavefunction_to_fields, NumericPacking};
use crate::residual::{residual_budget, ResidualSeries, ResidualTracker};
use crate::solver::{evolve, l2_norm, l2_rel_diff, plane_wave, CMatrix, CertifiedRep, Evolver, ModeCheck};

/// A representation paired with the packing that feeds it from `E`, `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Formulation {
    SigmaRs,
    SigmaTildeMo,
    AlphaSk,
}

impl Formulation {
    pub const ALL: [Formulation; 3] = [
        Formulation::SigmaRs,
        Formulation::SigmaTildeMo,
        Formulation::AlphaSk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::SigmaRs => "SIGMA_RS",
            Formulation::SigmaTildeMo => "SIGMA_TILDE_MO",
            Formulation::AlphaSk => "ALPHA_SK",
        }
    }

    pub fn rep(self) -> RepName {
        match self {
            Formulation::SigmaRs => RepName::Sigma,
            Formulation::SigmaTildeMo => RepName::SigmaTilde,
            Formulation::AlphaSk => RepName::AlphaStandard,
        }
    }

    pub fn packing(self) -> PackingName {
        match self {
            Formulation::SigmaRs => PackingName::RsSpinor,
            Formulation::SigmaTildeMo => PackingName::Mo,
            Formulation::AlphaSk => PackingName::Sk,
        }
    }

    /// Bijective packing that agrees with [`Self::packing`] when `E⁰ = B⁰ = 0`.
    pub fn full_packing(self) -> PackingName {
        match self {
            Formulation::SigmaRs => PackingName::Phi,
            Formulation::SigmaTildeMo => PackingName::PhiTilde,
            Formulation::AlphaSk => PackingName::Theta,
        }
    }

    /// Whether the full packing reproduces the system with `E⁰ ↔ B⁰`.
    pub fn swapped(self) -> bool {
        matches!(self, Formulation::SigmaTildeMo)
    }

    pub fn constraint_projector(self) -> Option<ProjectorName> {
        match self {
            Formulation::SigmaRs => Some(ProjectorName::R),
            Formulation::SigmaTildeMo => Some(ProjectorName::RTilde),
            Formulation::AlphaSk => None,
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Formulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formulation::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown formulation `{s}`"))
    }
}

/// Pass/fail thresholds for the numerical runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub duality: f64,
    pub norm_drift: f64,
    pub energy_drift: f64,
    pub neutrino: f64,
    pub constraint: f64,
    pub dispersion: f64,
    pub reconstruction: f64,
}

impl Tolerances {
    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("duality", self.duality),
            ("norm_drift", self.norm_drift),
            ("energy_drift", self.energy_drift),
            ("neutrino", self.neutrino),
            ("constraint", self.constraint),
            ("dispersion", self.dispersion),
            ("reconstruction", self.reconstruction),
        ]
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            duality: 1e-10,
            norm_drift: 1e-12,
            energy_drift: 1e-12,
            neutrino: 1e-12,
            constraint: 1e-10,
            dispersion: 1e-12,
            reconstruction: 1e-10,
        }
    }
}

/// Representations by name, with optional replacements (used for fixtures).
#[derive(Clone, Debug, Default)]
pub struct RepTable {
    overrides: BTreeMap<String, RepresentationSet>,
}

impl RepTable {
    pub fn with_override(mut self, name: RepName, rep: RepresentationSet) -> Self {
        self.overrides.insert(name.as_str().to_string(), rep);
        self
    }

    pub fn get(&self, name: RepName) -> RepresentationSet {
        self.overrides
            .get(name.as_str())
            .cloned()
            .unwrap_or_else(|| build_rep(name))
    }

    pub fn certified(&self, name: RepName) -> Result<CertifiedRep, SimError> {
        CertifiedRep::new(&self.get(name))
    }

    pub fn all(&self) -> Vec<RepresentationSet> {
        RepName::ALL.into_iter().map(|n| self.get(n)).collect()
    }
}

/// Shared inputs of every run.
#[derive(Clone, Debug)]
pub struct RunSettings {
    pub grid: GridSpec,
    pub seed: u64,
    pub band: usize,
    pub tolerances: Tolerances,
    pub reps: RepTable,
}

impl RunSettings {
    pub fn new(grid: GridSpec, seed: u64) -> Self {
        Self {
            grid,
            seed,
            band: default_band(grid.n),
            tolerances: Tolerances::default(),
            reps: RepTable::default(),
        }
    }
}

pub fn default_band(n: usize) -> usize {
    4.min(n / 2 - 1).max(1)
}

/// One thresholded quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Verdict {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// Passes when `value > threshold`.
    pub fn above(check: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            check: check.into(),
            value,
            tolerance: threshold,
            passed: value > threshold,
        }
    }
}

fn all_passed(v: &[Verdict]) -> bool {
    v.iter().all(|x| x.passed)
}

/// Relative L2 distance of the `E`, `B` components.
pub fn em_rel_diff(a: &FieldState, b: &FieldState) -> Result<f64, SimError> {
    if !a.grid.same_lattice(&b.grid) {
        return Err(SimError::GridMismatch);
    }
    let diff: f64 = (0..6)
        .flat_map(|c| a.components[c].iter().zip(&b.components[c]))
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let na = (0..6).flat_map(|c| a.components[c].iter()).map(|x| x * x).sum::<f64>().sqrt();
    let nb = (0..6).flat_map(|c| b.components[c].iter()).map(|x| x * x).sum::<f64>().sqrt();
    let scale = na.max(nb);
    Ok(if scale == 0.0 { 0.0 } else { diff / scale })
}

/// Checks exactly that the bijective packing extends the formulation's packing.
fn check_packing_extension(f: Formulation) -> Result<(), SimError> {
    let small = packing(f.packing());
    let full = packing(f.full_packing());
    let eb: Vec<usize> = Var::EB.iter().map(|v| v.index()).collect();
    let agree = small.matrix.select_columns(&eb) == full.matrix.select_columns(&eb)
        && small.used_vars.iter().all(|v| eb.contains(&v.index()));
    if agree {
        Ok(())
    } else {
        Err(SimError::Dimension {
            what: format!("{} does not extend {}", full.name, small.name),
            expected: 0,
            got: 1,
        })
    }
}

/// One evolving formulation inside a run.
struct Track {
    formulation: Formulation,
    c: f64,
    evolver: Evolver,
    full: NumericPacking,
    norm0: f64,
}

impl Track {
    fn new(settings: &RunSettings, f: Formulation, c: f64, u0: &FieldState) -> Result<Self, SimError> {
        check_packing_extension(f)?;
        let rep = settings.reps.certified(f.rep())?;
        let small = NumericPacking::new(&packing(f.packing()));
        let psi0 = fields_to_wavefunction(&small, u0);
        let mut psi0 = psi0;
        psi0.grid = settings.grid.with_c(c);
        let evolver = Evolver::new(&rep, &psi0)?;
        Ok(Self {
            formulation: f,
            c,
            evolver,
            full: NumericPacking::new(&packing(f.full_packing())),
            norm0: l2_norm(&psi0),
        })
    }

    fn snapshot(&self, t: f64, tol: f64) -> Result<(SpinorField, FieldState), SimError> {
        let psi = self.evolver.at(t);
        let (mut u, _) = wavefunction_to_fields(&self.full, &psi, tol)?;
        u.grid = u.grid.with_c(self.c);
        Ok((psi, u))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSeries {
    pub a: String,
    pub b: String,
    pub diffs: Vec<f64>,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulationSummary {
    pub formulation: String,
    pub c: f64,
    pub norm_drift: f64,
    pub energy_drift: f64,
    pub scalar_channel_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub times: Vec<f64>,
    pub formulations: Vec<FormulationSummary>,
    pub pairs: Vec<PairSeries>,
    /// `max_diff[i][j]`: largest field difference between formulations `i`, `j`.
    pub max_diff: Vec<Vec<f64>>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

/// Evolves the same divergence-free data under several formulations and
/// compares the reconstructed `E`, `B` at every snapshot.
pub fn run_duality(
    settings: &RunSettings,
    formulations: &[Formulation],
    c_overrides: &BTreeMap<Formulation, f64>,
) -> Result<DualityReport, SimError> {
    if formulations.len() < 2 {
        return Err(SimError::TooFewFormulations(formulations.len()));
    }
    let grid = settings.grid;
    grid.validate()?;
    let tol = settings.tolerances;
    let u0 = make_initial_em(&grid, settings.seed, settings.band, false)?;
    let energy0 = u0.energy();
    let tracks = formulations
        .iter()
        .map(|&f| {
            let c = c_overrides.get(&f).copied().unwrap_or(grid.c);
            Track::new(settings, f, c, &u0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let k = tracks.len();
    let times = grid.times();
    let mut pairs: Vec<PairSeries> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            pairs.push(PairSeries {
                a: tracks[i].formulation.to_string(),
                b: tracks[j].formulation.to_string(),
                diffs: Vec::with_capacity(times.len()),
                max: 0.0,
            });
        }
    }
    let mut norm_drift = vec![0.0f64; k];
    let mut energy_drift = vec![0.0f64; k];
    let mut scalar_max = vec![0.0f64; k];
    for &t in &times {
        let mut states = Vec::with_capacity(k);
        for (n, tr) in tracks.iter().enumerate() {
            let (psi, u) = tr.snapshot(t, tol.reconstruction)?;
            let drift = if tr.norm0 == 0.0 { 0.0 } else { (l2_norm(&psi) / tr.norm0 - 1.0).abs() };
            norm_drift[n] = norm_drift[n].max(drift);
            let e = if energy0 == 0.0 { 0.0 } else { (u.energy() / energy0 - 1.0).abs() };
            energy_drift[n] = energy_drift[n].max(e);
            scalar_max[n] = scalar_max[n].max(u.scalar_channel_max());
            states.push(u);
        }
        let mut p = 0;
        for i in 0..k {
            for j in i + 1..k {
                let d = em_rel_diff(&states[i], &states[j])?;
                pairs[p].diffs.push(d);
                pairs[p].max = pairs[p].max.max(d);
                p += 1;
            }
        }
    }
    let mut max_diff = vec![vec![0.0; k]; k];
    let mut p = 0;
    for i in 0..k {
        for j in i + 1..k {
            max_diff[i][j] = pairs[p].max;
            max_diff[j][i] = pairs[p].max;
            p += 1;
        }
    }
    let mut verdicts = Vec::new();
    for pair in &pairs {
        verdicts.push(Verdict::at_most(
            format!("field difference {} vs {}", pair.a, pair.b),
            pair.max,
            tol.duality,
        ));
    }
    let summaries: Vec<FormulationSummary> = tracks
        .iter()
        .enumerate()
        .map(|(n, tr)| FormulationSummary {
            formulation: tr.formulation.to_string(),
            c: tr.c,
            norm_drift: norm_drift[n],
            energy_drift: energy_drift[n],
            scalar_channel_max: scalar_max[n],
        })
        .collect();
    for s in &summaries {
        verdicts.push(Verdict::at_most(
            format!("norm drift {}", s.formulation),
            s.norm_drift,
            tol.norm_drift,
        ));
        verdicts.push(Verdict::at_most(
            format!("energy drift {}", s.formulation),
            s.energy_drift,
            tol.energy_drift,
        ));
        verdicts.push(Verdict::at_most(
            format!("scalar channels {}", s.formulation),
            s.scalar_channel_max,
            tol.constraint,
        ));
    }
    Ok(DualityReport {
        times,
        formulations: summaries,
        pairs,
        max_diff,
        passed: all_passed(&verdicts),
        verdicts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchResult {
    pub label: String,
    /// Orientation of the comparison Weyl evolution.
    pub weyl_orientation: i64,
    pub diffs: Vec<f64>,
    pub max_rel_diff: f64,
    /// Largest norm of the part of the evolved field outside the sector.
    pub sector_leakage: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeutrinoReport {
    pub times: Vec<f64>,
    pub branches: Vec<BranchResult>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

fn neg_pauli(i: usize) -> ExactMatrix {
    pauli(i + 1).scale(&ExactScalar::from_int(-1))
}

/// Orientation of the Weyl equation equivalent to evolving `triple` with
/// orientation `host`: `+host` if the triple is `σ`, `−host` if it is `−σ`.
fn sector_orientation(triple: &[ExactMatrix; 3], host: Orientation) -> Result<Orientation, SimError> {
    if (0..3).all(|i| triple[i] == pauli(i + 1)) {
        Ok(host)
    } else if (0..3).all(|i| triple[i] == neg_pauli(i)) {
        Ok(host.flipped())
    } else {
        Err(SimError::Uncertified {
            name: "sector restriction".into(),
            failures: vec!["restricted triple is not ±sigma".into()],
        })
    }
}

fn kron_field(xi: &SpinorField, phi: &[Complex64]) -> SpinorField {
    let np = xi.grid.points();
    let mut out = SpinorField::zeros(xi.grid, xi.m * phi.len());
    for j in 0..xi.m {
        for (l, p) in phi.iter().enumerate() {
            let dst = j * phi.len() + l;
            for idx in 0..np {
                out.data[dst * np + idx] = xi.data[j * np + idx] * p;
            }
        }
    }
    out
}

fn apply_pointwise(m: &CMatrix, psi: &SpinorField) -> SpinorField {
    let np = psi.grid.points();
    let mut out = SpinorField::zeros(psi.grid, m.n);
    for idx in 0..np {
        let v = m.apply(&psi.at(idx));
        for (c, z) in v.into_iter().enumerate() {
            out.data[c * np + idx] = z;
        }
    }
    out
}

fn field_diff_norm(a: &SpinorField, b: &SpinorField) -> f64 {
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
        * a.grid.cell_volume().sqrt()
}

/// Checks that the two embedded two-component sectors evolve exactly as the
/// Weyl equation.
///
/// (a) `Ψ = ξ ⊗ φ` under Σ, projected with `½(1 + S³)`, against `ξ_W(t) ⊗ Pφ`,
///     for `φ = (1, 0)` and for a random `φ`.
/// (b) `Ψ̃ = η ⊗ (−i, 1)` under Σ̃: the extracted `η(t)`, rotated by `U`,
///     against the Weyl evolution of `Uη(0)`.
pub fn run_neutrino_consistency(settings: &RunSettings) -> Result<NeutrinoReport, SimError> {
    let grid = settings.grid;
    grid.validate()?;
    let times = grid.times();
    let sigma = settings.reps.certified(RepName::Sigma)?;
    let sigma_tilde = settings.reps.certified(RepName::SigmaTilde)?;
    let weyl = settings.reps.certified(RepName::Weyl)?;
    let mut branches = Vec::new();

    // (a)
    let spinor = verify_spinor_neutrino_reduction();
    let orient_a = sector_orientation(&spinor.restricted, sigma.orientation)?;
    let weyl_a = weyl.with_orientation(orient_a);
    let p3 = CMatrix::from_exact(&projector(ProjectorName::S3Plus));
    let xi = random_spinor(&grid, settings.seed, settings.band, 2)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let phis = [
        ("spinor sector, phi = (1,0)".to_string(), vec![one, zero]),
        (
            "spinor sector, random phi".to_string(),
            random_unit_vector(settings.seed.wrapping_add(1), 2),
        ),
    ];
    let xi_ev = Evolver::new(&weyl_a, &xi)?;
    for (label, phi) in phis {
        let big = Evolver::new(&sigma, &kron_field(&xi, &phi))?;
        let pphi = vec![phi[0], zero];
        let mut diffs = Vec::new();
        let mut leak = 0.0f64;
        for &t in &times {
            let psi = big.at(t);
            let projected = apply_pointwise(&p3, &psi);
            let want = kron_field(&xi_ev.at(t), &pphi);
            diffs.push(l2_rel_diff(&projected, &want)?);
            // full field should stay ξ_W(t) ⊗ φ
            leak = leak.max(l2_rel_diff(&psi, &kron_field(&xi_ev.at(t), &phi))?);
        }
        branches.push(BranchResult {
            label,
            weyl_orientation: orient_a.value(),
            max_rel_diff: diffs.iter().copied().fold(0.0, f64::max),
            diffs,
            sector_leakage: leak,
        });
    }

    // (b)
    let mo = verify_mo_neutrino_reduction();
    let transformed = mo.transformed.as_ref().expect("MO reduction carries U-transformed triple");
    let orient_b = sector_orientation(transformed, sigma_tilde.orientation)?;
    let weyl_b = weyl.with_orientation(orient_b);
    let u = neutrino_transform();
    let mut umat = CMatrix::from_exact(&u.raw);
    let inv_sqrt = 1.0 / u.norm_sq.to_f64_pair().0.sqrt();
    umat.data.iter_mut().for_each(|z| *z *= inv_sqrt);
    let phit: Vec<Complex64> = mo_neutrino_spinor()
        .entries()
        .iter()
        .map(|z| {
            let (re, im) = z.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect();
    let phit_norm_sq: f64 = phit.iter().map(|z| z.norm_sqr()).sum();
    // η_j = conj(φ̃)·Ψ̃_j / |φ̃|²
    let extract: Vec<Complex64> = phit.iter().map(|z| z.conj() / phit_norm_sq).collect();
    let eta = random_spinor(&grid, settings.seed.wrapping_add(2), settings.band, 2)?;
    let big = Evolver::new(&sigma_tilde, &kron_field(&eta, &phit))?;
    let zeta_ev = Evolver::new(&weyl_b, &apply_pointwise(&umat, &eta))?;
    let np = grid.points();
    let mut diffs = Vec::new();
    let mut leak = 0.0f64;
    for &t in &times {
        let psi = big.at(t);
        let mut eta_t = SpinorField::zeros(grid, 2);
        for j in 0..2 {
            for idx in 0..np {
                eta_t.data[j * np + idx] = (0..2)
                    .map(|l| extract[l] * psi.data[(j * 2 + l) * np + idx])
                    .sum();
            }
        }
        let back = kron_field(&eta_t, &phit);
        let scale = l2_norm(&psi);
        if scale > 0.0 {
            leak = leak.max(field_diff_norm(&psi, &back) / scale);
        }
        diffs.push(l2_rel_diff(&apply_pointwise(&umat, &eta_t), &zeta_ev.at(t))?);
    }
    branches.push(BranchResult {
        label: "MO sector, phi = (-i,1)".into(),
        weyl_orientation: orient_b.value(),
        max_rel_diff: diffs.iter().copied().fold(0.0, f64::max),
        diffs,
        sector_leakage: leak,
    });

    let mut verdicts = Vec::new();
    for b in &branches {
        verdicts.push(Verdict::at_most(
            format!("{}: Weyl agreement", b.label),
            b.max_rel_diff,
            settings.tolerances.neutrino,
        ));
        verdicts.push(Verdict::at_most(
            format!("{}: sector leakage", b.label),
            b.sector_leakage,
            settings.tolerances.neutrino,
        ));
    }
    Ok(NeutrinoReport {
        times,
        branches,
        passed: all_passed(&verdicts),
        verdicts,
    })
}

/// `max |(1 − P)(M·∇)(Pψ)|` evaluated spectrally.
pub fn constraint_residual(rep: &CertifiedRep, proj: &CMatrix, psi: &SpinorField) -> f64 {
    let g = psi.grid;
    let np = g.points();
    let m = rep.dim;
    let fft = Fft3::new(&g);
    let mut spec = apply_pointwise(proj, psi);
    for c in 0..m {
        fft.forward(spec.component_mut(c));
    }
    let mut comp = CMatrix::identity(m);
    for (a, p) in comp.data.iter_mut().zip(&proj.data) {
        *a -= p;
    }
    let i = Complex64::new(0.0, 1.0);
    let mut out = SpinorField::zeros(g, m);
    for idx in 0..np {
        let k = g.k_vector(idx);
        let mk = rep.dot(k);
        let v = comp.apply(&mk.apply(&spec.at(idx)));
        for (c, z) in v.into_iter().enumerate() {
            out.data[c * np + idx] = i * z;
        }
    }
    for c in 0..m {
        fft.inverse(out.component_mut(c));
    }
    out.max_abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintRun {
    pub formulation: String,
    /// `max |(1 − P)(M·∇)(Pψ)|` per snapshot, when a projector is defined.
    pub projector_residual: Option<Vec<f64>>,
    /// Largest reconstructed `|E⁰|`, `|B⁰|` per snapshot.
    pub scalar_channels: Vec<f64>,
    /// Largest `|∇·E|`, `|∇·B|` of the reconstructed fields per snapshot.
    pub divergence: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ControlRun {
    pub formulation: String,
    /// Residual of the two scalar-channel equations, per snapshot.
    pub source_residual: Vec<f64>,
    pub budget: f64,
    /// Largest generated `|E⁰|`, `|B⁰|`.
    pub generated_scalar_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub times: Vec<f64>,
    pub runs: Vec<ConstraintRun>,
    pub controls: Vec<ControlRun>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn divergence_max(u: &FieldState) -> f64 {
    let g = u.grid;
    let de = crate::solver::divergence(&g, [u.e(0), u.e(1), u.e(2)]);
    let db = crate::solver::divergence(&g, [u.b(0), u.b(1), u.b(2)]);
    max_abs(&de).max(max_abs(&db))
}

/// Divergence-free data must keep every constraint at zero; data with
/// divergence must generate scalar channels that obey the source equations.
pub fn run_constraint_monitor(
    settings: &RunSettings,
    formulations: &[Formulation],
) -> Result<ConstraintReport, SimError> {
    let grid = settings.grid;
    grid.validate()?;
    let tol = settings.tolerances;
    let times = grid.times();
    let clean = make_initial_em(&grid, settings.seed, settings.band, false)?;
    let dirty = make_initial_em(&grid, settings.seed.wrapping_add(3), settings.band, true)?
        .zero_scalar_channels();
    let mut runs = Vec::new();
    let mut controls = Vec::new();
    let mut verdicts = Vec::new();
    for &f in formulations {
        let track = Track::new(settings, f, grid.c, &clean)?;
        let rep = settings.reps.certified(f.rep())?;
        let proj = f.constraint_projector().map(|p| CMatrix::from_exact(&projector(p)));
        let mut pres = proj.as_ref().map(|_| Vec::new());
        let mut scal = Vec::new();
        let mut div = Vec::new();
        for &t in &times {
            let (psi, u) = track.snapshot(t, tol.reconstruction)?;
            if let (Some(p), Some(v)) = (&proj, pres.as_mut()) {
                v.push(constraint_residual(&rep, p, &psi));
            }
            scal.push(u.scalar_channel_max());
            div.push(divergence_max(&u));
        }
        if let Some(v) = &pres {
            verdicts.push(Verdict::at_most(
                format!("{f}: projector constraint"),
                max_abs(v),
                tol.constraint,
            ));
        }
        verdicts.push(Verdict::at_most(format!("{f}: scalar channels"), max_abs(&scal), tol.constraint));
        verdicts.push(Verdict::at_most(format!("{f}: divergence"), max_abs(&div), tol.constraint));
        runs.push(ConstraintRun {
            formulation: f.to_string(),
            projector_residual: pres,
            scalar_channels: scal,
            divergence: div,
        });

        let track = Track::new(settings, f, grid.c, &dirty)?;
        let mut tracker = ResidualTracker::new(grid, grid.dt, f.swapped());
        let mut field_max = 0.0f64;
        let mut generated = 0.0f64;
        for &t in &times {
            let (_, u) = track.snapshot(t, tol.reconstruction)?;
            field_max = field_max.max(u.max_abs());
            generated = generated.max(u.scalar_channel_max());
            tracker.push(u)?;
        }
        let series = tracker.finish();
        let source_residual: Vec<f64> = series.values.iter().map(|r| r[0].max(r[1])).collect();
        let budget = residual_budget(&grid, settings.band, field_max);
        verdicts.push(Verdict::at_most(
            format!("{f}: source equations with divergence"),
            max_abs(&source_residual),
            budget,
        ));
        verdicts.push(Verdict::above(
            format!("{f}: scalar channels generated by divergence"),
            generated,
            1e-3,
        ));
        controls.push(ControlRun {
            formulation: f.to_string(),
            source_residual,
            budget,
            generated_scalar_max: generated,
        });
    }
    Ok(ConstraintReport {
        times,
        runs,
        controls,
        passed: all_passed(&verdicts),
        verdicts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SourceRun {
    pub formulation: String,
    pub packing: String,
    pub c: f64,
    pub residuals: ResidualSeries,
    pub budget: f64,
    /// Residual when evaluated against the other `E⁰`/`B⁰` assignment.
    pub other_assignment_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedReport {
    pub runs: Vec<SourceRun>,
    /// Largest `|E⁰|`, `|B⁰|` per formulation when started without sources.
    pub reduction_scalar_max: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

/// Evolves data with nonzero `E⁰`, `B⁰` through the bijective packings and
/// checks the generalized Maxwell residuals, in the matching `E⁰`/`B⁰`
/// assignment and in the other one.
pub fn run_generalized_maxwell(
    settings: &RunSettings,
    formulations: &[Formulation],
    c_overrides: &BTreeMap<Formulation, f64>,
) -> Result<GeneralizedReport, SimError> {
    let grid = settings.grid;
    grid.validate()?;
    let tol = settings.tolerances;
    let sourced = make_initial_em(&grid, settings.seed.wrapping_add(4), settings.band, true)?;
    let clean = make_initial_em(&grid, settings.seed, settings.band, false)?;
    let times = grid.times();
    let mut runs = Vec::new();
    let mut verdicts = Vec::new();
    let mut reduction = Vec::new();
    for &f in formulations {
        let c = c_overrides.get(&f).copied().unwrap_or(grid.c);
        let rep = settings.reps.certified(f.rep())?;
        let full = NumericPacking::new(&packing(f.full_packing()));
        let mut psi0 = fields_to_wavefunction(&full, &sourced);
        psi0.grid = grid.with_c(c);
        let ev = Evolver::new(&rep, &psi0)?;
        let mut matching = ResidualTracker::new(grid, grid.dt, f.swapped());
        let mut other = ResidualTracker::new(grid, grid.dt, !f.swapped());
        let mut field_max = 0.0f64;
        for &t in &times {
            let (u, _) = wavefunction_to_fields(&full, &ev.at(t), tol.reconstruction)?;
            field_max = field_max.max(u.max_abs());
            other.push(u.clone())?;
            matching.push(u)?;
        }
        let residuals = matching.finish();
        let other_max = other.finish().max();
        let budget = residual_budget(&grid, settings.band, field_max);
        verdicts.push(Verdict::at_most(
            format!("{f}: generalized Maxwell residual"),
            residuals.max(),
            budget,
        ));
        if matches!(f, Formulation::SigmaTildeMo) {
            verdicts.push(Verdict::above(
                format!("{f}: unswapped system rejected"),
                other_max,
                budget,
            ));
        }
        runs.push(SourceRun {
            formulation: f.to_string(),
            packing: full.name.clone(),
            c,
            residuals,
            budget,
            other_assignment_max: other_max,
        });

        let mut psi0 = fields_to_wavefunction(&full, &clean);
        psi0.grid = grid.with_c(c);
        let ev = Evolver::new(&rep, &psi0)?;
        let mut smax = 0.0f64;
        for &t in &times {
            let (u, _) = wavefunction_to_fields(&full, &ev.at(t), tol.reconstruction)?;
            smax = smax.max(u.scalar_channel_max());
        }
        verdicts.push(Verdict::at_most(
            format!("{f}: reduces to Maxwell without sources"),
            smax,
            tol.constraint,
        ));
        reduction.push((f.to_string(), smax));
    }
    Ok(GeneralizedReport {
        runs,
        reduction_scalar_max: reduction,
        passed: all_passed(&verdicts),
        verdicts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DispersionReport {
    pub checks: Vec<(String, ModeCheck)>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

/// Plane-wave eigenmodes of every representation against `e^{−iωt}` with
/// `ω = ±c|k|`.
pub fn run_dispersion(settings: &RunSettings, modes: &[[i64; 3]]) -> Result<DispersionReport, SimError> {
    let grid = settings.grid;
    grid.validate()?;
    let mut checks = Vec::new();
    let mut verdicts = Vec::new();
    for name in RepName::ALL {
        let rep = settings.reps.certified(name)?;
        for &mode in modes {
            for h in [1i8, -1] {
                let (psi, omega) = plane_wave(&rep, &grid, mode, h, Complex64::new(1.0, 0.0))?;
                let mut worst = 0.0f64;
                for s in [1usize, grid.steps / 2, grid.steps.saturating_sub(1)] {
                    let t = s as f64 * grid.dt;
                    let got = evolve(&rep, &psi, t)?;
                    let want = psi.scaled(Complex64::new(0.0, -omega * t).exp());
                    worst = worst.max(l2_rel_diff(&got, &want)?);
                }
                let kn = (mode.iter().map(|&m| (m * m) as f64).sum::<f64>()).sqrt()
                    * 2.0
                    * std::f64::consts::PI
                    / grid.box_len;
                let freq_err = (omega.abs() - grid.c * kn).abs();
                verdicts.push(Verdict::at_most(
                    format!("{name} mode {mode:?} h={h}"),
                    worst.max(freq_err),
                    settings.tolerances.dispersion,
                ));
                checks.push((
                    name.to_string(),
                    ModeCheck {
                        mode,
                        helicity: h,
                        omega,
                        max_error: worst,
                    },
                ));
            }
        }
    }
    Ok(DispersionReport {
        checks,
        passed: all_passed(&verdicts),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> RunSettings {
        let grid = GridSpec {
            n: 8,
            steps: 6,
            dt: 0.1,
            ..GridSpec::default()
        };
        let mut s = RunSettings::new(grid, 11);
        s.band = 2;
        s
    }

    #[test]
    fn packings_extend() {
        for f in Formulation::ALL {
            check_packing_extension(f).unwrap();
        }
    }

    #[test]
    fn small_duality() {
        let r = run_duality(&settings(), &Formulation::ALL, &BTreeMap::new()).unwrap();
        assert!(r.passed, "{:?}", r.verdicts);
        assert_eq!(r.max_diff[1][1], 0.0);
    }

    #[test]
    fn duality_detects_wrong_speed() {
        let mut o = BTreeMap::new();
        o.insert(Formulation::AlphaSk, 1.01);
        let r = run_duality(&settings(), &Formulation::ALL, &o).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn one_formulation_rejected() {
        assert!(matches!(
            run_duality(&settings(), &[Formulation::SigmaRs], &BTreeMap::new()),
            Err(SimError::TooFewFormulations(1))
        ));
    }

    #[test]
    fn small_neutrino() {
        let r = run_neutrino_consistency(&settings()).unwrap();
        assert!(r.passed, "{:?}", r.verdicts);
        assert!(r.branches.iter().all(|b| b.weyl_orientation == 1));
    }

    #[test]
    fn small_constraints_and_sources() {
        let s = settings();
        let c = run_constraint_monitor(&s, &Formulation::ALL).unwrap();
        assert!(c.passed, "{:?}", c.verdicts);
        let g = run_generalized_maxwell(&s, &Formulation::ALL, &BTreeMap::new()).unwrap();
        assert!(g.passed, "{:?}", g.verdicts);
    }

    #[test]
    fn small_dispersion() {
        let r = run_dispersion(&settings(), &[[1, 0, 0], [1, -2, 3]]).unwrap();
        assert!(r.passed, "{:?}", r.verdicts);
    }
}
