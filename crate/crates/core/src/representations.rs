//! Named Pauli-algebra representations, their commutants, projectors and the
//! neutrino transform, together with exact certificates for every identity.
//!
//! Kronecker convention: [`ExactMatrix::kron`] is the standard product. The
//! factorizations quoted alongside the explicit 4x4 matrices are written with
//! the two factors in the opposite order, so every factorization stored here
//! lists its arguments in the order that reproduces the explicit matrix under
//! the standard product (`kron_factorizations` checks each one).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::VerifyError;
use crate::exact::{ExactMatrix, ExactScalar};

/// `σ⁰..σ³`.
pub fn pauli(k: usize) -> ExactMatrix {
    match k {
        0 => ExactMatrix::identity(2),
        1 => ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]),
        2 => ExactMatrix::from_gaussian_ints(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]]),
        3 => ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

fn i_times(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_ints(rows).scale(&ExactScalar::i())
}

fn block(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> ExactMatrix {
    let n = a.rows();
    let mut out = ExactMatrix::zeros(2 * n, 2 * n);
    for (bi, bj, m) in [(0, 0, a), (0, 1, b), (1, 0, c), (1, 1, d)] {
        for i in 0..n {
            for j in 0..n {
                out.set(bi * n + i, bj * n + j, m.get(i, j).clone());
            }
        }
    }
    out
}

fn half() -> ExactScalar {
    ExactScalar::ratio(1, 2)
}

fn neg(m: &ExactMatrix) -> ExactMatrix {
    m.scale(&ExactScalar::from_int(-1))
}

/// The `Σ¹, Σ², Σ³` matrices of the bispinor formulation, entry by entry.
pub fn sigma_explicit() -> [ExactMatrix; 3] {
    [
        ExactMatrix::from_ints(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]),
        i_times(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]),
        ExactMatrix::from_ints(&[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
    ]
}

/// The Majorana–Oppenheimer `Σ̃¹, Σ̃², Σ̃³`, entry by entry.
pub fn sigma_tilde_explicit() -> [ExactMatrix; 3] {
    [
        i_times(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]),
        i_times(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        i_times(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]]),
    ]
}

/// `S¹, S², S³`, commuting with every `Σⁱ`.
pub fn s_commutant() -> Vec<ExactMatrix> {
    (1..=3).map(|k| pauli(0).kron(&pauli(k))).collect()
}

/// `S̃¹, S̃², S̃³`, commuting with every `Σ̃ⁱ`.
pub fn s_tilde_commutant() -> Vec<ExactMatrix> {
    vec![
        pauli(0).kron(&pauli(2)),
        pauli(2).kron(&pauli(3)),
        pauli(2).kron(&pauli(1)),
    ]
}

/// Dirac matrices `(γ⁰, γ¹, γ², γ³)` and the printed `γ⁵`.
#[derive(Clone, Debug)]
pub struct DiracMatrices {
    pub gamma: [ExactMatrix; 4],
    pub gamma5: ExactMatrix,
}

impl DiracMatrices {
    /// Chiral (spinor) representation.
    pub fn spinor() -> Self {
        let z = ExactMatrix::zeros(2, 2);
        let one = pauli(0);
        let g0 = block(&z, &one, &one, &z);
        let gi = |k| block(&z, &neg(&pauli(k)), &pauli(k), &z);
        Self {
            gamma: [g0, gi(1), gi(2), gi(3)],
            gamma5: block(&one, &z, &z, &neg(&one)),
        }
    }

    /// Standard (Dirac) representation.
    pub fn standard() -> Self {
        let z = ExactMatrix::zeros(2, 2);
        let one = pauli(0);
        let g0 = block(&one, &z, &z, &neg(&one));
        let gi = |k| block(&z, &pauli(k), &neg(&pauli(k)), &z);
        Self {
            gamma: [g0, gi(1), gi(2), gi(3)],
            gamma5: block(&z, &one, &one, &z),
        }
    }

    /// `i γ⁰ γ¹ γ² γ³`.
    pub fn gamma5_product(&self) -> ExactMatrix {
        let mut p = ExactMatrix::identity(4).scale(&ExactScalar::i());
        for g in &self.gamma {
            p = p.matmul(g).expect("4x4");
        }
        p
    }

    /// `αⁱ = γ⁰ γⁱ`.
    pub fn alpha(&self) -> [ExactMatrix; 3] {
        let a = |k: usize| self.gamma[0].matmul(&self.gamma[k]).expect("4x4");
        [a(1), a(2), a(3)]
    }
}

/// Which way a representation evolves: `Plus` reads `∂tψ = −c(M·∇)ψ`,
/// `Minus` reads `∂tψ = +c(M·∇)ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    pub fn value(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }

    pub fn scalar(self) -> ExactScalar {
        ExactScalar::from_int(self.value())
    }

    /// Orientation of a product of two sign factors.
    pub fn times(self, other: Self) -> Self {
        if self == other {
            Orientation::Plus
        } else {
            Orientation::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RepName {
    Weyl,
    Sigma,
    SigmaTilde,
    AlphaSpinor,
    AlphaStandard,
}

impl RepName {
    pub const ALL: [RepName; 5] = [
        RepName::Weyl,
        RepName::Sigma,
        RepName::SigmaTilde,
        RepName::AlphaSpinor,
        RepName::AlphaStandard,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepName::Weyl => "WEYL",
            RepName::Sigma => "SIGMA",
            RepName::SigmaTilde => "SIGMA_TILDE",
            RepName::AlphaSpinor => "ALPHA_SPINOR",
            RepName::AlphaStandard => "ALPHA_STANDARD",
        }
    }
}

impl fmt::Display for RepName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepName {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RepName::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::UnknownName(s.to_string()))
    }
}

/// A Hermitian anticommuting triple, its commutant, and its evolution orientation.
#[derive(Clone, Debug)]
pub struct RepresentationSet {
    pub name: String,
    pub dim: usize,
    pub spatial: [ExactMatrix; 3],
    pub commutant: Vec<ExactMatrix>,
    pub orientation: Orientation,
}

impl RepresentationSet {
    /// A representation from arbitrary matrices (used for fixtures and sub-blocks).
    pub fn custom(
        name: impl Into<String>,
        spatial: [ExactMatrix; 3],
        commutant: Vec<ExactMatrix>,
        orientation: Orientation,
    ) -> Self {
        let dim = spatial[0].rows();
        Self {
            name: name.into(),
            dim,
            spatial,
            commutant,
            orientation,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// `M·n` for an exact direction.
    pub fn dot(&self, n: &[ExactScalar; 3]) -> ExactMatrix {
        let mut acc = ExactMatrix::zeros(self.dim, self.dim);
        for (m, c) in self.spatial.iter().zip(n) {
            acc = acc.add(&m.scale(c)).expect("same dimension");
        }
        acc
    }
}

/// Builds a named representation.
///
/// The Σ and Σ̃ triples carry `Orientation::Minus`: with `F₊ = E + iB` that is
/// the orientation under which their Riemann–Silberstein packings reproduce
/// Maxwell's equations forward in time. The equivalence matrix in
/// [`crate::pde`] checks both orientations and reports which one holds.
pub fn build_rep(name: RepName) -> RepresentationSet {
    match name {
        RepName::Weyl => RepresentationSet::custom(
            "WEYL",
            [pauli(1), pauli(2), pauli(3)],
            Vec::new(),
            Orientation::Plus,
        ),
        RepName::Sigma => RepresentationSet::custom(
            "SIGMA",
            sigma_explicit(),
            s_commutant(),
            Orientation::Minus,
        ),
        RepName::SigmaTilde => RepresentationSet::custom(
            "SIGMA_TILDE",
            sigma_tilde_explicit(),
            s_tilde_commutant(),
            Orientation::Minus,
        ),
        RepName::AlphaSpinor => {
            let d = DiracMatrices::spinor();
            RepresentationSet::custom("ALPHA_SPINOR", d.alpha(), vec![d.gamma5], Orientation::Plus)
        }
        RepName::AlphaStandard => {
            let d = DiracMatrices::standard();
            RepresentationSet::custom(
                "ALPHA_STANDARD",
                d.alpha(),
                vec![d.gamma5],
                Orientation::Plus,
            )
        }
    }
}

/// One checked identity. `residual` is the exact difference `lhs − rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub passed: bool,
    pub residual: Vec<(usize, usize, String)>,
}

impl IdentityCheck {
    pub fn from_residual(identity: impl Into<String>, residual: &ExactMatrix) -> Self {
        Self {
            identity: identity.into(),
            passed: residual.is_zero(),
            residual: residual.nonzero_entries(),
        }
    }

    /// `lhs == rhs` exactly.
    pub fn equal(identity: impl Into<String>, lhs: &ExactMatrix, rhs: &ExactMatrix) -> Self {
        match lhs.sub(rhs) {
            Ok(r) => Self::from_residual(identity, &r),
            Err(e) => Self {
                identity: identity.into(),
                passed: false,
                residual: vec![(0, 0, e.to_string())],
            },
        }
    }

    pub fn boolean(identity: impl Into<String>, holds: bool) -> Self {
        Self {
            identity: identity.into(),
            passed: holds,
            residual: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub subject: String,
    pub passed: bool,
    pub identities: Vec<IdentityCheck>,
}

impl Certificate {
    pub fn new(subject: impl Into<String>, identities: Vec<IdentityCheck>) -> Self {
        let passed = identities.iter().all(|c| c.passed);
        Self {
            subject: subject.into(),
            passed,
            identities,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(|c| !c.passed)
    }
}

const AXES: [&str; 3] = ["1", "2", "3"];

/// Hermiticity of each `Mⁱ` and `{Mⁱ, Mʲ} = 2δⁱʲ·1`.
pub fn verify_pauli_algebra(rep: &RepresentationSet) -> Certificate {
    let mut checks = Vec::new();
    for (i, m) in rep.spatial.iter().enumerate() {
        checks.push(IdentityCheck::equal(
            format!("{}: M{}^dagger = M{}", rep.name, AXES[i], AXES[i]),
            &m.conj_transpose(),
            m,
        ));
    }
    let id2 = ExactMatrix::identity(rep.dim).scale(&ExactScalar::from_int(2));
    for i in 0..3 {
        for j in i..3 {
            let expected = if i == j {
                id2.clone()
            } else {
                ExactMatrix::zeros(rep.dim, rep.dim)
            };
            let name = format!("{}: {{M{}, M{}}} = {}", rep.name, AXES[i], AXES[j], if i == j { "2*1" } else { "0" });
            checks.push(match rep.spatial[i].anticommutator(&rep.spatial[j]) {
                Ok(ac) => IdentityCheck::equal(name, &ac, &expected),
                Err(e) => IdentityCheck {
                    identity: name,
                    passed: false,
                    residual: vec![(0, 0, e.to_string())],
                },
            });
        }
    }
    Certificate::new(format!("pauli_algebra[{}]", rep.name), checks)
}

/// `[Sᵏ, Mⁱ] = 0` for every commutant element and spatial matrix.
pub fn verify_commutant(rep: &RepresentationSet) -> Result<Certificate, VerifyError> {
    if rep.commutant.is_empty() {
        return Err(VerifyError::EmptyCommutant(rep.name.clone()));
    }
    let mut checks = Vec::new();
    for (k, s) in rep.commutant.iter().enumerate() {
        for (i, m) in rep.spatial.iter().enumerate() {
            let c = s.commutator(m)?;
            checks.push(IdentityCheck::from_residual(
                format!("{}: [C{}, M{}] = 0", rep.name, k + 1, AXES[i]),
                &c,
            ));
        }
    }
    Ok(Certificate::new(format!("commutant[{}]", rep.name), checks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProjectorName {
    R,
    RTilde,
    QPlus,
    QMinus,
    S3Plus,
    S3Minus,
    S2EigenMo,
}

impl ProjectorName {
    pub const ALL: [ProjectorName; 7] = [
        ProjectorName::R,
        ProjectorName::RTilde,
        ProjectorName::QPlus,
        ProjectorName::QMinus,
        ProjectorName::S3Plus,
        ProjectorName::S3Minus,
        ProjectorName::S2EigenMo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProjectorName::R => "R",
            ProjectorName::RTilde => "R_TILDE",
            ProjectorName::QPlus => "Q_PLUS",
            ProjectorName::QMinus => "Q_MINUS",
            ProjectorName::S3Plus => "S3_PLUS",
            ProjectorName::S3Minus => "S3_MINUS",
            ProjectorName::S2EigenMo => "S2_EIGEN_MO",
        }
    }
}

impl FromStr for ProjectorName {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProjectorName::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::UnknownName(s.to_string()))
    }
}

fn half_sum(sign: i64, m: &ExactMatrix) -> ExactMatrix {
    ExactMatrix::identity(4)
        .add(&m.scale(&ExactScalar::from_int(sign)))
        .expect("4x4")
        .scale(&half())
}

pub fn projector(name: ProjectorName) -> ExactMatrix {
    match name {
        ProjectorName::R => {
            let mut r = ExactMatrix::zeros(4, 4);
            r.set(0, 0, ExactScalar::one());
            for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                r.set(i, j, half());
            }
            r.set(3, 3, ExactScalar::one());
            r
        }
        ProjectorName::RTilde => {
            let mut r = ExactMatrix::identity(4);
            r.set(0, 0, ExactScalar::zero());
            r
        }
        ProjectorName::QPlus => half_sum(1, &DiracMatrices::spinor().gamma5),
        ProjectorName::QMinus => half_sum(-1, &DiracMatrices::spinor().gamma5),
        ProjectorName::S3Plus => half_sum(1, &s_commutant()[2]),
        ProjectorName::S3Minus => half_sum(-1, &s_commutant()[2]),
        ProjectorName::S2EigenMo => half_sum(1, &s_tilde_commutant()[0]),
    }
}

/// `U' = σ²(σ¹ + σ³)` with exact squared normalization: `U = U'/√2`.
#[derive(Clone, Debug)]
pub struct NeutrinoTransform {
    pub raw: ExactMatrix,
    pub norm_sq: ExactScalar,
}

impl NeutrinoTransform {
    /// `U X U†` expressed exactly as `U' X U'† / norm_sq`.
    pub fn conjugate(&self, x: &ExactMatrix) -> ExactMatrix {
        let inv = self.norm_sq.inv().expect("nonzero normalization");
        self.raw
            .matmul(x)
            .and_then(|m| m.matmul(&self.raw.conj_transpose()))
            .expect("2x2")
            .scale(&inv)
    }
}

pub fn neutrino_transform() -> NeutrinoTransform {
    let raw = pauli(2)
        .matmul(&pauli(1).add(&pauli(3)).expect("2x2"))
        .expect("2x2");
    NeutrinoTransform {
        raw,
        norm_sq: ExactScalar::from_int(2),
    }
}

/// Constant spinor `(−i, 1)ᵀ`, the `+1` eigenvector of `σ²`.
pub fn mo_neutrino_spinor() -> ExactMatrix {
    ExactMatrix::column_vector(vec![-ExactScalar::i(), ExactScalar::one()])
}

/// Result of restricting a 4x4 triple to a 2-dimensional invariant sector.
#[derive(Clone, Debug)]
pub struct SectorReduction {
    pub certificate: Certificate,
    pub restricted: [ExactMatrix; 3],
    pub transformed: Option<[ExactMatrix; 3]>,
}

/// Restricts `triple` to the span of `basis` (columns, pairwise orthogonal,
/// common squared norm `norm_sq`) and checks that the span is invariant.
fn restrict_to_sector(
    label: &str,
    triple: &[ExactMatrix; 3],
    basis: &ExactMatrix,
    norm_sq: &ExactScalar,
) -> (Vec<IdentityCheck>, [ExactMatrix; 3]) {
    let mut checks = Vec::new();
    let gram = basis.conj_transpose().matmul(basis).expect("shape");
    let k = basis.cols();
    checks.push(IdentityCheck::equal(
        format!("{label}: V^dagger V = {norm_sq}*1"),
        &gram,
        &ExactMatrix::identity(k).scale(norm_sq),
    ));
    let inv = norm_sq.inv().expect("nonzero");
    let restricted = std::array::from_fn(|i| {
        basis
            .conj_transpose()
            .matmul(&triple[i])
            .and_then(|m| m.matmul(basis))
            .expect("shape")
            .scale(&inv)
    });
    for i in 0..3 {
        let lhs = triple[i].matmul(basis).expect("shape");
        let rhs = basis.matmul(&restricted[i]).expect("shape");
        checks.push(IdentityCheck::equal(
            format!("{label}: M{} V = V m{} (sector invariant)", AXES[i], AXES[i]),
            &lhs,
            &rhs,
        ));
    }
    (checks, restricted)
}

/// Majorana–Oppenheimer neutrino sector:
/// (a) `σ²φ = φ` for `φ = (−i, 1)ᵀ`;
/// (b) `Σ̃` restricted to `η ⊗ φ` is `(σ³, σ², σ¹)`;
/// (c) conjugation by `U` turns that triple into `(−σ¹, −σ², −σ³)`.
pub fn verify_mo_neutrino_reduction() -> SectorReduction {
    let phi = mo_neutrino_spinor();
    let mut checks = vec![IdentityCheck::equal(
        "MO: sigma2 phi = phi",
        &pauli(2).matmul(&phi).expect("2x1"),
        &phi,
    )];
    // columns e_j ⊗ φ = (−i,1,0,0)ᵀ, (0,0,−i,1)ᵀ
    let basis = ExactMatrix::column_vector(vec![ExactScalar::one(), ExactScalar::zero()])
        .kron(&phi)
        .transpose()
        .vstack(
            &ExactMatrix::column_vector(vec![ExactScalar::zero(), ExactScalar::one()])
                .kron(&phi)
                .transpose(),
        )
        .expect("1x4 rows")
        .transpose();
    let (sector_checks, restricted) = restrict_to_sector(
        "MO",
        &sigma_tilde_explicit(),
        &basis,
        &ExactScalar::from_int(2),
    );
    checks.extend(sector_checks);
    let expected_b = [pauli(3), pauli(2), pauli(1)];
    for i in 0..3 {
        checks.push(IdentityCheck::equal(
            format!("MO: restricted M{} = {}", AXES[i], ["sigma3", "sigma2", "sigma1"][i]),
            &restricted[i],
            &expected_b[i],
        ));
    }
    let u = neutrino_transform();
    let transformed: [ExactMatrix; 3] = std::array::from_fn(|i| u.conjugate(&restricted[i]));
    for i in 0..3 {
        checks.push(IdentityCheck::equal(
            format!("MO: U m{} U^dagger = -sigma{}", AXES[i], AXES[i]),
            &transformed[i],
            &neg(&pauli(i + 1)),
        ));
    }
    SectorReduction {
        certificate: Certificate::new("mo_neutrino_reduction", checks),
        restricted,
        transformed: Some(transformed),
    }
}

/// Bispinor neutrino sector `ξ ⊗ φ` with `φ = (1, 0)ᵀ`: `Σ` restricts to `−σ`,
/// and the sector is the range of `½(1 + S³)`.
pub fn verify_spinor_neutrino_reduction() -> SectorReduction {
    let e = |a, b| ExactMatrix::column_vector(vec![ExactScalar::from_int(a), ExactScalar::from_int(b)]);
    let phi = e(1, 0);
    let basis = e(1, 0)
        .kron(&phi)
        .transpose()
        .vstack(&e(0, 1).kron(&phi).transpose())
        .expect("rows")
        .transpose();
    let (mut checks, restricted) =
        restrict_to_sector("SPINOR", &sigma_explicit(), &basis, &ExactScalar::one());
    for i in 0..3 {
        checks.push(IdentityCheck::equal(
            format!("SPINOR: restricted M{} = -sigma{}", AXES[i], AXES[i]),
            &restricted[i],
            &neg(&pauli(i + 1)),
        ));
    }
    checks.push(IdentityCheck::equal(
        "SPINOR: S3_PLUS V = V",
        &projector(ProjectorName::S3Plus).matmul(&basis).expect("4x2"),
        &basis,
    ));
    SectorReduction {
        certificate: Certificate::new("spinor_neutrino_reduction", checks),
        restricted,
        transformed: None,
    }
}

/// `(label, explicit matrix, standard-convention factorization)`.
pub fn kron_factorizations() -> Vec<(String, ExactMatrix, ExactMatrix)> {
    let sig = sigma_explicit();
    let sigt = sigma_tilde_explicit();
    let p = pauli;
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push((
            format!("Sigma{k} = -kron(sigma{k}, sigma0)"),
            sig[k - 1].clone(),
            neg(&p(k).kron(&p(0))),
        ));
    }
    for (i, (a, b)) in [(3, 2), (2, 0), (1, 2)].into_iter().enumerate() {
        out.push((
            format!("SigmaTilde{} = kron(sigma{a}, sigma{b})", i + 1),
            sigt[i].clone(),
            p(a).kron(&p(b)),
        ));
    }
    out
}

/// The full exact algebra suite.
pub fn algebra_suite() -> Vec<Certificate> {
    algebra_suite_with(&RepName::ALL.map(build_rep))
}

/// The algebra suite over a caller-supplied set of representations
/// (fixtures can substitute a corrupted matrix here).
pub fn algebra_suite_with(reps: &[RepresentationSet]) -> Vec<Certificate> {
    let mut out: Vec<Certificate> = reps.iter().map(verify_pauli_algebra).collect();
    out.extend(
        reps.iter()
            .filter(|r| !r.commutant.is_empty())
            .filter_map(|r| verify_commutant(r).ok()),
    );

    let kron_checks = kron_factorizations()
        .into_iter()
        .map(|(label, explicit, fact)| IdentityCheck::equal(label, &explicit, &fact))
        .collect();
    out.push(Certificate::new("kron_factorizations", kron_checks));

    let mut proj_checks = Vec::new();
    for name in ProjectorName::ALL {
        let p = projector(name);
        proj_checks.push(IdentityCheck::equal(
            format!("{}^2 = {}", name.as_str(), name.as_str()),
            &p.matmul(&p).expect("4x4"),
            &p,
        ));
        proj_checks.push(IdentityCheck::equal(
            format!("{}^dagger = {}", name.as_str(), name.as_str()),
            &p.conj_transpose(),
            &p,
        ));
    }
    let qp = projector(ProjectorName::QPlus);
    let qm = projector(ProjectorName::QMinus);
    proj_checks.push(IdentityCheck::equal(
        "Q_PLUS + Q_MINUS = 1",
        &qp.add(&qm).expect("4x4"),
        &ExactMatrix::identity(4),
    ));
    proj_checks.push(IdentityCheck::from_residual(
        "Q_PLUS Q_MINUS = 0",
        &qp.matmul(&qm).expect("4x4"),
    ));
    out.push(Certificate::new("projectors", proj_checks));

    let u = neutrino_transform();
    let two = ExactMatrix::identity(2).scale(&u.norm_sq);
    let ud = u.raw.conj_transpose();
    let mut u_checks = vec![IdentityCheck::equal(
        "U'^dagger U' = 2*1",
        &ud.matmul(&u.raw).expect("2x2"),
        &two,
    )];
    for (k, target) in [(1, 3), (2, 2), (3, 1)] {
        let lhs = u
            .raw
            .matmul(&pauli(k))
            .and_then(|m| m.matmul(&ud))
            .expect("2x2");
        u_checks.push(IdentityCheck::equal(
            format!("U' sigma{k} U'^dagger = -2 sigma{target}"),
            &lhs,
            &pauli(target).scale(&ExactScalar::from_int(-2)),
        ));
    }
    out.push(Certificate::new("neutrino_transform", u_checks));

    let mut dirac_checks = Vec::new();
    for (label, d) in [("spinor", DiracMatrices::spinor()), ("standard", DiracMatrices::standard())] {
        dirac_checks.push(IdentityCheck::equal(
            format!("gamma5[{label}] = i g0 g1 g2 g3"),
            &d.gamma5_product(),
            &d.gamma5,
        ));
        for (k, a) in d.alpha().iter().enumerate() {
            dirac_checks.push(IdentityCheck::from_residual(
                format!("[gamma5, alpha{}][{label}] = 0", k + 1),
                &d.gamma5.commutator(a).expect("4x4"),
            ));
        }
    }
    // chirality split: in the spinor representation αⁱ = diag(σⁱ, −σⁱ)
    let alpha_sp = DiracMatrices::spinor().alpha();
    let z = ExactMatrix::zeros(2, 2);
    for k in 0..3 {
        dirac_checks.push(IdentityCheck::equal(
            format!("alpha{}[spinor] = diag(sigma{}, -sigma{})", k + 1, k + 1, k + 1),
            &alpha_sp[k],
            &block(&pauli(k + 1), &z, &z, &neg(&pauli(k + 1))),
        ));
    }
    out.push(Certificate::new("dirac_matrices", dirac_checks));

    out.push(verify_mo_neutrino_reduction().certificate);
    out.push(verify_spinor_neutrino_reduction().certificate);
    out
}
