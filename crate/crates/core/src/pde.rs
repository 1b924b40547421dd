//! Homogeneous first-order linear PDE systems over the eight real field
//! components, held in canonical (reduced row-echelon) form so that
//! equivalence of two systems is equality of their row spaces.
//!
//! Slot layout is variable-major, derivative-minor: slot `5·v + d` holds the
//! coefficient of `∂_d u_v` with `d ∈ {t, x, y, z, none}`. The undifferentiated
//! slot is always zero for the systems built here. Units are `c = 1`.

use std::fmt;

use serde::Serialize;

use crate::error::VerifyError;
use crate::exact::{ExactMatrix, ExactScalar};
use crate::field_maps::{packing, packing_with, FieldPacking, PackingName, ScalarChannel, Var};
use crate::representations::{build_rep, projector, Orientation, ProjectorName, RepName, RepresentationSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Deriv {
    T,
    X,
    Y,
    Z,
    None,
}

impl Deriv {
    pub const ALL: [Deriv; 5] = [Deriv::T, Deriv::X, Deriv::Y, Deriv::Z, Deriv::None];
    pub const COUNT: usize = 5;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn spatial(axis: usize) -> Deriv {
        [Deriv::X, Deriv::Y, Deriv::Z][axis]
    }

    fn symbol(self) -> &'static str {
        ["dt", "dx", "dy", "dz", ""][self.index()]
    }
}

pub const SLOTS: usize = Var::COUNT * Deriv::COUNT;

pub fn slot(v: Var, d: Deriv) -> usize {
    v.index() * Deriv::COUNT + d.index()
}

pub fn slot_parts(s: usize) -> (Var, Deriv) {
    (Var::from_index(s / Deriv::COUNT), Deriv::ALL[s % Deriv::COUNT])
}

/// One equation as a 40-slot coefficient row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation(pub Vec<ExactScalar>);

impl Equation {
    pub fn zero() -> Self {
        Equation(vec![ExactScalar::zero(); SLOTS])
    }

    pub fn with(mut self, v: Var, d: Deriv, c: i64) -> Self {
        let s = slot(v, d);
        self.0[s] = &self.0[s] + &ExactScalar::from_int(c);
        self
    }

    pub fn touches(&self, v: Var) -> bool {
        Deriv::ALL.iter().any(|&d| !self.0[slot(v, d)].is_zero())
    }

    /// `(slot label, coefficient)` for every nonzero slot.
    pub fn terms(&self) -> Vec<(String, String)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| {
                let (v, d) = slot_parts(s);
                (format!("{}{}", d.symbol(), v.label()), c.to_string())
            })
            .collect()
    }
}

impl Serialize for Equation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.terms().serialize(serializer)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// A canonical homogeneous linear system over the 40 coefficient slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPDESystem {
    canonical: ExactMatrix,
}

impl LinearPDESystem {
    pub fn from_equations(eqs: &[Equation]) -> Self {
        let rows: Vec<Vec<ExactScalar>> = eqs.iter().map(|e| e.0.clone()).collect();
        if rows.is_empty() {
            return Self::empty();
        }
        Self::from_matrix(&ExactMatrix::from_rows(rows).expect("rows of length 40"))
    }

    pub fn from_matrix(m: &ExactMatrix) -> Self {
        assert_eq!(m.cols(), SLOTS, "coefficient rows must have {SLOTS} slots");
        Self {
            canonical: m.rref().matrix,
        }
    }

    pub fn empty() -> Self {
        Self {
            canonical: ExactMatrix::zeros(0, SLOTS),
        }
    }

    pub fn len(&self) -> usize {
        self.canonical.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.canonical
    }

    pub fn equations(&self) -> Vec<Equation> {
        (0..self.len())
            .map(|r| Equation(self.canonical.row(r).to_vec()))
            .collect()
    }

    pub fn touches(&self, v: Var) -> bool {
        self.equations().iter().any(|e| e.touches(v))
    }

    pub fn contains(&self, eq: &Equation) -> bool {
        if self.is_empty() {
            return eq.0.iter().all(ExactScalar::is_zero);
        }
        self.canonical.row_space_contains(&eq.0).expect("40 slots")
    }

    /// Zeroes every slot of the given variables and re-canonicalizes.
    pub fn with_vars_zeroed(&self, vars: &[Var]) -> Self {
        let mut m = self.canonical.clone();
        for r in 0..m.rows() {
            for &v in vars {
                for d in Deriv::ALL {
                    m.set(r, slot(v, d), ExactScalar::zero());
                }
            }
        }
        Self::from_matrix(&m)
    }

    fn stacked(&self, other: &Self) -> ExactMatrix {
        self.canonical.vstack(&other.canonical).expect("40 slots")
    }
}

impl Serialize for LinearPDESystem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.equations().serialize(serializer)
    }
}

impl fmt::Display for LinearPDESystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.equations() {
            writeln!(f, "{} = 0", pretty(&e))?;
        }
        Ok(())
    }
}

fn complex_rows(rows: Vec<Vec<ExactScalar>>) -> ExactMatrix {
    let split: Vec<Vec<ExactScalar>> = rows
        .iter()
        .flat_map(|row| {
            [
                row.iter().map(ExactScalar::real_part).collect(),
                row.iter().map(ExactScalar::imag_part).collect(),
            ]
        })
        .collect();
    ExactMatrix::from_rows(split).expect("uniform rows")
}

fn check_dims(rep: &RepresentationSet, p: &FieldPacking) -> Result<(), VerifyError> {
    if p.dim() != rep.dim {
        return Err(VerifyError::DimensionMismatch {
            rep: rep.name.clone(),
            rep_dim: rep.dim,
            packing: p.name.clone(),
            packing_dim: p.dim(),
        });
    }
    Ok(())
}

/// Substitutes `ψ = L·u` into `∂tψ = −sign·(M·∇)ψ`, i.e. `L ∂t u + sign Σᵢ MⁱL ∂ᵢu = 0`,
/// splits every complex row into real and imaginary parts and canonicalizes.
pub fn expand(rep: &RepresentationSet, p: &FieldPacking) -> Result<LinearPDESystem, VerifyError> {
    check_dims(rep, p)?;
    let sign = rep.orientation.scalar();
    let ml: Vec<ExactMatrix> = rep
        .spatial
        .iter()
        .map(|m| m.matmul(&p.matrix).map(|x| x.scale(&sign)))
        .collect::<Result<_, _>>()?;
    let rows = (0..rep.dim)
        .map(|r| {
            let mut row = vec![ExactScalar::zero(); SLOTS];
            for v in Var::ALL {
                row[slot(v, Deriv::T)] = p.matrix.get(r, v.index()).clone();
                for (axis, m) in ml.iter().enumerate() {
                    row[slot(v, Deriv::spatial(axis))] = m.get(r, v.index()).clone();
                }
            }
            row
        })
        .collect();
    Ok(LinearPDESystem::from_matrix(&complex_rows(rows)))
}

/// Spatial system `(1 − P)(M·∇)(L·u) = 0`.
pub fn constraint_subsystem(
    rep: &RepresentationSet,
    p: &FieldPacking,
    proj: &ExactMatrix,
) -> Result<LinearPDESystem, VerifyError> {
    check_dims(rep, p)?;
    if proj.shape() != (rep.dim, rep.dim) {
        return Err(VerifyError::Algebra(crate::error::AlgebraError::DimensionMismatch {
            op: "constraint_subsystem",
            left: proj.shape(),
            right: (rep.dim, rep.dim),
        }));
    }
    if proj.matmul(proj)? != *proj {
        return Err(VerifyError::NotIdempotent);
    }
    let comp = ExactMatrix::identity(rep.dim).sub(proj)?;
    let cml: Vec<ExactMatrix> = rep
        .spatial
        .iter()
        .map(|m| comp.matmul(m).and_then(|x| x.matmul(&p.matrix)))
        .collect::<Result<_, _>>()?;
    let rows = (0..rep.dim)
        .map(|r| {
            let mut row = vec![ExactScalar::zero(); SLOTS];
            for v in Var::ALL {
                for (axis, m) in cml.iter().enumerate() {
                    row[slot(v, Deriv::spatial(axis))] = m.get(r, v.index()).clone();
                }
            }
            row
        })
        .collect();
    Ok(LinearPDESystem::from_matrix(&complex_rows(rows)))
}

/// `∇·E`, `∇·B` as equations.
pub fn divergence(field: char) -> Equation {
    let var = |k| if field == 'E' { Var::e(k) } else { Var::b(k) };
    (0..3).fold(Equation::zero(), |e, k| e.with(var(k), Deriv::spatial(k), 1))
}

/// Maxwell's equations at `c = 1`, optionally with gradient-type sources:
/// `∇·E + ∂tE⁰ = 0`, `∇·B + ∂tB⁰ = 0`, `∂tE − ∇×B + ∇E⁰ = 0`, `∂tB + ∇×E + ∇B⁰ = 0`.
pub fn maxwell_equations(with_sources: bool) -> Vec<Equation> {
    let src = |e: Equation, v: Var, d: Deriv| if with_sources { e.with(v, d, 1) } else { e };
    let mut eqs = vec![
        src(divergence('E'), Var::E0, Deriv::T),
        src(divergence('B'), Var::B0, Deriv::T),
    ];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // (∇×B)ᵢ = ∂ⱼBₖ − ∂ₖBⱼ
        let e = Equation::zero()
            .with(Var::e(i), Deriv::T, 1)
            .with(Var::b(k), Deriv::spatial(j), -1)
            .with(Var::b(j), Deriv::spatial(k), 1);
        eqs.push(src(e, Var::E0, Deriv::spatial(i)));
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let e = Equation::zero()
            .with(Var::b(i), Deriv::T, 1)
            .with(Var::e(k), Deriv::spatial(j), 1)
            .with(Var::e(j), Deriv::spatial(k), -1);
        eqs.push(src(e, Var::B0, Deriv::spatial(i)));
    }
    eqs
}

pub fn maxwell_reference(with_sources: bool) -> LinearPDESystem {
    LinearPDESystem::from_equations(&maxwell_equations(with_sources))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceVerdict {
    pub equal: bool,
    /// A canonical row of one system that is not in the other's row space.
    pub witness: Option<Equation>,
    pub witness_from: Option<char>,
}

pub fn systems_equivalent(a: &LinearPDESystem, b: &LinearPDESystem) -> EquivalenceVerdict {
    if a == b {
        return EquivalenceVerdict {
            equal: true,
            witness: None,
            witness_from: None,
        };
    }
    let find = |x: &LinearPDESystem, y: &LinearPDESystem| x.equations().into_iter().find(|e| !y.contains(e));
    let (witness, from) = match find(a, b) {
        Some(w) => (w, 'a'),
        None => (find(b, a).expect("unequal canonical forms differ in row space"), 'b'),
    };
    EquivalenceVerdict {
        equal: false,
        witness: Some(witness),
        witness_from: Some(from),
    }
}

/// Row space of `a` is contained in that of `b`.
pub fn is_subsystem(a: &LinearPDESystem, b: &LinearPDESystem) -> bool {
    b.stacked(a).rank() == b.len()
}

/// Exchanges every slot of `a` and `b` and re-canonicalizes.
pub fn variable_swap(sys: &LinearPDESystem, a: Var, b: Var) -> LinearPDESystem {
    let mut m = sys.canonical.clone();
    for r in 0..m.rows() {
        for d in Deriv::ALL {
            let (sa, sb) = (slot(a, d), slot(b, d));
            let va = m.get(r, sa).clone();
            let vb = m.get(r, sb).clone();
            m.set(r, sa, vb);
            m.set(r, sb, va);
        }
    }
    LinearPDESystem::from_matrix(&m)
}

/// Renders an equation, time derivatives first, using `∇·X`, `(∇×X)ᵢ` and `∇ᵢ` groupings where the
/// coefficients allow, falling back to individual `∂` terms.
pub fn pretty(eq: &Equation) -> String {
    let mut coeffs = eq.0.clone();
    let mut parts: Vec<(usize, ExactScalar, String)> = Vec::new();
    let take = |coeffs: &mut Vec<ExactScalar>, slots: &[(usize, i64)]| -> Option<ExactScalar> {
        let (s0, k0) = slots[0];
        let base = &coeffs[s0] * &ExactScalar::from_int(k0);
        if base.is_zero() {
            return None;
        }
        let all = slots
            .iter()
            .all(|&(s, k)| coeffs[s] == &base * &ExactScalar::from_int(k));
        if !all {
            return None;
        }
        for &(s, _) in slots {
            coeffs[s] = ExactScalar::zero();
        }
        Some(base)
    };
    for (field, var) in [("E", Var::e as fn(usize) -> Var), ("B", Var::b as fn(usize) -> Var)] {
        let div: Vec<(usize, i64)> = (0..3).map(|k| (slot(var(k), Deriv::spatial(k)), 1)).collect();
        if let Some(c) = take(&mut coeffs, &div) {
            parts.push((SLOTS + div[0].0, c, format!("div {field}")));
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let curl = [(slot(var(k), Deriv::spatial(j)), 1), (slot(var(j), Deriv::spatial(k)), -1)];
            if let Some(c) = take(&mut coeffs, &curl) {
                let first = curl[0].0.min(curl[1].0);
                parts.push((SLOTS + first, c, format!("(curl {field})_{}", i + 1)));
            }
        }
    }
    for (s, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let (v, d) = slot_parts(s);
            let key = if d == Deriv::T { s } else { SLOTS + s };
            parts.push((key, c.clone(), format!("{}{}", d.symbol(), v.label())));
        }
    }
    parts.sort_by_key(|p| p.0);
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (_, c, term)) in parts.into_iter().enumerate() {
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) if c.is_real() => (true, rest.to_string()),
            _ => (false, s),
        };
        let coef = match mag.as_str() {
            "1" => String::new(),
            m if c.is_real() => format!("{m} "),
            m => format!("({m}) "),
        };
        match (n, neg) {
            (0, false) => out.push_str(&format!("{coef}{term}")),
            (0, true) => out.push_str(&format!("-{coef}{term}")),
            (_, false) => out.push_str(&format!(" + {coef}{term}")),
            (_, true) => out.push_str(&format!(" - {coef}{term}")),
        }
    }
    out
}

/// What a (representation, packing) expansion is claimed to equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Maxwell,
    GeneralizedMaxwell,
    /// Generalized Maxwell with `E⁰ ↔ B⁰`.
    GeneralizedMaxwellSwapped,
    /// The expansion of the same representation with another packing.
    SameAs(PackingName),
}

impl Target {
    pub fn system(self, rep: &RepresentationSet) -> Result<LinearPDESystem, VerifyError> {
        Ok(match self {
            Target::Maxwell => maxwell_reference(false),
            Target::GeneralizedMaxwell => maxwell_reference(true),
            Target::GeneralizedMaxwellSwapped => variable_swap(&maxwell_reference(true), Var::E0, Var::B0),
            Target::SameAs(p) => expand(rep, &packing(p))?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub rep: RepName,
    pub packing: PackingName,
    pub target: Target,
}

/// The seven equivalence claims checked by the suite.
pub const CLAIMS: [Claim; 7] = [
    Claim {
        rep: RepName::Sigma,
        packing: PackingName::RsSpinor,
        target: Target::Maxwell,
    },
    Claim {
        rep: RepName::SigmaTilde,
        packing: PackingName::Mo,
        target: Target::Maxwell,
    },
    Claim {
        rep: RepName::AlphaStandard,
        packing: PackingName::Sk,
        target: Target::Maxwell,
    },
    Claim {
        rep: RepName::AlphaStandard,
        packing: PackingName::Gamma5Sk,
        target: Target::SameAs(PackingName::Sk),
    },
    Claim {
        rep: RepName::AlphaStandard,
        packing: PackingName::Theta,
        target: Target::GeneralizedMaxwell,
    },
    Claim {
        rep: RepName::Sigma,
        packing: PackingName::Phi,
        target: Target::GeneralizedMaxwell,
    },
    Claim {
        rep: RepName::SigmaTilde,
        packing: PackingName::PhiTilde,
        target: Target::GeneralizedMaxwellSwapped,
    },
];

/// One tested convention for a claim.
#[derive(Clone, Debug, Serialize)]
pub struct ConventionTrial {
    /// `+1`: `∂tψ = −(M·∇)ψ` as written; `−1`: the reversed orientation.
    pub orientation: i64,
    pub scalar_channel: Option<String>,
    pub equal: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimOutcome {
    pub label: String,
    pub claim: Claim,
    /// Outcome under the library defaults (`build_rep` orientation, default `F⁰`).
    pub default_holds: bool,
    /// Outcome with `∂tψ = −(M·∇)ψ` and `F⁰ = E⁰ + iB⁰`, i.e. exactly as written.
    pub as_written_holds: bool,
    pub confirmed: bool,
    pub trials: Vec<ConventionTrial>,
    pub system: LinearPDESystem,
}

fn claim_label(c: &Claim) -> String {
    let target = match c.target {
        Target::Maxwell => "Maxwell".to_string(),
        Target::GeneralizedMaxwell => "generalized Maxwell".to_string(),
        Target::GeneralizedMaxwellSwapped => "generalized Maxwell (E0<->B0)".to_string(),
        Target::SameAs(p) => format!("expand({}, {})", c.rep, p),
    };
    format!("expand({}, {}) == {}", c.rep, c.packing, target)
}

fn channels_for(p: PackingName) -> Vec<Option<ScalarChannel>> {
    match p {
        PackingName::Phi | PackingName::PhiTilde => ScalarChannel::ALL.into_iter().map(Some).collect(),
        _ => vec![None],
    }
}

/// Checks one claim under both orientations and every scalar-channel convention.
pub fn check_claim(claim: Claim) -> Result<ClaimOutcome, VerifyError> {
    let base = build_rep(claim.rep);
    let default_packing = packing(claim.packing);
    let mut trials = Vec::new();
    let mut default_holds = false;
    let mut as_written_holds = false;
    for orientation in [Orientation::Plus, Orientation::Minus] {
        let rep = base.clone().with_orientation(orientation);
        let target = claim.target.system(&rep)?;
        for ch in channels_for(claim.packing) {
            let p = match ch {
                Some(c) => packing_with(claim.packing, c),
                None => packing(claim.packing),
            };
            let verdict = systems_equivalent(&expand(&rep, &p)?, &target);
            if orientation == base.orientation && p == default_packing {
                default_holds = verdict.equal;
            }
            if orientation == Orientation::Plus && ch.is_none_or(|c| c == ScalarChannel::ANALOGUE) {
                as_written_holds = verdict.equal;
            }
            trials.push(ConventionTrial {
                orientation: orientation.value(),
                scalar_channel: ch.map(|c| c.to_string()),
                equal: verdict.equal,
                witness: verdict.witness.map(|w| pretty(&w)),
            });
        }
    }
    let confirmed = trials.iter().any(|t| t.equal);
    Ok(ClaimOutcome {
        label: claim_label(&claim),
        claim,
        default_holds,
        as_written_holds,
        confirmed,
        trials,
        system: expand(&base, &default_packing)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignAssignment {
    /// Entries of `L` (as `row:var`) whose sign is flipped relative to the transcription.
    pub flipped: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignSearch {
    pub packing: String,
    pub coefficients: Vec<String>,
    pub assignments_tested: usize,
    pub as_printed_passes: bool,
    pub passing: Vec<SignAssignment>,
}

/// Exhaustive sign-flip search over the nonzero entries of a packing, against
/// a target system, under the library orientation of `rep`.
pub fn sign_search(rep: RepName, name: PackingName, target: Target) -> Result<SignSearch, VerifyError> {
    let rep = build_rep(rep);
    let base = packing(name);
    let target_sys = target.system(&rep)?;
    let coeffs = base.nonzero_coefficients();
    let label = |&(r, c): &(usize, usize)| format!("{}:{}", r, Var::from_index(c));
    let mut passing = Vec::new();
    let mut as_printed_passes = false;
    let n = coeffs.len();
    for mask in 0u32..(1 << n) {
        let flips: Vec<(usize, usize)> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| coeffs[b]).collect();
        let p = base.with_flipped(&flips, format!("{}#{mask}", base.name));
        if expand(&rep, &p)? == target_sys {
            if mask == 0 {
                as_printed_passes = true;
            }
            passing.push(SignAssignment {
                flipped: flips.iter().map(label).collect(),
            });
        }
    }
    Ok(SignSearch {
        packing: base.name.clone(),
        coefficients: coeffs.iter().map(label).collect(),
        assignments_tested: 1 << n,
        as_printed_passes,
        passing,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintOutcome {
    pub label: String,
    pub system: LinearPDESystem,
    pub contains_div_e: bool,
    pub contains_div_b: bool,
    /// The constraint system is exactly `{∇·E = 0, ∇·B = 0}`.
    pub equals_divergence_pair: bool,
    pub assumption: Option<String>,
}

pub fn check_constraint(
    label: &str,
    rep: RepName,
    p: PackingName,
    proj: ProjectorName,
    assumption: Option<&str>,
) -> Result<ConstraintOutcome, VerifyError> {
    let sys = constraint_subsystem(&build_rep(rep), &packing(p), &projector(proj))?;
    let pair = LinearPDESystem::from_equations(&[divergence('E'), divergence('B')]);
    Ok(ConstraintOutcome {
        label: label.to_string(),
        contains_div_e: sys.contains(&divergence('E')),
        contains_div_b: sys.contains(&divergence('B')),
        equals_divergence_pair: sys == pair,
        system: sys,
        assumption: assumption.map(str::to_string),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub claims: Vec<ClaimOutcome>,
    pub sk_sign_search: SignSearch,
    pub constraints: Vec<ConstraintOutcome>,
    pub default_scalar_channels: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl EquivalenceReport {
    pub fn confirmed_count(&self) -> usize {
        self.claims.iter().filter(|c| c.confirmed).count()
    }

    /// Every claim holds under at least one documented convention and every
    /// constraint subsystem contains both divergence conditions.
    pub fn all_confirmed(&self) -> bool {
        self.claims.iter().all(|c| c.confirmed)
            && self.constraints.iter().all(|c| c.contains_div_e && c.contains_div_b)
    }
}

pub fn equivalence_report() -> Result<EquivalenceReport, VerifyError> {
    let claims = CLAIMS.into_iter().map(check_claim).collect::<Result<Vec<_>, _>>()?;
    let sk_sign_search = sign_search(RepName::AlphaStandard, PackingName::Sk, Target::Maxwell)?;
    let constraints = vec![
        check_constraint(
            "(1 - R)(Sigma . grad)(RS_SPINOR u) = 0",
            RepName::Sigma,
            PackingName::RsSpinor,
            ProjectorName::R,
            None,
        )?,
        check_constraint(
            "(1 - R_TILDE)(SigmaTilde . grad)(MO u) = 0",
            RepName::SigmaTilde,
            PackingName::Mo,
            ProjectorName::RTilde,
            Some("the projector P in the Majorana-Oppenheimer evolution equation is taken to be R_TILDE"),
        )?,
    ];
    let default_scalar_channels = [PackingName::Phi, PackingName::PhiTilde]
        .into_iter()
        .map(|p| (p.as_str().to_string(), ScalarChannel::default_for(p).to_string()))
        .collect();
    let notes = vec![
        "symbolic systems use c = 1 and read the time derivative d0 as dt".to_string(),
        "orientation +1 means dt psi = -(M . grad) psi; SIGMA and SIGMA_TILDE are built with orientation -1"
            .to_string(),
    ];
    Ok(EquivalenceReport {
        claims,
        sk_sign_search,
        constraints,
        default_scalar_channels,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rep: RepName, p: PackingName) -> LinearPDESystem {
        expand(&build_rep(rep), &packing(p)).unwrap()
    }

    #[test]
    fn maxwell_reference_shape() {
        let free = maxwell_reference(false);
        assert_eq!(free.len(), 8);
        assert!(!free.touches(Var::E0) && !free.touches(Var::B0));
        let gen = maxwell_reference(true);
        assert_eq!(gen.len(), 8);
        let first = &maxwell_equations(true)[0];
        assert!(gen.contains(first));
        assert_eq!(
            first.terms(),
            vec![
                ("dxE1".to_string(), "1".to_string()),
                ("dyE2".to_string(), "1".to_string()),
                ("dzE3".to_string(), "1".to_string()),
                ("dtE0".to_string(), "1".to_string()),
            ]
        );
        assert_eq!(gen.with_vars_zeroed(&[Var::E0, Var::B0]), free);
    }

    #[test]
    fn free_vs_generalized_witness_touches_scalar_channel() {
        let v = systems_equivalent(&maxwell_reference(false), &maxwell_reference(true));
        assert!(!v.equal);
        let w = v.witness.unwrap();
        assert!(w.touches(Var::E0) || w.touches(Var::B0) || v.witness_from == Some('a'));
        // whichever side the witness comes from, the other side must not contain it
        let (gen, free) = (maxwell_reference(true), maxwell_reference(false));
        match v.witness_from {
            Some('a') => assert!(!gen.contains(&w)),
            _ => assert!(!free.contains(&w)),
        }
    }

    #[test]
    fn witness_present_iff_unequal() {
        let a = maxwell_reference(true);
        let v = systems_equivalent(&a, &a);
        assert!(v.equal && v.witness.is_none());
    }

    #[test]
    fn dirac_packings() {
        assert!(systems_equivalent(&sys(RepName::AlphaStandard, PackingName::Sk), &maxwell_reference(false)).equal);
        assert!(
            systems_equivalent(&sys(RepName::AlphaStandard, PackingName::Theta), &maxwell_reference(true)).equal
        );
        assert_eq!(
            sys(RepName::AlphaStandard, PackingName::Gamma5Sk),
            sys(RepName::AlphaStandard, PackingName::Sk)
        );
    }

    #[test]
    fn spinor_packings_with_library_orientation() {
        assert_eq!(sys(RepName::Sigma, PackingName::RsSpinor), maxwell_reference(false));
        assert_eq!(sys(RepName::SigmaTilde, PackingName::Mo), maxwell_reference(false));
        assert_eq!(sys(RepName::Sigma, PackingName::Phi), maxwell_reference(true));
        let swapped = variable_swap(&maxwell_reference(true), Var::E0, Var::B0);
        assert_eq!(sys(RepName::SigmaTilde, PackingName::PhiTilde), swapped);
        assert_ne!(sys(RepName::SigmaTilde, PackingName::PhiTilde), maxwell_reference(true));
    }

    #[test]
    fn written_orientation_gives_time_reversed_maxwell() {
        let rep = build_rep(RepName::SigmaTilde).with_orientation(Orientation::Plus);
        let s = expand(&rep, &packing(PackingName::Mo)).unwrap();
        assert_ne!(s, maxwell_reference(false));
        // time reversal of Maxwell is B -> -B
        let mut m = maxwell_reference(false).matrix().clone();
        for r in 0..m.rows() {
            for k in 0..3 {
                for d in Deriv::ALL {
                    let sl = slot(Var::b(k), d);
                    let v = -m.get(r, sl).clone();
                    m.set(r, sl, v);
                }
            }
        }
        assert_eq!(s, LinearPDESystem::from_matrix(&m));
    }

    #[test]
    fn swap_is_involution_and_trivial_on_free_maxwell() {
        let gen = maxwell_reference(true);
        let twice = variable_swap(&variable_swap(&gen, Var::E0, Var::B0), Var::E0, Var::B0);
        assert_eq!(twice, gen);
        let free = maxwell_reference(false);
        assert_eq!(variable_swap(&free, Var::E0, Var::B0), free);
    }

    #[test]
    fn constraint_subsystems() {
        let c = check_constraint("", RepName::Sigma, PackingName::RsSpinor, ProjectorName::R, None).unwrap();
        assert!(c.contains_div_e && c.contains_div_b && c.equals_divergence_pair);
        let c = check_constraint("", RepName::SigmaTilde, PackingName::Mo, ProjectorName::RTilde, None).unwrap();
        assert!(c.contains_div_e && c.contains_div_b && c.equals_divergence_pair);
        let empty = constraint_subsystem(
            &build_rep(RepName::Sigma),
            &packing(PackingName::RsSpinor),
            &ExactMatrix::identity(4),
        )
        .unwrap();
        assert!(empty.is_empty());
        let not_idem = ExactMatrix::identity(4).scale(&ExactScalar::from_int(2));
        assert!(matches!(
            constraint_subsystem(&build_rep(RepName::Sigma), &packing(PackingName::RsSpinor), &not_idem),
            Err(VerifyError::NotIdempotent)
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            expand(&build_rep(RepName::Weyl), &packing(PackingName::Mo)),
            Err(VerifyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bijective_packings_give_eight_equations() {
        for rep in [RepName::Sigma, RepName::SigmaTilde, RepName::AlphaStandard, RepName::AlphaSpinor] {
            for p in [PackingName::Theta, PackingName::Phi, PackingName::PhiTilde] {
                for o in [Orientation::Plus, Orientation::Minus] {
                    let s = expand(&build_rep(rep).with_orientation(o), &packing(p)).unwrap();
                    assert_eq!(s.len(), 8, "{rep} {p}");
                }
            }
        }
    }

    #[test]
    fn expand_is_linear_in_the_packing() {
        let rep = build_rep(RepName::AlphaStandard);
        let a = packing(PackingName::Sk);
        let b = packing(PackingName::Theta);
        let sum = FieldPacking::custom("sum", a.matrix.add(&b.matrix).unwrap());
        let s = expand(&rep, &sum).unwrap();
        let ea = expand(&rep, &a).unwrap();
        let eb = expand(&rep, &b).unwrap();
        let joint = LinearPDESystem::from_matrix(&ea.matrix().vstack(eb.matrix()).unwrap());
        assert!(is_subsystem(&s, &joint));
    }

    #[test]
    fn equivalence_is_symmetric_and_transitive_on_claims() {
        let systems: Vec<LinearPDESystem> = CLAIMS.iter().map(|c| sys(c.rep, c.packing)).collect();
        for a in &systems {
            for b in &systems {
                assert_eq!(systems_equivalent(a, b).equal, systems_equivalent(b, a).equal);
                for c in &systems {
                    if systems_equivalent(a, b).equal && systems_equivalent(b, c).equal {
                        assert!(systems_equivalent(a, c).equal);
                    }
                }
            }
        }
    }

    #[test]
    fn pretty_printer_groups_vector_operators() {
        let eqs = maxwell_equations(true);
        assert_eq!(pretty(&eqs[0]), "dtE0 + div E");
        assert_eq!(pretty(&eqs[2]), "dtE1 - (curl B)_1 + dxE0");
        assert_eq!(pretty(&eqs[5]), "dtB1 + (curl E)_1 + dxB0");
        assert_eq!(pretty(&Equation::zero().with(Var::E2, Deriv::X, -2)), "-2 dxE2");
        assert_eq!(pretty(&Equation::zero()), "0");
    }

    #[test]
    fn report_confirms_all_claims() {
        let r = equivalence_report().unwrap();
        assert_eq!(r.confirmed_count(), 7);
        assert!(r.all_confirmed());
        assert!(r.claims.iter().all(|c| c.default_holds), "{:?}",
            r.claims.iter().filter(|c| !c.default_holds).map(|c| &c.label).collect::<Vec<_>>());
        assert!(r.sk_sign_search.as_printed_passes);
        assert_eq!(r.sk_sign_search.assignments_tested, 64);
    }
}
