//! Exact linear packings of the eight real field components into four-component
//! complex wavefunctions.
//!
//! All symbolic coefficients use `c = 1`, so the Riemann–Silberstein vector is
//! `F = E + iB`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::VerifyError;
use crate::exact::{ExactMatrix, ExactScalar};
use crate::representations::DiracMatrices;

/// Real field components in their fixed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Var {
    E1,
    E2,
    E3,
    B1,
    B2,
    B3,
    E0,
    B0,
}

impl Var {
    pub const ALL: [Var; 8] = [
        Var::E1,
        Var::E2,
        Var::E3,
        Var::B1,
        Var::B2,
        Var::B3,
        Var::E0,
        Var::B0,
    ];
    pub const EB: [Var; 6] = [Var::E1, Var::E2, Var::E3, Var::B1, Var::B2, Var::B3];
    pub const COUNT: usize = 8;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn e(k: usize) -> Var {
        Var::ALL[k]
    }

    pub fn b(k: usize) -> Var {
        Var::ALL[3 + k]
    }

    pub fn label(self) -> &'static str {
        ["E1", "E2", "E3", "B1", "B2", "B3", "E0", "B0"][self.index()]
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PackingName {
    RsSpinor,
    Mo,
    Sk,
    Gamma5Sk,
    Theta,
    Phi,
    PhiTilde,
}

impl PackingName {
    pub const ALL: [PackingName; 7] = [
        PackingName::RsSpinor,
        PackingName::Mo,
        PackingName::Sk,
        PackingName::Gamma5Sk,
        PackingName::Theta,
        PackingName::Phi,
        PackingName::PhiTilde,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PackingName::RsSpinor => "RS_SPINOR",
            PackingName::Mo => "MO",
            PackingName::Sk => "SK",
            PackingName::Gamma5Sk => "GAMMA5_SK",
            PackingName::Theta => "THETA",
            PackingName::Phi => "PHI",
            PackingName::PhiTilde => "PHI_TILDE",
        }
    }
}

impl fmt::Display for PackingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PackingName {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PackingName::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| VerifyError::UnknownName(s.to_string()))
    }
}

/// Sign convention for the scalar channel `F⁰ = a·E⁰ + i·b·B⁰`, `a, b ∈ {±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ScalarChannel {
    pub e0_sign: i8,
    pub b0_sign: i8,
}

impl ScalarChannel {
    /// `F⁰ = E⁰ + iB⁰`, the direct analogue of `F = E + iB`.
    pub const ANALOGUE: ScalarChannel = ScalarChannel {
        e0_sign: 1,
        b0_sign: 1,
    };

    pub const ALL: [ScalarChannel; 4] = [
        ScalarChannel {
            e0_sign: 1,
            b0_sign: 1,
        },
        ScalarChannel {
            e0_sign: 1,
            b0_sign: -1,
        },
        ScalarChannel {
            e0_sign: -1,
            b0_sign: 1,
        },
        ScalarChannel {
            e0_sign: -1,
            b0_sign: -1,
        },
    ];

    /// Convention used by default for a generalized packing.
    pub fn default_for(name: PackingName) -> ScalarChannel {
        match name {
            PackingName::PhiTilde => ScalarChannel {
                e0_sign: -1,
                b0_sign: 1,
            },
            _ => ScalarChannel::ANALOGUE,
        }
    }
}

impl fmt::Display for ScalarChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.e0_sign < 0 { "-E0" } else { "E0" };
        let b = if self.b0_sign < 0 { "-iB0" } else { "+iB0" };
        write!(f, "{e}{b}")
    }
}

impl Serialize for FieldPacking {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FieldPacking", 5)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("matrix", &self.matrix)?;
        st.serialize_field("used_vars", &self.used_vars)?;
        st.serialize_field("image_rank", &self.image_rank)?;
        st.serialize_field("scalar_channel", &self.scalar_channel.map(|s| s.to_string()))?;
        st.end()
    }
}

/// `L`: an exact `dim × 8` map from real fields to a complex wavefunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPacking {
    pub name: String,
    pub kind: Option<PackingName>,
    pub matrix: ExactMatrix,
    pub used_vars: Vec<Var>,
    pub image_rank: usize,
    pub scalar_channel: Option<ScalarChannel>,
}

type Lin = Vec<(Var, ExactScalar)>;

fn one() -> ExactScalar {
    ExactScalar::one()
}
fn i() -> ExactScalar {
    ExactScalar::i()
}
fn int(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}
fn gi(re: i64, im: i64, d: i64) -> ExactScalar {
    ExactScalar::gaussian(re, im, d)
}

/// `F^k = E^k + i B^k` scaled by `s`.
fn rs(k: usize, s: ExactScalar) -> Lin {
    vec![(Var::e(k), s.clone()), (Var::b(k), &s * &i())]
}

fn f0(channel: ScalarChannel, s: ExactScalar) -> Lin {
    vec![
        (Var::E0, &s * &int(channel.e0_sign as i64)),
        (Var::B0, &(&s * &i()) * &int(channel.b0_sign as i64)),
    ]
}

fn sum(parts: Vec<Lin>) -> Lin {
    parts.into_iter().flatten().collect()
}

fn matrix_from(rows: Vec<Lin>) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows.len(), Var::COUNT);
    for (r, row) in rows.into_iter().enumerate() {
        for (v, c) in row {
            let cur = m.get(r, v.index()).clone();
            m.set(r, v.index(), &cur + &c);
        }
    }
    m
}

impl FieldPacking {
    /// A packing from an explicit matrix; `used_vars` are the nonzero columns.
    pub fn custom(name: impl Into<String>, matrix: ExactMatrix) -> Self {
        let used_vars: Vec<Var> = Var::ALL
            .into_iter()
            .filter(|v| (0..matrix.rows()).any(|r| !matrix.get(r, v.index()).is_zero()))
            .collect();
        let image_rank = matrix.real_imag_stack().rank();
        Self {
            name: name.into(),
            kind: None,
            matrix,
            used_vars,
            image_rank,
            scalar_channel: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_bijective(&self) -> bool {
        self.image_rank == Var::COUNT && self.dim() * 2 == Var::COUNT
    }

    /// Exact `L·u`.
    pub fn apply(&self, u: &[ExactScalar; 8]) -> Vec<ExactScalar> {
        let col = ExactMatrix::column_vector(u.to_vec());
        self.matrix.matmul(&col).expect("dim x 8 times 8 x 1").entries().to_vec()
    }

    /// Realified matrix `[Re L; Im L]` restricted to the used columns.
    pub fn real_block(&self) -> ExactMatrix {
        let cols: Vec<usize> = self.used_vars.iter().map(|v| v.index()).collect();
        self.matrix.real_imag_stack().select_columns(&cols)
    }

    /// True iff `L` has full column rank on `used_vars` (injective there).
    pub fn is_injective_on_used(&self) -> bool {
        self.real_block().rank() == self.used_vars.len()
    }

    /// Exact left inverse `(AᵀA)⁻¹Aᵀ` of the realified map on the used variables:
    /// maps `[Re ψ; Im ψ]` to the used components of `u`.
    pub fn left_inverse(&self) -> ExactMatrix {
        let a = self.real_block();
        let at = a.transpose();
        let gram = at.matmul(&a).expect("shape");
        gram.inverse()
            .expect("packing is injective on its used variables")
            .matmul(&at)
            .expect("shape")
    }

    /// Positions `(row, col)` of the nonzero entries of `L`, row-major.
    pub fn nonzero_coefficients(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.matrix.rows() {
            for c in 0..self.matrix.cols() {
                if !self.matrix.get(r, c).is_zero() {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Copy of this packing with the listed entries negated.
    pub fn with_flipped(&self, flips: &[(usize, usize)], label: impl Into<String>) -> Self {
        let mut m = self.matrix.clone();
        for &(r, c) in flips {
            let v = -m.get(r, c).clone();
            m.set(r, c, v);
        }
        Self::custom(label, m)
    }
}

/// The named packing with its default scalar-channel convention.
pub fn packing(name: PackingName) -> FieldPacking {
    packing_with(name, ScalarChannel::default_for(name))
}

/// The named packing with an explicit `F⁰` convention (ignored by packings
/// without a scalar channel).
pub fn packing_with(name: PackingName, channel: ScalarChannel) -> FieldPacking {
    let half = ExactScalar::ratio(1, 2);
    let neg_half = ExactScalar::ratio(-1, 2);
    let rows: Vec<Lin> = match name {
        PackingName::RsSpinor => {
            // φ₀₀ = (−F¹ + iF²)/2, φ₀₁ = φ₁₀ = F³/2, φ₁₁ = (F¹ + iF²)/2
            let phi00 = sum(vec![rs(0, neg_half.clone()), rs(1, gi(0, 1, 2))]);
            let phi01 = rs(2, half.clone());
            let phi11 = sum(vec![rs(0, half.clone()), rs(1, gi(0, 1, 2))]);
            vec![phi00, phi01.clone(), phi01, phi11]
        }
        PackingName::Mo => vec![Vec::new(), rs(0, one()), rs(1, one()), rs(2, one())],
        PackingName::Sk | PackingName::Gamma5Sk => vec![
            vec![(Var::E3, i())],
            vec![(Var::E1, i()), (Var::E2, int(-1))],
            vec![(Var::B3, int(-1))],
            vec![(Var::B2, -i()), (Var::B1, int(-1))],
        ],
        PackingName::Theta => vec![
            vec![(Var::E3, i()), (Var::B0, int(-1))],
            vec![(Var::E1, i()), (Var::E2, int(-1))],
            vec![(Var::E0, i()), (Var::B3, int(-1))],
            vec![(Var::B2, -i()), (Var::B1, int(-1))],
        ],
        PackingName::Phi => {
            // ζ¹¹ = F³ + F⁰, ζ¹² = F¹ − iF², ζ²¹ = F¹ + iF², ζ²² = −F³ + F⁰
            // Φ = (−ζ¹²/2, ζ¹¹/2, −ζ²²/2, ζ²¹/2)
            let z12 = |s: &ExactScalar| sum(vec![rs(0, s.clone()), rs(1, s * &-i())]);
            let z21 = |s: &ExactScalar| sum(vec![rs(0, s.clone()), rs(1, s * &i())]);
            let z11 = |s: &ExactScalar| sum(vec![rs(2, s.clone()), f0(channel, s.clone())]);
            let z22 = |s: &ExactScalar| sum(vec![rs(2, -s.clone()), f0(channel, s.clone())]);
            vec![z12(&neg_half), z11(&half), z22(&neg_half), z21(&half)]
        }
        PackingName::PhiTilde => vec![f0(channel, one()), rs(0, one()), rs(1, one()), rs(2, one())],
    };
    let mut matrix = matrix_from(rows);
    if name == PackingName::Gamma5Sk {
        matrix = DiracMatrices::standard().gamma5.matmul(&matrix).expect("4x4 times 4x8");
    }
    let mut p = FieldPacking::custom(name.as_str(), matrix);
    p.kind = Some(name);
    if matches!(name, PackingName::Phi | PackingName::PhiTilde) {
        p.scalar_channel = Some(channel);
        p.name = format!("{}[F0={}]", name.as_str(), channel);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::{projector, ProjectorName};
    use proptest::prelude::*;

    fn u(vals: [i64; 8]) -> [ExactScalar; 8] {
        vals.map(ExactScalar::from_int)
    }

    fn ints(v: &[(i64, i64, i64)]) -> Vec<ExactScalar> {
        v.iter().map(|&(a, b, d)| gi(a, b, d)).collect()
    }

    #[test]
    fn mo_of_unit_e3() {
        let out = packing(PackingName::Mo).apply(&u([0, 0, 1, 0, 0, 0, 0, 0]));
        assert_eq!(out, ints(&[(0, 0, 1), (0, 0, 1), (0, 0, 1), (1, 0, 1)]));
    }

    #[test]
    fn sk_of_unit_e3() {
        let out = packing(PackingName::Sk).apply(&u([0, 0, 1, 0, 0, 0, 0, 0]));
        assert_eq!(out, ints(&[(0, 1, 1), (0, 0, 1), (0, 0, 1), (0, 0, 1)]));
    }

    #[test]
    fn rs_spinor_of_unit_e1() {
        let out = packing(PackingName::RsSpinor).apply(&u([1, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(out, ints(&[(-1, 0, 2), (0, 0, 1), (0, 0, 1), (1, 0, 2)]));
    }

    #[test]
    fn theta_puts_i_e0_in_third_slot() {
        let out = packing(PackingName::Theta).apply(&u([0, 0, 0, 0, 0, 0, 1, 0]));
        assert_eq!(out, ints(&[(0, 0, 1), (0, 0, 1), (0, 1, 1), (0, 0, 1)]));
    }

    #[test]
    fn phi_reduces_to_rs_spinor_without_scalar_channel() {
        let phi = packing(PackingName::Phi);
        let rs = packing(PackingName::RsSpinor);
        let eb: Vec<usize> = Var::EB.iter().map(|v| v.index()).collect();
        assert_eq!(phi.matrix.select_columns(&eb), rs.matrix.select_columns(&eb));
        let mo = packing(PackingName::Mo);
        let pt = packing(PackingName::PhiTilde);
        assert_eq!(pt.matrix.select_columns(&eb), mo.matrix.select_columns(&eb));
        let theta = packing(PackingName::Theta);
        let sk = packing(PackingName::Sk);
        assert_eq!(theta.matrix.select_columns(&eb), sk.matrix.select_columns(&eb));
    }

    #[test]
    fn used_vars_and_ranks() {
        for name in PackingName::ALL {
            let p = packing(name);
            assert!(p.is_injective_on_used(), "{name}");
            assert_eq!(p.image_rank, p.used_vars.len(), "{name}");
            assert!(p.image_rank <= 2 * p.dim());
        }
        for name in [PackingName::Theta, PackingName::Phi, PackingName::PhiTilde] {
            assert!(packing(name).is_bijective(), "{name}");
        }
        for name in [PackingName::RsSpinor, PackingName::Mo, PackingName::Sk, PackingName::Gamma5Sk] {
            assert_eq!(packing(name).used_vars, Var::EB.to_vec(), "{name}");
        }
    }

    #[test]
    fn gamma5_sk_is_gamma5_times_sk() {
        let g5 = DiracMatrices::standard().gamma5;
        assert_eq!(
            packing(PackingName::Gamma5Sk).matrix,
            g5.matmul(&packing(PackingName::Sk).matrix).unwrap()
        );
    }

    #[test]
    fn left_inverse_recovers_used_components() {
        for name in PackingName::ALL {
            let p = packing(name);
            let inv = p.left_inverse();
            let block = p.real_block();
            assert_eq!(
                inv.matmul(&block).unwrap(),
                ExactMatrix::identity(p.used_vars.len()),
                "{name}"
            );
        }
    }

    #[test]
    fn r_fixes_phi_exactly_when_scalar_channel_vanishes() {
        let r = projector(ProjectorName::R);
        let phi = packing(PackingName::Phi);
        // (1 − R)·L must vanish on the E, B columns and be injective on (E⁰, B⁰)
        let comp = ExactMatrix::identity(4).sub(&r).unwrap().matmul(&phi.matrix).unwrap();
        let eb: Vec<usize> = Var::EB.iter().map(|v| v.index()).collect();
        assert!(comp.select_columns(&eb).is_zero());
        let scalar = comp.select_columns(&[Var::E0.index(), Var::B0.index()]);
        assert_eq!(scalar.real_imag_stack().rank(), 2);
    }

    #[test]
    fn phi_tilde_component_zero_tracks_scalar_channel() {
        let pt = packing(PackingName::PhiTilde);
        let eb: Vec<usize> = Var::EB.iter().map(|v| v.index()).collect();
        let row0 = ExactMatrix::from_rows(vec![pt.matrix.row(0).to_vec()]).unwrap();
        assert!(row0.select_columns(&eb).is_zero());
        let scalar = row0.select_columns(&[Var::E0.index(), Var::B0.index()]);
        assert_eq!(scalar.real_imag_stack().rank(), 2);
    }

    fn field() -> impl Strategy<Value = [ExactScalar; 8]> {
        proptest::array::uniform8((-9i64..=9, 1i64..=4).prop_map(|(n, d)| ExactScalar::ratio(n, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn packings_are_linear(a in field(), b in field(), k in -5i64..=5) {
            let alpha = ExactScalar::from_int(k);
            for name in PackingName::ALL {
                let p = packing(name);
                let mixed: [ExactScalar; 8] = std::array::from_fn(|j| &(&alpha * &a[j]) + &b[j]);
                let lhs = p.apply(&mixed);
                let pa = p.apply(&a);
                let pb = p.apply(&b);
                let rhs: Vec<ExactScalar> = pa.iter().zip(&pb).map(|(x, y)| &(&alpha * x) + y).collect();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn r_eigenstate_iff_scalar_channel_zero(a in field()) {
            let r = projector(ProjectorName::R);
            let phi = packing(PackingName::Phi);
            let psi = ExactMatrix::column_vector(phi.apply(&a));
            let fixed = r.matmul(&psi).unwrap() == psi;
            let scalar_zero = a[6].is_zero() && a[7].is_zero();
            prop_assert_eq!(fixed, scalar_zero);
            let pt = packing(PackingName::PhiTilde).apply(&a);
            prop_assert_eq!(pt[0].is_zero(), scalar_zero);
        }
    }
}
