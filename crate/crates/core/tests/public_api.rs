use proptest::prelude::*;
use zeromass_core::pde::{equivalence_report, expand, maxwell_reference, systems_equivalent};
use zeromass_core::representations::algebra_suite;
use zeromass_core::{
    build_rep, packing, projector, verify_commutant, verify_pauli_algebra, ExactMatrix, ExactScalar,
    PackingName, ProjectorName, RepName, VerifyError,
};

#[test]
fn every_builtin_certificate_passes() {
    let certs = algebra_suite();
    assert!(certs.iter().all(|c| c.passed));
    assert!(certs.iter().map(|c| c.identities.len()).sum::<usize>() >= 20);
}

#[test]
fn names_parse_case_insensitively() {
    assert_eq!("sigma_tilde".parse::<RepName>().unwrap(), RepName::SigmaTilde);
    assert_eq!("theta".parse::<PackingName>().unwrap(), PackingName::Theta);
    assert!(matches!("SIGMA_HAT".parse::<RepName>(), Err(VerifyError::UnknownName(_))));
}

#[test]
fn weyl_has_no_commutant_to_verify() {
    assert!(matches!(
        verify_commutant(&build_rep(RepName::Weyl)),
        Err(VerifyError::EmptyCommutant(_))
    ));
}

#[test]
fn pauli_certificate_flags_a_scaled_triple() {
    let mut rep = build_rep(RepName::Weyl);
    rep.spatial[2] = rep.spatial[2].scale(&ExactScalar::from_int(2));
    let cert = verify_pauli_algebra(&rep);
    assert!(!cert.passed);
    assert!(cert.failures().any(|f| f.identity.contains("{M3, M3}")));
}

#[test]
fn report_confirms_seven_claims() {
    let r = equivalence_report().unwrap();
    assert_eq!(r.confirmed_count(), 7);
    assert!(r.all_confirmed());
}

#[test]
fn mo_packing_matches_maxwell_under_built_in_orientation() {
    let sys = expand(&build_rep(RepName::SigmaTilde), &packing(PackingName::Mo)).unwrap();
    assert!(systems_equivalent(&sys, &maxwell_reference(false)).equal);
}

proptest! {
    #[test]
    fn projectors_are_idempotent_under_scaling(k in 1i64..5) {
        for name in ProjectorName::ALL {
            let p = projector(name);
            let scaled = p.scale(&ExactScalar::from_int(k));
            let sq = scaled.matmul(&scaled).unwrap();
            prop_assert_eq!(sq, p.scale(&ExactScalar::from_int(k * k)));
        }
    }

    #[test]
    fn kron_with_identity_preserves_rank(a in prop::collection::vec(-3i64..3, 4)) {
        let m = ExactMatrix::from_ints(&[&a[..2], &a[2..]]);
        let big = m.kron(&ExactMatrix::identity(2));
        prop_assert_eq!(big.rank(), 2 * m.rank());
    }
}
