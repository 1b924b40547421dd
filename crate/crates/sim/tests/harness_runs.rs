use std::collections::BTreeMap;

use zeromass_core::{packing, PackingName, RepName};
use zeromass_sim::harness::{constraint_residual, Formulation, RepTable, RunSettings};
use zeromass_sim::residual::ResidualTracker;
use zeromass_sim::{
    fields_to_wavefunction, make_initial_em, residual_budget, run_constraint_monitor, run_duality,
    wavefunction_to_fields, CMatrix, Evolver, GridSpec, NumericPacking, SpinorField,
};

fn settings(n: usize, steps: usize) -> RunSettings {
    let grid = GridSpec {
        n,
        steps,
        ..GridSpec::default()
    };
    let mut s = RunSettings::new(grid, 99);
    s.band = 2;
    s
}

#[test]
fn wrong_speed_difference_grows_monotonically_past_threshold() {
    let s = settings(16, 21);
    let mut o = BTreeMap::new();
    o.insert(Formulation::SigmaTildeMo, 1.01);
    let r = run_duality(&s, &[Formulation::SigmaRs, Formulation::SigmaTildeMo], &o).unwrap();
    let d = &r.pairs[0].diffs;
    assert!(d[0] < 1e-14);
    assert!(d.windows(2).all(|w| w[1] >= w[0]), "{d:?}");
    // snapshot 20 is t = 1
    assert!(d[20] > 1e-3, "{}", d[20]);
    assert!(!r.passed);
}

#[test]
fn duplicate_formulation_agrees_exactly() {
    let s = settings(8, 5);
    let r = run_duality(&s, &[Formulation::AlphaSk, Formulation::AlphaSk], &BTreeMap::new()).unwrap();
    assert_eq!(r.max_diff, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
}

#[test]
fn wrong_speed_trajectory_breaks_the_residual_budget() {
    let s = settings(16, 10);
    let grid = s.grid;
    let u0 = make_initial_em(&grid, 5, s.band, true).unwrap();
    let full = NumericPacking::new(&packing(PackingName::Theta));
    let rep = RepTable::default().certified(RepName::AlphaStandard).unwrap();
    let run = |c: f64| {
        let mut psi = fields_to_wavefunction(&full, &u0);
        psi.grid = grid.with_c(c);
        let ev = Evolver::new(&rep, &psi).unwrap();
        let mut tracker = ResidualTracker::new(grid, grid.dt, false);
        let mut fmax = 0.0f64;
        for t in grid.times() {
            let (u, _) = wavefunction_to_fields(&full, &ev.at(t), 1e-10).unwrap();
            fmax = fmax.max(u.max_abs());
            tracker.push(u).unwrap();
        }
        (tracker.finish().max(), residual_budget(&grid, s.band, fmax))
    };
    let (good, budget) = run(1.0);
    assert!(good <= budget);
    let (bad, budget) = run(2.0);
    assert!(bad > budget, "{bad} vs {budget}");
}

#[test]
fn zero_data_gives_zero_constraint_residual() {
    let s = settings(8, 4);
    let rep = s.reps.certified(RepName::Sigma).unwrap();
    let proj = CMatrix::from_exact(&zeromass_core::projector(zeromass_core::ProjectorName::R));
    assert_eq!(constraint_residual(&rep, &proj, &SpinorField::zeros(s.grid, 4)), 0.0);
    let r = run_constraint_monitor(&s, &[Formulation::SigmaRs]).unwrap();
    assert!(r.passed, "{:?}", r.verdicts);
}

#[test]
fn evolved_packed_data_stays_in_the_packing_image() {
    let s = settings(8, 4);
    let u0 = make_initial_em(&s.grid, 1, s.band, false).unwrap();
    for f in Formulation::ALL {
        let small = NumericPacking::new(&packing(f.packing()));
        let rep = s.reps.certified(f.rep()).unwrap();
        let ev = Evolver::new(&rep, &fields_to_wavefunction(&small, &u0)).unwrap();
        let (_, res) = wavefunction_to_fields(&small, &ev.at(1.7), 1e-12).unwrap();
        assert!(res <= 1e-12, "{f}: {res:e}");
    }
}

#[test]
fn reports_are_deterministic() {
    let s = settings(8, 4);
    let a = run_duality(&s, &Formulation::ALL, &BTreeMap::new()).unwrap();
    let b = run_duality(&s, &Formulation::ALL, &BTreeMap::new()).unwrap();
    assert_eq!(a.pairs[0].diffs, b.pairs[0].diffs);
    assert_eq!(a.formulations[2].energy_drift, b.formulations[2].energy_drift);
}
