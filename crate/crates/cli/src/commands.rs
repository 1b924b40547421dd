//! Subcommand implementations. Each returns an [`Outcome`]; errors are
//! usage or configuration problems.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use zeromass_core::pde::equivalence_report;
use zeromass_core::representations::algebra_suite_with;
use zeromass_sim::export::{plot_script, write_fields_csv, write_series_csv, write_spinor_binary, write_spinor_csv};
use zeromass_sim::harness::{ConstraintReport, DualityReport, GeneralizedReport, NeutrinoReport};
use zeromass_sim::{
    fields_to_wavefunction, make_initial_em, run_constraint_monitor, run_duality,
    run_generalized_maxwell, run_neutrino_consistency, wavefunction_to_fields, Evolver,
    Formulation, NumericPacking, SimError,
};

use crate::config::RunConfig;

/// Result of a subcommand that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub summary: Vec<String>,
    pub report_path: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Duality,
    Neutrino,
    Constraints,
    Generalized,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Duality, Suite::Neutrino, Suite::Constraints, Suite::Generalized];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Neutrino => "neutrino",
            Suite::Constraints => "constraints",
            Suite::Generalized => "generalized",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

fn write_report(cfg: &RunConfig, command: &str, passed: bool, results: Value) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    let path = cfg.out.join("report.json");
    let report = json!({
        "tool": "zeromass",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": cfg.seed,
        "config": cfg,
        "passed": passed,
        "results": results,
    });
    let f = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(f), &report)?;
    Ok(path)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

pub fn verify_algebra(cfg: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let certs = algebra_suite_with(&cfg.reps().all());
    let elapsed = start.elapsed().as_secs_f64();
    let total: usize = certs.iter().map(|c| c.identities.len()).sum();
    let passed_ids: usize = certs
        .iter()
        .flat_map(|c| &c.identities)
        .filter(|i| i.passed)
        .count();
    let passed = certs.iter().all(|c| c.passed);
    let mut summary = vec![format!(
        "{passed_ids}/{total} identities passed across {} certificates ({elapsed:.3} s)",
        certs.len()
    )];
    for c in &certs {
        for f in c.failures() {
            summary.push(format!("FAILED [{}] {}", c.subject, f.identity));
        }
    }
    let results = json!({
        "certificates": certs,
        "identities_total": total,
        "identities_passed": passed_ids,
        "elapsed_seconds": elapsed,
    });
    let report_path = write_report(cfg, "verify-algebra", passed, results)?;
    Ok(Outcome { passed, summary, report_path })
}

pub fn verify_equivalence(cfg: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let report = equivalence_report()?;
    let elapsed = start.elapsed().as_secs_f64();
    let passed = report.all_confirmed();
    let mut summary = vec![format!(
        "{}/{} equivalence claims confirmed ({elapsed:.3} s)",
        report.confirmed_count(),
        report.claims.len()
    )];
    for c in &report.claims {
        summary.push(format!(
            "{} {}{}",
            if c.confirmed { "confirmed" } else { "FAILED" },
            c.label,
            if c.as_written_holds { "" } else { " (holds under the documented orientation)" }
        ));
    }
    summary.push(format!(
        "sign search over {}: {} of {} assignments pass, as printed {}",
        report.sk_sign_search.packing,
        report.sk_sign_search.passing.len(),
        report.sk_sign_search.assignments_tested,
        if report.sk_sign_search.as_printed_passes { "passes" } else { "fails" }
    ));
    for (p, ch) in &report.default_scalar_channels {
        summary.push(format!("{p}: F0 = {ch}"));
    }
    for c in &report.constraints {
        summary.push(format!(
            "{} {}",
            if c.contains_div_e && c.contains_div_b { "confirmed" } else { "FAILED" },
            c.label
        ));
    }
    let mut results = to_value(&report)?;
    results["elapsed_seconds"] = json!(elapsed);
    results["confirmed_count"] = json!(report.confirmed_count());
    let report_path = write_report(cfg, "verify-equivalence", passed, results)?;
    Ok(Outcome { passed, summary, report_path })
}

/// Output of one numerical suite, before it is written out.
enum SuiteOutput {
    Duality(DualityReport),
    Neutrino(NeutrinoReport),
    Constraints(ConstraintReport),
    Generalized(GeneralizedReport),
    /// The suite could not run because an input failed verification.
    Refused(String),
}

impl SuiteOutput {
    fn passed(&self) -> bool {
        match self {
            SuiteOutput::Duality(r) => r.passed,
            SuiteOutput::Neutrino(r) => r.passed,
            SuiteOutput::Constraints(r) => r.passed,
            SuiteOutput::Generalized(r) => r.passed,
            SuiteOutput::Refused(_) => false,
        }
    }

    fn verdict_lines(&self) -> Vec<String> {
        let verdicts = match self {
            SuiteOutput::Duality(r) => &r.verdicts,
            SuiteOutput::Neutrino(r) => &r.verdicts,
            SuiteOutput::Constraints(r) => &r.verdicts,
            SuiteOutput::Generalized(r) => &r.verdicts,
            SuiteOutput::Refused(msg) => return vec![format!("FAILED {msg}")],
        };
        verdicts
            .iter()
            .map(|v| {
                format!(
                    "{} {}: {:.3e} (tolerance {:.3e})",
                    if v.passed { "pass" } else { "FAILED" },
                    v.check,
                    v.value,
                    v.tolerance
                )
            })
            .collect()
    }

    fn to_json(&self) -> Result<Value> {
        match self {
            SuiteOutput::Duality(r) => to_value(r),
            SuiteOutput::Neutrino(r) => to_value(r),
            SuiteOutput::Constraints(r) => to_value(r),
            SuiteOutput::Generalized(r) => to_value(r),
            SuiteOutput::Refused(msg) => Ok(json!({ "passed": false, "error": msg })),
        }
    }
}

fn execute(cfg: &RunConfig, suite: Suite) -> Result<SuiteOutput> {
    let s = cfg.settings();
    let res = match suite {
        Suite::Duality => run_duality(&s, &cfg.formulations, &cfg.c_overrides).map(SuiteOutput::Duality),
        Suite::Neutrino => run_neutrino_consistency(&s).map(SuiteOutput::Neutrino),
        Suite::Constraints => run_constraint_monitor(&s, &cfg.formulations).map(SuiteOutput::Constraints),
        Suite::Generalized => run_generalized_maxwell(&s, &cfg.formulations, &cfg.c_overrides)
            .map(SuiteOutput::Generalized),
    };
    match res {
        Ok(out) => Ok(out),
        Err(e @ (SimError::Uncertified { .. } | SimError::OffImage { .. })) => {
            Ok(SuiteOutput::Refused(e.to_string()))
        }
        Err(e) => Err(e).with_context(|| format!("suite {} could not run", suite.as_str())),
    }
}

fn csv(path: &Path, times: &[f64], cols: Vec<(String, Vec<f64>)>) -> Result<()> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    write_series_csv(BufWriter::new(f), times, &cols)?;
    Ok(())
}

fn write_series(cfg: &RunConfig, out: &SuiteOutput) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out;
    let mut files = Vec::new();
    match out {
        SuiteOutput::Duality(r) => {
            let p = dir.join("duality_pairwise.csv");
            let cols = r
                .pairs
                .iter()
                .map(|s| (format!("{}~{}", s.a, s.b), s.diffs.clone()))
                .collect();
            csv(&p, &r.times, cols)?;
            files.push(p);
        }
        SuiteOutput::Neutrino(r) => {
            let p = dir.join("neutrino.csv");
            let cols = r.branches.iter().map(|b| (b.label.replace(',', ";"), b.diffs.clone())).collect();
            csv(&p, &r.times, cols)?;
            files.push(p);
        }
        SuiteOutput::Constraints(r) => {
            let p = dir.join("constraints.csv");
            let mut cols = Vec::new();
            for run in &r.runs {
                if let Some(v) = &run.projector_residual {
                    cols.push((format!("{} projector", run.formulation), v.clone()));
                }
                cols.push((format!("{} scalar channels", run.formulation), run.scalar_channels.clone()));
                cols.push((format!("{} divergence", run.formulation), run.divergence.clone()));
            }
            csv(&p, &r.times, cols)?;
            files.push(p);
            let p = dir.join("constraints_control.csv");
            let interior = &r.times[1..r.times.len().saturating_sub(1)];
            let cols = r
                .controls
                .iter()
                .map(|c| (format!("{} source residual", c.formulation), c.source_residual.clone()))
                .collect();
            csv(&p, interior, cols)?;
            files.push(p);
        }
        SuiteOutput::Generalized(r) => {
            for run in &r.runs {
                let p = dir.join(format!("generalized_{}.csv", run.formulation.to_lowercase()));
                let cols = (0..8)
                    .map(|e| {
                        (
                            run.residuals.labels[e].clone(),
                            run.residuals.values.iter().map(|row| row[e]).collect(),
                        )
                    })
                    .collect();
                csv(&p, &run.residuals.times, cols)?;
                files.push(p);
            }
        }
        SuiteOutput::Refused(_) => {}
    }
    Ok(files)
}

/// Runs the suites, serially or on a pool of `parallel` threads.
pub fn run(cfg: &RunConfig, suites: &[Suite], parallel: usize) -> Result<Outcome> {
    let start = Instant::now();
    let outputs: Vec<Result<SuiteOutput>> = if parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(parallel).build()?;
        pool.install(|| {
            use rayon::prelude::*;
            suites.par_iter().map(|&s| execute(cfg, s)).collect()
        })
    } else {
        suites.iter().map(|&s| execute(cfg, s)).collect()
    };
    let outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("cannot create {}", cfg.out.display()))?;
    let mut results = serde_json::Map::new();
    let mut summary = Vec::new();
    let mut series = Vec::new();
    for (suite, out) in suites.iter().zip(&outputs) {
        results.insert(suite.as_str().to_string(), out.to_json()?);
        summary.push(format!(
            "[{}] {}",
            suite.as_str(),
            if out.passed() { "PASS" } else { "FAIL" }
        ));
        summary.extend(out.verdict_lines().into_iter().map(|l| format!("  {l}")));
        series.extend(write_series(cfg, out)?);
    }
    if cfg.plot {
        let names: Vec<PathBuf> = series
            .iter()
            .filter_map(|p| p.file_name().map(PathBuf::from))
            .collect();
        let refs: Vec<&Path> = names.iter().map(|p| p.as_path()).collect();
        fs::write(cfg.out.join("plot.py"), plot_script(&refs))?;
    }
    let passed = outputs.iter().all(|o| o.passed());
    results.insert("elapsed_seconds".into(), json!(start.elapsed().as_secs_f64()));
    results.insert(
        "series".into(),
        json!(series.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()),
    );
    let label = format!(
        "run {}",
        suites.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(",")
    );
    let report_path = write_report(cfg, &label, passed, Value::Object(results))?;
    Ok(Outcome { passed, summary, report_path })
}

/// Evolves the seeded divergence-free data under one formulation and dumps
/// the wavefunction and reconstructed fields at the requested snapshots.
pub fn export(cfg: &RunConfig, formulation: Formulation, snapshots: &[usize], binary_only: bool) -> Result<Outcome> {
    let s = cfg.settings();
    let grid = cfg.grid;
    let u0 = make_initial_em(&grid, cfg.seed, s.band, false)?;
    let rep = match s.reps.certified(formulation.rep()) {
        Ok(r) => r,
        Err(e @ SimError::Uncertified { .. }) => {
            let msg = e.to_string();
            let report_path = write_report(cfg, "export", false, json!({ "error": msg }))?;
            return Ok(Outcome { passed: false, summary: vec![format!("FAILED {msg}")], report_path });
        }
        Err(e) => return Err(e.into()),
    };
    let small = NumericPacking::new(&zeromass_core::packing(formulation.packing()));
    let full = NumericPacking::new(&zeromass_core::packing(formulation.full_packing()));
    let c = cfg.c_overrides.get(&formulation).copied().unwrap_or(grid.c);
    let mut psi0 = fields_to_wavefunction(&small, &u0);
    psi0.grid = grid.with_c(c);
    let ev = Evolver::new(&rep, &psi0)?;
    fs::create_dir_all(&cfg.out)?;
    let mut files = Vec::new();
    for &snap in snapshots {
        anyhow::ensure!(snap < grid.steps, "snapshot {snap} out of range 0..{}", grid.steps);
        let t = snap as f64 * grid.dt;
        let psi = ev.at(t);
        let stem = format!("{}_s{snap:04}", formulation.as_str().to_lowercase());
        let bin = cfg.out.join(format!("{stem}.zmdw"));
        write_spinor_binary(BufWriter::new(File::create(&bin)?), &psi)?;
        files.push(bin);
        if !binary_only {
            let p = cfg.out.join(format!("{stem}_psi.csv"));
            write_spinor_csv(BufWriter::new(File::create(&p)?), &psi)?;
            files.push(p);
            let (u, _) = wavefunction_to_fields(&full, &psi, cfg.tolerances.reconstruction)?;
            let p = cfg.out.join(format!("{stem}_fields.csv"));
            write_fields_csv(BufWriter::new(File::create(&p)?), &u)?;
            files.push(p);
        }
    }
    let results = json!({
        "formulation": formulation,
        "snapshots": snapshots,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    let report_path = write_report(cfg, "export", true, results)?;
    Ok(Outcome {
        passed: true,
        summary: vec![format!("wrote {} files", files.len())],
        report_path,
    })
}
