//! JSON run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use zeromass_core::{build_rep, ExactMatrix, ExactScalar, RepName};
use zeromass_sim::harness::default_band;
use zeromass_sim::{Formulation, GridSpec, RepTable, RunSettings, Tolerances};

/// Deliberately broken inputs for exercising failure paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    /// Flips the sign of one entry of Σ¹.
    CorruptSigma1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub seed: u64,
    /// Largest Fourier mode magnitude in random data; defaults to `min(4, n/2 − 1)`.
    pub band: Option<usize>,
    /// Numeric tolerances. Symbolic checks are exact and take none.
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub plot: bool,
    pub formulations: Vec<Formulation>,
    /// Wave speed per formulation, replacing `grid.c`.
    pub c_overrides: BTreeMap<Formulation, f64>,
    pub test_fixture: Option<Fixture>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            seed: 20240531,
            band: None,
            tolerances: Tolerances::default(),
            out: PathBuf::from("zeromass-out"),
            plot: false,
            formulations: Formulation::ALL.to_vec(),
            c_overrides: BTreeMap::new(),
            test_fixture: None,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub plot: bool,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("invalid config {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(o) = &overrides.out {
            cfg.out = o.clone();
        }
        if let Some(s) = overrides.seed {
            cfg.seed = s;
        }
        if let Some(n) = overrides.grid {
            cfg.grid.n = n;
        }
        if let Some(s) = overrides.steps {
            cfg.grid.steps = s;
        }
        if let Some(dt) = overrides.dt {
            cfg.grid.dt = dt;
        }
        cfg.plot |= overrides.plot;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.grid.steps < 3 {
            bail!("grid.steps must be at least 3, got {}", self.grid.steps);
        }
        for (name, v) in self.tolerances.entries() {
            if !(v >= 0.0 && v.is_finite()) {
                bail!("tolerance `{name}` must be nonnegative, got {v}");
            }
        }
        let band = self.band();
        if band == 0 || band >= self.grid.n / 2 {
            bail!("band {band} must be in 1..{}", self.grid.n / 2);
        }
        for (f, c) in &self.c_overrides {
            if !(*c > 0.0 && c.is_finite()) {
                bail!("c override for {f} must be positive, got {c}");
            }
        }
        Ok(())
    }

    pub fn band(&self) -> usize {
        self.band.unwrap_or_else(|| default_band(self.grid.n))
    }

    pub fn reps(&self) -> RepTable {
        match self.test_fixture {
            Some(Fixture::CorruptSigma1) => {
                RepTable::default().with_override(RepName::Sigma, corrupt_sigma1())
            }
            None => RepTable::default(),
        }
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            grid: self.grid,
            seed: self.seed,
            band: self.band(),
            tolerances: self.tolerances,
            reps: self.reps(),
        }
    }
}

pub fn corrupt_sigma1() -> zeromass_core::RepresentationSet {
    let mut rep = build_rep(RepName::Sigma);
    let m: &mut ExactMatrix = &mut rep.spatial[0];
    let v = -m.get(0, 2).clone();
    m.set(0, 2, v);
    debug_assert!(m.get(0, 2) != &ExactScalar::zero());
    rep.name = "SIGMA[corrupted]".into();
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.band(), 4);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"grid": {"n": 16}, "c_overrides": {"ALPHA_SK": 1.01}}"#).unwrap();
        assert_eq!(cfg.grid.n, 16);
        assert_eq!(cfg.grid.steps, 100);
        assert_eq!(cfg.c_overrides[&Formulation::AlphaSk], 1.01);
        assert_eq!(cfg.band(), 4);
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"grd": {}}"#).is_err());
        let mut cfg = RunConfig::default();
        cfg.tolerances.duality = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.band = Some(16);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn corrupted_sigma_is_not_an_involution() {
        let rep = corrupt_sigma1();
        let sq = rep.spatial[0].matmul(&rep.spatial[0]).unwrap();
        assert_ne!(sq, ExactMatrix::identity(4));
    }
}
