//! `crooks run` scenarios.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuation::{
    coherent_work_ft_check, composite_energies, crooks_evaluate, exponent_forms, sample_protocol_unitary,
    semiclassical_relation, BathModel, CoherentWorkFtReport, CrooksReport, ExponentForms, SemiclassicalReport,
};
use crate::io::read_state;
use crate::ladder::{EnergySpectrum, LadderState};
use crate::linalg::C64;

pub const SCENARIO_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    EffectivePotential,
    MeanCoherence,
    RelativeEntropy,
    Cumulant,
    CoherentWork,
    Semiclassical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub h0: Vec<f64>,
    pub h1: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub crooks: f64,
    pub forms: f64,
    pub cumulant: f64,
    pub semiclassical: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { crooks: 1e-9, forms: 1e-9, cumulant: 1e-6, semiclassical: 1e-9 }
    }
}

impl Tolerances {
    pub fn pairs(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("crooks", self.crooks),
            ("forms", self.forms),
            ("cumulant", self.cumulant),
            ("semiclassical", self.semiclassical),
            ("coherent_work", crate::fluctuation::FT_MATCH_TOL),
            ("reverse_floor", crate::fluctuation::REVERSE_FLOOR),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiclassicalConfig {
    pub alpha0: [f64; 2],
    pub alpha1: [f64; 2],
    pub h_nu: f64,
}

/// Scenario file. Paths are relative to the file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: String,
    pub psi0: PathBuf,
    pub psi1: PathBuf,
    pub bath: BathConfig,
    pub betas: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub omega: Option<PathBuf>,
    #[serde(default)]
    pub semiclassical: Option<SemiclassicalConfig>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_checks() -> Vec<CheckKind> {
    vec![CheckKind::EffectivePotential]
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::Config(format!("unknown scenario version {:?}", self.version)));
        }
        let t = &self.tolerances;
        if [t.crooks, t.forms, t.cumulant, t.semiclassical].iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.betas.is_empty() || self.betas.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::Config("betas must be a nonempty list of finite values >= 0".into()));
        }
        let needs_positive = self.checks.iter().any(|c| {
            matches!(c, CheckKind::MeanCoherence | CheckKind::RelativeEntropy | CheckKind::Cumulant | CheckKind::Semiclassical)
        });
        if needs_positive && self.betas.contains(&0.0) {
            return Err(Error::Config("exponent-form checks need beta > 0".into()));
        }
        if self.checks.contains(&CheckKind::CoherentWork) && self.omega.is_none() {
            return Err(Error::Config("coherent-work check needs an omega state".into()));
        }
        if self.checks.contains(&CheckKind::Semiclassical) && self.semiclassical.is_none() {
            return Err(Error::Config("semiclassical check needs a semiclassical block".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        Ok(())
    }
}

/// Effective configuration whose hash goes into the report: inputs are
/// represented by content hashes.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedConfig {
    pub psi0_sha256: String,
    pub psi1_sha256: String,
    pub omega_sha256: Option<String>,
    pub bath: BathConfig,
    pub betas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckKind>,
    pub semiclassical: Option<SemiclassicalConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrooksCell {
    pub seed: u64,
    pub beta: f64,
    pub crooks: CrooksReport,
    pub forms: Option<ExponentForms>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub cells: Vec<CrooksCell>,
    pub coherent_work: Option<std::result::Result<CoherentWorkFtReport, String>>,
    pub semiclassical: Vec<SemiclassicalReport>,
    pub warnings: Vec<String>,
}

pub struct LoadedScenario {
    pub config: ScenarioConfig,
    pub resolved: ResolvedConfig,
    pub psi0: LadderState,
    pub psi1: LadderState,
    pub omega: Option<LadderState>,
}

pub fn load(path: &Path) -> Result<LoadedScenario> {
    let config: ScenarioConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    config.validate()?;
    let base = path.parent().unwrap_or(Path::new("."));
    let p0 = base.join(&config.psi0);
    let p1 = base.join(&config.psi1);
    let pw = config.omega.as_ref().map(|o| base.join(o));
    let resolved = ResolvedConfig {
        psi0_sha256: super::report::file_hash(&p0)?,
        psi1_sha256: super::report::file_hash(&p1)?,
        omega_sha256: pw.as_deref().map(super::report::file_hash).transpose()?,
        bath: config.bath.clone(),
        betas: config.betas.clone(),
        seeds: config.seeds.clone(),
        tolerances: config.tolerances.clone(),
        checks: config.checks.clone(),
        semiclassical: config.semiclassical.clone(),
    };
    let (psi0, psi1) = (read_state(&p0)?, read_state(&p1)?);
    let omega = pw.map(read_state).transpose()?;
    Ok(LoadedScenario { config, resolved, psi0, psi1, omega })
}

fn spectrum(levels: &[f64], name: &str) -> Result<EnergySpectrum> {
    let mut sorted = levels.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted != levels {
        return Err(Error::Config(format!("bath block {name} must list levels in ascending order")));
    }
    EnergySpectrum::new(0, sorted, crate::ladder::DEGENERACY_TOL)
}

/// Run every requested check. Returns the report and whether all passed.
pub fn run(s: &LoadedScenario) -> Result<(ScenarioReport, bool)> {
    let c = &s.config;
    let bath = BathModel::new(spectrum(&c.bath.h0, "h0")?, spectrum(&c.bath.h1, "h1")?);
    let lo = s.psi0.offset().min(s.psi1.offset());
    let hi = (s.psi0.offset() + s.psi0.dim() as i64).max(s.psi1.offset() + s.psi1.dim() as i64) - 1;
    let (psi0, psi1) = (s.psi0.on_ladder_window(lo, hi)?, s.psi1.on_ladder_window(lo, hi)?);
    let energies = composite_energies(psi0.spectrum().levels(), &bath.energies());
    let t = &c.tolerances;
    let want = |k: CheckKind| c.checks.contains(&k);
    let mut all = true;
    let mut warnings = Vec::new();
    let mut cells = Vec::new();
    for &seed in &c.seeds {
        let v = sample_protocol_unitary(&energies, seed);
        for &beta in &c.betas {
            let crooks = crooks_evaluate(&psi0, &psi1, &bath, &v, beta)?;
            let mut passed = true;
            if let Some(w) = &crooks.warning {
                warnings.push(format!("seed {seed}, beta {beta}: {w}"));
            }
            if want(CheckKind::EffectivePotential) {
                passed &= crooks.agreement.is_none_or(|a| a <= t.crooks);
            }
            let needs_forms = want(CheckKind::MeanCoherence) || want(CheckKind::RelativeEntropy) || want(CheckKind::Cumulant);
            let forms = if needs_forms {
                let f = exponent_forms(&psi0.energy_statistics(), &psi1.energy_statistics(), crooks.beta_delta_f, beta)?;
                let ep = f.effective_potential;
                if want(CheckKind::MeanCoherence) {
                    passed &= (f.mean_coherence - ep).abs() <= t.forms;
                }
                if want(CheckKind::RelativeEntropy) {
                    passed &= (f.relative_entropy - ep).abs() <= t.forms;
                }
                if want(CheckKind::Cumulant) {
                    passed &= (f.cumulant - ep).abs() <= t.cumulant;
                }
                Some(f)
            } else {
                None
            };
            all &= passed;
            cells.push(CrooksCell { seed, beta, crooks, forms, passed });
        }
    }
    let coherent_work = match (&s.omega, want(CheckKind::CoherentWork)) {
        (Some(omega), true) => {
            let r = coherent_work_ft_check(&s.psi0, &s.psi1, omega, &c.betas).map_err(|e| e.to_string());
            all &= r.as_ref().is_ok_and(|r| r.process_verified);
            Some(r)
        }
        _ => None,
    };
    let mut semiclassical = Vec::new();
    if let (Some(sc), true) = (&c.semiclassical, want(CheckKind::Semiclassical)) {
        for &beta in &c.betas {
            let r = semiclassical_relation(
                C64::new(sc.alpha0[0], sc.alpha0[1]),
                C64::new(sc.alpha1[0], sc.alpha1[1]),
                beta,
                sc.h_nu,
                &bath,
            )?;
            all &= r.gap <= t.semiclassical;
            semiclassical.push(r);
        }
    }
    Ok((ScenarioReport { cells, coherent_work, semiclassical, warnings }, all))
}
