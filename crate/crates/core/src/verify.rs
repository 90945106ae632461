//! Grid comparison of the closed forms against the Fock-space oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::closed_form::{self, CaseId, ModelParams, QuantumNumbers};
use crate::error::{Error, Result};
use crate::fock_oracle::{self, OracleConfig, PerturbationMatrices};
use crate::rational::{format_rational, Rational, Scalar};

/// Analytic expressions under test. [`Analytic`] is the library's own; tests
/// substitute deliberately broken ones as negative controls.
pub trait ClosedForms {
    fn e1(&self, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational;
    fn e2(&self, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational;
    fn case_contribution(&self, case: CaseId, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational;
    fn moment(&self, k: u32, nz: u32) -> Result<Rational>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Analytic;

impl ClosedForms for Analytic {
    fn e1(&self, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational {
        closed_form::e1(q, p)
    }

    fn e2(&self, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational {
        closed_form::e2(q, p)
    }

    fn case_contribution(&self, case: CaseId, q: &QuantumNumbers, p: &ModelParams<Rational>) -> Rational {
        closed_form::case_contribution(case, q, p)
    }

    fn moment(&self, k: u32, nz: u32) -> Result<Rational> {
        closed_form::axial_moment(k, nz)
    }
}

/// Truncation used for each verification point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimPolicy {
    /// One truncation for the whole grid.
    Fixed(usize),
    /// `dim = n_z + extra` per point.
    PerLevel { extra: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n_max: u32,
    pub nz_max: u32,
    #[serde(serialize_with = "crate::rational::as_string::seq")]
    pub w_list: Vec<Rational>,
    pub dim: DimPolicy,
    pub guard_band: usize,
    /// Relative tolerance for first- and second-order energies.
    pub energy_tol: f64,
    /// Relative tolerance for individual case contributions.
    pub case_tol: f64,
    /// Absolute bound on forbidden `H1` elements.
    pub selection_tol: f64,
    /// Relative tolerance for `⟨(a†−a)^k⟩`.
    pub moment_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 6,
            nz_max: 6,
            w_list: vec![Rational::ratio(1, 2), Rational::one(), Rational::from_int(2)],
            dim: DimPolicy::Fixed(16),
            guard_band: OracleConfig::DEFAULT_GUARD_BAND,
            energy_tol: 1e-10,
            case_tol: 1e-12,
            selection_tol: 1e-14,
            moment_tol: 1e-12,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.w_list.is_empty() {
            return Err(Error::InvalidConfig("at least one w value is required".into()));
        }
        if let Some(w) = self.w_list.iter().find(|w| **w <= Rational::from_int(0)) {
            return Err(Error::InvalidConfig(format!(
                "w must be positive, got {}",
                format_rational(w)
            )));
        }
        let needed = self.nz_max as usize + self.guard_band;
        match self.dim {
            DimPolicy::Fixed(d) if d < needed => Err(Error::InvalidConfig(format!(
                "truncation dim {d} too small: need at least nz_max + guard band = {needed}"
            ))),
            DimPolicy::PerLevel { extra } if extra < self.guard_band => Err(Error::InvalidConfig(format!(
                "per-level truncation n_z + {extra} leaves n_z outside the trusted band (guard band {})",
                self.guard_band
            ))),
            _ => Ok(()),
        }
    }

    fn oracle_config(&self, nz: u32) -> Result<OracleConfig> {
        let dim = match self.dim {
            DimPolicy::Fixed(d) => d,
            DimPolicy::PerLevel { extra } => nz as usize + extra,
        };
        OracleConfig::with_guard_band(dim, self.guard_band)
    }
}

/// Check families reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckClass {
    FirstOrder,
    SecondOrder,
    CaseMinus4,
    CaseMinus2,
    CasePlus2,
    CasePlus4,
    SelectionRule,
    Moment,
}

impl CheckClass {
    fn for_case(c: CaseId) -> Self {
        match c {
            CaseId::Minus4 => CheckClass::CaseMinus4,
            CaseId::Minus2 => CheckClass::CaseMinus2,
            CaseId::Plus2 => CheckClass::CasePlus2,
            CaseId::Plus4 => CheckClass::CasePlus4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckClass::FirstOrder => "first_order",
            CheckClass::SecondOrder => "second_order",
            CheckClass::CaseMinus4 => "case_-4",
            CheckClass::CaseMinus2 => "case_-2",
            CheckClass::CasePlus2 => "case_+2",
            CheckClass::CasePlus4 => "case_+4",
            CheckClass::SelectionRule => "selection_rule",
            CheckClass::Moment => "moment",
        }
    }
}

impl fmt::Display for CheckClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub class: CheckClass,
    pub checks: usize,
    /// Largest relative deviation (absolute for the selection rule).
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub class: CheckClass,
    pub n: u32,
    pub nz: u32,
    pub w: String,
    pub detail: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub summaries: Vec<ClassSummary>,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self, class: CheckClass) -> Option<&ClassSummary> {
        self.summaries.iter().find(|s| s.class == class)
    }
}

#[derive(Default)]
struct Accumulator {
    classes: BTreeMap<CheckClass, ClassSummary>,
    failures: Vec<Failure>,
}

impl Accumulator {
    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        class: CheckClass,
        tol: f64,
        deviation: f64,
        q: QuantumNumbers,
        w: &Rational,
        detail: impl FnOnce() -> String,
    ) {
        let s = self.classes.entry(class).or_insert(ClassSummary {
            class,
            checks: 0,
            max_deviation: 0.0,
            tolerance: tol,
            failures: 0,
        });
        s.checks += 1;
        // NaN deviations count as failures.
        let ok = deviation <= tol;
        if deviation > s.max_deviation || deviation.is_nan() {
            s.max_deviation = deviation;
        }
        if !ok {
            s.failures += 1;
            self.failures.push(Failure {
                class,
                n: q.n,
                nz: q.nz,
                w: format_rational(w),
                detail: detail(),
                deviation,
            });
        }
    }
}

fn relative(expected: f64, got: f64) -> f64 {
    let scale = expected.abs();
    if scale < f64::MIN_POSITIVE {
        (got - expected).abs()
    } else {
        (got - expected).abs() / scale
    }
}

/// Runs every check class over the grid with the library's closed forms.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    verify_with(cfg, &Analytic)
}

/// Runs every check class over the grid against `forms`, at `ε = 1`.
pub fn verify_with(cfg: &VerifyConfig, forms: &dyn ClosedForms) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut acc = Accumulator::default();
    let eps = Rational::one();

    for w in &cfg.w_list {
        let params = ModelParams::new(w.clone(), eps.clone())?;
        let wf = w.to_f64();
        for n in 0..=cfg.n_max {
            for nz in 0..=cfg.nz_max {
                let q = QuantumNumbers::new(n, nz);
                let ocfg = cfg.oracle_config(nz)?;
                let mats = PerturbationMatrices::new(n, wf, 1.0, &ocfg)?;
                let idx = nz as usize;

                let cf1 = forms.e1(&q, &params).to_f64();
                let or1 = mats.first_order(idx, &ocfg)?;
                acc.record(CheckClass::FirstOrder, cfg.energy_tol, relative(cf1, or1), q, w, || {
                    format!("closed form {cf1:e}, oracle {or1:e}")
                });

                let cf2 = forms.e2(&q, &params).to_f64();
                let or2 = mats.second_order(idx, &ocfg)?;
                acc.record(
                    CheckClass::SecondOrder,
                    cfg.energy_tol,
                    relative(cf2, or2),
                    q,
                    w,
                    || format!("closed form {cf2:e}, oracle {or2:e}"),
                );

                for case in CaseId::ALL {
                    let p = nz as i64 + case.offset() as i64;
                    if p < 0 {
                        continue;
                    }
                    let p = p as usize;
                    // The intermediate state must sit in the trusted band too.
                    let case_cfg = if p <= ocfg.max_trusted() {
                        ocfg
                    } else {
                        OracleConfig::with_guard_band(p + cfg.guard_band, cfg.guard_band)?
                    };
                    let element = if case_cfg == ocfg {
                        mats.matrix_element(idx, p, &case_cfg)?
                    } else {
                        fock_oracle::matrix_element(n, idx, p, wf, 1.0, &case_cfg)?
                    };
                    let oracle = element * element / (idx as f64 - p as f64);
                    let cf = forms.case_contribution(case, &q, &params).to_f64();
                    acc.record(
                        CheckClass::for_case(case),
                        cfg.case_tol,
                        relative(cf, oracle),
                        q,
                        w,
                        || format!("case {case}: closed form {cf:e}, oracle {oracle:e}"),
                    );
                }
            }

            // Selection rule over the trusted band of the largest truncation.
            let ocfg = cfg.oracle_config(cfg.nz_max)?;
            let mats = PerturbationMatrices::new(n, wf, 1.0, &ocfg)?;
            let top = ocfg.max_trusted();
            let mut worst = 0.0f64;
            let mut at = (0, 0);
            for i in 0..=top {
                for j in 0..=top {
                    if matches!(i.abs_diff(j), 0 | 2 | 4) {
                        continue;
                    }
                    let v = mats.h1.get(i, j).abs();
                    if v > worst {
                        worst = v;
                        at = (i, j);
                    }
                }
            }
            acc.record(
                CheckClass::SelectionRule,
                cfg.selection_tol,
                worst,
                QuantumNumbers::new(n, at.0 as u32),
                w,
                || format!("H1[{}, {}] = {worst:e}", at.0, at.1),
            );
        }
    }

    for nz in 0..=cfg.nz_max {
        let ocfg = cfg.oracle_config(nz)?;
        for k in 0..=6 {
            let cf = forms.moment(k, nz)?.to_f64();
            let oracle = fock_oracle::centered_moment(k, nz as usize, &ocfg)?;
            acc.record(
                CheckClass::Moment,
                cfg.moment_tol,
                relative(cf, oracle),
                QuantumNumbers::new(0, nz),
                &Rational::one(),
                || format!("<(a+ - a)^{k}>: closed form {cf}, oracle {oracle}"),
            );
        }
    }

    Ok(VerifyReport {
        summaries: acc.classes.into_values().collect(),
        failures: acc.failures,
    })
}
