//! Declarative scenarios, built-in presets and σ sweeps.
//!
//! A scenario file is TOML. Complex numbers are always two-element `[re, im]`
//! arrays:
//!
//! ```toml
//! name = "xbasis-theta"
//! dimension = 2
//! observable = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]
//!
//! [state]
//! vector = [[0.9238795325112867, 0.0], [0.3826834323650898, 0.0]]
//!
//! [[povm]]
//! label = "+"
//! vector = [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]
//!
//! [[povm]]
//! label = "-"
//! vector = [[0.7071067811865476, 0.0], [-0.7071067811865476, 0.0]]
//!
//! [estimates]
//! strategy = "weak-value"   # zero | mean | eigenvalue | weak-value | custom
//!
//! [sigma]
//! start = 0.0
//! stop = 1.0
//! points = 21
//! spacing = "linear"        # or "log"
//!
//! [monte_carlo]             # optional
//! shots = 100000
//! seed = 42
//! ```
//!
//! A state or effect may be given either as `vector` (rank one, `|v⟩⟨v|`) or
//! as `matrix` (rows of `[re, im]` entries). Custom estimates go in
//! `[estimates.values]` keyed by outcome label.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, C64};
use crate::model::{
    dominant_column, expectation, pure_state, DensityMatrix, Effect, Observable, Povm, VALIDATION_TOL,
};
use crate::montecarlo::ShotSampler;
use crate::protocol::{
    probe_output_feedback_joint, probe_output_feedback_reduced, probe_output_no_feedback, CouplingStrength,
    EstimateMap,
};
use crate::random;
use crate::uncertainty::{optimize_estimates, ozawa_uncertainty, weak_value_estimates};

/// Maximum allowed gap between the joint-space and reduced evaluations in a sweep row.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Names of the built-in presets, in listing order.
pub const PRESET_NAMES: [&str; 5] = ["eigenbasis", "xbasis-theta", "orthogonal-blind", "no-measurement", "qutrit-random"];

/// How feedback values are assigned to outcomes.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimateStrategy {
    Zero,
    Mean,
    /// Eigenvalue of the observable on each projector; needs a rank-1
    /// projective POVM onto an eigenbasis.
    Eigenvalue,
    WeakValue,
    Custom(EstimateMap),
}

impl EstimateStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Mean => "mean",
            Self::Eigenvalue => "eigenvalue",
            Self::WeakValue => "weak-value",
            Self::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            other => Err(Error::Validation(format!("invalid sigma spacing `{other}` (expected linear or log)"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Log => "log",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SigmaSweep {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points, spacing: Spacing::Linear }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Validation("sigma bounds must be finite".into()));
        }
        if self.points == 0 {
            return Err(Error::Validation("sigma sweep needs at least one point".into()));
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Validation("log spacing needs positive sigma bounds".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

impl Default for SigmaSweep {
    fn default() -> Self {
        Self::linear(0.0, 1.0, 21)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub shots: u64,
    pub seed: u64,
}

/// A fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub state: DensityMatrix,
    pub observable: Observable,
    pub povm: Povm,
    pub strategy: EstimateStrategy,
    pub sweep: SigmaSweep,
    pub monte_carlo: Option<MonteCarloConfig>,
}

impl ScenarioSpec {
    pub fn dimension(&self) -> usize {
        self.state.dim()
    }

    /// Checks cross-field invariants; the constructors of the parts already
    /// validated each part on its own.
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension();
        if self.observable.dim() != d {
            return Err(Error::Validation(format!(
                "dimension mismatch: observable is {}x{0}, state is {d}x{d}",
                self.observable.dim()
            )));
        }
        if self.povm.dim() != d {
            return Err(Error::Validation(format!(
                "dimension mismatch: POVM effects are {}x{0}, state is {d}x{d}",
                self.povm.dim()
            )));
        }
        for label in self.povm.labels() {
            if label.is_empty() || label.contains([',', '\n', '\r', '#']) {
                return Err(Error::Validation(format!("invalid outcome label `{label}`")));
            }
        }
        self.sweep.validate()?;
        if let Some(mc) = self.monte_carlo {
            if mc.shots == 0 {
                return Err(Error::Validation("monte_carlo.shots must be at least 1".into()));
            }
        }
        self.resolve_estimates().map(|_| ())
    }

    /// The feedback values the strategy assigns on this scenario.
    pub fn resolve_estimates(&self) -> Result<EstimateMap> {
        let validation = |e: Error| Error::Validation(e.to_string());
        match &self.strategy {
            EstimateStrategy::Zero => EstimateMap::uniform(&self.povm, 0.0),
            EstimateStrategy::Mean => EstimateMap::uniform(&self.povm, expectation(&self.observable, &self.state)?),
            EstimateStrategy::Eigenvalue => eigenvalue_estimates(&self.observable, &self.povm),
            EstimateStrategy::WeakValue => Ok(optimize_estimates(&self.state, &self.observable, &self.povm)?.0),
            EstimateStrategy::Custom(map) => map.check_labels(&self.povm).map(|_| map.clone()).map_err(validation),
        }
    }

    /// Serializes back into the scenario file format.
    pub fn to_toml(&self) -> String {
        let state = match self.state.pure_vector() {
            Ok(v) => RawOperator { vector: Some(to_pairs(&v)), matrix: None },
            Err(_) => RawOperator { vector: None, matrix: Some(matrix_to_pairs(self.state.matrix())) },
        };
        let povm = self
            .povm
            .effects()
            .iter()
            .map(|e| {
                let (vector, matrix) = if e.is_rank_one_projector() {
                    (Some(to_pairs(&dominant_column(e.matrix()))), None)
                } else {
                    (None, Some(matrix_to_pairs(e.matrix())))
                };
                RawEffect { label: e.label().to_owned(), vector, matrix }
            })
            .collect();
        let values = match &self.strategy {
            EstimateStrategy::Custom(map) => Some(map.entries().clone()),
            _ => None,
        };
        let raw = RawScenario {
            name: self.name.clone(),
            dimension: self.dimension(),
            observable: matrix_to_pairs(self.observable.matrix()),
            state,
            povm,
            estimates: RawEstimates { strategy: self.strategy.name().to_owned(), values },
            sigma: RawSweep {
                start: self.sweep.start,
                stop: self.sweep.stop,
                points: self.sweep.points,
                spacing: Some(self.sweep.spacing.to_string()),
            },
            monte_carlo: self.monte_carlo.map(|mc| RawMonteCarlo { shots: mc.shots, seed: mc.seed }),
        };
        toml::to_string(&raw).expect("scenario serializes")
    }
}

fn eigenvalue_estimates(a: &Observable, povm: &Povm) -> Result<EstimateMap> {
    if !povm.is_rank_one_projective() {
        return Err(Error::Validation(
            "eigenvalue strategy requires a rank-1 projective POVM".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(povm.len());
    for e in povm.effects() {
        let lambda = a.matrix().trace_product(e.matrix()).re;
        let residual = (a.matrix() * e.matrix()).max_abs_diff(&e.matrix().scale_real(lambda));
        if residual > VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "eigenvalue strategy: projector `{}` is not onto an eigenvector of the observable (residual {residual:.3e})",
                e.label()
            )));
        }
        pairs.push((e.label().to_owned(), lambda));
    }
    EstimateMap::from_pairs(pairs)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    dimension: usize,
    observable: Vec<Vec<[f64; 2]>>,
    state: RawOperator,
    povm: Vec<RawEffect>,
    estimates: RawEstimates,
    sigma: RawSweep,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<RawMonteCarlo>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEffect {
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimates {
    strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    start: f64,
    stop: f64,
    points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonteCarlo {
    shots: u64,
    seed: u64,
}

fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim()).map(|r| (0..m.dim()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn matrix_from_pairs(rows: &[Vec<[f64; 2]>], what: &str, dim: usize) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| from_pairs(r)).collect();
    let m = ComplexMatrix::from_rows(&rows).map_err(|e| Error::Validation(format!("{what}: {e}")))?;
    if m.dim() != dim {
        return Err(Error::Validation(format!(
            "dimension mismatch: {what} is {}x{0}, declared dimension is {dim}",
            m.dim()
        )));
    }
    Ok(m)
}

fn operator_matrix(vector: &Option<Vec<[f64; 2]>>, matrix: &Option<Vec<Vec<[f64; 2]>>>, what: &str, dim: usize) -> Result<ComplexMatrix> {
    match (vector, matrix) {
        (Some(v), None) => {
            if v.len() != dim {
                return Err(Error::Validation(format!(
                    "dimension mismatch: {what} vector has {} entries, declared dimension is {dim}",
                    v.len()
                )));
            }
            Ok(ComplexMatrix::projector(&from_pairs(v)))
        }
        (None, Some(m)) => matrix_from_pairs(m, what, dim),
        _ => Err(Error::Validation(format!("{what}: give exactly one of `vector` or `matrix`"))),
    }
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let message = e.message().replace('\n', " ");
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                Error::Parse(format!("at line {line}, column {col}: {message}"))
            }
            None => Error::Parse(message),
        }
    })?;
    let dim = raw.dimension;
    if dim == 0 {
        return Err(Error::Validation("dimension must be at least 1".into()));
    }

    let observable = Observable::new(matrix_from_pairs(&raw.observable, "observable", dim)?)
        .map_err(|e| Error::Validation(format!("non-Hermitian observable ({e})")))?;

    let state = match (&raw.state.vector, &raw.state.matrix) {
        (Some(v), None) => {
            if v.len() != dim {
                return Err(Error::Validation(format!(
                    "dimension mismatch: state vector has {} entries, declared dimension is {dim}",
                    v.len()
                )));
            }
            pure_state(&from_pairs(v))
        }
        (None, Some(m)) => DensityMatrix::new(matrix_from_pairs(m, "state", dim)?),
        _ => return Err(Error::Validation("state: give exactly one of `vector` or `matrix`".into())),
    }
    .map_err(|e| Error::Validation(format!("state: {e}")))?;

    let effects = raw
        .povm
        .iter()
        .map(|e| {
            let what = format!("povm effect `{}`", e.label);
            let m = operator_matrix(&e.vector, &e.matrix, &what, dim)?;
            Effect::new(e.label.clone(), m).map_err(|err| Error::Validation(err.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let povm = Povm::new(effects).map_err(|e| Error::Validation(e.to_string()))?;

    let strategy = match raw.estimates.strategy.as_str() {
        "zero" => EstimateStrategy::Zero,
        "mean" => EstimateStrategy::Mean,
        "eigenvalue" => EstimateStrategy::Eigenvalue,
        "weak-value" => EstimateStrategy::WeakValue,
        "custom" => {
            let values = raw
                .estimates
                .values
                .clone()
                .ok_or_else(|| Error::Validation("label mismatch: custom strategy needs [estimates.values]".into()))?;
            EstimateStrategy::Custom(EstimateMap::new(values).map_err(|e| Error::Validation(e.to_string()))?)
        }
        other => return Err(Error::Validation(format!("invalid strategy `{other}`"))),
    };
    if raw.estimates.values.is_some() && !matches!(strategy, EstimateStrategy::Custom(_)) {
        return Err(Error::Validation("invalid strategy: [estimates.values] is only allowed with `custom`".into()));
    }

    let spacing = raw.sigma.spacing.as_deref().unwrap_or("linear").parse()?;
    let spec = ScenarioSpec {
        name: raw.name,
        state,
        observable,
        povm,
        strategy,
        sweep: SigmaSweep { start: raw.sigma.start, stop: raw.sigma.stop, points: raw.sigma.points, spacing },
        monte_carlo: raw.monte_carlo.map(|mc| MonteCarloConfig { shots: mc.shots, seed: mc.seed }),
    };
    spec.validate()?;
    Ok(spec)
}

fn ket(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn z_observable() -> Observable {
    Observable::new(pauli::z()).expect("Pauli Z is Hermitian")
}

fn plus_state() -> DensityMatrix {
    pure_state(&ket(&[1.0, 1.0])).expect("nonzero")
}

fn basis_povm(basis: &[Vec<C64>], labels: &[&str]) -> Povm {
    let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    crate::model::projective_povm_with_labels(basis, &labels).expect("orthonormal basis")
}

fn x_basis_povm() -> Povm {
    let r = FRAC_1_SQRT_2;
    basis_povm(&[ket(&[r, r]), ket(&[r, -r])], &["+", "-"])
}

/// `|+⟩`, observable Z, Z-basis measurement, eigenvalue feedback. Perfect compensation.
pub fn eigenbasis() -> ScenarioSpec {
    ScenarioSpec {
        name: "eigenbasis".into(),
        state: plus_state(),
        observable: z_observable(),
        povm: basis_povm(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])], &["0", "1"]),
        strategy: EstimateStrategy::Eigenvalue,
        sweep: SigmaSweep::default(),
        monte_carlo: None,
    }
}

/// `cos θ|0⟩ + sin θ|1⟩`, observable Z, X-basis measurement, weak-value feedback.
pub fn xbasis_theta(theta: f64) -> ScenarioSpec {
    ScenarioSpec {
        name: "xbasis-theta".into(),
        state: pure_state(&ket(&[theta.cos(), theta.sin()])).expect("nonzero"),
        observable: z_observable(),
        povm: x_basis_povm(),
        strategy: EstimateStrategy::WeakValue,
        sweep: SigmaSweep::default(),
        monte_carlo: None,
    }
}

/// `|+⟩`, observable Z, X-basis measurement: the measurement carries no
/// information about Z, so the minimal ε² is the full variance 1.
pub fn orthogonal_blind() -> ScenarioSpec {
    ScenarioSpec {
        name: "orthogonal-blind".into(),
        state: plus_state(),
        observable: z_observable(),
        povm: x_basis_povm(),
        strategy: EstimateStrategy::WeakValue,
        sweep: SigmaSweep::default(),
        monte_carlo: None,
    }
}

/// No measurement (`{I}`) with the mean as feedback: ε² = ΔA².
pub fn no_measurement() -> ScenarioSpec {
    ScenarioSpec {
        name: "no-measurement".into(),
        state: plus_state(),
        observable: z_observable(),
        povm: Povm::trivial(2, "all"),
        strategy: EstimateStrategy::Mean,
        sweep: SigmaSweep::default(),
        monte_carlo: None,
    }
}

/// Seed of the randomized qutrit regression preset.
pub const QUTRIT_SEED: u64 = 20_031_042;

/// Randomized qutrit regression scenario: mixed state, observable with
/// spectrum in `[−1, 1]`, four-outcome POVM, weak-value feedback.
pub fn qutrit_random() -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(QUTRIT_SEED);
    let state = random::mixed_density(&mut rng, 3);
    let observable = random::observable(&mut rng, 3, -1.0, 1.0);
    let povm = random::povm(&mut rng, 3, 4);
    ScenarioSpec {
        name: "qutrit-random".into(),
        state,
        observable,
        povm,
        strategy: EstimateStrategy::WeakValue,
        sweep: SigmaSweep::default(),
        monte_carlo: None,
    }
}

/// All built-in presets, in [`PRESET_NAMES`] order.
pub fn builtin_scenarios() -> Vec<ScenarioSpec> {
    vec![eigenbasis(), xbasis_theta(PI / 8.0), orthogonal_blind(), no_measurement(), qutrit_random()]
}

pub fn preset(name: &str) -> Option<ScenarioSpec> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

/// Per-outcome diagnostics reported in the sweep header.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSummary {
    pub label: String,
    pub probability: f64,
    pub weak_value: C64,
    pub degenerate: bool,
    pub anomalous: bool,
    /// Feedback value actually applied under the scenario's strategy.
    pub estimate: f64,
    /// This outcome's term of ε² under the applied estimates.
    pub contribution: f64,
}

/// σ-independent quantities of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepHeader {
    pub name: String,
    pub dimension: usize,
    pub strategy: String,
    pub mean: f64,
    pub variance: f64,
    pub epsilon_squared: f64,
    pub outcomes: Vec<OutcomeSummary>,
}

/// One σ point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sigma: f64,
    pub x_no_feedback: f64,
    pub x_feedback: f64,
    pub x_feedback_joint: f64,
    pub residual: f64,
    pub predicted_residual: f64,
    /// `2σ²ΔA²`, only defined when `⟨A⟩ = 0`.
    pub variance_model: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub header: SweepHeader,
    pub rows: Vec<ResultRow>,
}

/// Evaluates every σ point of the scenario's sweep.
pub fn run_sweep(spec: &ScenarioSpec) -> Result<SweepReport> {
    spec.validate()?;
    let (rho, a, povm) = (&spec.state, &spec.observable, &spec.povm);
    let estimates = spec.resolve_estimates()?;
    let report = ozawa_uncertainty(rho, a, povm, &estimates)?;
    let weak = weak_value_estimates(rho, a, povm)?;
    let mean = expectation(a, rho)?;
    let zero_mean = mean.abs() <= VALIDATION_TOL;

    let outcomes = weak
        .entries
        .iter()
        .zip(&report.contributions)
        .map(|(w, (_, contribution))| OutcomeSummary {
            label: w.label.clone(),
            probability: w.probability,
            weak_value: w.weak_value,
            degenerate: w.degenerate,
            anomalous: w.anomalous,
            estimate: estimates.get(&w.label).expect("labels checked"),
            contribution: *contribution,
        })
        .collect();
    let header = SweepHeader {
        name: spec.name.clone(),
        dimension: spec.dimension(),
        strategy: spec.strategy.name().to_owned(),
        mean,
        variance: report.variance,
        epsilon_squared: report.epsilon_squared,
        outcomes,
    };

    let rows = spec
        .sweep
        .values()
        .into_par_iter()
        .map(|s| {
            let sigma = CouplingStrength::new(s)?;
            let x_no_feedback = probe_output_no_feedback(rho, a, sigma)?.x_expectation;
            let x_feedback = probe_output_feedback_reduced(rho, a, povm, &estimates, sigma)?.x_expectation;
            let x_feedback_joint = probe_output_feedback_joint(rho, a, povm, &estimates, sigma)?.x_expectation;
            if (x_feedback - x_feedback_joint).abs() > CROSS_CHECK_TOL {
                return Err(Error::CrossCheck { sigma: s, joint: x_feedback_joint, reduced: x_feedback });
            }
            let (mc_mean, mc_stderr) = match spec.monte_carlo {
                Some(mc) => {
                    let e = ShotSampler::new(rho, a, povm, &estimates, sigma)?.ensemble(mc.shots, mc.seed)?;
                    (Some(e.mean), Some(e.stderr))
                }
                None => (None, None),
            };
            Ok(ResultRow {
                sigma: s,
                x_no_feedback,
                x_feedback,
                x_feedback_joint,
                residual: 1.0 - x_feedback,
                predicted_residual: report.predicted_residual(sigma),
                variance_model: zero_mean.then_some(2.0 * s * s * report.variance),
                mc_mean,
                mc_stderr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { header, rows })
}
