//! Randomized verification of the identities and inequalities between the
//! divergences, metrics and geodesics of this crate.
//!
//! Every claim draws instances from its own ChaCha20 stream, derived from the
//! global seed and the claim id. Trial seeds are drawn sequentially; trials
//! are evaluated in parallel and reduced in trial order, so reports are
//! bit-identical for a given configuration. Each trial's inputs are stored as
//! an [`Instance`], and the worst trial is kept as a [`Witness`] that can be
//! re-evaluated on its own with [`verify_witness`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channels::{self, apply_channel, measure, partial_trace, sandwich_pvm, QuantumChannel, Subsystem};
use crate::divergences::classical::{
    bregman_divergence, bregman_integral_form, bregman_max_form, classical_kl, mixture_fisher,
    ExponentialFamily, LegendreConfig,
};
use crate::divergences::{
    bs_divergence, e_divergence_closed, e_divergence_quadrature, m_divergence,
    quantum_exponential_state, quantum_moment_model, quantum_relative_entropy,
};
use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, gell_mann_basis, ComplexMatrix, HERMITIAN_TOL};
use crate::metrics::{self, MetricKind};
use crate::quadrature::{integrate_unit, QuadratureConfig};
use crate::rng::SeededRng;
use crate::states::{
    commutation_defect, max_mixed, random_density_with, random_hermitian, random_simplex, random_unitary,
    validate_density, DensityMatrix, MatrixFile, ProbabilityDistribution,
};
use crate::transport::{
    moment_derivative, solve_direction, transport_commutation_defect, DerivativeOrder, GeodesicKind,
};

/// Smallest eigenvalue of randomly drawn states.
pub const STATE_FLOOR: f64 = 1e-3;

/// Default global seed.
pub const DEFAULT_SEED: u64 = 20_240_531;

/// How a claim turns per-trial values into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimMode {
    /// Every trial's error is at most the tolerance.
    Equality,
    /// Every trial's margin is at least minus the tolerance.
    Inequality,
    /// Some trial's defect exceeds the tolerance.
    Counterexample,
    /// At least `min_fraction` of trials exceed the tolerance.
    Fraction { min_fraction: f64 },
}

/// One claim as scheduled: which check, on which dimensions, how often, how strictly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSpec {
    pub id: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub tolerance: f64,
    pub mode: ClaimMode,
}

impl ClaimSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config(format!("claim {}: trials must be at least 1", self.id)));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Config(format!(
                "claim {}: tolerance must be positive, got {}",
                self.id, self.tolerance
            )));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| !(2..=8).contains(&d)) {
            return Err(Error::Config(format!(
                "claim {}: dims {:?} must be non-empty and within 2..=8",
                self.id, self.dims
            )));
        }
        if let ClaimMode::Fraction { min_fraction } = self.mode {
            if !(0.0..=1.0).contains(&min_fraction) {
                return Err(Error::Config(format!(
                    "claim {}: min_fraction {min_fraction} outside [0, 1]",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

/// Named matrices and scalars that fully determine one trial.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub dim: usize,
    pub matrices: BTreeMap<String, MatrixFile>,
    pub scalars: BTreeMap<String, f64>,
}

impl Instance {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Self::default()
        }
    }

    fn put_matrix(&mut self, name: &str, m: &ComplexMatrix) {
        self.matrices.insert(name.to_string(), MatrixFile::from_matrix(m));
    }

    fn put_state(&mut self, name: &str, s: &DensityMatrix) {
        self.put_matrix(name, s.matrix());
    }

    fn put_scalar(&mut self, name: &str, v: f64) {
        self.scalars.insert(name.to_string(), v);
    }

    fn put_vector(&mut self, name: &str, v: &[f64]) {
        for (i, x) in v.iter().enumerate() {
            self.put_scalar(&format!("{name}.{i}"), *x);
        }
    }

    pub fn matrix(&self, name: &str) -> Result<ComplexMatrix> {
        self.matrices
            .get(name)
            .ok_or_else(|| Error::Config(format!("instance has no matrix {name:?}")))?
            .to_rect_matrix()
    }

    pub fn state(&self, name: &str) -> Result<DensityMatrix> {
        validate_density(&self.matrix(name)?, 1e-9)
    }

    pub fn scalar(&self, name: &str) -> Result<f64> {
        self.scalars
            .get(name)
            .copied()
            .ok_or_else(|| Error::Config(format!("instance has no scalar {name:?}")))
    }

    pub fn vector(&self, name: &str) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        while let Some(v) = self.scalars.get(&format!("{name}.{}", out.len())) {
            out.push(*v);
        }
        if out.is_empty() {
            return Err(Error::Config(format!("instance has no vector {name:?}")));
        }
        Ok(out)
    }

    fn matrices_with_prefix(&self, prefix: &str) -> Result<Vec<ComplexMatrix>> {
        self.matrices
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .map(|(_, m)| m.to_rect_matrix())
            .collect()
    }
}

/// The trial kept for a claim record: its index, seed, inputs and value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub instance: Instance,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub description: String,
    pub mode: ClaimMode,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub tolerance: f64,
    /// Largest error (equality), smallest margin (inequality, fraction) or
    /// largest defect (counterexample) over the trials.
    pub worst_slack: f64,
    /// Share of trials above the tolerance, for fraction claims.
    pub fraction: Option<f64>,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub global_seed: u64,
    pub config_hash: String,
    pub claims: Vec<ClaimRecord>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-claim adjustments in a harness configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimOverride {
    pub trials: Option<usize>,
    pub tolerance: Option<f64>,
    pub dims: Option<Vec<usize>>,
}

/// Harness configuration, usually read from JSON. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub seed: u64,
    /// Claim ids to run; all registered claims when absent.
    pub claims: Option<Vec<String>>,
    /// Trial count applied to every selected claim.
    pub trials: Option<usize>,
    pub overrides: BTreeMap<String, ClaimOverride>,
    pub quadrature: QuadratureConfig,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            claims: None,
            trials: None,
            overrides: BTreeMap::new(),
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl HarnessConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid harness config: {e}")))
    }

    /// The claim specs this configuration schedules, in registry order.
    pub fn resolve(&self) -> Result<Vec<ClaimSpec>> {
        self.quadrature
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for id in self.overrides.keys() {
            find_claim(id)?;
        }
        let selected: Vec<&ClaimDef> = match &self.claims {
            None => REGISTRY.iter().collect(),
            Some(ids) => {
                for id in ids {
                    find_claim(id)?;
                }
                REGISTRY.iter().filter(|d| ids.iter().any(|i| i == d.id)).collect()
            }
        };
        let mut specs = Vec::with_capacity(selected.len());
        for def in selected {
            let mut spec = def.default_spec();
            if let Some(t) = self.trials {
                spec.trials = t;
            }
            if let Some(o) = self.overrides.get(def.id) {
                if let Some(t) = o.trials {
                    spec.trials = t;
                }
                if let Some(t) = o.tolerance {
                    spec.tolerance = t;
                }
                if let Some(d) = &o.dims {
                    spec.dims = d.clone();
                }
            }
            spec.validate()?;
            specs.push(spec);
        }
        Ok(specs)
    }

    /// SHA-256 over the seed, quadrature settings and resolved claim specs.
    pub fn hash(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Hashed<'a> {
            seed: u64,
            quadrature: &'a QuadratureConfig,
            claims: &'a [ClaimSpec],
        }
        let specs = self.resolve()?;
        let canonical = serde_json::to_string(&Hashed {
            seed: self.seed,
            quadrature: &self.quadrature,
            claims: &specs,
        })
        .expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// Evaluation settings shared by all trials of a run.
#[derive(Debug, Clone, Copy)]
struct Context {
    quadrature: QuadratureConfig,
}

type Sampler = fn(&mut SeededRng, usize) -> Result<Instance>;
type Evaluator = fn(&Instance, &Context) -> Result<f64>;

struct ClaimDef {
    id: &'static str,
    description: &'static str,
    mode: ClaimMode,
    dims: &'static [usize],
    trials: usize,
    tolerance: f64,
    flatness: bool,
    /// Dimensions are fixed by the construction and ignore overrides in the
    /// flatness suite.
    fixed_dims: bool,
    sample: Sampler,
    evaluate: Evaluator,
}

impl ClaimDef {
    fn default_spec(&self) -> ClaimSpec {
        ClaimSpec {
            id: self.id.to_string(),
            dims: self.dims.to_vec(),
            trials: self.trials,
            tolerance: self.tolerance,
            mode: self.mode,
        }
    }
}

fn find_claim(id: &str) -> Result<&'static ClaimDef> {
    REGISTRY
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

/// Ids of all registered claims, in run order.
pub fn claim_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.id).collect()
}

/// Default [`ClaimSpec`] of a registered claim.
pub fn default_claim_spec(id: &str) -> Result<ClaimSpec> {
    Ok(find_claim(id)?.default_spec())
}

pub fn claim_description(id: &str) -> Result<&'static str> {
    Ok(find_claim(id)?.description)
}

fn trial_seeds(seed: u64, id: &str, trials: usize) -> Vec<u64> {
    let mut rng = SeededRng::for_label(seed, id);
    (0..trials).map(|_| rng.next_u64()).collect()
}

fn run_trial(def: &ClaimDef, spec: &ClaimSpec, ctx: &Context, trial: usize, seed: u64) -> (Witness, Result<f64>) {
    let dim = spec.dims[trial % spec.dims.len()];
    let mut rng = SeededRng::new(seed);
    let instance = match (def.sample)(&mut rng, dim) {
        Ok(i) => i,
        Err(e) => {
            let w = Witness {
                trial,
                seed,
                instance: Instance::new(dim),
                value: None,
            };
            return (w, Err(e));
        }
    };
    let value = (def.evaluate)(&instance, ctx).and_then(|v| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::ConvergenceFailure(format!("non-finite trial value {v}")))
        }
    });
    let witness = Witness {
        trial,
        seed,
        instance,
        value: value.as_ref().ok().copied(),
    };
    (witness, value)
}

/// Runs one claim. Deterministic in `(spec, seed, quadrature)`.
pub fn run_claim(spec: &ClaimSpec, seed: u64, quadrature: &QuadratureConfig) -> Result<ClaimRecord> {
    let def = find_claim(&spec.id)?;
    spec.validate()?;
    quadrature.validate()?;
    let ctx = Context {
        quadrature: *quadrature,
    };
    let seeds = trial_seeds(seed, def.id, spec.trials);
    let outcomes: Vec<(Witness, Result<f64>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &s)| run_trial(def, spec, &ctx, trial, s))
        .collect();

    let mut error = None;
    let mut failing_witness = None;
    let mut best: Option<(f64, Witness)> = None;
    let mut above = 0usize;
    for (witness, value) in outcomes {
        match value {
            Err(e) => {
                if error.is_none() {
                    error = Some(format!("trial {}: {e}", witness.trial));
                    failing_witness = Some(witness);
                }
            }
            Ok(v) => {
                if v > spec.tolerance {
                    above += 1;
                }
                let worse = match &best {
                    None => true,
                    Some((b, _)) => match spec.mode {
                        ClaimMode::Equality | ClaimMode::Counterexample => v > *b,
                        ClaimMode::Inequality | ClaimMode::Fraction { .. } => v < *b,
                    },
                };
                if worse {
                    best = Some((v, witness));
                }
            }
        }
    }
    let worst_slack = best.as_ref().map_or(f64::NAN, |(v, _)| *v);
    let fraction = match spec.mode {
        ClaimMode::Fraction { .. } => Some(above as f64 / spec.trials as f64),
        _ => None,
    };
    let verdict = match spec.mode {
        ClaimMode::Equality => worst_slack <= spec.tolerance,
        ClaimMode::Inequality => worst_slack >= -spec.tolerance,
        ClaimMode::Counterexample => worst_slack > spec.tolerance,
        ClaimMode::Fraction { min_fraction } => fraction.unwrap_or(0.0) >= min_fraction,
    };
    // A counterexample search only needs one success; other modes need every trial.
    let pass = match spec.mode {
        ClaimMode::Counterexample => verdict,
        _ => verdict && error.is_none(),
    };
    let witness = match (&error, spec.mode) {
        (Some(_), m) if m != ClaimMode::Counterexample => failing_witness,
        _ => best.map(|(_, w)| w),
    };
    Ok(ClaimRecord {
        id: def.id.to_string(),
        description: def.description.to_string(),
        mode: spec.mode,
        dims: spec.dims.clone(),
        trials: spec.trials,
        tolerance: spec.tolerance,
        worst_slack: if worst_slack.is_finite() { worst_slack } else { 0.0 },
        fraction,
        pass,
        witness,
        error,
    })
}

/// Re-evaluates a stored witness through the claim's check.
pub fn verify_witness(id: &str, witness: &Witness, quadrature: &QuadratureConfig) -> Result<f64> {
    let def = find_claim(id)?;
    let ctx = Context {
        quadrature: *quadrature,
    };
    (def.evaluate)(&witness.instance, &ctx)
}

/// The dual-flatness claims: equalities for the Bogoljubov metric, quantitative
/// failures for SLD and RLD, and the commuting restriction.
pub fn run_flatness_suite(dims: &[usize], trials: usize, seed: u64) -> Result<Vec<ClaimRecord>> {
    let quadrature = QuadratureConfig::default();
    REGISTRY
        .iter()
        .filter(|d| d.flatness)
        .map(|def| {
            let mut spec = def.default_spec();
            spec.trials = trials;
            if !def.fixed_dims {
                spec.dims = dims.to_vec();
            }
            run_claim(&spec, seed, &quadrature)
        })
        .collect()
}

/// Runs every claim the configuration selects.
pub fn run_all(config: &HarnessConfig) -> Result<VerificationReport> {
    let specs = config.resolve()?;
    let config_hash = config.hash()?;
    let claims = specs
        .par_iter()
        .map(|spec| run_claim(spec, config.seed, &config.quadrature))
        .collect::<Result<Vec<_>>>()?;
    let all_pass = claims.iter().all(|c| c.pass);
    Ok(VerificationReport {
        global_seed: config.seed,
        config_hash,
        claims,
        all_pass,
    })
}

// ---------------------------------------------------------------------------
// Samplers

fn sample_pair(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(dim);
    inst.put_state("rho", &random_density_with(rng, dim, STATE_FLOOR));
    inst.put_state("sigma", &random_density_with(rng, dim, STATE_FLOOR));
    Ok(inst)
}

fn sample_noncommuting_pair(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    loop {
        let rho = random_density_with(rng, dim, STATE_FLOOR);
        let sigma = random_density_with(rng, dim, STATE_FLOOR);
        if commutation_defect(&rho, &sigma)? > 1e-8 {
            let mut inst = Instance::new(dim);
            inst.put_state("rho", &rho);
            inst.put_state("sigma", &sigma);
            return Ok(inst);
        }
    }
}

fn sample_identical_pair(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let rho = random_density_with(rng, dim, STATE_FLOOR);
    let mut inst = Instance::new(dim);
    inst.put_state("rho", &rho);
    inst.put_state("sigma", &rho);
    Ok(inst)
}

fn sample_codiagonal(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let u = random_unitary(rng, dim);
    let p = random_simplex(rng, dim, STATE_FLOOR);
    let q = random_simplex(rng, dim, STATE_FLOOR);
    let mut inst = Instance::new(dim);
    inst.put_state("rho", &DensityMatrix::from_spectrum(&u, &p)?);
    inst.put_state("sigma", &DensityMatrix::from_spectrum(&u, &q)?);
    inst.put_vector("p", &p);
    inst.put_vector("q", &q);
    Ok(inst)
}

fn sample_tensor_factors(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(dim * dim);
    for name in ["rho1", "sigma1", "rho2", "sigma2"] {
        inst.put_state(name, &random_density_with(rng, dim, STATE_FLOOR));
    }
    Ok(inst)
}

fn sample_channel_triple(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    // Every other draw uses a partial trace on a two-qubit pair.
    let use_partial_trace = rng.uniform() < 0.5;
    if use_partial_trace {
        let mut inst = Instance::new(4);
        inst.put_state("rho", &random_density_with(rng, 4, STATE_FLOOR));
        inst.put_state("sigma", &random_density_with(rng, 4, STATE_FLOOR));
        inst.put_scalar("keep_b", if rng.uniform() < 0.5 { 0.0 } else { 1.0 });
        return Ok(inst);
    }
    let dim_out = rng.int_range(2, dim);
    let min_kraus = dim.div_ceil(dim_out);
    let kraus_count = rng.int_range(min_kraus, min_kraus + 2);
    let channel = channels::random_channel_with(rng, dim, dim_out, kraus_count)?;
    let mut inst = Instance::new(dim);
    inst.put_state("rho", &random_density_with(rng, dim, STATE_FLOOR));
    inst.put_state("sigma", &random_density_with(rng, dim, STATE_FLOOR));
    for (i, k) in channel.kraus().iter().enumerate() {
        inst.put_matrix(&format!("kraus_{i:03}"), k);
    }
    Ok(inst)
}

fn sample_transport_triple(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(dim);
    inst.put_state("sigma", &random_density_with(rng, dim, 0.02));
    inst.put_matrix("l1", &random_hermitian(rng, dim).scale(rng.uniform_range(0.5, 2.0)));
    inst.put_matrix("l2", &random_hermitian(rng, dim).scale(rng.uniform_range(0.5, 2.0)));
    inst.put_scalar("theta1", rng.uniform_range(-1.5, 1.5));
    inst.put_scalar("theta2", rng.uniform_range(-1.5, 1.5));
    Ok(inst)
}

fn sample_commuting_everything(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = sample_codiagonal(rng, dim)?;
    let u = linalg_unitary_of(&inst)?;
    let diag1: Vec<f64> = (0..dim).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let diag2: Vec<f64> = (0..dim).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let l1 = &u * linalg::from_real_diagonal(&diag1) * u.adjoint();
    let l2 = &u * linalg::from_real_diagonal(&diag2) * u.adjoint();
    inst.put_matrix("l1", &linalg::hermitian_part(&l1));
    inst.put_matrix("l2", &linalg::hermitian_part(&l2));
    inst.put_scalar("theta1", rng.uniform_range(-1.0, 1.0));
    inst.put_scalar("theta2", rng.uniform_range(-1.0, 1.0));
    Ok(inst)
}

/// Eigenbasis of the stored `sigma`; it diagonalizes `rho` too for co-diagonal pairs.
fn linalg_unitary_of(inst: &Instance) -> Result<ComplexMatrix> {
    Ok(inst.state("sigma")?.eigen().eigenvectors.clone())
}

fn sample_theta_pair(rng: &mut SeededRng, _dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(2);
    let a: Vec<f64> = (0..3).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let b: Vec<f64> = (0..3).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    inst.put_vector("theta_bar", &a);
    inst.put_vector("theta", &b);
    Ok(inst)
}

fn bloch_vector(rng: &mut SeededRng, max_radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..3).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r <= 1.0 {
            return v.iter().map(|x| x * max_radius).collect();
        }
    }
}

fn sample_eta_pair(rng: &mut SeededRng, _dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(2);
    inst.put_vector("eta_bar", &bloch_vector(rng, 0.9));
    inst.put_vector("eta", &bloch_vector(rng, 0.9));
    Ok(inst)
}

fn sample_classical_pair(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(dim);
    inst.put_vector("p", &random_simplex(rng, dim, STATE_FLOOR));
    inst.put_vector("q", &random_simplex(rng, dim, STATE_FLOOR));
    Ok(inst)
}

fn sample_exponential_family(rng: &mut SeededRng, _dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(3);
    inst.put_vector("base", &random_simplex(rng, 3, 0.05));
    for i in 0..2 {
        let x: Vec<f64> = (0..3).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
        inst.put_vector(&format!("stat{i}"), &x);
    }
    let a: Vec<f64> = (0..2).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    let b: Vec<f64> = (0..2).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
    inst.put_vector("theta_bar", &a);
    inst.put_vector("theta", &b);
    Ok(inst)
}

fn sample_hermitian(rng: &mut SeededRng, dim: usize) -> Result<Instance> {
    let mut inst = Instance::new(dim);
    let scale = 10f64.powf(rng.uniform_range(-2.0, 1.0));
    inst.put_matrix("h", &random_hermitian(rng, dim).scale(scale));
    inst.put_state("rho", &random_density_with(rng, dim, 0.0));
    Ok(inst)
}

// ---------------------------------------------------------------------------
// Evaluators

fn pair(inst: &Instance) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((inst.state("rho")?, inst.state("sigma")?))
}

/// Error scaled so that `≤ 1e-6` means `|Δ| ≤ max(1e-6, 1e-5·value)`.
fn scaled_error(estimate: f64, reference: f64) -> f64 {
    (estimate - reference).abs() / (10.0 * reference.abs()).max(1.0)
}

fn eval_closed_vs_quadrature(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let mut worst = 0.0f64;
    for kind in GeodesicKind::ALL {
        let closed = e_divergence_closed(kind, &rho, &sigma)?;
        let quad = e_divergence_quadrature(kind, &rho, &sigma, &ctx.quadrature)?.value;
        worst = worst.max(scaled_error(quad, closed));
    }
    Ok(worst)
}

/// `Tr ρ log ρ − Σ_ij |⟨u_i|v_j⟩|² r_i log s_j` from the two spectral decompositions.
fn relative_entropy_from_spectra(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let (r, u) = (rho.spectrum(), &rho.eigen().eigenvectors);
    let (s, v) = (sigma.spectrum(), &sigma.eigen().eigenvectors);
    let overlap = u.adjoint() * v;
    let mut acc = 0.0;
    for i in 0..r.len() {
        if r[i] <= 0.0 {
            continue;
        }
        acc += r[i] * r[i].ln();
        for j in 0..s.len() {
            acc -= overlap[(i, j)].norm_sqr() * r[i] * s[j].ln();
        }
    }
    acc
}

fn eval_e_bogoljubov_formula(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let e_b = e_divergence_closed(GeodesicKind::Bogoljubov, &rho, &sigma)?;
    Ok((e_b - relative_entropy_from_spectra(&rho, &sigma)).abs())
}

fn eval_m_bogoljubov(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let d = quantum_relative_entropy(&rho, &sigma)?;
    let m = m_divergence(&MetricKind::Bogoljubov, &rho, &sigma, &ctx.quadrature)?.value;
    Ok((m - d).abs())
}

fn eval_rld_identity(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let dbar = bs_divergence(&rho, &sigma)?;
    let e_r = e_divergence_closed(GeodesicKind::Rld, &rho, &sigma)?;
    let e_r_quad = e_divergence_quadrature(GeodesicKind::Rld, &rho, &sigma, &ctx.quadrature)?.value;
    let m_r = m_divergence(&MetricKind::Rld, &rho, &sigma, &ctx.quadrature)?.value;
    Ok((e_r - dbar).abs().max((m_r - dbar).abs()).max((e_r_quad - dbar).abs()))
}

fn chain_margin(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let e_s = e_divergence_closed(GeodesicKind::Sld, rho, sigma)?;
    let d = quantum_relative_entropy(rho, sigma)?;
    let dbar = bs_divergence(rho, sigma)?;
    Ok((d - e_s).min(dbar - d))
}

fn eval_chain(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    chain_margin(&rho, &sigma)
}

fn eval_identical_chain(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let e_s = e_divergence_closed(GeodesicKind::Sld, &rho, &sigma)?;
    let d = quantum_relative_entropy(&rho, &sigma)?;
    let dbar = bs_divergence(&rho, &sigma)?;
    Ok(e_s.abs().max(d.abs()).max(dbar.abs()))
}

fn tensor_state(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    validate_density(&linalg::tensor_product(a.matrix(), b.matrix()), 1e-9)
}

fn eval_additivity(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (r1, s1) = (inst.state("rho1")?, inst.state("sigma1")?);
    let (r2, s2) = (inst.state("rho2")?, inst.state("sigma2")?);
    let (r, s) = (tensor_state(&r1, &r2)?, tensor_state(&s1, &s2)?);
    let mut worst = 0.0f64;
    for kind in GeodesicKind::ALL {
        let joint = e_divergence_closed(kind, &r, &s)?;
        let parts = e_divergence_closed(kind, &r1, &s1)? + e_divergence_closed(kind, &r2, &s2)?;
        worst = worst.max((joint - parts).abs());
    }
    Ok(worst)
}

fn apply_instance_channel(inst: &Instance, state: &DensityMatrix) -> Result<DensityMatrix> {
    if let Ok(keep_b) = inst.scalar("keep_b") {
        let keep = if keep_b > 0.5 { Subsystem::B } else { Subsystem::A };
        return partial_trace(state, (2, 2), keep);
    }
    let channel = QuantumChannel::new(inst.matrices_with_prefix("kraus_")?)?;
    apply_channel(&channel, state)
}

fn metric_kinds() -> [MetricKind; 4] {
    [MetricKind::Sld, MetricKind::Bogoljubov, MetricKind::Rld, MetricKind::half()]
}

fn eval_monotonicity(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let (out_rho, out_sigma) = (apply_instance_channel(inst, &rho)?, apply_instance_channel(inst, &sigma)?);
    let mut margin = f64::INFINITY;
    for x in metric_kinds() {
        let before = m_divergence(&x, &rho, &sigma, &ctx.quadrature)?.value;
        let after = m_divergence(&x, &out_rho, &out_sigma, &ctx.quadrature)?.value;
        margin = margin.min(before - after);
    }
    Ok(margin)
}

fn eval_rld_dominance(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let m = |x: MetricKind| -> Result<f64> { Ok(m_divergence(&x, &rho, &sigma, &ctx.quadrature)?.value) };
    let m_r = m(MetricKind::Rld)?;
    let m_s = m(MetricKind::Sld)?;
    let m_b = m(MetricKind::Bogoljubov)?;
    let m_h = m(MetricKind::half())?;
    let d = quantum_relative_entropy(&rho, &sigma)?;
    Ok((m_r - m_s).min(m_r - m_b).min(m_r - m_h).min(d - m_s))
}

fn eval_sandwich(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let pvm = sandwich_pvm(&rho, &sigma)?;
    let kl = classical_kl(&measure(&rho, &pvm)?, &measure(&sigma, &pvm)?)?;
    Ok((kl - e_divergence_closed(GeodesicKind::Sld, &rho, &sigma)?).abs())
}

fn transport_defect(inst: &Instance, kind: GeodesicKind) -> Result<f64> {
    transport_commutation_defect(
        kind,
        &inst.state("sigma")?,
        &inst.matrix("l1")?,
        &inst.matrix("l2")?,
        inst.scalar("theta1")?,
        inst.scalar("theta2")?,
    )
}

fn eval_b_commutes(inst: &Instance, _ctx: &Context) -> Result<f64> {
    transport_defect(inst, GeodesicKind::Bogoljubov)
}

fn eval_s_commutation_defect(inst: &Instance, _ctx: &Context) -> Result<f64> {
    transport_defect(inst, GeodesicKind::Sld)
}

fn eval_r_commutation_defect(inst: &Instance, _ctx: &Context) -> Result<f64> {
    transport_defect(inst, GeodesicKind::Rld)
}

fn eval_b_e_m_equal_d(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let d = quantum_relative_entropy(&rho, &sigma)?;
    let e = e_divergence_quadrature(GeodesicKind::Bogoljubov, &rho, &sigma, &ctx.quadrature)?.value;
    let m = m_divergence(&MetricKind::Bogoljubov, &rho, &sigma, &ctx.quadrature)?.value;
    Ok((e - d).abs().max((m - d).abs()))
}

fn e_gap(inst: &Instance, kind: GeodesicKind) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    Ok((e_divergence_closed(kind, &rho, &sigma)? - quantum_relative_entropy(&rho, &sigma)?).abs())
}

fn m_gap(inst: &Instance, x: MetricKind, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let m = m_divergence(&x, &rho, &sigma, &ctx.quadrature)?.value;
    Ok((m - quantum_relative_entropy(&rho, &sigma)?).abs())
}

fn eval_s_e_gap(inst: &Instance, _ctx: &Context) -> Result<f64> {
    e_gap(inst, GeodesicKind::Sld)
}

fn eval_r_e_gap(inst: &Instance, _ctx: &Context) -> Result<f64> {
    e_gap(inst, GeodesicKind::Rld)
}

fn eval_s_m_gap(inst: &Instance, ctx: &Context) -> Result<f64> {
    m_gap(inst, MetricKind::Sld, ctx)
}

fn eval_r_m_gap(inst: &Instance, ctx: &Context) -> Result<f64> {
    m_gap(inst, MetricKind::Rld, ctx)
}

/// The two-level family `ρ_θ = exp(Σ θ^i X_i − μ(θ))` over the Pauli basis.
fn qubit_exponential(theta: &[f64]) -> Result<DensityMatrix> {
    quantum_exponential_state(&max_mixed(2), &gell_mann_basis(2), theta)
}

fn e_bregman_gap(inst: &Instance, kind: GeodesicKind, ctx: &Context) -> Result<f64> {
    let theta_bar = inst.vector("theta_bar")?;
    let theta = inst.vector("theta")?;
    let model = quantum_moment_model(&max_mixed(2), gell_mann_basis(2))?;
    let bregman = bregman_divergence(&model, &theta_bar, &theta)?;
    let rho = qubit_exponential(&theta_bar)?;
    let sigma = qubit_exponential(&theta)?;
    let e = e_divergence_quadrature(kind, &rho, &sigma, &ctx.quadrature)?.value;
    Ok((e - bregman).abs())
}

fn eval_b_e_bregman(inst: &Instance, ctx: &Context) -> Result<f64> {
    e_bregman_gap(inst, GeodesicKind::Bogoljubov, ctx)
}

fn eval_s_e_bregman(inst: &Instance, ctx: &Context) -> Result<f64> {
    e_bregman_gap(inst, GeodesicKind::Sld, ctx)
}

fn eval_r_e_bregman(inst: &Instance, ctx: &Context) -> Result<f64> {
    e_bregman_gap(inst, GeodesicKind::Rld, ctx)
}

/// `ρ_η = I/2 + Σ_j η_j Y^j` with `Y^j = X_j / 2` dual to the Pauli basis.
fn qubit_mixture(eta: &[f64]) -> Result<DensityMatrix> {
    let basis = gell_mann_basis(2);
    let mut m = max_mixed(2).into_matrix();
    for (e, x) in eta.iter().zip(&basis) {
        m += x.scale(0.5 * e);
    }
    validate_density(&m, 1e-9)
}

fn m_legendre_gap(inst: &Instance, x: MetricKind, ctx: &Context) -> Result<f64> {
    let eta_bar = inst.vector("eta_bar")?;
    let eta = inst.vector("eta")?;
    let model = quantum_moment_model(&max_mixed(2), gell_mann_basis(2))?;
    let nu = model.legendre_dual(LegendreConfig::cube(3, 12.0));
    let bregman = bregman_divergence(&nu, &eta, &eta_bar)?;
    let m = m_divergence(&x, &qubit_mixture(&eta_bar)?, &qubit_mixture(&eta)?, &ctx.quadrature)?.value;
    Ok((m - bregman).abs())
}

fn eval_b_m_legendre(inst: &Instance, ctx: &Context) -> Result<f64> {
    m_legendre_gap(inst, MetricKind::Bogoljubov, ctx)
}

fn eval_s_m_legendre(inst: &Instance, ctx: &Context) -> Result<f64> {
    m_legendre_gap(inst, MetricKind::Sld, ctx)
}

fn eval_r_m_legendre(inst: &Instance, ctx: &Context) -> Result<f64> {
    m_legendre_gap(inst, MetricKind::Rld, ctx)
}

fn spectral_kl(inst: &Instance) -> Result<f64> {
    let p = ProbabilityDistribution::new(inst.vector("p")?)?;
    let q = ProbabilityDistribution::new(inst.vector("q")?)?;
    classical_kl(&p, &q)
}

fn eval_commuting_flatness(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let kl = spectral_kl(inst)?;
    let mut worst = 0.0f64;
    for kind in GeodesicKind::ALL {
        worst = worst.max(transport_defect(inst, kind)?);
        worst = worst.max((e_divergence_closed(kind, &rho, &sigma)? - kl).abs());
        let m = m_divergence(&kind.metric(), &rho, &sigma, &ctx.quadrature)?.value;
        worst = worst.max((m - kl).abs());
    }
    Ok(worst)
}

fn eval_commuting_reduction(inst: &Instance, ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let kl = spectral_kl(inst)?;
    let mut values = vec![quantum_relative_entropy(&rho, &sigma)?, bs_divergence(&rho, &sigma)?];
    for kind in GeodesicKind::ALL {
        values.push(e_divergence_closed(kind, &rho, &sigma)?);
        values.push(e_divergence_quadrature(kind, &rho, &sigma, &ctx.quadrature)?.value);
        values.push(m_divergence(&kind.metric(), &rho, &sigma, &ctx.quadrature)?.value);
    }
    Ok(values.iter().fold(0.0f64, |w, v| w.max((v - kl).abs())))
}

fn eval_classical_mixture_integral(inst: &Instance, ctx: &Context) -> Result<f64> {
    let p = ProbabilityDistribution::new(inst.vector("p")?)?;
    let q = ProbabilityDistribution::new(inst.vector("q")?)?;
    let integral = integrate_unit(|t| Ok(mixture_fisher(&p, &q, t)? * t), &ctx.quadrature)?.value;
    Ok((integral - classical_kl(&p, &q)?).abs())
}

fn exponential_family(inst: &Instance) -> Result<ExponentialFamily> {
    let base = ProbabilityDistribution::new(inst.vector("base")?)?;
    ExponentialFamily::new(&base, vec![inst.vector("stat0")?, inst.vector("stat1")?])
}

fn eval_exponential_family_kl(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let family = exponential_family(inst)?;
    let (tb, t) = (inst.vector("theta_bar")?, inst.vector("theta")?);
    let d = bregman_divergence(&family.model(), &tb, &t)?;
    let kl = classical_kl(&family.distribution(&tb)?, &family.distribution(&t)?)?;
    Ok((d - kl).abs())
}

fn eval_legendre_duality(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let family = exponential_family(inst)?;
    let mu = family.model();
    let (tb, t) = (inst.vector("theta_bar")?, inst.vector("theta")?);
    let nu = mu.legendre_dual(LegendreConfig::cube(2, 60.0));
    let d_mu = bregman_divergence(&mu, &tb, &t)?;
    let d_nu = bregman_divergence(&nu, &mu.gradient(&t)?, &mu.gradient(&tb)?)?;
    Ok((d_mu - d_nu).abs())
}

fn eval_bregman_characterizations(inst: &Instance, ctx: &Context) -> Result<f64> {
    let family = exponential_family(inst)?;
    let mu = family.model();
    let (tb, t) = (inst.vector("theta_bar")?, inst.vector("theta")?);
    let d = bregman_divergence(&mu, &tb, &t)?;
    let max_form = bregman_max_form(&mu, &tb, &t, &LegendreConfig::cube(2, 60.0))?;
    let int_form = bregman_integral_form(&mu, &tb, &t, &ctx.quadrature)?;
    Ok((max_form - d).abs().max((int_form - d).abs()))
}

fn eval_eigen_reconstruction(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let mut worst = 0.0f64;
    for name in ["h", "rho"] {
        let h = inst.matrix(name)?;
        let eig = eig_hermitian(&h, HERMITIAN_TOL)?;
        let n = h.nrows();
        let recon = eig.reconstruct() - &h;
        let ortho = eig.eigenvectors.adjoint() * &eig.eigenvectors - linalg::identity(n);
        let scale = h.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let defect = recon.iter().chain(ortho.iter()).fold(0.0f64, |m, z| m.max(z.norm()));
        worst = worst.max(defect / scale);
    }
    Ok(worst)
}

fn eval_moment_curvature(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let mut worst = 0.0f64;
    for kind in GeodesicKind::ALL {
        let g = solve_direction(kind, &rho, &sigma)?;
        for theta in [-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25] {
            let fd = moment_derivative(&g, theta, DerivativeOrder::Second)?;
            let j = g.fisher_info(theta)?;
            worst = worst.max((fd - j).abs());
        }
    }
    Ok(worst)
}

fn eval_fisher_numeric(inst: &Instance, _ctx: &Context) -> Result<f64> {
    let (rho, sigma) = pair(inst)?;
    let mut worst = 0.0f64;
    for x in metric_kinds() {
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let numeric = metrics::fisher_info_numeric(|s| DensityMatrix::mix(&rho, &sigma, s), t, &x, 1e-3)?;
            let exact = metrics::fisher_info_mixture(&rho, &sigma, &x, t)?;
            worst = worst.max((numeric - exact).abs());
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Registry

const EQ: ClaimMode = ClaimMode::Equality;
const INEQ: ClaimMode = ClaimMode::Inequality;
const CEX: ClaimMode = ClaimMode::Counterexample;

macro_rules! claim {
    ($id:expr, $desc:expr, $mode:expr, $dims:expr, $trials:expr, $tol:expr, $sample:expr, $eval:expr) => {
        ClaimDef {
            id: $id,
            description: $desc,
            mode: $mode,
            dims: $dims,
            trials: $trials,
            tolerance: $tol,
            flatness: false,
            fixed_dims: false,
            sample: $sample,
            evaluate: $eval,
        }
    };
    (flat $id:expr, $desc:expr, $mode:expr, $dims:expr, $trials:expr, $tol:expr, $sample:expr, $eval:expr $(, $fixed:expr)?) => {
        ClaimDef {
            id: $id,
            description: $desc,
            mode: $mode,
            dims: $dims,
            trials: $trials,
            tolerance: $tol,
            flatness: true,
            fixed_dims: false $(|| $fixed)?,
            sample: $sample,
            evaluate: $eval,
        }
    };
}

const DIMS: &[usize] = &[2, 3, 4];
const QUBIT: &[usize] = &[2];

static REGISTRY: &[ClaimDef] = &[
    claim!(
        "e-divergence-closed-vs-quadrature",
        "closed-form e-divergences (s, b, r, half) match the integral of the geodesic Fisher information times θ; error scaled by max(1, 10·value)",
        EQ, DIMS, 600, 1e-6, sample_pair, eval_closed_vs_quadrature
    ),
    claim!(
        "e-bogoljubov-equals-relative-entropy-formula",
        "Bogoljubov e-divergence equals Tr ρ log ρ − Σ|⟨u_i|v_j⟩|² r_i log s_j from the two spectral decompositions",
        EQ, DIMS, 200, 1e-10, sample_pair, eval_e_bogoljubov_formula
    ),
    claim!(
        "m-bogoljubov-equals-relative-entropy",
        "Bogoljubov m-divergence along the mixture path equals D(ρ‖σ)",
        EQ, DIMS, 200, 1e-6, sample_pair, eval_m_bogoljubov
    ),
    claim!(
        "rld-e-m-bs-agree",
        "RLD e-divergence (closed and quadrature) and RLD m-divergence both equal the Belavkin–Staszewski divergence",
        EQ, DIMS, 200, 1e-6, sample_pair, eval_rld_identity
    ),
    claim!(
        "inequality-chain",
        "D^(e)_s ≤ D ≤ D̄; value is min(D − D^(e)_s, D̄ − D)",
        INEQ, DIMS, 1000, 1e-8, sample_pair, eval_chain
    ),
    claim!(
        "inequality-chain-identical",
        "all three chain members vanish when ρ = σ; value is the largest magnitude",
        EQ, DIMS, 50, 1e-10, sample_identical_pair, eval_identical_chain
    ),
    ClaimDef {
        id: "inequality-chain-strict",
        description: "on noncommuting pairs both gaps D − D^(e)_s and D̄ − D exceed the tolerance in at least 95% of trials",
        mode: ClaimMode::Fraction { min_fraction: 0.95 },
        dims: DIMS,
        trials: 1000,
        tolerance: 1e-6,
        flatness: false,
        fixed_dims: false,
        sample: sample_noncommuting_pair,
        evaluate: eval_chain,
    },
    claim!(
        "e-divergence-additivity",
        "all four e-divergences are additive on tensor products of pairs",
        EQ, QUBIT, 200, 1e-6, sample_tensor_factors, eval_additivity
    ),
    claim!(
        "m-divergence-monotonicity",
        "m-divergences (s, b, r, half) do not increase under random channels and partial traces; value is the smallest decrease",
        INEQ, DIMS, 500, 1e-7, sample_channel_triple, eval_monotonicity
    ),
    claim!(
        "rld-m-dominance",
        "D^(m)_r ≥ D^(m)_x for x in s, b, half, and D^(m)_s ≤ D; value is the smallest margin",
        INEQ, DIMS, 500, 1e-8, sample_pair, eval_rld_dominance
    ),
    claim!(
        "sandwich-pvm-attains-sld",
        "classical KL of the sandwich-operator PVM outcomes equals D^(e)_s",
        EQ, DIMS, 200, 1e-8, sample_pair, eval_sandwich
    ),
    claim!(flat
        "flatness-b-transport-commutes",
        "Bogoljubov e-transports along two directions commute; value is the Frobenius defect",
        EQ, DIMS, 100, 1e-8, sample_transport_triple, eval_b_commutes
    ),
    claim!(flat
        "flatness-b-e-bregman",
        "Bogoljubov e-divergence between members of the qubit exponential family equals the Bregman divergence of μ(θ) = log Tr exp(Σθ^i X_i)",
        EQ, QUBIT, 100, 1e-6, sample_theta_pair, eval_b_e_bregman, true
    ),
    claim!(flat
        "flatness-b-e-m-equal-relative-entropy",
        "Bogoljubov e-divergence (quadrature) and m-divergence both equal D(ρ‖σ)",
        EQ, DIMS, 100, 1e-6, sample_pair, eval_b_e_m_equal_d
    ),
    claim!(flat
        "flatness-b-m-legendre",
        "Bogoljubov m-divergence between qubit mixtures ρ_η = I/2 + Σ η_j Y^j equals the Bregman divergence of the Legendre transform ν of μ",
        EQ, QUBIT, 100, 1e-6, sample_eta_pair, eval_b_m_legendre, true
    ),
    claim!(flat
        "flatness-s-transport-noncommuting",
        "SLD e-transports along two directions fail to commute; value is the Frobenius defect",
        CEX, DIMS, 100, 1e-3, sample_transport_triple, eval_s_commutation_defect
    ),
    claim!(flat
        "flatness-r-transport-noncommuting",
        "RLD e-transports along two directions fail to commute; value is the Frobenius defect",
        CEX, DIMS, 100, 1e-3, sample_transport_triple, eval_r_commutation_defect
    ),
    claim!(flat
        "flatness-s-e-bregman-fails",
        "SLD e-divergence on the qubit exponential family differs from the Bregman divergence of μ",
        CEX, QUBIT, 100, 1e-3, sample_theta_pair, eval_s_e_bregman, true
    ),
    claim!(flat
        "flatness-r-e-bregman-fails",
        "RLD e-divergence on the qubit exponential family differs from the Bregman divergence of μ",
        CEX, QUBIT, 100, 1e-3, sample_theta_pair, eval_r_e_bregman, true
    ),
    claim!(flat
        "flatness-s-e-differs-from-relative-entropy",
        "SLD e-divergence differs from D(ρ‖σ); value is |D^(e)_s − D|",
        CEX, DIMS, 100, 1e-3, sample_pair, eval_s_e_gap
    ),
    claim!(flat
        "flatness-r-e-differs-from-relative-entropy",
        "RLD e-divergence differs from D(ρ‖σ); value is |D^(e)_r − D|",
        CEX, DIMS, 100, 1e-3, sample_pair, eval_r_e_gap
    ),
    claim!(flat
        "flatness-s-m-legendre-fails",
        "SLD m-divergence between qubit mixtures differs from the Bregman divergence of ν",
        CEX, QUBIT, 100, 1e-3, sample_eta_pair, eval_s_m_legendre, true
    ),
    claim!(flat
        "flatness-r-m-legendre-fails",
        "RLD m-divergence between qubit mixtures differs from the Bregman divergence of ν",
        CEX, QUBIT, 100, 1e-3, sample_eta_pair, eval_r_m_legendre, true
    ),
    claim!(flat
        "flatness-s-m-differs-from-relative-entropy",
        "SLD m-divergence differs from D(ρ‖σ); value is |D^(m)_s − D|",
        CEX, DIMS, 100, 1e-3, sample_pair, eval_s_m_gap
    ),
    claim!(flat
        "flatness-r-m-differs-from-relative-entropy",
        "RLD m-divergence differs from D(ρ‖σ); value is |D^(m)_r − D|",
        CEX, DIMS, 100, 1e-3, sample_pair, eval_r_m_gap
    ),
    claim!(flat
        "flatness-commuting-all-metrics",
        "for commuting states and directions every metric has commuting transports and e- and m-divergences equal to the spectral KL",
        EQ, DIMS, 100, 1e-9, sample_commuting_everything, eval_commuting_flatness
    ),
    claim!(
        "classical-mixture-integral-equals-kl",
        "∫₀¹ J_t t dt along (1 − t)p + tq equals D(p‖q)",
        EQ, &[2, 3, 4, 5], 200, 1e-6, sample_classical_pair, eval_classical_mixture_integral
    ),
    claim!(
        "classical-legendre-duality",
        "D^μ(θ̄‖θ) = D^ν(η‖η̄) with ν the numerically computed Legendre transform, two-parameter family on three letters",
        EQ, &[3], 100, 1e-6, sample_exponential_family, eval_legendre_duality
    ),
    claim!(
        "classical-exponential-family-bregman-equals-kl",
        "Bregman divergence of the moment function equals the KL divergence between family members on three letters",
        EQ, &[3], 200, 1e-8, sample_exponential_family, eval_exponential_family_kl
    ),
    claim!(
        "classical-bregman-characterizations",
        "max-form and Hessian-integral forms of the Bregman divergence agree with the gradient form",
        EQ, &[3], 100, 1e-6, sample_exponential_family, eval_bregman_characterizations
    ),
    claim!(
        "commuting-reduction",
        "for co-diagonal pairs D, D̄ and all closed, quadrature and mixture path divergences equal the spectral KL",
        EQ, DIMS, 100, 1e-10, sample_codiagonal, eval_commuting_reduction
    ),
    claim!(
        "eigen-reconstruction",
        "Hermitian eigendecompositions reconstruct the input and have orthonormal eigenvectors; defect relative to the largest entry",
        EQ, DIMS, 300, 1e-10, sample_hermitian, eval_eigen_reconstruction
    ),
    claim!(
        "moment-curvature-equals-fisher",
        "second finite difference of μ_x equals the exact geodesic Fisher information across a θ grid",
        EQ, DIMS, 60, 1e-5, sample_pair, eval_moment_curvature
    ),
    claim!(
        "fisher-numeric-equals-mixture",
        "finite-difference Fisher information of the mixture family equals the closed m-norm of σ − ρ",
        EQ, DIMS, 100, 1e-6, sample_pair, eval_fisher_numeric
    ),
];
