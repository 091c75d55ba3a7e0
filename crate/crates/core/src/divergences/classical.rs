//! Classical relative entropy, Bregman divergences of convex potentials and
//! their Legendre transforms. Used directly and as an oracle for commuting
//! quantum inputs.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit, QuadratureConfig};
use crate::states::ProbabilityDistribution;

/// `D(p‖q) = Σ p log(p/q)` with `0 log 0 = 0`.
pub fn classical_kl(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut acc = 0.0;
    for (index, (&a, &b)) in p.weights().iter().zip(q.weights()).enumerate() {
        if a == 0.0 {
            continue;
        }
        if b <= 0.0 {
            return Err(Error::SupportViolation { index, p: a, q: b });
        }
        acc += a * (a / b).ln();
    }
    Ok(acc)
}

/// Fisher information `Σ (q − p)² / p_t` of `t ↦ (1 − t)p + tq`.
pub fn mixture_fisher(p: &ProbabilityDistribution, q: &ProbabilityDistribution, t: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut acc = 0.0;
    for (index, (&a, &b)) in p.weights().iter().zip(q.weights()).enumerate() {
        let pt = (1.0 - t) * a + t * b;
        if pt <= 0.0 {
            if a == b {
                continue;
            }
            return Err(Error::SupportViolation { index, p: a, q: b });
        }
        acc += (b - a) * (b - a) / pt;
    }
    Ok(acc)
}

type ScalarFn = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;
type MatrixFn = Arc<dyn Fn(&[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync>;
type DomainFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Step for finite-difference gradients and Hessians.
const FD_STEP: f64 = 1e-3;

/// A strictly convex potential `μ` on (a subset of) `R^k`, with optional
/// analytic gradient and Hessian. Missing derivatives fall back to
/// Richardson-extrapolated central differences.
#[derive(Clone)]
pub struct ConvexFunctionModel {
    dim: usize,
    value: ScalarFn,
    gradient: Option<VectorFn>,
    hessian: Option<MatrixFn>,
    domain: Option<DomainFn>,
}

impl fmt::Debug for ConvexFunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunctionModel")
            .field("dim", &self.dim)
            .field("analytic_gradient", &self.gradient.is_some())
            .field("analytic_hessian", &self.hessian.is_some())
            .finish()
    }
}

impl ConvexFunctionModel {
    pub fn new<F>(dim: usize, value: F) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            value: Arc::new(value),
            gradient: None,
            hessian: None,
            domain: None,
        }
    }

    pub fn with_gradient<F>(mut self, gradient: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_hessian<F>(mut self, hessian: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync + 'static,
    {
        self.hessian = Some(Arc::new(hessian));
        self
    }

    pub fn with_domain<F>(mut self, domain: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(domain));
        self
    }

    /// `μ(θ) = |θ|²/2`.
    pub fn quadratic(dim: usize) -> Self {
        Self::new(dim, |t| Ok(0.5 * t.iter().map(|x| x * x).sum::<f64>()))
            .with_gradient(|t| Ok(t.to_vec()))
            .with_hessian(move |t| {
                let n = t.len();
                Ok((0..n)
                    .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect())
            })
    }

    /// `μ(θ) = log(1 + e^θ)`, the moment function of the Bernoulli family.
    pub fn binomial() -> Self {
        fn sigmoid(x: f64) -> f64 {
            if x >= 0.0 {
                1.0 / (1.0 + (-x).exp())
            } else {
                let e = x.exp();
                e / (1.0 + e)
            }
        }
        Self::new(1, |t| {
            let x = t[0];
            Ok(x.max(0.0) + (-x.abs()).exp().ln_1p())
        })
        .with_gradient(|t| Ok(vec![sigmoid(t[0])]))
        .with_hessian(|t| {
            let s = sigmoid(t[0]);
            Ok(vec![vec![s * (1.0 - s)]])
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_point(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: theta.len(),
                right: self.dim,
            });
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(domain) = &self.domain {
            if !domain(theta) {
                return Err(Error::OutsideDomain(format!("point {theta:?} outside the model domain")));
            }
        }
        Ok(())
    }

    pub fn in_domain(&self, theta: &[f64]) -> bool {
        self.check_point(theta).is_ok()
    }

    pub fn value(&self, theta: &[f64]) -> Result<f64> {
        self.check_point(theta)?;
        (self.value)(theta)
    }

    /// `η_i(θ) = ∂μ/∂θ^i`.
    pub fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_point(theta)?;
        match &self.gradient {
            Some(g) => g(theta),
            None => self.gradient_numeric(theta),
        }
    }

    pub fn hessian(&self, theta: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(theta)?;
        match &self.hessian {
            Some(h) => h(theta),
            None => self.hessian_numeric(theta),
        }
    }

    /// Central differences of `μ`, one Richardson level.
    pub fn gradient_numeric(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check_point(theta)?;
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let d = |h: f64| -> Result<f64> {
                let mut plus = theta.to_vec();
                let mut minus = theta.to_vec();
                plus[i] += h;
                minus[i] -= h;
                Ok(((self.value)(&plus)? - (self.value)(&minus)?) / (2.0 * h))
            };
            let coarse = d(FD_STEP)?;
            let fine = d(0.5 * FD_STEP)?;
            out.push((4.0 * fine - coarse) / 3.0);
        }
        Ok(out)
    }

    /// Central differences of the gradient, one Richardson level, symmetrized.
    pub fn hessian_numeric(&self, theta: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_point(theta)?;
        let grad = |t: &[f64]| -> Result<Vec<f64>> {
            match &self.gradient {
                Some(g) => g(t),
                None => self.gradient_numeric(t),
            }
        };
        let k = self.dim;
        let mut h = vec![vec![0.0; k]; k];
        for j in 0..k {
            let d = |step: f64| -> Result<Vec<f64>> {
                let mut plus = theta.to_vec();
                let mut minus = theta.to_vec();
                plus[j] += step;
                minus[j] -= step;
                let gp = grad(&plus)?;
                let gm = grad(&minus)?;
                Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * step)).collect())
            };
            let coarse = d(FD_STEP)?;
            let fine = d(0.5 * FD_STEP)?;
            for i in 0..k {
                h[i][j] = (4.0 * fine[i] - coarse[i]) / 3.0;
            }
        }
        for i in 0..k {
            for j in 0..i {
                let s = 0.5 * (h[i][j] + h[j][i]);
                h[i][j] = s;
                h[j][i] = s;
            }
        }
        Ok(h)
    }

    /// Smallest Hessian eigenvalue over the sample points.
    pub fn min_hessian_eigenvalue(&self, points: &[Vec<f64>]) -> Result<f64> {
        let mut lowest = f64::INFINITY;
        for p in points {
            let h = to_matrix(&self.hessian(p)?);
            let eig = h.symmetric_eigen();
            lowest = lowest.min(eig.eigenvalues.min());
        }
        Ok(lowest)
    }

    /// Fails unless every sampled Hessian is PSD within `−1e-8`.
    pub fn verify_convexity(&self, points: &[Vec<f64>]) -> Result<()> {
        let lowest = self.min_hessian_eigenvalue(points)?;
        if lowest < -1e-8 {
            return Err(Error::InvalidParameter(format!(
                "potential is not convex: Hessian eigenvalue {lowest:e}"
            )));
        }
        Ok(())
    }

    /// `ν(η) = max_θ η·θ − μ(θ)` as a model in its own right, with gradient
    /// `θ(η)` and Hessian the inverse of `μ`'s.
    pub fn legendre_dual(&self, config: LegendreConfig) -> ConvexFunctionModel {
        let primal = self.clone();
        let cfg = config.clone();
        let value = move |eta: &[f64]| Ok(legendre_transform(&primal, eta, &cfg)?.value);
        let primal = self.clone();
        let cfg = config.clone();
        let gradient = move |eta: &[f64]| Ok(legendre_transform(&primal, eta, &cfg)?.theta);
        let primal = self.clone();
        let hessian = move |eta: &[f64]| {
            let point = legendre_transform(&primal, eta, &config)?;
            let h = to_matrix(&primal.hessian(&point.theta)?);
            let inv = h
                .try_inverse()
                .ok_or_else(|| Error::ConvergenceFailure("singular Hessian in dual".into()))?;
            Ok(from_matrix(&inv))
        };
        ConvexFunctionModel::new(self.dim, value)
            .with_gradient(gradient)
            .with_hessian(hessian)
    }
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exponential family `p_θ(ω) ∝ p(ω) exp(Σ_i θ^i X_i(ω))` on a finite alphabet.
#[derive(Debug, Clone)]
pub struct ExponentialFamily {
    base: Vec<f64>,
    statistics: Vec<Vec<f64>>,
}

impl ExponentialFamily {
    /// `statistics[i][ω]` is `X_i(ω)`; the base distribution needs full support.
    pub fn new(base: &ProbabilityDistribution, statistics: Vec<Vec<f64>>) -> Result<Self> {
        if let Some((index, &p)) = base.weights().iter().enumerate().find(|(_, &p)| p <= 0.0) {
            return Err(Error::SupportViolation { index, p, q: p });
        }
        for s in &statistics {
            if s.len() != base.len() {
                return Err(Error::DimensionMismatch {
                    left: s.len(),
                    right: base.len(),
                });
            }
        }
        Ok(Self {
            base: base.weights().to_vec(),
            statistics,
        })
    }

    pub fn dim(&self) -> usize {
        self.statistics.len()
    }

    fn log_weights(&self, theta: &[f64]) -> Vec<f64> {
        self.base
            .iter()
            .enumerate()
            .map(|(w, p)| {
                p.ln()
                    + theta
                        .iter()
                        .zip(&self.statistics)
                        .map(|(t, x)| t * x[w])
                        .sum::<f64>()
            })
            .collect()
    }

    /// `μ(θ) = log Σ_ω p(ω) e^{θ·X(ω)}`.
    pub fn moment(&self, theta: &[f64]) -> f64 {
        let lw = self.log_weights(theta);
        let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        m + lw.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
    }

    pub fn probabilities(&self, theta: &[f64]) -> Vec<f64> {
        let lw = self.log_weights(theta);
        let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = lw.iter().map(|v| (v - m).exp()).collect();
        let z: f64 = w.iter().sum();
        w.iter().map(|x| x / z).collect()
    }

    pub fn distribution(&self, theta: &[f64]) -> Result<ProbabilityDistribution> {
        ProbabilityDistribution::new(self.probabilities(theta))
    }

    /// `E_θ[X_i]`.
    pub fn expectations(&self, theta: &[f64]) -> Vec<f64> {
        let p = self.probabilities(theta);
        self.statistics.iter().map(|x| dot(&p, x)).collect()
    }

    /// `Cov_θ(X_i, X_j)`, the Fisher information matrix.
    pub fn covariance(&self, theta: &[f64]) -> Vec<Vec<f64>> {
        let p = self.probabilities(theta);
        let mean = self.expectations(theta);
        let k = self.dim();
        let mut c = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                c[i][j] = p
                    .iter()
                    .enumerate()
                    .map(|(w, pw)| pw * (self.statistics[i][w] - mean[i]) * (self.statistics[j][w] - mean[j]))
                    .sum();
            }
        }
        c
    }

    /// The moment function as a convex potential with analytic derivatives.
    pub fn model(&self) -> ConvexFunctionModel {
        let a = self.clone();
        let b = self.clone();
        let c = self.clone();
        ConvexFunctionModel::new(self.dim(), move |t| Ok(a.moment(t)))
            .with_gradient(move |t| Ok(b.expectations(t)))
            .with_hessian(move |t| Ok(c.covariance(t)))
    }
}

/// `D^μ(θ̄‖θ) = Σ_i η_i(θ̄)(θ̄^i − θ^i) − μ(θ̄) + μ(θ)`.
pub fn bregman_divergence(model: &ConvexFunctionModel, theta_bar: &[f64], theta: &[f64]) -> Result<f64> {
    let eta_bar = model.gradient(theta_bar)?;
    let diff: Vec<f64> = theta_bar.iter().zip(theta).map(|(a, b)| a - b).collect();
    Ok(dot(&eta_bar, &diff) - model.value(theta_bar)? + model.value(theta)?)
}

/// `max_θ̃ η(θ̄)·(θ̃ − θ) − μ(θ̃) + μ(θ)`, via the Legendre transform at `η(θ̄)`.
pub fn bregman_max_form(
    model: &ConvexFunctionModel,
    theta_bar: &[f64],
    theta: &[f64],
    config: &LegendreConfig,
) -> Result<f64> {
    let eta_bar = model.gradient(theta_bar)?;
    let nu = legendre_transform(model, &eta_bar, config)?.value;
    Ok(nu - dot(&eta_bar, theta) + model.value(theta)?)
}

/// `∫₀¹ Δᵀ ∇²μ(θ + tΔ) Δ · t dt` with `Δ = θ̄ − θ`.
pub fn bregman_integral_form(
    model: &ConvexFunctionModel,
    theta_bar: &[f64],
    theta: &[f64],
    config: &QuadratureConfig,
) -> Result<f64> {
    model.check_point(theta_bar)?;
    model.check_point(theta)?;
    let delta: Vec<f64> = theta_bar.iter().zip(theta).map(|(a, b)| a - b).collect();
    let est = integrate_unit(
        |t| {
            let point: Vec<f64> = theta.iter().zip(&delta).map(|(a, d)| a + t * d).collect();
            let h = model.hessian(&point)?;
            let quad: f64 = (0..delta.len())
                .map(|i| delta[i] * dot(&h[i], &delta))
                .sum();
            Ok(quad * t)
        },
        config,
    )?;
    Ok(est.value)
}

/// Search box and solver settings for [`legendre_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Grid points per axis for the fallback search.
    pub grid_points: usize,
    pub max_iter: usize,
    /// Accepted max-norm residual of `∇μ(θ) − η`.
    pub tol: f64,
}

impl LegendreConfig {
    /// The box `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self {
            lower: vec![-half_width; dim],
            upper: vec![half_width; dim],
            grid_points: 21,
            max_iter: 200,
            tol: 1e-10,
        }
    }

    fn contains(&self, theta: &[f64]) -> bool {
        theta
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(t, (lo, hi))| *lo <= *t && *t <= *hi)
    }
}

/// Maximizer and maximum of `η·θ − μ(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrePoint {
    pub theta: Vec<f64>,
    pub value: f64,
}

/// `ν(η) = max_θ η·θ − μ(θ)` over the configured box, found by damped
/// Newton on `∇μ(θ) = η` with a grid-search restart.
pub fn legendre_transform(
    model: &ConvexFunctionModel,
    eta: &[f64],
    config: &LegendreConfig,
) -> Result<LegendrePoint> {
    let k = model.dim();
    if eta.len() != k || config.lower.len() != k || config.upper.len() != k {
        return Err(Error::DimensionMismatch {
            left: eta.len(),
            right: k,
        });
    }
    if config.lower.iter().zip(&config.upper).any(|(lo, hi)| !(lo < hi)) {
        return Err(Error::InvalidParameter("empty Legendre search box".into()));
    }
    let centre: Vec<f64> = config
        .lower
        .iter()
        .zip(&config.upper)
        .map(|(lo, hi)| 0.5 * (lo + hi))
        .collect();
    if let Some(point) = newton_stationary(model, eta, config, centre)? {
        return Ok(point);
    }
    let start = grid_argmax(model, eta, config)?;
    if let Some(point) = newton_stationary(model, eta, config, start)? {
        return Ok(point);
    }
    Err(Error::NotInRange(format!(
        "no stationary point of η·θ − μ(θ) inside the search box for η = {eta:?}"
    )))
}

fn objective(model: &ConvexFunctionModel, eta: &[f64], theta: &[f64]) -> Result<f64> {
    Ok(dot(eta, theta) - model.value(theta)?)
}

fn newton_stationary(
    model: &ConvexFunctionModel,
    eta: &[f64],
    config: &LegendreConfig,
    start: Vec<f64>,
) -> Result<Option<LegendrePoint>> {
    let mut theta = start;
    if !model.in_domain(&theta) {
        return Ok(None);
    }
    let mut f = objective(model, eta, &theta)?;
    for _ in 0..config.max_iter {
        let grad = model.gradient(&theta)?;
        let residual: Vec<f64> = eta.iter().zip(&grad).map(|(e, g)| e - g).collect();
        let size = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if size <= config.tol {
            return Ok(Some(LegendrePoint { theta, value: f }));
        }
        let h = to_matrix(&model.hessian(&theta)?);
        let r = DVector::from_vec(residual.clone());
        let step = match h.clone().cholesky() {
            Some(ch) => ch.solve(&r),
            None => match h.lu().solve(&r) {
                Some(s) => s,
                None => return Ok(None),
            },
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + alpha * s).collect();
            if config.contains(&trial) && model.in_domain(&trial) {
                let ft = objective(model, eta, &trial)?;
                if ft >= f - 1e-15 * f.abs().max(1.0) {
                    theta = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            // Stalled: accept a nearly stationary point, otherwise give up.
            return Ok((size <= config.tol.sqrt() * 1e-2).then_some(LegendrePoint { theta, value: f }));
        }
    }
    Ok(None)
}

fn grid_argmax(model: &ConvexFunctionModel, eta: &[f64], config: &LegendreConfig) -> Result<Vec<f64>> {
    let k = model.dim();
    let per_axis = {
        // Cap the grid at roughly 2·10⁵ evaluations.
        let cap = (200_000f64).powf(1.0 / k as f64).floor() as usize;
        config.grid_points.clamp(2, cap.max(2))
    };
    let total = per_axis.pow(k as u32);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for index in 0..total {
        let mut rem = index;
        let point: Vec<f64> = (0..k)
            .map(|axis| {
                let i = rem % per_axis;
                rem /= per_axis;
                let frac = i as f64 / (per_axis - 1) as f64;
                config.lower[axis] + frac * (config.upper[axis] - config.lower[axis])
            })
            .collect();
        if !model.in_domain(&point) {
            continue;
        }
        let v = objective(model, eta, &point)?;
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, point));
        }
    }
    best.map(|(_, p)| p)
        .ok_or_else(|| Error::NotInRange("search box misses the model domain".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: &[f64]) -> ProbabilityDistribution {
        ProbabilityDistribution::new(w.to_vec()).unwrap()
    }

    #[test]
    fn kl_examples() {
        let p = dist(&[0.7, 0.3]);
        let q = dist(&[0.5, 0.5]);
        assert!((classical_kl(&p, &q).unwrap() - 0.082282878505).abs() < 1e-11);
        assert_eq!(classical_kl(&p, &p).unwrap(), 0.0);
        let r = dist(&[1.0, 0.0]);
        assert!((classical_kl(&r, &q).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(
            classical_kl(&q, &r),
            Err(Error::SupportViolation { index: 1, .. })
        ));
        assert!(classical_kl(&p, &dist(&[0.2, 0.3, 0.5])).is_err());
    }

    #[test]
    fn kl_is_trapezoid_integral_of_mixture_fisher() {
        let p = dist(&[0.5, 0.3, 0.2]);
        let q = dist(&[0.1, 0.3, 0.6]);
        let n = 100_000;
        let h = 1.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * mixture_fisher(&p, &q, t).unwrap() * t;
        }
        acc *= h;
        assert!((acc - classical_kl(&p, &q).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn quadratic_bregman_and_legendre() {
        let m = ConvexFunctionModel::quadratic(1);
        let d = bregman_divergence(&m, &[1.5], &[-0.5]).unwrap();
        assert!((d - 2.0).abs() < 1e-15);
        assert_eq!(bregman_divergence(&m, &[0.3], &[0.3]).unwrap(), 0.0);
        let cfg = LegendreConfig::cube(1, 10.0);
        for eta in [-2.0, 0.0, 0.7, 3.0] {
            let p = legendre_transform(&m, &[eta], &cfg).unwrap();
            assert!((p.value - 0.5 * eta * eta).abs() < 1e-12);
            assert!((p.theta[0] - eta).abs() < 1e-12);
        }
        assert!(matches!(
            legendre_transform(&m, &[25.0], &cfg),
            Err(Error::NotInRange(_))
        ));
    }

    #[test]
    fn binomial_legendre_is_negative_entropy() {
        let m = ConvexFunctionModel::binomial();
        let cfg = LegendreConfig::cube(1, 30.0);
        for eta in [0.05, 0.2, 0.5, 0.73, 0.95] {
            let p = legendre_transform(&m, &[eta], &cfg).unwrap();
            let expected = eta * f64::ln(eta) + (1.0 - eta) * f64::ln(1.0 - eta);
            assert!((p.value - expected).abs() < 1e-10, "{eta}");
            // An independent oracle: brute-force maximization on a fine grid.
            let brute = (0..=200_000)
                .map(|i| -10.0 + 20.0 * i as f64 / 200_000.0)
                .map(|t| eta * t - m.value(&[t]).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((p.value - brute).abs() < 1e-7);
        }
        assert!(legendre_transform(&m, &[1.2], &cfg).is_err());
    }

    #[test]
    fn legendre_round_trip() {
        let m = ConvexFunctionModel::binomial();
        let nu = m.legendre_dual(LegendreConfig::cube(1, 30.0));
        let mut back_cfg = LegendreConfig::cube(1, 0.5);
        back_cfg.lower = vec![1e-6];
        back_cfg.upper = vec![1.0 - 1e-6];
        let back = nu.with_domain(|e| e[0] > 0.0 && e[0] < 1.0);
        for theta in [-2.0, -0.3, 0.0, 1.1, 2.5] {
            let p = legendre_transform(&back, &[theta], &back_cfg).unwrap();
            assert!((p.value - m.value(&[theta]).unwrap()).abs() < 1e-6, "{theta}");
        }
    }

    #[test]
    fn duality_of_bregman_divergences() {
        let base = dist(&[0.2, 0.5, 0.3]);
        let family = ExponentialFamily::new(&base, vec![vec![1.0, 0.0, -1.0], vec![0.5, -1.0, 2.0]]).unwrap();
        let mu = family.model();
        let cfg = LegendreConfig::cube(2, 20.0);
        let nu = mu.legendre_dual(cfg);
        let theta_bar = [0.4, -0.3];
        let theta = [-0.2, 0.6];
        let eta_bar = mu.gradient(&theta_bar).unwrap();
        let eta = mu.gradient(&theta).unwrap();
        let d_mu = bregman_divergence(&mu, &theta_bar, &theta).unwrap();
        let d_nu = bregman_divergence(&nu, &eta, &eta_bar).unwrap();
        assert!((d_mu - d_nu).abs() < 1e-6);
    }

    #[test]
    fn exponential_family_bregman_is_kl() {
        let base = dist(&[0.2, 0.5, 0.3]);
        let family = ExponentialFamily::new(&base, vec![vec![1.0, 0.0, -1.0], vec![0.5, -1.0, 2.0]]).unwrap();
        let m = family.model();
        let theta_bar = [0.7, 0.1];
        let theta = [-0.4, 0.5];
        let kl = classical_kl(
            &family.distribution(&theta_bar).unwrap(),
            &family.distribution(&theta).unwrap(),
        )
        .unwrap();
        let d = bregman_divergence(&m, &theta_bar, &theta).unwrap();
        assert!((d - kl).abs() < 1e-8);
        let max_form = bregman_max_form(&m, &theta_bar, &theta, &LegendreConfig::cube(2, 20.0)).unwrap();
        let int_form = bregman_integral_form(&m, &theta_bar, &theta, &QuadratureConfig::default()).unwrap();
        assert!((max_form - d).abs() < 1e-6);
        assert!((int_form - d).abs() < 1e-6);
    }

    #[test]
    fn numeric_derivatives_match_analytic() {
        let base = dist(&[0.25, 0.25, 0.5]);
        let family = ExponentialFamily::new(&base, vec![vec![1.0, -2.0, 0.5]]).unwrap();
        let analytic = family.model();
        let f = family.clone();
        let numeric = ConvexFunctionModel::new(1, move |t| Ok(f.moment(t)));
        for t in [-1.0, 0.0, 0.8] {
            let g = analytic.gradient(&[t]).unwrap()[0];
            let gn = numeric.gradient(&[t]).unwrap()[0];
            assert!((g - gn).abs() < 1e-9);
            let h = analytic.hessian(&[t]).unwrap()[0][0];
            let hn = numeric.hessian(&[t]).unwrap()[0][0];
            assert!((h - hn).abs() < 1e-6);
        }
    }

    #[test]
    fn convexity_check() {
        let m = ConvexFunctionModel::binomial();
        let pts: Vec<Vec<f64>> = (-5..=5).map(|i| vec![i as f64]).collect();
        assert!(m.verify_convexity(&pts).is_ok());
        let concave = ConvexFunctionModel::new(1, |t| Ok(-t[0] * t[0]));
        assert!(concave.verify_convexity(&pts).is_err());
    }

    #[test]
    fn domain_is_enforced() {
        let m = ConvexFunctionModel::quadratic(1).with_domain(|t| t[0] > 0.0);
        assert!(matches!(m.value(&[-1.0]), Err(Error::OutsideDomain(_))));
        assert!(bregman_divergence(&m, &[1.0], &[-1.0]).is_err());
    }
}
