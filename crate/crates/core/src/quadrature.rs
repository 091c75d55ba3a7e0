//! Gauss–Legendre quadrature on `[0, 1]` with node-count doubling.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess for the i-th root from the right.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared, lazily built rule for `n` nodes.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs mapped to `[0, 1]`.
    pub fn unit_interval(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
    }

    pub fn integrate_unit<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (t, w) in self.unit_interval() {
            acc += w * f(t)?;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Node-doubling policy for path integrals over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Starting node count.
    pub nodes: usize,
    /// Stop when successive estimates differ by less than this, relatively.
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes: 32,
            rel_tol: 1e-8,
            max_nodes: 512,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 2 nodes, got {}",
                self.nodes
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_nodes < self.nodes {
            return Err(Error::InvalidParameter(format!(
                "max_nodes {} below starting nodes {}",
                self.max_nodes, self.nodes
            )));
        }
        Ok(())
    }
}

/// A converged quadrature value and the node count of the accepted rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub nodes: usize,
}

/// Absolute floor on the convergence test, for integrals that vanish.
const ABS_FLOOR: f64 = 1e-15;

/// One rule applied with nodes evaluated in parallel and summed in node order.
fn integrate_parallel<F>(rule: &GaussLegendre, f: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let points: Vec<(f64, f64)> = rule.unit_interval().collect();
    let terms = points
        .par_iter()
        .map(|&(t, w)| f(t).map(|v| w * v))
        .collect::<Result<Vec<f64>>>()?;
    Ok(terms.iter().sum())
}

/// Integrates `f` over `[0, 1]`, doubling the node count until two
/// successive estimates agree to `rel_tol`.
pub fn integrate_unit<F>(f: F, config: &QuadratureConfig) -> Result<QuadratureEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    config.validate()?;
    let mut n = config.nodes;
    let mut previous = integrate_parallel(&GaussLegendre::cached(n), &f)?;
    let mut change = f64::INFINITY;
    while n * 2 <= config.max_nodes {
        n *= 2;
        let current = integrate_parallel(&GaussLegendre::cached(n), &f)?;
        change = (current - previous).abs();
        if change <= config.rel_tol * current.abs() + ABS_FLOOR {
            return Ok(QuadratureEstimate {
                value: current,
                nodes: n,
            });
        }
        previous = current;
    }
    Err(Error::QuadratureNotConverged {
        nodes: n,
        change: change / previous.abs().max(f64::MIN_POSITIVE),
        rel_tol: config.rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 5, 32, 64, 512] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // n nodes integrate degree 2n-1 exactly.
        let rule = GaussLegendre::new(5);
        for deg in 0..10 {
            let v = rule.integrate_unit(|t| Ok(t.powi(deg))).unwrap();
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn known_nodes() {
        let rule = GaussLegendre::new(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + r).abs() < 1e-15 && (rule.nodes[1] - r).abs() < 1e-15);
    }

    #[test]
    fn adaptive_smooth_integrand() {
        let est = integrate_unit(|t| Ok((3.0 * t).exp()), &QuadratureConfig::default()).unwrap();
        let exact = (3f64.exp() - 1.0) / 3.0;
        assert!((est.value - exact).abs() < 1e-13);
        assert_eq!(est.nodes, 64);
    }

    #[test]
    fn zero_integrand_converges() {
        let est = integrate_unit(|_| Ok(0.0), &QuadratureConfig::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            nodes: 4,
            rel_tol: 1e-14,
            max_nodes: 8,
        };
        let err = integrate_unit(|t| Ok(1.0 / (t + 1e-3)), &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { nodes: 8, .. }));
        let bad = QuadratureConfig {
            nodes: 1,
            ..QuadratureConfig::default()
        };
        assert!(integrate_unit(|_| Ok(1.0), &bad).is_err());
    }
}
