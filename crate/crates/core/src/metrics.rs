//! Monotone-metric superoperators `E_{ρ,x}`, their inverses, the dual e/m
//! inner products and quantum Fisher informations.
//!
//! Every superoperator is realized in the eigenbasis of `ρ = U diag(d) U*`
//! as an entrywise kernel: `(U* E(X) U)_{ij} = c_x(d_i, d_j) (U* X U)_{ij}`.
//! The inverse divides by the same kernel.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::DensityMatrix;

/// Relative threshold on `|log a − log b|` below which the Bogoljubov
/// kernel switches to its series.
const LOG_MEAN_SERIES_CUTOFF: f64 = 1e-8;

/// Selects the superoperator family `E_{ρ,x}`.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricKind {
    /// Symmetric logarithmic derivative: `(ρX + Xρ)/2`.
    Sld,
    /// Bogoljubov (Kubo–Mori): `∫₀¹ ρ^λ X ρ^{1−λ} dλ`.
    Bogoljubov,
    /// Right logarithmic derivative: `ρX`.
    Rld,
    /// `ρ^λ X ρ^{1−λ}` for a fixed `λ ∈ [0,1]`.
    Lambda(f64),
    /// Finitely supported mixture of `Lambda` maps: `(λ_k, w_k)` pairs.
    Measure(Vec<(f64, f64)>),
}

impl MetricKind {
    pub fn lambda(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} outside [0, 1]"
            )));
        }
        Ok(MetricKind::Lambda(lambda))
    }

    /// The `λ = 1/2` metric.
    pub fn half() -> Self {
        MetricKind::Lambda(0.5)
    }

    pub fn measure(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty measure".into()));
        }
        for &(l, w) in &points {
            if !(0.0..=1.0).contains(&l) || !(w >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "measure point ({l}, {w}) needs lambda in [0,1] and weight >= 0"
                )));
            }
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "measure weights sum to {total}"
            )));
        }
        Ok(MetricKind::Measure(points))
    }

    /// Whether `E_{ρ,x}(X)` is Hermitian exactly when `X` is.
    pub fn is_symmetric(&self) -> bool {
        match self {
            MetricKind::Sld | MetricKind::Bogoljubov => true,
            MetricKind::Rld => false,
            MetricKind::Lambda(l) => (l - 0.5).abs() < 1e-15,
            MetricKind::Measure(points) => {
                let mass_at = |target: f64| -> f64 {
                    points
                        .iter()
                        .filter(|(l, _)| (l - target).abs() < 1e-12)
                        .map(|(_, w)| w)
                        .sum()
                };
                points
                    .iter()
                    .all(|&(l, _)| (mass_at(l) - mass_at(1.0 - l)).abs() < 1e-12)
            }
        }
    }

    /// The scalar kernel `c_x(a, b)` for positive `a, b`.
    pub fn kernel(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return a;
        }
        match self {
            MetricKind::Sld => 0.5 * (a + b),
            MetricKind::Bogoljubov => log_mean(a, b),
            MetricKind::Rld => a,
            MetricKind::Lambda(l) => lambda_kernel(*l, a, b),
            MetricKind::Measure(points) => points
                .iter()
                .map(|&(l, w)| w * lambda_kernel(l, a, b))
                .sum(),
        }
    }

    /// Short label used in tables and CLI flags.
    pub fn label(&self) -> String {
        match self {
            MetricKind::Sld => "s".into(),
            MetricKind::Bogoljubov => "b".into(),
            MetricKind::Rld => "r".into(),
            MetricKind::Lambda(l) if *l == 0.5 => "half".into(),
            MetricKind::Lambda(l) => format!("lambda={l}"),
            MetricKind::Measure(points) => {
                let parts: Vec<String> = points.iter().map(|(l, w)| format!("{l}:{w}")).collect();
                format!("measure={}", parts.join(","))
            }
        }
    }
}

fn lambda_kernel(l: f64, a: f64, b: f64) -> f64 {
    if l == 1.0 {
        a
    } else if l == 0.0 {
        b
    } else {
        a.powf(l) * b.powf(1.0 - l)
    }
}

/// Logarithmic mean `(a − b)/(log a − log b)`, with `c(a, a) = a`.
pub fn log_mean(a: f64, b: f64) -> f64 {
    if a == b {
        return a;
    }
    let ratio = (b - a) / a;
    let u = ratio.ln_1p();
    if u.abs() < LOG_MEAN_SERIES_CUTOFF {
        // (e^u − 1)/u
        a * (1.0 + u / 2.0 + u * u / 6.0)
    } else {
        (b - a) / u
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses `s | b | r | half | lambda=<x>`.
impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s" | "sld" => Ok(MetricKind::Sld),
            "b" | "bogoljubov" => Ok(MetricKind::Bogoljubov),
            "r" | "rld" => Ok(MetricKind::Rld),
            "half" | "1/2" => Ok(MetricKind::half()),
            other => {
                if let Some(v) = other.strip_prefix("lambda=") {
                    let l: f64 = v
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad lambda value {v:?}")))?;
                    MetricKind::lambda(l)
                } else {
                    Err(Error::InvalidParameter(format!("unknown metric {other:?}")))
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MetricRepr {
    Tag(String),
    Lambda { lambda: f64 },
    Measure { measure: Vec<[f64; 2]> },
}

/// JSON form: `"s" | "b" | "r" | {"lambda": 0.5} | {"measure": [[0.0,0.5],[1.0,0.5]]}`.
impl Serialize for MetricKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            MetricKind::Sld => MetricRepr::Tag("s".into()),
            MetricKind::Bogoljubov => MetricRepr::Tag("b".into()),
            MetricKind::Rld => MetricRepr::Tag("r".into()),
            MetricKind::Lambda(l) => MetricRepr::Lambda { lambda: *l },
            MetricKind::Measure(points) => MetricRepr::Measure {
                measure: points.iter().map(|&(l, w)| [l, w]).collect(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MetricKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match MetricRepr::deserialize(deserializer)? {
            MetricRepr::Tag(t) => match t.as_str() {
                "s" => Ok(MetricKind::Sld),
                "b" => Ok(MetricKind::Bogoljubov),
                "r" => Ok(MetricKind::Rld),
                other => Err(de::Error::custom(format!("unknown metric tag {other:?}"))),
            },
            MetricRepr::Lambda { lambda } => MetricKind::lambda(lambda).map_err(de::Error::custom),
            MetricRepr::Measure { measure } => {
                MetricKind::measure(measure.into_iter().map(|[l, w]| (l, w)).collect())
                    .map_err(de::Error::custom)
            }
        }
    }
}

fn kernel_matrix(rho: &DensityMatrix, x: &MetricKind) -> Vec<Vec<f64>> {
    let d = rho.spectrum();
    d.iter()
        .map(|&a| d.iter().map(|&b| x.kernel(a, b)).collect())
        .collect()
}

fn check_operand(rho: &DensityMatrix, m: &ComplexMatrix) -> Result<()> {
    linalg::check_square(m)?;
    linalg::check_same_dim(rho.dim(), m.nrows())
}

/// `E_{ρ,x}(X)`: e-representation to m-representation.
pub fn e_to_m(rho: &DensityMatrix, x: &MetricKind, e_rep: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho.require_full_rank()?;
    check_operand(rho, e_rep)?;
    let eig = rho.eigen();
    let c = kernel_matrix(rho, x);
    let mut rotated = eig.to_eigenbasis(e_rep);
    for (i, row) in c.iter().enumerate() {
        for (j, &cij) in row.iter().enumerate() {
            rotated[(i, j)] *= cij;
        }
    }
    Ok(eig.from_eigenbasis(&rotated))
}

/// `E_{ρ,x}^{-1}(A)`: m-representation to e-representation.
pub fn m_to_e(rho: &DensityMatrix, x: &MetricKind, m_rep: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho.require_full_rank()?;
    check_operand(rho, m_rep)?;
    let eig = rho.eigen();
    let c = kernel_matrix(rho, x);
    let mut rotated = eig.to_eigenbasis(m_rep);
    for (i, row) in c.iter().enumerate() {
        for (j, &cij) in row.iter().enumerate() {
            rotated[(i, j)] /= cij;
        }
    }
    Ok(eig.from_eigenbasis(&rotated))
}

/// `⟨Y, X⟩^{(e)}_{ρ,x} = Tr Y* E_{ρ,x}(X)`.
pub fn e_inner(
    rho: &DensityMatrix,
    x: &MetricKind,
    y: &ComplexMatrix,
    xm: &ComplexMatrix,
) -> Result<Complex64> {
    check_operand(rho, y)?;
    let ex = e_to_m(rho, x, xm)?;
    Ok(linalg::trace_product(&y.adjoint(), &ex))
}

/// `⟨A, B⟩^{(m)}_{ρ,x} = Tr (E_{ρ,x}^{-1}(A))* B`.
pub fn m_inner(
    rho: &DensityMatrix,
    x: &MetricKind,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<Complex64> {
    rho.require_full_rank()?;
    check_operand(rho, a)?;
    check_operand(rho, b)?;
    // Σ_ij conj(A'_ij) B'_ij / c(d_i, d_j) in the eigenbasis.
    let eig = rho.eigen();
    let c = kernel_matrix(rho, x);
    let ar = eig.to_eigenbasis(a);
    let br = eig.to_eigenbasis(b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, row) in c.iter().enumerate() {
        for (j, &cij) in row.iter().enumerate() {
            acc += ar[(i, j)].conj() * br[(i, j)] / cij;
        }
    }
    Ok(acc)
}

/// `(‖A‖^{(m)}_{ρ,x})²`.
pub fn m_norm_sq(rho: &DensityMatrix, x: &MetricKind, a: &ComplexMatrix) -> Result<f64> {
    Ok(m_inner(rho, x, a, a)?.re)
}

/// Fisher information of the mixture family `(1 − t)ρ + tσ` at `t`.
///
/// The tangent `σ − ρ` is constant, so this is its squared m-norm at `ρ_t`.
pub fn fisher_info_mixture(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    x: &MetricKind,
    t: f64,
) -> Result<f64> {
    let rho_t = DensityMatrix::mix(rho, sigma, t)?;
    let tangent = sigma.matrix() - rho.matrix();
    m_norm_sq(&rho_t, x, &tangent)
}

/// Fisher information of an arbitrary one-parameter family by central
/// differences, Richardson-extrapolated over steps `h` and `h/2`.
pub fn fisher_info_numeric<F>(family: F, theta: f64, x: &MetricKind, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step h = {h} must be positive")));
    }
    let centre = family(theta)?;
    let diff = |step: f64| -> Result<ComplexMatrix> {
        let plus = family(theta + step)?;
        let minus = family(theta - step)?;
        Ok((plus.matrix() - minus.matrix()).unscale(2.0 * step))
    };
    let coarse = diff(h)?;
    let fine = diff(0.5 * h)?;
    let derivative = (fine.scale(4.0) - coarse).unscale(3.0);
    m_norm_sq(&centre, x, &derivative)
}
