//! Density matrices, classical distributions and seeded test instances.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, frobenius_norm, hermitian_part, ComplexMatrix, HermitianEigen,
    SUPPORT_THRESHOLD,
};
use crate::rng::SeededRng;

/// Default tolerance for [`validate_density`].
pub const DENSITY_TOL: f64 = 1e-10;

/// Minimum eigenvalue floor for positivity.
pub const PSD_FLOOR: f64 = 1e-12;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
///
/// The spectral decomposition is computed once at validation and reused by
/// every functional-calculus operation downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigen: HermitianEigen,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen.min_eigenvalue()
    }

    /// Strictly positive beyond the support threshold.
    pub fn is_full_rank(&self) -> bool {
        self.min_eigenvalue() > SUPPORT_THRESHOLD
    }

    pub fn require_full_rank(&self) -> Result<()> {
        if self.is_full_rank() {
            Ok(())
        } else {
            Err(Error::NotFullRank {
                min_eigenvalue: self.min_eigenvalue(),
                threshold: SUPPORT_THRESHOLD,
            })
        }
    }

    /// Diagonal state with the given weights.
    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        validate_density(&linalg::from_real_diagonal(weights), DENSITY_TOL)
    }

    /// `U diag(weights) U*` for a unitary `u`.
    pub fn from_spectrum(u: &ComplexMatrix, weights: &[f64]) -> Result<Self> {
        let d = linalg::from_real_diagonal(weights);
        validate_density(&(u * d * u.adjoint()), DENSITY_TOL)
    }

    /// `(1 - t) ρ + t σ`.
    pub fn mix(rho: &Self, sigma: &Self, t: f64) -> Result<Self> {
        linalg::check_same_dim(rho.dim(), sigma.dim())?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight t = {t} outside [0, 1]"
            )));
        }
        if t == 0.0 {
            return Ok(rho.clone());
        }
        if t == 1.0 {
            return Ok(sigma.clone());
        }
        let m = rho.matrix.scale(1.0 - t) + sigma.matrix.scale(t);
        validate_density(&m, 1e-9)
    }

    /// Matrix function of the state with a strictly positive spectrum.
    pub fn map_positive(&self, name: &'static str, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        self.require_full_rank()?;
        self.eigen.map_positive(name, f)
    }

    pub fn log(&self) -> Result<ComplexMatrix> {
        self.map_positive("log", f64::ln)
    }

    pub fn pow(&self, p: f64) -> Result<ComplexMatrix> {
        self.map_positive("pow", |d| d.powf(p))
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::from_matrix(&self.matrix)
    }
}

/// Checks the three density-matrix invariants at tolerance `tol`.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    linalg::check_square(m)?;
    let eigen = eig_hermitian(m, tol)?;
    let trace = linalg::trace(m);
    let defect = (trace - Complex64::new(1.0, 0.0)).norm();
    if defect > tol {
        return Err(Error::TraceNotOne {
            trace: trace.re,
            defect,
            tol,
        });
    }
    let min = eigen.min_eigenvalue();
    if min < -PSD_FLOOR {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            floor: -PSD_FLOOR,
        });
    }
    Ok(DensityMatrix {
        matrix: hermitian_part(m),
        eigen,
    })
}

/// `I / dim`.
pub fn max_mixed(dim: usize) -> DensityMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let w = 1.0 / dim as f64;
    DensityMatrix::from_diagonal(&vec![w; dim]).expect("maximally mixed state is valid")
}

/// `‖ρσ − σρ‖_F`.
pub fn commutation_defect(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    let a = rho.matrix();
    let b = sigma.matrix();
    Ok(frobenius_norm(&(a * b - b * a)))
}

/// Von Neumann entropy `-Tr ρ log ρ` in nats, `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.spectrum()
        .iter()
        .filter(|&&d| d > SUPPORT_THRESHOLD)
        .map(|&d| d * d.ln())
        .sum::<f64>()
}

/// Classical probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDistribution {
    weights: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty weight vector".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidDistribution(format!("weight {i} = {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum} (|sum - 1| = {:e})",
                (sum - 1.0).abs()
            )));
        }
        Ok(Self { weights })
    }

    /// Accepts roundoff-level negative entries (down to `-1e-12`) and zeroes
    /// them, and renormalizes sums within `1e-9` of one.
    pub(crate) fn from_measured(mut weights: Vec<f64>) -> Result<Self> {
        for w in weights.iter_mut() {
            if *w < 0.0 && *w >= -1e-12 {
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() <= 1e-9 {
            for w in weights.iter_mut() {
                *w /= sum;
            }
        }
        Self::new(weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Parameters for [`random_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub dim: usize,
    pub seed: u64,
    /// Eigenvalue floor, enforced by mixing with `I/dim`; must lie in `[0, 1/dim)`.
    pub min_eigenvalue: f64,
}

impl RandomSpec {
    pub fn new(dim: usize, seed: u64, min_eigenvalue: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !(0.0..1.0 / dim as f64).contains(&min_eigenvalue) {
            return Err(Error::InvalidParameter(format!(
                "min_eigenvalue {min_eigenvalue} outside [0, 1/{dim})"
            )));
        }
        Ok(Self {
            dim,
            seed,
            min_eigenvalue,
        })
    }
}

/// Seeded random state: normalized `GG*` for complex Ginibre `G`, mixed
/// with `I/dim` just enough to lift the smallest eigenvalue to the floor.
pub fn random_density(spec: &RandomSpec) -> DensityMatrix {
    let mut rng = SeededRng::new(spec.seed);
    random_density_with(&mut rng, spec.dim, spec.min_eigenvalue)
}

pub(crate) fn random_density_with(rng: &mut SeededRng, dim: usize, floor: f64) -> DensityMatrix {
    let g = rng.ginibre(dim, dim);
    let mut gg = &g * g.adjoint();
    let tr = linalg::trace(&gg).re;
    gg.scale_mut(1.0 / tr);
    let base = validate_density(&gg, 1e-9).expect("Ginibre product is a state");
    let lowest = base.min_eigenvalue();
    let uniform = 1.0 / dim as f64;
    if lowest >= floor {
        return base;
    }
    // A tiny margin keeps the floor after re-diagonalization.
    let target = floor + 1e-14;
    let mix = ((target - lowest) / (uniform - lowest)).clamp(0.0, 1.0);
    let m = base.matrix().scale(1.0 - mix) + linalg::identity(dim).scale(mix * uniform);
    validate_density(&m, 1e-9).expect("mixture of states is a state")
}

/// Haar-ish random unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary(rng: &mut SeededRng, dim: usize) -> ComplexMatrix {
    let g = rng.ginibre(dim, dim);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for v in q.column_mut(j).iter_mut() {
            *v *= phase;
        }
    }
    q
}

/// Random Hermitian matrix `(G + G*)/2` scaled to unit Frobenius norm.
pub fn random_hermitian(rng: &mut SeededRng, dim: usize) -> ComplexMatrix {
    let g = rng.ginibre(dim, dim);
    let h = hermitian_part(&g);
    let n = frobenius_norm(&h);
    h.unscale(n)
}

/// Random probability vector with every weight at least `floor`.
pub fn random_simplex(rng: &mut SeededRng, dim: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.uniform()).ln()).collect();
    let sum: f64 = raw.iter().sum();
    let free = 1.0 - floor * dim as f64;
    raw.iter().map(|x| floor + free * x / sum).collect()
}

/// Commuting pair `U diag(p) U*`, `U diag(q) U*` sharing a random eigenbasis.
pub fn codiagonal_pair(
    rng: &mut SeededRng,
    dim: usize,
    floor: f64,
) -> Result<(DensityMatrix, DensityMatrix, Vec<f64>, Vec<f64>)> {
    let u = random_unitary(rng, dim);
    let p = random_simplex(rng, dim, floor);
    let q = random_simplex(rng, dim, floor);
    let rho = DensityMatrix::from_spectrum(&u, &p)?;
    let sigma = DensityMatrix::from_spectrum(&u, &q)?;
    Ok((rho, sigma, p, q))
}

/// Shared JSON encoding for matrices and states:
/// `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let (re, im) = linalg::to_parts(m);
        Self {
            dim: m.nrows(),
            re,
            im,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let m = linalg::from_parts(&self.re, &self.im)?;
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::InvalidShape(format!(
                "declared dim {} but matrix is {}x{}",
                self.dim,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(m)
    }

    /// Rectangular matrices (Kraus operators) carry their shape in the arrays.
    pub fn to_rect_matrix(&self) -> Result<ComplexMatrix> {
        linalg::from_parts(&self.re, &self.im)
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        validate_density(&self.to_matrix()?, DENSITY_TOL)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid matrix JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }
}
