//! Trace-preserving completely positive maps in Kraus form, POVMs and
//! measurement, partial traces, and the PVM that attains the SLD
//! e-divergence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, hermitian_part, ComplexMatrix, HERMITIAN_TOL};
use crate::rng::SeededRng;
use crate::states::{random_unitary, validate_density, DensityMatrix, MatrixFile, ProbabilityDistribution};
use crate::transport::metric_geometric_mean;

/// Tolerance on `Σ K*K = I` and `Σ M_i = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Eigenvalues of the sandwich operator closer than this share a projector.
pub const EIGEN_GROUP_GAP: f64 = 1e-9;

fn completeness_defect(sum: &ComplexMatrix) -> f64 {
    let n = sum.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((sum[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// A TP-CP map `ρ ↦ Σ K_i ρ K_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidShape("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = first.shape();
        for k in &kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(Error::InvalidShape(format!(
                    "Kraus operators of shapes {}x{} and {}x{}",
                    dim_out,
                    dim_in,
                    k.nrows(),
                    k.ncols()
                )));
            }
            if k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let defect = completeness_defect(&sum);
        if defect > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving {
                defect,
                tol: COMPLETENESS_TOL,
            });
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![linalg::identity(dim)],
        }
    }

    /// `ρ ↦ I/n` via the Kraus set `{|i⟩⟨j|/√n}`.
    pub fn full_depolarizing(dim: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let mut kraus = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = ComplexMatrix::zeros(dim, dim);
                k[(i, j)] = Complex64::new(scale, 0.0);
                kraus.push(k);
            }
        }
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Max-entry defect of `Σ K*K − I`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        completeness_defect(&sum)
    }

    pub fn to_file(&self) -> ChannelFile {
        ChannelFile {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.iter().map(MatrixFile::from_matrix).collect(),
        }
    }
}

/// JSON form `{"dim_in": m, "dim_out": n, "kraus": [matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<MatrixFile>,
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixFile::to_rect_matrix)
            .collect::<Result<Vec<_>>>()?;
        let channel = QuantumChannel::new(kraus)?;
        if channel.dim_in != self.dim_in || channel.dim_out != self.dim_out {
            return Err(Error::InvalidShape(format!(
                "declared {}->{} but Kraus operators map {}->{}",
                self.dim_in, self.dim_out, channel.dim_in, channel.dim_out
            )));
        }
        Ok(channel)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid channel JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel serializes")
    }
}

/// `Σ K_i ρ K_i*`.
pub fn apply_channel(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    linalg::check_same_dim(channel.dim_in, rho.dim())?;
    let mut out = ComplexMatrix::zeros(channel.dim_out, channel.dim_out);
    for k in &channel.kraus {
        out += k * rho.matrix() * k.adjoint();
    }
    validate_density(&out, 1e-9)
}

/// Channel whose Kraus operators are the blocks of a random isometry
/// `C^{dim_in} → C^{dim_out · kraus_count}`.
pub fn random_channel(dim_in: usize, dim_out: usize, kraus_count: usize, seed: u64) -> Result<QuantumChannel> {
    let mut rng = SeededRng::new(seed);
    random_channel_with(&mut rng, dim_in, dim_out, kraus_count)
}

pub fn random_channel_with(
    rng: &mut SeededRng,
    dim_in: usize,
    dim_out: usize,
    kraus_count: usize,
) -> Result<QuantumChannel> {
    if dim_in == 0 || dim_out == 0 || kraus_count == 0 {
        return Err(Error::InvalidShape("channel dimensions must be positive".into()));
    }
    let rows = dim_out * kraus_count;
    if rows < dim_in {
        return Err(Error::InvalidShape(format!(
            "kraus_count·dim_out = {rows} < dim_in = {dim_in}; no isometry exists"
        )));
    }
    let g = rng.ginibre(rows, dim_in);
    let qr = g.qr();
    let mut v = qr.q();
    let r = qr.r();
    for j in 0..dim_in {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for z in v.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
    }
    let kraus = (0..kraus_count)
        .map(|b| v.rows(b * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::new(kraus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace over the other factor of `C^{dA} ⊗ C^{dB}`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::InvalidShape(format!(
            "dims ({da}, {db}) do not factor a {0}x{0} state",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    };
    validate_density(&out, 1e-9)
}

/// A positive operator-valued measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let n = linalg::check_square(first)?;
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, m) in elements.iter().enumerate() {
            linalg::check_square(m)?;
            linalg::check_same_dim(n, m.nrows())?;
            let defect = linalg::hermiticity_defect(m);
            if defect > HERMITIAN_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {i} not Hermitian (defect {defect:e})"
                )));
            }
            let lowest = eig_hermitian(&hermitian_part(m), HERMITIAN_TOL)?.min_eigenvalue();
            if lowest < -1e-10 {
                return Err(Error::InvalidPovm(format!(
                    "element {i} has eigenvalue {lowest:e} below -1e-10"
                )));
            }
            sum += m;
        }
        let defect = completeness_defect(&sum);
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:e} (tolerance {COMPLETENESS_TOL:e})"
            )));
        }
        Ok(Self { elements })
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_basis(u: &ComplexMatrix) -> Result<Self> {
        let elements = (0..u.ncols())
            .map(|j| {
                let v = u.column(j);
                &v * v.adjoint()
            })
            .collect();
        Self::new(elements)
    }

    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![linalg::identity(dim)],
        }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `P_ρ^M(i) = Tr ρ M_i`.
pub fn measure(rho: &DensityMatrix, povm: &Povm) -> Result<ProbabilityDistribution> {
    linalg::check_same_dim(rho.dim(), povm.dim())?;
    let p = povm
        .elements
        .iter()
        .map(|m| linalg::trace_product(rho.matrix(), m).re)
        .collect();
    ProbabilityDistribution::from_measured(p)
}

/// Spectral projectors of `σ^{-1/2}(σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}`,
/// one per cluster of eigenvalues closer than [`EIGEN_GROUP_GAP`].
pub fn sandwich_pvm(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Povm> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    sigma.require_full_rank()?;
    let g = metric_geometric_mean(rho, sigma)?;
    let eig = eig_hermitian(&g, HERMITIAN_TOL)?;
    let n = eig.dim();
    let mut elements = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || eig.eigenvalues[i] - eig.eigenvalues[i - 1] > EIGEN_GROUP_GAP {
            let mut p = ComplexMatrix::zeros(n, n);
            for j in start..i {
                let v = eig.eigenvectors.column(j);
                p += &v * v.adjoint();
            }
            elements.push(p);
            start = i;
        }
    }
    Povm::new(elements)
}

/// POVM `M_i = Σ_k K_k* P_i K_k` from a random channel into `C^{outcomes}`
/// and a random orthonormal basis `{P_i}` there.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Povm> {
    let mut rng = SeededRng::new(seed);
    random_povm_with(&mut rng, dim, outcomes)
}

pub fn random_povm_with(rng: &mut SeededRng, dim: usize, outcomes: usize) -> Result<Povm> {
    if outcomes == 0 {
        return Err(Error::InvalidShape("POVM needs at least one outcome".into()));
    }
    let kraus_count = dim.div_ceil(outcomes).max(1) + 1;
    let channel = random_channel_with(rng, dim, outcomes, kraus_count)?;
    let basis = random_unitary(rng, outcomes);
    let elements = (0..outcomes)
        .map(|i| {
            let v = basis.column(i);
            let p = &v * v.adjoint();
            let mut m = ComplexMatrix::zeros(dim, dim);
            for k in channel.kraus() {
                m += k.adjoint() * &p * k;
            }
            hermitian_part(&m)
        })
        .collect();
    Povm::new(elements)
}
