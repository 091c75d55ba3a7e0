//! Dense complex linear algebra and Hermitian functional calculus.
//!
//! Every matrix function in the crate goes through a full spectral
//! decomposition `H = U diag(d) U*`; no series expansions are used.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix. Row/column indexing follows `nalgebra`.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Default absolute tolerance on `max |H - H*|` for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

const EIGEN_MAX_ITER: usize = 10_000;

/// Spectral decomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U diag(d) U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|d| d)
    }

    /// `U diag(f(d)) U*` without domain checks.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&d| f(d)).collect();
        self.from_spectrum(&values)
    }

    /// `U diag(values) U*` for an arbitrary real spectrum in this eigenbasis.
    pub fn from_spectrum(&self, values: &[f64]) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        hermitian_part(&(scaled * u.adjoint()))
    }

    /// Like [`HermitianEigen::map`], but fails when `f` is non-finite at an eigenvalue.
    pub fn try_map(&self, name: &'static str, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let mut values = Vec::with_capacity(self.dim());
        for &d in &self.eigenvalues {
            let v = f(d);
            if !v.is_finite() {
                return Err(Error::DomainError {
                    function: name,
                    eigenvalue: d,
                });
            }
            values.push(v);
        }
        Ok(self.from_spectrum(&values))
    }

    /// Function of a strictly positive spectrum; eigenvalues at or below the
    /// support threshold are rejected.
    pub fn map_positive(&self, name: &'static str, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        if let Some(&bad) = self.eigenvalues.iter().find(|&&d| d <= SUPPORT_THRESHOLD) {
            return Err(Error::DomainError {
                function: name,
                eigenvalue: bad,
            });
        }
        self.try_map(name, f)
    }

    /// Rotates `x` into the eigenbasis: `U* x U`.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint() * x * &self.eigenvectors
    }

    /// Rotates `x` out of the eigenbasis: `U x U*`.
    pub fn from_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &self.eigenvectors * x * self.eigenvectors.adjoint()
    }
}

/// Largest absolute entry of `H - H*`.
pub fn hermiticity_defect(h: &ComplexMatrix) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn check_square(h: &ComplexMatrix) -> Result<usize> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(h.nrows())
}

pub(crate) fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    check_square(h)?;
    let defect = hermiticity_defect(h);
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    let sym = hermitian_part(h);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER).ok_or_else(|| {
        Error::ConvergenceFailure(format!(
            "Hermitian eigensolver did not converge within {EIGEN_MAX_ITER} iterations"
        ))
    })?;

    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// `U f(diag d) U*` for Hermitian `h`; fails if `f` is undefined at an eigenvalue.
pub fn apply_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    eig_hermitian(h, HERMITIAN_TOL)?.try_map("f", f)
}

/// Matrix logarithm of a positive definite matrix.
pub fn logm(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    eig_hermitian(h, HERMITIAN_TOL)?.map_positive("log", f64::ln)
}

/// Matrix exponential of a Hermitian matrix.
pub fn expm(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    eig_hermitian(h, HERMITIAN_TOL)?.try_map("exp", f64::exp)
}

/// Real power of a positive definite matrix.
pub fn powm(h: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    eig_hermitian(h, HERMITIAN_TOL)?.map_positive("pow", |d| d.powf(p))
}

/// `(X + X*) / 2`.
pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn from_real_diagonal(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(d[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Builds a matrix from row-major real and imaginary parts.
pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let rows = re.len();
    if im.len() != rows {
        return Err(Error::InvalidShape(format!(
            "real part has {rows} rows, imaginary part has {}",
            im.len()
        )));
    }
    let cols = re.first().map_or(0, Vec::len);
    for (r, i) in re.iter().zip(im) {
        if r.len() != cols || i.len() != cols {
            return Err(Error::InvalidShape("ragged matrix rows".into()));
        }
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(re[i][j], im[i][j])
    }))
}

/// Row-major real and imaginary parts.
pub fn to_parts(m: &ComplexMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    real_matrix(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z])
}

pub fn pauli_z() -> ComplexMatrix {
    real_matrix(2, &[1.0, 0.0, 0.0, -1.0])
}

/// Square real matrix from row-major entries.
pub fn real_matrix(n: usize, rows: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i * n + j], 0.0))
}

/// Generalized Gell-Mann matrices: an orthogonal basis of traceless
/// Hermitian `n×n` matrices with `Tr(G_a G_b) = 2 δ_ab`.
pub fn gell_mann_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n - 1);
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(j, k)] = one;
            sym[(k, j)] = one;
            basis.push(sym);
            let mut anti = ComplexMatrix::zeros(n, n);
            anti[(j, k)] = -i_unit;
            anti[(k, j)] = i_unit;
            basis.push(anti);
        }
    }
    for l in 1..n {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; n];
        for d in diag.iter_mut().take(l) {
            *d = scale;
        }
        diag[l] = -(l as f64) * scale;
        basis.push(from_real_diagonal(&diag));
    }
    basis
}
