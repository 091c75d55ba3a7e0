//! Divergence functionals: quantum relative entropy, the Belavkin–Staszewski
//! divergence, e- and m-path divergences, and the quantum moment function
//! viewed as a convex potential.

pub mod classical;

use crate::error::Result;
use crate::linalg::{self, hermitian_part, trace_product, ComplexMatrix, HERMITIAN_TOL};
use crate::metrics::{self, MetricKind};
use crate::quadrature::{integrate_unit, QuadratureConfig, QuadratureEstimate};
use crate::states::DensityMatrix;
use crate::transport::{metric_geometric_mean, solve_direction, GeodesicKind};

pub use classical::{
    bregman_divergence, bregman_integral_form, bregman_max_form, classical_kl,
    legendre_transform, ConvexFunctionModel, LegendreConfig, LegendrePoint,
};

/// `Tr ρ log ρ` with `0 log 0 = 0`.
fn neg_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .iter()
        .filter(|&&d| d > 0.0)
        .map(|&d| d * d.ln())
        .sum()
}

/// `D(ρ‖σ) = Tr ρ (log ρ − log σ)`; `ρ` may be rank-deficient.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    sigma.require_full_rank()?;
    let cross = trace_product(rho.matrix(), &sigma.log()?).re;
    Ok(neg_entropy(rho) - cross)
}

/// `D̄(ρ‖σ) = Tr ρ log(ρ^{1/2} σ^{-1} ρ^{1/2})`.
pub fn bs_divergence(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    let sqrt = rho.pow(0.5)?;
    let inner = hermitian_part(&(&sqrt * sigma.pow(-1.0)? * &sqrt));
    let log = linalg::eig_hermitian(&inner, HERMITIAN_TOL)?.map_positive("log", f64::ln)?;
    Ok(trace_product(rho.matrix(), &log).re)
}

/// `Tr A W log W` for positive definite `W`.
fn trace_with_w_log_w(a: &ComplexMatrix, w: &ComplexMatrix) -> Result<f64> {
    let eig = linalg::eig_hermitian(&hermitian_part(w), HERMITIAN_TOL)?;
    let w_log_w = eig.map_positive("log", |d| d * d.ln())?;
    Ok(trace_product(a, &w_log_w).re)
}

/// Closed form of `D^{(e)}_x(ρ‖σ)` for the four geodesic kinds.
///
/// ```text
/// s    : 2 Tr ρ log G,  G = σ^{-1/2}(σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}
/// b    : D(ρ‖σ)
/// r    : D̄(ρ‖σ)
/// half : 2 Tr σ^{1/4} ρ^{1/2} σ^{1/4} W log W,  W = σ^{-1/4} ρ^{1/2} σ^{-1/4}
/// ```
pub fn e_divergence_closed(kind: GeodesicKind, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    match kind {
        GeodesicKind::Sld => {
            let g = metric_geometric_mean(rho, sigma)?;
            let log_g = linalg::eig_hermitian(&g, HERMITIAN_TOL)?.map_positive("log", f64::ln)?;
            Ok(2.0 * trace_product(rho.matrix(), &log_g).re)
        }
        GeodesicKind::Bogoljubov => quantum_relative_entropy(rho, sigma),
        GeodesicKind::Rld => bs_divergence(rho, sigma),
        GeodesicKind::Half => {
            let quarter = sigma.pow(0.25)?;
            let inv_quarter = sigma.pow(-0.25)?;
            let root = rho.pow(0.5)?;
            let w = &inv_quarter * &root * &inv_quarter;
            let a = &quarter * &root * &quarter;
            Ok(2.0 * trace_with_w_log_w(&a, &w)?)
        }
    }
}

/// `D^{(e)}_x(ρ‖σ) = ∫₀¹ J_{θ,x} θ dθ` along the e-geodesic from `σ` (θ = 0)
/// to `ρ` (θ = 1), with `J_{θ,x}` the exact Fisher information of the family.
pub fn e_divergence_quadrature(
    kind: GeodesicKind,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    config: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    config.validate()?;
    let geodesic = solve_direction(kind, rho, sigma)?;
    integrate_unit(|theta| Ok(geodesic.fisher_info(theta)? * theta), config)
}

/// `D^{(m)}_x(ρ‖σ) = ∫₀¹ J_{t,x} t dt` along `(1 − t)ρ + tσ`.
pub fn m_divergence(
    x: &MetricKind,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    config: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    config.validate()?;
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    integrate_unit(
        |t| Ok(metrics::fisher_info_mixture(rho, sigma, x, t)? * t),
        config,
    )
}

/// `μ(θ) = log Tr exp(log σ + Σ_i θ^i X_i)` as a convex potential, with the
/// analytic gradient `Tr ρ_θ X_i` and the Bogoljubov Fisher matrix as Hessian.
pub fn quantum_moment_model(sigma: &DensityMatrix, basis: Vec<ComplexMatrix>) -> Result<ConvexFunctionModel> {
    sigma.require_full_rank()?;
    for b in &basis {
        linalg::check_square(b)?;
        linalg::check_same_dim(sigma.dim(), b.nrows())?;
    }
    let log_sigma = sigma.log()?;
    let k = basis.len();
    let exponent = {
        let basis = basis.clone();
        move |theta: &[f64]| -> ComplexMatrix {
            let mut h = log_sigma.clone();
            for (t, x) in theta.iter().zip(&basis) {
                h += x.scale(*t);
            }
            hermitian_part(&h)
        }
    };
    let exponent = std::sync::Arc::new(exponent);
    let value = {
        let exponent = exponent.clone();
        move |theta: &[f64]| -> Result<f64> {
            let eig = linalg::eig_hermitian(&exponent(theta), HERMITIAN_TOL)?;
            let m = eig.max_eigenvalue();
            let z: f64 = eig.eigenvalues.iter().map(|d| (d - m).exp()).sum();
            Ok(m + z.ln())
        }
    };
    let state = {
        let exponent = exponent.clone();
        move |theta: &[f64]| -> Result<DensityMatrix> {
            let eig = linalg::eig_hermitian(&exponent(theta), HERMITIAN_TOL)?;
            let m = eig.max_eigenvalue();
            let w: Vec<f64> = eig.eigenvalues.iter().map(|d| (d - m).exp()).collect();
            let z: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|x| x / z).collect();
            DensityMatrix::from_spectrum(&eig.eigenvectors, &p)
        }
    };
    let state = std::sync::Arc::new(state);
    let gradient = {
        let state = state.clone();
        let basis = basis.clone();
        move |theta: &[f64]| -> Result<Vec<f64>> {
            let rho = state(theta)?;
            Ok(basis.iter().map(|x| trace_product(rho.matrix(), x).re).collect())
        }
    };
    let hessian = move |theta: &[f64]| -> Result<Vec<Vec<f64>>> {
        let rho = state(theta)?;
        let n = rho.dim();
        let centred: Vec<ComplexMatrix> = basis
            .iter()
            .map(|x| x - linalg::identity(n).scale(trace_product(rho.matrix(), x).re))
            .collect();
        let mut h = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i..k {
                let v = metrics::e_inner(&rho, &MetricKind::Bogoljubov, &centred[i], &centred[j])?.re;
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        Ok(h)
    };
    Ok(ConvexFunctionModel::new(k, value)
        .with_gradient(gradient)
        .with_hessian(hessian))
}

/// Normalized member `exp(log σ + Σ θ^i X_i)/Z` of the Bogoljubov exponential family.
pub fn quantum_exponential_state(
    sigma: &DensityMatrix,
    basis: &[ComplexMatrix],
    theta: &[f64],
) -> Result<DensityMatrix> {
    let mut h = sigma.log()?;
    for (t, x) in theta.iter().zip(basis) {
        h += x.scale(*t);
    }
    let eig = linalg::eig_hermitian(&hermitian_part(&h), HERMITIAN_TOL)?;
    let m = eig.max_eigenvalue();
    let w: Vec<f64> = eig.eigenvalues.iter().map(|d| (d - m).exp()).collect();
    let z: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / z).collect();
    DensityMatrix::from_spectrum(&eig.eigenvectors, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, tensor_product};
    use crate::rng::SeededRng;
    use crate::states::{codiagonal_pair, max_mixed, random_density_with, validate_density};

    fn kl(p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| a * (a / b).ln())
            .sum()
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let d = quantum_relative_entropy(&rho, &max_mixed(2)).unwrap();
        let expected = 0.7 * 1.4f64.ln() + 0.3 * 0.6f64.ln();
        assert!((d - expected).abs() < 1e-14);
        assert!((d - 0.082282878505).abs() < 1e-11);
        assert_eq!(quantum_relative_entropy(&rho, &rho).unwrap().abs() < 1e-15, true);
    }

    #[test]
    fn relative_entropy_rank_deficient_rho() {
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let d = quantum_relative_entropy(&pure, &max_mixed(2)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-14);
        assert!(quantum_relative_entropy(&max_mixed(2), &pure).is_err());
        assert!(bs_divergence(&pure, &max_mixed(2)).is_err());
    }

    #[test]
    fn relative_entropy_tensor_additivity() {
        let mut rng = SeededRng::new(20);
        let rho = random_density_with(&mut rng, 2, 0.02);
        let sigma = random_density_with(&mut rng, 2, 0.02);
        let rr = validate_density(&tensor_product(rho.matrix(), rho.matrix()), 1e-10).unwrap();
        let ss = validate_density(&tensor_product(sigma.matrix(), sigma.matrix()), 1e-10).unwrap();
        let d = quantum_relative_entropy(&rho, &sigma).unwrap();
        assert!((quantum_relative_entropy(&rr, &ss).unwrap() - 2.0 * d).abs() < 1e-9);
    }

    #[test]
    fn commuting_pairs_reduce_to_classical_kl() {
        let mut rng = SeededRng::new(21);
        let cfg = QuadratureConfig::default();
        for dim in 2..=4 {
            let (rho, sigma, p, q) = codiagonal_pair(&mut rng, dim, 0.02).unwrap();
            let expected = kl(&p, &q);
            assert!((quantum_relative_entropy(&rho, &sigma).unwrap() - expected).abs() < 1e-10);
            assert!((bs_divergence(&rho, &sigma).unwrap() - expected).abs() < 1e-10);
            for kind in GeodesicKind::ALL {
                let v = e_divergence_closed(kind, &rho, &sigma).unwrap();
                assert!((v - expected).abs() < 1e-10, "{kind}");
                let m = m_divergence(&kind.metric(), &rho, &sigma, &cfg).unwrap();
                assert!((m.value - expected).abs() < 1e-10, "m {kind}");
            }
        }
    }

    #[test]
    fn identical_states_give_zero() {
        let mut rng = SeededRng::new(22);
        let rho = random_density_with(&mut rng, 3, 0.02);
        let cfg = QuadratureConfig::default();
        assert!(bs_divergence(&rho, &rho).unwrap().abs() < 1e-12);
        for kind in GeodesicKind::ALL {
            assert!(e_divergence_closed(kind, &rho, &rho).unwrap().abs() < 1e-12);
            assert!(e_divergence_quadrature(kind, &rho, &rho, &cfg).unwrap().value.abs() < 1e-12);
            assert!(m_divergence(&kind.metric(), &rho, &rho, &cfg).unwrap().value.abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let mut rng = SeededRng::new(23);
        let cfg = QuadratureConfig::default();
        for dim in 2..=3 {
            for _ in 0..4 {
                let rho = random_density_with(&mut rng, dim, 0.02);
                let sigma = random_density_with(&mut rng, dim, 0.02);
                for kind in GeodesicKind::ALL {
                    let closed = e_divergence_closed(kind, &rho, &sigma).unwrap();
                    let quad = e_divergence_quadrature(kind, &rho, &sigma, &cfg).unwrap().value;
                    let tol = 1e-6f64.max(1e-5 * closed.abs());
                    assert!((closed - quad).abs() < tol, "{kind}: {closed} vs {quad}");
                }
            }
        }
    }

    #[test]
    fn m_divergence_identities() {
        let mut rng = SeededRng::new(24);
        let cfg = QuadratureConfig::default();
        for _ in 0..5 {
            let rho = random_density_with(&mut rng, 3, 0.02);
            let sigma = random_density_with(&mut rng, 3, 0.02);
            let d = quantum_relative_entropy(&rho, &sigma).unwrap();
            let dbar = bs_divergence(&rho, &sigma).unwrap();
            let mb = m_divergence(&MetricKind::Bogoljubov, &rho, &sigma, &cfg).unwrap().value;
            let mr = m_divergence(&MetricKind::Rld, &rho, &sigma, &cfg).unwrap().value;
            assert!((mb - d).abs() < 1e-6);
            assert!((mr - dbar).abs() < 1e-6);
        }
    }

    #[test]
    fn half_closed_form_against_direct_moment() {
        // The half family's D^(e) is μ'(1)·1 − μ(1) + μ(0) = μ'(1); compare the
        // closed form with the exact slope of the moment function at θ = 1.
        let mut rng = SeededRng::new(25);
        let rho = random_density_with(&mut rng, 3, 0.03);
        let sigma = random_density_with(&mut rng, 3, 0.03);
        for kind in GeodesicKind::ALL {
            let g = solve_direction(kind, &rho, &sigma).unwrap();
            let slope = g.moment_slope(1.0).unwrap();
            let closed = e_divergence_closed(kind, &rho, &sigma).unwrap();
            assert!((slope - closed).abs() < 1e-9, "{kind}");
        }
    }

    #[test]
    fn quantum_moment_model_is_consistent() {
        let mut rng = SeededRng::new(26);
        let sigma = random_density_with(&mut rng, 2, 0.05);
        let basis = linalg::gell_mann_basis(2);
        let model = quantum_moment_model(&sigma, basis.clone()).unwrap();
        let theta = [0.3, -0.2, 0.5];
        assert!(model.value(&[0.0, 0.0, 0.0]).unwrap().abs() < 1e-12);
        let g = model.gradient(&theta).unwrap();
        let fd = model.gradient_numeric(&theta).unwrap();
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-7);
        }
        let h = model.hessian(&theta).unwrap();
        let hfd = model.hessian_numeric(&theta).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[i][j] - hfd[i][j]).abs() < 1e-6);
            }
        }
        let state = quantum_exponential_state(&sigma, &basis, &theta).unwrap();
        let direct = linalg::expm(&(sigma.log().unwrap()
            + basis[0].scale(0.3)
            + basis[1].scale(-0.2)
            + basis[2].scale(0.5)))
        .unwrap();
        let direct = direct.unscale(linalg::trace(&direct).re);
        assert!(frobenius_norm(&(state.matrix() - direct)) < 1e-12);
    }
}
