//! e-parallel transport along closed-form exponential families, their
//! moment functions, the direction solver that aims a geodesic at a target
//! state, and the mixture (m) geodesic.
//!
//! For a base state `σ` and Hermitian direction `L` the four families are
//!
//! ```text
//! s    : e^{θL/2} σ e^{θL/2}
//! b    : exp(log σ + θL)
//! r    : σ^{1/2} e^{θ L_r} σ^{1/2}
//! half : σ^{1/4} e^{θ L_h/2} σ^{1/2} e^{θ L_h/2} σ^{1/4}
//! ```
//!
//! each divided by `e^{μ_x(θ)}`, its trace. `L_r` and `L_h` are the
//! auxiliary directions tied to `L` through
//! `L = (σ^{-p} A σ^{p} + σ^{p} A σ^{-p})/2` with `p = 1/2` and `p = 1/4`.
//! Normalization is carried out in log-space so large `|θ|` cannot overflow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, frobenius_norm, hermitian_part, ComplexMatrix, HermitianEigen,
    HERMITIAN_TOL,
};
use crate::metrics::{self, MetricKind};
use crate::states::{validate_density, DensityMatrix};

/// Round-trip tolerance for [`solve_direction`].
pub const TARGET_TOL: f64 = 1e-8;

/// Base step for first derivatives of the moment function.
pub const FIRST_DERIVATIVE_STEP: f64 = 1e-4;

/// Base step for second derivatives of the moment function.
pub const SECOND_DERIVATIVE_STEP: f64 = 1e-3;

/// The four metrics with closed-form e-geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicKind {
    #[serde(rename = "s")]
    Sld,
    #[serde(rename = "b")]
    Bogoljubov,
    #[serde(rename = "r")]
    Rld,
    Half,
}

impl GeodesicKind {
    pub const ALL: [GeodesicKind; 4] = [
        GeodesicKind::Sld,
        GeodesicKind::Bogoljubov,
        GeodesicKind::Rld,
        GeodesicKind::Half,
    ];

    pub fn metric(self) -> MetricKind {
        match self {
            GeodesicKind::Sld => MetricKind::Sld,
            GeodesicKind::Bogoljubov => MetricKind::Bogoljubov,
            GeodesicKind::Rld => MetricKind::Rld,
            GeodesicKind::Half => MetricKind::half(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GeodesicKind::Sld => "s",
            GeodesicKind::Bogoljubov => "b",
            GeodesicKind::Rld => "r",
            GeodesicKind::Half => "half",
        }
    }

    /// Inverse of [`GeodesicKind::metric`].
    pub fn from_metric(x: &MetricKind) -> Option<Self> {
        match x {
            MetricKind::Sld => Some(GeodesicKind::Sld),
            MetricKind::Bogoljubov => Some(GeodesicKind::Bogoljubov),
            MetricKind::Rld => Some(GeodesicKind::Rld),
            MetricKind::Lambda(l) if *l == 0.5 => Some(GeodesicKind::Half),
            _ => None,
        }
    }
}

impl fmt::Display for GeodesicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GeodesicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s" | "sld" => Ok(GeodesicKind::Sld),
            "b" | "bogoljubov" => Ok(GeodesicKind::Bogoljubov),
            "r" | "rld" => Ok(GeodesicKind::Rld),
            "half" | "1/2" | "lambda=0.5" => Ok(GeodesicKind::Half),
            other => Err(Error::InvalidParameter(format!(
                "no closed-form e-geodesic for metric {other:?} (expected s, b, r or half)"
            ))),
        }
    }
}

/// Precomputed pieces of a geodesic, per kind.
#[derive(Debug, Clone)]
enum Family {
    Sld {
        direction: HermitianEigen,
    },
    Bogoljubov {
        log_base: ComplexMatrix,
    },
    Rld {
        auxiliary: HermitianEigen,
        sqrt_base: ComplexMatrix,
        /// `σ^{-1/2} L_r σ^{1/2}`, the (non-Hermitian) RLD score at θ = 0.
        score: ComplexMatrix,
    },
    Half {
        auxiliary: HermitianEigen,
        quarter_base: ComplexMatrix,
        sqrt_base: ComplexMatrix,
    },
}

/// An e-geodesic `θ ↦ Π^θ_{L,x} σ` through a full-rank base state.
#[derive(Debug, Clone)]
pub struct Geodesic {
    kind: GeodesicKind,
    base: DensityMatrix,
    direction: ComplexMatrix,
    auxiliary: Option<ComplexMatrix>,
    family: Family,
}

impl Geodesic {
    /// Geodesic through `base` with Hermitian direction `direction`; the
    /// auxiliary direction for `r` and `half` is solved here.
    pub fn new(kind: GeodesicKind, base: DensityMatrix, direction: ComplexMatrix) -> Result<Self> {
        base.require_full_rank()?;
        linalg::check_square(&direction)?;
        linalg::check_same_dim(base.dim(), direction.nrows())?;
        let defect = linalg::hermiticity_defect(&direction);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                defect,
                tol: HERMITIAN_TOL,
            });
        }
        let direction = hermitian_part(&direction);
        let auxiliary = match kind {
            GeodesicKind::Rld | GeodesicKind::Half => {
                Some(solve_auxiliary_direction(kind, &base, &direction)?)
            }
            _ => None,
        };
        Self::assemble(kind, base, direction, auxiliary)
    }

    fn assemble(
        kind: GeodesicKind,
        base: DensityMatrix,
        direction: ComplexMatrix,
        auxiliary: Option<ComplexMatrix>,
    ) -> Result<Self> {
        let family = match kind {
            GeodesicKind::Sld => Family::Sld {
                direction: eig_hermitian(&direction, HERMITIAN_TOL)?,
            },
            GeodesicKind::Bogoljubov => Family::Bogoljubov {
                log_base: base.log()?,
            },
            GeodesicKind::Rld => {
                let aux = auxiliary.as_ref().expect("r geodesic carries L_r");
                let sqrt_base = base.pow(0.5)?;
                let inv_sqrt = base.pow(-0.5)?;
                Family::Rld {
                    auxiliary: eig_hermitian(aux, HERMITIAN_TOL)?,
                    score: &inv_sqrt * aux * &sqrt_base,
                    sqrt_base,
                }
            }
            GeodesicKind::Half => {
                let aux = auxiliary.as_ref().expect("half geodesic carries L_h");
                Family::Half {
                    auxiliary: eig_hermitian(aux, HERMITIAN_TOL)?,
                    quarter_base: base.pow(0.25)?,
                    sqrt_base: base.pow(0.5)?,
                }
            }
        };
        Ok(Self {
            kind,
            base,
            direction,
            auxiliary,
            family,
        })
    }

    pub fn kind(&self) -> GeodesicKind {
        self.kind
    }

    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    /// The Hermitian direction `L`.
    pub fn direction(&self) -> &ComplexMatrix {
        &self.direction
    }

    /// `L_r` for kind `r`, `L_h` for kind `half`.
    pub fn auxiliary(&self) -> Option<&ComplexMatrix> {
        self.auxiliary.as_ref()
    }

    /// Frobenius residual of the relation tying `L` to its auxiliary direction.
    pub fn auxiliary_residual(&self) -> Result<f64> {
        let Some(aux) = &self.auxiliary else {
            return Ok(0.0);
        };
        let p = if self.kind == GeodesicKind::Rld { 0.5 } else { 0.25 };
        let rebuilt = conjugate_average(&self.base, aux, p)?;
        Ok(frobenius_norm(&(rebuilt - &self.direction)))
    }

    /// Unnormalized transported matrix scaled by `e^{-shift}`.
    fn unnormalized(&self, theta: f64) -> Result<(ComplexMatrix, f64)> {
        match &self.family {
            Family::Sld { direction } => {
                let (half_exp, shift) = shifted_exp(direction, 0.5 * theta);
                let m = &half_exp * self.base.matrix() * &half_exp;
                Ok((m, 2.0 * shift))
            }
            Family::Bogoljubov { log_base } => {
                let exponent = log_base + self.direction.scale(theta);
                let eig = eig_hermitian(&hermitian_part(&exponent), HERMITIAN_TOL)?;
                let (m, shift) = shifted_exp(&eig, 1.0);
                Ok((m, shift))
            }
            Family::Rld {
                auxiliary,
                sqrt_base,
                ..
            } => {
                let (e, shift) = shifted_exp(auxiliary, theta);
                Ok((sqrt_base * e * sqrt_base, shift))
            }
            Family::Half {
                auxiliary,
                quarter_base,
                sqrt_base,
            } => {
                let (e, shift) = shifted_exp(auxiliary, 0.5 * theta);
                let m = quarter_base * &e * sqrt_base * &e * quarter_base;
                Ok((m, 2.0 * shift))
            }
        }
    }

    /// `Π^θ_{L,x} σ`.
    pub fn state_at(&self, theta: f64) -> Result<DensityMatrix> {
        if theta == 0.0 {
            return Ok(self.base.clone());
        }
        let (m, _) = self.unnormalized(theta)?;
        let tr = linalg::trace(&m).re;
        let state = hermitian_part(&m).unscale(tr);
        validate_density(&state, 1e-9)
    }

    /// `μ_x(θ) = log Tr` of the unnormalized family.
    pub fn moment(&self, theta: f64) -> Result<f64> {
        if theta == 0.0 {
            return Ok(0.0);
        }
        let (m, shift) = self.unnormalized(theta)?;
        Ok(linalg::trace(&m).re.ln() + shift)
    }

    /// The operator `K` whose centred version is the e-representation of
    /// the tangent: `dρ/dθ = E_{ρ,x}(K − Tr ρK)`. Equal to `L` except for
    /// `r`, where it is `σ^{-1/2} L_r σ^{1/2}`.
    pub fn score(&self) -> &ComplexMatrix {
        match &self.family {
            Family::Rld { score, .. } => score,
            _ => &self.direction,
        }
    }

    /// State and exact m-representation tangent `dρ_θ/dθ`.
    pub fn tangent(&self, theta: f64) -> Result<(DensityMatrix, ComplexMatrix)> {
        let rho = self.state_at(theta)?;
        let k = self.score();
        let slope = linalg::trace_product(rho.matrix(), k).re;
        let n = rho.dim();
        let centred = k - linalg::identity(n).scale(slope);
        let d = metrics::e_to_m(&rho, &self.kind.metric(), &centred)?;
        Ok((rho, d))
    }

    /// Exact first derivative of the moment function, `Tr ρ_θ K`.
    pub fn moment_slope(&self, theta: f64) -> Result<f64> {
        let rho = self.state_at(theta)?;
        Ok(linalg::trace_product(rho.matrix(), self.score()).re)
    }

    /// Fisher information `J_{θ,x}` of the family, from the exact tangent.
    pub fn fisher_info(&self, theta: f64) -> Result<f64> {
        let (rho, d) = self.tangent(theta)?;
        metrics::m_norm_sq(&rho, &self.kind.metric(), &d)
    }
}

/// `exp(scale · H)` divided by `e^{max eigenvalue of scale·H}`, and that shift.
fn shifted_exp(eig: &HermitianEigen, scale: f64) -> (ComplexMatrix, f64) {
    let scaled: Vec<f64> = eig.eigenvalues.iter().map(|&d| scale * d).collect();
    let shift = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let values: Vec<f64> = scaled.iter().map(|&v| (v - shift).exp()).collect();
    (eig.from_spectrum(&values), shift)
}

/// `(σ^{-p} A σ^{p} + σ^{p} A σ^{-p})/2`.
fn conjugate_average(sigma: &DensityMatrix, a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let plus = sigma.pow(p)?;
    let minus = sigma.pow(-p)?;
    let left = &minus * a * &plus;
    Ok(hermitian_part(&left))
}

/// Solves `L = (σ^{-p} A σ^{p} + σ^{p} A σ^{-p})/2` for Hermitian `A`
/// (`p = 1/2` for `r`, `p = 1/4` for `half`). In σ's eigenbasis this is
/// entrywise division by `((d_j/d_i)^p + (d_i/d_j)^p)/2`.
pub fn solve_auxiliary_direction(
    kind: GeodesicKind,
    sigma: &DensityMatrix,
    direction: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    sigma.require_full_rank()?;
    linalg::check_square(direction)?;
    linalg::check_same_dim(sigma.dim(), direction.nrows())?;
    let p = match kind {
        GeodesicKind::Rld => 0.5,
        GeodesicKind::Half => 0.25,
        other => {
            return Err(Error::InvalidParameter(format!(
                "kind {other} has no auxiliary direction"
            )))
        }
    };
    let eig = sigma.eigen();
    let d = &eig.eigenvalues;
    let mut rotated = eig.to_eigenbasis(direction);
    for i in 0..d.len() {
        for j in 0..d.len() {
            let weight = 0.5 * ((d[j] / d[i]).powf(p) + (d[i] / d[j]).powf(p));
            rotated[(i, j)] /= weight;
        }
    }
    Ok(hermitian_part(&eig.from_eigenbasis(&rotated)))
}

/// `Π^θ_{L,x} σ`.
pub fn e_transport(g: &Geodesic, theta: f64) -> Result<DensityMatrix> {
    g.state_at(theta)
}

/// `μ_x(θ)`.
pub fn moment_value(g: &Geodesic, theta: f64) -> Result<f64> {
    g.moment(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Central-difference derivative of `μ_x` with one Richardson level.
pub fn moment_derivative(g: &Geodesic, theta: f64, order: DerivativeOrder) -> Result<f64> {
    let mu = |t: f64| g.moment(t);
    match order {
        DerivativeOrder::First => {
            let d = |h: f64| -> Result<f64> { Ok((mu(theta + h)? - mu(theta - h)?) / (2.0 * h)) };
            let h = FIRST_DERIVATIVE_STEP;
            let coarse = d(h)?;
            let fine = d(0.5 * h)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
        DerivativeOrder::Second => {
            let centre = mu(theta)?;
            let d2 = |h: f64| -> Result<f64> {
                Ok((mu(theta + h)? - 2.0 * centre + mu(theta - h)?) / (h * h))
            };
            let h = SECOND_DERIVATIVE_STEP;
            let coarse = d2(h)?;
            let fine = d2(0.5 * h)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
    }
}

/// Geodesic through `σ` reaching `ρ` at `θ = 1`.
///
/// ```text
/// s    : L = 2 log G,  G = σ^{-1/2}(σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}
/// b    : L = log ρ − log σ
/// r    : L_r = log(σ^{-1/2} ρ σ^{-1/2})
/// half : L_h = 2 log(σ^{-1/4} ρ^{1/2} σ^{-1/4})
/// ```
///
/// The result is checked by transporting to θ = 1.
pub fn solve_direction(kind: GeodesicKind, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Geodesic> {
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    let geodesic = match kind {
        GeodesicKind::Sld => {
            let g = metric_geometric_mean(rho, sigma)?;
            let l = linalg::logm(&g)?.scale(2.0);
            Geodesic::assemble(kind, sigma.clone(), l, None)?
        }
        GeodesicKind::Bogoljubov => {
            let l = hermitian_part(&(rho.log()? - sigma.log()?));
            Geodesic::assemble(kind, sigma.clone(), l, None)?
        }
        GeodesicKind::Rld => {
            let inv_sqrt = sigma.pow(-0.5)?;
            let inner = hermitian_part(&(&inv_sqrt * rho.matrix() * &inv_sqrt));
            let aux = linalg::logm(&inner)?;
            let l = conjugate_average(sigma, &aux, 0.5)?;
            Geodesic::assemble(kind, sigma.clone(), l, Some(aux))?
        }
        GeodesicKind::Half => {
            let inv_quarter = sigma.pow(-0.25)?;
            let inner = hermitian_part(&(&inv_quarter * rho.pow(0.5)? * &inv_quarter));
            let aux = linalg::logm(&inner)?.scale(2.0);
            let l = conjugate_average(sigma, &aux, 0.25)?;
            Geodesic::assemble(kind, sigma.clone(), l, Some(aux))?
        }
    };
    let reached = geodesic.state_at(1.0)?;
    let defect = frobenius_norm(&(reached.matrix() - rho.matrix()));
    if !(defect <= TARGET_TOL) {
        return Err(Error::TargetMismatch {
            defect,
            tol: TARGET_TOL,
        });
    }
    Ok(geodesic)
}

/// `G = σ^{-1/2}(σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}`, the positive solution of `GσG = ρ`.
pub fn metric_geometric_mean(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ComplexMatrix> {
    let sqrt = sigma.pow(0.5)?;
    let inv_sqrt = sigma.pow(-0.5)?;
    let inner = hermitian_part(&(&sqrt * rho.matrix() * &sqrt));
    let root = linalg::eig_hermitian(&inner, HERMITIAN_TOL)?.map(|d| d.max(0.0).sqrt());
    Ok(hermitian_part(&(&inv_sqrt * root * &inv_sqrt)))
}

/// `(1 − t)ρ + tσ`.
pub fn m_geodesic(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    DensityMatrix::mix(rho, sigma, t)
}

/// `‖Π^{θ2}_{L2} Π^{θ1}_{L1} σ − Π^{θ1}_{L1} Π^{θ2}_{L2} σ‖_F`.
pub fn transport_commutation_defect(
    kind: GeodesicKind,
    sigma: &DensityMatrix,
    l1: &ComplexMatrix,
    l2: &ComplexMatrix,
    theta1: f64,
    theta2: f64,
) -> Result<f64> {
    let first_one = Geodesic::new(kind, sigma.clone(), l1.clone())?.state_at(theta1)?;
    let one_then_two = Geodesic::new(kind, first_one, l2.clone())?.state_at(theta2)?;
    let first_two = Geodesic::new(kind, sigma.clone(), l2.clone())?.state_at(theta2)?;
    let two_then_one = Geodesic::new(kind, first_two, l1.clone())?.state_at(theta1)?;
    Ok(frobenius_norm(&(one_then_two.matrix() - two_then_one.matrix())))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_diagonal, identity, pauli_x, pauli_z, tensor_product};
    use crate::rng::SeededRng;
    use crate::states::{max_mixed, random_density_with, random_hermitian};

    fn diag73() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap()
    }

    #[test]
    fn auxiliary_direction_examples() {
        let mut rng = SeededRng::new(1);
        let l = random_hermitian(&mut rng, 3);
        for kind in [GeodesicKind::Rld, GeodesicKind::Half] {
            let aux = solve_auxiliary_direction(kind, &max_mixed(3), &l).unwrap();
            assert!(frobenius_norm(&(aux - &l)) < 1e-14);
            let diag = from_real_diagonal(&[0.3, -1.0]);
            let aux = solve_auxiliary_direction(kind, &diag73(), &diag).unwrap();
            assert!(frobenius_norm(&(aux - &diag)) < 1e-14);
        }
        let aux = solve_auxiliary_direction(GeodesicKind::Rld, &diag73(), &pauli_x()).unwrap();
        let factor = 2.0 / ((3.0f64 / 7.0).sqrt() + (7.0f64 / 3.0).sqrt());
        assert!((aux[(0, 1)].re - factor).abs() < 1e-14);
        assert!((factor - 0.9165).abs() < 1e-4);
        assert!(solve_auxiliary_direction(GeodesicKind::Sld, &diag73(), &pauli_x()).is_err());
    }

    #[test]
    fn auxiliary_relation_holds_on_random_inputs() {
        let mut rng = SeededRng::new(8);
        for _ in 0..20 {
            let sigma = random_density_with(&mut rng, 4, 0.01);
            let l = random_hermitian(&mut rng, 4);
            for kind in [GeodesicKind::Rld, GeodesicKind::Half] {
                let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
                assert!(g.auxiliary_residual().unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn theta_zero_is_base() {
        let mut rng = SeededRng::new(2);
        let sigma = random_density_with(&mut rng, 3, 0.02);
        let l = random_hermitian(&mut rng, 3);
        for kind in GeodesicKind::ALL {
            let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
            assert_eq!(e_transport(&g, 0.0).unwrap().matrix(), sigma.matrix());
            assert_eq!(moment_value(&g, 0.0).unwrap(), 0.0);
            // The unnormalized family also has unit trace at θ = 0.
            let (m, shift) = g.unnormalized(0.0).unwrap();
            assert!((linalg::trace(&m).re.ln() + shift).abs() < 1e-12);
        }
    }

    #[test]
    fn sld_moment_for_identity_direction() {
        let g = Geodesic::new(GeodesicKind::Sld, max_mixed(2), identity(2)).unwrap();
        for theta in [-2.0, 0.5, 3.0] {
            assert!((g.moment(theta).unwrap() - theta).abs() < 1e-13);
        }
        let slope = moment_derivative(&g, 0.7, DerivativeOrder::First).unwrap();
        assert!((slope - 1.0).abs() < 1e-8);
    }

    #[test]
    fn commuting_case_is_classical_exponential_family() {
        let p = [0.5, 0.3, 0.2];
        let x = [1.0, -0.5, 2.0];
        let sigma = DensityMatrix::from_diagonal(&p).unwrap();
        let l = from_real_diagonal(&x);
        for theta in [-1.0, 0.4, 1.3] {
            let z: f64 = p.iter().zip(&x).map(|(pi, xi)| pi * (theta * xi).exp()).sum();
            let expected: Vec<f64> = p
                .iter()
                .zip(&x)
                .map(|(pi, xi)| pi * (theta * xi).exp() / z)
                .collect();
            for kind in GeodesicKind::ALL {
                let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
                let state = g.state_at(theta).unwrap();
                let diff = frobenius_norm(&(state.matrix() - from_real_diagonal(&expected)));
                assert!(diff < 1e-12, "{kind}");
                assert!((g.moment(theta).unwrap() - z.ln()).abs() < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn large_theta_does_not_overflow() {
        let mut rng = SeededRng::new(3);
        let sigma = random_density_with(&mut rng, 3, 0.05);
        let l = random_hermitian(&mut rng, 3).scale(50.0);
        for kind in GeodesicKind::ALL {
            let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
            let mu = g.moment(40.0).unwrap();
            assert!(mu.is_finite() && mu > 100.0, "{kind}: {mu}");
            let state = g.state_at(40.0).unwrap();
            assert!((linalg::trace(state.matrix()).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_direction_round_trip() {
        let mut rng = SeededRng::new(4);
        for dim in 2..=4 {
            for _ in 0..10 {
                let rho = random_density_with(&mut rng, dim, 0.01);
                let sigma = random_density_with(&mut rng, dim, 0.01);
                for kind in GeodesicKind::ALL {
                    let g = solve_direction(kind, &rho, &sigma).unwrap();
                    let reached = g.state_at(1.0).unwrap();
                    assert!(frobenius_norm(&(reached.matrix() - rho.matrix())) <= 1e-8);
                    assert!(g.auxiliary_residual().unwrap() < 1e-9);
                    assert!(g.moment(1.0).unwrap().abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn solve_direction_identical_states() {
        let mut rng = SeededRng::new(5);
        let sigma = random_density_with(&mut rng, 3, 0.02);
        let g = solve_direction(GeodesicKind::Bogoljubov, &sigma, &sigma).unwrap();
        assert!(frobenius_norm(g.direction()) < 1e-12);
        for kind in GeodesicKind::ALL {
            let g = solve_direction(kind, &sigma, &sigma).unwrap();
            assert!(frobenius_norm(&(g.state_at(1.0).unwrap().matrix() - sigma.matrix())) < 1e-10);
        }
    }

    #[test]
    fn solve_direction_commuting_pair() {
        let p = [0.6, 0.3, 0.1];
        let q = [0.2, 0.5, 0.3];
        let rho = DensityMatrix::from_diagonal(&p).unwrap();
        let sigma = DensityMatrix::from_diagonal(&q).unwrap();
        let llr: Vec<f64> = p.iter().zip(&q).map(|(a, b)| (a / b).ln()).collect();
        for kind in GeodesicKind::ALL {
            let g = solve_direction(kind, &rho, &sigma).unwrap();
            let diff = frobenius_norm(&(g.direction() - from_real_diagonal(&llr)));
            assert!(diff < 1e-12, "{kind}");
        }
    }

    #[test]
    fn bogoljubov_reaches_target_from_mixed_state() {
        let rho = DensityMatrix::from_diagonal(&[0.8, 0.2]).unwrap();
        let sigma = max_mixed(2);
        let l = rho.log().unwrap() - sigma.log().unwrap();
        // drop the trace part; the family is invariant under L -> L + c I
        let traceless = &l - identity(2).scale(linalg::trace(&l).re / 2.0);
        let g = Geodesic::new(GeodesicKind::Bogoljubov, sigma, traceless).unwrap();
        let reached = g.state_at(1.0).unwrap();
        assert!(frobenius_norm(&(reached.matrix() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn exact_slope_matches_finite_difference() {
        let mut rng = SeededRng::new(6);
        let rho = random_density_with(&mut rng, 3, 0.03);
        let sigma = random_density_with(&mut rng, 3, 0.03);
        for kind in GeodesicKind::ALL {
            let g = solve_direction(kind, &rho, &sigma).unwrap();
            for theta in [0.0, 0.5, 1.0] {
                let exact = g.moment_slope(theta).unwrap();
                let fd = moment_derivative(&g, theta, DerivativeOrder::First).unwrap();
                assert!((exact - fd).abs() < 1e-8, "{kind} {theta}: {exact} vs {fd}");
            }
        }
    }

    #[test]
    fn second_derivative_is_fisher_information() {
        let mut rng = SeededRng::new(7);
        for dim in 2..=3 {
            let rho = random_density_with(&mut rng, dim, 0.03);
            let sigma = random_density_with(&mut rng, dim, 0.03);
            for kind in GeodesicKind::ALL {
                let g = solve_direction(kind, &rho, &sigma).unwrap();
                for theta in [-0.5, 0.0, 0.3, 0.8, 1.2] {
                    let fd = moment_derivative(&g, theta, DerivativeOrder::Second).unwrap();
                    let j = g.fisher_info(theta).unwrap();
                    assert!((fd - j).abs() < 1e-5, "{kind} {theta}: {fd} vs {j}");
                    assert!(fd >= -1e-6);
                }
            }
        }
    }

    #[test]
    fn numeric_fisher_on_bogoljubov_geodesic() {
        let mut rng = SeededRng::new(17);
        let rho = random_density_with(&mut rng, 3, 0.03);
        let sigma = random_density_with(&mut rng, 3, 0.03);
        let g = solve_direction(GeodesicKind::Bogoljubov, &rho, &sigma).unwrap();
        for theta in [0.2, 0.9] {
            let numeric = metrics::fisher_info_numeric(
                |t| g.state_at(t),
                theta,
                &MetricKind::Bogoljubov,
                1e-3,
            )
            .unwrap();
            let mu2 = moment_derivative(&g, theta, DerivativeOrder::Second).unwrap();
            assert!((numeric - mu2).abs() < 1e-5);
        }
    }

    #[test]
    fn first_derivative_at_one_is_relative_entropy() {
        let mut rng = SeededRng::new(10);
        let rho = random_density_with(&mut rng, 3, 0.02);
        let sigma = random_density_with(&mut rng, 3, 0.02);
        let g = solve_direction(GeodesicKind::Bogoljubov, &rho, &sigma).unwrap();
        let d = crate::divergences::quantum_relative_entropy(&rho, &sigma).unwrap();
        let slope = moment_derivative(&g, 1.0, DerivativeOrder::First).unwrap();
        assert!((slope - d).abs() < 1e-6);
    }

    #[test]
    fn semigroup_along_one_direction() {
        let mut rng = SeededRng::new(11);
        let sigma = random_density_with(&mut rng, 3, 0.02);
        let l = random_hermitian(&mut rng, 3);
        for kind in [GeodesicKind::Sld, GeodesicKind::Bogoljubov] {
            let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
            let mid = g.state_at(0.4).unwrap();
            let rebased = Geodesic::new(kind, mid, l.clone()).unwrap();
            let a = rebased.state_at(0.7).unwrap();
            let b = g.state_at(1.1).unwrap();
            assert!(frobenius_norm(&(a.matrix() - b.matrix())) < 1e-8, "{kind}");
        }
    }

    #[test]
    fn tensor_covariance() {
        let mut rng = SeededRng::new(12);
        let s1 = random_density_with(&mut rng, 2, 0.05);
        let s2 = random_density_with(&mut rng, 2, 0.05);
        let l1 = random_hermitian(&mut rng, 2);
        let l2 = random_hermitian(&mut rng, 2);
        let joint_base = crate::states::validate_density(
            &tensor_product(s1.matrix(), s2.matrix()),
            1e-10,
        )
        .unwrap();
        let joint_dir = tensor_product(&l1, &identity(2)) + tensor_product(&identity(2), &l2);
        for kind in GeodesicKind::ALL {
            let joint = Geodesic::new(kind, joint_base.clone(), joint_dir.clone()).unwrap();
            let a = Geodesic::new(kind, s1.clone(), l1.clone()).unwrap();
            let b = Geodesic::new(kind, s2.clone(), l2.clone()).unwrap();
            let theta = 0.8;
            let lhs = joint.state_at(theta).unwrap();
            let rhs = tensor_product(a.state_at(theta).unwrap().matrix(), b.state_at(theta).unwrap().matrix());
            assert!(frobenius_norm(&(lhs.matrix() - rhs)) < 1e-9, "{kind}");
        }
    }

    #[test]
    fn commutation_defect_examples() {
        let mut rng = SeededRng::new(13);
        for _ in 0..5 {
            let sigma = random_density_with(&mut rng, 3, 0.02);
            let l1 = random_hermitian(&mut rng, 3);
            let l2 = random_hermitian(&mut rng, 3);
            let d = transport_commutation_defect(GeodesicKind::Bogoljubov, &sigma, &l1, &l2, 0.9, -1.3)
                .unwrap();
            assert!(d <= 1e-8, "{d}");
        }
        let sigma = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let l1 = from_real_diagonal(&[1.0, 0.0, -1.0]);
        let l2 = from_real_diagonal(&[0.2, 0.7, 0.1]);
        for kind in GeodesicKind::ALL {
            let d = transport_commutation_defect(kind, &sigma, &l1, &l2, 1.0, 1.0).unwrap();
            assert!(d <= 1e-10, "{kind}");
        }
        let d = transport_commutation_defect(GeodesicKind::Sld, &diag73(), &pauli_x(), &pauli_z(), 1.0, 1.0)
            .unwrap();
        assert!(d > 1e-3, "{d}");
    }

    #[test]
    fn m_geodesic_endpoints() {
        let a = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(m_geodesic(&a, &b, 0.0).unwrap().matrix(), a.matrix());
        assert_eq!(m_geodesic(&a, &b, 1.0).unwrap().matrix(), b.matrix());
        assert_eq!(m_geodesic(&a, &b, 0.5).unwrap().matrix(), max_mixed(2).matrix());
        assert!(m_geodesic(&a, &max_mixed(3), 0.5).is_err());
        let m = m_geodesic(&a, &b, 0.25).unwrap();
        assert!((m.matrix()[(0, 0)].re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_directions() {
        let skew = linalg::real_matrix(2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(
            Geodesic::new(GeodesicKind::Sld, diag73(), skew),
            Err(Error::NotHermitian { .. })
        ));
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            Geodesic::new(GeodesicKind::Sld, pure, pauli_x()),
            Err(Error::NotFullRank { .. })
        ));
    }

    #[test]
    fn kind_parsing_and_metric_mapping() {
        for kind in GeodesicKind::ALL {
            assert_eq!(kind.label().parse::<GeodesicKind>().unwrap(), kind);
            assert_eq!(GeodesicKind::from_metric(&kind.metric()), Some(kind));
        }
        assert!("lambda=0.3".parse::<GeodesicKind>().is_err());
        assert_eq!(serde_json::to_string(&GeodesicKind::Half).unwrap(), "\"half\"");
        assert_eq!(serde_json::to_string(&GeodesicKind::Sld).unwrap(), "\"s\"");
    }
}
