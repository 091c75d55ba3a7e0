use proptest::prelude::*;

use qgeodiv::channels::{apply_channel, measure, partial_trace, random_channel, random_povm, Subsystem};
use qgeodiv::divergences::{
    bs_divergence, classical_kl, e_divergence_closed, quantum_relative_entropy,
};
use qgeodiv::linalg::{
    apply_fn, eig_hermitian, expm, frobenius_norm, hermiticity_defect, logm, tensor_product, HERMITIAN_TOL,
};
use qgeodiv::metrics::{e_to_m, m_norm_sq};
use qgeodiv::quadrature::GaussLegendre;
use qgeodiv::rng::SeededRng;
use qgeodiv::states::{
    codiagonal_pair, commutation_defect, random_density, random_hermitian, RandomSpec,
};
use qgeodiv::transport::{e_transport, solve_direction, Geodesic};
use qgeodiv::{ComplexMatrix, DensityMatrix, GeodesicKind, MetricKind};

fn state(dim: usize, seed: u64) -> DensityMatrix {
    random_density(&RandomSpec::new(dim, seed, 1e-3).unwrap())
}

fn hermitian(dim: usize, seed: u64, scale: f64) -> ComplexMatrix {
    random_hermitian(&mut SeededRng::new(seed), dim).scale(scale)
}

fn kinds() -> [MetricKind; 4] {
    [MetricKind::Sld, MetricKind::Bogoljubov, MetricKind::Rld, MetricKind::half()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigendecomposition_reconstructs(dim in 2usize..=6, seed in any::<u64>(), log_scale in -3.0f64..3.0) {
        let h = hermitian(dim, seed, 10f64.powf(log_scale));
        let eig = eig_hermitian(&h, HERMITIAN_TOL).unwrap();
        prop_assert!(frobenius_norm(&(eig.reconstruct() - &h)) <= 1e-10 * frobenius_norm(&h));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn log_inverts_exp(dim in 2usize..=5, seed in any::<u64>(), radius in 0.1f64..5.0) {
        let h = hermitian(dim, seed, 1.0);
        let eig = eig_hermitian(&h, HERMITIAN_TOL).unwrap();
        let spread = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let h = h.scale(radius / spread);
        let back = logm(&expm(&h).unwrap()).unwrap();
        prop_assert!(frobenius_norm(&(back - &h)) <= 1e-8);
    }

    #[test]
    fn spectral_calculus_is_multiplicative(dim in 2usize..=5, seed in any::<u64>()) {
        let h = hermitian(dim, seed, 2.0);
        let f = apply_fn(&h, f64::sin).unwrap();
        let g = apply_fn(&h, |x| x * x + 1.0).unwrap();
        let fg = apply_fn(&h, |x| x.sin() * (x * x + 1.0)).unwrap();
        prop_assert!(frobenius_norm(&(f * g - fg)) <= 1e-10);
    }

    #[test]
    fn random_states_are_reproducible(dim in 2usize..=5, seed in any::<u64>()) {
        let (a, b) = (state(dim, seed), state(dim, seed));
        prop_assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn codiagonal_pairs_commute(dim in 2usize..=5, seed in any::<u64>()) {
        let (rho, sigma, _, _) = codiagonal_pair(&mut SeededRng::new(seed), dim, 1e-3).unwrap();
        prop_assert!(commutation_defect(&rho, &sigma).unwrap() <= 1e-12);
    }

    #[test]
    fn kernel_maps_match_direct_formulas(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let x = hermitian(dim, seed ^ 0x5eed, 1.0);
        let r = rho.matrix();
        let sld = e_to_m(&rho, &MetricKind::Sld, &x).unwrap();
        prop_assert!(frobenius_norm(&(sld - (r * &x + &x * r).scale(0.5))) <= 1e-9);
        let rld = e_to_m(&rho, &MetricKind::Rld, &x).unwrap();
        prop_assert!(frobenius_norm(&(rld - r * &x)) <= 1e-9);
        let mut integral = ComplexMatrix::zeros(dim, dim);
        for (l, w) in GaussLegendre::new(64).unit_interval() {
            integral += (rho.pow(l).unwrap() * &x * rho.pow(1.0 - l).unwrap()).scale(w);
        }
        let b = e_to_m(&rho, &MetricKind::Bogoljubov, &x).unwrap();
        prop_assert!(frobenius_norm(&(b - integral)) <= 1e-9);
    }

    #[test]
    fn symmetric_maps_preserve_hermiticity(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let x = hermitian(dim, seed.wrapping_add(1), 1.0);
        for kind in [MetricKind::Sld, MetricKind::Bogoljubov] {
            prop_assert!(hermiticity_defect(&e_to_m(&rho, &kind, &x).unwrap()) <= 1e-10);
        }
    }

    #[test]
    fn rld_norm_dominates(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let a = hermitian(dim, seed.wrapping_mul(3), 1.0);
        let r = m_norm_sq(&rho, &MetricKind::Rld, &a).unwrap();
        for kind in kinds() {
            prop_assert!(r - m_norm_sq(&rho, &kind, &a).unwrap() >= -1e-10 * r.max(1.0));
        }
    }

    #[test]
    fn kernels_are_exact_on_the_diagonal(a in 1e-12f64..1.0) {
        for kind in kinds() {
            prop_assert_eq!(kind.kernel(a, a), a);
        }
    }

    #[test]
    fn direction_solve_round_trips(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let sigma = state(dim, seed ^ 0xabcdef);
        for kind in GeodesicKind::ALL {
            let g = solve_direction(kind, &rho, &sigma).unwrap();
            let end = e_transport(&g, 1.0).unwrap();
            prop_assert!(frobenius_norm(&(end.matrix() - rho.matrix())) <= 1e-8);
        }
    }

    #[test]
    fn transport_is_a_semigroup(dim in 2usize..=4, seed in any::<u64>(), t1 in -1.0f64..1.0, t2 in -1.0f64..1.0) {
        let sigma = state(dim, seed);
        let l = hermitian(dim, seed.wrapping_add(7), 1.0);
        for kind in [GeodesicKind::Sld, GeodesicKind::Bogoljubov] {
            let g = Geodesic::new(kind, sigma.clone(), l.clone()).unwrap();
            let mid = e_transport(&g, t1).unwrap();
            let rebased = Geodesic::new(kind, mid, l.clone()).unwrap();
            let a = e_transport(&rebased, t2).unwrap();
            let b = e_transport(&g, t1 + t2).unwrap();
            prop_assert!(frobenius_norm(&(a.matrix() - b.matrix())) <= 1e-8);
        }
    }

    #[test]
    fn transport_respects_tensor_products(seed in any::<u64>(), theta in -1.0f64..1.5) {
        let (s1, s2) = (state(2, seed), state(2, seed ^ 1));
        let (l1, l2) = (hermitian(2, seed ^ 2, 1.0), hermitian(2, seed ^ 3, 1.0));
        let id = ComplexMatrix::identity(2, 2);
        let joint_l = tensor_product(&l1, &id) + tensor_product(&id, &l2);
        let joint_s = qgeodiv::states::validate_density(&tensor_product(s1.matrix(), s2.matrix()), 1e-10).unwrap();
        for kind in GeodesicKind::ALL {
            let joint = e_transport(&Geodesic::new(kind, joint_s.clone(), joint_l.clone()).unwrap(), theta).unwrap();
            let a = e_transport(&Geodesic::new(kind, s1.clone(), l1.clone()).unwrap(), theta).unwrap();
            let b = e_transport(&Geodesic::new(kind, s2.clone(), l2.clone()).unwrap(), theta).unwrap();
            let product = tensor_product(a.matrix(), b.matrix());
            prop_assert!(frobenius_norm(&(joint.matrix() - product)) <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inequality_chain_holds(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let sigma = state(dim, !seed);
        let e_s = e_divergence_closed(GeodesicKind::Sld, &rho, &sigma).unwrap();
        let d = quantum_relative_entropy(&rho, &sigma).unwrap();
        let dbar = bs_divergence(&rho, &sigma).unwrap();
        prop_assert!(e_s <= d + 1e-8 && d <= dbar + 1e-8);
        prop_assert!((e_divergence_closed(GeodesicKind::Rld, &rho, &sigma).unwrap() - dbar).abs() <= 1e-8);
    }

    #[test]
    fn measurement_does_not_increase_relative_entropy(dim in 2usize..=4, outcomes in 2usize..=5, seed in any::<u64>()) {
        let rho = state(dim, seed);
        let sigma = state(dim, seed.rotate_left(17));
        let povm = random_povm(dim, outcomes, seed).unwrap();
        let kl = classical_kl(&measure(&rho, &povm).unwrap(), &measure(&sigma, &povm).unwrap()).unwrap();
        prop_assert!(quantum_relative_entropy(&rho, &sigma).unwrap() >= kl - 1e-8);
    }

    #[test]
    fn channel_outputs_are_states(dim_in in 2usize..=4, dim_out in 2usize..=4, extra in 0usize..3, seed in any::<u64>()) {
        let k = dim_in.div_ceil(dim_out) + extra;
        let channel = random_channel(dim_in, dim_out, k, seed).unwrap();
        prop_assert!(channel.trace_preservation_defect() <= 1e-10);
        let out = apply_channel(&channel, &state(dim_in, seed)).unwrap();
        prop_assert_eq!(out.dim(), dim_out);
        let reduced = partial_trace(&state(4, seed), (2, 2), Subsystem::A).unwrap();
        prop_assert_eq!(reduced.dim(), 2);
    }
}
