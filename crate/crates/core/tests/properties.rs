use proptest::prelude::*;

use swanson::linalg::{eigenvalues_general, BandLu, OperatorMatrix};
use swanson::oscillator::{build_hamiltonian, ModelConfig};
use swanson::physics::{compress, energy_expectation, evolve, physical_inner_product_vec};
use swanson::spectral::{distance_to_set, sigma_min_at, support_function, theta_grid, truncation_spectrum};
use swanson::waveform::{gaussian_moment, inner_product, psi_n, QuadratureRule};
use swanson::Complex64 as c64;

fn complex() -> impl Strategy<Value = c64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sigma_min_is_conjugation_symmetric(gamma in -0.9..0.9f64, re in -2.0..12.0f64, im in -5.0..5.0f64) {
        let cfg = ModelConfig::new(gamma, 40).unwrap();
        let z = c64::new(re, im);
        prop_assert_eq!(sigma_min_at(&cfg, z).unwrap(), sigma_min_at(&cfg, z.conj()).unwrap());
    }

    #[test]
    fn sigma_min_never_exceeds_distance(gamma in -0.9..0.9f64, re in -2.0..12.0f64, im in -5.0..5.0f64) {
        let cfg = ModelConfig::new(gamma, 30).unwrap();
        let z = c64::new(re, im);
        let d = distance_to_set(z, &truncation_spectrum(&cfg).unwrap());
        prop_assert!(sigma_min_at(&cfg, z).unwrap() <= d * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn support_function_is_even(gamma in -0.9..0.9f64, theta in 0.0..1.5f64) {
        let cfg = ModelConfig::new(gamma, 60).unwrap();
        let a = support_function(&cfg, theta).unwrap();
        let b = support_function(&cfg, -theta).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn theta_grid_is_symmetric(count in 3usize..400) {
        let g = theta_grid(count);
        prop_assert_eq!(g.len() % 2, 1);
        prop_assert!(g.len() >= count);
        prop_assert_eq!(g[g.len() / 2], 0.0);
        for (a, b) in g.iter().zip(g.iter().rev()) {
            prop_assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn quadrature_moments(count in 1usize..40, scale in 0.2..5.0f64, k in 0usize..20) {
        prop_assume!(k < 2 * count);
        let rule = QuadratureRule::gauss_hermite(count, scale).unwrap();
        let q = rule.integrate(|x| x.powi(k as i32));
        let exact = gaussian_moment(k, scale);
        if k % 2 == 1 {
            prop_assert_eq!(q, 0.0);
        } else {
            prop_assert!((q - exact).abs() <= 1e-12 * exact);
        }
    }

    #[test]
    fn inner_product_is_hermitian(gamma in -0.9..0.9f64, m in 0usize..8, n in 0usize..8) {
        let f = psi_n(gamma, m).unwrap();
        let g = psi_n(gamma, n).unwrap();
        let a = inner_product(&f, &g).unwrap();
        let b = inner_product(&g, &f).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn band_lu_solves(n in 2usize..30, seed in prop::collection::vec(complex(), 5 * 30), rhs in prop::collection::vec(complex(), 30)) {
        // diagonally dominant pentadiagonal matrix
        let a = OperatorMatrix::from_fn(n, |i, j| {
            let off = j as isize - i as isize;
            if off.abs() > 2 { return c64::new(0.0, 0.0); }
            let v = seed[5 * i + (off + 2) as usize];
            if off == 0 { v + c64::new(6.0, 0.0) } else { v }
        });
        let lu = BandLu::factor(&a);
        let x = lu.solve(&rhs[..n]).unwrap();
        let ax = a.mul_vec(&x);
        for (p, q) in ax.iter().zip(&rhs[..n]) {
            prop_assert!((p - q).norm() <= 1e-12);
        }
        let y = lu.solve_adjoint(&rhs[..n]).unwrap();
        let ay = a.adjoint().mul_vec(&y);
        for (p, q) in ay.iter().zip(&rhs[..n]) {
            prop_assert!((p - q).norm() <= 1e-12);
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace(entries in prop::collection::vec(complex(), 144)) {
        let a = OperatorMatrix::from_fn(12, |i, j| entries[12 * i + j]);
        let eigs = eigenvalues_general(&a).unwrap().eigenvalues;
        let trace: c64 = (0..12).map(|i| a.get(i, i)).sum();
        let sum: c64 = eigs.iter().sum();
        prop_assert!((trace - sum).norm() <= 1e-11);
    }

    #[test]
    fn truncation_spectrum_is_conjugation_closed(gamma in -0.9..0.9f64, dim in 4usize..40) {
        let cfg = ModelConfig::new(gamma, dim).unwrap();
        let eigs = truncation_spectrum(&cfg).unwrap();
        prop_assert_eq!(eigs.len(), dim);
        let h = build_hamiltonian(&cfg);
        let trace: f64 = (0..dim).map(|i| h.get(i, i).re).sum();
        let sum: f64 = eigs.iter().map(|z| z.re).sum();
        prop_assert!((trace - sum).abs() <= 1e-9 * trace);
        for z in &eigs {
            prop_assert!(distance_to_set(z.conj(), &eigs) <= 1e-9 * z.norm().max(1.0));
        }
    }

    #[test]
    fn energy_lies_between_extreme_levels(gamma in -0.8..0.8f64, c in prop::collection::vec(complex(), 6)) {
        prop_assume!(c.iter().any(|z| z.norm() > 1e-3));
        let m = compress(gamma, 6).unwrap();
        let u = m.state_vector(&c).unwrap();
        let e = energy_expectation(&m, &u).unwrap();
        prop_assert!(e >= m.lambdas[0] - 1e-10 && e <= m.lambdas[5] + 1e-10);
    }

    #[test]
    fn physical_norm_is_conserved(gamma in -0.8..0.8f64, c in prop::collection::vec(complex(), 5), t in 0.0..20.0f64) {
        prop_assume!(c.iter().any(|z| z.norm() > 1e-3));
        let m = compress(gamma, 5).unwrap();
        let trace = evolve(&m, &c, &[0.0, t]).unwrap();
        let n0 = trace.phys_norms[0];
        prop_assert!((trace.phys_norms[1] - n0).abs() <= 1e-11 * n0);
        let u = m.state_vector(&c).unwrap();
        let direct = physical_inner_product_vec(&m, &u, &u).unwrap().re;
        prop_assert!((direct - n0).abs() <= 1e-11 * n0);
    }
}
