use std::f64::consts::PI;

use proptest::prelude::*;
use resolvent_core::blaschke::{
    blaschke_factor, circle_inner_product, interpolant_g, tmw_gram, Spectrum, DEFAULT_CIRCLE_GRID,
};
use resolvent_core::interpolation_bounds::{
    fejer_mean_on_grid, phi_coeffs, psi_eval, upper_bound_sum, FejerQuery,
};
use resolvent_core::linalg::{
    random_contraction_with_spectrum, random_unitary, solve, spectral_norm, sup_norm_on_circle,
};
use resolvent_core::model_operator::{model_matrix, resolvent_closed_form, resolvent_norm, ResolventQuery};
use resolvent_core::toeplitz_norm::{fn_theta, resolvent_sup, theta_star, upper_bracket_holds, XBetaSpec};
use resolvent_core::verifier::{
    check_resolvent_bound, sample_distinct_spectrum_contraction, verify_dominance, verify_extremal,
    TrialConfig, TrialReport,
};
use resolvent_core::{Complex64, ComplexMatrix, RngStream};

fn gaussian_matrix(rng: &mut RngStream, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

fn disk_point(max_radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, 0.0..(2.0 * PI)).prop_map(move |(u, t)| Complex64::from_polar(max_radius * u.sqrt(), t))
}

fn spectrum(max_len: usize, max_radius: f64) -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(disk_point(max_radius), 1..=max_len)
        .prop_map(|pts| Spectrum::new(pts).expect("points inside the disk"))
}

fn outside_point() -> impl Strategy<Value = Complex64> {
    (1.0..4.0f64, 0.0..(2.0 * PI)).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_norm_is_unitarily_invariant(n in 1usize..=50, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let a = gaussian_matrix(&mut rng, n, n);
        let u = random_unitary(n, &mut rng).unwrap();
        let v = random_unitary(n, &mut rng).unwrap();
        let rotated = &(&u * &a) * &v;
        let (x, y) = (spectral_norm(&a, 1e-12).unwrap(), spectral_norm(&rotated, 1e-12).unwrap());
        prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0), "{x} vs {y}");
    }

    #[test]
    fn spectral_norm_is_entrywise_monotone(n in 1usize..=20, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 1);
        let small = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.uniform(), 0.0));
        let big = ComplexMatrix::from_fn(n, n, |i, j| small[(i, j)] + rng.uniform());
        let (s, b) = (spectral_norm(&small, 1e-12).unwrap(), spectral_norm(&big, 1e-12).unwrap());
        prop_assert!(s <= b + 1e-10);
    }

    #[test]
    fn solve_residual_is_small(n in 1usize..=30, m in 1usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 2);
        let mut a = gaussian_matrix(&mut rng, n, n);
        for i in 0..n {
            a[(i, i)] += 2.0 * n as f64;
        }
        let b = gaussian_matrix(&mut rng, n, m);
        let x = solve(&a, &b).unwrap();
        let residual = (&a * &x).max_abs_diff(&b).unwrap();
        prop_assert!(residual <= 1e-10 * (1.0 + b.max_abs()));
    }

    #[test]
    fn blaschke_factor_is_self_inverse(lambda in disk_point(0.99), z in disk_point(1.0)) {
        let w = blaschke_factor(lambda, z).unwrap();
        prop_assert!((blaschke_factor(lambda, w).unwrap() - z).norm() <= 1e-12);
        let on_circle = Complex64::from_polar(1.0, z.arg());
        prop_assert!((blaschke_factor(lambda, on_circle).unwrap().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tmw_basis_is_orthonormal(sigma in spectrum(12, 0.9)) {
        let gram = tmw_gram(&sigma, DEFAULT_CIRCLE_GRID).unwrap();
        for (i, row) in gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - target).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn kernel_reproduces_basis(sigma in spectrum(8, 0.9), zeta in disk_point(0.9)) {
        for k in 1..=sigma.len() {
            let inner = circle_inner_product(
                |z| sigma.tmw_basis(k, z),
                |z| sigma.reproducing_kernel(zeta, z),
                DEFAULT_CIRCLE_GRID,
            )
            .unwrap();
            prop_assert!((inner - sigma.tmw_basis(k, zeta).unwrap()).norm() <= 1e-9);
        }
    }

    #[test]
    fn kernel_matches_expansion(sigma in spectrum(12, 0.9), zeta in disk_point(1.0), z in disk_point(1.0)) {
        let direct = sigma.reproducing_kernel(zeta, z).unwrap();
        let expansion = sigma.reproducing_kernel_expansion(zeta, z).unwrap();
        prop_assert!((direct - expansion).norm() <= 1e-11 * expansion.norm().max(1.0));
    }

    #[test]
    fn model_matrix_is_a_contraction(sigma in spectrum(16, 0.999)) {
        let m = model_matrix(&sigma);
        prop_assert!(m.is_lower_triangular());
        prop_assert_eq!(m.diag(), sigma.points().to_vec());
        prop_assert!(spectral_norm(&m, 1e-12).unwrap() <= 1.0 + 1e-10);
    }

    #[test]
    fn closed_form_is_dominated_by_toeplitz(sigma in spectrum(16, 0.95), zeta in outside_point()) {
        let r = sigma.max_modulus();
        let inv = resolvent_closed_form(&ResolventQuery::new(sigma.clone(), zeta).unwrap());
        for i in 0..sigma.len() {
            for j in 0..=i {
                let cap = if i == j { 1.0 / (1.0 - r) } else { (1.0 + r) / (1.0 - r) };
                prop_assert!(inv[(i, j)].norm() <= cap + 1e-12);
            }
        }
    }

    #[test]
    fn dominance_by_model_operator(n in 1usize..=8, r in 0.05..0.95f64, seed in any::<u64>(), zeta in outside_point()) {
        let mut rng = RngStream::new(seed, 3);
        let (t, sigma) = sample_distinct_spectrum_contraction(n, r, &mut rng).unwrap();
        let observed = resolvent_norm(&t, zeta).unwrap();
        let model = resolvent_norm(&model_matrix(&sigma), zeta).unwrap();
        prop_assert!(observed <= model + 1e-8, "{observed} > {model}");
    }

    #[test]
    fn von_neumann_chain(n in 1usize..=8, r in 0.05..0.9f64, seed in any::<u64>(), zeta in outside_point()) {
        let mut rng = RngStream::new(seed, 4);
        let (t, sigma) = sample_distinct_spectrum_contraction(n, r, &mut rng).unwrap();
        prop_assume!(zeta.norm() > 1.0);
        let g = interpolant_g(&sigma, zeta).unwrap();
        let sup = sup_norm_on_circle(|z| g.eval(z), DEFAULT_CIRCLE_GRID).unwrap();
        let observed = resolvent_norm(&t, zeta).unwrap();
        prop_assert!(observed <= sup + 1e-8, "{observed} > {sup}");
        prop_assert!(sup <= upper_bound_sum(&sigma) + 1e-8);
        let model = resolvent_norm(&model_matrix(&sigma), zeta).unwrap();
        prop_assert!(model <= sup + 1e-8);
    }

    #[test]
    fn theta_star_stays_in_bracket(n in 1usize..=400, beta in 0.01..=2.0f64) {
        let root = theta_star(XBetaSpec::new(n, beta).unwrap(), 1e-15).unwrap();
        let nf = n as f64;
        prop_assert!(root.theta >= (2.0 * nf - 1.0) * PI / (2.0 * nf) && root.theta < PI);
        if beta > 1.0 && upper_bracket_holds(n, beta) {
            prop_assert!(root.theta <= 2.0 * nf * PI / (2.0 * nf + 1.0) + 1e-12);
        }
    }

    #[test]
    fn root_function_is_decreasing(n in 1usize..=200, beta in 0.01..=2.0f64) {
        let lo = (2.0 * n as f64 - 1.0) * PI / (2.0 * n as f64);
        let values: Vec<f64> = (0..100)
            .map(|i| {
                let theta = lo + (PI - lo) * i as f64 / 100.0;
                fn_theta(n, beta, theta).unwrap_or_else(|e| panic!("θ = {theta}: {e}"))
            })
            .collect();
        prop_assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn sup_is_monotone_in_n_and_r(n in 1usize..=300, r in 0.0..0.98f64, dr in 0.0..0.01f64) {
        let base = resolvent_sup(n, r).unwrap();
        prop_assert!(resolvent_sup(n + 1, r).unwrap() >= base * (1.0 - 1e-12));
        prop_assert!(resolvent_sup(n, r + dr).unwrap() >= base * (1.0 - 1e-12));
    }

    #[test]
    fn fejer_mean_does_not_increase_sup(
        coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..40),
        order in 1usize..=64,
    ) {
        let samples: Vec<Complex64> = (0..256)
            .map(|m| {
                let t = 2.0 * PI * m as f64 / 256.0;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &(re, im))| Complex64::new(re, im) * Complex64::from_polar(1.0, (k as f64 - 20.0) * t))
                    .sum()
            })
            .collect();
        let sup = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mean = fejer_mean_on_grid(&samples, order).unwrap();
        prop_assert!(mean.iter().all(|z| z.norm() <= sup + 1e-10));
    }

    #[test]
    fn psi_is_interpolant_composed_with_blaschke(
        n in 1usize..=12,
        r in 0.05..0.9f64,
        u in 0.01..0.99f64,
        z in disk_point(1.0),
    ) {
        let zeta = -1.0 - u * (1.0 / r - 1.0);
        let q = FejerQuery::new(n, r, zeta).unwrap();
        let psi = psi_eval(&q, z);
        let phi = phi_coeffs(&q).eval(z);
        prop_assert!((psi * (zeta + r) - phi).norm() <= 1e-12 * phi.norm().max(1.0));

        let minus_r = Complex64::new(-r, 0.0);
        let sigma = Spectrum::repeated(minus_r, n).unwrap();
        let g = interpolant_g(&sigma, Complex64::new(zeta, 0.0)).unwrap();
        let composed = g.eval(blaschke_factor(minus_r, z).unwrap()).unwrap();
        prop_assert!((psi - composed).norm() <= 1e-10 * psi.norm().max(1.0), "{psi} vs {composed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn verifier_is_deterministic(n in 1usize..=5, r in 0.05..0.95f64, seed in any::<u64>()) {
        let cfg = TrialConfig::new(n, r, 20, seed);
        prop_assert_eq!(verify_extremal(&cfg).unwrap(), verify_extremal(&cfg).unwrap());
        prop_assert_eq!(verify_dominance(&cfg).unwrap(), verify_dominance(&cfg).unwrap());
    }

    #[test]
    fn report_merge_ignores_order(
        order in Just((0..12u64).collect::<Vec<_>>()).prop_shuffle(),
        seed in any::<u64>(),
    ) {
        let zetas = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 2.0)];
        let parts: Vec<TrialReport> = (0..12u64)
            .map(|trial| {
                let mut rng = RngStream::new(seed, trial);
                let (t, _) = sample_distinct_spectrum_contraction(3, 0.8, &mut rng).unwrap();
                check_resolvent_bound(&t, &zetas, 2.0, 1e-7, trial).unwrap()
            })
            .collect();
        let forward = parts.iter().cloned().fold(TrialReport::default(), TrialReport::merge);
        let shuffled = order.iter().map(|&i| parts[i as usize].clone()).fold(TrialReport::default(), TrialReport::merge);
        prop_assert_eq!(forward, shuffled);
    }
}

#[test]
fn random_contractions_respect_class_constraints() {
    for (idx, &n) in [4usize, 8, 16].iter().enumerate() {
        for &r in &[0.1, 0.5, 0.9] {
            for trial in 0..1000u64 {
                let mut rng = RngStream::new(1000 + idx as u64, trial);
                let sample = random_contraction_with_spectrum(n, r, &mut rng).unwrap();
                assert!(sample.eigenvalues.iter().all(|l| l.norm() <= r));
                assert!(spectral_norm(&sample.matrix, 1e-12).unwrap() <= 1.0 + 1e-12, "n={n} r={r} trial {trial}");
            }
        }
    }
}
