use bhlab::bh_core::*;
use bhlab::boolean_cube::*;
use bhlab::cyclic::*;
use bhlab::learning::*;
use bhlab::linalg::C64;
use bhlab::quantum::*;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn table_strategy() -> impl Strategy<Value = CubeFunction> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, 1 << n).prop_map(move |t| CubeFunction::new(n, t).unwrap())
    })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn parseval(f in table_strategy()) {
        let s = walsh_transform(&f).unwrap();
        let energy: f64 = s.iter().map(|(_, c)| c * c).sum();
        let mean_sq = f.table().iter().map(|v| v * v).sum::<f64>() / f.table().len() as f64;
        prop_assert!((energy - mean_sq).abs() <= 1e-12 * mean_sq.max(1e-300));
        prop_assert!(s.degree() <= f.n());
    }

    #[test]
    fn inverse_round_trip(f in table_strategy()) {
        let back = inverse_walsh(&walsh_transform(&f).unwrap()).unwrap();
        let scale = sup_norm(&f).max(1.0);
        for (a, b) in f.table().iter().zip(back.table()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn fast_walsh_matches_naive(f in table_strategy()) {
        let fast = walsh_dense(&f);
        let naive = walsh_naive(&f).unwrap();
        for (a, b) in fast.iter().zip(&naive) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn low_degree_mask_count(n in 1usize..=16, d in 0usize..=5) {
        prop_assert_eq!(low_degree_subsets(n, d).len() as f64, count_low_degree_masks(n, d));
    }

    #[test]
    fn heat_semigroup_composes(seed in any::<u64>(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let f = random_low_degree_real(6, 3, seed).unwrap();
        let two_step = heat_semigroup(&heat_semigroup(&f, s).unwrap(), t).unwrap();
        let one_step = heat_semigroup(&f, s + t).unwrap();
        prop_assert!(two_step.l2_distance_sq(&one_step) <= 1e-24);
        let p = inverse_walsh(&heat_semigroup(&f, t).unwrap()).unwrap();
        prop_assert!(sup_norm(&p) <= sup_norm(&inverse_walsh(&f).unwrap()) + 1e-12);
    }

    #[test]
    fn boolean_generator_degree(seed in any::<u64>(), n in 3usize..=10, d in 1usize..=3) {
        let f = random_low_degree_boolean(n, d, seed).unwrap();
        prop_assert!(f.is_boolean());
        prop_assert!(walsh_transform(&f).unwrap().degree() <= d);
    }

    #[test]
    fn moment_comparison_holds(seed in any::<u64>(), n in 4usize..=10, d in 1usize..=3) {
        let f = inverse_walsh(&random_low_degree_real(n, d, seed).unwrap()).unwrap();
        for p in [4.0 / 3.0, 1.5] {
            prop_assert!(moment_comparison(&f, d, p).unwrap().pass);
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn equal_exponent_mixed_norm_is_flat(seed in any::<u64>(), d in 1usize..=3, n in 1usize..=4, p in 1.0f64..4.0) {
        let t = MixedTensor::random_real(d, n, seed).unwrap();
        let mixed = mixed_lp_norm(&t, &vec![p; d]).unwrap();
        let flat = t.entries().iter().map(|a| a.norm().powf(p)).sum::<f64>().powf(1.0 / p);
        prop_assert!((mixed - flat).abs() <= 1e-12 * flat.max(1.0));
    }

    #[test]
    fn symmetrization_preserves_diagonal(seed in any::<u64>(), d in 1usize..=3, n in 1usize..=4, xs in prop::collection::vec(-1.0f64..1.0, 4)) {
        let t = MixedTensor::random_real(d, n, seed).unwrap();
        let x: Vec<C64> = xs[..n].iter().map(|&v| C64::new(v, 0.0)).collect();
        let a = t.eval_diagonal(&x).unwrap();
        let b = t.symmetrize().eval_diagonal(&x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12);
    }

    #[test]
    fn blei_never_violated(seed in any::<u64>(), pick in 0usize..3, n in 2usize..=4) {
        let (d, k) = [(2, 1), (3, 1), (3, 2)][pick];
        let t = MixedTensor::random_real(d, n, seed).unwrap();
        let (lhs, rhs) = blei_sides(&t, k).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn polarization_reproduces_polynomial(seed in any::<u64>(), d in 2usize..=3, xs in prop::collection::vec(-1.0f64..1.0, 6)) {
        let top = random_low_degree_real(6, d, seed).unwrap().filter(|s, _| s.len() == d);
        prop_assume!(!top.is_empty());
        let l = polarize(&top).unwrap();
        let direct: f64 = top
            .iter()
            .map(|(s, c)| c * s.indices().iter().map(|&j| xs[j as usize]).product::<f64>())
            .sum();
        let vectors: Vec<&[f64]> = vec![&xs[..]; d];
        prop_assert!((l.eval(&vectors).unwrap() - direct).abs() <= 1e-10);
    }

    #[test]
    fn real_bh_ratio_below_upper_bound(seed in any::<u64>(), n in 3usize..=8, d in 1usize..=3) {
        let s = random_low_degree_real(n, d, seed).unwrap();
        prop_assume!(!s.is_empty());
        let deg = s.degree().max(1);
        let bound = bh_constant_upper(deg, BhBase::General).unwrap().value;
        prop_assert!(bh_ratio(&s).unwrap() <= bound + 1e-9);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn full_batch_reproduces_truncation(seed in any::<u64>(), n in 3usize..=8, d in 1usize..=3) {
        let f = random_low_degree_boolean(n, 3, seed).unwrap();
        let truth = walsh_transform(&f).unwrap().filter(|s, _| s.len() <= d);
        let h = lmn_learn(&exhaustive_queries(&f).unwrap(), d).unwrap();
        prop_assert!(h.l2_distance_sq(&truth) <= 1e-24);
    }

    #[test]
    fn ei_support_within_lmn(seed in any::<u64>(), n in 3usize..=12, d in 1usize..=3, b in 0.0f64..0.3) {
        let f = random_low_degree_boolean(n, d, seed).unwrap();
        let batch = sample_queries(|x| f.eval(x[0]), n, 400, seed ^ 1).unwrap();
        let lmn = lmn_learn(&batch, d).unwrap();
        let ei = ei_learn(&batch, d, b).unwrap();
        for (s, c) in ei.iter() {
            prop_assert!(s.len() <= d);
            prop_assert_eq!(c, lmn.coeff(s));
        }
    }

    #[test]
    fn stats_sampler_exact_when_d_is_one(seed in any::<u64>(), n in 2usize..=40) {
        let mut r = bhlab::rng::seeded(seed);
        let junta = Junta::random_boolean(n, 1, &mut r).unwrap();
        let alpha = junta_empirical_spectrum(&junta, 1000, 1, seed).unwrap();
        for (s, c) in alpha.iter() {
            prop_assert!(s.len() <= 1);
            prop_assert!(c.abs() <= 1.0 + 1e-12);
            // averages of 1000 signs
            prop_assert!(((c * 1000.0).round() - c * 1000.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn chernoff_envelope_bounds_deviation_frequency() {
    let n = 10;
    let count = 200usize;
    let b = 0.15;
    let f = random_low_degree_boolean(n, 2, 11).unwrap();
    let truth = walsh_transform(&f).unwrap();
    let probe = Subset::from_indices([0u32]);
    let reps = 600;
    let mut exceed = 0usize;
    for rep in 0..reps {
        let batch = sample_queries(|x| f.eval(x[0]), n, count, 1000 + rep).unwrap();
        let alpha = empirical_spectrum(&batch, 2).unwrap();
        if (alpha.coeff(&probe) - truth.coeff(&probe)).abs() > b {
            exceed += 1;
        }
    }
    let env = chernoff_envelope(count as u64, b).min(1.0);
    let sigma = (env * (1.0 - env) / reps as f64).sqrt();
    let freq = exceed as f64 / reps as f64;
    assert!(freq <= env + 3.0 * sigma, "freq {freq} envelope {env}");
}

#[test]
fn batch_and_stats_samplers_agree_in_distribution() {
    let cfg = LearnerConfig::new(2, 0.3, 0.1, 2f64.sqrt()).unwrap();
    let (mut batch_err, mut stats_err) = (0.0, 0.0);
    let trials = 60;
    for t in 0..trials {
        batch_err += run_trial(Algorithm::Lmn, Sampler::Batch, 24, &cfg, 4000, 5, t).unwrap().l2err;
        stats_err += run_trial(Algorithm::Lmn, Sampler::Stats, 24, &cfg, 4000, 5, t).unwrap().l2err;
    }
    let (b, s) = (batch_err / trials as f64, stats_err / trials as f64);
    assert!((b - s).abs() <= 0.1 * b.max(s), "batch {b} stats {s}");
}

#[test]
fn sample_size_crossover() {
    let cfg = LearnerConfig::new(2, 0.1, 0.1, 2f64.sqrt()).unwrap();
    let witness = (2..200_000usize)
        .step_by(97)
        .find(|&n| ei_sample_size(n, &cfg).unwrap() < lmn_sample_size(n, &cfg).unwrap());
    let n0 = witness.expect("crossover exists");
    for n in [n0, 2 * n0, 10 * n0] {
        assert!(ei_sample_size(n, &cfg).unwrap() < lmn_sample_size(n, &cfg).unwrap());
    }
}

#[test]
fn exercise_inequality_sweep() {
    for d in 1..=100 {
        let (lhs, rhs) = exercise_inequality(d);
        assert!(lhs <= rhs, "d={d}: {lhs} > {rhs}");
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn cyclic_invariants(seed in any::<u64>(), pick in 0usize..3, n in 1usize..=3, d in 1usize..=4) {
        let k = [3, 5, 7][pick];
        let f = CyclicPolynomial::random(k, n, d, seed).unwrap();
        for (alpha, _) in f.terms() {
            prop_assert!(alpha.iter().all(|&a| (a as usize) < k));
            prop_assert!(total_degree(alpha) <= f.degree());
            for s in 1..k {
                let t = tau(alpha, s, k);
                let floor = (2.0 * (std::f64::consts::PI / k as f64).sin()).powi(support_size(alpha) as i32);
                prop_assert!(t.norm() >= floor * (1.0 - 1e-12));
            }
        }
        let total = support_split(&f).into_iter().fold(CyclicPolynomial::zero(k, n).unwrap(), |mut acc, (_, p)| {
            for (a, c) in p.terms() {
                acc.add_term(a.clone(), c).unwrap();
            }
            acc
        });
        prop_assert!(total.max_coeff_diff(&f) <= 1e-15);
    }

    #[test]
    fn pseudo_projection_bound(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=3) {
        let f = CyclicPolynomial::random(3, n, d, seed).unwrap();
        for r in pseudo_projection_bound_check(&f).unwrap() {
            prop_assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn iterated_projection_scales_by_dk(seed in any::<u64>(), pick in 0usize..2, n in 1usize..=3, d in 1usize..=3) {
        let k = [3, 5][pick];
        let f = CyclicPolynomial::random(k, n, d, seed).unwrap();
        prop_assert!(bhlab::suite::iterated_scaling_error(&f).unwrap() <= 1e-10);
    }

    #[test]
    fn inseparable_groups_collapse(seed in any::<u64>(), n in 2usize..=3, d in 2usize..=4) {
        let f = CyclicPolynomial::random(3, n, d, seed).unwrap();
        for (_, part) in support_split(&f) {
            for g in inseparable_partition(&part).groups {
                let r = property_b_check(&g.poly).unwrap();
                prop_assert!(r.spread <= 1e-10);
                prop_assert!(r.at_sqrt_omega <= r.sup_norm * (1.0 + 1e-10) + 1e-10);
            }
        }
    }

    #[test]
    fn measure_moment_system(pick in 0usize..3, u in 0.0f64..1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let k = [3, 5, 7][pick];
        let z = C64::from_polar(epsilon_star(k).unwrap() * u.sqrt(), theta);
        let m = measure_for_point(k, z).unwrap();
        prop_assert!(m.weights.iter().all(|&w| w >= -1e-12));
        prop_assert!((m.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for e in 1..k {
            prop_assert!((m.moment(e) - z.powu(e as u32)).norm() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn pauli_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let a = random_hermitian(1 << n, seed);
        let obs = pauli_expand(&a, n).unwrap();
        prop_assert!(pauli_synthesize(&obs).unwrap().max_abs_diff(&a) <= 1e-12);
        for (w, c) in obs.iter() {
            prop_assert!(c.im.abs() <= 1e-12);
            prop_assert!(pauli_weight(w) <= obs.degree());
        }
    }

    #[test]
    fn hw_round_trip(seed in any::<u64>(), pick in 0usize..3, n in 1usize..=2) {
        let k: usize = [3, 5, 7][pick];
        prop_assume!(k.pow(n as u32) <= 49);
        let a = random_hermitian(k.pow(n as u32), seed);
        let obs = hw_expand(&a, k, n).unwrap();
        prop_assert!(hw_synthesize(&obs).unwrap().max_abs_diff(&a) <= 1e-10);
    }

    #[test]
    fn qubit_density_valid(n in 1usize..=4, eps in any::<u64>()) {
        let (t, m) = qubit_density(n, eps & ((1 << (3 * n)) - 1)).unwrap().validity().unwrap();
        prop_assert!(t <= 1e-12);
        prop_assert!(m >= -1e-12);
    }

    #[test]
    fn qudit_density_valid(pick in 0usize..2, exps in prop::collection::vec(0usize..7, 12)) {
        let k = [3, 5][pick];
        let exps: Vec<usize> = exps.iter().take((k + 1) * 2).map(|e| e % k).collect();
        let (t, m) = qudit_density(k, 2, &exps).unwrap().validity().unwrap();
        prop_assert!(t <= 1e-12);
        prop_assert!(m >= -1e-12);
    }

    #[test]
    fn qubit_reduction_law_and_degree(seed in any::<u64>(), n in 1usize..=3, d in 1usize..=2) {
        let (err, deg_a, deg_f) = bhlab::suite::qubit_reduction_error(n, d, 10, seed).unwrap();
        prop_assert!(err <= 1e-10);
        prop_assert_eq!(deg_a, deg_f);
    }

    #[test]
    fn duality_bound(seed in any::<u64>(), n in 1usize..=3) {
        let a = random_hermitian(1 << n, seed);
        let d = pauli_expand(&a, n).unwrap().degree().max(1);
        let r = qubit_bh_check(&a, n, default_qubit_bh_constant(d).unwrap()).unwrap();
        prop_assert!(r.reduced_sup <= r.operator_norm + 1e-9);
        prop_assert!(r.pass);
    }
}

#[test]
fn basis_orthogonality() {
    for n in 1..=2usize {
        let words: Vec<u64> = (0..4u64.pow(n as u32)).collect();
        let mats: Vec<_> = words.iter().map(|&w| pauli_word_matrix(w, n).unwrap()).collect();
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let ip = a.frobenius_inner(b);
                let want = if i == j { (1 << n) as f64 } else { 0.0 };
                assert!((ip - C64::new(want, 0.0)).norm() <= 1e-12);
            }
        }
    }
    for k in [3usize, 5] {
        for n in 1..=2usize {
            let total = k.pow(2 * n as u32);
            let mats: Vec<_> = (0..total)
                .map(|idx| {
                    let digits: Vec<u8> = (0..2 * n).map(|p| ((idx / k.pow(p as u32)) % k) as u8).collect();
                    hw_word(k, &digits[..n], &digits[n..]).unwrap()
                })
                .collect();
            let kn = k.pow(n as u32) as f64;
            for (i, a) in mats.iter().enumerate() {
                for (j, b) in mats.iter().enumerate() {
                    let ip = a.frobenius_inner(b);
                    let want = if i == j { kn } else { 0.0 };
                    assert!((ip - C64::new(want, 0.0)).norm() <= 1e-10, "K={k} n={n} {i} {j}");
                }
            }
        }
    }
}

#[test]
fn eigenvector_phase_does_not_change_projector() {
    let (x, _) = clock_shift(5).unwrap();
    for (_, v) in bhlab::linalg::eigen_normal(&x).unwrap() {
        let rotated: Vec<C64> = v.iter().map(|c| c * C64::from_polar(1.0, 0.7)).collect();
        let p = |u: &[C64]| bhlab::linalg::CMatrix::from_fn(u.len(), u.len(), |i, j| u[i] * u[j].conj());
        assert!(p(&v).max_abs_diff(&p(&rotated)) <= 1e-14);
    }
}

#[test]
fn sigma_cover_for_small_primes() {
    for k in [2usize, 3, 5, 7, 11] {
        let r = sigma_cover_check(k).unwrap();
        assert!(r.pass && r.disjoint_off_origin, "K={k}");
        assert_eq!(r.covered, k * k);
    }
}
