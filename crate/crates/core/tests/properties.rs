mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratio_limit::charpoly::{root_set, square_free_decompose, Polynomial, RootOptions};
use ratio_limit::decompose::{
    analyze, build_basis_matrix, reconstruct_term, solve_coefficients, Classification, Config, Outcome,
};
use ratio_limit::numerics::{BigComplex, BigReal, Exactness, GaussianRational};
use ratio_limit::recurrence::{
    empirical_ratio, iterate, ratio_map_step, ratio_vector, RatioStatus, RecurrenceInstance,
};

use common::{distance, gi, signature_from_roots, Planted};

fn small() -> impl Strategy<Value = i64> {
    -3i64..=3
}

/// Random integer signatures with `bₙ ≠ 0`.
fn signature(max_n: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
    (1..=max_n)
        .prop_flat_map(|n| (prop::collection::vec(small(), n - 1), prop_oneof![-3i64..=-1, 1i64..=3]))
        .prop_map(|(mut head, last)| {
            head.push(last);
            head.into_iter().map(GaussianRational::from_integer).collect()
        })
}

fn instance(max_n: usize) -> impl Strategy<Value = RecurrenceInstance> {
    signature(max_n)
        .prop_flat_map(|sig| {
            let n = sig.len();
            (Just(sig), prop::collection::vec(-4i64..=4, n))
        })
        .prop_filter("nonzero solution", |(_, init)| init.iter().any(|&x| x != 0))
        .prop_map(|(sig, init)| {
            RecurrenceInstance::new(sig, init.into_iter().map(GaussianRational::from_integer).collect()).unwrap()
        })
}

fn planted(seed: u64) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::corpus(&mut rng, 1).pop().unwrap()
}

fn root_options() -> RootOptions {
    RootOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplicities_sum_to_order(sig in signature(6)) {
        let rs = root_set(&sig, Exactness::Exact, &root_options()).unwrap();
        prop_assert_eq!(rs.entries().iter().map(|e| e.multiplicity).sum::<usize>(), sig.len());
        for (i, a) in rs.entries().iter().enumerate() {
            prop_assert!(!a.value.is_zero());
            for b in &rs.entries()[i + 1..] {
                let gap = a.value.dist(&b.value).with_precision(64);
                prop_assert!(gap.cmp_value(&a.radius.add(&b.radius).with_precision(64)).is_gt());
            }
        }
    }

    #[test]
    fn residual_at_zeros_is_within_radius_bound(sig in signature(6)) {
        let p = Polynomial::characteristic(&sig).unwrap();
        let rs = root_set(&sig, Exactness::Exact, &root_options()).unwrap();
        for e in rs.entries() {
            // |P(λ̃)| ≤ ρ · max over the disk of |P'| when a true zero lies within ρ
            let prec = e.value.prec();
            let value = p.eval(&e.value).modulus().to_f64();
            let reach = e.value.modulus().add(&e.radius).to_f64();
            let dp: f64 = p.derivative().coeffs().iter().enumerate()
                .map(|(k, c)| BigComplex::from_gaussian(c, prec).modulus().to_f64() * reach.powi(k as i32))
                .sum();
            let slack = 2f64.powi(-(prec as i32) + 16) * (1.0 + reach).powi(sig.len() as i32 + 1);
            prop_assert!(value <= e.radius.to_f64() * dp * 2.0 + slack, "{value:e}");
        }
    }

    #[test]
    fn square_free_factors_are_square_free(sig in signature(6)) {
        let p = Polynomial::characteristic(&sig).unwrap();
        for sf in square_free_decompose(&p) {
            prop_assert!(sf.factor.gcd(&sf.factor.derivative()).is_constant());
        }
    }

    #[test]
    fn planted_roots_are_recovered(seed in any::<u64>()) {
        let p = planted(seed);
        let rs = root_set(p.instance.signature(), Exactness::Exact, &root_options()).unwrap();
        prop_assert_eq!(rs.len(), p.roots.len());
        for (r, m) in &p.roots {
            let hit = rs.entries().iter().find(|e| distance(&e.value, r) <= e.radius.to_f64().max(1e-70));
            prop_assert!(hit.is_some_and(|e| e.multiplicity == *m), "{r} x{m} not recovered");
        }
    }

    #[test]
    fn approximate_path_recovers_planted_multiplicities(seed in any::<u64>()) {
        let p = planted(seed);
        let rs = root_set(p.instance.signature(), Exactness::Approximate, &root_options()).unwrap();
        let mut got: Vec<usize> = rs.entries().iter().map(|e| e.multiplicity).collect();
        let mut want: Vec<usize> = p.roots.iter().map(|r| r.1).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn recurrence_identity_holds(inst in instance(6)) {
        let terms = iterate(&inst, 40);
        let n = inst.order();
        for t in n..terms.len() {
            let mut acc = terms[t].clone();
            for (i, b) in inst.signature().iter().enumerate() {
                acc = acc - b * &terms[t - 1 - i];
            }
            prop_assert!(acc.is_zero());
        }
    }

    #[test]
    fn ratio_map_shifts_exact_ratios(inst in instance(5)) {
        let n = inst.order();
        let terms = iterate(&inst, 40);
        for s in 0..terms.len() - n - 1 {
            if let (Some(z), Some(next)) = (ratio_vector(&terms, s, n), ratio_vector(&terms, s + 1, n)) {
                prop_assert_eq!(ratio_map_step(inst.signature(), &z).unwrap(), next);
            }
        }
    }

    #[test]
    fn converged_ratio_is_a_zero(inst in instance(5)) {
        let tol = 1e-12;
        if let RatioStatus::Converged(v) = empirical_ratio(&inst, 200, tol).status {
            let rs = root_set(inst.signature(), Exactness::Exact, &root_options()).unwrap();
            let nearest = rs.entries().iter().map(|e| e.value.dist(&v).to_f64()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 10.0 * tol, "{nearest:e}");
        }
    }

    #[test]
    fn reconstruction_is_within_bound(inst in instance(6)) {
        let rs = root_set(inst.signature(), Exactness::Exact, &root_options()).unwrap();
        let d = solve_coefficients(&rs, &build_basis_matrix(&rs), inst.initial()).unwrap();
        prop_assert_eq!(d.len(), inst.order());
        let n = inst.order() as i64;
        for (t, exact) in iterate(&inst, 50).iter().enumerate() {
            let k = t as i64 - n + 1;
            let r = reconstruct_term(&d, k);
            let exact = BigComplex::from_gaussian(exact, 1024);
            let diff = r.value.with_precision(1024).dist(&exact).with_precision(64);
            prop_assert!(diff.cmp_value(&r.error).is_le(), "k={k}");
            let scale = exact.modulus().to_f64().max(1.0);
            prop_assert!(r.error.to_f64() <= 1e-9 * scale, "k={k} bound {:e}", r.error.to_f64());
        }
    }

    #[test]
    fn scaling_initial_conditions_changes_nothing(seed in any::<u64>(), re in -5i64..=5, im in -5i64..=5) {
        prop_assume!(re != 0 || im != 0);
        let inst = planted(seed).instance;
        let cfg = Config::default();
        let a = analyze(&inst, &cfg).unwrap();
        let b = analyze(&inst.scaled(&gi(re, im)), &cfg).unwrap();
        let kind = |o: &Outcome| std::mem::discriminant(o);
        prop_assert_eq!(kind(&a.verdict.outcome), kind(&b.verdict.outcome));
        prop_assert_eq!(a.verdict.limit(), b.verdict.limit());
        let surviving = |s: &Option<ratio_limit::decompose::SolutionCharPoly>| {
            s.as_ref().map(|s| s.surviving.iter().map(|z| (z.zero_index, z.top_power)).collect::<Vec<_>>())
        };
        prop_assert_eq!(surviving(&a.solution), surviving(&b.solution));
    }

    #[test]
    fn dubeau_implies_limit_at_dominant_zero(seed in any::<u64>()) {
        let inst = planted(seed).instance;
        let a = analyze(&inst, &Config::default()).unwrap();
        if a.verdict.dubeau_holds == Some(true) {
            let rs = a.roots.as_ref().unwrap();
            let policy = ratio_limit::decompose::ZeroPolicy::for_precision(rs.precision());
            let Classification::AsymptoticallySimple { dominant, .. } =
                ratio_limit::decompose::classify_char_poly(rs, &policy) else {
                    return Err(TestCaseError::fail("dubeau holds without a dominant zero"));
                };
            prop_assert_eq!(a.verdict.limit(), Some(&rs.get(dominant).value));
        }
    }

    #[test]
    fn analysis_is_deterministic(inst in instance(5)) {
        let cfg = Config::default();
        let a = serde_json::to_string(&analyze(&inst, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&inst, &cfg).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn planted_distinct_roots_give_small_residual(seed in any::<u64>()) {
        let p = planted(seed);
        let distinct: Vec<(GaussianRational, usize)> = p.roots.iter().map(|(r, _)| (r.clone(), 1)).collect();
        let n = distinct.len();
        let inst = RecurrenceInstance::new(signature_from_roots(&distinct), p.instance.initial()[..n].to_vec());
        prop_assume!(inst.as_ref().is_ok_and(|i| !i.is_zero_solution()));
        let inst = inst.unwrap();
        let rs = root_set(inst.signature(), Exactness::Exact, &root_options()).unwrap();
        let d = solve_coefficients(&rs, &build_basis_matrix(&rs), inst.initial()).unwrap();
        // the rows of C·c are the initial conditions F₀, F₋₁, …
        for (t, a) in inst.initial().iter().enumerate() {
            let k = t as i64 - n as i64 + 1;
            let r = reconstruct_term(&d, k);
            let diff: BigReal = r.value.dist(&BigComplex::from_gaussian(a, r.value.prec())).with_precision(64);
            prop_assert!(diff.cmp_value(&r.error).is_le());
        }
    }
}
