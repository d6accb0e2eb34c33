use std::sync::Arc;

use braidcat::algebra::{word_closure, ClosureResidual};
use braidcat::linalg::{embed_legs, span_close, subspace_equal, subspace_intersect, svd, CMatrix, LegSpace};
use braidcat::report::{Check, Limit, Report};
use braidcat::rmatrix::{check_rmatrix, enumerate_bicharacter_rmatrices, solve_delta_r, RMatrix};
use braidcat::specs::{builtin_group, BUILTIN_GROUPS};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    let seed = std::env::var("BRAIDCAT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0);
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn entries(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    entries(rows * cols).prop_map(move |v| CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

fn square_list(n: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<CMatrix>> {
    prop::collection::vec(matrix(n, n), count)
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

/// Every builtin `(G, R)` pair, smallest groups first.
fn pairs() -> Vec<RMatrix> {
    BUILTIN_GROUPS
        .iter()
        .flat_map(|name| {
            let g = Arc::new(builtin_group(name).unwrap());
            enumerate_bicharacter_rmatrices(&g).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn kron_mixed_product(
        (m, n, m2, n2) in (1usize..=3, 1usize..=3)
            .prop_flat_map(|(a, b)| (matrix(a, a), matrix(b, b), matrix(a, a), matrix(b, b)))
    ) {
        let lhs = m.kron(&n).matmul(&m2.kron(&n2));
        let rhs = m.matmul(&m2).kron(&n.matmul(&n2));
        prop_assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn embed_legs_is_multiplicative(
        dims in prop::collection::vec(1usize..=3, 2..=3),
        pick in any::<prop::sample::Index>(),
        swap in any::<bool>(),
        vals in entries(2 * 81),
    ) {
        let space = LegSpace::new(dims.clone()).unwrap();
        let legs_n = dims.len();
        let a = pick.index(legs_n) + 1;
        let b = if a == legs_n { 1 } else { a + 1 };
        let legs = if swap { vec![b, a] } else { vec![a, b] };
        let d = dims[a - 1] * dims[b - 1];
        let m = CMatrix::from_fn(d, d, |i, j| vals[i * d + j]);
        let n = CMatrix::from_fn(d, d, |i, j| vals[81 + i * d + j]);
        let lhs = embed_legs(&m.matmul(&n), &legs, &space).unwrap();
        let rhs = embed_legs(&m, &legs, &space).unwrap().matmul(&embed_legs(&n, &legs, &space).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-13);
        prop_assert_eq!(embed_legs(&CMatrix::identity(d), &legs, &space).unwrap(), CMatrix::identity(space.total()));
    }

    #[test]
    fn span_close_is_idempotent(n in 2usize..=3, gens in square_list(3, 1..=6)) {
        let gens: Vec<CMatrix> = gens.iter().map(|g| CMatrix::from_fn(n, n, |i, j| g[(i, j)])).collect();
        let amb = LegSpace::single(n);
        let s = span_close(&gens, &amb).unwrap();
        prop_assert!(s.gram_residual() <= 1e-12);
        prop_assert_eq!(s.dim(), gens.len().min(n * n));
        let again = span_close(s.basis(), &amb).unwrap();
        prop_assert_eq!(again.dim(), s.dim());
        prop_assert!(subspace_equal(&s, &again).unwrap().equal);
        for g in &gens {
            prop_assert!(s.residual(g) <= 1e-9);
        }
    }

    #[test]
    fn subspace_equality_is_an_equivalence(gens in square_list(3, 2..=5), mix in entries(25)) {
        let amb = LegSpace::single(3);
        let k = gens.len();
        let s = span_close(&gens, &amb).unwrap();
        // Invertible recombination: identity plus a small strictly upper part.
        let t_gens: Vec<CMatrix> = (0..k)
            .map(|i| {
                let mut m = gens[i].clone();
                for j in i + 1..k {
                    m = &m + &gens[j].scale(mix[i * 5 + j] * 0.3);
                }
                m
            })
            .rev()
            .collect();
        let t = span_close(&t_gens, &amb).unwrap();
        let u = span_close(&t.basis().iter().rev().cloned().collect::<Vec<_>>(), &amb).unwrap();
        prop_assert!(subspace_equal(&s, &s).unwrap().equal);
        prop_assert!(subspace_equal(&s, &t).unwrap().equal);
        prop_assert!(subspace_equal(&t, &s).unwrap().equal);
        prop_assert!(subspace_equal(&t, &u).unwrap().equal && subspace_equal(&s, &u).unwrap().equal);
        if k < 9 {
            let mut bigger = gens.clone();
            bigger.push(CMatrix::from_fn(3, 3, |i, j| mix[(i * 3 + j) % 25] + Complex64::new(0.0, 1.0)));
            let v = span_close(&bigger, &amb).unwrap();
            prop_assert!(!subspace_equal(&s, &v).unwrap().equal);
        }
    }

    #[test]
    fn intersection_lies_in_both(shared in square_list(3, 1..=2), left in square_list(3, 1..=3), right in square_list(3, 1..=3)) {
        let amb = LegSpace::single(3);
        let s_gens: Vec<CMatrix> = shared.iter().chain(&left).cloned().collect();
        let t_gens: Vec<CMatrix> = shared.iter().chain(&right).cloned().collect();
        let s = span_close(&s_gens, &amb).unwrap();
        let t = span_close(&t_gens, &amb).unwrap();
        let meet = subspace_intersect(&s, &t).unwrap();
        prop_assert!(meet.dim() >= shared.len());
        prop_assert!(meet.dim() <= s.dim().min(t.dim()));
        for b in meet.basis() {
            prop_assert!(s.residual(b) <= 1e-9);
            prop_assert!(t.residual(b) <= 1e-9);
        }
        for x in &shared {
            prop_assert!(meet.residual(x) <= 1e-9);
        }
    }

    #[test]
    fn svd_reconstructs(rows in 1usize..=9, cols in 1usize..=9, vals in entries(81), rank_cap in 1usize..=9) {
        // Low-rank inputs stress the convergence test.
        let a = DMatrix::from_fn(rows, rank_cap, |i, j| vals[(i * 9 + j) % 81]);
        let b = DMatrix::from_fn(rank_cap, cols, |i, j| vals[(j * 9 + i + 40) % 81]);
        let m = a * b;
        let s = svd(&m).unwrap();
        let sigma = DMatrix::from_diagonal(&s.singular_values.map(|x| Complex64::new(x, 0.0)));
        prop_assert!((&s.u * sigma * &s.v_t - &m).norm() <= 1e-12 * m.norm().max(1.0));
        prop_assert!(s.singular_values.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn word_closure_is_a_bounded_star_algebra(n in 1usize..=3, gens in square_list(3, 1..=2)) {
        let gens: Vec<CMatrix> = gens.iter().map(|g| CMatrix::from_fn(n, n, |i, j| g[(i, j)])).collect();
        let amb = LegSpace::single(n);
        let alg = word_closure(&gens, &amb).unwrap();
        prop_assert!(alg.dim() <= n * n);
        let closure = ClosureResidual::of(&alg);
        prop_assert!(closure.max() <= 1e-9, "{:?}", closure);
        for g in &gens {
            prop_assert!(alg.residual(g) <= 1e-9);
        }
        let seeded = word_closure(&gens[..1], &amb).unwrap();
        prop_assert!(seeded.dim() <= alg.dim());
    }

    #[test]
    fn corrupted_rmatrix_is_rejected(pair in 0usize..10, entry in any::<prop::sample::Index>(), size in 0.05f64..1.0, phase in 0.0f64..std::f64::consts::TAU) {
        let pairs = pairs();
        let r = &pairs[pair % pairs.len()];
        let mut bad = r.r().clone();
        let n = bad.rows();
        let k = entry.index(n * n);
        bad[(k / n, k % n)] += Complex64::from_polar(size, phase);
        let rep = check_rmatrix(r.group(), &bad).unwrap();
        prop_assert!(rep.max() >= 1e-3, "{:?}", rep);
        prop_assert!(RMatrix::new(r.group().clone(), bad, "corrupted").is_err());
    }

    #[test]
    fn report_json_is_deterministic(vals in prop::collection::vec(-1e3f64..1e3, 1..6), tol in prop::option::of(1e-12f64..1e-4)) {
        let build = || {
            let mut rep = Report::new("test", tol);
            for (i, v) in vals.iter().enumerate() {
                rep.push(Check::new(format!("c{i}"), "x").with("value", *v, Limit::AtMost(1.0)).tol("tiny", v.abs() * 1e-15, 1e-9));
            }
            rep.to_json()
        };
        let a = build();
        prop_assert_eq!(&a, &build());
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        for (i, v) in vals.iter().enumerate() {
            let back = parsed["checks"][i]["residuals"]["value"].as_f64().unwrap();
            prop_assert_eq!(back, *v);
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn rmatrix_pool_satisfies_axioms(pair in 0usize..26) {
        let pairs = pairs();
        let r = &pairs[pair % pairs.len()];
        let rep = check_rmatrix(r.group(), r.r()).unwrap();
        prop_assert!(rep.max() <= 1e-9);
        let (left, right) = r.r_hat_residuals();
        prop_assert!(left.max(right) <= 1e-9);
    }

    #[test]
    fn delta_r_solve_is_deterministic(pair in 0usize..26) {
        let pairs = pairs();
        let r = &pairs[pair % pairs.len()];
        let a = solve_delta_r(r).unwrap();
        let b = solve_delta_r(r).unwrap();
        for x in r.group().a().basis() {
            prop_assert_eq!(a.apply(x), b.apply(x));
        }
    }
}
