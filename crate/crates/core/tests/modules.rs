use std::sync::Arc;

use braidcat::algebra::ClosureResidual;
use braidcat::braided::{braided_morphism, BraidedAlgebra, BraidedCore};
use braidcat::galg::{tensor_with_a, GAlgebra, GMorphism};
use braidcat::linalg::{pauli, span_close, subspace_equal, subspace_intersect, CMatrix, LegSpace};
use braidcat::rmatrix::enumerate_bicharacter_rmatrices;
use braidcat::specs::{builtin_group, load_object};
use braidcat::theorems::invariant_commutation_test;

const TOL: f64 = 1e-9;

fn z2() -> Arc<braidcat::group::FiniteQuantumGroup> {
    Arc::new(builtin_group("Z2").unwrap())
}

fn sign_core() -> Arc<BraidedCore> {
    let r = enumerate_bicharacter_rmatrices(&z2()).unwrap().remove(1);
    Arc::new(BraidedCore::build(&r).unwrap())
}

fn object(core: &BraidedCore, name: &str) -> Arc<GAlgebra> {
    Arc::new(load_object(core.group(), name).unwrap())
}

fn map_distance(f: &GMorphism, g: &GMorphism) -> f64 {
    f.source()
        .basis()
        .iter()
        .map(|x| f.apply(x).max_abs_diff(&g.apply(x)))
        .fold(0.0, f64::max)
}

#[test]
fn pauli_square_and_small_spans() {
    let sx = pauli::x();
    let xx = sx.kron(&sx);
    assert!(xx.matmul(&xx).max_abs_diff(&CMatrix::identity(4)) <= 1e-15);

    let amb = LegSpace::single(2);
    let s = span_close(&[CMatrix::identity(2), sx.clone(), sx.matmul(&sx)], &amb).unwrap();
    assert_eq!(s.dim(), 2);

    let a = span_close(&[CMatrix::identity(2), sx], &amb).unwrap();
    let b = span_close(&[CMatrix::identity(2), pauli::z()], &amb).unwrap();
    let meet = subspace_intersect(&a, &b).unwrap();
    let unit = span_close(&[CMatrix::identity(2)], &amb).unwrap();
    assert_eq!(meet.dim(), 1);
    assert!(subspace_equal(&meet, &unit).unwrap().equal);
}

#[test]
fn groups_satisfy_structure_identities_tightly() {
    for name in ["Z2", "Z3"] {
        let g = builtin_group(name).unwrap();
        assert_eq!(g.a().dim(), g.dim_h());
        assert_eq!(g.a_hat().dim(), g.dim_h());
        assert!(g.check_bicharacter().max() <= 1e-12);
        let d = g.diagnostics().unwrap();
        assert!(d.heisenberg.max(d.coassociativity).max(d.dual_coassociativity) <= 1e-12);
    }
}

#[test]
fn delta_action_satisfies_podles_condition() {
    for name in ["Z2", "Z3"] {
        let g = Arc::new(builtin_group(name).unwrap());
        let x = load_object(&g, "delta_action").unwrap();
        let rep = x.report();
        assert!(rep.podles <= TOL, "{name}: {rep:?}");
        assert!(rep.coassociativity <= 1e-12);
        assert!(rep.injectivity > TOL);
    }
}

#[test]
fn morphisms_compose_and_respect_identities() {
    let g = z2();
    let x = Arc::new(load_object(&g, "delta_action").unwrap());
    let (xa, rho) = tensor_with_a(x.clone()).unwrap();
    assert!(rho.report().max() <= TOL);
    assert_eq!(rho.rank(), x.dim());

    let left = GMorphism::identity(xa.clone()).unwrap().compose(&rho).unwrap();
    let right = rho.compose(&GMorphism::identity(x.clone()).unwrap()).unwrap();
    assert!(map_distance(&left, &rho) <= TOL);
    assert!(map_distance(&right, &rho) <= TOL);

    let scalars = Arc::new(load_object(&g, "C").unwrap());
    let unit = GMorphism::unit_of(scalars, x.clone()).unwrap();
    let through = rho.compose(&unit).unwrap();
    let one = through.source().basis()[0].clone();
    let image = through.apply(&one);
    let expected = xa.unit().scale(one[(0, 0)]);
    assert!(image.max_abs_diff(&expected) <= TOL);
}

#[test]
fn braided_product_of_injective_morphisms_is_injective() {
    let core = sign_core();
    let x = object(&core, "delta_action");
    let y = object(&core, "clifford1_graded");
    let (xa, rho) = tensor_with_a(x.clone()).unwrap();
    let id_y = GMorphism::identity(y.clone()).unwrap();

    let source = BraidedAlgebra::build(x.clone(), y.clone(), core.clone()).unwrap();
    let target = BraidedAlgebra::build(xa, y.clone(), core.clone()).unwrap();
    let prod = braided_morphism(&rho, &id_y, &source, &target).unwrap();
    assert!(prod.solve <= 1e-8);
    assert!(prod.morphism.report().max() <= TOL);
    assert_eq!(prod.morphism.rank(), source.object().dim());

    // (φ⊠ψ)∘α = α′∘φ and (φ⊠ψ)∘β = β′∘ψ
    let lhs = prod.morphism.compose(source.alpha()).unwrap();
    let rhs = target.alpha().compose(&rho).unwrap();
    assert!(map_distance(&lhs, &rhs) <= TOL);
    let lhs = prod.morphism.compose(source.beta()).unwrap();
    let rhs = target.beta().compose(&id_y).unwrap();
    assert!(map_distance(&lhs, &rhs) <= TOL);

    let id_x = GMorphism::identity(x).unwrap();
    let id = braided_morphism(&id_x, &id_y, &source, &source).unwrap();
    let expected = GMorphism::identity(source.object().clone()).unwrap();
    assert!(map_distance(&id.morphism, &expected) <= TOL);
}

#[test]
fn invariant_subspaces_are_closed_subalgebras() {
    let g = z2();
    for (name, dim) in [("delta_action", 1), ("clifford1_graded", 1), ("D", 2), ("trivial:2", 4), ("C", 1)] {
        let x = load_object(&g, name).unwrap();
        let fixed = x.invariant_subspace().unwrap();
        assert_eq!(fixed.dim(), dim, "{name}");
        assert!(fixed.residual(&x.unit()) <= TOL, "{name}");
        assert!(ClosureResidual::of(&fixed).max() <= TOL, "{name}");
        let unit = x.group().unit();
        for b in fixed.basis() {
            assert!(x.rho().apply(b).max_abs_diff(&b.kron(&unit)) <= TOL);
        }
    }
}

#[test]
fn scalar_form_is_only_claimed_for_scalars() {
    let g = z2();
    let x = load_object(&g, "delta_action").unwrap();
    let delta0 = CMatrix::unit(2, 0, 0);
    let s = x.scalar_coefficient_check(&delta0).unwrap();
    assert!(s.lambda.is_none());
    assert!(s.off_form_residual > 0.1);

    let u = CMatrix::identity(2).scale(num_complex::Complex64::new(0.0, 3.0));
    let s = x.scalar_coefficient_check(&u).unwrap();
    assert!((s.lambda.unwrap() - num_complex::Complex64::new(0.0, 3.0)).norm() <= TOL);
    assert!(s.conclusion_residual <= TOL);
}

#[test]
fn commutation_test_does_not_overclaim() {
    let core = sign_core();
    let cl = object(&core, "clifford1_graded");
    let p = BraidedAlgebra::build(cl.clone(), cl.clone(), core).unwrap();
    let rep = invariant_commutation_test(&p).unwrap();
    assert_eq!((rep.invariant_x, rep.invariant_y), (1, 1));
    assert!(rep.max() <= TOL);

    let odd = &cl.basis()[1];
    let even = cl.unit();
    let a_odd = p.alpha().apply(odd);
    assert!(a_odd.commutator(&p.beta().apply(odd)).max_abs() > 0.5);
    for y in cl.basis() {
        assert!(p.alpha().apply(&even).commutator(&p.beta().apply(y)).max_abs() <= TOL);
    }
}
