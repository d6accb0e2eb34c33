//! Executable instances of the structural theorems about braided products.

use std::sync::Arc;

use crate::braided::{
    braided_morphism, check_trivial_action, BraidedAlgebra, BraidedCore, TrivialActionReport,
};
use crate::error::{Error, Result};
use crate::galg::{GAlgebra, GMorphism, MorphismReport};
use crate::group::FiniteQuantumGroup;
use crate::linalg::{
    embed_legs, partial_trace, singular_values, solve_linear_map, subspace_intersect, CMatrix, LegSpace, LinearMap,
    OperatorSubspace,
};
use crate::rmatrix::{check_rmatrix, opposite_rmatrix, RMatrix, RMatrixReport};
use crate::tol;

/// Recovery of `R` from `R̃ = V₁α*V₂β*V₁αV₂β`.
#[derive(Debug, Clone)]
pub struct ExtractionResult {
    pub r_tilde: CMatrix,
    /// Relative Hilbert–Schmidt distance of `R̃` from `Â⊗Â⊗ℂI`.
    pub last_leg_residual: f64,
    pub recovered_r: CMatrix,
    pub axiom_report: RMatrixReport,
    /// Entrywise distance between the recovered `R` and the `R` the core was built from.
    pub round_trip: f64,
}

pub fn extract_rmatrix(core: &BraidedCore) -> Result<ExtractionResult> {
    let g = core.group();
    let n = g.dim_h();
    let m = core.carrier_dim();
    let (v1a, v2b) = core.leg_unitaries()?;
    let r_tilde = v1a.adjoint().matmul(&v2b.adjoint()).matmul(&v1a).matmul(&v2b);
    let legs = LegSpace::new(vec![n, n, m])?;
    let scalars = OperatorSubspace::from_orthonormal(
        LegSpace::single(m),
        vec![CMatrix::identity(m).scale_real(1.0 / (m as f64).sqrt())],
    )?;
    let target = g.a_hat().tensor(g.a_hat()).tensor(&scalars);
    let last_leg_residual = target.residual(&r_tilde);
    let recovered_r = partial_trace(&r_tilde, &legs, 3)?.scale_real(1.0 / m as f64);
    let axiom_report = check_rmatrix(g, &recovered_r)?;
    let round_trip = recovered_r.max_abs_diff(core.rmatrix().r());
    Ok(ExtractionResult {
        r_tilde,
        last_leg_residual,
        recovered_r,
        axiom_report,
        round_trip,
    })
}

/// Commutators between invariant elements of one factor and all of the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationReport {
    pub invariant_x: usize,
    pub invariant_y: usize,
    /// `max ‖[α(x), β(y)]‖` with `x` invariant.
    pub left_invariant: f64,
    /// `max ‖[α(x), β(y)]‖` with `y` invariant.
    pub right_invariant: f64,
}

impl CommutationReport {
    pub fn max(&self) -> f64 {
        self.left_invariant.max(self.right_invariant)
    }
}

pub fn invariant_commutation_test(product: &BraidedAlgebra) -> Result<CommutationReport> {
    let inv_x = product.x().invariant_subspace()?;
    let inv_y = product.y().invariant_subspace()?;
    let alpha_all: Vec<CMatrix> = product.alpha().map().images().to_vec();
    let beta_all: Vec<CMatrix> = product.beta().map().images().to_vec();
    let worst = |left: &[CMatrix], right: &[CMatrix]| {
        let mut w: f64 = 0.0;
        for a in left {
            for b in right {
                w = w.max(a.commutator(b).max_abs());
            }
        }
        w
    };
    let alpha_inv: Vec<CMatrix> = inv_x.basis().iter().map(|x| product.alpha().apply(x)).collect();
    let beta_inv: Vec<CMatrix> = inv_y.basis().iter().map(|y| product.beta().apply(y)).collect();
    Ok(CommutationReport {
        invariant_x: inv_x.dim(),
        invariant_y: inv_y.dim(),
        left_invariant: worst(&alpha_inv, &beta_all),
        right_invariant: worst(&alpha_all, &beta_inv),
    })
}

/// Images of `X⊠Z` and `Y⊠T` inside `((X⊠Y)⊠Z)⊠T` and their intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionReport {
    pub names: [String; 4],
    pub ambient_dim: usize,
    pub xz_dim: usize,
    pub yt_dim: usize,
    pub intersection_dim: usize,
    /// Morphism residuals of the two embeddings.
    pub embeddings: f64,
    /// Distance of the unit from the intersection.
    pub unit_residual: f64,
}

pub fn intersection_triviality_test(
    x: &Arc<GAlgebra>,
    y: &Arc<GAlgebra>,
    z: &Arc<GAlgebra>,
    t: &Arc<GAlgebra>,
    core: &Arc<BraidedCore>,
) -> Result<IntersectionReport> {
    let build = |a: &Arc<GAlgebra>, b: &Arc<GAlgebra>| BraidedAlgebra::build(a.clone(), b.clone(), core.clone());
    let xy = build(x, y)?;
    let xyz = build(xy.object(), z)?;
    let w = build(xyz.object(), t)?;
    let xz = build(x, z)?;
    let yt = build(y, t)?;
    let id_z = GMorphism::identity(z.clone())?;
    let id_t = GMorphism::identity(t.clone())?;
    // x⊠z ↦ x⊠1⊠z⊠1
    let into_xyz = braided_morphism(xy.alpha(), &id_z, &xz, &xyz)?;
    let first = w.alpha().compose(&into_xyz.morphism)?;
    // y⊠t ↦ 1⊠y⊠1⊠t
    let y_in_xyz = xyz.alpha().compose(xy.beta())?;
    let second = braided_morphism(&y_in_xyz, &id_t, &yt, &w)?.morphism;
    let s1 = first.map().range()?;
    let s2 = second.map().range()?;
    let meet = subspace_intersect(&s1, &s2)?;
    let unit = CMatrix::identity(w.object().carrier_dim());
    Ok(IntersectionReport {
        names: [x.name().into(), y.name().into(), z.name().into(), t.name().into()],
        ambient_dim: w.object().dim(),
        xz_dim: s1.dim(),
        yt_dim: s2.dim(),
        intersection_dim: meet.dim(),
        embeddings: first.report().max().max(second.report().max()),
        unit_residual: meet.residual(&unit),
    })
}

/// `Φ` between the cores built from the regular and the amplified Heisenberg pair.
#[derive(Debug, Clone)]
pub struct UniquenessWitness {
    pub core1: Arc<BraidedCore>,
    pub core2: Arc<BraidedCore>,
    pub phi: LinearMap,
    pub solve: f64,
    /// `‖Φ∘α₁ − α₂‖`
    pub triangle_alpha: f64,
    /// `‖Φ∘β₁ − β₂‖`
    pub triangle_beta: f64,
    /// `Φ^{Aℂ}` against the identity under `X⊠ℂ ≅ X`.
    pub normalization: f64,
    pub morphism: MorphismReport,
    pub min_singular_value: f64,
    /// Condition number of `Φ` between orthonormal bases.
    pub condition: f64,
}

impl UniquenessWitness {
    pub fn max_residual(&self) -> f64 {
        self.solve
            .max(self.triangle_alpha)
            .max(self.triangle_beta)
            .max(self.normalization)
            .max(self.morphism.max())
    }
}

pub fn uniqueness_test(r: &RMatrix) -> Result<UniquenessWitness> {
    let core1 = Arc::new(BraidedCore::build(r)?);
    let core2 = Arc::new(BraidedCore::build_with_pair(r, r.group().pair().amplified(2))?);
    let (phi, solve) = solve_on_products(&core1, &core2)?;
    let triangle_alpha = phi.compose(core1.gamma()).distance(core2.gamma());
    let triangle_beta = phi.compose(core1.delta_emb()).distance(core2.delta_emb());
    let morphism = *GMorphism::unverified(core1.object().clone(), core2.object().clone(), phi.clone())?.report();

    let coords = phi.coordinate_matrix(core2.algebra());
    let sv: Vec<f64> = crate::linalg::svd(&coords)?.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    let g = r.group().clone();
    let a = Arc::new(GAlgebra::delta_action(g.clone())?);
    let c = Arc::new(GAlgebra::scalars(g)?);
    let p1 = BraidedAlgebra::build(a.clone(), c.clone(), core1.clone())?;
    let p2 = BraidedAlgebra::build(a, c, core2.clone())?;
    let (phi_ac, _) = solve_between(&p1, &p2)?;
    let normalization = phi_ac
        .compose(p1.alpha().map())
        .distance(p2.alpha().map())
        .max(phi_ac.compose(p1.beta().map()).distance(p2.beta().map()));

    Ok(UniquenessWitness {
        core1,
        core2,
        phi,
        solve,
        triangle_alpha,
        triangle_beta,
        normalization,
        morphism,
        min_singular_value: smin,
        condition,
    })
}

fn solve_on_products(c1: &BraidedCore, c2: &BraidedCore) -> Result<(LinearMap, f64)> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let g = c1.group();
    for a in g.a().basis() {
        for b in g.a().basis() {
            inputs.push(c1.gamma().apply(a).matmul(&c1.delta_emb().apply(b)));
            outputs.push(c2.gamma().apply(a).matmul(&c2.delta_emb().apply(b)));
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    if solved.residual > tol::SOLVE {
        return Err(Error::invariant("Φ is well defined on γ(a)δ(b)", solved.residual, tol::SOLVE));
    }
    Ok((solved.map.restrict(c1.algebra()), solved.residual))
}

fn solve_between(p1: &BraidedAlgebra, p2: &BraidedAlgebra) -> Result<(LinearMap, f64)> {
    let solved = solve_linear_map(&p1.product_basis(), &p2.product_basis())?;
    if solved.residual > tol::SOLVE {
        return Err(Error::invariant("Φ^{XY} is well defined on α(x)β(y)", solved.residual, tol::SOLVE));
    }
    Ok((solved.map, solved.residual))
}

/// One entry of the trivial-action comparison.
#[derive(Debug, Clone)]
pub struct EquivalenceEntry {
    /// `"against D"`, `"trivial factor"` or `"invariant commutation"`.
    pub property: &'static str,
    pub product: String,
    pub residual: f64,
    pub pass: bool,
}

/// Instances of the three equivalent forms of the trivial-action property over one `(G, R)`.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub entries: Vec<EquivalenceEntry>,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// Objects with a nontrivial action used by the equivalence test.
pub fn acting_pool(g: &Arc<FiniteQuantumGroup>) -> Result<Vec<Arc<GAlgebra>>> {
    let mut pool = vec![Arc::new(GAlgebra::delta_action(g.clone())?)];
    if !g.gradings().is_empty() {
        pool.push(Arc::new(GAlgebra::clifford1_graded(g.clone())?));
    }
    Ok(pool)
}

pub fn trivial_action_equivalence(core: &Arc<BraidedCore>) -> Result<EquivalenceReport> {
    let g = core.group().clone();
    let d = Arc::new(GAlgebra::two_point(g.clone())?);
    let c = Arc::new(GAlgebra::scalars(g.clone())?);
    let m2 = Arc::new(GAlgebra::trivial_matrix(2, g.clone())?);
    let acting = acting_pool(&g)?;
    let build = |a: &Arc<GAlgebra>, b: &Arc<GAlgebra>| BraidedAlgebra::build(a.clone(), b.clone(), core.clone());
    let mut entries = Vec::new();
    let mut push_entry = |property: &'static str, p: &BraidedAlgebra, rep: TrivialActionReport| {
        entries.push(EquivalenceEntry {
            property,
            product: p.object().name().to_string(),
            residual: rep.max(),
            pass: rep.passes(tol::CHECK),
        });
    };
    let mut samples = acting.clone();
    samples.push(c.clone());
    for x in &samples {
        let xd = build(x, &d)?;
        push_entry("against D", &xd, check_trivial_action(&xd)?);
        let dx = build(&d, x)?;
        push_entry("against D", &dx, check_trivial_action(&dx)?);
        for t in [&c, &m2] {
            let xt = build(x, t)?;
            push_entry("trivial factor", &xt, check_trivial_action(&xt)?);
            let tx = build(t, x)?;
            push_entry("trivial factor", &tx, check_trivial_action(&tx)?);
        }
    }
    for x in &samples {
        for y in &samples {
            let p = build(x, y)?;
            let rep = invariant_commutation_test(&p)?;
            entries.push(EquivalenceEntry {
                property: "invariant commutation",
                product: p.object().name().to_string(),
                residual: rep.max(),
                pass: rep.max() <= tol::CHECK,
            });
        }
    }
    Ok(EquivalenceReport { entries })
}

/// The same pipeline for left actions, run through the opposite group.
#[derive(Debug, Clone)]
pub struct LeftActionReport {
    pub opposite_core: Arc<BraidedCore>,
    /// `‖V₂βV₁α − R₁₂V₁αV₂β‖` with the bicharacter of the original group.
    pub left_braiding: f64,
    pub extraction: ExtractionResult,
    /// Entrywise distance between the extracted matrix and `R*`.
    pub star_round_trip: f64,
}

pub fn left_action_suite(r: &RMatrix) -> Result<LeftActionReport> {
    let g = r.group();
    let opp = Arc::new(g.opposite()?);
    let r_opp = opposite_rmatrix(r, opp)?;
    let core = Arc::new(BraidedCore::build(&r_opp)?);
    let (v1a, v2b) = core.leg_unitaries_for(g.v())?;
    let n = g.dim_h();
    let legs = LegSpace::new(vec![n, n, core.carrier_dim()])?;
    let r12 = embed_legs(r.r(), &[1, 2], &legs)?;
    let scale = g.v().max_abs().powi(2);
    let left_braiding = v2b.matmul(&v1a).max_abs_diff(&r12.matmul(&v1a).matmul(&v2b)) / scale;
    let extraction = extract_rmatrix(&core)?;
    let star_round_trip = extraction.recovered_r.max_abs_diff(&r.r().adjoint());
    Ok(LeftActionReport {
        opposite_core: core,
        left_braiding,
        extraction,
        star_round_trip,
    })
}

/// Dimension of the center of `X`.
pub fn center_dim(x: &GAlgebra) -> Result<usize> {
    Ok(x.algebra().center()?.dim())
}

/// Smallest-to-largest singular value ratio of the products `α(x)β(y)`; zero
/// means the products are linearly dependent.
pub fn product_independence(p: &BraidedAlgebra) -> f64 {
    let sv = singular_values(&p.product_basis());
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}
