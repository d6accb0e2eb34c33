use std::sync::Arc;

use crate::algebra::{word_closure, OperatorAlgebra};
use crate::error::{ensure, Error, Result};
use crate::galg::GAlgebra;
use crate::group::{FiniteQuantumGroup, HeisenbergPair};
use crate::linalg::{embed_legs, flip, map_leg, solve_linear_map, span_close, subspace_equal, CMatrix, LegSpace, LinearMap, OperatorSubspace};
use crate::rmatrix::{solve_delta_r, DeltaR, DeltaRReport, RMatrix};
use crate::tol;

/// Residuals certified while building a [`BraidedCore`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoreReport {
    pub delta_r: DeltaRReport,
    pub dim: usize,
    /// `span(γ(A)δ(A))` against the closed algebra.
    pub span_gamma_delta: f64,
    /// `span(δ(A)γ(A))` against the closed algebra.
    pub span_delta_gamma: f64,
    /// `‖V₁αV₂β − V₂βV₁αR₁₂‖ / ‖V‖²`, entrywise.
    pub braiding: f64,
    /// Well-definedness of the induced action.
    pub rho_solve: f64,
    /// `ℒ(a) = Ad_{V̂απ̂}(β(a)⊗I)`
    pub model_left: f64,
    /// `ℛ(a) = Ad_{V̂απ̂}∘flip∘(π⊗α)Δ(a)`
    pub model_right: f64,
}

/// The model `(γ, δ, γ(A)δ(A))` for `A⊠A` on `H_A ⊗ K`, with
/// `γ(a) = I⊗π(a)` and `δ(a) = (id⊗π̂)Δ_R(a)`.
#[derive(Debug, Clone)]
pub struct BraidedCore {
    rmatrix: RMatrix,
    delta_r: DeltaR,
    pair: HeisenbergPair,
    carrier: LegSpace,
    gamma: LinearMap,
    delta_emb: LinearMap,
    object: Arc<GAlgebra>,
    report: CoreReport,
}

impl BraidedCore {
    /// Builds the core from the group's own Heisenberg pair.
    pub fn build(r: &RMatrix) -> Result<Self> {
        let pair = r.group().pair().clone();
        Self::build_with_pair(r, pair)
    }

    pub fn build_with_pair(r: &RMatrix, pair: HeisenbergPair) -> Result<Self> {
        let g = r.group().clone();
        let n = g.dim_h();
        let k = pair.dim();
        let hh = g.h().tensor(g.h());
        ensure("Heisenberg pair relation", g.heisenberg_residual(&pair), tol::CHECK)?;
        let delta_r = solve_delta_r(r)?;
        let carrier = LegSpace::new(vec![n, k])?;
        let flat = LegSpace::single(n * k);
        let id_n = CMatrix::identity(n);
        let gamma = LinearMap::from_fn(g.a(), flat.clone(), |a| Ok(id_n.kron(&pair.pi().apply(a))))?;
        let delta_emb = LinearMap::from_fn(g.a(), flat.clone(), |a| {
            map_leg(&delta_r.apply(a), &hh, 2, k, |b| Ok(pair.pi_hat().apply(b)))
        })?;

        let mut gens: Vec<CMatrix> = gamma.images().to_vec();
        gens.extend(delta_emb.images().iter().cloned());
        let algebra = word_closure(&gens, &flat)?;

        let mut gd = Vec::new();
        let mut dg = Vec::new();
        for x in gamma.images() {
            for y in delta_emb.images() {
                gd.push(x.matmul(y));
                dg.push(y.matmul(x));
            }
        }
        let span_gamma_delta = subspace_equal(&span_close(&gd, &flat)?, &algebra)?.residual;
        let span_delta_gamma = subspace_equal(&span_close(&dg, &flat)?, &algebra)?.residual;

        let (v1a, v2b) = leg_unitaries(&g, &gamma, &delta_emb)?;
        let three = LegSpace::new(vec![n, n, n * k])?;
        let r12 = embed_legs(r.r(), &[1, 2], &three)?;
        let v_scale = g.v().max_abs().powi(2);
        let braiding = v1a.matmul(&v2b).max_abs_diff(&v2b.matmul(&v1a).matmul(&r12)) / v_scale;

        // induced action: ρ(γ(a)) = (γ⊗id)Δ(a), ρ(δ(a)) = (δ⊗id)Δ(a)
        let lift = |f: &LinearMap, a: &CMatrix| map_leg(&g.delta().apply(a), &hh, 1, n * k, |b| Ok(f.apply(b)));
        let rho_gamma: Vec<CMatrix> = g.a().basis().iter().map(|a| lift(&gamma, a)).collect::<Result<_>>()?;
        let rho_delta: Vec<CMatrix> = g.a().basis().iter().map(|a| lift(&delta_emb, a)).collect::<Result<_>>()?;
        let (rho, rho_solve) = extend_on_products(
            gamma.images(),
            delta_emb.images(),
            &rho_gamma,
            &rho_delta,
        )?;
        ensure("induced action on A⊠A is well defined", rho_solve, tol::SOLVE)?;
        let rho = rho.restrict(&algebra);
        let object = Arc::new(GAlgebra::new(
            "A⊠A",
            g.clone(),
            OperatorAlgebra::new(algebra.clone())?,
            rho,
        )?);

        let (model_left, model_right) = model_self_test(&g, &pair, &delta_r, &gamma, &delta_emb)?;

        let report = CoreReport {
            delta_r: *delta_r.report(),
            dim: algebra.dim(),
            span_gamma_delta,
            span_delta_gamma,
            braiding,
            rho_solve,
            model_left,
            model_right,
        };
        ensure("span γ(A)δ(A) = A⊠A", report.span_gamma_delta, tol::CHECK)?;
        ensure("span δ(A)γ(A) = A⊠A", report.span_delta_gamma, tol::CHECK)?;
        ensure("V₁αV₂β = V₂βV₁αR₁₂", report.braiding, tol::CHECK)?;
        ensure("ℒ = 𝒟∘β", report.model_left, tol::CHECK)?;
        ensure("𝒟∘α = ℛ", report.model_right, tol::CHECK)?;

        Ok(BraidedCore {
            rmatrix: r.clone(),
            delta_r,
            pair,
            carrier,
            gamma,
            delta_emb,
            object,
            report,
        })
    }

    pub fn group(&self) -> &Arc<FiniteQuantumGroup> {
        self.rmatrix.group()
    }

    pub fn rmatrix(&self) -> &RMatrix {
        &self.rmatrix
    }

    pub fn delta_r(&self) -> &DeltaR {
        &self.delta_r
    }

    pub fn pair(&self) -> &HeisenbergPair {
        &self.pair
    }

    /// Legs `[dim H_A, K]`.
    pub fn carrier(&self) -> &LegSpace {
        &self.carrier
    }

    pub fn carrier_dim(&self) -> usize {
        self.carrier.total()
    }

    /// `γ = α^{AA}`.
    pub fn gamma(&self) -> &LinearMap {
        &self.gamma
    }

    /// `δ = β^{AA}`.
    pub fn delta_emb(&self) -> &LinearMap {
        &self.delta_emb
    }

    pub fn algebra(&self) -> &OperatorSubspace {
        self.object.space()
    }

    /// `A⊠A` with its induced action.
    pub fn object(&self) -> &Arc<GAlgebra> {
        &self.object
    }

    pub fn report(&self) -> &CoreReport {
        &self.report
    }

    /// `V₁α = [(id⊗α)V]₁₃` and `V₂β = [(id⊗β)V]₂₃` on `H⊗H⊗core`, for the bicharacter `v`.
    pub fn leg_unitaries_for(&self, v: &CMatrix) -> Result<(CMatrix, CMatrix)> {
        leg_unitaries_with(self.group(), v, &self.gamma, &self.delta_emb)
    }

    /// `V₁α` and `V₂β` for the group's own bicharacter.
    pub fn leg_unitaries(&self) -> Result<(CMatrix, CMatrix)> {
        leg_unitaries(self.group(), &self.gamma, &self.delta_emb)
    }
}

fn leg_unitaries(g: &FiniteQuantumGroup, gamma: &LinearMap, delta: &LinearMap) -> Result<(CMatrix, CMatrix)> {
    leg_unitaries_with(g, g.v(), gamma, delta)
}

fn leg_unitaries_with(g: &FiniteQuantumGroup, v: &CMatrix, gamma: &LinearMap, delta: &LinearMap) -> Result<(CMatrix, CMatrix)> {
    let n = g.dim_h();
    let m = gamma.codomain_dim();
    let hh = g.h().tensor(g.h());
    let three = LegSpace::new(vec![n, n, m])?;
    let va = map_leg(v, &hh, 2, m, |b| Ok(gamma.apply(b)))?;
    let vb = map_leg(v, &hh, 2, m, |b| Ok(delta.apply(b)))?;
    Ok((embed_legs(&va, &[1, 3], &three)?, embed_legs(&vb, &[2, 3], &three)?))
}

/// Solves for the linear map on `span(left·right)` sending `l_i r_j ↦ L_i R_j`
/// and `r_j l_i ↦ R_j L_i`; the residual measures whether this is well defined.
pub(crate) fn extend_on_products(
    left: &[CMatrix],
    right: &[CMatrix],
    left_images: &[CMatrix],
    right_images: &[CMatrix],
) -> Result<(LinearMap, f64)> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (l, li) in left.iter().zip(left_images) {
        for (r, ri) in right.iter().zip(right_images) {
            inputs.push(l.matmul(r));
            outputs.push(li.matmul(ri));
            inputs.push(r.matmul(l));
            outputs.push(ri.matmul(li));
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    Ok((solved.map, solved.residual))
}

/// The two upper triangles of the model diagram, on the basis of `A`.
fn model_self_test(
    g: &FiniteQuantumGroup,
    pair: &HeisenbergPair,
    delta_r: &DeltaR,
    gamma: &LinearMap,
    delta: &LinearMap,
) -> Result<(f64, f64)> {
    let n = g.dim_h();
    let k = pair.dim();
    let m = gamma.codomain_dim();
    let hh = g.h().tensor(g.h());
    let pi = |b: &CMatrix| Ok(pair.pi().apply(b));
    let pi_hat = |b: &CMatrix| Ok(pair.pi_hat().apply(b));
    // V̂_{απ̂} = (α⊗π̂)V̂ on [m, k]
    let v_hat = map_leg(&g.v_hat(), &hh, 1, m, |b| Ok(gamma.apply(b)))?;
    let v_hat = map_leg(&v_hat, &LegSpace::new(vec![m, n])?, 2, k, pi_hat)?;
    let v_hat_star = v_hat.adjoint();
    let ad = |x: &CMatrix| v_hat.matmul(x).matmul(&v_hat_star);
    let id_k = CMatrix::identity(k);
    let id_m = CMatrix::identity(m);
    let mut left: f64 = 0.0;
    let mut right: f64 = 0.0;
    for a in g.a().basis() {
        // ℒ(a) = (β⊗π̂)Δ_R(a)
        let dr = map_leg(&delta_r.apply(a), &hh, 1, m, |b| Ok(delta.apply(b)))?;
        let l = map_leg(&dr, &LegSpace::new(vec![m, n])?, 2, k, pi_hat)?;
        left = left.max(l.max_abs_diff(&ad(&delta.apply(a).kron(&id_k))));
        // ℛ(a) = I⊗π(a); 𝒟α(a) = Ad(flip((π⊗α)Δ(a)))
        let da = map_leg(&g.delta().apply(a), &hh, 1, k, pi)?;
        let da = map_leg(&da, &LegSpace::new(vec![k, n])?, 2, m, |b| Ok(gamma.apply(b)))?;
        let down = ad(&flip(&da, k, m)?);
        right = right.max(down.max_abs_diff(&id_m.kron(&pair.pi().apply(a))));
    }
    Ok((left, right))
}

/// Rejects a second group that is not the one the core was built for.
pub(crate) fn same_group(a: &FiniteQuantumGroup, b: &FiniteQuantumGroup) -> Result<()> {
    if a.name() != b.name() || a.dim_h() != b.dim_h() || a.v().max_abs_diff(b.v()) > tol::CHECK {
        return Err(Error::GroupMismatch(a.name().into(), b.name().into()));
    }
    Ok(())
}
