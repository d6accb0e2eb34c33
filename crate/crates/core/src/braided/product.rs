use std::sync::Arc;

use crate::algebra::{word_closure, OperatorAlgebra};
use crate::error::{ensure, Error, Result};
use crate::galg::{GAlgebra, GMorphism, MorphismReport};
use crate::linalg::{embed_legs, map_leg, span_close, subspace_equal, CMatrix, LegSpace, LinearMap, OperatorSubspace};
use crate::tol;

use super::core::{extend_on_products, same_group, BraidedCore};

/// Residuals certified while building a [`BraidedAlgebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCertificate {
    /// Carrier of the realization on `K_X ⊗ K_Y ⊗ core`.
    pub native_carrier: usize,
    /// Carrier of the left regular realization the object is stored on.
    pub compact_carrier: usize,
    pub dim: usize,
    pub expected_dim: usize,
    /// `span α(X)β(Y)` against the closed algebra.
    pub span_alpha_beta: f64,
    /// `span β(Y)α(X)` against the closed algebra.
    pub span_beta_alpha: f64,
    /// Well-definedness of the induced action.
    pub rho_solve: f64,
    /// The left regular representation is a unital *-homomorphism.
    pub realization: f64,
    pub alpha: MorphismReport,
    pub beta: MorphismReport,
    pub alpha_rank: usize,
    pub beta_rank: usize,
}

/// The operator-level realization on `K_X ⊗ K_Y ⊗ core`.
#[derive(Debug, Clone)]
pub struct NativeRealization {
    pub carrier: LegSpace,
    pub algebra: OperatorSubspace,
    /// `x ↦ [(id⊗γ)ρ^X(x)]₁₃`
    pub alpha: LinearMap,
    /// `y ↦ [(id⊗δ)ρ^Y(y)]₂₃`
    pub beta: LinearMap,
    /// Left regular representation onto the compact carrier.
    pub to_compact: LinearMap,
}

/// `X⊠Y` with its embeddings `α: X → X⊠Y`, `β: Y → X⊠Y`.
#[derive(Debug, Clone)]
pub struct BraidedAlgebra {
    x: Arc<GAlgebra>,
    y: Arc<GAlgebra>,
    core: Arc<BraidedCore>,
    native: NativeRealization,
    object: Arc<GAlgebra>,
    alpha: GMorphism,
    beta: GMorphism,
    certificate: ProductCertificate,
}

impl BraidedAlgebra {
    pub fn build(x: Arc<GAlgebra>, y: Arc<GAlgebra>, core: Arc<BraidedCore>) -> Result<Self> {
        let g = core.group().clone();
        same_group(x.group(), &g)?;
        same_group(y.group(), &g)?;
        let (kx, ky, m) = (x.carrier_dim(), y.carrier_dim(), core.carrier_dim());
        let carrier = LegSpace::new(vec![kx, ky, m])?;
        let flat = LegSpace::single(carrier.total());

        let alpha = LinearMap::from_fn(x.space(), flat.clone(), |a| {
            let lifted = map_leg(&x.rho().apply(a), &x.rho_space(), 2, m, |b| Ok(core.gamma().apply(b)))?;
            embed_legs(&lifted, &[1, 3], &carrier)
        })?;
        let beta = LinearMap::from_fn(y.space(), flat.clone(), |b| {
            let lifted = map_leg(&y.rho().apply(b), &y.rho_space(), 2, m, |c| Ok(core.delta_emb().apply(c)))?;
            embed_legs(&lifted, &[2, 3], &carrier)
        })?;

        let mut gens: Vec<CMatrix> = alpha.images().to_vec();
        gens.extend(beta.images().iter().cloned());
        let algebra = word_closure(&gens, &flat)?;

        let mut ab = Vec::new();
        let mut ba = Vec::new();
        for p in alpha.images() {
            for q in beta.images() {
                ab.push(p.matmul(q));
                ba.push(q.matmul(p));
            }
        }
        let span_alpha_beta = subspace_equal(&span_close(&ab, &flat)?, &algebra)?.residual;
        let span_beta_alpha = subspace_equal(&span_close(&ba, &flat)?, &algebra)?.residual;
        ensure("span α(X)β(Y) = X⊠Y", span_alpha_beta, tol::CHECK)?;
        ensure("span β(Y)α(X) = X⊠Y", span_beta_alpha, tol::CHECK)?;

        let to_compact = left_regular(&algebra)?;
        let d = algebra.dim();
        let realization = to_compact.hom_residual().max();
        ensure("left regular representation is a *-homomorphism", realization, tol::CHECK)?;

        let alpha_c = to_compact.compose(&alpha);
        let beta_c = to_compact.compose(&beta);
        let lift = |f: &LinearMap, z: &GAlgebra, e: &CMatrix| {
            map_leg(&z.rho().apply(e), &z.rho_space(), 1, d, |b| Ok(f.apply(b)))
        };
        let rho_x: Vec<CMatrix> = x.basis().iter().map(|e| lift(&alpha_c, &x, e)).collect::<Result<_>>()?;
        let rho_y: Vec<CMatrix> = y.basis().iter().map(|e| lift(&beta_c, &y, e)).collect::<Result<_>>()?;
        let (rho, rho_solve) = extend_on_products(alpha_c.images(), beta_c.images(), &rho_x, &rho_y)?;
        ensure("induced action on X⊠Y is well defined", rho_solve, tol::SOLVE)?;

        let compact_space = span_close(to_compact.images(), &LegSpace::single(d))?;
        let name = format!("{}⊠{}", wrap(x.name()), wrap(y.name()));
        let object = Arc::new(GAlgebra::new(name, g, OperatorAlgebra::new(compact_space)?, rho)?);
        let alpha_m = GMorphism::new(x.clone(), object.clone(), alpha_c)?;
        let beta_m = GMorphism::new(y.clone(), object.clone(), beta_c)?;

        let certificate = ProductCertificate {
            native_carrier: carrier.total(),
            compact_carrier: d,
            dim: d,
            expected_dim: x.dim() * y.dim(),
            span_alpha_beta,
            span_beta_alpha,
            rho_solve,
            realization,
            alpha: *alpha_m.report(),
            beta: *beta_m.report(),
            alpha_rank: alpha_m.rank(),
            beta_rank: beta_m.rank(),
        };
        if certificate.dim != certificate.expected_dim {
            return Err(Error::Invariant {
                equation: "dim X⊠Y = dim X · dim Y".into(),
                residual: (certificate.dim as f64 - certificate.expected_dim as f64).abs(),
                tolerance: 0.0,
            });
        }
        if certificate.alpha_rank != x.dim() || certificate.beta_rank != y.dim() {
            return Err(Error::Precondition("α or β is not injective".into()));
        }
        Ok(BraidedAlgebra {
            x,
            y,
            core,
            native: NativeRealization {
                carrier,
                algebra,
                alpha,
                beta,
                to_compact,
            },
            object,
            alpha: alpha_m,
            beta: beta_m,
            certificate,
        })
    }

    pub fn x(&self) -> &Arc<GAlgebra> {
        &self.x
    }

    pub fn y(&self) -> &Arc<GAlgebra> {
        &self.y
    }

    pub fn core(&self) -> &Arc<BraidedCore> {
        &self.core
    }

    pub fn native(&self) -> &NativeRealization {
        &self.native
    }

    /// `X⊠Y` as a G-algebra.
    pub fn object(&self) -> &Arc<GAlgebra> {
        &self.object
    }

    /// `α^{XY}`
    pub fn alpha(&self) -> &GMorphism {
        &self.alpha
    }

    /// `β^{XY}`
    pub fn beta(&self) -> &GMorphism {
        &self.beta
    }

    pub fn certificate(&self) -> &ProductCertificate {
        &self.certificate
    }

    /// Products `α(x_i)β(y_j)` over the bases of `X` and `Y`, row-major in `(i, j)`.
    pub fn product_basis(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(self.x.dim() * self.y.dim());
        for a in self.alpha.map().images() {
            for b in self.beta.map().images() {
                out.push(a.matmul(b));
            }
        }
        out
    }
}

fn wrap(name: &str) -> String {
    if name.contains('⊠') || name.contains('⊗') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

/// `z ↦ [⟨b_i, z b_j⟩]` for an orthonormal basis `b` of a unital algebra.
fn left_regular(algebra: &OperatorSubspace) -> Result<LinearMap> {
    let d = algebra.dim();
    let basis = algebra.basis();
    LinearMap::from_fn(algebra, LegSpace::single(d), |z| {
        let mut out = CMatrix::zeros(d, d);
        for (j, bj) in basis.iter().enumerate() {
            let w = z.matmul(bj);
            for (i, bi) in basis.iter().enumerate() {
                out[(i, j)] = bi.hs_inner(&w);
            }
        }
        Ok(out)
    })
}
