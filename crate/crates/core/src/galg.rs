//! Algebras carrying an action of a finite quantum group, and equivariant morphisms.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{kernel_combinations, OperatorAlgebra};
use crate::error::{ensure, Error, Result};
use crate::group::FiniteQuantumGroup;
use crate::linalg::{embed_legs, map_leg, singular_values, subspace_equal, CMatrix, LegSpace, LinearMap, OperatorSubspace};
use crate::tol;

/// Residuals of the action axioms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActionReport {
    pub homomorphism: f64,
    /// Relative distance of `ρ(X)` from `X⊗A`.
    pub membership: f64,
    /// `(ρ⊗id)ρ − (id⊗Δ)ρ`
    pub coassociativity: f64,
    /// Smallest over largest singular value of `ρ` on the basis.
    pub injectivity: f64,
    /// Span residual between `ρ(X)(I⊗A)` and `X⊗A`.
    pub podles: f64,
}

/// A unital *-algebra `X ⊂ B(ℂ^K)` with an action `ρ: X → X⊗A`.
#[derive(Debug, Clone)]
pub struct GAlgebra {
    name: String,
    group: Arc<FiniteQuantumGroup>,
    algebra: OperatorAlgebra,
    rho: LinearMap,
    report: ActionReport,
}

impl GAlgebra {
    /// Verifies all action axioms before accepting `rho`.
    pub fn new(
        name: impl Into<String>,
        group: Arc<FiniteQuantumGroup>,
        algebra: OperatorAlgebra,
        rho: LinearMap,
    ) -> Result<Self> {
        let k = algebra.carrier_dim();
        let n = group.dim_h();
        if rho.codomain_dim() != k * n || rho.domain().dim() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "action must map a {}-dimensional algebra into operators on ℂ^{}",
                algebra.dim(),
                k * n
            )));
        }
        let rho = rho.restrict(algebra.space()).with_codomain(LegSpace::new(vec![k, n])?)?;
        let report = action_report(&group, &algebra, &rho)?;
        ensure("ρ is a unital *-homomorphism", report.homomorphism, tol::CHECK)?;
        ensure("ρ(X) ⊂ X⊗A", report.membership, tol::CHECK)?;
        ensure("(ρ⊗id)ρ = (id⊗Δ)ρ", report.coassociativity, tol::CHECK)?;
        if report.injectivity < tol::CHECK {
            return Err(Error::invariant("ρ injective", report.injectivity, tol::CHECK));
        }
        ensure("Podleś condition", report.podles, tol::CHECK)?;
        Ok(GAlgebra {
            name: name.into(),
            group,
            algebra,
            rho,
            report,
        })
    }

    /// `ρ(x) = x ⊗ I_A`.
    pub fn trivial_action(name: impl Into<String>, algebra: OperatorAlgebra, group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        let unit = group.unit();
        let rho = LinearMap::from_fn(
            algebra.space(),
            LegSpace::single(algebra.carrier_dim() * group.dim_h()),
            |x| Ok(x.kron(&unit)),
        )?;
        Self::new(name, group, algebra, rho)
    }

    /// The neutral object ℂ.
    pub fn scalars(group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        Self::trivial_action("C", OperatorAlgebra::scalars(), group)
    }

    /// `ℂ²` with the trivial action.
    pub fn two_point(group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        Self::trivial_action("D", OperatorAlgebra::diagonal(2), group)
    }

    /// `M_n` with the trivial action.
    pub fn trivial_matrix(n: usize, group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("trivial:<n> needs n ≥ 1".into()));
        }
        Self::trivial_action(format!("trivial:{n}"), OperatorAlgebra::full(n), group)
    }

    /// `A` acting on itself by `Δ`.
    pub fn delta_action(group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        let algebra = OperatorAlgebra::new(group.a().clone())?;
        let rho = group.delta().clone();
        Self::new("delta_action", group, algebra, rho)
    }

    /// `Cl(1) = span{I, c}` with `ρ(c) = c ⊗ χ` for the first grading `χ` of the group.
    pub fn clifford1_graded(group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        let chi = group
            .gradings()
            .first()
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("{} admits no ℤ₂-grading", group.name())))?;
        let algebra = OperatorAlgebra::clifford1();
        let c = crate::linalg::pauli::x();
        let unit = group.unit();
        let rho = LinearMap::from_fn(algebra.space(), LegSpace::single(2 * group.dim_h()), |x| {
            // split x = e·I + o·c into even and odd parts
            let even = x.trace() / Complex64::new(2.0, 0.0);
            let odd = c.hs_inner(x) / Complex64::new(2.0, 0.0);
            let mut out = CMatrix::identity(2).kron(&unit).scale(even);
            out.axpy(odd, &c.kron(&chi));
            Ok(out)
        })?;
        Self::new("clifford1_graded", group, algebra, rho)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Arc<FiniteQuantumGroup> {
        &self.group
    }

    pub fn algebra(&self) -> &OperatorAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &OperatorSubspace {
        self.algebra.space()
    }

    pub fn basis(&self) -> &[CMatrix] {
        self.algebra.basis()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn carrier_dim(&self) -> usize {
        self.algebra.carrier_dim()
    }

    pub fn rho(&self) -> &LinearMap {
        &self.rho
    }

    pub fn report(&self) -> &ActionReport {
        &self.report
    }

    pub fn unit(&self) -> CMatrix {
        self.algebra.unit()
    }

    /// Carrier of `X⊗A`, legs `[K, n]`.
    pub fn rho_space(&self) -> LegSpace {
        LegSpace::new(vec![self.carrier_dim(), self.group.dim_h()]).expect("positive dimensions")
    }

    /// Largest deviation of `ρ(x)` from `x⊗I` on the basis.
    pub fn triviality_residual(&self) -> f64 {
        let unit = self.group.unit();
        self.basis()
            .iter()
            .map(|x| self.rho.apply(x).max_abs_diff(&x.kron(&unit)))
            .fold(0.0, f64::max)
    }

    pub fn is_trivial(&self) -> bool {
        self.triviality_residual() <= tol::CHECK
    }

    /// `{x : ρ(x) = x⊗I}`.
    pub fn invariant_subspace(&self) -> Result<OperatorSubspace> {
        let unit = self.group.unit();
        let images: Vec<Vec<CMatrix>> = self
            .basis()
            .iter()
            .map(|x| vec![&self.rho.apply(x) - &x.kron(&unit)])
            .collect();
        kernel_combinations(self.space(), &images)
    }

    /// `{u : ρ(u) ∈ I_X⊗B(H)}`, which is `ℂI` when `ρ` is injective.
    pub fn scalar_form_subspace(&self) -> Result<OperatorSubspace> {
        let k = self.carrier_dim();
        let space = self.rho_space();
        let images = self
            .basis()
            .iter()
            .map(|x| {
                let rx = self.rho.apply(x);
                let slice = crate::linalg::partial_trace(&rx, &space, 1)?.scale_real(1.0 / k as f64);
                Ok(vec![&rx - &CMatrix::identity(k).kron(&slice)])
            })
            .collect::<Result<Vec<_>>>()?;
        kernel_combinations(self.space(), &images)
    }

    /// If `ρ(u) ∈ I_X⊗B(H)`, the scalar `λ` with `u = λI` together with `‖u − λI‖`.
    pub fn scalar_coefficient_check(&self, u: &CMatrix) -> Result<ScalarCheck> {
        let r = self.space().residual(u);
        if r > tol::CHECK {
            return Err(Error::NotAMember {
                space: self.name.clone(),
                residual: r,
            });
        }
        let k = self.carrier_dim();
        let ru = self.rho.apply(u);
        let slice = crate::linalg::partial_trace(&ru, &self.rho_space(), 1)?.scale_real(1.0 / k as f64);
        let off = ru.max_abs_diff(&CMatrix::identity(k).kron(&slice));
        if off > tol::CHECK {
            return Ok(ScalarCheck {
                off_form_residual: off,
                lambda: None,
                conclusion_residual: 0.0,
            });
        }
        let lambda = u.trace() / Complex64::new(k as f64, 0.0);
        let conclusion = u.max_abs_diff(&CMatrix::identity(k).scale(lambda));
        Ok(ScalarCheck {
            off_form_residual: off,
            lambda: Some(lambda),
            conclusion_residual: conclusion,
        })
    }
}

/// Outcome of [`GAlgebra::scalar_coefficient_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCheck {
    /// Distance of `ρ(u)` from `I_X ⊗ B(H)`.
    pub off_form_residual: f64,
    pub lambda: Option<Complex64>,
    /// `‖u − λI‖` when `λ` was extracted.
    pub conclusion_residual: f64,
}

fn action_report(group: &FiniteQuantumGroup, algebra: &OperatorAlgebra, rho: &LinearMap) -> Result<ActionReport> {
    let k = algebra.carrier_dim();
    let n = group.dim_h();
    let space = LegSpace::new(vec![k, n])?;
    let x_a = algebra.space().tensor(group.a());
    let mut coassociativity: f64 = 0.0;
    let mut membership: f64 = 0.0;
    for x in algebra.basis() {
        let rx = rho.apply(x);
        membership = membership.max(x_a.residual(&rx));
        let left = map_leg(&rx, &space, 1, k * n, |b| Ok(rho.apply(b)))?;
        let right = map_leg(&rx, &space, 2, n * n, |b| Ok(group.delta().apply(b)))?;
        coassociativity = coassociativity.max(left.max_abs_diff(&right));
    }
    let sv = singular_values(rho.images());
    let injectivity = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 && sv.len() == algebra.dim() => lo / hi,
        _ => 0.0,
    };
    let mut podles_gens = Vec::new();
    for x in algebra.basis() {
        let rx = rho.apply(x);
        for a in group.a().basis() {
            podles_gens.push(rx.matmul(&CMatrix::identity(k).kron(a)));
        }
    }
    let podles_span = crate::linalg::span_close(&podles_gens, &space)?;
    let podles = subspace_equal(&podles_span, &x_a.with_ambient(space.clone())?)?.residual;
    Ok(ActionReport {
        homomorphism: rho.hom_residual().max(),
        membership,
        coassociativity,
        injectivity,
        podles,
    })
}

/// Residuals of an equivariant morphism.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MorphismReport {
    pub homomorphism: f64,
    /// Relative distance of the image from the target algebra.
    pub membership: f64,
    /// `(φ⊗id)ρ_X − ρ_Y φ`
    pub intertwining: f64,
}

impl MorphismReport {
    pub fn max(&self) -> f64 {
        self.homomorphism.max(self.membership).max(self.intertwining)
    }
}

/// A unital *-homomorphism intertwining the actions.
#[derive(Debug, Clone)]
pub struct GMorphism {
    source: Arc<GAlgebra>,
    target: Arc<GAlgebra>,
    map: LinearMap,
    report: MorphismReport,
}

impl GMorphism {
    pub fn new(source: Arc<GAlgebra>, target: Arc<GAlgebra>, map: LinearMap) -> Result<Self> {
        let m = Self::unverified(source, target, map)?;
        ensure("morphism is a unital *-homomorphism", m.report.homomorphism, tol::CHECK)?;
        ensure("morphism lands in the target algebra", m.report.membership, tol::CHECK)?;
        ensure("(φ⊗id)ρ_X = ρ_Y∘φ", m.report.intertwining, tol::CHECK)?;
        Ok(m)
    }

    /// Computes the report without rejecting; used when the residuals themselves are the result.
    pub fn unverified(source: Arc<GAlgebra>, target: Arc<GAlgebra>, map: LinearMap) -> Result<Self> {
        if !Arc::ptr_eq(source.group(), target.group()) && source.group().name() != target.group().name() {
            return Err(Error::GroupMismatch(source.group().name().into(), target.group().name().into()));
        }
        if map.codomain_dim() != target.carrier_dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism lands in ℂ^{} but the target acts on ℂ^{}",
                map.codomain_dim(),
                target.carrier_dim()
            )));
        }
        let map = map.restrict(source.space());
        let report = morphism_report(&source, &target, &map)?;
        Ok(GMorphism {
            source,
            target,
            map,
            report,
        })
    }

    pub fn identity(x: Arc<GAlgebra>) -> Result<Self> {
        let map = LinearMap::inclusion(x.space());
        Self::new(x.clone(), x, map)
    }

    /// `1_X : ℂ → X`.
    pub fn unit_of(scalars: Arc<GAlgebra>, x: Arc<GAlgebra>) -> Result<Self> {
        let k = x.carrier_dim();
        let map = LinearMap::from_fn(scalars.space(), LegSpace::single(k), |c| Ok(CMatrix::identity(k).scale(c[(0, 0)])))?;
        Self::new(scalars, x, map)
    }

    pub fn source(&self) -> &Arc<GAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.map.apply(x)
    }

    pub fn report(&self) -> &MorphismReport {
        &self.report
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GMorphism) -> Result<GMorphism> {
        GMorphism::new(inner.source.clone(), self.target.clone(), self.map.compose(&inner.map))
    }

    /// Injective iff the images of the source basis are linearly independent.
    pub fn rank(&self) -> usize {
        let sv = singular_values(self.map.images());
        let top = sv.first().copied().unwrap_or(0.0);
        sv.iter().filter(|&&s| s > tol::RANK * top).count()
    }
}

fn morphism_report(source: &GAlgebra, target: &GAlgebra, map: &LinearMap) -> Result<MorphismReport> {
    let mut intertwining: f64 = 0.0;
    let mut membership: f64 = 0.0;
    let kt = target.carrier_dim();
    for x in source.basis() {
        let fx = map.apply(x);
        membership = membership.max(target.space().residual(&fx));
        let lhs = map_leg(&source.rho().apply(x), &source.rho_space(), 1, kt, |b| Ok(map.apply(b)))?;
        let rhs = target.rho().apply(&fx);
        intertwining = intertwining.max(lhs.max_abs_diff(&rhs));
    }
    Ok(MorphismReport {
        homomorphism: map.hom_residual().max(),
        membership,
        intertwining,
    })
}

/// `X⊗A` with action `id_X⊗Δ`, and `ρ^X ∈ Mor_G(X, X⊗A)`.
pub fn tensor_with_a(x: Arc<GAlgebra>) -> Result<(Arc<GAlgebra>, GMorphism)> {
    let g = x.group().clone();
    let n = g.dim_h();
    let k = x.carrier_dim();
    let space = x.space().tensor(g.a()).with_ambient(LegSpace::single(k * n))?;
    let mut images = Vec::new();
    for b in x.basis() {
        for a in g.a().basis() {
            images.push(b.kron(&g.delta().apply(a)));
        }
    }
    let rho = LinearMap::new(space.clone(), LegSpace::single(k * n * n), images)?;
    let obj = Arc::new(GAlgebra::new(
        format!("{}⊗A", x.name()),
        g,
        OperatorAlgebra::new(space)?,
        rho,
    )?);
    let map = x.rho().clone().with_codomain(LegSpace::single(k * n))?;
    let morph = GMorphism::new(x, obj.clone(), map)?;
    Ok((obj, morph))
}

/// `X⊗Y` with `ρ(x⊗y) = x ⊗ ρ^Y(y)`; the action of `X` is ignored.
pub fn tensor_pair(x: &GAlgebra, y: &GAlgebra) -> Result<GAlgebra> {
    let g = x.group().clone();
    let (kx, ky) = (x.carrier_dim(), y.carrier_dim());
    let space = x.space().tensor(y.space()).with_ambient(LegSpace::single(kx * ky))?;
    let mut images = Vec::new();
    for a in x.basis() {
        for b in y.basis() {
            images.push(a.kron(&y.rho().apply(b)));
        }
    }
    let rho = LinearMap::new(space.clone(), LegSpace::single(kx * ky * g.dim_h()), images)?;
    GAlgebra::new(format!("{}⊗{}", x.name(), y.name()), g, OperatorAlgebra::new(space)?, rho)
}

/// `X⊗Y` with `ρ(x⊗y) = ρ^X(x)₁₃ y₂`; the action of `Y` is ignored.
pub fn tensor_pair_left(x: &GAlgebra, y: &GAlgebra) -> Result<GAlgebra> {
    let g = x.group().clone();
    let (kx, ky, n) = (x.carrier_dim(), y.carrier_dim(), g.dim_h());
    let legs = LegSpace::new(vec![kx, ky, n])?;
    let space = x.space().tensor(y.space()).with_ambient(LegSpace::single(kx * ky))?;
    let mut images = Vec::new();
    for a in x.basis() {
        let ra = embed_legs(&x.rho().apply(a), &[1, 3], &legs)?;
        for b in y.basis() {
            images.push(ra.matmul(&embed_legs(b, &[2], &legs)?));
        }
    }
    let rho = LinearMap::new(space.clone(), LegSpace::single(kx * ky * n), images)?;
    GAlgebra::new(format!("{}⊗{}", x.name(), y.name()), g, OperatorAlgebra::new(space)?, rho)
}
