use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galg::{tensor_pair, tensor_pair_left, GAlgebra, GMorphism, MorphismReport};
use crate::linalg::{map_leg, solve_linear_map, CMatrix, LegSpace, LinearMap};
use crate::tol;

use super::core::BraidedCore;
use super::product::BraidedAlgebra;

/// Residuals of a linear map solved from generators and checked as an isomorphism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoReport {
    pub solve: f64,
    pub morphism: MorphismReport,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl IsoReport {
    fn of(morphism: &GMorphism, solve: f64) -> Self {
        IsoReport {
            solve,
            morphism: *morphism.report(),
            source_dim: morphism.source().dim(),
            target_dim: morphism.target().dim(),
            rank: morphism.rank(),
        }
    }

    pub fn bijective(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }

    pub fn max(&self) -> f64 {
        self.solve.max(self.morphism.max())
    }
}

/// `φ⊠ψ` determined by `(φ⊠ψ)∘α = α′∘φ` and `(φ⊠ψ)∘β = β′∘ψ`.
#[derive(Debug, Clone)]
pub struct BraidedMorphism {
    pub morphism: GMorphism,
    pub solve: f64,
}

fn same_object(a: &GAlgebra, b: &GAlgebra) -> bool {
    a.name() == b.name() && a.dim() == b.dim() && a.carrier_dim() == b.carrier_dim()
}

fn check_endpoints(m: &GMorphism, source: &GAlgebra, target: &GAlgebra, what: &str) -> Result<()> {
    if !same_object(m.source(), source) || !same_object(m.target(), target) {
        return Err(Error::Precondition(format!(
            "{what} goes {} → {}, expected {} → {}",
            m.source().name(),
            m.target().name(),
            source.name(),
            target.name()
        )));
    }
    Ok(())
}

pub fn braided_morphism(
    phi: &GMorphism,
    psi: &GMorphism,
    source: &BraidedAlgebra,
    target: &BraidedAlgebra,
) -> Result<BraidedMorphism> {
    check_endpoints(phi, source.x(), target.x(), "φ")?;
    check_endpoints(psi, source.y(), target.y(), "ψ")?;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for x in source.x().basis() {
        let ax = source.alpha().apply(x);
        let tx = target.alpha().apply(&phi.apply(x));
        for y in source.y().basis() {
            inputs.push(ax.matmul(&source.beta().apply(y)));
            outputs.push(tx.matmul(&target.beta().apply(&psi.apply(y))));
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    if solved.residual > tol::SOLVE {
        return Err(Error::invariant("φ⊠ψ is well defined on α(x)β(y)", solved.residual, tol::SOLVE));
    }
    let morphism = GMorphism::new(source.object().clone(), target.object().clone(), solved.map)?;
    Ok(BraidedMorphism {
        morphism,
        solve: solved.residual,
    })
}

/// Which factor of a product carries the trivial action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialSide {
    Left,
    Right,
}

/// The isomorphism `X⊠Y → X⊗Y` when one action is trivial.
#[derive(Debug, Clone)]
pub struct TrivialActionReport {
    pub side: TrivialSide,
    pub iso: IsoReport,
    /// `‖Ψα(x) − x⊗I‖` and `‖Ψβ(y) − I⊗y‖`.
    pub embeddings: f64,
    pub tensor: Arc<GAlgebra>,
    pub map: GMorphism,
}

impl TrivialActionReport {
    pub fn max(&self) -> f64 {
        self.iso.max().max(self.embeddings)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max() <= tolerance && self.iso.bijective()
    }
}

pub fn trivial_side(product: &BraidedAlgebra) -> Option<TrivialSide> {
    if product.x().is_trivial() {
        Some(TrivialSide::Left)
    } else if product.y().is_trivial() {
        Some(TrivialSide::Right)
    } else {
        None
    }
}

pub fn check_trivial_action(product: &BraidedAlgebra) -> Result<TrivialActionReport> {
    let side = trivial_side(product)
        .ok_or_else(|| Error::Precondition("neither factor carries the trivial action".into()))?;
    let (x, y) = (product.x(), product.y());
    let tensor = Arc::new(match side {
        TrivialSide::Left => tensor_pair(x, y)?,
        TrivialSide::Right => tensor_pair_left(x, y)?,
    });
    let (ix, iy) = (CMatrix::identity(x.carrier_dim()), CMatrix::identity(y.carrier_dim()));
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for a in x.basis() {
        for b in y.basis() {
            inputs.push(product.alpha().apply(a).matmul(&product.beta().apply(b)));
            outputs.push(a.kron(b));
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    let map = GMorphism::unverified(product.object().clone(), tensor.clone(), solved.map)?;
    let mut embeddings: f64 = 0.0;
    for a in x.basis() {
        embeddings = embeddings.max(map.apply(&product.alpha().apply(a)).max_abs_diff(&a.kron(&iy)));
    }
    for b in y.basis() {
        embeddings = embeddings.max(map.apply(&product.beta().apply(b)).max_abs_diff(&ix.kron(b)));
    }
    Ok(TrivialActionReport {
        side,
        iso: IsoReport::of(&map, solved.residual),
        embeddings,
        tensor,
        map,
    })
}

/// `X⊠Y ≅ Y⊠X` by `α(x)β(y) ↦ β′(x)α′(y)`, with its inverse.
#[derive(Debug, Clone)]
pub struct FlipIso {
    pub forward: GMorphism,
    pub backward: GMorphism,
    pub forward_report: IsoReport,
    pub backward_report: IsoReport,
    /// `max(‖flip∘flip − id‖)` over both composites.
    pub involution: f64,
}

impl FlipIso {
    pub fn max(&self) -> f64 {
        self.forward_report.max().max(self.backward_report.max()).max(self.involution)
    }
}

pub fn flip_iso(p: &BraidedAlgebra, q: &BraidedAlgebra) -> Result<FlipIso> {
    if trivial_side(p).is_none() {
        return Err(Error::Precondition("flip needs one factor with the trivial action".into()));
    }
    if !same_object(p.x(), q.y()) || !same_object(p.y(), q.x()) {
        return Err(Error::Precondition(format!(
            "{} is not the flip of {}",
            q.object().name(),
            p.object().name()
        )));
    }
    let one_way = |s: &BraidedAlgebra, t: &BraidedAlgebra| -> Result<(GMorphism, f64)> {
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for a in s.x().basis() {
            for b in s.y().basis() {
                inputs.push(s.alpha().apply(a).matmul(&s.beta().apply(b)));
                outputs.push(t.beta().apply(a).matmul(&t.alpha().apply(b)));
            }
        }
        let solved = solve_linear_map(&inputs, &outputs)?;
        let m = GMorphism::unverified(s.object().clone(), t.object().clone(), solved.map)?;
        Ok((m, solved.residual))
    };
    let (forward, fs) = one_way(p, q)?;
    let (backward, bs) = one_way(q, p)?;
    let there = LinearMap::inclusion(p.object().space());
    let back = LinearMap::inclusion(q.object().space());
    let involution = backward
        .map()
        .compose(forward.map())
        .distance(&there)
        .max(forward.map().compose(backward.map()).distance(&back));
    Ok(FlipIso {
        forward_report: IsoReport::of(&forward, fs),
        backward_report: IsoReport::of(&backward, bs),
        forward,
        backward,
        involution,
    })
}

/// The six α/β equalities and the two mixed-product identities, compared in `X⊠(Y⊠Z)`.
#[derive(Debug, Clone)]
pub struct CoherenceReport {
    pub names: [String; 3],
    /// `(X⊠Y)⊠Z → X⊠(Y⊠Z)`
    pub associator: IsoReport,
    /// In order:
    /// `α^{X⊠Y,Z} = id_X⊠α^{YZ}`,
    /// `β^{X⊠Y,Z} = β^{X,Y⊠Z}∘β^{YZ}`,
    /// `α^{XY}⊠id_Z = id_X⊠β^{YZ}`,
    /// `α^{X⊠Y,Z}∘β^{XY} = β^{X,Y⊠Z}∘α^{YZ}`,
    /// `β^{XY}⊠id_Z = β^{X,Y⊠Z}`,
    /// `α^{X⊠Y,Z}∘α^{XY} = α^{X,Y⊠Z}`.
    pub equalities: [f64; 6],
    /// `(X⊗Y)⊠Z → X⊗(Y⊠Z)`
    pub mixed_iso: IsoReport,
    /// `α^{X⊗Y,Z} = id_X⊗α^{YZ}` and `β^{X⊗Y,Z} = 1_X⊗β^{YZ}`.
    pub mixed: [f64; 2],
}

pub const COHERENCE_LABELS: [&str; 6] = [
    "α^{X⊠Y,Z} = id_X⊠α^{YZ}",
    "β^{X⊠Y,Z} = β^{X,Y⊠Z}∘β^{YZ}",
    "α^{XY}⊠id_Z = id_X⊠β^{YZ}",
    "α^{X⊠Y,Z}∘β^{XY} = β^{X,Y⊠Z}∘α^{YZ}",
    "β^{XY}⊠id_Z = β^{X,Y⊠Z}",
    "α^{X⊠Y,Z}∘α^{XY} = α^{X,Y⊠Z}",
];

pub const MIXED_LABELS: [&str; 2] = ["α^{X⊗Y,Z} = id_X⊗α^{YZ}", "β^{X⊗Y,Z} = 1_X⊗β^{YZ}"];

impl CoherenceReport {
    pub fn max(&self) -> f64 {
        self.equalities
            .iter()
            .chain(&self.mixed)
            .fold(self.associator.max().max(self.mixed_iso.max()), |a, &b| a.max(b))
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max() <= tolerance && self.associator.bijective() && self.mixed_iso.bijective()
    }
}

pub fn coherence_suite(
    x: &Arc<GAlgebra>,
    y: &Arc<GAlgebra>,
    z: &Arc<GAlgebra>,
    core: &Arc<BraidedCore>,
) -> Result<CoherenceReport> {
    let product = |a: &Arc<GAlgebra>, b: &Arc<GAlgebra>| BraidedAlgebra::build(a.clone(), b.clone(), core.clone());
    let xy = product(x, y)?;
    let yz = product(y, z)?;
    let xz = product(x, z)?;
    let left = product(xy.object(), z)?;
    let right = product(x, yz.object())?;

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for a in x.basis() {
        let la = left.alpha().apply(&xy.alpha().apply(a));
        let ra = right.alpha().apply(a);
        for b in y.basis() {
            let lb = la.matmul(&left.alpha().apply(&xy.beta().apply(b)));
            let rb = ra.matmul(&right.beta().apply(&yz.alpha().apply(b)));
            for c in z.basis() {
                inputs.push(lb.matmul(&left.beta().apply(c)));
                outputs.push(rb.matmul(&right.beta().apply(&yz.beta().apply(c))));
            }
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    let assoc = GMorphism::unverified(left.object().clone(), right.object().clone(), solved.map)?;
    let associator = IsoReport::of(&assoc, solved.residual);
    let psi = assoc.map();

    let id = |o: &Arc<GAlgebra>| GMorphism::identity(o.clone());
    let e1 = psi
        .compose(left.alpha().map())
        .distance(braided_morphism(&id(x)?, yz.alpha(), &xy, &right)?.morphism.map());
    let e2 = psi
        .compose(left.beta().map())
        .distance(&right.beta().map().compose(yz.beta().map()));
    let e3 = psi
        .compose(braided_morphism(xy.alpha(), &id(z)?, &xz, &left)?.morphism.map())
        .distance(braided_morphism(&id(x)?, yz.beta(), &xz, &right)?.morphism.map());
    let e4 = psi
        .compose(&left.alpha().map().compose(xy.beta().map()))
        .distance(&right.beta().map().compose(yz.alpha().map()));
    let e5 = psi
        .compose(braided_morphism(xy.beta(), &id(z)?, &yz, &left)?.morphism.map())
        .distance(right.beta().map());
    let e6 = psi
        .compose(&left.alpha().map().compose(xy.alpha().map()))
        .distance(right.alpha().map());

    let (mixed_iso, mixed) = mixed_products(x, y, z, &yz, core)?;
    Ok(CoherenceReport {
        names: [x.name().into(), y.name().into(), z.name().into()],
        associator,
        equalities: [e1, e2, e3, e4, e5, e6],
        mixed_iso,
        mixed,
    })
}

fn mixed_products(
    x: &Arc<GAlgebra>,
    y: &Arc<GAlgebra>,
    z: &Arc<GAlgebra>,
    yz: &BraidedAlgebra,
    core: &Arc<BraidedCore>,
) -> Result<(IsoReport, [f64; 2])> {
    let xy = Arc::new(tensor_pair(x, y)?);
    let m1 = BraidedAlgebra::build(xy.clone(), z.clone(), core.clone())?;
    let m2 = Arc::new(tensor_pair(x, yz.object())?);
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for a in x.basis() {
        for b in y.basis() {
            let lhs = m1.alpha().apply(&a.kron(b));
            let yb = yz.alpha().apply(b);
            for c in z.basis() {
                inputs.push(lhs.matmul(&m1.beta().apply(c)));
                outputs.push(a.kron(&yb.matmul(&yz.beta().apply(c))));
            }
        }
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    let iso = GMorphism::unverified(m1.object().clone(), m2.clone(), solved.map)?;
    let report = IsoReport::of(&iso, solved.residual);

    let (kx, ky) = (x.carrier_dim(), y.carrier_dim());
    let legs = LegSpace::new(vec![kx, ky])?;
    let d = yz.object().carrier_dim();
    let flat = LegSpace::single(kx * d);
    let id_alpha = LinearMap::from_fn(xy.space(), flat.clone(), |t| {
        map_leg(t, &legs, 2, d, |b| Ok(yz.alpha().apply(b)))
    })?;
    let unit_beta = LinearMap::from_fn(z.space(), flat, |c| Ok(CMatrix::identity(kx).kron(&yz.beta().apply(c))))?;
    let mi1 = iso.map().compose(m1.alpha().map()).distance(&id_alpha);
    let mi2 = iso.map().compose(m1.beta().map()).distance(&unit_beta);
    Ok((report, [mi1, mi2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteQuantumGroup;
    use crate::rmatrix::enumerate_bicharacter_rmatrices;

    fn sign_core() -> Arc<BraidedCore> {
        let g = Arc::new(FiniteQuantumGroup::finite_abelian(&[2]).unwrap());
        let r = enumerate_bicharacter_rmatrices(&g).unwrap().remove(1);
        Arc::new(BraidedCore::build(&r).unwrap())
    }

    #[test]
    fn coherence_for_delta_actions() {
        let core = sign_core();
        let a = Arc::new(GAlgebra::delta_action(core.group().clone()).unwrap());
        let rep = coherence_suite(&a, &a, &a, &core).unwrap();
        assert!(rep.passes(1e-9), "{rep:?}");
    }

    #[test]
    fn coherence_with_mixed_objects() {
        let core = sign_core();
        let g = core.group().clone();
        let d = Arc::new(GAlgebra::two_point(g.clone()).unwrap());
        let c = Arc::new(GAlgebra::clifford1_graded(g.clone()).unwrap());
        let a = Arc::new(GAlgebra::delta_action(g).unwrap());
        let rep = coherence_suite(&c, &d, &a, &core).unwrap();
        assert!(rep.passes(1e-9), "{rep:?}");
        let rep = coherence_suite(&c, &c, &c, &core).unwrap();
        assert!(rep.passes(1e-9), "{rep:?}");
    }

    #[test]
    fn trivial_action_and_flip() {
        let core = sign_core();
        let g = core.group().clone();
        let d = Arc::new(GAlgebra::two_point(g.clone()).unwrap());
        let a = Arc::new(GAlgebra::delta_action(g).unwrap());
        let da = BraidedAlgebra::build(d.clone(), a.clone(), core.clone()).unwrap();
        let ad = BraidedAlgebra::build(a.clone(), d.clone(), core.clone()).unwrap();
        let p = check_trivial_action(&da).unwrap();
        assert_eq!(p.side, TrivialSide::Left);
        assert!(p.passes(1e-9), "{p:?}");
        let p = check_trivial_action(&ad).unwrap();
        assert_eq!(p.side, TrivialSide::Right);
        assert!(p.passes(1e-9), "{p:?}");
        let f = flip_iso(&da, &ad).unwrap();
        assert!(f.max() < 1e-9 && f.forward_report.bijective());
        let aa = BraidedAlgebra::build(a.clone(), a, core).unwrap();
        assert!(matches!(check_trivial_action(&aa), Err(Error::Precondition(_))));
    }

    #[test]
    fn grading_automorphism_squares_to_identity() {
        let core = sign_core();
        let c = Arc::new(GAlgebra::clifford1_graded(core.group().clone()).unwrap());
        let cc = BraidedAlgebra::build(c.clone(), c.clone(), core).unwrap();
        let z = crate::linalg::pauli::z();
        let theta = LinearMap::from_fn(c.space(), LegSpace::single(2), |x| Ok(z.matmul(x).matmul(&z))).unwrap();
        let theta = GMorphism::new(c.clone(), c.clone(), theta).unwrap();
        let id = GMorphism::identity(c).unwrap();
        let m = braided_morphism(&theta, &id, &cc, &cc).unwrap();
        let sq = m.morphism.map().compose(m.morphism.map());
        assert!(sq.distance(&LinearMap::inclusion(cc.object().space())) < 1e-12);
        assert!(m.morphism.map().distance(&LinearMap::inclusion(cc.object().space())) > 0.1);
        assert_eq!(cc.object().algebra().center().unwrap().dim(), 1);
    }
}
