//! Unital *-closed matrix algebras given by an orthonormal operator basis.

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::linalg::{pauli, span_close, CMatrix, LegSpace, OperatorSubspace};
use crate::tol;

/// Closure defects of a subspace: distances of basis products and adjoints
/// from the span, and the relative defect of the unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClosureResidual {
    pub product: f64,
    pub adjoint: f64,
    pub unit: f64,
}

impl ClosureResidual {
    pub fn of(space: &OperatorSubspace) -> Self {
        let mut out = ClosureResidual {
            unit: space.residual(&CMatrix::identity(space.carrier_dim())),
            ..Default::default()
        };
        for a in space.basis() {
            out.adjoint = out.adjoint.max(space.distance(&a.adjoint()));
            for b in space.basis() {
                out.product = out.product.max(space.distance(&a.matmul(b)));
            }
        }
        out
    }

    pub fn max(&self) -> f64 {
        self.product.max(self.adjoint).max(self.unit)
    }
}

/// The unital *-algebra generated by `gens`. The unit, the generators and their
/// adjoints are first orthonormalized together; that basis spans a *-closed set
/// and serves as the alphabet. The newest basis directions are then multiplied
/// by every letter until no new direction appears. Terminates after at most
/// `n²` directions.
pub fn word_closure(gens: &[CMatrix], ambient: &LegSpace) -> Result<OperatorSubspace> {
    let n = ambient.total();
    if let Some(bad) = gens.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch(format!(
            "generator {}x{} in ambient of size {n}",
            bad.rows(),
            bad.cols()
        )));
    }
    let flat = LegSpace::single(n);
    let mut seed: Vec<CMatrix> = Vec::with_capacity(2 * gens.len() + 1);
    seed.push(CMatrix::identity(n));
    for g in gens {
        seed.push(g.clone());
        seed.push(g.adjoint());
    }
    let letters = span_close(&seed, &flat)?.basis().to_vec();
    let floor = 1.0 / n as f64;
    let mut basis = letters.clone();
    let mut frontier = letters.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for l in &letters {
                if let Some(u) = new_direction(&basis, b.matmul(l), floor) {
                    basis.push(u.clone());
                    next.push(u);
                }
            }
        }
        if basis.len() > n * n {
            return Err(Error::Precondition("word closure exceeded the ambient dimension".into()));
        }
        frontier = next;
    }
    OperatorSubspace::from_orthonormal(ambient.clone(), basis)
}

/// Orthogonalizes `w` against `basis` and normalizes it, unless what is left is
/// below `tol::RANK` relative to `max(‖w‖, floor)`. Accepted directions get a
/// second orthogonalization pass.
fn new_direction(basis: &[CMatrix], mut w: CMatrix, floor: f64) -> Option<CMatrix> {
    let cut = tol::RANK * w.hs_norm().max(floor);
    for pass in 0..2 {
        for q in basis {
            let c = q.hs_inner(&w);
            w.axpy(-c, q);
        }
        if pass == 0 && w.hs_norm() <= cut {
            return None;
        }
    }
    let norm = w.hs_norm();
    (norm > cut).then(|| w.scale_real(1.0 / norm))
}

/// A unital *-subalgebra of `B(ℂ^n)`.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    space: OperatorSubspace,
}

impl OperatorAlgebra {
    /// Accepts `space` only if it contains the unit and is closed under products and adjoints.
    pub fn new(space: OperatorSubspace) -> Result<Self> {
        if space.ambient().legs() != 1 {
            let flat = space.ambient().flattened();
            return Self::new(space.with_ambient(flat)?);
        }
        let c = ClosureResidual::of(&space);
        ensure("unit lies in the algebra", c.unit, tol::CHECK)?;
        ensure("closed under products", c.product, tol::CHECK)?;
        ensure("closed under adjoints", c.adjoint, tol::CHECK)?;
        Ok(OperatorAlgebra { space })
    }

    pub fn generated_by(gens: &[CMatrix], carrier: usize) -> Result<Self> {
        Self::new(word_closure(gens, &LegSpace::single(carrier))?)
    }

    /// ℂ acting on ℂ¹.
    pub fn scalars() -> Self {
        Self::full(1)
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Self {
        let scale = Complex64::new(1.0, 0.0);
        let basis = (0..n)
            .flat_map(|i| (0..n).map(move |j| CMatrix::unit(n, i, j).scale(scale)))
            .collect();
        OperatorAlgebra {
            space: OperatorSubspace::from_orthonormal(LegSpace::single(n), basis).expect("matrix units are orthonormal"),
        }
    }

    /// Diagonal matrices `ℂ^n`.
    pub fn diagonal(n: usize) -> Self {
        let basis = (0..n).map(|i| CMatrix::unit(n, i, i)).collect();
        OperatorAlgebra {
            space: OperatorSubspace::from_orthonormal(LegSpace::single(n), basis).expect("diagonal units are orthonormal"),
        }
    }

    /// `Cl(1) = span{I, c}` with `c = σx` on ℂ².
    pub fn clifford1() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let basis = vec![CMatrix::identity(2).scale_real(s), pauli::x().scale_real(s)];
        OperatorAlgebra {
            space: OperatorSubspace::from_orthonormal(LegSpace::single(2), basis).expect("orthonormal"),
        }
    }

    pub fn space(&self) -> &OperatorSubspace {
        &self.space
    }

    pub fn into_space(self) -> OperatorSubspace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn carrier_dim(&self) -> usize {
        self.space.carrier_dim()
    }

    pub fn basis(&self) -> &[CMatrix] {
        self.space.basis()
    }

    pub fn unit(&self) -> CMatrix {
        CMatrix::identity(self.carrier_dim())
    }

    /// `{x ∈ X : xy = yx for all y ∈ X}`, as the kernel of the stacked commutator map.
    pub fn center(&self) -> Result<OperatorSubspace> {
        self.commutant_within(self.basis())
    }

    /// Elements of this algebra commuting with every operator in `others`.
    pub fn commutant_within(&self, others: &[CMatrix]) -> Result<OperatorSubspace> {
        let images: Vec<Vec<CMatrix>> = self
            .basis()
            .iter()
            .map(|b| others.iter().map(|y| b.commutator(y)).collect())
            .collect();
        kernel_combinations(&self.space, &images)
    }
}

/// Kernel of the linear map sending `space.basis()[k]` to the tuple `images[k]`,
/// returned as a subspace of `space`'s ambient.
pub fn kernel_combinations(space: &OperatorSubspace, images: &[Vec<CMatrix>]) -> Result<OperatorSubspace> {
    use nalgebra::DMatrix;
    let d = space.dim();
    if d == 0 {
        return Ok(space.clone());
    }
    let rows: usize = images[0].iter().map(|m| m.as_slice().len()).sum();
    if rows == 0 {
        return Ok(space.clone());
    }
    let mut m = DMatrix::<Complex64>::zeros(rows.max(d), d);
    for (k, tuple) in images.iter().enumerate() {
        let mut r = 0;
        for img in tuple {
            for &z in img.as_slice() {
                m[(r, k)] = z;
                r += 1;
            }
        }
    }
    let svd = crate::linalg::svd(&m)?;
    let v_t = svd.v_t;
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = if smax > 0.0 { tol::RANK * smax.max(1.0) } else { f64::INFINITY };
    let mut kernel = Vec::new();
    for i in 0..d {
        if svd.singular_values[i] <= cut {
            let coords: Vec<Complex64> = (0..d).map(|k| v_t[(i, k)].conj()).collect();
            kernel.push(space.from_coords(&coords));
        }
    }
    if kernel.is_empty() {
        return Ok(OperatorSubspace::zero(space.ambient().clone()));
    }
    span_close(&kernel, space.ambient())
}
