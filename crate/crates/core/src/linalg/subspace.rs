use nalgebra::DMatrix;
use num_complex::Complex64;

use super::legs::{combine, LegSpace};
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// A linear space of operators on `ambient`, held as a Hilbert–Schmidt
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    ambient: LegSpace,
    basis: Vec<CMatrix>,
}

/// Outcome of [`subspace_equal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanComparison {
    pub equal: bool,
    /// Largest projection residual of a basis element of either space onto the other.
    pub residual: f64,
}

impl OperatorSubspace {
    pub fn zero(ambient: LegSpace) -> Self {
        OperatorSubspace {
            ambient,
            basis: Vec::new(),
        }
    }

    /// Wraps a basis that is already orthonormal; the Gram matrix is checked.
    pub fn from_orthonormal(ambient: LegSpace, basis: Vec<CMatrix>) -> Result<Self> {
        let n = ambient.total();
        if let Some(bad) = basis.iter().find(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "basis element {}x{} in ambient of size {n}",
                bad.rows(),
                bad.cols()
            )));
        }
        let s = OperatorSubspace { ambient, basis };
        crate::error::ensure("orthonormal basis (Gram = I)", s.gram_residual(), tol::ORTHONORMAL)?;
        Ok(s)
    }

    pub fn ambient(&self) -> &LegSpace {
        &self.ambient
    }

    /// Side length of the operators in this space.
    pub fn carrier_dim(&self) -> usize {
        self.ambient.total()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Same basis viewed in a different leg decomposition of the same total dimension.
    pub fn with_ambient(&self, ambient: LegSpace) -> Result<Self> {
        if ambient.total() != self.ambient.total() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view a {}-dimensional ambient as {:?}",
                self.ambient.total(),
                ambient.dims()
            )));
        }
        Ok(OperatorSubspace {
            ambient,
            basis: self.basis.clone(),
        })
    }

    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.hs_inner(b) - target).norm());
            }
        }
        worst
    }

    pub fn coords(&self, x: &CMatrix) -> Vec<Complex64> {
        self.basis.iter().map(|b| b.hs_inner(x)).collect()
    }

    pub fn from_coords(&self, coords: &[Complex64]) -> CMatrix {
        if self.basis.is_empty() {
            let n = self.carrier_dim();
            return CMatrix::zeros(n, n);
        }
        combine(coords, &self.basis)
    }

    pub fn project(&self, x: &CMatrix) -> CMatrix {
        self.from_coords(&self.coords(x))
    }

    /// `‖x − P x‖ / ‖x‖`. Operators of norm below `1e-13` count as zero and
    /// report the absolute distance instead.
    pub fn residual(&self, x: &CMatrix) -> f64 {
        let d = self.distance(x);
        let norm = x.hs_norm();
        if norm < 1e-13 {
            d
        } else {
            d / norm
        }
    }

    /// Absolute Hilbert–Schmidt distance `‖x − P x‖`.
    pub fn distance(&self, x: &CMatrix) -> f64 {
        if x.rows() != self.carrier_dim() || x.cols() != self.carrier_dim() {
            return f64::INFINITY;
        }
        (x - &self.project(x)).hs_norm()
    }

    pub fn contains(&self, x: &CMatrix) -> bool {
        self.residual(x) <= tol::CHECK
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&CMatrix::identity(self.carrier_dim()))
    }

    /// `span{s ⊗ t}` with the product basis, which is again orthonormal.
    pub fn tensor(&self, other: &OperatorSubspace) -> OperatorSubspace {
        let basis = self
            .basis
            .iter()
            .flat_map(|s| other.basis.iter().map(move |t| s.kron(t)))
            .collect();
        OperatorSubspace {
            ambient: self.ambient.tensor(&other.ambient),
            basis,
        }
    }
}

/// Orthonormal basis of the column span of `cols` (each column a flattened
/// operator), cut at singular value `tol::RANK × largest`.
fn orthonormal_columns(cols: &DMatrix<Complex64>) -> (Vec<Vec<Complex64>>, Vec<f64>) {
    if cols.ncols() == 0 {
        return (Vec::new(), Vec::new());
    }
    let (q, r) = if cols.nrows() > cols.ncols() {
        let qr = cols.clone().qr();
        (qr.q(), qr.r())
    } else {
        (DMatrix::identity(cols.nrows(), cols.nrows()), cols.clone())
    };
    let svd = super::svd::svd(&r).expect("SVD of a finite matrix");
    let u = svd.u;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let largest = sigma.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    if largest == 0.0 {
        return (out, sigma);
    }
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    for k in order {
        if sigma[k] > tol::RANK * largest {
            let v = &q * u.column(k);
            out.push(v.iter().copied().collect());
        }
    }
    (out, sigma)
}

fn columns_of(mats: &[&CMatrix]) -> DMatrix<Complex64> {
    let len = mats[0].as_slice().len();
    let mut m = DMatrix::zeros(len, mats.len());
    for (j, x) in mats.iter().enumerate() {
        for (i, &z) in x.as_slice().iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    m
}

/// Orthonormal basis of the linear span of `gens`.
pub fn span_close(gens: &[CMatrix], ambient: &LegSpace) -> Result<OperatorSubspace> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let n = ambient.total();
    if let Some(bad) = gens.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch(format!(
            "generator {}x{} in ambient of size {n}",
            bad.rows(),
            bad.cols()
        )));
    }
    let refs: Vec<&CMatrix> = gens.iter().collect();
    let (vecs, _) = orthonormal_columns(&columns_of(&refs));
    let basis = vecs
        .into_iter()
        .map(|v| CMatrix::from_vec(n, n, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSubspace {
        ambient: ambient.clone(),
        basis,
    })
}

/// Singular values of the matrix whose columns are the flattened `mats`.
pub fn singular_values(mats: &[CMatrix]) -> Vec<f64> {
    if mats.is_empty() {
        return Vec::new();
    }
    let refs: Vec<&CMatrix> = mats.iter().collect();
    super::svd::svd(&columns_of(&refs))
        .expect("SVD of a finite matrix")
        .singular_values
        .iter()
        .copied()
        .collect()
}

fn same_ambient(s1: &OperatorSubspace, s2: &OperatorSubspace) -> Result<()> {
    if s1.carrier_dim() != s2.carrier_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient {:?} vs {:?}",
            s1.ambient.dims(),
            s2.ambient.dims()
        )));
    }
    Ok(())
}

/// Mutual containment test.
pub fn subspace_equal(s1: &OperatorSubspace, s2: &OperatorSubspace) -> Result<SpanComparison> {
    same_ambient(s1, s2)?;
    let residual = s1
        .basis
        .iter()
        .map(|b| s2.residual(b))
        .chain(s2.basis.iter().map(|b| s1.residual(b)))
        .fold(0.0, f64::max);
    Ok(SpanComparison {
        equal: residual <= tol::CHECK,
        residual,
    })
}

/// Intersection via principal angles; directions with `cos θ ≥ 1 − tol::ANGLE` are kept.
pub fn subspace_intersect(s1: &OperatorSubspace, s2: &OperatorSubspace) -> Result<OperatorSubspace> {
    same_ambient(s1, s2)?;
    if s1.dim() == 0 || s2.dim() == 0 {
        return Ok(OperatorSubspace::zero(s1.ambient.clone()));
    }
    let cross = DMatrix::from_fn(s1.dim(), s2.dim(), |i, j| s1.basis[i].hs_inner(&s2.basis[j]));
    let svd = super::svd::svd(&cross)?;
    let u = svd.u;
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= 1.0 - tol::ANGLE)
        .map(|(k, _)| {
            let coeffs: Vec<Complex64> = u.column(k).iter().copied().collect();
            combine(&coeffs, &s1.basis)
        })
        .collect();
    Ok(OperatorSubspace {
        ambient: s1.ambient.clone(),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{pauli, ONE};

    fn m2() -> LegSpace {
        LegSpace::single(2)
    }

    #[test]
    fn multiples_span_one_dimension() {
        let i = CMatrix::identity(2);
        let s = span_close(&[i.clone(), i.scale_real(2.0)], &m2()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.gram_residual() < 1e-12);
    }

    #[test]
    fn diagonal_units_span_two() {
        let s = span_close(&[CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1)], &m2()).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn sigma_x_words_span_two() {
        let x = pauli::x();
        let s = span_close(&[CMatrix::identity(2), x.clone(), x.matmul(&x)], &m2()).unwrap();
        assert_eq!(s.dim(), 2);
        // Oracle: the singular values of the stacked generators.
        let sv = singular_values(&[CMatrix::identity(2), x.clone(), x.matmul(&x)]);
        assert_eq!(sv.iter().filter(|&&s| s > 1e-10 * sv[0]).count(), 2);
    }

    #[test]
    fn empty_generators_error() {
        assert!(matches!(span_close(&[], &m2()), Err(Error::EmptyGenerators)));
    }

    #[test]
    fn equality_against_itself_and_orthogonal() {
        let s = span_close(&[CMatrix::identity(2), pauli::x()], &m2()).unwrap();
        let cmp = subspace_equal(&s, &s).unwrap();
        assert!(cmp.equal);
        assert!(cmp.residual < 1e-14);
        let i = span_close(&[CMatrix::identity(2)], &m2()).unwrap();
        let z = span_close(&[pauli::z()], &m2()).unwrap();
        assert!(!subspace_equal(&i, &z).unwrap().equal);
    }

    #[test]
    fn intersection_of_pauli_planes_is_scalars() {
        let a = span_close(&[CMatrix::identity(2), pauli::x()], &m2()).unwrap();
        let b = span_close(&[CMatrix::identity(2), pauli::z()], &m2()).unwrap();
        let c = subspace_intersect(&a, &b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&CMatrix::identity(2)));
        assert_eq!(subspace_intersect(&a, &a).unwrap().dim(), 2);
        let x = span_close(&[pauli::x()], &m2()).unwrap();
        let z = span_close(&[pauli::z()], &m2()).unwrap();
        assert_eq!(subspace_intersect(&x, &z).unwrap().dim(), 0);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = span_close(&[CMatrix::identity(2)], &m2()).unwrap();
        let b = span_close(&[CMatrix::identity(3)], &LegSpace::single(3)).unwrap();
        assert!(subspace_equal(&a, &b).is_err());
        assert!(subspace_intersect(&a, &b).is_err());
    }

    #[test]
    fn coordinates_reconstruct_members() {
        let s = span_close(&[CMatrix::identity(2), pauli::y()], &m2()).unwrap();
        let x = &CMatrix::identity(2).scale(ONE * 3.0) + &pauli::y().scale_real(-0.5);
        assert!(s.project(&x).max_abs_diff(&x) < 1e-14);
        assert!(s.residual(&pauli::z()) > 0.99);
    }
}
