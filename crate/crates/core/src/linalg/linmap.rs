use nalgebra::DMatrix;
use num_complex::Complex64;

use super::legs::{combine, LegSpace};
use super::matrix::CMatrix;
use super::subspace::{span_close, OperatorSubspace};
use crate::error::{Error, Result};
use crate::tol;

/// A linear map from an operator subspace into operators on `codomain`,
/// stored as the images of the domain's orthonormal basis.
#[derive(Debug, Clone)]
pub struct LinearMap {
    domain: OperatorSubspace,
    codomain: LegSpace,
    images: Vec<CMatrix>,
}

/// A least-squares fit together with its worst relative misfit.
#[derive(Debug, Clone)]
pub struct SolvedMap {
    pub map: LinearMap,
    pub residual: f64,
}

/// Residuals of the unital *-homomorphism identities on basis pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HomResidual {
    pub multiplicative: f64,
    pub star: f64,
    pub unital: f64,
}

impl HomResidual {
    pub fn max(&self) -> f64 {
        self.multiplicative.max(self.star).max(self.unital)
    }
}

impl LinearMap {
    pub fn new(domain: OperatorSubspace, codomain: LegSpace, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a {}-dimensional domain",
                images.len(),
                domain.dim()
            )));
        }
        let n = codomain.total();
        if let Some(bad) = images.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "image {}x{} in codomain of size {n}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(LinearMap {
            domain,
            codomain,
            images,
        })
    }

    /// Builds a map on `domain` by evaluating `f` on its basis.
    pub fn from_fn(
        domain: &OperatorSubspace,
        codomain: LegSpace,
        f: impl Fn(&CMatrix) -> Result<CMatrix>,
    ) -> Result<Self> {
        let images = domain.basis().iter().map(f).collect::<Result<Vec<_>>>()?;
        LinearMap::new(domain.clone(), codomain, images)
    }

    /// Inclusion of a subspace into its own ambient.
    pub fn inclusion(domain: &OperatorSubspace) -> Self {
        LinearMap {
            domain: domain.clone(),
            codomain: domain.ambient().clone(),
            images: domain.basis().to_vec(),
        }
    }

    pub fn domain(&self) -> &OperatorSubspace {
        &self.domain
    }

    pub fn codomain(&self) -> &LegSpace {
        &self.codomain
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain.total()
    }

    /// Applies the map to the orthogonal projection of `x` onto the domain.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let c = self.domain.coords(x);
        if self.images.is_empty() {
            let n = self.codomain.total();
            return CMatrix::zeros(n, n);
        }
        combine(&c, &self.images)
    }

    /// Like [`apply`](Self::apply) but refuses inputs outside the domain.
    pub fn apply_checked(&self, x: &CMatrix) -> Result<CMatrix> {
        let r = self.domain.residual(x);
        if r > tol::CHECK {
            return Err(Error::NotAMember {
                space: "map domain".into(),
                residual: r,
            });
        }
        Ok(self.apply(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        LinearMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            images: inner.images.iter().map(|m| self.apply(m)).collect(),
        }
    }

    /// The same map re-expressed on another basis of (a subspace of) its domain.
    pub fn restrict(&self, domain: &OperatorSubspace) -> LinearMap {
        LinearMap {
            domain: domain.clone(),
            codomain: self.codomain.clone(),
            images: domain.basis().iter().map(|b| self.apply(b)).collect(),
        }
    }

    /// Relabels the leg structure of the codomain (same total dimension).
    pub fn with_codomain(mut self, codomain: LegSpace) -> Result<Self> {
        if codomain.total() != self.codomain.total() {
            return Err(Error::DimensionMismatch("codomain relabel changes dimension".into()));
        }
        self.codomain = codomain;
        Ok(self)
    }

    /// Matrix of coordinates of the images in `target`'s basis (`target.dim() × domain.dim()`).
    pub fn coordinate_matrix(&self, target: &OperatorSubspace) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(target.dim(), self.domain.dim());
        for (j, img) in self.images.iter().enumerate() {
            for (i, c) in target.coords(img).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    /// Image subspace.
    pub fn range(&self) -> Result<OperatorSubspace> {
        if self.images.is_empty() {
            return Ok(OperatorSubspace::zero(self.codomain.clone()));
        }
        span_close(&self.images, &self.codomain)
    }

    /// Largest entrywise deviation between `self` and `other` on this map's domain basis.
    pub fn distance(&self, other: &LinearMap) -> f64 {
        self.domain
            .basis()
            .iter()
            .map(|b| self.apply(b).max_abs_diff(&other.apply(b)))
            .fold(0.0, f64::max)
    }

    /// Unital *-homomorphism residuals, assuming the domain is a unital *-algebra.
    pub fn hom_residual(&self) -> HomResidual {
        let basis = self.domain.basis();
        let mut out = HomResidual::default();
        for (i, a) in basis.iter().enumerate() {
            let fa = &self.images[i];
            out.star = out.star.max(self.apply(&a.adjoint()).max_abs_diff(&fa.adjoint()));
            for (j, b) in basis.iter().enumerate() {
                let lhs = self.apply(&a.matmul(b));
                let rhs = fa.matmul(&self.images[j]);
                out.multiplicative = out.multiplicative.max(lhs.max_abs_diff(&rhs));
            }
        }
        let k = self.domain.carrier_dim();
        out.unital = self
            .apply(&CMatrix::identity(k))
            .max_abs_diff(&CMatrix::identity(self.codomain.total()));
        out
    }
}

/// Least-squares linear map with `L(inputs[i]) ≈ outputs[i]`, defined on the
/// span of `inputs`.
pub fn solve_linear_map(inputs: &[CMatrix], outputs: &[CMatrix]) -> Result<SolvedMap> {
    if inputs.len() != outputs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} inputs but {} outputs",
            inputs.len(),
            outputs.len()
        )));
    }
    if inputs.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let n_in = inputs[0].rows();
    let n_out = outputs[0].rows();
    if outputs.iter().any(|o| o.rows() != n_out || o.cols() != n_out) {
        return Err(Error::DimensionMismatch("outputs of differing sizes".into()));
    }
    let domain = span_close(inputs, &LegSpace::single(n_in))?;
    let codomain = LegSpace::single(n_out);
    if domain.dim() == 0 {
        let scale = outputs.iter().map(CMatrix::hs_norm).fold(0.0, f64::max);
        let map = LinearMap::new(domain, codomain, Vec::new())?;
        return Ok(SolvedMap {
            map,
            residual: if scale == 0.0 { 0.0 } else { 1.0 },
        });
    }
    // coords: k × N; images Y solve Y · coords = outputs in the least-squares sense.
    let coords = DMatrix::from_fn(domain.dim(), inputs.len(), |i, j| {
        domain.basis()[i].hs_inner(&inputs[j])
    });
    let pinv = super::svd::pseudo_inverse(&coords, tol::RANK)?;
    let images: Vec<CMatrix> = (0..domain.dim())
        .map(|i| {
            let weights: Vec<Complex64> = (0..inputs.len()).map(|j| pinv[(j, i)]).collect();
            combine(&weights, outputs)
        })
        .collect();
    let map = LinearMap::new(domain, codomain, images)?;
    let scale = outputs.iter().map(CMatrix::hs_norm).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let residual = inputs
        .iter()
        .zip(outputs)
        .map(|(x, y)| (&map.apply(x) - y).hs_norm() / scale)
        .fold(0.0, f64::max);
    Ok(SolvedMap { map, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;

    #[test]
    fn identity_fit_has_zero_residual() {
        let xs = vec![CMatrix::identity(2), pauli::x(), pauli::z()];
        let s = solve_linear_map(&xs, &xs).unwrap();
        assert!(s.residual < 1e-14);
        assert!(s.map.apply(&pauli::x()).max_abs_diff(&pauli::x()) < 1e-14);
    }

    #[test]
    fn inconsistent_relation_is_detected() {
        // inputs satisfy x2 = 2 x1 but outputs do not
        let x1 = pauli::x();
        let inputs = vec![x1.clone(), x1.scale_real(2.0)];
        let outputs = vec![pauli::z(), pauli::z()];
        let s = solve_linear_map(&inputs, &outputs).unwrap();
        assert!(s.residual > 0.1, "residual {}", s.residual);
    }

    #[test]
    fn conjugation_is_a_homomorphism() {
        let dom = span_close(&[CMatrix::identity(2), pauli::x(), pauli::y(), pauli::z()], &LegSpace::single(2)).unwrap();
        let u = pauli::x();
        let f = LinearMap::from_fn(&dom, LegSpace::single(2), |m| Ok(u.matmul(m).matmul(&u))).unwrap();
        assert!(f.hom_residual().max() < 1e-14);
        let transpose = LinearMap::from_fn(&dom, LegSpace::single(2), |m| Ok(m.transpose())).unwrap();
        assert!(transpose.hom_residual().multiplicative > 0.1);
    }

    #[test]
    fn mismatched_counts_error() {
        assert!(solve_linear_map(&[pauli::x()], &[]).is_err());
    }
}
