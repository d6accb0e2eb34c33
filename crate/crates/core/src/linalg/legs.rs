//! Tensor-leg bookkeeping. Legs are numbered from 1, so `V₁₃` is
//! `embed_legs(v, &[1, 3], &space)`.

use num_complex::Complex64;

use super::matrix::{CMatrix, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LegSpace {
    dims: Vec<usize>,
}

impl LegSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!(
                "leg dimensions must be positive, got {dims:?}"
            )));
        }
        Ok(LegSpace { dims })
    }

    pub fn single(dim: usize) -> Self {
        assert!(dim > 0, "leg dimension must be positive");
        LegSpace { dims: vec![dim] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn legs(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimension of 1-based leg `leg`.
    pub fn dim(&self, leg: usize) -> Result<usize> {
        self.check_leg(leg)?;
        Ok(self.dims[leg - 1])
    }

    pub fn tensor(&self, other: &LegSpace) -> LegSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        LegSpace { dims }
    }

    /// The same total space viewed as a single leg.
    pub fn flattened(&self) -> LegSpace {
        LegSpace::single(self.total())
    }

    fn check_leg(&self, leg: usize) -> Result<()> {
        if leg == 0 || leg > self.dims.len() {
            Err(Error::InvalidLeg {
                leg,
                legs: self.dims.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Row-major strides, leg 1 most significant (matches `kron` ordering).
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }
}

fn check_square(m: &CMatrix, n: usize, what: &str) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Operator on `target` acting as `m` on the listed legs (in the listed order)
/// and as the identity on the others.
pub fn embed_legs(m: &CMatrix, src_legs: &[usize], target: &LegSpace) -> Result<CMatrix> {
    let mut seen = vec![false; target.legs()];
    for &leg in src_legs {
        target.check_leg(leg)?;
        if std::mem::replace(&mut seen[leg - 1], true) {
            return Err(Error::DimensionMismatch(format!("leg {leg} listed twice")));
        }
    }
    let sub_dims: Vec<usize> = src_legs.iter().map(|&l| target.dims[l - 1]).collect();
    let dm: usize = sub_dims.iter().product();
    check_square(m, dm, "embed_legs")?;

    let strides = target.strides();
    let n = target.total();
    // place[j]: contribution of sub-index j to a full index.
    let mut place = vec![0usize; dm];
    for (j, p) in place.iter_mut().enumerate() {
        let mut rem = j;
        for k in (0..src_legs.len()).rev() {
            let digit = rem % sub_dims[k];
            rem /= sub_dims[k];
            *p += digit * strides[src_legs[k] - 1];
        }
    }
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        // Split r into the listed-leg sub-index and the remaining offset.
        let mut sub = 0;
        let mut rest = r;
        for &leg in src_legs {
            let digit = (r / strides[leg - 1]) % target.dims[leg - 1];
            sub = sub * target.dims[leg - 1] + digit;
            rest -= digit * strides[leg - 1];
        }
        for j in 0..dm {
            let z = m[(sub, j)];
            if z != ZERO {
                out[(r, rest + place[j])] = z;
            }
        }
    }
    Ok(out)
}

/// Reorders legs: leg `k` of the result is leg `order[k]` of `space` (1-based).
pub fn permute_legs(m: &CMatrix, space: &LegSpace, order: &[usize]) -> Result<CMatrix> {
    let n = space.total();
    check_square(m, n, "permute_legs")?;
    if order.len() != space.legs() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} for {} legs",
            order.len(),
            space.legs()
        )));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=space.legs()).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch(format!("{order:?} is not a permutation")));
    }
    let new_space = LegSpace {
        dims: order.iter().map(|&l| space.dims[l - 1]).collect(),
    };
    let old_strides = space.strides();
    let new_strides = new_space.strides();
    let index_map: Vec<usize> = (0..n)
        .map(|i| {
            order
                .iter()
                .enumerate()
                .map(|(k, &l)| ((i / old_strides[l - 1]) % space.dims[l - 1]) * new_strides[k])
                .sum()
        })
        .collect();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let z = m[(r, c)];
            if z != ZERO {
                out[(index_map[r], index_map[c])] = z;
            }
        }
    }
    Ok(out)
}

/// Swaps the two legs of an operator on `d1 ⊗ d2`.
pub fn flip(m: &CMatrix, d1: usize, d2: usize) -> Result<CMatrix> {
    permute_legs(m, &LegSpace::new(vec![d1, d2])?, &[2, 1])
}

/// Applies a linear map to one leg: `(id ⊗ … ⊗ f ⊗ … ⊗ id)(m)`, where `f` sends
/// operators on leg `leg` to operators of size `new_dim`.
pub fn map_leg<F>(m: &CMatrix, space: &LegSpace, leg: usize, new_dim: usize, f: F) -> Result<CMatrix>
where
    F: Fn(&CMatrix) -> Result<CMatrix>,
{
    space.check_leg(leg)?;
    let k = space.legs();
    let moved = if leg == k {
        m.clone()
    } else {
        let order: Vec<usize> = (1..=k).filter(|&l| l != leg).chain([leg]).collect();
        permute_legs(m, space, &order)?
    };
    let d = space.dims[leg - 1];
    let rest = space.total() / d;
    let mut out = CMatrix::zeros(rest * new_dim, rest * new_dim);
    let mut block = CMatrix::zeros(d, d);
    for i in 0..rest {
        for j in 0..rest {
            let mut nonzero = false;
            for a in 0..d {
                for b in 0..d {
                    let z = moved[(i * d + a, j * d + b)];
                    nonzero |= z != ZERO;
                    block[(a, b)] = z;
                }
            }
            if !nonzero {
                continue;
            }
            let img = f(&block)?;
            check_square(&img, new_dim, "map_leg image")?;
            for a in 0..new_dim {
                for b in 0..new_dim {
                    out[(i * new_dim + a, j * new_dim + b)] = img[(a, b)];
                }
            }
        }
    }
    if leg == k {
        return Ok(out);
    }
    let mut moved_dims: Vec<usize> = (1..=k).filter(|&l| l != leg).map(|l| space.dims[l - 1]).collect();
    moved_dims.push(new_dim);
    let moved_space = LegSpace { dims: moved_dims };
    // Leg `leg` currently sits last; put it back.
    let order: Vec<usize> = (1..=k)
        .map(|l| match l.cmp(&leg) {
            std::cmp::Ordering::Less => l,
            std::cmp::Ordering::Equal => k,
            std::cmp::Ordering::Greater => l - 1,
        })
        .collect();
    permute_legs(&out, &moved_space, &order)
}

/// Contracts leg `leg` against the functional `x ↦ ⟨e, x⟩_HS`, removing that leg.
pub fn slice_leg(m: &CMatrix, space: &LegSpace, leg: usize, e: &CMatrix) -> Result<CMatrix> {
    let d = space.dim(leg)?;
    check_square(e, d, "slice functional")?;
    map_leg(m, space, leg, 1, |b| Ok(CMatrix::scalar(e.hs_inner(b))))
}

/// Partial trace over leg `leg`.
pub fn partial_trace(m: &CMatrix, space: &LegSpace, leg: usize) -> Result<CMatrix> {
    let d = space.dim(leg)?;
    slice_leg(m, space, leg, &CMatrix::identity(d))
}

/// Sum `Σ coeffs[i] · mats[i]`.
pub fn combine(coeffs: &[Complex64], mats: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::zeros(mats[0].rows(), mats[0].cols());
    for (&c, m) in coeffs.iter().zip(mats) {
        if c != ZERO {
            out.axpy(c, m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;

    fn space(d: &[usize]) -> LegSpace {
        LegSpace::new(d.to_vec()).unwrap()
    }

    #[test]
    fn embedding_identity_gives_identity() {
        let e = embed_legs(&CMatrix::identity(2), &[1], &space(&[2, 2])).unwrap();
        assert_eq!(e, CMatrix::identity(4));
    }

    #[test]
    fn embedding_on_second_leg_is_kron() {
        let e = embed_legs(&pauli::x(), &[2], &space(&[2, 2])).unwrap();
        assert_eq!(e, CMatrix::identity(2).kron(&pauli::x()));
        let e = embed_legs(&pauli::x(), &[1], &space(&[2, 3])).unwrap();
        assert_eq!(e, pauli::x().kron(&CMatrix::identity(3)));
    }

    /// Oracle: conjugate `v ⊗ I` by the permutation matrix swapping legs 2 and 3.
    fn legs13_by_permutation(v: &CMatrix) -> CMatrix {
        let p = CMatrix::from_fn(8, 8, |r, c| {
            let (a, b, cc) = (c / 4, (c / 2) % 2, c % 2);
            let swapped = a * 4 + cc * 2 + b;
            if r == swapped {
                num_complex::Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        p.matmul(&v.kron(&CMatrix::identity(2))).matmul(&p.adjoint())
    }

    #[test]
    fn embedding_on_legs_13_matches_permutation_oracle() {
        let v = CMatrix::from_fn(4, 4, |i, j| Complex64::new(i as f64 + 0.5 * j as f64, (i * j) as f64));
        let e = embed_legs(&v, &[1, 3], &space(&[2, 2, 2])).unwrap();
        assert_eq!(e, legs13_by_permutation(&v));
        let e2 = embed_legs(&v.matmul(&v), &[1, 3], &space(&[2, 2, 2])).unwrap();
        assert!(e2.max_abs_diff(&e.matmul(&e)) < 1e-12);
    }

    #[test]
    fn reversed_leg_order_flips() {
        let a = pauli::x();
        let b = pauli::z();
        let ab = a.kron(&b);
        let e = embed_legs(&ab, &[2, 1], &space(&[2, 2])).unwrap();
        assert_eq!(e, b.kron(&a));
        assert_eq!(flip(&ab, 2, 2).unwrap(), b.kron(&a));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(embed_legs(&CMatrix::identity(3), &[1], &space(&[2, 2])).is_err());
        assert!(embed_legs(&CMatrix::identity(2), &[3], &space(&[2, 2])).is_err());
        assert!(embed_legs(&CMatrix::identity(4), &[1, 1], &space(&[2, 2])).is_err());
    }

    #[test]
    fn map_leg_applies_on_the_named_leg() {
        let a = pauli::x();
        let b = pauli::z();
        let c = pauli::y();
        let m = a.kron(&b).kron(&c);
        let sp = space(&[2, 2, 2]);
        let z = pauli::z();
        let doubled = map_leg(&m, &sp, 2, 4, |x| Ok(x.kron(&z))).unwrap();
        assert_eq!(doubled, a.kron(&b.kron(&z)).kron(&c));
        let first = map_leg(&m, &sp, 1, 2, |x| Ok(x.transpose())).unwrap();
        assert_eq!(first, a.transpose().kron(&b).kron(&c));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = pauli::x();
        let b = CMatrix::identity(3).scale_real(2.0);
        let m = a.kron(&b);
        let pt = partial_trace(&m, &space(&[2, 3]), 2).unwrap();
        assert!(pt.max_abs_diff(&a.scale_real(6.0)) < 1e-14);
    }
}
