//! Complex SVD with a reconstruction check.
//!
//! nalgebra's complex SVD can stop early with a wrong factorization at its
//! default convergence threshold, so every factorization is verified against
//! `‖UΣV* − M‖ ≤ 1e-12 · max(‖M‖, 1)` and retried with other settings.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

type C64 = Complex<f64>;

#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<C64>,
    /// Descending.
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<C64>,
}

const RECONSTRUCTION: f64 = 1e-12;
const EPSILONS: [f64; 4] = [f64::EPSILON, 1e-15, 4e-15, 1e-14];

fn attempt(m: &DMatrix<C64>, eps: f64) -> Option<(Svd, f64)> {
    let s = m.clone().try_svd(true, true, eps, 0)?;
    let (u, v_t) = (s.u?, s.v_t?);
    let sigma = DMatrix::from_diagonal(&s.singular_values.map(|x| C64::new(x, 0.0)));
    let err = (&u * sigma * &v_t - m).norm();
    let mut order: Vec<usize> = (0..s.singular_values.len()).collect();
    order.sort_by(|&a, &b| s.singular_values[b].total_cmp(&s.singular_values[a]));
    let out = Svd {
        u: DMatrix::from_fn(u.nrows(), order.len(), |i, k| u[(i, order[k])]),
        singular_values: DVector::from_fn(order.len(), |k, _| s.singular_values[order[k]]),
        v_t: DMatrix::from_fn(order.len(), v_t.ncols(), |k, j| v_t[(order[k], j)]),
    };
    Some((out, err))
}

/// Thin SVD `M = U diag(σ) Vᵗ` with σ sorted in descending order.
pub fn svd(m: &DMatrix<C64>) -> Result<Svd> {
    let bound = RECONSTRUCTION * m.norm().max(1.0);
    let adjoint = m.adjoint();
    let mut best: Option<f64> = None;
    for eps in EPSILONS {
        if let Some((s, err)) = attempt(m, eps) {
            if err <= bound {
                return Ok(s);
            }
            best = Some(best.map_or(err, |b: f64| b.min(err)));
        }
        if let Some((s, err)) = attempt(&adjoint, eps) {
            if err <= bound {
                return Ok(Svd {
                    u: s.v_t.adjoint(),
                    singular_values: s.singular_values,
                    v_t: s.u.adjoint(),
                });
            }
            best = Some(best.map_or(err, |b: f64| b.min(err)));
        }
    }
    Err(Error::Precondition(format!(
        "SVD of a {}x{} matrix did not reconstruct (best error {:e})",
        m.nrows(),
        m.ncols(),
        best.unwrap_or(f64::INFINITY)
    )))
}

/// Moore–Penrose inverse, dropping singular values at or below `cut × σ_max`.
pub fn pseudo_inverse(m: &DMatrix<C64>, cut: f64) -> Result<DMatrix<C64>> {
    let s = svd(m)?;
    let smax = s.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (k, &sigma) in s.singular_values.iter().enumerate() {
        if sigma > cut * smax && sigma > 0.0 {
            let v = s.v_t.row(k).adjoint();
            let u = s.u.column(k).adjoint();
            out += (v * u) / C64::new(sigma, 0.0);
        }
    }
    Ok(out)
}
