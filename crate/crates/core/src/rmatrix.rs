//! Unitary R-matrices: axiom checks, the bicharacter family, and `Δ_R`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::group::{root_of_unity, CharacterTable, FiniteQuantumGroup};
use crate::linalg::{embed_legs, flip, map_leg, slice_leg, solve_linear_map, CMatrix, LegSpace, LinearMap};
use crate::tol;

/// Residuals of the R-matrix conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrixReport {
    pub unitarity: f64,
    /// Relative distance of `R` from `Â⊗Â`.
    pub membership: f64,
    /// `(id⊗Δ̂)R − R₁₂R₁₃`
    pub left_comultiplication: f64,
    /// `(Δ̂⊗id)R − R₂₃R₁₃`
    pub right_comultiplication: f64,
    /// `R₁₂V₁₃V₂₃ − V₂₃V₁₃R₁₂`
    pub braiding: f64,
}

impl RMatrixReport {
    pub fn max(&self) -> f64 {
        self.unitarity
            .max(self.membership)
            .max(self.left_comultiplication)
            .max(self.right_comultiplication)
            .max(self.braiding)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        let m = self.max();
        m.is_finite() && m <= tolerance
    }
}

/// Bicharacter-type equations `(id⊗Δ̂)X = X₁₂X₁₃` and `(Δ̂⊗id)X = X₂₃X₁₃`.
pub fn comultiplication_residuals(g: &FiniteQuantumGroup, x: &CMatrix) -> (f64, f64) {
    let n = g.dim_h();
    let hh = g.h().tensor(g.h());
    let hhh = hh.tensor(g.h());
    let leg = |legs: &[usize]| embed_legs(x, legs, &hhh).expect("operator on two legs");
    let dh = |b: &CMatrix| Ok(g.delta_hat().apply(b));
    let left = map_leg(x, &hh, 2, n * n, dh).expect("Δ̂ images on H⊗H");
    let right = map_leg(x, &hh, 1, n * n, dh).expect("Δ̂ images on H⊗H");
    (
        left.max_abs_diff(&leg(&[1, 2]).matmul(&leg(&[1, 3]))),
        right.max_abs_diff(&leg(&[2, 3]).matmul(&leg(&[1, 3]))),
    )
}

/// Checks every R-matrix condition for `r` against `g`.
pub fn check_rmatrix(g: &FiniteQuantumGroup, r: &CMatrix) -> Result<RMatrixReport> {
    let n = g.dim_h();
    if r.rows() != n * n || !r.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "R is {}x{} but H⊗H has dimension {}",
            r.rows(),
            r.cols(),
            n * n
        )));
    }
    let hhh = g.h().tensor(g.h()).tensor(g.h());
    let (left, right) = comultiplication_residuals(g, r);
    let v = g.v();
    let v13 = embed_legs(v, &[1, 3], &hhh)?;
    let v23 = embed_legs(v, &[2, 3], &hhh)?;
    let r12 = embed_legs(r, &[1, 2], &hhh)?;
    let braiding = r12.matmul(&v13).matmul(&v23).max_abs_diff(&v23.matmul(&v13).matmul(&r12));
    Ok(RMatrixReport {
        unitarity: r.unitarity_residual(),
        membership: g.a_hat().tensor(g.a_hat()).residual(r),
        left_comultiplication: left,
        right_comultiplication: right,
        braiding,
    })
}

/// A bicharacter `b(s, t) = exp(2πi·e[s][t]/N)` on the spectrum group of `Â`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter {
    pub modulus: usize,
    pub exponents: Vec<Vec<usize>>,
}

impl Bicharacter {
    pub fn value(&self, s: usize, t: usize) -> Complex64 {
        root_of_unity(self.exponents[s][t], self.modulus)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().flatten().all(|&e| e % self.modulus == 0)
    }
}

/// All bicharacters of the spectrum group of `Â`, trivial one first.
pub fn enumerate_bicharacters(g: &FiniteQuantumGroup) -> Result<Vec<Bicharacter>> {
    let sp = g
        .spectrum()
        .ok_or_else(|| Error::NotAbelian(format!("{} has a noncommutative dual", g.name())))?;
    if !sp.table.is_abelian() {
        return Err(Error::NotAbelian(format!("spectrum of the dual of {}", g.name())));
    }
    let chars = CharacterTable::of(&sp.table)?;
    let homs = sp.table.homomorphisms(&chars.dual);
    Ok(homs
        .into_iter()
        .map(|phi| Bicharacter {
            modulus: chars.modulus,
            exponents: phi.iter().map(|&c| chars.exponents[c].clone()).collect(),
        })
        .collect())
}

/// A unitary R-matrix together with `R̂ = flip(R*)`.
#[derive(Debug, Clone)]
pub struct RMatrix {
    group: Arc<FiniteQuantumGroup>,
    r: CMatrix,
    r_hat: CMatrix,
    label: String,
    report: RMatrixReport,
}

impl RMatrix {
    /// Accepts `r` only if all R-matrix conditions hold within `tol::CHECK`.
    pub fn new(group: Arc<FiniteQuantumGroup>, r: CMatrix, label: impl Into<String>) -> Result<Self> {
        let report = check_rmatrix(&group, &r)?;
        ensure("R unitary", report.unitarity, tol::ORTHONORMAL)?;
        ensure("R ∈ Â⊗Â", report.membership, tol::CHECK)?;
        ensure("(id⊗Δ̂)R = R₁₂R₁₃", report.left_comultiplication, tol::CHECK)?;
        ensure("(Δ̂⊗id)R = R₂₃R₁₃", report.right_comultiplication, tol::CHECK)?;
        ensure("R₁₂V₁₃V₂₃ = V₂₃V₁₃R₁₂", report.braiding, tol::CHECK)?;
        let n = group.dim_h();
        let r_hat = flip(&r.adjoint(), n, n)?;
        Ok(RMatrix {
            group,
            r,
            r_hat,
            label: label.into(),
            report,
        })
    }

    pub fn trivial(group: Arc<FiniteQuantumGroup>) -> Result<Self> {
        let n = group.dim_h();
        Self::new(group, CMatrix::identity(n * n), "trivial")
    }

    /// `R = Σ b(s,t) q_s ⊗ q_t` over the minimal projections of `Â`.
    pub fn bicharacter_matrix(group: &FiniteQuantumGroup, b: &Bicharacter) -> Result<CMatrix> {
        let sp = group
            .spectrum()
            .ok_or_else(|| Error::NotAbelian(format!("{} has a noncommutative dual", group.name())))?;
        let k = sp.projections.len();
        if b.exponents.len() != k || b.exponents.iter().any(|row| row.len() != k) || b.modulus == 0 {
            return Err(Error::Input(format!("bicharacter table must be {k}x{k} with a positive modulus")));
        }
        let n = group.dim_h();
        let mut r = CMatrix::zeros(n * n, n * n);
        for s in 0..k {
            for t in 0..k {
                r.axpy(b.value(s, t), &sp.projections[s].kron(&sp.projections[t]));
            }
        }
        Ok(r)
    }

    pub fn from_bicharacter(group: Arc<FiniteQuantumGroup>, b: &Bicharacter, label: impl Into<String>) -> Result<Self> {
        let r = Self::bicharacter_matrix(&group, b)?;
        Self::new(group, r, label)
    }

    pub fn group(&self) -> &Arc<FiniteQuantumGroup> {
        &self.group
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn r_hat(&self) -> &CMatrix {
        &self.r_hat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn report(&self) -> &RMatrixReport {
        &self.report
    }

    /// `(id⊗Δ̂)R̂ − R̂₁₂R̂₁₃` and `(Δ̂⊗id)R̂ − R̂₂₃R̂₁₃`, which follow from the
    /// R-matrix conditions by taking adjoints.
    pub fn r_hat_residuals(&self) -> (f64, f64) {
        comultiplication_residuals(&self.group, &self.r_hat)
    }
}

/// Every bicharacter R-matrix of `g`, labelled `bicharacter:<k>`.
pub fn enumerate_bicharacter_rmatrices(g: &Arc<FiniteQuantumGroup>) -> Result<Vec<RMatrix>> {
    enumerate_bicharacters(g)?
        .iter()
        .enumerate()
        .map(|(k, b)| RMatrix::from_bicharacter(g.clone(), b, format!("bicharacter:{k}")))
        .collect()
}

/// `R*` as an R-matrix for `G^opp`.
pub fn opposite_rmatrix(r: &RMatrix, opposite: Arc<FiniteQuantumGroup>) -> Result<RMatrix> {
    if opposite.dim_h() != r.group.dim_h() {
        return Err(Error::GroupMismatch(r.group.name().into(), opposite.name().into()));
    }
    let label = match r.label.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{}*", r.label),
    };
    RMatrix::new(opposite, r.r.adjoint(), label)
}

/// Residuals recorded when solving for `Δ_R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRReport {
    pub solve: f64,
    /// `(id⊗Δ_R)V − V₁₂R̂₁₃`
    pub defining: f64,
    pub homomorphism: f64,
    /// Relative distance of `Δ_R(A)` from `A⊗Â`.
    pub membership: f64,
    /// Rank of the slices of `V`, which must equal `dim A`.
    pub slice_rank: usize,
}

/// `Δ_R : A → A⊗Â` with `(id⊗Δ_R)V = V₁₂R̂₁₃`.
#[derive(Debug, Clone)]
pub struct DeltaR {
    map: LinearMap,
    report: DeltaRReport,
}

impl DeltaR {
    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn apply(&self, a: &CMatrix) -> CMatrix {
        self.map.apply(a)
    }

    pub fn report(&self) -> &DeltaRReport {
        &self.report
    }
}

/// Solves the defining equation of `Δ_R` on the slices of `V`.
pub fn solve_delta_r(r: &RMatrix) -> Result<DeltaR> {
    let g = r.group();
    let n = g.dim_h();
    let hh = g.h().tensor(g.h());
    let hhh = hh.tensor(g.h());
    let target = embed_legs(g.v(), &[1, 2], &hhh)?.matmul(&embed_legs(r.r_hat(), &[1, 3], &hhh)?);
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for e in g.a_hat().basis() {
        inputs.push(slice_leg(g.v(), &hh, 1, e)?);
        outputs.push(slice_leg(&target, &hhh, 1, e)?);
    }
    let slice_rank = crate::linalg::span_close(&inputs, g.h())?.dim();
    if slice_rank != g.a().dim() {
        return Err(Error::Precondition(format!(
            "slices of V span a {slice_rank}-dimensional space, dim A = {}",
            g.a().dim()
        )));
    }
    let solved = solve_linear_map(&inputs, &outputs)?;
    ensure("Δ_R is well defined", solved.residual, tol::SOLVE)?;
    let map = solved.map.restrict(g.a()).with_codomain(hh.clone())?;
    let lhs = map_leg(g.v(), &hh, 2, n * n, |b| Ok(map.apply(b)))?;
    let a_ahat = g.a().tensor(g.a_hat());
    let report = DeltaRReport {
        solve: solved.residual,
        defining: lhs.max_abs_diff(&target),
        homomorphism: map.hom_residual().max(),
        membership: map.images().iter().map(|x| a_ahat.residual(x)).fold(0.0, f64::max),
        slice_rank,
    };
    ensure("(id⊗Δ_R)V = V₁₂R̂₁₃", report.defining, tol::CHECK)?;
    ensure("Δ_R is a unital *-homomorphism", report.homomorphism, tol::CHECK)?;
    ensure("Δ_R(A) ⊂ A⊗Â", report.membership, tol::CHECK)?;
    Ok(DeltaR { map, report })
}

/// `Δ_R` lifted to act on operators with an `A` leg: `(id⊗Δ_R)` on leg `leg` of `space`.
pub fn delta_r_on_leg(delta_r: &DeltaR, m: &CMatrix, space: &LegSpace, leg: usize) -> Result<CMatrix> {
    let n = delta_r.map.domain().carrier_dim();
    map_leg(m, space, leg, n * n, |b| Ok(delta_r.apply(b)))
}
