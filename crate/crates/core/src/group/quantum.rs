use nalgebra::DMatrix;
use num_complex::Complex64;

use super::table::{CharacterTable, GroupTable};
use crate::algebra::ClosureResidual;
use crate::error::{ensure, Error, Result};
use crate::linalg::{embed_legs, flip, map_leg, slice_leg, solve_linear_map, CMatrix, LegSpace, LinearMap, OperatorSubspace, ONE};
use crate::tol;

/// Representations `π` of `A` and `π̂` of `Â` on a common space `ℂ^K` such that
/// `(π⊗id)Δ(a) = W(π(a)⊗I)W*` with `W = (π̂⊗id)V`.
#[derive(Debug, Clone)]
pub struct HeisenbergPair {
    pi: LinearMap,
    pi_hat: LinearMap,
}

impl HeisenbergPair {
    pub fn new(pi: LinearMap, pi_hat: LinearMap) -> Result<Self> {
        if pi.codomain_dim() != pi_hat.codomain_dim() {
            return Err(Error::DimensionMismatch(format!(
                "π acts on ℂ^{} but π̂ on ℂ^{}",
                pi.codomain_dim(),
                pi_hat.codomain_dim()
            )));
        }
        Ok(HeisenbergPair { pi, pi_hat })
    }

    /// The identity inclusions of `A` and `Â` into `B(H)`.
    pub fn inclusions(a: &OperatorSubspace, a_hat: &OperatorSubspace) -> Self {
        HeisenbergPair {
            pi: LinearMap::inclusion(a),
            pi_hat: LinearMap::inclusion(a_hat),
        }
    }

    pub fn dim(&self) -> usize {
        self.pi.codomain_dim()
    }

    pub fn pi(&self) -> &LinearMap {
        &self.pi
    }

    pub fn pi_hat(&self) -> &LinearMap {
        &self.pi_hat
    }

    /// `(π⊗I_m, π̂⊗I_m)` on `ℂ^K ⊗ ℂ^m`.
    pub fn amplified(&self, m: usize) -> Self {
        let amp = |f: &LinearMap| {
            let id = CMatrix::identity(m);
            let images = f.images().iter().map(|x| x.kron(&id)).collect();
            LinearMap::new(f.domain().clone(), LegSpace::single(f.codomain_dim() * m), images)
                .expect("amplified images have matching size")
        };
        HeisenbergPair {
            pi: amp(&self.pi),
            pi_hat: amp(&self.pi_hat),
        }
    }
}

/// Minimal projections of a commutative `Â` together with the group law they
/// inherit from `Δ̂`: `Δ̂(q_c) = Σ_{ab=c} q_a ⊗ q_b`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub projections: Vec<CMatrix>,
    pub table: GroupTable,
}

impl Spectrum {
    /// Finds the spectrum of `a_hat` numerically, or `None` when `Â` is not
    /// commutative or `Δ̂` does not induce a group law.
    pub fn detect(a_hat: &OperatorSubspace, delta_hat: &LinearMap) -> Option<Spectrum> {
        let basis = a_hat.basis();
        let commutes = basis
            .iter()
            .all(|x| basis.iter().all(|y| x.commutator(y).max_abs() <= tol::CHECK));
        if !commutes {
            return None;
        }
        let n = a_hat.carrier_dim();
        // a generic self-adjoint element separates the minimal projections
        let mut h = CMatrix::zeros(n, n);
        for (k, b) in basis.iter().enumerate() {
            let w = ((k as f64 + 2.0).sqrt() * 7.3).fract() + 0.5;
            h.axpy(Complex64::new(w, 0.0), &(b + &b.adjoint()));
        }
        let eig = h.to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let mut projections: Vec<CMatrix> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &i in &order {
            let lambda = eig.eigenvalues[i];
            let v: Vec<Complex64> = (0..n).map(|r| eig.eigenvectors[(r, i)]).collect();
            let p = CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj());
            if lambda - last > 1e-6 {
                projections.push(p);
            } else {
                let top = projections.last_mut()?;
                *top = &*top + &p;
            }
            last = lambda;
        }
        if projections.len() != a_hat.dim() || projections.iter().any(|p| !a_hat.contains(p)) {
            return None;
        }
        let table = Self::induced_table(&projections, delta_hat)?;
        Some(Spectrum { projections, table })
    }

    fn induced_table(projections: &[CMatrix], delta_hat: &LinearMap) -> Option<GroupTable> {
        let k = projections.len();
        let mut mul = vec![vec![usize::MAX; k]; k];
        for (c, qc) in projections.iter().enumerate() {
            let dq = delta_hat.apply(qc);
            for (a, qa) in projections.iter().enumerate() {
                for (b, qb) in projections.iter().enumerate() {
                    let pair = qa.kron(qb);
                    let w = pair.hs_inner(&dq) / pair.hs_inner(&pair);
                    if (w - ONE).norm() < 1e-6 {
                        if mul[a][b] != usize::MAX {
                            return None;
                        }
                        mul[a][b] = c;
                    } else if w.norm() > 1e-6 {
                        return None;
                    }
                }
            }
        }
        GroupTable::new(mul).ok()
    }
}

/// Residuals of the two bicharacter equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicharacterResidual {
    /// `(id⊗Δ)V − V₁₂V₁₃`
    pub comultiplication: f64,
    /// `(Δ̂⊗id)V − V₂₃V₁₃`
    pub dual_comultiplication: f64,
}

impl BicharacterResidual {
    pub fn max(&self) -> f64 {
        self.comultiplication.max(self.dual_comultiplication)
    }
}

/// Every defect checked when a quantum group is accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDiagnostics {
    pub a_closure: f64,
    pub a_hat_closure: f64,
    pub v_unitarity: f64,
    pub v_membership: f64,
    pub delta_hom: f64,
    pub delta_hat_hom: f64,
    pub coassociativity: f64,
    pub dual_coassociativity: f64,
    pub bicharacter: BicharacterResidual,
    pub heisenberg: f64,
    /// `dim span(A·Â)`, equal to `dim(H)²` for a regular pair.
    pub regularity_dim: usize,
}

/// A finite quantum group realised on `H = ℂ^n`.
#[derive(Debug, Clone)]
pub struct FiniteQuantumGroup {
    name: String,
    h: LegSpace,
    a: OperatorSubspace,
    a_hat: OperatorSubspace,
    delta: LinearMap,
    delta_hat: LinearMap,
    v: CMatrix,
    pair: HeisenbergPair,
    spectrum: Option<Spectrum>,
    gradings: Vec<CMatrix>,
    /// Group table whose function algebra this is, when known.
    group: Option<GroupTable>,
}

/// Unvalidated parts of a quantum group.
#[derive(Debug, Clone)]
pub struct QuantumGroupParts {
    pub name: String,
    pub a: OperatorSubspace,
    pub a_hat: OperatorSubspace,
    pub delta: LinearMap,
    pub delta_hat: LinearMap,
    pub v: CMatrix,
    pub pair: Option<HeisenbergPair>,
    pub spectrum: Option<Spectrum>,
    pub gradings: Vec<CMatrix>,
}

fn delta_fn(n: usize, g: usize) -> CMatrix {
    CMatrix::unit(n, g, g)
}

/// Right regular representation `u_g e_x = e_{x g⁻¹}`.
fn right_regular(t: &GroupTable, g: usize) -> CMatrix {
    let n = t.order();
    let mut m = CMatrix::zeros(n, n);
    let gi = t.inv(g);
    for x in 0..n {
        m[(t.mul(x, gi), x)] = ONE;
    }
    m
}

impl FiniteQuantumGroup {
    /// Validates `parts` and returns the group, or the first violated identity.
    pub fn from_parts(parts: QuantumGroupParts) -> Result<Self> {
        let n = parts.a.carrier_dim();
        if parts.a_hat.carrier_dim() != n || parts.v.rows() != n * n || !parts.v.is_square() {
            return Err(Error::DimensionMismatch("A, Â and V must act on a common H".into()));
        }
        let pair = parts.pair.unwrap_or_else(|| HeisenbergPair::inclusions(&parts.a, &parts.a_hat));
        let g = FiniteQuantumGroup {
            name: parts.name,
            h: LegSpace::single(n),
            a: parts.a,
            a_hat: parts.a_hat,
            delta: parts.delta,
            delta_hat: parts.delta_hat,
            v: parts.v,
            pair,
            spectrum: parts.spectrum,
            gradings: parts.gradings,
            group: None,
        };
        g.validate()?;
        Ok(g)
    }

    /// `C(Γ)`: diagonal functions, right regular group algebra, `V = Σ u_g ⊗ δ_g`.
    pub fn function_algebra(name: impl Into<String>, table: &GroupTable) -> Result<Self> {
        let n = table.order();
        let h = LegSpace::single(n);
        let a = OperatorSubspace::from_orthonormal(h.clone(), (0..n).map(|g| delta_fn(n, g)).collect())?;
        let scale = 1.0 / (n as f64).sqrt();
        let u: Vec<CMatrix> = (0..n).map(|g| right_regular(table, g)).collect();
        let a_hat = OperatorSubspace::from_orthonormal(h.clone(), u.iter().map(|m| m.scale_real(scale)).collect())?;
        let hh = h.tensor(&h);
        let delta = LinearMap::from_fn(&a, hh.clone(), |d| {
            let mut out = CMatrix::zeros(n * n, n * n);
            for x in 0..n {
                for y in 0..n {
                    let c = d[(table.mul(x, y), table.mul(x, y))];
                    if c != Complex64::new(0.0, 0.0) {
                        out.axpy(c, &delta_fn(n, x).kron(&delta_fn(n, y)));
                    }
                }
            }
            Ok(out)
        })?;
        let delta_hat = LinearMap::new(
            a_hat.clone(),
            hh,
            u.iter().map(|m| m.kron(m).scale_real(scale)).collect(),
        )?;
        let mut v = CMatrix::zeros(n * n, n * n);
        for (g, ug) in u.iter().enumerate() {
            v.axpy(ONE, &ug.kron(&delta_fn(n, g)));
        }
        let spectrum = if table.is_abelian() {
            let chars = CharacterTable::of(table)?;
            let projections = (0..chars.len())
                .map(|c| {
                    let mut q = CMatrix::zeros(n, n);
                    for (g, ug) in u.iter().enumerate() {
                        q.axpy(chars.value(c, g).conj() / n as f64, ug);
                    }
                    q
                })
                .collect();
            Some(Spectrum {
                projections,
                table: chars.dual.clone(),
            })
        } else {
            None
        };
        let gradings = table
            .homomorphisms(&GroupTable::cyclic(2))
            .into_iter()
            .skip(1)
            .map(|hom| {
                let d: Vec<Complex64> = hom.iter().map(|&s| Complex64::new(if s == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
                CMatrix::diagonal(&d)
            })
            .collect();
        let mut g = Self::from_parts(QuantumGroupParts {
            name: name.into(),
            a,
            a_hat,
            delta,
            delta_hat,
            v,
            pair: None,
            spectrum,
            gradings,
        })?;
        g.group = Some(table.clone());
        Ok(g)
    }

    /// `C(Z_{n1} × … × Z_{nk})`.
    pub fn finite_abelian(factors: &[usize]) -> Result<Self> {
        let table = GroupTable::finite_abelian(factors)?;
        let name = if factors.is_empty() {
            "trivial".to_string()
        } else {
            factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x")
        };
        Self::function_algebra(name, &table)
    }

    /// The dual of `C(Γ)`: `A' = Â`, `Â' = A`, `Δ' = Δ̂`, `Δ̂' = Δ`, `V' = flip(V*)`.
    pub fn dual_of_group(name: impl Into<String>, table: &GroupTable) -> Result<Self> {
        let base = Self::function_algebra("base", table)?;
        let n = base.dim_h();
        let v = flip(&base.v.adjoint(), n, n)?;
        let gradings = (0..n)
            .filter(|&g| g != table.identity() && table.mul(g, g) == table.identity())
            .map(|g| right_regular(table, g))
            .collect();
        let spectrum = Spectrum {
            projections: base.a.basis().to_vec(),
            table: table.clone(),
        };
        Self::from_parts(QuantumGroupParts {
            name: name.into(),
            a: base.a_hat.clone(),
            a_hat: base.a.clone(),
            delta: base.delta_hat.clone(),
            delta_hat: base.delta.clone(),
            v,
            pair: None,
            spectrum: Some(spectrum),
            gradings,
        })
    }

    /// `G^opp`: the same algebras with `flip∘Δ`, `flip∘Δ̂` and bicharacter `V*`.
    /// The Heisenberg pair becomes `(π∘S, π̂)` with `S` the antipode, read off
    /// from `V* = (id⊗S)V`.
    pub fn opposite(&self) -> Result<Self> {
        let n = self.dim_h();
        let flipped = |m: &LinearMap| -> Result<LinearMap> {
            let images = m.images().iter().map(|x| flip(x, n, n)).collect::<Result<Vec<_>>>()?;
            LinearMap::new(m.domain().clone(), m.codomain().clone(), images)
        };
        let v_star = self.v.adjoint();
        let s = self.antipode()?;
        let pi = self.pair.pi().compose(&s);
        let pair = HeisenbergPair::new(pi, self.pair.pi_hat().clone())?;
        let spectrum = self.spectrum.as_ref().map(|sp| Spectrum {
            projections: sp.projections.clone(),
            table: sp.table.opposite(),
        });
        let name = match self.name.strip_prefix("opp(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("opp({})", self.name),
        };
        let mut g = Self::from_parts(QuantumGroupParts {
            name,
            a: self.a.clone(),
            a_hat: self.a_hat.clone(),
            delta: flipped(&self.delta)?,
            delta_hat: flipped(&self.delta_hat)?,
            v: v_star,
            pair: Some(pair),
            spectrum,
            gradings: self.gradings.clone(),
        })?;
        g.group = self.group.as_ref().map(GroupTable::opposite);
        Ok(g)
    }

    /// The antipode `S: A → A`, determined by `(id⊗S)V = V*` on the slices of `V`.
    pub fn antipode(&self) -> Result<LinearMap> {
        let hh = self.h.tensor(&self.h);
        let v_star = self.v.adjoint();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for e in self.a_hat.basis() {
            inputs.push(slice_leg(&self.v, &hh, 1, e)?);
            outputs.push(slice_leg(&v_star, &hh, 1, e)?);
        }
        let solved = solve_linear_map(&inputs, &outputs)?;
        ensure("antipode (id⊗S)V = V*", solved.residual, tol::SOLVE)?;
        let s = solved.map.restrict(&self.a);
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h(&self) -> &LegSpace {
        &self.h
    }

    pub fn dim_h(&self) -> usize {
        self.h.total()
    }

    pub fn a(&self) -> &OperatorSubspace {
        &self.a
    }

    pub fn a_hat(&self) -> &OperatorSubspace {
        &self.a_hat
    }

    pub fn delta(&self) -> &LinearMap {
        &self.delta
    }

    pub fn delta_hat(&self) -> &LinearMap {
        &self.delta_hat
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    /// `V̂ = flip(V*)`.
    pub fn v_hat(&self) -> CMatrix {
        let n = self.dim_h();
        flip(&self.v.adjoint(), n, n).expect("V acts on H⊗H")
    }

    pub fn pair(&self) -> &HeisenbergPair {
        &self.pair
    }

    pub fn spectrum(&self) -> Option<&Spectrum> {
        self.spectrum.as_ref()
    }

    /// Self-adjoint unitaries `χ ∈ A` with `Δ(χ) = χ⊗χ`, other than `I`.
    pub fn gradings(&self) -> &[CMatrix] {
        &self.gradings
    }

    pub fn group_table(&self) -> Option<&GroupTable> {
        self.group.as_ref()
    }

    /// `I_A`.
    pub fn unit(&self) -> CMatrix {
        CMatrix::identity(self.dim_h())
    }

    /// Both bicharacter equations on `H⊗H⊗H`.
    pub fn check_bicharacter(&self) -> BicharacterResidual {
        let n = self.dim_h();
        let hh = self.h.tensor(&self.h);
        let hhh = hh.tensor(&self.h);
        let v = &self.v;
        let leg = |legs: &[usize]| embed_legs(v, legs, &hhh).expect("V acts on two legs");
        let lhs1 = map_leg(v, &hh, 2, n * n, |b| Ok(self.delta.apply(b))).expect("Δ maps into H⊗H");
        let rhs1 = leg(&[1, 2]).matmul(&leg(&[1, 3]));
        let lhs2 = map_leg(v, &hh, 1, n * n, |b| Ok(self.delta_hat.apply(b))).expect("Δ̂ maps into H⊗H");
        let rhs2 = leg(&[2, 3]).matmul(&leg(&[1, 3]));
        BicharacterResidual {
            comultiplication: lhs1.max_abs_diff(&rhs1),
            dual_comultiplication: lhs2.max_abs_diff(&rhs2),
        }
    }

    /// `max_a ‖(π⊗id)Δ(a) − W(π(a)⊗I)W*‖` with `W = (π̂⊗id)V`, for the given pair.
    pub fn heisenberg_residual(&self, pair: &HeisenbergPair) -> f64 {
        let n = self.dim_h();
        let k = pair.dim();
        let hh = self.h.tensor(&self.h);
        let w = map_leg(&self.v, &hh, 1, k, |b| Ok(pair.pi_hat().apply(b))).expect("π̂ images are K×K");
        let w_star = w.adjoint();
        let id = CMatrix::identity(n);
        self.a
            .basis()
            .iter()
            .map(|a| {
                let lhs = map_leg(&self.delta.apply(a), &hh, 1, k, |b| Ok(pair.pi().apply(b))).expect("π images are K×K");
                let rhs = w.matmul(&pair.pi().apply(a).kron(&id)).matmul(&w_star);
                lhs.max_abs_diff(&rhs)
            })
            .fold(0.0, f64::max)
    }

    pub fn heisenberg_check(&self) -> f64 {
        self.heisenberg_residual(&self.pair)
    }

    /// `(Δ⊗id)Δ − (id⊗Δ)Δ` on the basis of `A` (or of `Â` for `Δ̂`).
    fn coassociativity(map: &LinearMap, h: &LegSpace) -> f64 {
        let n = h.total();
        let hh = h.tensor(h);
        map.domain()
            .basis()
            .iter()
            .map(|a| {
                let d = map.apply(a);
                let left = map_leg(&d, &hh, 1, n * n, |b| Ok(map.apply(b))).expect("square images");
                let right = map_leg(&d, &hh, 2, n * n, |b| Ok(map.apply(b))).expect("square images");
                left.max_abs_diff(&right)
            })
            .fold(0.0, f64::max)
    }

    pub fn diagnostics(&self) -> Result<GroupDiagnostics> {
        let a_hat_a = self.a_hat.tensor(&self.a);
        let mut products = Vec::new();
        for a in self.a.basis() {
            for b in self.a_hat.basis() {
                products.push(a.matmul(b));
            }
        }
        let regularity_dim = crate::linalg::span_close(&products, &self.h)?.dim();
        Ok(GroupDiagnostics {
            a_closure: ClosureResidual::of(&self.a).max(),
            a_hat_closure: ClosureResidual::of(&self.a_hat).max(),
            v_unitarity: self.v.unitarity_residual(),
            v_membership: a_hat_a.residual(&self.v),
            delta_hom: self.delta.hom_residual().max(),
            delta_hat_hom: self.delta_hat.hom_residual().max(),
            coassociativity: Self::coassociativity(&self.delta, &self.h),
            dual_coassociativity: Self::coassociativity(&self.delta_hat, &self.h),
            bicharacter: self.check_bicharacter(),
            heisenberg: self.heisenberg_check(),
            regularity_dim,
        })
    }

    fn validate(&self) -> Result<()> {
        let d = self.diagnostics()?;
        ensure("A is a unital *-algebra", d.a_closure, tol::CHECK)?;
        ensure("Â is a unital *-algebra", d.a_hat_closure, tol::CHECK)?;
        ensure("V unitary", d.v_unitarity, tol::ORTHONORMAL)?;
        ensure("V ∈ Â⊗A", d.v_membership, tol::CHECK)?;
        ensure("Δ is a unital *-homomorphism", d.delta_hom, tol::CHECK)?;
        ensure("Δ̂ is a unital *-homomorphism", d.delta_hat_hom, tol::CHECK)?;
        ensure("(Δ⊗id)Δ = (id⊗Δ)Δ", d.coassociativity, tol::CHECK)?;
        ensure("(Δ̂⊗id)Δ̂ = (id⊗Δ̂)Δ̂", d.dual_coassociativity, tol::CHECK)?;
        ensure("(id⊗Δ)V = V₁₂V₁₃", d.bicharacter.comultiplication, tol::CHECK)?;
        ensure("(Δ̂⊗id)V = V₂₃V₁₃", d.bicharacter.dual_comultiplication, tol::CHECK)?;
        ensure("Heisenberg pair relation", d.heisenberg, tol::CHECK)?;
        let a_a = self.a.tensor(&self.a);
        for b in self.a.basis() {
            ensure("Δ(A) ⊂ A⊗A", a_a.residual(&self.delta.apply(b)), tol::CHECK)?;
        }
        if let Some(sp) = &self.spectrum {
            self.validate_spectrum(sp)?;
        }
        for chi in &self.gradings {
            ensure("grading lies in A", self.a.residual(chi), tol::CHECK)?;
            ensure("grading is a symmetry", chi.matmul(chi).max_abs_diff(&self.unit()), tol::CHECK)?;
            ensure("grading is self-adjoint", chi.max_abs_diff(&chi.adjoint()), tol::CHECK)?;
            ensure("grading is group-like", self.delta.apply(chi).max_abs_diff(&chi.kron(chi)), tol::CHECK)?;
        }
        Ok(())
    }

    fn validate_spectrum(&self, sp: &Spectrum) -> Result<()> {
        let n = self.dim_h();
        if sp.projections.len() != self.a_hat.dim() || sp.table.order() != sp.projections.len() {
            return Err(Error::Precondition("spectrum size differs from dim Â".into()));
        }
        let mut total = CMatrix::zeros(n, n);
        for (i, p) in sp.projections.iter().enumerate() {
            ensure("minimal projection lies in Â", self.a_hat.residual(p), tol::CHECK)?;
            for (j, q) in sp.projections.iter().enumerate() {
                let expect = if i == j { p.clone() } else { CMatrix::zeros(n, n) };
                ensure("projections are orthogonal", p.matmul(q).max_abs_diff(&expect), tol::CHECK)?;
            }
            total = &total + p;
        }
        ensure("projections sum to I", total.max_abs_diff(&self.unit()), tol::CHECK)?;
        for (c, qc) in sp.projections.iter().enumerate() {
            let mut expect = CMatrix::zeros(n * n, n * n);
            for a in 0..sp.table.order() {
                for b in 0..sp.table.order() {
                    if sp.table.mul(a, b) == c {
                        expect = &expect + &sp.projections[a].kron(&sp.projections[b]);
                    }
                }
            }
            ensure("Δ̂ follows the spectrum group law", self.delta_hat.apply(qc).max_abs_diff(&expect), tol::CHECK)?;
        }
        Ok(())
    }

    /// Coordinates of a matrix in `Â⊗Â`, as a `dim Â × dim Â` array.
    pub fn a_hat_pair_coords(&self, m: &CMatrix) -> DMatrix<Complex64> {
        let b = self.a_hat.basis();
        DMatrix::from_fn(b.len(), b.len(), |i, j| b[i].kron(&b[j]).hs_inner(m))
    }
}
