//! Check builders that turn constructions into report records, and the default suite.

use std::sync::Arc;

use rayon::prelude::*;

use crate::braided::{
    check_trivial_action, coherence_suite, trivial_side, BraidedAlgebra, BraidedCore, COHERENCE_LABELS, MIXED_LABELS,
};
use crate::algebra::ClosureResidual;
use crate::error::Result;
use crate::galg::{tensor_pair, GAlgebra};
use crate::group::FiniteQuantumGroup;
use crate::linalg::CMatrix;
use crate::report::{Check, Limit, Report};
use crate::rmatrix::{check_rmatrix, enumerate_bicharacter_rmatrices, solve_delta_r, RMatrix};
use crate::specs::{builtin_group, load_object, BUILTIN_GROUPS};
use crate::theorems::{
    center_dim, extract_rmatrix, intersection_triviality_test, invariant_commutation_test, left_action_suite,
    trivial_action_equivalence, uniqueness_test,
};
use crate::tol::{CHECK, ORTHONORMAL, SOLVE};

fn tag(r: &RMatrix) -> String {
    format!("{}/{}", r.group().name(), r.label())
}

fn guarded(name: String, paper_ref: &str, f: impl FnOnce(Check) -> Result<Check>) -> Check {
    let base = Check::new(name.clone(), paper_ref);
    f(base).unwrap_or_else(|e| Check::new(name, paper_ref).failed(e))
}

pub fn group_checks(g: &FiniteQuantumGroup) -> Vec<Check> {
    let n = g.dim_h();
    vec![
        guarded(
            format!("bicharacter[{}]", g.name()),
            "(id⊗Δ)V = V₁₂V₁₃ and (Δ̂⊗id)V = V₂₃V₁₃",
            |c| {
                let b = g.check_bicharacter();
                Ok(c.tol("comultiplication", b.comultiplication, CHECK)
                    .tol("dual_comultiplication", b.dual_comultiplication, CHECK)
                    .tol("v_unitarity", g.v().unitarity_residual(), ORTHONORMAL))
            },
        ),
        guarded(
            format!("structure[{}]", g.name()),
            "Δ(a) = V(a⊗I)V*, coassociativity, A·Â spans B(H)",
            |c| {
                let d = g.diagnostics()?;
                Ok(c.tol("heisenberg", d.heisenberg, CHECK)
                    .tol("a_closure", d.a_closure, CHECK)
                    .tol("a_hat_closure", d.a_hat_closure, CHECK)
                    .tol("v_membership", d.v_membership, CHECK)
                    .tol("delta_homomorphism", d.delta_hom, CHECK)
                    .tol("delta_hat_homomorphism", d.delta_hat_hom, CHECK)
                    .tol("coassociativity", d.coassociativity, CHECK)
                    .tol("dual_coassociativity", d.dual_coassociativity, CHECK)
                    .count("regularity_dim", d.regularity_dim, n * n))
            },
        ),
    ]
}

/// Action axioms of a builtin object, its fixed-point subalgebra, and the
/// scalar conclusion for elements with `ρ(u) ∈ I⊗B(H)`.
pub fn object_check(x: &GAlgebra) -> Check {
    guarded(
        format!("object[{}]({})", x.group().name(), x.name()),
        "(ρ⊗id)ρ = (id⊗Δ)ρ, ρ(X)(I⊗A) spans X⊗A, ρ(u) = I⊗a forces u = λI",
        |c| {
            let act = x.report();
            let fixed = x.invariant_subspace()?;
            let fixed_closure = ClosureResidual::of(&fixed);
            let scalars = x.scalar_form_subspace()?;
            let mut conclusion: f64 = 0.0;
            for u in scalars.basis() {
                let s = x.scalar_coefficient_check(u)?;
                conclusion = conclusion.max(if s.lambda.is_some() { s.conclusion_residual } else { f64::INFINITY });
            }
            Ok(c.tol("homomorphism", act.homomorphism, CHECK)
                .tol("membership", act.membership, CHECK)
                .tol("coassociativity", act.coassociativity, CHECK)
                .tol("podles", act.podles, CHECK)
                .with("injectivity", act.injectivity, Limit::AtLeast(CHECK))
                .tol("fixed_point_closure", fixed_closure.max(), CHECK)
                .count("scalar_form_dim", scalars.dim(), 1)
                .tol("scalar_conclusion", conclusion, CHECK))
        },
    )
}

/// `object_check` for every builtin object the group supports.
pub fn object_checks(g: &Arc<FiniteQuantumGroup>) -> Vec<Check> {
    let mut out = Vec::new();
    for name in ["delta_action", "clifford1_graded", "D", "C", "trivial:2"] {
        if name == "clifford1_graded" && g.gradings().is_empty() {
            continue;
        }
        out.push(match load_object(g, name) {
            Ok(x) => object_check(&x),
            Err(e) => Check::new(format!("object[{}]({name})", g.name()), "builtin object").failed(e),
        });
    }
    out
}

pub fn rmatrix_check(r: &RMatrix) -> Check {
    guarded(
        format!("rmatrix[{}]", tag(r)),
        "(id⊗Δ̂)R = R₁₂R₁₃, (Δ̂⊗id)R = R₂₃R₁₃, R₁₂V₁₃V₂₃ = V₂₃V₁₃R₁₂",
        |c| {
            let rep = check_rmatrix(r.group(), r.r())?;
            let (hat_left, hat_right) = r.r_hat_residuals();
            Ok(c.tol("unitarity", rep.unitarity, ORTHONORMAL)
                .tol("membership", rep.membership, CHECK)
                .tol("left_comultiplication", rep.left_comultiplication, CHECK)
                .tol("right_comultiplication", rep.right_comultiplication, CHECK)
                .tol("braiding", rep.braiding, CHECK)
                .tol("r_hat_left", hat_left, CHECK)
                .tol("r_hat_right", hat_right, CHECK))
        },
    )
}

/// Corrupts one entry of `R`, chosen by `seed`, and requires the axioms to fail by at least `1e-3`.
pub fn negative_rmatrix_check(r: &RMatrix, seed: u64) -> Check {
    guarded(format!("rmatrix-corrupted[{}]", tag(r)), "corrupted R violates the R-matrix axioms", |c| {
        let mut bad = r.r().clone();
        let n = bad.rows();
        let i = (seed as usize) % n;
        bad[(i, i)] = -bad[(i, i)] + num_complex::Complex64::new(0.5, 0.0);
        let rep = check_rmatrix(r.group(), &bad)?;
        Ok(c.with("max_residual", rep.max(), Limit::AtLeast(1e-3)))
    })
}

pub fn delta_r_check(r: &RMatrix) -> Check {
    guarded(format!("delta_r[{}]", tag(r)), "(id⊗Δ_R)V = V₁₂R̂₁₃", |c| {
        let d = solve_delta_r(r)?;
        let rep = d.report();
        let g = r.group();
        let mut c = c
            .tol("solve", rep.solve, SOLVE)
            .tol("defining", rep.defining, CHECK)
            .tol("homomorphism", rep.homomorphism, CHECK)
            .tol("membership", rep.membership, CHECK)
            .count("slice_rank", rep.slice_rank, g.a().dim());
        if r.r().max_abs_diff(&CMatrix::identity(g.dim_h().pow(2))) == 0.0 {
            let unit = g.unit();
            let exact = g
                .a()
                .basis()
                .iter()
                .map(|a| d.apply(a).max_abs_diff(&a.kron(&unit)))
                .fold(0.0, f64::max);
            c = c.with("trivial_r_exactness", exact, Limit::AtMost(1e-12));
        }
        Ok(c)
    })
}

pub fn core_check(r: &RMatrix) -> (Check, Option<Arc<BraidedCore>>) {
    let name = format!("core[{}]", tag(r));
    let paper_ref = "V₁αV₂β = V₂βV₁αR₁₂ and span γ(A)δ(A) = span δ(A)γ(A)";
    match BraidedCore::build(r) {
        Ok(core) => {
            let rep = core.report();
            let act = core.object().report();
            let n = r.group().dim_h();
            let c = Check::new(name, paper_ref)
                .count("dim", rep.dim, n * n)
                .tol("span_gamma_delta", rep.span_gamma_delta, CHECK)
                .tol("span_delta_gamma", rep.span_delta_gamma, CHECK)
                .tol("braiding", rep.braiding, CHECK)
                .tol("rho_solve", rep.rho_solve, SOLVE)
                .tol("model_left_triangle", rep.model_left, CHECK)
                .tol("model_right_triangle", rep.model_right, CHECK)
                .tol("action_homomorphism", act.homomorphism, CHECK)
                .tol("action_coassociativity", act.coassociativity, CHECK)
                .tol("action_podles", act.podles, CHECK)
                .with("action_injectivity", act.injectivity, Limit::AtLeast(CHECK));
            (c, Some(Arc::new(core)))
        }
        Err(e) => (Check::new(name, paper_ref).failed(e), None),
    }
}

pub fn extraction_check(core: &BraidedCore) -> Check {
    guarded(format!("extract[{}]", tag(core.rmatrix())), "R̃ = V₁α*V₂β*V₁αV₂β = R₁₂ ⊗ I", |c| {
        let e = extract_rmatrix(core)?;
        Ok(c.tol("last_leg", e.last_leg_residual, CHECK)
            .tol("round_trip", e.round_trip, CHECK)
            .tol("recovered_axioms", e.axiom_report.max(), CHECK))
    })
}

pub fn uniqueness_check(r: &RMatrix) -> Check {
    guarded(format!("uniqueness[{}]", tag(r)), "Φ∘α₁ = α₂, Φ∘β₁ = β₂, Φ normalized", |c| {
        let w = uniqueness_test(r)?;
        Ok(c.tol("solve", w.solve, SOLVE)
            .tol("triangle_alpha", w.triangle_alpha, CHECK)
            .tol("triangle_beta", w.triangle_beta, CHECK)
            .tol("normalization", w.normalization, CHECK)
            .tol("homomorphism", w.morphism.homomorphism, CHECK)
            .tol("intertwining", w.morphism.intertwining, CHECK)
            .with("condition", w.condition, Limit::AtMost(1e2)))
    })
}

pub fn left_action_check(r: &RMatrix) -> Check {
    guarded(format!("left[{}]", tag(r)), "V₂βV₁α = R₁₂V₁αV₂β over the opposite group", |c| {
        let rep = left_action_suite(r)?;
        Ok(c.tol("left_braiding", rep.left_braiding, CHECK)
            .tol("last_leg", rep.extraction.last_leg_residual, CHECK)
            .tol("star_round_trip", rep.star_round_trip, CHECK)
            .tol("recovered_axioms", rep.extraction.axiom_report.max(), CHECK))
    })
}

pub fn equivalence_check(core: &Arc<BraidedCore>) -> Check {
    guarded(
        format!("trivial-action[{}]", tag(core.rmatrix())),
        "X⊠Y = X⊗Y for trivial actions; invariant elements commute",
        |mut c| {
            for e in trivial_action_equivalence(core)?.entries {
                c = c.tol(format!("{} {}", e.property, e.product), e.residual, CHECK);
                if !e.pass {
                    c = c.failed(format!("{} fails for {}", e.property, e.product));
                }
            }
            Ok(c)
        },
    )
}

pub fn product_checks(x: &Arc<GAlgebra>, y: &Arc<GAlgebra>, core: &Arc<BraidedCore>) -> Vec<Check> {
    let name = |what: &str| format!("{what}[{}]({}, {})", tag(core.rmatrix()), x.name(), y.name());
    let p = match BraidedAlgebra::build(x.clone(), y.clone(), core.clone()) {
        Ok(p) => p,
        Err(e) => return vec![Check::new(name("braided"), "X⊠Y").failed(e)],
    };
    let cert = p.certificate();
    let mut out = vec![Check::new(name("braided"), "span α(X)β(Y) = span β(Y)α(X) = X⊠Y")
        .count("dim", cert.dim, cert.expected_dim)
        .tol("span_alpha_beta", cert.span_alpha_beta, CHECK)
        .tol("span_beta_alpha", cert.span_beta_alpha, CHECK)
        .tol("rho_solve", cert.rho_solve, SOLVE)
        .tol("realization", cert.realization, CHECK)
        .tol("alpha_morphism", cert.alpha.max(), CHECK)
        .tol("beta_morphism", cert.beta.max(), CHECK)
        .count("alpha_rank", cert.alpha_rank, x.dim())
        .count("beta_rank", cert.beta_rank, y.dim())];
    out.push(guarded(name("commutation"), "[α(x), β(y)] = 0 for invariant x or y", |c| {
        let rep = invariant_commutation_test(&p)?;
        Ok(c.tol("left_invariant", rep.left_invariant, CHECK)
            .tol("right_invariant", rep.right_invariant, CHECK))
    }));
    if trivial_side(&p).is_some() {
        out.push(guarded(name("tensor"), "X⊠Y = X⊗Y with α(x) = x⊗I, β(y) = I⊗y", |c| {
            let rep = check_trivial_action(&p)?;
            Ok(c.tol("solve", rep.iso.solve, SOLVE)
                .tol("embeddings", rep.embeddings, CHECK)
                .tol("homomorphism", rep.iso.morphism.homomorphism, CHECK)
                .tol("actions", rep.iso.morphism.intertwining, CHECK)
                .count("rank", rep.iso.rank, rep.iso.target_dim))
        }));
    }
    out
}

pub fn coherence_check(x: &Arc<GAlgebra>, y: &Arc<GAlgebra>, z: &Arc<GAlgebra>, core: &Arc<BraidedCore>) -> Check {
    guarded(
        format!("coherence[{}]({}, {}, {})", tag(core.rmatrix()), x.name(), y.name(), z.name()),
        "associativity of ⊠ and the mixed products (X⊗Y)⊠Z = X⊗(Y⊠Z)",
        |c| {
            let rep = coherence_suite(x, y, z, core)?;
            let mut c = c
                .tol("associator_solve", rep.associator.solve, SOLVE)
                .tol("associator_morphism", rep.associator.morphism.max(), CHECK)
                .count("associator_rank", rep.associator.rank, rep.associator.target_dim);
            for (label, v) in COHERENCE_LABELS.iter().zip(rep.equalities) {
                c = c.tol(*label, v, CHECK);
            }
            c = c
                .tol("mixed_solve", rep.mixed_iso.solve, SOLVE)
                .tol("mixed_morphism", rep.mixed_iso.morphism.max(), CHECK)
                .count("mixed_rank", rep.mixed_iso.rank, rep.mixed_iso.target_dim);
            for (label, v) in MIXED_LABELS.iter().zip(rep.mixed) {
                c = c.tol(*label, v, CHECK);
            }
            Ok(c)
        },
    )
}

pub fn intersection_check(objs: [&Arc<GAlgebra>; 4], core: &Arc<BraidedCore>) -> Check {
    let [x, y, z, t] = objs;
    guarded(
        format!(
            "intersection[{}]({}, {}, {}, {})",
            tag(core.rmatrix()),
            x.name(),
            y.name(),
            z.name(),
            t.name()
        ),
        "images of X⊠Z and Y⊠T meet in ℂI",
        |c| {
            let rep = intersection_triviality_test(x, y, z, t, core)?;
            Ok(c.count("intersection_dim", rep.intersection_dim, 1)
                .tol("unit", rep.unit_residual, CHECK)
                .tol("embeddings", rep.embeddings, CHECK))
        },
    )
}

/// `Cl(1)⊠Cl(1)` over `Z2` against `Cl(1)⊗Cl(1)`.
pub fn graded_checks() -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let g = Arc::new(builtin_group("Z2")?);
        let cl = Arc::new(load_object(&g, "clifford1_graded")?);
        let mut out = Vec::new();
        for r in enumerate_bicharacter_rmatrices(&g)? {
            let sign = !r.label().ends_with(":0");
            let core = Arc::new(BraidedCore::build(&r)?);
            let p = BraidedAlgebra::build(cl.clone(), cl.clone(), core)?;
            let odd = &cl.basis()[1];
            let (a, b) = (p.alpha().apply(odd), p.beta().apply(odd));
            let anti = (&a.matmul(&b) + &b.matmul(&a)).max_abs();
            let comm = a.commutator(&b).max_abs();
            let c = Check::new(
                format!("graded[{}](Cl(1), Cl(1))", tag(&r)),
                "odd parts anticommute in the braided square of Cl(1)",
            );
            out.push(if sign {
                c.count("center_dim", center_dim(p.object())?, 1)
                    .tol("anticommutator", anti, CHECK)
            } else {
                c.count("center_dim", center_dim(p.object())?, 4).tol("commutator", comm, CHECK)
            });
        }
        let t = tensor_pair(&cl, &cl)?;
        out.push(Check::new("graded[Z2](Cl(1)⊗Cl(1))", "Cl(1)⊗Cl(1) is commutative").count(
            "center_dim",
            center_dim(&t)?,
            4,
        ));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::new("graded", "graded benchmark").failed(e)])
}

/// Everything that depends on a single `(G, R)` pair.
pub fn pair_checks(r: &RMatrix) -> Vec<Check> {
    let mut out = vec![rmatrix_check(r), delta_r_check(r)];
    let (c, core) = core_check(r);
    out.push(c);
    if let Some(core) = core {
        out.push(extraction_check(&core));
        out.push(uniqueness_check(r));
        out.push(left_action_check(r));
        out.push(equivalence_check(&core));
    }
    out
}

pub const COHERENCE_TRIPLES: [[&str; 3]; 5] = [
    ["delta_action", "delta_action", "delta_action"],
    ["clifford1_graded", "D", "delta_action"],
    ["clifford1_graded", "clifford1_graded", "clifford1_graded"],
    ["D", "delta_action", "clifford1_graded"],
    ["trivial:2", "clifford1_graded", "delta_action"],
];

pub const INTERSECTION_QUADRUPLES: [[&str; 4]; 4] = [
    ["delta_action", "delta_action", "delta_action", "delta_action"],
    ["clifford1_graded", "D", "clifford1_graded", "D"],
    ["D", "D", "D", "D"],
    ["delta_action", "clifford1_graded", "D", "delta_action"],
];

fn objects<const K: usize>(g: &Arc<FiniteQuantumGroup>, names: [&str; K]) -> Result<[Arc<GAlgebra>; K]> {
    let v: Vec<Arc<GAlgebra>> = names
        .iter()
        .map(|n| load_object(g, n).map(Arc::new))
        .collect::<Result<_>>()?;
    Ok(v.try_into().expect("length K"))
}

/// Coherence and intersection checks over `Z2` for both R-matrices, plus one `Z3` triple.
pub fn monoidal_checks() -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let mut jobs: Vec<(Arc<BraidedCore>, Vec<&str>)> = Vec::new();
        let z2 = Arc::new(builtin_group("Z2")?);
        for r in enumerate_bicharacter_rmatrices(&z2)? {
            let core = Arc::new(BraidedCore::build(&r)?);
            for t in COHERENCE_TRIPLES {
                jobs.push((core.clone(), t.to_vec()));
            }
            for q in INTERSECTION_QUADRUPLES {
                jobs.push((core.clone(), q.to_vec()));
            }
        }
        let z3 = Arc::new(builtin_group("Z3")?);
        let r3 = enumerate_bicharacter_rmatrices(&z3)?.remove(1);
        jobs.push((Arc::new(BraidedCore::build(&r3)?), vec!["delta_action", "D", "delta_action"]));
        Ok(jobs
            .par_iter()
            .map(|(core, names)| {
                let g = core.group();
                match names.len() {
                    3 => match objects(g, [names[0], names[1], names[2]]) {
                        Ok([x, y, z]) => coherence_check(&x, &y, &z, core),
                        Err(e) => Check::new("coherence", "associativity of ⊠").failed(e),
                    },
                    _ => match objects(g, [names[0], names[1], names[2], names[3]]) {
                        Ok([x, y, z, t]) => intersection_check([&x, &y, &z, &t], core),
                        Err(e) => Check::new("intersection", "images of X⊠Z and Y⊠T meet in ℂI").failed(e),
                    },
                }
            })
            .collect())
    };
    run().unwrap_or_else(|e| vec![Check::new("monoidal", "monoidal structure").failed(e)])
}

/// All builtin `(G, R)` pairs, in registry order.
pub fn builtin_pairs() -> Result<Vec<RMatrix>> {
    let mut out = Vec::new();
    for name in BUILTIN_GROUPS {
        let g = Arc::new(builtin_group(name)?);
        out.extend(enumerate_bicharacter_rmatrices(&g)?);
    }
    Ok(out)
}

/// The default suite: every builtin group and pair, the graded benchmark,
/// coherence triples and intersection quadruples.
pub fn verify_all(tolerance: Option<f64>, seed: u64) -> Report {
    let mut report = Report::new("verify-all", tolerance);
    for name in BUILTIN_GROUPS {
        match builtin_group(name) {
            Ok(g) => {
                let g = Arc::new(g);
                report.extend(group_checks(&g));
                report.extend(object_checks(&g));
            }
            Err(e) => report.push(Check::new(format!("group[{name}]"), "builtin group").failed(e)),
        }
    }
    let pairs = match builtin_pairs() {
        Ok(p) => p,
        Err(e) => {
            report.push(Check::new("pairs", "builtin R-matrices").failed(e));
            return report;
        }
    };
    let per_pair: Vec<Vec<Check>> = pairs.par_iter().map(pair_checks).collect();
    report.extend(per_pair.into_iter().flatten());
    for name in BUILTIN_GROUPS {
        if let Some(r) = pairs.iter().find(|r| r.group().name() == name && r.label().ends_with(":0")) {
            report.push(negative_rmatrix_check(r, seed));
        }
    }
    report.extend(graded_checks());
    report.extend(monoidal_checks());
    report
}
