//! Builtin registry and JSON input formats for groups, R-matrices and objects.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::algebra::OperatorAlgebra;
use crate::error::{Error, Result};
use crate::galg::GAlgebra;
use crate::group::{CharacterTable, FiniteQuantumGroup, GroupTable, QuantumGroupParts, Spectrum};
use crate::linalg::{solve_linear_map, span_close, CMatrix, LegSpace};
use crate::rmatrix::{enumerate_bicharacter_rmatrices, Bicharacter, RMatrix};
use crate::tol;

pub const BUILTIN_GROUPS: [&str; 5] = ["trivial", "Z2", "Z3", "Z4", "Z2xZ2"];
pub const BUILTIN_OBJECTS: [&str; 5] = ["delta_action", "clifford1_graded", "D", "C", "trivial:<n>"];

/// Matrix as a list of rows of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Builtin {
        name: String,
    },
    FiniteAbelian {
        factors: Vec<usize>,
    },
    #[serde(alias = "function_algebra_of_group")]
    GroupTable {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    DualOfGroup {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    OppositeOf {
        of: Box<GroupSpec>,
    },
    Custom {
        #[serde(default)]
        name: Option<String>,
        #[serde(rename = "H_dim")]
        h_dim: usize,
        #[serde(rename = "A_basis")]
        a_basis: Vec<JsonMatrix>,
        #[serde(rename = "A_hat_basis")]
        a_hat_basis: Vec<JsonMatrix>,
        #[serde(rename = "V")]
        v: JsonMatrix,
        /// Images of `A_basis` under `Δ`, on `H⊗H`.
        delta: Vec<JsonMatrix>,
        /// Images of `A_hat_basis` under `Δ̂`, on `H⊗H`.
        delta_hat: Vec<JsonMatrix>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteQuantumGroup> {
        match self {
            GroupSpec::Builtin { name } => builtin_group(name),
            GroupSpec::FiniteAbelian { factors } => {
                if factors.iter().any(|&f| f < 2) {
                    return Err(Error::Input("invariant factors must all be at least 2".into()));
                }
                FiniteQuantumGroup::finite_abelian(factors)
            }
            GroupSpec::GroupTable { table, name } => {
                let t = GroupTable::new(table.clone())?;
                FiniteQuantumGroup::function_algebra(name.clone().unwrap_or_else(|| format!("C(G{})", t.order())), &t)
            }
            GroupSpec::DualOfGroup { table, name } => {
                let t = GroupTable::new(table.clone())?;
                FiniteQuantumGroup::dual_of_group(name.clone().unwrap_or_else(|| format!("dual(G{})", t.order())), &t)
            }
            GroupSpec::OppositeOf { of } => of.build()?.opposite(),
            GroupSpec::Custom {
                name,
                h_dim,
                a_basis,
                a_hat_basis,
                v,
                delta,
                delta_hat,
            } => build_custom(name.as_deref().unwrap_or("custom"), *h_dim, a_basis, a_hat_basis, v, delta, delta_hat),
        }
    }
}

pub fn matrix_from_json(m: &JsonMatrix, dim: usize, what: &str) -> Result<CMatrix> {
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(Error::Input(format!("{what} must be a {dim}x{dim} matrix of [re, im] pairs")));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| Complex64::new(m[i][j][0], m[i][j][1])))
}

fn matrices_from_json(ms: &[JsonMatrix], dim: usize, what: &str) -> Result<Vec<CMatrix>> {
    ms.iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, dim, &format!("{what}[{i}]")))
        .collect()
}

fn build_custom(
    name: &str,
    n: usize,
    a_basis: &[JsonMatrix],
    a_hat_basis: &[JsonMatrix],
    v: &JsonMatrix,
    delta: &[JsonMatrix],
    delta_hat: &[JsonMatrix],
) -> Result<FiniteQuantumGroup> {
    if n == 0 {
        return Err(Error::Input("H_dim must be positive".into()));
    }
    if a_basis.len() != delta.len() || a_hat_basis.len() != delta_hat.len() {
        return Err(Error::Input("delta and delta_hat must list one image per basis element".into()));
    }
    let h = LegSpace::single(n);
    let hh = LegSpace::new(vec![n, n])?;
    let a_in = matrices_from_json(a_basis, n, "A_basis")?;
    let a_hat_in = matrices_from_json(a_hat_basis, n, "A_hat_basis")?;
    let a = span_close(&a_in, &h)?;
    let a_hat = span_close(&a_hat_in, &h)?;
    let comultiplication = |inputs: &[CMatrix], images: &[JsonMatrix], what: &str| {
        let outs = matrices_from_json(images, n * n, what)?;
        let solved = solve_linear_map(inputs, &outs)?;
        if solved.residual > tol::SOLVE {
            return Err(Error::invariant(format!("{what} is linear on its basis"), solved.residual, tol::SOLVE));
        }
        solved.map.with_codomain(hh.clone())
    };
    let delta = comultiplication(&a_in, delta, "delta")?.restrict(&a);
    let delta_hat = comultiplication(&a_hat_in, delta_hat, "delta_hat")?.restrict(&a_hat);
    let spectrum = Spectrum::detect(&a_hat, &delta_hat);
    FiniteQuantumGroup::from_parts(QuantumGroupParts {
        name: name.to_string(),
        a,
        a_hat,
        delta,
        delta_hat,
        v: matrix_from_json(v, n * n, "V")?,
        pair: None,
        spectrum,
        gradings: Vec::new(),
    })
}

pub fn builtin_group(name: &str) -> Result<FiniteQuantumGroup> {
    let factors: &[usize] = match name {
        "trivial" => &[],
        "Z2" => &[2],
        "Z3" => &[3],
        "Z4" => &[4],
        "Z2xZ2" => &[2, 2],
        _ => {
            return Err(Error::UnknownBuiltin {
                kind: "group",
                name: name.into(),
            })
        }
    };
    FiniteQuantumGroup::finite_abelian(factors)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn looks_like_file(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

/// A builtin group name or a path to a JSON group spec.
pub fn load_group(arg: &str) -> Result<FiniteQuantumGroup> {
    if looks_like_file(arg) {
        read_json::<GroupSpec>(Path::new(arg))?.build()
    } else {
        builtin_group(arg)
    }
}

/// Builtin R-matrix names for a group: `trivial`, `bicharacter:<k>`, and `sign` over `Z2`.
pub fn rmatrix_names(g: &Arc<FiniteQuantumGroup>) -> Result<Vec<String>> {
    let mut names: Vec<String> = enumerate_bicharacter_rmatrices(g)?
        .iter()
        .map(|r| r.label().to_string())
        .collect();
    names.insert(0, "trivial".into());
    if g.name() == "Z2" {
        names.push("sign".into());
    }
    Ok(names)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RMatrixFile {
    #[serde(default)]
    group: Option<GroupSpec>,
    #[serde(default)]
    r: Option<String>,
    #[serde(default)]
    bicharacter: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    custom: Option<JsonMatrix>,
}

/// The group named by a JSON R-matrix file, if it names one.
pub fn rmatrix_file_group(arg: &str) -> Result<Option<FiniteQuantumGroup>> {
    if !looks_like_file(arg) {
        return Ok(None);
    }
    let f: RMatrixFile = read_json(Path::new(arg))?;
    f.group.map(|g| g.build()).transpose()
}

/// A builtin R-matrix name or a path to a JSON R-matrix spec, for the group `g`.
pub fn load_rmatrix(g: &Arc<FiniteQuantumGroup>, arg: &str) -> Result<RMatrix> {
    if looks_like_file(arg) {
        let f: RMatrixFile = read_json(Path::new(arg))?;
        return match (f.r.as_deref(), f.bicharacter, f.custom) {
            (Some(name), None, None) => builtin_rmatrix(g, name),
            (None, Some(exponents), None) => {
                let sp = g
                    .spectrum()
                    .ok_or_else(|| Error::NotAbelian(format!("{} has a noncommutative dual", g.name())))?;
                let modulus = CharacterTable::of(&sp.table)?.modulus;
                let b = Bicharacter { modulus, exponents };
                RMatrix::from_bicharacter(g.clone(), &b, "bicharacter:custom")
            }
            (None, None, Some(m)) => {
                let n = g.dim_h();
                RMatrix::new(g.clone(), matrix_from_json(&m, n * n, "custom R")?, "custom")
            }
            _ => Err(Error::Input(format!(
                "{arg}: exactly one of \"r\", \"bicharacter\", \"custom\" is required"
            ))),
        };
    }
    builtin_rmatrix(g, arg)
}

fn builtin_rmatrix(g: &Arc<FiniteQuantumGroup>, name: &str) -> Result<RMatrix> {
    let unknown = || Error::UnknownBuiltin {
        kind: "R-matrix",
        name: name.into(),
    };
    match name {
        "trivial" => RMatrix::trivial(g.clone()),
        "sign" if g.name() == "Z2" => {
            let r = enumerate_bicharacter_rmatrices(g)?.remove(1);
            RMatrix::new(g.clone(), r.r().clone(), "sign")
        }
        _ => {
            let k: usize = name
                .strip_prefix("bicharacter:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(unknown)?;
            let mut all = enumerate_bicharacter_rmatrices(g)?;
            if k >= all.len() {
                return Err(unknown());
            }
            Ok(all.swap_remove(k))
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraJson {
    carrier_dim: usize,
    basis: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GAlgebraFile {
    #[serde(default)]
    name: Option<String>,
    algebra: AlgebraJson,
    /// Coordinates of `ρ(b_i)` against `b_j ⊗ a_k` (`j` major), `a_k` the group's basis of `A`.
    #[serde(default)]
    action: Option<Vec<Vec<[f64; 2]>>>,
    /// `ρ(b_i)` as explicit matrices on `ℂ^K ⊗ H`.
    #[serde(default)]
    action_matrices: Option<Vec<JsonMatrix>>,
}

/// A builtin object name or a path to a JSON G-algebra spec.
pub fn load_object(g: &Arc<FiniteQuantumGroup>, arg: &str) -> Result<GAlgebra> {
    if looks_like_file(arg) {
        let f: GAlgebraFile = read_json(Path::new(arg))?;
        return object_from_file(g, f, arg);
    }
    match arg {
        "delta_action" | "A" => GAlgebra::delta_action(g.clone()),
        "clifford1_graded" | "Cl" => {
            if g.gradings().is_empty() {
                return Err(Error::Precondition(format!("{} has no Z2 grading", g.name())));
            }
            GAlgebra::clifford1_graded(g.clone())
        }
        "D" => GAlgebra::two_point(g.clone()),
        "C" => GAlgebra::scalars(g.clone()),
        _ => {
            let k: usize = arg
                .strip_prefix("trivial:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::UnknownBuiltin {
                    kind: "object",
                    name: arg.into(),
                })?;
            GAlgebra::trivial_matrix(k, g.clone())
        }
    }
}

fn object_from_file(g: &Arc<FiniteQuantumGroup>, f: GAlgebraFile, path: &str) -> Result<GAlgebra> {
    let k = f.algebra.carrier_dim;
    let n = g.dim_h();
    if k == 0 || f.algebra.basis.is_empty() {
        return Err(Error::Input(format!("{path}: algebra needs a positive carrier_dim and a basis")));
    }
    let basis = matrices_from_json(&f.algebra.basis, k, "algebra.basis")?;
    let images: Vec<CMatrix> = match (f.action, f.action_matrices) {
        (Some(coords), None) => {
            let a = g.a().basis();
            let width = basis.len() * a.len();
            coords
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != width {
                        return Err(Error::Input(format!("{path}: action[{i}] needs {width} coordinates")));
                    }
                    let mut m = CMatrix::zeros(k * n, k * n);
                    for (j, b) in basis.iter().enumerate() {
                        for (l, e) in a.iter().enumerate() {
                            let [re, im] = row[j * a.len() + l];
                            m.axpy(Complex64::new(re, im), &b.kron(e));
                        }
                    }
                    Ok(m)
                })
                .collect::<Result<_>>()?
        }
        (None, Some(ms)) => matrices_from_json(&ms, k * n, "action_matrices")?,
        _ => {
            return Err(Error::Input(format!(
                "{path}: exactly one of \"action\", \"action_matrices\" is required"
            )))
        }
    };
    if images.len() != basis.len() {
        return Err(Error::Input(format!("{path}: one action entry per basis element is required")));
    }
    let space = span_close(&basis, &LegSpace::single(k))?;
    let solved = solve_linear_map(&basis, &images)?;
    if solved.residual > tol::SOLVE {
        return Err(Error::invariant("action is linear on the given basis", solved.residual, tol::SOLVE));
    }
    let name = f.name.unwrap_or_else(|| path.to_string());
    GAlgebra::new(name, g.clone(), OperatorAlgebra::new(space)?, solved.map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteQuantumGroup> {
        Arc::new(builtin_group("Z2").unwrap())
    }

    #[test]
    fn builtin_names_resolve() {
        for name in BUILTIN_GROUPS {
            assert_eq!(builtin_group(name).unwrap().name(), name);
        }
        assert!(matches!(builtin_group("Z5"), Err(Error::UnknownBuiltin { .. })));
        let g = z2();
        assert_eq!(rmatrix_names(&g).unwrap().len(), 4);
        let sign = load_rmatrix(&g, "sign").unwrap();
        let b1 = load_rmatrix(&g, "bicharacter:1").unwrap();
        assert_eq!(sign.r(), b1.r());
        assert!(load_rmatrix(&g, "bicharacter:2").is_err());
        let g3 = Arc::new(builtin_group("Z3").unwrap());
        assert!(load_rmatrix(&g3, "sign").is_err());
        assert_eq!(load_object(&g, "trivial:3").unwrap().dim(), 9);
        assert!(load_object(&g, "trivial:0").is_err());
        assert!(load_object(&g3, "clifford1_graded").is_err());
    }

    #[test]
    fn group_specs_parse() {
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"finite_abelian","factors":[2,2]}"#).unwrap();
        assert_eq!(spec.build().unwrap().dim_h(), 4);
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"finite_abelian","factors":[1]}"#).unwrap();
        assert!(spec.build().is_err());
        let s3 = r#"{"kind":"group_table","table":[[0,1,2,3,4,5],[1,2,0,5,3,4],[2,0,1,4,5,3],[3,4,5,0,1,2],[4,5,3,2,0,1],[5,3,4,1,2,0]]}"#;
        let spec: GroupSpec = serde_json::from_str(s3).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g.dim_h(), 6);
        let opp = GroupSpec::OppositeOf { of: Box::new(spec) }.build().unwrap();
        assert!(opp.check_bicharacter().max() < 1e-12);
        let bad = serde_json::from_str::<GroupSpec>(r#"{"kind":"finite_abelian","factor":[2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn custom_group_round_trips_z2() {
        let g = z2();
        let to_json = |m: &CMatrix| -> JsonMatrix {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
        };
        let spec = GroupSpec::Custom {
            name: Some("Z2 by hand".into()),
            h_dim: 2,
            a_basis: g.a().basis().iter().map(to_json).collect(),
            a_hat_basis: g.a_hat().basis().iter().map(to_json).collect(),
            v: to_json(g.v()),
            delta: g.a().basis().iter().map(|a| to_json(&g.delta().apply(a))).collect(),
            delta_hat: g.a_hat().basis().iter().map(|a| to_json(&g.delta_hat().apply(a))).collect(),
        };
        let custom = Arc::new(spec.build().unwrap());
        assert_eq!(enumerate_bicharacter_rmatrices(&custom).unwrap().len(), 2);
    }
}
