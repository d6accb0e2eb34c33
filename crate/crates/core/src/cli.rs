//! Pipelines behind the `braidcat` binary.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::braided::BraidedCore;
use crate::error::{Error, Result};
use crate::group::FiniteQuantumGroup;
use crate::report::{Check, Report};
use crate::rmatrix::RMatrix;
use crate::specs::{load_group, load_object, load_rmatrix, rmatrix_file_group, rmatrix_names, builtin_group, BUILTIN_GROUPS, BUILTIN_OBJECTS};
use crate::suite;

pub const SEED_VAR: &str = "BRAIDCAT_SEED";
pub const MAX_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ListBuiltins,
    CheckBicharacter,
    CheckRmatrix,
    BuildCore,
    BuildBraided,
    ExtractR,
    VerifyAll,
    LeftSuite,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::ListBuiltins,
        Command::CheckBicharacter,
        Command::CheckRmatrix,
        Command::BuildCore,
        Command::BuildBraided,
        Command::ExtractR,
        Command::VerifyAll,
        Command::LeftSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ListBuiltins => "list-builtins",
            Command::CheckBicharacter => "check-bicharacter",
            Command::CheckRmatrix => "check-rmatrix",
            Command::BuildCore => "build-core",
            Command::BuildBraided => "build-braided",
            Command::ExtractR => "extract-r",
            Command::VerifyAll => "verify-all",
            Command::LeftSuite => "left-suite",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Input(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub group: Option<String>,
    pub rmatrix: String,
    pub objects: Vec<String>,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            group: None,
            rmatrix: "trivial".into(),
            objects: Vec::new(),
            tolerance: None,
            format: Format::Json,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t < MAX_TOLERANCE) {
                return Err(Error::Input(format!("--tol {t:e} is outside (0, {MAX_TOLERANCE:e})")));
            }
        }
        Ok(())
    }
}

/// Reads `BRAIDCAT_SEED`, defaulting to 0.
pub fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{SEED_VAR}={s} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupListing {
    pub name: String,
    pub dim_h: usize,
    pub rmatrices: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Listing {
    pub groups: Vec<GroupListing>,
    pub rmatrix_families: Vec<String>,
    pub objects: Vec<String>,
}

pub fn list_builtins() -> Result<Listing> {
    let mut groups = Vec::new();
    for name in BUILTIN_GROUPS {
        let g = Arc::new(builtin_group(name)?);
        groups.push(GroupListing {
            name: name.into(),
            dim_h: g.dim_h(),
            rmatrices: rmatrix_names(&g)?,
        });
    }
    Ok(Listing {
        groups,
        rmatrix_families: vec!["trivial".into(), "bicharacter:<k>".into(), "sign".into()],
        objects: BUILTIN_OBJECTS.iter().map(|s| s.to_string()).collect(),
    })
}

impl Listing {
    pub fn to_text(&self) -> String {
        let mut s = String::from("groups:\n");
        for g in &self.groups {
            let _ = writeln!(s, "  {} (dim H = {})", g.name, g.dim_h);
            for r in &g.rmatrices {
                let _ = writeln!(s, "    {r}");
            }
        }
        let _ = writeln!(s, "rmatrix families: {}", self.rmatrix_families.join(", "));
        let _ = writeln!(s, "objects: {}", self.objects.join(", "));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("listing serializes") + "\n"
    }
}

/// What a pipeline produced.
#[derive(Debug)]
pub enum Outcome {
    Listing(Listing),
    Report(Report),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Listing(_) => 0,
            Outcome::Report(r) if r.pass() => 0,
            Outcome::Report(_) => 2,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Outcome::Listing(l), Format::Json) => l.to_json(),
            (Outcome::Listing(l), Format::Text) => l.to_text(),
            (Outcome::Report(r), Format::Json) => r.to_json(),
            (Outcome::Report(r), Format::Text) => r.to_text(),
        }
    }
}

fn resolve_group(cfg: &RunConfig) -> Result<Arc<FiniteQuantumGroup>> {
    if let Some(g) = &cfg.group {
        return Ok(Arc::new(load_group(g)?));
    }
    if let Some(g) = rmatrix_file_group(&cfg.rmatrix)? {
        return Ok(Arc::new(g));
    }
    Err(Error::Input("--group is required".into()))
}

fn resolve_pair(cfg: &RunConfig) -> Result<RMatrix> {
    let g = resolve_group(cfg)?;
    load_rmatrix(&g, &cfg.rmatrix)
}

fn core_or_fail(report: &mut Report, r: &RMatrix) -> Option<Arc<BraidedCore>> {
    let (check, core) = suite::core_check(r);
    report.push(check);
    core
}

/// Runs the pipeline named by `cfg.command`. Input errors come back as `Err`; failed checks land in the report.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut report = Report::new(cfg.command.name(), cfg.tolerance);
    match cfg.command {
        Command::ListBuiltins => return Ok(Outcome::Listing(list_builtins()?)),
        Command::VerifyAll => report = suite::verify_all(cfg.tolerance, cfg.seed),
        Command::CheckBicharacter => {
            let g = resolve_group(cfg)?;
            report.extend(suite::group_checks(&g));
        }
        Command::CheckRmatrix => {
            let r = resolve_pair(cfg)?;
            report.push(suite::rmatrix_check(&r));
            report.push(suite::delta_r_check(&r));
        }
        Command::BuildCore => {
            let r = resolve_pair(cfg)?;
            report.push(suite::delta_r_check(&r));
            if let Some(core) = core_or_fail(&mut report, &r) {
                report.push(suite::uniqueness_check(&r));
                report.push(suite::equivalence_check(&core));
            }
        }
        Command::BuildBraided => {
            let r = resolve_pair(cfg)?;
            if cfg.objects.len() < 2 {
                return Err(Error::Input("--objects needs at least two entries, e.g. X,Y".into()));
            }
            let objs = cfg
                .objects
                .iter()
                .map(|o| load_object(r.group(), o).map(Arc::new))
                .collect::<Result<Vec<_>>>()?;
            if let Some(core) = core_or_fail(&mut report, &r) {
                match objs.len() {
                    2 => report.extend(suite::product_checks(&objs[0], &objs[1], &core)),
                    3 => {
                        report.extend(suite::product_checks(&objs[0], &objs[1], &core));
                        report.push(suite::coherence_check(&objs[0], &objs[1], &objs[2], &core));
                    }
                    4 => {
                        report.extend(suite::product_checks(&objs[0], &objs[2], &core));
                        report.push(suite::intersection_check([&objs[0], &objs[1], &objs[2], &objs[3]], &core));
                    }
                    n => return Err(Error::Input(format!("--objects takes 2, 3 or 4 entries, got {n}"))),
                }
            }
        }
        Command::ExtractR => {
            let r = resolve_pair(cfg)?;
            if let Some(core) = core_or_fail(&mut report, &r) {
                report.push(suite::extraction_check(&core));
            }
        }
        Command::LeftSuite => {
            let r = resolve_pair(cfg)?;
            report.push(suite::left_action_check(&r));
        }
    }
    Ok(Outcome::Report(report))
}

/// Failure record for input errors, so `--out` still receives a parseable file.
pub fn error_report(cfg: &RunConfig, err: &Error) -> Report {
    let mut r = Report::new(cfg.command.name(), cfg.tolerance);
    r.push(Check::new("input", "input validation").failed(err));
    r
}
