//! Structured check records and their deterministic JSON / text serialization.

use std::fmt::Write as _;
use std::io;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA: &str = "braidcat-report/1";

/// The bound a residual is held to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    /// `value ≤ tolerance`; replaced by a user tolerance override when one is given.
    Tolerance(f64),
    /// `value ≤ bound`, never overridden.
    AtMost(f64),
    /// `value ≥ bound`, never overridden.
    AtLeast(f64),
    /// `value = target` (counts and dimensions).
    Equals(f64),
}

impl Limit {
    pub fn admits(&self, value: f64, tolerance: Option<f64>) -> bool {
        match *self {
            Limit::Tolerance(t) => value <= tolerance.unwrap_or(t),
            Limit::AtMost(b) => value <= b,
            Limit::AtLeast(b) => value >= b,
            Limit::Equals(t) => value == t,
        }
    }

    fn describe(&self, tolerance: Option<f64>) -> String {
        match *self {
            Limit::Tolerance(t) => format!("<= {:e}", tolerance.unwrap_or(t)),
            Limit::AtMost(b) => format!("<= {b:e}"),
            Limit::AtLeast(b) => format!(">= {b:e}"),
            Limit::Equals(t) => format!("== {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub limit: Limit,
}

/// One named verification with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Label of the identity being checked.
    pub paper_ref: String,
    pub residuals: Vec<Residual>,
    /// Set when the computation itself failed; the check then fails.
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, paper_ref: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            paper_ref: paper_ref.into(),
            residuals: Vec::new(),
            error: None,
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: f64, limit: Limit) -> Self {
        self.residuals.push(Residual {
            name: name.into(),
            value,
            limit,
        });
        self
    }

    pub fn tol(self, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        self.with(name, value, Limit::Tolerance(tolerance))
    }

    pub fn count(self, name: impl Into<String>, value: usize, expected: usize) -> Self {
        self.with(name, value as f64, Limit::Equals(expected as f64))
    }

    pub fn failed(mut self, error: impl ToString) -> Self {
        self.error = Some(error.to_string());
        self
    }

    pub fn pass(&self, tolerance: Option<f64>) -> bool {
        self.error.is_none() && self.residuals.iter().all(|r| r.limit.admits(r.value, tolerance))
    }
}

/// The output of one CLI command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub tolerance: Option<f64>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: impl Into<String>, tolerance: Option<f64>) -> Self {
        Report {
            command: command.into(),
            tolerance,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass(self.tolerance))
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass(self.tolerance)).count()
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FloatFormatter::default());
        self.serialize(&mut ser).expect("report serialization is infallible");
        out.push(b'\n');
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.pass(self.tolerance) { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{mark}  {}  [{}]", c.name, c.paper_ref);
            for r in &c.residuals {
                let _ = writeln!(s, "      {:<28} {:.3e}  ({})", r.name, r.value, r.limit.describe(self.tolerance));
            }
            if let Some(e) = &c.error {
                let _ = writeln!(s, "      error: {e}");
            }
        }
        let _ = writeln!(
            s,
            "{}: {} checks, {} failed",
            self.command,
            self.checks.len(),
            self.failures()
        );
        s
    }
}

struct CheckView<'a> {
    check: &'a Check,
    tolerance: Option<f64>,
}

struct ResidualValues<'a>(&'a [Residual]);
struct ResidualLimits<'a>(&'a [Residual], Option<f64>);

impl Serialize for ResidualValues<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for r in self.0 {
            m.serialize_entry(&r.name, &r.value)?;
        }
        m.end()
    }
}

impl Serialize for ResidualLimits<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for r in self.0 {
            m.serialize_entry(&r.name, &r.limit.describe(self.1))?;
        }
        m.end()
    }
}

impl Serialize for CheckView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.check;
        let mut st = s.serialize_struct("Check", 6)?;
        st.serialize_field("name", &c.name)?;
        st.serialize_field("paper_ref", &c.paper_ref)?;
        st.serialize_field("residuals", &ResidualValues(&c.residuals))?;
        st.serialize_field("limits", &ResidualLimits(&c.residuals, self.tolerance))?;
        st.serialize_field("error", &c.error)?;
        st.serialize_field("pass", &c.pass(self.tolerance))?;
        st.end()
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let checks: Vec<CheckView> = self
            .checks
            .iter()
            .map(|check| CheckView {
                check,
                tolerance: self.tolerance,
            })
            .collect();
        let mut st = s.serialize_struct("Report", 5)?;
        st.serialize_field("schema", SCHEMA)?;
        st.serialize_field("command", &self.command)?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("checks", &checks)?;
        st.serialize_field("pass", &self.pass())?;
        st.end()
    }
}

/// Pretty-printed JSON with every float written to 17 significant digits.
#[derive(Default)]
pub struct FloatFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for FloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("check-rmatrix", None);
        r.push(Check::new("unitarity", "R*R = I").tol("unitarity", 1.0 / 3.0, 1e-9));
        r.push(Check::new("dimension", "dim").count("dim", 4, 4).tol("nan", f64::NAN, 1.0));
        r
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let json = sample().to_json();
        assert!(json.contains("3.3333333333333331e-1"), "{json}");
        assert!(json.contains("\"nan\": null"));
        assert!(json.starts_with("{\n  \"schema\": \"braidcat-report/1\""));
    }

    #[test]
    fn tolerance_override_applies_only_to_tolerances() {
        let mut r = sample();
        assert!(!r.pass());
        r.tolerance = Some(0.5);
        assert!(!r.checks[1].pass(r.tolerance), "NaN never passes");
        assert!(r.checks[0].pass(r.tolerance));
        let c = Check::new("x", "y").with("floor", 1e-3, Limit::AtLeast(1e-3));
        assert!(c.pass(Some(1e-12)));
    }

    #[test]
    fn serialization_is_deterministic() {
        assert_eq!(sample().to_json(), sample().to_json());
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["checks"][0]["pass"], false);
    }
}
