//! Machine-readable verification reports.
//!
//! Reports are schema-versioned and byte-stable: floats are serialized with
//! 17 significant digits by a fixed formatter, keys and records keep
//! declaration order, and the RNG identity plus the build id make a report
//! self-contained evidence. Per-check runtimes are optional; they default to
//! `null` so that re-running a suite with the same configuration reproduces
//! the report byte for byte.

use serde::Serialize;

use crate::quadrature::RNG_ID;

/// Report schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Build identity baked in at compile time (`git describe --always`).
pub const BUILD_ID: &str = env!("TEICH_BUILD_ID");

/// One verification check: a computed scalar against an expected scalar at a
/// tolerance, anchored to the mathematical statement it certifies.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: Option<f64>,
}

impl CheckRecord {
    /// A check that passes when `|computed - expected| <= tolerance`.
    pub fn close(
        name: impl Into<String>,
        anchor: impl Into<String>,
        computed: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            computed,
            expected,
            tolerance,
            pass: (computed - expected).abs() <= tolerance,
            runtime_ms: None,
        }
    }

    /// A check that passes when `computed <= bound`; `expected` records the
    /// bound for the report.
    pub fn below(
        name: impl Into<String>,
        anchor: impl Into<String>,
        computed: f64,
        bound: f64,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            computed,
            expected: bound,
            tolerance: bound,
            pass: computed <= bound,
            runtime_ms: None,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<38} computed={:.10e} expected={:.10e} tol={:.2e}  [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.computed,
            self.expected,
            self.tolerance,
            self.anchor
        )
    }
}

/// A suite run: metadata plus its check records in declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub build: String,
    pub rng: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            build: BUILD_ID.to_string(),
            rng: RNG_ID.to_string(),
            seed,
            pass,
            checks,
        }
    }

    pub fn with_runtimes(mut self, runtimes_ms: &[f64]) -> Self {
        for (check, rt) in self.checks.iter_mut().zip(runtimes_ms) {
            check.runtime_ms = Some(*rt);
        }
        self
    }

    /// JSON with pinned float formatting (17 significant digits) and LF
    /// separators; byte-identical across runs for identical configurations.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigitsFormatter);
        self.serialize(&mut ser).expect("report serialization");
        out.push(b'\n');
        out
    }

    /// CSV with comma separator, `.` decimal point and LF line endings.
    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str("name,anchor,computed,expected,tolerance,pass,runtime_ms\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&c.name),
                csv_field(&c.anchor),
                fmt_f64(c.computed),
                fmt_f64(c.expected),
                fmt_f64(c.tolerance),
                c.pass,
                c.runtime_ms.map(fmt_f64).unwrap_or_default(),
            ));
        }
        out.into_bytes()
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checks.iter().map(|c| c.summary_line()).collect()
    }
}

/// 17 significant digits, lowercase scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// serde_json formatter that pins float output to 17 significant digits.
struct SignificantDigitsFormatter;

impl serde_json::ser::Formatter for SignificantDigitsFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        debug_assert!(value.is_finite(), "reports carry finite values only");
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.7e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report::new(
            "demo",
            7,
            vec![
                CheckRecord::close("a", "anchor one", 0.5, 0.5, 1e-12),
                CheckRecord::below("b", "anchor, with comma", 1e-14, 1e-12),
            ],
        )
    }

    #[test]
    fn overall_pass_is_conjunction() {
        let mut r = sample_report();
        assert!(r.pass);
        r.checks.push(CheckRecord::close("c", "x", 1.0, 2.0, 1e-3));
        let r2 = Report::new("demo", 7, r.checks.clone());
        assert!(!r2.pass);
    }

    #[test]
    fn json_is_byte_stable() {
        let a = sample_report().to_json_bytes();
        let b = sample_report().to_json_bytes();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("5.0000000000000000e-1"), "{text}");
        assert!(text.contains("\"schema_version\":1"));
        assert!(text.contains("\"runtime_ms\":null"));
    }

    #[test]
    fn csv_quotes_commas_and_uses_lf() {
        let text = String::from_utf8(sample_report().to_csv_bytes()).unwrap();
        assert!(text.contains("\"anchor, with comma\""));
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }
}
