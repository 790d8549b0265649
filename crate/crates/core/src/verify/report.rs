//! Report types: per-check results, the fixed convention header, and the
//! serialized document.
//!
//! Reports are deterministic: for a fixed metric, seed, and tolerance set,
//! both the JSON and the plain-text rendering are byte-identical across
//! runs. Checks are listed sorted by name.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::geometry::MetricField;

/// Outcome of a single check.
///
/// `Skipped` means the check could not run on this input — no usable sample
/// points, or an unmet structural precondition (e.g. a complement check on a
/// metric that is not in canonical block form). A skipped check is not a
/// pass: [`VerificationReport::all_passed`] requires every verdict to be
/// `Pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Result of one named check: the claim, the worst scale-normalized residual
/// observed, and the verdict `residual ≤ tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    /// Largest residual seen; `None` when the check never ran.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    /// Number of sample points that actually contributed to the residual.
    pub points_checked: usize,
    /// The claim being checked, as a sentence.
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    /// Pass/fail result from a residual: passes iff `max_residual ≤ tolerance`.
    pub fn from_residual(
        name: impl Into<String>,
        provenance: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
        points_checked: usize,
    ) -> CheckResult {
        CheckResult {
            name: name.into(),
            verdict: if max_residual <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            max_residual: Some(max_residual),
            tolerance,
            points_checked,
            provenance: provenance.into(),
            note: None,
        }
    }

    /// A check that could not run.
    pub fn skipped(
        name: impl Into<String>,
        provenance: impl Into<String>,
        tolerance: f64,
        note: impl Into<String>,
    ) -> CheckResult {
        CheckResult {
            name: name.into(),
            verdict: Verdict::Skipped,
            max_residual: None,
            tolerance,
            points_checked: 0,
            provenance: provenance.into(),
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckResult {
        self.note = Some(note.into());
        self
    }
}

/// The sign and index conventions every residual is computed under. Embedded
/// in each report so that numbers are comparable across tools.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub curvature_sign: &'static str,
    pub index_order: &'static str,
    pub residual_normalization: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    curvature_sign: "R(u, v)w = \u{2207}_v \u{2207}_u w \u{2212} \u{2207}_u \u{2207}_v w + \u{2207}_{[u,v]} w",
    index_order: "R_ijkl = g(R(\u{2202}_i, \u{2202}_j)\u{2202}_k, \u{2202}_l); coordinates and indices print 1-based",
    residual_normalization: "residuals divide by max(1, \u{2016}g(x)\u{2016}\u{221e}, \u{2016}\u{0393}(x)\u{2016}\u{221e}) at each point",
};

impl Default for Conventions {
    fn default() -> Conventions {
        CONVENTIONS
    }
}

/// The full verification document for one metric.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// SHA-256 over the metric's canonical entry listing, lowercase hex.
    pub fingerprint: String,
    pub seed: u64,
    pub n: usize,
    /// Declared rank of the distinguished null plane when the metric claims
    /// canonical block form; `None` for plain metrics.
    pub walker_r: Option<usize>,
    pub points_requested: usize,
    pub points_used: usize,
    pub conventions: Conventions,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True iff every check has verdict `Pass` (skips count against this).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    /// Pretty-printed JSON document, terminated by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering, one `[PASS]`/`[FAIL]`/`[SKIP]` line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verification report");
        let _ = writeln!(out, "fingerprint: {}", self.fingerprint);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "n: {}", self.n);
        match self.walker_r {
            Some(r) => {
                let _ = writeln!(out, "walker r: {r}");
            }
            None => {
                let _ = writeln!(out, "walker r: -");
            }
        }
        let _ = writeln!(
            out,
            "points: {} used of {} requested",
            self.points_used, self.points_requested
        );
        let _ = writeln!(out, "conventions:");
        let _ = writeln!(out, "  curvature sign: {}", self.conventions.curvature_sign);
        let _ = writeln!(out, "  index order: {}", self.conventions.index_order);
        let _ = writeln!(
            out,
            "  normalization: {}",
            self.conventions.residual_normalization
        );
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "[PASS]",
                Verdict::Fail => "[FAIL]",
                Verdict::Skipped => "[SKIP]",
            };
            let residual = match c.max_residual {
                Some(v) => format!("{v:.3e}"),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{tag} {}  max residual {residual}  tolerance {:.3e}  points {}",
                c.name, c.tolerance, c.points_checked
            );
            let _ = writeln!(out, "       claim: {}", c.provenance);
            if let Some(note) = &c.note {
                let _ = writeln!(out, "       note: {note}");
            }
        }
        let passed = self
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::Pass)
            .count();
        let overall = if self.all_passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "overall: {overall} ({passed}/{} checks)", self.checks.len());
        out
    }
}

/// SHA-256 fingerprint (lowercase hex) of the metric's entry listing: the
/// dimension line followed by one `g[i][j]=<expression>` line per entry of
/// the upper triangle, 1-based. Structurally equal metrics — same expression
/// trees — get equal fingerprints.
pub fn metric_fingerprint(g: &MetricField) -> String {
    let n = g.n();
    let mut hasher = Sha256::new();
    hasher.update(format!("n={n}\n"));
    for i in 0..n {
        for j in i..n {
            hasher.update(format!("g[{}][{}]={}\n", i + 1, j + 1, g.entry(i, j)));
        }
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn check(name: &str, residual: f64) -> CheckResult {
        CheckResult::from_residual(name, "a claim", residual, 1e-9, 5)
    }

    #[test]
    fn verdict_follows_the_tolerance() {
        assert_eq!(check("a", 1e-10).verdict, Verdict::Pass);
        assert_eq!(check("a", 1e-9).verdict, Verdict::Pass);
        assert_eq!(check("a", 1.1e-9).verdict, Verdict::Fail);
    }

    #[test]
    fn report_text_and_json_are_stable() {
        let report = VerificationReport {
            fingerprint: "00ff".into(),
            seed: 7,
            n: 2,
            walker_r: Some(1),
            points_requested: 5,
            points_used: 5,
            conventions: CONVENTIONS,
            checks: vec![
                check("null", 0.0),
                CheckResult::skipped("parallel", "another claim", 1e-9, "why not"),
            ],
        };
        assert!(!report.all_passed());
        let text = report.to_text();
        assert!(text.contains("[PASS] null"));
        assert!(text.contains("[SKIP] parallel"));
        assert!(text.contains("note: why not"));
        assert!(text.contains("overall: FAIL (1/2 checks)"));
        let json = report.to_json();
        assert!(json.ends_with('\n'));
        assert!(json.contains("\"verdict\": \"skipped\""));
        // Passing results carry no note and the field is omitted entirely.
        assert_eq!(json.matches("\"note\"").count(), 1);
        assert_eq!(report.to_json(), json);
    }

    #[test]
    fn fingerprint_tracks_structure_not_formatting() {
        let g = |texts: [&str; 3]| {
            MetricField::from_rows(vec![
                vec![parse(texts[0], 2).unwrap(), parse(texts[1], 2).unwrap()],
                vec![parse(texts[1], 2).unwrap(), parse(texts[2], 2).unwrap()],
            ])
        };
        let a = g(["0", "1", "x2"]);
        let same = g(["0", "1", "x2"]);
        let other = g(["0", "1", "x1"]);
        assert_eq!(metric_fingerprint(&a), metric_fingerprint(&same));
        assert_ne!(metric_fingerprint(&a), metric_fingerprint(&other));
        let hex = metric_fingerprint(&a);
        assert_eq!(hex.len(), 64);
        assert!(hex.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
    }
}
