//! Named verification suites, as run by the command line tool and the
//! acceptance tests.

use serde::Serialize;

use crate::diagram::{audit_row, completeness_gap, ExactnessStatus, Row};
use crate::grading::Bidegree;
use crate::rings::{corollary_diff, is_borel_collision, is_bprn_collision, twist_slice, Mode, TheoryId};
use crate::ss::{compare_to_closed_form, run_to_einfty, ComparisonReport, ComparisonStatus, Height, SsKind, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TateClosedForm,
    BorelClosedForm,
    Geometric,
    Les,
    Ko,
    CorollaryDiff,
    Gap,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::TateClosedForm,
        Suite::BorelClosedForm,
        Suite::Geometric,
        Suite::Les,
        Suite::Ko,
        Suite::CorollaryDiff,
        Suite::Gap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TateClosedForm => "tate-closed-form",
            Suite::BorelClosedForm => "borel-closed-form",
            Suite::Geometric => "geometric",
            Suite::Les => "les",
            Suite::Ko => "ko",
            Suite::CorollaryDiff => "corollary-diff",
            Suite::Gap => "gap",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: u32,
    pub k: i64,
    pub l: i64,
    pub passed: bool,
    /// Human-readable report body.
    pub lines: Vec<String>,
    /// Failing bidegrees or rows, in table order.
    pub failures: Vec<String>,
}

/// The 2-local homotopy of the connective real K-theory in degrees 0..=16.
pub const KO_PATTERN: [&str; 17] = [
    "Z(2)", "Z/2", "Z/2", "0", "Z(2)", "0", "0", "0", "Z(2)", "Z/2", "Z/2", "0", "Z(2)", "0", "0", "0", "Z(2)",
];

fn comparison(report: &ComparisonReport) -> (Vec<String>, Vec<String>) {
    let lines = vec![
        report.label.clone(),
        format!(
            "agree {}, extension-ambiguous {}, disagree {}",
            report.count(ComparisonStatus::Agree),
            report.count(ComparisonStatus::ExtensionAmbiguous),
            report.count(ComparisonStatus::Disagree)
        ),
    ];
    let failures = report.disagreements().iter().map(|e| format!("({}, {}): {}", e.k, e.l, e.detail)).collect();
    (lines, failures)
}

fn closed_form(kind: SsKind, theory: TheoryId, n: u32, k: i64, l: i64) -> Result<(ComparisonReport, Vec<String>, Vec<String>), String> {
    let height = Height::Finite(n);
    let pw = run_to_einfty(kind, height, Window::new(height, k, l)).map_err(|e| e.to_string())?;
    let report = compare_to_closed_form(&pw, theory);
    let (lines, failures) = comparison(&report);
    Ok((report, lines, failures))
}

/// Runs one suite on the window `|k| <= K`, `|l| <= L`.
pub fn run_suite(suite: Suite, n: u32, k: i64, l: i64) -> Result<SuiteReport, String> {
    let p = 1i64 << (n + 1);
    let (lines, failures) = match suite {
        Suite::TateClosedForm => {
            let (_, lines, failures) = closed_form(SsKind::Tate, TheoryId::tate(n), n, k, l)?;
            (lines, failures)
        }
        Suite::BorelClosedForm => {
            let (report, mut lines, mut failures) = closed_form(SsKind::Borel, TheoryId::borel_coh(n), n, k, l)?;
            let listed = report.literal_differences();
            lines.push(format!("literal two-summand reading differs at {} bidegrees:", listed.len()));
            lines.extend(listed.iter().map(|b| format!("  {b}")));
            let mut expected = Vec::new();
            for y in -l..=l {
                for x in -k..=k {
                    if is_borel_collision(n, Bidegree::new(x, y)) {
                        expected.push(Bidegree::new(x, y));
                    }
                }
            }
            if listed != expected {
                failures.push(format!("literal differences {listed:?} are not the collision set {expected:?}"));
            }
            (lines, failures)
        }
        Suite::Geometric => {
            let (_, lines, failures) = closed_form(SsKind::Geometric, TheoryId::geometric(n), n, k, l)?;
            (lines, failures)
        }
        Suite::Les => {
            let mut lines = Vec::new();
            let mut failures = Vec::new();
            for row in [Row::Top, Row::Bottom] {
                let report = audit_row(row, n, k, l).map_err(|e| e.to_string())?;
                let ext = report.with_status(ExactnessStatus::ExactUpToExtension);
                lines.push(format!(
                    "{row:?} row: exact {}, exact-up-to-extension {}, violation {}",
                    report.with_status(ExactnessStatus::Exact).len(),
                    ext.len(),
                    report.violations().len()
                ));
                for b in &ext {
                    lines.push(format!("  exact-up-to-extension at {b}"));
                }
                for e in report.violations() {
                    failures.push(format!("{row:?} ({}, {}): {}", e.k, e.l, e.witness.as_deref().unwrap_or("")));
                }
                let collision = |b: &Bidegree| match row {
                    Row::Top => is_bprn_collision(n, *b),
                    Row::Bottom => false,
                };
                let expected: Vec<Bidegree> =
                    report.entries.iter().map(|e| Bidegree::new(e.k, e.l)).filter(collision).collect();
                if ext != expected {
                    failures.push(format!("{row:?}: extension set {ext:?} is not the collision set {expected:?}"));
                }
            }
            (lines, failures)
        }
        Suite::Ko => {
            let slice = twist_slice(TheoryId::bprn(1), 0, 0, 16, Mode::Theorem);
            let mut lines = vec!["k  bprn(1) twist 0  ko".to_string()];
            let mut failures = Vec::new();
            for ((k, g), want) in slice.iter().zip(KO_PATTERN) {
                let got = g.type_string();
                lines.push(format!("{k:<2} {got:<16} {want}"));
                if got != want {
                    failures.push(format!("k={k}: {got} != {want}"));
                }
            }
            (lines, failures)
        }
        Suite::CorollaryDiff => {
            let mut lines = Vec::new();
            let mut failures = Vec::new();
            for twist in (-l..=-1).rev() {
                let d = corollary_diff(n, twist, -k, k);
                let want = (-twist / p) as usize;
                if d.theorem_extras.len() != want || d.corollary_extras.len() != want {
                    failures.push(format!(
                        "l={twist}: {} and {} extras, expected {want}",
                        d.theorem_extras.len(),
                        d.corollary_extras.len()
                    ));
                }
                if !d.extras_differ_by_sign() {
                    failures.push(format!("l={twist}: placements are not negatives of each other"));
                }
                lines.push(format!(
                    "l={twist}: {want} extras, theorem at {:?}, corollary at {:?}",
                    d.theorem_extras, d.corollary_extras
                ));
                for m in &d.word_mismatches {
                    lines.push(format!(
                        "  {} derived k={} {} / literal recipe k={} {}",
                        m.word,
                        m.derived.0,
                        m.derived.1.name(),
                        m.literal.0,
                        m.literal.1.name()
                    ));
                }
            }
            (lines, failures)
        }
        Suite::Gap => {
            let gap = completeness_gap(n, k, l);
            let mut lines = vec![format!("{} bidegrees where bprn({n}) and borelcoh({n}) differ", gap.len())];
            lines.extend(gap.iter().map(|e| format!("({}, {}): bprn {} | borelcoh {}", e.k, e.l, e.bprn, e.borel_coh)));
            let mut failures = Vec::new();
            if gap.is_empty() && k.max(l) >= p {
                failures.push("empty gap".to_string());
            }
            if k >= p && l >= p && !gap.iter().any(|e| (e.k, e.l) == (-p, p)) {
                failures.push(format!("missing the free class s^{p} at ({}, {p})", -p));
            }
            (lines, failures)
        }
    };
    Ok(SuiteReport { suite, n, k, l, passed: failures.is_empty(), lines, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_windows() {
        for suite in Suite::ALL {
            for n in 0..=2 {
                let r = run_suite(suite, n, 10, 10).unwrap();
                assert!(r.passed, "{} n={n}: {:?}", suite.name(), r.failures);
            }
        }
    }

    #[test]
    fn ko_prints_all_rows() {
        let r = run_suite(Suite::Ko, 1, 1, 1).unwrap();
        assert_eq!(r.lines.len(), 18);
    }

    #[test]
    fn gap_is_listed() {
        let r = run_suite(Suite::Gap, 0, 8, 8).unwrap();
        assert!(r.passed);
        assert!(r.lines.len() > 1);
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
