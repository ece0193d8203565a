//! E∞ against the closed forms, as associated graded pieces.

use serde::Serialize;

use crate::grading::{Bidegree, Monomial};
use crate::rings::{basis_at, borel_literal_basis_at, BasisClass, ClassOrder, Mode, TheoryId, TheoryKind};

use super::{PageWindow, SsKind};

/// One cyclic piece of an associated graded group. A coefficient `2^v` on
/// an E∞ cell is written as `v_0^v` in the monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GradedPiece {
    pub filtration: i64,
    pub order: ClassOrder,
    pub monomial: Monomial,
}

impl GradedPiece {
    pub fn from_class(c: &BasisClass) -> Self {
        GradedPiece { filtration: c.monomial.aexp(), order: c.order, monomial: c.monomial.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonStatus {
    Agree,
    Disagree,
    /// The pieces agree but a torsion piece sits below another piece, so the
    /// page does not decide whether the group splits.
    ExtensionAmbiguous,
}

impl ComparisonStatus {
    pub fn name(self) -> &'static str {
        match self {
            ComparisonStatus::Agree => "agree",
            ComparisonStatus::Disagree => "disagree",
            ComparisonStatus::ExtensionAmbiguous => "extension-ambiguous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonEntry {
    pub k: i64,
    pub l: i64,
    pub status: ComparisonStatus,
    pub engine: Vec<GradedPiece>,
    pub closed: Vec<GradedPiece>,
    /// Borel only: the literal two-summand reading would not match E∞ here.
    pub literal_reading_differs: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub label: String,
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    pub fn disagreements(&self) -> Vec<&ComparisonEntry> {
        self.entries.iter().filter(|e| e.status == ComparisonStatus::Disagree).collect()
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements().is_empty()
    }

    pub fn literal_differences(&self) -> Vec<Bidegree> {
        self.entries.iter().filter(|e| e.literal_reading_differs).map(|e| Bidegree::new(e.k, e.l)).collect()
    }

    pub fn count(&self, status: ComparisonStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }
}

fn render(pieces: &[GradedPiece]) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    pieces
        .iter()
        .map(|p| format!("{}@{}:{}", p.monomial, p.filtration, p.order.name()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn ambiguous(pieces: &[GradedPiece]) -> bool {
    pieces.iter().any(|p| {
        p.order == ClassOrder::Two && pieces.iter().any(|q| q.filtration > p.filtration)
    })
}

/// Compares E∞ with arbitrary expected pieces per bidegree. `literal`, when
/// given, is a second reading whose mismatches are flagged but not counted.
pub fn compare_to_classes(
    pw: &PageWindow,
    label: &str,
    expected: &dyn Fn(Bidegree) -> Vec<GradedPiece>,
    literal: Option<&dyn Fn(Bidegree) -> Vec<GradedPiece>>,
) -> ComparisonReport {
    let inner = pw.inner_cells();
    let kmin = if pw.kind == SsKind::Geometric { 0 } else { -pw.window.k };
    let keep = |p: &GradedPiece| p.monomial.v_weight() <= pw.window.weight;
    let mut entries = Vec::new();
    for l in -pw.window.l..=pw.window.l {
        for k in kmin..=pw.window.k {
            let b = Bidegree::new(k, l);
            let mut engine: Vec<GradedPiece> = inner
                .get(&b)
                .map(|cs| {
                    cs.iter()
                        .map(|c| GradedPiece { filtration: c.filtration, order: c.order, monomial: c.label() })
                        .collect()
                })
                .unwrap_or_default();
            engine.sort();
            let mut closed: Vec<GradedPiece> = expected(b).into_iter().filter(keep).collect();
            closed.sort();
            let literal_reading_differs = literal.is_some_and(|f| {
                let mut lit: Vec<GradedPiece> = f(b).into_iter().filter(keep).collect();
                lit.sort();
                lit != engine
            });
            let (status, detail) = if engine != closed {
                (ComparisonStatus::Disagree, format!("engine {} vs closed form {}", render(&engine), render(&closed)))
            } else if ambiguous(&engine) {
                (ComparisonStatus::ExtensionAmbiguous, render(&engine))
            } else {
                (ComparisonStatus::Agree, render(&engine))
            };
            entries.push(ComparisonEntry { k, l, status, engine, closed, literal_reading_differs, detail });
        }
    }
    ComparisonReport { label: label.to_string(), entries }
}

/// Compares E∞ with the closed form of `theory` on the inner window.
pub fn compare_to_closed_form(pw: &PageWindow, theory: TheoryId) -> ComparisonReport {
    let expected = move |b: Bidegree| -> Vec<GradedPiece> {
        basis_at(theory, b, Mode::Theorem).iter().map(GradedPiece::from_class).collect()
    };
    let label = format!("{} E∞ vs {theory}", pw.kind.name());
    match (pw.kind, theory.kind, theory.n) {
        (SsKind::Borel, TheoryKind::BorelCoh, Some(n)) => {
            let literal = move |b: Bidegree| -> Vec<GradedPiece> {
                borel_literal_basis_at(n, b).iter().map(GradedPiece::from_class).collect()
            };
            compare_to_classes(pw, &label, &expected, Some(&literal))
        }
        _ => compare_to_classes(pw, &label, &expected, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::is_borel_collision;
    use crate::ss::{run_to_einfty, Height, Window};

    #[test]
    fn small_windows_agree() {
        for n in 0..=2u32 {
            let h = Height::Finite(n);
            let w = Window::square(h, 12);
            let tate = run_to_einfty(SsKind::Tate, h, w).unwrap();
            assert!(compare_to_closed_form(&tate, TheoryId::tate(n)).is_clean());
            let borel = run_to_einfty(SsKind::Borel, h, w).unwrap();
            let report = compare_to_closed_form(&borel, TheoryId::borel_coh(n));
            assert!(report.is_clean(), "{:?}", report.disagreements());
            for b in report.literal_differences() {
                assert!(is_borel_collision(n, b), "{b}");
            }
        }
    }

    #[test]
    fn borel_collision_cell() {
        let h = Height::Finite(0);
        let borel = run_to_einfty(SsKind::Borel, h, Window::square(h, 4)).unwrap();
        let cells = &borel.cells[&Bidegree::new(-2, 2)];
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].monomial.to_string(), "s^2");
        assert_eq!((cells[0].order, cells[0].filtration), (ClassOrder::Free, 0));
        let report = compare_to_closed_form(&borel, TheoryId::borel_coh(0));
        let e = report.entries.iter().find(|e| (e.k, e.l) == (-2, 2)).unwrap();
        assert_eq!(e.status, ComparisonStatus::Agree);
        assert!(e.literal_reading_differs);
    }

    #[test]
    fn detects_a_wrong_closed_form() {
        let h = Height::Finite(1);
        let tate = run_to_einfty(SsKind::Tate, h, Window::square(h, 8)).unwrap();
        assert!(!compare_to_closed_form(&tate, TheoryId::tate(0)).is_clean());
    }
}
