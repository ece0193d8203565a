//! Windowed computation of the Tate, Borel cohomology and geometric
//! spectral sequences.
//!
//! E_1 cells are monomials `v_R σ^j a^t` with `R` supported on `1..=n`;
//! `v_0` only ever appears as the coefficient `2`. A cell's filtration is its
//! `a`-exponent. At stage `s` (page `2^{s+1} - 1`) a cell whose σ-exponent has
//! 2-adic valuation exactly `s`, and whose smallest `v`-index is at least `s`,
//! maps to its product with `v_s σ^{2^s} a^{2^{s+1}-1}` (coefficient 2 for
//! `s = 0`).
//!
//! Tate cells have infinitely many words per bidegree, so windows also bound
//! the weight `W = Σ r_i (2^i - 1)`.

mod compare;
mod generic;
mod line;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{Bidegree, Monomial};
use crate::rings::ClassOrder;
use crate::snf::SnfError;

pub use compare::{
    compare_to_classes, compare_to_closed_form, ComparisonEntry, ComparisonReport, ComparisonStatus,
    GradedPiece,
};
pub use generic::{
    build_borel_e1, build_geometric_e1, build_tate_e1, d_squared_is_zero, degenerates_beyond, next_level,
    run_generic_to_einfty, turn_page,
};
pub use line::{run_to_einfty, run_with_padding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SsKind {
    Tate,
    Borel,
    Geometric,
}

impl SsKind {
    pub fn name(self) -> &'static str {
        match self {
            SsKind::Tate => "tate",
            SsKind::Borel => "borel",
            SsKind::Geometric => "geometric",
        }
    }
}

impl std::str::FromStr for SsKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tate" => Ok(SsKind::Tate),
            "borel" | "borelcoh" => Ok(SsKind::Borel),
            "geometric" => Ok(SsKind::Geometric),
            _ => Err(format!("unknown spectral sequence {s:?}")),
        }
    }
}

/// Coefficients `BP⟨n⟩` or all of `BP`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Height {
    Finite(u32),
    Infinite,
}

/// Inner window `|k| <= k`, `|l| <= l`, and weight `W <= weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub k: i64,
    pub l: i64,
    pub weight: i64,
}

impl Window {
    /// The default weight bound: large enough that every closed-form class of
    /// the inner window in the compared theories is kept.
    pub fn new(height: Height, k: i64, l: i64) -> Self {
        let weight = match height {
            Height::Finite(n) => (k + l) / 2 + (1i64 << n),
            Height::Infinite => (k + l) / 2,
        };
        Window { k, l, weight }
    }

    pub fn square(height: Height, radius: i64) -> Self {
        Window::new(height, radius, radius)
    }

    pub fn contains(&self, b: Bidegree, weight: i64) -> bool {
        b.k.abs() <= self.k && b.l.abs() <= self.l && weight <= self.weight
    }
}

/// Extra room in `k` and `W` around the inner window. Differentials preserve
/// the twist, so `l` is never padded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Padding {
    pub k: i64,
    pub weight: i64,
}

impl Padding {
    /// `2^{n+2}` for `BP⟨n⟩`. For `BP` the largest stage that can touch the
    /// inner window is the 2-adic valuation of some `|j| <= W + K`, and its
    /// partner sits `2^s - 1` higher in weight.
    pub fn default_for(height: Height, window: &Window) -> Self {
        match height {
            Height::Finite(n) => {
                let p = 1i64 << (n + 2);
                Padding { k: p, weight: p }
            }
            Height::Infinite => {
                let reach = (window.weight + window.k).max(1);
                let s = 63 - reach.leading_zeros();
                let p = (1i64 << s).max(4);
                Padding { k: p, weight: p }
            }
        }
    }
}

/// Largest `v`-index a window can contain.
pub fn generator_bound(height: Height, window: &Window, padding: &Padding) -> u32 {
    match height {
        Height::Finite(n) => n,
        Height::Infinite => {
            let top = window.weight + padding.weight;
            let mut i = 0;
            while (1i64 << (i + 1)) - 1 <= top {
                i += 1;
            }
            i
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellBasis {
    pub monomial: Monomial,
    pub order: ClassOrder,
    pub filtration: i64,
    /// The cell stands for `2^valuation · monomial`.
    pub valuation: u32,
}

impl CellBasis {
    pub fn fresh(monomial: Monomial, order: ClassOrder) -> Self {
        let filtration = monomial.aexp();
        CellBasis { monomial, order, filtration, valuation: 0 }
    }

    /// The class with its coefficient written as a `v_0`-power.
    pub fn label(&self) -> Monomial {
        self.monomial.clone().with_v(0, self.valuation as i64)
    }
}

/// One nonzero matrix entry of a differential, from cell `source` of the
/// keyed bidegree to cell `target` of the bidegree `(-1, 0)` away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub source: usize,
    pub target: usize,
    pub coefficient: i64,
}

/// The stage-`s` differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DifferentialRule {
    pub stage: u32,
}

impl DifferentialRule {
    pub fn new(stage: u32) -> Self {
        DifferentialRule { stage }
    }

    pub fn page(&self) -> u32 {
        (2u32 << self.stage) - 1
    }

    /// Bidegree shift of every instance.
    pub fn shift(&self) -> Bidegree {
        Bidegree::new(-1, 0)
    }

    pub fn filtration_shift(&self) -> i64 {
        (2i64 << self.stage) - 1
    }

    pub fn coefficient(&self) -> i64 {
        if self.stage == 0 {
            2
        } else {
            1
        }
    }

    pub fn is_source(&self, m: &Monomial) -> bool {
        let j = m.sexp();
        j != 0
            && j.trailing_zeros() == self.stage
            && m.min_index().map_or(true, |i| self.stage <= i)
    }

    /// The target monomial, ignoring the scalar.
    pub fn target(&self, m: &Monomial) -> Monomial {
        let s = self.stage;
        let base = m.clone().with_sexp(m.sexp() + (1i64 << s)).with_aexp(m.aexp() + self.filtration_shift());
        if s == 0 {
            base
        } else {
            base.with_v(s, 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageWindow {
    pub kind: SsKind,
    pub height: Height,
    pub window: Window,
    pub padding: Padding,
    /// The current page `E_r`.
    pub page: u32,
    /// Tate and Borel: the next stage to run. Geometric: the current level
    /// of the induction over `v_1, ..., v_n`.
    pub level: u32,
    /// Largest `v`-index present.
    pub generators: u32,
    /// Twists held by this page (the geometric induction reaches below the
    /// inner window).
    pub l_range: (i64, i64),
    pub cells: BTreeMap<Bidegree, Vec<CellBasis>>,
    /// Entries of the differential installed on the previous turn, keyed by
    /// source bidegree and indexing into the previous page's cells.
    pub differentials: BTreeMap<Bidegree, Vec<Entry>>,
}

impl PageWindow {
    pub fn k_range(&self) -> (i64, i64) {
        let k = self.window.k + self.padding.k;
        match self.kind {
            SsKind::Geometric => (0, k),
            _ => (-k, k),
        }
    }

    pub fn is_inner(&self, b: Bidegree, cell: &CellBasis) -> bool {
        let weight = match self.kind {
            SsKind::Geometric => 0,
            _ => cell.monomial.v_weight(),
        };
        self.window.contains(b, weight)
    }

    /// Cells of the inner window only.
    pub fn inner_cells(&self) -> BTreeMap<Bidegree, Vec<CellBasis>> {
        let mut out = BTreeMap::new();
        for (&b, cells) in &self.cells {
            let kept: Vec<CellBasis> = cells.iter().filter(|c| self.is_inner(b, c)).cloned().collect();
            if !kept.is_empty() {
                out.insert(b, kept);
            }
        }
        out
    }

    pub fn cell_count(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    /// Page-dump records `(page, k, l, filtration, order, monomial)` in
    /// ascending `(l, k)` order.
    pub fn dump(&self, inner_only: bool) -> Vec<PageRecord> {
        let cells = if inner_only { self.inner_cells() } else { self.cells.clone() };
        let mut out: Vec<PageRecord> = cells
            .into_iter()
            .flat_map(|(b, cs)| {
                let page = self.page;
                cs.into_iter().map(move |c| PageRecord {
                    page,
                    k: b.k,
                    l: b.l,
                    filtration: c.filtration,
                    order: c.order,
                    monomial: c.label().to_string(),
                })
            })
            .collect();
        out.sort_by(|a, b| (a.l, a.k, a.filtration, &a.monomial).cmp(&(b.l, b.k, b.filtration, &b.monomial)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub page: u32,
    pub k: i64,
    pub l: i64,
    pub filtration: i64,
    pub order: ClassOrder,
    pub monomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsError {
    #[error("window too large: {bound} would need {cells} cells (budget {budget})")]
    Resource { bound: &'static str, cells: u64, budget: u64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Algebra(#[from] SnfError),
    #[error("differential entry is not integral: {0}")]
    NonIntegral(String),
    #[error("homology class is not a single cell: {0}")]
    NonMonomial(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Largest number of cells a materialized page may hold.
pub const CELL_BUDGET: u64 = 4_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_shifts() {
        for s in 0..6 {
            let rule = DifferentialRule::new(s);
            let m = Monomial::sigma(3i64 << s).with_aexp(2);
            assert!(rule.is_source(&m));
            let t = rule.target(&m);
            assert_eq!(t.dimension() - m.dimension(), rule.shift());
            assert_eq!(t.aexp() - m.aexp(), rule.page() as i64);
            assert!(!rule.is_source(&t));
        }
    }

    #[test]
    fn rule_examples() {
        let r0 = DifferentialRule::new(0);
        assert_eq!(r0.target(&"s^-1".parse().unwrap()).to_string(), "a");
        assert_eq!(r0.coefficient(), 2);
        let r1 = DifferentialRule::new(1);
        assert_eq!(r1.target(&"s^-2".parse().unwrap()).to_string(), "v1 a^3");
        assert_eq!(r1.target(&"v1 s^2 a".parse().unwrap()).to_string(), "v1^2 s^4 a^4");
        assert!(!r1.is_source(&"v1 s^4".parse().unwrap()));
        assert!(!DifferentialRule::new(2).is_source(&"v1 s^4".parse().unwrap()));
    }

    #[test]
    fn windows_and_padding() {
        let w = Window::square(Height::Finite(1), 40);
        assert_eq!(w.weight, 42);
        assert_eq!(Padding::default_for(Height::Finite(1), &w), Padding { k: 8, weight: 8 });
        let w = Window::square(Height::Infinite, 24);
        let p = Padding::default_for(Height::Infinite, &w);
        assert_eq!(p.weight, 32);
        assert_eq!(generator_bound(Height::Infinite, &w, &p), 5);
    }
}
