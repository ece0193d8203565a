//! Closed-form additive models of the six coefficient theories.
//!
//! Every theory is a 2-local abelian group in each bidegree with a monomial
//! basis; each basis class is either a copy of `Z_(2)` or of `Z/2`.
//! [`basis_at`] enumerates the classes in one bidegree, [`group_at`]
//! summarizes them, and [`normal_form`] reduces an arbitrary word by the
//! defining relations `v_0 = 2`, `v_n a^{2^{n+1}-1} = 0` and the σ-exponent
//! bookkeeping of products.

mod corollary;
mod enumerate;
mod rewrite;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{Bidegree, Monomial};

pub use corollary::{
    corollary_diff, corollary_view, literal_congruence_dimension, CorollaryClass,
    CorollaryDiff, CorollaryTag, CorollaryView, ExtraClass, WordMismatch,
};
pub use enumerate::{
    basis_at, borel_literal_basis_at, for_each_milnor_word, is_bprn_collision,
    is_borel_collision,
};
pub use rewrite::{apply_rule, normal_form, Reduction, RewriteRule, RewriteState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryKind {
    Bpr,
    Bprn,
    Tate,
    BorelCoh,
    BorelHom,
    Geometric,
}

impl TheoryKind {
    pub const ALL: [TheoryKind; 6] = [
        TheoryKind::Bpr,
        TheoryKind::Bprn,
        TheoryKind::Tate,
        TheoryKind::BorelCoh,
        TheoryKind::BorelHom,
        TheoryKind::Geometric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoryKind::Bpr => "bpr",
            TheoryKind::Bprn => "bprn",
            TheoryKind::Tate => "tate",
            TheoryKind::BorelCoh => "borelcoh",
            TheoryKind::BorelHom => "borelhom",
            TheoryKind::Geometric => "geometric",
        }
    }
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TheoryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown theory {s:?}"))
    }
}

/// Which coefficient theory a query targets. `n` is the height and is
/// absent exactly for `BPR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TheoryId {
    pub kind: TheoryKind,
    pub n: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("theory {0} requires a height n >= 0")]
    MissingHeight(TheoryKind),
    #[error("BPR takes no height parameter")]
    UnexpectedHeight,
}

impl TheoryId {
    pub fn new(kind: TheoryKind, n: Option<u32>) -> Result<Self, TheoryError> {
        match (kind, n) {
            (TheoryKind::Bpr, None) => Ok(TheoryId { kind, n: None }),
            (TheoryKind::Bpr, Some(_)) => Err(TheoryError::UnexpectedHeight),
            (_, None) => Err(TheoryError::MissingHeight(kind)),
            (_, Some(n)) => Ok(TheoryId { kind, n: Some(n) }),
        }
    }

    pub fn bpr() -> Self {
        TheoryId { kind: TheoryKind::Bpr, n: None }
    }

    pub fn bprn(n: u32) -> Self {
        TheoryId { kind: TheoryKind::Bprn, n: Some(n) }
    }

    pub fn tate(n: u32) -> Self {
        TheoryId { kind: TheoryKind::Tate, n: Some(n) }
    }

    pub fn borel_coh(n: u32) -> Self {
        TheoryId { kind: TheoryKind::BorelCoh, n: Some(n) }
    }

    pub fn borel_hom(n: u32) -> Self {
        TheoryId { kind: TheoryKind::BorelHom, n: Some(n) }
    }

    pub fn geometric(n: u32) -> Self {
        TheoryId { kind: TheoryKind::Geometric, n: Some(n) }
    }

    /// Largest `v`-index allowed in the first summand, `None` meaning
    /// unbounded. Tate and geometric coefficients carry no `v`'s at all and
    /// report `Some(0)`; callers treat them separately.
    pub fn max_index(self) -> Option<u32> {
        match self.kind {
            TheoryKind::Bpr => None,
            TheoryKind::Tate | TheoryKind::Geometric => Some(0),
            _ => self.n,
        }
    }

    /// `2^{n+1}`, the σ-period of the second summand. BPR has none.
    pub fn period(self) -> Option<i64> {
        self.n.map(|n| 1i64 << (n + 1))
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            None => write!(f, "{}", self.kind),
            Some(n) => write!(f, "{}({n})", self.kind),
        }
    }
}

/// Cyclic order of a basis class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassOrder {
    Free,
    Two,
}

impl ClassOrder {
    pub fn name(self) -> &'static str {
        match self {
            ClassOrder::Free => "free",
            ClassOrder::Two => "two",
        }
    }
}

/// Which family of a theory's presentation a class comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Summand {
    /// The `Z_(2)[v_k σ^{l 2^{k+1}}, a]/~` part (pure `a`-powers included).
    First,
    /// The `Z/2`-polynomial family (σ-powers for Tate, Borel and BPR⟨n⟩,
    /// negative `a`-powers for Borel homology).
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisClass {
    pub monomial: Monomial,
    pub order: ClassOrder,
    pub summand: Summand,
    /// Where the class lives. Equal to `monomial.dimension()` except for the
    /// desuspended negative cone of Borel homology and the literal
    /// Corollary-mode placement of BPR⟨n⟩ extras.
    pub at: Bidegree,
}

/// How the second summand of BPR⟨n⟩ is placed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `σ^{-2^{n+1} m} a^t`, `m >= 1`, `t >= 0`, at its own dimension.
    #[default]
    Theorem,
    /// One class per `m >= 1` with `2^{n+1} m <= -l`, in dimension
    /// `-2^{n+1} m` of twist `l`, labelled by the literal generator
    /// `σ^{2^{n+1} m} a^{-2^{n+1} m - l}`.
    Corollary,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorem" => Ok(Mode::Theorem),
            "corollary" => Ok(Mode::Corollary),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

/// An abelian group `Z_(2)^freeRank ⊕ (Z/2)^z2Count` with named generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupSummary {
    pub free_rank: usize,
    pub z2_count: usize,
    pub generators: Vec<(Monomial, ClassOrder)>,
}

impl GroupSummary {
    pub fn from_classes<'a>(classes: impl IntoIterator<Item = &'a BasisClass>) -> Self {
        let mut generators: Vec<(Monomial, ClassOrder)> =
            classes.into_iter().map(|c| (c.monomial.clone(), c.order)).collect();
        generators.sort();
        generators.dedup();
        let free_rank = generators.iter().filter(|g| g.1 == ClassOrder::Free).count();
        GroupSummary { free_rank, z2_count: generators.len() - free_rank, generators }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Isomorphism type only.
    pub fn same_type(&self, other: &GroupSummary) -> bool {
        self.free_rank == other.free_rank && self.z2_count == other.z2_count
    }

    /// `Z(2)`, `Z/2`, `Z(2)^2 + (Z/2)^3`, or `0`.
    pub fn type_string(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z(2)".to_string()),
            r => parts.push(format!("Z(2)^{r}")),
        }
        match self.z2_count {
            0 => {}
            1 => parts.push("Z/2".to_string()),
            c => parts.push(format!("(Z/2)^{c}")),
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|(m, _)| m.to_string()).collect()
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        write!(f, "{} {{{}}}", self.type_string(), self.generator_strings().join(", "))
    }
}

pub fn group_at(theory: TheoryId, b: Bidegree) -> GroupSummary {
    group_at_mode(theory, b, Mode::Theorem)
}

pub fn group_at_mode(theory: TheoryId, b: Bidegree, mode: Mode) -> GroupSummary {
    GroupSummary::from_classes(&basis_at(theory, b, mode))
}

/// The groups of one twist line, i.e. the homotopy of the twist-`l` fixed
/// points in dimensions `kmin..=kmax`. Empty when `kmin > kmax`.
pub fn twist_slice(
    theory: TheoryId,
    l: i64,
    kmin: i64,
    kmax: i64,
    mode: Mode,
) -> Vec<(i64, GroupSummary)> {
    (kmin..=kmax).map(|k| (k, group_at_mode(theory, Bidegree::new(k, l), mode))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{monomial} is not expressible in {theory}: {reason}")]
pub struct NotInTheory {
    pub monomial: String,
    pub theory: TheoryId,
    pub reason: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_ids_validate_height() {
        assert!(TheoryId::new(TheoryKind::Bprn, None).is_err());
        assert!(TheoryId::new(TheoryKind::Bpr, Some(1)).is_err());
        assert_eq!(TheoryId::new(TheoryKind::Tate, Some(2)).unwrap(), TheoryId::tate(2));
        assert_eq!(TheoryId::bprn(1).to_string(), "bprn(1)");
    }

    #[test]
    fn summary_rendering() {
        let g = group_at(TheoryId::bprn(1), Bidegree::new(1, 0));
        assert_eq!(g.to_string(), "Z/2 {v1 a}");
        let g = group_at(TheoryId::bprn(1), Bidegree::new(4, -4));
        assert_eq!(g.to_string(), "Z(2) + Z/2 {s^-4, v0 s^-4}");
        assert_eq!(group_at(TheoryId::bprn(1), Bidegree::new(3, 0)).to_string(), "0");
    }

    #[test]
    fn summary_counts_match_tags() {
        for k in -6..=6 {
            for l in -6..=6 {
                let g = group_at(TheoryId::bprn(1), Bidegree::new(k, l));
                let free = g.generators.iter().filter(|x| x.1 == ClassOrder::Free).count();
                assert_eq!(g.free_rank, free);
                assert_eq!(g.z2_count, g.generators.len() - free);
                assert!(g.generators.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
