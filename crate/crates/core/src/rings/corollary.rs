//! Per-twist description of BPR⟨n⟩ by Milnor words with shifted dimensions.
//!
//! In twist `l`, the word `v_R` of weight `W` shows up as `v_R σ^s a^t` with
//! `s = l - W + t`, so the σ-divisibility forces `t ≡ W - l (mod 2^{min R + 1})`
//! and the class sits in dimension `2W - l - t`.

use serde::Serialize;

use crate::grading::{Bidegree, Monomial};

use super::{basis_at, for_each_milnor_word, Mode, Summand, TheoryId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorollaryTag {
    Free,
    Two,
    /// `t = 2^{min R + 1} - 1`: the word is annihilated in this twist.
    Dead,
}

impl CorollaryTag {
    fn from_t(t: i64, modulus: i64) -> Self {
        if t == 0 {
            CorollaryTag::Free
        } else if t == modulus - 1 {
            CorollaryTag::Dead
        } else {
            CorollaryTag::Two
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CorollaryTag::Free => "free",
            CorollaryTag::Two => "two",
            CorollaryTag::Dead => "dead",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CorollaryClass {
    /// The Milnor word `v_R` (no σ or a).
    pub word: Monomial,
    pub k: i64,
    /// The a-exponent picked by the congruence.
    pub t: i64,
    pub tag: CorollaryTag,
}

impl CorollaryClass {
    /// The full monomial `v_R σ^s a^t` in twist `l`.
    pub fn monomial(&self, l: i64) -> Monomial {
        let s = l - self.word.v_weight() + self.t;
        self.word.clone().with_sexp(s).with_aexp(self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtraClass {
    pub k: i64,
    pub monomial: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryView {
    pub n: u32,
    pub l: i64,
    pub classes: Vec<CorollaryClass>,
    pub extras: Vec<ExtraClass>,
}

fn modulus_of(word: &Monomial) -> i64 {
    2i64 << word.min_index().unwrap_or(0)
}

/// Words `v_R` with support in `0..=n`, `r_0 <= 1`, whose twist-`l` class
/// could land in `kmin..=kmax`. The empty word is included.
fn candidate_words(n: u32, l: i64, kmin: i64, kmax: i64) -> Vec<Monomial> {
    let slack = (2i64 << n) - 1;
    let wmin = ((kmin + l).max(0) + 1) / 2;
    let wmax = (kmax + l + slack).div_euclid(2);
    let mut words = Vec::new();
    for w in wmin.max(0)..=wmax {
        if w == 0 {
            words.push(Monomial::unit());
            words.push(Monomial::v(0));
        } else if n >= 1 {
            for_each_milnor_word(w, 1, n, &mut |word| {
                let m = Monomial::new(word.iter().copied(), 0, 0);
                words.push(m.clone().with_v(0, 1));
                words.push(m);
            });
        }
    }
    words
}

/// The derived per-twist view of BPR⟨n⟩ in dimensions `kmin..=kmax`.
///
/// A word carrying `v_0` is listed only when that `v_0` is needed; otherwise
/// its class is twice the class of the shorter word.
pub fn corollary_view(n: u32, l: i64, kmin: i64, kmax: i64) -> CorollaryView {
    let mut classes = Vec::new();
    for word in candidate_words(n, l, kmin, kmax) {
        let w = word.v_weight();
        let (t, modulus) = if word.has_v() {
            let modulus = modulus_of(&word);
            ((w - l).rem_euclid(modulus), modulus)
        } else if l <= 0 {
            (-l, 0)
        } else {
            continue;
        };
        let k = 2 * w - l - t;
        if k < kmin || k > kmax {
            continue;
        }
        let tag = if word.has_v() {
            CorollaryTag::from_t(t, modulus)
        } else if t == 0 {
            CorollaryTag::Free
        } else {
            CorollaryTag::Two
        };
        let class = CorollaryClass { word, k, t, tag };
        if class.word.v_exponent(0) == 1 && tag != CorollaryTag::Dead {
            let rest = class.word.clone().with_v(0, -1);
            let s = class.monomial(l).sexp();
            let carried = match rest.min_index() {
                Some(i) => s % (2i64 << i) == 0,
                None => s == 0,
            };
            if carried {
                continue;
            }
        }
        classes.push(class);
    }
    classes.sort_by(|a, b| (a.k, &a.word).cmp(&(b.k, &b.word)));
    let extras = extras(n, l, kmin, kmax, Mode::Theorem);
    CorollaryView { n, l, classes, extras }
}

fn extras(n: u32, l: i64, kmin: i64, kmax: i64, mode: Mode) -> Vec<ExtraClass> {
    let mut out = Vec::new();
    for k in kmin..=kmax {
        for c in basis_at(TheoryId::bprn(n), Bidegree::new(k, l), mode) {
            if c.summand == Summand::Second {
                out.push(ExtraClass { k, monomial: c.monomial });
            }
        }
    }
    out
}

/// The recipe as literally stated for words: `k` is taken congruent to
/// `|v_R|` (when `|v_R| <= l`) or to `|v_R| - l` (otherwise) modulo
/// `2^{min R + 1}`, where `|v_R| = 2W` is the nonequivariant degree.
/// Returns `(t, dimension, tag)`, or `None` for a word without `v`'s.
pub fn literal_congruence_dimension(word: &Monomial, l: i64) -> Option<(i64, i64, CorollaryTag)> {
    if !word.has_v() {
        return None;
    }
    let degree = word.milnor_weight();
    let modulus = modulus_of(word);
    let t = if degree <= l { degree.rem_euclid(modulus) } else { (degree - l).rem_euclid(modulus) };
    Some((t, degree - l - t, CorollaryTag::from_t(t, modulus)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordMismatch {
    pub word: Monomial,
    pub derived: (i64, CorollaryTag),
    pub literal: (i64, CorollaryTag),
}

/// Where the derived view and the literal recipes part ways in one twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryDiff {
    pub n: u32,
    pub l: i64,
    pub word_mismatches: Vec<WordMismatch>,
    /// Second-summand dimensions with the extras at their own dimension.
    pub theorem_extras: Vec<i64>,
    /// The same count of extras, placed at `k 2^{n+1}` with `0 > k 2^{n+1} >= l`.
    pub corollary_extras: Vec<i64>,
}

impl CorollaryDiff {
    pub fn extras_differ_by_sign(&self) -> bool {
        let mut negated: Vec<i64> = self.theorem_extras.iter().map(|k| -k).collect();
        negated.sort();
        let mut lit = self.corollary_extras.clone();
        lit.sort();
        negated == lit
    }

    pub fn is_empty(&self) -> bool {
        self.word_mismatches.is_empty() && self.theorem_extras == self.corollary_extras
    }
}

pub fn corollary_diff(n: u32, l: i64, kmin: i64, kmax: i64) -> CorollaryDiff {
    let view = corollary_view(n, l, kmin, kmax);
    let mut word_mismatches = Vec::new();
    for class in &view.classes {
        let Some((_, k, tag)) = literal_congruence_dimension(&class.word, l) else { continue };
        if (k, tag) != (class.k, class.tag) {
            word_mismatches.push(WordMismatch {
                word: class.word.clone(),
                derived: (class.k, class.tag),
                literal: (k, tag),
            });
        }
    }
    // Extras are compared over the whole twist, which is where the count
    // statement lives; both placements are finite.
    let reach = (-l).max(0) + 1;
    let theorem_extras = extras(n, l, -reach, reach, Mode::Theorem).into_iter().map(|e| e.k).collect();
    let corollary_extras =
        extras(n, l, -reach, reach, Mode::Corollary).into_iter().map(|e| e.k).collect();
    CorollaryDiff { n, l, word_mismatches, theorem_extras, corollary_extras }
}
