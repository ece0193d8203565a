//! Reduction of formal words to `2^v · (basis monomial)` or zero.

use serde::{Deserialize, Serialize};

use crate::grading::Monomial;

use super::{NotInTheory, TheoryId, TheoryKind};

/// `2^coefficient_valuation · basis`, or zero when both fields are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Reduction {
    pub coefficient_valuation: Option<u32>,
    pub basis: Option<Monomial>,
}

impl Reduction {
    pub fn zero() -> Self {
        Reduction { coefficient_valuation: None, basis: None }
    }

    pub fn scaled(valuation: u32, basis: Monomial) -> Self {
        Reduction { coefficient_valuation: Some(valuation), basis: Some(basis) }
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteRule {
    /// `v_0 = 2`: move one `v_0` into the coefficient.
    StripV0,
    /// `v_i σ^{..} a^{2^{i+1}-1} = 0` for the smallest index present.
    Annihilate,
    /// `2x = 0` for an order-two class `x`.
    TorsionKill,
}

impl RewriteRule {
    pub const ALL: [RewriteRule; 3] =
        [RewriteRule::StripV0, RewriteRule::Annihilate, RewriteRule::TorsionKill];
}

/// An intermediate term `2^valuation · monomial`, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RewriteState {
    Term { valuation: u32, monomial: Monomial },
    Zero,
}

impl RewriteState {
    pub fn into_reduction(self) -> Reduction {
        match self {
            RewriteState::Term { valuation, monomial } => Reduction::scaled(valuation, monomial),
            RewriteState::Zero => Reduction::zero(),
        }
    }
}

fn reject(m: &Monomial, theory: TheoryId, reason: impl Into<String>) -> NotInTheory {
    NotInTheory { monomial: m.to_string(), theory, reason: reason.into() }
}

/// Whether a v-free `σ^s` with no `a` can stand alone: the unit always, and
/// the free `σ^{2^{n+1} m}` of Borel cohomology.
fn pure_sigma_is_free(theory: TheoryId, s: i64) -> bool {
    s == 0 || (theory.kind == TheoryKind::BorelCoh && s % theory.period().unwrap() == 0)
}

/// A word that needs no `v_0` to carry its σ-exponent.
fn carries_sigma(m: &Monomial, theory: TheoryId) -> bool {
    match m.min_index() {
        Some(i) => i >= 1 && m.sexp() % (2i64 << i) == 0,
        None => pure_sigma_is_free(theory, m.sexp()),
    }
}

fn is_order_two(m: &Monomial, theory: TheoryId) -> bool {
    match theory.kind {
        TheoryKind::Tate | TheoryKind::Geometric => true,
        TheoryKind::Bprn => m.aexp() != 0 || (!m.has_v() && m.sexp() != 0),
        _ => m.aexp() != 0,
    }
}

fn check_expressible(m: &Monomial, theory: TheoryId) -> Result<(), NotInTheory> {
    if m.vexp().iter().any(|&(_, e)| e < 0) {
        return Err(reject(m, theory, "negative v exponent"));
    }
    let s = m.sexp();
    match theory.kind {
        TheoryKind::Tate | TheoryKind::Geometric => {
            let p = theory.period().unwrap();
            if m.has_v() {
                return Err(reject(m, theory, "no v generators in this theory"));
            }
            if s % p != 0 {
                return Err(reject(m, theory, format!("σ exponent must be a multiple of {p}")));
            }
            if theory.kind == TheoryKind::Geometric && s > 0 {
                return Err(reject(m, theory, "only nonpositive σ exponents"));
            }
            return Ok(());
        }
        _ => {}
    }
    if let (Some(hi), Some(top)) = (theory.max_index(), m.max_index()) {
        if top > hi {
            return Err(reject(m, theory, format!("v{top} is above the height {hi}")));
        }
    }
    match m.min_index() {
        None => {
            let a_ok = m.aexp() >= 0 || (theory.kind == TheoryKind::BorelHom && s == 0);
            if !a_ok {
                return Err(reject(m, theory, "negative a exponent"));
            }
            let s_ok = match theory.kind {
                TheoryKind::Bprn => s <= 0 && s % theory.period().unwrap() == 0,
                TheoryKind::BorelCoh => s % theory.period().unwrap() == 0,
                _ => s == 0,
            };
            if !s_ok {
                return Err(reject(m, theory, "σ exponent not carried by any v"));
            }
        }
        Some(i) => {
            if m.aexp() < 0 {
                return Err(reject(m, theory, "negative a exponent"));
            }
            let modulus = 2i64 << i;
            if s % modulus != 0 {
                return Err(reject(m, theory, format!("σ exponent must be a multiple of {modulus}")));
            }
        }
    }
    Ok(())
}

/// Applies one rule, or returns `None` when it does not fire on `state`.
pub fn apply_rule(state: &RewriteState, rule: RewriteRule, theory: TheoryId) -> Option<RewriteState> {
    let RewriteState::Term { valuation, monomial } = state else {
        return None;
    };
    match rule {
        RewriteRule::StripV0 => {
            let r0 = monomial.v_exponent(0);
            if r0 == 0 {
                return None;
            }
            let rest = monomial.clone().with_v(0, -1);
            if r0 >= 2 || carries_sigma(&rest, theory) {
                Some(RewriteState::Term { valuation: valuation + 1, monomial: rest })
            } else {
                None
            }
        }
        RewriteRule::Annihilate => {
            let i = monomial.min_index()?;
            if monomial.aexp() >= (2i64 << i) - 1 {
                Some(RewriteState::Zero)
            } else {
                None
            }
        }
        RewriteRule::TorsionKill => {
            if *valuation >= 1 && is_order_two(monomial, theory) {
                Some(RewriteState::Zero)
            } else {
                None
            }
        }
    }
}

/// Reduces `m` in `theory`: strip every removable `v_0`, then annihilate,
/// then kill twice an order-two class.
pub fn normal_form(m: &Monomial, theory: TheoryId) -> Result<Reduction, NotInTheory> {
    check_expressible(m, theory)?;
    let mut state = RewriteState::Term { valuation: 0, monomial: m.clone() };
    while let Some(next) = apply_rule(&state, RewriteRule::StripV0, theory) {
        state = next;
    }
    for rule in [RewriteRule::Annihilate, RewriteRule::TorsionKill] {
        if let Some(next) = apply_rule(&state, rule, theory) {
            state = next;
        }
    }
    Ok(state.into_reduction())
}
