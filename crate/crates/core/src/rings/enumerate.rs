//! Basis enumeration per bidegree.
//!
//! A first-summand class `v_R σ^s a^t` with `W = Σ r_i (2^i - 1)` lives in
//! `(W - s, W + s - t)`. Fixing the minimal index `i` of `R` pins
//! `s ≡ 0 mod 2^{i+1}` and `0 <= t <= 2^{i+1} - 2`, which leaves at most one
//! `(s, t)` per `i`; the remaining freedom is a Milnor word of known weight.

use crate::grading::{generator_weight, Bidegree, Monomial, MAX_GENERATOR_INDEX};

use super::{BasisClass, ClassOrder, Mode, Summand, TheoryId, TheoryKind};

/// Calls `f` with every Milnor word of weight exactly `weight` whose indices
/// lie in `lo..=hi` (`lo >= 1`). Words are passed as ascending
/// `(index, exponent)` lists.
pub fn for_each_milnor_word(weight: i64, lo: u32, hi: u32, f: &mut impl FnMut(&[(u32, i64)])) {
    assert!(lo >= 1, "v_0 has weight zero and cannot be enumerated by weight");
    if weight < 0 {
        return;
    }
    let mut top = lo.saturating_sub(1);
    while top < hi.min(MAX_GENERATOR_INDEX) && generator_weight(top + 1) <= weight {
        top += 1;
    }
    let mut buf = Vec::new();
    words_rec(weight, top, lo, &mut buf, f);
}

fn words_rec(
    rem: i64,
    i: u32,
    lo: u32,
    buf: &mut Vec<(u32, i64)>,
    f: &mut impl FnMut(&[(u32, i64)]),
) {
    if rem == 0 {
        let mut word = buf.clone();
        word.reverse();
        f(&word);
        return;
    }
    if i < lo {
        return;
    }
    let g = generator_weight(i);
    for e in (0..=rem / g).rev() {
        if e > 0 {
            buf.push((i, e));
        }
        words_rec(rem - e * g, i - 1, lo, buf, f);
        if e > 0 {
            buf.pop();
        }
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

fn class(monomial: Monomial, order: ClassOrder, summand: Summand, at: Bidegree) -> BasisClass {
    BasisClass { monomial, order, summand, at }
}

/// BPR-style first summand at `b` with generator indices `<= hi`
/// (unbounded when `None`). With `absorb = Some(p)`, the classes
/// `v_0 σ^{pm}` (`m != 0`) are left out because a free `σ^{pm}` absorbs them.
fn first_summand(b: Bidegree, hi: Option<u32>, absorb: Option<i64>, out: &mut Vec<BasisClass>) {
    let (k, l) = (b.k, b.l);
    let hi = hi.unwrap_or(MAX_GENERATOR_INDEX).min(MAX_GENERATOR_INDEX);

    if k == 0 && l <= 0 {
        let order = if l == 0 { ClassOrder::Free } else { ClassOrder::Two };
        out.push(class(Monomial::a(-l), order, Summand::First, b));
    }

    // Classes carrying a single v_0: t = 0 and s is even but too small a
    // power of two for the rest of the word to carry it alone.
    if (k + l) % 2 == 0 && k + l >= 0 {
        let w = (k + l) / 2;
        let s = w - k;
        if s % 2 == 0 {
            if w == 0 {
                let absorbed = absorb.is_some_and(|p| s % p == 0);
                if s != 0 && !absorbed {
                    let m = Monomial::v(0).with_sexp(s);
                    out.push(class(m, ClassOrder::Free, Summand::First, b));
                }
            } else if hi >= 1 {
                for_each_milnor_word(w, 1, hi, &mut |word| {
                    let min = word[0].0;
                    if s % (1i64 << (min + 1)) != 0 {
                        let m = Monomial::new(word.iter().copied(), s, 0).with_v(0, 1);
                        out.push(class(m, ClassOrder::Free, Summand::First, b));
                    }
                });
            }
        }
    }

    for i in 1..=hi {
        let gi = generator_weight(i);
        let period = 1i64 << (i + 1);
        if gi > k.max(0) && period > 2 * (k - l).abs() + 4 {
            break;
        }
        let j = div_ceil(l - k, 2 * period);
        let t = 2 * period * j + k - l;
        if t > period - 2 {
            continue;
        }
        let s = period * j;
        let w = s + k;
        if w < gi {
            continue;
        }
        let order = if t == 0 { ClassOrder::Free } else { ClassOrder::Two };
        for_each_milnor_word(w - gi, i, hi, &mut |word| {
            let m = Monomial::new(word.iter().copied(), s, t).with_v(i, 1);
            out.push(class(m, order, Summand::First, b));
        });
    }
}

/// All basis classes of `theory` living in bidegree `b`, sorted.
pub fn basis_at(theory: TheoryId, b: Bidegree, mode: Mode) -> Vec<BasisClass> {
    let mut out = Vec::new();
    let (k, l) = (b.k, b.l);
    match theory.kind {
        TheoryKind::Bpr => first_summand(b, None, None, &mut out),
        TheoryKind::Bprn => {
            let n = theory.n.expect("bprn has a height");
            let p = 1i64 << (n + 1);
            first_summand(b, Some(n), None, &mut out);
            match mode {
                Mode::Theorem => {
                    if k > 0 && k % p == 0 && -k - l >= 0 {
                        let m = Monomial::sigma(-k).with_aexp(-k - l);
                        out.push(class(m, ClassOrder::Two, Summand::Second, b));
                    }
                }
                Mode::Corollary => {
                    if k < 0 && k % p == 0 && k >= l {
                        let m = Monomial::sigma(-k).with_aexp(k - l);
                        out.push(class(m, ClassOrder::Two, Summand::Second, b));
                    }
                }
            }
        }
        TheoryKind::Tate => {
            let p = theory.period().expect("tate has a height");
            if k % p == 0 {
                let m = Monomial::sigma(-k).with_aexp(-k - l);
                out.push(class(m, ClassOrder::Two, Summand::Second, b));
            }
        }
        TheoryKind::BorelCoh => {
            let n = theory.n.expect("borelcoh has a height");
            let p = 1i64 << (n + 1);
            first_summand(b, Some(n), Some(p), &mut out);
            let t = -k - l;
            if k != 0 && k % p == 0 && t >= 0 {
                let order = if t == 0 { ClassOrder::Free } else { ClassOrder::Two };
                out.push(class(Monomial::sigma(-k).with_aexp(t), order, Summand::Second, b));
            }
        }
        TheoryKind::BorelHom => {
            let n = theory.n.expect("borelhom has a height");
            first_summand(b, Some(n), None, &mut out);
            // The negative cone is desuspended once: `a^{-t}` sits in (-1, t).
            if k == -1 && l >= 1 {
                out.push(class(Monomial::a(-l), ClassOrder::Two, Summand::Second, b));
            }
        }
        TheoryKind::Geometric => {
            let p = theory.period().expect("geometric has a height");
            if k >= 0 && k % p == 0 {
                let m = Monomial::sigma(-k).with_aexp(-k - l);
                out.push(class(m, ClassOrder::Two, Summand::Second, b));
            }
        }
    }
    out.sort();
    out
}

/// Borel cohomology read as a literal direct sum: the first summand keeps
/// `v_0 σ^{2^{n+1} m}` and every `σ^{2^{n+1} m} a^t` (`m != 0`, `t >= 0`) is
/// an extra `Z/2`.
pub fn borel_literal_basis_at(n: u32, b: Bidegree) -> Vec<BasisClass> {
    let p = 1i64 << (n + 1);
    let mut out = Vec::new();
    first_summand(b, Some(n), None, &mut out);
    let t = -b.k - b.l;
    if b.k != 0 && b.k % p == 0 && t >= 0 {
        out.push(class(Monomial::sigma(-b.k).with_aexp(t), ClassOrder::Two, Summand::Second, b));
    }
    out.sort();
    out
}

/// Bidegrees `(2^{n+1} m, -2^{n+1} m)`, `m >= 1`, where BPR⟨n⟩ carries both
/// the free class `v_0 σ^{-2^{n+1} m}` and the extra `Z/2` on `σ^{-2^{n+1} m}`.
pub fn is_bprn_collision(n: u32, b: Bidegree) -> bool {
    let p = 1i64 << (n + 1);
    b.k > 0 && b.k % p == 0 && b.l == -b.k
}

/// Bidegrees `(-2^{n+1} m, 2^{n+1} m)`, `m != 0`, where Borel cohomology's
/// free `σ^{2^{n+1} m}` absorbs `v_0 σ^{2^{n+1} m}`.
pub fn is_borel_collision(n: u32, b: Bidegree) -> bool {
    let p = 1i64 << (n + 1);
    b.k != 0 && b.k % p == 0 && b.l == -b.k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{group_at, group_at_mode, twist_slice, GroupSummary};

    fn gens(theory: TheoryId, k: i64, l: i64) -> Vec<String> {
        group_at(theory, Bidegree::new(k, l)).generator_strings()
    }

    /// Independent oracle: scan a box of exponents, keep words of the right
    /// dimension that satisfy the presentation's constraints directly.
    fn brute_first_summand(b: Bidegree, hi: u32) -> Vec<(String, ClassOrder)> {
        let mut found = Vec::new();
        let bound = 12i64;
        let mut exps = vec![0i64; hi as usize + 1];
        fn rec(
            i: usize,
            exps: &mut Vec<i64>,
            bound: i64,
            b: Bidegree,
            found: &mut Vec<(String, ClassOrder)>,
        ) {
            if i == exps.len() {
                if exps.iter().all(|&e| e == 0) {
                    return;
                }
                if exps[0] > 1 {
                    return;
                }
                let word = Monomial::new(exps.iter().enumerate().map(|(i, &e)| (i as u32, e)), 0, 0);
                let min = word.min_index().unwrap();
                let min_rest = word.vexp().iter().find(|x| x.0 > 0).map(|x| x.0);
                for s in -80..=80i64 {
                    for t in 0..=(2i64 << min) - 2 {
                        let m = word.clone().with_sexp(s).with_aexp(t);
                        if m.dimension() != b || s % (2i64 << min) != 0 {
                            continue;
                        }
                        if exps[0] == 1 {
                            // v_0 must be needed to carry the σ-parity.
                            let carried = match min_rest {
                                None => s == 0,
                                Some(r) => s % (2i64 << r) == 0,
                            };
                            if carried {
                                continue;
                            }
                        }
                        let order = if t == 0 { ClassOrder::Free } else { ClassOrder::Two };
                        found.push((m.to_string(), order));
                    }
                }
                return;
            }
            let top = if i == 0 { 1 } else { bound };
            for e in 0..=top {
                exps[i] = e;
                rec(i + 1, exps, bound, b, found);
            }
            exps[i] = 0;
        }
        rec(0, &mut exps, bound, b, &mut found);
        if b.k == 0 && b.l <= 0 {
            let order = if b.l == 0 { ClassOrder::Free } else { ClassOrder::Two };
            found.push((Monomial::a(-b.l).to_string(), order));
        }
        found.sort();
        found
    }

    #[test]
    fn first_summand_matches_brute_force() {
        for hi in 1..=3u32 {
            for k in -10..=10 {
                for l in -10..=10 {
                    let b = Bidegree::new(k, l);
                    let mut got: Vec<(String, ClassOrder)> = basis_at(TheoryId::bprn(hi), b, Mode::Theorem)
                        .into_iter()
                        .filter(|c| c.summand == Summand::First)
                        .map(|c| (c.monomial.to_string(), c.order))
                        .collect();
                    got.sort();
                    assert_eq!(got, brute_first_summand(b, hi), "n={hi} at {b}");
                }
            }
        }
    }

    #[test]
    fn every_class_has_its_bidegree() {
        for theory in [TheoryId::bpr(), TheoryId::bprn(2), TheoryId::tate(1), TheoryId::borel_coh(1), TheoryId::geometric(2)] {
            for k in -20..=20 {
                for l in -20..=20 {
                    let b = Bidegree::new(k, l);
                    for c in basis_at(theory, b, Mode::Theorem) {
                        assert_eq!(c.at, b);
                        assert_eq!(c.monomial.dimension(), b, "{theory} {}", c.monomial);
                    }
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        let g = group_at(TheoryId::bprn(1), Bidegree::ZERO);
        assert_eq!((g.free_rank, g.z2_count), (1, 0));
        assert_eq!(g.generator_strings(), vec!["1"]);

        assert_eq!(gens(TheoryId::tate(0), -2, 2), vec!["s^2"]);
        assert_eq!(group_at(TheoryId::tate(0), Bidegree::new(-2, 2)).z2_count, 1);

        let g = group_at(TheoryId::bpr(), Bidegree::new(5, -3));
        assert_eq!((g.free_rank, g.z2_count), (1, 0));
        assert_eq!(g.generator_strings(), vec!["v1 s^-4"]);

        assert!(group_at(TheoryId::tate(1), Bidegree::new(1, 0)).is_trivial());

        assert_eq!(gens(TheoryId::geometric(1), 8, -3), vec!["s^-8 a^-5"]);

        let g = group_at(TheoryId::bprn(1), Bidegree::new(4, -4));
        assert_eq!((g.free_rank, g.z2_count), (1, 1));
        assert_eq!(g.generator_strings(), vec!["s^-4", "v0 s^-4"]);
    }

    #[test]
    fn ko_pattern() {
        let expected = [
            (1, 0), (0, 1), (0, 1), (0, 0), (1, 0), (0, 0), (0, 0), (0, 0),
            (1, 0), (0, 1), (0, 1), (0, 0), (1, 0), (0, 0), (0, 0), (0, 0), (1, 0),
        ];
        let slice = twist_slice(TheoryId::bprn(1), 0, 0, 16, Mode::Theorem);
        let got: Vec<(usize, usize)> = slice.iter().map(|(_, g)| (g.free_rank, g.z2_count)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn tate_divisibility_and_geometric_support() {
        for n in 0..=3u32 {
            let p = 1i64 << (n + 1);
            for k in -40..=40 {
                for l in -40..=40 {
                    let b = Bidegree::new(k, l);
                    assert_eq!(!group_at(TheoryId::tate(n), b).is_trivial(), k % p == 0);
                    assert_eq!(!group_at(TheoryId::geometric(n), b).is_trivial(), k >= 0 && k % p == 0);
                }
            }
        }
    }

    #[test]
    fn bprn_first_summand_is_bpr_restricted() {
        for n in 0..=3u32 {
            for k in -40..=40 {
                for l in -40..=40 {
                    let b = Bidegree::new(k, l);
                    let mut from_bpr: Vec<BasisClass> = basis_at(TheoryId::bpr(), b, Mode::Theorem)
                        .into_iter()
                        .filter(|c| c.monomial.max_index().map_or(true, |i| i <= n))
                        .collect();
                    from_bpr.sort();
                    let first: Vec<BasisClass> = basis_at(TheoryId::bprn(n), b, Mode::Theorem)
                        .into_iter()
                        .filter(|c| c.summand == Summand::First)
                        .collect();
                    assert_eq!(first, from_bpr, "n={n} at {b}");
                }
            }
        }
    }

    #[test]
    fn second_summand_count_per_twist() {
        for n in 0..=2u32 {
            let p = 1i64 << (n + 1);
            for l in -32..=-1i64 {
                for mode in [Mode::Theorem, Mode::Corollary] {
                    let count: usize = (-80..=80)
                        .map(|k| {
                            basis_at(TheoryId::bprn(n), Bidegree::new(k, l), mode)
                                .iter()
                                .filter(|c| c.summand == Summand::Second)
                                .count()
                        })
                        .sum();
                    assert_eq!(count as i64, (-l).div_euclid(p), "n={n} l={l} {mode:?}");
                }
            }
            for l in 0..=10 {
                for k in -40..=40 {
                    let b = Bidegree::new(k, l);
                    let g = group_at(TheoryId::bprn(n), b);
                    let restricted = GroupSummary::from_classes(
                        &basis_at(TheoryId::bpr(), b, Mode::Theorem)
                            .into_iter()
                            .filter(|c| c.monomial.max_index().map_or(true, |i| i <= n))
                            .collect::<Vec<_>>(),
                    );
                    assert_eq!(g, restricted);
                }
            }
        }
    }

    #[test]
    fn corollary_mode_places_extras_at_negative_dimension() {
        let theorem = group_at_mode(TheoryId::bprn(1), Bidegree::new(4, -4), Mode::Theorem);
        assert!(theorem.generator_strings().contains(&"s^-4".to_string()));
        let corollary = group_at_mode(TheoryId::bprn(1), Bidegree::new(-4, -4), Mode::Corollary);
        assert_eq!(corollary.generator_strings(), vec!["s^4"]);
    }

    #[test]
    fn borel_collision_rule() {
        let g = group_at(TheoryId::borel_coh(0), Bidegree::new(-2, 2));
        assert_eq!((g.free_rank, g.z2_count), (1, 0));
        assert_eq!(g.generator_strings(), vec!["s^2"]);
        let lit = GroupSummary::from_classes(&borel_literal_basis_at(0, Bidegree::new(-2, 2)));
        assert_eq!(lit.generator_strings(), vec!["s^2", "v0 s^2"]);
        assert!(is_borel_collision(1, Bidegree::new(4, -4)));
        assert!(is_borel_collision(1, Bidegree::new(-4, 4)));
        assert!(!is_borel_collision(1, Bidegree::new(-4, 3)));
        assert!(is_bprn_collision(1, Bidegree::new(4, -4)));
        assert!(!is_bprn_collision(1, Bidegree::new(-4, 4)));
    }

    #[test]
    fn borel_homology_negative_cone_is_desuspended() {
        let g = group_at(TheoryId::borel_hom(1), Bidegree::new(-1, 3));
        assert!(g.generator_strings().contains(&"a^-3".to_string()));
        let g = group_at(TheoryId::borel_hom(1), Bidegree::new(0, 3));
        assert!(!g.generator_strings().contains(&"a^-3".to_string()));
    }

    #[test]
    fn milnor_words_of_weight() {
        let mut seen = Vec::new();
        for_each_milnor_word(4, 1, 2, &mut |w| seen.push(Monomial::new(w.iter().copied(), 0, 0).to_string()));
        seen.sort();
        assert_eq!(seen, vec!["v1 v2", "v1^4"]);
        let mut count = 0;
        for_each_milnor_word(0, 1, 3, &mut |w| {
            assert!(w.is_empty());
            count += 1;
        });
        assert_eq!(count, 1);
    }
}
