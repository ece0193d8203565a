//! The two rows of the Tate diagram, group by group.
//!
//! Top row: Borel homology → BPR⟨n⟩ → geometric fixed points.
//! Bottom row: Borel homology → Borel cohomology → Tate.
//! Maps are described on basis monomials; exactness is audited at the
//! middle term of each row by Smith normal form.

use serde::Serialize;
use thiserror::Error;

use crate::grading::{Bidegree, Monomial};
use crate::rings::{basis_at, group_at, BasisClass, ClassOrder, GroupSummary, Mode, Summand, TheoryId};
use crate::snf::{homology, HomologyClass, Int, IntMatrix, Order, SnfError};

type Rule = fn(&MonomialMap, &BasisClass) -> Option<(Monomial, u32)>;

/// A map of coefficient groups given on basis classes: each class goes to
/// `2^v` times a target class, or to zero.
#[derive(Clone)]
pub struct MonomialMap {
    pub name: &'static str,
    pub source: TheoryId,
    pub target: TheoryId,
    /// `(0,0)` for the maps in a row, `(-1,0)` for the connecting map.
    pub shift: Bidegree,
    pub n: u32,
    rule: Rule,
}

impl std::fmt::Debug for MonomialMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("{map} sends {class} at {at} to {image}, which is not a basis class of {target} at {image_at}")]
    MissingTarget { map: &'static str, class: String, at: Bidegree, image: String, target: TheoryId, image_at: Bidegree },
    #[error(transparent)]
    Algebra(#[from] SnfError),
}

impl MonomialMap {
    /// The image monomial and coefficient valuation, before looking it up.
    pub fn image(&self, c: &BasisClass) -> Option<(Monomial, u32)> {
        (self.rule)(self, c)
    }

    /// The image as a target basis class.
    pub fn apply(&self, c: &BasisClass) -> Result<Option<(BasisClass, u32)>, MapError> {
        let tgt = basis_at(self.target, c.at + self.shift, Mode::Theorem);
        Ok(self.apply_in(c, &tgt)?.map(|(i, v)| (tgt[i].clone(), v)))
    }

    /// Like [`apply`](Self::apply) against an already computed target
    /// basis, returning an index into it.
    fn apply_in(&self, c: &BasisClass, tgt: &[BasisClass]) -> Result<Option<(usize, u32)>, MapError> {
        let Some((m, v)) = self.image(c) else { return Ok(None) };
        match tgt.iter().position(|t| t.monomial == m) {
            Some(i) => Ok(Some((i, v))),
            None => Err(MapError::MissingTarget {
                map: self.name,
                class: c.monomial.to_string(),
                at: c.at,
                image: m.to_string(),
                target: self.target,
                image_at: c.at + self.shift,
            }),
        }
    }

    /// Source basis, target basis and the `|target| x |source|` matrix at `b`.
    pub fn matrix_at(&self, b: Bidegree) -> Result<(Vec<BasisClass>, Vec<BasisClass>, IntMatrix), MapError> {
        let src = basis_at(self.source, b, Mode::Theorem);
        let tgt = basis_at(self.target, b + self.shift, Mode::Theorem);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for (j, c) in src.iter().enumerate() {
            if let Some((i, v)) = self.apply_in(c, &tgt)? {
                m.set(i, j, 1 << v);
            }
        }
        Ok((src, tgt, m))
    }
}

fn period(n: u32) -> i64 {
    1i64 << (n + 1)
}

fn only_v0(m: &Monomial) -> bool {
    m.vexp().len() == 1 && m.v_exponent(0) == 1
}

fn rule_borel_to_tate(_: &MonomialMap, c: &BasisClass) -> Option<(Monomial, u32)> {
    (!c.monomial.has_v()).then(|| (c.monomial.clone(), 0))
}

/// Shared by both maps out of Borel homology. The unit goes to twice the
/// unit and positive `a`-powers die, as the geometric (resp. Tate) term
/// already carries them. `v_0 σ^{pm}` is absorbed in Borel cohomology.
fn rule_from_borel_hom(map: &MonomialMap, c: &BasisClass) -> Option<(Monomial, u32)> {
    if c.summand == Summand::Second {
        return None;
    }
    let m = &c.monomial;
    if m.is_unit() {
        return Some((m.clone(), 1));
    }
    if !m.has_v() {
        return None;
    }
    let absorbing = map.target.kind == crate::rings::TheoryKind::BorelCoh;
    if absorbing && only_v0(m) && m.aexp() == 0 && m.sexp() % period(map.n) == 0 {
        return Some((m.v_free(), 1));
    }
    Some((m.clone(), 0))
}

fn rule_bprn_to_geometric(_: &MonomialMap, c: &BasisClass) -> Option<(Monomial, u32)> {
    (!c.monomial.has_v()).then(|| (c.monomial.clone(), 0))
}

fn rule_connecting(_: &MonomialMap, c: &BasisClass) -> Option<(Monomial, u32)> {
    let m = &c.monomial;
    (m.sexp() == 0 && m.aexp() <= -1).then(|| (m.clone(), 0))
}

/// Borel cohomology → Tate: the identity on σ- and `a`-monomials, zero on
/// anything with a `v`. Free classes land on order-two ones.
pub fn borel_to_tate(n: u32) -> MonomialMap {
    MonomialMap {
        name: "borel-to-tate",
        source: TheoryId::borel_coh(n),
        target: TheoryId::tate(n),
        shift: Bidegree::ZERO,
        n,
        rule: rule_borel_to_tate,
    }
}

pub fn borel_hom_to_bprn(n: u32) -> MonomialMap {
    MonomialMap {
        name: "borelhom-to-bprn",
        source: TheoryId::borel_hom(n),
        target: TheoryId::bprn(n),
        shift: Bidegree::ZERO,
        n,
        rule: rule_from_borel_hom,
    }
}

pub fn borel_hom_to_borel_coh(n: u32) -> MonomialMap {
    MonomialMap {
        name: "borelhom-to-borelcoh",
        source: TheoryId::borel_hom(n),
        target: TheoryId::borel_coh(n),
        shift: Bidegree::ZERO,
        n,
        rule: rule_from_borel_hom,
    }
}

pub fn bprn_to_geometric(n: u32) -> MonomialMap {
    MonomialMap {
        name: "bprn-to-geometric",
        source: TheoryId::bprn(n),
        target: TheoryId::geometric(n),
        shift: Bidegree::ZERO,
        n,
        rule: rule_bprn_to_geometric,
    }
}

/// Geometric fixed points → Borel homology, of degree `-1`: the identity on
/// negative `a`-powers, zero on the rest.
pub fn geometric_connecting(n: u32) -> MonomialMap {
    MonomialMap {
        name: "geometric-connecting",
        source: TheoryId::geometric(n),
        target: TheoryId::borel_hom(n),
        shift: Bidegree::new(-1, 0),
        n,
        rule: rule_connecting,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    Top,
    Bottom,
}

impl Row {
    pub fn maps(self, n: u32) -> (MonomialMap, MonomialMap) {
        match self {
            Row::Top => (borel_hom_to_bprn(n), bprn_to_geometric(n)),
            Row::Bottom => (borel_hom_to_borel_coh(n), borel_to_tate(n)),
        }
    }
}

impl std::str::FromStr for Row {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "top" => Ok(Row::Top),
            "bottom" => Ok(Row::Bottom),
            _ => Err(format!("unknown row {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactnessStatus {
    Exact,
    /// Exact on orders, at a bidegree where a free class and an extra `Z/2`
    /// share the middle group, so splitness is not visible.
    ExactUpToExtension,
    Violation,
}

impl ExactnessStatus {
    pub fn name(self) -> &'static str {
        match self {
            ExactnessStatus::Exact => "exact",
            ExactnessStatus::ExactUpToExtension => "exact-up-to-extension",
            ExactnessStatus::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessEntry {
    pub k: i64,
    pub l: i64,
    pub groups: [GroupSummary; 3],
    /// Matrices of the two maps, rows indexed by target generators.
    pub f: Vec<Vec<i64>>,
    pub g: Vec<Vec<i64>>,
    pub status: ExactnessStatus,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub row: Row,
    pub n: u32,
    pub entries: Vec<ExactnessEntry>,
}

impl ExactnessReport {
    pub fn violations(&self) -> Vec<&ExactnessEntry> {
        self.entries.iter().filter(|e| e.status == ExactnessStatus::Violation).collect()
    }

    pub fn with_status(&self, status: ExactnessStatus) -> Vec<Bidegree> {
        self.entries.iter().filter(|e| e.status == status).map(|e| Bidegree::new(e.k, e.l)).collect()
    }
}

fn orders(classes: &[BasisClass]) -> Vec<Order> {
    classes
        .iter()
        .map(|c| match c.order {
            ClassOrder::Free => Order::Free,
            ClassOrder::Two => Order::Cyclic(1),
        })
        .collect()
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j) as i64).collect()).collect()
}

fn render(vector: &[Int], basis: &[BasisClass]) -> String {
    let terms: Vec<String> = vector
        .iter()
        .zip(basis)
        .filter(|(x, _)| **x != 0)
        .map(|(x, c)| if *x == 1 { c.monomial.to_string() } else { format!("{x}*{}", c.monomial) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Audits one bidegree of a row.
pub fn audit_at(row: Row, n: u32, b: Bidegree) -> Result<ExactnessEntry, MapError> {
    let (fm, gm) = row.maps(n);
    audit_maps(&fm, &gm, b)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// One nonzero homology class at the middle term, if any. The complex is
/// split into the connected components of its matrices first; each is tiny.
fn split_homology(
    f: &IntMatrix,
    g: &IntMatrix,
    oa: &[Order],
    ob: &[Order],
    oc: &[Order],
) -> Result<Option<HomologyClass>, SnfError> {
    let (na, nb, nc) = (oa.len(), ob.len(), oc.len());
    let mut parent: Vec<usize> = (0..na + nb + nc).collect();
    let join = |parent: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        parent[rx] = ry;
    };
    for j in 0..na {
        for i in 0..nb {
            if f.get(i, j) != 0 {
                join(&mut parent, j, na + i);
            }
        }
    }
    for j in 0..nb {
        for i in 0..nc {
            if g.get(i, j) != 0 {
                join(&mut parent, na + j, na + nb + i);
            }
        }
    }
    let mut done = vec![false; na + nb + nc];
    for start in 0..nb {
        let root = find(&mut parent, na + start);
        if done[root] {
            continue;
        }
        done[root] = true;
        let members = |lo: usize, len: usize, parent: &mut Vec<usize>| -> Vec<usize> {
            (0..len).filter(|&i| find(parent, lo + i) == root).collect()
        };
        let (ia, ib, ic) = (members(0, na, &mut parent), members(na, nb, &mut parent), members(na + nb, nc, &mut parent));
        let sub = |m: &IntMatrix, rows: &[usize], cols: &[usize]| {
            let mut s = IntMatrix::zeros(rows.len(), cols.len());
            for (r, &i) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    s.set(r, c, m.get(i, j));
                }
            }
            s
        };
        let pick = |o: &[Order], idx: &[usize]| -> Vec<Order> { idx.iter().map(|&i| o[i]).collect() };
        let h = homology(&sub(f, &ib, &ia), &sub(g, &ic, &ib), &pick(oa, &ia), &pick(ob, &ib), &pick(oc, &ic))?;
        if let Some(cls) = h.into_iter().next() {
            let mut vector = vec![0; nb];
            for (x, &i) in cls.vector.iter().zip(&ib) {
                vector[i] = *x;
            }
            return Ok(Some(HomologyClass { vector, order: cls.order }));
        }
    }
    Ok(None)
}

fn audit_maps(fm: &MonomialMap, gm: &MonomialMap, b: Bidegree) -> Result<ExactnessEntry, MapError> {
    let (a, bb, f) = fm.matrix_at(b)?;
    let (_, c, g) = gm.matrix_at(b)?;
    let (oa, ob, oc) = (orders(&a), orders(&bb), orders(&c));

    let gf = g.mul(&f)?;
    let mut witness = None;
    'outer: for j in 0..gf.cols() {
        for (i, o) in oc.iter().enumerate() {
            let x = gf.get(i, j);
            let killed = match o {
                Order::Free => x == 0,
                _ => x % o.relation() == 0,
            };
            if !killed {
                witness = Some(format!("g f({}) = {x}*{} != 0", a[j].monomial, c[i].monomial));
                break 'outer;
            }
        }
    }
    if witness.is_none() {
        if let Some(cls) = split_homology(&f, &g, &oa, &ob, &oc)? {
            let order = match cls.order {
                Order::Free => "infinite".to_string(),
                Order::Cyclic(e) => format!("2^{e}"),
            };
            witness = Some(format!("ker g / im f has {} of order {order}", render(&cls.vector, &bb)));
        }
    }
    let mixed = bb.iter().any(|x| x.summand == Summand::First && x.order == ClassOrder::Free)
        && bb.iter().any(|x| x.summand == Summand::Second && x.order == ClassOrder::Two);
    let status = match (&witness, mixed) {
        (Some(_), _) => ExactnessStatus::Violation,
        (None, true) => ExactnessStatus::ExactUpToExtension,
        (None, false) => ExactnessStatus::Exact,
    };
    Ok(ExactnessEntry {
        k: b.k,
        l: b.l,
        groups: [GroupSummary::from_classes(&a), GroupSummary::from_classes(&bb), GroupSummary::from_classes(&c)],
        f: rows_of(&f),
        g: rows_of(&g),
        status,
        witness,
    })
}

/// Exactness at the middle term over `|k| <= kmax`, `|l| <= lmax`, in
/// ascending `l` then `k`.
pub fn audit_row(row: Row, n: u32, kmax: i64, lmax: i64) -> Result<ExactnessReport, MapError> {
    let mut entries = Vec::new();
    for l in -lmax..=lmax {
        for k in -kmax..=kmax {
            entries.push(audit_at(row, n, Bidegree::new(k, l))?);
        }
    }
    Ok(ExactnessReport { row, n, entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapEntry {
    pub k: i64,
    pub l: i64,
    pub bprn: GroupSummary,
    pub borel_coh: GroupSummary,
}

/// Bidegrees where BPR⟨n⟩ and its Borel cohomology have different groups
/// (type or generators), in ascending `l` then `k`.
pub fn completeness_gap(n: u32, kmax: i64, lmax: i64) -> Vec<GapEntry> {
    let mut out = Vec::new();
    for l in -lmax..=lmax {
        for k in -kmax..=kmax {
            let b = Bidegree::new(k, l);
            let bprn = group_at(TheoryId::bprn(n), b);
            let borel_coh = group_at(TheoryId::borel_coh(n), b);
            if bprn != borel_coh {
                out.push(GapEntry { k, l, bprn, borel_coh });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::is_bprn_collision;

    fn class(theory: TheoryId, m: &str) -> BasisClass {
        let m: Monomial = m.parse().unwrap();
        let at = m.dimension();
        basis_at(theory, at, Mode::Theorem).into_iter().find(|c| c.monomial == m).unwrap()
    }

    fn image(map: &MonomialMap, c: &BasisClass) -> Option<(String, u32)> {
        map.apply(c).unwrap().map(|(t, v)| (t.monomial.to_string(), v))
    }

    #[test]
    fn borel_to_tate_examples() {
        let f = borel_to_tate(1);
        let src = TheoryId::borel_coh(1);
        assert_eq!(image(&f, &class(src, "s^4 a^2")), Some(("s^4 a^2".into(), 0)));
        assert_eq!(image(&f, &class(src, "v1 s^4 a")), None);
        // v0 s^4 is twice the free s^4, and the Tate class has order two.
        let (_, _, m) = f.matrix_at(Bidegree::new(-4, 4)).unwrap();
        assert_eq!(m.get(0, 0) * 2 % 2, 0);
    }

    #[test]
    fn connecting_examples() {
        let d = geometric_connecting(1);
        let src = TheoryId::geometric(1);
        let c = class(src, "a^-3");
        let (t, v) = d.apply(&c).unwrap().unwrap();
        assert_eq!((t.monomial.to_string(), v, t.at), ("a^-3".into(), 0, Bidegree::new(-1, 3)));
        assert_eq!(image(&d, &class(src, "s^-4")), None);
        assert_eq!(image(&d, &class(src, "s^-8 a^-2")), None);
        assert_eq!(image(&d, &class(src, "a^2")), None);
    }

    #[test]
    fn maps_preserve_dimension() {
        for n in 0..=2u32 {
            let maps =
                [borel_to_tate(n), borel_hom_to_bprn(n), borel_hom_to_borel_coh(n), bprn_to_geometric(n), geometric_connecting(n)];
            for map in &maps {
                for l in -20..=20 {
                    for k in -20..=20 {
                        let b = Bidegree::new(k, l);
                        for c in basis_at(map.source, b, Mode::Theorem) {
                            if let Some((t, _)) = map.apply(&c).unwrap() {
                                assert_eq!(t.at, c.at + map.shift, "{map:?} {}", c.monomial);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn first_summand_composite_vanishes() {
        for n in 0..=2u32 {
            let (f, g) = Row::Bottom.maps(n);
            for l in -16..=16 {
                for k in -16..=16 {
                    let (_, _, mf) = f.matrix_at(Bidegree::new(k, l)).unwrap();
                    let (_, tgt, mg) = g.matrix_at(Bidegree::new(k, l)).unwrap();
                    let gf = mg.mul(&mf).unwrap();
                    for i in 0..gf.rows() {
                        for j in 0..gf.cols() {
                            assert_eq!(gf.get(i, j) % 2, 0, "{k} {l} {}", tgt[i].monomial);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn audit_examples() {
        let e = audit_at(Row::Top, 1, Bidegree::new(4, -4)).unwrap();
        assert_eq!(e.status, ExactnessStatus::ExactUpToExtension);
        let types: Vec<String> = e.groups.iter().map(GroupSummary::type_string).collect();
        assert_eq!(types, ["Z(2)", "Z(2) + Z/2", "Z/2"]);

        let e = audit_at(Row::Bottom, 0, Bidegree::new(-2, 2)).unwrap();
        assert_eq!(e.status, ExactnessStatus::Exact);
        let types: Vec<String> = e.groups.iter().map(GroupSummary::type_string).collect();
        assert_eq!(types, ["Z(2)", "Z(2)", "Z/2"]);
        assert_eq!(e.f, vec![vec![2]]);

        let r = audit_row(Row::Top, 2, 8, 8).unwrap();
        let empty: Vec<_> = r.entries.iter().filter(|e| e.groups.iter().all(GroupSummary::is_trivial)).collect();
        assert!(!empty.is_empty());
        assert!(empty.iter().all(|e| e.status == ExactnessStatus::Exact));
    }

    #[test]
    fn audits_are_clean_on_small_windows() {
        for n in 0..=2u32 {
            for row in [Row::Top, Row::Bottom] {
                let r = audit_row(row, n, 16, 16).unwrap();
                assert!(r.violations().is_empty(), "{:?}", r.violations().first());
                let ext = r.with_status(ExactnessStatus::ExactUpToExtension);
                match row {
                    Row::Top => assert!(ext.iter().all(|b| is_bprn_collision(n, *b))),
                    Row::Bottom => assert!(ext.is_empty()),
                }
            }
        }
    }

    #[test]
    fn a_broken_map_is_caught() {
        let (mut f, g) = Row::Top.maps(1);
        // The unit going to the unit makes g f nonzero mod 2.
        f.rule = |_, c| c.monomial.is_unit().then(|| (c.monomial.clone(), 0));
        let e = audit_maps(&f, &g, Bidegree::ZERO).unwrap();
        assert_eq!(e.status, ExactnessStatus::Violation);
        assert!(e.witness.unwrap().starts_with("g f(1)"));
        // Dropping a class from f leaves a kernel element unhit.
        let (mut f, g) = Row::Top.maps(1);
        f.rule = |_, _| None;
        let e = audit_maps(&f, &g, Bidegree::new(1, 1)).unwrap();
        assert_eq!(e.status, ExactnessStatus::Violation);
        assert!(e.witness.unwrap().contains("v1"));
    }

    #[test]
    fn split_homology_matches_the_whole_complex() {
        for n in 0..=2u32 {
            for row in [Row::Top, Row::Bottom] {
                let (fm, gm) = row.maps(n);
                for l in -12..=12 {
                    for k in -12..=12 {
                        let b = Bidegree::new(k, l);
                        let (a, bb, f) = fm.matrix_at(b).unwrap();
                        let (_, c, g) = gm.matrix_at(b).unwrap();
                        let (oa, ob, oc) = (orders(&a), orders(&bb), orders(&c));
                        let whole = homology(&f, &g, &oa, &ob, &oc).unwrap();
                        let split = split_homology(&f, &g, &oa, &ob, &oc).unwrap();
                        assert_eq!(whole.is_empty(), split.is_none(), "{row:?} {b}");
                    }
                }
                // A broken map must be seen by both.
                let mut f = IntMatrix::zeros(2, 1);
                f.set(0, 0, 2);
                let g = IntMatrix::zeros(0, 2);
                let ob = [Order::Free, Order::Cyclic(1)];
                let whole = homology(&f, &g, &[Order::Free], &ob, &[]).unwrap();
                let split = split_homology(&f, &g, &[Order::Free], &ob, &[]).unwrap();
                assert_eq!(whole.len(), 2);
                assert!(split.is_some());
            }
        }
    }

    #[test]
    fn gap_examples() {
        let gap = completeness_gap(1, 8, 8);
        let at: Vec<(i64, i64)> = gap.iter().map(|e| (e.k, e.l)).collect();
        assert!(at.contains(&(-4, 3)));
        assert!(at.contains(&(4, -4)));
        assert!(completeness_gap(1, 3, 3).is_empty());
        for n in 0..=3u32 {
            let p = period(n);
            let gap = completeness_gap(n, 2 * p, 2 * p);
            assert!(gap.iter().any(|e| (e.k, e.l) == (-p, p)), "n={n}");
        }
    }
}
