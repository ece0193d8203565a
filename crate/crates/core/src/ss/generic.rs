//! Materialized pages: every cell of the padded window is stored, each turn
//! installs explicit matrix entries and takes homology with the general
//! Smith-normal-form routine. Used for small windows, page dumps, and as the
//! reference for the line engine.

use std::collections::{BTreeMap, HashMap};

use crate::grading::{generator_weight, Bidegree, Monomial};
use crate::rings::{for_each_milnor_word, ClassOrder};
use crate::snf::{homology, IntMatrix, Order};

use super::{
    generator_bound, CellBasis, DifferentialRule, Entry, Height, PageWindow, Padding, SsError,
    SsKind, Window, CELL_BUDGET,
};

/// Milnor words on `v_1..v_top` of weight at most `max_weight`, by weight.
pub(crate) fn words_up_to(max_weight: i64, top: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        if top == 0 {
            if w == 0 {
                out.push(Monomial::unit());
            }
            continue;
        }
        for_each_milnor_word(w, 1, top, &mut |word| out.push(Monomial::new(word.iter().copied(), 0, 0)));
    }
    out
}

fn check_budget(words: usize, ks: i64, ls: i64) -> Result<(), SsError> {
    let cells = words as u64 * ks.max(0) as u64 * ls.max(0) as u64;
    if cells > CELL_BUDGET {
        let bound = if words as i64 > ks * ls { "weight" } else { "K,L" };
        return Err(SsError::Resource { bound, cells, budget: CELL_BUDGET });
    }
    Ok(())
}

fn build_cohomological(kind: SsKind, height: Height, window: Window) -> Result<PageWindow, SsError> {
    let padding = Padding::default_for(height, &window);
    build_with_padding(kind, height, window, padding)
}

pub(crate) fn build_with_padding(
    kind: SsKind,
    height: Height,
    window: Window,
    padding: Padding,
) -> Result<PageWindow, SsError> {
    let top = generator_bound(height, &window, &padding);
    let words = words_up_to(window.weight + padding.weight, top);
    let kmax = window.k + padding.k;
    check_budget(words.len(), 2 * kmax + 1, 2 * window.l + 1)?;
    let mut cells: BTreeMap<Bidegree, Vec<CellBasis>> = BTreeMap::new();
    for l in -window.l..=window.l {
        for k in -kmax..=kmax {
            let mut here = Vec::new();
            for word in &words {
                let w = word.v_weight();
                let j = w - k;
                let t = 2 * w - k - l;
                if kind == SsKind::Borel && t < 0 {
                    continue;
                }
                let m = word.clone().with_sexp(j).with_aexp(t);
                here.push(CellBasis::fresh(m, ClassOrder::Free));
            }
            if !here.is_empty() {
                here.sort();
                cells.insert(Bidegree::new(k, l), here);
            }
        }
    }
    Ok(PageWindow {
        kind,
        height,
        window,
        padding,
        page: 1,
        level: 0,
        generators: top,
        l_range: (-window.l, window.l),
        cells,
        differentials: BTreeMap::new(),
    })
}

/// E_1 of the Tate spectral sequence with coefficients `BP⟨n⟩` (or `BP`).
pub fn build_tate_e1(height: Height, window: Window) -> Result<PageWindow, SsError> {
    build_cohomological(SsKind::Tate, height, window)
}

/// E_1 of the Borel cohomology spectral sequence: Tate cells with `t >= 0`.
pub fn build_borel_e1(height: Height, window: Window) -> Result<PageWindow, SsError> {
    build_cohomological(SsKind::Borel, height, window)
}

/// The base `Z/2[σ^{-2}, a, a^{-1}]` of the geometric induction (level 0),
/// or for `n >= 1` the level-1 E_1 obtained by adjoining `v_1`. The twist
/// range reaches `n` times the padded `k`-bound below the inner window,
/// since each adjoined `v` moves classes up in twist.
pub fn build_geometric_e1(n: u32, window: Window) -> Result<PageWindow, SsError> {
    let height = Height::Finite(n);
    let padding = Padding::default_for(height, &window);
    let kmax = window.k + padding.k;
    let l_lo = -window.l - n as i64 * kmax;
    check_budget(1, kmax + 1, window.l - l_lo + 1)?;
    let mut cells = BTreeMap::new();
    for l in l_lo..=window.l {
        for k in (0..=kmax).step_by(2) {
            let m = Monomial::sigma(-k).with_aexp(-k - l);
            cells.insert(Bidegree::new(k, l), vec![CellBasis::fresh(m, ClassOrder::Two)]);
        }
    }
    let base = PageWindow {
        kind: SsKind::Geometric,
        height,
        window,
        padding,
        page: 2,
        level: 0,
        generators: 0,
        l_range: (l_lo, window.l),
        cells,
        differentials: BTreeMap::new(),
    };
    if n == 0 {
        Ok(base)
    } else {
        next_level(&base)
    }
}

/// Adjoins the next generator `v_{level+1}` to a geometric E∞ page.
pub fn next_level(pw: &PageWindow) -> Result<PageWindow, SsError> {
    let Height::Finite(n) = pw.height else {
        return Err(SsError::Unsupported("geometric induction needs a finite height".into()));
    };
    if pw.kind != SsKind::Geometric || pw.level >= n {
        return Err(SsError::Unsupported("no further level to adjoin".into()));
    }
    let level = pw.level + 1;
    let g = generator_weight(level);
    let (_, kmax) = pw.k_range();
    let l_lo = pw.l_range.0 + kmax;
    let mut cells: BTreeMap<Bidegree, Vec<CellBasis>> = BTreeMap::new();
    for (&b, here) in &pw.cells {
        let mut r = 0;
        while b.k + r * g <= kmax {
            let nb = Bidegree::new(b.k + r * g, b.l + r * g);
            if nb.l >= l_lo && nb.l <= pw.l_range.1 {
                for c in here {
                    let m = c.monomial.clone().with_v(level, r);
                    cells.entry(nb).or_default().push(CellBasis::fresh(m, ClassOrder::Two));
                }
            }
            r += 1;
        }
    }
    for v in cells.values_mut() {
        v.sort();
    }
    Ok(PageWindow {
        level,
        page: 1,
        generators: level,
        l_range: (l_lo, pw.l_range.1),
        cells,
        differentials: BTreeMap::new(),
        ..pw.clone()
    })
}

type Lookup = HashMap<Bidegree, HashMap<Monomial, usize>>;

fn lookup(pw: &PageWindow) -> Lookup {
    pw.cells
        .iter()
        .map(|(&b, cs)| (b, cs.iter().enumerate().map(|(i, c)| (c.monomial.clone(), i)).collect()))
        .collect()
}

/// Matrix entries of `rule` on `pw`, keyed by source bidegree.
fn entries_for(
    pw: &PageWindow,
    rule: DifferentialRule,
    index: &Lookup,
) -> Result<BTreeMap<Bidegree, Vec<Entry>>, SsError> {
    let base = if pw.kind == SsKind::Geometric { 1 } else { rule.coefficient() };
    let mut out: BTreeMap<Bidegree, Vec<Entry>> = BTreeMap::new();
    for (&b, cells) in &pw.cells {
        let tb = b + rule.shift();
        let Some(targets) = index.get(&tb) else { continue };
        for (i, c) in cells.iter().enumerate() {
            if !rule.is_source(&c.monomial) {
                continue;
            }
            let tm = rule.target(&c.monomial);
            let Some(&ti) = targets.get(&tm) else { continue };
            let t = &pw.cells[&tb][ti];
            if tm.dimension() - c.monomial.dimension() != rule.shift() {
                return Err(SsError::Invariant(format!("{} -> {tm} is not a (-1,0) shift", c.monomial)));
            }
            let page = if pw.kind == SsKind::Geometric { 1 } else { rule.filtration_shift() };
            if pw.kind != SsKind::Geometric && t.filtration - c.filtration != page {
                return Err(SsError::Invariant(format!("{} -> {tm} has the wrong filtration jump", c.monomial)));
            }
            // d(2^u x) = 2^u c y = 2^{u + ν(c) - w} (2^w y).
            let up = c.valuation as i64 + base.trailing_zeros() as i64 - t.valuation as i64;
            if up < 0 {
                return Err(SsError::NonIntegral(format!("{} -> {}", c.label(), t.label())));
            }
            let coefficient = (base >> base.trailing_zeros()) << up;
            out.entry(b).or_default().push(Entry { source: i, target: ti, coefficient });
        }
    }
    Ok(out)
}

fn to_order(o: ClassOrder) -> Order {
    match o {
        ClassOrder::Free => Order::Free,
        ClassOrder::Two => Order::Cyclic(1),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Homology of `pw` under `entries`, one connected component at a time.
fn take_homology(
    pw: &PageWindow,
    entries: &BTreeMap<Bidegree, Vec<Entry>>,
) -> Result<BTreeMap<Bidegree, Vec<CellBasis>>, SsError> {
    let keys: Vec<Bidegree> = pw.cells.keys().copied().collect();
    let mut offset = HashMap::new();
    let mut total = 0;
    for b in &keys {
        offset.insert(*b, total);
        total += pw.cells[b].len();
    }
    let node = |b: Bidegree, i: usize| offset[&b] + i;
    let mut uf = UnionFind((0..total).collect());
    let mut touched = vec![false; total];
    for (&b, es) in entries {
        let tb = b + Bidegree::new(-1, 0);
        for e in es {
            let (x, y) = (node(b, e.source), node(tb, e.target));
            uf.union(x, y);
            touched[x] = true;
            touched[y] = true;
        }
    }
    // Members of each nontrivial component, grouped by bidegree.
    let mut components: HashMap<usize, BTreeMap<Bidegree, Vec<usize>>> = HashMap::new();
    for b in &keys {
        for i in 0..pw.cells[b].len() {
            let x = node(*b, i);
            if touched[x] {
                components.entry(uf.find(x)).or_default().entry(*b).or_default().push(i);
            }
        }
    }
    let mut out: BTreeMap<Bidegree, Vec<CellBasis>> = BTreeMap::new();
    for b in &keys {
        for (i, c) in pw.cells[b].iter().enumerate() {
            if !touched[node(*b, i)] {
                out.entry(*b).or_default().push(c.clone());
            }
        }
    }
    let mut values: HashMap<(Bidegree, usize, usize), i64> = HashMap::new();
    for (&b, es) in entries {
        for e in es {
            *values.entry((b, e.source, e.target)).or_default() += e.coefficient;
        }
    }
    let entry_value = |src_b: Bidegree, s: usize, t: usize| -> i64 { values.get(&(src_b, s, t)).copied().unwrap_or(0) };
    let mut roots: Vec<usize> = components.keys().copied().collect();
    roots.sort();
    for root in roots {
        let comp = &components[&root];
        for (&b, ys) in comp {
            let up = b + Bidegree::new(1, 0);
            let down = b + Bidegree::new(-1, 0);
            let xs: &[usize] = comp.get(&up).map_or(&[], Vec::as_slice);
            let zs: &[usize] = comp.get(&down).map_or(&[], Vec::as_slice);
            let mut f = IntMatrix::zeros(ys.len(), xs.len());
            for (r, &y) in ys.iter().enumerate() {
                for (c, &x) in xs.iter().enumerate() {
                    f.set(r, c, entry_value(up, x, y) as i128);
                }
            }
            let mut g = IntMatrix::zeros(zs.len(), ys.len());
            for (r, &z) in zs.iter().enumerate() {
                for (c, &y) in ys.iter().enumerate() {
                    g.set(r, c, entry_value(b, y, z) as i128);
                }
            }
            let ord = |bb: Bidegree, ids: &[usize]| -> Vec<Order> {
                ids.iter().map(|&i| to_order(pw.cells[&bb][i].order)).collect()
            };
            let classes = homology(&f, &g, &ord(up, xs), &ord(b, ys), &ord(down, zs))?;
            for class in classes {
                let support: Vec<(usize, i128)> =
                    class.vector.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
                let [(pos, coeff)] = support.as_slice() else {
                    return Err(SsError::NonMonomial(format!("{:?} at {b}", class.vector)));
                };
                let old = &pw.cells[&b][ys[*pos]];
                let order = match class.order {
                    Order::Free => ClassOrder::Free,
                    Order::Cyclic(1) => ClassOrder::Two,
                    Order::Cyclic(e) => {
                        return Err(SsError::Unsupported(format!("cyclic order 2^{e} at {b}")))
                    }
                };
                out.entry(b).or_default().push(CellBasis {
                    monomial: old.monomial.clone(),
                    order,
                    filtration: old.filtration,
                    valuation: old.valuation + coeff.trailing_zeros(),
                });
            }
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}

fn stage_turn(pw: &PageWindow, rule: DifferentialRule) -> Result<PageWindow, SsError> {
    let index = lookup(pw);
    let entries = entries_for(pw, rule, &index)?;
    let cells = take_homology(pw, &entries)?;
    Ok(PageWindow { cells, differentials: entries, ..pw.clone() })
}

/// Turns one page. Stage pages `2^{s+1} - 1` install the stage-`s` rule;
/// other pages copy forward. For the geometric sequence, page 1 of each level
/// carries the level's `d_1`.
pub fn turn_page(pw: &PageWindow) -> Result<PageWindow, SsError> {
    let mut next = match pw.kind {
        SsKind::Geometric if pw.page == 1 && pw.level >= 1 => stage_turn(pw, DifferentialRule::new(pw.level))?,
        SsKind::Tate | SsKind::Borel if pw.page == DifferentialRule::new(pw.level).page() => {
            let mut next = stage_turn(pw, DifferentialRule::new(pw.level))?;
            next.level += 1;
            next
        }
        _ => PageWindow { differentials: BTreeMap::new(), ..pw.clone() },
    };
    next.page += 1;
    Ok(next)
}

/// Whether the next few stages have no nonzero entries on `pw`.
pub fn degenerates_beyond(pw: &PageWindow) -> Result<bool, SsError> {
    if pw.kind == SsKind::Geometric {
        return Ok(true);
    }
    let index = lookup(pw);
    for s in pw.level..pw.level + 3 {
        if !entries_for(pw, DifferentialRule::new(s), &index)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the materialized pipeline to E∞.
pub fn run_generic_to_einfty(kind: SsKind, height: Height, window: Window) -> Result<PageWindow, SsError> {
    match kind {
        SsKind::Geometric => {
            let Height::Finite(n) = height else {
                return Err(SsError::Unsupported("geometric induction needs a finite height".into()));
            };
            let mut pw = build_geometric_e1(n, window)?;
            while pw.level >= 1 {
                pw = turn_page(&pw)?;
                if pw.level < n {
                    pw = next_level(&pw)?;
                } else {
                    break;
                }
            }
            Ok(pw)
        }
        _ => {
            let mut pw = build_cohomological(kind, height, window)?;
            while pw.level <= pw.generators {
                pw = turn_page(&pw)?;
            }
            if !degenerates_beyond(&pw)? {
                return Err(SsError::Invariant("nonzero differentials past the last stage".into()));
            }
            Ok(pw)
        }
    }
}

/// `d ∘ d = 0` for the entries installed when turning `before` into `after`,
/// computed modulo the order of each final target.
pub fn d_squared_is_zero(before: &PageWindow, after: &PageWindow) -> bool {
    let shift = Bidegree::new(-1, 0);
    for (&b, first) in &after.differentials {
        let Some(second) = after.differentials.get(&(b + shift)) else { continue };
        let mut by_source: HashMap<usize, Vec<&Entry>> = HashMap::new();
        for e2 in second {
            by_source.entry(e2.source).or_default().push(e2);
        }
        let mut products: HashMap<(usize, usize), i64> = HashMap::new();
        for e1 in first {
            for e2 in by_source.get(&e1.target).into_iter().flatten() {
                *products.entry((e1.source, e2.target)).or_default() += e1.coefficient * e2.coefficient;
            }
        }
        let zb = b + shift + shift;
        for ((_, z), value) in products {
            let zero = match before.cells[&zb][z].order {
                ClassOrder::Free => value == 0,
                ClassOrder::Two => value % 2 == 0,
            };
            if !zero {
                return false;
            }
        }
    }
    true
}
