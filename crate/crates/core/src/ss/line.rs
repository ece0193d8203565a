//! The line engine: Tate and Borel pages held one twist line at a time as
//! flat arrays indexed by `(k, word)`.
//!
//! Every stage rule is injective on monomials and no cell is both a source
//! and a target within one stage, so each homology computation is a path
//! `x -> y` and is settled by [`path_homology`].

use std::collections::{BTreeMap, HashMap};

use crate::grading::{Bidegree, Monomial};
use crate::rings::ClassOrder;
use crate::snf::{path_homology, Order};

use super::generic::{run_generic_to_einfty, words_up_to};
use super::{generator_bound, CellBasis, Height, PageWindow, Padding, SsError, SsKind, Window, CELL_BUDGET};

const NONE: u32 = u32::MAX;

const DEAD: u8 = 0;
const TWO: u8 = 1;
const FREE: u8 = 2;

struct WordTable {
    words: Vec<Monomial>,
    weight: Vec<i64>,
    min: Vec<u32>,
    /// `times_v[s - 1][w]`: the word `w · v_s`, or `NONE` past the weight cap.
    times_v: Vec<Vec<u32>>,
}

impl WordTable {
    fn new(max_weight: i64, top: u32) -> Self {
        let words = words_up_to(max_weight, top);
        let index: HashMap<&Monomial, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let times_v = (1..=top)
            .map(|s| {
                words
                    .iter()
                    .map(|w| index.get(&w.clone().with_v(s, 1)).copied().unwrap_or(NONE))
                    .collect()
            })
            .collect();
        WordTable {
            weight: words.iter().map(Monomial::v_weight).collect(),
            min: words.iter().map(|w| w.min_index().unwrap_or(u32::MAX)).collect(),
            times_v,
            words,
        }
    }
}

fn to_order(code: u8) -> Order {
    if code == FREE {
        Order::Free
    } else {
        Order::Cyclic(1)
    }
}

fn from_result(r: Option<(Order, u32)>, old_val: u8) -> Result<(u8, u8), SsError> {
    match r {
        None => Ok((DEAD, 0)),
        Some((Order::Free, v)) => Ok((FREE, old_val + v as u8)),
        Some((Order::Cyclic(1), v)) => Ok((TWO, old_val + v as u8)),
        Some((Order::Cyclic(e), _)) => Err(SsError::Unsupported(format!("cyclic order 2^{e}"))),
    }
}

/// Runs one twist line through every stage and appends its inner survivors.
fn run_line(
    kind: SsKind,
    l: i64,
    window: &Window,
    padding: &Padding,
    table: &WordTable,
    top: u32,
    out: &mut BTreeMap<Bidegree, Vec<CellBasis>>,
) -> Result<(), SsError> {
    let kmax = window.k + padding.k;
    let nk = (2 * kmax + 1) as usize;
    let nw = table.words.len();
    let mut ord = vec![DEAD; nk * nw];
    let mut val = vec![0u8; nk * nw];
    for ki in 0..nk {
        let k = ki as i64 - kmax;
        for w in 0..nw {
            let t = 2 * table.weight[w] - k - l;
            if kind == SsKind::Borel && t < 0 {
                continue;
            }
            ord[ki * nw + w] = FREE;
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut updates: Vec<(usize, u8, u8)> = Vec::new();
    let mut is_source = vec![false; nk * nw];
    for s in 0..=top {
        let base_shift: u32 = if s == 0 { 1 } else { 0 };
        edges.clear();
        for ki in 1..nk {
            let k = ki as i64 - kmax;
            for w in 0..nw {
                let x = ki * nw + w;
                if ord[x] == DEAD {
                    continue;
                }
                let j = table.weight[w] - k;
                if j == 0 || j.trailing_zeros() != s || table.min[w] < s {
                    continue;
                }
                let tw = if s == 0 { w as u32 } else { table.times_v[(s - 1) as usize][w] };
                if tw == NONE {
                    continue;
                }
                let y = (ki - 1) * nw + tw as usize;
                if ord[y] != DEAD {
                    edges.push((x, y));
                }
            }
        }
        updates.clear();
        for &(x, _) in &edges {
            is_source[x] = true;
        }
        for &(x, y) in &edges {
            if is_source[y] {
                return Err(SsError::Invariant("a cell is both source and target in one stage".into()));
            }
            let up = val[x] as i64 + base_shift as i64 - val[y] as i64;
            if up < 0 {
                return Err(SsError::NonIntegral(format!("stage {s} on line {l}")));
            }
            let c: i128 = 1 << up;
            let (ox, oy) = (to_order(ord[x]), to_order(ord[y]));
            let nx = path_homology(None, ox, Some((oy, c)))?;
            let ny = path_homology(Some((ox, c)), oy, None)?;
            let (ox2, vx2) = from_result(nx, val[x])?;
            let (oy2, vy2) = from_result(ny, val[y])?;
            updates.push((x, ox2, vx2));
            updates.push((y, oy2, vy2));
        }
        for &(x, _) in &edges {
            is_source[x] = false;
        }
        for &(i, o, v) in &updates {
            ord[i] = o;
            val[i] = v;
        }
    }

    for ki in 0..nk {
        let k = ki as i64 - kmax;
        if k.abs() > window.k {
            continue;
        }
        for w in 0..nw {
            let i = ki * nw + w;
            if ord[i] == DEAD || table.weight[w] > window.weight {
                continue;
            }
            let weight = table.weight[w];
            let m = table.words[w].clone().with_sexp(weight - k).with_aexp(2 * weight - k - l);
            let order = if ord[i] == FREE { ClassOrder::Free } else { ClassOrder::Two };
            let mut cell = CellBasis::fresh(m, order);
            cell.valuation = val[i] as u32;
            out.entry(Bidegree::new(k, l)).or_default().push(cell);
        }
    }
    Ok(())
}

/// Tate or Borel E∞ on the inner window with an explicit padding.
pub fn run_with_padding(
    kind: SsKind,
    height: Height,
    window: Window,
    padding: Padding,
) -> Result<PageWindow, SsError> {
    if kind == SsKind::Geometric {
        return Err(SsError::Unsupported("the line engine handles tate and borel only".into()));
    }
    let top = generator_bound(height, &window, &padding);
    let table = WordTable::new(window.weight + padding.weight, top);
    let per_line = table.words.len() as u64 * (2 * (window.k + padding.k) + 1) as u64;
    if per_line > CELL_BUDGET {
        return Err(SsError::Resource { bound: "weight", cells: per_line, budget: CELL_BUDGET });
    }
    let mut cells = BTreeMap::new();
    for l in -window.l..=window.l {
        run_line(kind, l, &window, &padding, &table, top, &mut cells)?;
    }
    for v in cells.values_mut() {
        v.sort();
    }
    Ok(PageWindow {
        kind,
        height,
        window,
        padding,
        page: 2u32 << top,
        level: top + 1,
        generators: top,
        l_range: (-window.l, window.l),
        cells,
        differentials: BTreeMap::new(),
    })
}

/// E∞ restricted to the inner window. Tate and Borel use the line engine;
/// the geometric induction is small enough to materialize.
pub fn run_to_einfty(kind: SsKind, height: Height, window: Window) -> Result<PageWindow, SsError> {
    match kind {
        SsKind::Geometric => {
            let mut pw = run_generic_to_einfty(kind, height, window)?;
            pw.cells = pw.inner_cells();
            Ok(pw)
        }
        _ => run_with_padding(kind, height, window, Padding::default_for(height, &window)),
    }
}
