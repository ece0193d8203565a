//! Smith normal form over the integers and homology of short complexes of
//! finitely presented groups, read 2-locally.
//!
//! Everything is computed over `Z` and localized at the end: an invariant
//! factor `d` contributes `Z/2^{ν_2(d)}` (nothing when `d` is odd) and a zero
//! factor contributes a free summand.

use thiserror::Error;

pub type Int = i128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("matrix shapes do not compose: {0}")]
    Shape(String),
    #[error("map is not well defined on the presented groups: {0}")]
    IllDefined(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Int) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, SnfError> {
        if self.cols != other.rows {
            return Err(SnfError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(other.get(k, j)).ok_or(SnfError::Overflow)?;
                    let sum = out.get(i, j).checked_add(prod).ok_or(SnfError::Overflow)?;
                    out.set(i, j, sum);
                }
            }
        }
        Ok(out)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    fn row_axpy(&mut self, dst: usize, q: Int, src: usize) -> Result<(), SnfError> {
        // row_dst -= q * row_src
        for j in 0..self.cols {
            let prod = q.checked_mul(self.get(src, j)).ok_or(SnfError::Overflow)?;
            let x = self.get(dst, j).checked_sub(prod).ok_or(SnfError::Overflow)?;
            self.set(dst, j, x);
        }
        Ok(())
    }

    fn col_axpy(&mut self, dst: usize, q: Int, src: usize) -> Result<(), SnfError> {
        // col_dst -= q * col_src
        for i in 0..self.rows {
            let prod = q.checked_mul(self.get(i, src)).ok_or(SnfError::Overflow)?;
            let x = self.get(i, dst).checked_sub(prod).ok_or(SnfError::Overflow)?;
            self.set(i, dst, x);
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = self.get(i, j);
            self.set(i, j, -x);
        }
    }
}

/// `left · m · right = diag(diagonal)` with `left`, `right` unimodular and
/// `left_inv = left^{-1}`. The diagonal is nonnegative and each nonzero entry
/// divides the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<Int>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }
}

struct Reducer {
    m: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
}

impl Reducer {
    fn row_axpy(&mut self, dst: usize, q: Int, src: usize) -> Result<(), SnfError> {
        self.m.row_axpy(dst, q, src)?;
        self.left.row_axpy(dst, q, src)?;
        // The inverse picks up the inverse column operation: col_src += q col_dst.
        self.left_inv.col_axpy(src, -q, dst)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.left.swap_rows(a, b);
        self.left_inv.swap_cols(a, b);
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        self.left.negate_row(i);
        for r in 0..self.left_inv.rows {
            let x = self.left_inv.get(r, i);
            self.left_inv.set(r, i, -x);
        }
    }

    fn col_axpy(&mut self, dst: usize, q: Int, src: usize) -> Result<(), SnfError> {
        self.m.col_axpy(dst, q, src)?;
        self.right.col_axpy(dst, q, src)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.right.swap_cols(a, b);
    }
}

pub fn smith(m: &IntMatrix) -> Result<Smith, SnfError> {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer {
        m: m.clone(),
        left: IntMatrix::identity(rows),
        left_inv: IntMatrix::identity(rows),
        right: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = r.m.get(i, j);
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < r.m.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let p = r.m.get(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let q = r.m.get(i, t).div_euclid(p);
                if q != 0 {
                    r.row_axpy(i, q, t)?;
                }
                if r.m.get(i, t) != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = r.m.get(t, j).div_euclid(p);
                if q != 0 {
                    r.col_axpy(j, q, t)?;
                }
                if r.m.get(t, j) != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder exists in row or column t; make it the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = r.m.get(i, t);
                    if x != 0 && x.abs() < r.m.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = r.m.get(t, j);
                    if x != 0 && x.abs() < r.m.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                r.swap_rows(t, best.0);
                r.swap_cols(t, best.1);
                continue;
            }
            // Divisibility: the pivot must divide the rest of the block.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if r.m.get(i, j) % p != 0 {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => r.row_axpy(t, -1, i)?,
                None => break,
            }
        }
        if r.m.get(t, t) < 0 {
            r.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| r.m.get(i, i)).collect();
    Ok(Smith { diagonal, left: r.left, left_inv: r.left_inv, right: r.right })
}

/// A basis of the integer kernel `{x : m x = 0}`, as columns.
pub fn kernel_basis(m: &IntMatrix) -> Result<Vec<Vec<Int>>, SnfError> {
    let s = smith(m)?;
    let rank = s.rank();
    Ok((rank..m.cols).map(|j| s.right.column(j)).collect())
}

/// A basis of the lattice spanned by `generators` (vectors of length `dim`).
pub fn lattice_basis(dim: usize, generators: &[Vec<Int>]) -> Result<Vec<Vec<Int>>, SnfError> {
    if generators.is_empty() {
        return Ok(Vec::new());
    }
    let p = IntMatrix::from_columns(dim, generators);
    let s = smith(&p)?;
    let mut out = Vec::new();
    for (i, &d) in s.diagonal.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let col = s.left_inv.column(i);
        out.push(col.iter().map(|&x| x.checked_mul(d).ok_or(SnfError::Overflow)).collect::<Result<_, _>>()?);
    }
    Ok(out)
}

/// Cyclic order of a 2-local summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Free,
    /// `Z/2^e`, `e >= 1`.
    Cyclic(u32),
}

impl Order {
    /// The relation `order · x = 0` presenting a cyclic group, `0` for free.
    pub fn relation(self) -> Int {
        match self {
            Order::Free => 0,
            Order::Cyclic(e) => 1 << e,
        }
    }

    /// The 2-local cyclic group `Z/d`, or `None` when `d` is an odd unit.
    pub fn of_invariant(d: Int) -> Option<Order> {
        if d == 0 {
            Some(Order::Free)
        } else {
            let e = d.trailing_zeros();
            (e > 0).then_some(Order::Cyclic(e))
        }
    }
}

/// One cyclic summand of a homology group and a representing vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    pub vector: Vec<Int>,
    pub order: Order,
}

fn diag_columns(dim: usize, relations: &[Order]) -> Vec<Vec<Int>> {
    relations
        .iter()
        .enumerate()
        .filter(|(_, o)| **o != Order::Free)
        .map(|(i, o)| {
            let mut col = vec![0; dim];
            col[i] = o.relation();
            col
        })
        .collect()
}

fn in_span(basis: &[Vec<Int>], relations_cols: &[Vec<Int>], v: &[Int]) -> Result<bool, SnfError> {
    let dim = v.len();
    let mut gens: Vec<Vec<Int>> = basis.to_vec();
    gens.extend(relations_cols.iter().cloned());
    let before = lattice_basis(dim, &gens)?;
    gens.push(v.to_vec());
    let after = lattice_basis(dim, &gens)?;
    // Same rank and same covolume on the common span means the same lattice.
    if before.len() != after.len() {
        return Ok(false);
    }
    Ok(lattice_index(&before, &after)? == 1)
}

/// `[L' : L]` for lattices `L ⊆ L'` of equal rank given by bases.
fn lattice_index(sub: &[Vec<Int>], sup: &[Vec<Int>]) -> Result<Int, SnfError> {
    if sub.is_empty() {
        return Ok(1);
    }
    let dim = sub[0].len();
    let coords = solve_in_basis(dim, sup, sub)?;
    let s = smith(&coords)?;
    let mut index: Int = 1;
    for d in s.diagonal {
        index = index.checked_mul(d).ok_or(SnfError::Overflow)?;
    }
    Ok(index.abs())
}

/// Coordinates `X` with `basis · X = vectors`, for vectors in the span of a
/// lattice basis. Errors if a vector is not an integral combination.
fn solve_in_basis(dim: usize, basis: &[Vec<Int>], vectors: &[Vec<Int>]) -> Result<IntMatrix, SnfError> {
    let r = basis.len();
    let b = IntMatrix::from_columns(dim, basis);
    let m = IntMatrix::from_columns(dim, vectors);
    let s = smith(&b)?;
    let um = s.left.mul(&m)?;
    let mut y = IntMatrix::zeros(r, vectors.len());
    for j in 0..vectors.len() {
        for i in 0..dim {
            let x = um.get(i, j);
            let d = if i < r { s.diagonal[i] } else { 0 };
            if d == 0 {
                if x != 0 {
                    return Err(SnfError::IllDefined("vector outside the lattice span".into()));
                }
                continue;
            }
            if x % d != 0 {
                return Err(SnfError::IllDefined("vector not an integral combination".into()));
            }
            y.set(i, j, x / d);
        }
    }
    s.right.mul(&y)
}

/// Homology at `B` of `A --f--> B --g--> C`, where each group is a sum of
/// cyclic groups with the given 2-local orders. `f` is `|B| x |A|`, `g` is
/// `|C| x |B|`. Summands of odd order are dropped.
pub fn homology(
    f: &IntMatrix,
    g: &IntMatrix,
    orders_a: &[Order],
    orders_b: &[Order],
    orders_c: &[Order],
) -> Result<Vec<HomologyClass>, SnfError> {
    let (a, b, c) = (orders_a.len(), orders_b.len(), orders_c.len());
    if f.rows() != b || f.cols() != a || g.rows() != c || g.cols() != b {
        return Err(SnfError::Shape(format!(
            "f is {}x{}, g is {}x{}, groups have {a}, {b}, {c} generators",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let rel_b = diag_columns(b, orders_b);
    let rel_c = diag_columns(c, orders_c);

    // Well-definedness: relations go to relations, and g f lands in the
    // relations of C.
    for (i, o) in orders_a.iter().enumerate() {
        if *o != Order::Free {
            let img: Vec<Int> = f.column(i).iter().map(|&x| x * o.relation()).collect();
            if !in_span(&[], &rel_b, &img)? {
                return Err(SnfError::IllDefined(format!("f on the relation of generator {i}")));
            }
        }
    }
    for (i, o) in orders_b.iter().enumerate() {
        if *o != Order::Free {
            let img: Vec<Int> = g.column(i).iter().map(|&x| x * o.relation()).collect();
            if !in_span(&[], &rel_c, &img)? {
                return Err(SnfError::IllDefined(format!("g on the relation of generator {i}")));
            }
        }
    }
    let gf = g.mul(f)?;
    for j in 0..a {
        if !in_span(&[], &rel_c, &gf.column(j))? {
            return Err(SnfError::IllDefined(format!("g f is nonzero on generator {j}")));
        }
    }

    // Cycles: x with g x in the relation lattice of C.
    let g_ext = g.hcat(&IntMatrix::from_columns(c, &rel_c));
    let cycle_gens: Vec<Vec<Int>> =
        kernel_basis(&g_ext)?.into_iter().map(|v| v[..b].to_vec()).collect();
    let cycles = lattice_basis(b, &cycle_gens)?;
    if cycles.is_empty() {
        return Ok(Vec::new());
    }

    // Boundaries: image of f plus the relations of B.
    let mut bounds: Vec<Vec<Int>> = (0..a).map(|j| f.column(j)).collect();
    bounds.extend(rel_b);
    bounds.retain(|v| v.iter().any(|&x| x != 0));

    let r = cycles.len();
    let coords = if bounds.is_empty() {
        IntMatrix::zeros(r, 0)
    } else {
        solve_in_basis(b, &cycles, &bounds)?
    };
    let s = smith(&coords)?;
    let basis = IntMatrix::from_columns(b, &cycles);
    let gens = basis.mul(&s.left_inv)?;
    let mut out = Vec::new();
    for i in 0..r {
        let d = s.diagonal.get(i).copied().unwrap_or(0);
        if let Some(order) = Order::of_invariant(d) {
            out.push(HomologyClass { vector: gens.column(i), order });
        }
    }
    Ok(out)
}

/// Homology at a single cell `y` on a path `x --alpha--> y --beta--> z`,
/// with missing neighbours passed as `None`. Returns the order of the
/// surviving class and the exponent `v` such that it is represented by
/// `2^v y`, or `None` if nothing survives.
pub fn path_homology(
    incoming: Option<(Order, Int)>,
    own: Order,
    outgoing: Option<(Order, Int)>,
) -> Result<Option<(Order, u32)>, SnfError> {
    let cap = |o: Order| match o {
        Order::Free => None,
        Order::Cyclic(e) => Some(e),
    };
    let cy = cap(own);
    let maps_ok = |src: Option<u32>, dst: Option<u32>, c: Int| match (src, dst) {
        (_, _) if c == 0 => true,
        (None, _) => true,
        (Some(_), None) => false,
        (Some(e), Some(f)) => c.trailing_zeros() + e >= f,
    };

    // Cycles are the multiples 2^kv y.
    let mut kv = 0;
    if let Some((oz, beta)) = outgoing {
        let cz = cap(oz);
        if !maps_ok(cy, cz, beta) {
            return Err(SnfError::IllDefined("outgoing map does not respect orders".into()));
        }
        if beta != 0 {
            match cz {
                None => return Ok(None),
                Some(f) => kv = f.saturating_sub(beta.trailing_zeros()),
            }
        }
    }
    if cy.is_some_and(|e| kv >= e) {
        return Ok(None);
    }
    // Boundaries are the multiples 2^iv y.
    let mut iv = cy;
    if let Some((ox, alpha)) = incoming {
        if !maps_ok(cap(ox), cy, alpha) {
            return Err(SnfError::IllDefined("incoming map does not respect orders".into()));
        }
        if alpha != 0 {
            let va = alpha.trailing_zeros();
            iv = Some(iv.map_or(va, |e| e.min(va)));
        }
    }
    match iv {
        None => Ok(Some((Order::Free, kv))),
        Some(iv) if iv < kv => Err(SnfError::IllDefined("composite of the two maps is nonzero".into())),
        Some(iv) if iv == kv => Ok(None),
        Some(iv) => Ok(Some((Order::Cyclic(iv - kv), kv))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.gen_range(-bound..=bound) as Int);
            }
        }
        m
    }

    #[test]
    fn smith_decomposes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let m = random_matrix(&mut rng, r, c, 6);
            let s = smith(&m).unwrap();
            let d = s.left.mul(&m).unwrap().mul(&s.right).unwrap();
            for i in 0..r {
                for j in 0..c {
                    let expect = if i == j { s.diagonal[i] } else { 0 };
                    assert_eq!(d.get(i, j), expect);
                }
            }
            assert_eq!(s.left.mul(&s.left_inv).unwrap(), IntMatrix::identity(r));
            let nz: Vec<Int> = s.diagonal.iter().copied().filter(|&x| x != 0).collect();
            assert!(nz.windows(2).all(|w| w[1] % w[0] == 0));
            assert!(s.diagonal.iter().all(|&x| x >= 0));
        }
    }

    /// `x` ranges over `(Z/2^N)^dim`, encoded as an integer.
    fn decode(mut code: u32, dim: usize, n: u32) -> Vec<Int> {
        let mut v = vec![0; dim];
        for x in v.iter_mut() {
            *x = (code & ((1 << n) - 1)) as Int;
            code >>= n;
        }
        v
    }

    /// The structure of `ker g / im f` over `Z/2^N`, by enumeration: the
    /// number of elements killed by `2^i` for `i = 0..=N`.
    fn brute_mod_2n(f: &IntMatrix, g: &IntMatrix, n: u32) -> Vec<usize> {
        let modulus: Int = 1 << n;
        let apply = |m: &IntMatrix, x: &[Int]| -> Vec<Int> {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j) * x[j]).sum::<Int>().rem_euclid(modulus))
                .collect()
        };
        let (a, b) = (f.cols(), f.rows());
        let mut image = std::collections::HashSet::new();
        for code in 0..(1u32 << (n as usize * a)) {
            image.insert(apply(f, &decode(code, a, n)));
        }
        let mut kernel = Vec::new();
        for code in 0..(1u32 << (n as usize * b)) {
            let x = decode(code, b, n);
            if apply(g, &x).iter().all(|&y| y == 0) {
                kernel.push(x);
            }
        }
        // |{h in H : 2^i h = 0}| = |{x in ker : 2^i x in im}| / |im|.
        (0..=n)
            .map(|i| {
                let hits = kernel
                    .iter()
                    .filter(|x| {
                        let y: Vec<Int> = x.iter().map(|&c| (c << i).rem_euclid(modulus)).collect();
                        image.contains(&y)
                    })
                    .count();
                hits / image.len()
            })
            .collect()
    }

    /// The same counts predicted from the integral homology by the universal
    /// coefficient theorem: `H ⊗ Z/2^N ⊕ Tor(coker g, Z/2^N)`.
    fn predicted_mod_2n(f: &IntMatrix, g: &IntMatrix, n: u32) -> Vec<usize> {
        let free = |k: usize| vec![Order::Free; k];
        let h = homology(f, g, &free(f.cols()), &free(f.rows()), &free(g.rows())).unwrap();
        let mut pieces: Vec<u32> = h
            .iter()
            .map(|c| match c.order {
                Order::Free => n,
                Order::Cyclic(e) => e.min(n),
            })
            .collect();
        let coker = smith(g).unwrap();
        for &d in &coker.diagonal {
            if let Some(Order::Cyclic(e)) = Order::of_invariant(d) {
                pieces.push(e.min(n));
            }
        }
        (0..=n).map(|i| pieces.iter().map(|&e| 1usize << e.min(i)).product()).collect()
    }

    #[test]
    fn homology_matches_brute_force_mod_256() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let n = 8;
        let mut checked = 0;
        while checked < 60 {
            let a = rng.gen_range(1..=2);
            let b = rng.gen_range(1..=2);
            let c = rng.gen_range(1..=2);
            let f = random_matrix(&mut rng, b, a, 4);
            // Rows of g drawn from the left kernel of f, scaled randomly.
            let left_kernel = kernel_basis(&transpose(&f)).unwrap();
            let mut g = IntMatrix::zeros(c, b);
            for i in 0..c {
                for v in &left_kernel {
                    let s = rng.gen_range(-3..=3) as Int;
                    for j in 0..b {
                        g.set(i, j, g.get(i, j) + s * v[j]);
                    }
                }
            }
            assert!(g.mul(&f).unwrap().is_zero());
            assert_eq!(brute_mod_2n(&f, &g, n), predicted_mod_2n(&f, &g, n), "f={f:?} g={g:?}");
            checked += 1;
        }
    }

    fn transpose(m: &IntMatrix) -> IntMatrix {
        let mut t = IntMatrix::zeros(m.cols(), m.rows());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                t.set(j, i, m.get(i, j));
            }
        }
        t
    }

    #[test]
    fn presented_examples() {
        let one = |x: Int| IntMatrix::from_rows(&[vec![x]]);
        // Z --2--> Z --> 0 : Z/2.
        let h = homology(&one(2), &IntMatrix::zeros(0, 1), &[Order::Free], &[Order::Free], &[]).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].order, Order::Cyclic(1));
        // 0 --> Z --1--> Z/2 : 2Z.
        let h = homology(&IntMatrix::zeros(1, 0), &one(1), &[], &[Order::Free], &[Order::Cyclic(1)]).unwrap();
        assert_eq!(h[0].order, Order::Free);
        assert_eq!(h[0].vector[0].abs(), 2);
        // Z/2 --> Z is ill defined unless zero.
        assert!(homology(&IntMatrix::zeros(1, 0), &one(1), &[], &[Order::Cyclic(1)], &[Order::Free]).is_err());
        // Odd multiplication is an isomorphism 2-locally.
        let h = homology(&one(3), &IntMatrix::zeros(0, 1), &[Order::Free], &[Order::Free], &[]).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn path_fast_path_matches_general_routine() {
        let orders = [Order::Free, Order::Cyclic(1), Order::Cyclic(2)];
        let coeffs: [Int; 5] = [0, 1, 2, 3, 4];
        for &ox in &orders {
            for &oy in &orders {
                for &oz in &orders {
                    for &alpha in &coeffs {
                        for &beta in &coeffs {
                            for (has_x, has_z) in [(true, true), (true, false), (false, true), (false, false)] {
                                let (f, oa) = if has_x {
                                    (IntMatrix::from_rows(&[vec![alpha]]), vec![ox])
                                } else {
                                    (IntMatrix::zeros(1, 0), vec![])
                                };
                                let (g, oc) = if has_z {
                                    (IntMatrix::from_rows(&[vec![beta]]), vec![oz])
                                } else {
                                    (IntMatrix::zeros(0, 1), vec![])
                                };
                                let general = homology(&f, &g, &oa, &[oy], &oc);
                                let fast = path_homology(
                                    has_x.then_some((ox, alpha)),
                                    oy,
                                    has_z.then_some((oz, beta)),
                                );
                                let Ok(h) = general else { continue };
                                let fast = fast.unwrap();
                                match (h.as_slice(), fast) {
                                    ([], None) => {}
                                    ([c], Some((o, v))) => {
                                        assert_eq!(c.order, o);
                                        assert_eq!(c.vector[0].trailing_zeros(), v);
                                    }
                                    other => panic!("{ox:?} {oy:?} {oz:?} {alpha} {beta}: {other:?}"),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
