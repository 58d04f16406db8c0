//! Integer chains, the cellular boundaries of `P_n`, `B_n` and `I^n`, Koszul tensor
//! products and homology by Smith normal form.
//!
//! Orientation: `∂(12) = 1|2 − 2|1`. A block `S` splits as `U|V` with coefficient
//! `(−1)^{#U+1} shuff(U;V)`, and the split of the `i`-th block carries the Koszul
//! factor `(−1)^{Σ_{j<i}(#A_j−1)}`. On `B_n` deleting the head coordinate of rank
//! `r` costs `(−1)^r`, a head split `A]M` costs `(−1)^{#A+1} shuff(A;M)`, and tail
//! splits carry an extra `(−1)^{#C_0−1}`. On cubes `∂ = Σ_i (−1)^{i+1}(d⁰_i − d¹_i)`.

use crate::permutocube::{CubeFace, PcubeFace};
use crate::setcalc::{parity, shuffle_sign_unchecked, splits, OrderedPartition, Set};
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

/// Coefficient ring. Signs are always computed over ℤ and reduced afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Z2,
}

/// A finitely supported integer combination of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for Chain<K> {
    fn default() -> Self {
        Chain { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Chain<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: i64) -> Self {
        let mut ch = Self::new();
        ch.add(k, c);
        ch
    }

    pub fn add(&mut self, k: K, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn add_chain(&mut self, other: &Chain<K>, scale: i64) {
        for (k, &c) in &other.terms {
            self.add(k.clone(), c * scale);
        }
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: i64) -> Chain<K> {
        let mut out = Chain::new();
        out.add_chain(self, s);
        out
    }

    /// Reduce coefficients into the ring; over ℤ₂ every surviving coefficient is 1.
    pub fn reduce(&self, ring: Ring) -> Chain<K> {
        match ring {
            Ring::Z => self.clone(),
            Ring::Z2 => Chain { terms: self.terms.iter().filter(|(_, &c)| c % 2 != 0).map(|(k, _)| (k.clone(), 1)).collect() },
        }
    }

    /// Largest absolute coefficient, 0 for the zero chain.
    pub fn max_norm(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Apply a linear map given on basis elements.
    pub fn map<L: Ord + Clone>(&self, f: impl Fn(&K) -> Chain<L>) -> Chain<L> {
        let mut out = Chain::new();
        for (k, &c) in &self.terms {
            out.add_chain(&f(k), c);
        }
        out
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for Chain<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(it: I) -> Self {
        let mut ch = Chain::new();
        for (k, c) in it {
            ch.add(k, c);
        }
        ch
    }
}

impl<K: Ord + Clone + Display> Chain<K> {
    /// `{degree, terms: [{cell, coeff}]}`.
    pub fn to_json(&self, degree: i64) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(k, c)| json!({"cell": k.to_string(), "coeff": c})).collect();
        json!({"degree": degree, "terms": terms})
    }
}

/// Read a chain written as `{degree, terms: [{cell, coeff}]}`.
pub fn chain_from_json<K: Ord + Clone>(v: &Value, parse: impl Fn(&str) -> Result<K>) -> Result<(i64, Chain<K>)> {
    let degree = v["degree"].as_i64().ok_or_else(|| Error::Parse("chain needs an integer degree".into()))?;
    let mut ch = Chain::new();
    for t in v["terms"].as_array().ok_or_else(|| Error::Parse("chain needs a terms array".into()))? {
        let cell = t["cell"].as_str().ok_or_else(|| Error::Parse("term needs a cell string".into()))?;
        let c = t["coeff"].as_i64().ok_or_else(|| Error::Parse("term needs an integer coeff".into()))?;
        ch.add(parse(cell)?, c);
    }
    Ok((degree, ch))
}

/// Coefficients of `∂` on a single block `S`: `U|V ↦ (−1)^{#U+1} shuff(U;V)`.
pub fn block_boundary(block: Set) -> impl Iterator<Item = (Set, Set, i64)> {
    splits(block).map(|(u, v)| (u, v, -(parity(u.len()) as i64) * shuffle_sign_unchecked(u, v) as i64))
}

/// Cellular boundary of a face of `P_n`.
pub fn boundary_perm(f: &OrderedPartition) -> Chain<OrderedPartition> {
    let mut out = Chain::new();
    let blocks = f.blocks();
    let mut pre = 0;
    let drop_koszul = crate::mutation::active(crate::mutation::Mutation::BoundaryKoszul);
    for (i, &a) in blocks.iter().enumerate() {
        let koszul = if drop_koszul { 1 } else { parity(pre) as i64 };
        for (u, v, c) in block_boundary(a) {
            let mut nb = blocks[..i].to_vec();
            nb.push(u);
            nb.push(v);
            nb.extend(&blocks[i + 1..]);
            out.add(OrderedPartition::with_ground(nb, f.ground()).unwrap(), c * koszul);
        }
        pre += a.len() - 1;
    }
    out
}

/// Cellular boundary of a face of `B_n`.
pub fn boundary_pcube(f: &PcubeFace) -> Chain<PcubeFace> {
    let mut out = Chain::new();
    let coords = f.head_coords();
    for (r, x) in coords.iter().enumerate() {
        let g = PcubeFace { n: f.n, deleted: f.deleted.with(x), head: f.head.without(x), tail: f.tail.clone() };
        out.add(g, parity(r + 1) as i64);
    }
    for m in crate::setcalc::nonempty_subsets(coords) {
        let a = f.head - m;
        let mut tail = vec![m];
        tail.extend(&f.tail);
        let c = -(parity(a.len()) as i64) * shuffle_sign_unchecked(a, m) as i64;
        out.add(PcubeFace { n: f.n, deleted: f.deleted, head: a, tail }, c);
    }
    let mut pre = f.head.len() - 1;
    for (i, &b) in f.tail.iter().enumerate() {
        let koszul = parity(pre) as i64;
        for (u, v, c) in block_boundary(b) {
            let mut tail = f.tail[..i].to_vec();
            tail.push(u);
            tail.push(v);
            tail.extend(&f.tail[i + 1..]);
            out.add(PcubeFace { n: f.n, deleted: f.deleted, head: f.head, tail }, c * koszul);
        }
        pre += b.len() - 1;
    }
    out
}

/// Cellular boundary of a face of `I^n`.
pub fn boundary_cube(c: &CubeFace) -> Chain<CubeFace> {
    let mut out = Chain::new();
    for i in 1..=c.dim() {
        let s = parity(i + 1) as i64;
        out.add(c.face(i, 0).unwrap(), s);
        out.add(c.face(i, 1).unwrap(), -s);
    }
    out
}

/// A finite graded cell complex presented by cells and a boundary.
pub trait CellComplex {
    type Cell: Ord + Clone;
    fn cells(&self, degree: usize) -> Vec<Self::Cell>;
    fn boundary(&self, cell: &Self::Cell) -> Chain<Self::Cell>;
}

pub struct PermComplex(pub u32);
pub struct PcubeComplex(pub u32);
pub struct CubeComplex(pub usize);

impl CellComplex for PermComplex {
    type Cell = OrderedPartition;
    fn cells(&self, d: usize) -> Vec<OrderedPartition> {
        crate::permutahedron::faces(self.0, Some(d))
    }
    fn boundary(&self, c: &OrderedPartition) -> Chain<OrderedPartition> {
        boundary_perm(c)
    }
}

impl CellComplex for PcubeComplex {
    type Cell = PcubeFace;
    fn cells(&self, d: usize) -> Vec<PcubeFace> {
        crate::permutocube::faces_b(self.0, Some(d))
    }
    fn boundary(&self, c: &PcubeFace) -> Chain<PcubeFace> {
        boundary_pcube(c)
    }
}

impl CellComplex for CubeComplex {
    type Cell = CubeFace;
    fn cells(&self, d: usize) -> Vec<CubeFace> {
        CubeFace::all(self.0, Some(d))
    }
    fn boundary(&self, c: &CubeFace) -> Chain<CubeFace> {
        boundary_cube(c)
    }
}

/// The tensor product of two complexes, `∂(a⊗b) = ∂a⊗b + (−1)^{|a|} a⊗∂b`.
pub struct TensorComplex<'a, C: CellComplex, D: CellComplex> {
    pub left: &'a C,
    pub right: &'a D,
    pub left_degree: fn(&C::Cell) -> usize,
}

impl<C: CellComplex, D: CellComplex> CellComplex for TensorComplex<'_, C, D> {
    type Cell = (C::Cell, D::Cell);
    fn cells(&self, d: usize) -> Vec<Self::Cell> {
        let mut out = Vec::new();
        for p in 0..=d {
            for a in self.left.cells(p) {
                for b in self.right.cells(d - p) {
                    out.push((a.clone(), b));
                }
            }
        }
        out
    }
    fn boundary(&self, (a, b): &Self::Cell) -> Chain<Self::Cell> {
        tensor_boundary(&Chain::single((a.clone(), b.clone()), 1), |x| self.left.boundary(x), |y| self.right.boundary(y), self.left_degree)
    }
}

/// `(∂⊗1 + 1⊗∂)` on a chain of pairs.
pub fn tensor_boundary<K: Ord + Clone, L: Ord + Clone>(
    chain: &Chain<(K, L)>,
    bk: impl Fn(&K) -> Chain<K>,
    bl: impl Fn(&L) -> Chain<L>,
    dim_k: impl Fn(&K) -> usize,
) -> Chain<(K, L)> {
    let mut out = Chain::new();
    for ((a, b), c) in chain.iter() {
        for (a2, c2) in bk(a).iter() {
            out.add((a2.clone(), b.clone()), c * c2);
        }
        let s = parity(dim_k(a)) as i64;
        for (b2, c2) in bl(b).iter() {
            out.add((a.clone(), b2.clone()), c * c2 * s);
        }
    }
    out
}

/// `∂F(x) − F(∂x)` for one source cell.
pub fn chain_map_residual<K: Ord + Clone, L: Ord + Clone>(
    x: &K,
    f: impl Fn(&K) -> Chain<L>,
    bd_source: impl Fn(&K) -> Chain<K>,
    bd_target: impl Fn(&Chain<L>) -> Chain<L>,
) -> Chain<L> {
    let mut res = bd_target(&f(x));
    res.add_chain(&bd_source(x).map(&f), -1);
    res
}

/// Check a linear map on every cell in the given list; returns the largest
/// residual norm and the first offending cell.
pub fn is_chain_map<K: Ord + Clone, L: Ord + Clone>(
    cells: &[K],
    f: impl Fn(&K) -> Chain<L>,
    bd_source: impl Fn(&K) -> Chain<K>,
    bd_target: impl Fn(&Chain<L>) -> Chain<L>,
) -> (i64, Option<K>) {
    let mut worst = 0;
    let mut first = None;
    for x in cells {
        let r = chain_map_residual(x, &f, &bd_source, &bd_target).max_norm();
        if r > 0 && first.is_none() {
            first = Some(x.clone());
        }
        worst = worst.max(r);
    }
    (worst, first)
}

/// First cell (in degrees `1..=max_degree`) with `∂∂ ≠ 0`, if any.
pub fn check_d2<C: CellComplex>(c: &C, max_degree: usize) -> Option<(C::Cell, Chain<C::Cell>)> {
    for d in 2..=max_degree {
        for x in c.cells(d) {
            let dd = c.boundary(&x).map(|y| c.boundary(y));
            if !dd.is_zero() {
                return Some((x, dd));
            }
        }
    }
    None
}

/// Orientation signs of a cellular map given on cells. Cells are listed by degree;
/// `image` returns `None` for cells that collapse. Vertices map with sign `+1`,
/// and each higher cell gets the unique sign making `f_*∂ = ∂f_*` on it. Fails
/// when no sign works.
pub fn cellular_pushforward<K: Ord + Clone + std::fmt::Debug, L: Ord + Clone>(
    cells_by_degree: &[Vec<K>],
    image: impl Fn(&K) -> Option<L>,
    bd_source: impl Fn(&K) -> Chain<K>,
    bd_target: impl Fn(&L) -> Chain<L>,
) -> Result<BTreeMap<K, (L, i64)>> {
    let mut map: BTreeMap<K, (L, i64)> = BTreeMap::new();
    for (d, cells) in cells_by_degree.iter().enumerate() {
        for e in cells {
            let Some(g) = image(e) else { continue };
            if d == 0 {
                map.insert(e.clone(), (g, 1));
                continue;
            }
            let pushed = push_chain(&map, &bd_source(e));
            let bg = bd_target(&g);
            let sign = if pushed == bg {
                1
            } else if pushed == bg.scaled(-1) {
                -1
            } else {
                return Err(Error::Verification(format!("no orientation for the image of {e:?}")));
            };
            map.insert(e.clone(), (g, sign));
        }
    }
    Ok(map)
}

/// Apply a pushforward table to a chain; cells missing from the table collapse.
pub fn push_chain<K: Ord + Clone, L: Ord + Clone>(map: &BTreeMap<K, (L, i64)>, ch: &Chain<K>) -> Chain<L> {
    let mut out = Chain::new();
    for (k, c) in ch.iter() {
        if let Some((g, s)) = map.get(k) {
            out.add(g.clone(), c * s);
        }
    }
    out
}

/// Homology in one degree: free rank and torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Rank and non-unit elementary divisors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub rank: usize,
    pub divisors: Vec<u64>,
}

/// A sparse matrix given by rows of `(column, value)` pairs.
pub type SparseRows = Vec<BTreeMap<usize, i128>>;

/// Smith normal form by exact elimination: unit pivots are removed sparsely, the
/// remaining block is reduced densely. Over ℤ₂ everything is reduced mod 2.
pub fn smith_normal_form(mut rows: SparseRows, ncols: usize, ring: Ring) -> Snf {
    let modulus = |x: i128| if ring == Ring::Z2 { x.rem_euclid(2) } else { x };
    for r in rows.iter_mut() {
        r.retain(|_, v| {
            *v = modulus(*v);
            *v != 0
        });
    }
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            cols[j].insert(i);
        }
    }
    let mut alive: BTreeSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut rank = 0;
    loop {
        // a unit entry in the sparsest live row
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in &alive {
            let len = rows[i].len();
            if best.map_or(false, |b| b.0 <= len) {
                continue;
            }
            if let Some((&j, _)) = rows[i].iter().find(|(_, v)| v.abs() == 1) {
                best = Some((len, i, j));
                if len == 1 {
                    break;
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        let pv = pivot_row[&pj];
        alive.remove(&pi);
        for &j in pivot_row.keys() {
            cols[j].remove(&pi);
        }
        let targets: Vec<usize> = cols[pj].iter().copied().collect();
        for t in targets {
            let factor = rows[t][&pj] * pv; // pv = ±1, so pv⁻¹ = pv
            for (&j, &v) in &pivot_row {
                let e = rows[t].entry(j).or_insert(0);
                *e = modulus(e.checked_sub(factor.checked_mul(v).expect("overflow")).expect("overflow"));
                if *e == 0 {
                    rows[t].remove(&j);
                    cols[j].remove(&t);
                } else {
                    cols[j].insert(t);
                }
            }
            if rows[t].is_empty() {
                alive.remove(&t);
            }
        }
        rank += 1;
    }
    // dense remainder
    let live_rows: Vec<usize> = alive.into_iter().collect();
    let live_cols: Vec<usize> = (0..ncols).filter(|&j| !cols[j].is_empty()).collect();
    if live_rows.is_empty() {
        return Snf { rank, divisors: Vec::new() };
    }
    let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let mut m = vec![vec![0i128; live_cols.len()]; live_rows.len()];
    for (a, &i) in live_rows.iter().enumerate() {
        for (&j, &v) in &rows[i] {
            m[a][col_index[&j]] = v;
        }
    }
    let divisors = dense_snf(m, ring);
    Snf { rank: rank + divisors.len(), divisors: divisors.into_iter().filter(|&d| d != 1).collect() }
}

/// Diagonal of the Smith normal form of a dense matrix (nonzero entries only).
fn dense_snf(mut m: Vec<Vec<i128>>, ring: Ring) -> Vec<u64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let md = |x: i128| if ring == Ring::Z2 { x.rem_euclid(2) } else { x };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = m[i][j].abs();
                if v != 0 && best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(p);
                    for j in t..cols {
                        m[i][j] = md(m[i][j] - q * m[t][j]);
                    }
                    if m[i][t] != 0 {
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(p);
                    for i in t..rows {
                        m[i][j] = md(m[i][j] - q * m[i][t]);
                    }
                    if m[t][j] != 0 {
                        changed = true;
                    }
                }
            }
            if !changed {
                // divisibility of the rest by the pivot
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] = md(m[t][j] + m[i][j]);
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (m[t][t].abs(), t, t);
            for i in t..rows {
                let v = m[i][t].abs();
                if v != 0 && (best.0 == 0 || v < best.0) {
                    best = (v, i, t);
                }
            }
            for j in t..cols {
                let v = m[t][j].abs();
                if v != 0 && (best.0 == 0 || v < best.0) {
                    best = (v, t, j);
                }
            }
            m.swap(t, best.1);
            for row in m.iter_mut() {
                row.swap(t, best.2);
            }
        }
        diag.push(m[t][t].unsigned_abs() as u64);
        t += 1;
    }
    diag
}

/// Boundary matrix `∂: C_d → C_{d−1}` as sparse rows indexed by the cells of `C_d`.
pub fn boundary_rows<C: CellComplex>(c: &C, d: usize) -> (SparseRows, usize) {
    let targets = if d == 0 { Vec::new() } else { c.cells(d - 1) };
    let index: BTreeMap<C::Cell, usize> = targets.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let rows = c
        .cells(d)
        .iter()
        .map(|x| {
            let mut r = BTreeMap::new();
            if d > 0 {
                for (y, v) in c.boundary(x).iter() {
                    let j = *index.get(y).expect("boundary leaves the complex");
                    *r.entry(j).or_insert(0) += v as i128;
                }
            }
            r
        })
        .collect();
    (rows, targets.len())
}

/// Homology in degrees `0..=max_degree`.
pub fn homology<C: CellComplex>(c: &C, max_degree: usize, ring: Ring) -> Vec<HomologyGroup> {
    let mut snfs = Vec::new();
    let mut sizes = Vec::new();
    for d in 0..=max_degree + 1 {
        let (rows, ncols) = boundary_rows(c, d);
        sizes.push(rows.len());
        snfs.push(smith_normal_form(rows, ncols, ring));
    }
    (0..=max_degree)
        .map(|d| {
            let kernel = sizes[d] - snfs[d].rank;
            HomologyGroup { betti: kernel - snfs[d + 1].rank, torsion: snfs[d + 1].divisors.clone() }
        })
        .collect()
}

/// Sparse triplet export `row col value` of `∂: C_d → C_{d−1}`, one entry per line.
pub fn boundary_triplets<C: CellComplex>(c: &C, d: usize) -> String {
    let (rows, ncols) = boundary_rows(c, d);
    let mut out = format!("% {} {}\n", rows.len(), ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r {
            if *v != 0 {
                out.push_str(&format!("{i} {j} {v}\n"));
            }
        }
    }
    out
}

/// A cochain complex with finitely many cells per degree; `coboundary` raises degree.
pub trait CochainComplex {
    type Cell: Ord + Clone;
    fn cells(&self, deg: usize) -> Vec<Self::Cell>;
    fn coboundary(&self, cell: &Self::Cell) -> Chain<Self::Cell>;
}

/// `H^k` for `k ≤ max_degree`, from the Smith normal forms of `d: K^k → K^{k+1}`.
pub fn cohomology<C: CochainComplex>(c: &C, max_degree: usize, ring: Ring) -> Vec<HomologyGroup> {
    let mut snfs = Vec::new();
    let mut sizes = Vec::new();
    for d in 0..=max_degree {
        let targets = c.cells(d + 1);
        let index: BTreeMap<C::Cell, usize> = targets.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let rows: SparseRows = c
            .cells(d)
            .iter()
            .map(|x| {
                let mut r = BTreeMap::new();
                for (y, v) in c.coboundary(x).iter() {
                    let j = *index.get(y).expect("coboundary leaves the complex");
                    *r.entry(j).or_insert(0) += v as i128;
                }
                r
            })
            .collect();
        sizes.push(rows.len());
        snfs.push(smith_normal_form(rows, targets.len(), ring));
    }
    (0..=max_degree)
        .map(|d| {
            let below = if d == 0 { 0 } else { snfs[d - 1].rank };
            let torsion = if d == 0 { Vec::new() } else { snfs[d - 1].divisors.clone() };
            HomologyGroup { betti: sizes[d] - snfs[d].rank - below, torsion }
        })
        .collect()
}
