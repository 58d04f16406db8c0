//! Finite 1-reduced cubical sets, the monoidal permutahedral set `ΩQ`, truncating
//! twisting functions and twisted Cartesian products `Q ×_θ L`.
//!
//! A cell of `Q` is stored as a nondegenerate core together with the positions of
//! its degenerate ("dummy") coordinates, so `η_J(x)` is exact and faces of
//! degenerate cells follow from the cubical identities. Everything is bounded by an
//! explicit degree cap.

use crate::chains::{boundary_perm, CellComplex, Chain};
use crate::diagonals::serre_shuffles;
use crate::setcalc::{nonempty_subsets, parity, shuffle_sign_unchecked, splits, OrderedPartition, Set};
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// `η_J(x)`: the nondegenerate core `x` with dummy coordinates `J ⊆ 1..dim`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QCell {
    pub dim: u32,
    pub core: Arc<str>,
    pub dummies: Set,
}

impl QCell {
    pub fn is_degenerate(&self) -> bool {
        !self.dummies.is_empty()
    }
}

impl fmt::Display for QCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dummies.is_empty() {
            write!(f, "{}", self.core)
        } else {
            let j: Vec<String> = self.dummies.iter().map(|x| x.to_string()).collect();
            write!(f, "η{}({})", j.join(","), self.core)
        }
    }
}

impl fmt::Debug for QCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shift positions of `s` above `i` down by one, dropping `i` itself.
fn drop_position(s: Set, i: u32) -> Set {
    s.iter().filter(|&x| x != i).map(|x| if x > i { x - 1 } else { x }).fold(Set::EMPTY, |a, x| a.with(x))
}

/// Shift positions of `s` at or above `j` up by one.
fn open_position(s: Set, j: u32) -> Set {
    s.iter().map(|x| if x >= j { x + 1 } else { x }).fold(Set::EMPTY, |a, x| a.with(x))
}

/// A finite cubical set presented by its nondegenerate cells and face tables.
#[derive(Clone, Debug)]
pub struct CubicalSet {
    dims: BTreeMap<Arc<str>, u32>,
    d0: HashMap<Arc<str>, Vec<QCell>>,
    d1: HashMap<Arc<str>, Vec<QCell>>,
    order: Vec<Arc<str>>,
}

impl CubicalSet {
    /// Build from nondegenerate cells `(name, dim)` and face tables. Face entries
    /// are cells of dimension one less.
    pub fn new(cells: Vec<(String, u32)>, d0: HashMap<String, Vec<QCell>>, d1: HashMap<String, Vec<QCell>>) -> Result<CubicalSet> {
        let mut dims = BTreeMap::new();
        let mut order = Vec::new();
        for (name, d) in cells {
            let key: Arc<str> = name.as_str().into();
            if dims.insert(key.clone(), d).is_some() {
                return Err(Error::Invalid(format!("cell {name} listed twice")));
            }
            order.push(key);
        }
        order.sort_by_key(|k| (dims[k], k.clone()));
        let mut q = CubicalSet { dims, d0: HashMap::new(), d1: HashMap::new(), order };
        for (table, target) in [(d0, 0), (d1, 1)] {
            for (name, faces) in table {
                let d = *q.dims.get(name.as_str()).ok_or_else(|| Error::Invalid(format!("face table names unknown cell {name}")))?;
                if faces.len() != d as usize || faces.iter().any(|f| f.dim + 1 != d) {
                    return Err(Error::Invalid(format!("faces of {name} must be {d} cells of dimension {}", d.saturating_sub(1))));
                }
                let key: Arc<str> = name.as_str().into();
                if target == 0 {
                    q.d0.insert(key, faces);
                } else {
                    q.d1.insert(key, faces);
                }
            }
        }
        for (k, &d) in &q.dims {
            if d > 0 && (!q.d0.contains_key(k) || !q.d1.contains_key(k)) {
                return Err(Error::Invalid(format!("cell {k} is missing a face table")));
            }
        }
        Ok(q)
    }

    pub fn vertex(&self) -> QCell {
        let v = self.order.iter().find(|k| self.dims[*k] == 0).expect("a 0-cell");
        self.cell(v).unwrap()
    }

    /// The nondegenerate cell of this name.
    pub fn cell(&self, name: &str) -> Result<QCell> {
        let (k, &d) = self.dims.get_key_value(name).ok_or_else(|| Error::Invalid(format!("unknown cell {name}")))?;
        Ok(QCell { dim: d, core: k.clone(), dummies: Set::EMPTY })
    }

    /// The degenerate 1-cell `η_1(*)`.
    pub fn unit_cell(&self) -> QCell {
        self.degeneracy(&self.vertex(), 1)
    }

    pub fn nondegenerate(&self, dim: u32) -> Vec<QCell> {
        self.order.iter().filter(|k| self.dims[*k] == dim).map(|k| self.cell(k).unwrap()).collect()
    }

    pub fn max_dim(&self) -> u32 {
        self.dims.values().copied().max().unwrap_or(0)
    }

    /// Exactly one 0-cell and no nondegenerate 1-cells.
    pub fn is_one_reduced(&self) -> bool {
        self.nondegenerate(0).len() == 1 && self.nondegenerate(1).is_empty()
    }

    /// `d^ε_i`.
    pub fn face(&self, c: &QCell, i: u32, eps: u8) -> QCell {
        assert!(i >= 1 && i <= c.dim, "face index {i} out of range for {c}");
        if c.dummies.contains(i) {
            return QCell { dim: c.dim - 1, core: c.core.clone(), dummies: drop_position(c.dummies, i) };
        }
        let live: Vec<u32> = (1..=c.dim).filter(|x| !c.dummies.contains(*x)).collect();
        let r = live.iter().position(|&x| x == i).unwrap();
        let table = if eps == 0 { &self.d0 } else { &self.d1 };
        let f = &table[&c.core][r];
        // live coordinates of c other than i, renumbered after dropping i
        let rest: Vec<u32> = live.iter().filter(|&&x| x != i).map(|&x| if x > i { x - 1 } else { x }).collect();
        let mut dummies = drop_position(c.dummies, i);
        for k in f.dummies.iter() {
            dummies.insert(rest[k as usize - 1]);
        }
        QCell { dim: c.dim - 1, core: f.core.clone(), dummies }
    }

    /// `d^ε_S`, removing every coordinate in `S`.
    pub fn face_multi(&self, c: &QCell, s: Set, eps: u8) -> QCell {
        let mut out = c.clone();
        for i in s.to_vec().into_iter().rev() {
            out = self.face(&out, i, eps);
        }
        out
    }

    /// `η_j`, inserting a dummy coordinate at position `j`.
    pub fn degeneracy(&self, c: &QCell, j: u32) -> QCell {
        assert!(j >= 1 && j <= c.dim + 1);
        QCell { dim: c.dim + 1, core: c.core.clone(), dummies: open_position(c.dummies, j).with(j) }
    }

    /// Check `d^ε_i d^ω_j = d^ω_{j−1} d^ε_i` for `i < j` on every nondegenerate cell,
    /// and `d^ε_i d^ω_i`-compatibility of the tables' dimensions.
    pub fn check_identities(&self) -> Result<()> {
        for k in &self.order {
            let c = self.cell(k)?;
            for j in 2..=c.dim {
                for i in 1..j {
                    for e in 0..2u8 {
                        for w in 0..2u8 {
                            let lhs = self.face(&self.face(&c, j, w), i, e);
                            let rhs = self.face(&self.face(&c, i, e), j - 1, w);
                            if lhs != rhs {
                                return Err(Error::Verification(format!(
                                    "d{e}_{i} d{w}_{j}({c}) = {lhs} but d{w}_{} d{e}_{i}({c}) = {rhs}",
                                    j - 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized cellular boundary `Σ (−1)^{i+1}(d⁰_i − d¹_i)`; degenerate faces vanish.
    pub fn boundary(&self, c: &QCell) -> Chain<QCell> {
        let mut out = Chain::new();
        if c.is_degenerate() {
            return out;
        }
        for i in 1..=c.dim {
            let s = parity(i as usize + 1) as i64;
            for (eps, sign) in [(0u8, s), (1u8, -s)] {
                let f = self.face(c, i, eps);
                if !f.is_degenerate() {
                    out.add(f, sign);
                }
            }
        }
        out
    }

    /// Normalized Serre diagonal `Σ shuff(A;B) d⁰_B c ⊗ d¹_A c`.
    pub fn serre(&self, c: &QCell) -> Chain<(QCell, QCell)> {
        let mut out = Chain::new();
        for (a, b, s) in serre_shuffles(c.dim as usize) {
            let l = self.face_multi(c, b, 0);
            let r = self.face_multi(c, a, 1);
            if !l.is_degenerate() && !r.is_degenerate() {
                out.add((l, r), s);
            }
        }
        out
    }

    /// `{cells: {degree: [names]}, d0: {name: [faces]}, d1: …, eta: {name: {base, at}}}`.
    pub fn from_json(v: &Value) -> Result<CubicalSet> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut cells = Vec::new();
        for (deg, names) in v["cells"].as_object().ok_or_else(|| bad("cells must be an object"))? {
            let d: u32 = deg.parse().map_err(|_| bad("cell degrees must be integers"))?;
            for n in names.as_array().ok_or_else(|| bad("cell lists must be arrays"))? {
                cells.push((n.as_str().ok_or_else(|| bad("cell names must be strings"))?.to_string(), d));
            }
        }
        let dims: HashMap<String, u32> = cells.iter().cloned().collect();
        let mut named: HashMap<String, QCell> = HashMap::new();
        for (n, &d) in &dims {
            named.insert(n.clone(), QCell { dim: d, core: n.as_str().into(), dummies: Set::EMPTY });
        }
        if let Some(eta) = v.get("eta").and_then(|e| e.as_object()) {
            for (name, entry) in eta {
                let base = entry["base"].as_str().ok_or_else(|| bad("eta entries need a base"))?;
                let mut c = named.get(base).cloned().ok_or_else(|| bad(&format!("eta base {base} unknown")))?;
                let at = entry["at"].as_array().ok_or_else(|| bad("eta entries need positions"))?;
                for j in at {
                    let j = j.as_u64().ok_or_else(|| bad("eta positions are integers"))? as u32;
                    if j == 0 || j > c.dim + 1 {
                        return Err(bad(&format!("eta position {j} out of range")));
                    }
                    c = QCell { dim: c.dim + 1, core: c.core.clone(), dummies: open_position(c.dummies, j).with(j) };
                }
                named.insert(name.clone(), c);
            }
        }
        let table = |key: &str| -> Result<HashMap<String, Vec<QCell>>> {
            let mut out = HashMap::new();
            for (name, faces) in v[key].as_object().ok_or_else(|| bad(&format!("{key} must be an object")))? {
                let faces = faces
                    .as_array()
                    .ok_or_else(|| bad("face lists must be arrays"))?
                    .iter()
                    .map(|f| {
                        let s = f.as_str().ok_or_else(|| bad("faces are cell names"))?;
                        named.get(s).cloned().ok_or_else(|| bad(&format!("unknown face {s}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.insert(name.clone(), faces);
            }
            Ok(out)
        };
        CubicalSet::new(cells, table("d0")?, table("d1")?)
    }

    pub fn to_json(&self) -> Value {
        let mut cells: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for k in &self.order {
            cells.entry(self.dims[k].to_string()).or_default().push(k.to_string());
        }
        let mut eta = serde_json::Map::new();
        let mut name_of = |c: &QCell| -> String {
            if !c.is_degenerate() {
                return c.core.to_string();
            }
            let s = c.to_string();
            eta.insert(s.clone(), json!({"base": c.core.to_string(), "at": c.dummies.to_vec()}));
            s
        };
        let mut d0 = serde_json::Map::new();
        let mut d1 = serde_json::Map::new();
        for k in &self.order {
            if let Some(f) = self.d0.get(k) {
                d0.insert(k.to_string(), json!(f.iter().map(&mut name_of).collect::<Vec<_>>()));
                d1.insert(k.to_string(), json!(self.d1[k].iter().map(&mut name_of).collect::<Vec<_>>()));
            }
        }
        json!({"cells": cells, "d0": d0, "d1": d1, "eta": eta})
    }

    /// The cube `I^n` with its 1-skeleton collapsed to a point: one cell per face of
    /// dimension at least 2 plus the vertex.
    pub fn collapsed_cube(n: usize) -> CubicalSet {
        use crate::permutocube::CubeFace;
        let name = |c: &CubeFace| c.to_string();
        let mut cells = vec![("*".to_string(), 0)];
        let (mut d0, mut d1) = (HashMap::new(), HashMap::new());
        let point = QCell { dim: 0, core: "*".into(), dummies: Set::EMPTY };
        let edge = QCell { dim: 1, core: "*".into(), dummies: Set::singleton(1) };
        for d in 2..=n {
            for c in CubeFace::all(n, Some(d)) {
                cells.push((name(&c), d as u32));
                for (eps, table) in [(0u8, &mut d0), (1u8, &mut d1)] {
                    let faces = (1..=d)
                        .map(|i| {
                            let f = c.face(i, eps).unwrap();
                            if d - 1 >= 2 {
                                QCell { dim: d as u32 - 1, core: name(&f).as_str().into(), dummies: Set::EMPTY }
                            } else {
                                edge.clone()
                            }
                        })
                        .collect();
                    table.insert(name(&c), faces);
                }
            }
        }
        let _ = point;
        CubicalSet::new(cells, d0, d1).expect("collapsed cube is well formed")
    }

    /// One 2-cell `x` and one 3-cell `y` with `d⁰_1 y = d¹_1 y = x`; the other faces
    /// of `y` are degenerate.
    pub fn synthetic23() -> CubicalSet {
        let x = QCell { dim: 2, core: "x".into(), dummies: Set::EMPTY };
        let e = QCell { dim: 1, core: "*".into(), dummies: Set::singleton(1) };
        let ee = QCell { dim: 2, core: "*".into(), dummies: Set::from_elems([1, 2]) };
        let cells = vec![("*".to_string(), 0), ("x".to_string(), 2), ("y".to_string(), 3)];
        let d0 = HashMap::from([("x".to_string(), vec![e.clone(), e.clone()]), ("y".to_string(), vec![x.clone(), ee.clone(), ee.clone()])]);
        let d1 = HashMap::from([("x".to_string(), vec![e.clone(), e]), ("y".to_string(), vec![x, ee.clone(), ee])]);
        CubicalSet::new(cells, d0, d1).unwrap()
    }

    /// One cell `c_k` in each dimension `2..=n`, every face of `c_k` equal to
    /// `c_{k−1}` (the faces of `c_2` are the degenerate 1-cell).
    pub fn tower(n: u32) -> CubicalSet {
        let name = |k: u32| format!("c{k}");
        let mut cells = vec![("*".to_string(), 0)];
        let (mut d0, mut d1) = (HashMap::new(), HashMap::new());
        for k in 2..=n {
            cells.push((name(k), k));
            let f = if k == 2 {
                QCell { dim: 1, core: "*".into(), dummies: Set::singleton(1) }
            } else {
                QCell { dim: k - 1, core: name(k - 1).as_str().into(), dummies: Set::EMPTY }
            };
            d0.insert(name(k), vec![f.clone(); k as usize]);
            d1.insert(name(k), vec![f; k as usize]);
        }
        CubicalSet::new(cells, d0, d1).unwrap()
    }

    /// Built-in fixtures: `cube2`, `cube3`, `cube4`, `synthetic23`, `tower<n>`.
    pub fn fixture(name: &str) -> Result<CubicalSet> {
        match name {
            "cube2" => Ok(Self::collapsed_cube(2)),
            "cube3" => Ok(Self::collapsed_cube(3)),
            "cube4" => Ok(Self::collapsed_cube(4)),
            "synthetic23" => Ok(Self::synthetic23()),
            t if t.starts_with("tower") => match t[5..].parse::<u32>() {
                Ok(n) if (2..=12).contains(&n) => Ok(Self::tower(n)),
                _ => Err(Error::Invalid(format!("unknown fixture {name}"))),
            },
            _ => Err(Error::Invalid(format!("unknown fixture {name}"))),
        }
    }
}

/// A word `ā_1⋯ā_k` in `ΩQ`. Raw words may contain units (1-cells) and degenerate
/// factors; [`OmegaWord::normal_form`] picks the canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaWord(pub Vec<QCell>);

impl OmegaWord {
    pub fn unit() -> OmegaWord {
        OmegaWord(Vec::new())
    }

    pub fn generator(c: QCell) -> OmegaWord {
        OmegaWord(vec![c])
    }

    /// `Σ (dim a_i − 1)`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|c| c.dim as usize - 1).sum()
    }

    pub fn mul(&self, other: &OmegaWord) -> OmegaWord {
        OmegaWord([self.0.as_slice(), &other.0].concat())
    }

    /// Positions `i` where `ā_i` is degenerate in its last coordinate and has a
    /// right neighbour, so `η_last(a)·b ∼ a·η_1(b)` applies.
    pub fn rewrite_positions(&self) -> Vec<usize> {
        (0..self.0.len().saturating_sub(1)).filter(|&i| self.0[i].dummies.contains(self.0[i].dim)).collect()
    }

    /// Move the trailing degeneracy of factor `i` onto factor `i+1`.
    pub fn rewrite_at(&self, i: usize) -> OmegaWord {
        let mut f = self.0.clone();
        let a = &f[i];
        f[i] = QCell { dim: a.dim - 1, core: a.core.clone(), dummies: a.dummies.without(a.dim) };
        let b = &f[i + 1];
        f[i + 1] = QCell { dim: b.dim + 1, core: b.core.clone(), dummies: open_position(b.dummies, 1).with(1) };
        OmegaWord(f)
    }

    fn drop_units(&self) -> OmegaWord {
        OmegaWord(self.0.iter().filter(|c| c.dim > 1).cloned().collect())
    }

    /// Units dropped, trailing degeneracies pushed right until none can move.
    pub fn normal_form(&self) -> OmegaWord {
        let mut w = self.drop_units();
        loop {
            match w.rewrite_positions().first() {
                Some(&i) => w = w.rewrite_at(i).drop_units(),
                None => return w,
            }
        }
    }

    /// Zero in normalized chains: some factor of the normal form is degenerate.
    pub fn is_degenerate(&self) -> bool {
        self.normal_form().0.iter().any(|c| c.is_degenerate())
    }

    /// The block shape `underline{m_1}|⋯` of the product cell, shifted consecutively.
    pub fn shape(&self) -> OrderedPartition {
        let mut start = 1;
        let blocks = self
            .0
            .iter()
            .map(|c| {
                let b = Set::range(start, start + c.dim - 1);
                start += c.dim;
                b
            })
            .collect();
        OrderedPartition::new(blocks).unwrap()
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("·"))
    }
}

impl fmt::Debug for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `ΩQ` for a 1-reduced `Q`, with face operators on generators and words.
pub struct Omega<'q> {
    pub q: &'q CubicalSet,
}

impl<'q> Omega<'q> {
    pub fn build(q: &'q CubicalSet) -> Result<Omega<'q>> {
        if !q.is_one_reduced() {
            return Err(Error::Invalid("ΩQ needs a 1-reduced cubical set".into()));
        }
        Ok(Omega { q })
    }

    /// `d_{A|B}(ā) = \overline{d⁰_B a} · \overline{d¹_A a}`.
    pub fn generator_face(&self, a: &QCell, u: Set, v: Set) -> OmegaWord {
        OmegaWord(vec![self.q.face_multi(a, v, 0), self.q.face_multi(a, u, 1)])
    }

    /// The face `U|V` of the `i`-th factor of a raw word, labels by rank in that factor.
    pub fn face(&self, w: &OmegaWord, i: usize, u: Set, v: Set) -> OmegaWord {
        let mut f = w.0[..i].to_vec();
        f.extend(self.generator_face(&w.0[i], u, v).0);
        f.extend_from_slice(&w.0[i + 1..]);
        OmegaWord(f)
    }

    /// `ϱ_{underline{n+1}∖j|j}` on a single generator (the unit counts as the 1-cell).
    pub fn degeneracy(&self, w: &OmegaWord, j: u32) -> Result<OmegaWord> {
        let c = match w.0.as_slice() {
            [] => self.q.unit_cell(),
            [c] => c.clone(),
            _ => return Err(Error::Invalid("degeneracies are defined here on generators only".into())),
        };
        Ok(OmegaWord::generator(self.q.degeneracy(&c, j)))
    }

    /// Nondegenerate generators: cells of dimension at least 2.
    pub fn generators(&self) -> Vec<QCell> {
        (2..=self.q.max_dim()).flat_map(|d| self.q.nondegenerate(d)).collect()
    }

    /// Words of nondegenerate generators of total degree `deg`.
    pub fn basis(&self, deg: usize) -> Vec<OmegaWord> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        words_of_degree(&gens, deg, &mut cur, &mut out);
        out.sort();
        out
    }

    /// The cellular boundary of a basis word: each split `U|V` of a block of its
    /// shape, signed as in `∂` of the product face, acting on that factor.
    pub fn boundary(&self, w: &OmegaWord) -> Chain<OmegaWord> {
        let shape = w.shape();
        let mut out = Chain::new();
        for (g, c) in boundary_perm(&shape).iter() {
            // locate the split block
            let blocks = g.blocks();
            let i = (0..shape.len()).find(|&i| blocks[i] != shape.blocks()[i]).unwrap();
            let s = shape.blocks()[i];
            let rank = |x: Set| x.map(|y| s.rank(y) as u32);
            let term = self.face(w, i, rank(blocks[i]), rank(blocks[i + 1])).normal_form();
            if !term.0.iter().any(|c| c.is_degenerate()) {
                out.add(term, c);
            }
        }
        out
    }
}

fn words_of_degree(gens: &[QCell], deg: usize, cur: &mut Vec<QCell>, out: &mut Vec<OmegaWord>) {
    if deg == 0 {
        out.push(OmegaWord(cur.clone()));
        return;
    }
    for g in gens {
        let d = g.dim as usize - 1;
        if d <= deg {
            cur.push(g.clone());
            words_of_degree(gens, deg - d, cur, out);
            cur.pop();
        }
    }
}

/// The cellular chains of `ΩQ` as a complex.
pub struct OmegaComplex<'q>(pub Omega<'q>);

impl CellComplex for OmegaComplex<'_> {
    type Cell = OmegaWord;
    fn cells(&self, d: usize) -> Vec<OmegaWord> {
        self.0.basis(d)
    }
    fn boundary(&self, w: &OmegaWord) -> Chain<OmegaWord> {
        self.0.boundary(w)
    }
}

/// The cobar differential of `(C^□_*(Q), ∂, Δ)` on `[c_1|⋯|c_k]`:
/// `d[c] = −[∂c] − Σ (−1)^{|c'|} [c'|c'']` over the reduced Serre diagonal, extended
/// as a derivation with Koszul signs `(−1)^{Σ_{j<i}(|c_j|−1)}`.
pub fn cobar_differential(q: &CubicalSet, w: &OmegaWord) -> Chain<OmegaWord> {
    let quadratic_sign = if crate::mutation::active(crate::mutation::Mutation::CobarQuadraticSign) { 1 } else { -1 };
    let mut out = Chain::new();
    let mut pre = 0usize;
    for (i, c) in w.0.iter().enumerate() {
        let koszul = parity(pre) as i64;
        let splice = |mid: Vec<QCell>| {
            let mut f = w.0[..i].to_vec();
            f.extend(mid);
            f.extend_from_slice(&w.0[i + 1..]);
            OmegaWord(f)
        };
        for (b, s) in q.boundary(c).iter() {
            if b.dim >= 2 {
                out.add(splice(vec![b.clone()]), -s * koszul);
            }
        }
        for ((l, r), s) in q.serre(c).iter() {
            if l.dim >= 2 && r.dim >= 2 {
                out.add(splice(vec![l.clone(), r.clone()]), quadratic_sign * parity(l.dim as usize) as i64 * s * koszul);
            }
        }
        pre += c.dim as usize - 1;
    }
    out
}

/// Compare the cellular boundary of `ΩQ` with the cobar differential on every basis
/// word up to `cap`. Returns the number of words checked.
pub fn verify_cobar_identity(q: &CubicalSet, cap: usize) -> Result<usize> {
    let om = Omega::build(q)?;
    let mut n = 0;
    for d in 0..=cap {
        for w in om.basis(d) {
            let a = om.boundary(&w);
            let b = cobar_differential(q, &w);
            if a != b {
                return Err(Error::Verification(format!("on {w}: cellular boundary {a:?} but cobar differential {b:?}")));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// A monoidal permutahedral set receiving a twisting function, on the elements the
/// axioms need.
pub trait MonoidalTarget {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn unit(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `d_{M_1|M_2}` on an element of `Z_n`, `M_1 ⊔ M_2 = underline{n}`.
    fn face(&self, x: &Self::Elem, m1: Set, m2: Set) -> Result<Self::Elem>;
    /// `ϱ_{underline{n+1}∖i|i}`.
    fn degeneracy(&self, x: &Self::Elem, i: u32) -> Result<Self::Elem>;
    fn normal(&self, x: &Self::Elem) -> Self::Elem;
}

impl MonoidalTarget for Omega<'_> {
    type Elem = OmegaWord;
    fn unit(&self) -> OmegaWord {
        OmegaWord::unit()
    }
    fn mul(&self, a: &OmegaWord, b: &OmegaWord) -> OmegaWord {
        a.mul(b)
    }
    fn face(&self, x: &OmegaWord, m1: Set, m2: Set) -> Result<OmegaWord> {
        match x.0.as_slice() {
            [c] => Ok(self.generator_face(c, m1, m2)),
            _ => Err(Error::Invalid("face operators are evaluated here on generators".into())),
        }
    }
    fn degeneracy(&self, x: &OmegaWord, i: u32) -> Result<OmegaWord> {
        Omega::degeneracy(self, x, i)
    }
    fn normal(&self, x: &OmegaWord) -> OmegaWord {
        x.normal_form()
    }
}

/// The free monoid `{e_k}` with every face `e_k ↦ e_{k−1}` and degeneracy
/// `e_k ↦ e_{k+1}`; `e_0` is the unit.
pub struct TrivialMonoid;

impl MonoidalTarget for TrivialMonoid {
    type Elem = u32;
    fn unit(&self) -> u32 {
        0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        a + b
    }
    fn face(&self, x: &u32, _: Set, _: Set) -> Result<u32> {
        x.checked_sub(1).ok_or_else(|| Error::Invalid("the unit has no faces".into()))
    }
    fn degeneracy(&self, x: &u32, _: u32) -> Result<u32> {
        Ok(x + 1)
    }
    fn normal(&self, x: &u32) -> u32 {
        *x
    }
}

/// `θ_U(a) = ā`.
pub fn universal_twisting(c: &QCell) -> OmegaWord {
    OmegaWord::generator(c.clone())
}

/// The constant twisting `a ↦ e_{dim a − 1}`.
pub fn trivial_twisting(c: &QCell) -> u32 {
    c.dim - 1
}

/// Check the three axioms of a truncating twisting function on every cell of `Q`
/// up to `max_dim`, degenerate cells included down to one dummy coordinate.
pub fn check_twisting<Z: MonoidalTarget>(
    q: &CubicalSet,
    z: &Z,
    theta: &dyn Fn(&QCell) -> Z::Elem,
    max_dim: u32,
) -> Result<usize> {
    let fail = |m: String| Err(Error::Verification(m));
    if z.normal(&theta(&q.unit_cell())) != z.unit() {
        return fail("θ of the 1-cell is not the unit".into());
    }
    let mut cells: Vec<QCell> = (2..=max_dim).flat_map(|d| q.nondegenerate(d)).collect();
    let nondeg = cells.clone();
    for c in &nondeg {
        for j in 1..=c.dim {
            if c.dim < max_dim {
                cells.push(q.degeneracy(c, j));
            }
        }
    }
    let mut checks = 0;
    for a in &cells {
        let n = a.dim;
        let ta = theta(a);
        for (m1, m2) in splits(Set::underline(n)) {
            let lhs = z.normal(&z.face(&ta, m1, m2)?);
            let rhs = z.normal(&z.mul(&theta(&q.face_multi(a, m2, 0)), &theta(&q.face_multi(a, m1, 1))));
            if lhs != rhs {
                return fail(format!("d_{{{m1}|{m2}}} θ({a}) = {lhs:?} but θd⁰ · θd¹ = {rhs:?}"));
            }
            checks += 1;
        }
        for i in 1..=n {
            let lhs = z.normal(&z.degeneracy(&ta, i)?);
            let rhs = z.normal(&theta(&q.degeneracy(a, i)));
            if lhs != rhs {
                return fail(format!("ϱ θ({a}) = {lhs:?} but θ η_{i}({a}) = {rhs:?}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// A fiber `L` for the twisted chain complex `C^□_*(Q) ⊗_θ C^◇_*(L)`: its normalized
/// chains and the action `θ(c)·b`.
pub trait TwistedFiber {
    type Elem: Ord + Clone + fmt::Display + fmt::Debug;
    fn cells(&self, deg: usize) -> Vec<Self::Elem>;
    fn boundary(&self, b: &Self::Elem) -> Chain<Self::Elem>;
    /// `θ(c)·b` in normalized chains; zero when degenerate.
    fn twist(&self, c: &QCell, b: &Self::Elem) -> Chain<Self::Elem>;
}

/// `L = ΩQ` with `θ = θ_U`.
pub struct OmegaFiber<'q>(pub Omega<'q>);

impl TwistedFiber for OmegaFiber<'_> {
    type Elem = OmegaWord;
    fn cells(&self, deg: usize) -> Vec<OmegaWord> {
        self.0.basis(deg)
    }
    fn boundary(&self, b: &OmegaWord) -> Chain<OmegaWord> {
        self.0.boundary(b)
    }
    fn twist(&self, c: &QCell, b: &OmegaWord) -> Chain<OmegaWord> {
        let w = universal_twisting(c).mul(b).normal_form();
        if w.0.iter().any(|x| x.is_degenerate()) {
            Chain::new()
        } else {
            Chain::single(w, 1)
        }
    }
}

/// `L = {e_k}` with the constant twisting: only `e_0` survives normalization.
pub struct TrivialFiber;

impl TwistedFiber for TrivialFiber {
    type Elem = OmegaWord;
    fn cells(&self, deg: usize) -> Vec<OmegaWord> {
        if deg == 0 {
            vec![OmegaWord::unit()]
        } else {
            Vec::new()
        }
    }
    fn boundary(&self, _: &OmegaWord) -> Chain<OmegaWord> {
        Chain::new()
    }
    fn twist(&self, c: &QCell, b: &OmegaWord) -> Chain<OmegaWord> {
        if trivial_twisting(c) == 0 {
            Chain::single(b.clone(), 1)
        } else {
            Chain::new()
        }
    }
}

/// A basis cell `(a, b)` of the twisted complex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TwistedCell<E> {
    pub base: QCell,
    pub fiber: E,
}

impl<E: fmt::Display> fmt::Display for TwistedCell<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.base, self.fiber)
    }
}

/// `C^□_*(Q) ⊗_θ C^◇_*(L)` with the differential of the cell `B_p × P_q`:
/// `Σ_i (−1)^i (d¹_i a, b) + Σ_{A]M} (−1)^{#A+1} shuff(A;M) (d⁰_M a, θ(d¹_{A∖0} a)·b)
/// + (−1)^p (a, ∂b)`.
pub struct TwistedComplex<'q, F: TwistedFiber> {
    pub q: &'q CubicalSet,
    pub fiber: F,
}

impl<F: TwistedFiber> CellComplex for TwistedComplex<'_, F> {
    type Cell = TwistedCell<F::Elem>;
    fn cells(&self, deg: usize) -> Vec<Self::Cell> {
        let mut out = Vec::new();
        for p in 0..=deg.min(self.q.max_dim() as usize) {
            if p == 1 {
                continue;
            }
            for a in self.q.nondegenerate(p as u32) {
                for b in self.fiber.cells(deg - p) {
                    out.push(TwistedCell { base: a.clone(), fiber: b });
                }
            }
        }
        out
    }

    fn boundary(&self, x: &Self::Cell) -> Chain<Self::Cell> {
        let (a, b) = (&x.base, &x.fiber);
        let p = a.dim;
        let mut out = Chain::new();
        let cell = |base: QCell, fiber: F::Elem| TwistedCell { base, fiber };
        for i in 1..=p {
            let f = self.q.face(a, i, 1);
            if !f.is_degenerate() {
                out.add(cell(f, b.clone()), parity(i as usize) as i64);
            }
        }
        for m in nonempty_subsets(Set::underline(p)) {
            let s = Set::underline(p) - m;
            let front = self.q.face_multi(a, m, 0);
            if front.is_degenerate() {
                continue;
            }
            let sign = parity(s.len()) as i64 * shuffle_sign_unchecked(s, m) as i64;
            let back = self.q.face_multi(a, s, 1);
            for (w, c) in self.fiber.twist(&back, b).iter() {
                out.add(cell(front.clone(), w.clone()), sign * c);
            }
        }
        let sp = parity(p as usize) as i64;
        for (w, c) in self.fiber.boundary(b).iter() {
            out.add(cell(a.clone(), w.clone()), sp * c);
        }
        out
    }
}

/// A set-level element `(a, w)` of `Q ×_{θ_U} ΩQ` with a raw word `w`.
pub type PqElem = (QCell, OmegaWord);

/// The cell shape `B_p × P_{m_1} × ⋯` of a raw element as a face label of `B_n`.
pub fn pq_shape(x: &PqElem) -> crate::permutocube::PcubeFace {
    let p = x.0.dim;
    let mut start = p + 1;
    let tail = x
        .1
         .0
        .iter()
        .map(|c| {
            let b = Set::range(start, start + c.dim - 1);
            start += c.dim;
            b
        })
        .collect();
    crate::permutocube::PcubeFace { n: start - 1, deleted: Set::EMPTY, head: Set::range(0, p), tail }
}

/// Facets of a raw element of `PQ = Q ×_{θ_U} ΩQ`, each labelled by the facet of its
/// cell shape: `d_i`, `d_{A]M}` and the splits of the word factors.
pub fn pq_facets(q: &CubicalSet, x: &PqElem) -> Vec<(crate::permutocube::PcubeFace, PqElem)> {
    let shape = pq_shape(x);
    let (a, w) = x;
    let p = a.dim;
    let mut out = Vec::new();
    for i in 1..=p {
        let mut g = shape.clone();
        g.deleted.insert(i);
        g.head.remove(i);
        out.push((g, (q.face(a, i, 1), w.clone())));
    }
    for m in nonempty_subsets(Set::underline(p)) {
        let s = Set::underline(p) - m;
        let mut g = shape.clone();
        g.head = s.with(0);
        g.tail.insert(0, m);
        out.push((g, (q.face_multi(a, m, 0), universal_twisting(&q.face_multi(a, s, 1)).mul(w))));
    }
    let om = Omega { q };
    for (i, &blk) in shape.tail.iter().enumerate() {
        for (u, v) in splits(blk) {
            let mut g = shape.clone();
            g.tail.splice(i..=i, [u, v]);
            let rank = |x: Set| x.map(|y| blk.rank(y) as u32);
            out.push((g, (a.clone(), om.face(w, i, rank(u), rank(v)))));
        }
    }
    out
}

/// Check that every codimension-2 face of every basis element of `PQ` up to total
/// degree `cap` is reached by the same element along every pair of facets. Returns
/// the number of codimension-2 faces compared.
pub fn check_pq_relations(q: &CubicalSet, cap: usize) -> Result<usize> {
    let om = Omega::build(q)?;
    let mut compared = 0;
    for deg in 0..=cap {
        for p in 0..=deg.min(q.max_dim() as usize) {
            if p == 1 {
                continue;
            }
            for a in q.nondegenerate(p as u32) {
                for w in om.basis(deg - p) {
                    compared += check_element(q, &(a.clone(), w))?;
                }
            }
        }
    }
    Ok(compared)
}

fn check_element(q: &CubicalSet, x: &PqElem) -> Result<usize> {
    use crate::permutocube::PcubeFace;
    let mut seen: BTreeMap<PcubeFace, (QCell, OmegaWord)> = BTreeMap::new();
    for (g, y) in pq_facets(q, x) {
        // coordinates of y's own shape, listed in x's coordinates
        let yshape = pq_shape(&y);
        let mut coords: Vec<u32> = g.head.to_vec();
        for b in &g.tail {
            coords.extend(b.to_vec());
        }
        let lift = |s: Set| s.map(|i| coords[i as usize]);
        for (h, z) in pq_facets(q, &y) {
            let label = PcubeFace {
                n: x_n(x),
                deleted: g.deleted | lift(h.deleted),
                head: lift(h.head),
                tail: h.tail.iter().map(|&b| lift(b)).collect(),
            };
            debug_assert_eq!(yshape.n, coords.len() as u32 - 1);
            let key = (z.0.clone(), z.1.normal_form());
            match seen.get(&label) {
                Some(prev) if *prev != key => {
                    return Err(Error::Verification(format!(
                        "({}, {}) face {}: {} · {} versus {} · {}",
                        x.0,
                        x.1,
                        label.full_string(),
                        prev.0,
                        prev.1,
                        key.0,
                        key.1
                    )))
                }
                Some(_) => {}
                None => {
                    seen.insert(label, key);
                }
            }
        }
    }
    Ok(seen.len())
}

fn x_n(x: &PqElem) -> u32 {
    pq_shape(x).n
}
