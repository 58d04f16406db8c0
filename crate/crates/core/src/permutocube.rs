//! Faces of the permutocube `B_n`, written `C_0]C_1|⋯|C_p` with `0 ∈ C_0` plus a set
//! of deleted coordinates, and the operators `d_i`, `d_{A]M}`, `d_{M_1|M_2}`.
//!
//! A face is a cell `B_{#C_0−1} × P_{#C_1} × ⋯ × P_{#C_p}`. The operators act on that
//! cell structure by rank: `d_i` deletes the `i`-th element of `C_0 ∖ 0`, `d_{A]M}`
//! splits the head and places `M` directly after it, and `d_{M_1|M_2}` splits the last
//! tail block.

use crate::permutahedron::Image;
use crate::setcalc::{block_string, blocks_string, collect_partitions, nonempty_subsets, parse_block, OrderedPartition, Set};
use crate::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcubeFace {
    pub n: u32,
    pub deleted: Set,
    pub head: Set,
    pub tail: Vec<Set>,
}

impl PcubeFace {
    pub fn new(n: u32, deleted: Set, head: Set, tail: Vec<Set>) -> Result<PcubeFace> {
        let f = PcubeFace { n, deleted, head, tail };
        f.validate()?;
        Ok(f)
    }

    pub fn top(n: u32) -> PcubeFace {
        PcubeFace { n, deleted: Set::EMPTY, head: Set::range(0, n), tail: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        if !self.head.contains(0) {
            return Err(Error::Invalid("head block must contain 0".into()));
        }
        if !self.deleted.is_subset(Set::underline(self.n)) {
            return Err(Error::Invalid("deleted set outside 1..n".into()));
        }
        let mut seen = self.deleted;
        for &b in std::iter::once(&self.head).chain(&self.tail) {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::NotDisjoint);
            }
            seen = seen | b;
        }
        if seen != Set::range(0, self.n) {
            return Err(Error::Invalid(format!("blocks and deletions do not cover 0..{}", self.n)));
        }
        Ok(())
    }

    /// `(n − #deleted) − p`.
    pub fn dim(&self) -> usize {
        self.head.len() - 1 + self.tail.iter().map(|b| b.len() - 1).sum::<usize>()
    }

    /// Elements of the head other than 0, in order; `d_i` deletes the `i`-th.
    pub fn head_coords(&self) -> Set {
        self.head.without(0)
    }

    pub fn is_vertex(&self) -> bool {
        self.dim() == 0
    }

    /// Parse the display form, optionally prefixed by an explicit deleted list
    /// `"2,5;"`. Without the prefix the deleted set is whatever `1..n` does not
    /// mention. The head may be written with or without its 0.
    pub fn parse(text: &str, n: u32) -> Result<PcubeFace> {
        let (deleted_text, rest) = match text.split_once(';') {
            Some((d, r)) => (Some(d.trim()), r.trim()),
            None => (None, text.trim()),
        };
        let (head_text, tail_text) = rest
            .split_once(']')
            .ok_or_else(|| Error::Parse(format!("missing ']' in {text:?}")))?;
        let head = parse_block(head_text)?.with(0);
        let tail_text = tail_text.trim();
        let tail = if tail_text.is_empty() {
            Vec::new()
        } else {
            tail_text.split('|').map(parse_block).collect::<Result<Vec<_>>>()?
        };
        let mentioned = tail.iter().fold(head, |a, &b| a | b);
        let deleted = match deleted_text {
            Some("") => Set::EMPTY,
            Some(d) => parse_block(d)?,
            None => Set::underline(n) - mentioned,
        };
        PcubeFace::new(n, deleted, head, tail).map_err(|e| Error::Parse(format!("{text:?}: {e}")))
    }

    /// Display form with the deleted list spelled out.
    pub fn full_string(&self) -> String {
        let d: Vec<String> = self.deleted.iter().map(|x| x.to_string()).collect();
        format!("{};{}", d.join(","), self)
    }

    /// The tail as a partition of its support.
    pub fn tail_partition(&self) -> OrderedPartition {
        OrderedPartition::new(self.tail.clone()).expect("tail blocks are disjoint")
    }
}

impl fmt::Display for PcubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.head_coords();
        let head = if h.is_empty() { "0".to_string() } else { block_string(h) };
        write!(f, "{head}]{}", blocks_string(&self.tail))
    }
}

impl fmt::Debug for PcubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All faces of `B_n`, optionally of one dimension, sorted.
pub fn faces_b(n: u32, dim: Option<usize>) -> Vec<PcubeFace> {
    let mut out = Vec::new();
    let all = Set::underline(n);
    let mut deletions = vec![Set::EMPTY];
    deletions.extend(nonempty_subsets(all));
    for deleted in deletions {
        let alive = all - deleted;
        let mut heads = vec![Set::EMPTY];
        heads.extend(nonempty_subsets(alive));
        for h in heads {
            let head = h.with(0);
            let rest = alive - h;
            let mut push = |tail: &[Set]| {
                let f = PcubeFace { n, deleted, head, tail: tail.to_vec() };
                if dim.map_or(true, |d| d == f.dim()) {
                    out.push(f);
                }
            };
            if rest.is_empty() {
                push(&[]);
            } else {
                collect_partitions(rest, None, &mut Vec::new(), &mut |t| push(t));
            }
        }
    }
    out.sort();
    out
}

/// `d_i`: delete the `i`-th element of the head (0 excluded).
pub fn face_op_i(i: u32, f: &PcubeFace) -> Result<PcubeFace> {
    let coords = f.head_coords();
    let x = (i >= 1)
        .then(|| coords.nth(i as usize))
        .flatten()
        .ok_or_else(|| Error::Arity(format!("d_{i} needs a head with at least {i} coordinates, {f} has {}", coords.len())))?;
    Ok(PcubeFace { n: f.n, deleted: f.deleted.with(x), head: f.head.without(x), tail: f.tail.clone() })
}

/// `d_{A]M}`: split the head by ranks, `0 ∈ A`, `A ⊔ M = {0,…,#C_0−1}`; `M`
/// becomes the first tail block.
pub fn face_op_am(a: Set, m: Set, f: &PcubeFace) -> Result<PcubeFace> {
    let k = f.head.len() as u32 - 1;
    if !a.contains(0) || m.is_empty() || !a.is_disjoint(m) || a | m != Set::range(0, k) {
        return Err(Error::Arity(format!(
            "d_{{{}]{}}} needs a split of 0..{k} with 0 in the first part",
            block_string(a),
            block_string(m)
        )));
    }
    let lift = |s: Set| s.map(|r| f.head.nth(r as usize + 1).unwrap());
    let mut tail = vec![lift(m)];
    tail.extend(&f.tail);
    Ok(PcubeFace { n: f.n, deleted: f.deleted, head: lift(a), tail })
}

/// `d_{M_1|M_2}`: split the last tail block by ranks.
pub fn face_op_perm(m1: Set, m2: Set, f: &PcubeFace) -> Result<PcubeFace> {
    let last = *f.tail.last().ok_or_else(|| Error::Arity(format!("d_{{M|N}} needs a tail block, {f} has none")))?;
    let k = last.len() as u32;
    if m1.is_empty() || m2.is_empty() || !m1.is_disjoint(m2) || m1 | m2 != Set::underline(k) {
        return Err(Error::Arity(format!("d_{{{m1}|{m2}}} needs a 2-block partition of 1..{k}")));
    }
    let lift = |s: Set| s.map(|r| last.nth(r as usize).unwrap());
    let mut tail = f.tail.clone();
    tail.pop();
    tail.push(lift(m1));
    tail.push(lift(m2));
    Ok(PcubeFace { n: f.n, deleted: f.deleted, head: f.head, tail })
}

/// One letter of an operator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcubeOp {
    Delete(u32),
    Split(Set, Set),
    Perm(Set, Set),
}

impl fmt::Display for PcubeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcubeOp::Delete(i) => write!(f, "d_{i}"),
            PcubeOp::Split(a, m) => write!(f, "d_{{{}]{}}}", block_string(a.without(0)), block_string(*m)),
            PcubeOp::Perm(a, b) => write!(f, "d_{{{a}|{b}}}"),
        }
    }
}

pub fn apply_op(op: &PcubeOp, f: &PcubeFace) -> Result<PcubeFace> {
    match op {
        PcubeOp::Delete(i) => face_op_i(*i, f),
        PcubeOp::Split(a, m) => face_op_am(*a, *m, f),
        PcubeOp::Perm(a, b) => face_op_perm(*a, *b, f),
    }
}

/// Apply a word written left to right, so the rightmost operator acts first.
pub fn apply_word(word: &[PcubeOp], f: &PcubeFace) -> Result<PcubeFace> {
    word.iter().rev().try_fold(f.clone(), |g, op| apply_op(op, &g))
}

/// The label of a face: the partition `A_0]A_1|⋯|A_p` obtained by indexing the
/// surviving coordinates, and the deleted coordinates in increasing order.
pub fn decompose_label(f: &PcubeFace) -> (PcubeFace, Vec<u32>) {
    let alive = Set::range(0, f.n) - f.deleted;
    let idx = |s: Set| s.map(|x| alive.rank(x) as u32 - 1);
    let m = alive.len() as u32 - 1;
    let label = PcubeFace { n: m, deleted: Set::EMPTY, head: idx(f.head), tail: f.tail.iter().map(|&b| idx(b)).collect() };
    (label, f.deleted.to_vec())
}

/// The operator word of a face: `d_{A_0]A_1} ⋯ d_{A_0∪⋯∪A_{p−1}]A_p} d_{i_k} ⋯ d_{i_1}`
/// with the head splits indexed in the current head.
pub fn label_word(f: &PcubeFace) -> Vec<PcubeOp> {
    let (label, deleted) = decompose_label(f);
    let mut word = Vec::new();
    let mut head = label.tail.iter().fold(label.head, |a, &b| a | b);
    let mut splits = Vec::new();
    for &block in label.tail.iter().rev() {
        let rest = head - block;
        let idx = |s: Set| s.map(|x| head.rank(x) as u32 - 1);
        splits.push(PcubeOp::Split(idx(rest), idx(block)));
        head = rest;
    }
    splits.reverse();
    word.extend(splits);
    word.extend(deleted.iter().map(|&i| PcubeOp::Delete(i)));
    word
}

/// `P_n` as the face `0]underline{n}`: `A_1|⋯|A_k ↦ 0]A_1|⋯|A_k`.
pub fn embed_perm_face(g: &OrderedPartition) -> Result<PcubeFace> {
    let n = g.support().max().unwrap_or(0);
    if !g.is_full() || g.support() != Set::underline(n) {
        return Err(Error::Invalid(format!("{g} is not a face of P_{n}")));
    }
    Ok(PcubeFace { n, deleted: Set::EMPTY, head: Set::singleton(0), tail: g.blocks().to_vec() })
}

/// A coordinate of a face of the cube `I^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CubeCoord {
    Zero,
    One,
    Free,
}

/// A face of the cellular cube `I^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeFace(pub Vec<CubeCoord>);

impl CubeFace {
    pub fn top(n: usize) -> CubeFace {
        CubeFace(vec![CubeCoord::Free; n])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().filter(|&&c| c == CubeCoord::Free).count()
    }

    /// `d^ε_i` applied to this face, where `i` counts free coordinates from 1.
    pub fn face(&self, i: usize, eps: u8) -> Option<CubeFace> {
        let pos = self.0.iter().enumerate().filter(|(_, &c)| c == CubeCoord::Free).nth(i.checked_sub(1)?)?.0;
        let mut out = self.clone();
        out.0[pos] = if eps == 0 { CubeCoord::Zero } else { CubeCoord::One };
        Some(out)
    }

    /// All faces of `I^n` of dimension `d`.
    pub fn all(n: usize, d: Option<usize>) -> Vec<CubeFace> {
        let mut out = Vec::new();
        let total = 3usize.pow(n as u32);
        for mut code in 0..total {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push([CubeCoord::Zero, CubeCoord::One, CubeCoord::Free][code % 3]);
                code /= 3;
            }
            let f = CubeFace(v);
            if d.map_or(true, |d| d == f.dim()) {
                out.push(f);
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                CubeCoord::Zero => "0",
                CubeCoord::One => "1",
                CubeCoord::Free => "*",
            })?;
        }
        if self.0.is_empty() {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The collapse `B_n → I^n`: deleted coordinates go to 1, tail coordinates to 0,
/// head coordinates stay free. Faces with a tail block of size at least 2 collapse.
pub fn project_to_cube(f: &PcubeFace) -> Image<CubeFace> {
    let coords = (1..=f.n)
        .map(|i| {
            if f.deleted.contains(i) {
                CubeCoord::One
            } else if f.head.contains(i) {
                CubeCoord::Free
            } else {
                CubeCoord::Zero
            }
        })
        .collect();
    Image { face: CubeFace(coords), degenerate: f.tail.iter().any(|b| b.len() >= 2) }
}

/// The product decomposition `B_k × P_{m_1} × ⋯` of a face; each factor is
/// relabeled onto a standard ground by rank inside its block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcubeCellStructure {
    /// The head block, carrying the `B_k` factor with `k = #head − 1`.
    pub head: Set,
    /// The tail blocks, one `P_{#block}` factor each.
    pub tail: Vec<Set>,
}

impl PcubeCellStructure {
    pub fn base_dim(&self) -> u32 {
        self.head.len() as u32 - 1
    }

    pub fn perm_dims(&self) -> Vec<u32> {
        self.tail.iter().map(|b| b.len() as u32).collect()
    }
}

impl fmt::Display for PcubeCellStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.base_dim())?;
        for k in self.perm_dims() {
            write!(f, " × P{k}")?;
        }
        Ok(())
    }
}

pub fn cell_structure(f: &PcubeFace) -> PcubeCellStructure {
    PcubeCellStructure { head: f.head, tail: f.tail.clone() }
}
