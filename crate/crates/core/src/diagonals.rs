//! Orthogonal streams and the explicit diagonals on `P_n`, `B_n` and the cube.
//!
//! A vertex `x` of the top cell determines a strong complementary pair `(u_x, v_x)`
//! read off from the decreasing and increasing runs of its word. Right shifts of
//! `u_x` and left shifts of `v_x` fill out the stream, and the diagonal of the top
//! cell is the signed sum of all stream pairs. Proper faces get the Koszul-signed
//! product of the diagonals of their factors.

use crate::chains::{Chain, Ring};
use crate::permutahedron::{permutations, Word};
use crate::permutocube::{CubeFace, PcubeFace};
use crate::setcalc::{block_signs, nonempty_subsets, parity, rsgn, shuffle_sign_unchecked, OrderedPartition, Set};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Display;
use std::sync::{Arc, Mutex, OnceLock};

/// A signed sum of pairs `left ⊗ right`.
pub type Diagonal<F> = Chain<(F, F)>;

/// One term of a diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTerm<F> {
    pub left: F,
    pub right: F,
    pub coeff: i64,
}

pub fn terms<F: Ord + Clone>(d: &Diagonal<F>) -> Vec<DiagonalTerm<F>> {
    d.iter().map(|((l, r), c)| DiagonalTerm { left: l.clone(), right: r.clone(), coeff: c }).collect()
}

/// `[{left, right, coeff}]`.
pub fn terms_json<F: Ord + Clone + Display>(d: &Diagonal<F>) -> serde_json::Value {
    serde_json::Value::Array(
        d.iter().map(|((l, r), c)| serde_json::json!({"left": l.to_string(), "right": r.to_string(), "coeff": c})).collect(),
    )
}

pub fn decreasing_runs(word: &[u32]) -> Vec<Set> {
    runs(word, |a, b| a > b)
}

pub fn increasing_runs(word: &[u32]) -> Vec<Set> {
    runs(word, |a, b| a < b)
}

fn runs(word: &[u32], cont: impl Fn(u32, u32) -> bool) -> Vec<Set> {
    let mut out: Vec<Set> = Vec::new();
    let mut last = None;
    for &x in word {
        match (out.last_mut(), last) {
            (Some(r), Some(l)) if cont(l, x) => r.insert(x),
            _ => out.push(Set::singleton(x)),
        }
        last = Some(x);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    /// Move `M ⊊ A_i` into `A_{i+1}` when `min M > max A_{i+1}`.
    R,
    /// Move `N ⊊ A_j` into `A_{j−1}` when `min N > max A_{j−1}`.
    L,
}

/// Proper nonempty subsets of `block` whose elements all exceed `bound`.
fn movable(block: Set, bound: u32) -> Vec<Set> {
    let cand = block.iter().filter(|&x| x > bound).fold(Set::EMPTY, |s, x| s.with(x));
    nonempty_subsets(cand).filter(|m| m.len() < block.len()).collect()
}

fn shift_at(blocks: &[Set], from: usize, to: usize) -> Vec<Vec<Set>> {
    movable(blocks[from], blocks[to].max().unwrap())
        .into_iter()
        .map(|m| {
            let mut nb = blocks.to_vec();
            nb[from] = nb[from] - m;
            nb[to] = nb[to] | m;
            nb
        })
        .collect()
}

/// Every block sequence reachable by exactly one admissible shift.
pub fn shifts(blocks: &[Set], dir: Shift) -> Vec<Vec<Set>> {
    let mut out = Vec::new();
    for i in 0..blocks.len().saturating_sub(1) {
        out.extend(match dir {
            Shift::R => shift_at(blocks, i, i + 1),
            Shift::L => shift_at(blocks, i + 1, i),
        });
    }
    out
}

/// `R_{M_{ℓ−1}} ⋯ R_{M_0}`: shifts applied left to right, each block once, each
/// `M_i` possibly empty.
pub fn right_closure(blocks: &[Set]) -> BTreeSet<Vec<Set>> {
    let mut cur = BTreeSet::from([blocks.to_vec()]);
    for i in 0..blocks.len().saturating_sub(1) {
        let mut next = cur.clone();
        for b in &cur {
            next.extend(shift_at(b, i, i + 1));
        }
        cur = next;
    }
    cur
}

/// `L_{N_1} ⋯ L_{N_ℓ}`: shifts applied right to left.
pub fn left_closure(blocks: &[Set]) -> BTreeSet<Vec<Set>> {
    let mut cur = BTreeSet::from([blocks.to_vec()]);
    for j in (1..blocks.len()).rev() {
        let mut next = cur.clone();
        for b in &cur {
            next.extend(shift_at(b, j, j - 1));
        }
        cur = next;
    }
    cur
}

/// `sgn(u,v) = (−1)^{C(q+1,2)} rsgn(u_x) sgn₁(v) sgn₂(u) sgn₂(u_x)` where `v` has
/// `q+1` blocks. All three arguments are full block sequences.
pub fn pair_sign(u: &[Set], v: &[Set], ux: &[Set]) -> i32 {
    let q1 = v.len();
    parity(q1 * (q1 - 1) / 2) * rsgn(ux) * block_signs(v).sgn1 * block_signs(u).sgn2 * block_signs(ux).sgn2
}

fn with_zero(blocks: &[Set]) -> Vec<Set> {
    let mut out = vec![Set::singleton(0)];
    out.extend(blocks);
    out
}

/// The pair sign on `P_n`, evaluated with the extra head block `{0}` that embeds
/// `P_n` as `0]underline{n}` in `B_n`.
pub fn pair_sign_perm(u: &OrderedPartition, v: &OrderedPartition, ux: &OrderedPartition) -> i32 {
    pair_sign(&with_zero(u.blocks()), &with_zero(v.blocks()), &with_zero(ux.blocks()))
}

fn pcube_blocks(f: &PcubeFace) -> Vec<Set> {
    let mut out = vec![f.head];
    out.extend(&f.tail);
    out
}

/// The pair sign on `B_n`: the formula on the full block sequences times
/// `(−1)^{ΣD}` for the coordinates `D` deleted in `v`, counted by rank.
pub fn pair_sign_pcube(u: &PcubeFace, v: &PcubeFace, ux: &PcubeFace) -> i32 {
    let alive = Set::range(0, u.n) - u.deleted;
    let d: usize = (v.deleted - u.deleted).iter().map(|x| alive.rank(x) - 1).sum();
    let d = if crate::mutation::active(crate::mutation::Mutation::PairSignDeletion) { 0 } else { d };
    pair_sign(&pcube_blocks(u), &pcube_blocks(v), &pcube_blocks(ux)) * parity(d)
}

/// The strong complementary pair of a vertex of `P_n`, given by its word.
pub fn scp_perm(x: &[u32]) -> (OrderedPartition, OrderedPartition) {
    let p = |b: Vec<Set>| OrderedPartition::new(b).expect("runs are disjoint");
    (p(decreasing_runs(x)), p(increasing_runs(x)))
}

fn check_b_vertex(x: &PcubeFace) -> Result<Word> {
    if x.head != Set::singleton(0) || x.tail.iter().any(|b| b.len() != 1) {
        return Err(Error::NotAVertex);
    }
    Ok(x.tail.iter().map(|&b| b.min().unwrap()).collect())
}

/// The strong complementary pair of a vertex `0]x_1|⋯|x_k` of `B_n` with deleted set `D`:
/// `u_x = ({0}∪D)]` followed by the decreasing runs of `x`, `v_x` the increasing runs
/// of `0x_1⋯x_k` with the first run as head, carrying `D`.
pub fn scp_pcube(x: &PcubeFace) -> Result<(PcubeFace, PcubeFace)> {
    let word = check_b_vertex(x)?;
    let ux = PcubeFace { n: x.n, deleted: Set::EMPTY, head: x.deleted.with(0), tail: decreasing_runs(&word) };
    let mut zw = vec![0];
    zw.extend(&word);
    let inc = increasing_runs(&zw);
    let vx = PcubeFace { n: x.n, deleted: x.deleted, head: inc[0], tail: inc[1..].to_vec() };
    Ok((ux, vx))
}

/// An orthogonal stream: the generating vertex, its pair, and the sets `U_x`, `V_x`.
#[derive(Clone, Debug)]
pub struct Stream<F> {
    pub vertex: F,
    pub ux: F,
    pub vx: F,
    pub us: Vec<F>,
    pub vs: Vec<F>,
}

pub fn orthogonal_stream_perm(x: &[u32]) -> Stream<OrderedPartition> {
    let (ux, vx) = scp_perm(x);
    let p = |b: Vec<Set>| OrderedPartition::with_ground(b, ux.ground()).unwrap();
    Stream {
        vertex: crate::permutahedron::vertex_face(x),
        us: right_closure(ux.blocks()).into_iter().map(p).collect(),
        vs: left_closure(vx.blocks()).into_iter().map(p).collect(),
        ux,
        vx,
    }
}

pub fn orthogonal_stream_pcube(x: &PcubeFace) -> Result<Stream<PcubeFace>> {
    let (ux, vx) = scp_pcube(x)?;
    let face = |b: Vec<Set>, deleted| PcubeFace { n: x.n, deleted, head: b[0], tail: b[1..].to_vec() };
    Ok(Stream {
        vertex: x.clone(),
        us: right_closure(&pcube_blocks(&ux)).into_iter().map(|b| face(b, Set::EMPTY)).collect(),
        vs: left_closure(&pcube_blocks(&vx)).into_iter().map(|b| face(b, x.deleted)).collect(),
        ux,
        vx,
    })
}

/// Vertices of the top cell of `B_n`: every injective word over `1..n`.
pub fn pcube_vertices(n: u32) -> Vec<PcubeFace> {
    let all = Set::underline(n);
    let mut out = Vec::new();
    let mut subsets = vec![Set::EMPTY];
    subsets.extend(nonempty_subsets(all));
    for s in subsets {
        for w in permutations(s) {
            out.push(PcubeFace { n, deleted: all - s, head: Set::singleton(0), tail: w.iter().map(|&i| Set::singleton(i)).collect() });
        }
    }
    out
}

/// Streams of every vertex of the top cell of `P_n`, vertices in lexicographic order.
pub fn streams_perm(n: u32) -> Vec<Stream<OrderedPartition>> {
    permutations(Set::underline(n)).iter().map(|w| orthogonal_stream_perm(w)).collect()
}

pub fn streams_pcube(n: u32) -> Vec<Stream<PcubeFace>> {
    pcube_vertices(n).iter().map(|x| orthogonal_stream_pcube(x).unwrap()).collect()
}

/// Signed pairs of one stream.
pub fn stream_terms_perm(s: &Stream<OrderedPartition>) -> Vec<(OrderedPartition, OrderedPartition, i64)> {
    let mut out = Vec::new();
    for u in &s.us {
        for v in &s.vs {
            out.push((u.clone(), v.clone(), pair_sign_perm(u, v, &s.ux) as i64));
        }
    }
    out
}

pub fn stream_terms_pcube(s: &Stream<PcubeFace>) -> Vec<(PcubeFace, PcubeFace, i64)> {
    let mut out = Vec::new();
    for u in &s.us {
        for v in &s.vs {
            out.push((u.clone(), v.clone(), pair_sign_pcube(u, v, &s.ux) as i64));
        }
    }
    out
}

type Cache<F> = OnceLock<Mutex<HashMap<u32, Arc<Diagonal<F>>>>>;

fn cached<F: Ord + Clone>(cache: &Cache<F>, n: u32, build: impl FnOnce() -> Diagonal<F>) -> Arc<Diagonal<F>> {
    if crate::mutation::any_active() {
        return Arc::new(build());
    }
    let m = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = m.lock().unwrap().get(&n) {
        return d.clone();
    }
    let d = Arc::new(build());
    m.lock().unwrap().insert(n, d.clone());
    d
}

/// `Δ` of the top cell of `P_n` over `1..n`.
pub fn top_diagonal_perm(n: u32) -> Arc<Diagonal<OrderedPartition>> {
    static CACHE: Cache<OrderedPartition> = OnceLock::new();
    cached(&CACHE, n, || {
        let mut d = Chain::new();
        if n == 1 {
            let t = OrderedPartition::top(Set::singleton(1));
            d.add((t.clone(), t), 1);
            return d;
        }
        for s in streams_perm(n) {
            for (u, v, c) in stream_terms_perm(&s) {
                d.add((u, v), c);
            }
        }
        d
    })
}

/// `Δ` of the top cell of `B_n`.
pub fn top_diagonal_pcube(n: u32) -> Arc<Diagonal<PcubeFace>> {
    static CACHE: Cache<PcubeFace> = OnceLock::new();
    cached(&CACHE, n, || {
        let mut d = Chain::new();
        for s in streams_pcube(n) {
            for (u, v, c) in stream_terms_pcube(&s) {
                d.add((u, v), c);
            }
        }
        d
    })
}

/// The standard diagonal of `P_{#S}` moved onto the block `S`.
fn block_diagonal(s: Set) -> Vec<(Vec<Set>, Vec<Set>, i64)> {
    let top = top_diagonal_perm(s.len() as u32);
    let lift = |b: &[Set]| b.iter().map(|x| x.map(|i| s.nth(i as usize).unwrap())).collect::<Vec<_>>();
    top.iter().map(|((u, v), c)| (lift(u.blocks()), lift(v.blocks()), c)).collect()
}

fn blocks_dim(b: &[Set]) -> usize {
    b.iter().map(|x| x.len() - 1).sum()
}

/// `Δ_P` on any face: the product of the block diagonals with the sign
/// `(−1)^{|b||c|}` for each interchange `(a⊗b)(c⊗d) = ±ac⊗bd`.
pub fn diagonal_perm(f: &OrderedPartition) -> Diagonal<OrderedPartition> {
    let mut cur: Vec<(Vec<Set>, Vec<Set>, i64)> = vec![(Vec::new(), Vec::new(), 1)];
    for &block in f.blocks() {
        let factor = block_diagonal(block);
        let mut next = Vec::with_capacity(cur.len() * factor.len());
        for (a, b, s) in &cur {
            for (c, d, t) in &factor {
                let sign = parity(blocks_dim(b) * blocks_dim(c)) as i64;
                next.push(([a.as_slice(), c].concat(), [b.as_slice(), d].concat(), s * t * sign));
            }
        }
        cur = next;
    }
    let g = f.ground();
    cur.into_iter()
        .map(|(a, b, c)| ((OrderedPartition::with_ground(a, g).unwrap(), OrderedPartition::with_ground(b, g).unwrap()), c))
        .collect()
}

/// `Δ_B` on any face: the head factor `B_k` first, then one `P` factor per tail block.
pub fn diagonal_pcube(f: &PcubeFace) -> Diagonal<PcubeFace> {
    let k = f.head.len() as u32 - 1;
    let top = top_diagonal_pcube(k);
    let lift = |s: Set| s.map(|i| f.head.nth(i as usize + 1).unwrap());
    let lift_face = |g: &PcubeFace| PcubeFace {
        n: f.n,
        deleted: f.deleted | lift(g.deleted),
        head: lift(g.head),
        tail: g.tail.iter().map(|&b| lift(b)).collect(),
    };
    let mut cur: Vec<(PcubeFace, PcubeFace, i64)> = top.iter().map(|((u, v), c)| (lift_face(u), lift_face(v), c)).collect();
    for &block in &f.tail {
        let factor = block_diagonal(block);
        let mut next = Vec::with_capacity(cur.len() * factor.len());
        for (a, b, s) in &cur {
            for (c, d, t) in &factor {
                let sign = parity(b.dim() * blocks_dim(c)) as i64;
                let mut a2 = a.clone();
                a2.tail.extend(c);
                let mut b2 = b.clone();
                b2.tail.extend(d);
                next.push((a2, b2, s * t * sign));
            }
        }
        cur = next;
    }
    cur.into_iter().map(|(a, b, c)| ((a, b), c)).collect()
}

/// Support-only diagonal, for separating sign errors from support errors.
pub fn diagonal_perm_ring(f: &OrderedPartition, ring: Ring) -> Diagonal<OrderedPartition> {
    diagonal_perm(f).reduce(ring)
}

pub fn diagonal_pcube_ring(f: &PcubeFace, ring: Ring) -> Diagonal<PcubeFace> {
    diagonal_pcube(f).reduce(ring)
}

/// Shuffles `A ⊔ B = {1..m}` with `shuff(A;B)`, the data of the Serre diagonal
/// `Δ(a) = Σ shuff(A;B) d⁰_B a ⊗ d¹_A a`.
pub fn serre_shuffles(m: usize) -> Vec<(Set, Set, i64)> {
    let all = Set::underline(m as u32);
    let mut subsets = vec![Set::EMPTY];
    subsets.extend(nonempty_subsets(all));
    subsets.into_iter().map(|a| (a, all - a, shuffle_sign_unchecked(a, all - a) as i64)).collect()
}

/// Set the free coordinates of a cube face listed in `s` (counted among the free
/// ones) to `eps`.
pub fn cube_face_multi(c: &CubeFace, s: Set, eps: u8) -> CubeFace {
    // descending, so earlier positions keep their free-index
    let mut out = c.clone();
    for i in s.to_vec().into_iter().rev() {
        out = out.face(i as usize, eps).expect("index within dimension");
    }
    out
}

pub fn serre_diagonal(c: &CubeFace) -> Diagonal<CubeFace> {
    serre_shuffles(c.dim())
        .into_iter()
        .map(|(a, b, s)| ((cube_face_multi(c, b, 0), cube_face_multi(c, a, 1)), s))
        .collect()
}

/// A graded set with operators indexed by faces of `B_p` and of `P_q`, where `a`
/// of bidegree `(p,q)` has dimension `p+q−1`. Operators returning `None` land on a
/// degenerate (zero) element.
pub trait PermutocubicalSet {
    type Elem: Ord + Clone;
    fn bidegree(&self, a: &Self::Elem) -> (u32, u32);
    fn apply_b(&self, u: &PcubeFace, a: &Self::Elem) -> Option<Self::Elem>;
    fn apply_p(&self, v: &OrderedPartition, a: &Self::Elem) -> Option<Self::Elem>;
}

/// `Δ(a) = Σ sgn(u₁,u₂) sgn(v₁,v₂) (−1)^ε d_{u₁}d_{v₁}(a) ⊗ d_{u₂}d_{v₂}(a)`.
/// `ε` is the product of the cube degree of `d_{u₂}(a)` and the permutahedral degree
/// of `d_{v₁}(a)`, that is `dim u₂ · dim v₁`: the interchange sign of
/// `(u₁⊗u₂)(v₁⊗v₂)`. Total degrees give the wrong sign already on `B_1`.
pub fn pcubical_set_diagonal<S: PermutocubicalSet>(set: &S, a: &S::Elem) -> Diagonal<S::Elem> {
    let (p, q) = set.bidegree(a);
    let db = top_diagonal_pcube(p);
    let dp = top_diagonal_perm(q);
    let mut out = Chain::new();
    for ((u1, u2), su) in db.iter() {
        for ((v1, v2), sv) in dp.iter() {
            let left = set.apply_p(v1, a).and_then(|x| set.apply_b(u1, &x));
            let right = set.apply_p(v2, a).and_then(|x| set.apply_b(u2, &x));
            if let (Some(l), Some(r)) = (left, right) {
                let eps = u2.dim() * v1.dim();
                out.add((l, r), su * sv * parity(eps) as i64);
            }
        }
    }
    out
}

/// A row of the grouped display: a vertex and its signed pairs, with the left
/// factors collected under each right factor.
#[derive(Clone, Debug)]
pub struct VertexRow<F> {
    pub vertex: F,
    pub groups: Vec<(Vec<(F, i64)>, F)>,
}

fn group_rows<F: Ord + Clone>(vertex: F, terms: Vec<(F, F, i64)>) -> VertexRow<F> {
    let mut by_right: BTreeMap<F, Vec<(F, i64)>> = BTreeMap::new();
    for (u, v, c) in terms {
        by_right.entry(v).or_default().push((u, c));
    }
    VertexRow { vertex, groups: by_right.into_iter().map(|(v, us)| (us, v)).collect() }
}

pub fn grouped_perm(n: u32) -> Vec<VertexRow<OrderedPartition>> {
    streams_perm(n).iter().map(|s| group_rows(s.vertex.clone(), stream_terms_perm(s))).collect()
}

pub fn grouped_pcube(n: u32) -> Vec<VertexRow<PcubeFace>> {
    streams_pcube(n).iter().map(|s| group_rows(s.vertex.clone(), stream_terms_pcube(s))).collect()
}

/// `±(u₁ ± u₂) ⊗ v    x=…` lines.
pub fn grouped_text<F: Display>(rows: &[VertexRow<F>]) -> String {
    let mut out = String::new();
    for row in rows {
        for (us, v) in &row.groups {
            let left = if us.len() == 1 {
                format!("{} {}", sign_char(us[0].1), us[0].0)
            } else {
                let inner: Vec<String> =
                    us.iter().enumerate().map(|(i, (u, c))| if i == 0 && *c > 0 { u.to_string() } else { format!("{} {u}", sign_char(*c)) }).collect();
                format!("+ ({})", inner.join(" "))
            };
            out.push_str(&format!("{left} ⊗ {v}    x={}\n", row.vertex));
        }
    }
    out
}

fn sign_char(c: i64) -> &'static str {
    if c > 0 {
        "+"
    } else {
        "−"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_of_a_word() {
        let w = [2, 1, 3, 6, 5];
        assert_eq!(OrderedPartition::new(decreasing_runs(&w)).unwrap().to_string(), "12|3|56");
        assert_eq!(OrderedPartition::new(increasing_runs(&w)).unwrap().to_string(), "2|136|5");
    }

    #[test]
    fn shifts_preserve_block_count() {
        let b = vec![Set::from_elems([0, 2]), Set::from_elems([1, 3, 6]), Set::singleton(5)];
        for s in shifts(&b, Shift::L).into_iter().chain(shifts(&b, Shift::R)) {
            assert_eq!(s.len(), 3);
            assert!(s.iter().all(|x| !x.is_empty()));
        }
    }
}
