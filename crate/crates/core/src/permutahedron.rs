//! Faces of the permutahedron `P_n`, the cellular projections `Δ_{r,s}`,
//! `Δ_{n_1…n_k}`, `ρ_n`, `γ_n`, `φ_{A|B}`, the embeddings `h_{A|B}` and the coface and
//! codegeneracy maps `δ_{A|B}`, `β_{A|B}` together with the relations among them.
//!
//! Vertices are words (permutations of the ground set). Maps are computed on
//! vertices; the image of a face is the smallest face spanned by the images of its
//! vertices, flagged degenerate when its dimension drops.

use crate::permutocube::{CubeCoord, CubeFace};
use crate::setcalc::{collect_partitions, ordered_partitions, square_op, OrderedPartition, Set};
use crate::{Error, Result};
use std::fmt;

/// A vertex of a permutahedron, read left to right.
pub type Word = Vec<u32>;

/// A face image together with whether the map dropped dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Image<T> {
    pub face: T,
    pub degenerate: bool,
}

/// All faces of `P_n`, or those of one dimension, in canonical order.
pub fn faces(n: u32, dim: Option<usize>) -> Vec<OrderedPartition> {
    match dim {
        Some(d) if d as u32 >= n => Vec::new(),
        Some(d) => ordered_partitions(Set::underline(n), Some(n as usize - d)),
        None => ordered_partitions(Set::underline(n), None),
    }
}

pub fn top(n: u32) -> OrderedPartition {
    OrderedPartition::top(Set::underline(n))
}

/// Permutations of `ground` in lexicographic order.
pub fn permutations(ground: Set) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(rest: Set, cur: &mut Word, out: &mut Vec<Word>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for x in rest.iter() {
            cur.push(x);
            go(rest.without(x), cur, out);
            cur.pop();
        }
    }
    go(ground, &mut cur, &mut out);
    out
}

/// Position of a permutation of `underline{m}` in [`permutations`] order.
pub fn lex_rank(w: &[u32]) -> usize {
    let m = w.len();
    let mut rank = 0;
    let mut used = Set::EMPTY;
    for (i, &x) in w.iter().enumerate() {
        let smaller = (x as usize - 1) - used.rank(x);
        rank = rank * (m - i) + smaller;
        used.insert(x);
    }
    rank
}

/// The vertices of a face: every way of ordering each block.
pub fn vertices_of(f: &OrderedPartition) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for &b in f.blocks() {
        let perms = permutations(b);
        out = out
            .iter()
            .flat_map(|pre| {
                perms.iter().map(move |p| {
                    let mut w = pre.clone();
                    w.extend(p);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn vertex_face(w: &[u32]) -> OrderedPartition {
    OrderedPartition::from_blocks_unchecked(w.iter().map(|&x| Set::singleton(x)).collect())
}

/// The vertex word of a face all of whose blocks are singletons.
pub fn as_vertex(f: &OrderedPartition) -> Result<Word> {
    if !f.is_vertex() {
        return Err(Error::Invalid(format!("{f} is not a vertex")));
    }
    Ok(f.word())
}

/// Smallest face containing all the given vertices: cut wherever every word has
/// the same prefix set.
pub fn span(words: &[Word]) -> Result<OrderedPartition> {
    let first = words.first().ok_or_else(|| Error::Invalid("span of no vertices".into()))?;
    let mut blocks = Vec::new();
    let mut start = 0;
    let mut prefix: Vec<Set> = vec![Set::EMPTY; words.len()];
    for k in 0..first.len() {
        for (p, w) in prefix.iter_mut().zip(words) {
            p.insert(w[k]);
        }
        if prefix.iter().all(|&p| p == prefix[0]) {
            blocks.push(Set::from_elems(first[start..=k].iter().copied()));
            start = k + 1;
        }
    }
    OrderedPartition::new(blocks)
}

/// Standardize a word over `ground` to a word over `underline{#ground}`.
pub fn standardize(w: &[u32], ground: Set) -> Word {
    w.iter().map(|&x| ground.rank(x) as u32).collect()
}

/// Inverse of [`standardize`].
pub fn unstandardize(w: &[u32], ground: Set) -> Word {
    w.iter().map(|&x| ground.nth(x as usize).expect("rank within ground")).collect()
}

/// A face of `P_{n_1} × ⋯ × P_{n_k}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductFace {
    pub factors: Vec<OrderedPartition>,
}

impl ProductFace {
    pub fn new(factors: Vec<OrderedPartition>) -> ProductFace {
        ProductFace { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    /// Accepts `×` or ASCII `x` between factors.
    pub fn parse(text: &str) -> Result<ProductFace> {
        let factors = text
            .split(|c| c == '×' || c == 'x')
            .map(|t| OrderedPartition::parse(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductFace { factors })
    }
}

impl fmt::Display for ProductFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" × "))
    }
}

impl fmt::Debug for ProductFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Span each coordinate of a family of product vertices.
pub fn span_product(vertices: &[Vec<Word>]) -> Result<ProductFace> {
    let k = vertices.first().map_or(0, |v| v.len());
    let factors = (0..k)
        .map(|i| span(&vertices.iter().map(|v| v[i].clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductFace { factors })
}

fn check_rs(ground: Set, r: u32, s: u32) -> Result<()> {
    if r == 0 || s == 0 || (r + s - 1) as usize != ground.len() {
        return Err(Error::Arity(format!("r + s = n + 1 fails for r={r}, s={s}, n={}", ground.len())));
    }
    Ok(())
}

/// The lower and upper grounds `underline{r}`, `overline{s}` of `Δ_{r,s}` inside
/// `ground`, by rank; they share the `r`-th element.
fn rs_grounds(ground: Set, r: u32) -> (Set, Set) {
    let pivot = ground.nth(r as usize).expect("r within ground");
    let lower = Set::from_elems(ground.iter().filter(|&x| x <= pivot));
    let upper = Set::from_elems(ground.iter().filter(|&x| x >= pivot));
    (lower, upper)
}

/// `Δ_{r,s}` on a vertex: the subwords on the `r` smallest and the `s` largest
/// letters, labels kept.
pub fn project_rs_vertex(w: &[u32], r: u32, s: u32) -> Result<(Word, Word)> {
    let ground = Set::from_elems(w.iter().copied());
    check_rs(ground, r, s)?;
    let (lo, hi) = rs_grounds(ground, r);
    Ok((
        w.iter().copied().filter(|&x| lo.contains(x)).collect(),
        w.iter().copied().filter(|&x| hi.contains(x)).collect(),
    ))
}

/// `Δ_{r,s}` on a face by the block rule: if `underline{r} ⊆ A_i` the left image is
/// the top cell and the right image replaces `A_i` by `A_i ∖ underline{r−1}`; if
/// `overline{s} ⊆ A_j` symmetrically; otherwise each block is cut into its parts
/// below and above the pivot, empty parts dropped.
pub fn project_rs(f: &OrderedPartition, r: u32, s: u32) -> Result<Image<ProductFace>> {
    let ground = f.support();
    check_rs(ground, r, s)?;
    let (lo, hi) = rs_grounds(ground, r);
    let pivot = lo.max().unwrap();
    let below = lo.without(pivot);
    let above = hi.without(pivot);
    let blocks = f.blocks();
    let (left, right): (Vec<Set>, Vec<Set>) = if let Some(i) = blocks.iter().position(|b| lo.is_subset(*b)) {
        let right = blocks
            .iter()
            .enumerate()
            .map(|(k, &b)| if k == i { b - below } else { b })
            .collect();
        (vec![lo], right)
    } else if let Some(j) = blocks.iter().position(|b| hi.is_subset(*b)) {
        let left = blocks
            .iter()
            .enumerate()
            .map(|(k, &b)| if k == j { b - above } else { b })
            .collect();
        (left, vec![hi])
    } else {
        (
            blocks.iter().map(|&b| b - above).filter(|b| !b.is_empty()).collect(),
            blocks.iter().map(|&b| b - below).filter(|b| !b.is_empty()).collect(),
        )
    };
    let face = ProductFace::new(vec![
        OrderedPartition::from_blocks_unchecked(left),
        OrderedPartition::from_blocks_unchecked(right),
    ]);
    let degenerate = face.dim() < f.dim();
    Ok(Image { face, degenerate })
}

/// `Δ_{r,s}` on a face computed from the images of all its vertices.
pub fn project_rs_by_vertices(f: &OrderedPartition, r: u32, s: u32) -> Result<Image<ProductFace>> {
    let images = vertices_of(f)
        .iter()
        .map(|w| project_rs_vertex(w, r, s).map(|(a, b)| vec![a, b]))
        .collect::<Result<Vec<_>>>()?;
    let face = span_product(&images)?;
    let degenerate = face.dim() < f.dim();
    Ok(Image { face, degenerate })
}

fn check_multi(len: usize, ns: &[u32]) -> Result<()> {
    let k = ns.len() as u32;
    if ns.is_empty() || ns.iter().any(|&x| x == 0) || ns.iter().sum::<u32>() != len as u32 + k - 1 {
        return Err(Error::Arity(format!("Σn_i = n + k − 1 fails for {ns:?} on P_{len}")));
    }
    Ok(())
}

/// `Δ_{n_1⋯n_k}` on a vertex, nested as `(Δ_{n_1,n_2} × 1)∘Δ_{n_1+n_2−1,n_3⋯}`.
pub fn project_multi_vertex(w: &[u32], ns: &[u32]) -> Result<Vec<Word>> {
    check_multi(w.len(), ns)?;
    if ns.len() == 1 {
        return Ok(vec![w.to_vec()]);
    }
    let head = ns[0] + ns[1] - 1;
    let mut rest = vec![head];
    rest.extend(&ns[2..]);
    let mut factors = project_multi_vertex(w, &rest)?;
    let (a, b) = project_rs_vertex(&factors[0], ns[0], ns[1])?;
    factors.splice(0..1, [a, b]);
    Ok(factors)
}

/// `Δ_{n_1⋯n_k}` nested the other way, `(1 × Δ_{n_2⋯})∘Δ_{n_1, n−n_1+1}`.
pub fn project_multi_vertex_right(w: &[u32], ns: &[u32]) -> Result<Vec<Word>> {
    check_multi(w.len(), ns)?;
    if ns.len() == 1 {
        return Ok(vec![w.to_vec()]);
    }
    let tail = w.len() as u32 + 1 - ns[0];
    let (a, b) = project_rs_vertex(w, ns[0], tail)?;
    let mut out = vec![a];
    out.extend(project_multi_vertex_right(&b, &ns[1..])?);
    Ok(out)
}

/// `Δ_{n_1⋯n_k}` on a face, through its vertices.
pub fn project_multi(f: &OrderedPartition, ns: &[u32]) -> Result<Image<ProductFace>> {
    let images = vertices_of(f).iter().map(|w| project_multi_vertex(w, ns)).collect::<Result<Vec<_>>>()?;
    let face = span_product(&images)?;
    let degenerate = face.dim() < f.dim();
    Ok(Image { face, degenerate })
}

/// `ρ_n = Δ_{2⋯2}` on a face, read as a face of `I^{n−1}`: the `i`-th factor is
/// `i|i+1` (0), `i+1|i` (1) or the edge `{i,i+1}` (free).
pub fn rho_face(f: &OrderedPartition) -> Result<Image<CubeFace>> {
    let n = f.support().len();
    if n <= 1 {
        return Ok(Image { face: CubeFace(Vec::new()), degenerate: f.dim() > 0 });
    }
    let img = project_multi(f, &vec![2; n - 1])?;
    let coords = img
        .face
        .factors
        .iter()
        .map(|g| match g.blocks() {
            [_] => CubeCoord::Free,
            [a, _] if (*a).min() < g.support().max() => CubeCoord::Zero,
            _ => CubeCoord::One,
        })
        .collect();
    Ok(Image { face: CubeFace(coords), degenerate: img.degenerate })
}

/// A vertex `v_1|v_2 × ⋯ × v_{n−1}|v_n` of the cube `I^{n−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeVertex(pub Vec<(u32, u32)>);

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("{a}|{b}")).collect();
        f.write_str(&parts.join(" × "))
    }
}

impl fmt::Debug for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl CubeVertex {
    /// All `2^{n−1}` vertices of `I^{n−1}`.
    pub fn all(n: u32) -> Vec<CubeVertex> {
        let m = n.saturating_sub(1);
        (0..1u32 << m)
            .map(|bits| {
                CubeVertex(
                    (1..=m).map(|i| if bits >> (i - 1) & 1 == 0 { (i, i + 1) } else { (i + 1, i) }).collect(),
                )
            })
            .collect()
    }
}

fn check_standard(w: &[u32]) -> Result<()> {
    if Set::from_elems(w.iter().copied()) != Set::underline(w.len() as u32) || w.len() > 63 {
        return Err(Error::Invalid(format!("{w:?} is not a permutation of 1..{}", w.len())));
    }
    Ok(())
}

/// `ρ_n`: coordinate `i` records which of `i, i+1` comes first.
pub fn rho(v: &[u32]) -> Result<CubeVertex> {
    check_standard(v)?;
    let n = v.len() as u32;
    let mut pos = vec![0; n as usize + 1];
    for (k, &x) in v.iter().enumerate() {
        pos[x as usize] = k;
    }
    Ok(CubeVertex(
        (1..n).map(|i| if pos[i as usize] < pos[i as usize + 1] { (i, i + 1) } else { (i + 1, i) }).collect(),
    ))
}

/// `γ_n`: start from the first pair, then put `k` last if the `(k−1)`-th pair ends
/// in `k`, first otherwise.
pub fn gamma(c: &CubeVertex) -> Word {
    let pairs = &c.0;
    let Some(&(a, b)) = pairs.first() else { return vec![1] };
    let mut w = std::collections::VecDeque::from([a, b]);
    for (idx, &(_, second)) in pairs.iter().enumerate().skip(1) {
        let k = idx as u32 + 2;
        if second == k {
            w.push_back(k);
        } else {
            w.push_front(k);
        }
    }
    w.into_iter().collect()
}

/// A vertex is cubical when it lies in the image of `γ_n`.
pub fn is_cubical(v: &[u32]) -> Result<bool> {
    Ok(gamma(&rho(v)?) == v)
}

/// The blocks of `A|B` in `h`-order: the block without `n` first.
pub fn h_order(a: Set, b: Set) -> Result<(Set, Set)> {
    check_two_block(a, b)?;
    let n = (a | b).max().unwrap();
    Ok(if a.contains(n) { (b, a) } else { (a, b) })
}

fn check_two_block(a: Set, b: Set) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("A|B needs two nonempty blocks".into()));
    }
    if !a.is_disjoint(b) {
        return Err(Error::NotDisjoint);
    }
    let n = (a | b).len() as u32;
    if a | b != Set::underline(n) {
        return Err(Error::Invalid(format!("{a}|{b} is not a partition of 1..{n}")));
    }
    Ok(())
}

/// The face `A|B` as a product of two faces of `P_n`: the first varies the order
/// of the block without `n`, the second the order of the block containing `n`.
pub fn embed_h(a: Set, b: Set) -> Result<ProductFace> {
    let (x, _) = h_order(a, b)?;
    let singletons = |s: Set| s.iter().map(Set::singleton).collect::<Vec<_>>();
    let (first, second) = if x == a {
        // n ∈ B: A|b_1|⋯|b_m × a_1|⋯|a_ℓ|B
        let mut f = vec![a];
        f.extend(singletons(b));
        let mut g = singletons(a);
        g.push(b);
        (g, f)
    } else {
        // n ∈ A: a_1|⋯|a_m|B × A|b_1|⋯|b_ℓ
        let mut f = singletons(a);
        f.push(b);
        let mut g = vec![a];
        g.extend(singletons(b));
        (f, g)
    };
    Ok(ProductFace::new(vec![
        OrderedPartition::from_blocks_unchecked(first),
        OrderedPartition::from_blocks_unchecked(second),
    ]))
}

/// `h_{A|B}` on a vertex of `P_ℓ × P_m`: relabel onto the blocks and read `A` then `B`.
pub fn h_vertex(a: Set, b: Set, x: &[u32], y: &[u32]) -> Result<Word> {
    let (bx, by) = h_order(a, b)?;
    if x.len() != bx.len() || y.len() != by.len() {
        return Err(Error::Arity(format!("h_{{{a}|{b}}} expects P_{} × P_{}", bx.len(), by.len())));
    }
    let wx = unstandardize(x, bx);
    let wy = unstandardize(y, by);
    Ok(if bx == a { [wx, wy].concat() } else { [wy, wx].concat() })
}

/// `h_{A|B}` on a face of `P_ℓ × P_m`.
pub fn h_face(a: Set, b: Set, fx: &OrderedPartition, fy: &OrderedPartition) -> Result<OrderedPartition> {
    let (bx, by) = h_order(a, b)?;
    let rx: Vec<Set> = fx.blocks().iter().map(|s| s.map(|i| bx.nth(i as usize).unwrap())).collect();
    let ry: Vec<Set> = fy.blocks().iter().map(|s| s.map(|i| by.nth(i as usize).unwrap())).collect();
    Ok(OrderedPartition::from_blocks_unchecked(if bx == a { [rx, ry].concat() } else { [ry, rx].concat() }))
}

/// `φ_{A|B}` on a vertex: the unshuffle into the block without `n`, then the
/// block with `n`, both standardized.
pub fn phi_vertex(a: Set, b: Set, w: &[u32]) -> Result<(Word, Word)> {
    let (x, y) = h_order(a, b)?;
    let wx: Word = w.iter().copied().filter(|&e| x.contains(e)).collect();
    let wy: Word = w.iter().copied().filter(|&e| y.contains(e)).collect();
    Ok((standardize(&wx, x), standardize(&wy, y)))
}

/// `φ_{A|B}` on a face, through its vertices.
pub fn phi_face(a: Set, b: Set, f: &OrderedPartition) -> Result<Image<ProductFace>> {
    let images = vertices_of(f)
        .iter()
        .map(|w| phi_vertex(a, b, w).map(|(x, y)| vec![x, y]))
        .collect::<Result<Vec<_>>>()?;
    let face = span_product(&images)?;
    let degenerate = face.dim() < f.dim();
    Ok(Image { face, degenerate })
}

fn unstandardize_cube(c: &[(u32, u32)], shift: i64) -> Vec<(u32, u32)> {
    c.iter().map(|&(x, y)| ((x as i64 + shift) as u32, (y as i64 + shift) as u32)).collect()
}

/// `δ_{A|B} = h_{A|B}∘(γ_ℓ × γ_m)∘ρ_{n−1}` on a vertex of `P_{n−1}`.
pub fn coface_vertex(a: Set, b: Set, v: &[u32]) -> Result<Word> {
    let (x, _) = h_order(a, b)?;
    if v.len() + 1 != (a | b).len() {
        return Err(Error::Arity(format!("δ_{{{a}|{b}}} acts on P_{}", (a | b).len() - 1)));
    }
    let c = if v.len() > 1 { rho(v)?.0 } else { Vec::new() };
    let l = x.len();
    let c1 = CubeVertex(c[..l - 1].to_vec());
    let c2 = CubeVertex(unstandardize_cube(&c[l - 1..], -(l as i64 - 1)));
    h_vertex(a, b, &gamma(&c1), &gamma(&c2))
}

/// `β_{A|B} = γ_{n−1}∘(ρ_ℓ × ρ_m)∘φ_{A|B}` on a vertex of `P_n`.
pub fn codegeneracy_vertex(a: Set, b: Set, w: &[u32]) -> Result<Word> {
    let (x, y) = phi_vertex(a, b, w)?;
    let mut c = if x.len() > 1 { rho(&x)?.0 } else { Vec::new() };
    if y.len() > 1 {
        c.extend(unstandardize_cube(&rho(&y)?.0, x.len() as i64 - 1));
    }
    Ok(if c.is_empty() { vec![1] } else { gamma(&CubeVertex(c)) })
}

fn image_of(f: &OrderedPartition, map: impl Fn(&[u32]) -> Result<Word>) -> Result<Image<OrderedPartition>> {
    let images = vertices_of(f).iter().map(|w| map(w)).collect::<Result<Vec<_>>>()?;
    let face = span(&images)?;
    let degenerate = face.dim() < f.dim();
    Ok(Image { face, degenerate })
}

/// `δ_{A|B}` on a face of `P_{n−1}`.
pub fn coface(a: Set, b: Set, f: &OrderedPartition) -> Result<Image<OrderedPartition>> {
    image_of(f, |w| coface_vertex(a, b, w))
}

/// `β_{A|B}` on a face of `P_n`.
pub fn codegeneracy(a: Set, b: Set, f: &OrderedPartition) -> Result<Image<OrderedPartition>> {
    image_of(f, |w| codegeneracy_vertex(a, b, w))
}

/// Apply `δ_{A_1|B_1}⋯δ_{A_k|B_k}` (rightmost first) to every vertex of `P_m`.
pub fn coface_string_vertices(ops: &[(Set, Set)], m: u32) -> Result<Vec<Word>> {
    let mut ws = permutations(Set::underline(m));
    for &(a, b) in ops.iter().rev() {
        ws = ws.iter().map(|w| coface_vertex(a, b, w)).collect::<Result<_>>()?;
    }
    Ok(ws)
}

/// The image of the top cell of `P_m` under a string of cofaces.
pub fn coface_string(ops: &[(Set, Set)], m: u32) -> Result<Image<OrderedPartition>> {
    let face = span(&coface_string_vertices(ops, m)?)?;
    let degenerate = face.dim() + 1 < m as usize;
    Ok(Image { face, degenerate })
}

/// The cellular coface `h_{A|B}∘Δ_{ℓ,m}`. Since `ρ_{n−1} = (ρ_ℓ × ρ_m)∘Δ_{ℓ,m}`, the
/// vertex map [`coface_vertex`] is this one preceded by the retractions `γ_ℓρ_ℓ × γ_mρ_m`,
/// which are not cellular. Face labels and the two-way factorization are read off
/// this version.
pub fn cellular_coface_vertex(a: Set, b: Set, v: &[u32]) -> Result<Word> {
    let (x, y) = h_order(a, b)?;
    if v.len() + 1 != (a | b).len() {
        return Err(Error::Arity(format!("δ_{{{a}|{b}}} acts on P_{}", (a | b).len() - 1)));
    }
    let (l, m) = (x.len() as u32, y.len() as u32);
    let (u, w) = project_rs_vertex(v, l, m)?;
    h_vertex(a, b, &u, &standardize(&w, Set::range(l, l + m - 1)))
}

/// The face of `P_n` hit by the top cell of `P_m` under a string of cellular cofaces,
/// rightmost first.
pub fn cellular_coface_string(ops: &[(Set, Set)], m: u32) -> Result<Image<OrderedPartition>> {
    let mut ws = permutations(Set::underline(m));
    for &(a, b) in ops.iter().rev() {
        ws = ws.iter().map(|w| cellular_coface_vertex(a, b, w)).collect::<Result<_>>()?;
    }
    let face = span(&ws)?;
    let degenerate = face.dim() + 1 < m as usize;
    Ok(Image { face, degenerate })
}

/// The pairs `(p_i, q_i)` attached to the dimensions `(n_1,…,n_k)`.
pub fn q_indices(ns: &[u32]) -> Vec<(u32, u32)> {
    (0..ns.len())
        .map(|i| (1 + ns[..i].iter().sum::<u32>(), 1 + ns[i + 1..].iter().sum::<u32>()))
        .collect()
}

/// Membership of `U|V` in `𝒬_{p,q}(n)`: `underline{p}` and `overline{q}` each lie in one block.
pub fn in_q(u: Set, v: Set, p: u32, q: u32, n: u32) -> bool {
    let lo = Set::underline(p);
    let hi = Set::range(n + 1 - q, n);
    (lo.is_subset(u) || lo.is_subset(v)) && (hi.is_subset(u) || hi.is_subset(v))
}

/// Whether `U|V` lies in some `𝒬_{p_i,q_i}(n)` for the dimensions `ns`.
pub fn in_some_q(u: Set, v: Set, ns: &[u32]) -> bool {
    let n = (u | v).len() as u32;
    q_indices(ns).into_iter().any(|(p, q)| in_q(u, v, p, q, n))
}

/// The three partitions `K|L`, `M|N`, `C|D` with `d_{A|B} = ϱ_{C|D} d_{M|N} d_{K|L}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Klmncd {
    pub kl: (Set, Set),
    pub mn: (Set, Set),
    pub cd: (Set, Set),
}

fn shift(s: Set, z: i64) -> Set {
    crate::setcalc::translate(s, z).expect("shift stays non-negative")
}

fn index(m: Set, a: Set) -> Set {
    crate::setcalc::index_map(m, a).expect("subset of indexing set")
}

/// The case table for `A|B ∉ 𝒬_{1,s}(n) ∪ 𝒬_{r,1}(n)`, transcribed literally.
pub fn decompose_klmncd(a: Set, b: Set, r: u32, s: u32) -> Result<Klmncd> {
    check_two_block(a, b)?;
    let n = (a | b).len() as u32;
    if r + s != n + 1 || r == 0 || s == 0 {
        return Err(Error::Arity(format!("r + s = n + 1 fails for r={r}, s={s}, n={n}")));
    }
    if in_some_q(a, b, &[r - 1, s - 1]) {
        return Err(Error::NotApplicable);
    }
    let lo = Set::underline(r);
    let hi = Set::range(r, n);
    let all = Set::underline(n);
    let rest = Set::underline(n - 1);
    let (ra, na) = (a.contains(r), a.contains(n));
    let kl = if ra { ((lo & a) | hi, lo & b) } else { (lo & a, (lo & b) | hi) };
    let mn = if !ra {
        let m = shift(hi & a, -1);
        (m, rest - m)
    } else if na {
        let nn = shift(hi & b, -(kl.1.len() as i64));
        (rest - nn, nn)
    } else {
        let m = index(all - kl.1, a);
        (m, rest - m)
    };
    let cd = match (ra, na) {
        (false, false) => {
            let c = index(all - b, lo & a);
            (c, rest - c)
        }
        (true, false) => {
            let c = index(all - a, hi & b);
            (c, rest - c)
        }
        (false, true) => {
            let d = index(all - b, hi & a);
            (rest - d, d)
        }
        (true, true) => {
            let d = index(all - a, lo & b);
            (rest - d, d)
        }
    };
    Ok(Klmncd { kl, mn, cd })
}

/// The `M|N` that reproduces the image of `Δ_{r,s}∘δ_{A|B}`: the block holding
/// `r` also takes `underline{r−2}`, and the upper parts of `A`, `B` move down by one.
pub fn geometric_mn(a: Set, b: Set, r: u32) -> (Set, Set) {
    let n = (a | b).len() as u32;
    let hi = Set::range(r, n);
    let low = Set::underline(r.saturating_sub(2));
    let sa = shift(hi & a, -1);
    let sb = shift(hi & b, -1);
    if a.contains(r) {
        (low | sa, sb)
    } else {
        (sa, low | sb)
    }
}

/// A singular permutahedron `P_m → X`, recorded by its values on the vertices of
/// `P_m` in [`permutations`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularCell<T> {
    pub m: u32,
    pub values: Vec<T>,
}

impl SingularCell<Word> {
    /// The identity cell of `P_m`.
    pub fn identity(m: u32) -> SingularCell<Word> {
        SingularCell { m, values: permutations(Set::underline(m)) }
    }
}

impl<T: Clone> SingularCell<T> {
    pub fn at(&self, w: &[u32]) -> &T {
        &self.values[lex_rank(w)]
    }

    /// `f∘g` for a vertex map `g: P_{m'} → P_m`.
    pub fn precompose(&self, m_new: u32, g: impl Fn(&[u32]) -> Result<Word>) -> Result<SingularCell<T>> {
        let values = permutations(Set::underline(m_new))
            .iter()
            .map(|v| g(v).map(|w| self.at(&w).clone()))
            .collect::<Result<_>>()?;
        Ok(SingularCell { m: m_new, values })
    }

    /// The face operator `d_{A|B}(f) = f∘δ_{A|B}`.
    pub fn face(&self, a: Set, b: Set) -> Result<SingularCell<T>> {
        self.precompose(self.m - 1, |v| coface_vertex(a, b, v))
    }

    /// The degeneracy `ϱ_{A|B}(f) = f∘β_{A|B}`.
    pub fn degeneracy(&self, a: Set, b: Set) -> Result<SingularCell<T>> {
        self.precompose(self.m + 1, |v| codegeneracy_vertex(a, b, v))
    }
}

/// `(a × b)∘Δ_{r,s}` for singular cells on `P_r` and `P_s`.
pub fn product_cell<T: Clone, U: Clone>(a: &SingularCell<T>, b: &SingularCell<U>) -> Result<SingularCell<(T, U)>> {
    let (r, s) = (a.m, b.m);
    let n = r + s - 1;
    let upper = Set::range(r, n);
    let values = permutations(Set::underline(n))
        .iter()
        .map(|v| {
            let (x, y) = project_rs_vertex(v, r, s)?;
            Ok((a.at(&x).clone(), b.at(&standardize(&y, upper)).clone()))
        })
        .collect::<Result<_>>()?;
    Ok(SingularCell { m: n, values })
}

/// Which branch of the face operator on a product applies to `A|B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductFaceBranch {
    /// `d_{r̲∩A|r̲∩B}(a) × b`
    Left(Set, Set),
    /// `a × d_{(s̄∩A)−r+1|(s̄∩B)−r+1}(b)`
    Right(Set, Set),
    /// `ϱ_{C|D} d_{M|N} d_{K|L}(a × b)`
    Composite(Klmncd),
}

pub fn product_face_branch(a: Set, b: Set, r: u32, s: u32) -> Result<ProductFaceBranch> {
    check_two_block(a, b)?;
    let n = (a | b).len() as u32;
    if r + s != n + 1 || r == 0 || s == 0 {
        return Err(Error::Arity(format!("r + s = n + 1 fails for r={r}, s={s}, n={n}")));
    }
    let lo = Set::underline(r);
    let hi = Set::range(r, n);
    if in_q(a, b, 1, s, n) {
        Ok(ProductFaceBranch::Left(lo & a, lo & b))
    } else if in_q(a, b, r, 1, n) {
        let z = 1 - r as i64;
        Ok(ProductFaceBranch::Right(shift(hi & a, z), shift(hi & b, z)))
    } else {
        decompose_klmncd(a, b, r, s).map(ProductFaceBranch::Composite)
    }
}

/// The face operator `d_{A|B}` on the product `a × b` of singular cells, by the
/// three-branch rule. In the composite branch `d_{K|L}` and `d_{M|N}` are evaluated
/// in the multipermutahedral model: `a∘h_{K₁|L₁} × b∘h_{M₃|N₃}` composed with
/// `Δ_{a₁,a₂,b₁,b₂}`, then `β_{C|D}`. The `M|N` used there is [`geometric_mn`].
pub fn product_face_op<T: Clone, U: Clone>(
    a_set: Set,
    b_set: Set,
    a: &SingularCell<T>,
    b: &SingularCell<U>,
) -> Result<SingularCell<(T, U)>> {
    let (r, s) = (a.m, b.m);
    match product_face_branch(a_set, b_set, r, s)? {
        ProductFaceBranch::Left(u, v) => product_cell(&a.face(u, v)?, b),
        ProductFaceBranch::Right(u, v) => product_cell(a, &b.face(u, v)?),
        ProductFaceBranch::Composite(k) => {
            let n = r + s - 1;
            let (k1, l1) = (k.kl.0 & Set::underline(r), k.kl.1 & Set::underline(r));
            let (hx, hy) = h_order(k1, l1)?;
            let (a1, a2) = (hx.len() as u32, hy.len() as u32);
            let (m, nn) = geometric_mn(a_set, b_set, r);
            let p = a1 + a2 - 1;
            let m3 = shift(m & Set::range(p, n - 1), 1 - p as i64);
            let n3 = shift(nn & Set::range(p, n - 1), 1 - p as i64);
            let (mx, my) = h_order(m3, n3)?;
            let (b1, b2) = (mx.len() as u32, my.len() as u32);
            let (c, d) = k.cd;
            let values = permutations(Set::underline(n))
                .iter()
                .map(|v| {
                    let w = codegeneracy_vertex(c, d, v)?;
                    let xs = project_multi_vertex(&w, &[a1, a2, b1, b2])?;
                    let xs = standardize_factors(&xs, &[a1, a2, b1, b2]);
                    let left = h_vertex(k1, l1, &xs[0], &xs[1])?;
                    let right = h_vertex(m3, n3, &xs[2], &xs[3])?;
                    Ok((a.at(&left).clone(), b.at(&right).clone()))
                })
                .collect::<Result<_>>()?;
            Ok(SingularCell { m: n, values })
        }
    }
}

/// Relabel the factors of a multi-projection onto standard grounds.
pub fn standardize_factors(xs: &[Word], ns: &[u32]) -> Vec<Word> {
    let mut p = 1;
    xs.iter()
        .zip(ns)
        .map(|(x, &k)| {
            let w = standardize(x, Set::range(p, p + k - 1));
            p += k - 1;
            w
        })
        .collect()
}

/// The image of a singular cell valued in product vertices.
pub fn cell_image(cell: &SingularCell<(Word, Word)>) -> Result<ProductFace> {
    let vs: Vec<Vec<Word>> = cell.values.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
    span_product(&vs)
}

/// The two coface strings of the two-way factorization of
/// `A_1|⋯|A_{k+1}`, leftmost operator first.
pub fn factorize_two_ways(p: &OrderedPartition) -> Result<(Vec<(Set, Set)>, Vec<(Set, Set)>)> {
    let k = p.len().checked_sub(1).filter(|&k| k >= 2).ok_or_else(|| Error::Invalid("need at least 3 blocks".into()))?;
    let n = p.support().len() as u32;
    if !p.is_full() || p.support() != Set::underline(n) {
        return Err(Error::Invalid(format!("{p} is not a partition of 1..{n}")));
    }
    let mut first = Vec::new();
    let mut cur = p.blocks().to_vec();
    for _ in 0..k {
        let rest = cur[1..].iter().fold(Set::EMPTY, |x, &y| x | y);
        first.push((cur[0], rest));
        if cur.len() > 2 {
            cur = square_op(cur[0], &cur[1..])?.into_blocks();
        }
    }
    let mut second = Vec::new();
    let mut cur = p.blocks().to_vec();
    for _ in 0..k {
        let last = *cur.last().unwrap();
        let init = &cur[..cur.len() - 1];
        second.push((init.iter().fold(Set::EMPTY, |x, &y| x | y), last));
        if cur.len() > 2 {
            cur = square_op(last, init)?.into_blocks();
        }
    }
    Ok((first, second))
}

/// Both sides of the quadratic relation `δ_{A|B∪C}δ_{A□(B|C)} = δ_{A∪B|C}δ_{(A|B)□C}`.
pub fn quadrel(a: Set, b: Set, c: Set) -> Result<([(Set, Set); 2], [(Set, Set); 2])> {
    let (x, y) = factorize_two_ways(&OrderedPartition::new(vec![a, b, c])?)?;
    Ok(([x[0], x[1]], [y[0], y[1]]))
}

/// All 2-block partitions `A|B` of `underline{n}`.
pub fn two_block_partitions(n: u32) -> Vec<(Set, Set)> {
    let mut out = Vec::new();
    collect_partitions(Set::underline(n), Some(2), &mut Vec::new(), &mut |bl| out.push((bl[0], bl[1])));
    out.sort();
    out
}

/// Check, for every partition of `underline{n}` with at least three blocks and
/// `3 ≤ n ≤ max_n`, that both cellular factorizations land on the partition itself.
/// Returns the number of partitions checked.
pub fn check_relations(max_n: u32) -> Result<usize> {
    let mut checked = 0;
    for n in 3..=max_n {
        for f in ordered_partitions(Set::underline(n), None) {
            if f.len() < 3 {
                continue;
            }
            let (first, second) = factorize_two_ways(&f)?;
            let m = n + 1 - f.len() as u32;
            let x = cellular_coface_string(&first, m)?;
            let y = cellular_coface_string(&second, m)?;
            if x != y || x.face != f || x.degenerate {
                return Err(Error::Verification(format!("{f}: {} vs {}", x.face, y.face)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
