//! Ground-set combinatorics: finite integer sets, ordered partitions, shuffle
//! signs, indexing maps, the lower/upper disjoint unions and the `□` operation.
//!
//! Sets are bitmasks over `0..64`; every polytope handled by this crate lives far
//! below that bound.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// A finite set of small non-negative integers, iterated in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Set(u64);

impl Set {
    pub const EMPTY: Set = Set(0);

    pub fn from_bits(bits: u64) -> Set {
        Set(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(x: u32) -> Set {
        assert!(x < 64, "element {x} out of range");
        Set(1 << x)
    }

    /// `{lo, …, hi}`; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Set {
        if lo > hi {
            return Set::EMPTY;
        }
        assert!(hi < 64, "element {hi} out of range");
        let top = if hi == 63 { u64::MAX } else { (1u64 << (hi + 1)) - 1 };
        Set(top & !((1u64 << lo) - 1))
    }

    /// `underline{n} = {1, …, n}`.
    pub fn underline(n: u32) -> Set {
        Set::range(1, n)
    }

    pub fn from_elems<I: IntoIterator<Item = u32>>(it: I) -> Set {
        let mut s = Set::EMPTY;
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn contains(self, x: u32) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: u32) {
        assert!(x < 64, "element {x} out of range");
        self.0 |= 1 << x;
    }

    pub fn remove(&mut self, x: u32) {
        if x < 64 {
            self.0 &= !(1 << x);
        }
    }

    pub fn with(mut self, x: u32) -> Set {
        self.insert(x);
        self
    }

    pub fn without(mut self, x: u32) -> Set {
        self.remove(x);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn iter(self) -> SetIter {
        SetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset(self, other: Set) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Set) -> bool {
        self.0 & other.0 == 0
    }

    /// Number of elements `≤ x`; for `x ∈ self` this is the 1-based rank.
    pub fn rank(self, x: u32) -> usize {
        let mask = if x >= 63 { u64::MAX } else { (1u64 << (x + 1)) - 1 };
        (self.0 & mask).count_ones() as usize
    }

    /// The `k`-th smallest element, 1-based.
    pub fn nth(self, k: usize) -> Option<u32> {
        self.iter().nth(k.checked_sub(1)?)
    }

    pub fn sum(self) -> u32 {
        self.iter().sum()
    }

    /// Apply an injective relabelling elementwise.
    pub fn map(self, f: impl Fn(u32) -> u32) -> Set {
        Set::from_elems(self.iter().map(f))
    }
}

pub struct SetIter(u64);

impl Iterator for SetIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(x)
    }
}

impl BitOr for Set {
    type Output = Set;
    fn bitor(self, o: Set) -> Set {
        Set(self.0 | o.0)
    }
}

impl BitAnd for Set {
    type Output = Set;
    fn bitand(self, o: Set) -> Set {
        Set(self.0 & o.0)
    }
}

impl Sub for Set {
    type Output = Set;
    fn sub(self, o: Set) -> Set {
        Set(self.0 & !o.0)
    }
}

impl Ord for Set {
    /// Lexicographic on the ascending element sequences.
    fn cmp(&self, other: &Set) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Set {
    fn partial_cmp(&self, other: &Set) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&block_string(*self))
    }
}

impl fmt::Debug for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Render one block: digits run together when every element is below 10,
/// comma separated otherwise. A lone element above 9 gets a trailing comma so
/// that it does not read back as several digits.
pub fn block_string(s: Set) -> String {
    if s.iter().all(|x| x < 10) {
        s.iter().map(|x| x.to_string()).collect()
    } else {
        let body = s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if s.len() == 1 {
            body + ","
        } else {
            body
        }
    }
}

/// Parse one block written as a digit run (`"136"`) or a comma list (`"1,10"`).
pub fn parse_block(text: &str) -> Result<Set> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty block".into()));
    }
    let mut s = Set::EMPTY;
    let mut push = |x: u32| -> Result<()> {
        if x >= 64 {
            return Err(Error::Parse(format!("element {x} out of range")));
        }
        if s.contains(x) {
            return Err(Error::Parse(format!("repeated element {x}")));
        }
        s.insert(x);
        Ok(())
    };
    if text.contains(',') {
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let x = tok.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer {tok:?}")))?;
            push(x)?;
        }
    } else {
        for c in text.chars() {
            let d = c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad character {c:?}")))?;
            push(d)?;
        }
    }
    Ok(s)
}

/// Sign of the permutation carrying `sorted(left ∪ right)` to
/// `(sorted left, sorted right)`.
pub fn shuffle_sign(left: Set, right: Set) -> Result<i32> {
    if !left.is_disjoint(right) {
        return Err(Error::NotDisjoint);
    }
    Ok(shuffle_sign_unchecked(left, right))
}

pub(crate) fn shuffle_sign_unchecked(left: Set, right: Set) -> i32 {
    let inversions: usize = right.iter().map(|b| left.len() - left.rank(b)).sum();
    parity(inversions)
}

pub(crate) fn parity(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of a sequence of distinct integers relative to its sorted order.
pub fn sequence_sign(seq: &[u32]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    parity(inv)
}

/// An ordered sequence of disjoint nonempty blocks over a ground set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    blocks: Vec<Set>,
    ground: Set,
}

impl OrderedPartition {
    /// A full partition of the union of `blocks`.
    pub fn new(blocks: Vec<Set>) -> Result<OrderedPartition> {
        let ground = blocks.iter().fold(Set::EMPTY, |a, &b| a | b);
        OrderedPartition::with_ground(blocks, ground)
    }

    pub fn with_ground(blocks: Vec<Set>, ground: Set) -> Result<OrderedPartition> {
        let mut seen = Set::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::NotDisjoint);
            }
            seen = seen | b;
        }
        if !seen.is_subset(ground) {
            return Err(Error::NotSubset);
        }
        Ok(OrderedPartition { blocks, ground })
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<Set>) -> OrderedPartition {
        let ground = blocks.iter().fold(Set::EMPTY, |a, &b| a | b);
        OrderedPartition { blocks, ground }
    }

    /// The single-block partition `ground`.
    pub fn top(ground: Set) -> OrderedPartition {
        OrderedPartition { blocks: vec![ground], ground }
    }

    pub fn blocks(&self) -> &[Set] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Set> {
        self.blocks
    }

    pub fn ground(&self) -> Set {
        self.ground
    }

    pub fn support(&self) -> Set {
        self.blocks.iter().fold(Set::EMPTY, |a, &b| a | b)
    }

    pub fn is_full(&self) -> bool {
        self.support() == self.ground
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Dimension of the permutahedral face it indexes: `Σ (#A_i − 1)`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.len() - 1).sum()
    }

    pub fn is_vertex(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// The concatenated block word with each block read in ascending order.
    pub fn word(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.iter()).collect()
    }

    pub fn relabel(&self, f: impl Fn(u32) -> u32 + Copy) -> OrderedPartition {
        OrderedPartition {
            blocks: self.blocks.iter().map(|b| b.map(f)).collect(),
            ground: self.ground.map(f),
        }
    }

    pub fn parse(text: &str) -> Result<OrderedPartition> {
        let blocks = text.split('|').map(parse_block).collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(blocks)
    }

    pub fn signs(&self) -> Result<PartitionSigns> {
        partition_signs(self)
    }
}

impl Ord for OrderedPartition {
    /// Block count first, then lexicographic on block contents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks
            .len()
            .cmp(&other.blocks.len())
            .then_with(|| self.blocks.cmp(&other.blocks))
            .then_with(|| self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for OrderedPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&blocks_string(&self.blocks))
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn blocks_string(blocks: &[Set]) -> String {
    blocks.iter().map(|&b| block_string(b)).collect::<Vec<_>>().join("|")
}

/// All ordered partitions of `ground`, optionally with exactly `num_blocks`
/// blocks, sorted by block count and then lexicographically on block contents.
pub fn ordered_partitions(ground: Set, num_blocks: Option<usize>) -> Vec<OrderedPartition> {
    let mut out = Vec::new();
    if ground.is_empty() {
        return out;
    }
    let mut prefix = Vec::new();
    collect_partitions(ground, num_blocks, &mut prefix, &mut |blocks| {
        out.push(OrderedPartition { blocks: blocks.to_vec(), ground })
    });
    out.sort();
    out
}

/// Visit every ordered partition of `rest` appended to `prefix`.
pub(crate) fn collect_partitions(
    rest: Set,
    num_blocks: Option<usize>,
    prefix: &mut Vec<Set>,
    visit: &mut dyn FnMut(&[Set]),
) {
    if rest.is_empty() {
        if num_blocks.map_or(true, |k| k == prefix.len()) {
            visit(prefix);
        }
        return;
    }
    if let Some(k) = num_blocks {
        if prefix.len() >= k || rest.len() < k - prefix.len() {
            return;
        }
    }
    for first in nonempty_subsets(rest) {
        prefix.push(first);
        collect_partitions(rest - first, num_blocks, prefix, visit);
        prefix.pop();
    }
}

/// Nonempty subsets of `s`, in increasing bitmask order.
pub fn nonempty_subsets(s: Set) -> impl Iterator<Item = Set> {
    let full = s.bits();
    let mut sub: u64 = 0;
    let mut done = full == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        sub = sub.wrapping_sub(full) & full;
        if sub == 0 {
            done = true;
            return None;
        }
        Some(Set::from_bits(sub))
    })
}

/// Ordered 2-block splits `U|V` of a block.
pub fn splits(block: Set) -> impl Iterator<Item = (Set, Set)> {
    nonempty_subsets(block).filter(move |&u| u != block).map(move |u| (u, block - u))
}

/// The four signs attached to a full ordered partition `A_0|A_1|…|A_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionSigns {
    pub psgn: i32,
    pub sgn1: i32,
    pub sgn2: i32,
    pub rsgn: i32,
}

pub fn partition_signs(a: &OrderedPartition) -> Result<PartitionSigns> {
    if !a.is_full() {
        return Err(Error::NotFull);
    }
    Ok(block_signs(a.blocks()))
}

/// The same four signs evaluated directly on a block sequence. The elements
/// present are taken as the ground, so this also serves faces with deletions.
pub fn block_signs(blocks: &[Set]) -> PartitionSigns {
    let psgn = psgn(blocks);
    let p = blocks.len().saturating_sub(1);
    let e1: usize = (1..=p).map(|i| i * blocks[p - i].len()).sum();
    let e2 = e1 + p * p.saturating_sub(1) / 2;
    PartitionSigns { psgn, sgn1: parity(e1) * psgn, sgn2: parity(e2) * psgn, rsgn: rsgn(blocks) }
}

pub fn psgn(blocks: &[Set]) -> i32 {
    let word: Vec<u32> = blocks.iter().flat_map(|b| b.iter()).collect();
    sequence_sign(&word)
}

/// `(−1)^{½(Σ (#A_i)² − N)}` with `N` the number of elements present.
pub fn rsgn(blocks: &[Set]) -> i32 {
    let squares: usize = blocks.iter().map(|b| b.len() * b.len()).sum();
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    parity((squares - total) / 2)
}

/// The indexing map `I_M`, applied to a subset `A ⊆ M`.
pub fn index_map(m: Set, a: Set) -> Result<Set> {
    if !a.is_subset(m) {
        return Err(Error::NotSubset);
    }
    Ok(a.map(|x| m.rank(x) as u32))
}

/// Translation `M + z`.
pub fn translate(m: Set, z: i64) -> Result<Set> {
    let mut out = Set::EMPTY;
    for x in m.iter() {
        let y = x as i64 + z;
        if y < 0 {
            return Err(Error::Negative);
        }
        if y >= 64 {
            return Err(Error::Invalid(format!("element {y} out of range")));
        }
        out.insert(y as u32);
    }
    Ok(out)
}

/// Lower disjoint union `A ⊔̲ B` with respect to `U`.
pub fn lower_union(a: Set, b: Set, u: Set) -> Result<Set> {
    check_union_args(a, b, u)?;
    if a.is_empty() || b.is_empty() {
        return Ok(a | b);
    }
    let rest = u - a;
    let base = translate(index_map(rest, b)?, a.len() as i64 - 1)?;
    if b.min() > rest.min() {
        Ok(base)
    } else {
        Ok(base | Set::underline(a.len() as u32))
    }
}

/// Upper disjoint union `A ⊔̄ B` with respect to `U`.
pub fn upper_union(a: Set, b: Set, u: Set) -> Result<Set> {
    check_union_args(a, b, u)?;
    if a.is_empty() || b.is_empty() {
        return Ok(a | b);
    }
    let rest = u - b;
    let base = index_map(rest, a)?;
    if a.max() < rest.max() {
        Ok(base)
    } else {
        // the last #B elements of underline{#U}, shifted down by one
        let n = u.len() as u32;
        let top = Set::range(n - b.len() as u32 + 1, n);
        Ok(base | translate(top, -1)?)
    }
}

fn check_union_args(a: Set, b: Set, u: Set) -> Result<()> {
    if !a.is_disjoint(b) {
        return Err(Error::NotDisjoint);
    }
    if !(a | b).is_subset(u) {
        return Err(Error::NotSubset);
    }
    Ok(())
}

/// `A □ (B_1|…|B_k)`, which equals `(B_1|…|B_k) □ A`.
pub fn square_op(a: Set, bs: &[Set]) -> Result<OrderedPartition> {
    if a.is_empty() || bs.iter().any(|b| b.is_empty()) {
        return Err(Error::Invalid("□ needs nonempty sets".into()));
    }
    let mut u = a;
    for &b in bs {
        if !b.is_disjoint(u) {
            return Err(Error::NotDisjoint);
        }
        u = u | b;
    }
    let blocks = if a.max() < u.max() {
        bs.iter().map(|&b| lower_union(a, b, u)).collect::<Result<Vec<_>>>()?
    } else {
        bs.iter().map(|&b| upper_union(b, a, u)).collect::<Result<Vec<_>>>()?
    };
    Ok(OrderedPartition::from_blocks_unchecked(blocks))
}
