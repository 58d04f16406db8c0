//! Differential graded algebras, the bar construction, Hirsch structures
//! `{E_{p,q}}` and the twisted multiplications on `A ⊗ BA`.
//!
//! Conventions. Degrees are cohomological and `d` raises degree. A bar letter
//! `[ā]` has degree `|a| − 1`, and with `ε_i = Σ_{j≤i} |ā_j|`
//!
//! `d[ā_1|⋯|ā_n] = −Σ (−1)^{ε_{i−1}} [⋯|\overline{da_i}|⋯] − Σ (−1)^{ε_i} [⋯|\overline{a_i a_{i+1}}|⋯]`,
//!
//! which makes the projection `τ: BA → A` a twisting cochain with `∇τ = −τ⌣τ`,
//! where `∇f = d f − (−1)^{|f|} f d` and `f⌣g = μ(f⊗g)Δ` with Koszul signs.
//! Cochains of a cubical set are the Hom-dual of the chains:
//! `(df)(c) = −(−1)^{|f|} f(∂c)` and `(f⌣g)(c) = (−1)^{|f||g|} Σ f(c')g(c'')`.
//! Bar words pair with cobar words by `⟨[f̄_1|⋯], [c̄_1|⋯]⟩ = (−1)^{Σ_{i<j}|f̄_i||f̄_j|} Π f_i(c_i)`.

use crate::chains::{Chain, CochainComplex, Ring};
use crate::diagonals::top_diagonal_perm;
use crate::omega::{CubicalSet, Omega, OmegaWord, QCell};
use crate::setcalc::{parity, OrderedPartition, Set};
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// An element of a dga in its basis.
pub type AElem = Chain<usize>;

/// A dga with a finite basis, a unit, and sparse differential and product tables.
#[derive(Clone, Debug)]
pub struct DGAlgebra {
    names: Vec<String>,
    degrees: Vec<usize>,
    index: HashMap<String, usize>,
    unit: usize,
    d: Vec<AElem>,
    product: HashMap<(usize, usize), AElem>,
}

impl DGAlgebra {
    /// Basis `(name, degree)`, the unit's name, `d` on basis elements and products
    /// of non-unit basis pairs; missing entries are zero.
    pub fn new(
        basis: Vec<(String, usize)>,
        unit: &str,
        d: Vec<(String, Vec<(String, i64)>)>,
        product: Vec<((String, String), Vec<(String, i64)>)>,
    ) -> Result<DGAlgebra> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (n, deg) in basis {
            if index.insert(n.clone(), names.len()).is_some() {
                return Err(Error::Invalid(format!("basis element {n} listed twice")));
            }
            names.push(n);
            degrees.push(deg);
        }
        let look = |n: &str| index.get(n).copied().ok_or_else(|| Error::Invalid(format!("unknown basis element {n}")));
        let unit = look(unit)?;
        if degrees[unit] != 0 {
            return Err(Error::Invalid("the unit must have degree 0".into()));
        }
        let elem = |terms: &[(String, i64)]| -> Result<AElem> {
            let mut c = Chain::new();
            for (n, k) in terms {
                c.add(look(n)?, *k);
            }
            Ok(c)
        };
        let mut dt = vec![Chain::new(); names.len()];
        for (n, terms) in &d {
            let i = look(n)?;
            let v = elem(terms)?;
            if v.keys().any(|&j| degrees[j] != degrees[i] + 1) {
                return Err(Error::Invalid(format!("d({n}) has the wrong degree")));
            }
            dt[i] = v;
        }
        let mut pt = HashMap::new();
        for ((a, b), terms) in &product {
            let (i, j) = (look(a)?, look(b)?);
            let v = elem(terms)?;
            if v.keys().any(|&k| degrees[k] != degrees[i] + degrees[j]) {
                return Err(Error::Invalid(format!("{a}·{b} has the wrong degree")));
            }
            if !v.is_zero() {
                pt.insert((i, j), v);
            }
        }
        Ok(DGAlgebra { names, degrees, index, unit, d: dt, product: pt })
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn basis(&self, deg: usize) -> Vec<usize> {
        (0..self.names.len()).filter(|&i| self.degrees[i] == deg).collect()
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn elem_degree(&self, x: &AElem) -> Option<usize> {
        x.keys().next().map(|&i| self.degrees[i])
    }

    /// `A^0 = ℤ·1` and `A^1 = 0`.
    pub fn is_one_reduced(&self) -> bool {
        self.basis(0) == vec![self.unit] && self.basis(1).is_empty()
    }

    pub fn d_basis(&self, i: usize) -> &AElem {
        &self.d[i]
    }

    pub fn d(&self, x: &AElem) -> AElem {
        x.map(|&i| self.d[i].clone())
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> AElem {
        if i == self.unit {
            Chain::single(j, 1)
        } else if j == self.unit {
            Chain::single(i, 1)
        } else {
            self.product.get(&(i, j)).cloned().unwrap_or_default()
        }
    }

    pub fn mul(&self, x: &AElem, y: &AElem) -> AElem {
        let mut out = Chain::new();
        for (&i, a) in x.iter() {
            for (&j, b) in y.iter() {
                out.add_chain(&self.mul_basis(i, j), a * b);
            }
        }
        out
    }

    /// `d² = 0`, the Leibniz rule, associativity and the unit law on the basis.
    pub fn check(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(m));
        let n = self.names.len();
        for i in 0..n {
            if !self.d(&self.d[i]).is_zero() {
                return fail(format!("d² ≠ 0 on {}", self.names[i]));
            }
        }
        if !self.d[self.unit].is_zero() {
            return fail("d(1) ≠ 0".into());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d(&self.mul_basis(i, j));
                let mut rhs = self.mul(&self.d[i], &Chain::single(j, 1));
                rhs.add_chain(&self.mul(&Chain::single(i, 1), &self.d[j]), parity(self.degrees[i]) as i64);
                if lhs != rhs {
                    return fail(format!("Leibniz fails on {}, {}", self.names[i], self.names[j]));
                }
                for k in 0..n {
                    let l = self.mul(&self.mul_basis(i, j), &Chain::single(k, 1));
                    let r = self.mul(&Chain::single(i, 1), &self.mul_basis(j, k));
                    if l != r {
                        return fail(format!("associativity fails on {}, {}, {}", self.names[i], self.names[j], self.names[k]));
                    }
                }
            }
        }
        Ok(())
    }

    /// `{basis: {degree: [names]}, unit, d: {name: {name: k}}, product: {"a,b": {name: k}}}`.
    pub fn from_json(v: &Value) -> Result<DGAlgebra> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut basis = Vec::new();
        for (deg, names) in v["basis"].as_object().ok_or_else(|| bad("basis must be an object"))? {
            let d: usize = deg.parse().map_err(|_| bad("degrees must be integers"))?;
            for n in names.as_array().ok_or_else(|| bad("basis lists must be arrays"))? {
                basis.push((n.as_str().ok_or_else(|| bad("names must be strings"))?.to_string(), d));
            }
        }
        let terms = |t: &Value| -> Result<Vec<(String, i64)>> {
            t.as_object()
                .ok_or_else(|| bad("elements are objects name → coefficient"))?
                .iter()
                .map(|(k, c)| Ok((k.clone(), c.as_i64().ok_or_else(|| bad("coefficients are integers"))?)))
                .collect()
        };
        let mut d = Vec::new();
        if let Some(o) = v.get("d").and_then(|x| x.as_object()) {
            for (k, t) in o {
                d.push((k.clone(), terms(t)?));
            }
        }
        let mut product = Vec::new();
        if let Some(o) = v.get("product").and_then(|x| x.as_object()) {
            for (k, t) in o {
                let (a, b) = k.split_once(',').ok_or_else(|| bad("product keys are \"a,b\""))?;
                product.push(((a.trim().to_string(), b.trim().to_string()), terms(t)?));
            }
        }
        let unit = v["unit"].as_str().ok_or_else(|| bad("missing unit"))?;
        DGAlgebra::new(basis, unit, d, product)
    }

    pub fn to_json(&self) -> Value {
        let mut basis: BTreeMap<String, Vec<&str>> = BTreeMap::new();
        for (i, n) in self.names.iter().enumerate() {
            basis.entry(self.degrees[i].to_string()).or_default().push(n);
        }
        let el = |c: &AElem| -> Value { c.iter().map(|(&i, k)| (self.names[i].clone(), json!(k))).collect::<serde_json::Map<_, _>>().into() };
        let d: serde_json::Map<_, _> =
            (0..self.names.len()).filter(|&i| !self.d[i].is_zero()).map(|i| (self.names[i].clone(), el(&self.d[i]))).collect();
        let mut keys: Vec<_> = self.product.keys().copied().collect();
        keys.sort();
        let product: serde_json::Map<_, _> =
            keys.iter().map(|&(i, j)| (format!("{},{}", self.names[i], self.names[j]), el(&self.product[&(i, j)]))).collect();
        json!({"basis": basis, "unit": self.names[self.unit], "d": d, "product": product})
    }

    /// `ℤ[x]/(x^{top+1})` with `|x| = deg` even and `d = 0`.
    pub fn truncated_polynomial(deg: usize, top: usize) -> DGAlgebra {
        assert!(deg % 2 == 0 && deg >= 2);
        let name = |k: usize| if k == 0 { "1".to_string() } else { format!("x{k}") };
        let basis = (0..=top).map(|k| (name(k), k * deg)).collect();
        let mut product = Vec::new();
        for i in 1..=top {
            for j in 1..=top - i {
                product.push(((name(i), name(j)), vec![(name(i + j), 1)]));
            }
        }
        DGAlgebra::new(basis, "1", Vec::new(), product).unwrap()
    }

    /// Normalized cochains of a 1-reduced cubical set, basis dual to its cells.
    pub fn cubical_cochains(q: &CubicalSet) -> DGAlgebra {
        let cells: Vec<QCell> = (0..=q.max_dim()).flat_map(|d| q.nondegenerate(d)).collect();
        let basis = cells.iter().map(|c| (c.to_string(), c.dim as usize)).collect();
        let mut d: BTreeMap<String, Vec<(String, i64)>> = BTreeMap::new();
        let mut product: BTreeMap<(String, String), Vec<(String, i64)>> = BTreeMap::new();
        for s in &cells {
            for (f, k) in q.boundary(s).iter() {
                let sign = -(parity(f.dim as usize) as i64);
                d.entry(f.to_string()).or_default().push((s.to_string(), sign * k));
            }
            for ((l, r), k) in q.serre(s).iter() {
                if l.dim == 0 || r.dim == 0 {
                    continue;
                }
                let sign = parity(l.dim as usize * r.dim as usize) as i64;
                product.entry((l.to_string(), r.to_string())).or_default().push((s.to_string(), sign * k));
            }
        }
        DGAlgebra::new(basis, &q.vertex().to_string(), d.into_iter().collect(), product.into_iter().collect())
            .expect("cochains of a cubical set")
    }
}

/// A bar word `[ā_1|⋯|ā_n]` of basis elements of positive degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct BarWord(pub Vec<usize>);

impl BarWord {
    pub fn empty() -> BarWord {
        BarWord(Vec::new())
    }

    pub fn degree(&self, a: &DGAlgebra) -> usize {
        self.0.iter().map(|&i| a.degree(i) - 1).sum()
    }

    pub fn concat(&self, other: &BarWord) -> BarWord {
        BarWord([self.0.as_slice(), &other.0].concat())
    }

    pub fn show(&self, a: &DGAlgebra) -> String {
        let l: Vec<&str> = self.0.iter().map(|&i| a.name(i)).collect();
        format!("[{}]", l.join("|"))
    }
}

/// Bar words of degree `deg`, letters from `A^{≥2}`.
pub fn bar_words(a: &DGAlgebra, deg: usize) -> Vec<BarWord> {
    fn go(letters: &[(usize, usize)], deg: usize, cur: &mut Vec<usize>, out: &mut Vec<BarWord>) {
        if deg == 0 {
            out.push(BarWord(cur.clone()));
            return;
        }
        for &(i, d) in letters {
            if d <= deg {
                cur.push(i);
                go(letters, deg - d, cur, out);
                cur.pop();
            }
        }
    }
    let letters: Vec<(usize, usize)> = (2..=a.max_degree()).flat_map(|d| a.basis(d).into_iter().map(move |i| (i, d - 1))).collect();
    let mut out = Vec::new();
    go(&letters, deg, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `[x_1|⋯|x_k]` for elements `x_i`, expanded multilinearly. Terms with a letter
/// of degree below 2 vanish.
pub fn word_of(a: &DGAlgebra, parts: &[AElem]) -> Chain<BarWord> {
    let mut out = Chain::single(BarWord::empty(), 1);
    for p in parts {
        let mut next = Chain::new();
        for (w, c) in out.iter() {
            for (&i, k) in p.iter() {
                if a.degree(i) >= 2 {
                    let mut v = w.0.clone();
                    v.push(i);
                    next.add(BarWord(v), c * k);
                }
            }
        }
        out = next;
    }
    out
}

/// The bar differential.
pub fn bar_differential(a: &DGAlgebra, w: &BarWord) -> Chain<BarWord> {
    let mut out = Chain::new();
    let letters: Vec<AElem> = w.0.iter().map(|&i| Chain::single(i, 1)).collect();
    let mut eps = 0;
    for i in 0..w.0.len() {
        let mut parts = letters.clone();
        parts[i] = a.d_basis(w.0[i]).clone();
        out.add_chain(&word_of(a, &parts), -(parity(eps) as i64));
        eps += a.degree(w.0[i]) - 1;
        if i + 1 < w.0.len() {
            let mut parts = letters[..i].to_vec();
            parts.push(a.mul_basis(w.0[i], w.0[i + 1]));
            parts.extend_from_slice(&letters[i + 2..]);
            out.add_chain(&word_of(a, &parts), -(parity(eps) as i64));
        }
    }
    out
}

/// The operations `E_{p,q}` for `p, q ≥ 1`, tabulated on basis words; `E_{1,0}` and
/// `E_{0,1}` are the identity and the other edge components vanish.
#[derive(Clone, Debug, Default)]
pub struct HirschStructure {
    pub table: HashMap<(BarWord, BarWord), AElem>,
}

impl HirschStructure {
    /// All `E_{p,q}` with `p, q ≥ 1` zero.
    pub fn commutative() -> HirschStructure {
        HirschStructure::default()
    }

    /// `E(x ⊗ y)` on basis words.
    pub fn e(&self, x: &BarWord, y: &BarWord) -> AElem {
        match (x.0.len(), y.0.len()) {
            (1, 0) => Chain::single(x.0[0], 1),
            (0, 1) => Chain::single(y.0[0], 1),
            (_, 0) | (0, _) => Chain::new(),
            _ => self.table.get(&(x.clone(), y.clone())).cloned().unwrap_or_default(),
        }
    }

    /// `E_{p,q}(x_1,…,x_p; y_1,…,y_q)` on arbitrary elements. A unit argument gives
    /// zero except in `E_{1,0}` and `E_{0,1}`.
    pub fn e_elems(&self, a: &DGAlgebra, xs: &[AElem], ys: &[AElem]) -> AElem {
        let all: Vec<&AElem> = xs.iter().chain(ys).collect();
        if all.len() == 1 {
            return all[0].clone();
        }
        let mut out = Chain::new();
        let mut stack: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
        for x in &all {
            let mut next = Vec::new();
            for (v, c) in &stack {
                for (&i, k) in x.iter() {
                    if a.degree(i) >= 2 {
                        let mut v = v.clone();
                        v.push(i);
                        next.push((v, c * k));
                    }
                }
            }
            stack = next;
        }
        for (v, c) in stack {
            let (l, r) = v.split_at(xs.len());
            out.add_chain(&self.e(&BarWord(l.to_vec()), &BarWord(r.to_vec())), c);
        }
        out
    }

    /// `{E: [{left: [names], right: [names], value: {name: k}}]}`.
    pub fn from_json(a: &DGAlgebra, v: &Value) -> Result<HirschStructure> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let word = |w: &Value| -> Result<BarWord> {
            w.as_array()
                .ok_or_else(|| bad("words are arrays"))?
                .iter()
                .map(|n| {
                    let n = n.as_str().ok_or_else(|| bad("letters are names"))?;
                    a.lookup(n).ok_or_else(|| bad(&format!("unknown letter {n}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(BarWord)
        };
        let mut table = HashMap::new();
        for entry in v["E"].as_array().ok_or_else(|| bad("E must be an array"))? {
            let (x, y) = (word(&entry["left"])?, word(&entry["right"])?);
            if x.0.is_empty() || y.0.is_empty() {
                return Err(bad("only E_{p,q} with p, q ≥ 1 are tabulated"));
            }
            let mut val = Chain::new();
            for (n, k) in entry["value"].as_object().ok_or_else(|| bad("values are objects"))? {
                let i = a.lookup(n).ok_or_else(|| bad(&format!("unknown basis element {n}")))?;
                val.add(i, k.as_i64().ok_or_else(|| bad("coefficients are integers"))?);
            }
            let want = x.degree(a) + y.degree(a) + 1;
            if val.keys().any(|&i| a.degree(i) != want) {
                return Err(Error::Invalid("E_{p,q} must have degree 1 − p − q".into()));
            }
            table.insert((x, y), val);
        }
        Ok(HirschStructure { table })
    }

    /// The structure on cubical cochains dual to the permutahedral coproduct of `ΩQ`.
    pub fn cubical(q: &CubicalSet, a: &DGAlgebra) -> HirschStructure {
        let mut table: HashMap<(BarWord, BarWord), AElem> = HashMap::new();
        let letter = |c: &QCell| a.lookup(&c.to_string()).expect("cell in the cochain basis");
        for d in 2..=q.max_dim() {
            for s in q.nondegenerate(d) {
                let col = letter(&s);
                for ((l, r), k) in omega_coproduct(q, &s).iter() {
                    if l.0.is_empty() || r.0.is_empty() {
                        continue;
                    }
                    let x = BarWord(l.0.iter().map(letter).collect());
                    let y = BarWord(r.0.iter().map(letter).collect());
                    let sign = pairing_sign(&word_degrees(a, &x, &y));
                    table.entry((x, y)).or_default().add(col, sign * k);
                }
            }
        }
        table.retain(|_, v| !v.is_zero());
        HirschStructure { table }
    }
}

fn word_degrees(a: &DGAlgebra, x: &BarWord, y: &BarWord) -> Vec<usize> {
    x.0.iter().chain(&y.0).map(|&i| a.degree(i) - 1).collect()
}

/// `(−1)^{Σ_{i<j} d_i d_j}`.
pub fn pairing_sign(degrees: &[usize]) -> i64 {
    let mut acc = 0;
    let mut before = 0;
    for &d in degrees {
        acc += before * d;
        before += d;
    }
    parity(acc) as i64
}

/// Residual of `∇E + E⌣E` on `x ⊗ y`.
pub fn twisting_residual(a: &DGAlgebra, e: &HirschStructure, x: &BarWord, y: &BarWord) -> AElem {
    let dx = x.degree(a);
    let mut out = a.d(&e.e(x, y));
    for (w, c) in bar_differential(a, x).iter() {
        out.add_chain(&e.e(w, y), c);
    }
    for (w, c) in bar_differential(a, y).iter() {
        out.add_chain(&e.e(x, w), c * parity(dx) as i64);
    }
    for i in 0..=x.0.len() {
        for j in 0..=y.0.len() {
            let (x1, x2) = (BarWord(x.0[..i].to_vec()), BarWord(x.0[i..].to_vec()));
            let (y1, y2) = (BarWord(y.0[..j].to_vec()), BarWord(y.0[j..].to_vec()));
            let left = e.e(&x1, &y1);
            if left.is_zero() {
                continue;
            }
            let right = e.e(&x2, &y2);
            if right.is_zero() {
                continue;
            }
            let sign = parity(x2.degree(a) * y1.degree(a) + x1.degree(a) + y1.degree(a)) as i64;
            out.add_chain(&a.mul(&left, &right), sign);
        }
    }
    out
}

/// Pairs `(x, y)` of bar words with `|x| + |y| ≤ cap` whose residual can be
/// nonzero, i.e. `|x| + |y| + 2 ≤ max degree of A`.
pub fn bar_pairs(a: &DGAlgebra, cap: usize) -> Vec<(BarWord, BarWord)> {
    let cap = cap.min(a.max_degree().saturating_sub(2));
    let words: Vec<Vec<BarWord>> = (0..=cap).map(|d| bar_words(a, d)).collect();
    let mut out = Vec::new();
    for t in 0..=cap {
        for i in 0..=t {
            for x in &words[i] {
                for y in &words[t - i] {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

/// Check `∇E = −E⌣E` on all bar pairs through `cap`. Returns the number of pairs.
pub fn check_twisting_element(a: &DGAlgebra, e: &HirschStructure, cap: usize, ring: Ring) -> Result<usize> {
    let pairs = bar_pairs(a, cap);
    for (x, y) in &pairs {
        let r = twisting_residual(a, e, x, y).reduce(ring);
        if !r.is_zero() {
            return Err(Error::Verification(format!("∇E + E⌣E ≠ 0 on {} ⊗ {}: {}", x.show(a), y.show(a), show_elem(a, &r))));
        }
    }
    Ok(pairs.len())
}

pub fn show_elem(a: &DGAlgebra, x: &AElem) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let t: Vec<String> = x.iter().map(|(&i, k)| format!("{k}·{}", a.name(i))).collect();
    t.join(" + ")
}

/// `dE_{1,1}(a;b) − E_{1,1}(da;b) + (−1)^{|a|}E_{1,1}(a;db) = (−1)^{|a|}ab − (−1)^{|a|(|b|+1)}ba`
/// on all basis pairs of positive degree with `|a| + |b| ≤ cap`.
pub fn check_e11_identity(a: &DGAlgebra, e: &HirschStructure, cap: usize) -> Result<usize> {
    let pos: Vec<usize> = (2..=a.max_degree()).flat_map(|d| a.basis(d)).collect();
    let mut n = 0;
    for &x in &pos {
        for &y in &pos {
            let (p, q) = (a.degree(x), a.degree(y));
            if p + q > cap {
                continue;
            }
            let (ex, ey) = (Chain::single(x, 1), Chain::single(y, 1));
            let mut lhs = a.d(&e.e_elems(a, &[ex.clone()], &[ey.clone()]));
            lhs.add_chain(&e.e_elems(a, &[a.d(&ex)], &[ey.clone()]), -1);
            lhs.add_chain(&e.e_elems(a, &[ex.clone()], &[a.d(&ey)]), parity(p) as i64);
            let mut rhs = a.mul_basis(x, y).scaled(parity(p) as i64);
            rhs.add_chain(&a.mul_basis(y, x), -(parity(p * (q + 1)) as i64));
            if lhs != rhs {
                return Err(Error::Verification(format!(
                    "E_11 identity fails on {}, {}: {} versus {}",
                    a.name(x),
                    a.name(y),
                    show_elem(a, &lhs),
                    show_elem(a, &rhs)
                )));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// The product `μ_E: BA ⊗ BA → BA`, the coalgebra map extending `E`.
pub fn mu_e(a: &DGAlgebra, e: &HirschStructure, x: &BarWord, y: &BarWord) -> Chain<BarWord> {
    let mut out = Chain::new();
    // (position in x, position in y, accumulated |y| so far, sign, word so far)
    let mut stack: Vec<(usize, usize, usize, i64, Chain<BarWord>)> = vec![(0, 0, 0, 1, Chain::single(BarWord::empty(), 1))];
    while let Some((i, j, ydeg, sign, acc)) = stack.pop() {
        if i == x.0.len() && j == y.0.len() {
            for (w, c) in acc.iter() {
                out.add(w.clone(), c * sign);
            }
            continue;
        }
        for i2 in i..=x.0.len() {
            for j2 in j..=y.0.len() {
                if i2 == i && j2 == j {
                    continue;
                }
                let xp = BarWord(x.0[i..i2].to_vec());
                let yp = BarWord(y.0[j..j2].to_vec());
                let val = e.e(&xp, &yp);
                if val.is_zero() {
                    continue;
                }
                let s = sign * parity(xp.degree(a) * ydeg) as i64;
                let mut next = Chain::new();
                for (w, c) in acc.iter() {
                    for (&l, k) in val.iter() {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.add(BarWord(v), c * k);
                    }
                }
                stack.push((i2, j2, ydeg + yp.degree(a), s, next));
            }
        }
    }
    out
}

/// Check `d μ_E = μ_E (d ⊗ 1 + 1 ⊗ d)` on bar pairs with `|x| + |y| ≤ cap`.
pub fn check_mu_chain_map(a: &DGAlgebra, e: &HirschStructure, cap: usize) -> Result<usize> {
    let words: Vec<Vec<BarWord>> = (0..=cap).map(|d| bar_words(a, d)).collect();
    let mut n = 0;
    for t in 0..=cap {
        for i in 0..=t {
            for x in &words[i] {
                for y in &words[t - i] {
                    let lhs = mu_e(a, e, x, y).map(|w| bar_differential(a, w));
                    let mut rhs = Chain::new();
                    for (w, c) in bar_differential(a, x).iter() {
                        rhs.add_chain(&mu_e(a, e, w, y), c);
                    }
                    for (w, c) in bar_differential(a, y).iter() {
                        rhs.add_chain(&mu_e(a, e, x, w), c * parity(x.degree(a)) as i64);
                    }
                    if lhs != rhs {
                        return Err(Error::Verification(format!("μ_E is not a chain map on {} ⊗ {}", x.show(a), y.show(a))));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// `Δ(σ̄) = Σ sgn(u,v) d_u σ̄ ⊗ d_v σ̄` over the diagonal of `P_n`, in normal form;
/// terms with a degenerate factor vanish.
pub fn omega_coproduct(q: &CubicalSet, s: &QCell) -> Chain<(OmegaWord, OmegaWord)> {
    let om = Omega { q };
    let face = |u: &OrderedPartition| -> OmegaWord {
        // split off the blocks one at a time; the last factor carries the rest
        let mut w = OmegaWord::generator(s.clone());
        let mut rest = u.ground();
        for &b in &u.blocks()[..u.len() - 1] {
            let r = |x: Set| x.map(|y| rest.rank(y) as u32);
            let k = w.0.len() - 1;
            w = om.face(&w, k, r(b), r(rest - b));
            rest = rest - b;
        }
        w.normal_form()
    };
    let mut out = Chain::new();
    for ((u, v), c) in top_diagonal_perm(s.dim).iter() {
        let (l, r) = (face(u), face(v));
        if l.0.iter().chain(&r.0).any(|x| x.is_degenerate()) {
            continue;
        }
        out.add((l, r), c);
    }
    out
}

/// `Δ` extended multiplicatively to words: `Δ(w_1 w_2) = Δ(w_1)Δ(w_2)` with
/// `(a⊗b)(c⊗d) = (−1)^{|b||c|} ac ⊗ bd`.
pub fn omega_coproduct_word(q: &CubicalSet, w: &OmegaWord) -> Chain<(OmegaWord, OmegaWord)> {
    let mut out = Chain::single((OmegaWord::unit(), OmegaWord::unit()), 1);
    for s in &w.0 {
        let delta = omega_coproduct(q, s);
        let mut next = Chain::new();
        for ((a, b), x) in out.iter() {
            for ((c, d), y) in delta.iter() {
                let sign = parity(b.degree() * c.degree()) as i64;
                next.add((a.mul(c), b.mul(d)), x * y * sign);
            }
        }
        out = next;
    }
    out
}

/// The components `E^{p,q}` of the coproduct on generators of dimension up to
/// `max_dim`, grouped by factor counts after unit stripping.
pub fn extract_e_components(q: &CubicalSet, max_dim: u32) -> BTreeMap<(usize, usize), Vec<(QCell, Chain<(OmegaWord, OmegaWord)>)>> {
    let mut out: BTreeMap<(usize, usize), Vec<(QCell, Chain<(OmegaWord, OmegaWord)>)>> = BTreeMap::new();
    for d in 2..=max_dim.min(q.max_dim()) {
        for s in q.nondegenerate(d) {
            let mut parts: BTreeMap<(usize, usize), Chain<(OmegaWord, OmegaWord)>> = BTreeMap::new();
            for ((l, r), k) in omega_coproduct(q, &s).iter() {
                parts.entry((l.0.len(), r.0.len())).or_default().add((l.clone(), r.clone()), k);
            }
            for (pq, ch) in parts {
                out.entry(pq).or_default().push((s.clone(), ch));
            }
        }
    }
    out
}

/// `σ_i = d⁰_{u_{i+1}} d¹_{underline{n}∖u_i}(σ)` for `u = A_1|⋯|A_p`,
/// `u_i = A_i ∪ ⋯ ∪ A_p`.
pub fn stream_faces(q: &CubicalSet, s: &QCell, u: &OrderedPartition) -> Vec<QCell> {
    let all = Set::underline(s.dim);
    let blocks = u.blocks();
    (0..blocks.len())
        .map(|i| {
            let ui: Set = blocks[i..].iter().fold(Set::EMPTY, |a, &b| a | b);
            let next = ui - blocks[i];
            let t = q.face_multi(s, all - ui, 1);
            q.face_multi(&t, next.map(|y| ui.rank(y) as u32), 0)
        })
        .collect()
}

/// `Ē_{s,t}(a_1,…,a_s; b_1,…,b_t)(σ)` for cells `a_i`, `b_j` (the degenerate
/// 1-cell plays `ε¹`): the sum over diagonal pairs of `P_n` with block sizes
/// `dim a_i`, `dim b_j`, times the pairing sign of the nonunit letters.
pub fn e_bar_st(q: &CubicalSet, a: &[QCell], b: &[QCell], s: &QCell) -> i64 {
    let sizes = |u: &OrderedPartition| u.blocks().iter().map(|x| x.len() as u32).collect::<Vec<_>>();
    let want_u: Vec<u32> = a.iter().map(|c| c.dim).collect();
    let want_v: Vec<u32> = b.iter().map(|c| c.dim).collect();
    let sign = pairing_sign(&a.iter().chain(b).filter(|c| c.dim > 1).map(|c| c.dim as usize - 1).collect::<Vec<_>>());
    let mut total = 0;
    for ((u, v), c) in top_diagonal_perm(s.dim).iter() {
        if sizes(u) != want_u || sizes(v) != want_v {
            continue;
        }
        if stream_faces(q, s, u) == a && stream_faces(q, s, v) == b {
            total += c;
        }
    }
    total * sign
}

/// `E_{p,q}(a;b)` as a cochain, summing `Ē_{s,t}` over all `ε¹` paddings.
pub fn e_pq_cochain(q: &CubicalSet, a: &[QCell], b: &[QCell]) -> Chain<QCell> {
    let n = a.iter().chain(b).map(|c| c.dim as usize - 1).sum::<usize>() + 1;
    let mut out = Chain::new();
    if n as u32 > q.max_dim() {
        return out;
    }
    let sign = pairing_sign(&a.iter().chain(b).map(|c| c.dim as usize - 1).collect::<Vec<_>>());
    for s in q.nondegenerate(n as u32) {
        let mut total = 0;
        for ((u, v), c) in top_diagonal_perm(s.dim).iter() {
            let strip = |f: Vec<QCell>| f.into_iter().filter(|x| x.dim > 1).collect::<Vec<_>>();
            if strip(stream_faces(q, &s, u)) == a && strip(stream_faces(q, &s, v)) == b {
                total += c;
            }
        }
        if total != 0 {
            out.add(s, total * sign);
        }
    }
    out
}

/// A twisting cochain `φ: BA → A` of degree `+1`.
pub type TwistingCochain<'a> = &'a dyn Fn(&BarWord) -> AElem;

/// The universal projection `BA → A`.
pub fn universal_projection(w: &BarWord) -> AElem {
    if w.0.len() == 1 {
        Chain::single(w.0[0], 1)
    } else {
        Chain::new()
    }
}

/// A basis element `a ⊗ m` of `A ⊗ BA`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TensorCell {
    pub a: usize,
    pub m: BarWord,
}

/// `(A ⊗ BA, d_φ, μ_φ)`: `BA` as a comodule over itself and `φ: BA → A`. With the
/// universal projection this is the acyclic bar construction `B(A;A)`.
pub struct TwistedDga<'a> {
    pub a: &'a DGAlgebra,
    pub e: &'a HirschStructure,
    pub phi: TwistingCochain<'a>,
}

impl TwistedDga<'_> {
    pub fn degree(&self, x: &TensorCell) -> usize {
        self.a.degree(x.a) + x.m.degree(self.a)
    }

    /// `d_φ(a⊗m) = da⊗m + (−1)^{|a|} a⊗dm − (−1)^{|a|} Σ a φ(m') ⊗ m''`.
    pub fn d(&self, x: &TensorCell) -> Chain<TensorCell> {
        let a = self.a;
        let s = parity(a.degree(x.a)) as i64;
        let mut out = Chain::new();
        for (&b, k) in a.d_basis(x.a).iter() {
            out.add(TensorCell { a: b, m: x.m.clone() }, k);
        }
        for (w, k) in bar_differential(a, &x.m).iter() {
            out.add(TensorCell { a: x.a, m: w.clone() }, s * k);
        }
        for i in 1..=x.m.0.len() {
            let (m1, m2) = (BarWord(x.m.0[..i].to_vec()), BarWord(x.m.0[i..].to_vec()));
            let prod = a.mul(&Chain::single(x.a, 1), &(self.phi)(&m1));
            for (&b, k) in prod.iter() {
                out.add(TensorCell { a: b, m: m2.clone() }, -s * k);
            }
        }
        out
    }

    /// `μ_φ((a_1⊗m_1)(a_2⊗m_2)) = Σ_{p≥0, q≥1} (−1)^ε a_1 E_{p,q}(φ(c_1^1),…,φ(c_1^p); a_2, φ(c_2^1),…,φ(c_2^{q−1})) ⊗ m_1^{p+1} m_2^q`
    /// with `ε = |m_1^{p+1}|(|a_2| + |c_2^1| + ⋯ + |c_2^{q−1}|)`.
    pub fn mul(&self, x: &TensorCell, y: &TensorCell) -> Chain<TensorCell> {
        let a = self.a;
        let mut out = Chain::new();
        let left = deconcatenations(&x.m);
        let right = deconcatenations(&y.m);
        for (cs, rest1) in &left {
            let phis1: Vec<AElem> = cs.iter().map(|c| (self.phi)(c)).collect();
            if phis1.iter().any(|p| p.is_zero()) {
                continue;
            }
            for (ds, rest2) in &right {
                let mut args2 = vec![Chain::single(y.a, 1)];
                args2.extend(ds.iter().map(|c| (self.phi)(c)));
                if args2.iter().any(|p| p.is_zero()) {
                    continue;
                }
                let val = self.e.e_elems(a, &phis1, &args2);
                if val.is_zero() {
                    continue;
                }
                let mid: usize = a.degree(y.a) + ds.iter().map(|c| c.degree(a)).sum::<usize>();
                let prefix: usize = cs.iter().map(|c| c.degree(a)).sum();
                let sign = parity(rest1.degree(a) * mid + prefix) as i64;
                let coeff = a.mul(&Chain::single(x.a, 1), &val);
                let prod = mu_e(a, self.e, rest1, rest2);
                for (&b, k) in coeff.iter() {
                    for (w, l) in prod.iter() {
                        out.add(TensorCell { a: b, m: w.clone() }, sign * k * l);
                    }
                }
            }
        }
        out
    }

    pub fn cells(&self, deg: usize) -> Vec<TensorCell> {
        let mut out = Vec::new();
        for p in 0..=deg {
            for i in self.a.basis(p) {
                for m in bar_words(self.a, deg - p) {
                    out.push(TensorCell { a: i, m });
                }
            }
        }
        out
    }

    /// `d_φ μ_φ = μ_φ(d_φ ⊗ 1 + 1 ⊗ d_φ)` on basis pairs of total degree `≤ cap`.
    pub fn check_derivation(&self, cap: usize) -> Result<usize> {
        let cells: Vec<Vec<TensorCell>> = (0..=cap).map(|d| self.cells(d)).collect();
        let mut n = 0;
        for t in 0..=cap {
            for i in 0..=t {
                for x in &cells[i] {
                    for y in &cells[t - i] {
                        let lhs = self.mul(x, y).map(|z| self.d(z));
                        let mut rhs = Chain::new();
                        for (z, c) in self.d(x).iter() {
                            rhs.add_chain(&self.mul(z, y), c);
                        }
                        for (z, c) in self.d(y).iter() {
                            rhs.add_chain(&self.mul(x, z), c * parity(i) as i64);
                        }
                        if lhs != rhs {
                            return Err(Error::Verification(format!(
                                "d_φ is not a derivation on ({} ⊗ {}) · ({} ⊗ {})",
                                self.a.name(x.a),
                                x.m.show(self.a),
                                self.a.name(y.a),
                                y.m.show(self.a)
                            )));
                        }
                        n += 1;
                    }
                }
            }
        }
        Ok(n)
    }

    /// Largest coefficient of the associator `(xy)z − x(yz)` over basis triples of
    /// total degree `≤ cap`.
    pub fn associator_norm(&self, cap: usize) -> i64 {
        let cells: Vec<Vec<TensorCell>> = (0..=cap).map(|d| self.cells(d)).collect();
        let mut worst = 0;
        for t in 0..=cap {
            for i in 0..=t {
                for j in 0..=t - i {
                    for x in &cells[i] {
                        for y in &cells[j] {
                            for z in &cells[t - i - j] {
                                let l = self.mul(x, y).map(|w| self.mul(w, z));
                                let mut r = self.mul(y, z).map(|w| self.mul(x, w));
                                r.add_chain(&l, -1);
                                worst = worst.max(r.max_norm());
                            }
                        }
                    }
                }
            }
        }
        worst
    }
}

impl CochainComplex for TwistedDga<'_> {
    type Cell = TensorCell;
    fn cells(&self, deg: usize) -> Vec<TensorCell> {
        TwistedDga::cells(self, deg)
    }
    fn coboundary(&self, x: &TensorCell) -> Chain<TensorCell> {
        self.d(x)
    }
}

/// All ways to write `m = c_1 ⋯ c_k · rest` with nonempty `c_i`.
fn deconcatenations(m: &BarWord) -> Vec<(Vec<BarWord>, BarWord)> {
    let mut out = Vec::new();
    let n = m.0.len();
    // each cut pattern: positions of cuts among 0..=n, the last piece is the rest
    fn go(m: &BarWord, start: usize, cur: &mut Vec<BarWord>, out: &mut Vec<(Vec<BarWord>, BarWord)>) {
        out.push((cur.clone(), BarWord(m.0[start..].to_vec())));
        for end in start + 1..=m.0.len() {
            cur.push(BarWord(m.0[start..end].to_vec()));
            go(m, end, cur, out);
            cur.pop();
        }
    }
    let _ = n;
    go(m, 0, &mut Vec::new(), &mut out);
    out
}

/// The comultiplicative extension `F(c) = Σ [φ(c_1)|⋯|φ(c_k)]` of `φ: BA → A`.
pub fn comultiplicative_extension(a: &DGAlgebra, phi: TwistingCochain, c: &BarWord) -> Chain<BarWord> {
    let mut out = Chain::new();
    for (pieces, rest) in deconcatenations(c) {
        if !rest.0.is_empty() {
            continue;
        }
        let parts: Vec<AElem> = pieces.iter().map(|p| phi(p)).collect();
        out.add_chain(&word_of(a, &parts), 1);
    }
    out
}

/// `φ` is multiplicative when `F μ_E = μ_E (F ⊗ F)` on `BA`; checked on pairs of
/// bar words with `|x| + |y| ≤ cap`.
pub fn check_multiplicative(a: &DGAlgebra, e: &HirschStructure, phi: TwistingCochain, cap: usize) -> Result<usize> {
    let words: Vec<Vec<BarWord>> = (0..=cap).map(|d| bar_words(a, d)).collect();
    let mut n = 0;
    for t in 0..=cap {
        for i in 0..=t {
            for x in &words[i] {
                for y in &words[t - i] {
                    let lhs = mu_e(a, e, x, y).map(|w| comultiplicative_extension(a, phi, w));
                    let fx = comultiplicative_extension(a, phi, x);
                    let fy = comultiplicative_extension(a, phi, y);
                    let mut rhs = Chain::new();
                    for (u, c) in fx.iter() {
                        for (v, k) in fy.iter() {
                            rhs.add_chain(&mu_e(a, e, u, v), c * k);
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::Verification(format!("not multiplicative on {} ⊗ {}", x.show(a), y.show(a))));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// `θ^*` dual to the universal truncating twisting function: `[x̄] ↦ x` through
/// the cells `σ` with `θ_U(σ) = σ̄`.
pub fn dual_universal_twisting<'a>(q: &'a CubicalSet, a: &'a DGAlgebra) -> impl Fn(&BarWord) -> AElem + 'a {
    move |w: &BarWord| {
        let mut out = Chain::new();
        if w.0.len() != 1 {
            return out;
        }
        let d = a.degree(w.0[0]) as u32;
        for s in q.nondegenerate(d) {
            let t = crate::omega::universal_twisting(&s);
            if t.0.len() == 1 && a.lookup(&t.0[0].to_string()) == Some(w.0[0]) {
                out.add(a.lookup(&s.to_string()).unwrap(), 1);
            }
        }
        out
    }
}

impl fmt::Display for TensorCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {:?}", self.a, self.m.0)
    }
}
