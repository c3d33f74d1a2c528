//! Operadic cochain complexes of minimal algebras: Hochschild, Harrison (as the
//! shuffle-vanishing subcomplex of Hochschild) and Chevalley–Eilenberg with
//! coefficients in a left module.
//!
//! Cochains are bar-form maps `(sA)^{⊗n} → sA` (symmetric ones for Lie). The
//! differential is the bracket with the product, `∂φ = b_2∘φ - (-1)^{|φ|} φ∘b_2`,
//! where `|φ|` is the bar degree. An operation `b_k` has bar degree 1, a gauge
//! component `φ_{k-1}` bar degree 0. The internal (unshifted) degree of a cochain of
//! arity `n` and bar degree `q` is `q + 1 - n`.
//!
//! Module coefficients are handled inside the semidirect product `L ⋉ M`: cochains
//! take inputs in `L` and values in `M`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::One;
use serde::Serialize;

use crate::algebras::Species;
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::homotopy::PInfinity;
use crate::linalg::{Echelon, LinMap, Vector};
use crate::multilinear::{
    shifted_degrees, sort_word, sorted_words_of_degree, symmetric_extension, words_of_degree,
    MultiMap, Word,
};
use crate::perm::Perm;
use crate::scalar::{sign, Q};
use crate::symgroup::{barr_idempotent, shuffle_element, GroupAlgebraElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Complex {
    Hochschild,
    Harrison,
    ChevalleyEilenberg,
}

/// A graded left module over a Lie algebra, given by `g.m` on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftModule {
    pub space: GradedSpace,
    action: BTreeMap<(usize, usize), Vector>,
}

impl LeftModule {
    pub fn new(space: GradedSpace, action: BTreeMap<(usize, usize), Vector>) -> Self {
        let action = action.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        LeftModule { space, action }
    }

    /// `L` acting on itself by the bracket, read off a Lie structure's `b_2`.
    pub fn adjoint(lie: &PInfinity) -> Self {
        let mut action = BTreeMap::new();
        for g in 0..lie.dim() {
            for m in 0..lie.dim() {
                action.insert((g, m), lie.product(g, m));
            }
        }
        LeftModule::new(lie.space.clone(), action)
    }

    pub fn act(&self, g: usize, m: usize) -> Vector {
        self.action.get(&(g, m)).cloned().unwrap_or_default()
    }

    pub fn act_vec(&self, g: &Vector, m: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in g.iter() {
            for (j, y) in m.iter() {
                if let Some(v) = self.action.get(&(i, j)) {
                    out.add_scaled(v, &(x * y));
                }
            }
        }
        out
    }

    pub fn actions(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.action.iter()
    }

    /// First basis triple violating `[g,h].m = g.(h.m) - (-1)^{|g||h|} h.(g.m)`.
    pub fn axiom_violation(&self, lie: &PInfinity) -> Option<(usize, usize, usize)> {
        let n = lie.dim();
        for g in 0..n {
            for h in 0..n {
                let gh = lie.product(g, h);
                let s = sign((lie.space.degree(g) * lie.space.degree(h)) as i64);
                for m in 0..self.space.dim() {
                    let lhs = self.act_vec(&gh, &Vector::unit(m));
                    let mut rhs = self.act_vec(&Vector::unit(g), &self.act(h, m));
                    rhs.add_scaled(&self.act_vec(&Vector::unit(h), &self.act(g, m)), &-s.clone());
                    if lhs != rhs {
                        return Some((g, h, m));
                    }
                }
            }
        }
        None
    }
}

/// Basis of the cochains of one arity and bar degree: pairs (input word, output).
#[derive(Clone, Debug)]
pub struct Slice {
    pub arity: usize,
    pub degree: i32,
    pub basis: Vec<(Word, usize)>,
    index: HashMap<(Word, usize), usize>,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, w: &[usize], o: usize) -> Option<usize> {
        self.index.get(&(w.to_vec(), o)).copied()
    }

    /// Unshifted degree of the cochains in this slice.
    pub fn internal_degree(&self) -> i32 {
        self.degree + 1 - self.arity as i32
    }
}

/// The data needed to write down one of the operadic complexes.
#[derive(Clone, Debug)]
pub struct CochainContext {
    pub complex: Complex,
    /// Ambient space: `A`, or `L ⊕ M` for module coefficients.
    pub space: GradedSpace,
    sdeg: Vec<i32>,
    /// Inputs are the ambient indices `0..n_in`.
    n_in: usize,
    /// Outputs are the ambient indices `out_offset..out_offset + n_out`.
    out_offset: usize,
    n_out: usize,
    b2: MultiMap,
    /// `y ↦ [(a, b, coefficient of y in b_2(a, b))]` over input pairs.
    preimages: HashMap<usize, Vec<(usize, usize, Q)>>,
}

impl CochainContext {
    fn build(complex: Complex, space: GradedSpace, n_in: usize, out_offset: usize, n_out: usize, b2: MultiMap) -> Self {
        let sdeg = shifted_degrees(&space);
        let mut preimages: HashMap<usize, Vec<(usize, usize, Q)>> = HashMap::new();
        for (w, v) in &b2.table {
            if w[0] < n_in && w[1] < n_in {
                for (y, c) in v.iter() {
                    preimages.entry(y).or_default().push((w[0], w[1], c.clone()));
                }
            }
        }
        CochainContext { complex, space, sdeg, n_in, out_offset, n_out, b2, preimages }
    }

    /// A context over an arbitrary bar-form product `b2` on `space`, with inputs
    /// `0..n_in` and outputs `out_offset..out_offset + n_out`. The product only needs to
    /// be defined where the differentials that are evaluated use it.
    pub fn from_parts(
        complex: Complex,
        space: GradedSpace,
        n_in: usize,
        out_offset: usize,
        n_out: usize,
        b2: MultiMap,
    ) -> Result<Self> {
        if n_in > space.dim() || out_offset + n_out > space.dim() || b2.arity != 2 {
            return Err(Error::input("cochain context does not fit its space"));
        }
        Ok(Self::build(complex, space, n_in, out_offset, n_out, b2))
    }

    /// `(∂φ)(w)` at a single word.
    pub fn differential_at(&self, phi: &MultiMap, w: &[usize]) -> Result<Vector> {
        if phi.is_zero() {
            return Ok(Vector::new());
        }
        let q = phi
            .degree(self.input_sdeg(), &self.sdeg)
            .ok_or_else(|| Error::input("cochain is not homogeneous"))?;
        let f = |u: &[usize]| phi.get(u).cloned();
        Ok(self.eval_differential(&f, q, w))
    }

    fn require_minimal(s: &PInfinity) -> Result<()> {
        if !s.is_minimal() {
            return Err(Error::input("operadic cochains are built over algebras with zero differential"));
        }
        Ok(())
    }

    /// `C_Hoch(A)` for the product `b_2` of a minimal structure (any species).
    pub fn hochschild(s: &PInfinity) -> Result<Self> {
        Self::require_minimal(s)?;
        let n = s.dim();
        Ok(Self::build(Complex::Hochschild, s.space.clone(), n, 0, n, s.op(2)))
    }

    /// `C_Harr(A) ⊂ C_Hoch(A)`; the product must be graded commutative.
    pub fn harrison(s: &PInfinity) -> Result<Self> {
        Self::require_minimal(s)?;
        if s.species == Species::Lie {
            return Err(Error::input("Harrison cochains need a commutative algebra"));
        }
        let sh = crate::homotopy::shuffle_vanishing_check(
            &[(2, s.op(2))].into_iter().collect(),
            &s.sdeg(),
            2,
        );
        if !sh.pass {
            return Err(Error::input("Harrison cochains need a commutative algebra"));
        }
        let n = s.dim();
        Ok(Self::build(Complex::Harrison, s.space.clone(), n, 0, n, s.op(2)))
    }

    /// `C_CE(L, L)`.
    pub fn chevalley_eilenberg(s: &PInfinity) -> Result<Self> {
        Self::require_minimal(s)?;
        if s.species != Species::Lie {
            return Err(Error::input("Chevalley–Eilenberg cochains need a Lie algebra"));
        }
        let n = s.dim();
        Ok(Self::build(Complex::ChevalleyEilenberg, s.space.clone(), n, 0, n, s.op(2)))
    }

    /// `C_CE(L, M)` via the semidirect product `L ⋉ M`.
    pub fn chevalley_eilenberg_module(lie: &PInfinity, module: &LeftModule) -> Result<Self> {
        Self::require_minimal(lie)?;
        if lie.species != Species::Lie {
            return Err(Error::input("Chevalley–Eilenberg cochains need a Lie algebra"));
        }
        if let Some((g, h, m)) = module.axiom_violation(lie) {
            return Err(Error::input(format!(
                "module axiom fails on ({}, {}, {})",
                lie.space.name(g),
                lie.space.name(h),
                module.space.name(m)
            )));
        }
        let nl = lie.dim();
        let nm = module.space.dim();
        let mut basis: Vec<(String, i32)> =
            (0..nl).map(|i| (lie.space.name(i).to_string(), lie.space.degree(i))).collect();
        basis.extend((0..nm).map(|i| (format!("{}@M", module.space.name(i)), module.space.degree(i))));
        let space = GradedSpace::new(basis)?;
        let deg = |i: usize| space.degree(i) as i64;
        let mut b2 = MultiMap::zero(2);
        for (w, v) in &lie.op(2).table {
            b2.set(w.clone(), v.clone());
        }
        for ((g, m), v) in module.actions() {
            let v = v.remap(|i| Some(i + nl));
            let mi = m + nl;
            // b_2(sg, sm) = (-1)^{|g|} s(g.m); b_2(sm, sg) = (-1)^{|m|} s[m, g], [m, g] = -(-1)^{|m||g|} g.m
            b2.set(vec![*g, mi], v.scaled(&sign(deg(*g))));
            b2.set(vec![mi, *g], v.scaled(&-(sign(deg(mi)) * sign(deg(mi) * deg(*g)))));
        }
        Ok(Self::build(Complex::ChevalleyEilenberg, space, nl, nl, nm, b2))
    }

    pub fn is_symmetric(&self) -> bool {
        self.complex == Complex::ChevalleyEilenberg
    }

    pub fn sdeg(&self) -> &[i32] {
        &self.sdeg
    }

    fn input_sdeg(&self) -> &[i32] {
        &self.sdeg[..self.n_in]
    }

    pub fn outputs(&self) -> std::ops::Range<usize> {
        self.out_offset..self.out_offset + self.n_out
    }

    /// Input words indexing a slice: sorted words for symmetric cochains.
    fn words(&self, n: usize, total: i32) -> Vec<Word> {
        if self.is_symmetric() {
            sorted_words_of_degree(self.input_sdeg(), n, total)
        } else {
            words_of_degree(self.input_sdeg(), n, total)
        }
    }

    /// All cochains of arity `n` and bar degree `q` (Hochschild-shaped for Harrison).
    pub fn slice(&self, n: usize, q: i32) -> Slice {
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for o in self.outputs() {
            by_degree.entry(self.sdeg[o]).or_default().push(o);
        }
        let mut basis = Vec::new();
        for (&od, outs) in &by_degree {
            for w in self.words(n, od - q) {
                for &o in outs {
                    basis.push((w.clone(), o));
                }
            }
        }
        basis.sort();
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Slice { arity: n, degree: q, basis, index }
    }

    /// Bar degrees that occur for cochains of arity `n`.
    pub fn degrees(&self, n: usize) -> Vec<i32> {
        let wd = crate::multilinear::word_degrees(self.input_sdeg(), n);
        let od: BTreeSet<i32> = self.outputs().map(|o| self.sdeg[o]).collect();
        let mut out: BTreeSet<i32> = BTreeSet::new();
        for o in &od {
            for w in &wd {
                out.insert(o - w);
            }
        }
        out.into_iter().collect()
    }

    /// Coordinates of a cochain in a slice.
    pub fn to_vector(&self, phi: &MultiMap, slice: &Slice) -> Result<Vector> {
        let mut v = Vector::new();
        for (w, val) in &phi.table {
            if self.is_symmetric() && sort_word(self.input_sdeg(), w).is_none_or(|(_, s)| s != *w) {
                continue;
            }
            for (o, c) in val.iter() {
                let i = slice
                    .position(w, o)
                    .ok_or_else(|| Error::input("cochain has a value outside the requested slice"))?;
                v.add_term(i, c);
            }
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &Vector, slice: &Slice) -> MultiMap {
        let mut m = MultiMap::zero(slice.arity);
        for (i, c) in v.iter() {
            let (w, o) = &slice.basis[i];
            m.add_at(w.clone(), &Vector::unit(*o), c);
        }
        if self.is_symmetric() {
            symmetric_extension(self.input_sdeg(), slice.arity, &m, self.n_in)
        } else {
            m
        }
    }

    /// Value of a cochain given on canonical words, at an arbitrary word.
    fn value(&self, phi: &dyn Fn(&[usize]) -> Option<Vector>, w: &[usize]) -> Vector {
        if self.is_symmetric() {
            match sort_word(self.input_sdeg(), w) {
                Some((e, s)) => phi(&s).map(|v| v.scaled(&sign(e))).unwrap_or_default(),
                None => Vector::new(),
            }
        } else {
            phi(w).unwrap_or_default()
        }
    }

    fn b2_left(&self, a: &Vector, x: usize) -> Vector {
        let mut out = Vector::new();
        for (i, c) in a.iter() {
            out.add_scaled(&self.b2.eval(&[i, x]), c);
        }
        out
    }

    fn b2_right(&self, x: usize, a: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in a.iter() {
            out.add_scaled(&self.b2.eval(&[x, i]), c);
        }
        out
    }

    /// `(∂φ)(w)` for a cochain of bar degree `q` and arity `w.len() - 1`.
    fn eval_differential(&self, phi: &dyn Fn(&[usize]) -> Option<Vector>, q: i32, w: &[usize]) -> Vector {
        let n1 = w.len();
        let sd = self.input_sdeg();
        let mut out = Vector::new();
        if !self.is_symmetric() {
            // b_2(φ(w_0…w_{n-1}), w_n) + (-1)^{q|w_0|} b_2(w_0, φ(w_1…w_n))
            out.add_scaled(&self.b2_left(&self.value(phi, &w[..n1 - 1]), w[n1 - 1]), &Q::one());
            out.add_scaled(&self.b2_right(w[0], &self.value(phi, &w[1..])), &sign((q * sd[w[0]]) as i64));
            // -(-1)^q Σ_r (-1)^{|w_0|+…+|w_{r-1}|} φ(…, b_2(w_r, w_{r+1}), …)
            let mut prefix = 0i32;
            for r in 0..n1 - 1 {
                let s = -sign((q + prefix) as i64);
                for (y, c) in self.b2.eval(&[w[r], w[r + 1]]).iter() {
                    if y >= self.n_in {
                        continue;
                    }
                    let mut v = w[..r].to_vec();
                    v.push(y);
                    v.extend_from_slice(&w[r + 2..]);
                    out.add_scaled(&self.value(phi, &v), &(c * &s));
                }
                prefix += sd[w[r]];
            }
            return out;
        }
        // unshuffle formulas: Σ ε b_2(φ(w_S), w_j) - (-1)^q Σ ε φ(b_2(w_S), w_rest)
        let degs: Vec<i32> = w.iter().map(|&i| sd[i]).collect();
        for j in 0..n1 {
            let mut order: Vec<usize> = (0..n1).filter(|&i| i != j).collect();
            order.push(j);
            let e = unshuffle_sign(&order, &degs);
            let ws: Vec<usize> = order[..n1 - 1].iter().map(|&i| w[i]).collect();
            out.add_scaled(&self.b2_left(&self.value(phi, &ws), w[j]), &sign(e));
        }
        for a in 0..n1 {
            for b in a + 1..n1 {
                let mut order = vec![a, b];
                order.extend((0..n1).filter(|&i| i != a && i != b));
                let e = unshuffle_sign(&order, &degs);
                let s = -sign(q as i64) * sign(e);
                let rest: Vec<usize> = order[2..].iter().map(|&i| w[i]).collect();
                for (y, c) in self.b2.eval(&[w[a], w[b]]).iter() {
                    if y >= self.n_in {
                        continue;
                    }
                    let mut v = vec![y];
                    v.extend_from_slice(&rest);
                    out.add_scaled(&self.value(phi, &v), &(c * &s));
                }
            }
        }
        out
    }

    /// Words of arity `n + 1` on which `∂` of a cochain supported at `v` can be nonzero.
    fn candidates(&self, v: &[usize]) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut push = |w: Word| {
            if self.is_symmetric() {
                if let Some((_, s)) = sort_word(self.input_sdeg(), &w) {
                    out.insert(s);
                }
            } else {
                out.insert(w);
            }
        };
        for x in 0..self.n_in {
            let mut w = v.to_vec();
            w.push(x);
            push(w);
            let mut w = vec![x];
            w.extend_from_slice(v);
            push(w);
        }
        for r in 0..v.len() {
            if let Some(pre) = self.preimages.get(&v[r]) {
                for (a, b, _) in pre {
                    let mut w = v[..r].to_vec();
                    w.push(*a);
                    w.push(*b);
                    w.extend_from_slice(&v[r + 1..]);
                    push(w);
                }
            }
        }
        out
    }

    /// Matrix of `∂: slice(n, q) → slice(n + 1, q + 1)`.
    pub fn differential_matrix(&self, src: &Slice, tgt: &Slice) -> Result<LinMap> {
        let q = src.degree;
        let mut cols = Vec::with_capacity(src.dim());
        for (v, o) in &src.basis {
            let phi = |u: &[usize]| (u == v.as_slice()).then(|| Vector::unit(*o));
            let mut col = Vector::new();
            for w in self.candidates(v) {
                let val = self.eval_differential(&phi, q, &w);
                for (o2, c) in val.iter() {
                    let i = tgt.position(&w, o2).ok_or_else(|| {
                        Error::internal("differential leaves its target slice")
                    })?;
                    col.add_term(i, c);
                }
            }
            cols.push(col);
        }
        Ok(LinMap::from_cols(tgt.dim(), cols))
    }

    /// `∂φ` by direct evaluation on every canonical word of arity `n + 1`.
    pub fn differential(&self, phi: &MultiMap) -> Result<MultiMap> {
        if phi.is_zero() {
            return Ok(MultiMap::zero(phi.arity + 1));
        }
        let q = phi
            .degree(self.input_sdeg(), &self.sdeg)
            .ok_or_else(|| Error::input("cochain is not homogeneous"))?;
        let f = |u: &[usize]| phi.get(u).cloned();
        let n1 = phi.arity + 1;
        let mut out = MultiMap::zero(n1);
        let outs: BTreeSet<i32> = self.outputs().map(|o| self.sdeg[o]).collect();
        for od in outs {
            for w in self.words(n1, od - q - 1) {
                out.set(w.clone(), self.eval_differential(&f, q, &w));
            }
        }
        if self.is_symmetric() {
            out = symmetric_extension(self.input_sdeg(), n1, &out, self.n_in);
        }
        Ok(out)
    }

    /// Basis of the cochains in a slice that belong to this complex
    /// (shuffle-vanishing ones for Harrison), in slice coordinates.
    pub fn subcomplex_basis(&self, slice: &Slice) -> Vec<Vector> {
        if self.complex != Complex::Harrison {
            return (0..slice.dim()).map(Vector::unit).collect();
        }
        shuffle_constraints(self.input_sdeg(), slice).kernel()
    }

    /// `(cocycles, coboundaries)` dimensions of the slice `(n, q)`.
    pub fn slice_cohomology(&self, n: usize, q: i32) -> Result<SliceDims> {
        let s = self.slice(n, q);
        let t = self.slice(n + 1, q + 1);
        let sub = self.subcomplex_basis(&s);
        let d = self.differential_matrix(&s, &t)?;
        let image: Vec<Vector> = sub.iter().map(|v| d.apply(v)).collect();
        let rank_out = LinMap::from_cols(t.dim(), image).rank();
        let cocycles = sub.len() - rank_out;
        let coboundaries = if n == 0 {
            0
        } else {
            let p = self.slice(n - 1, q - 1);
            let subp = self.subcomplex_basis(&p);
            let dp = self.differential_matrix(&p, &s)?;
            LinMap::from_cols(s.dim(), subp.iter().map(|v| dp.apply(v)).collect()).rank()
        };
        Ok(SliceDims {
            arity: n,
            bar_degree: q,
            internal_degree: q + 1 - n as i32,
            cochains: sub.len(),
            cocycles,
            coboundaries,
            cohomology: cocycles - coboundaries,
        })
    }

    /// Slice dimensions for arities in `arities` and internal degrees in `degrees`.
    pub fn cohomology_slice_dims(
        &self,
        arities: std::ops::RangeInclusive<usize>,
        degrees: std::ops::RangeInclusive<i32>,
    ) -> Result<Vec<SliceDims>> {
        let mut out = Vec::new();
        for n in arities {
            for p in degrees.clone() {
                out.push(self.slice_cohomology(n, p + n as i32 - 1)?);
            }
        }
        Ok(out)
    }

    /// A cochain `ψ` with `∂ψ = φ` (shuffle-vanishing for Harrison), or `None` when
    /// the class of the cocycle `φ` is nonzero.
    pub fn is_coboundary(&self, phi: &MultiMap) -> Result<Option<MultiMap>> {
        let n = phi.arity;
        if phi.is_zero() {
            return Ok(Some(MultiMap::zero(n.saturating_sub(1))));
        }
        let q = phi
            .degree(self.input_sdeg(), &self.sdeg)
            .ok_or_else(|| Error::input("cochain is not homogeneous"))?;
        let s = self.slice(n, q);
        let x = self.to_vector(phi, &s)?;
        let t = self.slice(n + 1, q + 1);
        let dx = self.differential_matrix(&s, &t)?.apply(&x);
        if !dx.is_zero() {
            let (w, o) = &t.basis[dx.first().unwrap().0];
            return Err(Error::input(format!(
                "not a cocycle: ∂ is nonzero at ({}) → {}",
                w.iter().map(|&i| self.space.name(i)).collect::<Vec<_>>().join(", "),
                self.space.name(*o)
            )));
        }
        if self.complex == Complex::Harrison && !shuffle_constraints(self.input_sdeg(), &s).apply(&x).is_zero() {
            return Err(Error::input("cochain does not vanish on shuffles"));
        }
        if n == 0 {
            return Ok(None);
        }
        let p = self.slice(n - 1, q - 1);
        let sub = self.subcomplex_basis(&p);
        let d = self.differential_matrix(&p, &s)?;
        let mut ech = Echelon::new();
        for (k, v) in sub.iter().enumerate() {
            ech.insert(&d.apply(v), k);
        }
        Ok(ech.solve(&x).map(|comb| {
            let mut y = Vector::new();
            for (k, c) in comb.iter() {
                y.add_scaled(&sub[k], c);
            }
            self.from_vector(&y, &p)
        }))
    }
}

/// Exponent of the Koszul sign of listing the letters of a word in the given order.
fn unshuffle_sign(order: &[usize], degs: &[i32]) -> i64 {
    let mut e = 0i64;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] && degs[order[i]] & 1 == 1 && degs[order[j]] & 1 == 1 {
                e += 1;
            }
        }
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceDims {
    pub arity: usize,
    pub bar_degree: i32,
    pub internal_degree: i32,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

/// Distinct rearrangements of a word.
fn rearrangements(v: &[usize]) -> BTreeSet<Word> {
    Perm::all(v.len())
        .into_iter()
        .map(|p| (0..v.len()).map(|i| v[p.apply(i)]).collect())
        .collect()
}

/// Matrix of `φ ↦ φ·a`, `(φ·a)(w) = φ(a.w)`, on a Hochschild slice.
pub fn right_action_matrix(sdeg: &[i32], slice: &Slice, a: &GroupAlgebraElement) -> LinMap {
    // (φ·a) picks up φ(v) at w with the coefficient of v in a.w; words only mix
    // within one rearrangement class, so each class is acted on once
    let mut coeff: HashMap<Word, Vec<(Word, Q)>> = HashMap::new();
    let mut done: BTreeSet<Word> = BTreeSet::new();
    for (v, _) in &slice.basis {
        let mut key = v.clone();
        key.sort_unstable();
        if !done.insert(key) {
            continue;
        }
        for w in rearrangements(v) {
            for (u, c) in a.act_on_word(sdeg, &w) {
                coeff.entry(u).or_default().push((w.clone(), c));
            }
        }
    }
    let cols = slice
        .basis
        .iter()
        .map(|(v, o)| {
            let mut col = Vector::new();
            for (w, c) in coeff.get(v).map(Vec::as_slice).unwrap_or(&[]) {
                if let Some(i) = slice.position(w, *o) {
                    col.add_term(i, c);
                }
            }
            col
        })
        .collect();
    LinMap::from_cols(slice.dim(), cols)
}

/// Stacked conditions `φ(μ_{i,n-i}.w) = 0`; its kernel is the Harrison part of the slice.
pub fn shuffle_constraints(sdeg: &[i32], slice: &Slice) -> LinMap {
    let n = slice.arity;
    if n < 2 {
        return LinMap::zero(0, slice.dim());
    }
    let mut blocks = Vec::new();
    for i in 1..n {
        let mu = shuffle_element(i, n - i).expect("valid shuffle");
        blocks.push(right_action_matrix(sdeg, slice, &mu));
    }
    let rows = slice.dim() * blocks.len();
    let cols = (0..slice.dim())
        .map(|j| {
            let mut c = Vector::new();
            for (b, m) in blocks.iter().enumerate() {
                c.add_scaled(&m.cols[j].remap(|i| Some(i + b * slice.dim())), &Q::one());
            }
            c
        })
        .collect();
    LinMap::from_cols(rows, cols)
}

/// The decomposition `C^n_Hoch = C^n_Harr ⊕ W^n` on one slice.
#[derive(Clone, Debug, Serialize)]
pub struct BarrSplitting {
    pub arity: usize,
    pub bar_degree: i32,
    pub hochschild: usize,
    pub harrison: usize,
    pub complement: usize,
    /// `ker(φ ↦ φ·e_n)` equals the shuffle-vanishing subspace.
    pub kernel_matches: bool,
    /// Harrison part and image of `e_n` together span the slice with zero intersection.
    pub direct_sum: bool,
}

pub fn barr_splitting(ctx: &CochainContext, n: usize, q: i32) -> Result<BarrSplitting> {
    let s = ctx.slice(n, q);
    let sdeg = ctx.input_sdeg();
    let harr = shuffle_constraints(sdeg, &s).kernel();
    let (w_basis, kernel_matches) = if n >= 2 {
        let e = right_action_matrix(sdeg, &s, &barr_idempotent(n)?.element);
        let ker = e.kernel();
        // same dimension and Harrison ⊂ ker
        let inside = harr.iter().all(|v| e.apply(v).is_zero());
        let mut im = Echelon::new();
        let mut w_basis = Vec::new();
        for (j, c) in e.cols.iter().enumerate() {
            if im.insert(c, j).is_none() {
                w_basis.push(c.clone());
            }
        }
        (w_basis, inside && ker.len() == harr.len())
    } else {
        (Vec::new(), true)
    };
    let mut all = harr.clone();
    all.extend(w_basis.iter().cloned());
    let rank = LinMap::from_cols(s.dim(), all).rank();
    Ok(BarrSplitting {
        arity: n,
        bar_degree: q,
        hochschild: s.dim(),
        harrison: harr.len(),
        complement: w_basis.len(),
        kernel_matches,
        direct_sum: rank == s.dim() && harr.len() + w_basis.len() == s.dim(),
    })
}

/// Whether a Hochschild cochain vanishes on all shuffle images.
pub fn is_harrison(ctx: &CochainContext, phi: &MultiMap) -> Result<bool> {
    if phi.is_zero() {
        return Ok(true);
    }
    let q = phi
        .degree(ctx.input_sdeg(), &ctx.sdeg)
        .ok_or_else(|| Error::input("cochain is not homogeneous"))?;
    let s = ctx.slice(phi.arity, q);
    let x = ctx.to_vector(phi, &s)?;
    Ok(shuffle_constraints(ctx.input_sdeg(), &s).apply(&x).is_zero())
}

/// Turns a Hochschild witness `∂y = x` of a Harrison cocycle into a Harrison witness
/// `y₁ = y - y·e_{n-1}`.
pub fn hochschild_to_harrison_witness(ctx: &CochainContext, x: &MultiMap, y: &MultiMap) -> Result<MultiMap> {
    if ctx.complex == Complex::ChevalleyEilenberg {
        return Err(Error::input("Harrison witnesses live in Hochschild/Harrison contexts"));
    }
    if !is_harrison(ctx, x)? {
        return Err(Error::input("x does not vanish on shuffles"));
    }
    let dy = ctx.differential(y)?;
    if dy != *x {
        return Err(Error::input("∂y ≠ x"));
    }
    let m = y.arity;
    let y1 = if m < 2 || y.is_zero() {
        y.clone()
    } else {
        let q = y
            .degree(ctx.input_sdeg(), &ctx.sdeg)
            .ok_or_else(|| Error::input("witness is not homogeneous"))?;
        let s = ctx.slice(m, q);
        let yv = ctx.to_vector(y, &s)?;
        let e = right_action_matrix(ctx.input_sdeg(), &s, &barr_idempotent(m)?.element);
        ctx.from_vector(&yv.sub(&e.apply(&yv)), &s)
    };
    if !is_harrison(ctx, &y1)? || ctx.differential(&y1)? != *x {
        return Err(Error::internal("constructed Harrison witness fails its check"));
    }
    Ok(y1)
}

/// Result of checking `∂(φ·e_n) = (∂φ)·e_{n+1}` on a whole Hochschild arity.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCompatibility {
    pub arity: usize,
    pub pass: bool,
    /// Slice coordinates of a basis cochain where the identity fails: `(bar degree, index)`.
    pub counterexample: Option<(i32, usize)>,
}

/// Checks the idempotents `e_n`, `e_{n+1}` against the Hochschild differential on
/// every slice of arity `n`.
pub fn verify_chain_compatibility_with(
    ctx: &CochainContext,
    n: usize,
    e_n: &GroupAlgebraElement,
    e_n1: &GroupAlgebraElement,
) -> Result<ChainCompatibility> {
    let sdeg = ctx.input_sdeg();
    for q in ctx.degrees(n) {
        let s = ctx.slice(n, q);
        let t = ctx.slice(n + 1, q + 1);
        let d = ctx.differential_matrix(&s, &t)?;
        let a = right_action_matrix(sdeg, &s, e_n);
        let b = right_action_matrix(sdeg, &t, e_n1);
        let lhs = d.compose(&a);
        let rhs = b.compose(&d);
        for j in 0..s.dim() {
            if lhs.cols[j] != rhs.cols[j] {
                return Ok(ChainCompatibility { arity: n, pass: false, counterexample: Some((q, j)) });
            }
        }
    }
    Ok(ChainCompatibility { arity: n, pass: true, counterexample: None })
}

pub fn verify_chain_compatibility(ctx: &CochainContext, n: usize) -> Result<ChainCompatibility> {
    if ctx.complex == Complex::ChevalleyEilenberg {
        return Err(Error::input("chain compatibility is a statement about Hochschild cochains"));
    }
    verify_chain_compatibility_with(ctx, n, &barr_idempotent(n)?.element, &barr_idempotent(n + 1)?.element)
}
