//! Homotopy algebras in bar form: relations, ∞-morphisms, transfer to cohomology,
//! coderivation exponentials, gauge transformations and morphism normalization.
//!
//! An operation `m_k: A^{⊗k} → A` of degree `2 - k` is stored as
//! `b_k: (sA)^{⊗k} → sA` of degree `1`. Signs: `b_1 = -d` and
//! `b_2(sa, sb) = (-1)^{|a|} s(ab)`; the same formula with the bracket is used for
//! Lie algebras and gives maps graded symmetric in the suspended degrees.
//!
//! Lie structures store their true symmetric operations. Internally they are run
//! through the tensor coalgebra: a symmetric map `b_n` acts there as `b_n / n!`
//! and is fed symmetrized inputs, which reproduces the unshuffle formulas.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebras::{DgAlgebra, Species};
use crate::error::{Error, Result};
use crate::graded::{Contraction, GradedSpace};
use crate::linalg::{LinMap, Vector};
use crate::multilinear::{
    all_words, coalgebra_map_on_tensor, compose_linear_inputs, compose_linear_output, coderivation_on_tensor,
    corestriction, shifted_degrees, sort_word, symmetric_extension, symmetrize_word, tensor_add_scaled,
    tensor_of_word, Components, MultiMap, Tensor, Word,
};
use crate::scalar::{factorial, sign, Q};
use crate::symgroup::shuffle_element;

/// A P∞ structure truncated at `arity_bound`; operations above it are unspecified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PInfinity {
    pub species: Species,
    pub space: GradedSpace,
    pub unit: Option<usize>,
    pub ops: Components,
    pub arity_bound: usize,
}

impl PInfinity {
    /// `(A, b_1, b_2, 0, 0, …)`.
    pub fn from_algebra(alg: &DgAlgebra, arity_bound: usize) -> PInfinity {
        let n = alg.dim();
        let mut ops = Components::new();
        let mut b1 = MultiMap::zero(1);
        for x in 0..n {
            b1.set(vec![x], alg.d.cols[x].neg());
        }
        ops.insert(1, b1);
        let mut b2 = MultiMap::zero(2);
        for ((a, b), v) in alg.products() {
            b2.set(vec![*a, *b], v.scaled(&sign(alg.degree(*a) as i64)));
        }
        ops.insert(2, b2);
        ops.retain(|_, m| !m.is_zero());
        PInfinity { species: alg.species, space: alg.space.clone(), unit: alg.unit, ops, arity_bound }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn sdeg(&self) -> Vec<i32> {
        shifted_degrees(&self.space)
    }

    pub fn op(&self, k: usize) -> MultiMap {
        self.ops.get(&k).cloned().unwrap_or_else(|| MultiMap::zero(k))
    }

    pub fn set_op(&mut self, k: usize, m: MultiMap) {
        if m.is_zero() {
            self.ops.remove(&k);
        } else {
            self.ops.insert(k, m);
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.ops.get(&1).is_none_or(|m| m.is_zero())
    }

    /// Lowest arity `k ≥ from` carrying a nonzero operation.
    pub fn first_nonzero_from(&self, from: usize) -> Option<usize> {
        self.ops.iter().find(|(k, m)| **k >= from && **k <= self.arity_bound && !m.is_zero()).map(|(k, _)| *k)
    }

    /// Components in the tensor-coalgebra encoding.
    pub fn tilde(&self) -> Components {
        to_tilde(self.species, &self.ops)
    }

    /// Unshifted product `m_2(a, b) = (-1)^{|a|} b_2(sa, sb)`.
    pub fn product(&self, a: usize, b: usize) -> Vector {
        self.op(2).eval(&[a, b]).scaled(&sign(self.space.degree(a) as i64))
    }

    /// Inputs on which a relation of arity `n` needs checking.
    pub fn test_words(&self, n: usize) -> Vec<Word> {
        test_words(self.species, &self.sdeg(), self.dim(), n)
    }
}

pub(crate) fn to_tilde(species: Species, ops: &Components) -> Components {
    match species {
        Species::Lie => ops.iter().map(|(k, m)| (*k, m.scaled(&(Q::one() / factorial(*k))))).collect(),
        _ => ops.clone(),
    }
}

/// `sym(w)` for Lie, `w` otherwise.
pub(crate) fn lift_input(species: Species, sdeg: &[i32], w: &[usize]) -> Tensor {
    match species {
        Species::Lie => symmetrize_word(sdeg, w),
        _ => tensor_of_word(w.to_vec()),
    }
}

pub(crate) fn test_words(species: Species, sdeg: &[i32], n_basis: usize, n: usize) -> Vec<Word> {
    let words = all_words(n_basis, n);
    match species {
        Species::Lie => words
            .into_iter()
            .filter(|w| sort_word(sdeg, w).is_some_and(|(_, s)| s == *w))
            .collect(),
        _ => words,
    }
}

/// Stores values computed on sorted words as a full symmetric table for Lie.
pub(crate) fn complete(species: Species, sdeg: &[i32], n_basis: usize, arity: usize, m: MultiMap) -> MultiMap {
    match species {
        Species::Lie => symmetric_extension(sdeg, arity, &m, n_basis),
        _ => m,
    }
}

/// Outcome of a relation check; `witness` names the inputs of the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub pass: bool,
    pub checked_up_to: usize,
    pub failing_arity: Option<usize>,
    pub witness: Option<Vec<String>>,
    pub shuffle_vanishing: Option<ShuffleReport>,
}

fn names(space: &GradedSpace, w: &[usize]) -> Vec<String> {
    w.iter().map(|&i| space.name(i).to_string()).collect()
}

/// `(D²)` corestricted, evaluated on one input word.
pub fn relation_defect(s: &PInfinity, w: &[usize]) -> Vector {
    let sdeg = s.sdeg();
    let comps = s.tilde();
    let t = lift_input(s.species, &sdeg, w);
    let dt = coderivation_on_tensor(&comps, 1, &sdeg, &t);
    corestriction(&comps, &dt)
}

/// Verifies the relations of every arity `≤ n` on all basis inputs.
pub fn check_relations(s: &PInfinity, n: usize) -> RelationReport {
    let n = n.min(s.arity_bound);
    for k in 1..=n {
        for w in s.test_words(k) {
            if !relation_defect(s, &w).is_zero() {
                return RelationReport {
                    pass: false,
                    checked_up_to: n,
                    failing_arity: Some(k),
                    witness: Some(names(&s.space, &w)),
                    shuffle_vanishing: None,
                };
            }
        }
    }
    let shuffle = (s.species == Species::Com).then(|| shuffle_vanishing_check(&s.ops, &s.sdeg(), n));
    let pass = shuffle.as_ref().is_none_or(|r| r.pass);
    RelationReport {
        pass,
        checked_up_to: n,
        failing_arity: None,
        witness: None,
        shuffle_vanishing: shuffle,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShuffleReport {
    pub pass: bool,
    pub checked_up_to: usize,
    /// `(arity, i, input word)` with `b_n(μ_{i,n-i}.w) ≠ 0`.
    pub witness: Option<(usize, usize, Word)>,
}

/// Checks that every component of arity `2 ≤ k ≤ n` kills all shuffle images.
pub fn shuffle_vanishing_check(comps: &Components, sdeg: &[i32], n: usize) -> ShuffleReport {
    let dim = sdeg.len();
    for (&k, m) in comps.range(2..=n) {
        if m.is_zero() {
            continue;
        }
        for i in 1..k {
            let mu = shuffle_element(i, k - i).expect("valid shuffle");
            for w in all_words(dim, k) {
                if !m.eval_tensor(&mu.act_on_word(sdeg, &w)).is_zero() {
                    return ShuffleReport { pass: false, checked_up_to: n, witness: Some((k, i, w)) };
                }
            }
        }
    }
    ShuffleReport { pass: true, checked_up_to: n, witness: None }
}

/// An ∞-morphism given by its components `φ_n` (bar degree 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InftyMorphism {
    pub source: PInfinity,
    pub target: PInfinity,
    pub comps: Components,
}

impl InftyMorphism {
    pub fn comp(&self, k: usize) -> MultiMap {
        self.comps.get(&k).cloned().unwrap_or_else(|| MultiMap::zero(k))
    }

    pub fn linear_part(&self) -> LinMap {
        let f1 = self.comp(1);
        LinMap::from_cols(self.target.dim(), (0..self.source.dim()).map(|i| f1.eval(&[i])).collect())
    }

    pub fn tilde(&self) -> Components {
        to_tilde(self.source.species, &self.comps)
    }
}

/// `F∘D_src - D_tgt∘F` corestricted, on one input word.
pub fn morphism_defect(m: &InftyMorphism, w: &[usize]) -> Vector {
    let sp = m.source.species;
    let sdeg = m.source.sdeg();
    let fc = m.tilde();
    let t = lift_input(sp, &sdeg, w);
    let lhs = corestriction(&fc, &coderivation_on_tensor(&m.source.tilde(), 1, &sdeg, &t));
    let ft = coalgebra_map_on_tensor(&fc, &t);
    let rhs = corestriction(&m.target.tilde(), &ft);
    lhs.sub(&rhs)
}

pub fn check_morphism(m: &InftyMorphism, n: usize) -> RelationReport {
    let n = n.min(m.source.arity_bound).min(m.target.arity_bound);
    for k in 1..=n {
        for w in m.source.test_words(k) {
            if !morphism_defect(m, &w).is_zero() {
                return RelationReport {
                    pass: false,
                    checked_up_to: n,
                    failing_arity: Some(k),
                    witness: Some(names(&m.source.space, &w)),
                    shuffle_vanishing: None,
                };
            }
        }
    }
    let shuffle = (m.source.species == Species::Com).then(|| shuffle_vanishing_check(&m.comps, &m.source.sdeg(), n));
    let pass = shuffle.as_ref().is_none_or(|r| r.pass);
    RelationReport { pass, checked_up_to: n, failing_arity: None, witness: None, shuffle_vanishing: shuffle }
}

/// Tree sums of the transfer along a contraction, evaluated lazily on words.
///
/// With `h̃ = -h` the bar-form recursion reads `p(w) = Σ b̃_2(φ(w'), φ(w''))`
/// over splittings `w = w'w''`, where `φ(x) = g(x)` on letters and
/// `φ(u) = h̃ p(u)` on longer words. Every `φ` has degree 0, so no Koszul signs
/// appear. The transferred operation is `f p` and the morphism component `h̃ p`.
pub struct TransferEngine<'a> {
    product: &'a dyn Fn(usize, usize) -> Vector,
    big_degrees: Vec<i32>,
    g: Vec<Vector>,
    h_tilde: &'a LinMap,
    scale: Q,
    memo: HashMap<Word, Vector>,
}

impl<'a> TransferEngine<'a> {
    /// `product` multiplies basis elements of the big algebra (unshifted);
    /// `scale` is `1/2` for Lie brackets and `1` otherwise.
    pub fn new(
        product: &'a dyn Fn(usize, usize) -> Vector,
        big_degrees: Vec<i32>,
        g: &LinMap,
        h_tilde: &'a LinMap,
        scale: Q,
    ) -> Self {
        TransferEngine { product, big_degrees, g: g.cols.clone(), h_tilde, scale, memo: HashMap::new() }
    }

    fn bar_b2(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, x) in a.iter() {
            let s = sign(self.big_degrees[i] as i64) * &self.scale;
            for (j, y) in b.iter() {
                let v = (self.product)(i, j);
                if !v.is_zero() {
                    out.add_scaled(&v, &(x * y * &s));
                }
            }
        }
        out
    }

    fn phi(&mut self, w: &[usize]) -> Vector {
        if w.len() == 1 {
            return self.g[w[0]].clone();
        }
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let p = self.p(w);
        let v = self.h_tilde.apply(&p);
        self.memo.insert(w.to_vec(), v.clone());
        v
    }

    /// The planar tree sum `p(w)` (in the big space, before `f` or `h̃`).
    pub fn p(&mut self, w: &[usize]) -> Vector {
        let mut out = Vector::new();
        for i in 1..w.len() {
            let a = self.phi(&w[..i]);
            if a.is_zero() {
                continue;
            }
            let b = self.phi(&w[i..]);
            if b.is_zero() {
                continue;
            }
            out.add_scaled(&self.bar_b2(&a, &b), &Q::one());
        }
        out
    }

    pub fn p_tensor(&mut self, t: &Tensor) -> Vector {
        let mut out = Vector::new();
        for (w, c) in t {
            let v = self.p(w);
            out.add_scaled(&v, c);
        }
        out
    }
}

/// Minimal model on cohomology with the ∞-quasi-isomorphism `H → A`.
#[derive(Clone, Debug)]
pub struct Transferred {
    pub minimal: PInfinity,
    pub morphism: InftyMorphism,
}

/// Transfers a dg algebra along a contraction onto `small` (zero differential).
pub fn transfer_minimal_model(
    alg: &DgAlgebra,
    small: &GradedSpace,
    con: &Contraction,
    n: usize,
) -> Result<Transferred> {
    let m = small.dim();
    if let Some(id) = con.first_violation(&alg.d, &LinMap::zero(m, m)) {
        return Err(Error::input(format!("contraction identity fails: {id}")));
    }
    let species = alg.species;
    let h_tilde = con.h.neg();
    let product = |a: usize, b: usize| alg.mul(a, b);
    let scale = if species == Species::Lie { Q::new(1.into(), 2.into()) } else { Q::one() };
    let mut engine = TransferEngine::new(&product, alg.space.degrees().to_vec(), &con.g, &h_tilde, scale);
    let sdeg = shifted_degrees(small);
    let unit = alg.unit.and_then(|u| {
        let fu = con.f.apply(&Vector::unit(u));
        (fu.nnz() == 1 && fu.first().is_some_and(|(_, c)| c.is_one())).then(|| fu.first().unwrap().0)
    });
    let mut ops = Components::new();
    let mut comps = Components::new();
    let mut g1 = MultiMap::zero(1);
    for i in 0..m {
        g1.set(vec![i], con.g.cols[i].clone());
    }
    comps.insert(1, g1);
    for k in 2..=n {
        let mut op = MultiMap::zero(k);
        let mut comp = MultiMap::zero(k);
        for w in test_words(species, &sdeg, m, k) {
            let t = lift_input(species, &sdeg, &w);
            let p = engine.p_tensor(&t);
            op.set(w.clone(), con.f.apply(&p));
            comp.set(w, h_tilde.apply(&p));
        }
        let op = complete(species, &sdeg, m, k, op);
        let comp = complete(species, &sdeg, m, k, comp);
        if !op.is_zero() {
            ops.insert(k, op);
        }
        if !comp.is_zero() {
            comps.insert(k, comp);
        }
    }
    let minimal = PInfinity { species, space: small.clone(), unit, ops, arity_bound: n };
    let target = PInfinity::from_algebra(alg, n);
    let morphism = InftyMorphism { source: minimal.clone(), target, comps };
    Ok(Transferred { minimal, morphism })
}

/// Transfer onto the cohomology computed by [`crate::graded::cohomology_with_contraction`].
pub fn minimal_model(alg: &DgAlgebra, n: usize) -> Result<Transferred> {
    let (h, con) = crate::graded::cohomology_with_contraction(&alg.complex())?;
    transfer_minimal_model(alg, &h, &con, n)
}

/// `e^{sθ}` applied to a tensor (`s = ±1`), for a degree-0 coderivation lowering word length.
pub fn exp_on_tensor(theta: &Components, sdeg: &[i32], t: &Tensor, s: i64) -> Tensor {
    let mut out = t.clone();
    let mut term = t.clone();
    let mut m = 1i64;
    loop {
        let next = coderivation_on_tensor(theta, 0, sdeg, &term);
        if next.is_empty() {
            break;
        }
        // term = (sθ)^m / m! applied to t
        let c = Q::from_integer(s.into()) / Q::from_integer(m.into());
        term = next.into_iter().map(|(w, x)| (w, x * &c)).collect();
        tensor_add_scaled(&mut out, &term, &Q::one());
        m += 1;
    }
    out
}

/// Validates a degree-0 coderivation whose components all have arity `≥ 2`.
pub fn validate_theta(theta: &Components, sdeg: &[i32]) -> Result<()> {
    for (k, m) in theta {
        if *k < 2 {
            return Err(Error::input("a coderivation for the exponential must lower word length"));
        }
        if let Some(d) = m.degree(sdeg, sdeg) {
            if d != 0 {
                return Err(Error::input(format!("coderivation component of arity {k} has degree {d}, not 0")));
            }
        } else if !m.is_zero() {
            return Err(Error::input(format!("coderivation component of arity {k} is not homogeneous")));
        }
    }
    Ok(())
}

/// Corestriction of `e^θ` on words of length `≤ w_max`.
pub fn exp_coderivation(theta: &Components, sdeg: &[i32], w_max: usize) -> Result<Components> {
    validate_theta(theta, sdeg)?;
    let n = sdeg.len();
    let mut out = Components::new();
    for len in 1..=w_max {
        let mut m = MultiMap::zero(len);
        for w in all_words(n, len) {
            let t = exp_on_tensor(theta, sdeg, &tensor_of_word(w.clone()), 1);
            let v = length_one_part(&t);
            m.set(w, v);
        }
        if !m.is_zero() {
            out.insert(len, m);
        }
    }
    Ok(out)
}

pub(crate) fn length_one_part(t: &Tensor) -> Vector {
    let mut v = Vector::new();
    for (w, c) in t {
        if w.len() == 1 {
            v.add_term(w[0], c);
        }
    }
    v
}

/// Conjugates the codifferential by `e^θ` where `θ` has the single component `φ`:
/// `D' = e^θ D e^{-θ}`. To first order `b_k - b'_k = ∂φ`.
pub fn gauge_transform(s: &PInfinity, phi: &MultiMap, n: usize) -> Result<PInfinity> {
    if !s.is_minimal() {
        return Err(Error::input("gauge transformations act on minimal structures"));
    }
    let sdeg = s.sdeg();
    let mut theta = Components::new();
    if !phi.is_zero() {
        theta.insert(phi.arity, phi.clone());
    }
    validate_theta(&theta, &sdeg)?;
    let theta = to_tilde(s.species, &theta);
    let n = n.min(s.arity_bound);
    let d = s.tilde();
    let mut out = PInfinity { ops: Components::new(), arity_bound: n, ..s.clone() };
    for k in 2..=n {
        let mut op = MultiMap::zero(k);
        for w in s.test_words(k) {
            let t = lift_input(s.species, &sdeg, &w);
            let t = exp_on_tensor(&theta, &sdeg, &t, -1);
            let t = coderivation_on_tensor(&d, 1, &sdeg, &t);
            let t = exp_on_tensor(&theta, &sdeg, &t, 1);
            op.set(w, length_one_part(&t));
        }
        out.set_op(k, complete(s.species, &sdeg, s.dim(), k, op));
    }
    Ok(out)
}

/// Output of [`normalize_morphism`].
#[derive(Clone, Debug)]
pub struct Normalized {
    pub morphism: InftyMorphism,
    /// Arities at which the target structure had to change.
    pub target_changed_at: Vec<usize>,
}

/// Brings an ∞-isomorphism between minimal structures to the shape
/// `(id, 0, …, 0, φ_{m-1}, …)` where `m` is the lowest arity `≥ 3` with a nonzero
/// source operation: first the target is transported along `φ_1^{-1}`, then the
/// lowest nonlinear component is removed by composing with `e^{-Φ}` repeatedly.
pub fn normalize_morphism(psi: &InftyMorphism, n: usize) -> Result<Normalized> {
    if !psi.source.is_minimal() || !psi.target.is_minimal() {
        return Err(Error::input("normalization needs minimal source and target"));
    }
    let l = psi.linear_part();
    let linv = l.inverse().ok_or_else(|| Error::input("the linear component is not invertible"))?;
    let n = n.min(psi.source.arity_bound).min(psi.target.arity_bound);
    let species = psi.source.species;
    let sdeg = psi.source.sdeg();
    let dim = psi.source.dim();
    // transport the target along φ_1: T'_k = φ_1^{-1} T_k φ_1^{⊗k}
    let mut target = PInfinity { ops: Components::new(), arity_bound: n, ..psi.source.clone() };
    target.species = psi.target.species;
    for (k, op) in &psi.target.ops {
        if *k <= n {
            target.set_op(*k, compose_linear_output(&linv.cols, &compose_linear_inputs(op, &l.cols)));
        }
    }
    let mut comps = Components::new();
    for (k, c) in &psi.comps {
        if *k <= n {
            let c = compose_linear_output(&linv.cols, c);
            if !c.is_zero() {
                comps.insert(*k, c);
            }
        }
    }
    let original_target = target.clone();
    let stop = psi.source.first_nonzero_from(3).unwrap_or(n + 1);
    for i in 2..=stop.saturating_sub(2).min(n) {
        let Some(phi_i) = comps.get(&i).cloned() else { continue };
        let theta: Components = to_tilde(species, &[(i, phi_i)].into_iter().collect());
        let fc = to_tilde(species, &comps);
        let mut new_comps = Components::new();
        let mut new_target = PInfinity { ops: Components::new(), ..target.clone() };
        let dt = target.tilde();
        for k in 1..=n {
            let mut c = MultiMap::zero(k);
            let mut op = MultiMap::zero(k);
            for w in test_words(species, &sdeg, dim, k) {
                let t = lift_input(species, &sdeg, &w);
                let image = exp_on_tensor(&theta, &sdeg, &coalgebra_map_on_tensor(&fc, &t), -1);
                c.set(w.clone(), length_one_part(&image));
                if k >= 2 {
                    let u = exp_on_tensor(&theta, &sdeg, &t, 1);
                    let u = coderivation_on_tensor(&dt, 1, &sdeg, &u);
                    let u = exp_on_tensor(&theta, &sdeg, &u, -1);
                    op.set(w, length_one_part(&u));
                }
            }
            let c = complete(species, &sdeg, dim, k, c);
            if !c.is_zero() {
                new_comps.insert(k, c);
            }
            if k >= 2 {
                new_target.set_op(k, complete(species, &sdeg, dim, k, op));
            }
        }
        comps = new_comps;
        target = new_target;
    }
    let target_changed_at = (2..=n).filter(|k| target.op(*k) != original_target.op(*k)).collect();
    Ok(Normalized {
        morphism: InftyMorphism { source: psi.source.clone(), target, comps },
        target_changed_at,
    })
}

/// `e^{sθ}` on single words, computed once per word.
struct ExpCache<'a> {
    theta: &'a Components,
    sdeg: &'a [i32],
    s: i64,
    words: std::collections::HashMap<Word, Tensor>,
}

impl<'a> ExpCache<'a> {
    fn new(theta: &'a Components, sdeg: &'a [i32], s: i64) -> Self {
        ExpCache { theta, sdeg, s, words: Default::default() }
    }

    fn word(&mut self, w: &[usize]) -> &Tensor {
        if !self.words.contains_key(w) {
            let t = exp_on_tensor(self.theta, self.sdeg, &tensor_of_word(w.to_vec()), self.s);
            self.words.insert(w.to_vec(), t);
        }
        &self.words[w]
    }

    fn tensor(&mut self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t {
            let image = self.word(w).clone();
            tensor_add_scaled(&mut out, &image, c);
        }
        out
    }
}

/// Checks `Δ e^θ = (e^θ ⊗ e^θ) Δ` on every word of length `≤ w_max`; returns a failing word.
pub fn exp_coalgebra_violation(theta: &Components, sdeg: &[i32], w_max: usize) -> Option<Word> {
    let n = sdeg.len();
    let mut exp = ExpCache::new(theta, sdeg, 1);
    for len in 1..=w_max {
        for w in all_words(n, len) {
            let mut lhs: std::collections::BTreeMap<(Word, Word), Q> = Default::default();
            for (u, c) in exp.word(&w) {
                for cut in 0..=u.len() {
                    add_pair(&mut lhs, (u[..cut].to_vec(), u[cut..].to_vec()), c);
                }
            }
            let mut rhs: std::collections::BTreeMap<(Word, Word), Q> = Default::default();
            for cut in 0..=w.len() {
                let a = exp.word(&w[..cut]).clone();
                let b = exp.word(&w[cut..]);
                for (u, x) in &a {
                    for (v, y) in b {
                        add_pair(&mut rhs, (u.clone(), v.clone()), &(x * y));
                    }
                }
            }
            if lhs != rhs {
                return Some(w);
            }
        }
    }
    None
}

fn add_pair(m: &mut std::collections::BTreeMap<(Word, Word), Q>, k: (Word, Word), c: &Q) {
    let e = m.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&k);
    }
}

/// Checks `e^θ e^{-θ} = e^{-θ} e^θ = id` on words of length `≤ w_max`.
pub fn exp_inverse_violation(theta: &Components, sdeg: &[i32], w_max: usize) -> Option<Word> {
    let n = sdeg.len();
    let mut plus = ExpCache::new(theta, sdeg, 1);
    let mut minus = ExpCache::new(theta, sdeg, -1);
    for len in 1..=w_max {
        for w in all_words(n, len) {
            let t = tensor_of_word(w.clone());
            let down = minus.word(&w).clone();
            let up = plus.word(&w).clone();
            if plus.tensor(&down) != t || minus.tensor(&up) != t {
                return Some(w);
            }
        }
    }
    None
}

/// Checks `Δ θ^m = Σ_p C(m,p) (θ^{m-p} ⊗ θ^p) Δ` on words of length `≤ w_max`.
pub fn binomial_violation(theta: &Components, sdeg: &[i32], m: usize, w_max: usize) -> Option<Word> {
    let power = |t: &Tensor, k: usize| {
        let mut t = t.clone();
        for _ in 0..k {
            t = coderivation_on_tensor(theta, 0, sdeg, &t);
        }
        t
    };
    let n = sdeg.len();
    for len in 1..=w_max {
        for w in all_words(n, len) {
            let full = power(&tensor_of_word(w.clone()), m);
            let mut lhs: std::collections::BTreeMap<(Word, Word), Q> = Default::default();
            for (u, c) in &full {
                for cut in 0..=u.len() {
                    add_pair(&mut lhs, (u[..cut].to_vec(), u[cut..].to_vec()), c);
                }
            }
            let mut rhs: std::collections::BTreeMap<(Word, Word), Q> = Default::default();
            for p in 0..=m {
                let binom = Q::from_integer((crate::scalar::binomial(m, p) as i64).into());
                for cut in 0..=w.len() {
                    let a = power(&tensor_of_word(w[..cut].to_vec()), m - p);
                    let b = power(&tensor_of_word(w[cut..].to_vec()), p);
                    for (u, x) in &a {
                        for (v, y) in &b {
                            add_pair(&mut rhs, (u.clone(), v.clone()), &(x * y * &binom));
                        }
                    }
                }
            }
            if lhs != rhs {
                return Some(w);
            }
        }
    }
    None
}
