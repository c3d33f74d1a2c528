//! Weight-truncated universal enveloping algebras of dg Lie algebras, the adjoint
//! and Poisson modules, the symmetrization map `η: ΛL → UL`, the retraction
//! `UL^ad → L`, the Alt map and Quillen's comparison `UH(L) ≅ H(UL)`.
//!
//! PBW monomials are weakly increasing words in the basis of `L` with no odd
//! letter repeated, ordered by length and then lexicographically, so the
//! monomials of length `≤ w` form a prefix of the basis.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::Serialize;

use crate::algebras::{cohomology_algebra, DgAlgebra, Species};
use crate::error::{Error, Result};
use crate::graded::{cohomology_with_contraction, CochainComplex, Contraction, GradedSpace};
use crate::homotopy::PInfinity;
use crate::linalg::{LinMap, Vector};
use crate::multilinear::{sort_word, symmetrize_word, tensor_add, MultiMap, Tensor, Word};
use crate::opcohomology::LeftModule;
use crate::scalar::{factorial, sign, Q};

/// Descent positions: places where a rewrite applies.
fn descents(deg: &[i32], w: &[usize]) -> Vec<usize> {
    (0..w.len().saturating_sub(1))
        .filter(|&i| w[i] > w[i + 1] || (w[i] == w[i + 1] && deg[w[i]] & 1 == 1))
        .collect()
}

fn pbw_words(deg: &[i32], max_len: usize) -> Vec<Word> {
    let n = deg.len();
    let mut out: Vec<Word> = vec![vec![]];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().copied().unwrap_or(0);
            for x in start..n {
                if w.last() == Some(&x) && deg[x] & 1 == 1 {
                    continue;
                }
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn monomial_name(space: &GradedSpace, w: &[usize]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|&i| space.name(i)).collect::<Vec<_>>().join("·")
    }
}

/// `U_{≤W}(L)` on its PBW basis.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub lie: DgAlgebra,
    pub weight_bound: usize,
    pub space: GradedSpace,
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    pub d: LinMap,
}

impl Envelope {
    pub fn new(lie: &DgAlgebra, weight_bound: usize) -> Result<Self> {
        if lie.species != Species::Lie {
            return Err(Error::input("envelopes are built for Lie algebras"));
        }
        if weight_bound < 1 {
            return Err(Error::input("weight bound must be at least 1"));
        }
        let report = crate::algebras::check_axioms(lie);
        if !report.pass {
            return Err(Error::input(format!("{} fails the Lie axioms", lie.name)));
        }
        let deg = lie.space.degrees().to_vec();
        let words = pbw_words(&deg, weight_bound);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let basis = words
            .iter()
            .map(|w| (monomial_name(&lie.space, w), w.iter().map(|&i| deg[i]).sum()))
            .collect();
        let space = GradedSpace::new(basis)?;
        let mut env = Envelope {
            lie: lie.clone(),
            weight_bound,
            space,
            words,
            index,
            d: LinMap::zero(0, 0),
        };
        let n = env.dim();
        let cols = (0..n)
            .map(|i| {
                let t = env.derivation_on_word(&env.words[i].clone());
                env.to_vector(&t).expect("the differential does not raise length")
            })
            .collect();
        env.d = LinMap::from_cols(n, cols);
        if !env.d.compose(&env.d).is_zero() {
            return Err(Error::internal("d² ≠ 0 on the envelope"));
        }
        Ok(env)
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    fn deg(&self) -> &[i32] {
        self.lie.space.degrees()
    }

    pub fn position(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    /// Index of the generator `x ∈ L`.
    pub fn generator(&self, x: usize) -> usize {
        self.index[&vec![x]]
    }

    /// Number of monomials of length `≤ w` (they are the first ones).
    pub fn prefix(&self, w: usize) -> usize {
        self.words.iter().take_while(|v| v.len() <= w).count()
    }

    pub fn complex(&self) -> CochainComplex {
        CochainComplex { space: self.space.clone(), d: self.d.clone() }
    }

    /// The subcomplex `U_{≤w}`.
    pub fn filtration_piece(&self, w: usize) -> CochainComplex {
        let n = self.prefix(w);
        let names: Vec<(String, i32)> = (0..n).map(|i| (self.space.name(i).to_string(), self.space.degree(i))).collect();
        let cols = (0..n).map(|j| self.d.cols[j].clone()).collect();
        CochainComplex { space: GradedSpace::new(names).expect("prefix of a valid basis"), d: LinMap::from_cols(n, cols) }
    }

    /// Coordinates of a tensor of PBW monomials; `None` if a word is not a basis monomial.
    pub fn to_vector(&self, t: &Tensor) -> Option<Vector> {
        let mut v = Vector::new();
        for (w, c) in t {
            v.add_term(*self.index.get(w)?, c);
        }
        Some(v)
    }

    /// Rewrites a word to PBW normal form, always at the leftmost descent.
    pub fn normal_form(&self, w: &[usize]) -> Tensor {
        self.normal_form_with(w, &mut |ds: &[usize]| ds[0])
    }

    /// Rewrites at the descent chosen by `pick` among the available ones:
    /// `ab ↦ (-1)^{|a||b|} ba + [a, b]` for `a > b`, and `xx ↦ ½[x, x]` for odd `x`.
    pub fn normal_form_with(&self, w: &[usize], pick: &mut dyn FnMut(&[usize]) -> usize) -> Tensor {
        let deg = self.deg().to_vec();
        let mut out = Tensor::new();
        let mut work = Tensor::new();
        tensor_add(&mut work, w.to_vec(), &Q::one());
        while let Some((word, c)) = work.pop_last() {
            let ds = descents(&deg, &word);
            if ds.is_empty() {
                tensor_add(&mut out, word, &c);
                continue;
            }
            let i = pick(&ds);
            let (a, b) = (word[i], word[i + 1]);
            let splice = |mid: &[usize]| {
                let mut v = word[..i].to_vec();
                v.extend_from_slice(mid);
                v.extend_from_slice(&word[i + 2..]);
                v
            };
            let bracket = self.lie.mul(a, b);
            if a == b {
                let half = &c * Q::new(1.into(), 2.into());
                for (y, k) in bracket.iter() {
                    tensor_add(&mut work, splice(&[y]), &(&half * k));
                }
            } else {
                let s = sign((deg[a] * deg[b]) as i64);
                tensor_add(&mut work, splice(&[b, a]), &(&c * s));
                for (y, k) in bracket.iter() {
                    tensor_add(&mut work, splice(&[y]), &(&c * k));
                }
            }
        }
        out
    }

    /// Normal form of an arbitrary tensor of words.
    pub fn normalize(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in t {
            for (v, k) in self.normal_form(w) {
                tensor_add(&mut out, v, &(c * k));
            }
        }
        out
    }

    fn derivation_on_word(&self, w: &[usize]) -> Tensor {
        let deg = self.deg();
        let mut t = Tensor::new();
        let mut prefix = 0;
        for i in 0..w.len() {
            let s = sign(prefix as i64);
            for (y, c) in self.lie.d.cols[w[i]].iter() {
                let mut v = w.to_vec();
                v[i] = y;
                tensor_add(&mut t, v, &(c * &s));
            }
            prefix += deg[w[i]];
        }
        self.normalize(&t)
    }

    /// Product of two monomials, or `None` when it leaves the truncation.
    pub fn mul(&self, i: usize, j: usize) -> Option<Vector> {
        if self.weight(i) + self.weight(j) > self.weight_bound {
            return None;
        }
        let mut w = self.words[i].clone();
        w.extend_from_slice(&self.words[j]);
        self.to_vector(&self.normal_form(&w))
    }

    pub fn mul_vec(&self, a: &Vector, b: &Vector) -> Option<Vector> {
        let mut out = Vector::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&self.mul(i, j)?, &(x * y));
            }
        }
        Some(out)
    }

    /// Product of the images of `L`-vectors, `v₁ v₂ ⋯ v_k`, in normal form.
    pub fn product_of_generators(&self, vs: &[Vector]) -> Option<Vector> {
        let mut acc = Vector::unit(0);
        for v in vs {
            let g = v.remap(|i| Some(self.generator(i)));
            acc = self.mul_vec(&acc, &g)?;
        }
        Some(acc)
    }
}

/// The symmetric algebra `Λ^{≤W} L` shares the envelope's monomial basis.
impl Envelope {
    /// Index and sign of a word in `ΛL` after graded-symmetric sorting; `None` if it vanishes.
    pub fn sym_monomial(&self, w: &[usize]) -> Option<(Q, usize)> {
        let (e, sorted) = sort_word(self.deg(), w)?;
        Some((sign(e), *self.index.get(&sorted)?))
    }

    /// The derivation extending `d_L` to `ΛL`; it preserves length.
    pub fn sym_differential(&self) -> LinMap {
        let deg = self.deg();
        let cols = self
            .words
            .iter()
            .map(|w| {
                let mut v = Vector::new();
                let mut prefix = 0;
                for i in 0..w.len() {
                    for (y, c) in self.lie.d.cols[w[i]].iter() {
                        let mut u = w.clone();
                        u[i] = y;
                        if let Some((s, j)) = self.sym_monomial(&u) {
                            v.add_term(j, &(c * s * sign(prefix as i64)));
                        }
                    }
                    prefix += deg[w[i]];
                }
                v
            })
            .collect();
        LinMap::from_cols(self.dim(), cols)
    }

    /// `{g, α₁⋯α_k} = Σ_i (-1)^{|g|(|α₁|+…+|α_{i-1}|)} α₁⋯[g, α_i]⋯α_k`.
    pub fn poisson_action(&self, g: usize, a: usize) -> Vector {
        let deg = self.deg();
        let w = &self.words[a];
        let mut v = Vector::new();
        let mut prefix = 0;
        for i in 0..w.len() {
            let s = sign((deg[g] * prefix) as i64);
            for (y, c) in self.lie.mul(g, w[i]).iter() {
                let mut u = w.clone();
                u[i] = y;
                if let Some((t, j)) = self.sym_monomial(&u) {
                    v.add_term(j, &(c * &s * t));
                }
            }
            prefix += deg[w[i]];
        }
        v
    }

    /// `η(v₁⋯v_k) = (1/k!) Σ_σ ε(σ; v) v_{σ⁻¹(1)}⋯v_{σ⁻¹(k)}` in PBW coordinates.
    pub fn eta(&self) -> LinMap {
        let cols = self
            .words
            .iter()
            .map(|w| {
                let t = self.normalize(&symmetrize_word(self.deg(), w));
                let v = self.to_vector(&t).expect("symmetrization keeps length");
                v.scaled(&(Q::one() / factorial(w.len())))
            })
            .collect();
        LinMap::from_cols(self.dim(), cols)
    }

    /// `g.m = g m - (-1)^{|g||m|} m g`; needs `m` of weight below the bound.
    pub fn adjoint_action(&self, g: usize, m: usize) -> Option<Vector> {
        let gi = self.generator(g);
        let s = sign((self.deg()[g] * self.space.degree(m)) as i64);
        let left = self.mul(gi, m)?;
        let right = self.mul(m, gi)?;
        Some(left.sub(&right.scaled(&s)))
    }
}

fn check_weight(env: &Envelope, w: usize) -> Result<()> {
    if env.weight_bound < w + 1 {
        return Err(Error::input(format!(
            "the adjoint action on weight ≤ {w} needs the envelope to weight {}, built to {}",
            w + 1,
            env.weight_bound
        )));
    }
    Ok(())
}

fn prefix_space(env: &Envelope, w: usize) -> GradedSpace {
    let n = env.prefix(w);
    GradedSpace::new((0..n).map(|i| (env.space.name(i).to_string(), env.space.degree(i))).collect())
        .expect("prefix of a valid basis")
}

/// `UL^ad` on the monomials of weight `≤ w`.
pub fn adjoint_module(env: &Envelope, w: usize) -> Result<LeftModule> {
    check_weight(env, w)?;
    let n = env.prefix(w);
    let mut action = BTreeMap::new();
    for g in 0..env.lie.dim() {
        for m in 0..n {
            let v = env.adjoint_action(g, m).expect("within the checked weight");
            if v.max_index().is_some_and(|i| i >= n) {
                return Err(Error::internal("adjoint action raised the weight"));
            }
            action.insert((g, m), v);
        }
    }
    Ok(LeftModule::new(prefix_space(env, w), action))
}

/// `ΛL` with `g.α = {g, α}` on the monomials of weight `≤ w`.
pub fn poisson_module(env: &Envelope, w: usize) -> LeftModule {
    let n = env.prefix(w.min(env.weight_bound));
    let mut action = BTreeMap::new();
    for g in 0..env.lie.dim() {
        for a in 0..n {
            action.insert((g, a), env.poisson_action(g, a));
        }
    }
    LeftModule::new(prefix_space(env, w.min(env.weight_bound)), action)
}

/// `η` restricted to weight `≤ w`, with its inverse.
#[derive(Clone, Debug)]
pub struct Eta {
    pub weight: usize,
    pub map: LinMap,
    pub inverse: LinMap,
}

/// Builds `η: Λ^{≤w}L → U_{≤w}L` and checks that it is bijective, a chain map
/// and a morphism of `L`-modules from the Poisson to the adjoint module.
pub fn pbw_eta(env: &Envelope, w: usize) -> Result<Eta> {
    check_weight(env, w)?;
    let n = env.prefix(w);
    let full = env.eta();
    let map = LinMap::from_cols(n, full.cols[..n].to_vec());
    let inverse = map.inverse().ok_or_else(|| Error::internal("η is not invertible"))?;
    let du = env.filtration_piece(w).d;
    let sd = env.sym_differential();
    let ds = LinMap::from_cols(n, sd.cols[..n].to_vec());
    if du.compose(&map) != map.compose(&ds) {
        return Err(Error::internal("η does not commute with the differentials"));
    }
    for g in 0..env.lie.dim() {
        for a in 0..n {
            let lhs = map.apply(&env.poisson_action(g, a));
            let rhs = {
                let mut v = Vector::new();
                for (m, c) in map.cols[a].iter() {
                    v.add_scaled(&env.adjoint_action(g, m).expect("within the checked weight"), c);
                }
                v
            };
            if lhs != rhs {
                return Err(Error::internal(format!(
                    "η is not L-linear at ({}, {})",
                    env.lie.space.name(g),
                    env.space.name(a)
                )));
            }
        }
    }
    Ok(Eta { weight: w, map, inverse })
}

/// `π = proj_{Λ¹} ∘ η⁻¹: U_{≤w}L → L`, checked to be an `L`-linear retraction of the inclusion.
pub fn summand_retraction(env: &Envelope, w: usize) -> Result<LinMap> {
    let eta = pbw_eta(env, w)?;
    let nl = env.lie.dim();
    let n = env.prefix(w);
    let proj = LinMap::from_cols(
        nl,
        (0..n).map(|i| if env.weight(i) == 1 { Vector::unit(env.words[i][0]) } else { Vector::new() }).collect(),
    );
    let pi = proj.compose(&eta.inverse);
    if !pi.cols[0].is_zero() {
        return Err(Error::internal("π(1) ≠ 0"));
    }
    for x in 0..nl {
        if pi.cols[env.generator(x)] != Vector::unit(x) {
            return Err(Error::internal("π does not restrict to the identity on L"));
        }
    }
    for g in 0..nl {
        for m in 0..n {
            let lhs = pi.apply(&env.adjoint_action(g, m).expect("within the checked weight"));
            let mut rhs = Vector::new();
            for (x, c) in pi.cols[m].iter() {
                rhs.add_scaled(&env.lie.mul(g, x), c);
            }
            if lhs != rhs {
                return Err(Error::internal(format!(
                    "π is not L-linear at ({}, {})",
                    env.lie.space.name(g),
                    env.space.name(m)
                )));
            }
        }
    }
    Ok(pi)
}

/// A contraction of `U_{≤W}L` onto its cohomology built on each `Λ^k L` and
/// moved over by `η`, so `h` never raises the weight. `weights[i]` is the weight
/// of the `i`-th class.
#[derive(Clone, Debug)]
pub struct WeightedContraction {
    pub cohomology: GradedSpace,
    pub contraction: Contraction,
    pub weights: Vec<usize>,
}

pub fn weighted_contraction(env: &Envelope) -> Result<WeightedContraction> {
    let n = env.dim();
    let sd = env.sym_differential();
    let mut blocks = Vec::new();
    let mut small_names = Vec::new();
    let mut weights = Vec::new();
    for k in 0..=env.weight_bound {
        let lo = if k == 0 { 0 } else { env.prefix(k - 1) };
        let hi = env.prefix(k);
        let idx: Vec<usize> = (lo..hi).collect();
        let space = GradedSpace::new(idx.iter().map(|&i| (env.space.name(i).to_string(), env.space.degree(i))).collect())?;
        let cols = idx.iter().map(|&j| sd.cols[j].remap(|i| Some(i - lo))).collect();
        let (h, con) = cohomology_with_contraction(&CochainComplex::new(space, LinMap::from_cols(idx.len(), cols))?)?;
        let start = small_names.len();
        for c in 0..h.dim() {
            small_names.push((h.name(c).to_string(), h.degree(c)));
            weights.push(k);
        }
        blocks.push((idx, (start..small_names.len()).collect::<Vec<_>>(), con));
    }
    let parts: Vec<(&[usize], &[usize], &Contraction)> =
        blocks.iter().map(|(b, s, c)| (b.as_slice(), s.as_slice(), c)).collect();
    let sym = Contraction::direct_sum(&parts, n, small_names.len());
    let eta = env.eta();
    let eta_inv = eta.inverse().ok_or_else(|| Error::internal("η is not invertible"))?;
    let contraction = Contraction {
        f: sym.f.compose(&eta_inv),
        g: eta.compose(&sym.g),
        h: eta.compose(&sym.h).compose(&eta_inv),
    };
    let m = small_names.len();
    if let Some(v) = contraction.first_violation(&env.d, &LinMap::zero(m, m)) {
        return Err(Error::internal(format!("transported contraction fails {v}")));
    }
    Ok(WeightedContraction { cohomology: GradedSpace::new(small_names)?, contraction, weights })
}

/// One row of Quillen's comparison: dimensions in one weight and degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuillenRow {
    pub weight: usize,
    pub degree: i32,
    pub uh: usize,
    pub hu: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuillenReport {
    pub weight_bound: usize,
    pub rows: Vec<QuillenRow>,
    pub dims_match: bool,
    /// The map `UH(L) → H(UL)` sending `z₁⋯z_k` to the class of `g(z₁)⋯g(z_k)` is bijective.
    pub isomorphism: bool,
    /// It respects products on every pair of monomials whose weights add up to at most the bound.
    pub multiplicative: bool,
}

/// The Quillen map in coordinates, with the data it was built from.
#[derive(Clone, Debug)]
pub struct QuillenMap {
    /// Envelope of `H(L)` with its induced bracket.
    pub uh: Envelope,
    pub ul: Envelope,
    pub hul: WeightedContraction,
    /// Columns: images of the `UH` monomials in `H(U_{≤W}L)`.
    pub map: LinMap,
    /// Representatives `g(z)` in `L` of the classes of `H(L)`.
    pub reps: Vec<Vector>,
}

pub fn quillen_map(lie: &DgAlgebra, w: usize) -> Result<QuillenMap> {
    let ca = cohomology_algebra(lie)?;
    let uh = Envelope::new(&ca.algebra, w)?;
    let ul = Envelope::new(lie, w)?;
    let hul = weighted_contraction(&ul)?;
    let reps = ca.contraction.g.cols.clone();
    let cols = uh
        .words
        .iter()
        .map(|z| {
            let vs: Vec<Vector> = z.iter().map(|&i| reps[i].clone()).collect();
            let rep = ul.product_of_generators(&vs).expect("weight within the bound");
            hul.contraction.f.apply(&rep)
        })
        .collect();
    let map = LinMap::from_cols(hul.cohomology.dim(), cols);
    Ok(QuillenMap { uh, ul, hul, map, reps })
}

pub fn quillen_check(lie: &DgAlgebra, w: usize) -> Result<QuillenReport> {
    let qm = quillen_map(lie, w)?;
    let mut rows = Vec::new();
    let mut previous: BTreeMap<i32, usize> = BTreeMap::new();
    for k in 0..=w {
        let (hk, _) = cohomology_with_contraction(&qm.ul.filtration_piece(k))?;
        let current: BTreeMap<i32, usize> = hk.dims_by_degree().into_iter().collect();
        let mut uh_k: BTreeMap<i32, usize> = BTreeMap::new();
        for (i, z) in qm.uh.words.iter().enumerate() {
            if z.len() == k {
                *uh_k.entry(qm.uh.space.degree(i)).or_default() += 1;
            }
        }
        let degrees: std::collections::BTreeSet<i32> = current.keys().chain(uh_k.keys()).copied().collect();
        for d in degrees {
            let hu = current.get(&d).copied().unwrap_or(0) - previous.get(&d).copied().unwrap_or(0);
            rows.push(QuillenRow { weight: k, degree: d, uh: uh_k.get(&d).copied().unwrap_or(0), hu });
        }
        previous = current;
    }
    let dims_match = rows.iter().all(|r| r.uh == r.hu);
    let isomorphism = qm.map.rows == qm.map.ncols() && qm.map.inverse().is_some();
    let mut multiplicative = true;
    'pairs: for a in 0..qm.uh.dim() {
        for b in 0..qm.uh.dim() {
            let Some(ab) = qm.uh.mul(a, b) else { continue };
            let rep = |z: &Word| {
                let vs: Vec<Vector> = z.iter().map(|&i| qm.reps[i].clone()).collect();
                qm.ul.product_of_generators(&vs).expect("weight within the bound")
            };
            let prod = qm.ul.mul_vec(&rep(&qm.uh.words[a]), &rep(&qm.uh.words[b])).expect("weight within the bound");
            if qm.map.apply(&ab) != qm.hul.contraction.f.apply(&prod) {
                multiplicative = false;
                break 'pairs;
            }
        }
    }
    Ok(QuillenReport { weight_bound: w, rows, dims_match, isomorphism, multiplicative })
}

/// `Alt(F)(x) = F(sym x)` on sorted words over `L`, for a bar-form Hochschild
/// cochain `F` whose inputs contain `L` through `embed`. Returns the full
/// symmetric table over `L`.
pub fn alt(f: &MultiMap, lie_sdeg: &[i32], embed: &dyn Fn(usize) -> usize) -> MultiMap {
    let n = f.arity;
    let mut sorted = MultiMap::zero(n);
    for w in crate::multilinear::all_words(lie_sdeg.len(), n) {
        if sort_word(lie_sdeg, &w).is_none_or(|(_, s)| s != w) {
            continue;
        }
        let mut v = Vector::new();
        for (u, c) in symmetrize_word(lie_sdeg, &w) {
            let u: Word = u.iter().map(|&x| embed(x)).collect();
            v.add_scaled(&f.eval(&u), &c);
        }
        sorted.set(w, v);
    }
    crate::multilinear::symmetric_extension(lie_sdeg, n, &sorted, lie_sdeg.len())
}

/// The bar-form product of the truncated envelope, defined where weights add up to at most the bound.
pub fn bar_product(env: &Envelope) -> MultiMap {
    let mut b2 = MultiMap::zero(2);
    for i in 0..env.dim() {
        for j in 0..env.dim() {
            if let Some(v) = env.mul(i, j) {
                b2.set(vec![i, j], v.scaled(&sign(env.space.degree(i) as i64)));
            }
        }
    }
    b2
}

#[derive(Clone, Debug, Serialize)]
pub struct AltCheck {
    pub arity: usize,
    pub module_weight: usize,
    pub cochains_checked: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
}

/// Checks `∂_CE ∘ Alt = Alt ∘ ∂_Hoch` on every basis Hochschild cochain of the envelope of
/// a Lie algebra with zero differential whose inputs are words of total weight `≤ n + 1`
/// made of monomials of weight 1 and 2, and whose values have weight `≤ module_weight`.
pub fn alt_chain_map_check(lie: &DgAlgebra, n: usize, module_weight: usize) -> Result<AltCheck> {
    if !lie.has_zero_differential() {
        return Err(Error::input("the Alt check runs over Lie algebras with zero differential"));
    }
    let env = Envelope::new(lie, (module_weight + 1).max(2))?;
    let nl = lie.dim();
    let hoch = crate::opcohomology::CochainContext::from_parts(
        crate::opcohomology::Complex::Hochschild,
        env.space.clone(),
        env.dim(),
        0,
        env.dim(),
        bar_product(&env),
    )?;
    let pl = PInfinity::from_algebra(lie, 2);
    let module = adjoint_module(&env, module_weight)?;
    let ce = crate::opcohomology::CochainContext::chevalley_eilenberg_module(&pl, &module)?;
    let lsdeg = pl.sdeg();
    let outputs = env.prefix(module_weight);
    // input words: all letters of weight 1, or exactly one letter of weight 2
    let low: Vec<usize> = (0..env.dim()).filter(|&i| env.weight(i) == 1).collect();
    let two: Vec<usize> = (0..env.dim()).filter(|&i| env.weight(i) == 2).collect();
    let mut inputs: Vec<Word> = crate::multilinear::all_words(low.len(), n)
        .into_iter()
        .map(|w| w.iter().map(|&i| low[i]).collect())
        .collect();
    if n >= 1 {
        for pos in 0..n {
            for w in crate::multilinear::all_words(low.len(), n - 1) {
                for &t in &two {
                    let mut u: Word = w.iter().map(|&i| low[i]).collect();
                    u.insert(pos, t);
                    inputs.push(u);
                }
            }
        }
    }
    let targets: Vec<Word> = crate::multilinear::all_words(nl, n + 1)
        .into_iter()
        .filter(|w| sort_word(&lsdeg, w).is_some_and(|(_, s)| s == *w))
        .collect();
    let embed = |x: usize| env.generator(x);
    let mut checked = 0;
    for u in &inputs {
        for o in 0..outputs {
            let mut f = MultiMap::zero(n);
            f.set(u.clone(), Vector::unit(o));
            checked += 1;
            let alt_f = alt(&f, &lsdeg, &embed).table.into_iter().map(|(w, v)| (w, v.remap(|i| Some(i + nl))));
            let alt_f = MultiMap { arity: n, table: alt_f.collect() };
            for x in &targets {
                let lhs = ce.differential_at(&alt_f, x)?;
                let mut rhs = Vector::new();
                for (w, c) in symmetrize_word(&lsdeg, x) {
                    let w: Word = w.iter().map(|&i| embed(i)).collect();
                    rhs.add_scaled(&hoch.differential_at(&f, &w)?, &c);
                }
                let rhs = rhs.remap(|i| Some(i + nl));
                if lhs != rhs {
                    let name = |w: &[usize], sp: &GradedSpace| w.iter().map(|&i| sp.name(i)).collect::<Vec<_>>().join(", ");
                    return Ok(AltCheck {
                        arity: n,
                        module_weight,
                        cochains_checked: checked,
                        pass: false,
                        counterexample: Some(format!(
                            "F({}) = {} at ({})",
                            name(u, &env.space),
                            env.space.name(o),
                            name(x, &lie.space)
                        )),
                    });
                }
            }
        }
    }
    Ok(AltCheck { arity: n, module_weight, cochains_checked: checked, pass: true, counterexample: None })
}
