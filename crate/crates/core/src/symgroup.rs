//! The rational group algebra of `S_n`, shuffle elements and Barr's idempotents.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Vector};
use crate::multilinear::{koszul_word_sign, tensor_add, Tensor};
use crate::perm::Perm;
use crate::scalar::{sign, Q};

/// Largest `n` for which idempotents are built without opting in.
pub const DEFAULT_CAP: usize = 5;
/// Hard ceiling (`6! = 720`).
pub const MAX_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub n: usize,
    pub terms: BTreeMap<Perm, Q>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_perm(Perm::identity(n))
    }

    pub fn from_perm(p: Perm) -> Self {
        let n = p.len();
        let mut terms = BTreeMap::new();
        terms.insert(p, Q::one());
        GroupAlgebraElement { n, terms }
    }

    pub fn add_term(&mut self, p: Perm, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &Perm) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (p, x) in &self.terms {
            out.add_term(p.clone(), &(x * c));
        }
        out
    }

    /// Product with `(σ·τ)(i) = σ(τ(i))`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut acc: BTreeMap<Perm, Q> = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                *acc.entry(s.compose(t)).or_insert_with(Q::zero) += a * b;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        GroupAlgebraElement { n: self.n, terms: acc }
    }

    /// Coordinates in the basis `Perm::all(n)`.
    pub fn to_vector(&self, index: &BTreeMap<Perm, usize>) -> Vector {
        Vector::from_pairs(self.terms.iter().map(|(p, c)| (index[p], c.clone())))
    }

    /// Acts on a basis word whose letters have the given degrees:
    /// `σ` contributes `c_σ · sgn(σ) · ε(σ; w) · σ.w` where `ε` is the Koszul
    /// sign in the supplied (suspended) degrees.
    pub fn act_on_word(&self, sdeg: &[i32], w: &[usize]) -> Tensor {
        assert_eq!(w.len(), self.n);
        let degs: Vec<i32> = w.iter().map(|&i| sdeg[i]).collect();
        let mut out = Tensor::new();
        for (sigma, c) in &self.terms {
            let e = koszul_word_sign(sigma, &degs) + if sigma.sgn() < 0 { 1 } else { 0 };
            let inv = sigma.inverse();
            let word: Vec<usize> = (0..w.len()).map(|i| w[inv.apply(i)]).collect();
            tensor_add(&mut out, word, &(c * sign(e)));
        }
        out
    }
}

/// `μ_{p,q} = Σ_{(p,q)-shuffles} sgn(σ) σ`.
pub fn shuffle_element(p: usize, q: usize) -> Result<GroupAlgebraElement> {
    if p < 1 || q < 1 {
        return Err(Error::input("shuffle element needs p, q ≥ 1"));
    }
    let mut out = GroupAlgebraElement::zero(p + q);
    for s in Perm::shuffles(p, q) {
        let c = Q::from_integer(s.sgn().into());
        out.add_term(s, &c);
    }
    Ok(out)
}

/// `μ_n = Σ_{i=1}^{n-1} μ_{i,n-i}`.
pub fn total_shuffle(n: usize) -> Result<GroupAlgebraElement> {
    if n < 2 {
        return Err(Error::input("total shuffle needs n ≥ 2"));
    }
    let mut out = GroupAlgebraElement::zero(n);
    for i in 1..n {
        out = out.add(&shuffle_element(i, n - i)?);
    }
    Ok(out)
}

/// An idempotent together with its expression as a constant-free polynomial in `μ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrIdempotent {
    pub element: GroupAlgebraElement,
    /// `coefficients[j]` multiplies `μ_n^{j+1}`.
    pub coefficients: Vec<Q>,
    pub minimal_polynomial: Vec<Q>,
}

static CACHE: [OnceLock<std::result::Result<BarrIdempotent, String>>; MAX_CAP + 1] =
    [const { OnceLock::new() }; MAX_CAP + 1];

/// `e_n` for `2 ≤ n ≤ 5`.
pub fn barr_idempotent(n: usize) -> Result<&'static BarrIdempotent> {
    barr_idempotent_capped(n, DEFAULT_CAP)
}

/// `e_n` for `2 ≤ n ≤ cap`, `cap ≤ 6`.
pub fn barr_idempotent_capped(n: usize, cap: usize) -> Result<&'static BarrIdempotent> {
    if n < 2 || n > cap.min(MAX_CAP) {
        return Err(Error::input(format!("idempotent e_{n} is outside the supported range 2..={}", cap.min(MAX_CAP))));
    }
    CACHE[n]
        .get_or_init(|| build_idempotent(n).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::internal(e.clone()))
}

fn build_idempotent(n: usize) -> Result<BarrIdempotent> {
    let mu = total_shuffle(n)?;
    let index: BTreeMap<Perm, usize> = Perm::all(n).into_iter().enumerate().map(|(i, p)| (p, i)).collect();
    // Krylov sequence 1, μ, μ², … until the first linear dependency
    let mut powers = vec![GroupAlgebraElement::identity(n)];
    let mut ech = Echelon::new();
    let minimal: Vec<Q> = loop {
        let k = powers.len() - 1;
        let v = powers[k].to_vector(&index);
        if let Some(dep) = ech.insert(&v, k) {
            // μ^k = Σ dep_j μ^j, so m(x) = x^k - Σ dep_j x^j
            let mut m = vec![Q::zero(); k + 1];
            for (j, c) in dep.iter() {
                m[j] = -c.clone();
            }
            m[k] = Q::one();
            powers.pop();
            break m;
        }
        let next = powers[k].mul(&mu);
        powers.push(next);
    };
    // m(x) = x^a r(x) with r(0) ≠ 0
    let a = minimal.iter().position(|c| !c.is_zero()).unwrap();
    if a >= 2 {
        return Err(Error::internal(format!(
            "0 is a repeated root of the minimal polynomial of μ_{n}; no spectral splitting"
        )));
    }
    let r: Vec<Q> = minimal[a..].to_vec();
    // e = 1 - r(μ)/r(0): constant terms cancel, leaving Σ_{j≥1} -r_j/r_0 μ^j
    let r0 = r[0].clone();
    let coefficients: Vec<Q> = r[1..].iter().map(|c| -c / &r0).collect();
    let mut e = GroupAlgebraElement::zero(n);
    for (j, c) in coefficients.iter().enumerate() {
        e = e.add(&powers[j + 1].scaled(c));
    }
    let idem = BarrIdempotent { element: e, coefficients, minimal_polynomial: minimal };
    if let Some(p) = idempotent_violation(n, &idem.element)? {
        return Err(Error::internal(format!("e_{n} fails {p}")));
    }
    Ok(idem)
}

/// Checks `e² = e` and `e μ_{i,n-i} = μ_{i,n-i}`; returns the failing property.
pub fn idempotent_violation(n: usize, e: &GroupAlgebraElement) -> Result<Option<String>> {
    if e.mul(e) != *e {
        return Ok(Some("e² = e".into()));
    }
    for i in 1..n {
        let s = shuffle_element(i, n - i)?;
        if e.mul(&s) != s {
            return Ok(Some(format!("e μ_{{{i},{}}} = μ_{{{i},{}}}", n - i, n - i)));
        }
    }
    Ok(None)
}

/// Solves `x · a = b` for `x` in the group algebra (left ideal membership `b ∈ k[S_n] a`).
pub fn left_divide(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> Option<GroupAlgebraElement> {
    let n = a.n;
    let perms = Perm::all(n);
    let index: BTreeMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut ech = Echelon::new();
    for (k, p) in perms.iter().enumerate() {
        let col = GroupAlgebraElement::from_perm(p.clone()).mul(a).to_vector(&index);
        ech.insert(&col, k);
    }
    let sol = ech.solve(&b.to_vector(&index))?;
    let mut out = GroupAlgebraElement::zero(n);
    for (k, c) in sol.iter() {
        out.add_term(perms[k].clone(), c);
    }
    Some(out)
}
