//! Graded vector spaces, Koszul signs, suspension and contractions onto cohomology.
//!
//! Degrees are cohomological: differentials raise degree by one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, LinMap, Vector};
use crate::perm::Perm;
use crate::scalar::{sign, Q};

/// Finite ordered basis with integer degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i32>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, i32)>) -> Result<Self> {
        let mut names = Vec::with_capacity(basis.len());
        let mut degrees = Vec::with_capacity(basis.len());
        for (n, d) in basis {
            if names.contains(&n) {
                return Err(Error::input(format!("duplicate basis name `{n}`")));
            }
            names.push(n);
            degrees.push(d);
        }
        Ok(GradedSpace { names, degrees })
    }

    /// Convenience constructor for fixtures and tests; panics on duplicates.
    pub fn from_pairs(basis: &[(&str, i32)]) -> Self {
        Self::new(basis.iter().map(|(n, d)| (n.to_string(), *d)).collect())
            .expect("duplicate basis name")
    }

    pub fn zero() -> Self {
        GradedSpace { names: vec![], degrees: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basis_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.degrees.iter().min()?;
        let hi = self.degrees.iter().max()?;
        Some((*lo, *hi))
    }

    /// `(degree, dimension)` pairs for every occupied degree, ascending.
    pub fn dims_by_degree(&self) -> Vec<(i32, usize)> {
        let mut ds: Vec<i32> = self.degrees.clone();
        ds.sort();
        ds.dedup();
        ds.into_iter()
            .map(|d| (d, self.degrees.iter().filter(|&&x| x == d).count()))
            .collect()
    }

    /// Suspension `sV^i = V^{i+1}`: every degree drops by one.
    pub fn suspended(&self) -> GradedSpace {
        GradedSpace {
            names: self.names.iter().map(|n| format!("s{n}")).collect(),
            degrees: self.degrees.iter().map(|d| d - 1).collect(),
        }
    }

    /// Degree of a homogeneous vector, `None` for zero or inhomogeneous.
    pub fn degree_of(&self, v: &Vector) -> Option<i32> {
        let mut it = v.support().map(|i| self.degrees[i]);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, v: &Vector) -> bool {
        v.is_zero() || self.degree_of(v).is_some()
    }

    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        let mut basis: Vec<(String, i32)> =
            self.names.iter().cloned().zip(self.degrees.iter().copied()).collect();
        basis.extend(other.names.iter().cloned().zip(other.degrees.iter().copied()));
        GradedSpace::new(basis)
    }
}

/// Checks that a map has the stated degree with respect to the given spaces.
pub fn check_map_degree(map: &LinMap, src: &GradedSpace, tgt: &GradedSpace, degree: i32) -> Result<()> {
    if map.ncols() != src.dim() || map.rows != tgt.dim() {
        return Err(Error::input("map dimensions do not match its spaces"));
    }
    for (j, col) in map.cols.iter().enumerate() {
        for i in col.support() {
            if tgt.degree(i) != src.degree(j) + degree {
                return Err(Error::input(format!(
                    "entry ({}, {}) breaks degree {degree}",
                    tgt.name(i),
                    src.name(j)
                )));
            }
        }
    }
    Ok(())
}

/// Which sign `koszul_sign` computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    /// Multiplicative extension of `(-1)^{|x||y|}` over adjacent transpositions.
    Koszul,
    /// `sgn(σ)` times the Koszul sign.
    Gamma,
}

/// Sign picked up when `sigma` moves factor `i` of a word to position `sigma(i)`.
pub fn koszul_sign(sigma: &Perm, degrees: &[i32], mode: SignMode) -> Result<i64> {
    if sigma.len() != degrees.len() {
        return Err(Error::input(format!(
            "permutation of {} letters applied to {} degrees",
            sigma.len(),
            degrees.len()
        )));
    }
    Ok(koszul_sign_unchecked(sigma, degrees, mode))
}

pub(crate) fn koszul_sign_unchecked(sigma: &Perm, degrees: &[i32], mode: SignMode) -> i64 {
    let mut odd = 0i64;
    let mut inv = 0i64;
    for (i, j) in sigma.inversions() {
        inv += 1;
        if degrees[i] & 1 == 1 && degrees[j] & 1 == 1 {
            odd += 1;
        }
    }
    let e = match mode {
        SignMode::Koszul => odd,
        SignMode::Gamma => odd + inv,
    };
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Applies `sigma` to a word of homogeneous factors: output factor `i` is
/// input factor `sigma^{-1}(i)`.
pub fn permute_tensor<T: Clone>(
    sigma: &Perm,
    word: &[T],
    degrees: &[i32],
    mode: SignMode,
) -> Result<(i64, Vec<T>)> {
    if word.len() != degrees.len() {
        return Err(Error::input("word and degree list differ in length"));
    }
    let s = koszul_sign(sigma, degrees, mode)?;
    let inv = sigma.inverse();
    Ok((s, (0..word.len()).map(|i| word[inv.apply(i)].clone()).collect()))
}

/// A finite cochain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub space: GradedSpace,
    pub d: LinMap,
}

impl CochainComplex {
    pub fn new(space: GradedSpace, d: LinMap) -> Result<Self> {
        check_map_degree(&d, &space, &space, 1)?;
        let c = CochainComplex { space, d };
        if !c.d.compose(&c.d).is_zero() {
            return Err(Error::InvalidComplex("d∘d ≠ 0".into()));
        }
        Ok(c)
    }

    pub fn zero_differential(space: GradedSpace) -> Self {
        let n = space.dim();
        CochainComplex { space, d: LinMap::zero(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `(sC, -s d s^{-1})`.
pub fn suspend(c: &CochainComplex) -> CochainComplex {
    CochainComplex {
        space: c.space.suspended(),
        d: c.d.neg(),
    }
}

/// A deformation retract `f: big → small`, `g: small → big`, `h: big → big`
/// of degree `-1` with `fg = id`, `gf - id = dh + hd`, `hg = 0`, `fh = 0`, `hh = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub f: LinMap,
    pub g: LinMap,
    pub h: LinMap,
}

impl Contraction {
    /// Returns the name of the first failing identity, if any.
    pub fn first_violation(&self, d_big: &LinMap, d_small: &LinMap) -> Option<&'static str> {
        let n = d_big.rows;
        let m = d_small.rows;
        if self.f.compose(&self.g) != LinMap::identity(m) {
            return Some("fg = id");
        }
        let lhs = self.g.compose(&self.f).sub(&LinMap::identity(n));
        let rhs = d_big.compose(&self.h).add(&self.h.compose(d_big));
        if lhs != rhs {
            return Some("gf - id = dh + hd");
        }
        if !self.h.compose(&self.g).is_zero() {
            return Some("hg = 0");
        }
        if !self.f.compose(&self.h).is_zero() {
            return Some("fh = 0");
        }
        if !self.h.compose(&self.h).is_zero() {
            return Some("hh = 0");
        }
        if d_small.compose(&self.f) != self.f.compose(d_big) {
            return Some("f is a chain map");
        }
        if d_big.compose(&self.g) != self.g.compose(d_small) {
            return Some("g is a chain map");
        }
        None
    }

    pub fn verify(&self, d_big: &LinMap, d_small: &LinMap) -> Result<()> {
        match self.first_violation(d_big, d_small) {
            None => Ok(()),
            Some(id) => Err(Error::input(format!("contraction identity fails: {id}"))),
        }
    }

    /// Enforces the side conditions on a raw homotopy:
    /// `h ← (1 - gf) h (1 - gf)` removes `fh` and `hg`, then `h ← h d h` removes `hh`.
    pub fn with_side_conditions(&self, d_big: &LinMap) -> Contraction {
        let n = d_big.rows;
        let p = LinMap::identity(n).sub(&self.g.compose(&self.f));
        let h1 = p.compose(&self.h).compose(&p);
        let h2 = h1.compose(d_big).compose(&h1);
        Contraction { f: self.f.clone(), g: self.g.clone(), h: h2 }
    }

    /// Direct sum of contractions over a block decomposition of big and small spaces.
    pub fn direct_sum(parts: &[(&[usize], &[usize], &Contraction)], big_dim: usize, small_dim: usize) -> Contraction {
        let mut f = LinMap::zero(small_dim, big_dim);
        let mut g = LinMap::zero(big_dim, small_dim);
        let mut h = LinMap::zero(big_dim, big_dim);
        for (big_idx, small_idx, c) in parts {
            for (j, &bj) in big_idx.iter().enumerate() {
                f.cols[bj] = c.f.cols[j].remap(|i| Some(small_idx[i]));
                h.cols[bj] = c.h.cols[j].remap(|i| Some(big_idx[i]));
            }
            for (j, &sj) in small_idx.iter().enumerate() {
                g.cols[sj] = c.g.cols[j].remap(|i| Some(big_idx[i]));
            }
        }
        Contraction { f, g, h }
    }
}

/// Cohomology of a complex with a contraction onto it (zero differential).
///
/// Representatives are kernel vectors found by left-to-right elimination; the
/// complement of the cocycles is spanned by the earliest basis vectors whose
/// differentials are independent.
pub fn cohomology_with_contraction(c: &CochainComplex) -> Result<(GradedSpace, Contraction)> {
    let n = c.dim();
    if !c.d.compose(&c.d).is_zero() {
        return Err(Error::InvalidComplex("d∘d ≠ 0".into()));
    }
    // pivot columns of d give S (sources) and B = d(S)
    let mut sources = Vec::new();
    let mut bound = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in c.d.cols.iter().enumerate() {
        match bound.insert(col, j) {
            None => sources.push(j),
            Some(dep) => {
                let mut k = dep.neg();
                k.add_term(j, &Q::from_integer(1.into()));
                kernel.push((j, k));
            }
        }
    }
    let boundaries: Vec<Vector> = sources.iter().map(|&j| c.d.cols[j].clone()).collect();
    let mut span = Echelon::new();
    for (k, b) in boundaries.iter().enumerate() {
        span.insert(b, k);
    }
    let mut reps = Vec::new();
    let mut names = Vec::new();
    for (j, z) in kernel {
        if span.insert(&z, usize::MAX).is_none() {
            // a class is named after the basis element whose column produced it
            names.push((c.space.name(j).to_string(), c.space.degree(j)));
            reps.push(z);
        }
    }
    let hspace = GradedSpace::new(names)?;
    let m = reps.len();

    // change of basis: columns (reps | boundaries | sources)
    let mut pcols = reps.clone();
    pcols.extend(boundaries.iter().cloned());
    pcols.extend(sources.iter().map(|&j| Vector::unit(j)));
    let p = LinMap::from_cols(n, pcols);
    let pinv = p.inverse().ok_or_else(|| Error::internal("cohomology basis change is singular"))?;
    let nb = boundaries.len();
    let mut f = LinMap::zero(m, n);
    let mut h = LinMap::zero(n, n);
    for j in 0..n {
        let coords = &pinv.cols[j];
        for (k, coef) in coords.iter() {
            if k < m {
                f.cols[j].add_term(k, coef);
            } else if k < m + nb {
                // h(b_k) = -s_k
                h.cols[j].add_term(sources[k - m], &-coef.clone());
            }
        }
    }
    let g = LinMap::from_cols(n, reps);
    let contraction = Contraction { f, g, h };
    let zero = LinMap::zero(m, m);
    if let Some(id) = contraction.first_violation(&c.d, &zero) {
        return Err(Error::internal(format!("cohomology contraction fails {id}")));
    }
    Ok((hspace, contraction))
}

/// Sign helper re-exported for modules working with parity sums.
pub fn parity_sign(e: i64) -> Q {
    sign(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn identity_sign_is_plus() {
        for n in 0..4 {
            let degs = vec![1; n];
            assert_eq!(koszul_sign(&Perm::identity(n), &degs, SignMode::Koszul).unwrap(), 1);
        }
    }

    #[test]
    fn transposition_of_odd_elements() {
        let t = Perm(vec![1, 0]);
        assert_eq!(koszul_sign(&t, &[1, 1], SignMode::Koszul).unwrap(), -1);
        assert_eq!(koszul_sign(&t, &[1, 1], SignMode::Gamma).unwrap(), 1);
        assert!(koszul_sign(&t, &[1], SignMode::Koszul).is_err());
    }

    #[test]
    fn permute_tensor_one_transposition() {
        let t = Perm(vec![1, 0]);
        let (s, w) = permute_tensor(&t, &["x", "y"], &[1, 2], SignMode::Koszul).unwrap();
        assert_eq!((s, w), (1, vec!["y", "x"]));
    }

    #[test]
    fn suspension_of_one_arrow() {
        let space = GradedSpace::from_pairs(&[("x", 0), ("y", 1)]);
        let d = LinMap::from_cols(2, vec![Vector::unit(1), Vector::new()]);
        let c = CochainComplex::new(space, d).unwrap();
        let s = suspend(&c);
        assert_eq!(s.space.degree(0), -1);
        assert_eq!(s.d.entry(1, 0), q(-1));
        assert_eq!(suspend(&s).d, c.d);
    }

    #[test]
    fn acyclic_pair() {
        let space = GradedSpace::from_pairs(&[("x", 0), ("y", 1)]);
        let d = LinMap::from_cols(2, vec![Vector::unit(1), Vector::new()]);
        let c = CochainComplex::new(space, d).unwrap();
        let (h, con) = cohomology_with_contraction(&c).unwrap();
        assert_eq!(h.dim(), 0);
        // gf - id = -id = dh + hd forces h(y) = -x
        assert_eq!(con.h.cols[1], Vector::unit(0).neg());
        assert!(con.h.cols[0].is_zero());
    }

    #[test]
    fn zero_differential_is_its_own_cohomology() {
        let space = GradedSpace::from_pairs(&[("a", 0), ("b", 3)]);
        let c = CochainComplex::zero_differential(space);
        let (h, con) = cohomology_with_contraction(&c).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(con.g.compose(&con.f), LinMap::identity(2));
        assert!(con.h.is_zero());
    }

    #[test]
    fn rejects_non_square_zero() {
        let space = GradedSpace::from_pairs(&[("x", 0), ("y", 0)]);
        let d = LinMap::from_cols(2, vec![Vector::unit(1), Vector::new()]);
        assert!(CochainComplex::new(space, d).is_err());
    }
}
