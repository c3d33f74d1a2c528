//! Sparse exact linear algebra.
//!
//! Vectors are sparse maps from basis index to a nonzero rational. Every
//! elimination uses the same deterministic rule: columns are processed left to
//! right and the pivot of a reduced vector is its topmost nonzero row.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::{fmt_q, Q};

/// A sparse vector over [`Q`]. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Vector(BTreeMap<usize, Q>);

impl Vector {
    pub fn new() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Vector::new();
        v.0.insert(i, Q::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v = Vector::new();
        for (i, c) in pairs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn from_dense(entries: &[Q]) -> Self {
        Self::from_pairs(entries.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); dim];
        for (i, c) in &self.0 {
            out[*i] = c.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn first(&self) -> Option<(usize, &Q)> {
        self.0.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let remove = match self.0.get_mut(&i) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.0.insert(i, c.clone());
                false
            }
        };
        if remove {
            self.0.remove(&i);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.0 {
            self.add_term(*i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Q) -> Vector {
        if c.is_zero() {
            return Vector::new();
        }
        Vector(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|(i, x)| (*i, -x.clone())).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    /// Reindexes every entry through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> Vector {
        let mut out = Vector::new();
        for (i, c) in &self.0 {
            if let Some(j) = f(*i) {
                out.add_term(j, c);
            }
        }
        out
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|(i, c)| (i, fmt_q(c))))
            .finish()
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, String)> = self.0.iter().map(|(i, c)| (*i, fmt_q(c))).collect();
        pairs.serialize(s)
    }
}

/// A linear map stored by columns: `cols[j]` is the image of basis vector `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinMap {
    pub rows: usize,
    pub cols: Vec<Vector>,
}

impl LinMap {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        LinMap {
            rows,
            cols: vec![Vector::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        LinMap {
            rows: n,
            cols: (0..n).map(Vector::unit).collect(),
        }
    }

    pub fn from_cols(rows: usize, cols: Vec<Vector>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().map_or(true, |m| m < rows)));
        LinMap { rows, cols }
    }

    /// Builds from dense rows (`rows[i][j]` is the entry at row `i`, column `j`).
    pub fn from_dense_rows(rows: &[Vec<Q>], ncols: usize) -> Self {
        let mut m = LinMap::zero(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                m.cols[j].add_term(i, c);
            }
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(row)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in composition");
        LinMap {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()));
        LinMap {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()));
        LinMap {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> LinMap {
        LinMap {
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    pub fn neg(&self) -> LinMap {
        self.scaled(&-Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vector::is_zero)
    }

    pub fn transpose(&self) -> LinMap {
        let mut t = LinMap::zero(self.ncols(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                t.cols[i].add_term(j, c);
            }
        }
        t
    }

    /// Column echelon data for the columns in order.
    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for (j, c) in self.cols.iter().enumerate() {
            e.insert(c, j);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Kernel basis; one vector per non-pivot column `j`, with leading entry 1 at `j`.
    pub fn kernel(&self) -> Vec<Vector> {
        let mut e = Echelon::new();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(dep) = e.insert(c, j) {
                // c_j = Σ dep_k c_k
                let mut k = dep.neg();
                k.add_term(j, &Q::one());
                out.push(k);
            }
        }
        out
    }

    /// Some `x` with `self(x) = target`, or `None` when `target` is outside the image.
    pub fn solve(&self, target: &Vector) -> Option<Vector> {
        self.echelon().solve(target)
    }

    /// Two-sided inverse of a square map, or `None` if singular.
    pub fn inverse(&self) -> Option<LinMap> {
        if self.rows != self.ncols() {
            return None;
        }
        let e = self.echelon();
        if e.rank() != self.rows {
            return None;
        }
        let cols = (0..self.rows)
            .map(|i| e.solve(&Vector::unit(i)))
            .collect::<Option<Vec<_>>>()?;
        Some(LinMap { rows: self.rows, cols })
    }

    /// Restricts to the given columns (in the order given).
    pub fn select_cols(&self, cols: &[usize]) -> LinMap {
        LinMap {
            rows: self.rows,
            cols: cols.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }
}

/// Incremental echelon form with provenance tracking.
///
/// Each stored row is kept with its pivot (topmost nonzero index, normalized
/// to 1) and its expression as a combination of the inserted vectors' labels.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    basis: Vec<(Vector, Vector)>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Returns `(remainder, comb)` with `v = remainder + Σ comb_l · inserted_l`.
    pub fn reduce(&self, v: &Vector) -> (Vector, Vector) {
        let mut cur = v.clone();
        let mut comb = Vector::new();
        let mut from = 0usize;
        loop {
            let next = cur
                .0
                .range(from..)
                .find(|(i, _)| self.pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((row, c)) = next else { break };
            let k = self.pivots[&row];
            let (bv, bc) = &self.basis[k];
            cur.add_scaled(bv, &-c.clone());
            comb.add_scaled(bc, &c);
            from = row + 1;
        }
        (cur, comb)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v` under `label`. Returns `None` if `v` was independent, or the
    /// expression of `v` in earlier labels if it was dependent.
    pub fn insert(&mut self, v: &Vector, label: usize) -> Option<Vector> {
        let (rem, comb) = self.reduce(v);
        if rem.is_zero() {
            return Some(comb);
        }
        let (pivot, pc) = rem.first().map(|(i, c)| (i, c.clone())).unwrap();
        let inv = Q::one() / pc;
        let mut track = comb.neg();
        track.add_term(label, &Q::one());
        self.pivots.insert(pivot, self.basis.len());
        self.basis.push((rem.scaled(&inv), track.scaled(&inv)));
        None
    }

    /// Solves `Σ x_l · inserted_l = target`.
    pub fn solve(&self, target: &Vector) -> Option<Vector> {
        let (rem, comb) = self.reduce(target);
        rem.is_zero().then_some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn m(rows: &[&[i64]]) -> LinMap {
        let ncols = rows[0].len();
        let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        LinMap::from_dense_rows(&dense, ncols)
    }

    #[test]
    fn leftmost_pivot_witness() {
        // [[1,1]] over (a,b) -> (c); target c -> witness a
        let a = m(&[&[1, 1]]);
        assert_eq!(a.solve(&Vector::unit(0)), Some(Vector::unit(0)));
    }

    #[test]
    fn zero_target_has_zero_witness() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.solve(&Vector::new()), Some(Vector::new()));
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).is_zero());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.compose(&inv), LinMap::identity(2));
        assert!(m(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn outside_image() {
        let a = m(&[&[1, 0], &[0, 0]]);
        assert!(a.solve(&Vector::unit(1)).is_none());
    }
}
