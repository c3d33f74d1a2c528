//! Multilinear maps on suspended spaces and their extension to the tensor coalgebra.
//!
//! Everything here works in bar form: an element `sa` has degree `|a| - 1`, and an
//! operation of arity `n` is a map `(sV)^{⊗n} → sW`. The tensor coalgebra carries
//! deconcatenation; coderivations and coalgebra maps are determined by their
//! corestrictions, which are what a [`MultiMap`] family stores.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::GradedSpace;
use crate::linalg::Vector;
use crate::perm::Perm;
use crate::scalar::{sign, Q};

pub type Word = Vec<usize>;

/// A linear combination of basis words.
pub type Tensor = BTreeMap<Word, Q>;

pub fn tensor_add(t: &mut Tensor, w: Word, c: &Q) {
    if c.is_zero() {
        return;
    }
    match t.entry(w) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
    }
}

pub fn tensor_add_scaled(t: &mut Tensor, other: &Tensor, c: &Q) {
    for (w, x) in other {
        tensor_add(t, w.clone(), &(x * c));
    }
}

pub fn tensor_of_word(w: Word) -> Tensor {
    let mut t = Tensor::new();
    t.insert(w, Q::one());
    t
}

/// Degrees of a space after suspension.
pub fn shifted_degrees(space: &GradedSpace) -> Vec<i32> {
    space.degrees().iter().map(|d| d - 1).collect()
}

pub fn word_degree(sdeg: &[i32], w: &[usize]) -> i32 {
    w.iter().map(|&i| sdeg[i]).sum()
}

/// Every word of the given length over `0..n`, lexicographically.
pub fn all_words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n);
        for w in &out {
            for i in 0..n {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Words of the given length and total shifted degree.
pub fn words_of_degree(sdeg: &[i32], len: usize, total: i32) -> Vec<Word> {
    let n = sdeg.len();
    let mut out = Vec::new();
    if n == 0 {
        if len == 0 && total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let lo = *sdeg.iter().min().unwrap();
    let hi = *sdeg.iter().max().unwrap();
    fn rec(sdeg: &[i32], lo: i32, hi: i32, left: usize, need: i32, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            if need == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = left as i32 - 1;
        for i in 0..sdeg.len() {
            let r = need - sdeg[i];
            if r < lo * rest || r > hi * rest {
                continue;
            }
            cur.push(i);
            rec(sdeg, lo, hi, left - 1, r, cur, out);
            cur.pop();
        }
    }
    rec(sdeg, lo, hi, len, total, &mut Vec::new(), &mut out);
    out
}

/// Total shifted degrees attained by words of a given length.
pub fn word_degrees(sdeg: &[i32], len: usize) -> Vec<i32> {
    let mut set: std::collections::BTreeSet<i32> = [0].into_iter().collect();
    for _ in 0..len {
        set = set.iter().flat_map(|s| sdeg.iter().map(move |d| s + d)).collect();
    }
    if sdeg.is_empty() && len > 0 {
        return Vec::new();
    }
    set.into_iter().collect()
}

/// A multilinear map in bar form, stored on basis words. Absent words map to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiMap {
    pub arity: usize,
    pub table: BTreeMap<Word, Vector>,
}

impl MultiMap {
    pub fn zero(arity: usize) -> Self {
        MultiMap { arity, table: BTreeMap::new() }
    }

    pub fn get(&self, w: &[usize]) -> Option<&Vector> {
        self.table.get(w)
    }

    pub fn eval(&self, w: &[usize]) -> Vector {
        self.table.get(w).cloned().unwrap_or_default()
    }

    pub fn add_at(&mut self, w: Word, v: &Vector, c: &Q) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        let entry = self.table.entry(w.clone()).or_default();
        entry.add_scaled(v, c);
        if entry.is_zero() {
            self.table.remove(&w);
        }
    }

    pub fn set(&mut self, w: Word, v: Vector) {
        if v.is_zero() {
            self.table.remove(&w);
        } else {
            self.table.insert(w, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn add(&self, other: &MultiMap) -> MultiMap {
        let mut out = self.clone();
        for (w, v) in &other.table {
            out.add_at(w.clone(), v, &Q::one());
        }
        out
    }

    pub fn sub(&self, other: &MultiMap) -> MultiMap {
        self.add(&other.neg())
    }

    pub fn scaled(&self, c: &Q) -> MultiMap {
        if c.is_zero() {
            return MultiMap::zero(self.arity);
        }
        MultiMap {
            arity: self.arity,
            table: self.table.iter().map(|(w, v)| (w.clone(), v.scaled(c))).collect(),
        }
    }

    pub fn neg(&self) -> MultiMap {
        self.scaled(&-Q::one())
    }

    /// Evaluates on a tensor.
    pub fn eval_tensor(&self, t: &Tensor) -> Vector {
        let mut out = Vector::new();
        for (w, c) in t {
            if w.len() == self.arity {
                if let Some(v) = self.table.get(w) {
                    out.add_scaled(v, c);
                }
            }
        }
        out
    }

    /// Bar degree, if every stored value is homogeneous of one common degree.
    pub fn degree(&self, src: &[i32], tgt: &[i32]) -> Option<i32> {
        let mut deg = None;
        for (w, v) in &self.table {
            let wd = word_degree(src, w);
            for i in v.support() {
                let d = tgt[i] - wd;
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }
}

/// `F(L⊗…⊗L)` as a table on all words over the source of `L` (degree-0 `L`).
pub fn compose_linear_inputs(f: &MultiMap, cols: &[Vector]) -> MultiMap {
    let n = cols.len();
    let mut out = MultiMap::zero(f.arity);
    for w in all_words(n, f.arity) {
        let t = tensor_from_vectors(&w.iter().map(|&i| cols[i].clone()).collect::<Vec<_>>());
        let v = f.eval_tensor(&t);
        out.set(w, v);
    }
    out
}

/// Applies a linear map to the output of a multilinear map.
pub fn compose_linear_output(cols: &[Vector], f: &MultiMap) -> MultiMap {
    let mut out = MultiMap::zero(f.arity);
    for (w, v) in &f.table {
        let mut r = Vector::new();
        for (i, c) in v.iter() {
            r.add_scaled(&cols[i], c);
        }
        out.set(w.clone(), r);
    }
    out
}

/// Expands `v_1 ⊗ … ⊗ v_k` into basis words (no signs: plain multilinearity).
pub fn tensor_from_vectors(vs: &[Vector]) -> Tensor {
    let mut acc: Vec<(Word, Q)> = vec![(Vec::new(), Q::one())];
    for v in vs {
        let mut next = Vec::with_capacity(acc.len() * v.nnz());
        for (w, c) in &acc {
            for (i, x) in v.iter() {
                let mut w2 = w.clone();
                w2.push(i);
                next.push((w2, c * x));
            }
        }
        acc = next;
    }
    let mut t = Tensor::new();
    for (w, c) in acc {
        tensor_add(&mut t, w, &c);
    }
    t
}

/// Family of corestriction components indexed by arity.
pub type Components = BTreeMap<usize, MultiMap>;

/// The coderivation with corestriction `comps` (all of bar degree `deg`) applied to one word:
/// `Σ (-1)^{deg·(|x_1|+…+|x_r|)} x_1…x_r ⊗ B_k(x_{r+1}…x_{r+k}) ⊗ …`.
pub fn coderivation_on_word(comps: &Components, deg: i32, sdeg: &[i32], w: &[usize]) -> Tensor {
    let mut out = Tensor::new();
    let n = w.len();
    let mut prefix_deg = 0i32;
    for r in 0..n {
        for (&k, b) in comps {
            if k == 0 || r + k > n {
                continue;
            }
            if let Some(v) = b.get(&w[r..r + k]) {
                let s = sign((deg * prefix_deg) as i64);
                for (i, c) in v.iter() {
                    let mut word = Vec::with_capacity(n - k + 1);
                    word.extend_from_slice(&w[..r]);
                    word.push(i);
                    word.extend_from_slice(&w[r + k..]);
                    tensor_add(&mut out, word, &(c * &s));
                }
            }
        }
        prefix_deg += sdeg[w[r]];
    }
    out
}

pub fn coderivation_on_tensor(comps: &Components, deg: i32, sdeg: &[i32], t: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t {
        tensor_add_scaled(&mut out, &coderivation_on_word(comps, deg, sdeg, w), c);
    }
    out
}

/// Corestriction `Σ_k B_k` applied to a tensor.
pub fn corestriction(comps: &Components, t: &Tensor) -> Vector {
    let mut out = Vector::new();
    for (w, c) in t {
        if let Some(b) = comps.get(&w.len()) {
            if let Some(v) = b.get(w) {
                out.add_scaled(v, c);
            }
        }
    }
    out
}

/// The coalgebra map with degree-0 corestriction `comps` applied to one word:
/// sum over decompositions into consecutive nonempty blocks.
pub fn coalgebra_map_on_word(comps: &Components, w: &[usize]) -> Tensor {
    let n = w.len();
    // dp[i] = image of the prefix w[..i]
    let mut dp: Vec<Tensor> = vec![Tensor::new(); n + 1];
    dp[0] = tensor_of_word(Vec::new());
    for end in 1..=n {
        let mut acc = Tensor::new();
        for start in 0..end {
            if dp[start].is_empty() {
                continue;
            }
            let Some(f) = comps.get(&(end - start)) else { continue };
            let Some(v) = f.get(&w[start..end]) else { continue };
            for (pw, pc) in &dp[start] {
                for (i, c) in v.iter() {
                    let mut word = pw.clone();
                    word.push(i);
                    tensor_add(&mut acc, word, &(pc * c));
                }
            }
        }
        dp[end] = acc;
    }
    dp.pop().unwrap()
}

pub fn coalgebra_map_on_tensor(comps: &Components, t: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t {
        tensor_add_scaled(&mut out, &coalgebra_map_on_word(comps, w), c);
    }
    out
}

/// `Σ_σ ε(σ; w) σ.w` with Koszul signs in the given (shifted) degrees.
pub fn symmetrize_word(sdeg: &[i32], w: &[usize]) -> Tensor {
    let degs: Vec<i32> = w.iter().map(|&i| sdeg[i]).collect();
    let mut out = Tensor::new();
    for sigma in Perm::all(w.len()) {
        let s = koszul_word_sign(&sigma, &degs);
        let inv = sigma.inverse();
        let word: Word = (0..w.len()).map(|i| w[inv.apply(i)]).collect();
        tensor_add(&mut out, word, &sign(s));
    }
    out
}

/// Exponent `e` with Koszul sign `(-1)^e` for moving factor `i` to `σ(i)`.
pub fn koszul_word_sign(sigma: &Perm, degs: &[i32]) -> i64 {
    sigma
        .inversions()
        .filter(|&(i, j)| degs[i] & 1 == 1 && degs[j] & 1 == 1)
        .count() as i64
}

/// Sorts a word into weakly increasing order, returning the Koszul exponent
/// and `None` when the word contains an odd letter twice (its symmetric image is zero).
pub fn sort_word(sdeg: &[i32], w: &[usize]) -> Option<(i64, Word)> {
    let mut word = w.to_vec();
    let mut e = 0i64;
    // insertion sort tracks adjacent swaps
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            if sdeg[word[j - 1]] & 1 == 1 && sdeg[word[j]] & 1 == 1 {
                e += 1;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in word.windows(2) {
        if pair[0] == pair[1] && sdeg[pair[0]] & 1 == 1 {
            return None;
        }
    }
    Some((e, word))
}

/// Weakly increasing words with no repeated odd letter: a basis of symmetric tensors.
pub fn sorted_words_of_degree(sdeg: &[i32], len: usize, total: i32) -> Vec<Word> {
    words_of_degree(sdeg, len, total)
        .into_iter()
        .filter(|w| w.windows(2).all(|p| p[0] < p[1] || (p[0] == p[1] && sdeg[p[0]] & 1 == 0)))
        .collect()
}

/// Fills a symmetric map from its values on sorted words.
pub fn symmetric_extension(sdeg: &[i32], arity: usize, sorted: &MultiMap, nbasis: usize) -> MultiMap {
    let mut out = MultiMap::zero(arity);
    for w in all_words(nbasis, arity) {
        if let Some((e, s)) = sort_word(sdeg, &w) {
            if let Some(v) = sorted.get(&s) {
                out.set(w, v.scaled(&sign(e)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn word_enumeration() {
        assert_eq!(all_words(3, 2).len(), 9);
        let sdeg = [0, 1, -1];
        for w in words_of_degree(&sdeg, 3, 1) {
            assert_eq!(word_degree(&sdeg, &w), 1);
        }
        let brute = all_words(3, 3).into_iter().filter(|w| word_degree(&sdeg, w) == 1).count();
        assert_eq!(words_of_degree(&sdeg, 3, 1).len(), brute);
    }

    #[test]
    fn symmetrization_of_odd_pair() {
        let sdeg = [1, 1];
        let t = symmetrize_word(&sdeg, &[0, 1]);
        assert_eq!(t.get(&vec![0, 1]), Some(&q(1)));
        assert_eq!(t.get(&vec![1, 0]), Some(&q(-1)));
        assert!(symmetrize_word(&sdeg, &[0, 0]).is_empty());
        assert_eq!(sort_word(&sdeg, &[1, 0]), Some((1, vec![0, 1])));
    }

    #[test]
    fn coalgebra_identity_map() {
        let mut id = MultiMap::zero(1);
        for i in 0..3 {
            id.set(vec![i], Vector::unit(i));
        }
        let comps: Components = [(1, id)].into_iter().collect();
        let w = vec![2, 0, 1];
        assert_eq!(coalgebra_map_on_word(&comps, &w), tensor_of_word(w));
    }
}
