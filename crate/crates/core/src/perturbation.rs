//! The basic perturbation lemma for a contraction `(f, g, h)` with
//! `f g = 1`, `g f - 1 = d h + h d`.
//!
//! For a perturbation `t` of the big differential put `A = Σ_i (t h)^i t`; then
//! `d' = d_small + f A g`, `g' = g + h A g`, `f' = f + f A h`, `h' = h + h A h`.
//! Termination of the series is certified by a nonnegative filtration that `t h`
//! strictly lowers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{check_map_degree, CochainComplex, Contraction};
use crate::linalg::LinMap;

/// A nonnegative grading on the big complex together with declared shifts:
/// every matrix entry of `t` (resp. `h`) from `j` to `i` has
/// `grading[i] ≤ grading[j] + t_shift` (resp. `h_shift`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub grading: Vec<i64>,
    pub t_shift: i64,
    pub h_shift: i64,
}

impl Filtration {
    /// Largest number of nonzero terms `(t h)^i t` the declaration allows.
    pub fn term_bound(&self) -> Result<usize> {
        if let Some(&g) = self.grading.iter().find(|&&g| g < 0) {
            return Err(Error::Certification(format!("filtration grading {g} is negative")));
        }
        let drop = -(self.t_shift + self.h_shift);
        if drop <= 0 {
            return Err(Error::Certification(format!(
                "t h shifts the filtration by {} ≥ 0, so the series is not certified to terminate",
                -drop
            )));
        }
        let span = self.grading.iter().max().copied().unwrap_or(0) - self.grading.iter().min().copied().unwrap_or(0);
        Ok((span / drop) as usize + 1)
    }

    /// First entry of `map` breaking the declared shift.
    pub fn violation(&self, map: &LinMap, shift: i64) -> Option<(usize, usize)> {
        for (j, col) in map.cols.iter().enumerate() {
            for (i, _) in col.iter() {
                if self.grading[i] > self.grading[j] + shift {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct Perturbed {
    pub big: CochainComplex,
    pub small: CochainComplex,
    pub contraction: Contraction,
    /// Number of nonzero terms in `Σ (t h)^i t`.
    pub terms: usize,
}

pub fn perturbation_lemma(
    big: &CochainComplex,
    small: &CochainComplex,
    con: &Contraction,
    t: &LinMap,
    filtration: &Filtration,
) -> Result<Perturbed> {
    let n = big.dim();
    if t.rows != n || t.ncols() != n || filtration.grading.len() != n {
        return Err(Error::input("perturbation and filtration must live on the big complex"));
    }
    con.verify(&big.d, &small.d)?;
    check_map_degree(t, &big.space, &big.space, 1)?;
    let d_new = big.d.add(t);
    if !d_new.compose(&d_new).is_zero() {
        return Err(Error::input("perturbed differential does not square to zero"));
    }
    let bound = filtration.term_bound()?;
    for (map, shift, name) in [(t, filtration.t_shift, "t"), (&con.h, filtration.h_shift, "h")] {
        if let Some((i, j)) = filtration.violation(map, shift) {
            return Err(Error::Certification(format!(
                "{name} sends {} (filtration {}) to {} (filtration {}), beyond its declared shift {shift}",
                big.space.name(j),
                filtration.grading[j],
                big.space.name(i),
                filtration.grading[i]
            )));
        }
    }
    let h = &con.h;
    let th = t.compose(h);
    let mut term = t.clone();
    let mut a = LinMap::zero(n, n);
    let mut terms = 0;
    while !term.is_zero() {
        if terms == bound {
            return Err(Error::Certification(format!("series has not terminated after {bound} terms")));
        }
        a = a.add(&term);
        terms += 1;
        term = th.compose(&term);
    }
    let d_small = small.d.add(&con.f.compose(&a).compose(&con.g));
    let g = con.g.add(&h.compose(&a).compose(&con.g));
    let f = con.f.add(&con.f.compose(&a).compose(h));
    let h = h.add(&h.compose(&a).compose(h));
    let contraction = Contraction { f, g, h };
    let small_new = CochainComplex::new(small.space.clone(), d_small)
        .map_err(|e| Error::internal(format!("transferred differential: {e}")))?;
    let big_new = CochainComplex::new(big.space.clone(), d_new)?;
    if let Some(v) = contraction.first_violation(&big_new.d, &small_new.d) {
        return Err(Error::internal(format!("perturbed contraction fails {v}")));
    }
    Ok(Perturbed { big: big_new, small: small_new, contraction, terms })
}
