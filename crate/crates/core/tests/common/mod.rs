#![allow(dead_code)]

use formality_core::graded::{CochainComplex, Contraction, GradedSpace};
use formality_core::linalg::{LinMap, Vector};
use formality_core::perturbation::Filtration;
use formality_core::scalar::q;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A filtered contraction onto `H` (zero differential) plus a perturbation
/// `t = P d P⁻¹ - d` with `P - 1` strictly lowering the filtration.
pub struct FilteredCase {
    pub big: CochainComplex,
    pub small: CochainComplex,
    pub con: Contraction,
    pub t: LinMap,
    pub filtration: Filtration,
}

pub fn random_filtered_case(rng: &mut ChaCha8Rng, max_dim: usize) -> FilteredCase {
    let pairs = rng.gen_range(1..=max_dim / 2);
    let n_h = rng.gen_range(0..=(max_dim - 2 * pairs));
    let mut basis = Vec::new();
    let mut grading = Vec::new();
    for i in 0..n_h {
        basis.push((format!("h{i}"), rng.gen_range(0..=1)));
        grading.push(rng.gen_range(0..=3));
    }
    for k in 0..pairs {
        let deg = if rng.gen_bool(0.8) { 0 } else { -1 };
        let gr = rng.gen_range(0..=3);
        basis.push((format!("x{k}"), deg));
        basis.push((format!("y{k}"), deg + 1));
        grading.extend([gr, gr]);
    }
    let n = basis.len();
    let space = GradedSpace::new(basis).unwrap();
    let mut d = LinMap::zero(n, n);
    let mut h = LinMap::zero(n, n);
    for k in 0..pairs {
        let x = n_h + 2 * k;
        d.cols[x] = Vector::unit(x + 1);
        h.cols[x + 1] = Vector::from_pairs([(x, q(-1))]);
    }
    let f = LinMap::from_cols(n_h, (0..n).map(|i| if i < n_h { Vector::unit(i) } else { Vector::new() }).collect());
    let g = LinMap::from_cols(n, (0..n_h).map(Vector::unit).collect());
    // P = 1 + N, N of degree 0 strictly lowering the filtration
    let mut nil = LinMap::zero(n, n);
    for j in 0..n {
        for i in 0..n {
            if grading[i] < grading[j] && space.degree(i) == space.degree(j) && rng.gen_bool(0.8) {
                nil.cols[j].add_term(i, &q(rng.gen_range(-2..=2)));
            }
        }
    }
    let p = LinMap::identity(n).add(&nil);
    let p_inv = p.inverse().unwrap();
    let t = p.compose(&d).compose(&p_inv).sub(&d);
    let big = CochainComplex::new(space.clone(), d).unwrap();
    let small = CochainComplex::zero_differential(GradedSpace::new(
        (0..n_h).map(|i| (space.name(i).to_string(), space.degree(i))).collect(),
    ).unwrap());
    FilteredCase {
        big,
        small,
        con: Contraction { f, g, h },
        t,
        filtration: Filtration { grading, t_shift: -1, h_shift: 0 },
    }
}

/// `d_small + f (1 - t h)⁻¹ t g` by matrix inversion.
pub fn brute_force_transferred(case: &FilteredCase) -> LinMap {
    let n = case.big.dim();
    let one_minus = LinMap::identity(n).sub(&case.t.compose(&case.con.h));
    let a = one_minus.inverse().unwrap().compose(&case.t);
    case.small.d.add(&case.con.f.compose(&a).compose(&case.con.g))
}
