use formality_core::algebras::{cohomology_algebra, fixtures, Species};
use formality_core::homotopy::{
    binomial_violation, check_morphism, check_relations, exp_coalgebra_violation, exp_coderivation,
    exp_inverse_violation, gauge_transform, minimal_model, normalize_morphism, InftyMorphism, PInfinity,
};
use formality_core::linalg::Vector;
use formality_core::multilinear::{words_of_degree, Components, MultiMap};
use formality_core::scalar::{q, sign, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random degree-0 map of the given arity on a space with shifted degrees `sdeg`.
fn random_degree_zero(sdeg: &[i32], arity: usize, rng: &mut ChaCha8Rng, density: f64) -> MultiMap {
    let mut m = MultiMap::zero(arity);
    let mut degs: Vec<i32> = sdeg.to_vec();
    degs.sort();
    degs.dedup();
    for &d in &degs {
        for w in words_of_degree(sdeg, arity, d) {
            let mut v = Vector::new();
            for (o, &od) in sdeg.iter().enumerate() {
                if od == d && rng.gen_bool(density) {
                    v.add_term(o, &q(rng.gen_range(-3..=3)));
                }
            }
            m.set(w, v);
        }
    }
    m
}

fn heisenberg_h_ass() -> PInfinity {
    let mut s = minimal_model(&fixtures::f2(), 5).unwrap().minimal;
    s.species = Species::Ass;
    s
}

#[test]
fn exp_of_zero_is_identity() {
    let s = heisenberg_h_ass();
    let e = exp_coderivation(&Components::new(), &s.sdeg(), 3).unwrap();
    assert_eq!(e.keys().copied().collect::<Vec<_>>(), vec![1]);
    for (w, v) in &e[&1].table {
        assert_eq!(*v, Vector::unit(w[0]));
    }
}

#[test]
fn exp_rejects_bad_input() {
    let s = heisenberg_h_ass();
    let sdeg = s.sdeg();
    let mut lin = Components::new();
    lin.insert(1, MultiMap::zero(1));
    assert!(exp_coderivation(&lin, &sdeg, 2).is_err());
    // a degree-1 component
    let mut bad = Components::new();
    bad.insert(3, s.op(3));
    assert!(exp_coderivation(&bad, &sdeg, 2).is_err());
}

#[test]
fn exp_is_coalgebra_automorphism() {
    let s = heisenberg_h_ass();
    let sdeg = s.sdeg();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut theta = Components::new();
    theta.insert(3, random_degree_zero(&sdeg, 3, &mut rng, 0.3));
    assert!(exp_coalgebra_violation(&theta, &sdeg, 5).is_none());
    assert!(exp_inverse_violation(&theta, &sdeg, 5).is_none());
    for m in [2, 3] {
        assert!(binomial_violation(&theta, &sdeg, m, 4).is_none());
    }
}

/// `[b_2, φ]` for a degree-0 binary `φ`, written out by hand.
fn hochschild_of_binary(s: &PInfinity, phi: &MultiMap) -> MultiMap {
    let sdeg = s.sdeg();
    let b2 = s.op(2);
    let n = s.dim();
    let mut out = MultiMap::zero(3);
    let apply2 = |m: &MultiMap, a: &Vector, b: &Vector| {
        let mut r = Vector::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                r.add_scaled(&m.eval(&[i, j]), &(x * y));
            }
        }
        r
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ua, uc) = (Vector::unit(a), Vector::unit(c));
                let mut v = apply2(&b2, &phi.eval(&[a, b]), &uc);
                v.add_scaled(&apply2(&b2, &ua, &phi.eval(&[b, c])), &Q::from_integer(1.into()));
                v.add_scaled(&apply2(phi, &b2.eval(&[a, b]), &uc), &q(-1));
                v.add_scaled(&apply2(phi, &ua, &b2.eval(&[b, c])), &(-sign(sdeg[a] as i64)));
                out.set(vec![a, b, c], v);
            }
        }
    }
    out
}

#[test]
fn kadeishvili_first_order() {
    let s = heisenberg_h_ass();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let phi = random_degree_zero(&s.sdeg(), 2, &mut rng, 0.4);
    let g = gauge_transform(&s, &phi, 5).unwrap();
    assert_eq!(g.op(2), s.op(2));
    assert_eq!(s.op(3).sub(&g.op(3)), hochschild_of_binary(&s, &phi));
    assert!(check_relations(&g, 5).pass);
    assert_eq!(gauge_transform(&s, &MultiMap::zero(2), 5).unwrap().ops, s.ops);
}

#[test]
fn gauge_rejects_non_minimal() {
    let s = PInfinity::from_algebra(&fixtures::f2(), 3);
    assert!(gauge_transform(&s, &MultiMap::zero(2), 3).is_err());
}

fn strict_cohomology() -> PInfinity {
    let h = cohomology_algebra(&fixtures::f2()).unwrap().algebra;
    let mut s = PInfinity::from_algebra(&h, 4);
    s.species = Species::Ass;
    s
}

/// `L ∘ e^θ` from `s` to the gauged and then transported structure.
fn twisted_morphism(s: &PInfinity, theta: &MultiMap, scale: i64) -> InftyMorphism {
    let sdeg = s.sdeg();
    let n = s.arity_bound;
    let target = gauge_transform(s, theta, n).unwrap();
    let comps_theta: Components = [(theta.arity, theta.clone())].into_iter().collect();
    let e = exp_coderivation(&comps_theta, &sdeg, n).unwrap();
    let c = q(scale);
    let comps: Components = e.iter().map(|(k, m)| (*k, m.scaled(&c))).collect();
    // transport the target along L = scale·id
    let mut t = target.clone();
    for (k, op) in &target.ops {
        // L T_k (L^{-1})^{⊗k} = scale^{1-k} T_k
        t.set_op(*k, op.scaled(&(c.clone() / c.pow(*k as i32))));
    }
    InftyMorphism { source: s.clone(), target: t, comps }
}

#[test]
fn normalization_of_scaled_morphism() {
    let s = strict_cohomology();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let theta = random_degree_zero(&s.sdeg(), 2, &mut rng, 0.3);
    let psi = twisted_morphism(&s, &theta, 2);
    assert!(check_morphism(&psi, 4).pass);
    let out = normalize_morphism(&psi, 4).unwrap();
    assert!(check_morphism(&out.morphism, 4).pass);
    for (w, v) in &out.morphism.comp(1).table {
        assert_eq!(*v, Vector::unit(w[0]));
    }
    // source has b_3 = b_4 = 0, so components 2 and 3 vanish
    assert!(out.morphism.comp(2).is_zero());
    assert!(out.morphism.comp(3).is_zero());
}

#[test]
fn normalization_keeps_normal_morphism() {
    let s = strict_cohomology();
    let id = twisted_morphism(&s, &MultiMap::zero(2), 1);
    let out = normalize_morphism(&id, 4).unwrap();
    assert_eq!(out.morphism.comps, id.comps);
    assert!(out.target_changed_at.is_empty());
}
