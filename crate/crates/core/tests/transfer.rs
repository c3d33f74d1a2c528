use formality_core::algebras::{cohomology_algebra, fixtures, DgAlgebra};
use formality_core::homotopy::{check_morphism, check_relations, minimal_model, PInfinity};
use formality_core::linalg::Vector;
use formality_core::scalar::q;

fn transferred_ok(alg: &DgAlgebra, n: usize) -> PInfinity {
    let t = minimal_model(alg, n).unwrap();
    let r = check_relations(&t.minimal, n);
    assert!(r.pass, "{} relations: {:?}", alg.name, r);
    let m = check_morphism(&t.morphism, n);
    assert!(m.pass, "{} morphism: {:?}", alg.name, m);
    t.minimal
}

#[test]
fn strict_algebras_satisfy_their_relations() {
    for alg in fixtures::all() {
        let s = PInfinity::from_algebra(&alg, 4);
        assert!(check_relations(&s, 4).pass, "{}", alg.name);
    }
}

#[test]
fn heisenberg_transfer() {
    let alg = fixtures::f2();
    let s = transferred_ok(&alg, 5);
    let h = cohomology_algebra(&alg).unwrap().algebra;
    for a in 0..h.dim() {
        for b in 0..h.dim() {
            assert_eq!(s.product(a, b), h.mul(a, b));
        }
    }
    assert!(!s.op(3).is_zero());
    let x = s.space.index_of("x").unwrap();
    let y = s.space.index_of("y").unwrap();
    let v = s.op(3).eval(&[x, y, y]);
    assert!(!v.is_zero(), "m3(x,y,y) = 0");
}

#[test]
fn zero_differential_has_no_higher_operations() {
    for alg in [fixtures::f4(), fixtures::f1(), fixtures::f5(), fixtures::f3_formal()] {
        let s = transferred_ok(&alg, 5);
        assert!(s.first_nonzero_from(3).is_none(), "{}", alg.name);
    }
}

#[test]
fn nonformal_dgl_has_ternary_bracket() {
    let s = transferred_ok(&fixtures::f3(), 5);
    assert!(!s.op(3).is_zero());
}

#[test]
fn acyclic_dgl_transfers_to_zero() {
    let s = transferred_ok(&fixtures::acyclic(), 5);
    assert_eq!(s.dim(), 0);
}

#[test]
fn perturbed_m3_breaks_arity_four() {
    let mut s = minimal_model(&fixtures::f2(), 5).unwrap().minimal;
    let mut m3 = s.op(3);
    let x = s.space.index_of("x").unwrap();
    let xyz = s.space.index_of("xyz").unwrap();
    let old = m3.eval(&[x, x, x]);
    m3.set(vec![x, x, x], old.add(&Vector::from_pairs([(xyz, q(1))])));
    s.set_op(3, m3);
    let r = check_relations(&s, 5);
    assert!(!r.pass);
    assert_eq!(r.failing_arity, Some(4));
}

#[test]
fn nonformal_dgl_value() {
    let s = minimal_model(&fixtures::f3(), 3).unwrap().minimal;
    let idx = |n: &str| s.space.index_of(n).unwrap();
    let v = s.op(3).eval(&[idx("a"), idx("b"), idx("c")]);
    assert_eq!(v.support().collect::<Vec<_>>(), vec![idx("e")]);
}
