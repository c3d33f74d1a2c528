use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formality_core::algebras::{cohomology_algebra, fixtures, DgAlgebra, Species};
use formality_core::formality::{
    compare_com_vs_ass, compare_lie_vs_ass, degree_bound_certificate, obstruction_sequence, EnvelopeVerdict,
    Terminal,
};
use formality_core::graded::GradedSpace;
use formality_core::homotopy::{check_relations, gauge_transform, minimal_model, PInfinity};
use formality_core::linalg::{LinMap, Vector};
use formality_core::multilinear::{all_words, MultiMap};
use formality_core::opcohomology::{hochschild_to_harrison_witness, is_harrison, CochainContext};
use formality_core::scalar::{q, Q};

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into())
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[Vector]) -> Vector {
    let mut v = Vector::new();
    for b in basis {
        if rng.gen_bool(0.5) {
            v.add_scaled(b, &random_q(rng));
        }
    }
    v
}

#[test]
fn strict_structures_have_empty_sequences() {
    for alg in [fixtures::f4(), fixtures::f5(), fixtures::f1()] {
        let s = PInfinity::from_algebra(&cohomology_algebra(&alg).unwrap().algebra, 5);
        let r = obstruction_sequence(&s, 5).unwrap();
        assert!(r.entries.iter().all(|e| e.vanishes && e.cochain.is_empty()), "{}", alg.name);
        assert!(!matches!(r.terminal, Terminal::NonzeroAt(_)));
    }
}

#[test]
fn heisenberg_is_not_formal() {
    let s = minimal_model(&fixtures::f2(), 4).unwrap().minimal;
    let r = obstruction_sequence(&s, 4).unwrap();
    assert_eq!(r.terminal, Terminal::NonzeroAt(3));
    assert!(r.normalized);
    let last = r.entries.last().unwrap();
    assert!(last.cocycle && !last.vanishes && last.witness.is_none());
}

#[test]
fn certificate_examples() {
    assert!(degree_bound_certificate(&[], &[], Species::Ass, 2).holds);
    // reduced cohomology of the even sphere: inputs {e}, outputs {1, e}
    assert!(degree_bound_certificate(&[2], &[0, 2], Species::Com, 2).holds);
    // a class of degree 1 sits in bar degree 0 and the window never closes
    assert!(!degree_bound_certificate(&[1, 2], &[0, 1, 2], Species::Ass, 2).holds);
    assert!(!degree_bound_certificate(&[0, 1, 2, 3], &[0, 1, 2, 3], Species::Ass, 2).holds);
}

#[test]
fn com_versus_ass() {
    let r = compare_com_vs_ass(&fixtures::f2(), 4).unwrap();
    assert_eq!(r.harrison, Terminal::NonzeroAt(3));
    assert_eq!(r.hochschild, Terminal::NonzeroAt(3));
    let r = compare_com_vs_ass(&fixtures::f4(), 5).unwrap();
    assert_eq!(r.harrison, Terminal::CertifiedFormal);
    assert_eq!(r.hochschild, Terminal::CertifiedFormal);
    assert!(compare_com_vs_ass(&fixtures::f5(), 3).is_err());
}

/// `Λ(x, y)` with `|x| = |y| = 1`, as an associative algebra.
fn exterior() -> DgAlgebra {
    let space = GradedSpace::from_pairs(&[("one", 0), ("x", 1), ("y", 1), ("xy", 2)]);
    let declared: BTreeMap<(usize, usize), Vector> = [
        ((1, 2), Vector::unit(3)),
        ((2, 1), Vector::from_pairs([(3, q(-1))])),
    ]
    .into_iter()
    .collect();
    DgAlgebra::new(Species::Ass, "exterior", space, LinMap::zero(4, 4), declared, Some(0)).unwrap()
}

#[test]
fn gauge_trivial_obstructions_are_removed() {
    let s = PInfinity::from_algebra(&exterior(), 5);
    let sdeg = s.sdeg();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nontrivial = 0;
    for _ in 0..5 {
        let mut phi = MultiMap::zero(2);
        for w in all_words(3, 2) {
            let w: Vec<usize> = w.iter().map(|&i| i + 1).collect();
            for o in 0..4 {
                if sdeg[o] == sdeg[w[0]] + sdeg[w[1]] && rng.gen_bool(0.6) {
                    phi.add_at(w.clone(), &Vector::unit(o), &random_q(&mut rng));
                }
            }
        }
        let t = gauge_transform(&s, &phi, 5).unwrap();
        assert!(check_relations(&t, 5).pass);
        if !t.op(3).is_zero() {
            nontrivial += 1;
        }
        let r = obstruction_sequence(&t, 5).unwrap();
        assert_eq!(r.terminal, Terminal::AllVanishToStage(5));
        assert!(r.entries.iter().all(|e| e.vanishes));
        assert!((3..=5).all(|k| r.gauged.op(k).is_zero()));
        assert!(check_relations(&r.gauged, 5).pass);
    }
    assert!(nontrivial >= 3);
}

#[test]
fn hochschild_witnesses_convert_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let contexts: Vec<CochainContext> = [fixtures::f2(), fixtures::f4()]
        .iter()
        .map(|a| CochainContext::harrison(&PInfinity::from_algebra(&cohomology_algebra(a).unwrap().algebra, 2)).unwrap())
        .collect();
    let (mut cases, mut non_harrison_witnesses) = (0, 0);
    while cases < 50 {
        let ctx = &contexts[rng.gen_range(0..contexts.len())];
        let m = rng.gen_range(1..=3);
        let degrees = ctx.degrees(m);
        let qd = degrees[rng.gen_range(0..degrees.len())];
        let s = ctx.slice(m, qd);
        let t = ctx.slice(m + 1, qd + 1);
        let d = ctx.differential_matrix(&s, &t).unwrap();
        let z = random_combination(&mut rng, &ctx.subcomplex_basis(&s));
        let x = d.apply(&z);
        if x.is_zero() {
            continue;
        }
        let y = z.add(&random_combination(&mut rng, &d.kernel()));
        let (x, y) = (ctx.from_vector(&x, &t), ctx.from_vector(&y, &s));
        if !is_harrison(ctx, &y).unwrap() {
            non_harrison_witnesses += 1;
        }
        let y1 = hochschild_to_harrison_witness(ctx, &x, &y).unwrap();
        assert!(is_harrison(ctx, &y1).unwrap());
        assert_eq!(ctx.differential(&y1).unwrap(), x);
        cases += 1;
    }
    assert!(non_harrison_witnesses >= 10, "{non_harrison_witnesses}");
}

#[test]
fn lie_versus_ass_on_fixtures() {
    for alg in [fixtures::f1(), fixtures::acyclic()] {
        let r = compare_lie_vs_ass(&alg, 5, 3).unwrap();
        assert!(matches!(r.envelope, EnvelopeVerdict::CertifiedFormal { .. }), "{}", alg.name);
        assert!(!matches!(r.lie.terminal, Terminal::NonzeroAt(_)));
        assert_eq!(r.agreement, Some(true));
    }
    for w in [3, 4] {
        let r = compare_lie_vs_ass(&fixtures::f3(), 4, w).unwrap();
        assert_eq!(r.lie.terminal, Terminal::NonzeroAt(3));
        assert_eq!(r.envelope, EnvelopeVerdict::NonzeroAt { stage: 3 });
        let c = r.comparison.unwrap();
        assert!(c.difference_is_coboundary && c.retracted_class_nonzero);
        assert!(!r.injectivity.is_empty() && r.injectivity.iter().all(|s| s.injective));
        assert!(r.injectivity.iter().any(|s| s.arity == 3 && s.small_cohomology > 0));
        assert_eq!(r.agreement, Some(true));
    }
}

#[test]
fn truncation_limits_are_reported() {
    // F3 without the bracket [w, c]: the Massey product dies and nothing detects the higher stages
    let space = GradedSpace::from_pairs(&[("a", 1), ("b", 1), ("c", 1), ("w", 1), ("p", 2), ("e", 2)]);
    let mut cols = vec![Vector::new(); 6];
    cols[3] = Vector::unit(4);
    let declared: BTreeMap<(usize, usize), Vector> = [((0, 1), Vector::unit(4))].into_iter().collect();
    let alg = DgAlgebra::new(Species::Lie, "F3b", space, LinMap::from_cols(6, cols), declared, None).unwrap();
    let r = compare_lie_vs_ass(&alg, 4, 3).unwrap();
    assert!(matches!(r.envelope, EnvelopeVerdict::Partial { .. }));
    assert_eq!(r.agreement, None);
    assert!(r.comparison.unwrap().difference_is_coboundary);
    let r = compare_lie_vs_ass(&fixtures::f3(), 4, 2).unwrap();
    assert!(matches!(r.envelope, EnvelopeVerdict::Partial { .. }));
    assert_eq!(r.agreement, None);
}

#[test]
fn verdicts_do_not_depend_on_the_basis_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alg in fixtures::all() {
        let n = 4;
        let reference: Vec<String> = verdicts(&alg, n);
        for _ in 0..3 {
            let mut order: Vec<usize> = (0..alg.dim()).collect();
            order.shuffle(&mut rng);
            assert_eq!(verdicts(&alg.permuted(&order), n), reference, "{} under {order:?}", alg.name);
        }
    }
}

fn verdicts(alg: &DgAlgebra, n: usize) -> Vec<String> {
    match alg.species {
        Species::Lie => {
            let r = compare_lie_vs_ass(alg, n, 3).unwrap();
            vec![format!("{:?}", r.lie.terminal), format!("{:?}", r.envelope)]
        }
        Species::Com => {
            let r = compare_com_vs_ass(alg, n).unwrap();
            vec![format!("{:?}", r.harrison), format!("{:?}", r.hochschild)]
        }
        Species::Ass => {
            let s = minimal_model(alg, n).unwrap().minimal;
            vec![format!("{:?}", obstruction_sequence(&s, n).unwrap().terminal)]
        }
    }
}
