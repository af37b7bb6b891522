use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::dgcore::{additive_closure, opposite_cat, Cat, DgCat, DgFunctor};
use crate::exactlin::{Field, Matrix};
use crate::gen::Gen;
use crate::homotopy::nullhomotopy;
use crate::samples::{acyclic_pair, dual_numbers};

const Q: Field = Field::Rational;

fn kcat() -> Cat {
    Arc::new(DgCat::field_category(Q))
}

fn scalar_block(cat: &Cat, deg: i64, v: i64) -> Block {
    Block::from_coords(cat, &[0], &[0], deg, &[cat.field().from_i64(v)])
}

/// `[k --1--> k]` in degrees `lo, lo+1`.
fn arrow(cat: &Cat, lo: i64) -> TwistedComplex {
    let mut t = BTreeMap::new();
    t.insert((lo, lo + 1), Block::identity(cat, &[0]));
    TwistedComplex::new(cat.clone(), lo, vec![vec![0], vec![0]], t).unwrap()
}

fn point(cat: &Cat, n: i64) -> TwistedComplex {
    TwistedComplex::single(cat.clone(), vec![0], n).unwrap()
}

#[test]
fn single_object_is_valid() {
    assert!(validate_twisted(&point(&kcat(), 0)).passed);
}

#[test]
fn arrow_is_valid() {
    assert!(validate_twisted(&arrow(&kcat(), 0)).passed);
}

#[test]
fn three_term_without_correction_fails_at_0_2() {
    let k = kcat();
    let mut t = BTreeMap::new();
    t.insert((0, 1), scalar_block(&k, 0, 1));
    t.insert((1, 2), scalar_block(&k, 0, 1));
    let x = TwistedComplex::new(k, 0, vec![vec![0]; 3], t).unwrap();
    let rep = validate_twisted(&x);
    assert!(!rep.passed);
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.violations[0].location, "(0,2)");
    assert_eq!(rep.violations[0].residual, vec!["1".to_string()]);
}

#[test]
fn twist_shape_is_checked() {
    let k = kcat();
    let mut t = BTreeMap::new();
    t.insert((0, 1), Block::zero(&k, &[0], &[0], 1));
    assert!(TwistedComplex::new(k, 0, vec![vec![0], vec![0]], t).is_err());
}

#[test]
fn identity_is_closed() {
    let x = arrow(&kcat(), 0);
    assert!(tw_diff(&TwMorphism::identity(&x)).is_zero());
}

#[test]
fn contracting_homotopy_of_arrow() {
    let k = kcat();
    let x = arrow(&k, 0);
    let mut c = BTreeMap::new();
    c.insert((1, 0), scalar_block(&k, 0, 1));
    let h = TwMorphism::new(&x, &x, -1, c).unwrap();
    assert_eq!(tw_diff(&h), TwMorphism::identity(&x));
}

#[test]
fn composition_basics() {
    let k = kcat();
    let x = arrow(&k, 0);
    let mut c = BTreeMap::new();
    c.insert((0, 0), scalar_block(&k, 0, 2));
    c.insert((1, 1), scalar_block(&k, 0, 2));
    let f = TwMorphism::new(&x, &x, 0, c.clone()).unwrap();
    assert_eq!(tw_compose(&TwMorphism::identity(&x), &f).unwrap(), f);
    c.insert((0, 0), scalar_block(&k, 0, 3));
    c.insert((1, 1), scalar_block(&k, 0, 5));
    let g = TwMorphism::new(&x, &x, 0, c).unwrap();
    let gf = tw_compose(&g, &f).unwrap();
    assert_eq!(gf.component(0, 0), Some(&scalar_block(&k, 0, 6)));
    assert_eq!(gf.component(1, 1), Some(&scalar_block(&k, 0, 10)));

    let mut hc = BTreeMap::new();
    hc.insert((1, 0), scalar_block(&k, 0, 1));
    let h = TwMorphism::new(&x, &x, -1, hc).unwrap();
    let j1 = brutal_truncate(&x, Trunc::Geq(1)).map.unwrap();
    let hj = tw_compose(&h, &j1).unwrap();
    assert_eq!(hj.components().len(), 1);
    assert_eq!(hj.component(1, 0), Some(&scalar_block(&k, 0, 1)));
}

#[test]
fn shift_of_arrow() {
    let k = kcat();
    let x = arrow(&k, 0);
    let s = tw_shift(&x, 1);
    assert_eq!((s.lo(), s.hi()), (-1, 0));
    assert_eq!(s.twist(-1, 0), Some(&scalar_block(&k, 0, -1)));
    assert_eq!(tw_shift(&x, 0), x);
    assert_eq!(tw_shift(&s, -1), x);
    assert_eq!(tw_shift(&tw_shift(&x, 2), -5), tw_shift(&x, -3));
}

/// Both candidate signs for the morphism shift, checked on every degree of
/// a random morphism between two-term complexes.
#[test]
fn morphism_shift_sign_is_forced() {
    let cat: Cat = Arc::new(dual_numbers(Q));
    let mut g = Gen::new(7);
    let x = g.complex(&cat, 0, 1, 2).unwrap();
    let y = g.complex(&cat, 0, 1, 2).unwrap();
    for p in -3..=2 {
        let f = g.morphism(&x, &y, p);
        for n in -2..=2 {
            let with = f.shift(n);
            let without = f.reindex(n);
            assert_eq!(tw_diff(&with), tw_diff(&f).shift(n));
            if !tw_diff(&f).is_zero() && n % 2 != 0 {
                assert_ne!(tw_diff(&without), tw_diff(&f).reindex(n));
            }
        }
    }
}

#[test]
fn shift_hom_bijection_commutes_with_d() {
    let cat: Cat = Arc::new(dual_numbers(Q));
    let mut g = Gen::new(11);
    let x = g.complex(&cat, 0, 2, 2).unwrap();
    let y = g.complex(&cat, -1, 1, 2).unwrap();
    for n in -2..=2 {
        let yn = tw_shift(&y, n);
        for p in -2..=1 {
            let f = g.morphism(&x, &yn, p);
            let phi = shift_hom_to(&f, &y, n).unwrap();
            assert_eq!(phi.deg(), p + n);
            assert_eq!(shift_hom_from(&phi, n), f);
            let lhs = tw_diff(&phi);
            let rhs = shift_hom_to(&tw_diff(&f), &y, n).unwrap().scale(&Q.sign(n));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn sums() {
    let k = kcat();
    let x = arrow(&k, 0);
    assert_eq!(tw_sum(&[x.clone()]).unwrap().sum, x);
    let z = TwistedComplex::zero(k.clone());
    let s = tw_sum(&[x.clone(), z]).unwrap();
    assert_eq!(s.sum, x);
    assert_eq!(s.inclusions[0], TwMorphism::identity(&x));
    let s = tw_sum(&[x.clone(), point(&k, 2)]).unwrap();
    assert_eq!((s.sum.lo(), s.sum.hi()), (0, 2));
    let sizes: Vec<usize> = s.sum.components().map(|(_, c)| c.len()).collect();
    assert_eq!(sizes, vec![1, 1, 1]);
    assert!(validate_twisted(&s.sum).passed);
    for (a, (i, p)) in s.inclusions.iter().zip(&s.projections).enumerate() {
        let pi = tw_compose(p, i).unwrap();
        assert_eq!(pi, TwMorphism::identity(i.src()), "part {a}");
    }
    let total = tw_compose(&s.inclusions[0], &s.projections[0])
        .unwrap()
        .add(&tw_compose(&s.inclusions[1], &s.projections[1]).unwrap())
        .unwrap();
    assert_eq!(total, TwMorphism::identity(&s.sum));
}

#[test]
fn cone_of_zero_is_a_sum() {
    let k = kcat();
    let x = arrow(&k, 0);
    let y = point(&k, 1);
    let pt = tw_cone(&TwMorphism::zero(&x, &y, 0)).unwrap();
    assert_eq!(pt.cone, tw_sum(&[tw_shift(&x, 1), y]).unwrap().sum);
    assert!(pt.check().unwrap().passed);
}

#[test]
fn cone_of_identity_on_a_point() {
    let k = kcat();
    let x = point(&k, 0);
    let pt = tw_cone(&TwMorphism::identity(&x)).unwrap();
    assert_eq!(pt.cone, arrow(&k, -1));
    assert!(pt.check().unwrap().passed);
    let one = TwMorphism::identity(&pt.cone);
    let h = nullhomotopy(&one).unwrap().expect("the cone of an identity is contractible");
    assert_eq!(tw_diff(&h), one);
}

#[test]
fn cone_rejects_open_maps() {
    let k = kcat();
    let x = arrow(&k, 0);
    let mut c = BTreeMap::new();
    c.insert((0, 0), scalar_block(&k, 0, 1));
    let f = TwMorphism::new(&x, &x, 0, c).unwrap();
    assert!(matches!(tw_cone(&f), Err(crate::Error::Contract(_))));
}

#[test]
fn brutal_truncations() {
    let k = kcat();
    let x = arrow(&k, 0);
    let t = brutal_truncate(&x, Trunc::Geq(-3));
    assert_eq!(t.complex, x);
    assert_eq!(t.map.unwrap(), TwMorphism::identity(&x));
    let t = brutal_truncate(&x, Trunc::Geq(1));
    assert_eq!(t.complex, point(&k, 1));
    let j = t.map.unwrap();
    assert_eq!(j.components().len(), 1);
    assert_eq!(j.component(1, 1), Some(&scalar_block(&k, 0, 1)));
    assert!(tw_diff(&j).is_zero());
    assert!(brutal_truncate(&x, Trunc::Window(1, 0)).complex.is_zero_object());
    let p = brutal_truncate(&x, Trunc::Leq(0)).map.unwrap();
    assert!(tw_diff(&p).is_zero());
}

#[test]
fn truncation_maps_compose() {
    let cat: Cat = Arc::new(dual_numbers(Q));
    let x = Gen::new(3).complex(&cat, -2, 2, 2).unwrap();
    for n in -2..=3 {
        let jn = brutal_truncate(&x, Trunc::Geq(n));
        let jn1 = brutal_truncate(&x, Trunc::Geq(n - 1));
        let step = canonical_map(&jn.complex, &jn1.complex);
        assert!(tw_diff(&step).is_zero());
        assert_eq!(tw_compose(jn1.map.as_ref().unwrap(), &step).unwrap(), jn.map.unwrap());
        let pn = brutal_truncate(&x, Trunc::Leq(n));
        let pn1 = brutal_truncate(&x, Trunc::Leq(n - 1));
        let step = canonical_map(&pn.complex, &pn1.complex);
        assert!(tw_diff(&step).is_zero());
        assert_eq!(tw_compose(&step, pn.map.as_ref().unwrap()).unwrap(), pn1.map.unwrap());
    }
}

#[test]
fn weight_triangle_examples() {
    let k = kcat();
    let x = arrow(&k, 0);
    let w = weight_triangle(&x, 0).unwrap();
    assert!(w.leq.is_zero_object());
    assert!(w.xt.is_zero());
    let w = weight_triangle(&x, 1).unwrap();
    assert_eq!(w.xt.components().len(), 1);
    assert_eq!(w.xt.component(1, 1), Some(&scalar_block(&k, 0, 1)));
    assert!(tw_diff(&w.xt).is_zero());
    assert_eq!(w.pretriangle.cone, x);
    assert!(w.pretriangle.check().unwrap().passed);
}

#[test]
fn connecting_homotopy_examples() {
    let cat: Cat = Arc::new(acyclic_pair(Q));
    let x = arrow(&cat, 0);
    let one = TwMorphism::identity(&x);
    assert!(connecting_homotopy(&one, 1).unwrap().is_zero());
    assert!(connecting_homotopy(&one, 0).unwrap().is_zero());

    // f_0^0 = t and the cross component f_0^1 = e.
    let t = Block::from_coords(&cat, &[0], &[0], 0, &[Q.zero(), Q.one()]);
    let e = Block::from_coords(&cat, &[0], &[0], -1, &[Q.one()]);
    let mut c = BTreeMap::new();
    c.insert((0, 0), t);
    c.insert((0, 1), e.clone());
    let f = TwMorphism::new(&x, &x, 0, c).unwrap();
    assert!(tw_diff(&f).is_zero());
    let h = connecting_homotopy(&f, 1).unwrap();
    assert_eq!(h.components().len(), 1);
    assert_eq!(h.component(1, 1), Some(&e));

    let wx = weight_triangle(&x, 1).unwrap();
    let fg = truncate_morphism(&f, Trunc::Geq(1));
    let fl = truncate_morphism(&f, Trunc::Leq(0));
    let defect = tw_compose(&fg, &wx.xt)
        .unwrap()
        .sub(&tw_compose(&wx.xt, &fl.shift(-1)).unwrap())
        .unwrap();
    assert!(!defect.is_zero());
    let solved = nullhomotopy(&defect).unwrap().unwrap();
    assert_eq!(solved, h);
}

#[test]
fn extend_below_examples() {
    let k = kcat();
    let x0 = point(&k, 0);
    let a1 = point(&k, 0);
    let (x, pt) = extend_below(&x0, &[0], 1, &TwMorphism::identity(&a1)).unwrap();
    assert_eq!(x, arrow(&k, -1));
    assert!(pt.check().unwrap().passed);

    let src = point(&k, 0);
    let (x, _) = extend_below(&x0, &[0], 1, &TwMorphism::zero(&src, &x0, 0)).unwrap();
    assert_eq!(x, tw_sum(&[point(&k, -1), x0.clone()]).unwrap().sum);

    let mut x = x0.clone();
    let mut parts = vec![x0.clone()];
    for m in 1..=3 {
        let src = point(&k, -m + 1);
        x = extend_below(&x, &[0], m, &TwMorphism::zero(&src, &x, 0)).unwrap().0;
        parts.insert(0, point(&k, -m));
    }
    assert_eq!(x, tw_sum(&parts).unwrap().sum);
}

#[test]
fn functor_images() {
    let k = kcat();
    let x = arrow(&k, 0);
    let id = DgFunctor::identity(&k);
    assert_eq!(map_functor(&id, &x).unwrap(), x);

    let cl = additive_closure(&k, &[vec![0], vec![0, 0]]).unwrap();
    let emb = cl.embedding(&k).unwrap();
    let y = map_functor(&emb, &x).unwrap();
    assert!(validate_twisted(&y).passed);
    let one = cl.object_of(&[0]).unwrap();
    assert!(y.components().all(|(_, c)| c == [one]));

    let f = Gen::new(1).closed_morphism(&x, &x, 0);
    let g = Gen::new(2).closed_morphism(&x, &x, 0);
    let lhs = map_functor_mor(&emb, &tw_compose(&g, &f).unwrap()).unwrap();
    let rhs = tw_compose(&map_functor_mor(&emb, &g).unwrap(), &map_functor_mor(&emb, &f).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    let twice = emb.then(&DgFunctor::identity(&cl.cat)).unwrap();
    assert_eq!(map_functor(&twice, &x).unwrap(), y);
}

#[test]
fn functor_killing_the_unit_is_rejected() {
    let cat: Cat = Arc::new(dual_numbers(Q));
    let mut maps = BTreeMap::new();
    maps.insert((0, 0, 0), Matrix::zeros(Q, 1, 1));
    maps.insert((0, 0, -1), Matrix::identity(Q, 1));
    let u = DgFunctor::new(cat.clone(), cat.clone(), vec![0], maps).unwrap();
    let rep = u.validate().unwrap();
    assert!(!rep.passed);
    assert!(rep.violations.iter().any(|v| v.axiom == "functor-unit"));
}

#[test]
fn opposite_examples() {
    let k = kcat();
    let op: Cat = Arc::new(opposite_cat(&k));
    let x = arrow(&k, 0);
    let xo = opposite_tw(&x, &op).unwrap();
    assert_eq!((xo.lo(), xo.hi()), (-1, 0));
    assert!(validate_twisted(&xo).passed);
    assert_eq!(opposite_tw(&xo, &k).unwrap(), x);

    let cat: Cat = Arc::new(dual_numbers(Q));
    let op: Cat = Arc::new(opposite_cat(&cat));
    let y = Gen::new(5).complex(&cat, -3, 0, 2).unwrap();
    let yo = opposite_tw(&y, &op).unwrap();
    assert!(yo.lo() >= 0);
    assert!(validate_twisted(&yo).passed);
    assert_eq!(opposite_tw(&yo, &cat).unwrap(), y);
}

#[test]
fn opposite_morphisms_respect_d_and_composition() {
    let cat: Cat = Arc::new(dual_numbers(Q));
    let op: Cat = Arc::new(opposite_cat(&cat));
    let mut g = Gen::new(9);
    let x = g.complex(&cat, -1, 1, 2).unwrap();
    let y = g.complex(&cat, -2, 1, 2).unwrap();
    let z = g.complex(&cat, 0, 2, 2).unwrap();
    for p in -2..=1 {
        let f = g.morphism(&x, &y, p);
        let fo = opposite_tw_mor(&f, &op).unwrap();
        assert_eq!(opposite_tw_mor(&fo, &cat).unwrap(), f);
        assert_eq!(tw_diff(&fo), opposite_tw_mor(&tw_diff(&f), &op).unwrap());
        for q in -2..=1 {
            let h = g.morphism(&y, &z, q);
            let ho = opposite_tw_mor(&h, &op).unwrap();
            let lhs = opposite_tw_mor(&tw_compose(&h, &f).unwrap(), &op).unwrap();
            let rhs = tw_compose(&fo, &ho).unwrap().scale(&Q.sign(p * q));
            assert_eq!(lhs, rhs, "p={p} q={q}");
        }
    }
}

fn arb_case() -> impl Strategy<Value = (u64, bool, i64, i64)> {
    (any::<u64>(), any::<bool>(), -2i64..=1, 0i64..=3)
}

fn sample_cat(prime: bool) -> Cat {
    Arc::new(dual_numbers(if prime { Field::Prime(101) } else { Q }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_d_squared_vanishes((seed, prime, p, len) in arb_case()) {
        let cat = sample_cat(prime);
        let mut g = Gen::new(seed);
        let x = g.complex(&cat, 0, len, 2).unwrap();
        let y = g.complex(&cat, -1, len - 1, 2).unwrap();
        prop_assert!(validate_twisted(&x).passed);
        let f = g.morphism(&x, &y, p);
        prop_assert!(tw_diff(&tw_diff(&f)).is_zero());
    }

    #[test]
    fn prop_leibniz((seed, prime, p, len) in arb_case(), q in -2i64..=1) {
        let cat = sample_cat(prime);
        let field = cat.field();
        let mut g = Gen::new(seed);
        let x = g.complex(&cat, 0, len, 2).unwrap();
        let y = g.complex(&cat, -1, len, 2).unwrap();
        let z = g.complex(&cat, 0, len + 1, 2).unwrap();
        let f = g.morphism(&x, &y, p);
        let h = g.morphism(&y, &z, q);
        let lhs = tw_diff(&tw_compose(&h, &f).unwrap());
        let rhs = tw_compose(&tw_diff(&h), &f).unwrap()
            .add(&tw_compose(&h, &tw_diff(&f)).unwrap().scale(&field.sign(q))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_constructions_stay_valid((seed, prime, n, len) in arb_case()) {
        let cat = sample_cat(prime);
        let mut g = Gen::new(seed);
        let x = g.complex(&cat, -1, len, 2).unwrap();
        let y = g.complex(&cat, 0, len, 2).unwrap();
        prop_assert!(validate_twisted(&tw_shift(&x, n)).passed);
        prop_assert!(validate_twisted(&tw_sum(&[x.clone(), y.clone()]).unwrap().sum).passed);
        let f = g.closed_morphism(&x, &y, 0);
        let pt = tw_cone(&f).unwrap();
        prop_assert!(validate_twisted(&pt.cone).passed);
        prop_assert!(pt.check().unwrap().passed);
        for kind in [Trunc::Geq(n), Trunc::Leq(n), Trunc::Window(n - 1, n + 1)] {
            prop_assert!(validate_twisted(&brutal_truncate(&x, kind).complex).passed);
        }
        let w = weight_triangle(&x, n).unwrap();
        prop_assert!(w.pretriangle.check().unwrap().passed);
        connecting_homotopy(&f, n).unwrap();
    }

    #[test]
    fn prop_truncation_is_functorial((seed, prime, m, len) in arb_case()) {
        let cat = sample_cat(prime);
        let mut g = Gen::new(seed);
        let x = g.complex(&cat, 0, len, 2).unwrap();
        let y = g.complex(&cat, 0, len, 2).unwrap();
        let z = g.complex(&cat, -1, len, 2).unwrap();
        let f = g.closed_morphism(&x, &y, 0);
        let h = g.closed_morphism(&y, &z, 0);
        for kind in [Trunc::Leq(m), Trunc::Geq(m)] {
            let lhs = truncate_morphism(&tw_compose(&h, &f).unwrap(), kind);
            let rhs = tw_compose(&truncate_morphism(&h, kind), &truncate_morphism(&f, kind)).unwrap();
            prop_assert_eq!(lhs, rhs);
            let one = truncate_morphism(&TwMorphism::identity(&x), kind);
            prop_assert_eq!(one.clone(), TwMorphism::identity(one.src()));
            prop_assert!(tw_diff(&truncate_morphism(&f, kind)).is_zero());
        }
    }
}
