use std::sync::Arc;

use super::*;
use crate::exactlin::{vector, Field, Matrix};
use crate::samples::two_term_end;

fn q() -> Field {
    Field::Rational
}

#[test]
fn field_category_passes() {
    let k = DgCat::field_category(q());
    assert!(validate_dgcat(&k).unwrap().passed);
}

#[test]
fn zero_unit_is_reported() {
    let mut k = DgCat::field_category(q());
    k.set_unit(0, vec![q().zero()]).unwrap();
    let rep = validate_dgcat(&k).unwrap();
    assert!(!rep.passed);
    assert!(rep.violations.iter().any(|v| v.axiom == "unit-left"));
}

#[test]
fn two_term_end_passes() {
    for f in [q(), Field::Prime(5)] {
        let rep = validate_dgcat(&two_term_end(f)).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
    }
}

#[test]
fn bad_tensor_shape_is_structural() {
    let mut k = DgCat::field_category(q());
    assert!(matches!(
        k.set_comp(0, 0, 0, 0, 0, Matrix::zeros(q(), 2, 1)),
        Err(Error::Structural(_))
    ));
}

#[test]
fn perturbed_leibniz_is_reported() {
    let mut c = two_term_end(q());
    c.set_diff(0, 0, -1, Matrix::from_i64(q(), &[&[1], &[0]])).unwrap();
    let rep = validate_dgcat(&c).unwrap();
    assert!(!rep.passed);
}

#[test]
fn truncation_of_two_term_end() {
    let c: Cat = Arc::new(two_term_end(q()));
    let (t, incl) = truncate_leq0(&c).unwrap();
    assert_eq!(t.dim(0, 0, 0), 1);
    assert_eq!(t.dim(0, 0, -1), 1);
    assert_eq!(t.dim(0, 0, 1), 0);
    assert!(validate_dgcat(&t).unwrap().passed);
    assert!(incl.validate().unwrap().passed);
    // The surviving degree-0 class is the diagonal (a, a).
    let z = incl.maps[&(0, 0, 0)].column(0);
    assert_eq!(z[0], z[1]);
}

#[test]
fn truncation_of_nonpositive_is_identity() {
    let k: Cat = Arc::new(DgCat::field_category(q()));
    let (t, _) = truncate_leq0(&k).unwrap();
    assert_eq!(*t, *k);
}

#[test]
fn truncation_kills_identity_differential() {
    let mut c = DgCat::new(q());
    let a = c.add_object("A");
    let b = c.add_object("B");
    c.set_dim(a, b, 0, 1).unwrap();
    c.set_dim(a, b, 1, 1).unwrap();
    c.set_diff(a, b, 0, Matrix::from_i64(q(), &[&[1]])).unwrap();
    let c: Cat = Arc::new(c);
    let (t, _) = truncate_leq0(&c).unwrap();
    assert_eq!(t.dim(a, b, 0), 0);
}

#[test]
fn truncation_preserves_low_cohomology() {
    let c: Cat = Arc::new(two_term_end(q()));
    let (t, _) = truncate_leq0(&c).unwrap();
    for n in -2..=2 {
        let before = c.hom_cohomology(0, 0, n).unwrap().dim;
        let after = t.hom_cohomology(0, 0, n).unwrap().dim;
        if n <= 0 {
            assert_eq!(before, after, "degree {n}");
        } else {
            assert_eq!(after, 0);
        }
    }
}

#[test]
fn adjoin_zero_cases() {
    let k = DgCat::field_category(q());
    let z = adjoin_zero(&k);
    assert_eq!(z.num_objects(), 2);
    let zo = z.zero_object().unwrap();
    for n in -1..=1 {
        assert_eq!(z.dim(0, zo, n), 0);
        assert_eq!(z.dim(zo, 0, n), 0);
        assert_eq!(z.dim(zo, zo, n), 0);
    }
    assert!(validate_dgcat(&z).unwrap().passed);
    assert_eq!(adjoin_zero(&z).num_objects(), 2);
    let e = adjoin_zero(&DgCat::new(q()));
    assert_eq!(e.num_objects(), 1);
}

#[test]
fn adjoin_zero_commutes_with_truncation() {
    let c: Cat = Arc::new(two_term_end(q()));
    let (t, _) = truncate_leq0(&c).unwrap();
    let one = adjoin_zero(&t);
    let (two, _) = truncate_leq0(&Arc::new(adjoin_zero(&c))).unwrap();
    assert_eq!(one, *two);
}

#[test]
fn additive_closure_dims() {
    let k: Cat = Arc::new(DgCat::field_category(q()));
    let cl = additive_closure(&k, &[vec![0], vec![0, 0]]).unwrap();
    let single = cl.object_of(&[0]).unwrap();
    let pair = cl.object_of(&[0, 0]).unwrap();
    assert_eq!(cl.cat.dim(single, single, 0), 1);
    assert_eq!(cl.cat.dim(pair, pair, 0), 4);
    assert_eq!(cl.cat.dim(pair, single, 0), 2);
    assert!(validate_dgcat(&cl.cat).unwrap().passed);
    let emb = cl.embedding(&k).unwrap();
    assert!(emb.validate().unwrap().passed);
}

#[test]
fn additive_closure_of_dg_algebra_is_valid() {
    let c: Cat = Arc::new(two_term_end(Field::Prime(7)));
    let cl = additive_closure(&c, &[vec![0], vec![0, 0]]).unwrap();
    let pair = cl.object_of(&[0, 0]).unwrap();
    assert_eq!(cl.cat.dim(pair, pair, 0), 8);
    assert!(validate_dgcat(&cl.cat).unwrap().passed);
}

#[test]
fn biproduct_identities() {
    let c: Cat = Arc::new(two_term_end(q()));
    let parts = vec![vec![0], vec![0, 0]];
    let all = parts.concat();
    let mut sum = Block::zero(&c, &all, &all, 0);
    for k in 0..parts.len() {
        let i = Block::inclusion(&c, &parts, k);
        let p = Block::projection(&c, &parts, k);
        assert_eq!(Block::compose(&c, &p, &i), Block::identity(&c, &parts[k]));
        for l in 0..parts.len() {
            if l != k {
                let pl = Block::projection(&c, &parts, l);
                assert!(Block::compose(&c, &pl, &i).is_zero());
            }
        }
        sum.add_assign(&Block::compose(&c, &i, &p));
    }
    assert_eq!(sum, Block::identity(&c, &all));
}

#[test]
fn opposite_is_involution_and_valid() {
    let c = two_term_end(q());
    let op = opposite_cat(&c);
    assert!(validate_dgcat(&op).unwrap().passed);
    assert_eq!(opposite_cat(&op), c);
}

#[test]
fn opposite_of_degree_zero_reverses_without_signs() {
    let mut c = DgCat::new(q());
    let a = c.add_object("A");
    let b = c.add_object("B");
    c.set_dim(a, a, 0, 1).unwrap();
    c.set_dim(b, b, 0, 1).unwrap();
    c.set_dim(a, b, 0, 1).unwrap();
    let one = Matrix::from_i64(q(), &[&[1]]);
    for (x, y, z) in [(a, a, a), (b, b, b), (a, a, b), (a, b, b)] {
        c.set_comp(x, y, z, 0, 0, one.clone()).unwrap();
    }
    c.set_unit(a, vec![q().one()]).unwrap();
    c.set_unit(b, vec![q().one()]).unwrap();
    assert!(validate_dgcat(&c).unwrap().passed);
    let op = opposite_cat(&c);
    assert_eq!(op.dim(b, a, 0), 1);
    assert_eq!(op.comp_matrix((b, a, a, 0, 0)), Some(&one));
    assert!(validate_dgcat(&op).unwrap().passed);
}

#[test]
fn opposite_odd_composition_changes_sign() {
    // h c = a, so in the opposite c ∘ h picks up (-1)^{(-1)(1)} = -1.
    let c = two_term_end(q());
    let op = opposite_cat(&c);
    let h = vec![q().one()];
    let cc = vec![q().one()];
    let orig = c.compose(0, 0, 0, -1, &h, 1, &cc);
    let opp = op.compose(0, 0, 0, 1, &cc, -1, &h);
    assert_eq!(opp, vector::neg(&orig));
}

#[test]
fn hom_cohomology_examples() {
    let k = DgCat::field_category(q());
    assert_eq!(k.hom_cohomology(0, 0, 0).unwrap().dim, 1);
    assert_eq!(k.hom_cohomology(0, 0, 1).unwrap().dim, 0);
    assert_eq!(k.hom_cohomology(0, 0, -3).unwrap().dim, 0);
    let e = two_term_end(q());
    for n in -1..=1 {
        assert_eq!(e.hom_cohomology(0, 0, n).unwrap().dim, 0);
    }
    assert!(matches!(k.hom_cohomology(0, 3, 0), Err(Error::UnknownObject(_))));
}

#[test]
fn functor_composition_with_identity() {
    let c: Cat = Arc::new(two_term_end(q()));
    let id = DgFunctor::identity(&c);
    assert!(id.validate().unwrap().passed);
    assert_eq!(id.then(&id).unwrap(), id);
}

#[test]
fn functor_killing_a_basis_vector_is_rejected() {
    let c: Cat = Arc::new(two_term_end(q()));
    let mut f = DgFunctor::identity(&c);
    f.maps.insert((0, 0, -1), Matrix::zeros(q(), 1, 1));
    assert!(!f.validate().unwrap().passed);
}

#[test]
fn nonpositive_samples_pass() {
    use crate::samples::{acyclic_pair, dual_numbers};
    for f in [q(), Field::Prime(3)] {
        for c in [dual_numbers(f), acyclic_pair(f)] {
            let rep = validate_dgcat(&c).unwrap();
            assert!(rep.passed, "{:?}", rep.violations);
        }
        let c = acyclic_pair(f);
        assert_eq!(c.hom_cohomology(0, 0, 0).unwrap().dim, 1);
        assert_eq!(c.hom_cohomology(0, 0, -1).unwrap().dim, 0);
    }
}
