use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::gen::Gen;
use crate::samples::{acyclic_pair, dual_numbers, two_term_end};
use crate::tstruct::{proj_category, truncated_polynomial, upper_triangular_a2};

fn fields() -> [Field; 2] {
    [Field::Rational, Field::Prime(101)]
}

#[test]
fn num_reads_both_spellings() {
    let q = Field::Rational;
    assert_eq!(Num::Text("-3/6".into()).parse(q).unwrap(), q.parse_scalar("-1/2").unwrap());
    assert_eq!(Num::Int(7).parse(q).unwrap(), q.from_i64(7));
    let p = Field::Prime(5);
    assert_eq!(Num::Int(-1).parse(p).unwrap(), p.from_i64(4));
    assert_eq!(Num::Text("12".into()).parse(p).unwrap(), p.from_i64(2));
    assert_eq!(serde_json::to_string(&Num::of(&q.parse_scalar("2/4").unwrap())).unwrap(), "\"1/2\"");
    assert_eq!(serde_json::to_string(&Num::of(&p.from_i64(9))).unwrap(), "4");
}

#[test]
fn dgcat_round_trip() {
    for f in fields() {
        for cat in [two_term_end(f), dual_numbers(f), acyclic_pair(f)] {
            let v = dgcat_to_json(&cat);
            let text = to_canonical_string(&v).unwrap();
            let back = dgcat_from_json(&parse_json(&text).unwrap(), None).unwrap();
            assert_eq!(dgcat_to_json(&back), v);
            assert_eq!(to_canonical_string(&dgcat_to_json(&back)).unwrap(), text);
            assert_eq!(back.names(), cat.names());
            assert_eq!(back.comp_tensors(), cat.comp_tensors());
            assert_eq!(back.units(), cat.units());
        }
    }
}

#[test]
fn dgcat_field_must_agree() {
    let v = dgcat_to_json(&two_term_end(Field::Rational));
    assert!(dgcat_from_json(&v, Some(Field::Rational)).is_ok());
    assert!(matches!(dgcat_from_json(&v, Some(Field::Prime(7))), Err(Error::FieldMismatch(_))));
}

#[test]
fn bad_files_are_rejected() {
    let mut v = dgcat_to_json(&dual_numbers(Field::Rational));
    v["schema"] = "tw-v1".into();
    assert!(matches!(dgcat_from_json(&v, None), Err(Error::Parse(_))));

    let mut v = dgcat_to_json(&dual_numbers(Field::Rational));
    v["compositions"][0]["entries"][0][1] = 5.into();
    assert!(dgcat_from_json(&v, None).is_err());

    let mut v = dgcat_to_json(&dual_numbers(Field::Rational));
    v["homs"][0]["src"] = "B".into();
    assert!(matches!(dgcat_from_json(&v, None), Err(Error::UnknownObject(_))));

    assert!(parse_json("{not json").is_err());
}

#[test]
fn complex_and_morphism_round_trip() {
    for f in fields() {
        let cat: Cat = Arc::new(dual_numbers(f));
        let mut g = Gen::new(7);
        for _ in 0..10 {
            let x = g.complex(&cat, -1, 1, 2).unwrap();
            let y = g.complex(&cat, -1, 1, 2).unwrap();
            let v = complex_to_json(&x, "cat.json");
            assert_eq!(tw_dgcat_ref(&v).unwrap(), "cat.json");
            let text = to_canonical_string(&v).unwrap();
            assert_eq!(tw_from_json(&parse_json(&text).unwrap(), &cat).unwrap(), TwItem::Complex(x.clone()));

            let m = g.morphism(&x, &y, 0);
            let v = morphism_to_json(&m, "cat.json");
            assert_eq!(tw_from_json(&v, &cat).unwrap(), TwItem::Morphism(m));
        }
    }
}

#[test]
fn twist_coordinates_are_counted() {
    let cat: Cat = Arc::new(dual_numbers(Field::Rational));
    let x = Gen::new(3).complex(&cat, 0, 1, 1).unwrap();
    let mut v = complex_to_json(&x, "c");
    v["twist"][0]["coords"].as_array_mut().unwrap().push(Num::Int(0).into_value());
    assert!(matches!(tw_from_json(&v, &cat), Err(Error::Parse(_))));
}

impl Num {
    fn into_value(self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

#[test]
fn algebra_and_module_round_trip() {
    for f in fields() {
        for alg in [upper_triangular_a2(f), truncated_polynomial(f)] {
            let gens = vec![("P".to_string(), alg.idempotents()[0].clone())];
            let v = algebra_to_json(&alg, &gens);
            let (back, g) = algebra_from_json(&v, Some(f)).unwrap();
            assert_eq!(back, alg);
            assert_eq!(g, gens);
            let (_, none) = algebra_from_json(&algebra_to_json(&alg, &[]), None).unwrap();
            assert!(none.is_empty());

            let pc = proj_category(&alg);
            let objs: Vec<_> = pc.cat().objects().collect();
            let m = pc.module_of(&objs);
            let mv = module_to_json(&m, &alg);
            assert_eq!(module_from_json(&mv, &alg).unwrap(), m);
        }
    }
}

#[test]
fn module_action_must_be_complete() {
    let alg = upper_triangular_a2(Field::Rational);
    let pc = proj_category(&alg);
    let m = pc.module_of(&[0]);
    let mut v = module_to_json(&m, &alg);
    v["action"].as_array_mut().unwrap().pop();
    assert!(module_from_json(&v, &alg).is_err());
}

#[test]
fn report_text_and_json() {
    let mut r = Report::new("validate", Field::Prime(5));
    r.check("mc", "(0,1)", vec![]);
    r.put("size", 3);
    assert!(r.passed);
    r.check("mc", "(0,2)", vec!["1".into()]);
    assert!(!r.passed);
    let text = r.to_json_string();
    assert_eq!(Report::from_json(&parse_json(&text).unwrap()).unwrap(), r);
    let keys: Vec<_> = parse_json(&text).unwrap().as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(
        r.to_text(),
        "validate: FAILED over Fp:5\n  ok    mc at (0,1)\n  FAIL  mc at (0,2): [1]\n  size = 3\n"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_complex_round_trip(seed in any::<u64>(), prime in any::<bool>()) {
        let f = if prime { Field::Prime(101) } else { Field::Rational };
        let cat: Cat = Arc::new(dual_numbers(f));
        let x = Gen::new(seed).complex(&cat, -2, 1, 2).unwrap();
        let text = to_canonical_string(&complex_to_json(&x, "d")).unwrap();
        let back = tw_from_json(&parse_json(&text).unwrap(), &cat).unwrap();
        prop_assert_eq!(back, TwItem::Complex(x));
    }
}
