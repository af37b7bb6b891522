use std::collections::BTreeMap;

use super::{Cat, ObjId, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{vector, Matrix, Scalar};

/// Dg-functor data between two presentations: an object map and, for each
/// source hom space `hom^n(a,b)`, a matrix into `hom^n(F a, F b)`.
/// Missing matrices are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgFunctor {
    pub source: Cat,
    pub target: Cat,
    pub obj: Vec<ObjId>,
    pub maps: BTreeMap<(ObjId, ObjId, i64), Matrix>,
}

impl DgFunctor {
    pub fn identity(cat: &Cat) -> DgFunctor {
        let mut maps = BTreeMap::new();
        for (&(a, b), h) in cat.homs() {
            for n in h.degrees() {
                maps.insert((a, b, n), Matrix::identity(cat.field(), h.dim(n)));
            }
        }
        DgFunctor {
            source: cat.clone(),
            target: cat.clone(),
            obj: cat.objects().collect(),
            maps,
        }
    }

    /// Builds the data and checks shapes; the functor laws are checked by
    /// [`DgFunctor::validate`].
    pub fn new(source: Cat, target: Cat, obj: Vec<ObjId>, maps: BTreeMap<(ObjId, ObjId, i64), Matrix>) -> Result<DgFunctor> {
        if obj.len() != source.num_objects() {
            return Err(Error::Structural("object map has the wrong length".into()));
        }
        for &o in &obj {
            target.check_obj(o)?;
        }
        for (&(a, b, n), m) in &maps {
            source.check_obj(a)?;
            source.check_obj(b)?;
            let (r, c) = (target.dim(obj[a], obj[b], n), source.dim(a, b, n));
            if m.rows() != r || m.cols() != c {
                return Err(Error::Structural(format!(
                    "functor matrix on hom^{n}({},{}) should be {r}x{c}",
                    source.name(a),
                    source.name(b)
                )));
            }
        }
        Ok(DgFunctor {
            source,
            target,
            obj,
            maps,
        })
    }

    pub fn on_object(&self, a: ObjId) -> ObjId {
        self.obj[a]
    }

    pub fn apply(&self, a: ObjId, b: ObjId, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        match self.maps.get(&(a, b, n)) {
            Some(m) => m.mul_vec(v).expect("element of the right dimension"),
            None => self
                .target
                .field()
                .zeros(self.target.dim(self.obj[a], self.obj[b], n)),
        }
    }

    /// `v ∘ self`
    pub fn then(&self, v: &DgFunctor) -> Result<DgFunctor> {
        if self.target != v.source {
            return Err(Error::contract("functors are not composable"));
        }
        let obj: Vec<ObjId> = self.obj.iter().map(|&o| v.obj[o]).collect();
        let mut maps = BTreeMap::new();
        for (&(a, b, n), m) in &self.maps {
            if let Some(m2) = v.maps.get(&(self.obj[a], self.obj[b], n)) {
                maps.insert((a, b, n), m2.mul(m)?);
            }
        }
        DgFunctor::new(self.source.clone(), v.target.clone(), obj, maps)
    }

    /// Checks `F d = d F`, `F(g f) = F(g) F(f)` and `F(1) = 1` on bases.
    pub fn validate(&self) -> Result<ValidationReport> {
        let (s, t) = (&*self.source, &*self.target);
        let mut rep = ValidationReport::new();
        let f = s.field();
        for a in s.objects() {
            let u = self.apply(a, a, 0, s.unit(a));
            rep.check(
                "functor-unit",
                || format!("F(1_{})", s.name(a)),
                &vector::sub(&u, t.unit(self.obj[a])),
            );
            for b in s.objects() {
                for n in s.degrees(a, b) {
                    for k in 0..s.dim(a, b, n) {
                        let e = vector::unit(f, s.dim(a, b, n), k);
                        let lhs = self.apply(a, b, n + 1, &s.diff(a, b, n, &e));
                        let rhs = t.diff(self.obj[a], self.obj[b], n, &self.apply(a, b, n, &e));
                        rep.check(
                            "functor-diff",
                            || format!("hom^{n}({},{})[{k}]", s.name(a), s.name(b)),
                            &vector::sub(&lhs, &rhs),
                        );
                    }
                }
            }
        }
        for a in s.objects() {
            for b in s.objects() {
                for p in s.degrees(a, b) {
                    for c in s.objects() {
                        for q in s.degrees(b, c) {
                            for gi in 0..s.dim(b, c, q) {
                                let g = vector::unit(f, s.dim(b, c, q), gi);
                                let fg = self.apply(b, c, q, &g);
                                for fi in 0..s.dim(a, b, p) {
                                    let x = vector::unit(f, s.dim(a, b, p), fi);
                                    let lhs = self.apply(a, c, p + q, &s.compose(a, b, c, q, &g, p, &x));
                                    let fx = self.apply(a, b, p, &x);
                                    let (fa, fb, fc) = (self.obj[a], self.obj[b], self.obj[c]);
                                    let rhs = t.compose(fa, fb, fc, q, &fg, p, &fx);
                                    rep.check(
                                        "functor-comp",
                                        || {
                                            format!(
                                                "{}->{}->{} degrees ({p},{q}) basis ({fi},{gi})",
                                                s.name(a),
                                                s.name(b),
                                                s.name(c)
                                            )
                                        },
                                        &vector::sub(&lhs, &rhs),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(rep)
    }
}
