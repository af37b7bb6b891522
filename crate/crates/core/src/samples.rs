//! Small presentations that show up in examples and tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgcore::{Cat, DgCat, DgFunctor, ObjId};
use crate::error::Result;
use crate::exactlin::{vector, Field, Matrix};

/// The endomorphism dg-algebra of the two-term complex `[k --1--> k]`
/// (degrees 0 and 1) with the usual hom-complex differential
/// `d f = δ f - (-1)^{|f|} f δ`.
///
/// Basis: degree -1 `h: X^1 -> X^0`; degree 0 `a = 1_{X^0}`, `b = 1_{X^1}`;
/// degree 1 `c: X^0 -> X^1`.
pub fn two_term_end(field: Field) -> DgCat {
    let mut c = DgCat::new(field);
    let x = c.add_object("X");
    c.set_dim(x, x, -1, 1).unwrap();
    c.set_dim(x, x, 0, 2).unwrap();
    c.set_dim(x, x, 1, 1).unwrap();
    c.set_diff(x, x, -1, Matrix::from_i64(field, &[&[1], &[1]])).unwrap();
    c.set_diff(x, x, 0, Matrix::from_i64(field, &[&[1, -1]])).unwrap();
    // Columns are g * dim(f) + f.
    // (p,q) = (0,0): a a = a, b b = b.
    c.set_comp(x, x, x, 0, 0, Matrix::from_i64(field, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]))
        .unwrap();
    // f = h (p=-1), g in degree 0: a h = h.
    c.set_comp(x, x, x, -1, 0, Matrix::from_i64(field, &[&[1, 0]])).unwrap();
    // f in degree 0, g = h: h b = h.
    c.set_comp(x, x, x, 0, -1, Matrix::from_i64(field, &[&[0, 1]])).unwrap();
    // f in degree 0, g = c: c a = c.
    c.set_comp(x, x, x, 0, 1, Matrix::from_i64(field, &[&[1, 0]])).unwrap();
    // f = c, g in degree 0: b c = c.
    c.set_comp(x, x, x, 1, 0, Matrix::from_i64(field, &[&[0, 1]])).unwrap();
    // h c = a, c h = b.
    c.set_comp(x, x, x, 1, -1, Matrix::from_i64(field, &[&[1], &[0]])).unwrap();
    c.set_comp(x, x, x, -1, 1, Matrix::from_i64(field, &[&[0], &[1]])).unwrap();
    c.set_unit(x, vec![field.one(), field.one()]).unwrap();
    c
}

/// `k[e]/e^2` with `|e| = -1` and zero differential, on one object `A`.
pub fn dual_numbers(field: Field) -> DgCat {
    let mut c = DgCat::new(field);
    let a = c.add_object("A");
    c.set_dim(a, a, 0, 1).unwrap();
    c.set_dim(a, a, -1, 1).unwrap();
    c.set_comp(a, a, a, 0, 0, Matrix::from_i64(field, &[&[1]])).unwrap();
    c.set_comp(a, a, a, -1, 0, Matrix::from_i64(field, &[&[1]])).unwrap();
    c.set_comp(a, a, a, 0, -1, Matrix::from_i64(field, &[&[1]])).unwrap();
    c.set_unit(a, vec![field.one()]).unwrap();
    c.set_nonpositive(true);
    c
}

/// Basis `1, t` in degree 0 and `e` in degree -1, with `de = t` and all
/// products of `t, e` zero. Quasi-isomorphic to the base field.
pub fn acyclic_pair(field: Field) -> DgCat {
    let mut c = DgCat::new(field);
    let a = c.add_object("A");
    c.set_dim(a, a, 0, 2).unwrap();
    c.set_dim(a, a, -1, 1).unwrap();
    c.set_diff(a, a, -1, Matrix::from_i64(field, &[&[0], &[1]])).unwrap();
    // (g, f) in degree 0: 1·1 = 1, 1·t = t, t·1 = t, t·t = 0.
    c.set_comp(a, a, a, 0, 0, Matrix::from_i64(field, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]))
        .unwrap();
    c.set_comp(a, a, a, -1, 0, Matrix::from_i64(field, &[&[1, 0]])).unwrap();
    c.set_comp(a, a, a, 0, -1, Matrix::from_i64(field, &[&[1, 0]])).unwrap();
    c.set_unit(a, vec![field.one(), field.zero()]).unwrap();
    c.set_nonpositive(true);
    c
}

/// Tensor factor of [`acyclic_extension`]: `1`, `t`, `e`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tag {
    One,
    T,
    E,
}

/// Basis of `hom^n_B(a,b)`: `A^n ⊗ 1`, then `A^n ⊗ t`, then `A^{n+1} ⊗ e`.
fn ext_basis(cat: &DgCat, a: ObjId, b: ObjId, n: i64) -> Vec<(Tag, i64, usize)> {
    let m0 = cat.dim(a, b, n);
    let m1 = cat.dim(a, b, n + 1);
    let mut out: Vec<(Tag, i64, usize)> = (0..m0).map(|k| (Tag::One, n, k)).collect();
    out.extend((0..m0).map(|k| (Tag::T, n, k)));
    out.extend((0..m1).map(|k| (Tag::E, n + 1, k)));
    out
}

fn ext_index(cat: &DgCat, a: ObjId, b: ObjId, n: i64, tag: Tag, k: usize) -> usize {
    let m0 = cat.dim(a, b, n);
    match tag {
        Tag::One => k,
        Tag::T => m0 + k,
        Tag::E => 2 * m0 + k,
    }
}

/// `B = A ⊗ C` where `C` has basis `1, t` in degree 0 and `e` in degree -1,
/// `de = t` and all products of `t, e` zero. `C` is quasi-isomorphic to the
/// field, so `f ↦ f ⊗ 1` is quasi-fully faithful and bijective on objects.
pub fn acyclic_extension(cat: &Cat) -> Result<(Cat, DgFunctor)> {
    let field = cat.field();
    let mut out = DgCat::new(field);
    for a in cat.objects() {
        out.add_object(cat.name(a));
    }
    if let Some(z) = cat.zero_object() {
        out.set_zero_object(z)?;
    }
    out.set_nonpositive(cat.is_nonpositive());
    let mut degs: BTreeMap<(ObjId, ObjId), Vec<i64>> = BTreeMap::new();
    for (&(a, b), h) in cat.homs() {
        let mut d: Vec<i64> = h.degrees().iter().flat_map(|&n| [n, n - 1]).collect();
        d.sort_unstable();
        d.dedup();
        for &n in &d {
            out.set_dim(a, b, n, ext_basis(cat, a, b, n).len())?;
        }
        degs.insert((a, b), d);
    }
    for (&(a, b), ds) in &degs {
        for &n in ds {
            let src = ext_basis(cat, a, b, n);
            let rows = ext_basis(cat, a, b, n + 1).len();
            let mut m = Matrix::zeros(field, rows, src.len());
            for (col, &(tag, p, k)) in src.iter().enumerate() {
                let df = cat.diff(a, b, p, &vector::unit(field, cat.dim(a, b, p), k));
                for (r, x) in df.into_iter().enumerate() {
                    if !x.is_zero() {
                        m.set(ext_index(cat, a, b, n + 1, tag, r), col, x);
                    }
                }
                if tag == Tag::E {
                    m.set(ext_index(cat, a, b, n + 1, Tag::T, k), col, field.sign(p));
                }
            }
            out.set_diff(a, b, n, m)?;
        }
    }
    for (&(a, b), ps) in &degs {
        for c in cat.objects() {
            let Some(qs) = degs.get(&(b, c)) else { continue };
            for &p in ps {
                for &q in qs {
                    let fb = ext_basis(cat, a, b, p);
                    let gb = ext_basis(cat, b, c, q);
                    let rows = ext_basis(cat, a, c, p + q).len();
                    let mut m = Matrix::zeros(field, rows, gb.len() * fb.len());
                    for (gi, &(gt, gp, gk)) in gb.iter().enumerate() {
                        for (fi, &(ft, fp, fk)) in fb.iter().enumerate() {
                            let tag = match (gt, ft) {
                                (Tag::One, x) | (x, Tag::One) => x,
                                _ => continue,
                            };
                            let sign = if gt == Tag::E { field.sign(fp) } else { field.one() };
                            let g = vector::unit(field, cat.dim(b, c, gp), gk);
                            let f = vector::unit(field, cat.dim(a, b, fp), fk);
                            let gf = cat.compose(a, b, c, gp, &g, fp, &f);
                            for (r, x) in gf.into_iter().enumerate() {
                                if !x.is_zero() {
                                    let row = ext_index(cat, a, c, p + q, tag, r);
                                    m.set(row, gi * fb.len() + fi, &sign * &x);
                                }
                            }
                        }
                    }
                    if !m.is_zero() {
                        out.set_comp(a, b, c, p, q, m)?;
                    }
                }
            }
        }
    }
    for a in cat.objects() {
        let mut u = field.zeros(out.dim(a, a, 0));
        for (k, x) in cat.unit(a).iter().enumerate() {
            u[k] = x.clone();
        }
        out.set_unit(a, u)?;
    }
    let out = Arc::new(out);
    let mut maps = BTreeMap::new();
    for (&(a, b), h) in cat.homs() {
        for n in h.degrees() {
            let m0 = cat.dim(a, b, n);
            let mut m = Matrix::zeros(field, out.dim(a, b, n), m0);
            for k in 0..m0 {
                m.set(k, k, field.one());
            }
            maps.insert((a, b, n), m);
        }
    }
    let u = DgFunctor::new(cat.clone(), out.clone(), cat.objects().collect(), maps)?;
    Ok((out, u))
}
