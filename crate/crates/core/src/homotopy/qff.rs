use std::collections::BTreeMap;

use super::chain::{ChainMap, FinComplex};
use crate::dgcore::{Block, DgCat, DgFunctor, ObjId, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, vector, Matrix, Scalar};
use crate::twisted::{map_block, map_functor, map_functor_mor, tw_diff, TwMorphism, TwistedComplex};

/// The hom complex `cat(a, b)` over the given degree range.
pub fn hom_complex(cat: &DgCat, a: ObjId, b: ObjId, lo: i64, hi: i64) -> FinComplex {
    let dims = (lo..=hi).map(|n| cat.dim(a, b, n)).collect();
    let d = (lo..hi).map(|n| cat.diff_matrix(a, b, n)).collect();
    FinComplex {
        field: cat.field(),
        lo,
        dims,
        d,
    }
}

fn degree_span(cat: &DgCat) -> (i64, i64) {
    let degs: Vec<i64> = cat.homs().values().flat_map(|h| h.degrees()).collect();
    (
        degs.iter().copied().min().unwrap_or(0),
        degs.iter().copied().max().unwrap_or(0),
    )
}

/// Checks that `u` induces isomorphisms on the cohomology of every hom
/// complex; one violation per failing `(a, b, n)`.
pub fn check_quasi_fully_faithful(u: &DgFunctor) -> Result<ValidationReport> {
    let (s, t) = (&u.source, &u.target);
    let (lo_s, hi_s) = degree_span(s);
    let (lo_t, hi_t) = degree_span(t);
    let (lo, hi) = (lo_s.min(lo_t) - 1, hi_s.max(hi_t) + 1);
    let mut rep = ValidationReport::new();
    for a in s.objects() {
        for b in s.objects() {
            let src = hom_complex(s, a, b, lo, hi);
            let tgt = hom_complex(t, u.on_object(a), u.on_object(b), lo, hi);
            let maps: BTreeMap<i64, Matrix> = (lo..=hi)
                .map(|n| {
                    let m = u
                        .maps
                        .get(&(a, b, n))
                        .cloned()
                        .unwrap_or_else(|| Matrix::zeros(s.field(), tgt.dim(n), src.dim(n)));
                    (n, m)
                })
                .collect();
            let f = ChainMap::new(src, tgt, maps)?;
            for n in lo + 1..hi {
                if !f.is_quasi_iso_at(n)? {
                    rep.check(
                        "quasi-fully-faithful",
                        || format!("({},{},{n})", s.name(a), s.name(b)),
                        &[s.field().one()],
                    );
                }
            }
        }
    }
    Ok(rep)
}

fn block_diff_matrix(cat: &DgCat, src: &[ObjId], tgt: &[ObjId], deg: i64) -> Matrix {
    let field = cat.field();
    let n = Block::space_dim(cat, src, tgt, deg);
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|k| {
            Block::from_coords(cat, src, tgt, deg, &vector::unit(field, n, k))
                .diff(cat)
                .coords()
        })
        .collect();
    Matrix::from_columns(field, Block::space_dim(cat, src, tgt, deg + 1), &cols)
}

fn block_functor_matrix(u: &DgFunctor, src: &[ObjId], tgt: &[ObjId], deg: i64) -> Matrix {
    let field = u.source.field();
    let n = Block::space_dim(&u.source, src, tgt, deg);
    let usrc: Vec<ObjId> = src.iter().map(|&a| u.on_object(a)).collect();
    let utgt: Vec<ObjId> = tgt.iter().map(|&a| u.on_object(a)).collect();
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|k| map_block(u, &Block::from_coords(&u.source, src, tgt, deg, &vector::unit(field, n, k))).coords())
        .collect();
    Matrix::from_columns(field, Block::space_dim(&u.target, &usrc, &utgt, deg), &cols)
}

#[derive(Clone, Debug)]
pub struct QffLift {
    /// Closed degree 0, `A -> B`.
    pub f: TwMorphism,
    /// Degree -1, `u(A) -> u(B)`, with `g - dα = u(f)`.
    pub alpha: TwMorphism,
}

/// Lifts a closed degree-0 `g: u(A) -> u(B)` along a quasi-fully-faithful
/// `u`, component by component along the anti-diagonals `j - i = n`. Each
/// step is one solve for `φ` with `(-1)^j dφ + Σ(b f - f a) = 0` and one
/// joint solve for a cocycle `x` and `α_i^j` with
/// `u(φ - x) = g_i^j - ((-1)^j dα_i^j + Σ(u(b) α + α u(a)))`; then
/// `f_i^j = φ - x`.
pub fn qff_lift(u: &DgFunctor, a: &TwistedComplex, b: &TwistedComplex, g: &TwMorphism) -> Result<QffLift> {
    let ua = map_functor(u, a)?;
    let ub = map_functor(u, b)?;
    if *g.src() != ua || *g.tgt() != ub || g.deg() != 0 {
        return Err(Error::contract("g must be a degree-0 map u(A) -> u(B)"));
    }
    if !tw_diff(g).is_zero() {
        return Err(Error::contract("g is not closed"));
    }
    let (sa, tb) = (&u.source, &u.target);
    let field = sa.field();
    let mut f: BTreeMap<(i64, i64), Block> = BTreeMap::new();
    let mut al: BTreeMap<(i64, i64), Block> = BTreeMap::new();
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let known = |m: &BTreeMap<(i64, i64), Block>, i: i64, j: i64| m.get(&(i, j)).cloned();
    for n in 0..=(hi - lo).max(0) {
        for i in lo..=hi - n {
            let j = i + n;
            let (ai, bj) = (a.comp(i), b.comp(j));
            if ai.is_empty() || bj.is_empty() {
                continue;
            }
            let (uai, ubj) = (ua.comp(i), ub.comp(j));
            // Σ_k b_k^j f_i^k - f_k^j a_i^k over already known components.
            let mut s = Block::zero(sa, ai, bj, -n + 1);
            let mut t = Block::zero(tb, uai, ubj, -n);
            let one = field.one();
            let minus = -field.one();
            for k in i..j {
                if let (Some(bb), Some(ff)) = (b.twist(k, j), known(&f, i, k)) {
                    s.add_composite(sa, &one, bb, &ff);
                }
                if let (Some(bb), Some(aa)) = (ub.twist(k, j), known(&al, i, k)) {
                    t.add_composite(tb, &one, bb, &aa);
                }
            }
            for k in i + 1..=j {
                if let (Some(ff), Some(aa)) = (known(&f, k, j), a.twist(i, k)) {
                    s.add_composite(sa, &minus, &ff, aa);
                }
                if let (Some(aa), Some(xx)) = (known(&al, k, j), ua.twist(i, k)) {
                    t.add_composite(tb, &one, &aa, xx);
                }
            }
            let sign = field.sign(j);
            let d_a = block_diff_matrix(sa, ai, bj, -n);
            let rhs = vector::scale(&s.coords(), &-sign.clone());
            let phi = solve_linear(&d_a, &rhs)?.ok_or_else(|| {
                Error::contract(format!("quasi-full-faithfulness fails at (i,n)=({i},{n}): no φ"))
            })?;
            let kz = d_a.kernel();
            let um = block_functor_matrix(u, ai, bj, -n);
            let d_b = block_diff_matrix(tb, uai, ubj, -n - 1);
            let sys = um.mul(&kz)?.hstack(&d_b.scale(&-sign))?;
            let gij = g.component_or_zero(i, j).coords();
            let mut rhs2 = um.mul_vec(&phi)?;
            vector::sub_assign(&mut rhs2, &gij);
            vector::add_assign(&mut rhs2, &t.coords());
            let sol = solve_linear(&sys, &rhs2)?.ok_or_else(|| {
                Error::contract(format!("quasi-full-faithfulness fails at (i,n)=({i},{n}): no α"))
            })?;
            let (c, alpha) = sol.split_at(kz.cols());
            let x = kz.mul_vec(c)?;
            let fij = vector::sub(&phi, &x);
            f.insert((i, j), Block::from_coords(sa, ai, bj, -n, &fij));
            al.insert((i, j), Block::from_coords(tb, uai, ubj, -n - 1, alpha));
        }
    }
    let f = TwMorphism::new(a, b, 0, f)?;
    let alpha = TwMorphism::new(&ua, &ub, -1, al)?;
    if !tw_diff(&f).is_zero() {
        return Err(Error::Internal("lifted f is not closed".into()));
    }
    if g.sub(&tw_diff(&alpha))? != map_functor_mor(u, &f)? {
        return Err(Error::Internal("g - dα differs from u(f)".into()));
    }
    Ok(QffLift { f, alpha })
}
