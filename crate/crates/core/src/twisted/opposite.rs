use std::collections::BTreeMap;

use super::{same_cat, TwMorphism, TwistedComplex};
use crate::dgcore::{opposite_cat, Block, Cat, DgFunctor};
use crate::error::{Error, Result};

fn transpose(b: &Block) -> Block {
    let mut entries = Vec::with_capacity(b.entries.len());
    for s in 0..b.src.len() {
        for t in 0..b.tgt.len() {
            entries.push(b.entry(t, s).to_vec());
        }
    }
    Block {
        deg: b.deg,
        src: b.tgt.clone(),
        tgt: b.src.clone(),
        entries,
    }
}

fn check_opposite(x: &Cat, op: &Cat) -> Result<()> {
    if opposite_cat(x) != **op {
        return Err(Error::contract("presentation is not the opposite of the complex's presentation"));
    }
    Ok(())
}

/// Tw(A) ≅ Tw(A^op)^op on objects: `X^op` has `(X^op)^i = X^{-i}` and
/// `(x^op)_i^j = -(-1)^{m(m-1)/2} x_{-j}^{-i}` with `m = j - i`.
pub fn opposite_tw(x: &TwistedComplex, op: &Cat) -> Result<TwistedComplex> {
    check_opposite(x.cat(), op)?;
    let field = op.field();
    let comps = (-x.hi()..=-x.lo()).map(|i| x.comp(-i).to_vec()).collect();
    let twist = x
        .twists()
        .iter()
        .map(|(&(a, b), blk)| {
            let (i, j) = (-b, -a);
            let m = j - i;
            ((i, j), transpose(blk).scale(&-field.sign(m * (m - 1) / 2)))
        })
        .collect();
    let lo = if x.is_zero_object() { 0 } else { -x.hi() };
    Ok(TwistedComplex::from_parts(op.clone(), lo, comps, twist))
}

/// The morphism part: `f: X -> Y` of degree `p` gives `f^op: Y^op -> X^op`
/// with `(f^op)_i^j = (-1)^{m(m+1)/2 + mp} f_{-j}^{-i}`.
pub fn opposite_tw_mor(f: &TwMorphism, op: &Cat) -> Result<TwMorphism> {
    let xo = opposite_tw(f.src(), op)?;
    let yo = opposite_tw(f.tgt(), op)?;
    let field = op.field();
    let p = f.deg();
    let comps = f
        .components()
        .iter()
        .map(|(&(a, b), blk)| {
            let (i, j) = (-b, -a);
            let m = j - i;
            ((i, j), transpose(blk).scale(&field.sign(m * (m + 1) / 2 + m * p)))
        })
        .collect();
    Ok(TwMorphism::from_parts(&yo, &xo, p, comps))
}

pub(crate) fn map_block(u: &DgFunctor, b: &Block) -> Block {
    let src: Vec<_> = b.src.iter().map(|&a| u.on_object(a)).collect();
    let tgt: Vec<_> = b.tgt.iter().map(|&a| u.on_object(a)).collect();
    let mut out = Block::zero(&u.target, &src, &tgt, b.deg);
    for (t, &ct) in b.tgt.iter().enumerate() {
        for (s, &cs) in b.src.iter().enumerate() {
            *out.entry_mut(t, s) = u.apply(cs, ct, b.deg, b.entry(t, s));
        }
    }
    out
}

/// `Tw(u)(X^i, x_i^j) = (u(X^i), u(x_i^j))`.
pub fn map_functor(u: &DgFunctor, x: &TwistedComplex) -> Result<TwistedComplex> {
    same_cat(&u.source, x.cat())?;
    let comps = x
        .components()
        .map(|(_, c)| c.iter().map(|&a| u.on_object(a)).collect())
        .collect();
    let twist = x.twists().iter().map(|(&k, b)| (k, map_block(u, b))).collect();
    TwistedComplex::new(u.target.clone(), x.lo(), comps, twist)
}

pub fn map_functor_mor(u: &DgFunctor, f: &TwMorphism) -> Result<TwMorphism> {
    let src = map_functor(u, f.src())?;
    let tgt = map_functor(u, f.tgt())?;
    let comps: BTreeMap<_, _> = f.components().iter().map(|(&k, b)| (k, map_block(u, b))).collect();
    TwMorphism::new(&src, &tgt, f.deg(), comps)
}
