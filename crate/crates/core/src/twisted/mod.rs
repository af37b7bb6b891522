//! One-sided twisted complexes over a presented dg-category.
//!
//! Components are tuples of objects of the presentation, read as formal
//! direct sums, so the additive closure with its zero object is available
//! without being materialized. The presentation must be strictly
//! nonpositive.

mod cone;
mod morphism;
mod opposite;
mod trunc;

use std::collections::BTreeMap;

use crate::dgcore::{Block, Cat, ObjId, ValidationReport};
use crate::error::{Error, Result};

pub use cone::{tw_cone, tw_sum, Pretriangle, SumData};
pub use morphism::{shift_hom_from, shift_hom_to, tw_compose, tw_diff, tw_shift_mor, TwMorphism};
pub(crate) use opposite::map_block;
pub use opposite::{map_functor, map_functor_mor, opposite_tw, opposite_tw_mor};
pub use trunc::{
    brutal_truncate, canonical_map, connecting_homotopy, extend_below, truncate_morphism, weight_triangle,
    Trunc, Truncation, WeightTriangle,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    cat: Cat,
    lo: i64,
    comps: Vec<Vec<ObjId>>,
    /// `x_i^j` for `i < j`; zero blocks are not stored.
    twist: BTreeMap<(i64, i64), Block>,
}

impl TwistedComplex {
    /// Builds a complex from components `comps[k]` in degree `lo + k` and the
    /// twisted differential. Shapes are checked; the Maurer–Cartan equation
    /// is checked by [`validate_twisted`].
    pub fn new(cat: Cat, lo: i64, comps: Vec<Vec<ObjId>>, twist: BTreeMap<(i64, i64), Block>) -> Result<TwistedComplex> {
        if !cat.is_nonpositive() {
            return Err(Error::contract("twisted complexes need a strictly nonpositive presentation"));
        }
        for c in &comps {
            for &a in c {
                cat.check_obj(a)?;
            }
        }
        let mut x = TwistedComplex {
            cat,
            lo,
            comps,
            twist: BTreeMap::new(),
        };
        for ((i, j), b) in twist {
            if j <= i {
                return Err(Error::shape(format!("twist entry ({i},{j}) must have i < j")));
            }
            if b.src != x.comp(i) || b.tgt != x.comp(j) || b.deg != i - j + 1 {
                return Err(Error::shape(format!(
                    "twist entry ({i},{j}) has the wrong shape or degree (expected degree {})",
                    i - j + 1
                )));
            }
            if !b.is_zero() {
                x.twist.insert((i, j), b);
            }
        }
        x.normalize();
        Ok(x)
    }

    pub(crate) fn from_parts(cat: Cat, lo: i64, comps: Vec<Vec<ObjId>>, twist: BTreeMap<(i64, i64), Block>) -> TwistedComplex {
        let mut x = TwistedComplex { cat, lo, comps, twist };
        x.twist.retain(|_, b| !b.is_zero());
        x.normalize();
        x
    }

    /// Trims empty components at both ends.
    fn normalize(&mut self) {
        while self.comps.last().is_some_and(Vec::is_empty) {
            self.comps.pop();
        }
        let lead = self.comps.iter().take_while(|c| c.is_empty()).count();
        self.comps.drain(..lead);
        self.lo += lead as i64;
        if self.comps.is_empty() {
            self.lo = 0;
        }
    }

    pub fn zero(cat: Cat) -> TwistedComplex {
        TwistedComplex {
            cat,
            lo: 0,
            comps: Vec::new(),
            twist: BTreeMap::new(),
        }
    }

    /// A tuple of objects placed in degree `n`.
    pub fn single(cat: Cat, objs: Vec<ObjId>, n: i64) -> Result<TwistedComplex> {
        TwistedComplex::new(cat, n, vec![objs], BTreeMap::new())
    }

    pub fn cat(&self) -> &Cat {
        &self.cat
    }

    pub fn is_zero_object(&self) -> bool {
        self.comps.is_empty()
    }

    /// Lowest nonzero degree (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest nonzero degree (-1 for the zero complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn support(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi()
    }

    pub fn comp(&self, i: i64) -> &[ObjId] {
        if i < self.lo {
            return &[];
        }
        self.comps.get((i - self.lo) as usize).map_or(&[], Vec::as_slice)
    }

    pub fn twist(&self, i: i64, j: i64) -> Option<&Block> {
        self.twist.get(&(i, j))
    }

    pub fn twist_or_zero(&self, i: i64, j: i64) -> Block {
        match self.twist.get(&(i, j)) {
            Some(b) => b.clone(),
            None => Block::zero(&self.cat, self.comp(i), self.comp(j), i - j + 1),
        }
    }

    pub fn twists(&self) -> &BTreeMap<(i64, i64), Block> {
        &self.twist
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &[ObjId])> {
        self.comps
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.lo + k as i64, c.as_slice()))
    }

    /// Replaces one twist entry (used to build perturbed inputs).
    pub fn with_twist(&self, i: i64, j: i64, b: Block) -> Result<TwistedComplex> {
        let mut t = self.twist.clone();
        t.insert((i, j), b);
        TwistedComplex::new(self.cat.clone(), self.lo, self.comps.clone(), t)
    }

    /// Total number of component objects, a rough size measure.
    pub fn size(&self) -> usize {
        self.comps.iter().map(Vec::len).sum()
    }
}

/// The Maurer–Cartan residual `(-1)^j d x_i^j + Σ_k x_k^j x_i^k` at `(i, j)`.
pub fn mc_residual(x: &TwistedComplex, i: i64, j: i64) -> Block {
    let cat = &x.cat;
    let f = cat.field();
    let mut res = Block::zero(cat, x.comp(i), x.comp(j), i - j + 2);
    if let Some(b) = x.twist(i, j) {
        res.axpy(&f.sign(j), &b.diff(cat));
    }
    for k in i + 1..j {
        if let (Some(a), Some(b)) = (x.twist(k, j), x.twist(i, k)) {
            res.add_composite(cat, &f.one(), a, b);
        }
    }
    res
}

/// Computes every Maurer–Cartan residual and reports the nonzero ones.
pub fn validate_twisted(x: &TwistedComplex) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for i in x.support() {
        for j in i + 1..=x.hi() {
            let r = mc_residual(x, i, j);
            rep.check("maurer-cartan", || format!("({i},{j})"), &r.coords());
        }
    }
    rep
}

/// `X[n]`: components `X^{i+n}` and twist `(-1)^n x_{i+n}^{j+n}`.
pub fn tw_shift(x: &TwistedComplex, n: i64) -> TwistedComplex {
    let s = x.cat.field().sign(n);
    let twist = x
        .twist
        .iter()
        .map(|(&(i, j), b)| ((i - n, j - n), b.scale(&s)))
        .collect();
    TwistedComplex {
        cat: x.cat.clone(),
        lo: if x.comps.is_empty() { 0 } else { x.lo - n },
        comps: x.comps.clone(),
        twist,
    }
}

pub(crate) fn same_cat(a: &Cat, b: &Cat) -> Result<()> {
    if Cat::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::contract("complexes live over different presentations"))
    }
}

#[cfg(test)]
mod tests;
