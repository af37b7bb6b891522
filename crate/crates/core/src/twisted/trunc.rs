use std::collections::BTreeMap;

use super::{tw_compose, tw_cone, tw_diff, tw_shift, Pretriangle, TwMorphism, TwistedComplex};
use crate::dgcore::{Block, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trunc {
    /// `σ_{≥n}`
    Geq(i64),
    /// `σ_{≤n}`
    Leq(i64),
    /// `σ_{[n,m]}`
    Window(i64, i64),
}

impl Trunc {
    fn range(self) -> (i64, i64) {
        match self {
            Trunc::Geq(n) => (n, i64::MAX),
            Trunc::Leq(n) => (i64::MIN, n),
            Trunc::Window(n, m) => (n, m),
        }
    }

    fn contains(self, i: i64) -> bool {
        let (a, b) = self.range();
        a <= i && i <= b
    }
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub complex: TwistedComplex,
    /// `j_n: σ_{≥n}X -> X` or `p_n: X -> σ_{≤n}X`; none for windows.
    pub map: Option<TwMorphism>,
}

/// Brutal truncation: components and twist entries outside the range are
/// dropped.
pub fn brutal_truncate(x: &TwistedComplex, kind: Trunc) -> Truncation {
    let (a, b) = kind.range();
    let lo = x.lo().max(a);
    let hi = x.hi().min(b);
    let comps: Vec<Vec<ObjId>> = (lo..=hi).map(|i| x.comp(i).to_vec()).collect();
    let twist: BTreeMap<(i64, i64), Block> = x
        .twists()
        .iter()
        .filter(|((i, j), _)| kind.contains(*i) && kind.contains(*j))
        .map(|(&k, v)| (k, v.clone()))
        .collect();
    let complex = TwistedComplex::from_parts(x.cat().clone(), lo, comps, twist);
    let map = match kind {
        Trunc::Geq(_) => Some(canonical_map(&complex, x)),
        Trunc::Leq(_) => Some(canonical_map(x, &complex)),
        Trunc::Window(..) => None,
    };
    Truncation { complex, map }
}

/// Identity components in every degree where source and target have the
/// same nonzero component. Between brutal truncations of one complex this
/// gives the maps `j_N`, `p_N`, `j_{N,N-1}` and `p_{N,N-1}`.
pub fn canonical_map(src: &TwistedComplex, tgt: &TwistedComplex) -> TwMorphism {
    let mut comps = BTreeMap::new();
    for (i, c) in src.components() {
        if tgt.comp(i) == c {
            comps.insert((i, i), Block::identity(src.cat(), c));
        }
    }
    TwMorphism::from_parts(src, tgt, 0, comps)
}

/// Restriction of `f` to brutal truncations of its source and target.
pub fn truncate_morphism(f: &TwMorphism, kind: Trunc) -> TwMorphism {
    let src = brutal_truncate(f.src(), kind).complex;
    let tgt = brutal_truncate(f.tgt(), kind).complex;
    let comps = f
        .components()
        .iter()
        .filter(|((i, j), _)| kind.contains(*i) && kind.contains(*j))
        .map(|(&k, v)| (k, v.clone()))
        .collect();
    TwMorphism::from_parts(&src, &tgt, f.deg(), comps)
}

/// The pretriangle `(σ_{≤n-1}X)[-1] --x̃--> σ_{≥n}X --j_n--> X --p_{n-1}--> σ_{≤n-1}X`.
#[derive(Clone, Debug)]
pub struct WeightTriangle {
    pub geq: TwistedComplex,
    pub leq: TwistedComplex,
    /// `x̃_i^j = x_{i-1}^j`
    pub xt: TwMorphism,
    pub j: TwMorphism,
    pub p: TwMorphism,
    /// Cone of `x̃`; its cone is `X` on the nose.
    pub pretriangle: Pretriangle,
}

pub fn weight_triangle(x: &TwistedComplex, n: i64) -> Result<WeightTriangle> {
    let geq = brutal_truncate(x, Trunc::Geq(n));
    let leq = brutal_truncate(x, Trunc::Leq(n - 1));
    let src = tw_shift(&leq.complex, -1);
    let comps = x
        .twists()
        .iter()
        .filter(|((i, j), _)| *i <= n - 1 && *j >= n)
        .map(|(&(i, j), b)| ((i + 1, j), b.clone()))
        .collect();
    let xt = TwMorphism::from_parts(&src, &geq.complex, 0, comps);
    let pretriangle = tw_cone(&xt)?;
    if pretriangle.cone != *x {
        return Err(Error::Internal("cone of x̃ differs from X".into()));
    }
    Ok(WeightTriangle {
        geq: geq.complex,
        leq: leq.complex,
        xt,
        j: geq.map.unwrap(),
        p: leq.map.unwrap(),
        pretriangle,
    })
}

/// For closed degree-0 `f: X -> Y`, the degree -1 map
/// `h: (σ_{≤n-1}X)[-1] -> σ_{≥n}Y`, `h_i^j = f_{i-1}^j`, with
/// `dh = f_{≥n} x̃ - ỹ f_{≤n-1}[-1]`. The identity and the strict
/// commutativity of the other two squares are verified before returning.
pub fn connecting_homotopy(f: &TwMorphism, n: i64) -> Result<TwMorphism> {
    if f.deg() != 0 || !tw_diff(f).is_zero() {
        return Err(Error::contract("connecting homotopy needs a closed degree-0 morphism"));
    }
    let wx = weight_triangle(f.src(), n)?;
    let wy = weight_triangle(f.tgt(), n)?;
    let comps = f
        .components()
        .iter()
        .filter(|((i, j), _)| *i <= n - 1 && *j >= n)
        .map(|(&(i, j), b)| ((i + 1, j), b.clone()))
        .collect();
    let h = TwMorphism::from_parts(wx.xt.src(), &wy.geq, -1, comps);
    let f_geq = truncate_morphism(f, Trunc::Geq(n));
    let f_leq = truncate_morphism(f, Trunc::Leq(n - 1));
    let left = tw_compose(&f_geq, &wx.xt)?.sub(&tw_compose(&wy.xt, &f_leq.shift(-1))?)?;
    if tw_diff(&h) != left {
        return Err(Error::Internal("left square does not commute up to dh".into()));
    }
    let mid = tw_compose(&wy.j, &f_geq)?.sub(&tw_compose(f, &wx.j)?)?;
    let right = tw_compose(&f_leq, &wx.p)?.sub(&tw_compose(&wy.p, f)?)?;
    if !mid.is_zero() || !right.is_zero() {
        return Err(Error::Internal("middle or right square does not commute".into()));
    }
    Ok(h)
}

/// Adjoins the tuple `a` in degree `-n` to `x0` (concentrated in degrees
/// `≥ -n+1`) along a closed degree-0 `attach: A[n-1] -> x0`. The result is
/// the cone of `attach`, and its `σ_{≥-n+1}` is `x0` on the nose.
pub fn extend_below(x0: &TwistedComplex, a: &[ObjId], n: i64, attach: &TwMorphism) -> Result<(TwistedComplex, Pretriangle)> {
    if !x0.is_zero_object() && x0.lo() < -n + 1 {
        return Err(Error::contract(format!("complex is not concentrated in degrees >= {}", -n + 1)));
    }
    let an = TwistedComplex::single(x0.cat().clone(), a.to_vec(), -n + 1)?;
    if *attach.src() != an || attach.tgt() != x0 {
        return Err(Error::contract("attaching map must go from A[n-1] to the complex"));
    }
    let pt = tw_cone(attach)?;
    if brutal_truncate(&pt.cone, Trunc::Geq(-n + 1)).complex != *x0 {
        return Err(Error::Internal("extension does not restrict to the original complex".into()));
    }
    Ok((pt.cone.clone(), pt))
}
