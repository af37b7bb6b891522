use std::collections::BTreeMap;

use super::{same_cat, tw_compose, tw_diff, tw_shift, TwMorphism, TwistedComplex};
use crate::dgcore::{Block, ObjId, ValidationReport};
use crate::error::{Error, Result};

/// A termwise direct sum with its inclusions and projections.
#[derive(Clone, Debug)]
pub struct SumData {
    pub sum: TwistedComplex,
    pub inclusions: Vec<TwMorphism>,
    pub projections: Vec<TwMorphism>,
}

/// `⊕_s X_s`, described termwise: components are concatenated tuples and the
/// twist is block diagonal.
pub fn tw_sum(parts: &[TwistedComplex]) -> Result<SumData> {
    let Some(first) = parts.first() else {
        return Err(Error::contract("empty direct sum needs a presentation; use TwistedComplex::zero"));
    };
    let cat = first.cat().clone();
    for p in parts {
        same_cat(&cat, p.cat())?;
    }
    let nonzero: Vec<&TwistedComplex> = parts.iter().filter(|p| !p.is_zero_object()).collect();
    let lo = nonzero.iter().map(|p| p.lo()).min().unwrap_or(0);
    let hi = nonzero.iter().map(|p| p.hi()).max().unwrap_or(-1);
    let split = |i: i64| -> Vec<Vec<ObjId>> { parts.iter().map(|p| p.comp(i).to_vec()).collect() };
    let comps: Vec<Vec<ObjId>> = (lo..=hi).map(|i| split(i).concat()).collect();
    let mut twist = BTreeMap::new();
    for i in lo..=hi {
        for j in i + 1..=hi {
            let (si, sj) = (split(i), split(j));
            let mut b = Block::zero(&cat, &si.concat(), &sj.concat(), i - j + 1);
            let (mut t0, mut s0) = (0, 0);
            for (k, p) in parts.iter().enumerate() {
                if let Some(x) = p.twist(i, j) {
                    b.paste(t0, s0, x);
                }
                t0 += sj[k].len();
                s0 += si[k].len();
            }
            twist.insert((i, j), b);
        }
    }
    let sum = TwistedComplex::from_parts(cat.clone(), lo, comps, twist);
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for (i, _) in p.components() {
            inc.insert((i, i), Block::inclusion(&cat, &split(i), k));
            proj.insert((i, i), Block::projection(&cat, &split(i), k));
        }
        inclusions.push(TwMorphism::from_parts(p, &sum, 0, inc));
        projections.push(TwMorphism::from_parts(&sum, p, 0, proj));
    }
    Ok(SumData {
        sum,
        inclusions,
        projections,
    })
}

/// `f: X -> Y` with its cone and the four structure maps
/// `j: Y -> C`, `p: C -> X[1]`, `i: X[1] -> C`, `s: C -> Y`.
#[derive(Clone, Debug)]
pub struct Pretriangle {
    pub f: TwMorphism,
    pub cone: TwistedComplex,
    pub j: TwMorphism,
    pub p: TwMorphism,
    pub i: TwMorphism,
    pub s: TwMorphism,
}

impl Pretriangle {
    /// Checks `dj = 0`, `dp = 0`, `di = j f 1_{(X,1,0)}`,
    /// `ds = -f 1_{(X,1,0)} p` and the biproduct identities.
    pub fn check(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new();
        let x = self.f.src();
        let one = TwMorphism::shifted_identity(x, 1, 0);
        rep.check("dj=0", || "j".into(), &tw_diff(&self.j).coords());
        rep.check("dp=0", || "p".into(), &tw_diff(&self.p).coords());
        let jf1 = tw_compose(&self.j, &tw_compose(&self.f, &one)?)?;
        rep.check("di=jf1", || "i".into(), &tw_diff(&self.i).sub(&jf1)?.coords());
        let f1p = tw_compose(&self.f, &tw_compose(&one, &self.p)?)?;
        rep.check("ds=-f1p", || "s".into(), &tw_diff(&self.s).add(&f1p)?.coords());
        let c = &self.cone;
        let ident = |m: &TwMorphism| TwMorphism::identity(m.src());
        let pi = tw_compose(&self.p, &self.i)?;
        rep.check("pi=1", || "p i".into(), &pi.sub(&ident(&pi))?.coords());
        let sj = tw_compose(&self.s, &self.j)?;
        rep.check("sj=1", || "s j".into(), &sj.sub(&ident(&sj))?.coords());
        rep.check("si=0", || "s i".into(), &tw_compose(&self.s, &self.i)?.coords());
        rep.check("pj=0", || "p j".into(), &tw_compose(&self.p, &self.j)?.coords());
        let sum = tw_compose(&self.i, &self.p)?.add(&tw_compose(&self.j, &self.s)?)?;
        rep.check(
            "ip+js=1",
            || "cone".into(),
            &sum.sub(&TwMorphism::identity(c))?.coords(),
        );
        Ok(rep)
    }
}

/// The cone of a closed degree-0 morphism: `C^i = X^{i+1} ⊕ Y^i` with twist
/// `[[-x_{i+1}^{j+1}, 0], [f_{i+1}^j, y_i^j]]`.
pub fn tw_cone(f: &TwMorphism) -> Result<Pretriangle> {
    if f.deg() != 0 {
        return Err(Error::contract(format!("cone of a degree {} morphism", f.deg())));
    }
    let df = tw_diff(f);
    if !df.is_zero() {
        let res: Vec<String> = df.coords().iter().map(|s| s.to_canonical()).collect();
        return Err(Error::contract(format!("cone of a morphism that is not closed; df = [{}]", res.join(", "))));
    }
    let (x, y) = (f.src(), f.tgt());
    let cat = x.cat().clone();
    let nonzero: Vec<(i64, i64)> = [(x, 1), (y, 0)]
        .iter()
        .filter(|(c, _)| !c.is_zero_object())
        .map(|(c, o)| (c.lo() - o, c.hi() - o))
        .collect();
    let lo = nonzero.iter().map(|r| r.0).min().unwrap_or(0);
    let hi = nonzero.iter().map(|r| r.1).max().unwrap_or(-1);
    let parts = |i: i64| vec![x.comp(i + 1).to_vec(), y.comp(i).to_vec()];
    let comps: Vec<Vec<ObjId>> = (lo..=hi).map(|i| parts(i).concat()).collect();
    let mut twist = BTreeMap::new();
    for i in lo..=hi {
        for j in i + 1..=hi {
            let (pi, pj) = (parts(i), parts(j));
            let mut b = Block::zero(&cat, &pi.concat(), &pj.concat(), i - j + 1);
            if let Some(xb) = x.twist(i + 1, j + 1) {
                b.paste(0, 0, &xb.neg());
            }
            if let Some(fb) = f.component(i + 1, j) {
                b.paste(pj[0].len(), 0, fb);
            }
            if let Some(yb) = y.twist(i, j) {
                b.paste(pj[0].len(), pi[0].len(), yb);
            }
            twist.insert((i, j), b);
        }
    }
    let cone = TwistedComplex::from_parts(cat.clone(), lo, comps, twist);
    let x1 = tw_shift(x, 1);
    let mut j = BTreeMap::new();
    let mut s = BTreeMap::new();
    for (k, _) in y.components() {
        j.insert((k, k), Block::inclusion(&cat, &parts(k), 1));
        s.insert((k, k), Block::projection(&cat, &parts(k), 1));
    }
    let mut i = BTreeMap::new();
    let mut p = BTreeMap::new();
    for (k, _) in x1.components() {
        i.insert((k, k), Block::inclusion(&cat, &parts(k), 0));
        p.insert((k, k), Block::projection(&cat, &parts(k), 0));
    }
    Ok(Pretriangle {
        f: f.clone(),
        j: TwMorphism::from_parts(y, &cone, 0, j),
        s: TwMorphism::from_parts(&cone, y, 0, s),
        i: TwMorphism::from_parts(&x1, &cone, 0, i),
        p: TwMorphism::from_parts(&cone, &x1, 0, p),
        cone,
    })
}
