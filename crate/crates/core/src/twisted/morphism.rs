use std::collections::BTreeMap;

use super::{same_cat, TwistedComplex};
use crate::dgcore::Block;
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// A degree-`p` morphism of twisted complexes, with components
/// `f_i^j ∈ hom^{i-j+p}(X^i, Y^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMorphism {
    src: TwistedComplex,
    tgt: TwistedComplex,
    deg: i64,
    /// Zero blocks are not stored.
    comps: BTreeMap<(i64, i64), Block>,
}

impl TwMorphism {
    pub fn new(src: &TwistedComplex, tgt: &TwistedComplex, deg: i64, comps: BTreeMap<(i64, i64), Block>) -> Result<TwMorphism> {
        same_cat(src.cat(), tgt.cat())?;
        let mut f = TwMorphism::zero(src, tgt, deg);
        for ((i, j), b) in comps {
            if b.src != src.comp(i) || b.tgt != tgt.comp(j) || b.deg != i - j + deg {
                return Err(Error::shape(format!(
                    "component ({i},{j}) has the wrong shape or degree (expected degree {})",
                    i - j + deg
                )));
            }
            if !b.is_zero() {
                f.comps.insert((i, j), b);
            }
        }
        Ok(f)
    }

    pub(crate) fn from_parts(src: &TwistedComplex, tgt: &TwistedComplex, deg: i64, mut comps: BTreeMap<(i64, i64), Block>) -> TwMorphism {
        comps.retain(|_, b| !b.is_zero());
        TwMorphism {
            src: src.clone(),
            tgt: tgt.clone(),
            deg,
            comps,
        }
    }

    pub fn zero(src: &TwistedComplex, tgt: &TwistedComplex, deg: i64) -> TwMorphism {
        TwMorphism {
            src: src.clone(),
            tgt: tgt.clone(),
            deg,
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(x: &TwistedComplex) -> TwMorphism {
        let comps = x
            .components()
            .map(|(i, c)| ((i, i), Block::identity(x.cat(), c)))
            .collect();
        TwMorphism::from_parts(x, x, 0, comps)
    }

    pub fn src(&self) -> &TwistedComplex {
        &self.src
    }

    pub fn tgt(&self) -> &TwistedComplex {
        &self.tgt
    }

    pub fn deg(&self) -> i64 {
        self.deg
    }

    pub fn component(&self, i: i64, j: i64) -> Option<&Block> {
        self.comps.get(&(i, j))
    }

    pub fn component_or_zero(&self, i: i64, j: i64) -> Block {
        match self.comps.get(&(i, j)) {
            Some(b) => b.clone(),
            None => Block::zero(self.src.cat(), self.src.comp(i), self.tgt.comp(j), i - j + self.deg),
        }
    }

    pub fn components(&self) -> &BTreeMap<(i64, i64), Block> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn same_shape(&self, other: &TwMorphism) -> Result<()> {
        if self.deg != other.deg || self.src != other.src || self.tgt != other.tgt {
            return Err(Error::contract("morphisms have different source, target or degree"));
        }
        Ok(())
    }

    pub fn add(&self, other: &TwMorphism) -> Result<TwMorphism> {
        self.same_shape(other)?;
        let mut comps = self.comps.clone();
        for (&k, b) in &other.comps {
            match comps.get_mut(&k) {
                Some(a) => a.add_assign(b),
                None => {
                    comps.insert(k, b.clone());
                }
            }
        }
        Ok(TwMorphism::from_parts(&self.src, &self.tgt, self.deg, comps))
    }

    pub fn sub(&self, other: &TwMorphism) -> Result<TwMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TwMorphism {
        self.scale(&-self.src.cat().field().one())
    }

    pub fn scale(&self, c: &Scalar) -> TwMorphism {
        let comps = self.comps.iter().map(|(&k, b)| (k, b.scale(c))).collect();
        TwMorphism::from_parts(&self.src, &self.tgt, self.deg, comps)
    }

    /// The component slots `(i, j)` whose block space is nonzero, in order.
    pub fn slots(src: &TwistedComplex, tgt: &TwistedComplex, deg: i64) -> Vec<((i64, i64), usize)> {
        let cat = src.cat();
        let mut out = Vec::new();
        for (i, si) in src.components() {
            for (j, tj) in tgt.components() {
                let d = Block::space_dim(cat, si, tj, i - j + deg);
                if d > 0 {
                    out.push(((i, j), d));
                }
            }
        }
        out
    }

    /// Coordinates in the basis given by [`TwMorphism::slots`].
    pub fn coords(&self) -> Vec<Scalar> {
        let mut v = Vec::new();
        for ((i, j), _) in TwMorphism::slots(&self.src, &self.tgt, self.deg) {
            v.extend(self.component_or_zero(i, j).coords());
        }
        v
    }

    pub fn from_coords(src: &TwistedComplex, tgt: &TwistedComplex, deg: i64, v: &[Scalar]) -> TwMorphism {
        let cat = src.cat();
        let mut comps = BTreeMap::new();
        let mut pos = 0;
        for ((i, j), d) in TwMorphism::slots(src, tgt, deg) {
            let b = Block::from_coords(cat, src.comp(i), tgt.comp(j), i - j + deg, &v[pos..pos + d]);
            pos += d;
            comps.insert((i, j), b);
        }
        assert_eq!(pos, v.len(), "coordinate vector of the wrong length");
        TwMorphism::from_parts(src, tgt, deg, comps)
    }

    /// Plain reindexing `(Rf)_i^j = f_{i+n}^{j+n}` between `X[n]` and `Y[n]`,
    /// with no sign. It satisfies `D(Rf) = (-1)^n R(Df)`.
    pub fn reindex(&self, n: i64) -> TwMorphism {
        let comps = self.comps.iter().map(|(&(i, j), b)| ((i - n, j - n), b.clone())).collect();
        TwMorphism::from_parts(&super::tw_shift(&self.src, n), &super::tw_shift(&self.tgt, n), self.deg, comps)
    }

    /// `f[n]_i^j = (-1)^{np} f_{i+n}^{j+n}`, so that `D(f[n]) = (Df)[n]`.
    pub fn shift(&self, n: i64) -> TwMorphism {
        let r = self.reindex(n);
        r.scale(&self.src.cat().field().sign(n * self.deg))
    }

    /// The shifted identity `1_{(X,n,m)}: X[n] -> X[m]`, of degree `n - m`.
    pub fn shifted_identity(x: &TwistedComplex, n: i64, m: i64) -> TwMorphism {
        let src = super::tw_shift(x, n);
        let tgt = super::tw_shift(x, m);
        let comps = x
            .components()
            .map(|(k, c)| ((k - n, k - m), Block::identity(x.cat(), c)))
            .collect();
        TwMorphism::from_parts(&src, &tgt, n - m, comps)
    }
}

fn slot<'a>(
    out: &'a mut BTreeMap<(i64, i64), Block>,
    x: &TwistedComplex,
    y: &TwistedComplex,
    i: i64,
    j: i64,
    deg: i64,
) -> &'a mut Block {
    out.entry((i, j))
        .or_insert_with(|| Block::zero(x.cat(), x.comp(i), y.comp(j), i - j + deg))
}

/// `f[n]`, see [`TwMorphism::shift`].
pub fn tw_shift_mor(f: &TwMorphism, n: i64) -> TwMorphism {
    f.shift(n)
}

/// `(Df)_i^j = (-1)^j d f_i^j + Σ_k (y_k^j f_i^k - (-1)^p f_k^j x_i^k)`.
pub fn tw_diff(f: &TwMorphism) -> TwMorphism {
    let (x, y) = (&f.src, &f.tgt);
    let cat = x.cat();
    let field = cat.field();
    let p = f.deg;
    let one = field.one();
    let minus_sign_p = -field.sign(p);
    let mut out: BTreeMap<(i64, i64), Block> = BTreeMap::new();
    for (&(i, k), fb) in &f.comps {
        let d = fb.diff(cat);
        if !d.is_zero() {
            slot(&mut out, x, y, i, k, p + 1).axpy(&field.sign(k), &d);
        }
        for (&(_, j), yb) in y.twists().range((k, i64::MIN)..(k + 1, i64::MIN)) {
            slot(&mut out, x, y, i, j, p + 1).add_composite(cat, &one, yb, fb);
        }
    }
    for (&(k, j), fb) in &f.comps {
        for (&(i, k2), xb) in x.twists() {
            if k2 == k {
                slot(&mut out, x, y, i, j, p + 1).add_composite(cat, &minus_sign_p, fb, xb);
            }
        }
    }
    TwMorphism::from_parts(x, y, p + 1, out)
}

/// `(g ∘ f)_i^j = Σ_k g_k^j f_i^k`.
pub fn tw_compose(g: &TwMorphism, f: &TwMorphism) -> Result<TwMorphism> {
    if f.tgt != g.src {
        return Err(Error::contract("target of f is not the source of g"));
    }
    let cat = f.src.cat();
    let deg = f.deg + g.deg;
    let mut out: BTreeMap<(i64, i64), Block> = BTreeMap::new();
    for (&(i, k), fb) in &f.comps {
        for (&(_, j), gb) in g.comps.range((k, i64::MIN)..(k + 1, i64::MIN)) {
            slot(&mut out, &f.src, &g.tgt, i, j, deg).add_composite(cat, &cat.field().one(), gb, fb);
        }
    }
    Ok(TwMorphism::from_parts(&f.src, &g.tgt, deg, out))
}

/// `Hom^p(X, Y[n]) -> Hom^{p+n}(X, Y)`, `g_i^{j+n} = f_i^j`. It satisfies
/// `D(Φ f) = (-1)^n Φ(D f)`.
pub fn shift_hom_to(f: &TwMorphism, y: &TwistedComplex, n: i64) -> Result<TwMorphism> {
    if *f.tgt() != super::tw_shift(y, n) {
        return Err(Error::contract("target is not the stated shift"));
    }
    let comps = f.comps.iter().map(|(&(i, j), b)| ((i, j + n), b.clone())).collect();
    Ok(TwMorphism::from_parts(&f.src, y, f.deg + n, comps))
}

/// Inverse of [`shift_hom_to`].
pub fn shift_hom_from(g: &TwMorphism, n: i64) -> TwMorphism {
    let tgt = super::tw_shift(&g.tgt, n);
    let comps = g.comps.iter().map(|(&(i, j), b)| ((i, j - n), b.clone())).collect();
    TwMorphism::from_parts(&g.src, &tgt, g.deg - n, comps)
}
