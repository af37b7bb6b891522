//! Seeded random inputs for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::dgcore::{Block, Cat, ObjId};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Scalar};
use crate::homotopy::{h0_inverse, HomWindowComplex};
use crate::twisted::{extend_below, tw_diff, TwMorphism, TwistedComplex};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Small integers over Q, uniform elements over F_p.
    pub fn scalar(&mut self, field: Field) -> Scalar {
        match field {
            Field::Rational => field.from_i64(self.rng.gen_range(-2..=2)),
            Field::Prime(p) => field.from_i64(self.rng.gen_range(0..p as i64)),
        }
    }

    pub fn vector(&mut self, field: Field, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| self.scalar(field)).collect()
    }

    /// A nonempty tuple of nonzero objects.
    pub fn tuple(&mut self, cat: &Cat, max_len: usize) -> Vec<ObjId> {
        let objs: Vec<ObjId> = cat.objects().filter(|&a| Some(a) != cat.zero_object()).collect();
        let len = self.rng.gen_range(1..=max_len.max(1));
        (0..len).map(|_| objs[self.rng.gen_range(0..objs.len())]).collect()
    }

    pub fn morphism(&mut self, x: &TwistedComplex, y: &TwistedComplex, deg: i64) -> TwMorphism {
        let n: usize = TwMorphism::slots(x, y, deg).iter().map(|s| s.1).sum();
        let v = self.vector(x.cat().field(), n);
        TwMorphism::from_coords(x, y, deg, &v)
    }

    /// A random combination of a basis of closed morphisms.
    pub fn closed_morphism(&mut self, x: &TwistedComplex, y: &TwistedComplex, deg: i64) -> TwMorphism {
        let basis = HomWindowComplex::new(x, y).cocycles(deg);
        let field = x.cat().field();
        let mut f = TwMorphism::zero(x, y, deg);
        for b in basis {
            let c = self.scalar(field);
            f = f.add(&b.scale(&c)).expect("same shape");
        }
        f
    }

    /// A complex supported in `[lo, hi]`, built top down by attaching a
    /// random tuple along a random closed map at each step.
    pub fn complex(&mut self, cat: &Cat, lo: i64, hi: i64, max_len: usize) -> Result<TwistedComplex> {
        if hi < lo {
            return Ok(TwistedComplex::zero(cat.clone()));
        }
        let mut x = TwistedComplex::single(cat.clone(), self.tuple(cat, max_len), hi)?;
        for d in (lo..hi).rev() {
            let a = self.tuple(cat, max_len);
            let src = TwistedComplex::single(cat.clone(), a.clone(), d + 1)?;
            let attach = self.closed_morphism(&src, &x, 0);
            x = extend_below(&x, &a, -d, &attach)?.0;
        }
        Ok(x)
    }
}

impl Gen {
    /// A random invertible degree-0 endomorphism block of `objs`, for
    /// presentations whose homs sit in degree 0.
    pub fn invertible_block(&mut self, cat: &Cat, objs: &[ObjId]) -> Result<Block> {
        let x = TwistedComplex::single(cat.clone(), objs.to_vec(), 0)?;
        for _ in 0..64 {
            let t = self.morphism(&x, &x, 0);
            if h0_inverse(&t)?.is_some() {
                return Ok(t.component_or_zero(0, 0));
            }
        }
        Err(Error::Internal("no invertible block found".into()))
    }

    /// A complex `Y` with the components of `x` and a closed `f: x -> Y`
    /// with invertible diagonal, obtained by conjugating the twist with
    /// random invertible blocks and adding a random boundary. Needs a
    /// presentation concentrated in degree 0.
    pub fn iso_pair(&mut self, x: &TwistedComplex) -> Result<(TwistedComplex, TwMorphism)> {
        let cat = x.cat().clone();
        if cat.homs().values().any(|h| h.degrees().iter().any(|&d| d != 0)) {
            return Err(Error::Unsupported("gauge transport needs homs in degree 0 only".into()));
        }
        let mut t = BTreeMap::new();
        let mut tinv = BTreeMap::new();
        for (i, c) in x.components() {
            let b = self.invertible_block(&cat, c)?;
            let s = TwistedComplex::single(cat.clone(), c.to_vec(), 0)?;
            let m = TwMorphism::from_parts(&s, &s, 0, [((0, 0), b.clone())].into());
            let inv = h0_inverse(&m)?.expect("block is invertible").inv;
            t.insert(i, b);
            tinv.insert(i, inv.component_or_zero(0, 0));
        }
        let twist = x
            .twists()
            .iter()
            .map(|(&(i, j), b)| ((i, j), Block::compose(&cat, &t[&j], &Block::compose(&cat, b, &tinv[&i]))))
            .collect();
        let y = TwistedComplex::new(cat.clone(), x.lo(), x.components().map(|(_, c)| c.to_vec()).collect(), twist)?;
        let diag = t.into_iter().map(|(i, b)| ((i, i), b)).collect();
        let f0 = TwMorphism::new(x, &y, 0, diag)?;
        // A boundary can make a diagonal block singular; redraw it then.
        for _ in 0..16 {
            let k = self.morphism(x, &y, -1);
            let f = f0.add(&tw_diff(&k))?;
            if diagonal_invertible(&f)? {
                return Ok((y, f));
            }
        }
        Ok((y, f0))
    }
}

fn diagonal_invertible(f: &TwMorphism) -> Result<bool> {
    let cat = f.src().cat().clone();
    for (i, c) in f.src().components() {
        let s = TwistedComplex::single(cat.clone(), c.to_vec(), 0)?;
        let m = TwMorphism::from_parts(&s, &s, 0, [((0, 0), f.component_or_zero(i, i))].into());
        if h0_inverse(&m)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
