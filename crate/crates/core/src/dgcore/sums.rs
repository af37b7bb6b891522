//! Morphisms between formal finite direct sums of objects.
//!
//! A tuple of objects stands for their direct sum (the empty tuple is the
//! zero object). A morphism between tuples is a matrix of hom elements, all of
//! one degree, and composes like a matrix.

use super::{DgCat, ObjId};
use crate::exactlin::{vector, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub deg: i64,
    pub src: Vec<ObjId>,
    pub tgt: Vec<ObjId>,
    /// Entry `(t, s)` sits at `t * src.len() + s` and lies in
    /// `hom^deg(src[s], tgt[t])`.
    pub entries: Vec<Vec<Scalar>>,
}

impl Block {
    pub fn zero(cat: &DgCat, src: &[ObjId], tgt: &[ObjId], deg: i64) -> Block {
        let mut entries = Vec::with_capacity(src.len() * tgt.len());
        for &t in tgt {
            for &s in src {
                entries.push(cat.field().zeros(cat.dim(s, t, deg)));
            }
        }
        Block {
            deg,
            src: src.to_vec(),
            tgt: tgt.to_vec(),
            entries,
        }
    }

    pub fn identity(cat: &DgCat, objs: &[ObjId]) -> Block {
        let mut b = Block::zero(cat, objs, objs, 0);
        for (k, &a) in objs.iter().enumerate() {
            b.entries[k * objs.len() + k] = cat.unit(a).to_vec();
        }
        b
    }

    /// Total dimension of the space of such blocks.
    pub fn space_dim(cat: &DgCat, src: &[ObjId], tgt: &[ObjId], deg: i64) -> usize {
        tgt.iter()
            .map(|&t| src.iter().map(|&s| cat.dim(s, t, deg)).sum::<usize>())
            .sum()
    }

    pub fn entry(&self, t: usize, s: usize) -> &[Scalar] {
        &self.entries[t * self.src.len() + s]
    }

    pub fn entry_mut(&mut self, t: usize, s: usize) -> &mut Vec<Scalar> {
        let n = self.src.len();
        &mut self.entries[t * n + s]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| vector::is_zero(e))
    }

    fn same_shape(&self, other: &Block) {
        assert!(
            self.deg == other.deg && self.src == other.src && self.tgt == other.tgt,
            "block shape mismatch"
        );
    }

    pub fn add_assign(&mut self, other: &Block) {
        self.same_shape(other);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            vector::add_assign(a, b);
        }
    }

    pub fn sub_assign(&mut self, other: &Block) {
        self.same_shape(other);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            vector::sub_assign(a, b);
        }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &Scalar, other: &Block) {
        self.same_shape(other);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            vector::axpy(a, c, b);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Block {
        Block {
            entries: self.entries.iter().map(|e| vector::scale(e, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Block {
        Block {
            entries: self.entries.iter().map(|e| vector::neg(e)).collect(),
            ..self.clone()
        }
    }

    /// `g ∘ f` as matrices.
    pub fn compose(cat: &DgCat, g: &Block, f: &Block) -> Block {
        let mut out = Block::zero(cat, &f.src, &g.tgt, f.deg + g.deg);
        out.add_composite(cat, &cat.field().one(), g, f);
        out
    }

    /// `self += c * (g ∘ f)`.
    pub fn add_composite(&mut self, cat: &DgCat, c: &Scalar, g: &Block, f: &Block) {
        assert_eq!(g.src, f.tgt, "composing blocks over different middle tuples");
        assert!(self.src == f.src && self.tgt == g.tgt && self.deg == f.deg + g.deg);
        if c.is_zero() {
            return;
        }
        let ns = f.src.len();
        let nm = f.tgt.len();
        let mut tmp = Vec::new();
        for (t, &ct) in g.tgt.iter().enumerate() {
            for (s, &cs) in f.src.iter().enumerate() {
                let idx = t * ns + s;
                for (m, &cm) in f.tgt.iter().enumerate() {
                    let ge = &g.entries[t * nm + m];
                    let fe = &f.entries[m * ns + s];
                    if vector::is_zero(ge) || vector::is_zero(fe) {
                        continue;
                    }
                    if c.is_one() {
                        cat.compose_into(&mut self.entries[idx], cs, cm, ct, g.deg, ge, f.deg, fe);
                    } else {
                        tmp.clear();
                        tmp.extend(cat.field().zeros(self.entries[idx].len()));
                        cat.compose_into(&mut tmp, cs, cm, ct, g.deg, ge, f.deg, fe);
                        vector::axpy(&mut self.entries[idx], c, &tmp);
                    }
                }
            }
        }
    }

    /// Entrywise differential, without any sign.
    pub fn diff(&self, cat: &DgCat) -> Block {
        let ns = self.src.len();
        let mut entries = Vec::with_capacity(self.entries.len());
        for (t, &ct) in self.tgt.iter().enumerate() {
            for (s, &cs) in self.src.iter().enumerate() {
                entries.push(cat.diff(cs, ct, self.deg, &self.entries[t * ns + s]));
            }
        }
        Block {
            deg: self.deg + 1,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            entries,
        }
    }

    /// Coordinates in the concatenated entry bases.
    pub fn coords(&self) -> Vec<Scalar> {
        self.entries.iter().flatten().cloned().collect()
    }

    pub fn from_coords(cat: &DgCat, src: &[ObjId], tgt: &[ObjId], deg: i64, v: &[Scalar]) -> Block {
        let mut b = Block::zero(cat, src, tgt, deg);
        let mut pos = 0;
        for e in b.entries.iter_mut() {
            let n = e.len();
            e.clone_from_slice(&v[pos..pos + n]);
            pos += n;
        }
        assert_eq!(pos, v.len(), "coordinate vector of the wrong length");
        b
    }

    /// Copies `inner` into the sub-block starting at `(t0, s0)`.
    pub fn paste(&mut self, t0: usize, s0: usize, inner: &Block) {
        assert_eq!(self.deg, inner.deg);
        for t in 0..inner.tgt.len() {
            for s in 0..inner.src.len() {
                *self.entry_mut(t0 + t, s0 + s) = inner.entry(t, s).to_vec();
            }
        }
    }

    /// The sub-block with target rows `t0..t0+nt` and source columns `s0..s0+ns`.
    pub fn slice(&self, t0: usize, nt: usize, s0: usize, ns: usize) -> Block {
        let mut entries = Vec::with_capacity(nt * ns);
        for t in t0..t0 + nt {
            for s in s0..s0 + ns {
                entries.push(self.entry(t, s).to_vec());
            }
        }
        Block {
            deg: self.deg,
            src: self.src[s0..s0 + ns].to_vec(),
            tgt: self.tgt[t0..t0 + nt].to_vec(),
            entries,
        }
    }

    /// Inclusion of the `k`-th summand of the concatenation of `parts`.
    pub fn inclusion(cat: &DgCat, parts: &[Vec<ObjId>], k: usize) -> Block {
        let all: Vec<ObjId> = parts.concat();
        let off: usize = parts[..k].iter().map(Vec::len).sum();
        let mut b = Block::zero(cat, &parts[k], &all, 0);
        b.paste(off, 0, &Block::identity(cat, &parts[k]));
        b
    }

    /// Projection onto the `k`-th summand of the concatenation of `parts`.
    pub fn projection(cat: &DgCat, parts: &[Vec<ObjId>], k: usize) -> Block {
        let all: Vec<ObjId> = parts.concat();
        let off: usize = parts[..k].iter().map(Vec::len).sum();
        let mut b = Block::zero(cat, &all, &parts[k], 0);
        b.paste(0, off, &Block::identity(cat, &parts[k]));
        b
    }
}
