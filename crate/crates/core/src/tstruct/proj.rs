use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::AlgebraPresentation;
use super::module::FpModule;
use crate::dgcore::{Block, Cat, DgCat, ObjId};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar, Solver};
use crate::twisted::{tw_diff, TwMorphism, TwistedComplex};

/// `Proj(R)` on chosen projectives `eR`, concentrated in degree 0, with
/// `Hom(aR, bR) = b R a` acting by left multiplication.
#[derive(Clone, Debug)]
pub struct ProjCat {
    alg: AlgebraPresentation,
    gens: Vec<Vec<Scalar>>,
    cat: Cat,
    /// Columns: basis of `e R` in algebra coordinates.
    right: Vec<Matrix>,
    /// Columns: basis of `Hom(a, b) = e_b R e_a`.
    homs: BTreeMap<(ObjId, ObjId), Matrix>,
    /// Object of each listed primitive idempotent, if it is a generator.
    primitive: Vec<Option<ObjId>>,
}

/// One object `P1, P2, ...` per listed primitive idempotent.
pub fn proj_category(alg: &AlgebraPresentation) -> ProjCat {
    let gens: Vec<(String, Vec<Scalar>)> = alg
        .idempotents()
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("P{}", i + 1), e.clone()))
        .collect();
    ProjCat::new(alg, &gens).expect("primitive idempotents are valid generators")
}

impl ProjCat {
    /// Generators are named idempotents of `R`; each must be nonzero and
    /// satisfy `e^2 = e`.
    pub fn new(alg: &AlgebraPresentation, gens: &[(String, Vec<Scalar>)]) -> Result<ProjCat> {
        let field = alg.field();
        let mut cat = DgCat::new(field);
        for (name, e) in gens {
            if e.len() != alg.dim() {
                return Err(Error::shape(format!("generator {name} has the wrong length")));
            }
            if e.iter().all(Scalar::is_zero) || alg.mul(e, e) != *e {
                return Err(Error::Invalid(format!("generator {name} is not a nonzero idempotent")));
            }
            cat.add_object(name);
        }
        let n = gens.len();
        let mut homs = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                let h = alg.sandwich(&gens[b].1, &gens[a].1);
                if h.cols() > 0 {
                    cat.set_dim(a, b, 0, h.cols())?;
                }
                homs.insert((a, b), h);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hf, hg, hc) = (&homs[&(a, b)], &homs[&(b, c)], &homs[&(a, c)]);
                    if hf.cols() == 0 || hg.cols() == 0 || hc.cols() == 0 {
                        continue;
                    }
                    let solver = Solver::new(hc);
                    let mut cols = Vec::with_capacity(hg.cols() * hf.cols());
                    for g in 0..hg.cols() {
                        for f in 0..hf.cols() {
                            let prod = alg.mul(&hg.column(g), &hf.column(f));
                            cols.push(solver.solve(&prod)?.ok_or_else(|| Error::Internal("product outside e_c R e_a".into()))?);
                        }
                    }
                    let m = Matrix::from_columns(field, hc.cols(), &cols);
                    if !m.is_zero() {
                        cat.set_comp(a, b, c, 0, 0, m)?;
                    }
                }
            }
        }
        for (a, (_, e)) in gens.iter().enumerate() {
            let u = Solver::new(&homs[&(a, a)])
                .solve(e)?
                .ok_or_else(|| Error::Internal("idempotent outside its own corner".into()))?;
            cat.set_unit(a, u)?;
        }
        cat.set_nonpositive(true);
        let right = gens.iter().map(|(_, e)| alg.sandwich(e, alg.unit())).collect();
        let primitive = alg
            .idempotents()
            .iter()
            .map(|p| gens.iter().position(|(_, e)| e == p))
            .collect();
        Ok(ProjCat {
            alg: alg.clone(),
            gens: gens.iter().map(|g| g.1.clone()).collect(),
            cat: Arc::new(cat),
            right,
            homs,
            primitive,
        })
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.alg
    }

    pub fn cat(&self) -> &Cat {
        &self.cat
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn generator(&self, a: ObjId) -> &[Scalar] {
        &self.gens[a]
    }

    /// The object for the `i`-th listed primitive idempotent.
    pub fn primitive_object(&self, i: usize) -> Option<ObjId> {
        self.primitive.get(i).copied().flatten()
    }

    /// The same generators over `R^op`; its category is the opposite of
    /// this one.
    pub fn opposite(&self) -> Result<ProjCat> {
        let gens: Vec<(String, Vec<Scalar>)> = self
            .cat
            .objects()
            .map(|a| (self.cat.name(a).to_string(), self.gens[a].clone()))
            .collect();
        ProjCat::new(&self.alg.opposite(), &gens)
    }

    pub(crate) fn check_cat(&self, cat: &Cat) -> Result<()> {
        if Cat::ptr_eq(cat, &self.cat) || **cat == *self.cat {
            Ok(())
        } else {
            Err(Error::contract("complex is not over this category of projectives"))
        }
    }

    fn offsets(&self, objs: &[ObjId]) -> Vec<usize> {
        let mut out = Vec::with_capacity(objs.len() + 1);
        let mut pos = 0;
        out.push(0);
        for &a in objs {
            pos += self.right[a].cols();
            out.push(pos);
        }
        out
    }

    /// Columns: basis of `e_a R` in algebra coordinates.
    pub fn right_basis(&self, a: ObjId) -> &Matrix {
        &self.right[a]
    }

    /// The module map `⊕ e_s R -> M` sending the generator `e_s` to
    /// `images[s]`, which must lie in `M e_s`.
    pub fn generator_map(&self, src: &[ObjId], m: &FpModule, images: &[Vec<Scalar>]) -> Matrix {
        let mut cols = Vec::with_capacity(self.module_dim(src));
        for (&a, v) in src.iter().zip(images) {
            for c in self.right[a].columns() {
                cols.push(m.act(&c).mul_vec(v).expect("element of the module"));
            }
        }
        Matrix::from_columns(self.field(), m.dim(), &cols)
    }

    /// Coordinates of the generator `e_s` of the `s`-th summand of `⊕ e_a R`.
    pub fn generator_vector(&self, objs: &[ObjId], s: usize) -> Vec<Scalar> {
        let off = self.offsets(objs);
        let g = Solver::new(&self.right[objs[s]])
            .solve(&self.gens[objs[s]])
            .expect("shapes agree")
            .expect("e lies in eR");
        let mut v = self.field().zeros(off[objs.len()]);
        for (r, x) in g.into_iter().enumerate() {
            v[off[s] + r] = x;
        }
        v
    }

    /// Dimension of `⊕ e_a R`.
    pub fn module_dim(&self, objs: &[ObjId]) -> usize {
        objs.iter().map(|&a| self.right[a].cols()).sum()
    }

    /// The right module `⊕ e_a R` in the concatenated bases of the summands.
    pub fn module_of(&self, objs: &[ObjId]) -> FpModule {
        let field = self.field();
        let n = self.module_dim(objs);
        let off = self.offsets(objs);
        let action = (0..self.alg.dim())
            .map(|k| {
                let bk = self.alg.basis(k);
                let mut m = Matrix::zeros(field, n, n);
                for (s, &a) in objs.iter().enumerate() {
                    let basis = &self.right[a];
                    let solver = Solver::new(basis);
                    for c in 0..basis.cols() {
                        let y = self.alg.mul(&basis.column(c), &bk);
                        let coords = solver.solve(&y).expect("shapes agree").expect("eR is a right ideal");
                        for (r, x) in coords.into_iter().enumerate() {
                            m.set(off[s] + r, off[s] + c, x);
                        }
                    }
                }
                m
            })
            .collect();
        FpModule::from_parts(field, n, action)
    }

    /// Algebra element of a hom coordinate vector.
    fn hom_element(&self, a: ObjId, b: ObjId, v: &[Scalar]) -> Vec<Scalar> {
        let h = &self.homs[&(a, b)];
        if h.cols() == 0 {
            return self.field().zeros(self.alg.dim());
        }
        h.mul_vec(v).expect("hom coordinates")
    }

    /// The module map of a degree-0 block.
    pub fn block_to_map(&self, b: &Block) -> Matrix {
        let field = self.field();
        let (so, to) = (self.offsets(&b.src), self.offsets(&b.tgt));
        let mut m = Matrix::zeros(field, to[b.tgt.len()], so[b.src.len()]);
        for (t, &bt) in b.tgt.iter().enumerate() {
            let solver = Solver::new(&self.right[bt]);
            for (s, &bs) in b.src.iter().enumerate() {
                let sigma = self.hom_element(bs, bt, b.entry(t, s));
                if sigma.iter().all(Scalar::is_zero) {
                    continue;
                }
                let basis = &self.right[bs];
                for c in 0..basis.cols() {
                    let y = self.alg.mul(&sigma, &basis.column(c));
                    let coords = solver.solve(&y).expect("shapes agree").expect("image lies in e_t R");
                    for (r, x) in coords.into_iter().enumerate() {
                        m.set(to[t] + r, so[s] + c, x);
                    }
                }
            }
        }
        m
    }

    /// The block of a module map `⊕ e_s R -> ⊕ e_t R`, read off from the
    /// images of the generators `e_s`.
    pub fn map_to_block(&self, src: &[ObjId], tgt: &[ObjId], m: &Matrix) -> Result<Block> {
        let (so, to) = (self.offsets(src), self.offsets(tgt));
        if m.rows() != to[tgt.len()] || m.cols() != so[src.len()] {
            return Err(Error::shape("module map has the wrong size"));
        }
        let mut b = Block::zero(&self.cat, src, tgt, 0);
        for (s, &bs) in src.iter().enumerate() {
            let img = m.mul_vec(&self.generator_vector(src, s))?;
            for (t, &bt) in tgt.iter().enumerate() {
                let part = &img[to[t]..to[t + 1]];
                let elem = self.right[bt].mul_vec(part)?;
                let h = &self.homs[&(bs, bt)];
                let coords = if h.cols() == 0 {
                    if elem.iter().any(|x| !x.is_zero()) {
                        return Err(Error::contract("module map is not a map of right modules"));
                    }
                    Vec::new()
                } else {
                    Solver::new(h)
                        .solve(&elem)?
                        .ok_or_else(|| Error::contract("module map is not a map of right modules"))?
                };
                *b.entry_mut(t, s) = coords;
            }
        }
        if self.block_to_map(&b) != *m {
            return Err(Error::contract("module map is not a map of right modules"));
        }
        Ok(b)
    }

    /// The module map of `x_i^{i+1}`.
    pub fn differential(&self, x: &TwistedComplex, i: i64) -> Matrix {
        self.block_to_map(&x.twist_or_zero(i, i + 1))
    }
}

/// A complex with isomorphic summands cancelled, and the homotopy
/// equivalences to and from the input.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub complex: TwistedComplex,
    /// `complex -> input`
    pub incl: TwMorphism,
    /// `input -> complex`
    pub proj: TwMorphism,
}

fn without(objs: &[ObjId], k: usize) -> Vec<ObjId> {
    let mut v = objs.to_vec();
    v.remove(k);
    v
}

/// The block `objs \ {k} -> objs` (or its transpose) that is the identity
/// on the remaining summands.
fn selection(cat: &DgCat, objs: &[ObjId], k: usize, into: bool) -> Block {
    let rest = without(objs, k);
    let mut b = if into {
        Block::zero(cat, &rest, objs, 0)
    } else {
        Block::zero(cat, objs, &rest, 0)
    };
    for (r, &a) in rest.iter().enumerate() {
        let full = if r < k { r } else { r + 1 };
        let (t, s) = if into { (full, r) } else { (r, full) };
        *b.entry_mut(t, s) = cat.unit(a).to_vec();
    }
    b
}

/// Cancels invertible differential entries `a: A -> B` one at a time:
/// `X -> A⊕C -> B⊕D -> Z` becomes `X -> C -> D -> Z` with differential
/// `e - c a⁻¹ b`.
pub fn minimize(pc: &ProjCat, x: &TwistedComplex) -> Result<Minimized> {
    pc.check_cat(x.cat())?;
    let cat = pc.cat().clone();
    if x.is_zero_object() {
        let z = x.clone();
        return Ok(Minimized {
            incl: TwMorphism::zero(&z, x, 0),
            proj: TwMorphism::zero(x, &z, 0),
            complex: z,
        });
    }
    let lo = x.lo();
    let len = (x.hi() - lo + 1) as usize;
    let mut comps: Vec<Vec<ObjId>> = (0..len).map(|k| x.comp(lo + k as i64).to_vec()).collect();
    let mut d: Vec<Block> = (0..len.saturating_sub(1))
        .map(|k| x.twist_or_zero(lo + k as i64, lo + k as i64 + 1))
        .collect();
    let mut incl: Vec<Block> = comps.iter().map(|c| Block::identity(&cat, c)).collect();
    let mut proj = incl.clone();
    'search: loop {
        for i in 0..d.len() {
            for t in 0..comps[i + 1].len() {
                for s in 0..comps[i].len() {
                    let entry = Block {
                        deg: 0,
                        src: vec![comps[i][s]],
                        tgt: vec![comps[i + 1][t]],
                        entries: vec![d[i].entry(t, s).to_vec()],
                    };
                    let m = pc.block_to_map(&entry);
                    if m.rows() != m.cols() || m.rows() == 0 {
                        continue;
                    }
                    let Some(inv) = m.inverse()? else { continue };
                    let ainv = pc.map_to_block(&entry.tgt, &entry.src, &inv)?;
                    eliminate(&cat, &mut comps, &mut d, &mut incl, &mut proj, i, s, t, &ainv);
                    continue 'search;
                }
            }
        }
        break;
    }
    let twist = d
        .into_iter()
        .enumerate()
        .map(|(k, b)| ((lo + k as i64, lo + k as i64 + 1), b))
        .collect();
    let complex = TwistedComplex::from_parts(cat.clone(), lo, comps.clone(), twist);
    let diag = |blocks: Vec<Block>, keep: &dyn Fn(&Block) -> bool| -> BTreeMap<(i64, i64), Block> {
        blocks
            .into_iter()
            .enumerate()
            .filter(|(_, b)| keep(b))
            .map(|(k, b)| ((lo + k as i64, lo + k as i64), b))
            .collect()
    };
    let nonempty = |b: &Block| !b.src.is_empty() && !b.tgt.is_empty();
    let incl = TwMorphism::from_parts(&complex, x, 0, diag(incl, &nonempty));
    let proj = TwMorphism::from_parts(x, &complex, 0, diag(proj, &nonempty));
    if !tw_diff(&incl).is_zero() || !tw_diff(&proj).is_zero() {
        return Err(Error::Internal("minimization maps are not chain maps".into()));
    }
    Ok(Minimized { complex, incl, proj })
}

#[allow(clippy::too_many_arguments)]
fn eliminate(
    cat: &DgCat,
    comps: &mut [Vec<ObjId>],
    d: &mut [Block],
    incl: &mut [Block],
    proj: &mut [Block],
    i: usize,
    s: usize,
    t: usize,
    ainv: &Block,
) {
    let (ci, cj) = (comps[i].clone(), comps[i + 1].clone());
    let rest_i = without(&ci, s);
    let rest_j = without(&cj, t);
    // ι_i = (-a⁻¹ b; 1): C -> A⊕C.
    let mut iota = selection(cat, &ci, s, true);
    for (r, _) in rest_i.iter().enumerate() {
        let full = if r < s { r } else { r + 1 };
        let b = Block {
            deg: 0,
            src: vec![ci[full]],
            tgt: vec![cj[t]],
            entries: vec![d[i].entry(t, full).to_vec()],
        };
        let v = Block::compose(cat, ainv, &b).neg();
        *iota.entry_mut(s, r) = v.entries[0].clone();
    }
    // π_{i+1} = (-c a⁻¹, 1): B⊕D -> D.
    let mut pi = selection(cat, &cj, t, false);
    for (r, _) in rest_j.iter().enumerate() {
        let full = if r < t { r } else { r + 1 };
        let c = Block {
            deg: 0,
            src: vec![ci[s]],
            tgt: vec![cj[full]],
            entries: vec![d[i].entry(full, s).to_vec()],
        };
        let v = Block::compose(cat, &c, ainv).neg();
        *pi.entry_mut(r, t) = v.entries[0].clone();
    }
    let pi_i = selection(cat, &ci, s, false);
    let iota_j = selection(cat, &cj, t, true);
    d[i] = Block::compose(cat, &pi, &Block::compose(cat, &d[i], &iota));
    if i > 0 {
        d[i - 1] = Block::compose(cat, &pi_i, &d[i - 1]);
    }
    if i + 1 < d.len() {
        d[i + 1] = Block::compose(cat, &d[i + 1], &iota_j);
    }
    incl[i] = Block::compose(cat, &incl[i], &iota);
    incl[i + 1] = Block::compose(cat, &incl[i + 1], &iota_j);
    proj[i] = Block::compose(cat, &pi_i, &proj[i]);
    proj[i + 1] = Block::compose(cat, &pi, &proj[i + 1]);
    comps[i] = rest_i;
    comps[i + 1] = rest_j;
}
