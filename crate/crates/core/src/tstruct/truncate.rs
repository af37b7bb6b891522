use std::collections::BTreeMap;

use serde::Serialize;

use super::module::{contains, join, subquotient, FpModule};
use super::proj::{minimize, ProjCat};
use crate::dgcore::{Block, ObjId, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, vector, Matrix, Scalar};
use crate::homotopy::{nullhomotopy, tower_lim, HomWindowComplex, Tower, TowerDirection, TowerLimit};
use crate::twisted::{
    brutal_truncate, canonical_map, opposite_tw, opposite_tw_mor, tw_compose, tw_cone, tw_diff, tw_shift,
    validate_twisted, Trunc, TwMorphism, TwistedComplex,
};

/// `H^n` of the complex of modules underlying `x`.
pub fn heart_cohomology(pc: &ProjCat, x: &TwistedComplex, n: i64) -> Result<FpModule> {
    pc.check_cat(x.cat())?;
    let m = pc.module_of(x.comp(n));
    subquotient(&m, &pc.differential(x, n - 1), &pc.differential(x, n))
}

/// A projective cover `⊕ e_a R -> M`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub objs: Vec<ObjId>,
    /// `dim M x dim(⊕ e_a R)`
    pub epi: Matrix,
}

impl Cover {
    /// Basis of the kernel of the epimorphism.
    pub fn kernel(&self) -> Matrix {
        self.epi.kernel()
    }
}

/// One summand `e_i R` for each basis vector of the top `M / M J` at `i`,
/// each mapping its generator to a lift of that vector.
pub fn projective_cover(pc: &ProjCat, m: &FpModule) -> Result<Cover> {
    let alg = pc.algebra();
    let mut span = m.radical_part(alg);
    let mut objs = Vec::new();
    let mut images = Vec::new();
    for (i, e) in alg.idempotents().iter().enumerate() {
        for v in m.corner(e).columns() {
            if contains(&span, &v) {
                continue;
            }
            let a = pc.primitive_object(i).ok_or_else(|| {
                Error::Unsupported(format!("no generator for idempotent {} in the category of projectives", i + 1))
            })?;
            span = join(&span, &m.generated(&v));
            objs.push(a);
            images.push(v);
        }
    }
    let epi = pc.generator_map(&objs, m, &images);
    if epi.rank() != m.dim() {
        return Err(Error::Internal("projective cover is not surjective".into()));
    }
    Ok(Cover { objs, epi })
}

/// A projective presentation `P1 -> P0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct ProjPresentation {
    pub p1: Vec<ObjId>,
    pub p0: Vec<ObjId>,
    pub map: Block,
    pub epi: Matrix,
}

impl ProjPresentation {
    /// `P1 -> P0` in degrees -1 and 0.
    pub fn complex(&self, pc: &ProjCat) -> TwistedComplex {
        let mut twist = BTreeMap::new();
        twist.insert((-1, 0), self.map.clone());
        TwistedComplex::from_parts(pc.cat().clone(), -1, vec![self.p1.clone(), self.p0.clone()], twist)
    }

    /// The cokernel has the dimension of the module.
    pub fn check(&self, pc: &ProjCat, m: &FpModule) -> bool {
        let d = pc.block_to_map(&self.map);
        pc.module_dim(&self.p0) - d.rank() == m.dim() && self.epi.mul(&d).is_ok_and(|c| c.is_zero())
    }
}

/// Cover of `M` followed by a cover of its kernel.
pub fn projective_presentation(pc: &ProjCat, m: &FpModule) -> Result<ProjPresentation> {
    let c0 = projective_cover(pc, m)?;
    let k = c0.kernel();
    let kmod = pc.module_of(&c0.objs).submodule(&k)?;
    let c1 = projective_cover(pc, &kmod)?;
    let map = pc.map_to_block(&c1.objs, &c0.objs, &k.mul(&c1.epi)?)?;
    Ok(ProjPresentation {
        p1: c1.objs,
        p0: c0.objs,
        map,
        epi: c0.epi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    /// The triangle is a truncation triangle.
    Exact,
    /// Cohomology agrees with the true truncation in degrees `>= k`.
    From(i64),
    /// Cohomology agrees with the true truncation in degrees `<= k`.
    UpTo(i64),
}

impl Validity {
    pub fn contains(self, k: i64) -> bool {
        match self {
            Validity::Exact => true,
            Validity::From(a) => k >= a,
            Validity::UpTo(b) => k <= b,
        }
    }

    pub fn is_exact(self) -> bool {
        self == Validity::Exact
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Projective,
    Injective,
}

/// `τ_{≤n}X --counit--> X --unit--> τ_{≥n+1}X`.
#[derive(Clone, Debug)]
pub struct TTriangle {
    pub x: TwistedComplex,
    pub n: i64,
    pub leq: TwistedComplex,
    pub geq: TwistedComplex,
    pub counit: TwMorphism,
    pub unit: TwMorphism,
    pub validity: Validity,
    pub side: Side,
}

impl TTriangle {
    /// Degrees where some term may have cohomology.
    fn range(&self) -> (i64, i64) {
        let parts = [&self.x, &self.leq, &self.geq];
        let lo = parts.iter().filter(|c| !c.is_zero_object()).map(|c| c.lo()).min().unwrap_or(0);
        let hi = parts.iter().filter(|c| !c.is_zero_object()).map(|c| c.hi()).max().unwrap_or(-1);
        (lo - 1, hi + 1)
    }

    /// `H^k(τ_{≤n}X) = H^k(X)` for `k ≤ n` and zero above, `H^k(τ_{≥n+1}X)`
    /// the other way round, by dimension vectors, inside the validity
    /// window. Injective triangles are checked on the opposite side.
    pub fn check(&self, pc: &ProjCat) -> Result<ValidationReport> {
        match self.side {
            Side::Projective => check_pattern(pc, &self.x, &self.leq, &self.geq, self.n, self.validity, self.range()),
            Side::Injective => {
                let op = pc.opposite()?;
                let o = |c: &TwistedComplex| opposite_tw(c, op.cat());
                let validity = match self.validity {
                    Validity::UpTo(b) => Validity::From(-b),
                    Validity::From(a) => Validity::UpTo(-a),
                    Validity::Exact => Validity::Exact,
                };
                let (lo, hi) = self.range();
                check_pattern(&op, &o(&self.x)?, &o(&self.geq)?, &o(&self.leq)?, -self.n - 1, validity, (-hi, -lo))
            }
        }
    }

    /// Dimension vectors of `H^k` of `X`, `τ_{≤n}X` and `τ_{≥n+1}X`.
    pub fn cohomology_table(&self, pc: &ProjCat) -> Result<Vec<(i64, [Vec<usize>; 3])>> {
        let (lo, hi) = self.range();
        let alg = pc.algebra();
        let mut out = Vec::new();
        for k in lo..=hi {
            let row = [&self.x, &self.leq, &self.geq]
                .map(|c| heart_cohomology(pc, c, k).map(|h| h.dim_vector(alg)));
            let [a, b, c] = row;
            out.push((k, [a?, b?, c?]));
        }
        Ok(out)
    }
}

fn check_pattern(
    pc: &ProjCat,
    x: &TwistedComplex,
    leq: &TwistedComplex,
    geq: &TwistedComplex,
    n: i64,
    validity: Validity,
    (lo, hi): (i64, i64),
) -> Result<ValidationReport> {
    let alg = pc.algebra();
    let f = pc.field();
    let mut rep = ValidationReport::new();
    let diff = |a: &[usize], b: &[usize]| -> Vec<Scalar> {
        a.iter().zip(b).map(|(&p, &q)| f.from_i64(p as i64 - q as i64)).collect()
    };
    for k in lo..=hi {
        if !validity.contains(k) {
            continue;
        }
        let hx = heart_cohomology(pc, x, k)?.dim_vector(alg);
        let hl = heart_cohomology(pc, leq, k)?.dim_vector(alg);
        let hg = heart_cohomology(pc, geq, k)?.dim_vector(alg);
        let zero = vec![0; hx.len()];
        let (want_l, want_g) = if k <= n { (&hx, &zero) } else { (&zero, &hx) };
        rep.check("t-truncation-leq", || format!("H^{k}"), &diff(&hl, want_l));
        rep.check("t-truncation-geq", || format!("H^{k}"), &diff(&hg, want_g));
    }
    Ok(rep)
}

/// A block `src -> q` whose module map `L` satisfies `over ∘ L = target`.
fn lift_block(pc: &ProjCat, src: &[ObjId], q: &[ObjId], over: &Matrix, target: &Matrix) -> Result<Block> {
    let mq = pc.module_of(q);
    let mut images = Vec::with_capacity(src.len());
    for s in 0..src.len() {
        let want = target.mul_vec(&pc.generator_vector(src, s))?;
        let y = solve_linear(over, &want)?
            .ok_or_else(|| Error::Internal("map does not factor through the cover".into()))?;
        images.push(mq.act(pc.generator(src[s])).mul_vec(&y)?);
    }
    pc.map_to_block(src, q, &pc.generator_map(src, &mq, &images))
}

/// The truncation triangle at `n`. `τ_{≥n+1}X` is `σ_{≥n+1}X` with a
/// projective resolution of `B = im(d^n)` attached below; the resolution
/// runs until its kernel vanishes or for `max(depth_cap, n - lo + 2)`
/// steps. `τ_{≤n}X` is the shifted cone of `X -> τ_{≥n+1}X`. Both are
/// minimized.
pub fn t_truncate(pc: &ProjCat, x: &TwistedComplex, n: i64, depth_cap: usize) -> Result<TTriangle> {
    pc.check_cat(x.cat())?;
    if depth_cap == 0 {
        return Err(Error::contract("depth cap must be at least 1"));
    }
    let cat = pc.cat().clone();
    let lo = if x.is_zero_object() { n } else { x.lo() };
    let steps = depth_cap.max((n - lo + 2).max(1) as usize);
    let top = x.comp(n + 1).to_vec();
    let mut ambient = pc.module_of(&top);
    let mut basis = pc.differential(x, n).image();
    let mut qs: Vec<Vec<ObjId>> = Vec::new();
    let mut maps: Vec<Matrix> = Vec::new();
    for _ in 0..steps {
        if basis.cols() == 0 {
            break;
        }
        let cover = projective_cover(pc, &ambient.submodule(&basis)?)?;
        let over = basis.mul(&cover.epi)?;
        basis = over.kernel();
        ambient = pc.module_of(&cover.objs);
        qs.push(cover.objs);
        maps.push(over);
    }
    let validity = if basis.cols() == 0 {
        Validity::Exact
    } else {
        Validity::From(n - qs.len() as i64 + 3)
    };
    // Y = τ_{≥n+1}X before minimization.
    let ylo = n + 1 - qs.len() as i64;
    let yhi = x.hi().max(n);
    let comp_y = |k: i64| -> Vec<ObjId> {
        if k > n {
            x.comp(k).to_vec()
        } else {
            qs[(n - k) as usize].clone()
        }
    };
    let comps: Vec<Vec<ObjId>> = (ylo..=yhi).map(comp_y).collect();
    let mut twist = BTreeMap::new();
    for (&(i, j), b) in x.twists() {
        if i > n {
            twist.insert((i, j), b.clone());
        }
    }
    for (jdx, over) in maps.iter().enumerate() {
        let k = n - jdx as i64;
        twist.insert((k, k + 1), pc.map_to_block(&qs[jdx], &comp_y(k + 1), over)?);
    }
    let y = TwistedComplex::from_parts(cat.clone(), ylo, comps, twist);
    if !validate_twisted(&y).passed {
        return Err(Error::Internal("attached resolution is not a complex".into()));
    }
    // φ: X -> Y, identity above n, lifted through the resolution below.
    let mut phi = BTreeMap::new();
    for (k, c) in x.components() {
        if k > n {
            phi.insert((k, k), Block::identity(&cat, c));
        }
    }
    let mut prev = Matrix::identity(pc.field(), pc.module_dim(x.comp(n + 1)));
    for k in (lo..=n).rev() {
        let jdx = (n - k) as usize;
        let Some(over) = maps.get(jdx) else { break };
        let target = prev.mul(&pc.differential(x, k))?;
        let b = lift_block(pc, x.comp(k), &qs[jdx], over, &target)?;
        prev = pc.block_to_map(&b);
        phi.insert((k, k), b);
    }
    let phi = TwMorphism::new(x, &y, 0, phi)?;
    if !tw_diff(&phi).is_zero() {
        return Err(Error::Internal("lifted map to the truncation is not closed".into()));
    }
    let pre = tw_cone(&phi)?;
    let shifted = tw_shift(&pre.cone, -1);
    let back = pre.p.shift(-1);
    let lmin = minimize(pc, &shifted)?;
    let gmin = minimize(pc, &y)?;
    let counit = tw_compose(&back, &lmin.incl)?;
    let unit = tw_compose(&gmin.proj, &phi)?;
    if nullhomotopy(&tw_compose(&unit, &counit)?)?.is_none() {
        return Err(Error::Internal("composite of the truncation triangle is not nullhomotopic".into()));
    }
    Ok(TTriangle {
        x: x.clone(),
        n,
        leq: lmin.complex,
        geq: gmin.complex,
        counit,
        unit,
        validity,
        side: Side::Projective,
    })
}

/// The injective t-structure: `τ^{inj}_{≤n}X = (τ_{≥-n}X^op)^op` and
/// `τ^{inj}_{≥n+1}X = (τ_{≤-n-1}X^op)^op`, computed over `R^op`.
pub fn inj_t_truncate(pc: &ProjCat, x: &TwistedComplex, n: i64, depth_cap: usize) -> Result<TTriangle> {
    pc.check_cat(x.cat())?;
    let op = pc.opposite()?;
    let xo = opposite_tw(x, op.cat())?;
    let t = t_truncate(&op, &xo, -n - 1, depth_cap)?;
    let back = pc.cat();
    let validity = match t.validity {
        Validity::From(a) => Validity::UpTo(-a),
        Validity::UpTo(b) => Validity::From(-b),
        Validity::Exact => Validity::Exact,
    };
    let counit = opposite_tw_mor(&t.unit, back)?;
    let unit = opposite_tw_mor(&t.counit, back)?;
    if counit.tgt() != x || unit.src() != x {
        return Err(Error::Internal("double opposite does not return the input".into()));
    }
    Ok(TTriangle {
        x: x.clone(),
        n,
        leq: opposite_tw(&t.geq, back)?,
        geq: opposite_tw(&t.leq, back)?,
        counit,
        unit,
        validity,
        side: Side::Injective,
    })
}

/// Result of the tower route: `τ_{≤n}σ_{≤k}X` for `k = lo-1, ..., hi+1`.
#[derive(Clone, Debug)]
pub struct UnboundedTruncation {
    pub triangle: TTriangle,
    pub tower: Tower,
    pub limit: TowerLimit,
    /// First `k` from which the tower is constant.
    pub stable_at: i64,
    /// Number of tower steps before stabilization.
    pub steps: usize,
}

/// A closed `g: src -> tgt` with `c ∘ g - Dh = r`.
fn lift_through(c: &TwMorphism, src: &TwistedComplex, r: &TwMorphism) -> Result<Option<TwMorphism>> {
    let tgt = c.src();
    let field = src.cat().field();
    let wg = HomWindowComplex::new(src, tgt);
    let wh = HomWindowComplex::new(src, c.tgt());
    let ng = wg.dim(0);
    let nh = wh.dim(-1);
    let dg = wg.diff_matrix(0);
    let dh = wh.diff_matrix(-1);
    let rows_closed = dg.rows();
    let rows_eq = wh.dim(0);
    let mut cols = Vec::with_capacity(ng + nh);
    for k in 0..ng {
        let g = TwMorphism::from_coords(src, tgt, 0, &vector::unit(field, ng, k));
        let mut col = dg.column(k);
        col.extend(tw_compose(c, &g)?.coords());
        cols.push(col);
    }
    for k in 0..nh {
        let mut col = field.zeros(rows_closed);
        col.extend(vector::neg(&dh.column(k)));
        cols.push(col);
    }
    let a = Matrix::from_columns(field, rows_closed + rows_eq, &cols);
    let mut rhs = field.zeros(rows_closed);
    rhs.extend(r.coords());
    Ok(solve_linear(&a, &rhs)?.map(|z| TwMorphism::from_coords(src, tgt, 0, &z[..ng])))
}

/// `τ_{≤n}X` as the limit of `τ_{≤n}σ_{≤k}X` over `k`, with transitions
/// induced by the brutal projections. Past the stabilization index the
/// transitions are checked to be homotopic to the identity and replaced by
/// it. The limit is compared with [`t_truncate`] on `X` itself.
pub fn proj_t_truncate_unbounded(pc: &ProjCat, x: &TwistedComplex, n: i64, depth_cap: usize) -> Result<UnboundedTruncation> {
    pc.check_cat(x.cat())?;
    let (lo, hi) = if x.is_zero_object() { (0, -1) } else { (x.lo(), x.hi()) };
    let ks: Vec<i64> = (lo - 1..=hi + 1).collect();
    let sigma: Vec<TwistedComplex> = ks.iter().map(|&k| brutal_truncate(x, Trunc::Leq(k)).complex).collect();
    let tris = sigma
        .iter()
        .map(|s| t_truncate(pc, s, n, depth_cap))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<TwistedComplex> = tris.iter().map(|t| t.leq.clone()).collect();
    let mut transitions = Vec::with_capacity(entries.len() - 1);
    for j in 0..entries.len() - 1 {
        let p = canonical_map(&sigma[j + 1], &sigma[j]);
        let r = tw_compose(&p, &tris[j + 1].counit)?;
        let g = lift_through(&tris[j].counit, &entries[j + 1], &r)?.ok_or_else(|| {
            Error::Internal(format!("no induced map between truncations at k = {}", ks[j + 1]))
        })?;
        transitions.push(g);
    }
    let last = entries.len() - 1;
    let s = (0..=last).find(|&s| entries[s..].iter().all(|e| *e == entries[last])).unwrap_or(last);
    for (j, t) in transitions.iter_mut().enumerate().skip(s) {
        let id = TwMorphism::identity(&entries[j + 1]);
        if nullhomotopy(&t.sub(&id)?)?.is_none() {
            return Err(Error::Internal(format!("stable transition at k = {} is not homotopic to the identity", ks[j])));
        }
        *t = id;
    }
    let bound = (hi - lo + 2).max(1) as usize;
    if s > bound {
        return Err(Error::Internal(format!("tower did not stabilize within {bound} steps")));
    }
    let tower = Tower::new(TowerDirection::Inverse, entries, transitions, Some(s))?;
    let limit = tower_lim(&tower)?;
    let direct = t_truncate(pc, x, n, depth_cap)?;
    if limit.object != direct.leq {
        return Err(Error::Internal("tower limit differs from the direct truncation".into()));
    }
    Ok(UnboundedTruncation {
        triangle: direct,
        tower,
        limit,
        stable_at: ks[s],
        steps: s,
    })
}
