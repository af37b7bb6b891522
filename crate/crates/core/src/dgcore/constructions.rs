use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Block, Cat, DgCat, DgFunctor, ObjId};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar, Solver};

/// Chosen basis of one hom space of a derived presentation, as columns in
/// the coordinates of the original space.
struct SubBasis {
    embed: Matrix,
    solver: Solver,
}

impl SubBasis {
    fn new(embed: Matrix) -> SubBasis {
        let solver = Solver::new(&embed);
        SubBasis { embed, solver }
    }

    fn coords(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.solver
            .solve(v)?
            .ok_or_else(|| Error::Internal("element outside the chosen subspace".into()))
    }

    fn dim(&self) -> usize {
        self.embed.cols()
    }
}

/// Left truncation of every hom complex: degrees `< 0` kept, degree `0`
/// replaced by the cocycles, positive degrees dropped. Returns the new
/// presentation and the inclusion dg-functor into the original.
pub fn truncate_leq0(cat: &Cat) -> Result<(Cat, DgFunctor)> {
    cat.check_structure()?;
    let field = cat.field();
    let mut bases: BTreeMap<(ObjId, ObjId, i64), SubBasis> = BTreeMap::new();
    let mut out = DgCat::new(field);
    for a in cat.objects() {
        out.add_object(cat.name(a));
    }
    if let Some(z) = cat.zero_object() {
        out.set_zero_object(z)?;
    }
    out.set_nonpositive(true);
    for (&(a, b), h) in cat.homs() {
        for n in h.degrees() {
            if n > 0 {
                continue;
            }
            let embed = if n == 0 {
                cat.diff_matrix(a, b, 0).kernel()
            } else {
                Matrix::identity(field, h.dim(n))
            };
            out.set_dim(a, b, n, embed.cols())?;
            bases.insert((a, b, n), SubBasis::new(embed));
        }
    }
    let get = |a: ObjId, b: ObjId, n: i64| bases.get(&(a, b, n));
    for (&(a, b, n), basis) in &bases {
        if n >= 0 {
            continue;
        }
        let Some(next) = get(a, b, n + 1) else { continue };
        let mut cols = Vec::new();
        for k in 0..basis.dim() {
            let v = basis.embed.column(k);
            cols.push(next.coords(&cat.diff(a, b, n, &v))?);
        }
        out.set_diff(a, b, n, Matrix::from_columns(field, next.dim(), &cols))?;
    }
    for (&(a, b, p), fb) in &bases {
        for c in cat.objects() {
            for (&(b2, c2, q), gb) in bases.range((b, c, i64::MIN)..=(b, c, i64::MAX)) {
                debug_assert!(b2 == b && c2 == c);
                let Some(hb) = get(a, c, p + q) else { continue };
                if cat.comp_matrix((a, b, c, p, q)).is_none() {
                    continue;
                }
                let mut m = Matrix::zeros(field, hb.dim(), gb.dim() * fb.dim());
                for gi in 0..gb.dim() {
                    let g = gb.embed.column(gi);
                    for fi in 0..fb.dim() {
                        let f = fb.embed.column(fi);
                        let gf = hb.coords(&cat.compose(a, b, c, q, &g, p, &f))?;
                        for (r, x) in gf.into_iter().enumerate() {
                            m.set(r, gi * fb.dim() + fi, x);
                        }
                    }
                }
                out.set_comp(a, b, c, p, q, m)?;
            }
        }
    }
    for a in cat.objects() {
        if let Some(ub) = get(a, a, 0) {
            out.set_unit(a, ub.coords(cat.unit(a))?)?;
        }
    }
    let out = Arc::new(out);
    let maps = bases.into_iter().map(|(k, b)| (k, b.embed)).collect();
    let incl = DgFunctor::new(out.clone(), cat.clone(), cat.objects().collect(), maps)?;
    Ok((out, incl))
}

/// Adds a formal zero object, unless one is already designated.
pub fn adjoin_zero(cat: &DgCat) -> DgCat {
    let mut out = cat.clone();
    if out.zero_object().is_some() {
        return out;
    }
    let mut name = "0".to_string();
    while out.names().contains(&name) {
        name.push('\'');
    }
    let z = out.add_object(&name);
    out.set_zero_object(z).expect("fresh object");
    out
}

/// Result of [`additive_closure`]: object `i` of `cat` is the formal sum of
/// `tuples[i]`.
#[derive(Clone, Debug)]
pub struct Closure {
    pub cat: Cat,
    pub tuples: Vec<Vec<ObjId>>,
}

impl Closure {
    pub fn object_of(&self, tuple: &[ObjId]) -> Option<ObjId> {
        self.tuples.iter().position(|t| t == tuple)
    }

    /// Dg-functor sending each base object to its 1-tuple. Every 1-tuple
    /// must be among the closure's objects.
    pub fn embedding(&self, base: &Cat) -> Result<DgFunctor> {
        let mut obj = Vec::new();
        for a in base.objects() {
            obj.push(self.object_of(&[a]).ok_or_else(|| {
                Error::contract(format!("1-tuple ({}) missing from the closure", base.name(a)))
            })?);
        }
        let mut maps = BTreeMap::new();
        for (&(a, b), h) in base.homs() {
            for n in h.degrees() {
                maps.insert((a, b, n), Matrix::identity(base.field(), h.dim(n)));
            }
        }
        DgFunctor::new(base.clone(), self.cat.clone(), obj, maps)
    }
}

fn tuple_name(base: &DgCat, t: &[ObjId]) -> String {
    let parts: Vec<&str> = t.iter().map(|&a| base.name(a)).collect();
    format!("({})", parts.join(","))
}

/// The full subcategory of formal direct sums on the given tuples (the
/// empty tuple is always added and is the zero object). Homs are matrices
/// of homs, laid out row by row as in [`Block`].
pub fn additive_closure(base: &Cat, tuples: &[Vec<ObjId>]) -> Result<Closure> {
    base.check_structure()?;
    let mut tuples: Vec<Vec<ObjId>> = tuples.to_vec();
    for t in &tuples {
        for &a in t {
            base.check_obj(a)?;
        }
    }
    if !tuples.iter().any(Vec::is_empty) {
        tuples.push(Vec::new());
    }
    let field = base.field();
    let mut out = DgCat::new(field);
    for t in &tuples {
        out.add_object(&tuple_name(base, t));
    }
    out.set_zero_object(tuples.iter().position(Vec::is_empty).unwrap())?;
    out.set_nonpositive(base.is_nonpositive());

    let mut degrees: Vec<i64> = base.homs().values().flat_map(|h| h.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();

    for (x, s) in tuples.iter().enumerate() {
        for (y, t) in tuples.iter().enumerate() {
            for &n in &degrees {
                out.set_dim(x, y, n, Block::space_dim(base, s, t, n))?;
            }
        }
    }
    for (x, s) in tuples.iter().enumerate() {
        for (y, t) in tuples.iter().enumerate() {
            for &n in &degrees {
                let dim = out.dim(x, y, n);
                if dim == 0 || out.dim(x, y, n + 1) == 0 {
                    continue;
                }
                let cols: Vec<Vec<Scalar>> = (0..dim)
                    .map(|k| {
                        let v = crate::exactlin::vector::unit(field, dim, k);
                        Block::from_coords(base, s, t, n, &v).diff(base).coords()
                    })
                    .collect();
                out.set_diff(x, y, n, Matrix::from_columns(field, out.dim(x, y, n + 1), &cols))?;
            }
        }
    }
    for (x, s) in tuples.iter().enumerate() {
        for (y, m) in tuples.iter().enumerate() {
            for (z, t) in tuples.iter().enumerate() {
                for &p in &degrees {
                    let dp = out.dim(x, y, p);
                    if dp == 0 {
                        continue;
                    }
                    for &q in &degrees {
                        let dq = out.dim(y, z, q);
                        let dr = out.dim(x, z, p + q);
                        if dq == 0 || dr == 0 {
                            continue;
                        }
                        let mut mat = Matrix::zeros(field, dr, dq * dp);
                        for gi in 0..dq {
                            let g = Block::from_coords(base, m, t, q, &crate::exactlin::vector::unit(field, dq, gi));
                            for fi in 0..dp {
                                let f = Block::from_coords(base, s, m, p, &crate::exactlin::vector::unit(field, dp, fi));
                                for (r, v) in Block::compose(base, &g, &f).coords().into_iter().enumerate() {
                                    mat.set(r, gi * dp + fi, v);
                                }
                            }
                        }
                        out.set_comp(x, y, z, p, q, mat)?;
                    }
                }
            }
        }
    }
    for (x, s) in tuples.iter().enumerate() {
        out.set_unit(x, Block::identity(base, s).coords())?;
    }
    Ok(Closure {
        cat: Arc::new(out),
        tuples,
    })
}

/// Same objects, `hom^op(a,b) = hom(b,a)`, and `g ∘_op f = (-1)^{|f||g|} f ∘ g`.
pub fn opposite_cat(cat: &DgCat) -> DgCat {
    let field = cat.field();
    let mut out = DgCat::new(field);
    for a in cat.objects() {
        out.add_object(cat.name(a));
    }
    if let Some(z) = cat.zero_object() {
        out.set_zero_object(z).unwrap();
    }
    out.set_nonpositive(cat.is_nonpositive());
    for (&(a, b), h) in cat.homs() {
        for n in h.degrees() {
            out.set_dim(b, a, n, h.dim(n)).unwrap();
        }
    }
    for (&(a, b), h) in cat.homs() {
        for (&n, d) in &h.diff {
            out.set_diff(b, a, n, d.clone()).unwrap();
        }
    }
    // Original key (c, b, a, q, p) composes g: c -> b (degree q) then
    // f: b -> a (degree p); columns f * dq + g.
    for (&(c, b, a, q, p), m) in cat.comp_tensors() {
        let dq = cat.dim(c, b, q);
        let dp = cat.dim(b, a, p);
        let sign = field.sign(p * q);
        let mut mat = Matrix::zeros(field, m.rows(), m.cols());
        for gi in 0..dq {
            for fi in 0..dp {
                for r in 0..m.rows() {
                    let x = m.get(r, fi * dq + gi);
                    if !x.is_zero() {
                        mat.set(r, gi * dp + fi, x * &sign);
                    }
                }
            }
        }
        out.set_comp(a, b, c, p, q, mat).unwrap();
    }
    for a in cat.objects() {
        out.set_unit(a, cat.unit(a).to_vec()).unwrap();
    }
    out
}
