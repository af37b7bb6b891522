//! Presented dg-categories: finitely many objects, graded hom complexes with
//! chosen bases, and structure constants for differential and composition.

mod constructions;
mod functor;
pub mod sums;
mod validate;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{cohomology_of_pair, Cohomology, Field, Matrix, Scalar};

pub use constructions::{additive_closure, adjoin_zero, opposite_cat, truncate_leq0, Closure};
pub use functor::DgFunctor;
pub use sums::Block;
pub use validate::{validate_dgcat, ValidationReport, Violation};

pub type ObjId = usize;
pub type Cat = Arc<DgCat>;

/// One hom complex: dimensions per degree and the differential
/// `d^n: hom^n -> hom^{n+1}` (a `dim(n+1) x dim(n)` matrix).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomSpace {
    pub dims: BTreeMap<i64, usize>,
    pub diff: BTreeMap<i64, Matrix>,
}

impl HomSpace {
    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&n, _)| n)
            .collect()
    }
}

/// `(a, b, c, p, q)`: composition `hom^q(b,c) x hom^p(a,b) -> hom^{p+q}(a,c)`.
pub type CompKey = (ObjId, ObjId, ObjId, i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCat {
    field: Field,
    names: Vec<String>,
    zero: Option<ObjId>,
    nonpositive: bool,
    homs: BTreeMap<(ObjId, ObjId), HomSpace>,
    /// Columns are indexed by `g * dim^p(a,b) + f`.
    comp: BTreeMap<CompKey, Matrix>,
    units: Vec<Vec<Scalar>>,
}

impl DgCat {
    pub fn new(field: Field) -> DgCat {
        DgCat {
            field,
            names: Vec::new(),
            zero: None,
            nonpositive: false,
            homs: BTreeMap::new(),
            comp: BTreeMap::new(),
            units: Vec::new(),
        }
    }

    /// The base field viewed as a dg-category with one object.
    pub fn field_category(field: Field) -> DgCat {
        let mut c = DgCat::new(field);
        let k = c.add_object("k");
        c.set_dim(k, k, 0, 1).unwrap();
        c.set_comp(k, k, k, 0, 0, Matrix::from_i64(field, &[&[1]]))
            .unwrap();
        c.set_unit(k, vec![field.one()]).unwrap();
        c.set_nonpositive(true);
        c
    }

    pub fn add_object(&mut self, name: &str) -> ObjId {
        self.names.push(name.to_string());
        self.units.push(Vec::new());
        self.names.len() - 1
    }

    pub fn set_zero_object(&mut self, a: ObjId) -> Result<()> {
        self.check_obj(a)?;
        self.zero = Some(a);
        Ok(())
    }

    pub fn set_nonpositive(&mut self, flag: bool) {
        self.nonpositive = flag;
    }

    /// Sets `dim hom^n(a,b)`. Any differential or composition data touching
    /// this space is cleared, and the unit is reset when `a = b, n = 0`.
    pub fn set_dim(&mut self, a: ObjId, b: ObjId, n: i64, dim: usize) -> Result<()> {
        self.check_obj(a)?;
        self.check_obj(b)?;
        let h = self.homs.entry((a, b)).or_default();
        if dim == 0 {
            h.dims.remove(&n);
        } else {
            h.dims.insert(n, dim);
        }
        h.diff.remove(&n);
        h.diff.remove(&(n - 1));
        self.comp.retain(|&(x, y, z, p, q), _| {
            !((x, y, p) == (a, b, n) || (y, z, q) == (a, b, n) || ((x, z) == (a, b) && p + q == n))
        });
        if a == b && n == 0 {
            self.units[a] = self.field.zeros(dim);
        }
        Ok(())
    }

    pub fn set_diff(&mut self, a: ObjId, b: ObjId, n: i64, d: Matrix) -> Result<()> {
        let (r, c) = (self.dim(a, b, n + 1), self.dim(a, b, n));
        if d.rows() != r || d.cols() != c {
            return Err(Error::Structural(format!(
                "differential d^{n} on hom({},{}) should be {r}x{c}, got {}x{}",
                self.name(a),
                self.name(b),
                d.rows(),
                d.cols()
            )));
        }
        self.check_field(d.field())?;
        if !d.is_zero() {
            self.homs.entry((a, b)).or_default().diff.insert(n, d);
        } else if let Some(h) = self.homs.get_mut(&(a, b)) {
            h.diff.remove(&n);
        }
        Ok(())
    }

    pub fn set_comp(&mut self, a: ObjId, b: ObjId, c: ObjId, p: i64, q: i64, m: Matrix) -> Result<()> {
        let rows = self.dim(a, c, p + q);
        let cols = self.dim(b, c, q) * self.dim(a, b, p);
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::Structural(format!(
                "composition tensor ({},{},{}; p={p}, q={q}) should be {rows}x{cols}, got {}x{}",
                self.name(a),
                self.name(b),
                self.name(c),
                m.rows(),
                m.cols()
            )));
        }
        self.check_field(m.field())?;
        if m.is_zero() {
            self.comp.remove(&(a, b, c, p, q));
        } else {
            self.comp.insert((a, b, c, p, q), m);
        }
        Ok(())
    }

    pub fn set_unit(&mut self, a: ObjId, coords: Vec<Scalar>) -> Result<()> {
        self.check_obj(a)?;
        if coords.len() != self.dim(a, a, 0) {
            return Err(Error::Structural(format!(
                "unit of {} has {} coordinates, hom^0 has dimension {}",
                self.name(a),
                coords.len(),
                self.dim(a, a, 0)
            )));
        }
        self.units[a] = coords;
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_objects(&self) -> usize {
        self.names.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.names.len()
    }

    pub fn name(&self, a: ObjId) -> &str {
        self.names.get(a).map_or("?", String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjId> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn zero_object(&self) -> Option<ObjId> {
        self.zero
    }

    /// The flag as declared; [`validate_dgcat`] checks it against the data.
    pub fn is_nonpositive(&self) -> bool {
        self.nonpositive
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Option<&HomSpace> {
        self.homs.get(&(a, b))
    }

    pub fn homs(&self) -> &BTreeMap<(ObjId, ObjId), HomSpace> {
        &self.homs
    }

    pub fn comp_tensors(&self) -> &BTreeMap<CompKey, Matrix> {
        &self.comp
    }

    pub fn dim(&self, a: ObjId, b: ObjId, n: i64) -> usize {
        self.homs.get(&(a, b)).map_or(0, |h| h.dim(n))
    }

    pub fn degrees(&self, a: ObjId, b: ObjId) -> Vec<i64> {
        self.homs.get(&(a, b)).map_or(Vec::new(), HomSpace::degrees)
    }

    /// `d^n` on `hom(a,b)`, as a (possibly zero) matrix.
    pub fn diff_matrix(&self, a: ObjId, b: ObjId, n: i64) -> Matrix {
        match self.homs.get(&(a, b)).and_then(|h| h.diff.get(&n)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.field, self.dim(a, b, n + 1), self.dim(a, b, n)),
        }
    }

    pub fn diff(&self, a: ObjId, b: ObjId, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        match self.homs.get(&(a, b)).and_then(|h| h.diff.get(&n)) {
            Some(m) => m.mul_vec(v).expect("element of the right dimension"),
            None => self.field.zeros(self.dim(a, b, n + 1)),
        }
    }

    pub fn comp_matrix(&self, key: CompKey) -> Option<&Matrix> {
        self.comp.get(&key)
    }

    /// `g ∘ f` for `f ∈ hom^p(a,b)`, `g ∈ hom^q(b,c)`.
    pub fn compose(&self, a: ObjId, b: ObjId, c: ObjId, q: i64, g: &[Scalar], p: i64, f: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.field.zeros(self.dim(a, c, p + q));
        self.compose_into(&mut out, a, b, c, q, g, p, f);
        out
    }

    /// `out += g ∘ f`.
    #[allow(clippy::too_many_arguments)]
    pub fn compose_into(&self, out: &mut [Scalar], a: ObjId, b: ObjId, c: ObjId, q: i64, g: &[Scalar], p: i64, f: &[Scalar]) {
        let Some(m) = self.comp.get(&(a, b, c, p, q)) else {
            return;
        };
        let dp = f.len();
        for (gi, gx) in g.iter().enumerate() {
            if gx.is_zero() {
                continue;
            }
            for (fi, fx) in f.iter().enumerate() {
                if fx.is_zero() {
                    continue;
                }
                let coef = gx * fx;
                let col = gi * dp + fi;
                for (r, o) in out.iter_mut().enumerate() {
                    let t = m.get(r, col);
                    if !t.is_zero() {
                        o.add_mul(t, &coef);
                    }
                }
            }
        }
    }

    pub fn unit(&self, a: ObjId) -> &[Scalar] {
        &self.units[a]
    }

    pub fn units(&self) -> &[Vec<Scalar>] {
        &self.units
    }

    /// `H^n(hom(a,b))`.
    pub fn hom_cohomology(&self, a: ObjId, b: ObjId, n: i64) -> Result<Cohomology> {
        self.check_obj(a)?;
        self.check_obj(b)?;
        cohomology_of_pair(&self.diff_matrix(a, b, n - 1), &self.diff_matrix(a, b, n))
    }

    pub(crate) fn check_obj(&self, a: ObjId) -> Result<()> {
        if a >= self.names.len() {
            return Err(Error::UnknownObject(format!("#{a}")));
        }
        Ok(())
    }

    fn check_field(&self, f: Field) -> Result<()> {
        if f != self.field {
            return Err(Error::FieldMismatch(format!("{f} in a category over {}", self.field)));
        }
        Ok(())
    }

    /// Checks that all stored tensors match the stored dimensions.
    pub fn check_structure(&self) -> Result<()> {
        for (&(a, b), h) in &self.homs {
            self.check_obj(a)?;
            self.check_obj(b)?;
            for (&n, d) in &h.diff {
                if d.rows() != h.dim(n + 1) || d.cols() != h.dim(n) {
                    return Err(Error::Structural(format!(
                        "differential d^{n} on hom({},{})",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        for (&(a, b, c, p, q), m) in &self.comp {
            if m.rows() != self.dim(a, c, p + q) || m.cols() != self.dim(b, c, q) * self.dim(a, b, p) {
                return Err(Error::Structural(format!(
                    "composition tensor ({},{},{}; p={p}, q={q})",
                    self.name(a),
                    self.name(b),
                    self.name(c)
                )));
            }
        }
        for a in self.objects() {
            if self.units[a].len() != self.dim(a, a, 0) {
                return Err(Error::Structural(format!("unit of {}", self.name(a))));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
