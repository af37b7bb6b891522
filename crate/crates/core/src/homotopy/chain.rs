use crate::error::{Error, Result};
use crate::exactlin::{cohomology_of_pair, solve_linear, vector, Field, Matrix, Scalar};

/// A bounded cochain complex of finite-dimensional vector spaces;
/// `dims[k]` is the dimension in degree `lo + k` and `d[k]` goes from there
/// to the next degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinComplex {
    pub field: Field,
    pub lo: i64,
    pub dims: Vec<usize>,
    pub d: Vec<Matrix>,
}

impl FinComplex {
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, d: Vec<Matrix>) -> Result<FinComplex> {
        if d.len() + 1 != dims.len().max(1) {
            return Err(Error::shape("need one differential between consecutive degrees"));
        }
        for (k, m) in d.iter().enumerate() {
            if m.cols() != dims[k] || m.rows() != dims[k + 1] {
                return Err(Error::shape(format!("differential in degree {} has the wrong shape", lo + k as i64)));
            }
            if k > 0 && !m.mul(&d[k - 1])?.is_zero() {
                return Err(Error::contract(format!("d^2 != 0 at degree {}", lo + k as i64)));
            }
        }
        Ok(FinComplex { field, lo, dims, d })
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, p: i64) -> usize {
        if p < self.lo {
            return 0;
        }
        self.dims.get((p - self.lo) as usize).copied().unwrap_or(0)
    }

    /// `d: C^p -> C^{p+1}`, zero outside the stored range.
    pub fn diff(&self, p: i64) -> Matrix {
        if p >= self.lo && p < self.hi() {
            self.d[(p - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(p + 1), self.dim(p))
        }
    }
}

/// A degree-preserving map of [`FinComplex`]es.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub src: FinComplex,
    pub tgt: FinComplex,
    /// Map in degree `p`, looked up by `p`; missing degrees are zero.
    pub maps: std::collections::BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(src: FinComplex, tgt: FinComplex, maps: std::collections::BTreeMap<i64, Matrix>) -> Result<ChainMap> {
        let f = ChainMap { src, tgt, maps };
        for (&p, m) in &f.maps {
            if m.rows() != f.tgt.dim(p) || m.cols() != f.src.dim(p) {
                return Err(Error::shape(format!("map in degree {p} has the wrong shape")));
            }
        }
        for p in f.lo()..=f.hi() {
            let a = f.tgt.diff(p).mul(&f.at(p))?;
            let b = f.at(p + 1).mul(&f.src.diff(p))?;
            if a != b {
                return Err(Error::contract(format!("not a chain map at degree {p}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &FinComplex) -> ChainMap {
        let maps = (c.lo..=c.hi()).map(|p| (p, Matrix::identity(c.field, c.dim(p)))).collect();
        ChainMap {
            src: c.clone(),
            tgt: c.clone(),
            maps,
        }
    }

    fn lo(&self) -> i64 {
        self.src.lo.min(self.tgt.lo) - 1
    }

    fn hi(&self) -> i64 {
        self.src.hi().max(self.tgt.hi()) + 1
    }

    pub fn at(&self, p: i64) -> Matrix {
        self.maps
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.src.field, self.tgt.dim(p), self.src.dim(p)))
    }

    /// Whether `H^p(f)` is bijective.
    pub fn is_quasi_iso_at(&self, p: i64) -> Result<bool> {
        let hs = cohomology_of_pair(&self.src.diff(p - 1), &self.src.diff(p))?;
        let ht = cohomology_of_pair(&self.tgt.diff(p - 1), &self.tgt.diff(p))?;
        if hs.dim != ht.dim {
            return Ok(false);
        }
        let fp = self.at(p);
        let cols: Vec<Vec<Scalar>> = hs
            .representatives
            .columns()
            .iter()
            .map(|z| ht.class_of(&fp.mul_vec(z)?))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.src.field, ht.dim, &cols).rank() == ht.dim)
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        for p in self.lo()..=self.hi() {
            if !self.is_quasi_iso_at(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Given `y ∈ W^p` and `x' ∈ V^{p+1}` with `dy = f(x')`, finds `x ∈ V^p` and
/// `z ∈ W^{p-1}` with `dx = x'` and `y - dz = f(x)`. `z = 0` is tried
/// first. `None` means no such pair exists, which for a quasi-isomorphism
/// cannot happen.
pub fn quasiiso_lift(f: &ChainMap, p: i64, y: &[Scalar], x1: &[Scalar]) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>> {
    let field = f.src.field;
    let (dv, dw, fp) = (f.src.diff(p), f.tgt.diff(p - 1), f.at(p));
    if y.len() != f.tgt.dim(p) || x1.len() != f.src.dim(p + 1) {
        return Err(Error::shape("witness vectors have the wrong length"));
    }
    if f.tgt.diff(p).mul_vec(y)? != f.at(p + 1).mul_vec(x1)? {
        return Err(Error::contract("dy != f(x')"));
    }
    let zero_z = field.zeros(f.tgt.dim(p - 1));
    let joint = fp.vstack(&dv)?;
    let rhs = [y, x1].concat();
    if let Some(x) = solve_linear(&joint, &rhs)? {
        return Ok(Some((x, zero_z)));
    }
    let Some(x0) = solve_linear(&dv, x1)? else {
        return Ok(None);
    };
    let target = vector::sub(y, &fp.mul_vec(&x0)?);
    let cycles = dv.kernel();
    let sys = fp.mul(&cycles)?.hstack(&dw)?;
    let Some(sol) = solve_linear(&sys, &target)? else {
        return Ok(None);
    };
    let (c, z) = sol.split_at(cycles.cols());
    let mut x = x0;
    vector::add_assign(&mut x, &cycles.mul_vec(c)?);
    Ok(Some((x, z.to_vec())))
}
