use super::algebra::AlgebraPresentation;
use crate::dgcore::ValidationReport;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar, Solver};

/// A finite-dimensional right module, given by one action matrix per
/// algebra basis element: `m · b_k = action[k] m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpModule {
    field: Field,
    dim: usize,
    action: Vec<Matrix>,
}

impl FpModule {
    /// Builds and checks the module laws.
    pub fn new(alg: &AlgebraPresentation, dim: usize, action: Vec<Matrix>) -> Result<FpModule> {
        if action.len() != alg.dim() || action.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::Structural(format!(
                "a module of dimension {dim} needs {} action matrices of size {dim}x{dim}",
                alg.dim()
            )));
        }
        let m = FpModule {
            field: alg.field(),
            dim,
            action,
        };
        let rep = m.validate(alg);
        if !rep.passed {
            let v = &rep.violations[0];
            return Err(Error::Invalid(format!("module fails {} at {}", v.axiom, v.location)));
        }
        Ok(m)
    }

    pub fn zero(alg: &AlgebraPresentation) -> FpModule {
        FpModule {
            field: alg.field(),
            dim: 0,
            action: vec![Matrix::zeros(alg.field(), 0, 0); alg.dim()],
        }
    }

    pub(crate) fn from_parts(field: Field, dim: usize, action: Vec<Matrix>) -> FpModule {
        FpModule { field, dim, action }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// The matrix of `m ↦ m · x`.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dim, self.dim);
        for (k, xk) in x.iter().enumerate() {
            if !xk.is_zero() {
                out = out.add(&self.action[k].scale(xk)).expect("same shape");
            }
        }
        out
    }

    /// `m · 1 = m` and `(m · b_i) · b_j = m · (b_i b_j)`.
    pub fn validate(&self, alg: &AlgebraPresentation) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let id = Matrix::identity(self.field, self.dim);
        let u = self.act(alg.unit()).sub(&id).expect("same shape");
        rep.check("module-unit", || "1".into(), &flatten(&u));
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.action[j].mul(&self.action[i]).expect("square");
                let rhs = self.act(&alg.mul(&alg.basis(i), &alg.basis(j)));
                rep.check(
                    "module-associativity",
                    || format!("({},{})", alg.names()[i], alg.names()[j]),
                    &flatten(&lhs.sub(&rhs).expect("same shape")),
                );
            }
        }
        rep
    }

    /// `dim M e_i` for each listed idempotent.
    pub fn dim_vector(&self, alg: &AlgebraPresentation) -> Vec<usize> {
        alg.idempotents().iter().map(|e| self.act(e).rank()).collect()
    }

    /// Basis of `M e`.
    pub fn corner(&self, e: &[Scalar]) -> Matrix {
        self.act(e).image()
    }

    /// Basis of `M J`.
    pub fn radical_part(&self, alg: &AlgebraPresentation) -> Matrix {
        let rad = alg.radical();
        let mut cols = Vec::new();
        for r in 0..rad.cols() {
            cols.extend(self.act(&rad.column(r)).columns());
        }
        Matrix::from_columns(self.field, self.dim, &cols).image()
    }

    /// The submodule `v R` generated by one element.
    pub fn generated(&self, v: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self
            .action
            .iter()
            .map(|a| a.mul_vec(v).expect("element of the module"))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).image()
    }

    /// Dimension followed by the rank of every action matrix; equal for
    /// isomorphic modules.
    pub fn invariants(&self) -> Vec<usize> {
        let mut out = vec![self.dim];
        out.extend(self.action.iter().map(Matrix::rank));
        out
    }

    /// The submodule spanned by the columns of `basis` (linearly
    /// independent), in the coordinates of that basis.
    pub fn submodule(&self, basis: &Matrix) -> Result<FpModule> {
        let solver = Solver::new(basis);
        let n = basis.cols();
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let img = a.mul(basis)?;
            let mut cols = Vec::with_capacity(n);
            for c in 0..n {
                let x = solver
                    .solve(&img.column(c))?
                    .ok_or_else(|| Error::contract("subspace is not closed under the action"))?;
                cols.push(x);
            }
            action.push(Matrix::from_columns(self.field, n, &cols));
        }
        Ok(FpModule::from_parts(self.field, n, action))
    }
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect()
}

/// The quotient `ker(d_out) / im(d_in)` of modules, where `d_in` and
/// `d_out` are module maps out of and into `m`. Coordinates are those of
/// the cohomology representatives.
pub fn subquotient(m: &FpModule, d_in: &Matrix, d_out: &Matrix) -> Result<FpModule> {
    let h = crate::exactlin::cohomology_of_pair(d_in, d_out)?;
    let reps = &h.representatives;
    let mut action = Vec::with_capacity(m.action.len());
    for a in &m.action {
        let mut cols = Vec::with_capacity(h.dim);
        for c in 0..h.dim {
            cols.push(h.class_of(&a.mul_vec(&reps.column(c))?)?);
        }
        action.push(Matrix::from_columns(m.field, h.dim, &cols));
    }
    Ok(FpModule::from_parts(m.field, h.dim, action))
}

pub(crate) fn contains(span: &Matrix, v: &[Scalar]) -> bool {
    let rank = span.rank();
    let m = span
        .hstack(&Matrix::from_columns(span.field(), span.rows(), &[v.to_vec()]))
        .expect("same rows");
    m.rank() == rank
}

pub(crate) fn join(a: &Matrix, b: &Matrix) -> Matrix {
    a.hstack(b).expect("same rows").image()
}
