//! Exact linear algebra over `Q` and `F_p`.
//!
//! Everything above this module reduces its questions (closedness,
//! nullhomotopies, cohomology, lifting) to [`solve_linear`] and
//! [`cohomology_of_pair`].

mod field;
mod matrix;
pub mod vector;

pub use field::{Field, Scalar};
pub use matrix::{Echelon, Matrix};

use crate::error::{Error, Result};

/// Returns some `x` with `a x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero, so the answer only depends
/// on the input.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if a.rows() != b.len() {
        return Err(Error::shape(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    let field = a.field();
    let rhs = Matrix::from_columns(field, b.len(), &[b.to_vec()]);
    let aug = a.hstack(&rhs)?;
    let ech = aug.echelon();
    if ech.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = field.zeros(a.cols());
    for (r, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.reduced.get(r, a.cols()).clone();
    }
    Ok(Some(x))
}

/// A linear system that is solved many times with different right-hand
/// sides. The reduction is done once.
#[derive(Clone, Debug)]
pub struct Solver {
    cols: usize,
    rows: usize,
    /// Reduced `[a | I]`; the right block records the row operations.
    reduced: Matrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &Matrix) -> Solver {
        let aug = a
            .hstack(&Matrix::identity(a.field(), a.rows()))
            .expect("same row count");
        let ech = aug.echelon();
        let pivots: Vec<usize> = ech.pivots.iter().copied().filter(|&p| p < a.cols()).collect();
        Solver {
            cols: a.cols(),
            rows: a.rows(),
            reduced: ech.reduced,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::shape(format!(
                "solver expects right-hand side of length {}, got {}",
                self.rows,
                b.len()
            )));
        }
        let field = self.reduced.field();
        // Transformed right-hand side: T b where T is the recorded row operation.
        let mut tb = field.zeros(self.rows);
        for (r, out) in tb.iter_mut().enumerate() {
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    out.add_mul(self.reduced.get(r, self.cols + k), bk);
                }
            }
        }
        if tb[self.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut x = field.zeros(self.cols);
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = tb[r].clone();
        }
        Ok(Some(x))
    }
}

/// Cohomology `ker(d_out) / im(d_in)` at the middle term of
/// `C_prev --d_in--> C --d_out--> C_next`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub dim: usize,
    /// Columns are cocycles spanning a complement of the coboundaries.
    pub representatives: Matrix,
    d_in: Matrix,
    lifter: Solver,
    d_out: Matrix,
}

/// Decomposition `z = representatives · coeffs + d_in · preimage`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleLift {
    pub coeffs: Vec<Scalar>,
    pub preimage: Vec<Scalar>,
}

impl Cohomology {
    /// Expresses a cocycle in terms of the representatives plus a coboundary.
    pub fn lift(&self, z: &[Scalar]) -> Result<CocycleLift> {
        let dz = self.d_out.mul_vec(z)?;
        if dz.iter().any(|x| !x.is_zero()) {
            return Err(Error::contract("lift of a vector that is not a cocycle"));
        }
        let sol = self
            .lifter
            .solve(z)?
            .ok_or_else(|| Error::Internal("cocycle outside span of representatives".into()))?;
        let (c, p) = sol.split_at(self.dim);
        Ok(CocycleLift {
            coeffs: c.to_vec(),
            preimage: p.to_vec(),
        })
    }

    /// Class of a cocycle in the basis given by the representatives.
    pub fn class_of(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        Ok(self.lift(z)?.coeffs)
    }

    pub fn is_coboundary(&self, z: &[Scalar]) -> Result<bool> {
        Ok(self.class_of(z)?.iter().all(Scalar::is_zero))
    }

    pub fn d_in(&self) -> &Matrix {
        &self.d_in
    }
}

/// Cohomology of two composable maps with `d_out · d_in = 0`.
pub fn cohomology_of_pair(d_in: &Matrix, d_out: &Matrix) -> Result<Cohomology> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::shape(format!(
            "d_in is {}x{} but d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::contract("d_out · d_in is not zero"));
    }
    let image = d_in.image();
    let kernel = d_out.kernel();
    // Pivot columns of [image | kernel] past the image block pick out a
    // complement of the coboundaries inside the cocycles.
    let stacked = image.hstack(&kernel)?;
    let ech = stacked.echelon();
    let chosen: Vec<usize> = ech
        .pivots
        .iter()
        .copied()
        .filter(|&p| p >= image.cols())
        .collect();
    let representatives = stacked.select_columns(&chosen);
    let dim = representatives.cols();
    let lifter = Solver::new(&representatives.hstack(d_in)?);
    Ok(Cohomology {
        dim,
        representatives,
        d_in: d_in.clone(),
        lifter,
        d_out: d_out.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::Prime(2)
    }

    #[test]
    fn solve_zero_case() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, &[&[1]]);
        assert_eq!(solve_linear(&a, &[q.zero()]).unwrap(), Some(vec![q.zero()]));
    }

    #[test]
    fn solve_inconsistent() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, &[&[0]]);
        assert_eq!(solve_linear(&a, &[q.one()]).unwrap(), None);
    }

    #[test]
    fn solve_over_f2_matches_enumeration() {
        let f = f2();
        let a = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
        let b = vec![f.one(), f.one()];
        // Exhaustive search over F_2^2.
        let mut found = Vec::new();
        for x0 in 0..2 {
            for x1 in 0..2 {
                let x = vec![f.from_i64(x0), f.from_i64(x1)];
                if a.mul_vec(&x).unwrap() == b {
                    found.push(x);
                }
            }
        }
        assert_eq!(found, vec![vec![f.zero(), f.one()]]);
        assert_eq!(solve_linear(&a, &b).unwrap(), Some(found[0].clone()));
    }

    #[test]
    fn solve_shape_error() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, &[&[1, 2]]);
        assert!(matches!(
            solve_linear(&a, &[q.one(), q.one()]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn solver_matches_direct_solve() {
        let f = Field::Prime(7);
        let a = Matrix::from_i64(f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let s = Solver::new(&a);
        for b in [[1, 2, 0], [1, 1, 0], [0, 0, 1]] {
            let b: Vec<Scalar> = b.iter().map(|&x| f.from_i64(x)).collect();
            assert_eq!(s.solve(&b).unwrap(), solve_linear(&a, &b).unwrap());
        }
    }

    #[test]
    fn cohomology_trivial_cases() {
        let q = Field::Rational;
        let z = Matrix::zeros(q, 1, 1);
        assert_eq!(cohomology_of_pair(&z, &z).unwrap().dim, 1);
        let one = Matrix::from_i64(q, &[&[1]]);
        assert_eq!(cohomology_of_pair(&one, &z).unwrap().dim, 0);
    }

    #[test]
    fn cohomology_rejects_non_complex() {
        let q = Field::Rational;
        let one = Matrix::from_i64(q, &[&[1]]);
        assert!(matches!(cohomology_of_pair(&one, &one), Err(Error::Contract(_))));
        let wide = Matrix::zeros(q, 1, 2);
        assert!(matches!(cohomology_of_pair(&one, &wide), Err(Error::Shape(_))));
    }

    #[test]
    fn end_complex_of_two_term_identity_is_acyclic_in_degree_zero() {
        // Hom complex of [k -1-> k] with itself. Degree -1: h (k^1 -> k^0).
        // Degree 0: (a, b) with a on degree 0, b on degree 1. Degree 1: c.
        // With the twisted differential (df)_i^j = (-1)^j d f + y f - (-1)^p f x:
        //   d(h) = (h x, x h) = (1, 1) ; d(a, b) = b - a.
        let q = Field::Rational;
        let d_in = Matrix::from_i64(q, &[&[1], &[1]]);
        let d_out = Matrix::from_i64(q, &[&[-1, 1]]);
        let h = cohomology_of_pair(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn lift_round_trip() {
        let q = Field::Rational;
        let d_in = Matrix::from_i64(q, &[&[1], &[1], &[0]]);
        let d_out = Matrix::from_i64(q, &[&[1, -1, 0]]);
        let h = cohomology_of_pair(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 1);
        let z: Vec<Scalar> = [3, 3, 5].iter().map(|&x| q.from_i64(x)).collect();
        let lift = h.lift(&z).unwrap();
        let mut rebuilt = h.representatives.mul_vec(&lift.coeffs).unwrap();
        vector::add_assign(&mut rebuilt, &d_in.mul_vec(&lift.preimage).unwrap());
        assert_eq!(rebuilt, z);
    }
}
