use crate::dgcore::ValidationReport;
use crate::error::{Error, Result};
use crate::exactlin::{vector, Field, Matrix, Scalar};

/// A finite-dimensional algebra with a chosen basis, structure constants,
/// a complete set of primitive orthogonal idempotents and a basis of the
/// radical.
///
/// Only basic split algebras are accepted: `e R e / e J e` is the field for
/// every listed idempotent `e`, and `e_i R e_j ⊆ J` for `i != j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: Field,
    names: Vec<String>,
    /// `dim x dim^2`; column `i * dim + j` holds `b_i b_j`.
    mult: Matrix,
    unit: Vec<Scalar>,
    idempotents: Vec<Vec<Scalar>>,
    /// Columns span the radical.
    radical: Matrix,
}

impl AlgebraPresentation {
    /// Builds and validates; any failed law is reported as `Invalid`.
    pub fn new(
        field: Field,
        names: Vec<String>,
        mult: Matrix,
        unit: Vec<Scalar>,
        idempotents: Vec<Vec<Scalar>>,
        radical: Matrix,
    ) -> Result<AlgebraPresentation> {
        let d = names.len();
        if mult.rows() != d || mult.cols() != d * d {
            return Err(Error::Structural(format!("multiplication table should be {d}x{}", d * d)));
        }
        if unit.len() != d || idempotents.iter().any(|e| e.len() != d) || radical.rows() != d {
            return Err(Error::Structural("unit, idempotents and radical need one coordinate per basis element".into()));
        }
        for m in [&mult, &radical] {
            if m.field() != field {
                return Err(Error::FieldMismatch("algebra data over a different field".into()));
            }
        }
        let alg = AlgebraPresentation {
            field,
            names,
            mult,
            unit,
            idempotents,
            radical: radical.image(),
        };
        let rep = alg.validate();
        if !rep.passed {
            let v = &rep.violations[0];
            return Err(Error::Invalid(format!(
                "algebra fails {} at {} ({} violations)",
                v.axiom,
                v.location,
                rep.violations.len()
            )));
        }
        Ok(alg)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mult_table(&self) -> &Matrix {
        &self.mult
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn radical(&self) -> &Matrix {
        &self.radical
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        vector::unit(self.field, self.dim(), i)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let mut out = self.field.zeros(d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (r, o) in out.iter_mut().enumerate() {
                    let t = self.mult.get(r, i * d + j);
                    if !t.is_zero() {
                        o.add_mul(t, &c);
                    }
                }
            }
        }
        out
    }

    /// The span of `{x b y : b in the basis}` as columns, reduced to a basis.
    pub fn sandwich(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|k| self.mul(&self.mul(x, &self.basis(k)), y))
            .collect();
        Matrix::from_columns(self.field, self.dim(), &cols).image()
    }

    /// `R^op`: same basis, `b_i ·op b_j = b_j b_i`.
    pub fn opposite(&self) -> AlgebraPresentation {
        let d = self.dim();
        let mut mult = Matrix::zeros(self.field, d, d * d);
        for i in 0..d {
            for j in 0..d {
                for r in 0..d {
                    mult.set(r, i * d + j, self.mult.get(r, j * d + i).clone());
                }
            }
        }
        AlgebraPresentation {
            mult,
            ..self.clone()
        }
    }

    /// Associativity, unit, idempotent and radical laws.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let d = self.dim();
        let f = self.field;
        for i in 0..d {
            let bi = self.basis(i);
            rep.check("unit", || format!("1*{}", self.names[i]), &vector::sub(&self.mul(&self.unit, &bi), &bi));
            rep.check("unit", || format!("{}*1", self.names[i]), &vector::sub(&self.mul(&bi, &self.unit), &bi));
            for j in 0..d {
                let bij = self.mul(&bi, &self.basis(j));
                for k in 0..d {
                    let bk = self.basis(k);
                    let res = vector::sub(&self.mul(&bij, &bk), &self.mul(&bi, &self.mul(&self.basis(j), &bk)));
                    rep.check(
                        "associativity",
                        || format!("({},{},{})", self.names[i], self.names[j], self.names[k]),
                        &res,
                    );
                }
            }
        }
        let mut total = f.zeros(d);
        for (a, ea) in self.idempotents.iter().enumerate() {
            vector::add_assign(&mut total, ea);
            for (b, eb) in self.idempotents.iter().enumerate() {
                let mut res = self.mul(ea, eb);
                if a == b {
                    vector::sub_assign(&mut res, ea);
                }
                rep.check("orthogonal-idempotents", || format!("e{}e{}", a + 1, b + 1), &res);
            }
        }
        rep.check("idempotents-sum-to-one", || "sum".into(), &vector::sub(&total, &self.unit));
        let rad = &self.radical;
        let rank = rad.cols();
        let contains = |v: &[Scalar]| -> bool {
            let m = rad.hstack(&Matrix::from_columns(f, d, &[v.to_vec()])).expect("same rows");
            m.rank() == rank
        };
        for r in 0..rank {
            let x = rad.column(r);
            for k in 0..d {
                let bk = self.basis(k);
                for (side, v) in [("left", self.mul(&bk, &x)), ("right", self.mul(&x, &bk))] {
                    if !contains(&v) {
                        rep.push("radical-ideal", format!("{side} multiple of radical vector {r} by {}", self.names[k]), &v);
                    }
                }
            }
        }
        let mut power = rad.clone();
        for _ in 0..=d {
            if power.cols() == 0 {
                break;
            }
            let mut cols = Vec::new();
            for a in 0..power.cols() {
                for b in 0..rank {
                    cols.push(self.mul(&power.column(a), &rad.column(b)));
                }
            }
            power = Matrix::from_columns(f, d, &cols).image();
        }
        if power.cols() != 0 {
            rep.push("radical-nilpotent", "J^(dim+1)".into(), &power.column(0));
        }
        // e_a R e_b modulo J is k on the diagonal and zero off it.
        for (a, ea) in self.idempotents.iter().enumerate() {
            for (b, eb) in self.idempotents.iter().enumerate() {
                let full = self.sandwich(ea, eb);
                let span = rad.hstack(&full).expect("same rows").rank() - rank;
                let want = usize::from(a == b);
                if span != want {
                    rep.push(
                        "basic-split",
                        format!("e{}Re{} has dimension {span} modulo the radical, expected {want}", a + 1, b + 1),
                        &[f.one()],
                    );
                }
            }
        }
        rep
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `R = k`.
pub fn ground_field(field: Field) -> AlgebraPresentation {
    AlgebraPresentation::new(
        field,
        names(&["1"]),
        Matrix::from_i64(field, &[&[1]]),
        vec![field.one()],
        vec![vec![field.one()]],
        Matrix::zeros(field, 1, 0),
    )
    .expect("the field is a valid algebra")
}

/// Upper triangular 2x2 matrices `k A_2`, basis `e1 = E11`, `e2 = E22`,
/// `a = E12`. Then `e1 R e2 = k a` and `e2 R e1 = 0`, so
/// `Hom(P2, P1)` is one-dimensional and `Hom(P1, P2) = 0`.
pub fn upper_triangular_a2(field: Field) -> AlgebraPresentation {
    let d = 3;
    let mut m = Matrix::zeros(field, d, d * d);
    // e1 e1 = e1, e2 e2 = e2, e1 a = a, a e2 = a.
    for (i, j, r) in [(0, 0, 0), (1, 1, 1), (0, 2, 2), (2, 1, 2)] {
        m.set(r, i * d + j, field.one());
    }
    let e = |k: usize| vector::unit(field, d, k);
    AlgebraPresentation::new(
        field,
        names(&["e1", "e2", "a"]),
        m,
        vector::add(&e(0), &e(1)),
        vec![e(0), e(1)],
        Matrix::from_columns(field, d, &[e(2)]),
    )
    .expect("kA2 is a valid algebra")
}

/// `k[x]/(x^2)`, basis `1, x`.
pub fn truncated_polynomial(field: Field) -> AlgebraPresentation {
    let mut m = Matrix::zeros(field, 2, 4);
    // 1*1 = 1, 1*x = x, x*1 = x, x*x = 0.
    m.set(0, 0, field.one());
    m.set(1, 1, field.one());
    m.set(1, 2, field.one());
    AlgebraPresentation::new(
        field,
        names(&["1", "x"]),
        m,
        vector::unit(field, 2, 0),
        vec![vector::unit(field, 2, 0)],
        Matrix::from_columns(field, 2, &[vector::unit(field, 2, 1)]),
    )
    .expect("k[x]/x^2 is a valid algebra")
}
