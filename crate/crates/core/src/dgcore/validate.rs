use serde::Serialize;

use super::{DgCat, ObjId};
use crate::error::Result;
use crate::exactlin::{vector, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub location: String,
    /// Canonical text of the nonzero residual (empty for dimension laws).
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> ValidationReport {
        ValidationReport {
            passed: true,
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, axiom: &str, location: String, residual: &[Scalar]) {
        self.passed = false;
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            location,
            residual: residual.iter().map(Scalar::to_canonical).collect(),
        });
    }

    /// Records a violation when `residual` is nonzero.
    pub fn check(&mut self, axiom: &str, location: impl FnOnce() -> String, residual: &[Scalar]) {
        if !vector::is_zero(residual) {
            self.push(axiom, location(), residual);
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.passed &= other.passed;
        self.violations.extend(other.violations);
    }
}

fn basis(cat: &DgCat, a: ObjId, b: ObjId, n: i64) -> Vec<Vec<Scalar>> {
    let d = cat.dim(a, b, n);
    (0..d).map(|k| vector::unit(cat.field(), d, k)).collect()
}

/// Checks every axiom of a dg-category on basis elements: `d² = 0`,
/// Leibniz, associativity, units, the zero-object law and the declared
/// nonpositivity. Fails only when the presentation is not well formed.
pub fn validate_dgcat(cat: &DgCat) -> Result<ValidationReport> {
    cat.check_structure()?;
    let mut rep = ValidationReport::new();
    let objs: Vec<ObjId> = cat.objects().collect();

    for (&(a, b), h) in cat.homs() {
        for n in h.degrees() {
            let dd = cat.diff_matrix(a, b, n + 1).mul(&cat.diff_matrix(a, b, n))?;
            if !dd.is_zero() {
                let res: Vec<Scalar> = (0..dd.rows())
                    .flat_map(|i| dd.row(i).to_vec())
                    .collect();
                rep.push("d^2=0", format!("hom({},{}) degree {n}", cat.name(a), cat.name(b)), &res);
            }
            if cat.is_nonpositive() && n > 0 {
                rep.push(
                    "nonpositive",
                    format!("hom({},{}) degree {n} has dimension {}", cat.name(a), cat.name(b), h.dim(n)),
                    &[],
                );
            }
            if let Some(z) = cat.zero_object() {
                if a == z || b == z {
                    rep.push(
                        "zero-object",
                        format!("hom({},{}) degree {n} is nonzero", cat.name(a), cat.name(b)),
                        &[],
                    );
                }
            }
        }
    }

    // Leibniz on basis pairs.
    for &a in &objs {
        for &b in &objs {
            for p in cat.degrees(a, b) {
                let fs = basis(cat, a, b, p);
                let dfs: Vec<_> = fs.iter().map(|f| cat.diff(a, b, p, f)).collect();
                for &c in &objs {
                    for q in cat.degrees(b, c) {
                        let gs = basis(cat, b, c, q);
                        for (gi, g) in gs.iter().enumerate() {
                            let dg = cat.diff(b, c, q, g);
                            for (fi, f) in fs.iter().enumerate() {
                                let gf = cat.compose(a, b, c, q, g, p, f);
                                let mut res = cat.diff(a, c, p + q, &gf);
                                let t1 = cat.compose(a, b, c, q + 1, &dg, p, f);
                                vector::sub_assign(&mut res, &t1);
                                let t2 = cat.compose(a, b, c, q, g, p + 1, &dfs[fi]);
                                vector::axpy(&mut res, &-cat.field().sign(q), &t2);
                                rep.check(
                                    "leibniz",
                                    || {
                                        format!(
                                            "g=hom^{q}({},{})[{gi}], f=hom^{p}({},{})[{fi}]",
                                            cat.name(b),
                                            cat.name(c),
                                            cat.name(a),
                                            cat.name(b)
                                        )
                                    },
                                    &res,
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    // Associativity on basis triples.
    for &a in &objs {
        for &b in &objs {
            for p in cat.degrees(a, b) {
                let fs = basis(cat, a, b, p);
                for &c in &objs {
                    for q in cat.degrees(b, c) {
                        let gs = basis(cat, b, c, q);
                        for &d in &objs {
                            for r in cat.degrees(c, d) {
                                for (hi, h) in basis(cat, c, d, r).iter().enumerate() {
                                    for (gi, g) in gs.iter().enumerate() {
                                        let hg = cat.compose(b, c, d, r, h, q, g);
                                        for (fi, f) in fs.iter().enumerate() {
                                            let gf = cat.compose(a, b, c, q, g, p, f);
                                            let left = cat.compose(a, c, d, r, h, p + q, &gf);
                                            let right = cat.compose(a, b, d, q + r, &hg, p, f);
                                            rep.check(
                                                "associativity",
                                                || {
                                                    format!(
                                                        "{}->{}->{}->{} degrees ({p},{q},{r}) basis ({fi},{gi},{hi})",
                                                        cat.name(a),
                                                        cat.name(b),
                                                        cat.name(c),
                                                        cat.name(d)
                                                    )
                                                },
                                                &vector::sub(&left, &right),
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Units.
    for &a in &objs {
        let u = cat.unit(a);
        rep.check("unit-closed", || format!("d(1_{})", cat.name(a)), &cat.diff(a, a, 0, u));
        for &b in &objs {
            for p in cat.degrees(a, b) {
                for (fi, f) in basis(cat, a, b, p).iter().enumerate() {
                    let left = cat.compose(a, b, b, 0, cat.unit(b), p, f);
                    rep.check(
                        "unit-left",
                        || format!("1_{} ∘ hom^{p}({},{})[{fi}]", cat.name(b), cat.name(a), cat.name(b)),
                        &vector::sub(&left, f),
                    );
                    let right = cat.compose(a, a, b, p, f, 0, u);
                    rep.check(
                        "unit-right",
                        || format!("hom^{p}({},{})[{fi}] ∘ 1_{}", cat.name(a), cat.name(b), cat.name(a)),
                        &vector::sub(&right, f),
                    );
                }
            }
        }
    }
    Ok(rep)
}
