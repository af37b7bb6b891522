//! JSON file formats: presentations (`dgcat-v1`), twisted complexes and
//! morphisms (`tw-v1`), algebras (`alg-v1`), modules (`mod-v1`) and
//! reports (`cert-v1`).
//!
//! Rational entries are written as `"p/q"` strings, `F_p` entries as
//! integers in `[0, p)`. Keys are sorted on output, so emitting the same
//! value twice gives the same bytes.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dgcore::{Block, Cat, DgCat, ObjId, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar};
use crate::tstruct::{AlgebraPresentation, FpModule};
use crate::twisted::{TwMorphism, TwistedComplex};

pub const DGCAT: &str = "dgcat-v1";
pub const TW: &str = "tw-v1";
pub const ALG: &str = "alg-v1";
pub const MODULE: &str = "mod-v1";
pub const CERT: &str = "cert-v1";

/// A scalar as it appears in a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn of(x: &Scalar) -> Num {
        match x {
            Scalar::Q(_) => Num::Text(x.to_canonical()),
            Scalar::Fp { value, .. } => Num::Int(*value as i64),
        }
    }

    pub fn parse(&self, field: Field) -> Result<Scalar> {
        match self {
            Num::Int(n) => Ok(field.from_i64(*n)),
            Num::Text(s) => field.parse_scalar(s),
        }
    }
}

fn nums(v: &[Scalar]) -> Vec<Num> {
    v.iter().map(Num::of).collect()
}

fn parse_nums(v: &[Num], field: Field) -> Result<Vec<Scalar>> {
    v.iter().map(|n| n.parse(field)).collect()
}

fn rows_of(m: &Matrix) -> Vec<Vec<Num>> {
    (0..m.rows()).map(|r| nums(m.row(r))).collect()
}

fn parse_rows(rows: &[Vec<Num>], field: Field, r: usize, c: usize) -> Result<Matrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("expected a {r}x{c} matrix")));
    }
    let mut m = Matrix::zeros(field, r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, x.parse(field)?);
        }
    }
    Ok(m)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn from_value<T: DeserializeOwned>(v: &Value, schema: &str) -> Result<T> {
    match v.get("schema").and_then(Value::as_str) {
        Some(s) if s == schema => {}
        Some(s) => return Err(Error::Parse(format!("expected schema {schema}, found {s}"))),
        None => return Err(Error::Parse(format!("missing schema field (expected {schema})"))),
    }
    T::deserialize(v).map_err(|e| Error::Parse(format!("{schema}: {e}")))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// The schema tag of a parsed file.
pub fn schema_of(v: &Value) -> Option<&str> {
    v.get("schema").and_then(Value::as_str)
}

fn field_of(tag: &str, over: Option<Field>) -> Result<Field> {
    let f = Field::from_tag(tag)?;
    match over {
        Some(o) if o != f => Err(Error::FieldMismatch(format!("file is over {f}, requested {o}"))),
        _ => Ok(f),
    }
}

#[derive(Serialize, Deserialize)]
struct HomEntry {
    src: String,
    tgt: String,
    /// `[degree, dim]` pairs
    dims: Vec<(i64, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DiffEntry {
    src: String,
    tgt: String,
    degree: i64,
    matrix: Vec<Vec<Num>>,
}

/// `hom^q(b,c) x hom^p(a,b) -> hom^{p+q}(a,c)`; column `g * dim^p(a,b) + f`.
#[derive(Serialize, Deserialize)]
struct CompEntry {
    objects: (String, String, String),
    degrees: (i64, i64),
    /// `[row, column, value]` for the nonzero entries
    entries: Vec<(usize, usize, Num)>,
}

#[derive(Serialize, Deserialize)]
struct UnitEntry {
    object: String,
    coords: Vec<Num>,
}

#[derive(Serialize, Deserialize)]
struct DgcatFile {
    schema: String,
    field: String,
    objects: Vec<String>,
    #[serde(default)]
    zero_object: Option<String>,
    #[serde(default)]
    nonpositive: bool,
    homs: Vec<HomEntry>,
    #[serde(default)]
    diffs: Vec<DiffEntry>,
    #[serde(default)]
    compositions: Vec<CompEntry>,
    units: Vec<UnitEntry>,
}

pub fn dgcat_to_json(cat: &DgCat) -> Value {
    let name = |a: ObjId| cat.name(a).to_string();
    let mut homs = Vec::new();
    let mut diffs = Vec::new();
    for (&(a, b), h) in cat.homs() {
        let dims: Vec<(i64, usize)> = h.dims.iter().map(|(&n, &d)| (n, d)).collect();
        if !dims.is_empty() {
            homs.push(HomEntry { src: name(a), tgt: name(b), dims });
        }
        for (&n, d) in &h.diff {
            diffs.push(DiffEntry {
                src: name(a),
                tgt: name(b),
                degree: n,
                matrix: rows_of(d),
            });
        }
    }
    let compositions = cat
        .comp_tensors()
        .iter()
        .map(|(&(a, b, c, p, q), m)| {
            let mut entries = Vec::new();
            for r in 0..m.rows() {
                for (k, x) in m.row(r).iter().enumerate() {
                    if !x.is_zero() {
                        entries.push((r, k, Num::of(x)));
                    }
                }
            }
            CompEntry {
                objects: (name(a), name(b), name(c)),
                degrees: (p, q),
                entries,
            }
        })
        .collect();
    let units = cat
        .objects()
        .map(|a| UnitEntry {
            object: name(a),
            coords: nums(cat.unit(a)),
        })
        .collect();
    let file = DgcatFile {
        schema: DGCAT.into(),
        field: cat.field().tag(),
        objects: cat.names().to_vec(),
        zero_object: cat.zero_object().map(name),
        nonpositive: cat.is_nonpositive(),
        homs,
        diffs,
        compositions,
        units,
    };
    serde_json::to_value(file).expect("serializable")
}

/// Parses a presentation; `field` overrides nothing but must agree with the
/// header when given.
pub fn dgcat_from_json(v: &Value, field: Option<Field>) -> Result<DgCat> {
    let file: DgcatFile = from_value(v, DGCAT)?;
    let f = field_of(&file.field, field)?;
    let mut cat = DgCat::new(f);
    for o in &file.objects {
        if cat.object_by_name(o).is_ok() {
            return Err(Error::Parse(format!("duplicate object {o}")));
        }
        cat.add_object(o);
    }
    let obj = |c: &DgCat, s: &str| c.object_by_name(s);
    if let Some(z) = &file.zero_object {
        let z = obj(&cat, z)?;
        cat.set_zero_object(z)?;
    }
    cat.set_nonpositive(file.nonpositive);
    for h in &file.homs {
        let (a, b) = (obj(&cat, &h.src)?, obj(&cat, &h.tgt)?);
        for &(n, d) in &h.dims {
            cat.set_dim(a, b, n, d)?;
        }
    }
    for d in &file.diffs {
        let (a, b) = (obj(&cat, &d.src)?, obj(&cat, &d.tgt)?);
        let m = parse_rows(&d.matrix, f, cat.dim(a, b, d.degree + 1), cat.dim(a, b, d.degree))?;
        cat.set_diff(a, b, d.degree, m)?;
    }
    for c in &file.compositions {
        let (a, b, cc) = (obj(&cat, &c.objects.0)?, obj(&cat, &c.objects.1)?, obj(&cat, &c.objects.2)?);
        let (p, q) = c.degrees;
        let rows = cat.dim(a, cc, p + q);
        let cols = cat.dim(b, cc, q) * cat.dim(a, b, p);
        let mut m = Matrix::zeros(f, rows, cols);
        for (r, k, x) in &c.entries {
            if *r >= rows || *k >= cols {
                return Err(Error::Parse(format!(
                    "composition entry ({r},{k}) outside a {rows}x{cols} tensor for ({},{},{})",
                    c.objects.0, c.objects.1, c.objects.2
                )));
            }
            m.set(*r, *k, x.parse(f)?);
        }
        cat.set_comp(a, b, cc, p, q, m)?;
    }
    for u in &file.units {
        let a = obj(&cat, &u.object)?;
        cat.set_unit(a, parse_nums(&u.coords, f)?)?;
    }
    cat.check_structure()?;
    Ok(cat)
}

#[derive(Serialize, Deserialize)]
struct Entry {
    i: i64,
    j: i64,
    coords: Vec<Num>,
}

#[derive(Serialize, Deserialize)]
struct ComplexBody {
    lo: i64,
    components: Vec<Vec<String>>,
    twist: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum TwBody {
    Complex {
        #[serde(flatten)]
        complex: ComplexBody,
    },
    Morphism {
        src: ComplexBody,
        tgt: ComplexBody,
        degree: i64,
        components: Vec<Entry>,
    },
}

#[derive(Serialize, Deserialize)]
struct TwFile {
    schema: String,
    /// Path of the presentation, relative to this file.
    dgcat: String,
    #[serde(flatten)]
    body: TwBody,
}

fn complex_body(x: &TwistedComplex) -> ComplexBody {
    let cat = x.cat();
    ComplexBody {
        lo: x.lo(),
        components: x
            .components()
            .map(|(_, c)| c.iter().map(|&a| cat.name(a).to_string()).collect())
            .collect(),
        twist: x
            .twists()
            .iter()
            .map(|(&(i, j), b)| Entry { i, j, coords: nums(&b.coords()) })
            .collect(),
    }
}

fn parse_complex_body(body: &ComplexBody, cat: &Cat) -> Result<TwistedComplex> {
    let f = cat.field();
    let comps = body
        .components
        .iter()
        .map(|c| c.iter().map(|s| cat.object_by_name(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let comp = |i: i64| -> Vec<ObjId> {
        if i < body.lo {
            return Vec::new();
        }
        comps.get((i - body.lo) as usize).cloned().unwrap_or_default()
    };
    let mut twist = BTreeMap::new();
    for e in &body.twist {
        let (src, tgt) = (comp(e.i), comp(e.j));
        let deg = e.i - e.j + 1;
        let b = parse_block(cat, &src, &tgt, deg, &e.coords, f, (e.i, e.j))?;
        twist.insert((e.i, e.j), b);
    }
    TwistedComplex::new(cat.clone(), body.lo, comps, twist)
}

fn parse_block(cat: &Cat, src: &[ObjId], tgt: &[ObjId], deg: i64, coords: &[Num], f: Field, at: (i64, i64)) -> Result<Block> {
    let want = Block::space_dim(cat, src, tgt, deg);
    if coords.len() != want {
        return Err(Error::Parse(format!(
            "entry ({},{}) has {} coordinates, expected {want}",
            at.0,
            at.1,
            coords.len()
        )));
    }
    Ok(Block::from_coords(cat, src, tgt, deg, &parse_nums(coords, f)?))
}

pub fn complex_to_json(x: &TwistedComplex, dgcat_ref: &str) -> Value {
    let file = TwFile {
        schema: TW.into(),
        dgcat: dgcat_ref.into(),
        body: TwBody::Complex { complex: complex_body(x) },
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn morphism_to_json(f: &TwMorphism, dgcat_ref: &str) -> Value {
    let file = TwFile {
        schema: TW.into(),
        dgcat: dgcat_ref.into(),
        body: TwBody::Morphism {
            src: complex_body(f.src()),
            tgt: complex_body(f.tgt()),
            degree: f.deg(),
            components: f
                .components()
                .iter()
                .map(|(&(i, j), b)| Entry { i, j, coords: nums(&b.coords()) })
                .collect(),
        },
    };
    serde_json::to_value(file).expect("serializable")
}

/// The presentation path named in a `tw-v1` file.
pub fn tw_dgcat_ref(v: &Value) -> Result<String> {
    let file: TwFile = from_value(v, TW)?;
    Ok(file.dgcat)
}

/// A parsed `tw-v1` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwItem {
    Complex(TwistedComplex),
    Morphism(TwMorphism),
}

pub fn tw_from_json(v: &Value, cat: &Cat) -> Result<TwItem> {
    let file: TwFile = from_value(v, TW)?;
    match file.body {
        TwBody::Complex { complex } => Ok(TwItem::Complex(parse_complex_body(&complex, cat)?)),
        TwBody::Morphism {
            src,
            tgt,
            degree,
            components,
        } => {
            let x = parse_complex_body(&src, cat)?;
            let y = parse_complex_body(&tgt, cat)?;
            let mut comps = BTreeMap::new();
            for e in &components {
                let b = parse_block(cat, x.comp(e.i), y.comp(e.j), e.i - e.j + degree, &e.coords, cat.field(), (e.i, e.j))?;
                comps.insert((e.i, e.j), b);
            }
            Ok(TwItem::Morphism(TwMorphism::new(&x, &y, degree, comps)?))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Product {
    left: String,
    right: String,
    value: Vec<Num>,
}

#[derive(Serialize, Deserialize)]
struct Generator {
    name: String,
    idempotent: Vec<Num>,
}

#[derive(Serialize, Deserialize)]
struct AlgFile {
    schema: String,
    field: String,
    basis: Vec<String>,
    /// Nonzero products of basis elements.
    products: Vec<Product>,
    unit: Vec<Num>,
    idempotents: Vec<Vec<Num>>,
    radical: Vec<Vec<Num>>,
    /// Projectives `eR` used as objects; defaults to the idempotents.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    generators: Vec<Generator>,
}

pub fn algebra_to_json(alg: &AlgebraPresentation, generators: &[(String, Vec<Scalar>)]) -> Value {
    let d = alg.dim();
    let names = alg.names();
    let mut products = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = alg.mul(&alg.basis(i), &alg.basis(j));
            if v.iter().any(|x| !x.is_zero()) {
                products.push(Product {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    value: nums(&v),
                });
            }
        }
    }
    let file = AlgFile {
        schema: ALG.into(),
        field: alg.field().tag(),
        basis: names.to_vec(),
        products,
        unit: nums(alg.unit()),
        idempotents: alg.idempotents().iter().map(|e| nums(e)).collect(),
        radical: alg.radical().columns().iter().map(|c| nums(c)).collect(),
        generators: generators
            .iter()
            .map(|(n, e)| Generator {
                name: n.clone(),
                idempotent: nums(e),
            })
            .collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

/// The algebra and its listed generators (empty when the file has none).
pub fn algebra_from_json(v: &Value, field: Option<Field>) -> Result<(AlgebraPresentation, Vec<(String, Vec<Scalar>)>)> {
    let file: AlgFile = from_value(v, ALG)?;
    let f = field_of(&file.field, field)?;
    let d = file.basis.len();
    let index = |s: &str| {
        file.basis
            .iter()
            .position(|b| b == s)
            .ok_or_else(|| Error::UnknownObject(s.to_string()))
    };
    let vec_of = |v: &[Num]| -> Result<Vec<Scalar>> {
        if v.len() != d {
            return Err(Error::Parse(format!("expected {d} coordinates, found {}", v.len())));
        }
        parse_nums(v, f)
    };
    let mut mult = Matrix::zeros(f, d, d * d);
    for p in &file.products {
        let (i, j) = (index(&p.left)?, index(&p.right)?);
        for (r, x) in vec_of(&p.value)?.into_iter().enumerate() {
            mult.set(r, i * d + j, x);
        }
    }
    let idempotents = file.idempotents.iter().map(|e| vec_of(e)).collect::<Result<Vec<_>>>()?;
    let radical = file.radical.iter().map(|e| vec_of(e)).collect::<Result<Vec<_>>>()?;
    let alg = AlgebraPresentation::new(
        f,
        file.basis.clone(),
        mult,
        vec_of(&file.unit)?,
        idempotents,
        Matrix::from_columns(f, d, &radical),
    )?;
    let gens = file
        .generators
        .iter()
        .map(|g| Ok((g.name.clone(), vec_of(&g.idempotent)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((alg, gens))
}

#[derive(Serialize, Deserialize)]
struct ActionEntry {
    element: String,
    matrix: Vec<Vec<Num>>,
}

#[derive(Serialize, Deserialize)]
struct ModFile {
    schema: String,
    field: String,
    dim: usize,
    /// `m · b = matrix m` for each basis element `b`.
    action: Vec<ActionEntry>,
}

pub fn module_to_json(m: &FpModule, alg: &AlgebraPresentation) -> Value {
    let file = ModFile {
        schema: MODULE.into(),
        field: m.field().tag(),
        dim: m.dim(),
        action: alg
            .names()
            .iter()
            .zip(m.action())
            .map(|(n, a)| ActionEntry {
                element: n.clone(),
                matrix: rows_of(a),
            })
            .collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn module_from_json(v: &Value, alg: &AlgebraPresentation) -> Result<FpModule> {
    let file: ModFile = from_value(v, MODULE)?;
    let f = field_of(&file.field, Some(alg.field()))?;
    let mut action: Vec<Option<Matrix>> = vec![None; alg.dim()];
    for e in &file.action {
        let k = alg
            .names()
            .iter()
            .position(|n| *n == e.element)
            .ok_or_else(|| Error::UnknownObject(e.element.clone()))?;
        action[k] = Some(parse_rows(&e.matrix, f, file.dim, file.dim)?);
    }
    let action = action
        .into_iter()
        .zip(alg.names())
        .map(|(a, n)| a.ok_or_else(|| Error::Parse(format!("no action matrix for {n}"))))
        .collect::<Result<Vec<_>>>()?;
    FpModule::new(alg, file.dim, action)
}

/// One checked equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub equation: String,
    pub location: String,
    /// Canonical residual entries; empty when the equation holds.
    pub residual: Vec<String>,
}

/// A `cert-v1` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub field: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Command-specific results.
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, field: Field) -> Report {
        Report {
            schema: CERT.into(),
            command: command.into(),
            field: field.tag(),
            passed: true,
            checks: Vec::new(),
            data: BTreeMap::new(),
        }
    }

    /// Records an equation that holds when `residual` is empty.
    pub fn check(&mut self, equation: &str, location: &str, residual: Vec<String>) {
        self.passed &= residual.is_empty();
        self.checks.push(Check {
            equation: equation.into(),
            location: location.into(),
            residual,
        });
    }

    /// Records one passing check per equation family, then the violations.
    pub fn absorb(&mut self, equation: &str, rep: &ValidationReport) {
        if rep.passed {
            self.check(equation, "all", Vec::new());
        }
        for v in &rep.violations {
            let residual = if v.residual.is_empty() { vec!["nonzero".to_string()] } else { v.residual.clone() };
            self.check(&v.axiom, &v.location, residual);
        }
    }

    pub fn put<T: Serialize>(&mut self, key: &str, value: T) {
        self.data
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn to_json_string(&self) -> String {
        to_canonical_string(self).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Report> {
        from_value(v, CERT)
    }

    /// Human-readable rendering of the same content.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{}: {} over {}\n",
            self.command,
            if self.passed { "passed" } else { "FAILED" },
            self.field
        );
        for c in &self.checks {
            if c.residual.is_empty() {
                s.push_str(&format!("  ok    {} at {}\n", c.equation, c.location));
            } else {
                s.push_str(&format!("  FAIL  {} at {}: [{}]\n", c.equation, c.location, c.residual.join(", ")));
            }
        }
        for (k, v) in &self.data {
            s.push_str(&format!("  {k} = {}\n", serde_json::to_string(v).expect("serializable")));
        }
        s
    }
}

#[cfg(test)]
mod tests;
