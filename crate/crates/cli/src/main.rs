//! `twistlab`: batch front end for the twistlab library.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed (the
//! report lists residuals), 2 on unreadable or ill-formed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use twistlab::dgcore::{validate_dgcat, Cat};
use twistlab::exactlin::Field;
use twistlab::formats::{
    algebra_from_json, complex_to_json, dgcat_from_json, morphism_to_json, parse_json, schema_of, tw_dgcat_ref,
    tw_from_json, Report, TwItem, ALG, DGCAT, TW,
};
use twistlab::homotopy::{h0_iso_decide, tower_holim, HomWindowComplex, Tower};
use twistlab::tstruct::{
    derived_projective_cert, embed_object, heart_cohomology, proj_category, t_truncate, ProjCat,
};
use twistlab::twisted::{brutal_truncate, tw_cone, tw_diff, tw_shift, validate_twisted, weight_triangle, Trunc};
use twistlab::twisted::{TwMorphism, TwistedComplex};
use twistlab::{Error, Result};

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Exact computations with one-sided twisted complexes")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Override the coefficient field (`Q` or `Fp:<p>`); must match the files.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Also write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Check a presentation, algebra, complex or morphism file.
    Validate { input: PathBuf },
    /// Cone of a closed degree-0 morphism, with the pretriangle identities.
    Cone { input: PathBuf },
    /// The shift `X[n]`.
    Shift {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Brutal truncations at `n`; with `--k`, the window `[n, k]`.
    Truncate {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// The weight pretriangle `σ≥n X -> X -> σ≤n-1 X`.
    WeightTriangle {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// `H^degree Hom(X, Y)`; `Y = X` when omitted.
    Cohomology {
        input: PathBuf,
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Decide whether a closed degree-0 morphism is an isomorphism in H^0.
    IsoCheck { input: PathBuf },
    /// The t-structure truncation triangle at `n` over an algebra.
    TTruncate {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        depth_cap: usize,
    },
    /// Homotopy limit of the brutal tower `σ≤k X`, `k = from, from+1, ...`.
    Holim {
        input: PathBuf,
        /// First index of the tower (default: bottom of the support).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Derived-projective certificate for a complex over an algebra. Test
    /// objects default to the shifts `P[0..=2]` of each generator.
    CertDerivedProj { input: PathBuf, tests: Vec<PathBuf> },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Validate { .. } => "validate",
            Verb::Cone { .. } => "cone",
            Verb::Shift { .. } => "shift",
            Verb::Truncate { .. } => "truncate",
            Verb::WeightTriangle { .. } => "weight-triangle",
            Verb::Cohomology { .. } => "cohomology",
            Verb::IsoCheck { .. } => "iso-check",
            Verb::TTruncate { .. } => "t-truncate",
            Verb::Holim { .. } => "holim",
            Verb::CertDerivedProj { .. } => "cert-derived-proj",
        }
    }
}

/// The category a complex lives over, with its algebra when it has one.
struct Base {
    cat: Cat,
    proj: Option<ProjCat>,
    /// Presentation path as written in the input file.
    reference: String,
}

struct Ctx {
    field: Option<Field>,
    base: Option<Base>,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_base(v: &Value, field: Option<Field>, reference: String) -> Result<Base> {
    match schema_of(v) {
        Some(DGCAT) => Ok(Base {
            cat: Arc::new(dgcat_from_json(v, field)?),
            proj: None,
            reference,
        }),
        Some(ALG) => {
            let (alg, gens) = algebra_from_json(v, field)?;
            let pc = if gens.is_empty() { proj_category(&alg) } else { ProjCat::new(&alg, &gens)? };
            Ok(Base {
                cat: pc.cat().clone(),
                proj: Some(pc),
                reference,
            })
        }
        other => Err(Error::Parse(format!("expected {DGCAT} or {ALG}, found {other:?}"))),
    }
}

impl Ctx {
    /// Reads a `tw-v1` file, loading its presentation on first use. Later
    /// files must name the same presentation.
    fn tw(&mut self, path: &Path) -> Result<TwItem> {
        let v = read_json(path)?;
        let reference = tw_dgcat_ref(&v)?;
        match &self.base {
            Some(b) if b.reference != reference => {
                return Err(Error::Parse(format!(
                    "{} refers to {reference}, expected {}",
                    path.display(),
                    b.reference
                )))
            }
            Some(_) => {}
            None => {
                let dir = path.parent().unwrap_or(Path::new("."));
                let cv = read_json(&dir.join(&reference))?;
                self.base = Some(load_base(&cv, self.field, reference)?);
            }
        }
        tw_from_json(&v, &self.base.as_ref().expect("loaded").cat)
    }

    fn complex(&mut self, path: &Path) -> Result<TwistedComplex> {
        match self.tw(path)? {
            TwItem::Complex(x) => Ok(x),
            TwItem::Morphism(_) => Err(Error::Parse(format!("{}: expected a complex", path.display()))),
        }
    }

    fn morphism(&mut self, path: &Path) -> Result<TwMorphism> {
        match self.tw(path)? {
            TwItem::Morphism(f) => Ok(f),
            TwItem::Complex(_) => Err(Error::Parse(format!("{}: expected a morphism", path.display()))),
        }
    }

    fn base(&self) -> &Base {
        self.base.as_ref().expect("loaded")
    }

    fn proj(&self) -> Result<&ProjCat> {
        self.base()
            .proj
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("this verb needs a complex over an {ALG} algebra")))
    }

    fn put_complex(&self, r: &mut Report, key: &str, x: &TwistedComplex) {
        r.put(key, complex_to_json(x, &self.base().reference));
    }

    fn put_morphism(&self, r: &mut Report, key: &str, f: &TwMorphism) {
        r.put(key, morphism_to_json(f, &self.base().reference));
    }
}

fn residual(f: &TwMorphism) -> Vec<String> {
    let v = f.coords();
    if v.iter().all(|x| x.is_zero()) {
        Vec::new()
    } else {
        v.iter().map(|x| x.to_canonical()).collect()
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let field = cli.field.as_deref().map(Field::from_tag).transpose()?;
    let mut ctx = Ctx { field, base: None };
    let name = cli.verb.name();
    match &cli.verb {
        Verb::Validate { input } => {
            let v = read_json(input)?;
            match schema_of(&v) {
                Some(DGCAT) => {
                    let cat = dgcat_from_json(&v, field)?;
                    let mut r = Report::new(name, cat.field());
                    r.absorb("dg-category", &validate_dgcat(&cat)?);
                    r.put("objects", cat.names());
                    Ok(r)
                }
                Some(ALG) => {
                    let (alg, _) = algebra_from_json(&v, field)?;
                    let mut r = Report::new(name, alg.field());
                    r.absorb("algebra", &alg.validate());
                    r.put("basis", alg.names());
                    Ok(r)
                }
                Some(TW) => {
                    let item = ctx.tw(input)?;
                    let mut r = Report::new(name, ctx.base().cat.field());
                    match item {
                        TwItem::Complex(x) => {
                            r.absorb("maurer-cartan", &validate_twisted(&x));
                            r.put("support", support(&x));
                        }
                        TwItem::Morphism(f) => {
                            r.absorb("source", &validate_twisted(f.src()));
                            r.absorb("target", &validate_twisted(f.tgt()));
                            r.put("degree", f.deg());
                            r.put("closed", tw_diff(&f).is_zero());
                        }
                    }
                    Ok(r)
                }
                other => Err(Error::Parse(format!("unknown schema {other:?}"))),
            }
        }
        Verb::Cone { input } => {
            let f = ctx.morphism(input)?;
            let t = tw_cone(&f)?;
            let mut r = Report::new(name, f.src().cat().field());
            r.absorb("maurer-cartan", &validate_twisted(&t.cone));
            r.absorb("pretriangle", &t.check()?);
            ctx.put_complex(&mut r, "cone", &t.cone);
            Ok(r)
        }
        Verb::Shift { input, n } => {
            let x = ctx.complex(input)?;
            let y = tw_shift(&x, *n);
            let mut r = Report::new(name, x.cat().field());
            r.absorb("maurer-cartan", &validate_twisted(&y));
            r.check("X[n][-n] = X", "all", if tw_shift(&y, -n) == x { vec![] } else { vec!["differs".into()] });
            ctx.put_complex(&mut r, "shifted", &y);
            Ok(r)
        }
        Verb::Truncate { input, n, k } => {
            let x = ctx.complex(input)?;
            let mut r = Report::new(name, x.cat().field());
            let parts = match k {
                Some(k) => vec![("window", Trunc::Window(*n, *k))],
                None => vec![("geq", Trunc::Geq(*n)), ("leq", Trunc::Leq(*n))],
            };
            for (key, kind) in parts {
                let t = brutal_truncate(&x, kind);
                r.absorb(&format!("maurer-cartan {key}"), &validate_twisted(&t.complex));
                if let Some(m) = &t.map {
                    r.check(&format!("d of the {key} map"), key, residual(&tw_diff(m)));
                }
                ctx.put_complex(&mut r, key, &t.complex);
            }
            Ok(r)
        }
        Verb::WeightTriangle { input, n } => {
            let x = ctx.complex(input)?;
            let w = weight_triangle(&x, *n)?;
            let mut r = Report::new(name, x.cat().field());
            r.absorb("pretriangle", &w.pretriangle.check()?);
            r.check("cone of x~ = X", "all", Vec::new());
            ctx.put_complex(&mut r, "geq", &w.geq);
            ctx.put_complex(&mut r, "leq", &w.leq);
            Ok(r)
        }
        Verb::Cohomology { input, target, degree } => {
            let x = ctx.complex(input)?;
            let y = match target {
                Some(t) => ctx.complex(t)?,
                None => x.clone(),
            };
            let w = HomWindowComplex::new(&x, &y);
            let h = w.cohomology(*degree)?;
            let mut r = Report::new(name, x.cat().field());
            r.put("degree", degree);
            r.put("hom_dim", h.dim);
            let reps: Vec<Vec<String>> = h
                .representatives
                .columns()
                .iter()
                .map(|c| c.iter().map(|s| s.to_canonical()).collect())
                .collect();
            r.put("representatives", reps);
            if let Some(pc) = ctx.base().proj.as_ref() {
                r.put("heart_dim_vector", heart_cohomology(pc, &x, *degree)?.dim_vector(pc.algebra()));
            }
            Ok(r)
        }
        Verb::IsoCheck { input } => {
            let f = ctx.morphism(input)?;
            let v = h0_iso_decide(&f)?;
            let mut r = Report::new(name, f.src().cat().field());
            r.check("cone(f) contractible", "cone", if v.iso { vec![] } else { vec!["not contractible".into()] });
            r.put("iso", v.iso);
            r.put("components_invertible", v.components_invertible);
            if let Some(c) = &v.certificate {
                r.absorb("certificate", &c.check()?);
                r.put("method", c.method);
                ctx.put_morphism(&mut r, "inverse", &c.g);
            }
            Ok(r)
        }
        Verb::TTruncate { input, n, depth_cap } => {
            let x = ctx.complex(input)?;
            let pc = ctx.proj()?;
            let t = t_truncate(pc, &x, *n, *depth_cap)?;
            let mut r = Report::new(name, x.cat().field());
            r.absorb("t-truncation", &t.check(pc)?);
            let table: Vec<Value> = t
                .cohomology_table(pc)?
                .into_iter()
                .map(|(k, [hx, hl, hg])| json!({"degree": k, "x": hx, "leq": hl, "geq": hg}))
                .collect();
            r.put("cohomology", table);
            let alg = pc.algebra();
            r.put("leq_heart", heart_cohomology(pc, &t.leq, *n)?.dim_vector(alg));
            r.put("geq_heart", heart_cohomology(pc, &t.geq, n + 1)?.dim_vector(alg));
            r.put("validity", t.validity);
            ctx.put_complex(&mut r, "leq", &t.leq);
            ctx.put_complex(&mut r, "geq", &t.geq);
            Ok(r)
        }
        Verb::Holim { input, k } => {
            let x = ctx.complex(input)?;
            let from = k.unwrap_or(if x.is_zero_object() { 0 } else { x.lo() });
            let tower = Tower::brutal_leq(&x, from);
            let h = tower_holim(&tower)?;
            let mut r = Report::new(name, x.cat().field());
            r.check("lim = X", "lim", if h.lim.object == x { vec![] } else { vec!["differs".into()] });
            r.check(
                "lim -> holim is an H^0-iso",
                "comparison",
                if h.comparison_is_iso { vec![] } else { vec!["not an iso".into()] },
            );
            r.put("stabilization_index", tower.stabilization_index());
            ctx.put_complex(&mut r, "holim", &h.holim);
            Ok(r)
        }
        Verb::CertDerivedProj { input, tests } => {
            let q = ctx.complex(input)?;
            let mut zs = Vec::new();
            for t in tests {
                zs.push(ctx.complex(t)?);
            }
            let pc = ctx.proj()?;
            if tests.is_empty() {
                for a in pc.cat().objects() {
                    let p = embed_object(pc, &[a])?;
                    for s in 0..=2 {
                        zs.push(tw_shift(&p, s));
                    }
                }
            }
            let c = derived_projective_cert(pc, &q, &zs)?;
            let mut r = Report::new(name, q.cat().field());
            r.check("Q in t<=0", "Q", if c.q_in_aisle { vec![] } else { vec!["H^k_t(Q) != 0 for some k > 0".into()] });
            for (i, t) in c.tests.iter().enumerate() {
                let loc = format!("Z{i}");
                if !t.z_in_aisle {
                    r.check("Z in t<=0", &loc, vec!["not in t<=0".into()]);
                }
                let res = match &t.witness {
                    Some(w) => residual(w),
                    None => Vec::new(),
                };
                r.check("H^0 Hom(Q, Z[1]) = 0", &loc, res);
            }
            r.check(
                "H^0_t(Q) projective",
                "heart",
                if c.heart_projective { vec![] } else { vec!["cover has a kernel".into()] },
            );
            r.put("heart_dim_vector", &c.heart_dim_vector);
            r.put("tests", c.tests.len());
            Ok(r)
        }
    }
}

fn support(x: &TwistedComplex) -> Value {
    if x.is_zero_object() {
        Value::Null
    } else {
        json!([x.lo(), x.hi()])
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let js = r.to_json_string();
            print!("{}", r.to_text());
            print!("{js}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &js) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if r.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
