//! The ten acceptance criteria, run exactly (no tolerances). Each prints one
//! PASS or FAIL line; the test fails if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use twistlab::dgcore::{validate_dgcat, Block, Cat};
use twistlab::exactlin::{Field, Matrix};
use twistlab::gen::Gen;
use twistlab::homotopy::{
    check_quasi_fully_faithful, cone_iso_transfer, h0_iso_decide, milnor_check, nullhomotopy, qff_lift, tower_lim,
    ConeSquare, H0Inverse, HomWindowComplex, Tower,
};
use twistlab::samples::{acyclic_extension, dual_numbers};
use twistlab::tstruct::{
    aisle_membership, derived_projective_cert, embed_object, ground_field, proj_category, proj_t_truncate_unbounded,
    t_truncate, truncated_polynomial, upper_triangular_a2, Aisle, AisleWitness, FpModule, ProjCat, Verdict,
};
use twistlab::twisted::{
    map_functor, map_functor_mor, tw_compose, tw_cone, tw_diff, tw_shift, validate_twisted, weight_triangle,
    TwMorphism, TwistedComplex,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const Q: Field = Field::Rational;
const F101: Field = Field::Prime(101);
const F5: Field = Field::Prime(5);

fn proj_k(field: Field) -> ProjCat {
    proj_category(&ground_field(field))
}

/// A block between tuples of `Proj(k)` as an ordinary matrix.
fn block_matrix(b: &Block, field: Field) -> Matrix {
    let mut m = Matrix::zeros(field, b.tgt.len(), b.src.len());
    for t in 0..b.tgt.len() {
        for s in 0..b.src.len() {
            m.set(t, s, b.entry(t, s)[0].clone());
        }
    }
    m
}

fn violation_set(x: &TwistedComplex) -> Vec<String> {
    validate_twisted(x).violations.into_iter().map(|v| v.location).collect()
}

fn axiom_suite() -> Outcome {
    let mut built = 0;
    let mut perturbed = 0;
    for (field, seed0) in [(Q, 0u64), (F101, 1000)] {
        let pc = proj_k(field);
        let cat = pc.cat();
        ensure!(validate_dgcat(cat).map_err(|e| e.to_string())?.passed, "Proj(k) over {field} fails validation");
        for s in 0..50 {
            let mut g = Gen::new(seed0 + s);
            let x = g.complex(cat, -2, 1, 3).map_err(|e| e.to_string())?;
            ensure!(validate_twisted(&x).passed, "random complex {s} over {field} fails MC");
            built += 1;
            // Perturb one entry of some x_i^{i+1}. Over Proj(k) the residual
            // at (a,b) is the matrix product x_{b-1}^b x_a^{b-1}, so adding
            // E_{rs} to x_i^{i+1} breaks exactly (i-1,i+1) when row s of
            // x_{i-1}^i is nonzero and (i,i+2) when column r of x_{i+1}^{i+2} is.
            let mat = |i: i64, j: i64| block_matrix(&x.twist_or_zero(i, j), field);
            'search: for i in x.lo()..x.hi() {
                let (n_src, n_tgt) = (x.comp(i).len(), x.comp(i + 1).len());
                for r in 0..n_tgt {
                    for s in 0..n_src {
                        let below = mat(i - 1, i);
                        let above = mat(i + 1, i + 2);
                        let mut expected = Vec::new();
                        if below.rows() > 0 && below.row(s).iter().any(|v| !v.is_zero()) {
                            expected.push(format!("({},{})", i - 1, i + 1));
                        }
                        if above.cols() > 0 && above.column(r).iter().any(|v| !v.is_zero()) {
                            expected.push(format!("({},{})", i, i + 2));
                        }
                        if expected.is_empty() {
                            continue;
                        }
                        let mut b = x.twist_or_zero(i, i + 1);
                        b.entry_mut(r, s)[0] = &b.entry(r, s)[0] + &field.one();
                        let y = x.with_twist(i, i + 1, b).map_err(|e| e.to_string())?;
                        let got = violation_set(&y);
                        ensure!(got == expected, "perturbing x_{i}^{} at ({r},{s}): expected {expected:?}, got {got:?}", i + 1);
                        perturbed += 1;
                        break 'search;
                    }
                }
            }
        }
    }
    ensure!(perturbed >= 50, "only {perturbed} complexes admitted a detectable perturbation");
    Ok(format!("{built} complexes valid, {perturbed} perturbations located"))
}

fn test_cats() -> Vec<Cat> {
    vec![
        proj_k(Q).cat().clone(),
        proj_k(F101).cat().clone(),
        Arc::new(dual_numbers(Q)),
        Arc::new(dual_numbers(F101)),
    ]
}

fn pretriangles() -> Outcome {
    let cats = test_cats();
    for s in 0..50u64 {
        let cat = &cats[(s % 4) as usize];
        let mut g = Gen::new(200 + s);
        let x = g.complex(cat, -1, 1, 2).map_err(|e| e.to_string())?;
        let y = g.complex(cat, -1, 1, 2).map_err(|e| e.to_string())?;
        let f = g.closed_morphism(&x, &y, 0);
        let t = tw_cone(&f).map_err(|e| e.to_string())?;
        ensure!(validate_twisted(&t.cone).passed, "cone {s} fails MC");
        let rep = t.check().map_err(|e| e.to_string())?;
        ensure!(rep.passed, "cone {s}: {:?}", rep.violations);
    }
    for s in 0..20u64 {
        let cat = &cats[(s % 4) as usize];
        let x = Gen::new(300 + s).complex(cat, -2, 1, 2).map_err(|e| e.to_string())?;
        let c = tw_cone(&TwMorphism::identity(&x)).map_err(|e| e.to_string())?.cone;
        let one = TwMorphism::identity(&c);
        let h = nullhomotopy(&one).map_err(|e| e.to_string())?.ok_or(format!("cone(1_X) {s} not contractible"))?;
        ensure!(tw_diff(&h) == one, "dH != 1 on cone(1_X) {s}");
    }
    Ok("50 cones, 20 contractions".into())
}

fn isos() -> Outcome {
    let cats = [proj_k(Q), proj_k(F101), proj_category(&upper_triangular_a2(Q))];
    for s in 0..30u64 {
        let cat = cats[(s % 3) as usize].cat();
        let mut g = Gen::new(400 + s);
        let x = g.complex(cat, -2, 1, 2).map_err(|e| e.to_string())?;
        let (_, f) = g.iso_pair(&x).map_err(|e| e.to_string())?;
        let v = h0_iso_decide(&f).map_err(|e| e.to_string())?;
        ensure!(v.iso && v.components_invertible, "morphism {s} not recognized as an iso");
        let cert = v.certificate.ok_or(format!("morphism {s}: no certificate"))?;
        ensure!(cert.check().map_err(|e| e.to_string())?.passed, "morphism {s}: certificate equations fail");
    }
    // [P --1--> P] -> 0
    let cat = proj_k(Q).cat().clone();
    let mut t = BTreeMap::new();
    t.insert((0, 1), Block::identity(&cat, &[0]));
    let x = TwistedComplex::new(cat.clone(), 0, vec![vec![0], vec![0]], t).map_err(|e| e.to_string())?;
    let f = TwMorphism::zero(&x, &TwistedComplex::zero(cat), 0);
    let v = h0_iso_decide(&f).map_err(|e| e.to_string())?;
    ensure!(v.iso, "[P=1=P] -> 0 not an iso");
    let cert = v.certificate.ok_or("[P=1=P] -> 0: no certificate")?;
    ensure!(cert.check().map_err(|e| e.to_string())?.passed, "[P=1=P] -> 0: certificate fails");
    Ok("30 random isos and [P=1=P] -> 0 certified".into())
}

/// `u = λ`, with homotopy inverse `λ^{-1} + dm`.
fn scalar_iso(x: &TwistedComplex, lambda: i64, m: &TwMorphism) -> (TwMorphism, H0Inverse) {
    let field = x.cat().field();
    let l = field.from_i64(lambda);
    let u = TwMorphism::identity(x).scale(&l);
    let inv = TwMorphism::identity(x).scale(&l.inv().unwrap()).add(&tw_diff(m)).unwrap();
    let w = m.scale(&l);
    (u, H0Inverse { inv, left: w.clone(), right: w })
}

fn iso_cones() -> Outcome {
    let cat: Cat = Arc::new(dual_numbers(F5));
    for s in 0..30u64 {
        let mut g = Gen::new(500 + s);
        let a = g.complex(&cat, -1, 1, 2).map_err(|e| e.to_string())?;
        let b = g.complex(&cat, -1, 1, 2).map_err(|e| e.to_string())?;
        let f = g.closed_morphism(&a, &b, 0);
        let (lambda, mu) = (1 + (s % 4) as i64, 1 + ((s / 4) % 4) as i64);
        let ma = g.morphism(&a, &a, -1);
        let mb = g.morphism(&b, &b, -1);
        let (u, ui) = scalar_iso(&a, lambda, &ma);
        let (v, vi) = scalar_iso(&b, mu, &mb);
        let k = g.morphism(&a, &b, -1);
        let ratio = &F5.from_i64(mu) * &F5.from_i64(lambda).inv().unwrap();
        let f2 = f.scale(&ratio).add(&tw_diff(&k)).unwrap();
        let h = k.scale(&-F5.from_i64(lambda));
        let sq = ConeSquare { f, f2, u, v, h };
        let t = cone_iso_transfer(&sq, &ui, &vi).map_err(|e| format!("tuple {s}: {e}"))?;
        let lhs = tw_compose(&t.w_left, &t.w).unwrap().sub(&TwMorphism::identity(&t.cone.cone)).unwrap();
        ensure!(lhs == tw_diff(&t.h_left), "tuple {s}: w^l w - 1 != d h^l");
        let rhs = tw_compose(&t.w, &t.w_right).unwrap().sub(&TwMorphism::identity(&t.cone2.cone)).unwrap();
        ensure!(rhs == tw_diff(&t.h_right), "tuple {s}: w w^r - 1 != d h^r");
    }
    Ok("30 witness tuples over F_5".into())
}

fn towers() -> Outcome {
    let cats = test_cats();
    let mut degrees = 0;
    for s in 0..30u64 {
        let cat = &cats[(s % 4) as usize];
        let mut g = Gen::new(600 + s);
        let x = g.complex(cat, -2, 1, 2).map_err(|e| e.to_string())?;
        let pt = Tower::brutal_leq(&x, x.lo() - 1);
        let jt = Tower::brutal_geq(&x, x.hi() + 1);
        ensure!(tower_lim(&pt).map_err(|e| e.to_string())?.object == x, "X {s}: lim of the p-tower differs");
        ensure!(tower_lim(&jt).map_err(|e| e.to_string())?.object == x, "X {s}: colim of the j-tower differs");
        let z = g.complex(cat, -1, 1, 2).map_err(|e| e.to_string())?;
        for p in -3..=3 {
            for (t, name) in [(&pt, "p"), (&jt, "j")] {
                let m = milnor_check(t, &z, p).map_err(|e| e.to_string())?;
                ensure!(m.restriction_rank == m.lim_dim, "X {s}, {name}-tower, degree {p}: lim does not inject");
                ensure!(m.kernel_dim == m.lim_dim, "X {s}, {name}-tower, degree {p}: kernel dim {} != {}", m.kernel_dim, m.lim_dim);
                ensure!(m.rank == m.target_dim, "X {s}, {name}-tower, degree {p}: 1 - nu not onto");
                ensure!(m.transitions_surjective, "X {s}, {name}-tower, degree {p}: transitions not onto");
                degrees += 1;
            }
        }
    }
    Ok(format!("30 complexes, {degrees} degreewise sequences exact"))
}

fn weights() -> Outcome {
    let cats = test_cats();
    for s in 0..20u64 {
        let cat = &cats[(s % 4) as usize];
        let mut g = Gen::new(700 + s);
        let x = g.complex(cat, 0, 2, 2).map_err(|e| e.to_string())?;
        let y = g.complex(cat, -3, -1, 2).map_err(|e| e.to_string())?;
        // Degree-0 components f_i^j live in hom^{i-j}(X^i, Y^j) with i > j.
        let mut by_hand = 0;
        for (i, a) in x.components() {
            for (j, b) in y.components() {
                for &p in a {
                    for &q in b {
                        by_hand += cat.dim(p, q, i - j);
                    }
                }
            }
        }
        let w = HomWindowComplex::new(&x, &y);
        ensure!(by_hand == 0 && w.dim(0) == 0, "pair {s}: degree-0 hom space has dimension {}", w.dim(0));
    }
    for s in 0..20u64 {
        let idx = (s % 4) as usize;
        let cat = &cats[idx];
        let pk;
        let pc = if idx < 2 {
            pk = proj_k(cat.field());
            Some(&pk)
        } else {
            None
        };
        let x = Gen::new(800 + s).complex(cat, -2, 1, 2).map_err(|e| e.to_string())?;
        let n = (s % 4) as i64 - 2;
        let t = weight_triangle(&x, n).map_err(|e| e.to_string())?;
        for (c, aisle) in [(&t.geq, Aisle::WeightGeq(n)), (&t.leq, Aisle::WeightLeq(n - 1))] {
            let r = aisle_membership(pc, c, aisle).map_err(|e| e.to_string())?;
            ensure!(r.verdict == Verdict::Member, "complex {s}, n = {n}: {aisle:?} not certified");
            match r.witness {
                AisleWitness::Iso(cert) => {
                    ensure!(cert.check().map_err(|e| e.to_string())?.passed, "complex {s}: certificate fails")
                }
                AisleWitness::Contractible(h) => {
                    ensure!(tw_diff(&h) == TwMorphism::identity(c), "complex {s}: contraction fails")
                }
                _ => return Err(format!("complex {s}: membership without a certificate")),
            }
        }
    }
    Ok("20 orthogonal pairs, 40 coaisle certificates".into())
}

fn algebras(field: Field) -> Vec<(&'static str, ProjCat)> {
    vec![
        ("k", proj_category(&ground_field(field))),
        ("kA2", proj_category(&upper_triangular_a2(field))),
        ("k[x]/x^2", proj_category(&truncated_polynomial(field))),
    ]
}

fn t_structures() -> Outcome {
    let mut triangles = 0;
    for field in [Q, F101] {
        for (name, pc) in algebras(field) {
            for s in 0..6u64 {
                let x = Gen::new(900 + s).complex(pc.cat(), -2, 1, 2).map_err(|e| e.to_string())?;
                for n in -2..=2 {
                    let t = t_truncate(&pc, &x, n, 4).map_err(|e| e.to_string())?;
                    ensure!(t.check(&pc).map_err(|e| e.to_string())?.passed, "{name}, complex {s}, n = {n}: pattern fails");
                    // The same pattern read off the dimension vectors.
                    for (k, [hx, hl, hg]) in t.cohomology_table(&pc).map_err(|e| e.to_string())? {
                        if !t.validity.contains(k) {
                            continue;
                        }
                        let zero = vec![0; hx.len()];
                        let ok = if k <= n { hl == hx && hg == zero } else { hl == zero && hg == hx };
                        ensure!(ok, "{name}, complex {s}, n = {n}, H^{k}: {hx:?} / {hl:?} / {hg:?}");
                    }
                    triangles += 1;
                }
            }
        }
    }
    let a2 = proj_category(&upper_triangular_a2(Q));
    for s in 0..20u64 {
        let x = Gen::new(950 + s).complex(a2.cat(), -2, 1, 2).map_err(|e| e.to_string())?;
        let n = (s % 5) as i64 - 2;
        let u = proj_t_truncate_unbounded(&a2, &x, n, 4).map_err(|e| e.to_string())?;
        let direct = t_truncate(&a2, &x, n, 4).map_err(|e| e.to_string())?;
        ensure!(u.limit.object == direct.leq, "input {s}: unbounded route differs");
        let bound = if x.is_zero_object() { 1 } else { (x.hi() - x.lo() + 2) as usize };
        ensure!(u.steps <= bound, "input {s}: {} steps > {bound}", u.steps);
    }
    Ok(format!("{triangles} triangles, 20 unbounded comparisons"))
}

/// Module maps `T: M -> N` with `T act_M(b) = act_N(b) T` for every basis element.
fn intertwiners(m: &FpModule, n: &FpModule) -> Matrix {
    let field = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let mut rows = Vec::new();
    for (am, an) in m.action().iter().zip(n.action()) {
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![field.zero(); dn * dm];
                for s in 0..dn {
                    row[s * dm + c] = &row[s * dm + c] + an.get(r, s);
                }
                for s in 0..dm {
                    row[r * dm + s] = &row[r * dm + s] - am.get(s, c);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Matrix::identity(field, dn * dm);
    }
    Matrix::from_rows(field, rows).unwrap().kernel()
}

fn isomorphic(m: &FpModule, n: &FpModule) -> bool {
    if m.dim() != n.dim() {
        return false;
    }
    let k = intertwiners(m, n);
    let field = m.field();
    let d = m.dim();
    let mut g = Gen::new(17);
    for _ in 0..20 {
        let c = g.vector(field, k.cols());
        let v = k.mul_vec(&c).unwrap();
        let t = Matrix::from_rows(field, v.chunks(d.max(1)).map(|r| r.to_vec()).collect()).unwrap();
        if d == 0 || t.rank() == d {
            return true;
        }
    }
    false
}

fn derived_projectives() -> Outcome {
    let mut count = 0;
    for (name, pc) in algebras(Q) {
        let mut g = Gen::new(1100);
        let mut family = Vec::new();
        for a in pc.cat().objects() {
            for s in 0..3 {
                family.push(tw_shift(&embed_object(&pc, &[a]).unwrap(), s));
            }
        }
        while family.len() < 20 {
            family.push(g.complex(pc.cat(), -3, 0, 2).map_err(|e| e.to_string())?);
        }
        for a in pc.cat().objects() {
            let p = embed_object(&pc, &[a]).map_err(|e| e.to_string())?;
            let c = derived_projective_cert(&pc, &p, &family).map_err(|e| e.to_string())?;
            ensure!(c.tests.iter().all(|t| t.z_in_aisle), "{name}: a test object is outside t<=0");
            ensure!(c.passed, "{name}, {}: certificate fails", pc.cat().name(a));
            ensure!(isomorphic(&c.heart, &pc.module_of(&[a])), "{name}: H^0_t(P) is not isomorphic to P");
            count += 1;
        }
    }
    Ok(format!("{count} generators against 20-element families"))
}

fn qff_lifts() -> Outcome {
    let bases: Vec<Cat> = vec![
        Arc::new(dual_numbers(Q)),
        Arc::new(dual_numbers(Field::Prime(7))),
        proj_k(Q).cat().clone(),
    ];
    for s in 0..10u64 {
        let a = &bases[(s % 3) as usize];
        let (_, u) = acyclic_extension(a).map_err(|e| e.to_string())?;
        ensure!(check_quasi_fully_faithful(&u).map_err(|e| e.to_string())?.passed, "instance {s}: u not qff");
        let mut g = Gen::new(1200 + s);
        let x = g.complex(a, -1, 1, 2).map_err(|e| e.to_string())?;
        let y = g.complex(a, -1, 1, 2).map_err(|e| e.to_string())?;
        let ux = map_functor(&u, &x).map_err(|e| e.to_string())?;
        let uy = map_functor(&u, &y).map_err(|e| e.to_string())?;
        let gm = g.closed_morphism(&ux, &uy, 0);
        let l = qff_lift(&u, &x, &y, &gm).map_err(|e| format!("instance {s}: {e}"))?;
        ensure!(tw_diff(&l.f).is_zero(), "instance {s}: lift not closed");
        let uf = map_functor_mor(&u, &l.f).map_err(|e| e.to_string())?;
        ensure!(uf.add(&tw_diff(&l.alpha)).unwrap() == gm, "instance {s}: u(f) + d alpha != g");
    }
    Ok("10 lifts".into())
}

fn cli_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli")
}

/// The CLI binary next to this test executable (`target/<profile>/twistlab`).
fn cli_binary() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let bin = dir.join(format!("twistlab{}", std::env::consts::EXE_SUFFIX));
    bin.exists().then_some(bin)
}

fn cli_golden() -> Outcome {
    let bin = cli_binary().ok_or("CLI binary not built (run `cargo test --workspace`)")?;
    let cases = std::fs::read_to_string(cli_dir().join("tests/golden/cases.txt")).map_err(|e| e.to_string())?;
    let mut n = 0;
    let mut codes = [0; 3];
    for line in cases.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        let (name, args, code): (&str, Vec<&str>, i32) =
            (parts[0], parts[1].split_whitespace().collect(), parts[2].parse().unwrap());
        let out = Command::new(&bin)
            .args(&args)
            .current_dir(cli_dir().join("fixtures"))
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(code), "{name}: exit {:?}, expected {code}", out.status.code());
        let golden = std::fs::read(cli_dir().join(format!("tests/golden/{name}.txt"))).map_err(|e| e.to_string())?;
        ensure!(out.stdout == golden, "{name}: report differs from the golden file");
        codes[code as usize] += 1;
        n += 1;
    }
    let out = Command::new(&bin).arg("no-such-verb").output().map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(2), "unknown verb: exit {:?}", out.status.code());
    ensure!(codes.iter().all(|&c| c > 0), "exit codes covered: {codes:?}");
    Ok(format!("{n} golden reports, exit codes 0/1/2 seen {codes:?}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suite", axiom_suite),
        ("pretriangles", pretriangles),
        ("isomorphisms", isos),
        ("iso_cones", iso_cones),
        ("towers", towers),
        ("weights", weights),
        ("t-structures", t_structures),
        ("derived projectives", derived_projectives),
        ("qff_lift", qff_lifts),
        ("CLI golden files", cli_golden),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("PASS {:>2}. {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                println!("FAIL {:>2}. {name}: {msg} ({ms} ms)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("total {secs:.1} s");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(secs < 60.0, "suite took {secs:.1} s");
}

