use serde::Serialize;

use super::module::FpModule;
use super::proj::{minimize, ProjCat};
use super::truncate::{heart_cohomology, projective_cover};
use crate::dgcore::ObjId;
use crate::error::{Error, Result};
use crate::homotopy::{h0_iso_decide, nullhomotopy, HomWindowComplex, IsoCertificate};
use crate::twisted::{brutal_truncate, tw_compose, tw_shift, Trunc, TwMorphism, TwistedComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aisle {
    /// Weight `≤ n`: H^0-isomorphic to a complex in degrees `≤ n`.
    WeightLeq(i64),
    /// Weight `≥ n`.
    WeightGeq(i64),
    /// `H^k_t = 0` for `k > n`.
    TLeq(i64),
    /// `H^k_t = 0` for `k < n`.
    TGeq(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NotMember,
    /// No certificate was found; membership is not decided.
    NotCertified,
}

#[derive(Clone, Debug)]
pub enum AisleWitness {
    /// `X` is contractible.
    Contractible(TwMorphism),
    /// An H^0-isomorphism between `X` and a brutally supported complex.
    Iso(Box<IsoCertificate>),
    /// A degree with nonzero cohomology and its dimension vector.
    Cohomology { degree: i64, dim_vector: Vec<usize> },
    None,
}

#[derive(Clone, Debug)]
pub struct AisleReport {
    pub aisle: Aisle,
    pub verdict: Verdict,
    pub witness: AisleWitness,
}

/// Weight aisles are certified by an H^0-isomorphism to a brutal truncation
/// (after cancelling contractible summands when `pc` is given); t-aisles by
/// vanishing of heart cohomology, which needs `pc`.
pub fn aisle_membership(pc: Option<&ProjCat>, x: &TwistedComplex, aisle: Aisle) -> Result<AisleReport> {
    let report = |verdict, witness| AisleReport { aisle, verdict, witness };
    if let Some(h) = nullhomotopy(&TwMorphism::identity(x))? {
        if !x.is_zero_object() {
            return Ok(report(Verdict::Member, AisleWitness::Contractible(h)));
        }
    }
    match aisle {
        Aisle::WeightLeq(n) | Aisle::WeightGeq(n) => {
            let (core, to_core) = match pc {
                Some(pc) => {
                    let m = minimize(pc, x)?;
                    (m.complex, Some((m.incl, m.proj)))
                }
                None => (x.clone(), None),
            };
            let f = match aisle {
                Aisle::WeightLeq(_) => {
                    let p = brutal_truncate(&core, Trunc::Leq(n)).map.expect("brutal quotient");
                    match &to_core {
                        Some((_, proj)) => tw_compose(&p, proj)?,
                        None => p,
                    }
                }
                _ => {
                    let j = brutal_truncate(&core, Trunc::Geq(n)).map.expect("brutal inclusion");
                    match &to_core {
                        Some((incl, _)) => tw_compose(incl, &j)?,
                        None => j,
                    }
                }
            };
            let v = h0_iso_decide(&f)?;
            Ok(match v.certificate {
                Some(c) if v.iso => report(Verdict::Member, AisleWitness::Iso(Box::new(c))),
                _ => report(Verdict::NotCertified, AisleWitness::None),
            })
        }
        Aisle::TLeq(n) | Aisle::TGeq(n) => {
            let pc = pc.ok_or_else(|| Error::Unsupported("t-aisles need a category of projectives".into()))?;
            if x.is_zero_object() {
                return Ok(report(Verdict::Member, AisleWitness::None));
            }
            let degrees: Vec<i64> = match aisle {
                Aisle::TLeq(_) => (n + 1..=x.hi()).collect(),
                _ => (x.lo()..n).collect(),
            };
            for k in degrees {
                let h = heart_cohomology(pc, x, k)?;
                if h.dim() > 0 {
                    let dim_vector = h.dim_vector(pc.algebra());
                    return Ok(report(Verdict::NotMember, AisleWitness::Cohomology { degree: k, dim_vector }));
                }
            }
            Ok(report(Verdict::Member, AisleWitness::None))
        }
    }
}

/// `P` placed in degree 0.
pub fn embed_object(pc: &ProjCat, objs: &[ObjId]) -> Result<TwistedComplex> {
    TwistedComplex::single(pc.cat().clone(), objs.to_vec(), 0)
}

#[derive(Clone, Debug)]
pub struct VanishingTest {
    pub z: TwistedComplex,
    pub z_in_aisle: bool,
    /// `dim H^0 Hom(Q, Z[1])`
    pub h0_dim: usize,
    /// A cocycle representing a nonzero class, when there is one.
    pub witness: Option<TwMorphism>,
}

#[derive(Clone, Debug)]
pub struct DerivedProjCert {
    pub passed: bool,
    pub q_in_aisle: bool,
    pub tests: Vec<VanishingTest>,
    pub heart: FpModule,
    pub heart_dim_vector: Vec<usize>,
    /// The projective cover of `H^0_t(Q)` has zero kernel.
    pub heart_projective: bool,
}

/// Checks `Q ∈ t≤0`, `H^0 Hom(Q, Z[1]) = 0` for each test object `Z` (each
/// must itself lie in `t≤0`), and that `H^0_t(Q)` is projective.
pub fn derived_projective_cert(pc: &ProjCat, q: &TwistedComplex, tests: &[TwistedComplex]) -> Result<DerivedProjCert> {
    pc.check_cat(q.cat())?;
    let in_t_leq0 = |c: &TwistedComplex| -> Result<bool> {
        Ok(aisle_membership(Some(pc), c, Aisle::TLeq(0))?.verdict == Verdict::Member)
    };
    let q_in_aisle = in_t_leq0(q)?;
    let mut out = Vec::with_capacity(tests.len());
    for z in tests {
        pc.check_cat(z.cat())?;
        let w = HomWindowComplex::new(q, &tw_shift(z, 1));
        let h = w.cohomology(0)?;
        let witness = (h.dim > 0).then(|| TwMorphism::from_coords(&w.src, &w.tgt, 0, &h.representatives.column(0)));
        out.push(VanishingTest {
            z: z.clone(),
            z_in_aisle: in_t_leq0(z)?,
            h0_dim: h.dim,
            witness,
        });
    }
    let heart = heart_cohomology(pc, q, 0)?;
    let heart_dim_vector = heart.dim_vector(pc.algebra());
    let heart_projective = projective_cover(pc, &heart)?.kernel().cols() == 0;
    let passed = q_in_aisle && heart_projective && out.iter().all(|t| t.z_in_aisle && t.h0_dim == 0);
    Ok(DerivedProjCert {
        passed,
        q_in_aisle,
        tests: out,
        heart,
        heart_dim_vector,
        heart_projective,
    })
}
