use std::sync::Arc;

use serde::Serialize;

use super::iso::h0_iso_decide;
use crate::dgcore::opposite_cat;
use crate::error::{Error, Result};
use crate::exactlin::{vector, Field, Matrix};
use crate::twisted::{
    brutal_truncate, canonical_map, opposite_tw, opposite_tw_mor, tw_compose, tw_cone, tw_diff, tw_shift, tw_sum,
    Trunc, TwMorphism, TwistedComplex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerDirection {
    /// `transitions[n]: entries[n+1] -> entries[n]`
    Inverse,
    /// `transitions[n]: entries[n] -> entries[n+1]`
    Direct,
}

/// A sequential diagram that is constant (identity transitions) from
/// `stabilization_index` on. Only the entries up to that index are stored.
#[derive(Clone, Debug)]
pub struct Tower {
    direction: TowerDirection,
    entries: Vec<TwistedComplex>,
    transitions: Vec<TwMorphism>,
    stabilization_index: usize,
}

impl Tower {
    /// Checks that transitions are closed degree-0 maps between the right
    /// entries and that everything past the stabilization index is constant.
    /// Entries beyond the index are dropped.
    pub fn new(
        direction: TowerDirection,
        mut entries: Vec<TwistedComplex>,
        mut transitions: Vec<TwMorphism>,
        stabilization_index: Option<usize>,
    ) -> Result<Tower> {
        let Some(s) = stabilization_index else {
            return Err(Error::Unsupported("tower without a stabilization index".into()));
        };
        if entries.is_empty() || transitions.len() + 1 != entries.len() {
            return Err(Error::contract("a tower with m entries needs m - 1 transitions"));
        }
        if s >= entries.len() {
            return Err(Error::Unsupported(format!(
                "stabilization index {s} lies beyond the {} stored entries",
                entries.len()
            )));
        }
        for (n, t) in transitions.iter().enumerate() {
            let (a, b) = match direction {
                TowerDirection::Inverse => (&entries[n + 1], &entries[n]),
                TowerDirection::Direct => (&entries[n], &entries[n + 1]),
            };
            if t.src() != a || t.tgt() != b || t.deg() != 0 {
                return Err(Error::contract(format!("transition {n} has the wrong source, target or degree")));
            }
            if !tw_diff(t).is_zero() {
                return Err(Error::contract(format!("transition {n} is not closed")));
            }
            if n >= s && *t != TwMorphism::identity(a) {
                return Err(Error::Unsupported(format!("transition {n} past the stabilization index is not the identity")));
            }
        }
        entries.truncate(s + 1);
        transitions.truncate(s);
        Ok(Tower {
            direction,
            entries,
            transitions,
            stabilization_index: s,
        })
    }

    /// The inverse tower `σ_{≤k}X`, `k = from, from+1, ...`, with the
    /// projections `p_{k+1,k}`.
    pub fn brutal_leq(x: &TwistedComplex, from: i64) -> Tower {
        let s = (x.hi() - from).max(0) as usize;
        let entries: Vec<TwistedComplex> = (0..=s)
            .map(|n| brutal_truncate(x, Trunc::Leq(from + n as i64)).complex)
            .collect();
        let transitions = (0..s).map(|n| canonical_map(&entries[n + 1], &entries[n])).collect();
        Tower {
            direction: TowerDirection::Inverse,
            entries,
            transitions,
            stabilization_index: s,
        }
    }

    /// The direct tower `σ_{≥-k}X`, `k = -from, -from+1, ...`, with the
    /// inclusions `j_{-k,-k-1}`.
    pub fn brutal_geq(x: &TwistedComplex, from: i64) -> Tower {
        let s = (from - x.lo()).max(0) as usize;
        let entries: Vec<TwistedComplex> = (0..=s)
            .map(|n| brutal_truncate(x, Trunc::Geq(from - n as i64)).complex)
            .collect();
        let transitions = (0..s).map(|n| canonical_map(&entries[n], &entries[n + 1])).collect();
        Tower {
            direction: TowerDirection::Direct,
            entries,
            transitions,
            stabilization_index: s,
        }
    }

    /// The constant tower on `x`.
    pub fn constant(x: &TwistedComplex) -> Tower {
        Tower {
            direction: TowerDirection::Inverse,
            entries: vec![x.clone()],
            transitions: Vec::new(),
            stabilization_index: 0,
        }
    }

    pub fn direction(&self) -> TowerDirection {
        self.direction
    }

    pub fn entries(&self) -> &[TwistedComplex] {
        &self.entries
    }

    pub fn transitions(&self) -> &[TwMorphism] {
        &self.transitions
    }

    pub fn stabilization_index(&self) -> usize {
        self.stabilization_index
    }

    fn field(&self) -> Field {
        self.entries[0].cat().field()
    }

    /// The composite of transitions between the stable entry and entry `n`.
    fn leg(&self, n: usize) -> Result<TwMorphism> {
        let s = self.stabilization_index;
        let mut m = TwMorphism::identity(&self.entries[s]);
        match self.direction {
            TowerDirection::Inverse => {
                for k in (n..s).rev() {
                    m = tw_compose(&self.transitions[k], &m)?;
                }
            }
            TowerDirection::Direct => {
                m = TwMorphism::identity(&self.entries[n]);
                for k in n..s {
                    m = tw_compose(&self.transitions[k], &m)?;
                }
            }
        }
        Ok(m)
    }

    fn opposite(&self) -> Result<Tower> {
        let op = Arc::new(opposite_cat(self.entries[0].cat()));
        let entries = self
            .entries
            .iter()
            .map(|e| opposite_tw(e, &op))
            .collect::<Result<Vec<_>>>()?;
        let transitions = self
            .transitions
            .iter()
            .map(|t| opposite_tw_mor(t, &op))
            .collect::<Result<Vec<_>>>()?;
        let direction = match self.direction {
            TowerDirection::Inverse => TowerDirection::Direct,
            TowerDirection::Direct => TowerDirection::Inverse,
        };
        Ok(Tower {
            direction,
            entries,
            transitions,
            stabilization_index: self.stabilization_index,
        })
    }
}

/// The limit (inverse towers) or colimit (direct towers) with its legs
/// `lim -> entries[n]` or `entries[n] -> colim`.
#[derive(Clone, Debug)]
pub struct TowerLimit {
    pub object: TwistedComplex,
    pub legs: Vec<TwMorphism>,
}

/// Degreewise eventual value; for a stabilizing tower this is the stable
/// entry.
pub fn tower_lim(t: &Tower) -> Result<TowerLimit> {
    let legs = (0..t.entries.len()).map(|n| t.leg(n)).collect::<Result<Vec<_>>>()?;
    Ok(TowerLimit {
        object: t.entries[t.stabilization_index].clone(),
        legs,
    })
}

#[derive(Clone, Debug)]
pub struct TowerHolim {
    /// `cone(1 - ν)[-1]` over the product of the entries up to the
    /// stabilization index (inverse towers), or the dual construction.
    pub holim: TwistedComplex,
    /// The map `1 - ν` (for direct towers, `1 - μ`) on the finite product or sum.
    pub one_minus_nu: TwMorphism,
    pub lim: TowerLimit,
    /// `lim -> holim` for inverse towers, `hocolim -> colim` for direct ones.
    pub comparison: TwMorphism,
    pub comparison_is_iso: bool,
}

/// Milnor construction on the finite truncation of the tower. Direct
/// towers are handled by passing to opposites and back.
pub fn tower_holim(t: &Tower) -> Result<TowerHolim> {
    match t.direction {
        TowerDirection::Inverse => inverse_holim(t),
        TowerDirection::Direct => {
            let cat = t.entries[0].cat().clone();
            let h = inverse_holim(&t.opposite()?)?;
            let back = |f: &TwMorphism| opposite_tw_mor(f, &cat);
            Ok(TowerHolim {
                holim: opposite_tw(&h.holim, &cat)?,
                one_minus_nu: back(&h.one_minus_nu)?,
                lim: tower_lim(t)?,
                comparison: back(&h.comparison)?,
                comparison_is_iso: h.comparison_is_iso,
            })
        }
    }
}

fn inverse_holim(t: &Tower) -> Result<TowerHolim> {
    let s = t.stabilization_index;
    let lim = tower_lim(t)?;
    let cat = t.entries[0].cat().clone();
    let p = tw_sum(&t.entries)?;
    let q = if s == 0 {
        None
    } else {
        Some(tw_sum(&t.entries[..s])?)
    };
    let qsum = q.as_ref().map_or_else(|| TwistedComplex::zero(cat.clone()), |q| q.sum.clone());
    let mut delta = TwMorphism::zero(&p.sum, &qsum, 0);
    if let Some(q) = &q {
        for n in 0..s {
            let step = tw_compose(&t.transitions[n], &p.projections[n + 1])?;
            let diff = p.projections[n].sub(&step)?;
            delta = delta.add(&tw_compose(&q.inclusions[n], &diff)?)?;
        }
    }
    let cone = tw_cone(&delta)?;
    let holim = tw_shift(&cone.cone, -1);
    let mut phi = TwMorphism::zero(&lim.object, &p.sum, 0);
    for (n, leg) in lim.legs.iter().enumerate() {
        phi = phi.add(&tw_compose(&p.inclusions[n], leg)?)?;
    }
    if !tw_compose(&delta, &phi)?.is_zero() {
        return Err(Error::Internal("legs are not compatible with the transitions".into()));
    }
    let comparison = tw_compose(&cone.i, &phi.reindex(1))?.shift(-1);
    if !tw_diff(&comparison).is_zero() || *comparison.tgt() != holim {
        return Err(Error::Internal("comparison map lim -> holim is malformed".into()));
    }
    let comparison_is_iso = h0_iso_decide(&comparison)?.iso;
    Ok(TowerHolim {
        holim,
        one_minus_nu: delta,
        lim,
        comparison,
        comparison_is_iso,
    })
}

/// One degree of the Milnor sequence
/// `0 -> Hom^p(lim) -> Π_{n≤s} V_n --(1-ν)--> Π_{n<s} V_n -> 0`, with
/// `V_n = Hom^p(Z, entries[n])` for inverse towers and
/// `V_n = Hom^p(entries[n], Z)` for direct ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorDegree {
    pub degree: i64,
    pub lim_dim: usize,
    pub product_dim: usize,
    pub target_dim: usize,
    pub kernel_dim: usize,
    /// Rank of `Hom^p(lim) -> Π V_n`.
    pub restriction_rank: usize,
    pub rank: usize,
    /// Each `V_{n+1} -> V_n` is onto.
    pub transitions_surjective: bool,
    pub exact: bool,
}

fn induced_matrix(t: &Tower, z: &TwistedComplex, m: &TwMorphism, p: i64) -> Result<Matrix> {
    let field = t.field();
    let (src, tgt) = match t.direction {
        TowerDirection::Inverse => ((z, m.src()), (z, m.tgt())),
        TowerDirection::Direct => ((m.tgt(), z), (m.src(), z)),
    };
    let dim = |a: &TwistedComplex, b: &TwistedComplex| -> usize {
        TwMorphism::slots(a, b, p).iter().map(|s| s.1).sum()
    };
    let n = dim(src.0, src.1);
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let v = TwMorphism::from_coords(src.0, src.1, p, &vector::unit(field, n, k));
        let w = match t.direction {
            TowerDirection::Inverse => tw_compose(m, &v)?,
            TowerDirection::Direct => tw_compose(&v, m)?,
        };
        cols.push(w.coords());
    }
    Ok(Matrix::from_columns(field, dim(tgt.0, tgt.1), &cols))
}

fn block_rows(field: Field, blocks: &[Matrix], cols: usize) -> Matrix {
    let mut out = Matrix::zeros(field, 0, cols);
    for b in blocks {
        out = out.vstack(b).expect("matching column counts");
    }
    out
}

/// Checks exactness of the Milnor sequence against a test object `z` in
/// degree `p`, by ranks.
pub fn milnor_check(t: &Tower, z: &TwistedComplex, p: i64) -> Result<MilnorDegree> {
    let field = t.field();
    let s = t.stabilization_index;
    let lim = tower_lim(t)?;
    let v_dim = |e: &TwistedComplex| -> usize {
        let (a, b) = match t.direction {
            TowerDirection::Inverse => (z, e),
            TowerDirection::Direct => (e, z),
        };
        TwMorphism::slots(a, b, p).iter().map(|s| s.1).sum()
    };
    let dims: Vec<usize> = t.entries.iter().map(v_dim).collect();
    let offs: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let product_dim: usize = dims.iter().sum();
    let target_dim: usize = dims[..s].iter().sum();
    let mut delta = Matrix::zeros(field, target_dim, product_dim);
    let mut transitions_surjective = true;
    for n in 0..s {
        for k in 0..dims[n] {
            delta.set(offs[n] + k, offs[n] + k, field.one());
        }
        let a = induced_matrix(t, z, &t.transitions[n], p)?;
        if a.rank() != dims[n] {
            transitions_surjective = false;
        }
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let x = a.get(r, c);
                if !x.is_zero() {
                    delta.set(offs[n] + r, offs[n + 1] + c, -x.clone());
                }
            }
        }
    }
    let lim_dim = v_dim(&lim.object);
    let legs: Vec<Matrix> = lim
        .legs
        .iter()
        .map(|l| induced_matrix(t, z, l, p))
        .collect::<Result<_>>()?;
    let restriction = block_rows(field, &legs, lim_dim);
    let kernel_dim = product_dim - delta.rank();
    let restriction_rank = restriction.rank();
    let rank = delta.rank();
    let composite_zero = delta.mul(&restriction)?.is_zero();
    let exact = composite_zero && restriction_rank == lim_dim && kernel_dim == lim_dim && rank == target_dim;
    Ok(MilnorDegree {
        degree: p,
        lim_dim,
        product_dim,
        target_dim,
        kernel_dim,
        restriction_rank,
        rank,
        transitions_surjective,
        exact,
    })
}
