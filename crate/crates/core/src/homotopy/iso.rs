use serde::Serialize;

use super::nullhomotopy;
use super::window::HomWindowComplex;
use crate::dgcore::ValidationReport;
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, Matrix, Scalar};
use crate::twisted::{
    brutal_truncate, connecting_homotopy, truncate_morphism, tw_compose, tw_cone, tw_diff, weight_triangle, Pretriangle,
    Trunc, TwMorphism, TwistedComplex,
};

fn c(g: &TwMorphism, f: &TwMorphism) -> Result<TwMorphism> {
    tw_compose(g, f)
}

fn c3(a: &TwMorphism, b: &TwMorphism, f: &TwMorphism) -> Result<TwMorphism> {
    tw_compose(a, &tw_compose(b, f)?)
}

/// `Σ terms`, all of the same shape.
fn sum(terms: &[TwMorphism]) -> Result<TwMorphism> {
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        out = out.add(t)?;
    }
    Ok(out)
}

/// An inverse up to homotopy: `inv ∘ m = 1 + d left` and `m ∘ inv = 1 + d right`.
#[derive(Clone, Debug)]
pub struct H0Inverse {
    pub inv: TwMorphism,
    pub left: TwMorphism,
    pub right: TwMorphism,
}

impl H0Inverse {
    /// Strict inverse with zero homotopies.
    pub fn strict(inv: &TwMorphism) -> H0Inverse {
        H0Inverse {
            inv: inv.clone(),
            left: TwMorphism::zero(inv.tgt(), inv.tgt(), -1),
            right: TwMorphism::zero(inv.src(), inv.src(), -1),
        }
    }

    /// Residuals of the two equations for `m` (empty when both hold).
    fn failures(&self, m: &TwMorphism) -> Result<Vec<&'static str>> {
        let mut out = Vec::new();
        if !tw_diff(&self.inv).is_zero() {
            out.push("d(inverse) = 0");
        }
        let l = c(&self.inv, m)?.sub(&TwMorphism::identity(m.src()))?.sub(&tw_diff(&self.left))?;
        if !l.is_zero() {
            out.push("inverse∘m = 1 + d(left)");
        }
        let r = c(m, &self.inv)?.sub(&TwMorphism::identity(m.tgt()))?.sub(&tw_diff(&self.right))?;
        if !r.is_zero() {
            out.push("m∘inverse = 1 + d(right)");
        }
        Ok(out)
    }

    /// Every piece shifted by `n`.
    fn shift(&self, n: i64) -> H0Inverse {
        H0Inverse {
            inv: self.inv.shift(n),
            left: self.left.shift(n),
            right: self.right.shift(n),
        }
    }
}

/// Joint solve for closed `g` and `h` with `g f - dh = 1` (left) or
/// `f g - dh = 1` (right).
fn one_sided_inverse(f: &TwMorphism, left: bool) -> Result<Option<(TwMorphism, TwMorphism)>> {
    let (x, y) = (f.src(), f.tgt());
    let field = x.cat().field();
    let (hsrc, one) = if left { (x, TwMorphism::identity(x)) } else { (y, TwMorphism::identity(y)) };
    let gw = HomWindowComplex::new(y, x);
    let hw = HomWindowComplex::new(hsrc, hsrc);
    let ng = gw.dim(0);
    let nh = hw.dim(-1);
    let rows_top = hw.dim(0);
    let rows_bot = gw.dim(1);
    let dg = gw.diff_matrix(0);
    let dh = hw.diff_matrix(-1);
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(ng + nh);
    for k in 0..ng {
        let e = TwMorphism::from_coords(y, x, 0, &crate::exactlin::vector::unit(field, ng, k));
        let top = if left { c(&e, f)? } else { c(f, &e)? };
        let mut col = top.coords();
        col.extend(dg.column(k));
        cols.push(col);
    }
    for k in 0..nh {
        let mut col: Vec<Scalar> = dh.column(k).iter().map(|s| -s.clone()).collect();
        col.extend(field.zeros(rows_bot));
        cols.push(col);
    }
    let m = Matrix::from_columns(field, rows_top + rows_bot, &cols);
    let mut rhs = one.coords();
    rhs.extend(field.zeros(rows_bot));
    Ok(solve_linear(&m, &rhs)?.map(|sol| {
        let g = TwMorphism::from_coords(y, x, 0, &sol[..ng]);
        let h = TwMorphism::from_coords(hsrc, hsrc, -1, &sol[ng..]);
        (g, h)
    }))
}

/// Combines a left inverse `g_l` (`g_l f = 1 + d h_l`) and a right inverse
/// `g_r` (`f g_r = 1 + d h_r`) into `g_l` with both homotopies:
/// `f g_l = 1 + d(h_r + f h_l g_r - f g_l h_r)`.
fn two_sided(f: &TwMorphism, gl: &TwMorphism, hl: &TwMorphism, gr: &TwMorphism, hr: &TwMorphism) -> Result<H0Inverse> {
    let right = sum(&[hr.clone(), c3(f, hl, gr)?, c3(f, gl, hr)?.neg()])?;
    Ok(H0Inverse {
        inv: gl.clone(),
        left: hl.clone(),
        right,
    })
}

/// An inverse of `f` in `H^0` with both homotopies, found by two exact
/// linear solves; `None` if `f` is not invertible there.
pub fn h0_inverse(f: &TwMorphism) -> Result<Option<H0Inverse>> {
    let Some((gl, hl)) = one_sided_inverse(f, true)? else {
        return Ok(None);
    };
    let Some((gr, hr)) = one_sided_inverse(f, false)? else {
        return Ok(None);
    };
    Ok(Some(two_sided(f, &gl, &hl, &gr, &hr)?))
}

/// The morphism `cone(f) -> cone(f')` with matrix
/// `[[a[1], 0], [c 1_{(A,1,0)}, b]]`, where `a[1]` is plain reindexing.
pub fn cone_matrix(
    src: &Pretriangle,
    tgt: &Pretriangle,
    a: &TwMorphism,
    cc: &TwMorphism,
    b: &TwMorphism,
) -> Result<TwMorphism> {
    let one = TwMorphism::shifted_identity(src.f.src(), 1, 0);
    let top = c3(&tgt.i, &a.reindex(1), &src.p)?;
    let low = c3(&tgt.j, &c(cc, &one)?, &src.p)?;
    let right = c3(&tgt.j, b, &src.s)?;
    sum(&[top, low, right])
}

/// The square `v f ≃ f' u` via `h`, with `dh = v f - f' u`.
#[derive(Clone, Debug)]
pub struct ConeSquare {
    pub f: TwMorphism,
    pub f2: TwMorphism,
    pub u: TwMorphism,
    pub v: TwMorphism,
    pub h: TwMorphism,
}

#[derive(Clone, Debug)]
pub struct ConeTransfer {
    pub cone: Pretriangle,
    pub cone2: Pretriangle,
    /// `cone(f) -> cone(f')`
    pub w: TwMorphism,
    /// `w_left ∘ w = 1 + d h_left`
    pub w_left: TwMorphism,
    /// `w ∘ w_right = 1 + d h_right`
    pub w_right: TwMorphism,
    pub h_left: TwMorphism,
    pub h_right: TwMorphism,
    /// `h_0 + z'_0` and `h_0 + z'_1`
    pub h_prime_left: TwMorphism,
    pub h_prime_right: TwMorphism,
}

fn need(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::contract(format!("witness equation fails: {what}")))
    }
}

fn verify(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!("cone transfer: {what} does not hold")))
    }
}

/// Given the square and inverses of `u`, `v` up to homotopy, builds
/// `w: cone(f) -> cone(f')`, left and right inverses `w^l`, `w^r` and the
/// boundary matrices `h^l = [[ũ[1], 0], [h̃ 1, ṽ]]`, `h^r` likewise, and
/// checks every stated identity exactly.
pub fn cone_iso_transfer(sq: &ConeSquare, ui: &H0Inverse, vi: &H0Inverse) -> Result<ConeTransfer> {
    let ConeSquare { f, f2, u, v, h } = sq;
    for (m, name) in [(f, "f"), (f2, "f'"), (u, "u"), (v, "v")] {
        need(m.deg() == 0 && tw_diff(m).is_zero(), &format!("{name} closed of degree 0"))?;
    }
    need(h.deg() == -1, "h has degree -1")?;
    let defect = c(v, f)?.sub(&c(f2, u)?)?;
    need(tw_diff(h) == defect, "dh = vf - f'u")?;
    if let Some(w) = ui.failures(u)?.first() {
        need(false, &format!("u: {w}"))?;
    }
    if let Some(w) = vi.failures(v)?.first() {
        need(false, &format!("v: {w}"))?;
    }
    let (u1, v1) = (&ui.inv, &vi.inv);
    // u'u = 1 - dũ, uu' = 1 - dũ', v'v = 1 + dṽ, vv' = 1 + dṽ'.
    let ut = ui.left.neg();
    let ut1 = ui.right.neg();
    let vt = vi.left.clone();
    let vt1 = vi.right.clone();

    let h0 = sum(&[c3(v1, h, u1)?.neg(), c3(v1, f2, &ut1)?, c3(&vt, f, u1)?])?;
    verify(tw_diff(&h0) == c(v1, f2)?.sub(&c(f, u1)?)?, "dh_0 = v'f' - fu'")?;
    let r = sum(&[c(f, &ut)?, c(&vt, f)?, c(&h0, u)?.neg(), c(v1, h)?.neg()])?;
    let r2 = sum(&[c(f2, &ut1)?, c(&vt1, f2)?, c(h, u1)?.neg(), c(v, &h0)?.neg()])?;
    verify(tw_diff(&r).is_zero() && tw_diff(&r2).is_zero(), "dr = 0 and dr' = 0")?;
    let hl1 = h0.add(&c(&r, u1)?)?;
    let hr1 = h0.add(&c(v1, &r2)?)?;
    let htl = c(&r, &ut)?;
    let htr = c(&vt1, &r2)?;

    let cone = tw_cone(f)?;
    let cone2 = tw_cone(f2)?;
    let w = cone_matrix(&cone, &cone2, u, h, v)?;
    let w_left = cone_matrix(&cone2, &cone, u1, &hl1, v1)?;
    let w_right = cone_matrix(&cone2, &cone, u1, &hr1, v1)?;
    let h_left = cone_matrix(&cone, &cone, &ut, &htl, &vt)?;
    let h_right = cone_matrix(&cone2, &cone2, &ut1, &htr, &vt1)?;

    for m in [&w, &w_left, &w_right] {
        verify(tw_diff(m).is_zero(), "closedness of w, w^l, w^r")?;
    }
    let one = TwMorphism::identity(&cone.cone);
    verify(c(&w_left, &w)? == one.add(&tw_diff(&h_left))?, "w^l w = 1 + dh^l")?;
    let one2 = TwMorphism::identity(&cone2.cone);
    verify(c(&w, &w_right)? == one2.add(&tw_diff(&h_right))?, "w w^r = 1 + dh^r")?;
    verify(c(&w, &cone.j)? == c(&cone2.j, v)?, "w j = j' v")?;
    verify(c(&cone2.p, &w)? == c(&u.reindex(1), &cone.p)?, "p' w = u[1] p")?;
    for wl in [&w_left, &w_right] {
        verify(c(wl, &cone2.j)? == c(&cone.j, v1)?, "w' j' = j v'")?;
        verify(c(&cone.p, wl)? == c(&u1.reindex(1), &cone2.p)?, "p w' = u'[1] p'")?;
    }
    Ok(ConeTransfer {
        cone,
        cone2,
        w,
        w_left,
        w_right,
        h_left,
        h_right,
        h_prime_left: hl1,
        h_prime_right: hr1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMethod {
    /// Degree-by-degree induction along weight triangles.
    Induction,
    /// One joint linear solve on the whole hom complex.
    DirectSolve,
}

/// `g ∘ f = 1 + d h_left` and `f ∘ g = 1 + d h_right`.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub f: TwMorphism,
    pub g: TwMorphism,
    pub h_left: TwMorphism,
    pub h_right: TwMorphism,
    pub method: CertMethod,
}

impl IsoCertificate {
    pub fn check(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new();
        rep.check("dg=0", || "g".into(), &tw_diff(&self.g).coords());
        let l = c(&self.g, &self.f)?
            .sub(&TwMorphism::identity(self.f.src()))?
            .sub(&tw_diff(&self.h_left))?;
        rep.check("gf=1+dh_l", || "X".into(), &l.coords());
        let r = c(&self.f, &self.g)?
            .sub(&TwMorphism::identity(self.f.tgt()))?
            .sub(&tw_diff(&self.h_right))?;
        rep.check("fg=1+dh_r", || "Y".into(), &r.coords());
        Ok(rep)
    }
}

#[derive(Clone, Debug)]
pub struct IsoVerdict {
    pub iso: bool,
    /// `H` with `dH = 1` on `cone(f)` when it exists.
    pub cone_contraction: Option<TwMorphism>,
    pub components_invertible: bool,
    pub certificate: Option<IsoCertificate>,
}

fn diagonal(f: &TwMorphism, k: i64) -> TwMorphism {
    truncate_morphism(f, Trunc::Window(k, k))
}

/// Whether every `f_k^k` is invertible in `H^0`, with the inverses.
fn diagonal_inverses(f: &TwMorphism) -> Result<Option<Vec<(i64, H0Inverse)>>> {
    let (lo, hi) = window(f.src(), f.tgt());
    let mut out = Vec::new();
    for k in lo..=hi {
        match h0_inverse(&diagonal(f, k))? {
            Some(i) => out.push((k, i)),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn window(x: &TwistedComplex, y: &TwistedComplex) -> (i64, i64) {
    let parts: Vec<&TwistedComplex> = [x, y].into_iter().filter(|c| !c.is_zero_object()).collect();
    let lo = parts.iter().map(|c| c.lo()).min().unwrap_or(0);
    let hi = parts.iter().map(|c| c.hi()).max().unwrap_or(-1);
    (lo, hi)
}

/// Builds an inverse of `f` from inverses of its diagonal components,
/// adjoining one degree at a time from the top: `σ_{≥k}X` is the cone of
/// `x̃`, the connecting homotopy fills the square and [`cone_iso_transfer`]
/// produces the inverse on the larger window.
pub fn iso_certificate_by_induction(f: &TwMorphism) -> Result<Option<IsoCertificate>> {
    let Some(diag) = diagonal_inverses(f)? else {
        return Ok(None);
    };
    let (_, hi) = window(f.src(), f.tgt());
    let fgeq = |k: i64| truncate_morphism(f, Trunc::Geq(k));
    let top = fgeq(hi + 1);
    let mut inv = H0Inverse::strict(&TwMorphism::zero(top.tgt(), top.src(), 0));
    for (k, dk) in diag.into_iter().rev() {
        let fk = fgeq(k);
        let xk = brutal_truncate(f.src(), Trunc::Geq(k)).complex;
        let yk = brutal_truncate(f.tgt(), Trunc::Geq(k)).complex;
        let wx = weight_triangle(&xk, k + 1)?;
        let wy = weight_triangle(&yk, k + 1)?;
        let sq = ConeSquare {
            f: wx.xt.clone(),
            f2: wy.xt.clone(),
            u: diagonal(f, k).shift(-1),
            v: fgeq(k + 1),
            h: connecting_homotopy(&fk, k + 1)?,
        };
        let t = cone_iso_transfer(&sq, &dk.shift(-1), &inv)?;
        if t.w != fk {
            return Err(Error::Internal(format!("cone matrix differs from f on degrees >= {k}")));
        }
        inv = two_sided(&fk, &t.w_left, &t.h_left, &t.w_right, &t.h_right)?;
    }
    Ok(Some(IsoCertificate {
        f: f.clone(),
        g: inv.inv,
        h_left: inv.left,
        h_right: inv.right,
        method: CertMethod::Induction,
    }))
}

/// Decides whether a closed degree-0 `f` is invertible in `H^0` by solving
/// for a contraction of `cone(f)`. A certificate is attached when one can
/// be built: by induction when the diagonal components are invertible, by
/// a direct solve otherwise.
pub fn h0_iso_decide(f: &TwMorphism) -> Result<IsoVerdict> {
    if f.deg() != 0 || !tw_diff(f).is_zero() {
        return Err(Error::contract("iso decision needs a closed degree-0 morphism"));
    }
    let cone = tw_cone(f)?.cone;
    let cone_contraction = nullhomotopy(&TwMorphism::identity(&cone))?;
    let iso = cone_contraction.is_some();
    let by_induction = iso_certificate_by_induction(f)?;
    let components_invertible = by_induction.is_some();
    if components_invertible && !iso {
        return Err(Error::Internal("invertible components but the cone is not contractible".into()));
    }
    let certificate = match by_induction {
        Some(cert) => Some(cert),
        None if iso => h0_inverse(f)?.map(|i| IsoCertificate {
            f: f.clone(),
            g: i.inv,
            h_left: i.left,
            h_right: i.right,
            method: CertMethod::DirectSolve,
        }),
        None => None,
    };
    if let Some(cert) = &certificate {
        if !cert.check()?.passed {
            return Err(Error::Internal("iso certificate fails its equations".into()));
        }
    }
    if iso != certificate.is_some() {
        return Err(Error::Internal("cone contractibility and inverse search disagree".into()));
    }
    Ok(IsoVerdict {
        iso,
        cone_contraction,
        components_invertible,
        certificate,
    })
}
