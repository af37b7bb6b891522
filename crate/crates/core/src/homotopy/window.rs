use crate::error::{Error, Result};
use super::FinComplex;
use crate::exactlin::{cohomology_of_pair, solve_linear, vector, Cohomology, Matrix};
use crate::twisted::{tw_diff, TwMorphism, TwistedComplex};

/// The hom complex `Hom(X, Y)` of two finite-support twisted complexes.
/// The basis of `Hom^p` is the concatenation of component bases in the order
/// of [`TwMorphism::slots`].
#[derive(Clone, Debug)]
pub struct HomWindowComplex {
    pub src: TwistedComplex,
    pub tgt: TwistedComplex,
}

impl HomWindowComplex {
    pub fn new(src: &TwistedComplex, tgt: &TwistedComplex) -> HomWindowComplex {
        HomWindowComplex {
            src: src.clone(),
            tgt: tgt.clone(),
        }
    }

    /// Degrees `p` outside this range have `Hom^p = 0`.
    pub fn degree_range(&self) -> (i64, i64) {
        let cat = self.src.cat();
        let lowest = cat.homs().values().flat_map(|h| h.degrees()).min().unwrap_or(0);
        if self.src.is_zero_object() || self.tgt.is_zero_object() {
            return (0, -1);
        }
        let lo = self.tgt.lo() - self.src.hi() + lowest;
        let hi = self.tgt.hi() - self.src.lo();
        (lo, hi)
    }

    pub fn dim(&self, p: i64) -> usize {
        TwMorphism::slots(&self.src, &self.tgt, p).iter().map(|s| s.1).sum()
    }

    /// `D: Hom^p -> Hom^{p+1}`.
    pub fn diff_matrix(&self, p: i64) -> Matrix {
        let field = self.src.cat().field();
        let n = self.dim(p);
        let rows = self.dim(p + 1);
        let cols: Vec<_> = (0..n)
            .map(|k| {
                let e = TwMorphism::from_coords(&self.src, &self.tgt, p, &vector::unit(field, n, k));
                tw_diff(&e).coords()
            })
            .collect();
        Matrix::from_columns(field, rows, &cols)
    }

    pub fn cohomology(&self, p: i64) -> Result<Cohomology> {
        cohomology_of_pair(&self.diff_matrix(p - 1), &self.diff_matrix(p))
    }

    /// The whole window as a [`FinComplex`].
    pub fn to_complex(&self) -> FinComplex {
        let (lo, hi) = self.degree_range();
        let field = self.src.cat().field();
        let dims = (lo..=hi).map(|p| self.dim(p)).collect();
        let d = (lo..hi).map(|p| self.diff_matrix(p)).collect();
        FinComplex { field, lo, dims, d }
    }

    /// A basis of the closed morphisms of degree `p`.
    pub fn cocycles(&self, p: i64) -> Vec<TwMorphism> {
        self.diff_matrix(p)
            .kernel()
            .columns()
            .iter()
            .map(|c| TwMorphism::from_coords(&self.src, &self.tgt, p, c))
            .collect()
    }
}

pub fn is_closed(f: &TwMorphism) -> bool {
    tw_diff(f).is_zero()
}

/// Some `h` with `dh = f`, or `None` when `f` is not a boundary. The answer
/// is a single exact linear solve and is deterministic.
pub fn nullhomotopy(f: &TwMorphism) -> Result<Option<TwMorphism>> {
    let w = HomWindowComplex::new(f.src(), f.tgt());
    let d = w.diff_matrix(f.deg() - 1);
    Ok(solve_linear(&d, &f.coords())?.map(|h| TwMorphism::from_coords(f.src(), f.tgt(), f.deg() - 1, &h)))
}

/// `dh = f`, checked exactly.
pub fn check_homotopy(h: &TwMorphism, f: &TwMorphism) -> Result<()> {
    if tw_diff(h) != *f {
        return Err(Error::Internal("homotopy does not bound the given morphism".into()));
    }
    Ok(())
}
