//! t-structures and the canonical co-t-structure on twisted complexes over
//! categories of projectives of finite-dimensional algebras.

mod aisle;
mod algebra;
mod module;
mod proj;
mod truncate;

pub use aisle::{
    aisle_membership, derived_projective_cert, embed_object, Aisle, AisleReport, AisleWitness, DerivedProjCert,
    VanishingTest, Verdict,
};
pub use algebra::{ground_field, truncated_polynomial, upper_triangular_a2, AlgebraPresentation};
pub use module::{subquotient, FpModule};
pub use proj::{minimize, proj_category, Minimized, ProjCat};
pub use truncate::{
    heart_cohomology, inj_t_truncate, proj_t_truncate_unbounded, projective_cover, projective_presentation,
    t_truncate, Cover, ProjPresentation, Side, TTriangle, UnboundedTruncation, Validity,
};
