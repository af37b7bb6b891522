//! Homotopy-category computations: closedness, nullhomotopies, cohomology
//! of hom complexes, isomorphism certificates, lifting and towers.

mod chain;
mod iso;
mod qff;
mod tower;
mod window;

pub use chain::{quasiiso_lift, ChainMap, FinComplex};
pub use iso::{
    cone_iso_transfer, cone_matrix, h0_inverse, h0_iso_decide, iso_certificate_by_induction, CertMethod, ConeSquare,
    ConeTransfer, H0Inverse, IsoCertificate, IsoVerdict,
};
pub use qff::{check_quasi_fully_faithful, hom_complex, qff_lift, QffLift};
pub use tower::{milnor_check, tower_holim, tower_lim, MilnorDegree, Tower, TowerDirection, TowerHolim, TowerLimit};
pub use window::{check_homotopy, is_closed, nullhomotopy, HomWindowComplex};
