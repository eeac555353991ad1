//! Simplicial homology of facet complexes: boundary matrices, Betti numbers
//! over GF(2) or the integers, and connectivity summaries.

mod betti;
mod boundary;
mod certificate;
mod cones;
mod gf2;
mod snf;

pub use betti::{
    betti_numbers, betti_numbers_with_cap, connectivity_report, euler_characteristic,
    homology_report, rational_betti, BettiProfile, Coefficients, ConnectivityReport,
    HomologyReport,
};
pub use boundary::{boundary_matrices, BoundaryMatrix};
pub use certificate::{certify_sphere_class, SphereClassCertificate};
pub use cones::{component_count, low_betti_mod2, LowBetti};
pub use snf::{smith_normal_form, SmithForm};
