//! Facet-based simplicial complexes: neighborhood complexes, spherical
//! Delaunay triangulations, subcomplex and sphere checks, strong collapse.

mod checks;
mod collapse;
mod complex;
mod delaunay;
mod neighborhood;
mod reduce;
pub(crate) mod skeleton;

pub use checks::{
    band_subcomplex, diam_check_delaunay, max_facet_diameter, verify_sphere_triangulation,
    SphereCheck,
};
pub use collapse::strong_collapse;
pub use complex::{is_subcomplex, FacetComplex, SimplexId};
pub use delaunay::{delaunay_s1, delaunay_s2, delaunay_s2_report, DelaunayS2};
pub use neighborhood::neighborhood_complex;
pub use reduce::reduce_homotopy;
pub use skeleton::{
    k_skeleton_counts, k_skeleton_counts_with_cap, projected_simplex_count, simplices_of_dim,
    DEFAULT_SIMPLEX_CAP,
};

pub(crate) use delaunay::hull_triangles;
