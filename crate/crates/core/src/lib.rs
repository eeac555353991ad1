//! Random ε-distance graphs on spheres.
//!
//! Points are sampled uniformly on S^d and joined whenever their geodesic
//! distance falls in `[α−ε, α+ε]`. The crate builds these graphs, their
//! neighborhood complexes and spherical Delaunay triangulations, computes
//! Betti numbers, and bounds chromatic numbers from both sides.

pub mod dist_graph;
pub mod error;
pub mod experiments;
pub mod homology;
pub mod simplicial;
pub mod sphere_geom;

pub use error::{Error, Result};

// The guide's code samples are compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/neighborhood.md")]
    mod neighborhood {}
    #[doc = include_str!("../../../book/src/delaunay.md")]
    mod delaunay {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/coloring.md")]
    mod coloring {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
