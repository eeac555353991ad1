//! Points on S^d: sampling, geodesic metric, regular-simplex constants,
//! covering checks and a spatial index for distance-band queries.

mod constants;
mod index;
mod net;
mod point;

pub use constants::{
    cube_face_diagonal, dodeca_face_diagonal, regular_simplex_vertices, simplex_arclength,
    tetra_face_diameter, CAP_DIAMETER,
};
pub use index::{band_scan, CapIndex};
pub use net::{fibonacci_sphere, is_eps_net, NetReport};
pub use point::{
    dot_in_band, geodesic_distance, sample_uniform, SampleSet, UnitPoint, DOT_TOLERANCE,
};

pub(crate) use point::{arc_from_dot, DotBand};
