//! ε-distance graphs on spheres, cliques and colorings.

mod clique;
mod coloring;
mod graph;
mod sat;
mod schemes;

pub use clique::{
    clique_search_exhaustive, find_clique, find_clique_ordered, greedy_clique,
    CliqueCertificate, DEFAULT_CLIQUE_BUDGET,
};
pub use coloring::{
    chromatic_number_exact, chromatic_number_with, dsatur_upper, exact_s1_chromatic,
    is_bipartite, k_colorable, odd_cycle, DSATUR_NODE_LIMIT, predicted_lower_bound, two_color, verify_proper,
    ChromaticOutcome, Coloring, Decision, ProperReport,
};
pub use graph::{build_graph, build_graph_scan, is_connected_under_radius, EpsDistanceGraph, Graph};
pub use schemes::{arc_coloring_s1, tessellation_coloring_s2, ArcScheme, Tessellation};
