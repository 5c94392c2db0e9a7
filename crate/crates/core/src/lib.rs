//! Gamma-products of one-parameter persistence modules and hook-decomposable
//! biparameter modules.
//!
//! The pipeline: parse a bifiltered simplicial complex ([`complex`]), compute
//! one-parameter diagrams ([`persistence`]) and the biparameter module on a
//! compressed grid ([`bipersistence`]), combine two diagrams through a
//! matching ([`product`]), and compare modules through hook decompositions
//! ([`grid`]) and distances ([`distances`]).

pub mod bipersistence;
pub mod cli;
pub mod complex;
pub mod distances;
pub mod ext;
pub mod grid;
pub mod linalg;
pub mod persistence;
pub mod product;
pub mod svg;

pub use bipersistence::{axis_barcodes, default_box, grid_module_of_pair};
pub use complex::{parse_complex, FilteredComplex, Function, Simplex, Threshold};
pub use distances::{
    bottleneck, gamma_bar_search, interleaving_exact, matching_distance_estimate, Distance,
};
pub use ext::ExtNat;
pub use grid::{
    evaluate_hooks, evaluate_hooks_in, hook_decompose, iso_hook_decomposable, GridModule,
    GridPoint, HookDecomposition, HookModule,
};
pub use linalg::PrimeField;
pub use persistence::{
    compute_diagram, presentation_from_diagram, s_gamma, DiagramPoint, PersistenceDiagram,
};
pub use product::{
    build_product, hooks_of_product, reconstruct_from_hooks, GammaProduct, MatchEntry, Matching,
};
