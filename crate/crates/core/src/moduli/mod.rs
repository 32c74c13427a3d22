//! Combinatorics of resolution configurations in the annulus: surgery,
//! duals, label posets, ladybug matchings and the boundary graphs of
//! two-dimensional moduli spaces.

mod classify;
mod config;
mod graph;
mod harvest;
mod ladybug;
mod poset;

pub use classify::{c3_cycles, c3_instances, c3_labellings, census, normalise, C3Instance, Census, BASIC_TYPES, C3_CYCLES};
pub use config::{AbstractConfig, CircleSet};
pub use graph::{dual_graph_iso, BoundaryGraph, DualIso, Edge, FaceTag, GraphVerdict};
pub use harvest::{
    check_hexagons, check_interval, extract, harvest_configs, harvest_corpus, harvest_decorated, verify_moduli,
    Entry, Harvest, HexagonCheck, IntervalCheck, ModuliReport,
};
pub use ladybug::{ladybug_kind, ladybug_matching, pair_interval, Convention, LadybugKind, LadybugMatching};
pub use poset::{
    build_poset, chains, decorations, dual_chain, poset_reversal, Chain, DecoratedConfig, Poset, SurgeryCube,
};
