//! starsys: construction, verification, colouring and enumeration of
//! e-star systems.
//!
//! An e-star system of order `n` decomposes the complete graph `K_n`
//! into copies of the star `K_{1,e}`. This crate provides:
//!
//! - exact validity oracles for systems and their block-colourings
//!   ([`verify_system`], [`verify_colouring`]) plus the admissibility
//!   and bound arithmetic ([`is_admissible`], [`block_count`],
//!   [`lower_bound`]);
//! - block-intersection graphs and an exact chromatic-number solver
//!   ([`block_intersection_graph`], [`exact_chromatic_number`],
//!   [`chromatic_index`]);
//! - constructive families emitting coloured systems with `n-1` or `n`
//!   classes for every covered congruence class ([`construct`]);
//! - exact-cover search: exhaustive or truncated enumeration, heuristic
//!   sampling, enumeration under a prescribed automorphism, and
//!   isomorph-free classification ([`enumerate_systems`],
//!   [`sample_system`], [`enumerate_invariant_systems`],
//!   [`orbit_representatives`]);
//! - chromatic-index censuses with JSON reports ([`census`]);
//! - the `.star`/`.cstar` text formats and DIMACS graph interchange.
//!
//! ```
//! use starsys::*;
//!
//! // Build a coloured system of order 12, check it, and pin its
//! // chromatic index between the trivial bound and the class count.
//! let coloured = construct(12, 3).unwrap();
//! assert_eq!(verify_colouring(&coloured), Ok(()));
//! assert_eq!(coloured.class_count(), 11);
//!
//! let chi = chromatic_index(&coloured.system, None).unwrap().exact().unwrap();
//! assert!(u64::from(chi) >= lower_bound(12, 3).unwrap());
//! assert!(chi <= 11);
//! ```

#![forbid(unsafe_code)]

pub mod canonical;
pub mod census;
pub mod colouring;
pub mod construct;
pub mod design;
pub mod exact_cover;
pub mod factorization;
pub mod format;
pub mod graph;
pub mod samples;
pub mod search;

pub use canonical::{
    OrbitEnumeration, OrbitError, canonical_form, canonical_key, orbit_representatives,
    orbit_representatives_parallel,
};
pub use census::{CensusOptions, CensusReport, census};
pub use colouring::{
    ChiOutcome, GraphColouring, block_intersection_graph, chromatic_index, classes_from_colouring,
    degeneracy_order, exact_chromatic_number, greedy_colouring, max_clique_lower_bound,
};
pub use construct::{
    ConstructError, GroupPartition, base_s3_6, base_s3_9, base_system_2e, construct,
    construct_even_groups, construct_even_groups_plus_point, construct_odd_groups, construct_odd_groups_plus_point, construct_mixed_even,
    construct_mixed_even_plus_point, construct_mixed_odd, construct_mixed_odd_plus_point, cross_pair_classes,
    cross_pair_classes_6_9,
};
pub use design::{
    ColourClass, ColouredStarSystem, ColouringDefect, DesignError, Edge, Star, StarSystem,
    SystemDefect, Vertex, block_count, complete_edge_count, is_admissible, lower_bound,
    verify_colouring, verify_system,
};
pub use exact_cover::{Dlx, Flow};
pub use factorization::{
    FactorizationError, PairFactorization, near_one_factorization, one_factorization,
};
pub use format::{
    FormatError, ParsedFile, parse_auto, parse_coloured, parse_system, parse_system_stream,
    write_coloured, write_system, write_system_stream,
};
pub use graph::{DimacsError, SimpleGraph};
pub use search::{
    CompatibilityGraph, InvariantSearchError, Permutation, PermutationError, all_stars,
    compatibility_graph, enumerate_invariant_systems, enumerate_systems, sample_system,
    visit_systems, visit_systems_with_fixed_block,
};
