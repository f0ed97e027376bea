//! Constructions and exact certification for sparse linear hypergraphs.

pub mod budget;
pub mod cert;
pub mod codes;
pub mod construct;
pub mod crossing;
pub mod detect;
pub mod error;
pub mod hypergraph;
pub mod linalg;
pub mod numbers;
pub mod purge;
pub mod rng;

pub use budget::{Budget, Search, Verdict};
pub use error::{AlgebraError, CheckError, ConstructError, HypergraphError};
pub use hypergraph::{read_hypergraph, write_hypergraph, Hypergraph, PartiteLayout, Vertex};
pub use numbers::{IntSet, PatternKind};
pub use cert::{certify, check_property, parse_properties, Certificate, Property};
pub use codes::{gt_decode, gt_encode, is_cover_free, is_union_free, superimposed_report, SuperimposedReport};
pub use construct::{crossing_lines_r3, pencil, transversal, CrossingParamsR3, SlopePolicy};
pub use crossing::{crossing_structure_match, crossing_verify, enumerate_crossings, CrossingSystem, PathRole};
pub use detect::{count_config, find_config, ConfigKind, ConfigWitness};
pub use linalg::{build_matrix_m, charpoly, rank_nullspace, solve_eq17, RationalMatrix};
pub use purge::{Prob, PurgeReport};
