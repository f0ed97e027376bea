//! Exact detection and counting of forbidden configurations.
//!
//! Every search is exhaustive up to a node [`Budget`]; running out of nodes
//! yields [`Search::Unknown`], never a false "absent". Searches run in
//! parallel over anchors (an edge or a vertex, depending on the kind) and
//! return the witness of the least anchor, so output does not depend on the
//! thread count.

mod extremal;
mod graph;
mod latin;
mod scan;
mod sparse;
mod validate;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{Budget, Search};
use crate::error::CheckError;
use crate::hypergraph::{Hypergraph, Vertex};

pub use extremal::{exhaustive_extremal, Extremal, Forbidden};
pub use graph::{girth, has_c4, is_bipartite};
pub use latin::{latin_subconfig, LatinWitness};
pub use sparse::{check_vw_sparse, is_steiner, steiner_e_sparse};
pub use validate::validate_witness;

/// Named configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigKind {
    /// `a` pairwise disjoint edges each meeting each of `b` pairwise
    /// disjoint edges in exactly one vertex.
    Grid(usize, usize),
    /// Three edges pairwise meeting in three distinct single vertices.
    Triangle,
    /// Two edges sharing at least two vertices.
    PairI2,
    /// Four edges pairwise meeting in six distinct single vertices.
    Pasch,
    /// Three edges through a common vertex `a` (and nothing else in common)
    /// plus two disjoint edges avoiding `a`, each meeting all three once.
    Mitre,
    /// `{123, 156, 426, 453}`; the same shape as [`ConfigKind::Pasch`].
    G6,
    /// `{123, 456, 726, 753}`: two disjoint edges and two edges meeting
    /// outside them, each of the latter meeting each of the former once.
    G7,
    /// Edges `A, B` with `A ∩ B = {d}` and pairwise disjoint `C_1..C_{r-1}`
    /// with `C_i ∩ A = {a_i}`, `C_i ∩ B = {b_i}`.
    PrStar(usize),
}

impl ConfigKind {
    /// Number of edges in one copy.
    pub fn edge_count(&self, r: usize) -> usize {
        match *self {
            ConfigKind::Grid(a, b) => a + b,
            ConfigKind::Triangle => 3,
            ConfigKind::PairI2 => 2,
            ConfigKind::Pasch | ConfigKind::G6 | ConfigKind::G7 => 4,
            ConfigKind::Mitre => 5,
            ConfigKind::PrStar(_) => r + 1,
        }
    }

    /// Vertices spanned by one copy inside a linear `r`-graph.
    pub fn vertex_count(&self, r: usize) -> usize {
        match *self {
            ConfigKind::Grid(a, b) => a * r + b * r.saturating_sub(a),
            ConfigKind::Triangle => 3 * r - 3,
            ConfigKind::PairI2 => 2 * r - 2,
            ConfigKind::Pasch | ConfigKind::G6 => 4 * r - 6,
            ConfigKind::G7 => 4 * r - 5,
            ConfigKind::Mitre => 5 * r - 8,
            ConfigKind::PrStar(_) => 2 * r - 1 + (r - 1) * (r - 2),
        }
    }
}

impl std::fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigKind::Grid(a, b) => write!(f, "grid:{a}x{b}"),
            ConfigKind::Triangle => f.write_str("triangle"),
            ConfigKind::PairI2 => f.write_str("pairi2"),
            ConfigKind::Pasch => f.write_str("pasch"),
            ConfigKind::Mitre => f.write_str("mitre"),
            ConfigKind::G6 => f.write_str("g6"),
            ConfigKind::G7 => f.write_str("g7"),
            ConfigKind::PrStar(r) => write!(f, "prstar:{r}"),
        }
    }
}

impl std::str::FromStr for ConfigKind {
    type Err = String;

    /// Accepts `grid:<a>[x<b>]`, `triangle`, `pairi2` (or `i2`), `pasch`,
    /// `mitre`, `g6`, `g7`, `prstar:<r>`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || format!("unknown configuration `{s}`");
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s.as_str() {
            "triangle" => Ok(ConfigKind::Triangle),
            "pairi2" | "i2" => Ok(ConfigKind::PairI2),
            "pasch" => Ok(ConfigKind::Pasch),
            "mitre" => Ok(ConfigKind::Mitre),
            "g6" => Ok(ConfigKind::G6),
            "g7" => Ok(ConfigKind::G7),
            _ => {
                if let Some(rest) = s.strip_prefix("grid:") {
                    let (a, b) = match rest.split_once('x') {
                        Some((a, b)) => (num(a)?, num(b)?),
                        None => (num(rest)?, num(rest)?),
                    };
                    if a == 0 || b == 0 {
                        return Err("grid sides must be positive".into());
                    }
                    Ok(ConfigKind::Grid(a, b))
                } else if let Some(r) = s.strip_prefix("prstar:") {
                    let r = num(r)?;
                    if r < 3 {
                        return Err("prstar needs r >= 3".into());
                    }
                    Ok(ConfigKind::PrStar(r))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// A copy of a configuration: the edges realizing it and their roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigWitness {
    #[serde(serialize_with = "serialize_kind")]
    pub kind: ConfigKind,
    /// Edge indices in role order.
    pub edge_indices: Vec<usize>,
    pub role_map: BTreeMap<String, Vec<usize>>,
    /// Named vertex sets (always includes `support`, the union of the edges).
    pub vertex_map: Option<BTreeMap<String, Vec<Vertex>>>,
}

fn serialize_kind<S: serde::Serializer>(k: &ConfigKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&k.to_string())
}

pub(crate) type Roles = Vec<(&'static str, Vec<usize>)>;

fn make_witness(h: &Hypergraph, kind: ConfigKind, roles: Roles) -> ConfigWitness {
    let edge_indices: Vec<usize> = roles.iter().flat_map(|(_, e)| e.iter().copied()).collect();
    let mut support: Vec<Vertex> = edge_indices.iter().flat_map(|&i| h.edge(i).iter().copied()).collect();
    support.sort_unstable();
    support.dedup();
    let role_map = roles.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    ConfigWitness {
        kind,
        edge_indices,
        role_map,
        vertex_map: Some(BTreeMap::from([("support".to_string(), support)])),
    }
}

/// First copy of `kind` in `h` (least anchor, then depth-first order).
pub fn find_config(h: &Hypergraph, kind: ConfigKind, budget: &Budget) -> Search<ConfigWitness> {
    let sc = scan::Scanner::new(h, budget);
    let gave_up = AtomicBool::new(false);
    let found = (0..sc.anchor_count(kind)).into_par_iter().find_map_first(|anchor| {
        let mut out = None;
        let res = sc.scan(kind, anchor, &mut |roles| {
            out = Some(roles);
            true
        });
        if res.is_err() {
            gave_up.store(true, Ordering::Relaxed);
        }
        out
    });
    match found {
        Some(roles) => Search::Found(make_witness(h, kind, roles)),
        None if gave_up.load(Ordering::Relaxed) => Search::Unknown,
        None => Search::Absent,
    }
}

/// Exact number of copies of `kind`. Grids count unordered pairs `{A, B}`;
/// other kinds count edge sets with their role assignment.
pub fn count_config(h: &Hypergraph, kind: ConfigKind, budget: &Budget) -> Result<u64, CheckError> {
    let sc = scan::Scanner::new(h, budget);
    let counts: Result<Vec<u64>, ()> = (0..sc.anchor_count(kind))
        .into_par_iter()
        .map(|anchor| {
            let mut c = 0u64;
            sc.scan(kind, anchor, &mut |_| {
                c += 1;
                false
            })
            .map_err(|_| ())?;
            Ok(c)
        })
        .collect();
    counts.map(|v| v.iter().sum()).map_err(|_| CheckError::BudgetExhausted(budget.limit()))
}

/// Every copy of `kind`, in anchor order.
pub fn all_configs(
    h: &Hypergraph,
    kind: ConfigKind,
    budget: &Budget,
) -> Result<Vec<ConfigWitness>, CheckError> {
    let sc = scan::Scanner::new(h, budget);
    let per_anchor: Result<Vec<Vec<Roles>>, ()> = (0..sc.anchor_count(kind))
        .into_par_iter()
        .map(|anchor| {
            let mut found = Vec::new();
            sc.scan(kind, anchor, &mut |roles| {
                found.push(roles);
                false
            })
            .map_err(|_| ())?;
            Ok(found)
        })
        .collect();
    let per_anchor = per_anchor.map_err(|_| CheckError::BudgetExhausted(budget.limit()))?;
    Ok(per_anchor.into_iter().flatten().map(|roles| make_witness(h, kind, roles)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grid3() -> Hypergraph {
        // Rows {0,1,2},{3,4,5},{6,7,8} and columns {0,3,6},{1,4,7},{2,5,8}.
        Hypergraph::new(
            9,
            3,
            [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8]],
        )
        .unwrap()
    }

    fn sts9() -> Hypergraph {
        // Affine plane AG(2,3).
        let mut edges = Vec::new();
        let pt = |x: u32, y: u32| 3 * x + y;
        for m in 0..3 {
            for c in 0..3 {
                edges.push(vec![pt(0, c), pt(1, (c + m) % 3), pt(2, (c + 2 * m) % 3)]);
            }
        }
        for x in 0..3 {
            edges.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        }
        Hypergraph::new(9, 3, edges).unwrap()
    }

    // Tries every 5-subset and every choice of the three centre edges.
    fn brute_force_mitres(h: &Hypergraph) -> u64 {
        let t = h.len();
        let mut count = 0;
        let mut idx = [0usize; 5];
        fn rec(h: &Hypergraph, t: usize, start: usize, depth: usize, idx: &mut [usize; 5], count: &mut u64) {
            if depth == 5 {
                for mask in 0u32..32 {
                    if mask.count_ones() != 3 {
                        continue;
                    }
                    let center: Vec<usize> = (0..5).filter(|k| mask >> k & 1 == 1).map(|k| idx[k]).collect();
                    let cross: Vec<usize> = (0..5).filter(|k| mask >> k & 1 == 0).map(|k| idx[k]).collect();
                    let w = ConfigWitness {
                        kind: ConfigKind::Mitre,
                        edge_indices: center.iter().chain(&cross).copied().collect(),
                        role_map: BTreeMap::from([("center".into(), center), ("cross".into(), cross)]),
                        vertex_map: None,
                    };
                    if validate_witness(h, &w) {
                        *count += 1;
                    }
                }
                return;
            }
            for i in start..t {
                idx[depth] = i;
                rec(h, t, i + 1, depth + 1, idx, count);
            }
        }
        rec(h, t, 0, 0, &mut idx, &mut count);
        count
    }

    #[test]
    fn grid_found_with_roles() {
        let h = grid3();
        let w = find_config(&h, ConfigKind::Grid(3, 3), &Budget::unlimited()).found().unwrap();
        assert_eq!(w.role_map["A"], vec![0, 1, 2]);
        assert_eq!(w.role_map["B"], vec![3, 4, 5]);
        assert!(validate_witness(&h, &w));
        assert_eq!(count_config(&h, ConfigKind::Grid(3, 3), &Budget::unlimited()).unwrap(), 1);
        assert_eq!(count_config(&h, ConfigKind::Grid(2, 3), &Budget::unlimited()).unwrap(), 6);
    }

    #[test]
    fn minimal_triangle() {
        let h = Hypergraph::new(6, 3, [[0, 1, 2], [2, 3, 4], [4, 5, 0]]).unwrap();
        let w = find_config(&h, ConfigKind::Triangle, &Budget::unlimited()).found().unwrap();
        assert_eq!(w.edge_indices, vec![0, 1, 2]);
        assert!(validate_witness(&h, &w));
        // Three edges through one point are not a triangle.
        let star = Hypergraph::new(7, 3, [[0, 1, 2], [0, 3, 4], [0, 5, 6]]).unwrap();
        assert!(find_config(&star, ConfigKind::Triangle, &Budget::unlimited()).is_absent());
    }

    #[test]
    fn affine_plane_counts() {
        let h = sts9();
        let b = Budget::unlimited();
        assert_eq!(count_config(&h, ConfigKind::PairI2, &b).unwrap(), 0);
        // The unique STS(9) is Pasch-free but full of mitres.
        assert_eq!(count_config(&h, ConfigKind::Pasch, &b).unwrap(), 0);
        assert_eq!(count_config(&h, ConfigKind::Mitre, &b).unwrap(), brute_force_mitres(&h));
        assert!(brute_force_mitres(&h) > 0);
        // Any two parallel classes form a 3x3 grid: C(4,2) = 6.
        assert_eq!(count_config(&h, ConfigKind::Grid(3, 3), &b).unwrap(), 6);
        for w in all_configs(&h, ConfigKind::Grid(3, 3), &b).unwrap() {
            assert!(validate_witness(&h, &w));
        }
    }

    #[test]
    fn pasch_mitre_g7_shapes() {
        let b = Budget::unlimited();
        let pasch = Hypergraph::new(6, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap();
        assert_eq!(count_config(&pasch, ConfigKind::Pasch, &b).unwrap(), 1);
        assert_eq!(count_config(&pasch, ConfigKind::G6, &b).unwrap(), 1);
        let mitre =
            Hypergraph::new(7, 3, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [2, 4, 6]]).unwrap();
        let w = find_config(&mitre, ConfigKind::Mitre, &b).found().unwrap();
        assert!(validate_witness(&mitre, &w));
        assert_eq!(count_config(&mitre, ConfigKind::Mitre, &b).unwrap(), 1);
        // 123, 456, 726, 753 shifted to 0-based ids.
        let g7 = Hypergraph::new(7, 3, [[0, 1, 2], [3, 4, 5], [6, 1, 5], [6, 4, 2]]).unwrap();
        let w = find_config(&g7, ConfigKind::G7, &b).found().unwrap();
        assert_eq!(w.role_map["disjoint"], vec![0, 1]);
        assert!(validate_witness(&g7, &w));
        assert!(find_config(&g7, ConfigKind::Pasch, &b).is_absent());
    }

    #[test]
    fn prstar_shape() {
        let b = Budget::unlimited();
        // d=0, A={0,1,2}, B={0,3,4}, C1={1,3,5}, C2={2,4,6}.
        let h = Hypergraph::new(7, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 6]]).unwrap();
        let w = find_config(&h, ConfigKind::PrStar(3), &b).found().unwrap();
        assert!(validate_witness(&h, &w));
        assert_eq!(count_config(&h, ConfigKind::PrStar(3), &b).unwrap(), 1);
        assert!(find_config(&h, ConfigKind::PrStar(4), &b).is_absent());
    }

    #[test]
    fn pair_i2_matches_linearity() {
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4], [0, 1, 4]]).unwrap();
        let w = find_config(&h, ConfigKind::PairI2, &Budget::unlimited()).found().unwrap();
        assert_eq!(w.edge_indices, vec![0, 2]);
        assert_eq!(h.is_linear().witness, Some((0, 2)));
    }

    #[test]
    fn budget_is_three_valued() {
        let h = sts9();
        assert_eq!(find_config(&h, ConfigKind::Mitre, &Budget::new(0)), Search::Unknown);
        assert!(count_config(&h, ConfigKind::Grid(3, 3), &Budget::new(2)).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("grid:4".parse::<ConfigKind>().unwrap(), ConfigKind::Grid(4, 4));
        assert_eq!("grid:2x3".parse::<ConfigKind>().unwrap(), ConfigKind::Grid(2, 3));
        assert_eq!("PASCH".parse::<ConfigKind>().unwrap(), ConfigKind::Pasch);
        assert!("prstar:2".parse::<ConfigKind>().is_err());
        for k in [ConfigKind::Grid(2, 3), ConfigKind::PrStar(4), ConfigKind::G7] {
            assert_eq!(k.to_string().parse::<ConfigKind>().unwrap(), k);
        }
    }

    #[test]
    fn span_formulas() {
        assert_eq!(ConfigKind::Grid(3, 3).vertex_count(3), 9);
        assert_eq!(ConfigKind::Mitre.vertex_count(3), 7);
        assert_eq!(ConfigKind::G7.vertex_count(3), 7);
        assert_eq!(ConfigKind::Pasch.vertex_count(3), 6);
        assert_eq!(ConfigKind::PrStar(3).vertex_count(3), 7);
    }
}
