//! Random sampling followed by deletion of every forbidden copy.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::Serialize;

use crate::budget::{Budget, Search};
use crate::detect::{find_config, ConfigKind};
use crate::error::{CheckError, ConstructError};
use crate::hypergraph::{Hypergraph, PartiteLayout, Vertex};
use crate::rng::seeded;

/// A keep probability `num/den` with `num <= den`, sampled exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Prob {
    pub num: u64,
    pub den: u64,
}

impl Prob {
    pub const ONE: Prob = Prob { num: 1, den: 1 };
    pub const ZERO: Prob = Prob { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, ConstructError> {
        if den == 0 || num > den {
            return Err(ConstructError::InvalidParams(format!("probability {num}/{den} outside [0, 1]")));
        }
        Ok(Prob { num, den })
    }

    /// Nearest multiple of `2^-40`.
    pub fn from_f64(p: f64) -> Result<Self, ConstructError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ConstructError::InvalidParams(format!("probability {p} outside [0, 1]")));
        }
        let den = 1u64 << 40;
        Ok(Prob { num: (p * den as f64).round() as u64, den })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn sample(&self, rng: &mut crate::rng::Rng) -> bool {
        rng.random_range(0..self.den) < self.num
    }
}

impl std::fmt::Display for Prob {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Prob {
    type Err = ConstructError;

    /// `a/b` or a decimal.
    fn from_str(s: &str) -> Result<Self, ConstructError> {
        let bad = || ConstructError::InvalidParams(format!("bad probability `{s}`"));
        match s.split_once('/') {
            Some((a, b)) => Prob::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Prob::from_f64(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

/// Keeps each edge independently with probability `p`.
pub fn sample_edges(h: &Hypergraph, p: Prob, seed: u64) -> Hypergraph {
    let mut rng = seeded(seed);
    let keep: Vec<usize> = (0..h.len()).filter(|_| p.sample(&mut rng)).collect();
    h.subfamily(&keep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeletionEvent {
    pub kind: String,
    /// Witness edges, as indices into the input family.
    pub witness: Vec<usize>,
    /// Deleted edge (or class) index in the input.
    pub deleted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PurgeReport {
    pub initial: usize,
    pub found: BTreeMap<String, u64>,
    pub deleted: usize,
    #[serde(rename = "final")]
    pub final_size: usize,
    pub seed: Option<u64>,
    /// False when the budget ran out before every kind was certified absent.
    pub complete: bool,
    pub events: Vec<DeletionEvent>,
}

impl PurgeReport {
    fn new(initial: usize) -> Self {
        PurgeReport {
            initial,
            found: BTreeMap::new(),
            deleted: 0,
            final_size: initial,
            seed: None,
            complete: true,
            events: Vec::new(),
        }
    }
}

/// Output of [`purge_edges`]: the surviving family and its edge origins.
#[derive(Debug, Clone)]
pub struct Purged {
    pub family: Hypergraph,
    /// `kept[i]` is the input index of output edge `i`.
    pub kept: Vec<usize>,
    pub report: PurgeReport,
}

/// Deletes the last edge of the first copy found until no listed kind is
/// left. Kinds are searched in the given order; deleting never creates a
/// copy, so earlier kinds stay absent.
pub fn purge_edges(h: &Hypergraph, kinds: &[ConfigKind], budget: &Budget) -> Purged {
    let mut kept: Vec<usize> = (0..h.len()).collect();
    let mut report = PurgeReport::new(h.len());
    let mut k = 0;
    while k < kinds.len() {
        let cur = h.subfamily(&kept);
        match find_config(&cur, kinds[k], budget) {
            Search::Found(w) => {
                let witness: Vec<usize> = w.edge_indices.iter().map(|&i| kept[i]).collect();
                let last = *w.edge_indices.iter().max().expect("witness has edges");
                let deleted = kept.remove(last);
                *report.found.entry(kinds[k].to_string()).or_default() += 1;
                report.events.push(DeletionEvent { kind: kinds[k].to_string(), witness, deleted });
            }
            Search::Absent => k += 1,
            Search::Unknown => {
                report.complete = false;
                break;
            }
        }
    }
    report.deleted = report.events.len();
    report.final_size = kept.len();
    Purged { family: h.subfamily(&kept), kept, report }
}

/// Output of [`purge_classes`].
#[derive(Debug, Clone)]
pub struct ClassPurge {
    pub kept_classes: Vec<usize>,
    pub family: Hypergraph,
    pub report: PurgeReport,
}

/// Deletes whole classes: for each copy found, the least class holding one
/// of its edges. `classes` partitions (part of) the edge indices of `h`.
pub fn purge_classes(
    h: &Hypergraph,
    classes: &[Vec<usize>],
    kinds: &[ConfigKind],
    budget: &Budget,
) -> Result<ClassPurge, CheckError> {
    let mut class_of = vec![usize::MAX; h.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            if i >= h.len() {
                return Err(CheckError::IndexOutOfRange { index: i, len: h.len() });
            }
            if class_of[i] != usize::MAX {
                return Err(CheckError::NotApplicable(format!("edge {i} lies in two classes")));
            }
            class_of[i] = c;
        }
    }
    let mut alive = vec![true; classes.len()];
    let edges_of = |alive: &[bool]| -> Vec<usize> {
        let mut e: Vec<usize> =
            classes.iter().enumerate().filter(|(c, _)| alive[*c]).flat_map(|(_, m)| m.iter().copied()).collect();
        e.sort_unstable();
        e
    };
    let mut report = PurgeReport::new(classes.iter().filter(|m| !m.is_empty()).count());
    let mut k = 0;
    while k < kinds.len() {
        let idx = edges_of(&alive);
        let cur = h.subfamily(&idx);
        match find_config(&cur, kinds[k], budget) {
            Search::Found(w) => {
                let witness: Vec<usize> = w.edge_indices.iter().map(|&i| idx[i]).collect();
                let victim = witness.iter().map(|&i| class_of[i]).min().expect("witness has edges");
                alive[victim] = false;
                *report.found.entry(kinds[k].to_string()).or_default() += 1;
                report.events.push(DeletionEvent { kind: kinds[k].to_string(), witness, deleted: victim });
            }
            Search::Absent => k += 1,
            Search::Unknown => {
                report.complete = false;
                break;
            }
        }
    }
    let kept_classes: Vec<usize> = (0..classes.len()).filter(|&c| alive[c] && !classes[c].is_empty()).collect();
    report.deleted = report.events.len();
    report.final_size = kept_classes.len();
    Ok(ClassPurge { kept_classes, family: h.subfamily(&edges_of(&alive)), report })
}

/// Random `r`-partite sample followed by [`purge_edges`].
#[derive(Debug, Clone, Serialize)]
pub struct AvoidanceReport {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub sampled: usize,
    /// `min (r·e − v)/(e − 1)` over the forbidden kinds; `None` without kinds.
    pub exponent: Option<f64>,
    pub purge: PurgeReport,
}

pub fn random_avoidance_construct(
    n: usize,
    r: usize,
    kinds: &[ConfigKind],
    p: Prob,
    seed: u64,
    budget: &Budget,
) -> Result<(Hypergraph, AvoidanceReport), ConstructError> {
    if r < 2 {
        return Err(ConstructError::InvalidParams("r must be at least 2".into()));
    }
    let s = n / r;
    let total = (s as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if total > 50_000_000 {
        return Err(ConstructError::InvalidParams(format!("{total} candidate edges is too many")));
    }
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    let mut digits = vec![0usize; r];
    for _ in 0..total {
        if p.sample(&mut rng) {
            edges.push(digits.iter().enumerate().map(|(j, &y)| (j * s + y) as Vertex).collect::<Vec<_>>());
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < s {
                break;
            }
            *d = 0;
        }
    }
    let sample = Hypergraph::new(n, r, edges)?.with_layout(PartiteLayout::blocks(r, s))?;
    let sampled = sample.len();
    let mut purged = purge_edges(&sample, kinds, budget);
    purged.report.seed = Some(seed);
    let exponent = kinds
        .iter()
        .filter(|k| k.edge_count(r) > 1)
        .map(|k| {
            let (e, v) = (k.edge_count(r) as f64, k.vertex_count(r) as f64);
            (r as f64 * e - v) / (e - 1.0)
        })
        .reduce(f64::min);
    let report = AvoidanceReport { n, r, p: p.value(), sampled, exponent, purge: purged.report };
    Ok((purged.family, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> Hypergraph {
        Hypergraph::new(9, 3, [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8]]).unwrap()
    }

    #[test]
    fn probabilities() {
        assert_eq!("1/2".parse::<Prob>().unwrap(), Prob { num: 1, den: 2 });
        assert!("3/2".parse::<Prob>().is_err());
        assert!("-0.1".parse::<Prob>().is_err());
        assert_eq!("0.5".parse::<Prob>().unwrap().value(), 0.5);
    }

    #[test]
    fn sampling_extremes() {
        let h = grid3();
        assert_eq!(sample_edges(&h, Prob::ONE, 3), h);
        assert!(sample_edges(&h, Prob::ZERO, 3).is_empty());
        assert_eq!(sample_edges(&h, Prob::new(1, 2).unwrap(), 9), sample_edges(&h, Prob::new(1, 2).unwrap(), 9));
    }

    #[test]
    fn purge_single_grid() {
        let h = grid3();
        let out = purge_edges(&h, &[ConfigKind::Grid(3, 3)], &Budget::unlimited());
        assert_eq!(out.family.len(), 5);
        assert_eq!(out.report.deleted, 1);
        assert_eq!(out.report.events[0].deleted, 5);
        assert!(out.report.complete);
        let clean = purge_edges(&h, &[ConfigKind::Triangle], &Budget::unlimited());
        assert_eq!(clean.family, h);
        assert_eq!(clean.report.deleted, 0);
    }

    #[test]
    fn purge_out_of_budget() {
        let out = purge_edges(&grid3(), &[ConfigKind::Grid(3, 3)], &Budget::new(0));
        assert!(!out.report.complete);
    }

    #[test]
    fn class_purge() {
        let h = grid3();
        let classes = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let out = purge_classes(&h, &classes, &[ConfigKind::Triangle], &Budget::unlimited()).unwrap();
        assert_eq!(out.kept_classes, vec![0, 1]);
        let out = purge_classes(&h, &classes, &[ConfigKind::Grid(3, 3)], &Budget::unlimited()).unwrap();
        assert_eq!(out.kept_classes, vec![1]);
        assert_eq!(out.family.len(), 3);
        assert!(purge_classes(&h, &[vec![0], vec![0]], &[], &Budget::unlimited()).is_err());
    }

    #[test]
    fn avoidance_pipeline() {
        let b = Budget::unlimited();
        let (h, rep) = random_avoidance_construct(30, 3, &[ConfigKind::Triangle], Prob::from_f64(0.01).unwrap(), 1, &b)
            .unwrap();
        assert!(find_config(&h, ConfigKind::Triangle, &b).is_absent());
        assert_eq!(rep.exponent, Some(1.5));
        let (h2, rep2) = random_avoidance_construct(12, 3, &[], Prob::ONE, 1, &b).unwrap();
        assert_eq!(h2.len(), 64);
        assert_eq!(rep2.exponent, None);
    }
}
