//! Exact extremal numbers for tiny vertex sets by branch and bound.

use super::{find_config, ConfigKind};
use crate::budget::{Budget, Search};
use crate::codes::{is_cover_free, is_union_free};
use crate::error::{CheckError, ConstructError};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::numbers::binomial;

/// Largest number of candidate edges `C(n, r)` the search accepts.
pub const MAX_CANDIDATES: u128 = 128;

/// A forbidden substructure or a required code property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forbidden {
    Config(ConfigKind),
    /// The family must be `e`-cover-free.
    CoverFree(usize),
    /// The family must be `e`-union-free.
    UnionFree(usize),
}

impl Forbidden {
    fn violated(&self, h: &Hypergraph) -> bool {
        let b = Budget::unlimited();
        match *self {
            Forbidden::Config(k) => matches!(find_config(h, k, &b), Search::Found(_)),
            Forbidden::CoverFree(e) => is_cover_free(h, e, &b).is_found(),
            Forbidden::UnionFree(e) => is_union_free(h, e, &b).is_found(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub size: usize,
    /// One family of maximum size.
    pub family: Hypergraph,
}

fn r_subsets(n: usize, r: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vertex> = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v as Vertex);
            rec(n, r, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 0, &mut cur, &mut out);
    out
}

struct Search_<'a> {
    n: usize,
    r: usize,
    cands: &'a [Vec<Vertex>],
    forbidden: &'a [Forbidden],
    best: Vec<usize>,
}

impl Search_<'_> {
    fn ok(&self, family: &[usize]) -> bool {
        let h = Hypergraph::new(self.n, self.r, family.iter().map(|&i| self.cands[i].clone()))
            .expect("candidate edges are valid");
        !self.forbidden.iter().any(|f| f.violated(&h))
    }

    fn grow(&mut self, chosen: &mut Vec<usize>, open: &[usize]) {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        for (k, &c) in open.iter().enumerate() {
            if chosen.len() + open.len() - k <= self.best.len() {
                return;
            }
            chosen.push(c);
            let next: Vec<usize> = open[k + 1..]
                .iter()
                .copied()
                .filter(|&d| {
                    chosen.push(d);
                    let fine = self.ok(chosen);
                    chosen.pop();
                    fine
                })
                .collect();
            self.grow(chosen, &next);
            chosen.pop();
        }
    }
}

/// Maximum number of `r`-subsets of `[n]` avoiding everything in
/// `forbidden`, with one optimal family.
pub fn exhaustive_extremal(n: usize, r: usize, forbidden: &[Forbidden]) -> Result<Extremal, CheckError> {
    if r < 2 {
        return Err(CheckError::NotApplicable("uniformity must be at least 2".into()));
    }
    let total = binomial(n as u64, r as u64);
    if total > MAX_CANDIDATES {
        return Err(CheckError::NotApplicable(format!(
            "C({n},{r}) = {total} candidate edges exceeds the limit {MAX_CANDIDATES}"
        )));
    }
    let cands = r_subsets(n, r);
    let mut s = Search_ { n, r, cands: &cands, forbidden, best: Vec::new() };
    // Up to relabeling, an optimal nonempty family contains {0, .., r-1}.
    if !cands.is_empty() && s.ok(&[0]) {
        let open: Vec<usize> = (1..cands.len()).filter(|&d| s.ok(&[0, d])).collect();
        s.grow(&mut vec![0], &open);
    }
    let family = Hypergraph::new(n, r, s.best.iter().map(|&i| cands[i].clone())).map_err(ConstructError::from)?;
    Ok(Extremal { size: s.best.len(), family })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_values() {
        let lin = [Forbidden::Config(ConfigKind::PairI2)];
        assert_eq!(exhaustive_extremal(3, 3, &lin).unwrap().size, 1);
        let fano = exhaustive_extremal(7, 3, &lin).unwrap();
        assert_eq!(fano.size, 7);
        assert!(fano.family.is_linear().linear);
        assert_eq!(exhaustive_extremal(2, 3, &lin).unwrap().size, 0);
        assert!(exhaustive_extremal(12, 3, &lin).is_err());
    }

    #[test]
    fn cover_free_sanity() {
        for n in [6, 7] {
            assert_eq!(exhaustive_extremal(n, 3, &[Forbidden::CoverFree(3)]).unwrap().size, n - 3 + 1);
        }
    }
}
