//! Generic `(v, e)`-sparseness and Steiner `e`-sparseness.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::budget::{Budget, Search};
use crate::error::CheckError;
use crate::hypergraph::Hypergraph;

/// Looks for `e` distinct edges spanning at most `v` vertices.
///
/// `Found` carries the lexicographically least offending index set, so a
/// hypergraph is sparse exactly when the result is `Absent`.
pub fn check_vw_sparse(h: &Hypergraph, e: usize, v: usize, budget: &Budget) -> Search<Vec<usize>> {
    if e == 0 || e > h.len() {
        return Search::Absent;
    }
    let gave_up = AtomicBool::new(false);
    let found = (0..h.len()).into_par_iter().find_map_first(|first| {
        let mut mark = vec![0u32; h.n()];
        let mut chosen = vec![first];
        let span = add(h, first, &mut mark);
        if span > v {
            return None;
        }
        match dfs(h, e, v, span, &mut chosen, &mut mark, budget) {
            Ok(true) => Some(chosen),
            Ok(false) => None,
            Err(()) => {
                gave_up.store(true, Ordering::Relaxed);
                None
            }
        }
    });
    match found {
        Some(w) => Search::Found(w),
        None if gave_up.load(Ordering::Relaxed) => Search::Unknown,
        None => Search::Absent,
    }
}

fn add(h: &Hypergraph, i: usize, mark: &mut [u32]) -> usize {
    let mut new = 0;
    for &x in h.edge(i) {
        if mark[x as usize] == 0 {
            new += 1;
        }
        mark[x as usize] += 1;
    }
    new
}

fn remove(h: &Hypergraph, i: usize, mark: &mut [u32]) {
    for &x in h.edge(i) {
        mark[x as usize] -= 1;
    }
}

fn dfs(
    h: &Hypergraph,
    e: usize,
    v: usize,
    span: usize,
    chosen: &mut Vec<usize>,
    mark: &mut [u32],
    budget: &Budget,
) -> Result<bool, ()> {
    if chosen.len() == e {
        return Ok(true);
    }
    if !budget.charge(1) {
        return Err(());
    }
    let last = *chosen.last().unwrap();
    let left = e - chosen.len();
    for i in last + 1..=h.len() - left {
        let fresh = h.edge(i).iter().filter(|&&x| mark[x as usize] == 0).count();
        if span + fresh > v {
            continue;
        }
        add(h, i, mark);
        chosen.push(i);
        if dfs(h, e, v, span + fresh, chosen, mark, budget)? {
            return Ok(true);
        }
        chosen.pop();
        remove(h, i, mark);
    }
    Ok(false)
}

/// Linear, and every pair of the `n` vertices lies in exactly one edge.
pub fn is_steiner(h: &Hypergraph) -> bool {
    let r = h.r() as u128;
    let n = h.n() as u128;
    h.len() as u128 * r * (r - 1) == n * n.saturating_sub(1) && h.is_linear().linear
}

/// Steiner `e`-sparseness: every `e` blocks span more than `e(r-2)+2` points.
/// `Found` is a violating set of blocks.
pub fn steiner_e_sparse(h: &Hypergraph, e: usize, budget: &Budget) -> Result<Search<Vec<usize>>, CheckError> {
    if !is_steiner(h) {
        return Err(CheckError::NotApplicable("hypergraph is not a Steiner system".into()));
    }
    Ok(check_vw_sparse(h, e, e * (h.r() - 2) + 2, budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_triples_are_sparse() {
        let h = Hypergraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(check_vw_sparse(&h, 2, 5, &Budget::unlimited()).is_absent());
        assert_eq!(check_vw_sparse(&h, 2, 6, &Budget::unlimited()), Search::Found(vec![0, 1]));
    }

    #[test]
    fn pasch_is_dense() {
        let h = Hypergraph::new(6, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap();
        assert_eq!(check_vw_sparse(&h, 4, 6, &Budget::unlimited()), Search::Found(vec![0, 1, 2, 3]));
    }

    #[test]
    fn fano_is_steiner() {
        let fano = Hypergraph::new(
            7,
            3,
            [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]],
        )
        .unwrap();
        assert!(is_steiner(&fano));
        assert!(steiner_e_sparse(&fano, 3, &Budget::unlimited()).unwrap().is_absent());
        let part = fano.subfamily(&[0, 1, 2]);
        assert!(steiner_e_sparse(&part, 3, &Budget::unlimited()).is_err());
    }
}
