//! Plain-graph checks for 2-uniform hypergraphs.

use std::collections::VecDeque;

use crate::error::CheckError;
use crate::hypergraph::Hypergraph;

fn adjacency(h: &Hypergraph) -> Result<Vec<Vec<usize>>, CheckError> {
    if h.r() != 2 {
        return Err(CheckError::NotApplicable(format!("graph check on a {}-uniform hypergraph", h.r())));
    }
    let mut adj = vec![Vec::new(); h.n()];
    for e in h.edges() {
        adj[e[0] as usize].push(e[1] as usize);
        adj[e[1] as usize].push(e[0] as usize);
    }
    Ok(adj)
}

/// Length of a shortest cycle, `None` for a forest.
pub fn girth(h: &Hypergraph) -> Result<Option<usize>, CheckError> {
    let adj = adjacency(h)?;
    let n = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.fill(usize::MAX);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    Ok((best != usize::MAX).then_some(best))
}

/// Whether some two vertices have two common neighbours.
pub fn has_c4(h: &Hypergraph) -> Result<bool, CheckError> {
    let adj = adjacency(h)?;
    let n = adj.len();
    let mut seen = vec![usize::MAX; n];
    for u in 0..n {
        for &v in &adj[u] {
            for &w in &adj[v] {
                if w == u {
                    continue;
                }
                if seen[w] == u {
                    return Ok(true);
                }
                seen[w] = u;
            }
        }
    }
    Ok(false)
}

pub fn is_bipartite(h: &Hypergraph) -> Result<bool, CheckError> {
    let adj = adjacency(h)?;
    let mut side = vec![u8::MAX; adj.len()];
    for s in 0..adj.len() {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
