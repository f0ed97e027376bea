//! Definition-level witness checks, independent of the search code.

use std::collections::BTreeSet;

use super::{ConfigKind, ConfigWitness};
use crate::hypergraph::{Hypergraph, Vertex};

type Set = BTreeSet<Vertex>;

fn inter(a: &Set, b: &Set) -> Set {
    a.intersection(b).copied().collect()
}

fn single(a: &Set, b: &Set) -> Option<Vertex> {
    let i = inter(a, b);
    (i.len() == 1).then(|| *i.iter().next().unwrap())
}

fn all_distinct<T: Ord + Copy>(xs: &[T]) -> bool {
    xs.iter().collect::<BTreeSet<_>>().len() == xs.len()
}

fn pairwise_disjoint(sets: &[Set]) -> bool {
    (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| sets[i].is_disjoint(&sets[j])))
}

/// Whether `w` is a genuine copy of `w.kind` in `h`.
pub fn validate_witness(h: &Hypergraph, w: &ConfigWitness) -> bool {
    if w.edge_indices.iter().any(|&i| i >= h.len()) || !all_distinct(&w.edge_indices) {
        return false;
    }
    let role = |name: &str| -> Option<Vec<Set>> {
        let idx = w.role_map.get(name)?;
        if idx.iter().any(|&i| i >= h.len()) {
            return None;
        }
        Some(idx.iter().map(|&i| h.edge(i).iter().copied().collect()).collect())
    };
    let role_edges: usize = w.role_map.values().map(Vec::len).sum();
    if role_edges != w.edge_indices.len() {
        return false;
    }
    let ok = match w.kind {
        ConfigKind::Grid(a, b) => (|| {
            let (ea, eb) = (role("A")?, role("B")?);
            Some(
                ea.len() == a
                    && eb.len() == b
                    && pairwise_disjoint(&ea)
                    && pairwise_disjoint(&eb)
                    && ea.iter().all(|x| eb.iter().all(|y| inter(x, y).len() == 1)),
            )
        })(),
        ConfigKind::Triangle => (|| {
            let t = role("T")?;
            if t.len() != 3 {
                return Some(false);
            }
            let p = [single(&t[0], &t[1])?, single(&t[1], &t[2])?, single(&t[0], &t[2])?];
            Some(all_distinct(&p))
        })(),
        ConfigKind::PairI2 => (|| {
            let p = role("pair")?;
            Some(p.len() == 2 && inter(&p[0], &p[1]).len() >= 2)
        })(),
        ConfigKind::Pasch | ConfigKind::G6 => (|| {
            let e = role("blocks")?;
            if e.len() != 4 {
                return Some(false);
            }
            let mut pts = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    pts.push(single(&e[i], &e[j])?);
                }
            }
            Some(all_distinct(&pts))
        })(),
        ConfigKind::Mitre => (|| {
            let (c, x) = (role("center")?, role("cross")?);
            if c.len() != 3 || x.len() != 2 {
                return Some(false);
            }
            let a = single(&c[0], &c[1])?;
            Some(
                single(&c[0], &c[2]) == Some(a)
                    && single(&c[1], &c[2]) == Some(a)
                    && x[0].is_disjoint(&x[1])
                    && x.iter().all(|e| !e.contains(&a) && c.iter().all(|f| inter(e, f).len() == 1)),
            )
        })(),
        ConfigKind::G7 => (|| {
            let (d, m) = (role("disjoint")?, role("meeting")?);
            if d.len() != 2 || m.len() != 2 {
                return Some(false);
            }
            let x = single(&m[0], &m[1])?;
            let mut pts = vec![x];
            for e in &m {
                for f in &d {
                    pts.push(single(e, f)?);
                }
            }
            Some(d[0].is_disjoint(&d[1]) && all_distinct(&pts))
        })(),
        ConfigKind::PrStar(k) => (|| {
            let (ea, eb, cs) = (role("A")?, role("B")?, role("C")?);
            if k != h.r() || ea.len() != 1 || eb.len() != 1 || cs.len() != k - 1 {
                return Some(false);
            }
            let (ea, eb) = (&ea[0], &eb[0]);
            let d = single(ea, eb)?;
            let mut on_a = vec![d];
            let mut on_b = vec![d];
            for c in &cs {
                on_a.push(single(c, ea)?);
                on_b.push(single(c, eb)?);
            }
            Some(pairwise_disjoint(&cs) && all_distinct(&on_a) && all_distinct(&on_b))
        })(),
    };
    ok.unwrap_or(false)
}
