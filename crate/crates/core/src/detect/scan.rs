//! Backtracking enumerators, one per configuration kind.
//!
//! Each copy is produced exactly once: anchors are the least edge of a
//! distinguished role (or the distinguished vertex), and the remaining
//! edges of interchangeable roles are chosen in increasing index order.

use super::{ConfigKind, Roles};
use crate::budget::Budget;
use crate::hypergraph::{Hypergraph, Vertex};

pub(crate) struct OutOfBudget;

/// `Ok(true)` once the visitor asked to stop.
type Flow = Result<bool, OutOfBudget>;
type Visit<'v> = &'v mut dyn FnMut(Roles) -> bool;

pub(crate) struct Scanner<'a> {
    h: &'a Hypergraph,
    inc: Vec<Vec<usize>>,
    budget: &'a Budget,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(h: &'a Hypergraph, budget: &'a Budget) -> Self {
        Scanner { h, inc: h.incidence(), budget }
    }

    pub(crate) fn anchor_count(&self, kind: ConfigKind) -> usize {
        match kind {
            ConfigKind::Mitre => self.h.n(),
            ConfigKind::PrStar(k) if k == self.h.r() => self.h.n(),
            ConfigKind::PrStar(_) => 0,
            _ => self.h.len(),
        }
    }

    pub(crate) fn scan(&self, kind: ConfigKind, anchor: usize, visit: Visit<'_>) -> Flow {
        match kind {
            ConfigKind::Grid(a, b) => self.grid(a, b, anchor, visit),
            ConfigKind::Triangle => self.triangle(anchor, visit),
            ConfigKind::PairI2 => self.pair_i2(anchor, visit),
            ConfigKind::Pasch | ConfigKind::G6 => self.pasch(anchor, visit),
            ConfigKind::Mitre => self.mitre(anchor as Vertex, visit),
            ConfigKind::G7 => self.g7(anchor, visit),
            ConfigKind::PrStar(_) => self.prstar(anchor as Vertex, visit),
        }
    }

    #[inline]
    fn tick(&self) -> Result<(), OutOfBudget> {
        if self.budget.charge(1) {
            Ok(())
        } else {
            Err(OutOfBudget)
        }
    }

    /// Size of the intersection of two edges.
    #[inline]
    fn meet(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.h.edge(i), self.h.edge(j));
        let (mut x, mut y, mut c) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        c
    }

    /// The common vertex of two edges meeting in exactly one vertex.
    fn common(&self, i: usize, j: usize) -> Option<Vertex> {
        if self.meet(i, j) != 1 {
            return None;
        }
        let b = self.h.edge(j);
        self.h.edge(i).iter().copied().find(|v| b.binary_search(v).is_ok())
    }

    fn contains(&self, e: usize, v: Vertex) -> bool {
        self.h.edge(e).binary_search(&v).is_ok()
    }

    // Grid: anchor is the least edge of A (of A ∪ B when a = b).
    fn grid(&self, a: usize, b: usize, i: usize, visit: Visit<'_>) -> Flow {
        if b > self.h.r() || a > self.h.r() {
            return Ok(false);
        }
        let mut bs = Vec::with_capacity(b);
        self.grid_b(a, b, i, 0, &mut bs, visit)
    }

    fn grid_b(&self, a: usize, b: usize, i: usize, pos: usize, bs: &mut Vec<usize>, visit: Visit<'_>) -> Flow {
        self.tick()?;
        if bs.len() == b {
            return self.grid_a(a, i, bs, visit);
        }
        let anchor = self.h.edge(i);
        let need = b - bs.len();
        for p in pos..anchor.len() {
            if anchor.len() - p < need {
                break;
            }
            for &e in &self.inc[anchor[p] as usize] {
                if e == i || (a == b && e < i) || self.meet(e, i) != 1 {
                    continue;
                }
                if bs.iter().any(|&f| self.meet(e, f) != 0) {
                    continue;
                }
                bs.push(e);
                let stop = self.grid_b(a, b, i, p + 1, bs, visit)?;
                bs.pop();
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn grid_a(&self, a: usize, i: usize, bs: &[usize], visit: Visit<'_>) -> Flow {
        if a == 1 {
            return Ok(visit(vec![("A", vec![i]), ("B", bs.to_vec())]));
        }
        let mut cand = Vec::new();
        for &v in self.h.edge(bs[0]) {
            for &e in &self.inc[v as usize] {
                if e > i && self.meet(e, i) == 0 && bs.iter().all(|&f| self.meet(e, f) == 1) {
                    cand.push(e);
                }
            }
        }
        cand.sort_unstable();
        cand.dedup();
        let mut chosen = vec![i];
        self.grid_pick(a, &cand, 0, &mut chosen, bs, visit)
    }

    fn grid_pick(
        &self,
        a: usize,
        cand: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
        bs: &[usize],
        visit: Visit<'_>,
    ) -> Flow {
        self.tick()?;
        if chosen.len() == a {
            return Ok(visit(vec![("A", chosen.clone()), ("B", bs.to_vec())]));
        }
        for k in start..cand.len() {
            let e = cand[k];
            if chosen.iter().any(|&f| self.meet(e, f) != 0) {
                continue;
            }
            chosen.push(e);
            let stop = self.grid_pick(a, cand, k + 1, chosen, bs, visit)?;
            chosen.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn triangle(&self, i: usize, visit: Visit<'_>) -> Flow {
        let e1 = self.h.edge(i);
        for &u in e1 {
            for &e2 in &self.inc[u as usize] {
                if e2 <= i || self.meet(e2, i) != 1 {
                    continue;
                }
                self.tick()?;
                for &w in e1.iter().filter(|&&w| w != u) {
                    for &e3 in &self.inc[w as usize] {
                        if e3 > e2 && self.meet(e3, i) == 1 && self.meet(e2, e3) == 1 && visit(vec![("T", vec![i, e2, e3])]) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    fn pair_i2(&self, i: usize, visit: Visit<'_>) -> Flow {
        self.tick()?;
        let mut partners: Vec<usize> = self
            .h
            .edge(i)
            .iter()
            .flat_map(|&v| self.inc[v as usize].iter().copied())
            .filter(|&e| e > i && self.meet(e, i) >= 2)
            .collect();
        partners.sort_unstable();
        partners.dedup();
        for e in partners {
            if visit(vec![("pair", vec![i, e])]) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // Four edges, pairwise meeting in six distinct points; anchor = least edge.
    fn pasch(&self, i: usize, visit: Visit<'_>) -> Flow {
        let e1 = self.h.edge(i);
        for &u in e1 {
            for &e2 in &self.inc[u as usize] {
                if e2 <= i || self.meet(e2, i) != 1 {
                    continue;
                }
                for &w in e1.iter().filter(|&&w| w != u) {
                    for &e3 in &self.inc[w as usize] {
                        if e3 <= e2 || self.meet(e3, i) != 1 {
                            continue;
                        }
                        let Some(p23) = self.common(e2, e3) else { continue };
                        self.tick()?;
                        for &z in e1.iter().filter(|&&z| z != u && z != w) {
                            for &e4 in &self.inc[z as usize] {
                                if e4 <= e3 || self.meet(e4, i) != 1 {
                                    continue;
                                }
                                let (Some(p24), Some(p34)) = (self.common(e2, e4), self.common(e3, e4)) else {
                                    continue;
                                };
                                let mut pts = [u, w, p23, z, p24, p34];
                                pts.sort_unstable();
                                if pts.windows(2).all(|x| x[0] != x[1]) && visit(vec![("blocks", vec![i, e2, e3, e4])]) {
                                    return Ok(true);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    // Anchor = the common vertex of the three centre edges.
    fn mitre(&self, a: Vertex, visit: Visit<'_>) -> Flow {
        let through = &self.inc[a as usize];
        for (x, &e1) in through.iter().enumerate() {
            for (y, &e2) in through.iter().enumerate().skip(x + 1) {
                if self.meet(e1, e2) != 1 {
                    continue;
                }
                for &e3 in &through[y + 1..] {
                    if self.meet(e1, e3) != 1 || self.meet(e2, e3) != 1 {
                        continue;
                    }
                    self.tick()?;
                    let mut cand: Vec<usize> = self
                        .h
                        .edge(e1)
                        .iter()
                        .filter(|&&v| v != a)
                        .flat_map(|&v| self.inc[v as usize].iter().copied())
                        .filter(|&e| {
                            !self.contains(e, a)
                                && self.meet(e, e1) == 1
                                && self.meet(e, e2) == 1
                                && self.meet(e, e3) == 1
                        })
                        .collect();
                    cand.sort_unstable();
                    cand.dedup();
                    for (k, &e4) in cand.iter().enumerate() {
                        for &e5 in &cand[k + 1..] {
                            if self.meet(e4, e5) == 0
                                && visit(vec![("center", vec![e1, e2, e3]), ("cross", vec![e4, e5])])
                            {
                                return Ok(true);
                            }
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    // Anchor = the lesser of the two meeting edges.
    fn g7(&self, i: usize, visit: Visit<'_>) -> Flow {
        for &x in self.h.edge(i) {
            for &e4 in &self.inc[x as usize] {
                if e4 <= i || self.meet(e4, i) != 1 {
                    continue;
                }
                self.tick()?;
                let mut cand: Vec<usize> = self
                    .h
                    .edge(i)
                    .iter()
                    .filter(|&&v| v != x)
                    .flat_map(|&v| self.inc[v as usize].iter().copied())
                    .filter(|&e| e != i && e != e4 && self.meet(e, i) == 1 && self.meet(e, e4) == 1 && !self.contains(e, x))
                    .collect();
                cand.sort_unstable();
                cand.dedup();
                for (k, &e1) in cand.iter().enumerate() {
                    for &e2 in &cand[k + 1..] {
                        if self.meet(e1, e2) == 0 && visit(vec![("disjoint", vec![e1, e2]), ("meeting", vec![i, e4])]) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    // Anchor = the shared vertex d of A and B.
    fn prstar(&self, d: Vertex, visit: Visit<'_>) -> Flow {
        let through = &self.inc[d as usize];
        for (x, &ea) in through.iter().enumerate() {
            for &eb in &through[x + 1..] {
                if self.meet(ea, eb) != 1 {
                    continue;
                }
                let avs: Vec<Vertex> = self.h.edge(ea).iter().copied().filter(|&v| v != d).collect();
                let mut cs = Vec::with_capacity(avs.len());
                if self.prstar_pick(ea, eb, &avs, &mut cs, visit)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn prstar_pick(&self, ea: usize, eb: usize, avs: &[Vertex], cs: &mut Vec<usize>, visit: Visit<'_>) -> Flow {
        self.tick()?;
        let Some(&v) = avs.get(cs.len()) else {
            return Ok(visit(vec![("A", vec![ea]), ("B", vec![eb]), ("C", cs.clone())]));
        };
        for &c in &self.inc[v as usize] {
            if c == ea || c == eb || self.meet(c, ea) != 1 || self.meet(c, eb) != 1 {
                continue;
            }
            if cs.iter().any(|&f| self.meet(c, f) != 0) {
                continue;
            }
            cs.push(c);
            let stop = self.prstar_pick(ea, eb, avs, cs, visit)?;
            cs.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
