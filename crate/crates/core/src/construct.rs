//! Explicit constructions.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::budget::Budget;
use crate::detect::{find_config, ConfigKind};
use crate::error::ConstructError;
use crate::hypergraph::{Hypergraph, PartiteLayout, Vertex};
use crate::numbers::{greedy_pattern_set, largest_prime_leq, restricted_set, IntSet, PatternKind};
use crate::purge::{purge_edges, DeletionEvent, Prob};
use crate::rng::{child_seed, seeded};

fn invalid(msg: impl Into<String>) -> ConstructError {
    ConstructError::InvalidParams(msg.into())
}

/// `F_M`: on parts `V_j = [jq, (j+1)q)`, the lines
/// `A(y, m) = {(j, y + j·m mod q) : j < r}`; edge `s·q + y` is `A(y, M[s])`.
pub fn transversal(q: u64, r: usize, slopes: &IntSet) -> Result<Hypergraph, ConstructError> {
    if r < 2 {
        return Err(invalid(format!("uniformity {r} is below 2")));
    }
    if q >= 2 && (q as usize) < r {
        return Err(invalid(format!("modulus {q} is smaller than r = {r}")));
    }
    let n = r * q as usize;
    let layout = PartiteLayout::blocks(r, q as usize);
    if q <= 1 || slopes.is_empty() {
        return Ok(Hypergraph::empty(n, r)?.with_layout(layout)?);
    }
    let mut seen = vec![false; q as usize];
    let mut ms = Vec::with_capacity(slopes.len());
    for &m in slopes.elements() {
        let red = m.rem_euclid(q as i64) as u64;
        if std::mem::replace(&mut seen[red as usize], true) {
            return Err(ConstructError::DuplicateSlope(m));
        }
        ms.push(red);
    }
    let mut edges = Vec::with_capacity(ms.len() * q as usize);
    for &m in &ms {
        for y in 0..q {
            edges.push(line(q, r, y, m));
        }
    }
    Ok(Hypergraph::new(n, r, edges)?.with_layout(layout)?)
}

fn line(q: u64, r: usize, y: u64, m: u64) -> Vec<Vertex> {
    (0..r as u64).map(|j| (j * q + (y + j * m) % q) as Vertex).collect()
}

/// `{0, 1, …, ⌈q/(4r)⌉ − 1}` modulo `q`.
pub fn small_slope_set(q: u64, r: usize) -> IntSet {
    let top = q.div_ceil(4 * r as u64);
    IntSet::modular(q, (0..top as i64).collect::<Vec<_>>())
}

/// Slope selection rules for [`transversal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopePolicy {
    /// All of `Z_q`.
    All,
    Small,
    /// Small slopes, greedily thinned to avoid the sum patterns (plus AP3, A4
    /// and A6 when `r = 3`).
    SumFree,
    Restricted,
    Sidon,
}

impl std::str::FromStr for SlopePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(SlopePolicy::All),
            "small" => Ok(SlopePolicy::Small),
            "sumfree" => Ok(SlopePolicy::SumFree),
            "restricted" => Ok(SlopePolicy::Restricted),
            "sidon" => Ok(SlopePolicy::Sidon),
            _ => Err(format!("unknown slope policy `{s}` (all, small, sumfree, restricted, sidon, file:<path>)")),
        }
    }
}

pub fn slope_set(policy: SlopePolicy, q: u64, r: usize, seed: u64) -> IntSet {
    match policy {
        SlopePolicy::All => IntSet::modular(q, (0..q as i64).collect::<Vec<_>>()),
        SlopePolicy::Small => small_slope_set(q, r),
        SlopePolicy::SumFree => {
            let top = q.div_ceil(4 * r as u64).saturating_sub(1);
            let mut kinds = vec![PatternKind::SumFree(r)];
            if r == 3 {
                kinds.extend([PatternKind::Ap(3), PatternKind::A4, PatternKind::A6]);
            }
            IntSet::modular(q, greedy_pattern_set(top, &kinds).elements().to_vec())
        }
        SlopePolicy::Restricted => IntSet::modular(q, restricted_set(q, seed).elements().to_vec()),
        SlopePolicy::Sidon => greedy_pattern_set(q, &[PatternKind::SidonModQ]),
    }
}

/// All `r`-subsets of `[0, n)` meeting `{0, …, r−2}`.
pub fn pencil(n: usize, r: usize) -> Result<Hypergraph, ConstructError> {
    if r < 2 || n < r {
        return Err(invalid(format!("pencil needs n >= r >= 2, got n = {n}, r = {r}")));
    }
    let mut edges = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == r {
            if (cur[0] as usize) < r - 1 {
                out.push(cur.clone());
            }
            return;
        }
        for v in start..n {
            cur.push(v as Vertex);
            rec(n, r, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 0, &mut cur, &mut edges);
    Ok(Hypergraph::new(n, r, edges)?)
}

/// Bipartite graph `{y, q + y + m}` over a greedy Sidon set `M ⊂ Z_q`.
pub fn sidon_graph(q: u64) -> Result<(Hypergraph, IntSet), ConstructError> {
    if q < 2 {
        return Err(invalid("sidon graph needs q >= 2"));
    }
    let m = greedy_pattern_set(q, &[PatternKind::SidonModQ]);
    Ok((transversal(q, 2, &m)?, m))
}

/// Lines of `PG(3,2)`: vertex `v` is the nonzero vector `v + 1` of `F_2^4`.
pub fn pg32_sts15() -> Hypergraph {
    let mut edges = Vec::new();
    for u in 1u32..16 {
        for v in u + 1..16 {
            let w = u ^ v;
            if w > v {
                edges.push([u - 1, v - 1, w - 1]);
            }
        }
    }
    Hypergraph::new(15, 3, edges).expect("PG(3,2) lines are a valid triple system")
}

/// Parameters of the six-line crossing family for `r = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingParamsR3 {
    pub y: i64,
    pub m: i64,
    pub a: i64,
    pub b: i64,
    pub q: u64,
}

impl CrossingParamsR3 {
    pub fn intercepts(&self) -> [i64; 3] {
        let (y, a, b) = (self.y, self.a, self.b);
        [y + 4 * a + 2 * b, y - 2 * a + 2 * b, y - 2 * a - 4 * b]
    }

    pub fn slopes(&self) -> [i64; 3] {
        let (m, a, b) = (self.m, self.a, self.b);
        [m - 3 * a, m - 3 * b, m + 3 * a + 3 * b]
    }

    pub fn slopes_prime(&self) -> [i64; 3] {
        let (m, a, b) = (self.m, self.a, self.b);
        [m - 3 * a - 3 * b, m + 3 * a, m + 3 * b]
    }
}

/// Edges `π_i = A(y_i, m_i)` then `ρ_i = A(y_i, m′_i)`, `i = 1..3`.
pub fn crossing_lines_r3(p: &CrossingParamsR3) -> Result<Hypergraph, ConstructError> {
    if p.a <= 0 || p.b <= 0 {
        return Err(invalid("a and b must be positive"));
    }
    if p.q < 3 {
        return Err(invalid("q must be at least 3"));
    }
    let q = p.q as i64;
    let red = |x: i64| x.rem_euclid(q) as u64;
    let all: Vec<u64> = p.slopes().iter().chain(&p.slopes_prime()).map(|&m| red(m)).collect();
    for i in 0..6 {
        for j in i + 1..6 {
            if all[i] == all[j] {
                return Err(ConstructError::CoincidentLines(format!(
                    "slopes {i} and {j} agree modulo {q}: {:?}",
                    all
                )));
            }
        }
    }
    let ys = p.intercepts();
    let edges: Vec<Vec<Vertex>> =
        (0..6).map(|k| line(p.q, 3, red(ys[k % 3]), all[k])).collect();
    Ok(Hypergraph::new(3 * p.q as usize, 3, edges)?.with_layout(PartiteLayout::blocks(3, p.q as usize))?)
}

/// Accounting for one level of [`recursive_gridfree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecursiveReport {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    /// Prime modulus of this level; `None` for the base case.
    pub q: Option<u64>,
    pub base_edges: usize,
    /// Size of the family placed into each part.
    pub child_edges: usize,
    /// `g[0]`: grids whose child edges come from two or more parts;
    /// `g[j]`: grids whose child edges all come from part `j`.
    pub g: Vec<u64>,
    /// Grids inside the base transversal alone.
    pub base_grids: u64,
    pub deleted: usize,
    pub final_size: usize,
    pub complete: bool,
    pub events: Vec<DeletionEvent>,
    pub child: Option<Box<RecursiveReport>>,
}

/// Greedy linear packing of the `r`-subsets of `[0, n)` in lex order.
fn greedy_linear(n: usize, r: usize) -> Hypergraph {
    let mut covered = vec![false; n * n];
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if n < r {
        return Hypergraph::empty(n, r).expect("r >= 2");
    }
    loop {
        let free = (0..r).all(|i| (i + 1..r).all(|j| !covered[cur[i] * n + cur[j]]));
        if free {
            for i in 0..r {
                for j in i + 1..r {
                    covered[cur[i] * n + cur[j]] = true;
                }
            }
            edges.push(cur.iter().map(|&v| v as Vertex).collect());
        }
        // Next r-subset in lex order.
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else { break };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Hypergraph::new(n, r, edges).expect("packing edges are distinct")
}

/// Linear `Grid(r,r)`-free family on `n` vertices by prime-modulus recursion.
///
/// Level: `q` = largest prime `≤ n/r`, the full `F_{Z_q}` on `r` parts, a
/// recursively built family on `q` vertices copied into every part under
/// independent seeded permutations, then one deletion per remaining grid.
/// Below `n/r < r` the family is a greedy linear packing, which cannot
/// hold an `r × r` grid on fewer than `r²` vertices.
pub fn recursive_gridfree(
    n: usize,
    r: usize,
    seed: u64,
    budget: &Budget,
) -> Result<(Hypergraph, RecursiveReport), ConstructError> {
    if r < 4 || n < r {
        return Err(invalid(format!("recursive construction needs r >= 4 and n >= r, got n = {n}, r = {r}")));
    }
    Ok(level(n, r, seed, budget))
}

fn level(n: usize, r: usize, seed: u64, budget: &Budget) -> (Hypergraph, RecursiveReport) {
    if n / r < r {
        let h = greedy_linear(n, r);
        let report = RecursiveReport {
            n,
            r,
            seed,
            q: None,
            base_edges: h.len(),
            child_edges: 0,
            g: vec![0; r + 1],
            base_grids: 0,
            deleted: 0,
            final_size: h.len(),
            complete: true,
            events: Vec::new(),
            child: None,
        };
        return (h, report);
    }
    let q = largest_prime_leq((n / r) as u64).expect("n / r >= r >= 4");
    let qs = q as usize;
    let all = IntSet::modular(q, (0..q as i64).collect::<Vec<_>>());
    let base = transversal(q, r, &all).expect("prime q >= r");
    let (child, child_report) = level(qs, r, child_seed(seed, 0), budget);

    let mut edges: Vec<Vec<Vertex>> = base.edges().map(<[Vertex]>::to_vec).collect();
    let mut origin: Vec<Option<usize>> = vec![None; edges.len()];
    for j in 0..r {
        let mut perm: Vec<Vertex> = (0..qs as Vertex).collect();
        perm.shuffle(&mut seeded(child_seed(seed, 1 + j as u64)));
        for e in child.edges() {
            edges.push(e.iter().map(|&v| (j * qs) as Vertex + perm[v as usize]).collect());
            origin.push(Some(j));
        }
    }
    let union = Hypergraph::new(n, r, edges).expect("parts are disjoint");
    let purged = purge_edges(&union, &[ConfigKind::Grid(r, r)], budget);

    let mut g = vec![0u64; r + 1];
    let mut base_grids = 0;
    for ev in &purged.report.events {
        let mut parts: Vec<usize> = ev.witness.iter().filter_map(|&i| origin[i]).collect();
        parts.sort_unstable();
        parts.dedup();
        match parts.as_slice() {
            [] => base_grids += 1,
            [j] => g[j + 1] += 1,
            _ => g[0] += 1,
        }
    }
    let report = RecursiveReport {
        n,
        r,
        seed,
        q: Some(q),
        base_edges: base.len(),
        child_edges: child.len(),
        g,
        base_grids,
        deleted: purged.report.deleted,
        final_size: purged.family.len(),
        complete: purged.report.complete && child_report.complete,
        events: purged.report.events,
        child: Some(Box::new(child_report)),
    };
    (purged.family, report)
}

/// Union of the parallel classes `M(α, β) = {(y, y+α, y+β)}` over `Z_n`.
#[derive(Debug, Clone)]
pub struct ClassFamily {
    pub family: Hypergraph,
    /// `(α, β)` of each kept class.
    pub classes: Vec<(u64, u64)>,
    /// Edge indices of each kept class.
    pub class_edges: Vec<Vec<usize>>,
}

/// Keeps each of the `n²` classes independently with probability `p`.
pub fn random_classes(n: u64, p: Prob, seed: u64) -> Result<ClassFamily, ConstructError> {
    if n < 2 {
        return Err(invalid("random classes need n >= 2"));
    }
    let mut rng = seeded(seed);
    let mut classes = Vec::new();
    let mut class_edges = Vec::new();
    let mut edges = Vec::new();
    for alpha in 0..n {
        for beta in 0..n {
            if !p.sample(&mut rng) {
                continue;
            }
            let start = edges.len();
            for y in 0..n {
                edges.push([y as Vertex, (n + (y + alpha) % n) as Vertex, (2 * n + (y + beta) % n) as Vertex]);
            }
            classes.push((alpha, beta));
            class_edges.push((start..edges.len()).collect());
        }
    }
    let family = Hypergraph::new(3 * n as usize, 3, edges)?.with_layout(PartiteLayout::blocks(3, n as usize))?;
    Ok(ClassFamily { family, classes, class_edges })
}

/// Whether `h` contains no `Grid(r, r)`; convenience for callers and tests.
pub fn is_grid_free(h: &Hypergraph, budget: &Budget) -> Option<bool> {
    match find_config(h, ConfigKind::Grid(h.r(), h.r()), budget) {
        crate::budget::Search::Found(_) => Some(false),
        crate::budget::Search::Absent => Some(true),
        crate::budget::Search::Unknown => None,
    }
}
