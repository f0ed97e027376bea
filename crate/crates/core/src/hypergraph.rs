//! Uniform hypergraphs: representation, structural predicates and the
//! line-oriented text format.
//!
//! Edges are stored flat, `r` sorted vertex ids per edge, in construction
//! order. Edge order is significant in memory (parallel classes and witness
//! indices refer to it) and canonicalized only when writing.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::budget::{Budget, Search};
use crate::error::HypergraphError;

pub type Vertex = u32;

/// Disjoint vertex classes `V_1..V_r`; every edge meets each class once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteLayout {
    parts: Vec<Vec<Vertex>>,
}

impl PartiteLayout {
    pub fn new(mut parts: Vec<Vec<Vertex>>) -> Result<Self, HypergraphError> {
        let mut seen = HashMap::new();
        for (j, part) in parts.iter_mut().enumerate() {
            part.sort_unstable();
            for &v in part.iter() {
                if let Some(prev) = seen.insert(v, j) {
                    return Err(HypergraphError::Layout(format!(
                        "vertex {v} lies in parts {prev} and {j}"
                    )));
                }
            }
        }
        Ok(PartiteLayout { parts })
    }

    /// `r` consecutive blocks of `q` ids: part `j` is `[j*q, (j+1)*q)`.
    pub fn blocks(r: usize, q: usize) -> Self {
        let parts = (0..r)
            .map(|j| ((j * q) as Vertex..((j + 1) * q) as Vertex).collect())
            .collect();
        PartiteLayout { parts }
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.parts.iter().position(|p| p.binary_search(&v).is_ok())
    }
}

/// An immutable `r`-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    flat: Vec<Vertex>,
    layout: Option<PartiteLayout>,
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Each edge is sorted; duplicates,
    /// repeated vertices and out-of-range ids are rejected.
    pub fn new<I, E>(n: usize, r: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if r < 2 {
            return Err(HypergraphError::BadUniformity(r));
        }
        let mut flat = Vec::new();
        let mut seen: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for (index, e) in edges.into_iter().enumerate() {
            let mut e = e.as_ref().to_vec();
            if e.len() != r {
                return Err(HypergraphError::WrongEdgeSize { index, got: e.len(), expected: r });
            }
            e.sort_unstable();
            for w in e.windows(2) {
                if w[0] == w[1] {
                    return Err(HypergraphError::RepeatedVertex { index, vertex: w[0] });
                }
            }
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
                return Err(HypergraphError::VertexOutOfRange { index, vertex: v, n });
            }
            flat.extend_from_slice(&e);
            if let Some(first) = seen.insert(e, index) {
                return Err(HypergraphError::DuplicateEdge { index, first });
            }
        }
        Ok(Hypergraph { n, r, flat, layout: None })
    }

    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        Hypergraph::new(n, r, std::iter::empty::<Vec<Vertex>>())
    }

    /// Attaches a partite layout, checking that every edge is transversal to it.
    pub fn with_layout(mut self, layout: PartiteLayout) -> Result<Self, HypergraphError> {
        for part in layout.parts() {
            if let Some(&v) = part.iter().find(|&&v| v as usize >= self.n) {
                return Err(HypergraphError::Layout(format!("vertex {v} outside [0, {})", self.n)));
            }
        }
        for (i, e) in self.edges().enumerate() {
            for (j, part) in layout.parts().iter().enumerate() {
                let hits = e.iter().filter(|v| part.binary_search(v).is_ok()).count();
                if hits != 1 {
                    return Err(HypergraphError::Layout(format!(
                        "edge {i} meets part {j} in {hits} vertices"
                    )));
                }
            }
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.r
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn layout(&self) -> Option<&PartiteLayout> {
        self.layout.as_ref()
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.flat[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.flat.chunks_exact(self.r)
    }

    /// Vertex → indices of the edges containing it (ascending).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges().enumerate() {
            for &v in e {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &v in &self.flat {
            deg[v as usize] += 1;
        }
        deg
    }

    /// The sub-hypergraph on the same vertex set keeping `indices` in order.
    pub fn subfamily(&self, indices: &[usize]) -> Hypergraph {
        let mut flat = Vec::with_capacity(indices.len() * self.r);
        for &i in indices {
            flat.extend_from_slice(self.edge(i));
        }
        Hypergraph { n: self.n, r: self.r, flat, layout: self.layout.clone() }
    }

    /// Relabels vertex `v` as `perm[v]`. The layout is dropped unless the
    /// permutation maps it onto a valid layout.
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut flat = Vec::with_capacity(self.flat.len());
        for e in self.edges() {
            let mut m: Vec<Vertex> = e.iter().map(|&v| perm[v as usize]).collect();
            m.sort_unstable();
            flat.extend_from_slice(&m);
        }
        let layout = self.layout.as_ref().and_then(|l| {
            PartiteLayout::new(
                l.parts().iter().map(|p| p.iter().map(|&v| perm[v as usize]).collect()).collect(),
            )
            .ok()
        });
        Hypergraph { n: self.n, r: self.r, flat, layout }
    }

    /// Edge indices in lexicographic order of their vertex tuples.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.edge(a).cmp(self.edge(b)));
        idx
    }

    /// Linearity check. On failure returns the lexicographically least
    /// pair of edge indices sharing two or more vertices.
    pub fn is_linear(&self) -> Linearity {
        let inc = self.incidence();
        let mut shared = vec![0u32; self.len()];
        let mut touched = Vec::new();
        for i in 0..self.len() {
            for &v in self.edge(i) {
                for &j in &inc[v as usize] {
                    if j > i {
                        if shared[j] == 0 {
                            touched.push(j);
                        }
                        shared[j] += 1;
                    }
                }
            }
            let bad = touched.iter().copied().filter(|&j| shared[j] >= 2).min();
            for &j in &touched {
                shared[j] = 0;
            }
            touched.clear();
            if let Some(j) = bad {
                return Linearity { linear: false, witness: Some((i, j)) };
            }
        }
        Linearity { linear: true, witness: None }
    }

    pub fn regularity_profile(&self) -> DegreeProfile {
        let degrees = self.degrees();
        let min = degrees.iter().copied().min().unwrap_or(0);
        let max = degrees.iter().copied().max().unwrap_or(0);
        let is_regular = min == max;
        DegreeProfile { degrees, min, max, is_regular, k: is_regular.then_some(min) }
    }

    /// Splits the edge set into perfect matchings.
    ///
    /// Transversal designs in the standard block encoding are split by slope
    /// directly; anything else goes through an exact backtracking search
    /// bounded by `budget`.
    pub fn matching_decomposition(
        &self,
        budget: &Budget,
    ) -> Result<MatchingDecomposition, DecompositionError> {
        if !self.n.is_multiple_of(self.r) {
            return Err(DecompositionError::NotDivisible { n: self.n, r: self.r });
        }
        if self.is_empty() {
            return Ok(MatchingDecomposition { classes: Vec::new() });
        }
        let profile = self.regularity_profile();
        if !profile.is_regular {
            return Err(DecompositionError::NotRegular { min: profile.min, max: profile.max });
        }
        if let Some(classes) = self.slope_classes() {
            return Ok(MatchingDecomposition { classes });
        }
        match self.search_decomposition(budget) {
            Search::Found(classes) => Ok(MatchingDecomposition { classes }),
            Search::Absent => Err(DecompositionError::NoDecomposition),
            Search::Unknown => Err(DecompositionError::BudgetExhausted),
        }
    }

    /// Groups edges by slope when the hypergraph is a transversal design in
    /// block encoding (part `j` = `[j*q, (j+1)*q)`, edge = `{j*q + y + j*m}`).
    fn slope_classes(&self) -> Option<Vec<Vec<usize>>> {
        let q = self.n / self.r;
        let layout = self.layout.as_ref()?;
        if *layout != PartiteLayout::blocks(self.r, q) || q == 0 {
            return None;
        }
        let mut by_slope: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (i, e) in self.edges().enumerate() {
            let y = e[0] as usize;
            let m = (e[1] as usize - q + q - y) % q;
            let is_line = e
                .iter()
                .enumerate()
                .all(|(j, &v)| v as usize == j * q + (y + j * m) % q);
            if !is_line {
                return None;
            }
            by_slope.entry(m).or_default().push(i);
        }
        let classes: Vec<Vec<usize>> = by_slope.into_values().collect();
        classes.iter().all(|c| c.len() == q).then_some(classes)
    }

    fn search_decomposition(&self, budget: &Budget) -> Search<Vec<Vec<usize>>> {
        let inc = self.incidence();
        let mut used = vec![false; self.len()];
        let mut classes = Vec::new();
        match self.decompose_rest(&inc, &mut used, &mut classes, budget) {
            Some(true) => Search::Found(classes),
            Some(false) => Search::Absent,
            None => Search::Unknown,
        }
    }

    // Some(true) = decomposed, Some(false) = impossible, None = out of budget.
    fn decompose_rest(
        &self,
        inc: &[Vec<usize>],
        used: &mut Vec<bool>,
        classes: &mut Vec<Vec<usize>>,
        budget: &Budget,
    ) -> Option<bool> {
        let Some(first) = used.iter().position(|u| !u) else {
            return Some(true);
        };
        let mut covered = vec![false; self.n];
        let mut class = vec![first];
        for &v in self.edge(first) {
            covered[v as usize] = true;
        }
        used[first] = true;
        let r = self.extend_matching(inc, used, &mut covered, &mut class, classes, budget);
        used[first] = false;
        r
    }

    fn extend_matching(
        &self,
        inc: &[Vec<usize>],
        used: &mut Vec<bool>,
        covered: &mut Vec<bool>,
        class: &mut Vec<usize>,
        classes: &mut Vec<Vec<usize>>,
        budget: &Budget,
    ) -> Option<bool> {
        if !budget.charge(1) {
            return None;
        }
        let Some(v) = covered.iter().position(|c| !c) else {
            classes.push(class.clone());
            let r = self.decompose_rest(inc, used, classes, budget);
            if r != Some(true) {
                classes.pop();
            }
            return r;
        };
        for &j in &inc[v] {
            if used[j] || self.edge(j).iter().any(|&w| covered[w as usize]) {
                continue;
            }
            used[j] = true;
            for &w in self.edge(j) {
                covered[w as usize] = true;
            }
            class.push(j);
            let r = self.extend_matching(inc, used, covered, class, classes, budget);
            class.pop();
            for &w in self.edge(j) {
                covered[w as usize] = false;
            }
            used[j] = false;
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }

    /// Checks that `classes` partition the edges into perfect matchings.
    pub fn is_matching_decomposition(&self, classes: &[Vec<usize>]) -> bool {
        let mut seen = vec![false; self.len()];
        for class in classes {
            let mut cover = vec![0u32; self.n];
            for &i in class {
                if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                    return false;
                }
                for &v in self.edge(i) {
                    cover[v as usize] += 1;
                }
            }
            if cover.iter().any(|&c| c != 1) {
                return false;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Result of [`Hypergraph::is_linear`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Linearity {
    pub linear: bool,
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub min: usize,
    pub max: usize,
    pub is_regular: bool,
    /// Common degree when regular.
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingDecomposition {
    pub classes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("r = {r} does not divide n = {n}")]
    NotDivisible { n: usize, r: usize },
    #[error("not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("no decomposition into perfect matchings exists")]
    NoDecomposition,
    #[error("search budget exhausted")]
    BudgetExhausted,
}

/// Vertex id of the point `(part, y)` of a transversal design over `Z_q`
/// (`part` is 0-based).
pub fn transversal_vertex(part: usize, y: u64, q: u64) -> Vertex {
    (part as u64 * q + y % q) as Vertex
}

/// Parses the text format:
///
/// ```text
/// n=<int> r=<int> m=<int>
/// part <j> <v1> <v2> ...      (optional, one per part)
/// e <v1> ... <vr>             (m lines)
/// ```
///
/// `#` starts a comment; blank lines are ignored.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph, HypergraphError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut parts: Vec<(usize, Vec<Vertex>)> = Vec::new();
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let perr = |msg: String| HypergraphError::Parse { line, msg };
        let mut tokens = body.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        match (header, head) {
            (None, _) => {
                let mut fields = HashMap::new();
                for tok in body.split_whitespace() {
                    let (k, v) = tok
                        .split_once('=')
                        .ok_or_else(|| perr(format!("malformed header token `{tok}`")))?;
                    let v: usize =
                        v.parse().map_err(|_| perr(format!("malformed header value `{tok}`")))?;
                    fields.insert(k, v);
                }
                let get = |k: &str| fields.get(k).copied().ok_or_else(|| perr(format!("header lacks `{k}=`")));
                let (n, r, m) = (get("n")?, get("r")?, get("m")?);
                if r < 2 {
                    return Err(perr(format!("uniformity must be at least 2, got {r}")));
                }
                header = Some((n, r, m));
            }
            (Some(_), "part") => {
                let nums = parse_ids(tokens, line)?;
                let (&j, vs) = nums
                    .split_first()
                    .ok_or_else(|| perr("part line needs an index".into()))?;
                parts.push((j as usize, vs.to_vec()));
            }
            (Some((n, r, _)), "e") => {
                let e = parse_ids(tokens, line)?;
                if e.len() != r {
                    return Err(perr(format!("edge has {} vertices, expected {r}", e.len())));
                }
                let mut sorted = e.clone();
                sorted.sort_unstable();
                if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                    return Err(perr(format!("repeated vertex {} in edge", w[0])));
                }
                if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
                    return Err(perr(format!("vertex {v} out of range [0, {n})")));
                }
                edges.push(e);
                edge_lines.push(line);
            }
            (Some(_), other) => return Err(perr(format!("unknown record `{other}`"))),
        }
    }
    let (n, r, m) = header.ok_or(HypergraphError::Parse { line: 0, msg: "missing header".into() })?;
    if edges.len() != m {
        return Err(HypergraphError::Parse {
            line: edge_lines.last().copied().unwrap_or(1),
            msg: format!("header declares m={m} but {} edges were given", edges.len()),
        });
    }
    let h = Hypergraph::new(n, r, &edges).map_err(|e| match e {
        HypergraphError::DuplicateEdge { index, first } => HypergraphError::Parse {
            line: edge_lines[index],
            msg: format!("duplicate edge (first given on line {})", edge_lines[first]),
        },
        other => other,
    })?;
    if parts.is_empty() {
        return Ok(h);
    }
    parts.sort_by_key(|(j, _)| *j);
    let layout = PartiteLayout::new(parts.into_iter().map(|(_, p)| p).collect())?;
    h.with_layout(layout)
}

fn parse_ids<'a>(
    tokens: impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<Vec<Vertex>, HypergraphError> {
    tokens
        .map(|t| {
            t.parse::<Vertex>()
                .map_err(|_| HypergraphError::Parse { line, msg: format!("bad vertex id `{t}`") })
        })
        .collect()
}

/// Canonical text form: header, parts, then edges in lexicographic order.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n={} r={} m={}", h.n(), h.r(), h.len());
    if let Some(layout) = h.layout() {
        for (j, part) in layout.parts().iter().enumerate() {
            let _ = write!(out, "part {j}");
            for v in part {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
    }
    for i in h.canonical_order() {
        out.push('e');
        for v in h.edge(i) {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Hypergraph {
        Hypergraph::new(4, 2, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]).unwrap()
    }

    #[test]
    fn parses_single_edge() {
        let h = read_hypergraph("n=3 r=3 m=1\ne 0 1 2\n").unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.edge(0), &[0, 1, 2]);
    }

    #[test]
    fn rejects_repeated_vertex_with_line_number() {
        let err = read_hypergraph("n=3 r=3 m=1\n# comment\ne 0 0 1\n").unwrap_err();
        match err {
            HypergraphError::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("repeated"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(read_hypergraph("n=3 r=3\ne 0 1 2\n").is_err());
        assert!(read_hypergraph("n=3 r=3 m=1\ne 0 1 3\n").is_err());
        let dup = read_hypergraph("n=4 r=2 m=2\ne 0 1\ne 1 0\n").unwrap_err();
        assert!(matches!(dup, HypergraphError::Parse { line: 3, .. }), "{dup:?}");
        assert!(read_hypergraph("n=4 r=2 m=2\ne 0 1\n").is_err());
        assert!(read_hypergraph("n=4 r=2 m=1\nx 0 1\n").is_err());
    }

    #[test]
    fn canonical_write_sorts_edges() {
        let a = Hypergraph::new(5, 2, [[3, 4], [0, 1], [1, 2]]).unwrap();
        let b = Hypergraph::new(5, 2, [[2, 1], [4, 3], [0, 1]]).unwrap();
        assert_eq!(write_hypergraph(&a), write_hypergraph(&b));
        assert_eq!(write_hypergraph(&a), "n=5 r=2 m=3\ne 0 1\ne 1 2\ne 3 4\n");
        let one = Hypergraph::new(3, 3, [[2, 0, 1]]).unwrap();
        assert_eq!(write_hypergraph(&one), "n=3 r=3 m=1\ne 0 1 2\n");
    }

    #[test]
    fn layout_round_trips() {
        let h = Hypergraph::new(4, 2, [[0, 2], [1, 3]])
            .unwrap()
            .with_layout(PartiteLayout::blocks(2, 2))
            .unwrap();
        let text = write_hypergraph(&h);
        assert!(text.contains("part 0 0 1\npart 1 2 3\n"));
        assert_eq!(read_hypergraph(&text).unwrap(), h);
        assert!(Hypergraph::new(4, 2, [[0, 1]]).unwrap().with_layout(PartiteLayout::blocks(2, 2)).is_err());
    }

    #[test]
    fn linearity() {
        let disjoint = Hypergraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(disjoint.is_linear().linear);
        let bad = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4], [0, 1, 4]]).unwrap();
        assert_eq!(bad.is_linear().witness, Some((0, 2)));
    }

    #[test]
    fn degree_profile() {
        let h = Hypergraph::new(6, 3, [[0, 1, 2]]).unwrap();
        let p = h.regularity_profile();
        assert_eq!(p.degrees, vec![1, 1, 1, 0, 0, 0]);
        assert!(!p.is_regular);
        assert_eq!(p.degrees.iter().sum::<usize>(), 3 * h.len());
    }

    #[test]
    fn k4_one_factorization() {
        let h = k4();
        let d = h.matching_decomposition(&Budget::unlimited()).unwrap();
        assert_eq!(d.classes.len(), 3);
        assert!(h.is_matching_decomposition(&d.classes));
    }

    #[test]
    fn decomposition_errors() {
        let h = Hypergraph::new(5, 2, [[0, 1]]).unwrap();
        assert!(matches!(
            h.matching_decomposition(&Budget::unlimited()),
            Err(DecompositionError::NotDivisible { .. })
        ));
        let path = Hypergraph::new(4, 2, [[0, 1], [1, 2], [2, 3]]).unwrap();
        assert!(matches!(
            path.matching_decomposition(&Budget::unlimited()),
            Err(DecompositionError::NotRegular { .. })
        ));
        // 2-regular but two triangles: no perfect matching at all.
        let triangles =
            Hypergraph::new(6, 2, [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]).unwrap();
        assert_eq!(
            triangles.matching_decomposition(&Budget::unlimited()),
            Err(DecompositionError::NoDecomposition)
        );
    }

    #[test]
    fn relabel_preserves_structure() {
        let h = k4();
        let g = h.relabel(&[3, 2, 1, 0]);
        assert_eq!(g.len(), 6);
        assert!(g.regularity_profile().is_regular);
    }
}
