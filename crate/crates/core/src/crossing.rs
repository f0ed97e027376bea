//! Crossing polyline systems over an `r × r` point grid.
//!
//! A polyline is the sequence of its row positions, one per column, with
//! row 1 at the top. All checks are combinatorial on these sequences.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::detect::{ConfigKind, ConfigWitness};
use crate::error::AlgebraError;
use crate::hypergraph::Hypergraph;
use crate::linalg::Q;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingSystem {
    pub r: usize,
    /// Row sequences (1-based) of the polylines of `P`.
    pub p: Vec<Vec<usize>>,
    pub q: Vec<Vec<usize>>,
    /// Exact heights `p_y[k][c]`, `q_y[k][c]`, if the system came from lines.
    #[serde(skip)]
    pub coords: Option<(Heights, Heights)>,
}

type Heights = Vec<Vec<Q>>;

fn malformed(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Malformed(msg.into())
}

impl CrossingSystem {
    pub fn new(r: usize, p: Vec<Vec<usize>>, q: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let s = CrossingSystem { r, p, q, coords: None };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if self.r == 0 {
            return Err(malformed("r must be positive"));
        }
        for (k, line) in self.p.iter().chain(&self.q).enumerate() {
            if line.len() != self.r {
                return Err(malformed(format!("polyline {} has {} points, expected {}", k + 1, line.len(), self.r)));
            }
            if let Some(&bad) = line.iter().find(|&&i| i == 0 || i > self.r) {
                return Err(malformed(format!("polyline {} uses row {bad} outside 1..={}", k + 1, self.r)));
            }
        }
        Ok(())
    }

    /// The system spanned by the lines `y + x·m`, `x = 0..r`, of two
    /// families. Every column must carry the same `r` distinct heights in
    /// both families.
    pub fn from_lines(p: &[(Q, Q)], q: &[(Q, Q)]) -> Result<Self, AlgebraError> {
        let r = p.len();
        if r == 0 || q.len() != r {
            return Err(malformed(format!("families have {} and {} lines", p.len(), q.len())));
        }
        let heights = |fam: &[(Q, Q)]| -> Vec<Vec<Q>> {
            fam.iter()
                .map(|(y, m)| (0..r).map(|x| y + m * Q::from_integer((x as i64).into())).collect())
                .collect()
        };
        let (hp, hq) = (heights(p), heights(q));
        let mut rows_p = vec![vec![0; r]; r];
        let mut rows_q = vec![vec![0; r]; r];
        for c in 0..r {
            let mut col: Vec<&Q> = hp.iter().map(|l| &l[c]).collect();
            col.sort_unstable_by(|a, b| b.cmp(a));
            col.dedup();
            if col.len() != r {
                return Err(malformed(format!("column {} has coinciding points", c + 1)));
            }
            let mut other: Vec<&Q> = hq.iter().map(|l| &l[c]).collect();
            other.sort_unstable_by(|a, b| b.cmp(a));
            if other != col {
                return Err(malformed(format!("families meet column {} in different points", c + 1)));
            }
            let row_of = |v: &Q| col.iter().position(|w| *w == v).unwrap() + 1;
            for k in 0..r {
                rows_p[k][c] = row_of(&hp[k][c]);
                rows_q[k][c] = row_of(&hq[k][c]);
            }
        }
        let mut s = CrossingSystem::new(r, rows_p, rows_q)?;
        s.coords = Some((hp, hq));
        Ok(s)
    }

    /// Lifts a grid witness of a transversal family over `Z_q` (vertex
    /// `j·q + y`) to integer lines: the first `A` line is pinned near zero,
    /// every `B` line at its meeting point with it, and every other `A`
    /// line at its meeting point with the first `B` line.
    pub fn from_grid_witness(h: &Hypergraph, w: &ConfigWitness, q: u64) -> Result<Self, AlgebraError> {
        let r = h.r();
        if w.kind != ConfigKind::Grid(r, r) {
            return Err(malformed(format!("witness is {}, expected Grid({r},{r})", w.kind)));
        }
        let role = |name: &str| w.role_map.get(name).cloned().unwrap_or_default();
        let (a, b) = (role("A"), role("B"));
        if a.len() != r || b.len() != r || q == 0 {
            return Err(malformed("witness does not have r lines per family"));
        }
        let qi = q as i64;
        let centered = |x: i64| {
            let v = x.rem_euclid(qi);
            if 2 * v > qi { v - qi } else { v }
        };
        let residues = |e: usize| -> Result<Vec<i64>, AlgebraError> {
            h.edge(e)
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let v = i64::from(v);
                    if v / qi != j as i64 {
                        Err(malformed(format!("edge {e} is not transversal over blocks of size {q}")))
                    } else {
                        Ok(v % qi)
                    }
                })
                .collect()
        };
        // (column-0 residue, slope residue)
        let line = |e: usize| -> Result<(i64, i64), AlgebraError> {
            let res = residues(e)?;
            let m = if r > 1 { (res[1] - res[0]).rem_euclid(qi) } else { 0 };
            if res.iter().enumerate().any(|(j, &v)| (res[0] + j as i64 * m).rem_euclid(qi) != v) {
                return Err(malformed(format!("edge {e} is not a line")));
            }
            Ok((res[0], centered(m)))
        };
        let la: Vec<(i64, i64)> = a.iter().map(|&e| line(e)).collect::<Result<_, _>>()?;
        let lb: Vec<(i64, i64)> = b.iter().map(|&e| line(e)).collect::<Result<_, _>>()?;
        let meet_col = |x: (i64, i64), y: (i64, i64)| -> Result<i64, AlgebraError> {
            (0..r as i64)
                .find(|&j| (x.0 + j * x.1 - y.0 - j * y.1).rem_euclid(qi) == 0)
                .ok_or_else(|| malformed("two grid lines do not meet"))
        };
        // Pin `other` so that it passes through `base`'s lifted value at their meeting column.
        let pin = |base: (i64, i64), other: (i64, i64)| -> Result<(i64, i64), AlgebraError> {
            let j = meet_col(base, other)?;
            let v = base.0 + j * base.1;
            Ok((v - j * other.1, other.1))
        };
        let a0 = (centered(la[0].0), la[0].1);
        let lifted_b: Vec<(i64, i64)> = lb.iter().map(|&l| pin(a0, l)).collect::<Result<_, _>>()?;
        let mut lifted_a = vec![a0];
        for &l in &la[1..] {
            lifted_a.push(pin(lifted_b[0], l)?);
        }
        let to_q = |v: &[(i64, i64)]| -> Vec<(Q, Q)> {
            v.iter().map(|&(y, m)| (Q::from_integer(y.into()), Q::from_integer(m.into()))).collect()
        };
        CrossingSystem::from_lines(&to_q(&lifted_a), &to_q(&lifted_b))
            .map_err(|e| malformed(format!("grid does not lift to the integers: {e}")))
    }

    fn all_lines(&self) -> impl Iterator<Item = (&'static str, usize, &Vec<usize>)> {
        self.p
            .iter()
            .enumerate()
            .map(|(k, l)| ("P", k, l))
            .chain(self.q.iter().enumerate().map(|(k, l)| ("R", k, l)))
    }
}

pub fn read_crossing(text: &str) -> Result<CrossingSystem, AlgebraError> {
    let mut r = None;
    let mut fams: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let err = |msg: String| AlgebraError::Parse { line: no + 1, msg };
        if line.is_empty() {
            continue;
        }
        if r.is_none() {
            let v = line
                .strip_prefix("r=")
                .ok_or_else(|| err(format!("expected `r=<int>`, found `{line}`")))?;
            r = Some(v.trim().parse::<usize>().map_err(|e| err(format!("bad r: {e}")))?);
            continue;
        }
        if line == "--" {
            fams.push(Vec::new());
            continue;
        }
        let rows = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| err(format!("bad row `{t}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        fams.last_mut().unwrap().push(rows);
    }
    let r = r.ok_or_else(|| AlgebraError::Parse { line: 1, msg: "missing `r=` header".into() })?;
    if fams.len() != 2 {
        return Err(malformed(format!("expected two families separated by `--`, found {}", fams.len())));
    }
    let q = fams.pop().unwrap();
    let p = fams.pop().unwrap();
    CrossingSystem::new(r, p, q)
}

pub fn write_crossing(s: &CrossingSystem) -> String {
    s.to_string()
}

impl fmt::Display for CrossingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |l: &Vec<usize>| l.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "r={}", self.r)?;
        for l in &self.p {
            writeln!(f, "{}", line(l))?;
        }
        writeln!(f, "--")?;
        for l in &self.q {
            writeln!(f, "{}", line(l))?;
        }
        Ok(())
    }
}

impl FromStr for CrossingSystem {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        read_crossing(s)
    }
}

/// How two polylines meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Meet {
    /// Number of common points, and for exactly one common vertex, whether
    /// the two cross there.
    Finite { points: usize, crossing: bool },
    /// They share a segment.
    Infinite,
}

fn meet(a: &[usize], b: &[usize]) -> Meet {
    let d: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x as i64 - y as i64).collect();
    if d.windows(2).any(|w| w[0] == 0 && w[1] == 0) {
        return Meet::Infinite;
    }
    let zeros: Vec<usize> = (0..d.len()).filter(|&c| d[c] == 0).collect();
    let swaps = d.windows(2).filter(|w| w[0] * w[1] < 0).count();
    let points = zeros.len() + swaps;
    let crossing = match zeros.as_slice() {
        &[c] if points == 1 && c > 0 && c + 1 < d.len() => d[c - 1].signum() != d[c + 1].signum(),
        _ => true,
    };
    Meet::Finite { points, crossing }
}

/// Per-axiom outcome of [`crossing_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    /// Coordinates, when present, order the rows from the top.
    pub coords_consistent: Option<bool>,
    /// First violation of each failing axiom.
    pub failures: BTreeMap<String, String>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4 && self.coords_consistent != Some(false)
    }
}

pub fn crossing_verify(s: &CrossingSystem) -> Result<AxiomReport, AlgebraError> {
    s.validate()?;
    let r = s.r;
    let mut failures = BTreeMap::new();
    let c1 = s.p.len() == r && s.q.len() == r;
    if !c1 {
        failures.insert("C1".into(), format!("family sizes {} and {}, expected {r}", s.p.len(), s.q.len()));
    }
    let mut c2 = true;
    for (name, fam) in [("P", &s.p), ("R", &s.q)] {
        for c in 0..r {
            let mut rows: Vec<usize> = fam.iter().map(|l| l[c]).collect();
            rows.sort_unstable();
            if rows != (1..=r).collect::<Vec<_>>() {
                if c2 {
                    failures.insert("C2".into(), format!("{name} does not cover column {}", c + 1));
                }
                c2 = false;
            }
        }
    }
    let lines: Vec<_> = s.all_lines().collect();
    let (mut c3, mut c4) = (true, true);
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (ni, ki, a) = lines[i];
            let (nj, kj, b) = lines[j];
            let who = || format!("{ni}{} and {nj}{}", ki + 1, kj + 1);
            match meet(a, b) {
                Meet::Infinite => {
                    if c3 {
                        failures.insert("C3".into(), format!("{} share a segment", who()));
                    }
                    c3 = false;
                }
                Meet::Finite { points, crossing } => {
                    if points > 1 {
                        if c3 {
                            failures.insert("C3".into(), format!("{} meet {points} times", who()));
                        }
                        c3 = false;
                    } else if !crossing {
                        if c4 {
                            failures.insert("C4".into(), format!("{} touch without crossing", who()));
                        }
                        c4 = false;
                    }
                }
            }
        }
    }
    let coords_consistent = s.coords.as_ref().map(|(hp, hq)| {
        (0..r).all(|c| {
            let mut col: Vec<(usize, &Q)> =
                s.p.iter().zip(hp).chain(s.q.iter().zip(hq)).map(|(l, h)| (l[c], &h[c])).collect();
            col.sort();
            col.windows(2).all(|w| if w[0].0 == w[1].0 { w[0].1 == w[1].1 } else { w[0].1 > w[1].1 })
        })
    });
    if coords_consistent == Some(false) {
        failures.insert("coords".into(), "row order disagrees with heights".into());
    }
    Ok(AxiomReport { c1, c2, c3, c4, coords_consistent, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathRole {
    /// `Q_{1,1}, Q_{2,2}, …, Q_{r,r}`.
    MainDiagonal,
    /// `Q_{r,1}, Q_{r−1,2}, …, Q_{1,r}`.
    AntiDiagonal,
    /// Rises from `Q_{j,1}` to the top row, runs along it to column `j+1`, then descends.
    Top(usize),
    /// Descends from `Q_{j,1}` to the bottom row, runs along it, then rises.
    Bottom(usize),
}

impl fmt::Display for PathRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathRole::MainDiagonal => write!(f, "main-diagonal"),
            PathRole::AntiDiagonal => write!(f, "anti-diagonal"),
            PathRole::Top(j) => write!(f, "top({j})"),
            PathRole::Bottom(j) => write!(f, "bottom({j})"),
        }
    }
}

impl PathRole {
    /// Row sequence (1-based) of this path in the `r × r` grid.
    pub fn rows(&self, r: usize) -> Vec<usize> {
        (1..=r)
            .map(|c| match *self {
                PathRole::MainDiagonal => c,
                PathRole::AntiDiagonal => r + 1 - c,
                PathRole::Top(j) if c <= j => j + 1 - c,
                PathRole::Top(j) => c - j,
                PathRole::Bottom(j) if c + j <= r + 1 => j + c - 1,
                PathRole::Bottom(j) => 2 * r + 2 - j - c,
            })
            .collect()
    }

    /// All `2r` paths of the structure.
    pub fn all(r: usize) -> Vec<PathRole> {
        let mut v = vec![PathRole::MainDiagonal, PathRole::AntiDiagonal];
        v.extend((1..r).map(PathRole::Top));
        v.extend((2..=r).map(PathRole::Bottom));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureMatch {
    pub p_roles: Vec<PathRole>,
    pub r_roles: Vec<PathRole>,
    /// `R` holds `top(1)`, so the labels are exchanged relative to the
    /// reference picture.
    pub swapped: bool,
}

/// Matches a crossing system against the unique two-diagonal, top-path,
/// bottom-path structure.
pub fn crossing_structure_match(s: &CrossingSystem) -> Result<StructureMatch, AlgebraError> {
    let rep = crossing_verify(s)?;
    if !rep.passes() {
        let (ax, why) = rep.failures.iter().next().map(|(a, w)| (a.clone(), w.clone())).unwrap_or_default();
        return Err(AlgebraError::Precondition(format!("{ax}: {why}")));
    }
    structure_of(s).map_err(AlgebraError::StructureMismatch)
}

fn structure_of(s: &CrossingSystem) -> Result<StructureMatch, String> {
    let r = s.r;
    let by_rows: HashMap<Vec<usize>, PathRole> = PathRole::all(r).into_iter().map(|p| (p.rows(r), p)).collect();
    let roles = |fam: &[Vec<usize>], name: &str| -> Result<Vec<PathRole>, String> {
        fam.iter()
            .enumerate()
            .map(|(k, l)| by_rows.get(l).copied().ok_or_else(|| format!("{name}{} {l:?} is not a structure path", k + 1)))
            .collect()
    };
    let (pr, rr) = (roles(&s.p, "P")?, roles(&s.q, "R")?);
    let mut family: BTreeMap<PathRole, bool> = BTreeMap::new();
    for (&role, in_p) in pr.iter().map(|x| (x, true)).chain(rr.iter().map(|x| (x, false))) {
        if family.insert(role, in_p).is_some() {
            return Err(format!("{role} appears twice"));
        }
    }
    // Top envelope edges belong to the top paths, bottom ones to the bottom paths.
    for j in 1..r.saturating_sub(1) {
        if family[&PathRole::Top(j)] == family[&PathRole::Top(j + 1)] {
            return Err(format!("top envelope edges {j} and {} lie in the same family", j + 1));
        }
        if family[&PathRole::Bottom(j + 1)] == family[&PathRole::Bottom(j + 2)] {
            return Err(format!("bottom envelope edges of bottom({}) and bottom({}) lie in the same family", j + 1, j + 2));
        }
    }
    // Owner family of each segment (column, from-row, to-row).
    let mut owner: HashMap<(usize, usize, usize), bool> = HashMap::new();
    for (l, in_p) in s.p.iter().map(|l| (l, true)).chain(s.q.iter().map(|l| (l, false))) {
        for c in 0..r - 1 {
            owner.insert((c, l[c], l[c + 1]), in_p);
        }
    }
    for c in 0..r.saturating_sub(1) {
        for i in 1..r {
            let down = owner.get(&(c, i, i + 1));
            let up = owner.get(&(c, i + 1, i));
            match (down, up) {
                (Some(d), Some(u)) if d == u => {}
                (Some(_), Some(_)) => {
                    return Err(format!("crossing diagonals between rows {i}, {} after column {} differ", i + 1, c + 1))
                }
                _ => return Err(format!("diagonal between rows {i}, {} after column {} unused", i + 1, c + 1)),
            }
        }
    }
    Ok(StructureMatch { swapped: !family[&PathRole::Top(1)] && r > 1, p_roles: pr, r_roles: rr })
}

/// Consecutive rows differ by at most one.
pub fn steps_are_unit(line: &[usize]) -> bool {
    line.windows(2).all(|w| w[0].abs_diff(w[1]) <= 1)
}

/// A path starting in row `a` ends in row `r−a`, `r−a+1` or `r−a+2`.
pub fn endpoint_rule(r: usize, line: &[usize]) -> bool {
    let (a, b) = (line[0] as i64, *line.last().unwrap() as i64);
    let r = r as i64;
    (r - a..=r - a + 2).contains(&b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub r: usize,
    /// Covering families, `(r!)^(r−1)`.
    pub families: u64,
    /// Families whose own members pairwise satisfy C3 and C4.
    pub admissible_families: u64,
    /// Ordered pairs `(P, R)` satisfying C1–C4.
    pub survivors: u64,
    /// Every survivor has the expected structure.
    pub all_structured: bool,
    pub counterexample: Option<CrossingSystem>,
}

pub const MAX_ENUMERATION_R: usize = 4;

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }
    heap(r, &mut cur, &mut out);
    out.sort();
    out
}

/// Exhaustive search over all pairs of covering families for `r ≤ 4`.
pub fn enumerate_crossings(r: usize) -> Result<Enumeration, AlgebraError> {
    if !(2..=MAX_ENUMERATION_R).contains(&r) {
        return Err(AlgebraError::InvalidParams(format!("r must be in 2..={MAX_ENUMERATION_R}, got {r}")));
    }
    // Polylines as base-r indices of their 0-based row sequences.
    let total = r.pow(r as u32);
    let rows_of = |mut idx: usize| -> Vec<usize> {
        let mut v = vec![0; r];
        for c in (0..r).rev() {
            v[c] = idx % r + 1;
            idx /= r;
        }
        v
    };
    let lines: Vec<Vec<usize>> = (0..total).map(rows_of).collect();
    let words = total.div_ceil(64);
    let ok: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .map(|a| {
            let mut mask = vec![0u64; words];
            for b in 0..total {
                if a != b && matches!(meet(&lines[a], &lines[b]), Meet::Finite { points: 0 | 1, crossing: true }) {
                    mask[b / 64] |= 1 << (b % 64);
                }
            }
            mask
        })
        .collect();
    let bit = |m: &[u64], b: usize| m[b / 64] >> (b % 64) & 1 == 1;

    // Family: polyline k starts in row k and follows one permutation per step.
    let perms = permutations(r);
    let mut seqs: Vec<Vec<Vec<usize>>> = vec![(1..=r).map(|k| vec![k]).collect()];
    for _ in 1..r {
        seqs = seqs
            .iter()
            .flat_map(|f| {
                perms.iter().map(move |p| {
                    f.iter().zip(p).map(|(l, &to)| l.iter().copied().chain([to + 1]).collect()).collect()
                })
            })
            .collect();
    }
    let index_of = |l: &[usize]| l.iter().fold(0, |acc, &i| acc * r + i - 1);
    let families: Vec<Vec<usize>> = seqs.iter().map(|f| f.iter().map(|l| index_of(l)).collect()).collect();
    let family_count = families.len() as u64;
    let admissible: Vec<(Vec<usize>, Vec<u64>)> = families
        .into_par_iter()
        .filter(|f| (0..r).all(|i| (i + 1..r).all(|j| bit(&ok[f[i]], f[j]))))
        .map(|f| {
            let mut mask = vec![!0u64; words];
            for &a in &f {
                for (m, o) in mask.iter_mut().zip(&ok[a]) {
                    *m &= o;
                }
            }
            (f, mask)
        })
        .collect();

    let (survivors, bad) = admissible
        .par_iter()
        .map(|(fp, mask)| {
            let mut count = 0u64;
            let mut bad = None;
            for (fr, _) in &admissible {
                if fr.iter().all(|&b| bit(mask, b)) {
                    count += 1;
                    let s = CrossingSystem {
                        r,
                        p: fp.iter().map(|&a| lines[a].clone()).collect(),
                        q: fr.iter().map(|&b| lines[b].clone()).collect(),
                        coords: None,
                    };
                    if bad.is_none() && structure_of(&s).is_err() {
                        bad = Some(s);
                    }
                }
            }
            (count, bad)
        })
        .reduce(|| (0, None), |(c1, b1), (c2, b2)| (c1 + c2, b1.or(b2)));
    Ok(Enumeration {
        r,
        families: family_count,
        admissible_families: admissible.len() as u64,
        survivors,
        all_structured: bad.is_none(),
        counterexample: bad,
    })
}
