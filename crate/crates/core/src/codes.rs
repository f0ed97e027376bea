//! Superimposed-code properties and a nonadaptive group-testing harness.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{Budget, Search, Verdict};
use crate::error::CheckError;
use crate::hypergraph::Hypergraph;
use crate::numbers::binomial;
use crate::rng::mix64;

/// Edges as codewords: bit `v` of codeword `i` is set iff `v ∈ E_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeView {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl CodeView {
    pub fn new(h: &Hypergraph) -> Self {
        let words = h.n().div_ceil(64).max(1);
        let mut bits = vec![0u64; words * h.len()];
        for (i, e) in h.edges().enumerate() {
            for &v in e {
                bits[i * words + v as usize / 64] |= 1 << (v % 64);
            }
        }
        CodeView { n: h.n(), words, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len() / self.words
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn codeword(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Bitwise OR of the given codewords.
    pub fn union(&self, idx: impl IntoIterator<Item = usize>) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for i in idx {
            for (o, w) in out.iter_mut().zip(self.codeword(i)) {
                *o |= w;
            }
        }
        out
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.codeword(i).iter().map(|w| w.count_ones() as usize).sum()).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n)
            .map(|v| (0..self.len()).filter(|&i| self.codeword(i)[v / 64] >> (v % 64) & 1 == 1).count())
            .collect()
    }
}

fn hash_words(w: &[u64]) -> u64 {
    w.iter().fold(0x51_7c_c1_b7_27_22_0a_95, |h, &x| mix64(h ^ mix64(x)))
}

/// Number of nonempty subfamilies of size at most `e`.
fn small_subfamilies(t: usize, e: usize) -> u128 {
    (1..=e.min(t)).map(|k| binomial(t as u64, k as u64)).sum()
}

/// Subfamily stored as `e` fields of `bits` bits, each holding `index + 1`.
struct Packer {
    bits: u32,
}

impl Packer {
    fn pack(&self, idx: &[usize]) -> u64 {
        idx.iter().fold(0u64, |acc, &i| (acc << self.bits) | (i as u64 + 1))
    }

    fn unpack(&self, mut key: u64) -> Vec<usize> {
        let mask = (1u64 << self.bits) - 1;
        let mut out = Vec::new();
        while key != 0 {
            out.push((key & mask) as usize - 1);
            key >>= self.bits;
        }
        out.reverse();
        out
    }
}

/// Whether all unions of distinct nonempty subfamilies of size `≤ e` differ.
///
/// `Found((A, B))` is a colliding pair. Every subfamily union is
/// fingerprinted; equal fingerprints are confirmed on the exact unions.
pub fn is_union_free(h: &Hypergraph, e: usize, budget: &Budget) -> Search<(Vec<usize>, Vec<usize>)> {
    let t = h.len();
    let e = e.min(t);
    if e == 0 {
        return Search::Absent;
    }
    let packer = Packer { bits: (usize::BITS - t.leading_zeros()).max(1) };
    let total = small_subfamilies(t, e);
    if packer.bits as usize * e > 64 || total > u32::MAX as u128 || !budget.charge(total as u64) {
        return Search::Unknown;
    }
    let code = CodeView::new(h);
    let mut table: Vec<(u64, u64)> = (0..t)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut stack = vec![first];
            subfamilies_from(&code, &packer, e, &mut stack, &code.union([first]), &mut out);
            out
        })
        .collect();
    table.par_sort_unstable();
    let hit = table.par_chunk_by(|a, b| a.0 == b.0).filter(|g| g.len() > 1).find_map_first(|group| {
        let unions: Vec<Vec<u64>> = group.iter().map(|&(_, k)| code.union(packer.unpack(k))).collect();
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                if unions[i] == unions[j] {
                    return Some((packer.unpack(group[i].1), packer.unpack(group[j].1)));
                }
            }
        }
        None
    });
    match hit {
        Some(pair) => Search::Found(pair),
        None => Search::Absent,
    }
}

fn subfamilies_from(
    code: &CodeView,
    packer: &Packer,
    e: usize,
    stack: &mut Vec<usize>,
    cur: &[u64],
    out: &mut Vec<(u64, u64)>,
) {
    out.push((hash_words(cur), packer.pack(stack)));
    if stack.len() == e {
        return;
    }
    for next in stack.last().unwrap() + 1..code.len() {
        let u: Vec<u64> = cur.iter().zip(code.codeword(next)).map(|(a, b)| a | b).collect();
        stack.push(next);
        subfamilies_from(code, packer, e, stack, &u, out);
        stack.pop();
    }
}

/// Whether no edge lies in the union of `e` other edges.
///
/// With `t ≤ e` edges this asks about all `t − 1` others. `Found((A0, cover))`
/// lists the covered edge and exactly `min(e, t − 1)` distinct other edges
/// whose union contains it (least `A0` first).
pub fn is_cover_free(h: &Hypergraph, e: usize, budget: &Budget) -> Search<(usize, Vec<usize>)> {
    let t = h.len();
    let e = e.min(t.saturating_sub(1));
    if e == 0 {
        return Search::Absent;
    }
    let inc = h.incidence();
    let gave_up = AtomicBool::new(false);
    let hit = (0..t).into_par_iter().find_map_first(|a0| {
        let a = h.edge(a0);
        let mut nbrs: Vec<usize> =
            a.iter().flat_map(|&v| inc[v as usize].iter().copied()).filter(|&f| f != a0).collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        let mut chosen = Vec::new();
        match cover(h, a, &nbrs, e, &mut chosen, budget) {
            Ok(true) => {
                let mut pad: Vec<usize> = chosen.clone();
                for f in 0..t {
                    if pad.len() == e {
                        break;
                    }
                    if f != a0 && !pad.contains(&f) {
                        pad.push(f);
                    }
                }
                pad.sort_unstable();
                Some((a0, pad))
            }
            Ok(false) => None,
            Err(()) => {
                gave_up.store(true, Ordering::Relaxed);
                None
            }
        }
    });
    match hit {
        Some(w) => Search::Found(w),
        None if gave_up.load(Ordering::Relaxed) => Search::Unknown,
        None => Search::Absent,
    }
}

// Branches on the edges through the least uncovered vertex of `a`.
fn cover(
    h: &Hypergraph,
    a: &[u32],
    nbrs: &[usize],
    e: usize,
    chosen: &mut Vec<usize>,
    budget: &Budget,
) -> Result<bool, ()> {
    if !budget.charge(1) {
        return Err(());
    }
    let Some(&v) = a.iter().find(|&&v| !chosen.iter().any(|&f| h.edge(f).binary_search(&v).is_ok())) else {
        return Ok(true);
    };
    if chosen.len() == e {
        return Ok(false);
    }
    for &f in nbrs {
        if chosen.contains(&f) || h.edge(f).binary_search(&v).is_err() {
            continue;
        }
        chosen.push(f);
        if cover(h, a, nbrs, e, chosen, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeVerdict {
    OptimalDesign,
    OptimalCode,
    None,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperimposedReport {
    pub n: usize,
    pub t: usize,
    pub r: usize,
    /// Common degree when regular.
    pub k: Option<usize>,
    pub max_degree: usize,
    /// Edges containing a degree-one vertex.
    pub t0: usize,
    pub linear: bool,
    pub uniform: bool,
    pub regular: bool,
    pub cover_free: Verdict,
    pub union_free: Verdict,
    pub nk_eq_rt: bool,
    /// `⌈nk/r⌉ ≥ t`, evaluated only when `t ≥ n`.
    pub opt_inequality: Option<bool>,
    /// `r(t−t0)+t0 ≤ Σ deg ≤ k(n−t0)+t0`.
    pub degree_chain: bool,
    pub verdict: CodeVerdict,
}

fn verdict_of<T>(s: &Search<T>) -> Verdict {
    match s {
        Search::Found(_) => Verdict::Fail,
        Search::Absent => Verdict::Pass,
        Search::Unknown => Verdict::Unknown,
    }
}

/// Optimal `(r−1)`-superimposed code / optimal `r`-superimposed design check.
pub fn superimposed_report(h: &Hypergraph, budget: &Budget) -> SuperimposedReport {
    let (n, t, r) = (h.n(), h.len(), h.r());
    let prof = h.regularity_profile();
    let linear = h.is_linear().linear;
    let cover_free = verdict_of(&is_cover_free(h, r - 1, budget));
    let union_free = verdict_of(&is_union_free(h, r, budget));
    let deg = h.degrees();
    let t0 = h.edges().filter(|e| e.iter().any(|&v| deg[v as usize] == 1)).count();
    let k = prof.max;
    let sum: usize = deg.iter().sum();
    let degree_chain = r * (t - t0) + t0 <= sum && sum <= k * n.saturating_sub(t0) + t0;
    let opt_inequality = (t >= n).then(|| (n * k).div_ceil(r) >= t);
    let code = Verdict::from_bool(linear && prof.is_regular).and(cover_free);
    let design = code.and(union_free);
    let verdict = match (code, design) {
        (_, Verdict::Pass) => CodeVerdict::OptimalDesign,
        (Verdict::Pass, Verdict::Fail) => CodeVerdict::OptimalCode,
        (Verdict::Fail, _) => CodeVerdict::None,
        (Verdict::Pass, Verdict::Unknown) | (Verdict::Unknown, _) => CodeVerdict::Unknown,
    };
    SuperimposedReport {
        n,
        t,
        r,
        k: prof.k,
        max_degree: k,
        t0,
        linear,
        uniform: true,
        regular: prof.is_regular,
        cover_free,
        union_free,
        nk_eq_rt: n * k == r * t,
        opt_inequality,
        degree_chain,
        verdict,
    }
}

/// OR of the codewords in `d`, one flag per vertex.
pub fn gt_encode(h: &Hypergraph, d: &[usize]) -> Result<Vec<bool>, CheckError> {
    let mut out = vec![false; h.n()];
    for &i in d {
        if i >= h.len() {
            return Err(CheckError::IndexOutOfRange { index: i, len: h.len() });
        }
        for &v in h.edge(i) {
            out[v as usize] = true;
        }
    }
    Ok(out)
}

/// Cover decoder: every edge whose support is positive in `outcome`.
pub fn gt_decode(outcome: &[bool], h: &Hypergraph) -> Vec<usize> {
    (0..h.len())
        .filter(|&i| h.edge(i).iter().all(|&v| outcome.get(v as usize).copied().unwrap_or(false)))
        .collect()
}

/// Hex form of an outcome: vertex `v` is bit `7 - v % 8` of byte `v / 8`.
pub fn outcome_to_hex(outcome: &[bool]) -> String {
    let mut bytes = vec![0u8; outcome.len().div_ceil(8)];
    for (v, _) in outcome.iter().enumerate().filter(|(_, &b)| b) {
        bytes[v / 8] |= 0x80 >> (v % 8);
    }
    hex::encode(bytes)
}

/// Inverse of [`outcome_to_hex`] for an `n`-vertex hypergraph.
pub fn outcome_from_hex(s: &str, n: usize) -> Result<Vec<bool>, CheckError> {
    let bytes = hex::decode(s.trim()).map_err(|e| CheckError::NotApplicable(format!("bad hex outcome: {e}")))?;
    if bytes.len() != n.div_ceil(8) {
        return Err(CheckError::NotApplicable(format!(
            "outcome has {} bytes, expected {} for {n} vertices",
            bytes.len(),
            n.div_ceil(8)
        )));
    }
    let out: Vec<bool> = (0..n).map(|v| bytes[v / 8] & (0x80 >> (v % 8)) != 0).collect();
    if (n..bytes.len() * 8).any(|v| bytes[v / 8] & (0x80 >> (v % 8)) != 0) {
        return Err(CheckError::NotApplicable("outcome sets padding bits".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> Hypergraph {
        Hypergraph::new(9, 3, [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8]]).unwrap()
    }

    // Compares every pair of small subfamilies directly.
    fn brute_union_free(h: &Hypergraph, e: usize) -> bool {
        let code = CodeView::new(h);
        let t = h.len();
        let subs: Vec<Vec<usize>> = (1u64..1 << t)
            .filter(|m| (m.count_ones() as usize) <= e)
            .map(|m| (0..t).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        let unions: Vec<Vec<u64>> = subs.iter().map(|s| code.union(s.iter().copied())).collect();
        (0..subs.len()).all(|i| (i + 1..subs.len()).all(|j| unions[i] != unions[j]))
    }

    #[test]
    fn union_free_examples() {
        let b = Budget::unlimited();
        let star = Hypergraph::new(7, 3, [[0, 1, 2], [0, 3, 4], [0, 5, 6]]).unwrap();
        assert!(is_union_free(&star, 3, &b).is_absent());
        let (a, bb) = is_union_free(&grid3(), 3, &b).found().unwrap();
        let code = CodeView::new(&grid3());
        assert_ne!(a, bb);
        assert_eq!(code.union(a), code.union(bb));
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert!(is_union_free(&single, 5, &b).is_absent());
        assert_eq!(is_union_free(&grid3(), 3, &Budget::new(10)), Search::Unknown);
    }

    #[test]
    fn union_free_matches_brute_force() {
        let pasch = Hypergraph::new(6, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap();
        let path = Hypergraph::new(7, 3, [[0, 1, 2], [2, 3, 4], [4, 5, 6]]).unwrap();
        for h in [grid3(), pasch, path] {
            for e in 1..=4 {
                assert_eq!(is_union_free(&h, e, &Budget::unlimited()).is_absent(), brute_union_free(&h, e));
            }
        }
    }

    #[test]
    fn cover_free_examples() {
        let b = Budget::unlimited();
        let disjoint = Hypergraph::new(9, 3, [[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap();
        assert!(is_cover_free(&disjoint, 2, &b).is_absent());
        let pasch = Hypergraph::new(6, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap();
        assert_eq!(is_cover_free(&pasch, 3, &b), Search::Found((0, vec![1, 2, 3])));
        assert!(is_cover_free(&pasch.subfamily(&[0, 1, 2]), 3, &b).is_absent());
        let small = Hypergraph::new(6, 3, [[0, 3, 4], [1, 2, 5], [1, 3, 4]]).unwrap();
        assert_eq!(is_cover_free(&small, 3, &b), Search::Found((2, vec![0, 1])));
        // A 2-cover is padded to three distinct edges.
        let h = Hypergraph::new(7, 3, [[0, 1, 2], [0, 1, 3], [2, 4, 5], [4, 5, 6]]).unwrap();
        let (a0, cover) = is_cover_free(&h, 3, &b).found().unwrap();
        assert_eq!((a0, cover.len()), (0, 3));
    }

    #[test]
    fn chain_of_properties() {
        let pasch = Hypergraph::new(6, 3, [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]]).unwrap();
        let b = Budget::unlimited();
        for h in [grid3(), pasch] {
            for e in 1..4 {
                let cf = is_cover_free(&h, e, &b).is_absent();
                let uf = is_union_free(&h, e, &b).is_absent();
                let cf1 = is_cover_free(&h, e - 1, &b).is_absent();
                assert!(!cf || uf);
                assert!(!uf || cf1);
            }
        }
    }

    #[test]
    fn report_on_singletons_and_grid() {
        let singles = Hypergraph::new(4, 2, [[0, 1], [2, 3]]).unwrap();
        let rep = superimposed_report(&singles, &Budget::unlimited());
        assert_eq!(rep.t0, rep.t);
        assert!(rep.degree_chain);
        assert_eq!(rep.verdict, CodeVerdict::OptimalDesign);
        let rep = superimposed_report(&grid3(), &Budget::unlimited());
        assert_eq!(rep.k, Some(2));
        assert!(rep.nk_eq_rt);
        assert_eq!(rep.cover_free, Verdict::Pass);
        assert_eq!(rep.union_free, Verdict::Fail);
        assert_eq!(rep.verdict, CodeVerdict::OptimalCode);
    }

    #[test]
    fn encode_decode() {
        let h = grid3();
        assert_eq!(gt_encode(&h, &[]).unwrap(), vec![false; 9]);
        assert!(gt_decode(&[false; 9], &h).is_empty());
        let one = gt_encode(&h, &[4]).unwrap();
        assert_eq!(one.iter().filter(|&&b| b).count(), 3);
        assert_eq!(gt_decode(&one, &h), vec![4]);
        let two = gt_encode(&h, &[0, 1]).unwrap();
        assert_eq!(two.iter().filter(|&&b| b).count(), 6);
        assert!(gt_encode(&h, &[6]).is_err());
        let hx = outcome_to_hex(&two);
        assert_eq!(hx, "fc00");
        assert_eq!(outcome_from_hex(&hx, 9).unwrap(), two);
        assert!(outcome_from_hex("fc40", 9).is_err());
        assert!(outcome_from_hex("zz", 9).is_err());
    }
}
