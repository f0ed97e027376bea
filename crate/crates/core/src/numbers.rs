//! Integer sets avoiding additive patterns: checkers, greedy and Behrend
//! constructions, the A4/A6 restricted sets, Minkowski multipliers and primes.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng as _;

use crate::error::ConstructError;
use crate::rng;

/// Centered representative of `x` modulo `q`, in `(-q/2, q/2]`.
pub fn centered(x: i64, q: u64) -> i64 {
    let q = q as i64;
    let r = x.rem_euclid(q);
    if 2 * r > q {
        r - q
    } else {
        r
    }
}

/// A finite set of integers, optionally read modulo `q` (then stored as
/// centered representatives).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntSet {
    elements: Vec<i64>,
    modulus: Option<u64>,
}

impl IntSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        IntSet { elements, modulus: None }
    }

    pub fn modular(q: u64, elements: impl IntoIterator<Item = i64>) -> Self {
        let mut set = IntSet::new(elements.into_iter().map(|x| centered(x, q)));
        set.modulus = Some(q);
        set
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<i64> {
        self.elements.last().copied()
    }

    /// Residues in `[0, q)`, sorted.
    pub fn residues(&self, q: u64) -> Vec<u64> {
        let mut r: Vec<u64> = self.elements.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn without(&self, x: i64) -> IntSet {
        IntSet {
            elements: self.elements.iter().copied().filter(|&e| e != x).collect(),
            modulus: self.modulus,
        }
    }
}

/// One integer per line, optional `mod=<q>` header, `#` comments.
pub fn read_intset(text: &str) -> Result<IntSet, ConstructError> {
    let mut modulus = None;
    let mut elems = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ConstructError::Parse { line: i + 1, msg };
        if let Some(q) = line.strip_prefix("mod=") {
            if modulus.is_some() || !elems.is_empty() {
                return Err(err("`mod=` must be the first record".into()));
            }
            let q: u64 = q.trim().parse().map_err(|_| err(format!("bad modulus `{q}`")))?;
            if q == 0 {
                return Err(err("modulus must be positive".into()));
            }
            modulus = Some(q);
        } else {
            elems.push(line.parse::<i64>().map_err(|_| err(format!("bad integer `{line}`")))?);
        }
    }
    Ok(match modulus {
        Some(q) => IntSet::modular(q, elems),
        None => IntSet::new(elems),
    })
}

pub fn write_intset(s: &IntSet) -> String {
    let mut out = String::new();
    if let Some(q) = s.modulus {
        let _ = writeln!(out, "mod={q}");
    }
    for x in &s.elements {
        let _ = writeln!(out, "{x}");
    }
    out
}

/// Additive patterns a set may be required to avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// k-term arithmetic progression, `k >= 3`.
    Ap(usize),
    /// `c1*m1 + c2*m2 = (c1+c2)*m3` with `c1, c2 >= 1`, `c1 + c2 <= r`.
    SumFree(usize),
    /// `{x-2a, x-a, x+a, x+2a}`, `a > 0`.
    A4,
    /// `{x-a-b, x-b, x-a, x+a, x+b, x+a+b}`, `a, b > 0`, `a != b`.
    A6,
    /// All differences distinct modulo the set's modulus (or over Z).
    SidonModQ,
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatternKind::Ap(k) => write!(f, "ap{k}"),
            PatternKind::SumFree(r) => write!(f, "sumfree{r}"),
            PatternKind::A4 => write!(f, "a4"),
            PatternKind::A6 => write!(f, "a6"),
            PatternKind::SidonModQ => write!(f, "sidon"),
        }
    }
}

impl std::str::FromStr for PatternKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        let num = |t: &str| t.parse::<usize>().map_err(|_| format!("bad pattern `{s}`"));
        match s.as_str() {
            "a4" => Ok(PatternKind::A4),
            "a6" => Ok(PatternKind::A6),
            "sidon" => Ok(PatternKind::SidonModQ),
            _ => {
                if let Some(k) = s.strip_prefix("ap") {
                    let k = num(k)?;
                    if k < 3 {
                        return Err("ap length must be at least 3".into());
                    }
                    Ok(PatternKind::Ap(k))
                } else if let Some(r) = s.strip_prefix("sumfree") {
                    let r = num(r)?;
                    if r < 2 {
                        return Err("sumfree order must be at least 2".into());
                    }
                    Ok(PatternKind::SumFree(r))
                } else {
                    Err(format!("unknown pattern `{s}`"))
                }
            }
        }
    }
}

/// Exhaustive pattern check. Returns `None` when `s` avoids `kind`, else a
/// violating tuple:
///
/// * `Ap(k)`: the progression;
/// * `SumFree(r)`: `(m1, m2, m3, c1, c2)`;
/// * `A4`: `(x, a)`; `A6`: `(x, a, b)` with `a < b`;
/// * `SidonModQ`: `(a, b, c, d)` with `a - b = c - d`.
pub fn check_pattern(s: &IntSet, kind: PatternKind) -> Option<Vec<i64>> {
    let e = s.elements();
    match kind {
        PatternKind::Ap(k) => {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    let d = b - a;
                    if (2..k as i64).all(|t| s.contains(a + t * d)) {
                        return Some((0..k as i64).map(|t| a + t * d).collect());
                    }
                }
            }
            None
        }
        PatternKind::SumFree(r) => {
            let r = r as i64;
            for &m1 in e {
                for &m2 in e {
                    if m1 == m2 {
                        continue;
                    }
                    for c1 in 1..r {
                        for c2 in 1..=(r - c1) {
                            let num = c1 * m1 + c2 * m2;
                            let den = c1 + c2;
                            if num % den == 0 && s.contains(num / den) {
                                return Some(vec![m1, m2, num / den, c1, c2]);
                            }
                        }
                    }
                }
            }
            None
        }
        PatternKind::A4 => {
            for (i, &u) in e.iter().enumerate() {
                for &w in &e[i + 1..] {
                    let a = w - u;
                    if s.contains(u + 3 * a) && s.contains(u + 4 * a) {
                        return Some(vec![u + 2 * a, a]);
                    }
                }
            }
            None
        }
        PatternKind::A6 => {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    if (v - u) % 2 != 0 {
                        continue;
                    }
                    let x = (u + v) / 2;
                    let a = (v - u) / 2;
                    for &w in e.iter().filter(|&&w| w > x) {
                        let b = w - x;
                        if b != a
                            && s.contains(x - b)
                            && s.contains(x + a + b)
                            && s.contains(x - a - b)
                        {
                            return Some(vec![x, a.min(b), a.max(b)]);
                        }
                    }
                }
            }
            None
        }
        PatternKind::SidonModQ => {
            let mut seen = std::collections::HashMap::new();
            for &a in e {
                for &b in e {
                    if a == b {
                        continue;
                    }
                    let d = match s.modulus() {
                        Some(q) => (a - b).rem_euclid(q as i64),
                        None => a - b,
                    };
                    if let Some((c, dd)) = seen.insert(d, (a, b)) {
                        return Some(vec![c, dd, a, b]);
                    }
                }
            }
            None
        }
    }
}

/// True when `s` avoids every pattern in `kinds`.
pub fn passes_all(s: &IntSet, kinds: &[PatternKind]) -> bool {
    kinds.iter().all(|&k| check_pattern(s, k).is_none())
}

/// Greedy scan that keeps `x` whenever the set stays pattern-free.
///
/// Scans `0..=q`, or the residues `0..q` when `SidonModQ` is requested
/// (the result then carries modulus `q`).
pub fn greedy_pattern_set(q: u64, kinds: &[PatternKind]) -> IntSet {
    let sidon = kinds.contains(&PatternKind::SidonModQ);
    let top = if sidon { q.saturating_sub(1) } else { q };
    let mut member = vec![false; top as usize + 1];
    let mut diffs = vec![false; if sidon { q as usize } else { 0 }];
    let mut elems: Vec<i64> = Vec::new();
    for x in 0..=top as i64 {
        let has = |y: i64| y >= 0 && y <= top as i64 && member[y as usize];
        let ok = kinds.iter().all(|&k| match k {
            PatternKind::SidonModQ => true,
            kind => !closes_pattern(&elems, &has, x, kind),
        });
        if !ok {
            continue;
        }
        if sidon {
            let qi = q as i64;
            let mut fresh: Vec<usize> = Vec::with_capacity(2 * elems.len());
            let mut clash = false;
            for &s in &elems {
                for d in [(x - s).rem_euclid(qi), (s - x).rem_euclid(qi)] {
                    let d = d as usize;
                    if diffs[d] || fresh.contains(&d) {
                        clash = true;
                        break;
                    }
                    fresh.push(d);
                }
                if clash {
                    break;
                }
            }
            if clash {
                continue;
            }
            for d in fresh {
                diffs[d] = true;
            }
        }
        member[x as usize] = true;
        elems.push(x);
    }
    if sidon {
        IntSet::modular(q, elems)
    } else {
        IntSet::new(elems)
    }
}

// Would adding `x` (larger than every element of `elems`) create `kind`?
fn closes_pattern(elems: &[i64], has: &dyn Fn(i64) -> bool, x: i64, kind: PatternKind) -> bool {
    match kind {
        PatternKind::Ap(k) => elems.iter().any(|&s| {
            let d = x - s;
            (2..k as i64).all(|t| has(x - t * d))
        }),
        PatternKind::SumFree(r) => {
            let r = r as i64;
            elems.iter().any(|&s| {
                (1..r).any(|c1| {
                    (1..=(r - c1)).any(|c2| {
                        let num = c1 * x + c2 * s;
                        num % (c1 + c2) == 0 && has(num / (c1 + c2))
                    })
                })
            })
        }
        PatternKind::A4 => elems.iter().any(|&s| {
            let span = x - s;
            span % 4 == 0 && {
                let a = span / 4;
                has(s + a) && has(s + 3 * a)
            }
        }),
        PatternKind::A6 => elems.iter().any(|&s| {
            let span = x - s;
            if span % 2 != 0 {
                return false;
            }
            let c = (x + s) / 2;
            let t = span / 2;
            elems.iter().any(|&w| {
                let a = w - c;
                let b = t - a;
                a > 0 && b > 0 && a != b && has(c - a) && has(c - b) && has(c + b)
            })
        }),
        PatternKind::SidonModQ => false,
    }
}

/// Digit-sphere (Behrend) set in `[0, q]` avoiding `SumFree(r)`.
///
/// Digits lie in `[0, d)` and the base is `r(d-1)+1`, so no combination
/// `c1*m1 + c2*m2` with `c1 + c2 <= r` carries between digits; restricting
/// to one sum-of-squares shell then forbids nontrivial solutions by strict
/// convexity. The best `(d, shell)` is chosen, the result is re-checked, and
/// the verified greedy set is returned instead whenever it is larger.
pub fn behrend_set(q: u64, r: usize) -> IntSet {
    assert!(r >= 2, "sum-free order must be at least 2");
    let greedy = greedy_pattern_set(q, &[PatternKind::SumFree(r)]);
    let digit_set = behrend_shell(q, r).filter(|s| check_pattern(s, PatternKind::SumFree(r)).is_none());
    match digit_set {
        Some(s) if s.len() >= greedy.len() => s,
        _ => greedy,
    }
}

fn behrend_shell(q: u64, r: usize) -> Option<IntSet> {
    let r = r as u64;
    let mut best: Option<(usize, u64, u32, u64)> = None; // (count, d, k, shell)
    let mut d = 2u64;
    loop {
        let base = r * (d - 1) + 1;
        // Largest element with k digits all equal to d-1.
        let mut k = 0u32;
        let mut max_elem = 0u64;
        loop {
            let next = max_elem.checked_mul(base).and_then(|m| m.checked_add(d - 1));
            match next {
                Some(m) if m <= q => {
                    max_elem = m;
                    k += 1;
                }
                _ => break,
            }
        }
        if k < 2 {
            // One digit: every shell is a single point.
            if best.is_none() && k == 1 {
                best = Some((1, d, 1, 0));
            }
            break;
        }
        let shells = shell_counts(d, k);
        if let Some((s, &c)) = shells.iter().enumerate().max_by_key(|&(s, &c)| (c, std::cmp::Reverse(s))) {
            if best.is_none_or(|b| c as usize > b.0) {
                best = Some((c as usize, d, k, s as u64));
            }
        }
        d += 1;
    }
    let (_, d, k, shell) = best?;
    let base = r * (d - 1) + 1;
    let mut elems = Vec::new();
    let mut digits = vec![0u64; k as usize];
    loop {
        if digits.iter().map(|x| x * x).sum::<u64>() == shell {
            let v = digits.iter().rev().fold(0u64, |acc, &x| acc * base + x);
            elems.push(v as i64);
        }
        let mut i = 0;
        while i < digits.len() && digits[i] == d - 1 {
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
        digits[i] += 1;
    }
    Some(IntSet::new(elems))
}

// Number of vectors in [0,d)^k with each sum of squares.
fn shell_counts(d: u64, k: u32) -> Vec<u64> {
    let max = (k as u64 * (d - 1) * (d - 1)) as usize;
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; max + 1];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for x in 0..d {
                let t = s + (x * x) as usize;
                if t <= max {
                    next[t] += c;
                }
            }
        }
        counts = next;
    }
    counts
}

/// AP3-free set refined to avoid A4 and A6: random thinning of a Behrend
/// set with keep probability `|M|^(-2/5)/2`, then deletion of the largest
/// element of every remaining A4 or A6 copy.
pub fn restricted_set(q: u64, seed: u64) -> IntSet {
    restricted_from(&behrend_set(q, 2), seed)
}

/// The thinning and deletion steps of [`restricted_set`] applied to a given
/// AP3-free set.
pub fn restricted_from(m: &IntSet, seed: u64) -> IntSet {
    if m.is_empty() {
        return m.clone();
    }
    let p = (m.len() as f64).powf(-0.4) / 2.0;
    let mut rng = rng::seeded(seed);
    let kept: Vec<i64> = m.elements().iter().copied().filter(|_| rng.random_bool(p)).collect();
    let mut s = IntSet { elements: kept, modulus: m.modulus() };
    loop {
        if let Some(w) = check_pattern(&s, PatternKind::A6) {
            s = s.without(w[0] + w[1] + w[2]);
        } else if let Some(w) = check_pattern(&s, PatternKind::A4) {
            s = s.without(w[0] + 2 * w[1]);
        } else {
            return s;
        }
    }
}

/// Multiplier `alpha` bringing every `alpha * n_i` within `q^(1-1/d)` of 0
/// modulo `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiResult {
    pub alpha: u64,
    pub residues: Vec<i64>,
    pub bound: f64,
}

/// Smallest `alpha` in `1..q` with all centered residues of `alpha * n_i`
/// at most `q^(1-1/d)` in absolute value. The comparison is exact.
pub fn minkowski_alpha(q: u64, vec: &[i64]) -> Option<MinkowskiResult> {
    let d = vec.len() as u32;
    if q < 2 {
        return None;
    }
    let bound = if d == 0 { q as f64 } else { (q as f64).powf(1.0 - 1.0 / d as f64) };
    let threshold = integer_root_bound(q, d);
    (1..q).find_map(|alpha| {
        let residues: Vec<i64> = vec
            .iter()
            .map(|&n| centered(((alpha as i128 * n as i128).rem_euclid(q as i128)) as i64, q))
            .collect();
        residues
            .iter()
            .all(|r| r.unsigned_abs() <= threshold)
            .then_some(MinkowskiResult { alpha, residues, bound })
    })
}

// Largest t with t^d <= q^(d-1).
fn integer_root_bound(q: u64, d: u32) -> u64 {
    if d == 0 {
        return q;
    }
    let target = BigUint::from(q).pow(d - 1);
    let (mut lo, mut hi) = (0u64, q);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if BigUint::from(mid).pow(d) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Largest prime not exceeding `x`.
pub fn largest_prime_leq(x: u64) -> Result<u64, ConstructError> {
    if x < 2 {
        return Err(ConstructError::InvalidParams(format!("no prime is at most {x}")));
    }
    Ok((2..=x).rev().find(|&p| primal::is_prime(p)).expect("2 is prime"))
}

pub fn is_prime(x: u64) -> bool {
    primal::is_prime(x)
}

/// `n choose k` as u128 (saturating is never needed at the sizes used here).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc.to_u128().unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent slow oracle for SumFree(r).
    fn sumfree_oracle(s: &[i64], r: i64) -> bool {
        for &a in s {
            for &b in s {
                for &c in s {
                    for c1 in 1..r {
                        for c2 in 1..=(r - c1) {
                            if !(a == b && b == c) && c1 * a + c2 * b == (c1 + c2) * c {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn centered_representatives() {
        assert_eq!(centered(100, 101), -1);
        assert_eq!(centered(50, 101), 50);
        assert_eq!(centered(4, 8), 4);
        assert_eq!(centered(-4, 8), 4);
        assert_eq!(centered(5, 8), -3);
    }

    #[test]
    fn ap3_free_example() {
        let s = IntSet::new([1, 2, 4, 8, 9]);
        assert_eq!(check_pattern(&s, PatternKind::Ap(3)), None);
        assert!(check_pattern(&IntSet::new([1, 2, 3]), PatternKind::Ap(3)).is_some());
    }

    #[test]
    fn a6_witness_on_symmetric_slopes() {
        let s = IntSet::new([-9, -6, -3, 3, 6, 9]);
        assert_eq!(check_pattern(&s, PatternKind::A6), Some(vec![0, 3, 6]));
    }

    #[test]
    fn a4_witness() {
        let s = IntSet::new([1, 3, 7, 9]);
        assert_eq!(check_pattern(&s, PatternKind::A4), Some(vec![5, 2]));
    }

    #[test]
    fn sumfree_small() {
        let s = IntSet::new([1, 3]);
        assert_eq!(check_pattern(&s, PatternKind::SumFree(4)), None);
        assert!(sumfree_oracle(&[1, 3], 4));
        // 1*1 + 3*5 = 4*4.
        let w = check_pattern(&IntSet::new([1, 4, 5]), PatternKind::SumFree(4)).unwrap();
        assert_eq!(w[3] * w[0] + w[4] * w[1], (w[3] + w[4]) * w[2]);
    }

    #[test]
    fn sidon_witness() {
        let s = IntSet::modular(7, [0, 1, 2]);
        let w = check_pattern(&s, PatternKind::SidonModQ).unwrap();
        assert_eq!((w[0] - w[1]).rem_euclid(7), (w[2] - w[3]).rem_euclid(7));
        assert_eq!(check_pattern(&IntSet::modular(7, [0, 1, 3]), PatternKind::SidonModQ), None);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_pattern_set(9, &[PatternKind::Ap(3)]).elements(), &[0, 1, 3, 4, 9]);
        assert_eq!(greedy_pattern_set(4, &[]).elements(), &[0, 1, 2, 3, 4]);
        let all = [PatternKind::Ap(3), PatternKind::A4, PatternKind::A6];
        assert_eq!(greedy_pattern_set(8, &all).elements(), &[0, 1, 3, 7, 8]);
        let sidon = greedy_pattern_set(101, &[PatternKind::SidonModQ]);
        assert_eq!(sidon.modulus(), Some(101));
        assert!(check_pattern(&sidon, PatternKind::SidonModQ).is_none());
        assert!(sidon.len() >= 7);
    }

    #[test]
    fn greedy_outputs_pass_checkers() {
        for q in [10u64, 57, 200] {
            for kinds in [
                vec![PatternKind::Ap(4)],
                vec![PatternKind::SumFree(3)],
                vec![PatternKind::SumFree(5), PatternKind::A6],
                vec![PatternKind::Ap(3), PatternKind::A4, PatternKind::A6],
            ] {
                let s = greedy_pattern_set(q, &kinds);
                assert!(passes_all(&s, &kinds), "q={q} {kinds:?}");
            }
        }
    }

    #[test]
    fn behrend_outputs() {
        assert!(behrend_set(1, 3).len() <= 2);
        let s = behrend_set(100, 4);
        assert!(check_pattern(&s, PatternKind::SumFree(4)).is_none());
        assert!(sumfree_oracle(s.elements(), 4));
        assert!(check_pattern(&s, PatternKind::A4).is_none());
        let shell = behrend_shell(5000, 3).unwrap();
        assert!(check_pattern(&shell, PatternKind::SumFree(3)).is_none());
        assert!(shell.elements().iter().all(|&x| (0..=5000).contains(&x)));
    }

    #[test]
    fn restricted_small() {
        for seed in 0..10 {
            let s = restricted_set(12, seed);
            assert!(passes_all(&s, &[PatternKind::Ap(3), PatternKind::A4, PatternKind::A6]));
        }
        let single = restricted_from(&IntSet::new([5]), 0);
        assert!(single.len() <= 1);
    }

    #[test]
    fn minkowski_examples() {
        let r = minkowski_alpha(7, &[0, 0]).unwrap();
        assert_eq!((r.alpha, r.residues.clone()), (1, vec![0, 0]));
        let r = minkowski_alpha(7, &[3, 5]).unwrap();
        assert_eq!((r.alpha, r.residues.clone()), (3, vec![2, 1]));
        assert!((r.bound - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn primes() {
        assert_eq!(largest_prime_leq(7).unwrap(), 7);
        assert_eq!(largest_prime_leq(30).unwrap(), 29);
        assert_eq!(largest_prime_leq(100).unwrap(), 97);
        assert!(largest_prime_leq(1).is_err());
    }

    #[test]
    fn intset_text_round_trip() {
        let s = IntSet::modular(11, [0, 3, 10]);
        let text = write_intset(&s);
        assert_eq!(text, "mod=11\n-1\n0\n3\n");
        assert_eq!(read_intset(&text).unwrap(), s);
        assert!(read_intset("1\nx\n").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
    }
}
