//! Value parsers shared by the subcommands.

use std::ops::RangeInclusive;
use std::path::Path;

use gridfree_core::numbers::read_intset;
use gridfree_core::IntSet;

/// `100`, `10^8`, `1e8`, or `unlimited`.
pub fn node_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("unlimited") {
        return Ok(u64::MAX);
    }
    let bad = || format!("`{s}` is not a node count (use e.g. 1000000, 10^8 or 1e8)");
    let pow = |base: &str, exp: &str| -> Result<u64, String> {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_pow(e).ok_or_else(bad)
    };
    if let Some((b, e)) = s.split_once('^') {
        return pow(b, e);
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        return pow("10", e)?.checked_mul(m).ok_or_else(bad);
    }
    s.parse().map_err(|_| bad())
}

/// `A..B`, `A..=B` or a single integer.
pub fn int_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    let range = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..=num(b)?
    } else {
        let v = num(s)?;
        v..=v
    };
    if range.is_empty() {
        return Err(format!("empty range `{s}`"));
    }
    Ok(range)
}

pub fn int_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

/// A slope rule: a named policy, `list:a,b,...` or `file:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slopes {
    Policy(gridfree_core::SlopePolicy),
    List(Vec<i64>),
    File(String),
}

impl Slopes {
    pub fn needs_seed(&self) -> bool {
        matches!(self, Slopes::Policy(gridfree_core::SlopePolicy::Restricted))
    }

    pub fn resolve(&self, q: u64, r: usize, seed: u64) -> anyhow::Result<IntSet> {
        use gridfree_core::construct::slope_set;
        Ok(match self {
            Slopes::Policy(p) => slope_set(*p, q, r, seed),
            Slopes::List(v) => IntSet::new(v.iter().copied()),
            Slopes::File(path) => read_intset(&std::fs::read_to_string(Path::new(path))?)?,
        })
    }
}

pub fn slopes(s: &str) -> Result<Slopes, String> {
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(Slopes::File(path.to_string()));
    }
    if let Some(list) = s.strip_prefix("list:") {
        return int_list(list).map(Slopes::List);
    }
    s.parse().map(Slopes::Policy)
}
