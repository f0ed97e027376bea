use std::sync::atomic::{AtomicU64, Ordering};

/// Node limit shared by the exponential searches.
///
/// A search never reports absence after it ran out of nodes: the three-way
/// [`Search`] result keeps "not found" and "gave up" apart.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Charges `n` nodes; returns false once the limit is crossed.
    #[inline]
    pub fn charge(&self, n: u64) -> bool {
        if self.limit == u64::MAX {
            return true;
        }
        self.used.fetch_add(n, Ordering::Relaxed).saturating_add(n) <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used() > self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Absent,
    Unknown,
}

impl<T> Search<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Search::Absent)
    }

    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Absent => Search::Absent,
            Search::Unknown => Search::Unknown,
        }
    }
}

/// Three-valued property verdict used in reports and certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        }
    }
}
