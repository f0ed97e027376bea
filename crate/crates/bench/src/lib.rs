//! Benchmark fixtures.

use gridfree_core::construct::{pg32_sts15, slope_set};
use gridfree_core::{transversal, Hypergraph, SlopePolicy};

/// Transversal family over `Z_q` with the small-slope rule.
pub fn small_slopes(q: u64, r: usize) -> Hypergraph {
    transversal(q, r, &slope_set(SlopePolicy::Small, q, r, 0)).expect("valid parameters")
}

pub fn sts15() -> Hypergraph {
    pg32_sts15()
}
