//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p gridfree-core --test acceptance`. Each criterion
//! must hold exactly and finish within its time limit.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gridfree_core::codes::{gt_decode, gt_encode, is_cover_free, is_union_free, superimposed_report, CodeVerdict};
use gridfree_core::construct::{crossing_lines_r3, pg32_sts15, random_classes, recursive_gridfree, sidon_graph, transversal};
use gridfree_core::crossing::enumerate_crossings;
use gridfree_core::detect::{count_config, find_config, has_c4, is_bipartite, validate_witness, ConfigKind};
use gridfree_core::hypergraph::transversal_vertex;
use gridfree_core::linalg::{rank_check, solve_eq17};
use gridfree_core::numbers::{behrend_set, check_pattern, minkowski_alpha, passes_all, restricted_set, IntSet, PatternKind};
use gridfree_core::purge::{purge_classes, Prob};
use gridfree_core::rng::seeded;
use gridfree_core::{Budget, CrossingParamsR3, Hypergraph, Search};
use rand::seq::index::sample;
use rand::Rng;

/// Survivor counts of the exhaustive crossing enumeration (ordered pairs).
const CROSSING_SURVIVORS: [(usize, u64); 2] = [(3, 2), (4, 2)];
const RECURSIVE_SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn absent<T>(s: Search<T>, what: &str) -> Result<(), String> {
    match s {
        Search::Absent => Ok(()),
        Search::Found(_) => Err(format!("{what}: found a copy")),
        Search::Unknown => Err(format!("{what}: search did not finish")),
    }
}

fn unlimited() -> Budget {
    Budget::unlimited()
}

fn c1_linearity() -> Outcome {
    for q in [7u64, 13, 53, 101] {
        for r in [3usize, 4, 5] {
            let all = IntSet::modular(q, 0..q as i64);
            let h = transversal(q, r, &all).map_err(|e| e.to_string())?;
            ensure(h.len() == (q * q) as usize, format!("q={q} r={r}: {} edges", h.len()))?;
            ensure(h.is_linear().linear, format!("q={q} r={r} not linear"))?;
        }
    }
    let h = transversal(8, 3, &IntSet::new([0, 4])).map_err(|e| e.to_string())?;
    let lin = h.is_linear();
    let (a, b) = lin.witness.ok_or("q=8, M={0,4} reported linear")?;
    let shared: BTreeSet<_> = h.edge(a).iter().filter(|v| h.edge(b).contains(v)).copied().collect();
    let expected: BTreeSet<_> = [transversal_vertex(0, 0, 8), transversal_vertex(2, 0, 8)].into();
    ensure(shared == expected, format!("witness edges {a},{b} share {shared:?}"))?;
    Ok(format!("12 prime instances linear; q=8 pair ({a},{b}) shares {shared:?}"))
}

fn c2_gridfree() -> Outcome {
    let h = transversal(101, 4, &IntSet::new(0..7)).map_err(|e| e.to_string())?;
    ensure(h.len() == 707, format!("{} edges", h.len()))?;
    absent(find_config(&h, ConfigKind::Grid(4, 4), &unlimited()), "Grid(4,4)")?;
    Ok("707 edges, no Grid(4,4)".into())
}

fn c3_trianglefree() -> Outcome {
    let m = IntSet::new([1, 3]);
    ensure(check_pattern(&m, PatternKind::SumFree(4)).is_none(), "{1,3} is not 4-sum-free")?;
    let h = transversal(53, 4, &m).map_err(|e| e.to_string())?;
    absent(find_config(&h, ConfigKind::Triangle, &unlimited()), "Triangle")?;
    Ok(format!("{} edges, no triangle", h.len()))
}

fn c4_crossing_witness() -> Outcome {
    let p = CrossingParamsR3 { y: 0, m: 0, a: 1, b: 2, q: 101 };
    let h = crossing_lines_r3(&p).map_err(|e| e.to_string())?;
    let w = find_config(&h, ConfigKind::Grid(3, 3), &unlimited()).found().ok_or("no Grid(3,3)")?;
    ensure(validate_witness(&h, &w), "witness fails validation")?;
    let a: BTreeSet<usize> = w.role_map["A"].iter().copied().collect();
    let fams: [BTreeSet<usize>; 2] = [(0..3).collect(), (3..6).collect()];
    ensure(fams.contains(&a), format!("A-role edges {a:?} are not one line family"))?;
    let slopes: Vec<i64> = p.slopes().into_iter().chain(p.slopes_prime()).collect();
    let (x, a6a, a6b) = (0, 3, 6);
    let pattern: BTreeSet<i64> =
        [x - a6a - a6b, x - a6b, x - a6a, x + a6a, x + a6b, x + a6a + a6b].into_iter().collect();
    ensure(slopes.iter().copied().collect::<BTreeSet<_>>() == pattern, format!("slopes {slopes:?}"))?;
    ensure(check_pattern(&IntSet::new(slopes.clone()), PatternKind::A6).is_some(), "A6 check misses the pattern")?;
    Ok(format!("grid found, slopes {slopes:?} form A6 at (0,3,6)"))
}

fn c5_restricted() -> Outcome {
    let m = restricted_set(101, 1);
    ensure(!m.is_empty(), "empty slope set")?;
    ensure(passes_all(&m, &[PatternKind::Ap(3), PatternKind::A4, PatternKind::A6]), "slope set has a pattern")?;
    let h = transversal(101, 3, &m).map_err(|e| e.to_string())?;
    absent(find_config(&h, ConfigKind::Grid(3, 3), &unlimited()), "Grid(3,3)")?;
    absent(find_config(&h, ConfigKind::Triangle, &unlimited()), "Triangle")?;
    Ok(format!("M = {:?}, {} edges, no grid or triangle", m.elements(), h.len()))
}

fn c6_algebra() -> Outcome {
    for r in 4..=12 {
        let c = rank_check(r).map_err(|e| e.to_string())?;
        ensure(c.matches_closed_form, format!("r={r}: charpoly differs"))?;
        ensure(c.rank == 10, format!("r={r}: rank {}", c.rank))?;
        ensure(c.nullspace_is_shifts, format!("r={r}: nullspace"))?;
        ensure(c.lambda2_identity, format!("r={r}: lambda^2 coefficient"))?;
    }
    Ok("r = 4..12: 13 coefficients, rank 10, nullspace, lambda^2 factorization".into())
}

fn c7_three_lines() -> Outcome {
    let s = solve_eq17();
    ensure(s.dimension == 4, format!("dimension {}", s.dimension))?;
    ensure(s.family_in_nullspace && s.family_spans, "parametrization does not span")?;
    Ok("nullspace dimension 4, spanned by the parametrization".into())
}

fn c8_crossings(r: usize) -> Outcome {
    let e = enumerate_crossings(r).map_err(|e| e.to_string())?;
    ensure(e.all_structured, format!("counterexample:\n{}", e.counterexample.map(|c| c.to_string()).unwrap_or_default()))?;
    let want = CROSSING_SURVIVORS.iter().find(|(k, _)| *k == r).map(|(_, c)| *c);
    ensure(Some(e.survivors) == want, format!("{} survivors, expected {want:?}", e.survivors))?;
    Ok(format!("{} families, {} admissible, {} survivors, all structured", e.families, e.admissible_families, e.survivors))
}

fn c9_sts15() -> Outcome {
    let h = pg32_sts15();
    let grids = count_config(&h, ConfigKind::Grid(3, 3), &unlimited()).map_err(|e| e.to_string())?;
    let pasch = count_config(&h, ConfigKind::Pasch, &unlimited()).map_err(|e| e.to_string())?;
    ensure(grids >= 11, format!("{grids} grids"))?;
    ensure(pasch == 105, format!("{pasch} Pasch configurations"))?;
    Ok(format!("{grids} grids, {pasch} Pasch configurations"))
}

fn code_53() -> Result<Hypergraph, String> {
    transversal(53, 4, &IntSet::new([1, 3])).map_err(|e| e.to_string())
}

fn c10_union_free() -> Outcome {
    let h = code_53()?;
    ensure(h.len() == 106 && h.n() == 212, format!("{} edges on {} vertices", h.len(), h.n()))?;
    absent(is_union_free(&h, 4, &unlimited()), "4-union-free")?;
    absent(is_cover_free(&h, 3, &unlimited()), "3-cover-free")?;
    let rep = superimposed_report(&h, &unlimited());
    ensure(rep.verdict == CodeVerdict::OptimalDesign, format!("verdict {:?}", rep.verdict))?;
    ensure(rep.nk_eq_rt, "nk != rt")?;
    Ok(format!("4-union-free, 3-cover-free, optimal design (k = {:?})", rep.k))
}

fn c11_group_testing() -> Outcome {
    let h = code_53()?;
    let mut rng = seeded(11);
    for trial in 0..1000 {
        let k = rng.random_range(0..=3);
        let mut d = sample(&mut rng, h.len(), k).into_vec();
        d.sort_unstable();
        let got = gt_decode(&gt_encode(&h, &d).map_err(|e| e.to_string())?, &h);
        ensure(got == d, format!("trial {trial}: {d:?} decoded as {got:?}"))?;
    }
    Ok("1000 random defective sets decoded exactly".into())
}

fn c12_recursive() -> Outcome {
    let (h, rep) = recursive_gridfree(52, 4, RECURSIVE_SEED, &unlimited()).map_err(|e| e.to_string())?;
    ensure(rep.complete, "purge incomplete")?;
    ensure(h.is_linear().linear, "not linear")?;
    absent(find_config(&h, ConfigKind::Grid(4, 4), &unlimited()), "Grid(4,4)")?;
    ensure(h.len() >= 169, format!("{} edges < 169", h.len()))?;
    Ok(format!("{} edges, linear, Grid(4,4)-free (seed {RECURSIVE_SEED})", h.len()))
}

fn c13_classes() -> Outcome {
    let kinds = [ConfigKind::PairI2, ConfigKind::G6, ConfigKind::G7, ConfigKind::Grid(3, 3)];
    let p30 = Prob::from_f64(30f64.powf(-4.0 / 3.0) / 2.0).map_err(|e| e.to_string())?;
    let runs: Vec<(u64, Prob, u64)> =
        std::iter::once((5, Prob::ONE, 0)).chain((0..20).map(|s| (30, p30, s))).collect();
    let (mut checked_union, mut sizes) = (0, Vec::new());
    for (n, p, seed) in runs {
        let fam = random_classes(n, p, seed).map_err(|e| e.to_string())?;
        let res = purge_classes(&fam.family, &fam.class_edges, &kinds, &unlimited()).map_err(|e| e.to_string())?;
        let tag = format!("n={n} seed={seed}");
        ensure(res.report.complete, format!("{tag}: incomplete"))?;
        let out = &res.family;
        if !out.is_empty() {
            out.matching_decomposition(&unlimited()).map_err(|e| format!("{tag}: {e}"))?;
        }
        for k in kinds {
            absent(find_config(out, k, &unlimited()), &format!("{tag}: {k}"))?;
        }
        if out.len() <= 40 {
            absent(is_union_free(out, 3, &unlimited()), &format!("{tag}: 3-union-free"))?;
            checked_union += 1;
        }
        sizes.push(out.len());
    }
    Ok(format!("21 runs certified, sizes {sizes:?}, {checked_union} union-free cross-checks"))
}

fn c14_sidon() -> Outcome {
    let (h, _) = sidon_graph(101).map_err(|e| e.to_string())?;
    let prof = h.regularity_profile();
    ensure(prof.is_regular, "not regular")?;
    ensure(is_bipartite(&h).map_err(|e| e.to_string())?, "not bipartite")?;
    ensure(!has_c4(&h).map_err(|e| e.to_string())?, "contains C4")?;
    Ok(format!("{} edges, {}-regular, bipartite, no C4", h.len(), prof.k.unwrap_or(0)))
}

fn c15_numbers() -> Outcome {
    let b = behrend_set(10_000, 2);
    ensure(check_pattern(&b, PatternKind::Ap(3)).is_none(), "Behrend set has a 3-AP")?;
    ensure(b.len() >= 251, format!("Behrend set has {} elements", b.len()))?;
    let q = 10_007u64;
    let mut rng = seeded(15);
    for i in 0..200 {
        let v: Vec<i64> = (0..8).map(|_| rng.random_range(-(q as i64)..q as i64)).collect();
        let m = minkowski_alpha(q, &v).ok_or(format!("instance {i}: no multiplier"))?;
        for (r, n) in m.residues.iter().zip(&v) {
            ensure((r - m.alpha as i64 * n).rem_euclid(q as i64) == 0, format!("instance {i}: residue mismatch"))?;
            ensure((r.unsigned_abs() as f64) <= m.bound, format!("instance {i}: {r} exceeds {}", m.bound))?;
        }
    }
    let mut sets = 0;
    for q in (50..=2000).step_by(50) {
        for seed in 0..3 {
            let s = restricted_set(q, seed);
            ensure(passes_all(&s, &[PatternKind::Ap(3), PatternKind::A4, PatternKind::A6]), format!("q={q} seed={seed}"))?;
            sets += 1;
        }
    }
    Ok(format!("Behrend |S| = {}, 200 Minkowski instances, {sets} restricted sets", b.len()))
}

type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (1, "linearity of prime transversals", 5, Box::new(c1_linearity)),
        (2, "Grid(4,4)-free small-slope transversal", 60, Box::new(c2_gridfree)),
        (3, "triangle-free 4-sum-free transversal", 10, Box::new(c3_trianglefree)),
        (4, "3x3 grid from crossing lines", 5, Box::new(c4_crossing_witness)),
        (5, "restricted slopes: no grid, no triangle", 60, Box::new(c5_restricted)),
        (6, "four-line matrix algebra", 5, Box::new(c6_algebra)),
        (7, "three-line system", 1, Box::new(c7_three_lines)),
        (8, "crossing enumeration r=3", 10, Box::new(|| c8_crossings(3))),
        (8, "crossing enumeration r=4", 600, Box::new(|| c8_crossings(4))),
        (9, "STS(15) grids and Pasch count", 120, Box::new(c9_sts15)),
        (10, "union-free superimposed design", 600, Box::new(c10_union_free)),
        (11, "group testing decode", 60, Box::new(c11_group_testing)),
        (12, "recursive grid-free construction", 600, Box::new(c12_recursive)),
        (13, "parallel-class purge pipeline", 300, Box::new(c13_classes)),
        (14, "Sidon graph", 5, Box::new(c14_sidon)),
        (15, "number theory", 60, Box::new(c15_numbers)),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in &criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > Duration::from_secs(*limit) => Err(format!("over time limit: {msg}")),
            r => r,
        };
        let (tag, msg) = match &res {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!("{tag} [{id:>2}] {name}: {msg} ({:.2} s, limit {limit} s)", took.as_secs_f64());
        failed += res.is_err() as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
