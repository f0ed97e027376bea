use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use gridfree_core::codes::{outcome_from_hex, outcome_to_hex, CodeVerdict};
use gridfree_core::construct::{pg32_sts15, random_classes, recursive_gridfree, sidon_graph};
use gridfree_core::crossing::read_crossing;
use gridfree_core::linalg::rank_check;
use gridfree_core::numbers::{
    behrend_set, check_pattern, greedy_pattern_set, largest_prime_leq, minkowski_alpha, read_intset, restricted_set,
    write_intset,
};
use gridfree_core::purge::{purge_classes, purge_edges, random_avoidance_construct};
use gridfree_core::rng::seeded;
use gridfree_core::{
    certify, count_config, crossing_structure_match, crossing_verify, enumerate_crossings, gt_decode, gt_encode,
    read_hypergraph, superimposed_report, write_hypergraph, AlgebraError, Budget, Certificate, Hypergraph, Verdict,
};

use crate::{Cli, Codes, Command, Construct, Crossing, Global, Gt, Numbers};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

struct Ctx {
    global: Global,
    budget: Budget,
}

impl Ctx {
    fn max_nodes(&self) -> Option<u64> {
        (self.global.max_nodes != u64::MAX).then_some(self.global.max_nodes)
    }

    /// Writes `v` to `--json`, if given.
    fn json(&self, v: &Value) -> Result<()> {
        if let Some(path) = &self.global.json {
            emit(Some(path), &(serde_json::to_string_pretty(v)? + "\n"))?;
        }
        Ok(())
    }

    /// Writes `v` to `--json`, or to stdout without it.
    fn json_or_stdout(&self, v: &Value) -> Result<()> {
        let text = serde_json::to_string_pretty(v)? + "\n";
        emit(self.global.json.as_ref(), &text)
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_hypergraph(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn run(cli: Cli) -> Result<u8> {
    let budget = if cli.global.max_nodes == u64::MAX { Budget::unlimited() } else { Budget::new(cli.global.max_nodes) };
    let ctx = Ctx { global: cli.global, budget };
    match cli.command {
        Command::Construct(c) => construct(&ctx, c),
        Command::Verify { input, props } => {
            let h = read_input(&input)?;
            let params = json!({"input": input, "n": h.n(), "r": h.r(), "edges": h.len(), "max_nodes": ctx.max_nodes()});
            let certs = certify(&h, &props, &ctx.budget, &params, None)?;
            for c in &certs {
                eprintln!("{}: {:?}{}", c.property, c.verdict, c.witness.as_ref().map(|w| format!(" witness {w:?}")).unwrap_or_default());
            }
            ctx.json_or_stdout(&serde_json::to_value(&certs)?)?;
            Ok(exit_for(gridfree_core::cert::overall(&certs)))
        }
        Command::Count { input, kind } => {
            let h = read_input(&input)?;
            let start = Instant::now();
            let (verdict, count) = match count_config(&h, kind, &ctx.budget) {
                Ok(c) => (Verdict::Pass, Some(c)),
                Err(gridfree_core::CheckError::BudgetExhausted(_)) => (Verdict::Unknown, None),
                Err(e) => return Err(e.into()),
            };
            match count {
                Some(c) => println!("{c}"),
                None => eprintln!("budget exhausted before counting finished"),
            }
            let cert = Certificate {
                property: format!("count:{kind}"),
                verdict,
                witness: None,
                role_map: None,
                params: json!({"input": input, "kind": kind.to_string(), "count": count, "max_nodes": ctx.max_nodes()}),
                seed: None,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            ctx.json(&serde_json::to_value(&cert)?)?;
            Ok(exit_for(verdict))
        }
        Command::Purge { input, output, avoid, by_class } => {
            let h = read_input(&input)?;
            let (family, report) = if by_class {
                let dec = h.matching_decomposition(&ctx.budget).context("decomposing into parallel classes")?;
                let res = purge_classes(&h, &dec.classes, &avoid, &ctx.budget)?;
                eprintln!("kept {} of {} classes", res.kept_classes.len(), dec.classes.len());
                (res.family, res.report)
            } else {
                let res = purge_edges(&h, &avoid, &ctx.budget);
                (res.family, res.report)
            };
            eprintln!("{} -> {} edges ({} deleted)", report.initial, report.final_size, report.deleted);
            emit(output.as_ref(), &write_hypergraph(&family))?;
            ctx.json(&serde_json::to_value(&report)?)?;
            Ok(if report.complete { EXIT_PASS } else { EXIT_UNKNOWN })
        }
        Command::Numbers(n) => numbers(&ctx, n),
        Command::RankCheck { range, eq17 } => rank_check_cmd(&ctx, range, eq17),
        Command::Crossing(c) => crossing(&ctx, c),
        Command::Codes(Codes::Report { input }) => {
            let h = read_input(&input)?;
            let rep = superimposed_report(&h, &ctx.budget);
            eprintln!("verdict: {:?}", rep.verdict);
            ctx.json_or_stdout(&serde_json::to_value(&rep)?)?;
            Ok(match rep.verdict {
                CodeVerdict::OptimalDesign | CodeVerdict::OptimalCode => EXIT_PASS,
                CodeVerdict::None => EXIT_FAIL,
                CodeVerdict::Unknown => EXIT_UNKNOWN,
            })
        }
        Command::Gt(g) => gt(&ctx, g),
    }
}

fn construct(ctx: &Ctx, c: Construct) -> Result<u8> {
    let (h, out, provenance) = match c {
        Construct::Transversal { q, r, slopes, seed, out } => {
            if slopes.needs_seed() && seed.is_none() {
                bail!("the restricted slope policy is randomized and needs --seed");
            }
            let m = slopes.resolve(q, r, seed.unwrap_or(0))?;
            let h = gridfree_core::transversal(q, r, &m)?;
            let prov = json!({"construction": "transversal", "q": q, "r": r, "slopes": m.elements(), "seed": seed});
            (h, out, prov)
        }
        Construct::Pencil { n, r, out } => {
            (gridfree_core::pencil(n, r)?, out, json!({"construction": "pencil", "n": n, "r": r}))
        }
        Construct::Sidon { q, out } => {
            let (h, s) = sidon_graph(q)?;
            (h, out, json!({"construction": "sidon", "q": q, "sidon_set": s.elements()}))
        }
        Construct::Sts15 { out } => (pg32_sts15(), out, json!({"construction": "sts15"})),
        Construct::CrossingR3 { y, m, a, b, q, out } => {
            let p = gridfree_core::CrossingParamsR3 { y, m, a, b, q };
            let h = gridfree_core::crossing_lines_r3(&p)?;
            let prov = json!({
                "construction": "crossing-r3", "params": p,
                "intercepts": p.intercepts(), "slopes": p.slopes(), "slopes_prime": p.slopes_prime(),
            });
            (h, out, prov)
        }
        Construct::Recursive { n, r, seed, out } => {
            let (h, rep) = recursive_gridfree(n, r, seed, &ctx.budget)?;
            eprintln!("{} edges, {} deleted, complete: {}", rep.final_size, rep.deleted, rep.complete);
            let complete = rep.complete;
            let prov = json!({"construction": "recursive", "n": n, "r": r, "seed": seed, "report": rep});
            emit(out.output.as_ref(), &write_hypergraph(&h))?;
            ctx.json(&prov)?;
            return Ok(if complete { EXIT_PASS } else { EXIT_UNKNOWN });
        }
        Construct::RandomClasses { n, p, seed, out } => {
            let f = random_classes(n, p, seed)?;
            let prov = json!({"construction": "random-classes", "n": n, "p": p.to_string(), "seed": seed, "classes": f.classes, "class_edges": f.class_edges});
            (f.family, out, prov)
        }
        Construct::RandomPartite { n, r, p, avoid, seed, out } => {
            let (h, rep) = random_avoidance_construct(n, r, &avoid, p, seed, &ctx.budget)?;
            eprintln!("sampled {} edges, kept {}", rep.sampled, h.len());
            let complete = rep.purge.complete;
            let prov = json!({"construction": "random-partite", "n": n, "r": r, "p": p.to_string(), "seed": seed,
                "avoid": avoid.iter().map(ToString::to_string).collect::<Vec<_>>(), "report": rep});
            emit(out.output.as_ref(), &write_hypergraph(&h))?;
            ctx.json(&prov)?;
            return Ok(if complete { EXIT_PASS } else { EXIT_UNKNOWN });
        }
    };
    eprintln!("{} edges on {} vertices", h.len(), h.n());
    emit(out.output.as_ref(), &write_hypergraph(&h))?;
    ctx.json(&provenance)?;
    Ok(EXIT_PASS)
}

fn numbers(ctx: &Ctx, n: Numbers) -> Result<u8> {
    let set_out = |s: &gridfree_core::IntSet, params: Value| -> Result<u8> {
        eprintln!("{} elements", s.len());
        emit(None, &write_intset(s))?;
        ctx.json(&json!({"params": params, "size": s.len(), "elements": s.elements()}))?;
        Ok(EXIT_PASS)
    };
    match n {
        Numbers::Check { input, patterns } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let s = read_intset(&text)?;
            let mut verdict = Verdict::Pass;
            let mut results = Vec::new();
            for k in patterns {
                let w = check_pattern(&s, k);
                if let Some(w) = &w {
                    verdict = Verdict::Fail;
                    println!("{k}: found {w:?}");
                } else {
                    println!("{k}: absent");
                }
                results.push(json!({"pattern": k.to_string(), "verdict": Verdict::from_bool(w.is_none()), "witness": w}));
            }
            ctx.json(&json!({"input": input, "results": results}))?;
            Ok(exit_for(verdict))
        }
        Numbers::Behrend { q, r } => set_out(&behrend_set(q, r), json!({"set": "behrend", "q": q, "r": r})),
        Numbers::Greedy { q, patterns } => set_out(
            &greedy_pattern_set(q, &patterns),
            json!({"set": "greedy", "q": q, "patterns": patterns.iter().map(ToString::to_string).collect::<Vec<_>>()}),
        ),
        Numbers::Restricted { q, seed } => {
            set_out(&restricted_set(q, seed), json!({"set": "restricted", "q": q, "seed": seed}))
        }
        Numbers::Minkowski { q, vector } => match minkowski_alpha(q, &vector) {
            Some(m) => {
                println!("alpha = {}, residues {:?}, bound {}", m.alpha, m.residues, m.bound);
                ctx.json(&json!({"q": q, "vec": vector, "alpha": m.alpha, "residues": m.residues, "bound": m.bound}))?;
                Ok(EXIT_PASS)
            }
            None => {
                println!("no multiplier found");
                ctx.json(&json!({"q": q, "vec": vector, "alpha": null}))?;
                Ok(EXIT_FAIL)
            }
        },
        Numbers::Prime { x } => {
            let p = largest_prime_leq(x)?;
            println!("{p}");
            ctx.json(&json!({"x": x, "prime": p}))?;
            Ok(EXIT_PASS)
        }
    }
}

fn rank_check_cmd(ctx: &Ctx, range: std::ops::RangeInclusive<i64>, eq17: bool) -> Result<u8> {
    let mut rows = Vec::new();
    let mut ok = true;
    println!("{:>3} {:>4} {:>5}  charpoly coefficients (lambda^12 .. lambda^0)", "r", "rank", "match");
    for r in range {
        let c = rank_check(r)?;
        let good = c.matches_closed_form && c.rank == 10 && c.nullspace_is_shifts && c.lambda2_identity;
        ok &= good;
        let coeffs: Vec<&str> = c.charpoly.iter().rev().map(String::as_str).collect();
        println!("{:>3} {:>4} {:>5}  {}", r, c.rank, if good { "yes" } else { "NO" }, coeffs.join(" "));
        rows.push(serde_json::to_value(&c)?);
    }
    let mut report = json!({"rank_check": rows});
    if eq17 {
        let s = gridfree_core::solve_eq17();
        println!("three-line system: nullspace dimension {}, parametrization spans: {}", s.dimension, s.family_spans);
        ok &= s.dimension == 4 && s.family_spans;
        report["eq17"] = serde_json::to_value(&s)?;
    }
    ctx.json(&report)?;
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn crossing(ctx: &Ctx, c: Crossing) -> Result<u8> {
    match c {
        Crossing::Verify { input } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let s = read_crossing(&text)?;
            let rep = crossing_verify(&s)?;
            for (ax, ok) in [("C1", rep.c1), ("C2", rep.c2), ("C3", rep.c3), ("C4", rep.c4)] {
                let why = rep.failures.get(ax).map(|w| format!(" ({w})")).unwrap_or_default();
                println!("{ax}: {}{why}", if ok { "pass" } else { "fail" });
            }
            let (code, structure) = if !rep.passes() {
                (EXIT_FAIL, Value::Null)
            } else {
                match crossing_structure_match(&s) {
                    Ok(m) => {
                        let show = |v: &[gridfree_core::PathRole]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                        println!("structure: match{}", if m.swapped { " (labels swapped)" } else { "" });
                        println!("  P: {}", show(&m.p_roles));
                        println!("  R: {}", show(&m.r_roles));
                        (EXIT_PASS, serde_json::to_value(&m)?)
                    }
                    Err(AlgebraError::StructureMismatch(why)) => {
                        println!("structure: mismatch ({why})");
                        (EXIT_FAIL, json!({"counterexample": s.to_string(), "reason": why}))
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            ctx.json(&json!({"input": input, "axioms": rep, "structure": structure}))?;
            Ok(code)
        }
        Crossing::Enumerate { r } => {
            let start = Instant::now();
            let e = enumerate_crossings(r)?;
            println!(
                "r={r}: {} covering families, {} admissible, {} crossing pairs, all structured: {}",
                e.families, e.admissible_families, e.survivors, e.all_structured
            );
            if let Some(c) = &e.counterexample {
                println!("counterexample:\n{c}");
            }
            let mut v = serde_json::to_value(&e)?;
            v["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            ctx.json(&v)?;
            Ok(if e.all_structured { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn gt(ctx: &Ctx, g: Gt) -> Result<u8> {
    match g {
        Gt::Encode { input, defectives } => {
            let h = read_input(&input)?;
            let hex = outcome_to_hex(&gt_encode(&h, &defectives)?);
            println!("{hex}");
            ctx.json(&json!({"defectives": defectives, "outcome": hex}))?;
            Ok(EXIT_PASS)
        }
        Gt::Decode { input, outcome } => {
            let h = read_input(&input)?;
            let bits = outcome_from_hex(&outcome, h.n())?;
            let d = gt_decode(&bits, &h);
            println!("{}", d.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
            ctx.json(&json!({"outcome": outcome, "decoded": d}))?;
            Ok(EXIT_PASS)
        }
        Gt::Simulate { input, trials, max_defectives, seed } => {
            use rand::seq::index::sample;
            use rand::Rng;
            let h = read_input(&input)?;
            if max_defectives > h.len() {
                bail!("cannot draw {max_defectives} defectives from {} items", h.len());
            }
            let mut rng = seeded(seed);
            let mut failures = Vec::new();
            for t in 0..trials {
                let k = rng.random_range(0..=max_defectives);
                let mut d: Vec<usize> = sample(&mut rng, h.len(), k).into_vec();
                d.sort_unstable();
                if gt_decode(&gt_encode(&h, &d)?, &h) != d {
                    failures.push(json!({"trial": t, "defectives": d}));
                }
            }
            println!("{} of {trials} trials decoded exactly", trials - failures.len());
            ctx.json(&json!({"trials": trials, "max_defectives": max_defectives, "seed": seed, "failures": failures}))?;
            Ok(if failures.is_empty() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}
