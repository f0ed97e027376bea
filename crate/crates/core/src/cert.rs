//! Property expressions and JSON certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Search, Verdict};
use crate::codes::{is_cover_free, is_union_free};
use crate::detect::{check_vw_sparse, find_config, steiner_e_sparse, ConfigKind};
use crate::error::CheckError;
use crate::hypergraph::Hypergraph;

/// One checkable property of a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Linear,
    GridFree(usize, usize),
    TriangleFree,
    PaschFree,
    MitreFree,
    UnionFree(usize),
    CoverFree(usize),
    /// No `e` edges span `v` or fewer vertices.
    Sparse { e: usize, v: usize },
    SteinerSparse(usize),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Property::Linear => f.write_str("linear"),
            Property::GridFree(a, b) if a == b => write!(f, "gridfree:{a}"),
            Property::GridFree(a, b) => write!(f, "gridfree:{a}x{b}"),
            Property::TriangleFree => f.write_str("trianglefree"),
            Property::PaschFree => f.write_str("paschfree"),
            Property::MitreFree => f.write_str("mitrefree"),
            Property::UnionFree(e) => write!(f, "unionfree:{e}"),
            Property::CoverFree(e) => write!(f, "coverfree:{e}"),
            Property::Sparse { e, v } => write!(f, "sparse:{e}:{v}"),
            Property::SteinerSparse(e) => write!(f, "steinersparse:{e}"),
        }
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("");
        let args: Vec<&str> = parts.collect();
        let num = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}` in `{s}`: {e}"));
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{head}` takes {n} argument(s), got `{s}`"))
            }
        };
        match head {
            "linear" => arity(0).map(|_| Property::Linear),
            "trianglefree" => arity(0).map(|_| Property::TriangleFree),
            "paschfree" => arity(0).map(|_| Property::PaschFree),
            "mitrefree" => arity(0).map(|_| Property::MitreFree),
            "gridfree" => {
                arity(1)?;
                let (a, b) = match args[0].split_once('x') {
                    Some((a, b)) => (num(a)?, num(b)?),
                    None => (num(args[0])?, num(args[0])?),
                };
                if a == 0 || b == 0 {
                    return Err(format!("grid sides must be positive in `{s}`"));
                }
                Ok(Property::GridFree(a, b))
            }
            "unionfree" => {
                arity(1)?;
                Ok(Property::UnionFree(num(args[0])?))
            }
            "coverfree" => {
                arity(1)?;
                Ok(Property::CoverFree(num(args[0])?))
            }
            "sparse" => {
                arity(2)?;
                Ok(Property::Sparse { e: num(args[0])?, v: num(args[1])? })
            }
            "steinersparse" => {
                arity(1)?;
                Ok(Property::SteinerSparse(num(args[0])?))
            }
            _ => Err(format!("unknown property `{s}`")),
        }
    }
}

/// Parses a comma-separated property list.
pub fn parse_properties(s: &str) -> Result<Vec<Property>, String> {
    let props: Vec<Property> = s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    if props.is_empty() {
        return Err("empty property list".into());
    }
    Ok(props)
}

/// Result of checking one property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witness: Option<Vec<usize>>,
    pub role_map: Option<BTreeMap<String, Vec<usize>>>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { verdict: Verdict::Pass, witness: None, role_map: None }
    }

    fn unknown() -> Self {
        Outcome { verdict: Verdict::Unknown, witness: None, role_map: None }
    }

    fn fail(witness: Vec<usize>, roles: Option<BTreeMap<String, Vec<usize>>>) -> Self {
        Outcome { verdict: Verdict::Fail, witness: Some(witness), role_map: roles }
    }
}

fn config_free(h: &Hypergraph, kind: ConfigKind, budget: &Budget) -> Outcome {
    match find_config(h, kind, budget) {
        Search::Found(w) => Outcome::fail(w.edge_indices, Some(w.role_map)),
        Search::Absent => Outcome::pass(),
        Search::Unknown => Outcome::unknown(),
    }
}

fn from_search<T>(s: Search<T>, f: impl FnOnce(T) -> (Vec<usize>, BTreeMap<String, Vec<usize>>)) -> Outcome {
    match s {
        Search::Found(t) => {
            let (w, roles) = f(t);
            Outcome::fail(w, Some(roles))
        }
        Search::Absent => Outcome::pass(),
        Search::Unknown => Outcome::unknown(),
    }
}

pub fn check_property(h: &Hypergraph, p: Property, budget: &Budget) -> Result<Outcome, CheckError> {
    Ok(match p {
        Property::Linear => match h.is_linear().witness {
            Some((a, b)) => Outcome::fail(vec![a, b], Some(BTreeMap::from([("pair".to_string(), vec![a, b])]))),
            None => Outcome::pass(),
        },
        Property::GridFree(a, b) => config_free(h, ConfigKind::Grid(a, b), budget),
        Property::TriangleFree => config_free(h, ConfigKind::Triangle, budget),
        Property::PaschFree => config_free(h, ConfigKind::Pasch, budget),
        Property::MitreFree => config_free(h, ConfigKind::Mitre, budget),
        Property::UnionFree(e) => from_search(is_union_free(h, e, budget), |(x, y)| {
            let mut w = x.clone();
            w.extend(&y);
            (w, BTreeMap::from([("first".to_string(), x), ("second".to_string(), y)]))
        }),
        Property::CoverFree(e) => from_search(is_cover_free(h, e, budget), |(c, cover)| {
            let mut w = vec![c];
            w.extend(&cover);
            (w, BTreeMap::from([("covered".to_string(), vec![c]), ("cover".to_string(), cover)]))
        }),
        Property::Sparse { e, v } => from_search(check_vw_sparse(h, e, v, budget), |w| {
            (w.clone(), BTreeMap::from([("edges".to_string(), w)]))
        }),
        Property::SteinerSparse(e) => from_search(steiner_e_sparse(h, e, budget)?, |w| {
            (w.clone(), BTreeMap::from([("edges".to_string(), w)]))
        }),
    })
}

/// Self-describing record of one certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: String,
    pub verdict: Verdict,
    pub witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role_map: Option<BTreeMap<String, Vec<usize>>>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl Certificate {
    pub fn new(property: impl Into<String>, outcome: Outcome, params: serde_json::Value, seed: Option<u64>, start: Instant) -> Self {
        Certificate {
            property: property.into(),
            verdict: outcome.verdict,
            witness: outcome.witness,
            role_map: outcome.role_map,
            params,
            seed,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// Runs every property and records one certificate each.
pub fn certify(
    h: &Hypergraph,
    props: &[Property],
    budget: &Budget,
    params: &serde_json::Value,
    seed: Option<u64>,
) -> Result<Vec<Certificate>, CheckError> {
    props
        .iter()
        .map(|&p| {
            let start = Instant::now();
            let out = check_property(h, p, budget)?;
            Ok(Certificate::new(p.to_string(), out, params.clone(), seed, start))
        })
        .collect()
}

/// Combined verdict of a batch of certificates.
pub fn overall(certs: &[Certificate]) -> Verdict {
    certs.iter().fold(Verdict::Pass, |acc, c| acc.and(c.verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::transversal;
    use crate::numbers::IntSet;

    #[test]
    fn parse_round_trip() {
        for s in ["linear", "gridfree:4", "gridfree:2x3", "trianglefree", "paschfree", "mitrefree", "unionfree:2", "coverfree:3", "sparse:4:6", "steinersparse:5"] {
            let p: Property = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert_eq!("gridfree:3x3".parse::<Property>().unwrap(), Property::GridFree(3, 3));
        for bad in ["", "gridfree", "gridfree:0", "sparse:3", "linear:1", "foo"] {
            assert!(bad.parse::<Property>().is_err(), "{bad}");
        }
        assert_eq!(parse_properties("linear, gridfree:4").unwrap().len(), 2);
    }

    #[test]
    fn linear_failure_has_witness() {
        let h = transversal(8, 3, &IntSet::new([0, 4])).unwrap();
        let c = certify(&h, &[Property::Linear], &Budget::unlimited(), &serde_json::json!({"q": 8}), None).unwrap();
        assert_eq!(c[0].verdict, Verdict::Fail);
        assert_eq!(c[0].witness.as_ref().unwrap().len(), 2);
        let text = serde_json::to_string(&c[0]).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c[0]);
        assert_eq!(overall(&c), Verdict::Fail);
    }
}
