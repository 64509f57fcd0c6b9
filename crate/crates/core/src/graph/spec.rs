use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{complete_bipartite, complete_graph, counterexample_graph, theta_graph, Graph};
use crate::error::{Error, Result};

/// JSON description of a graph, e.g. `{"type":"lattice","d":2}` or
/// `{"type":"explicit","adjacency":{"0":[1,2],"1":[0],"2":[0]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Lattice { d: usize },
    SubdividedLattice { d: usize, t: u32 },
    RegularTree { k: u32 },
    BiregularTree { k1: u32, k2: u32 },
    Explicit { adjacency: BTreeMap<String, Vec<u32>> },
    Subdivided { base: Box<GraphSpec>, t: u32 },
    Counterexample,
    Complete { n: u32 },
    CompleteBipartite { a: u32, b: u32 },
    Theta { lengths: Vec<u32> },
}

impl GraphSpec {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json)
            .map_err(|e| Error::InvalidInput(format!("bad graph specification: {e}")))
    }

    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Lattice { d } => Graph::lattice(*d),
            GraphSpec::SubdividedLattice { d, t } => Graph::subdivided_lattice(*d, *t),
            GraphSpec::RegularTree { k } => Graph::regular_tree(*k),
            GraphSpec::BiregularTree { k1, k2 } => Graph::biregular_tree(*k1, *k2),
            GraphSpec::Explicit { adjacency } => {
                let lists = adjacency
                    .iter()
                    .map(|(k, ns)| {
                        k.trim()
                            .parse::<u32>()
                            .map(|v| (v, ns.clone()))
                            .map_err(|_| {
                                Error::MalformedGraph(format!("vertex name {k:?} is not an integer"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Graph::from_adjacency(lists)
            }
            GraphSpec::Subdivided { base, t } => base.build()?.subdivide(*t),
            GraphSpec::Counterexample => Ok(counterexample_graph()),
            GraphSpec::Complete { n } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter("complete graph needs n >= 2".into()));
                }
                Ok(complete_graph(*n))
            }
            GraphSpec::CompleteBipartite { a, b } => {
                if *a == 0 || *b == 0 {
                    return Err(Error::InvalidParameter("both sides must be nonempty".into()));
                }
                Ok(complete_bipartite(*a, *b))
            }
            GraphSpec::Theta { lengths } => {
                let ok = !lengths.is_empty()
                    && lengths.iter().all(|&l| l >= 1)
                    && lengths.iter().filter(|&&l| l == 1).count() <= 1;
                if !ok {
                    return Err(Error::InvalidParameter(
                        "theta lengths must be positive with at most one equal to 1".into(),
                    ));
                }
                Ok(theta_graph(lengths))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;

    #[test]
    fn parses_every_documented_form() {
        let cases = [
            (r#"{"type":"lattice","d":2}"#, GraphKind::Lattice { d: 2 }),
            (
                r#"{"type":"subdivided_lattice","d":2,"t":1}"#,
                GraphKind::SubdividedLattice { d: 2, t: 1 },
            ),
            (r#"{"type":"regular_tree","k":3}"#, GraphKind::RegularTree { k: 3 }),
            (
                r#"{"type":"biregular_tree","k1":4,"k2":3}"#,
                GraphKind::BiregularTree { k1: 4, k2: 3 },
            ),
            (
                r#"{"type":"explicit","adjacency":{"0":[1,2],"1":[0,2],"2":[0,1]}}"#,
                GraphKind::Explicit,
            ),
            (
                r#"{"type":"subdivided","base":{"type":"counterexample"},"t":1}"#,
                GraphKind::Explicit,
            ),
            (r#"{"type":"counterexample"}"#, GraphKind::Explicit),
        ];
        for (json, kind) in cases {
            let spec = GraphSpec::parse(json).unwrap();
            assert_eq!(spec.build().unwrap().kind(), kind, "{json}");
            let again = serde_json::to_string(&spec).unwrap();
            assert_eq!(GraphSpec::parse(&again).unwrap(), spec);
        }
    }

    #[test]
    fn rejects_unknown_fields_and_bad_graphs() {
        assert!(GraphSpec::parse(r#"{"type":"lattice","d":2,"extra":1}"#).is_err());
        assert!(GraphSpec::parse(r#"{"type":"moebius"}"#).is_err());
        let asym = GraphSpec::parse(r#"{"type":"explicit","adjacency":{"0":[1],"1":[]}}"#).unwrap();
        assert!(matches!(asym.build(), Err(Error::MalformedGraph(_))));
        let named = GraphSpec::parse(r#"{"type":"explicit","adjacency":{"a":[]}}"#).unwrap();
        assert!(named.build().is_err());
        let bad = GraphSpec::parse(r#"{"type":"lattice","d":7}"#).unwrap();
        assert!(matches!(bad.build(), Err(Error::InvalidParameter(_))));
    }
}
