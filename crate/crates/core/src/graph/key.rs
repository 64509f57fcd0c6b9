use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Vertex identifier shared by every graph family.
///
/// * `Node(i)` names a vertex of an explicit graph.
/// * `Point(x)` is an integer vector for the lattice families.
/// * `Word(w)` is a root path in a tree: the child index taken at each level.
///
/// Text encoding: `7`, `(1,-2,0)`, `r` for a tree root and `r.0.2.1` below it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKey {
    Node(u32),
    Point(Vec<i64>),
    Word(Vec<u32>),
}

impl VertexKey {
    pub fn node(i: u32) -> Self {
        VertexKey::Node(i)
    }

    pub fn point(coords: impl Into<Vec<i64>>) -> Self {
        VertexKey::Point(coords.into())
    }

    pub fn root() -> Self {
        VertexKey::Word(Vec::new())
    }

    pub fn word(path: impl Into<Vec<u32>>) -> Self {
        VertexKey::Word(path.into())
    }

    pub fn as_node(&self) -> Option<u32> {
        match self {
            VertexKey::Node(i) => Some(*i),
            _ => None,
        }
    }

    /// Graph distance from `origin` read off the keys alone: Euclidean norm of
    /// the difference for lattice points, tree distance for root paths, and
    /// 0/1 (equal or not) for explicit nodes.
    pub fn displacement_from(&self, origin: &VertexKey) -> f64 {
        match (origin, self) {
            (VertexKey::Point(a), VertexKey::Point(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| ((y - x) as f64).powi(2))
                .sum::<f64>()
                .sqrt(),
            (VertexKey::Word(a), VertexKey::Word(b)) => {
                let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                (a.len() + b.len() - 2 * common) as f64
            }
            (a, b) => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKey::Node(i) => write!(f, "{i}"),
            VertexKey::Point(coords) => {
                f.write_str("(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            VertexKey::Word(path) => {
                f.write_str("r")?;
                for c in path {
                    write!(f, ".{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for VertexKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidVertex(format!("cannot parse vertex key {s:?}"));
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            if inner.trim().is_empty() {
                return Err(bad());
            }
            let coords = inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(VertexKey::Point(coords));
        }
        if let Some(rest) = s.strip_prefix('r') {
            if rest.is_empty() {
                return Ok(VertexKey::root());
            }
            let rest = rest.strip_prefix('.').ok_or_else(bad)?;
            let path = rest
                .split('.')
                .map(|c| c.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(VertexKey::Word(path));
        }
        s.parse::<u32>().map(VertexKey::Node).map_err(|_| bad())
    }
}

impl Serialize for VertexKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            VertexKey::Node(i) => serializer.serialize_u32(*i),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for VertexKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(i) => Ok(VertexKey::Node(i)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
