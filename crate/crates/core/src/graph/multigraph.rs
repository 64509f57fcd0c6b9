use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::VertexKey;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

/// One of the two ends of an edge. For a self-loop both ends sit at the same
/// vertex but remain distinct half-edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum End {
    A,
    B,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::A => End::B,
            End::B => End::A,
        }
    }
}

/// The end `end` of edge `edge`, attached to that end's vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn new(edge: usize, end: End) -> Self {
        HalfEdge { edge, end }
    }

    /// The half-edge at the other end of the same edge.
    pub fn twin(self) -> Self {
        HalfEdge {
            edge: self.edge,
            end: self.end.opposite(),
        }
    }
}

/// Walk state on a multigraph: the half-edge through which the walker
/// arrived. Its vertex is the walker's position (the head).
pub type HalfEdgeState = HalfEdge;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedEdge {
    pub id: usize,
    pub a: VertexKey,
    pub b: VertexKey,
    pub resistance: u64,
}

impl WeightedEdge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn conductance(&self) -> Rational {
        ratio(1, self.resistance as i64)
    }
}

/// Finite multigraph with a positive integer resistance on every edge.
/// Parallel edges and self-loops are allowed; each edge contributes two
/// half-edges, so a self-loop counts twice toward its vertex's degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMultigraph {
    vertices: BTreeSet<VertexKey>,
    edges: Vec<WeightedEdge>,
    incidence: BTreeMap<VertexKey, Vec<HalfEdge>>,
}

impl WeightedMultigraph {
    /// Edge ids are positions in `edges`.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexKey>,
        edges: impl IntoIterator<Item = (VertexKey, VertexKey, u64)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<VertexKey> = vertices.into_iter().collect();
        let mut incidence: BTreeMap<VertexKey, Vec<HalfEdge>> =
            vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        let mut list = Vec::new();
        for (id, (a, b, resistance)) in edges.into_iter().enumerate() {
            if resistance == 0 {
                return Err(Error::InvalidParameter(format!(
                    "edge {id} has zero resistance"
                )));
            }
            for (v, end) in [(&a, End::A), (&b, End::B)] {
                incidence
                    .get_mut(v)
                    .ok_or_else(|| {
                        Error::MalformedGraph(format!("edge {id} uses unknown vertex {v}"))
                    })?
                    .push(HalfEdge::new(id, end));
            }
            list.push(WeightedEdge {
                id,
                a,
                b,
                resistance,
            });
        }
        Ok(WeightedMultigraph {
            vertices,
            edges: list,
            incidence,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<VertexKey> {
        &self.vertices
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Option<&WeightedEdge> {
        self.edges.get(id)
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.vertices.contains(v)
    }

    /// Half-edges at `v`, ordered by `(edge id, end)`.
    pub fn half_edges(&self, v: &VertexKey) -> Result<&[HalfEdge]> {
        self.incidence
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidVertex(format!("{v} is not a vertex of the multigraph")))
    }

    /// Multigraph degree: the number of half-edges at `v`.
    pub fn degree(&self, v: &VertexKey) -> Result<usize> {
        Ok(self.half_edges(v)?.len())
    }

    pub fn endpoint(&self, h: HalfEdge) -> &VertexKey {
        let e = &self.edges[h.edge];
        match h.end {
            End::A => &e.a,
            End::B => &e.b,
        }
    }

    /// Checks that `h` names an existing edge.
    pub fn check_half_edge(&self, h: HalfEdge) -> Result<()> {
        if h.edge < self.edges.len() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("no edge with id {}", h.edge)))
        }
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(WeightedEdge::is_loop)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().any(|e| {
            let pair = if e.a <= e.b {
                (&e.a, &e.b)
            } else {
                (&e.b, &e.a)
            };
            !seen.insert(pair)
        })
    }

    pub fn max_resistance(&self) -> Option<u64> {
        self.edges.iter().map(|e| e.resistance).max()
    }
}
