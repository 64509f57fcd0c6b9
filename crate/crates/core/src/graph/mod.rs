//! Graphs the walks run on.
//!
//! Infinite families (lattices, regular and biregular trees) are implicit:
//! they answer `degree` and `neighbors` for any valid key and never
//! enumerate their vertex set. Explicit graphs are finite adjacency lists
//! over [`VertexKey::Node`] keys. Neighbor order is part of the contract:
//! axis order `+e1, -e1, +e2, ...` on lattices, parent then children on
//! trees, ascending on explicit graphs.

mod families;
mod key;
mod multigraph;
mod spec;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub use families::{
    bouquet, complete_bipartite, complete_graph, counterexample_graph, cycle_graph, theta_graph,
    Counterexample,
};
pub use key::VertexKey;
pub use multigraph::{End, HalfEdge, HalfEdgeState, WeightedEdge, WeightedMultigraph};
pub use spec::GraphSpec;

use crate::error::{Error, Result};

pub const MAX_LATTICE_DIM: usize = 4;

/// Public description of a graph's family and parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Lattice { d: usize },
    SubdividedLattice { d: usize, t: u32 },
    RegularTree { k: u32 },
    BiregularTree { k1: u32, k2: u32 },
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Lattice { d: usize },
    SubdividedLattice { d: usize, t: u32 },
    RegularTree { k: u32 },
    BiregularTree { k1: u32, k2: u32 },
    Explicit(ExplicitGraph),
}

/// A locally finite simple undirected graph. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    repr: Repr,
}

/// Finite simple graph stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: BTreeMap<u32, Vec<u32>>,
}

impl ExplicitGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn adjacency(&self) -> &BTreeMap<u32, Vec<u32>> {
        &self.adjacency
    }

    pub fn neighbors_of(&self, v: u32) -> Option<&[u32]> {
        self.adjacency.get(&v).map(Vec::as_slice)
    }

    /// Edges as `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        self.adjacency
            .iter()
            .flat_map(|(&a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.adjacency.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.adjacency.len()
    }
}

impl Graph {
    /// The integer lattice Z^d, `1 <= d <= 4`.
    pub fn lattice(d: usize) -> Result<Self> {
        if !(1..=MAX_LATTICE_DIM).contains(&d) {
            return Err(Error::InvalidParameter(format!(
                "lattice dimension must be in 1..={MAX_LATTICE_DIM}, got {d}"
            )));
        }
        Ok(Graph {
            repr: Repr::Lattice { d },
        })
    }

    /// Z^d with every edge replaced by a path through `t` degree-2 vertices.
    ///
    /// Keys are scaled by `t + 1`: original lattice points have every
    /// coordinate divisible by `t + 1`, subdivision vertices have exactly one
    /// coordinate that is not.
    pub fn subdivided_lattice(d: usize, t: u32) -> Result<Self> {
        Graph::lattice(d)?;
        Ok(Graph {
            repr: Repr::SubdividedLattice { d, t },
        })
    }

    /// The infinite `k`-regular tree, `k >= 2`. `k = 2` is the bi-infinite path.
    pub fn regular_tree(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "regular tree degree must be at least 2, got {k}"
            )));
        }
        Ok(Graph {
            repr: Repr::RegularTree { k },
        })
    }

    /// The infinite tree whose even-depth vertices have degree `k1` and
    /// odd-depth vertices degree `k2`; requires `k1 > k2 >= 2`.
    pub fn biregular_tree(k1: u32, k2: u32) -> Result<Self> {
        if !(k1 > k2 && k2 >= 2) {
            return Err(Error::InvalidParameter(format!(
                "biregular tree needs k1 > k2 >= 2, got ({k1}, {k2})"
            )));
        }
        Ok(Graph {
            repr: Repr::BiregularTree { k1, k2 },
        })
    }

    /// Builds an explicit graph, checking symmetry and rejecting self-loops
    /// and repeated neighbors. Neighbor lists are stored sorted.
    pub fn from_adjacency<I, N>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, N)>,
        N: IntoIterator<Item = u32>,
    {
        let mut adjacency: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (v, ns) in lists {
            let mut ns: Vec<u32> = ns.into_iter().collect();
            if adjacency.contains_key(&v) {
                return Err(Error::MalformedGraph(format!("vertex {v} listed twice")));
            }
            ns.sort_unstable();
            if ns.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedGraph(format!(
                    "vertex {v} has a repeated neighbor"
                )));
            }
            if ns.binary_search(&v).is_ok() {
                return Err(Error::MalformedGraph(format!("self-loop at vertex {v}")));
            }
            adjacency.insert(v, ns);
        }
        for (&v, ns) in &adjacency {
            for &w in ns {
                let back = adjacency.get(&w).is_some_and(|l| l.binary_search(&v).is_ok());
                if !back {
                    return Err(Error::MalformedGraph(format!(
                        "asymmetric adjacency: {w} listed at {v} but not vice versa"
                    )));
                }
            }
        }
        Ok(Graph {
            repr: Repr::Explicit(ExplicitGraph { adjacency }),
        })
    }

    /// Explicit graph from an undirected edge list; isolated vertices must be
    /// passed through `extra_vertices`.
    pub fn from_edges(
        edges: impl IntoIterator<Item = (u32, u32)>,
        extra_vertices: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let mut lists: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for v in extra_vertices {
            lists.entry(v).or_default();
        }
        for (a, b) in edges {
            lists.entry(a).or_default().push(b);
            lists.entry(b).or_default().push(a);
        }
        Graph::from_adjacency(lists)
    }

    /// Replaces every edge of an explicit graph by a path through `t` new
    /// degree-2 vertices. New vertices are numbered upward from the largest
    /// existing id, edge by edge in ascending `(a, b)` order, from `a` to `b`.
    pub fn subdivide(&self, t: u32) -> Result<Self> {
        let g = self.explicit().ok_or_else(|| {
            Error::UnsupportedGraph("subdivision requires an explicit finite graph".into())
        })?;
        let mut next = g.adjacency.keys().next_back().map_or(0, |&m| m + 1);
        let mut edges = Vec::new();
        for (a, b) in g.edges() {
            let mut prev = a;
            for _ in 0..t {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, b));
        }
        Graph::from_edges(edges, g.vertices())
    }

    pub fn kind(&self) -> GraphKind {
        match &self.repr {
            Repr::Lattice { d } => GraphKind::Lattice { d: *d },
            Repr::SubdividedLattice { d, t } => GraphKind::SubdividedLattice { d: *d, t: *t },
            Repr::RegularTree { k } => GraphKind::RegularTree { k: *k },
            Repr::BiregularTree { k1, k2 } => GraphKind::BiregularTree { k1: *k1, k2: *k2 },
            Repr::Explicit(_) => GraphKind::Explicit,
        }
    }

    pub fn explicit(&self) -> Option<&ExplicitGraph> {
        match &self.repr {
            Repr::Explicit(g) => Some(g),
            _ => None,
        }
    }

    /// Conventional starting vertex: the zero vector, the tree root, or the
    /// smallest explicit vertex.
    pub fn origin(&self) -> Option<VertexKey> {
        match &self.repr {
            Repr::Lattice { d } | Repr::SubdividedLattice { d, .. } => {
                Some(VertexKey::Point(vec![0; *d]))
            }
            Repr::RegularTree { .. } | Repr::BiregularTree { .. } => Some(VertexKey::root()),
            Repr::Explicit(g) => g.adjacency.keys().next().map(|&v| VertexKey::Node(v)),
        }
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.check(v).is_ok()
    }

    pub fn degree(&self, v: &VertexKey) -> Result<usize> {
        self.check(v)?;
        Ok(self.degree_unchecked(v))
    }

    pub fn neighbors(&self, v: &VertexKey) -> Result<Vec<VertexKey>> {
        let deg = self.degree(v)?;
        Ok((0..deg).map(|i| self.nth_unchecked(v, i)).collect())
    }

    /// The `i`-th neighbor in canonical order.
    pub fn nth_neighbor(&self, v: &VertexKey, i: usize) -> Result<VertexKey> {
        let deg = self.degree(v)?;
        if i >= deg {
            return Err(Error::InvalidParameter(format!(
                "neighbor index {i} out of range for vertex {v} of degree {deg}"
            )));
        }
        Ok(self.nth_unchecked(v, i))
    }

    /// Position of `w` in `neighbors(v)`, or `None` when they are not adjacent.
    pub fn neighbor_index(&self, v: &VertexKey, w: &VertexKey) -> Result<Option<usize>> {
        self.check(v)?;
        if !self.contains(w) {
            return Ok(None);
        }
        Ok(match (&self.repr, v, w) {
            (Repr::Lattice { .. }, VertexKey::Point(a), VertexKey::Point(b)) => {
                lattice_offset(a, b)
            }
            (Repr::SubdividedLattice { .. }, VertexKey::Point(a), VertexKey::Point(b)) => {
                lattice_offset(a, b).and_then(|idx| match self.free_axis(a) {
                    // interior vertex: only the free axis is available
                    Some(free) => (idx / 2 == free).then_some(idx % 2),
                    None => Some(idx),
                })
            }
            (Repr::RegularTree { .. } | Repr::BiregularTree { .. }, VertexKey::Word(a), VertexKey::Word(b)) => {
                let has_parent = !a.is_empty();
                if b.len() + 1 == a.len() && a.starts_with(b) {
                    Some(0)
                } else if a.len() + 1 == b.len() && b.starts_with(a) {
                    Some(usize::from(has_parent) + *b.last().unwrap() as usize)
                } else {
                    None
                }
            }
            (Repr::Explicit(g), VertexKey::Node(a), VertexKey::Node(b)) => {
                g.adjacency[a].binary_search(b).ok()
            }
            _ => None,
        })
    }

    pub fn are_adjacent(&self, v: &VertexKey, w: &VertexKey) -> Result<bool> {
        Ok(self.neighbor_index(v, w)?.is_some())
    }

    /// Vertices within graph distance `radius` of `center`, breadth first.
    pub fn ball(&self, center: &VertexKey, radius: usize) -> Result<Vec<VertexKey>> {
        self.check(center)?;
        let mut seen = BTreeSet::from([center.clone()]);
        let mut order = vec![center.clone()];
        let mut frontier = vec![center.clone()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &frontier {
                for w in self.neighbors(v)? {
                    if seen.insert(w.clone()) {
                        order.push(w.clone());
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Ok(order)
    }

    fn check(&self, v: &VertexKey) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidVertex(format!("{v}: {why}")));
        match (&self.repr, v) {
            (Repr::Lattice { d }, VertexKey::Point(x)) => {
                if x.len() != *d {
                    return bad("wrong lattice dimension");
                }
            }
            (Repr::SubdividedLattice { d, t }, VertexKey::Point(x)) => {
                if x.len() != *d {
                    return bad("wrong lattice dimension");
                }
                let s = i64::from(*t) + 1;
                if x.iter().filter(|c| c.rem_euclid(s) != 0).count() > 1 {
                    return bad("not a vertex of the subdivided lattice");
                }
            }
            (Repr::RegularTree { .. } | Repr::BiregularTree { .. }, VertexKey::Word(path)) => {
                for (depth, &c) in path.iter().enumerate() {
                    if c as usize >= self.tree_children(depth) {
                        return bad("child index out of range");
                    }
                }
            }
            (Repr::Explicit(g), VertexKey::Node(i)) => {
                if !g.adjacency.contains_key(i) {
                    return bad("not a vertex of this graph");
                }
            }
            _ => return bad("key type does not match the graph family"),
        }
        Ok(())
    }

    fn tree_degree(&self, depth: usize) -> usize {
        match self.repr {
            Repr::RegularTree { k } => k as usize,
            Repr::BiregularTree { k1, k2 } => {
                if depth % 2 == 0 {
                    k1 as usize
                } else {
                    k2 as usize
                }
            }
            _ => unreachable!("tree_degree on a non-tree"),
        }
    }

    fn tree_children(&self, depth: usize) -> usize {
        self.tree_degree(depth) - usize::from(depth > 0)
    }

    fn free_axis(&self, x: &[i64]) -> Option<usize> {
        let Repr::SubdividedLattice { t, .. } = self.repr else {
            return None;
        };
        let s = i64::from(t) + 1;
        x.iter().position(|c| c.rem_euclid(s) != 0)
    }

    fn degree_unchecked(&self, v: &VertexKey) -> usize {
        match (&self.repr, v) {
            (Repr::Lattice { d }, _) => 2 * d,
            (Repr::SubdividedLattice { d, .. }, VertexKey::Point(x)) => {
                if self.free_axis(x).is_some() {
                    2
                } else {
                    2 * d
                }
            }
            (Repr::RegularTree { .. } | Repr::BiregularTree { .. }, VertexKey::Word(p)) => {
                self.tree_degree(p.len())
            }
            (Repr::Explicit(g), VertexKey::Node(i)) => g.adjacency[i].len(),
            _ => unreachable!("degree of an unchecked key"),
        }
    }

    fn nth_unchecked(&self, v: &VertexKey, i: usize) -> VertexKey {
        match (&self.repr, v) {
            (Repr::Lattice { .. }, VertexKey::Point(x)) => lattice_step(x, i / 2, i % 2 == 0),
            (Repr::SubdividedLattice { .. }, VertexKey::Point(x)) => match self.free_axis(x) {
                Some(axis) => lattice_step(x, axis, i == 0),
                None => lattice_step(x, i / 2, i % 2 == 0),
            },
            (Repr::RegularTree { .. } | Repr::BiregularTree { .. }, VertexKey::Word(p)) => {
                if p.is_empty() {
                    VertexKey::Word(vec![i as u32])
                } else if i == 0 {
                    VertexKey::Word(p[..p.len() - 1].to_vec())
                } else {
                    let mut child = Vec::with_capacity(p.len() + 1);
                    child.extend_from_slice(p);
                    child.push(i as u32 - 1);
                    VertexKey::Word(child)
                }
            }
            (Repr::Explicit(g), VertexKey::Node(a)) => VertexKey::Node(g.adjacency[a][i]),
            _ => unreachable!("neighbor of an unchecked key"),
        }
    }
}

fn lattice_step(x: &[i64], axis: usize, positive: bool) -> VertexKey {
    let mut y = x.to_vec();
    y[axis] += if positive { 1 } else { -1 };
    VertexKey::Point(y)
}

/// Canonical index of `b` among the axis-ordered unit neighbors of `a`.
fn lattice_offset(a: &[i64], b: &[i64]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let mut found = None;
    for (axis, (x, y)) in a.iter().zip(b).enumerate() {
        match y - x {
            0 => {}
            1 if found.is_none() => found = Some(2 * axis),
            -1 if found.is_none() => found = Some(2 * axis + 1),
            _ => return None,
        }
    }
    found
}
