//! Small explicit graphs used as testbeds.

use super::{Graph, VertexKey};

/// Vertex names of [`counterexample_graph`].
#[derive(Clone, Copy, Debug)]
pub struct Counterexample;

impl Counterexample {
    pub const V: u32 = 0;
    pub const X: u32 = 1;
    pub const Y: u32 = 2;
    pub const Z: u32 = 3;
    pub const A: u32 = 4;
    pub const B: u32 = 5;

    pub fn name(v: u32) -> Option<char> {
        "vxyzab".chars().nth(v as usize)
    }

    pub fn key(v: u32) -> VertexKey {
        VertexKey::Node(v)
    }
}

/// Six-vertex graph where `v` (degree 3) has neighbors `x`, `y`, `z` with
/// `deg(y) = 3 > deg(z) = 2`; every other vertex has degree 2.
///
/// Edges: v-x, v-y, v-z, x-z, y-a, y-b, a-b.
pub fn counterexample_graph() -> Graph {
    use Counterexample as C;
    Graph::from_edges(
        [
            (C::V, C::X),
            (C::V, C::Y),
            (C::V, C::Z),
            (C::X, C::Z),
            (C::Y, C::A),
            (C::Y, C::B),
            (C::A, C::B),
        ],
        [],
    )
    .expect("counterexample graph is well formed")
}

/// K_n on vertices `0..n`.
pub fn complete_graph(n: u32) -> Graph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    Graph::from_edges(edges, 0..n).expect("complete graph is well formed")
}

/// K_{a,b}: side one is `0..a`, side two is `a..a+b`.
pub fn complete_bipartite(a: u32, b: u32) -> Graph {
    let edges = (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)));
    Graph::from_edges(edges, 0..a + b).expect("complete bipartite graph is well formed")
}

/// The cycle on `0..n`, `n >= 3`.
pub fn cycle_graph(n: u32) -> Graph {
    assert!(n >= 3, "a simple cycle needs at least 3 vertices");
    Graph::from_edges((0..n).map(|i| (i, (i + 1) % n)), []).expect("cycle is well formed")
}

/// Vertices `0` and `1` joined by internally disjoint paths of the given
/// lengths (edge counts). At most one length may be 1. Interior vertices are
/// numbered from 2 upward, path by path, from the `0` side.
pub fn theta_graph(lengths: &[u32]) -> Graph {
    assert!(
        lengths.iter().filter(|&&l| l == 1).count() <= 1 && lengths.iter().all(|&l| l >= 1),
        "theta graph lengths must be positive with at most one direct edge"
    );
    let mut next = 2;
    let mut edges = Vec::new();
    for &len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    Graph::from_edges(edges, [0, 1]).expect("theta graph is well formed")
}

/// Cycles of the given lengths (each at least 3) glued at vertex `0`.
pub fn bouquet(lengths: &[u32]) -> Graph {
    assert!(lengths.iter().all(|&l| l >= 3), "loops need length at least 3");
    let mut next = 1;
    let mut edges = Vec::new();
    for &len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 0));
    }
    Graph::from_edges(edges, [0]).expect("bouquet is well formed")
}
