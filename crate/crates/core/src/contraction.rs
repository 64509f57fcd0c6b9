//! Contraction of degree-2 corridors.
//!
//! A corridor is a maximal path whose interior vertices all have degree 2.
//! Replacing each corridor by one edge of resistance equal to its length
//! turns a finite graph into a weighted multigraph on the vertices of degree
//! other than 2. Walks on the original graph, watched only at those vertices,
//! become walks on the multigraph: SRW becomes the reflecting weighted walk
//! ([`WrwRule::ReflectingCorridors`](crate::walkers::WrwRule)) and NBRW the
//! edge-based non-backtracking walk.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{End, ExplicitGraph, Graph, HalfEdge, VertexKey, WeightedMultigraph};
use crate::rational::{ratio, Rational};
use crate::walkers::{check_horizon, Kernel, MultigraphState, Nbrw, PrefixDistribution, Traversal};

/// A maximal path through degree-2 vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corridor {
    pub endpoints: (VertexKey, VertexKey),
    /// Interior vertices in order from `endpoints.0` to `endpoints.1`.
    pub interior: Vec<VertexKey>,
    /// Edge count, `interior.len() + 1`.
    pub length: usize,
}

impl Corridor {
    pub fn is_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }
}

/// Bookkeeping linking a graph to its contraction. Corridor `i` is edge `i`
/// of the contracted multigraph, oriented from end `A` (`endpoints.0`) to
/// end `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    corridors: Vec<Corridor>,
    edge_of: BTreeMap<(u32, u32), usize>,
    interior_of: BTreeMap<u32, usize>,
    ports: BTreeMap<(u32, u32), HalfEdge>,
}

impl ContractionMap {
    pub fn corridors(&self) -> &[Corridor] {
        &self.corridors
    }

    /// Largest corridor length.
    pub fn max_length(&self) -> usize {
        self.corridors.iter().map(|c| c.length).max().unwrap_or(0)
    }

    /// Contracted edge containing the graph edge `{a, b}`.
    pub fn edge_of(&self, a: u32, b: u32) -> Option<usize> {
        self.edge_of.get(&(a.min(b), a.max(b))).copied()
    }

    /// Corridor whose interior contains `v`.
    pub fn corridor_of(&self, v: u32) -> Option<usize> {
        self.interior_of.get(&v).copied()
    }

    /// Whether `v` survives contraction.
    pub fn is_kept(&self, v: u32) -> bool {
        !self.interior_of.contains_key(&v)
    }

    /// Half-edge of the contracted graph used by leaving kept vertex `v`
    /// towards its neighbor `w`.
    pub fn port(&self, v: u32, w: u32) -> Option<HalfEdge> {
        self.ports.get(&(v, w)).copied()
    }
}

fn explicit(g: &Graph) -> Result<&ExplicitGraph> {
    g.explicit()
        .ok_or_else(|| Error::UnsupportedGraph("contraction requires an explicit finite graph".into()))
}

fn node(v: &VertexKey) -> Result<u32> {
    v.as_node()
        .ok_or_else(|| Error::InvalidInput(format!("{v} is not a vertex of an explicit graph")))
}

fn discover(g: &ExplicitGraph) -> Result<ContractionMap> {
    if g.vertex_count() == 0 || !g.is_connected() {
        return Err(Error::UnsupportedStructure("graph must be nonempty and connected".into()));
    }
    let deg = |v: u32| g.neighbors_of(v).map_or(0, <[u32]>::len);
    if let Some(v) = g.vertices().find(|&v| deg(v) < 2) {
        return Err(Error::UnsupportedStructure(format!("vertex {v} has degree {}", deg(v))));
    }
    let mut map = ContractionMap {
        corridors: Vec::new(),
        edge_of: BTreeMap::new(),
        interior_of: BTreeMap::new(),
        ports: BTreeMap::new(),
    };
    let kept: Vec<u32> = g.vertices().filter(|&v| deg(v) != 2).collect();
    for &start in &kept {
        for &first in g.neighbors_of(start).unwrap_or_default() {
            if map.ports.contains_key(&(start, first)) {
                continue;
            }
            let id = map.corridors.len();
            let (mut prev, mut cur) = (start, first);
            let mut interior = Vec::new();
            map.edge_of.insert((prev.min(cur), prev.max(cur)), id);
            while deg(cur) == 2 {
                interior.push(VertexKey::Node(cur));
                map.interior_of.insert(cur, id);
                let ns = g.neighbors_of(cur).unwrap_or_default();
                let next = if ns[0] == prev { ns[1] } else { ns[0] };
                prev = cur;
                cur = next;
                map.edge_of.insert((prev.min(cur), prev.max(cur)), id);
            }
            map.ports.insert((start, first), HalfEdge::new(id, End::A));
            map.ports.insert((cur, prev), HalfEdge::new(id, End::B));
            map.corridors.push(Corridor {
                endpoints: (VertexKey::Node(start), VertexKey::Node(cur)),
                length: interior.len() + 1,
                interior,
            });
        }
    }
    if map.edge_of.len() != g.edge_count() {
        return Err(Error::UnsupportedStructure(
            "a cycle of degree-2 vertices has no endpoint of other degree".into(),
        ));
    }
    Ok(map)
}

/// All maximal corridors of a finite connected graph with minimum degree 2,
/// discovered from kept vertices in ascending order, then by first neighbor.
pub fn find_corridors(g: &Graph) -> Result<Vec<Corridor>> {
    Ok(discover(explicit(g)?)?.corridors)
}

/// Contracts every corridor to a single edge whose resistance is the
/// corridor length. Edge ids follow corridor order.
pub fn contract(g: &Graph) -> Result<(WeightedMultigraph, ContractionMap)> {
    let map = discover(explicit(g)?)?;
    let vertices: BTreeSet<VertexKey> = map
        .corridors
        .iter()
        .flat_map(|c| [c.endpoints.0.clone(), c.endpoints.1.clone()])
        .collect();
    let edges = map
        .corridors
        .iter()
        .map(|c| (c.endpoints.0.clone(), c.endpoints.1.clone(), c.length as u64));
    let mg = WeightedMultigraph::new(vertices, edges)?;
    Ok((mg, map))
}

/// A walk watched only at kept vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedWalk {
    pub vertices: Vec<VertexKey>,
    /// `traversals[i]` is the corridor used between `vertices[i]` and
    /// `vertices[i + 1]`; a reflection means the walk entered the corridor
    /// and came back out the same end.
    pub traversals: Vec<Traversal>,
}

impl InducedWalk {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The induced walk as multigraph walker states.
    pub fn states(&self) -> Vec<MultigraphState> {
        let mut out = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            out.push(MultigraphState {
                vertex: v.clone(),
                last: i.checked_sub(1).map(|j| self.traversals[j]),
            });
        }
        out
    }

    pub fn reflections(&self) -> usize {
        self.traversals.iter().filter(|t| t.is_reflection()).count()
    }
}

/// The subsequence of `path` at its visits to kept vertices, with the
/// corridor used between consecutive visits. A trailing excursion that has
/// not yet returned to a kept vertex is dropped.
pub fn induced_walk(g: &Graph, path: &[VertexKey], map: &ContractionMap) -> Result<InducedWalk> {
    let eg = explicit(g)?;
    let nodes = path.iter().map(node).collect::<Result<Vec<u32>>>()?;
    let Some(&first) = nodes.first() else {
        return Err(Error::InvalidInput("path is empty".into()));
    };
    if eg.neighbors_of(first).is_none() || !map.is_kept(first) {
        return Err(Error::InvalidInput(format!(
            "path must start at a vertex of degree other than 2, got {first}"
        )));
    }
    let mut out = InducedWalk {
        vertices: vec![VertexKey::Node(first)],
        traversals: Vec::new(),
    };
    let mut departure: Option<HalfEdge> = None;
    for w in nodes.windows(2) {
        let (x, y) = (w[0], w[1]);
        let adjacent = eg.neighbors_of(x).is_some_and(|ns| ns.binary_search(&y).is_ok());
        if !adjacent {
            return Err(Error::InvalidInput(format!("{x} and {y} are not adjacent")));
        }
        if map.is_kept(x) {
            departure = map.port(x, y);
        }
        if map.is_kept(y) {
            let from = departure.expect("a corridor is entered before it is left");
            let to = map.port(y, x).expect("kept vertices have ports");
            debug_assert_eq!(from.edge, to.edge);
            out.traversals.push(Traversal {
                edge: from.edge,
                from: from.end,
                to: to.end,
            });
            out.vertices.push(VertexKey::Node(y));
        }
    }
    Ok(out)
}

/// Law of the first `v_horizon + 1` induced states of a walk on `g`,
/// obtained by enumerating at most `g_horizon` steps of `kernel`. Paths that
/// have not reached `v_horizon + 1` kept visits by then go to `short_mass`.
pub fn induced_prefix_distribution_truncated<K: Kernel>(
    g: &Graph,
    kernel: &K,
    map: &ContractionMap,
    start: &VertexKey,
    v_horizon: usize,
    g_horizon: usize,
) -> Result<PrefixDistribution<MultigraphState>> {
    check_horizon(v_horizon)?;
    if g_horizon > 64 {
        return Err(Error::LimitExceeded(format!("graph horizon {g_horizon} exceeds 64")));
    }
    let s0 = kernel.initial(start)?;
    let mut out = PrefixDistribution::new(v_horizon);
    let mut path = vec![kernel.position(&s0).clone()];
    induced_walk(g, &path, map)?;
    let mut ctx = Truncated {
        g,
        kernel,
        map,
        v_horizon,
        out: &mut out,
    };
    ctx.expand(&s0, Rational::one(), g_horizon, 1, &mut path)?;
    Ok(out)
}

struct Truncated<'a, K: Kernel> {
    g: &'a Graph,
    kernel: &'a K,
    map: &'a ContractionMap,
    v_horizon: usize,
    out: &'a mut PrefixDistribution<MultigraphState>,
}

impl<K: Kernel> Truncated<'_, K> {
    fn expand(
        &mut self,
        state: &K::State,
        p: Rational,
        budget: usize,
        visits: usize,
        path: &mut Vec<VertexKey>,
    ) -> Result<()> {
        if visits > self.v_horizon {
            let walk = induced_walk(self.g, path, self.map)?;
            self.out.add(&walk.states(), p);
            return Ok(());
        }
        if budget == 0 {
            self.out.short_mass += p;
            return Ok(());
        }
        for (next, q) in self.kernel.transitions(state)? {
            let v = self.kernel.position(&next).clone();
            let kept = self.map.is_kept(node(&v)?);
            path.push(v);
            self.expand(&next, &p * q, budget - 1, visits + usize::from(kept), path)?;
            path.pop();
        }
        Ok(())
    }
}

/// Exact law of the first `v_horizon + 1` induced NBRW states. Inside a
/// corridor NBRW moves deterministically, so enumeration with a budget of
/// `v_horizon` times the longest corridor is exhaustive.
pub fn induced_nbrw_prefix_distribution(
    g: &Graph,
    map: &ContractionMap,
    start: &VertexKey,
    v_horizon: usize,
) -> Result<PrefixDistribution<MultigraphState>> {
    let budget = v_horizon * map.max_length();
    let d = induced_prefix_distribution_truncated(g, &Nbrw(g), map, start, v_horizon, budget)?;
    debug_assert!(d.short_mass.is_zero());
    Ok(d)
}

/// Law of the next induced state of SRW started at kept vertex `v`: the
/// traversal through which it first reaches a kept vertex again. Computed by
/// an exact absorbing-chain solve over all degree-2 vertices.
pub fn srw_exit_law(
    g: &Graph,
    map: &ContractionMap,
    v: &VertexKey,
) -> Result<BTreeMap<Traversal, Rational>> {
    let eg = explicit(g)?;
    let v = node(v)?;
    let ns = eg
        .neighbors_of(v)
        .ok_or_else(|| Error::InvalidVertex(format!("{v} is not a vertex of the graph")))?;
    if !map.is_kept(v) {
        return Err(Error::InvalidInput(format!("{v} has degree 2")));
    }
    let interior: Vec<u32> = map.interior_of.keys().copied().collect();
    let index: BTreeMap<u32, usize> = interior.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // outcomes: arrival half-edges at kept vertices reached from the interior
    let mut outcomes: Vec<HalfEdge> = Vec::new();
    let mut outcome_index: BTreeMap<HalfEdge, usize> = BTreeMap::new();
    for &x in &interior {
        for &y in eg.neighbors_of(x).unwrap_or_default() {
            if map.is_kept(y) {
                let h = map.port(y, x).expect("kept vertices have ports");
                outcome_index.entry(h).or_insert_with(|| {
                    outcomes.push(h);
                    outcomes.len() - 1
                });
            }
        }
    }
    let n = interior.len();
    let half = ratio(1, 2);
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![vec![Rational::zero(); outcomes.len()]; n];
    for (i, &x) in interior.iter().enumerate() {
        a[i][i] = Rational::one();
        for &y in eg.neighbors_of(x).unwrap_or_default() {
            match index.get(&y) {
                Some(&j) => a[i][j] -= &half,
                None => {
                    let h = map.port(y, x).expect("kept vertices have ports");
                    b[i][outcome_index[&h]] += &half;
                }
            }
        }
    }
    let h = solve(a, b)?;

    let step = ratio(1, ns.len() as i64);
    let mut law = BTreeMap::new();
    for &w in ns {
        let dep = map.port(v, w).expect("kept vertices have ports");
        if map.is_kept(w) {
            let arr = map.port(w, v).expect("kept vertices have ports");
            *law.entry(Traversal { edge: dep.edge, from: dep.end, to: arr.end })
                .or_insert_with(Rational::zero) += &step;
            continue;
        }
        for (k, q) in h[index[&w]].iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let arr = outcomes[k];
            if arr.edge != dep.edge {
                return Err(Error::InvalidState(format!(
                    "walk entering corridor {} left through corridor {}",
                    dep.edge, arr.edge
                )));
            }
            *law.entry(Traversal { edge: dep.edge, from: dep.end, to: arr.end })
                .or_insert_with(Rational::zero) += &step * q;
        }
    }
    Ok(law)
}

/// Exact law of the first `v_horizon + 1` induced SRW states.
pub fn induced_srw_prefix_distribution(
    g: &Graph,
    mg: &WeightedMultigraph,
    map: &ContractionMap,
    start: &VertexKey,
    v_horizon: usize,
) -> Result<PrefixDistribution<MultigraphState>> {
    check_horizon(v_horizon)?;
    if !mg.contains(start) {
        return Err(Error::InvalidInput(format!("{start} is not a kept vertex")));
    }
    let mut exits = BTreeMap::new();
    for v in mg.vertices() {
        exits.insert(v.clone(), srw_exit_law(g, map, v)?);
    }
    let s0 = MultigraphState {
        vertex: start.clone(),
        last: None,
    };
    let mut out = PrefixDistribution::new(v_horizon);
    let mut seq = vec![s0];
    expand_exits(mg, &exits, Rational::one(), v_horizon, &mut seq, &mut out);
    Ok(out)
}

fn expand_exits(
    mg: &WeightedMultigraph,
    exits: &BTreeMap<VertexKey, BTreeMap<Traversal, Rational>>,
    p: Rational,
    remaining: usize,
    seq: &mut Vec<MultigraphState>,
    out: &mut PrefixDistribution<MultigraphState>,
) {
    if remaining == 0 {
        out.add(seq, p);
        return;
    }
    let v = seq.last().expect("sequence is nonempty").vertex.clone();
    for (t, q) in &exits[&v] {
        seq.push(MultigraphState {
            vertex: mg.endpoint(t.arrival()).clone(),
            last: Some(*t),
        });
        expand_exits(mg, exits, &p * q, remaining - 1, seq, out);
        seq.pop();
    }
}

/// Solves `a x = b` for square nonsingular `a` by Gauss-Jordan elimination.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidState("singular absorption system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut().chain(b[col].iter_mut()) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            for c in 0..b[r].len() {
                let d = &f * &b[col][c];
                b[r][c] -= d;
            }
        }
    }
    Ok(b)
}

/// Whether every vertex of `mg` has degree `k1` or `k2`, `k1 > k2`, and every
/// edge joins a degree-`k1` vertex to a degree-`k2` vertex. Loops fail.
pub fn check_final_proposition_shape(mg: &WeightedMultigraph, k1: usize, k2: usize) -> bool {
    if k1 <= k2 || mg.has_loops() {
        return false;
    }
    let deg = |v: &VertexKey| mg.degree(v).unwrap_or(0);
    mg.vertices().iter().all(|v| deg(v) == k1 || deg(v) == k2)
        && mg.edges().iter().all(|e| deg(&e.a) != deg(&e.b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, complete_bipartite, complete_graph, cycle_graph, theta_graph};
    use crate::walkers::{enumerate_with, NbrwEdge, Srw, Wrw};

    fn n(i: u32) -> VertexKey {
        VertexKey::Node(i)
    }

    fn path(ids: &[u32]) -> Vec<VertexKey> {
        ids.iter().copied().map(n).collect()
    }

    fn labeled_edges(mg: &WeightedMultigraph) -> Vec<(VertexKey, VertexKey, u64)> {
        let mut v: Vec<_> = mg
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = if e.a <= e.b { (&e.a, &e.b) } else { (&e.b, &e.a) };
                (a.clone(), b.clone(), e.resistance)
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn corridor_census() {
        let k4 = complete_graph(4);
        let cs = find_corridors(&k4.subdivide(1).unwrap()).unwrap();
        assert_eq!(cs.len(), 6);
        assert!(cs.iter().all(|c| c.length == 2 && c.interior.len() == 1));

        let cs = find_corridors(&k4).unwrap();
        assert_eq!(cs.len(), 6);
        assert!(cs.iter().all(|c| c.length == 1 && c.interior.is_empty()));
        let ends: Vec<_> = cs.iter().map(|c| (c.endpoints.0.clone(), c.endpoints.1.clone())).collect();
        assert_eq!(ends[0], (n(0), n(1)));
        assert_eq!(ends[5], (n(2), n(3)));
    }

    #[test]
    fn rejected_structures() {
        assert!(matches!(find_corridors(&cycle_graph(6)), Err(Error::UnsupportedStructure(_))));
        let path3 = Graph::from_edges([(0, 1), (1, 2)], []).unwrap();
        assert!(matches!(find_corridors(&path3), Err(Error::UnsupportedStructure(_))));
        let two = Graph::from_edges(
            (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).chain([(10, 11), (11, 12), (10, 12)]),
            [],
        )
        .unwrap();
        assert!(matches!(find_corridors(&two), Err(Error::UnsupportedStructure(_))));
        // a degree-2 cycle hanging off a kept vertex is a loop corridor
        let tadpole = Graph::from_edges(
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 5), (5, 0)],
            [],
        )
        .unwrap();
        let cs = find_corridors(&tadpole).unwrap();
        assert!(cs.iter().any(|c| c.is_loop() && c.length == 3));
        assert!(matches!(
            find_corridors(&Graph::lattice(2).unwrap()),
            Err(Error::UnsupportedGraph(_))
        ));
    }

    #[test]
    fn contraction_examples() {
        let (mg, _) = contract(&complete_graph(4).subdivide(1).unwrap()).unwrap();
        let expected: Vec<_> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (n(a), n(b), 2)))
            .collect();
        assert_eq!(labeled_edges(&mg), expected);

        let (mg, _) = contract(&theta_graph(&[1, 2, 3])).unwrap();
        assert_eq!(mg.vertices().len(), 2);
        assert_eq!(labeled_edges(&mg), vec![(n(0), n(1), 1), (n(0), n(1), 2), (n(0), n(1), 3)]);
        assert!(mg.has_parallel_edges());

        let (mg, _) = contract(&bouquet(&[3, 3])).unwrap();
        assert_eq!(mg.vertices().len(), 1);
        assert_eq!(mg.degree(&n(0)).unwrap(), 4);
        assert_eq!(labeled_edges(&mg), vec![(n(0), n(0), 3), (n(0), n(0), 3)]);
    }

    #[test]
    fn conservation() {
        for g in [
            complete_graph(5).subdivide(2).unwrap(),
            theta_graph(&[1, 4, 2, 5]),
            bouquet(&[3, 4, 7]),
            complete_bipartite(3, 4).subdivide(1).unwrap(),
        ] {
            let e = g.explicit().unwrap();
            let (mg, map) = contract(&g).unwrap();
            let lengths: usize = map.corridors().iter().map(|c| c.length).sum();
            let interiors: usize = map.corridors().iter().map(|c| c.interior.len()).sum();
            assert_eq!(lengths, e.edge_count());
            assert_eq!(mg.vertices().len() + interiors, e.vertex_count());
            for (a, b) in e.edges() {
                assert!(map.edge_of(a, b).is_some());
            }
            for v in e.vertices() {
                let kept = e.neighbors_of(v).unwrap().len() != 2;
                assert_eq!(map.is_kept(v), kept);
                assert_eq!(map.corridor_of(v).is_none(), kept);
            }
        }
    }

    #[test]
    fn round_trip() {
        for t in 0..4 {
            for g in [complete_graph(4), complete_graph(5), complete_bipartite(3, 4)] {
                let (mg, _) = contract(&g.subdivide(t).unwrap()).unwrap();
                let expected: Vec<_> = g
                    .explicit()
                    .unwrap()
                    .edges()
                    .into_iter()
                    .map(|(a, b)| (n(a), n(b), u64::from(t) + 1))
                    .collect();
                assert_eq!(labeled_edges(&mg), expected);
            }
        }
    }

    #[test]
    fn induced_walk_examples() {
        let g = complete_graph(4).subdivide(1).unwrap();
        let (_, map) = contract(&g).unwrap();
        // midpoint of 0-1 is 4 (first subdivided edge)
        let w = induced_walk(&g, &path(&[0, 4, 1]), &map).unwrap();
        assert_eq!(w.vertices, path(&[0, 1]));
        assert!(!w.traversals[0].is_reflection());
        let w = induced_walk(&g, &path(&[0, 4, 0]), &map).unwrap();
        assert_eq!(w.vertices, path(&[0, 0]));
        assert_eq!(w.traversals[0].edge, map.edge_of(0, 4).unwrap());
        assert!(w.traversals[0].is_reflection());
        let w = induced_walk(&g, &path(&[0, 4]), &map).unwrap();
        assert_eq!(w.vertices, path(&[0]));

        let k4 = complete_graph(4);
        let (_, map4) = contract(&k4).unwrap();
        let p = path(&[0, 1, 2, 0, 3]);
        assert_eq!(induced_walk(&k4, &p, &map4).unwrap().vertices, p);

        assert!(matches!(induced_walk(&g, &path(&[4, 0]), &map), Err(Error::InvalidInput(_))));
        assert!(matches!(induced_walk(&g, &path(&[0, 1]), &map), Err(Error::InvalidInput(_))));
        assert!(matches!(induced_walk(&g, &[], &map), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn loop_corridor_traversals() {
        let g = bouquet(&[3]);
        let g = Graph::from_edges(
            g.explicit().unwrap().edges().into_iter().chain([(0, 10), (0, 11), (10, 11), (10, 12), (11, 12)]),
            [],
        )
        .unwrap();
        let (mg, map) = contract(&g).unwrap();
        let loop_id = map.edge_of(0, 1).unwrap();
        assert!(mg.edge(loop_id).unwrap().is_loop());
        let around = induced_walk(&g, &path(&[0, 1, 2, 0]), &map).unwrap();
        let back = induced_walk(&g, &path(&[0, 1, 0]), &map).unwrap();
        assert_eq!(around.vertices, back.vertices);
        assert!(!around.traversals[0].is_reflection());
        assert!(back.traversals[0].is_reflection());
    }

    fn exact_states<K: Kernel<State = MultigraphState>>(
        k: &K,
        start: &VertexKey,
        m: usize,
    ) -> PrefixDistribution<MultigraphState> {
        enumerate_with(k, start, m, |s| s.clone()).unwrap()
    }

    #[test]
    fn gamblers_ruin_exit_law() {
        // corridor of length r: cross with probability 1/r per entry
        let g = theta_graph(&[1, 2, 3]);
        let (_, map) = contract(&g).unwrap();
        let law = srw_exit_law(&g, &map, &n(0)).unwrap();
        let third = ratio(1, 3);
        let mut by_edge: BTreeMap<(usize, bool), Rational> = BTreeMap::new();
        for (t, p) in &law {
            *by_edge.entry((t.edge, t.is_reflection())).or_insert_with(Rational::zero) += p;
        }
        for c in 0..3 {
            let r = map.corridors()[c].length as i64;
            assert_eq!(by_edge.get(&(c, false)).cloned().unwrap(), &third * ratio(1, r));
            let back = by_edge.get(&(c, true)).cloned().unwrap_or_else(Rational::zero);
            assert_eq!(back, &third * ratio(r - 1, r));
        }
        assert_eq!(law.values().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn induced_srw_is_reflecting_wrw() {
        for g in [complete_graph(4).subdivide(1).unwrap(), theta_graph(&[1, 2, 3]), bouquet(&[3, 4])] {
            let (mg, map) = contract(&g).unwrap();
            let start = mg.vertices().iter().next().unwrap().clone();
            let induced = induced_srw_prefix_distribution(&g, &mg, &map, &start, 3).unwrap();
            let wrw = exact_states(&Wrw::reflecting(&mg), &start, 3);
            assert_eq!(induced, wrw);
            assert_eq!(induced.total(), Rational::one());
        }
    }

    #[test]
    fn truncated_enumeration_approaches_exact() {
        let g = theta_graph(&[1, 2, 3]);
        let (mg, map) = contract(&g).unwrap();
        let exact = induced_srw_prefix_distribution(&g, &mg, &map, &n(0), 2).unwrap();
        let mut last_short = Rational::one();
        for budget in [6, 10, 14] {
            let t = induced_prefix_distribution_truncated(&g, &Srw(&g), &map, &n(0), 2, budget).unwrap();
            assert_eq!(t.total(), Rational::one());
            for (seq, p) in &t.entries {
                assert!(*p <= exact.probability(seq));
            }
            let missing: Rational = exact.entries.iter().map(|(s, p)| p - t.probability(s)).sum();
            assert_eq!(missing, t.short_mass);
            assert!(t.short_mass < last_short);
            last_short = t.short_mass.clone();
        }
    }

    #[test]
    fn induced_nbrw_is_edge_nbrw() {
        for g in [complete_graph(4).subdivide(1).unwrap(), theta_graph(&[1, 2, 3]), bouquet(&[3, 4])] {
            let (mg, map) = contract(&g).unwrap();
            let start = mg.vertices().iter().next().unwrap().clone();
            let induced = induced_nbrw_prefix_distribution(&g, &map, &start, 3).unwrap();
            assert!(induced.short_mass.is_zero());
            assert!(induced
                .entries
                .keys()
                .all(|seq| seq.iter().all(|s| s.last.map_or(true, |t| !t.is_reflection()))));
            assert_eq!(induced, exact_states(&NbrwEdge(&mg), &start, 3));
        }
    }

    #[test]
    fn final_proposition_shape() {
        let (mg, _) = contract(&complete_bipartite(3, 4).subdivide(1).unwrap()).unwrap();
        assert!(check_final_proposition_shape(&mg, 4, 3));
        assert!(!check_final_proposition_shape(&mg, 3, 4));
        assert!(!check_final_proposition_shape(&mg, 5, 3));
        let (mg, _) = contract(&complete_graph(4).subdivide(1).unwrap()).unwrap();
        for (k1, k2) in [(3, 3), (4, 3), (3, 2)] {
            assert!(!check_final_proposition_shape(&mg, k1, k2));
        }
        let (mg, _) = contract(&bouquet(&[3, 3])).unwrap();
        assert!(!check_final_proposition_shape(&mg, 4, 2));
    }
}
