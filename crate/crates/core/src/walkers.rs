//! Transition kernels for the walks, their samplers, and the exact
//! finite-horizon prefix enumeration.
//!
//! Each walk is a [`Kernel`]: it exposes its exact one-step law as rational
//! probabilities and a sampler drawing from the same law in double
//! precision. The enumeration oracle expands the exact law depth first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{End, Graph, HalfEdge, HalfEdgeState, VertexKey, WeightedMultigraph};
use crate::rational::{ratio, to_f64, Rational};

/// Largest horizon accepted by the enumeration oracles.
pub const MAX_ENUMERATION_HORIZON: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Srw,
    Nbrw,
    Wrw,
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Srw => "srw",
            WalkKind::Nbrw => "nbrw",
            WalkKind::Wrw => "wrw",
        })
    }
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "srw" => Ok(WalkKind::Srw),
            "nbrw" => Ok(WalkKind::Nbrw),
            "wrw" => Ok(WalkKind::Wrw),
            other => Err(Error::InvalidParameter(format!("unknown walk kind {other:?}"))),
        }
    }
}

/// True iff `seq[i - 1] != seq[i + 1]` for every interior index.
pub fn is_backtrack_free<T: PartialEq>(seq: &[T]) -> bool {
    seq.windows(3).all(|w| w[0] != w[2])
}

/// One step of a multigraph walk: leave through end `from` of `edge`,
/// arrive through end `to`. `from == to` only for the reflecting WRW rule,
/// where the walker enters a corridor and comes back out the same way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Traversal {
    pub edge: usize,
    pub from: End,
    pub to: End,
}

impl Traversal {
    pub fn crossing(departure: HalfEdge) -> Self {
        Traversal {
            edge: departure.edge,
            from: departure.end,
            to: departure.end.opposite(),
        }
    }

    pub fn reflection(departure: HalfEdge) -> Self {
        Traversal {
            edge: departure.edge,
            from: departure.end,
            to: departure.end,
        }
    }

    pub fn is_reflection(&self) -> bool {
        self.from == self.to
    }

    pub fn arrival(&self) -> HalfEdgeState {
        HalfEdge::new(self.edge, self.to)
    }
}

/// Walker state on a multigraph: position plus the last traversal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultigraphState {
    pub vertex: VertexKey,
    pub last: Option<Traversal>,
}

/// Non-backtracking state on a simple graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NbState {
    pub prev: Option<VertexKey>,
    pub current: VertexKey,
}

/// A Markov walk with an exact rational one-step law.
pub trait Kernel {
    type State: Clone + Ord + fmt::Debug;

    fn initial(&self, start: &VertexKey) -> Result<Self::State>;

    fn position<'s>(&self, state: &'s Self::State) -> &'s VertexKey;

    /// Exact law of the next state; probabilities are positive and sum to 1.
    fn transitions(&self, state: &Self::State) -> Result<Vec<(Self::State, Rational)>>;

    fn sample<R: Rng + ?Sized>(&self, state: &Self::State, rng: &mut R) -> Result<Self::State>;
}

/// Simple random walk: uniform over neighbors.
#[derive(Clone, Copy, Debug)]
pub struct Srw<'g>(pub &'g Graph);

/// Non-backtracking random walk. The first step, having no predecessor,
/// is uniform over all neighbors; later steps are uniform over the
/// neighbors other than the previous vertex.
#[derive(Clone, Copy, Debug)]
pub struct Nbrw<'g>(pub &'g Graph);

/// Non-backtracking walk on a multigraph: never leaves through the
/// half-edge it arrived on. Parallel edges and the other end of a loop
/// remain available.
#[derive(Clone, Copy, Debug)]
pub struct NbrwEdge<'g>(pub &'g WeightedMultigraph);

/// How a weighted walk spends the weight of a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WrwRule {
    /// Each half-edge is chosen with probability proportional to the
    /// conductance `1/r` of its edge; the walker always crosses.
    #[default]
    Conductance,
    /// Each half-edge at a vertex carries weight 1, split into a crossing
    /// of weight `1/r` and a reflection (return through the same end) of
    /// weight `1 - 1/r`. This is the law of a simple walk on the subdivided
    /// graph watched only at vertices of degree other than 2, when an edge of
    /// resistance `r` stands for a corridor of `r` unit edges.
    ReflectingCorridors,
}

/// Weighted random walk on a multigraph.
#[derive(Clone, Copy, Debug)]
pub struct Wrw<'g> {
    pub graph: &'g WeightedMultigraph,
    pub rule: WrwRule,
}

impl<'g> Wrw<'g> {
    pub fn new(graph: &'g WeightedMultigraph) -> Self {
        Wrw {
            graph,
            rule: WrwRule::Conductance,
        }
    }

    pub fn reflecting(graph: &'g WeightedMultigraph) -> Self {
        Wrw {
            graph,
            rule: WrwRule::ReflectingCorridors,
        }
    }

    fn weighted_moves(&self, v: &VertexKey) -> Result<Vec<(Traversal, Rational)>> {
        let hs = self.graph.half_edges(v)?;
        if hs.is_empty() {
            return Err(Error::no_move(v));
        }
        let mut moves = Vec::with_capacity(2 * hs.len());
        for &h in hs {
            let c = self.graph.edge(h.edge).expect("incident edge exists").conductance();
            match self.rule {
                WrwRule::Conductance => moves.push((Traversal::crossing(h), c)),
                WrwRule::ReflectingCorridors => {
                    let back = Rational::one() - &c;
                    moves.push((Traversal::crossing(h), c));
                    if !back.is_zero() {
                        moves.push((Traversal::reflection(h), back));
                    }
                }
            }
        }
        Ok(moves)
    }
}

fn uniform(n: usize) -> Rational {
    ratio(1, n as i64)
}

impl Kernel for Srw<'_> {
    type State = VertexKey;

    fn initial(&self, start: &VertexKey) -> Result<VertexKey> {
        self.0.degree(start)?;
        Ok(start.clone())
    }

    fn position<'s>(&self, state: &'s VertexKey) -> &'s VertexKey {
        state
    }

    fn transitions(&self, v: &VertexKey) -> Result<Vec<(VertexKey, Rational)>> {
        let ns = self.0.neighbors(v)?;
        if ns.is_empty() {
            return Err(Error::no_move(v));
        }
        let p = uniform(ns.len());
        Ok(ns.into_iter().map(|w| (w, p.clone())).collect())
    }

    fn sample<R: Rng + ?Sized>(&self, v: &VertexKey, rng: &mut R) -> Result<VertexKey> {
        srw_step(self.0, v, rng)
    }
}

impl Kernel for Nbrw<'_> {
    type State = NbState;

    fn initial(&self, start: &VertexKey) -> Result<NbState> {
        self.0.degree(start)?;
        Ok(NbState {
            prev: None,
            current: start.clone(),
        })
    }

    fn position<'s>(&self, state: &'s NbState) -> &'s VertexKey {
        &state.current
    }

    fn transitions(&self, s: &NbState) -> Result<Vec<(NbState, Rational)>> {
        let mut ns = self.0.neighbors(&s.current)?;
        if let Some(prev) = &s.prev {
            let i = self.0.neighbor_index(&s.current, prev)?.ok_or_else(|| not_adjacent(prev, &s.current))?;
            ns.remove(i);
        }
        if ns.is_empty() {
            return Err(Error::no_move(&s.current));
        }
        let p = uniform(ns.len());
        Ok(ns
            .into_iter()
            .map(|w| {
                (
                    NbState {
                        prev: Some(s.current.clone()),
                        current: w,
                    },
                    p.clone(),
                )
            })
            .collect())
    }

    fn sample<R: Rng + ?Sized>(&self, s: &NbState, rng: &mut R) -> Result<NbState> {
        let next = match &s.prev {
            None => srw_step(self.0, &s.current, rng)?,
            Some(prev) => nbrw_step(self.0, prev, &s.current, rng)?,
        };
        Ok(NbState {
            prev: Some(s.current.clone()),
            current: next,
        })
    }
}

impl Kernel for NbrwEdge<'_> {
    type State = MultigraphState;

    fn initial(&self, start: &VertexKey) -> Result<MultigraphState> {
        self.0.degree(start)?;
        Ok(MultigraphState {
            vertex: start.clone(),
            last: None,
        })
    }

    fn position<'s>(&self, state: &'s MultigraphState) -> &'s VertexKey {
        &state.vertex
    }

    fn transitions(&self, s: &MultigraphState) -> Result<Vec<(MultigraphState, Rational)>> {
        let allowed = edge_departures(self.0, &s.vertex, s.last.map(|t| t.arrival()))?;
        let p = uniform(allowed.len());
        Ok(allowed
            .into_iter()
            .map(|h| (advance(self.0, Traversal::crossing(h)), p.clone()))
            .collect())
    }

    fn sample<R: Rng + ?Sized>(&self, s: &MultigraphState, rng: &mut R) -> Result<MultigraphState> {
        let allowed = edge_departures(self.0, &s.vertex, s.last.map(|t| t.arrival()))?;
        let h = allowed[rng.gen_range(0..allowed.len())];
        Ok(advance(self.0, Traversal::crossing(h)))
    }
}

impl Kernel for Wrw<'_> {
    type State = MultigraphState;

    fn initial(&self, start: &VertexKey) -> Result<MultigraphState> {
        self.graph.degree(start)?;
        Ok(MultigraphState {
            vertex: start.clone(),
            last: None,
        })
    }

    fn position<'s>(&self, state: &'s MultigraphState) -> &'s VertexKey {
        &state.vertex
    }

    fn transitions(&self, s: &MultigraphState) -> Result<Vec<(MultigraphState, Rational)>> {
        let moves = self.weighted_moves(&s.vertex)?;
        let total: Rational = moves.iter().map(|(_, w)| w).sum();
        Ok(moves
            .into_iter()
            .map(|(t, w)| (advance(self.graph, t), w / &total))
            .collect())
    }

    fn sample<R: Rng + ?Sized>(&self, s: &MultigraphState, rng: &mut R) -> Result<MultigraphState> {
        let moves = self.weighted_moves(&s.vertex)?;
        let weights: Vec<f64> = moves.iter().map(|(_, w)| to_f64(w)).collect();
        let i = pick_weighted(&weights, rng);
        Ok(advance(self.graph, moves[i].0))
    }
}

fn not_adjacent(prev: &VertexKey, current: &VertexKey) -> Error {
    Error::InvalidState(format!("previous vertex {prev} is not adjacent to {current}"))
}

fn advance(mg: &WeightedMultigraph, t: Traversal) -> MultigraphState {
    MultigraphState {
        vertex: mg.endpoint(t.arrival()).clone(),
        last: Some(t),
    }
}

/// Half-edges at `v` other than `arrival` (when given).
fn edge_departures(
    mg: &WeightedMultigraph,
    v: &VertexKey,
    arrival: Option<HalfEdgeState>,
) -> Result<Vec<HalfEdge>> {
    let hs = mg.half_edges(v)?;
    if let Some(a) = arrival {
        mg.check_half_edge(a)?;
        if mg.endpoint(a) != v {
            return Err(Error::InvalidState(format!(
                "arrival half-edge {a:?} does not end at {v}"
            )));
        }
    }
    let allowed: Vec<HalfEdge> = hs.iter().copied().filter(|&h| Some(h) != arrival).collect();
    if allowed.is_empty() {
        return Err(Error::no_move(v));
    }
    Ok(allowed)
}

fn pick_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// Uniform neighbor of `current`.
pub fn srw_step<R: Rng + ?Sized>(g: &Graph, current: &VertexKey, rng: &mut R) -> Result<VertexKey> {
    let deg = g.degree(current)?;
    if deg == 0 {
        return Err(Error::no_move(current));
    }
    g.nth_neighbor(current, rng.gen_range(0..deg))
}

/// Uniform neighbor of `current` other than `prev`.
pub fn nbrw_step<R: Rng + ?Sized>(
    g: &Graph,
    prev: &VertexKey,
    current: &VertexKey,
    rng: &mut R,
) -> Result<VertexKey> {
    let deg = g.degree(current)?;
    let back = g.neighbor_index(current, prev)?.ok_or_else(|| not_adjacent(prev, current))?;
    if deg < 2 {
        return Err(Error::no_move(current));
    }
    let mut i = rng.gen_range(0..deg - 1);
    if i >= back {
        i += 1;
    }
    g.nth_neighbor(current, i)
}

/// Edge-based non-backtracking step from the head of `arrival`.
pub fn nbrw_step_edge<R: Rng + ?Sized>(
    mg: &WeightedMultigraph,
    arrival: HalfEdgeState,
    rng: &mut R,
) -> Result<HalfEdgeState> {
    mg.check_half_edge(arrival)?;
    let v = mg.endpoint(arrival).clone();
    let allowed = edge_departures(mg, &v, Some(arrival))?;
    Ok(allowed[rng.gen_range(0..allowed.len())].twin())
}

/// Conductance-weighted step from `current`; returns the arrival half-edge.
pub fn wrw_step<R: Rng + ?Sized>(
    mg: &WeightedMultigraph,
    current: &VertexKey,
    rng: &mut R,
) -> Result<HalfEdgeState> {
    let state = MultigraphState {
        vertex: current.clone(),
        last: None,
    };
    let next = Wrw::new(mg).sample(&state, rng)?;
    Ok(next.last.expect("a step was taken").arrival())
}

/// Exact one-step law of `kernel` from `state`.
pub fn step_distribution<K: Kernel>(
    kernel: &K,
    state: &K::State,
) -> Result<BTreeMap<K::State, Rational>> {
    let mut out = BTreeMap::new();
    for (s, p) in kernel.transitions(state)? {
        *out.entry(s).or_insert_with(Rational::zero) += p;
    }
    Ok(out)
}

/// Samples `n` steps from `start`. A `NoLegalMove` carries the 1-based
/// index of the step that failed.
pub fn sample_path<K: Kernel, R: Rng + ?Sized>(
    kernel: &K,
    start: &VertexKey,
    n: usize,
    rng: &mut R,
) -> Result<Vec<VertexKey>> {
    let mut state = kernel.initial(start)?;
    let mut path = Vec::with_capacity(n + 1);
    path.push(start.clone());
    for i in 1..=n {
        state = kernel.sample(&state, rng).map_err(|e| e.at_step(i))?;
        path.push(kernel.position(&state).clone());
    }
    Ok(path)
}

/// Borrowed graph a walk runs on.
#[derive(Clone, Copy, Debug)]
pub enum Network<'g> {
    Simple(&'g Graph),
    Weighted(&'g WeightedMultigraph),
}

/// `sample_path` dispatched on the walk kind. SRW and NBRW need a simple
/// graph (NBRW on a multigraph is the edge-based walk); WRW needs a
/// weighted multigraph and uses the conductance rule.
pub fn sample_walk<R: Rng + ?Sized>(
    kind: WalkKind,
    network: Network<'_>,
    start: &VertexKey,
    n: usize,
    rng: &mut R,
) -> Result<Vec<VertexKey>> {
    match (kind, network) {
        (WalkKind::Srw, Network::Simple(g)) => sample_path(&Srw(g), start, n, rng),
        (WalkKind::Nbrw, Network::Simple(g)) => sample_path(&Nbrw(g), start, n, rng),
        (WalkKind::Nbrw, Network::Weighted(mg)) => sample_path(&NbrwEdge(mg), start, n, rng),
        (WalkKind::Wrw, Network::Weighted(mg)) => sample_path(&Wrw::new(mg), start, n, rng),
        (kind, _) => Err(Error::UnsupportedGraph(format!(
            "{kind} is not defined on this kind of graph"
        ))),
    }
}

/// Exact law of the first `horizon + 1` tokens of a process.
///
/// `short_mass` holds the probability of outcomes that ended before
/// reaching the horizon; `entries` plus `short_mass` sum to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixDistribution<T = VertexKey> {
    pub horizon: usize,
    pub entries: BTreeMap<Vec<T>, Rational>,
    pub short_mass: Rational,
}

impl<T: Ord + Clone> PrefixDistribution<T> {
    pub fn new(horizon: usize) -> Self {
        PrefixDistribution {
            horizon,
            entries: BTreeMap::new(),
            short_mass: Rational::zero(),
        }
    }

    /// Adds `p` to the prefix of `seq`, or to `short_mass` when `seq` has
    /// fewer than `horizon + 1` tokens.
    pub fn add(&mut self, seq: &[T], p: Rational) {
        if seq.len() > self.horizon {
            let key = seq[..=self.horizon].to_vec();
            *self.entries.entry(key).or_insert_with(Rational::zero) += p;
        } else {
            self.short_mass += p;
        }
    }

    pub fn probability(&self, seq: &[T]) -> Rational {
        self.entries.get(seq).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.entries.values().sum::<Rational>() + &self.short_mass
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Law of the first `horizon + 1` tokens, `horizon <= self.horizon`.
    pub fn marginalize(&self, horizon: usize) -> Self {
        assert!(horizon <= self.horizon, "cannot marginalize to a longer horizon");
        let mut out = PrefixDistribution::new(horizon);
        out.short_mass = self.short_mass.clone();
        for (seq, p) in &self.entries {
            out.add(seq, p.clone());
        }
        out
    }

    /// Pushes every token through `f`, merging entries that collide.
    pub fn map_tokens<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> PrefixDistribution<U> {
        let mut out = PrefixDistribution::new(self.horizon);
        out.short_mass = self.short_mass.clone();
        for (seq, p) in &self.entries {
            let mapped: Vec<U> = seq.iter().map(&mut f).collect();
            *out.entries.entry(mapped).or_insert_with(Rational::zero) += p;
        }
        out
    }

    /// Merges another distribution on the same horizon into this one.
    pub fn absorb(&mut self, other: PrefixDistribution<T>) {
        assert_eq!(self.horizon, other.horizon);
        self.short_mass += other.short_mass;
        for (seq, p) in other.entries {
            *self.entries.entry(seq).or_insert_with(Rational::zero) += p;
        }
    }
}

pub(crate) fn check_horizon(m: usize) -> Result<()> {
    if m > MAX_ENUMERATION_HORIZON {
        return Err(Error::LimitExceeded(format!(
            "horizon {m} exceeds the enumeration limit {MAX_ENUMERATION_HORIZON}"
        )));
    }
    Ok(())
}

/// Exact law of the state sequence `(s_0, ..., s_m)`, each state mapped
/// to a token by `token`.
pub fn enumerate_with<K: Kernel, T: Ord + Clone>(
    kernel: &K,
    start: &VertexKey,
    m: usize,
    token: impl Fn(&K::State) -> T,
) -> Result<PrefixDistribution<T>> {
    check_horizon(m)?;
    let s0 = kernel.initial(start)?;
    let mut out = PrefixDistribution::new(m);
    let mut tokens = vec![token(&s0)];
    expand(kernel, &s0, Rational::one(), m, &token, &mut tokens, &mut out)?;
    Ok(out)
}

fn expand<K: Kernel, T: Ord + Clone>(
    kernel: &K,
    state: &K::State,
    p: Rational,
    remaining: usize,
    token: &impl Fn(&K::State) -> T,
    tokens: &mut Vec<T>,
    out: &mut PrefixDistribution<T>,
) -> Result<()> {
    if remaining == 0 {
        out.add(tokens, p);
        return Ok(());
    }
    for (next, q) in kernel.transitions(state)? {
        tokens.push(token(&next));
        expand(kernel, &next, &p * q, remaining - 1, token, tokens, out)?;
        tokens.pop();
    }
    Ok(())
}

/// Exact law of the vertex sequence `(X_0, ..., X_m)`.
pub fn enumerate_prefix_distribution<K: Kernel>(
    kernel: &K,
    start: &VertexKey,
    m: usize,
) -> Result<PrefixDistribution> {
    enumerate_with(kernel, start, m, |s| kernel.position(s).clone())
}

/// `enumerate_prefix_distribution` dispatched on the walk kind.
pub fn enumerate_walk(
    kind: WalkKind,
    network: Network<'_>,
    start: &VertexKey,
    m: usize,
) -> Result<PrefixDistribution> {
    match (kind, network) {
        (WalkKind::Srw, Network::Simple(g)) => enumerate_prefix_distribution(&Srw(g), start, m),
        (WalkKind::Nbrw, Network::Simple(g)) => enumerate_prefix_distribution(&Nbrw(g), start, m),
        (WalkKind::Nbrw, Network::Weighted(mg)) => {
            enumerate_prefix_distribution(&NbrwEdge(mg), start, m)
        }
        (WalkKind::Wrw, Network::Weighted(mg)) => {
            enumerate_prefix_distribution(&Wrw::new(mg), start, m)
        }
        (kind, _) => Err(Error::UnsupportedGraph(format!(
            "{kind} is not defined on this kind of graph"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, counterexample_graph, Counterexample};
    use crate::rng::stream;
    use std::collections::BTreeSet;

    fn n(i: u32) -> VertexKey {
        VertexKey::Node(i)
    }

    fn theta(r: [u64; 3]) -> WeightedMultigraph {
        WeightedMultigraph::new([n(0), n(1)], r.map(|r| (n(0), n(1), r))).unwrap()
    }

    fn vertex_law<K: Kernel>(k: &K, s: &K::State) -> BTreeMap<VertexKey, Rational> {
        let mut out = BTreeMap::new();
        for (t, p) in k.transitions(s).unwrap() {
            *out.entry(k.position(&t).clone()).or_insert_with(Rational::zero) += p;
        }
        out
    }

    #[test]
    fn srw_law_is_uniform() {
        let k4 = complete_graph(4);
        let law = step_distribution(&Srw(&k4), &n(0)).unwrap();
        assert_eq!(law.len(), 3);
        assert!(law.values().all(|p| *p == ratio(1, 3)));

        let z1 = Graph::lattice(1).unwrap();
        let law = step_distribution(&Srw(&z1), &VertexKey::point(vec![0])).unwrap();
        assert!(law.values().all(|p| *p == ratio(1, 2)));

        let pendant = Graph::from_edges([(0, 1), (1, 2)], []).unwrap();
        let law = step_distribution(&Srw(&pendant), &n(0)).unwrap();
        assert_eq!(law, BTreeMap::from([(n(1), ratio(1, 1))]));

        let isolated = Graph::from_edges([], [0]).unwrap();
        let err = srw_step(&isolated, &n(0), &mut stream(1)).unwrap_err();
        assert!(matches!(err, Error::NoLegalMove { .. }));
    }

    #[test]
    fn nbrw_law() {
        let t3 = Graph::regular_tree(3).unwrap();
        let s = NbState {
            prev: Some(VertexKey::word(vec![1])),
            current: VertexKey::word(vec![1, 0]),
        };
        let law = vertex_law(&Nbrw(&t3), &s);
        assert_eq!(law.len(), 2);
        assert!(law.values().all(|p| *p == ratio(1, 2)));
        assert!(!law.contains_key(&VertexKey::word(vec![1])));

        let path = Graph::regular_tree(2).unwrap();
        let s = NbState {
            prev: Some(VertexKey::root()),
            current: VertexKey::word(vec![0]),
        };
        let law = vertex_law(&Nbrw(&path), &s);
        assert_eq!(law, BTreeMap::from([(VertexKey::word(vec![0, 0]), ratio(1, 1))]));

        let g = counterexample_graph();
        let s = NbState {
            prev: Some(n(Counterexample::X)),
            current: n(Counterexample::V),
        };
        let law = vertex_law(&Nbrw(&g), &s);
        assert_eq!(
            law,
            BTreeMap::from([
                (n(Counterexample::Y), ratio(1, 2)),
                (n(Counterexample::Z), ratio(1, 2))
            ])
        );
    }

    #[test]
    fn nbrw_errors() {
        let pendant = Graph::from_edges([(0, 1), (1, 2)], []).unwrap();
        let mut rng = stream(3);
        let err = nbrw_step(&pendant, &n(1), &n(0), &mut rng).unwrap_err();
        assert!(matches!(err, Error::NoLegalMove { .. }));
        let err = nbrw_step(&pendant, &n(2), &n(0), &mut rng).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn sample_path_attaches_step_index() {
        let g = Graph::from_edges([(0, 1), (1, 2)], []).unwrap();
        let mut rng = stream(5);
        // NBRW from 0 reaches 2 after two steps and is stuck there
        let err = sample_path(&Nbrw(&g), &n(0), 5, &mut rng).unwrap_err();
        assert_eq!(
            err,
            Error::NoLegalMove {
                vertex: "2".into(),
                step: Some(3)
            }
        );
        assert_eq!(sample_path(&Nbrw(&g), &n(0), 0, &mut rng).unwrap(), vec![n(0)]);
    }

    #[test]
    fn nbrw_on_line_is_monotone() {
        let z1 = Graph::lattice(1).unwrap();
        let o = VertexKey::point(vec![0]);
        let law = enumerate_prefix_distribution(&Nbrw(&z1), &o, 5).unwrap();
        assert_eq!(law.support_size(), 2);
        for (seq, p) in &law.entries {
            assert_eq!(*p, ratio(1, 2));
            let VertexKey::Point(last) = &seq[5] else { panic!() };
            assert_eq!(last[0].abs(), 5);
        }
    }

    #[test]
    fn k4_enumeration() {
        let k4 = complete_graph(4);
        let srw = enumerate_prefix_distribution(&Srw(&k4), &n(0), 2).unwrap();
        assert_eq!(srw.support_size(), 9);
        assert!(srw.entries.values().all(|p| *p == ratio(1, 9)));
        let nb = enumerate_prefix_distribution(&Nbrw(&k4), &n(0), 2).unwrap();
        assert_eq!(nb.support_size(), 6);
        assert!(nb.entries.values().all(|p| *p == ratio(1, 6)));
        assert_eq!(nb.total(), ratio(1, 1));
        let srw3 = enumerate_prefix_distribution(&Srw(&k4), &n(0), 3).unwrap();
        assert!(srw3.entries.values().all(|p| *p == ratio(1, 27)));
        assert!(matches!(
            enumerate_prefix_distribution(&Srw(&k4), &n(0), 15),
            Err(Error::LimitExceeded(_))
        ));
    }

    #[test]
    fn enumeration_is_consistent_across_horizons() {
        let g = counterexample_graph();
        for start in 0..6 {
            let law5 = enumerate_prefix_distribution(&Nbrw(&g), &n(start), 5).unwrap();
            let law4 = enumerate_prefix_distribution(&Nbrw(&g), &n(start), 4).unwrap();
            assert_eq!(law5.marginalize(4), law4);
            assert_eq!(law5.total(), ratio(1, 1));
            assert!(law5.entries.keys().all(|s| is_backtrack_free(s)));
        }
    }

    #[test]
    fn wrw_theta_and_loop() {
        let mg = theta([1, 2, 3]);
        let start = MultigraphState {
            vertex: n(0),
            last: None,
        };
        let law = step_distribution(&Wrw::new(&mg), &start).unwrap();
        let probs: Vec<Rational> = law.values().cloned().collect();
        assert_eq!(probs, vec![ratio(6, 11), ratio(3, 11), ratio(2, 11)]);

        let equal = theta([2, 2, 2]);
        let law = step_distribution(&Wrw::new(&equal), &start).unwrap();
        assert!(law.values().all(|p| *p == ratio(1, 3)));

        let looped =
            WeightedMultigraph::new([n(0), n(1)], [(n(0), n(0), 3), (n(0), n(1), 1)]).unwrap();
        let law = vertex_law(&Wrw::new(&looped), &start);
        assert_eq!(law[&n(1)], ratio(3, 5));
        assert_eq!(law[&n(0)], ratio(2, 5));
    }

    #[test]
    fn reflecting_rule_splits_each_half_edge() {
        let mg = theta([1, 2, 3]);
        let start = MultigraphState {
            vertex: n(0),
            last: None,
        };
        let law = Wrw::reflecting(&mg).transitions(&start).unwrap();
        let mut cross = Rational::zero();
        let mut back = Rational::zero();
        for (s, p) in &law {
            if s.last.unwrap().is_reflection() {
                back += p;
            } else {
                cross += p;
            }
        }
        assert_eq!(cross, ratio(1, 3) + ratio(1, 6) + ratio(1, 9));
        assert_eq!(back, ratio(7, 18));
    }

    #[test]
    fn edge_nbrw_on_multigraphs() {
        let mg = theta([1, 1, 1]);
        let arrival = HalfEdge::new(0, End::B);
        let s = MultigraphState {
            vertex: n(1),
            last: Some(Traversal::crossing(HalfEdge::new(0, End::A))),
        };
        let law = step_distribution(&NbrwEdge(&mg), &s).unwrap();
        let edges: BTreeSet<usize> = law.keys().map(|s| s.last.unwrap().edge).collect();
        assert_eq!(edges, BTreeSet::from([1, 2]));
        assert!(law.values().all(|p| *p == ratio(1, 2)));
        let mut rng = stream(9);
        for _ in 0..200 {
            let next = nbrw_step_edge(&mg, arrival, &mut rng).unwrap();
            assert_ne!(next.edge, 0);
        }

        let loops =
            WeightedMultigraph::new([n(0)], [(n(0), n(0), 1), (n(0), n(0), 1)]).unwrap();
        let s = MultigraphState {
            vertex: n(0),
            last: Some(Traversal::crossing(HalfEdge::new(0, End::A))),
        };
        let law = step_distribution(&NbrwEdge(&loops), &s).unwrap();
        assert_eq!(law.len(), 3);
        assert!(law.values().all(|p| *p == ratio(1, 3)));
        // re-traversing the loop in the same direction is allowed
        assert!(law.keys().any(|t| t.last == Some(Traversal::crossing(HalfEdge::new(0, End::A)))));

        let stub = WeightedMultigraph::new([n(0), n(1)], [(n(0), n(1), 1)]).unwrap();
        let err = nbrw_step_edge(&stub, HalfEdge::new(0, End::B), &mut rng).unwrap_err();
        assert!(matches!(err, Error::NoLegalMove { .. }));
    }

    #[test]
    fn edge_nbrw_matches_vertex_nbrw_on_simple_graphs() {
        let g = counterexample_graph();
        let e = g.explicit().unwrap();
        let edges: Vec<(VertexKey, VertexKey, u64)> =
            e.edges().into_iter().map(|(a, b)| (n(a), n(b), 1)).collect();
        let mg = WeightedMultigraph::new(e.vertices().map(n), edges).unwrap();
        for (a, b) in e.edges() {
            for (prev, cur) in [(a, b), (b, a)] {
                let vs = NbState {
                    prev: Some(n(prev)),
                    current: n(cur),
                };
                let id = mg.edges().iter().position(|w| w.a == n(a) && w.b == n(b)).unwrap();
                let from = if prev == a { End::A } else { End::B };
                let es = MultigraphState {
                    vertex: n(cur),
                    last: Some(Traversal::crossing(HalfEdge::new(id, from))),
                };
                assert_eq!(vertex_law(&Nbrw(&g), &vs), vertex_law(&NbrwEdge(&mg), &es));
                assert_eq!(
                    vertex_law(&Srw(&g), &n(cur)),
                    vertex_law(&Wrw::new(&mg), &MultigraphState { vertex: n(cur), last: None })
                );
            }
        }
    }

    #[test]
    fn walk_kind_parsing() {
        assert_eq!("NBRW".parse::<WalkKind>().unwrap(), WalkKind::Nbrw);
        assert!("lazy".parse::<WalkKind>().is_err());
        assert_eq!(WalkKind::Wrw.to_string(), "wrw");
    }
}
