//! Distribution distances, return-time diagnostics and the seeded Monte
//! Carlo harness.
//!
//! Recurrence is not decidable from a finite run. The diagnostics here are
//! heuristics: return counts, the fraction of walks that return at all, and
//! how both move when the horizon grows.

use std::collections::BTreeSet;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::erasure::{BacktrackEraser, CursorTrace, Move};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexKey};
use crate::rational::{abs, ratio, Rational};
use crate::rng::replica_stream;
use crate::walkers::{Kernel, Nbrw, NbrwEdge, Network, PrefixDistribution, Srw, WalkKind, Wrw};

/// Half the L1 distance between two prefix laws, counting `short_mass` as
/// one more outcome.
pub fn total_variation<T: Ord + Clone>(
    p: &PrefixDistribution<T>,
    q: &PrefixDistribution<T>,
) -> Result<Rational> {
    if p.horizon != q.horizon {
        return Err(Error::InvalidInput(format!(
            "horizon mismatch: {} vs {}",
            p.horizon, q.horizon
        )));
    }
    let keys: BTreeSet<&Vec<T>> = p.entries.keys().chain(q.entries.keys()).collect();
    let mut sum = abs(&(&p.short_mass - &q.short_mass));
    for k in keys {
        sum += abs(&(p.probability(k) - q.probability(k)));
    }
    Ok(sum * ratio(1, 2))
}

/// Return counts of one walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkStatistics {
    pub steps: u64,
    pub returns_to_origin: u64,
    pub last_return_time: Option<u64>,
    /// Euclidean distance on lattices, tree distance on trees, 0 or 1
    /// elsewhere.
    pub end_displacement: f64,
}

/// Streaming accumulator behind [`return_statistics`].
#[derive(Clone, Debug)]
pub struct ReturnCounter {
    origin: VertexKey,
    steps: u64,
    returns: u64,
    last_return: Option<u64>,
}

impl ReturnCounter {
    pub fn new(origin: VertexKey) -> Self {
        ReturnCounter {
            origin,
            steps: 0,
            returns: 0,
            last_return: None,
        }
    }

    /// Records the position after the next step.
    pub fn observe(&mut self, v: &VertexKey) {
        self.steps += 1;
        if *v == self.origin {
            self.returns += 1;
            self.last_return = Some(self.steps);
        }
    }

    pub fn finish(self, end: &VertexKey) -> WalkStatistics {
        WalkStatistics {
            steps: self.steps,
            returns_to_origin: self.returns,
            last_return_time: self.last_return,
            end_displacement: end.displacement_from(&self.origin),
        }
    }
}

/// Counts the indices `i >= 1` with `path[i] == origin`.
pub fn return_statistics(path: &[VertexKey], origin: &VertexKey) -> Result<WalkStatistics> {
    let last = path
        .last()
        .ok_or_else(|| Error::InvalidInput("path is empty".into()))?;
    let mut c = ReturnCounter::new(origin.clone());
    for v in &path[1..] {
        c.observe(v);
    }
    Ok(c.finish(last))
}

/// Runs `horizon` steps of `kernel` from `start` without storing the path.
pub fn run_replica<K: Kernel, R: Rng + ?Sized>(
    kernel: &K,
    start: &VertexKey,
    horizon: u64,
    rng: &mut R,
) -> Result<WalkStatistics> {
    let mut state = kernel.initial(start)?;
    let mut counter = ReturnCounter::new(start.clone());
    for i in 1..=horizon {
        state = kernel.sample(&state, rng).map_err(|e| e.at_step(i as usize))?;
        counter.observe(kernel.position(&state));
    }
    Ok(counter.finish(kernel.position(&state)))
}

/// Mean with its normal-approximation 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    /// Sample mean and standard error (`n - 1` denominator).
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let se = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: se,
            ci_low: mean - 1.96 * se,
            ci_high: mean + 1.96 * se,
        }
    }

    /// `(self - other) / sqrt(se^2 + se'^2)` for independent samples.
    pub fn z_score_over(&self, other: &Estimate) -> f64 {
        let se = self.std_error.hypot(other.std_error);
        (self.mean - other.mean) / se
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub mean_returns: Estimate,
    pub returned_fraction: Estimate,
    pub mean_displacement: Estimate,
}

impl Aggregates {
    pub fn from_rows(rows: &[WalkStatistics]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InsufficientData("no replicas to aggregate".into()));
        }
        let col = |f: &dyn Fn(&WalkStatistics) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
        Ok(Aggregates {
            mean_returns: Estimate::from_samples(&col(&|r| r.returns_to_origin as f64)),
            returned_fraction: Estimate::from_samples(&col(&|r| {
                f64::from(u8::from(r.returns_to_origin > 0))
            })),
            mean_displacement: Estimate::from_samples(&col(&|r| r.end_displacement)),
        })
    }
}

/// Parameters of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub walk: WalkKind,
    pub start: VertexKey,
    pub horizon: u64,
    pub replicas: u64,
    pub master_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: RunConfig,
    /// Caller-supplied echo of the full configuration, graph included.
    pub echo: Option<serde_json::Value>,
    pub master_seed: u64,
    pub replicas: u64,
    pub aggregates: Aggregates,
    #[serde(skip)]
    pub rows: Vec<WalkStatistics>,
}

impl ExperimentReport {
    /// `replica,steps,returns,last_return,displacement`, one row per
    /// replica; `last_return` is empty for walks that never returned.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["replica", "steps", "returns", "last_return", "displacement"])?;
        for (i, r) in self.rows.iter().enumerate() {
            w.write_record([
                i.to_string(),
                r.steps.to_string(),
                r.returns_to_origin.to_string(),
                r.last_return_time.map(|t| t.to_string()).unwrap_or_default(),
                r.end_displacement.to_string(),
            ])?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Independent replicas of a walk, replica `i` driven by
/// [`replica_stream(master_seed, i)`](crate::rng::replica_stream).
/// Rows are kept in replica order, so the report does not depend on how
/// the replicas were scheduled.
pub fn monte_carlo(
    kind: WalkKind,
    network: Network<'_>,
    start: &VertexKey,
    horizon: u64,
    replicas: u64,
    master_seed: u64,
) -> Result<ExperimentReport> {
    monte_carlo_with(kind, network, start, horizon, replicas, master_seed, Execution::Parallel)
}

pub fn monte_carlo_with(
    kind: WalkKind,
    network: Network<'_>,
    start: &VertexKey,
    horizon: u64,
    replicas: u64,
    master_seed: u64,
    execution: Execution,
) -> Result<ExperimentReport> {
    if replicas == 0 {
        return Err(Error::InvalidParameter("replicas must be at least 1".into()));
    }
    let rows = match (kind, network) {
        (WalkKind::Srw, Network::Simple(g)) => replicate(&Srw(g), start, horizon, replicas, master_seed, execution),
        (WalkKind::Nbrw, Network::Simple(g)) => replicate(&Nbrw(g), start, horizon, replicas, master_seed, execution),
        (WalkKind::Nbrw, Network::Weighted(mg)) => {
            replicate(&NbrwEdge(mg), start, horizon, replicas, master_seed, execution)
        }
        (WalkKind::Wrw, Network::Weighted(mg)) => {
            replicate(&Wrw::new(mg), start, horizon, replicas, master_seed, execution)
        }
        (kind, _) => Err(Error::UnsupportedGraph(format!(
            "{kind} is not defined on this kind of graph"
        ))),
    }?;
    Ok(ExperimentReport {
        config: RunConfig {
            walk: kind,
            start: start.clone(),
            horizon,
            replicas,
            master_seed,
        },
        echo: None,
        master_seed,
        replicas,
        aggregates: Aggregates::from_rows(&rows)?,
        rows,
    })
}

fn replicate<K: Kernel + Sync>(
    kernel: &K,
    start: &VertexKey,
    horizon: u64,
    replicas: u64,
    master_seed: u64,
    execution: Execution,
) -> Result<Vec<WalkStatistics>> {
    let one = |i: u64| run_replica(kernel, start, horizon, &mut replica_stream(master_seed, i));
    let results: Vec<Result<WalkStatistics>> = match execution {
        Execution::Serial => (0..replicas).map(one).collect(),
        Execution::Parallel => (0..replicas).into_par_iter().map(one).collect(),
    };
    results.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn matches(self, n: usize) -> bool {
        (n % 2 == 0) == (self == Parity::Even)
    }
}

/// Empirical probability of a Right move.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoveFrequency {
    pub rights: u64,
    pub moves: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(f (1 - f) / moves)`.
    pub std_error: f64,
}

/// Frequency of Right among the moves made from positions `>= 1`,
/// optionally only from positions of the given parity.
pub fn move_frequency(traces: &[CursorTrace], phase: Option<Parity>) -> Result<MoveFrequency> {
    if traces.is_empty() {
        return Err(Error::InvalidInput("no traces".into()));
    }
    let (mut rights, mut moves) = (0u64, 0u64);
    for t in traces {
        for (i, mv) in t.moves.iter().enumerate() {
            let p = t.position_before(i);
            if p == 0 || phase.is_some_and(|ph| !ph.matches(p)) {
                continue;
            }
            moves += 1;
            rights += u64::from(*mv == Move::Right);
        }
    }
    if moves == 0 {
        return Err(Error::InsufficientData("no moves from positions >= 1".into()));
    }
    let f = rights as f64 / moves as f64;
    Ok(MoveFrequency {
        rights,
        moves,
        frequency: f,
        std_error: (f * (1.0 - f) / moves as f64).sqrt(),
    })
}

/// Cursor trace of the erasure run on an `n`-step SRW from `start`, fed to
/// the eraser step by step.
pub fn sample_erasure_trace<R: Rng + ?Sized>(
    g: &Graph,
    start: &VertexKey,
    n: usize,
    rng: &mut R,
) -> Result<CursorTrace> {
    let kernel = Srw(g);
    let mut state = kernel.initial(start)?;
    let mut eraser = BacktrackEraser::new();
    eraser.push(state.clone());
    for i in 1..=n {
        state = kernel.sample(&state, rng).map_err(|e| e.at_step(i))?;
        eraser.push(state.clone());
    }
    Ok(eraser.into_parts().1)
}

/// Total variation as a float, for reports.
pub fn tv_f64<T: Ord + Clone>(p: &PrefixDistribution<T>, q: &PrefixDistribution<T>) -> Result<f64> {
    total_variation(p, q).map(|r| crate::rational::to_f64(&r))
}
