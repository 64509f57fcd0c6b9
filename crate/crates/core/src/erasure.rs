//! Backtrack erasure.
//!
//! The cursor algorithm walks along a sequence `x_0, x_1, ...`:
//!
//! 1. at position 0, move right;
//! 2. at position `n > 0`, compare `x_{n-1}` with `x_{n+1}`:
//!    if they differ, move right; if they are equal, delete `x_n` and
//!    `x_{n+1}`, close the gap and move left;
//! 3. repeat.
//!
//! On a finite sequence it halts once the cursor sits on the last element.
//! Every comparison consumes exactly one input element, so the cursor
//! trace has one move per element after the first. The same output comes
//! from a stack: push each element unless it equals the element below the
//! top, in which case pop the top and drop the element. A push is a right
//! move and a pop is a left move; the cursor position is the stack height
//! minus one.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexKey};
use crate::rational::Rational;
use crate::walkers::{check_horizon, Kernel, PrefixDistribution, Srw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Move {
    Right,
    Left,
}

impl Move {
    pub fn as_char(self) -> char {
        match self {
            Move::Right => 'R',
            Move::Left => 'L',
        }
    }
}

/// Cursor moves and the position reached after each one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CursorTrace {
    pub moves: Vec<Move>,
    pub positions: Vec<usize>,
}

impl CursorTrace {
    fn record(&mut self, mv: Move, position: usize) {
        self.moves.push(mv);
        self.positions.push(position);
    }

    /// Position the cursor occupied before move `i`.
    pub fn position_before(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.positions[i - 1]
        }
    }

    /// `RRLR...`
    pub fn move_string(&self) -> String {
        self.moves.iter().map(|m| m.as_char()).collect()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

impl fmt::Display for CursorTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.move_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasureResult<T> {
    pub output: Vec<T>,
    pub trace: CursorTrace,
    pub consumed: usize,
}

/// Runs the cursor algorithm on `seq`, deleting elements in place.
pub fn erase_backtracks<T: PartialEq + Clone>(seq: &[T]) -> Result<ErasureResult<T>> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("cannot erase an empty sequence".into()));
    }
    let mut x = seq.to_vec();
    let mut trace = CursorTrace::default();
    let mut pos = 0usize;
    while pos + 1 < x.len() {
        if pos == 0 || x[pos - 1] != x[pos + 1] {
            pos += 1;
            trace.record(Move::Right, pos);
        } else {
            x.drain(pos..pos + 2);
            pos -= 1;
            trace.record(Move::Left, pos);
        }
    }
    let consumed = trace.len() + 1;
    Ok(ErasureResult {
        output: x,
        trace,
        consumed,
    })
}

/// Stack formulation of [`erase_backtracks`]; returns the same output.
pub fn erase_backtracks_stack<T: PartialEq + Clone>(seq: &[T]) -> Result<Vec<T>> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("cannot erase an empty sequence".into()));
    }
    let mut eraser = BacktrackEraser::new();
    for x in seq {
        eraser.push(x.clone());
    }
    Ok(eraser.into_output())
}

/// Streaming stack eraser that also records the cursor trace.
#[derive(Clone, Debug)]
pub struct BacktrackEraser<T> {
    stack: Vec<T>,
    trace: CursorTrace,
    record: bool,
}

impl<T: PartialEq> Default for BacktrackEraser<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: PartialEq> BacktrackEraser<T> {
    pub fn new() -> Self {
        BacktrackEraser {
            stack: Vec::new(),
            trace: CursorTrace::default(),
            record: true,
        }
    }

    /// An eraser that keeps no trace, for long streams.
    pub fn untraced() -> Self {
        BacktrackEraser {
            record: false,
            ..Self::new()
        }
    }

    /// Consumes one element; returns the cursor move it caused (none for
    /// the first element).
    pub fn push(&mut self, x: T) -> Option<Move> {
        let h = self.stack.len();
        let mv = if h == 0 {
            self.stack.push(x);
            return None;
        } else if h >= 2 && self.stack[h - 2] == x {
            self.stack.pop();
            Move::Left
        } else {
            self.stack.push(x);
            Move::Right
        };
        if self.record {
            self.trace.record(mv, self.stack.len() - 1);
        }
        Some(mv)
    }

    pub fn height(&self) -> usize {
        self.stack.len()
    }

    pub fn top(&self) -> Option<&T> {
        self.stack.last()
    }

    pub fn output(&self) -> &[T] {
        &self.stack
    }

    pub fn trace(&self) -> &CursorTrace {
        &self.trace
    }

    pub fn into_output(self) -> Vec<T> {
        self.stack
    }

    pub fn into_parts(self) -> (Vec<T>, CursorTrace) {
        (self.stack, self.trace)
    }
}

/// Calls `visit(path, probability)` for every SRW path of `n` steps from
/// `start`, splitting the work over first-step branches. Branch results are
/// returned in neighbor order.
fn srw_paths_by_branch<A: Send>(
    g: &Graph,
    start: &VertexKey,
    n: usize,
    init: impl Fn() -> A + Sync,
    visit: impl Fn(&mut A, &[VertexKey], &Rational) + Sync,
) -> Result<Vec<A>> {
    let kernel = Srw(g);
    let s0 = kernel.initial(start)?;
    if n == 0 {
        let mut acc = init();
        visit(&mut acc, std::slice::from_ref(&s0), &Rational::one());
        return Ok(vec![acc]);
    }
    let first = kernel.transitions(&s0)?;
    first
        .into_par_iter()
        .map(|(s1, p1)| {
            let mut acc = init();
            let mut path = vec![s0.clone(), s1.clone()];
            dfs(&kernel, &s1, p1, n - 1, &mut path, &mut acc, &visit)?;
            Ok(acc)
        })
        .collect()
}

fn dfs<A>(
    kernel: &Srw<'_>,
    v: &VertexKey,
    p: Rational,
    remaining: usize,
    path: &mut Vec<VertexKey>,
    acc: &mut A,
    visit: &impl Fn(&mut A, &[VertexKey], &Rational),
) -> Result<()> {
    if remaining == 0 {
        visit(acc, path, &p);
        return Ok(());
    }
    for (w, q) in kernel.transitions(v)? {
        path.push(w.clone());
        dfs(kernel, &w, &p * q, remaining - 1, path, acc, visit)?;
        path.pop();
    }
    Ok(())
}

/// Exact law of the first `m + 1` entries of the erased SRW path of `n`
/// steps from `start`. Outputs shorter than `m + 1` count toward
/// `short_mass`. Requires `m <= n <= 14`.
pub fn erased_prefix_distribution(
    g: &Graph,
    start: &VertexKey,
    n: usize,
    m: usize,
) -> Result<PrefixDistribution> {
    check_horizon(n)?;
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "prefix horizon {m} exceeds path length {n}"
        )));
    }
    let parts = srw_paths_by_branch(
        g,
        start,
        n,
        || PrefixDistribution::new(m),
        |acc, path, p| {
            let erased = erase_backtracks(path).expect("paths are nonempty");
            acc.add(&erased.output, p.clone());
        },
    )?;
    let mut out = PrefixDistribution::new(m);
    for part in parts {
        out.absorb(part);
    }
    Ok(out)
}

/// Exact law of the cursor move sequence produced by erasing an SRW path
/// of `n` steps from `start`.
pub fn move_sequence_distribution(
    g: &Graph,
    start: &VertexKey,
    n: usize,
) -> Result<BTreeMap<Vec<Move>, Rational>> {
    check_horizon(n)?;
    let parts = srw_paths_by_branch(g, start, n, BTreeMap::new, |acc, path, p| {
        let erased = erase_backtracks(path).expect("paths are nonempty");
        *acc.entry(erased.trace.moves).or_insert_with(Rational::zero) += p;
    })?;
    let mut out: BTreeMap<Vec<Move>, Rational> = BTreeMap::new();
    for part in parts {
        for (k, p) in part {
            *out.entry(k).or_insert_with(Rational::zero) += p;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::rational::ratio;
    use crate::walkers::is_backtrack_free;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn worked_examples() {
        let r = erase_backtracks(&chars("abac")).unwrap();
        assert_eq!(r.output, chars("ac"));
        assert_eq!(r.trace.move_string(), "RLR");
        assert_eq!(r.trace.positions, vec![1, 0, 1]);

        let r = erase_backtracks(&chars("abc")).unwrap();
        assert_eq!(r.output, chars("abc"));
        assert_eq!(r.trace.moves, vec![Move::Right, Move::Right]);

        let r = erase_backtracks(&chars("abcbad")).unwrap();
        assert_eq!(r.output, chars("ad"));
        assert_eq!(r.trace.move_string(), "RRLLR");
        assert_eq!(erase_backtracks_stack(&chars("abcbad")).unwrap(), chars("ad"));

        assert_eq!(erase_backtracks_stack(&chars("abab")).unwrap(), chars("ab"));
        assert_eq!(erase_backtracks_stack(&chars("a")).unwrap(), chars("a"));
        let single = erase_backtracks(&chars("a")).unwrap();
        assert!(single.trace.is_empty());
        assert_eq!(single.consumed, 1);
    }

    #[test]
    fn empty_input_is_rejected() {
        let empty: Vec<u8> = Vec::new();
        assert!(matches!(erase_backtracks(&empty), Err(Error::InvalidInput(_))));
        assert!(matches!(erase_backtracks_stack(&empty), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn streaming_eraser_tracks_cursor() {
        let input = chars("abcbcdcx");
        let mut eraser = BacktrackEraser::new();
        for &c in &input {
            eraser.push(c);
            assert_eq!(eraser.top(), Some(&c));
        }
        let cursor = erase_backtracks(&input).unwrap();
        let (out, trace) = eraser.into_parts();
        assert_eq!(out, cursor.output);
        assert_eq!(trace, cursor.trace);
    }

    fn token_strings() -> impl Strategy<Value = Vec<u8>> {
        (2u8..=5).prop_flat_map(|k| prop::collection::vec(0..k, 1..120))
    }

    proptest! {
        #[test]
        fn cursor_and_stack_agree(seq in token_strings()) {
            let cursor = erase_backtracks(&seq).unwrap();
            let mut eraser = BacktrackEraser::new();
            for &x in &seq {
                eraser.push(x);
                prop_assert_eq!(eraser.top(), Some(&x));
            }
            prop_assert_eq!(&cursor.output, &erase_backtracks_stack(&seq).unwrap());
            prop_assert_eq!(&cursor.trace, eraser.trace());
            prop_assert!(is_backtrack_free(&cursor.output));
            prop_assert_eq!(cursor.output.len() % 2, seq.len() % 2);
            prop_assert_eq!(cursor.consumed, seq.len());
            prop_assert_eq!(cursor.trace.len(), cursor.consumed - 1);
            let rights = cursor.trace.moves.iter().filter(|m| **m == Move::Right).count();
            let lefts = cursor.trace.len() - rights;
            prop_assert_eq!(rights as i64 - lefts as i64, cursor.output.len() as i64 - 1);
            if let Some(first) = cursor.trace.moves.first() {
                prop_assert_eq!(*first, Move::Right);
                prop_assert_eq!(cursor.trace.positions[0], 1);
            }
            for i in 0..cursor.trace.len() {
                let before = cursor.trace.position_before(i);
                let after = cursor.trace.positions[i];
                match cursor.trace.moves[i] {
                    Move::Right => prop_assert_eq!(after, before + 1),
                    Move::Left => prop_assert!(before >= 1 && after + 1 == before),
                }
                if before == 0 {
                    prop_assert_eq!(cursor.trace.moves[i], Move::Right);
                }
            }
        }

        #[test]
        fn backtrack_free_input_is_fixed(seq in prop::collection::vec(0u8..4, 1..60)) {
            let r = erase_backtracks(&seq).unwrap();
            if is_backtrack_free(&seq) {
                prop_assert_eq!(&r.output, &seq);
                prop_assert!(r.trace.moves.iter().all(|m| *m == Move::Right));
            }
            // erasure is idempotent
            prop_assert_eq!(erase_backtracks(&r.output).unwrap().output, r.output);
        }
    }

    #[test]
    fn erased_prefix_first_step_matches_srw() {
        let k4 = complete_graph(4);
        let o = VertexKey::Node(0);
        for n in [3usize, 5, 7] {
            let law = erased_prefix_distribution(&k4, &o, n, 1).unwrap();
            assert_eq!(law.total(), ratio(1, 1));
            assert!(law.short_mass.is_zero(), "odd path length keeps at least two entries");
            assert_eq!(law.support_size(), 3);
            for w in 1..4 {
                assert_eq!(law.probability(&[o.clone(), VertexKey::Node(w)]), ratio(1, 3));
            }
        }
    }

    #[test]
    fn erased_prefix_guards() {
        let k4 = complete_graph(4);
        let o = VertexKey::Node(0);
        assert!(matches!(
            erased_prefix_distribution(&k4, &o, 15, 3),
            Err(Error::LimitExceeded(_))
        ));
        assert!(erased_prefix_distribution(&k4, &o, 3, 4).is_err());
        let raw = erased_prefix_distribution(&k4, &o, 4, 4).unwrap();
        assert_eq!(raw.total(), ratio(1, 1));
        assert!(raw.entries.keys().all(|s| is_backtrack_free(s)));
    }

    #[test]
    fn move_law_small_horizon() {
        // two steps on K4: R then R with 2/3, R then L with 1/3
        let k4 = complete_graph(4);
        let law = move_sequence_distribution(&k4, &VertexKey::Node(0), 2).unwrap();
        assert_eq!(law.len(), 2);
        assert_eq!(law[&vec![Move::Right, Move::Right]], ratio(2, 3));
        assert_eq!(law[&vec![Move::Right, Move::Left]], ratio(1, 3));
    }
}
