//! Birth-death chains on `{0, 1, 2, ...}` reflected at 0.
//!
//! These are the chains traced by the erasure cursor: position 0 always
//! moves right, and position `p >= 1` moves right with probability `r(p)`
//! and left otherwise. Right probabilities are eventually periodic, which
//! lets transience and the escape probability be decided exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::erasure::Move;
use crate::error::{Error, Result};
use crate::rational::{ratio, to_f64, Rational};

/// Right-move probabilities by position.
///
/// Position `p` in `1..=prefix.len()` uses `prefix[p - 1]`; any later
/// position uses `period[p % period.len()]`, so period entries are keyed by
/// the residue of the position. Position 0 always moves right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirthDeathSpec {
    prefix: Vec<Rational>,
    period: Vec<Rational>,
}

impl BirthDeathSpec {
    pub fn new(prefix: Vec<Rational>, period: Vec<Rational>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter("period must be nonempty".into()));
        }
        for p in prefix.iter().chain(&period) {
            if !(*p > Rational::zero() && *p <= Rational::one()) {
                return Err(Error::InvalidParameter(format!(
                    "right probability {p} is outside (0, 1]"
                )));
            }
        }
        Ok(BirthDeathSpec { prefix, period })
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn period(&self) -> &[Rational] {
        &self.period
    }

    pub fn right_prob(&self, position: usize) -> Rational {
        if position == 0 {
            Rational::one()
        } else if position <= self.prefix.len() {
            self.prefix[position - 1].clone()
        } else {
            self.period[position % self.period.len()].clone()
        }
    }

    /// `q/p` at a position `>= 1`.
    pub fn ratio_at(&self, position: usize) -> Rational {
        let p = self.right_prob(position);
        (Rational::one() - &p) / p
    }

    /// Product of `q/p` over one full period.
    pub fn period_ratio_product(&self) -> Rational {
        let s = self.prefix.len();
        (s + 1..=s + self.period.len())
            .map(|i| self.ratio_at(i))
            .product()
    }

    /// Whether `sum_{n>=1} prod_{i=1..n} q_i/p_i` converges.
    pub fn is_transient(&self) -> bool {
        let s = self.prefix.len();
        let horizon = s + self.period.len();
        (1..=horizon).any(|i| self.ratio_at(i).is_zero())
            || self.period_ratio_product() < Rational::one()
    }

    /// Probability that the chain started at position 1 never reaches 0:
    /// `1 / sum_{n>=0} prod_{i=1..n} q_i/p_i`, zero for recurrent chains.
    pub fn escape_probability(&self) -> Rational {
        let s = self.prefix.len();
        let mut series = Rational::one();
        let mut c = Rational::one();
        for i in 1..=s {
            c *= self.ratio_at(i);
            series += &c;
        }
        if !c.is_zero() {
            let mut d = Rational::one();
            let mut partial = Rational::zero();
            for i in s + 1..=s + self.period.len() {
                d *= self.ratio_at(i);
                partial += &d;
            }
            if d >= Rational::one() {
                return Rational::zero();
            }
            series += c * partial / (Rational::one() - d);
        }
        Rational::one() / series
    }

    /// Trajectory of `n` steps from position 0.
    pub fn simulate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        let s = self.prefix.len();
        let prefix: Vec<f64> = self.prefix.iter().map(to_f64).collect();
        let period: Vec<f64> = self.period.iter().map(to_f64).collect();
        let mut out = Vec::with_capacity(n + 1);
        let mut x = 0usize;
        out.push(x);
        for _ in 0..n {
            let right = if x == 0 {
                1.0
            } else if x <= s {
                prefix[x - 1]
            } else {
                period[x % period.len()]
            };
            if rng.gen::<f64>() < right {
                x += 1;
            } else {
                x -= 1;
            }
            out.push(x);
        }
        out
    }

    /// Exact law of the first `n` moves from position 0.
    pub fn move_law(&self, n: usize) -> BTreeMap<Vec<Move>, Rational> {
        let mut out = BTreeMap::new();
        let mut moves = Vec::with_capacity(n);
        self.expand(0, Rational::one(), n, &mut moves, &mut out);
        out
    }

    fn expand(
        &self,
        position: usize,
        p: Rational,
        remaining: usize,
        moves: &mut Vec<Move>,
        out: &mut BTreeMap<Vec<Move>, Rational>,
    ) {
        if remaining == 0 {
            out.insert(moves.clone(), p);
            return;
        }
        let right = self.right_prob(position);
        let left = Rational::one() - &right;
        moves.push(Move::Right);
        self.expand(position + 1, &p * &right, remaining - 1, moves, out);
        moves.pop();
        if !left.is_zero() {
            moves.push(Move::Left);
            self.expand(position - 1, &p * left, remaining - 1, moves, out);
            moves.pop();
        }
    }
}

/// Chain of the erasure cursor on a `k`-regular graph: right with
/// probability `(k - 1)/k` at every position `>= 1`.
pub fn chain_for_regular(k: u32) -> Result<BirthDeathSpec> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("degree must be at least 2, got {k}")));
    }
    let k = i64::from(k);
    BirthDeathSpec::new(Vec::new(), vec![ratio(k - 1, k)])
}

/// Chain of the erasure cursor on a `(k1, k2)`-biregular graph started at a
/// vertex of degree `k1`: even positions move right with probability
/// `(k1 - 1)/k1`, odd positions with `(k2 - 1)/k2`.
pub fn chain_for_biregular(k1: u32, k2: u32) -> Result<BirthDeathSpec> {
    chain_for_biregular_from(k1, k2, k1)
}

/// As [`chain_for_biregular`], with the start vertex of degree
/// `start_degree` (either `k1` or `k2`) fixing the phase.
pub fn chain_for_biregular_from(k1: u32, k2: u32, start_degree: u32) -> Result<BirthDeathSpec> {
    if !(k1 > k2 && k2 >= 2) {
        return Err(Error::InvalidParameter(format!(
            "biregular chain needs k1 > k2 >= 2, got ({k1}, {k2})"
        )));
    }
    let (even, odd) = if start_degree == k1 {
        (k1, k2)
    } else if start_degree == k2 {
        (k2, k1)
    } else {
        return Err(Error::InvalidParameter(format!(
            "start degree {start_degree} is neither {k1} nor {k2}"
        )));
    };
    let r = |k: u32| ratio(i64::from(k) - 1, i64::from(k));
    BirthDeathSpec::new(Vec::new(), vec![r(even), r(odd)])
}

/// Free-function form of [`BirthDeathSpec::simulate`].
pub fn simulate_chain<R: Rng + ?Sized>(spec: &BirthDeathSpec, n: usize, rng: &mut R) -> Vec<usize> {
    spec.simulate(n, rng)
}
