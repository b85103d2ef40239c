//! Canonical representatives of classes of eventually-agreeing sequences.
//!
//! Two sequences are identified when they agree at every index past some
//! point. The decidable fragment handled here consists of *cyclic*
//! sequences: a value of period `m` is stored as `m` branch terms, branch
//! `j` governing every index `i` in `1, 2, 3, ...` with `(i - 1) % m == j`.
//! A branch is either a constant universe element or an exact rational
//! function of the index.
//!
//! Canonical form drops any finite prefix (it is invisible to eventual
//! agreement), anchors branches to absolute residues and minimizes the
//! period. Rotating the branches of a value changes which indices they
//! govern, so `cyc{-1; 1}` and `cyc{1; -1}` are different values.

mod element;
mod json;
pub mod subset;
pub mod text;

use std::fmt;

use num_integer::Integer;

pub use element::{Payload, Sort, UniverseElement};
pub use subset::{ends_in, ends_in_tuple, Interval, IntervalUnion, SubsetSpec};

use crate::error::{Error, Result};
use crate::{RatFunc, Rational};

/// Caps that keep lcm alignment and polynomial growth predictable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_period: usize,
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_period: 64, max_degree: 32 }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Self { max_period: usize::MAX, max_degree: usize::MAX }
    }
}

/// One residue-class component of a cyclic representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BranchTerm {
    Const(UniverseElement),
    /// A non-constant rational function of the index; constants are always
    /// stored as `Const` so that structural equality is term identity.
    Rat(RatFunc),
}

impl BranchTerm {
    pub fn constant(e: UniverseElement) -> Self {
        BranchTerm::Const(e)
    }

    pub fn real(q: Rational) -> Self {
        BranchTerm::Const(UniverseElement::real(q))
    }

    pub fn rat(rf: RatFunc) -> Self {
        match rf.as_constant() {
            Some(c) => BranchTerm::real(c),
            None => BranchTerm::Rat(rf),
        }
    }

    /// The branch viewed as a rational function, when it is real-valued.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self {
            BranchTerm::Rat(rf) => Some(rf.clone()),
            BranchTerm::Const(e) => e.as_real().map(|q| RatFunc::constant(q.clone())),
        }
    }

    pub fn as_const(&self) -> Option<&UniverseElement> {
        match self {
            BranchTerm::Const(e) => Some(e),
            BranchTerm::Rat(_) => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, BranchTerm::Const(_))
    }

    /// Term at index `i`; `None` at a pole of a rational branch.
    pub fn value_at(&self, i: u64) -> Option<UniverseElement> {
        match self {
            BranchTerm::Const(e) => Some(e.clone()),
            BranchTerm::Rat(rf) => rf.eval_at(i).map(UniverseElement::real),
        }
    }

    /// Whether the two terms agree at all large indices. Rational branches
    /// are compared by cross-multiplication rather than by their canonical
    /// scaling.
    pub fn identical(&self, other: &Self) -> bool {
        match (self.as_ratfunc(), other.as_ratfunc()) {
            (Some(a), Some(b)) => a.identical(&b),
            _ => match (self, other) {
                (BranchTerm::Const(a), BranchTerm::Const(b)) => a == b,
                _ => false,
            },
        }
    }

    fn check_degree(&self, limits: &Limits) -> Result<()> {
        if let BranchTerm::Rat(rf) = self {
            let degree = rf.degree();
            if degree > limits.max_degree {
                return Err(Error::DegreeLimitExceeded { degree, cap: limits.max_degree });
            }
        }
        Ok(())
    }
}

impl fmt::Display for BranchTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchTerm::Const(e) => write!(f, "{e}"),
            BranchTerm::Rat(rf) => write!(f, "{rf}"),
        }
    }
}

/// An arbitrary finite prefix followed by a repeating tail.
#[derive(Clone, Debug, Default)]
pub struct RawSequence {
    pub prefix: Vec<BranchTerm>,
    pub tail: Vec<BranchTerm>,
}

impl RawSequence {
    pub fn new(prefix: Vec<BranchTerm>, tail: Vec<BranchTerm>) -> Self {
        Self { prefix, tail }
    }

    pub fn cyclic(tail: Vec<BranchTerm>) -> Self {
        Self { prefix: Vec::new(), tail }
    }

    /// Term at 1-based index `i`.
    pub fn term_at(&self, i: u64) -> &BranchTerm {
        let i = i as usize;
        if i <= self.prefix.len() {
            &self.prefix[i - 1]
        } else {
            &self.tail[(i - 1 - self.prefix.len()) % self.tail.len()]
        }
    }
}

/// Canonical representative of an eventual-agreement class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualValue {
    branches: Vec<BranchTerm>,
}

impl VirtualValue {
    /// Period-1 class of the constant sequence at `e`.
    pub fn constant(e: UniverseElement) -> Self {
        Self { branches: vec![BranchTerm::Const(e)] }
    }

    pub fn real(q: Rational) -> Self {
        Self::constant(UniverseElement::real(q))
    }

    /// Canonical value whose branch `j` governs residue `j`.
    pub fn cyclic(branches: Vec<BranchTerm>) -> Result<Self> {
        canonicalize(&RawSequence::cyclic(branches), &Limits::default())
    }

    pub fn period(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[BranchTerm] {
        &self.branches
    }

    pub fn branch(&self, j: usize) -> &BranchTerm {
        &self.branches[j % self.branches.len()]
    }

    /// Branch governing the 1-based index `i`.
    pub fn term_at(&self, i: u64) -> &BranchTerm {
        self.branch(((i - 1) % self.period() as u64) as usize)
    }

    pub fn value_at(&self, i: u64) -> Option<UniverseElement> {
        self.term_at(i).value_at(i)
    }

    pub fn as_constant(&self) -> Option<&UniverseElement> {
        match self.branches.as_slice() {
            [BranchTerm::Const(e)] => Some(e),
            _ => None,
        }
    }

    /// Branches repeated out to `period`, which must be a multiple of the
    /// value's own period.
    pub fn aligned(&self, period: usize) -> Vec<BranchTerm> {
        debug_assert_eq!(period % self.period(), 0);
        (0..period).map(|j| self.branch(j).clone()).collect()
    }

    /// Splits a value of tuple-valued constant branches into its components.
    pub fn components(&self) -> Result<Vec<VirtualValue>> {
        let mut arity = None;
        let mut rows = Vec::with_capacity(self.period());
        for b in &self.branches {
            let parts = match b {
                BranchTerm::Const(UniverseElement { payload: Payload::Tuple(parts), .. }) => parts,
                other => return Err(Error::Malformed(format!("branch {other} is not a tuple"))),
            };
            match arity {
                None => arity = Some(parts.len()),
                Some(k) if k != parts.len() => {
                    return Err(Error::ArityMismatch { expected: k, found: parts.len() })
                }
                _ => {}
            }
            rows.push(parts);
        }
        let arity = arity.unwrap_or(0);
        (0..arity)
            .map(|c| {
                let tail = rows.iter().map(|r| BranchTerm::Const(r[c].clone())).collect();
                canonicalize(&RawSequence::cyclic(tail), &Limits::unbounded())
            })
            .collect()
    }

    /// Inverse of [`components`](Self::components): a tuple of values is the
    /// same class as the value of tuples.
    pub fn from_components(parts: &[VirtualValue]) -> Result<Self> {
        let refs: Vec<&VirtualValue> = parts.iter().collect();
        map_branches(&refs, &Limits::unbounded(), |terms| {
            let elems = terms
                .iter()
                .map(|t| {
                    t.as_const()
                        .cloned()
                        .ok_or_else(|| Error::Malformed(format!("component branch {t} is not constant")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BranchTerm::Const(UniverseElement::tuple(elems)))
        })
    }
}

impl fmt::Display for VirtualValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [only] = self.branches.as_slice() {
            return write!(f, "{only}");
        }
        write!(f, "cyc{{")?;
        for (j, b) in self.branches.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// The unique canonical value end-equal to `raw`: prefix dropped, tail
/// re-anchored to absolute residues, period minimized.
pub fn canonicalize(raw: &RawSequence, limits: &Limits) -> Result<VirtualValue> {
    let m = raw.tail.len();
    if m == 0 {
        return Err(Error::Malformed("cyclic tail must have period at least 1".into()));
    }
    for b in raw.prefix.iter().chain(&raw.tail) {
        b.check_degree(limits)?;
    }
    // index i > L falls on tail[(i - 1 - L) % m]; residue j = (i - 1) % m
    let shift = raw.prefix.len() % m;
    let anchored: Vec<BranchTerm> = (0..m).map(|j| normalize_term(&raw.tail[(j + m - shift) % m])).collect();
    let period = minimal_period(&anchored);
    if period > limits.max_period {
        return Err(Error::PeriodLimitExceeded { period, cap: limits.max_period });
    }
    let mut branches = anchored;
    branches.truncate(period);
    Ok(VirtualValue { branches })
}

fn normalize_term(t: &BranchTerm) -> BranchTerm {
    match t {
        BranchTerm::Rat(rf) => BranchTerm::rat(rf.clone()),
        c => c.clone(),
    }
}

fn minimal_period(branches: &[BranchTerm]) -> usize {
    let m = branches.len();
    (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .find(|&d| (d..m).all(|j| branches[j] == branches[j % d]))
        .unwrap_or(m)
}

/// Least common multiple of the periods.
pub fn common_period(values: &[&VirtualValue]) -> usize {
    values.iter().fold(1, |acc, v| acc.lcm(&v.period()))
}

/// Applies `f` to every aligned branch tuple and canonicalizes the result.
pub fn map_branches<F>(args: &[&VirtualValue], limits: &Limits, mut f: F) -> Result<VirtualValue>
where
    F: FnMut(&[&BranchTerm]) -> Result<BranchTerm>,
{
    let period = common_period(args);
    let mut tail = Vec::with_capacity(period);
    let mut terms = Vec::with_capacity(args.len());
    for j in 0..period {
        terms.clear();
        terms.extend(args.iter().map(|a| a.branch(j)));
        tail.push(f(&terms)?);
    }
    canonicalize(&RawSequence::cyclic(tail), limits)
}

/// Whether the representatives agree at every sufficiently large index.
pub fn end_equal(a: &VirtualValue, b: &VirtualValue) -> bool {
    let period = a.period().lcm(&b.period());
    (0..period).all(|j| a.branch(j).identical(b.branch(j)))
}

/// Every canonical value of period at most `max_period` whose branches are
/// drawn from `alphabet`, ordered by period and then by branch word. Fails
/// with `SizeLimit` when more than `limit` words would have to be visited.
pub fn enumerate_cyclic(alphabet: &[BranchTerm], max_period: usize, limit: u128) -> Result<Vec<VirtualValue>> {
    let k = alphabet.len() as u128;
    let mut words: u128 = 0;
    for p in 1..=max_period {
        words = k
            .checked_pow(p as u32)
            .and_then(|w| words.checked_add(w))
            .unwrap_or(u128::MAX);
    }
    if words > limit {
        return Err(Error::SizeLimit { requested: words, limit });
    }
    let mut out = Vec::new();
    if alphabet.is_empty() {
        return Ok(out);
    }
    for p in 1..=max_period {
        let mut digits = vec![0usize; p];
        loop {
            let tail: Vec<BranchTerm> = digits.iter().map(|&d| alphabet[d].clone()).collect();
            if minimal_period(&tail) == p {
                out.push(VirtualValue { branches: tail.into_iter().map(|t| normalize_term(&t)).collect() });
            }
            let Some(pos) = digits.iter().rposition(|&d| d + 1 < alphabet.len()) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    Ok(out)
}

/// The constant embedding `a ↦ ā`; injective.
pub fn embed_const(a: UniverseElement) -> VirtualValue {
    VirtualValue::constant(a)
}
