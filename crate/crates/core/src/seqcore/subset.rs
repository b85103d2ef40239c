//! Subsets of the universe and eventual membership of virtual values.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::Bound;

use num_traits::Zero;

use super::{BranchTerm, Payload, Sort, UniverseElement, VirtualValue};
use crate::error::{Error, Result};
use crate::ratfunc::Sign;
use crate::{RatFunc, Rational};

/// An interval of rationals; either end may be open, closed or unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Bound<Rational>,
    pub upper: Bound<Rational>,
}

impl Interval {
    pub fn new(lower: Bound<Rational>, upper: Bound<Rational>) -> Self {
        Self { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        use Bound::*;
        match (&self.lower, &self.upper) {
            (Included(a), Included(b)) => a > b,
            (Included(a) | Excluded(a), Included(b) | Excluded(b)) => a >= b,
            _ => false,
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let above = match &self.lower {
            Bound::Unbounded => true,
            Bound::Included(a) => q >= a,
            Bound::Excluded(a) => q > a,
        };
        let below = match &self.upper {
            Bound::Unbounded => true,
            Bound::Included(b) => q <= b,
            Bound::Excluded(b) => q < b,
        };
        above && below
    }

    /// Whether `rf(i)` lies in the interval for all large `i`. A rational
    /// function has an eventually constant sign relative to each endpoint.
    pub fn eventually_contains(&self, rf: &RatFunc) -> bool {
        let side = |a: &Rational| rf.sub(&RatFunc::constant(a.clone())).eventual_sign();
        let above = match &self.lower {
            Bound::Unbounded => true,
            Bound::Included(a) => side(a) != Sign::Negative,
            Bound::Excluded(a) => side(a) == Sign::Positive,
        };
        let below = match &self.upper {
            Bound::Unbounded => true,
            Bound::Included(b) => side(b) != Sign::Positive,
            Bound::Excluded(b) => side(b) == Sign::Negative,
        };
        above && below
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (cmp_lower(&other.lower, &self.lower) != Ordering::Greater
            && cmp_upper(&self.upper, &other.upper) != Ordering::Greater)
    }
}

fn cmp_lower(a: &Bound<Rational>, b: &Bound<Rational>) -> Ordering {
    use Bound::*;
    match (a, b) {
        (Unbounded, Unbounded) => Ordering::Equal,
        (Unbounded, _) => Ordering::Less,
        (_, Unbounded) => Ordering::Greater,
        (Included(x), Included(y)) | (Excluded(x), Excluded(y)) => x.cmp(y),
        (Included(x), Excluded(y)) => x.cmp(y).then(Ordering::Less),
        (Excluded(x), Included(y)) => x.cmp(y).then(Ordering::Greater),
    }
}

fn cmp_upper(a: &Bound<Rational>, b: &Bound<Rational>) -> Ordering {
    use Bound::*;
    match (a, b) {
        (Unbounded, Unbounded) => Ordering::Equal,
        (Unbounded, _) => Ordering::Greater,
        (_, Unbounded) => Ordering::Less,
        (Included(x), Included(y)) | (Excluded(x), Excluded(y)) => x.cmp(y),
        (Included(x), Excluded(y)) => x.cmp(y).then(Ordering::Greater),
        (Excluded(x), Included(y)) => x.cmp(y).then(Ordering::Less),
    }
}

/// Whether an interval ending at `upper` and one starting at `lower`
/// leave no gap between them.
fn joins(upper: &Bound<Rational>, lower: &Bound<Rational>) -> bool {
    use Bound::*;
    match (upper, lower) {
        (Unbounded, _) | (_, Unbounded) => true,
        (Included(b) | Excluded(b), Included(a) | Excluded(a)) => match a.cmp(b) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => !(matches!(upper, Excluded(_)) && matches!(lower, Excluded(_))),
        },
    }
}

/// Finitely many pairwise disjoint intervals, sorted by lower end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    /// Sorts the intervals and merges any that overlap or touch.
    pub fn new(intervals: Vec<Interval>) -> Self {
        let mut items: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        items.sort_by(|a, b| cmp_lower(&a.lower, &b.lower));
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for item in items {
            match merged.last_mut() {
                Some(last) if joins(&last.upper, &item.lower) => {
                    if cmp_upper(&item.upper, &last.upper) == Ordering::Greater {
                        last.upper = item.upper;
                    }
                }
                _ => merged.push(item),
            }
        }
        Self(merged)
    }

    pub fn single(interval: Interval) -> Self {
        Self::new(vec![interval])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.0.iter().any(|i| i.contains(q))
    }

    pub fn eventually_contains(&self, rf: &RatFunc) -> bool {
        self.0.iter().any(|i| i.eventually_contains(rf))
    }
}

/// A subset of the universe (or of a finite power of it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSpec {
    Finite(BTreeSet<UniverseElement>),
    Intervals(IntervalUnion),
    /// The integers inside the reals.
    Integers,
    /// Every element of one sort.
    Sort(Sort),
    /// Cartesian product, one factor per tuple entry.
    Product(Vec<SubsetSpec>),
}

impl SubsetSpec {
    pub fn finite(elems: impl IntoIterator<Item = UniverseElement>) -> Self {
        SubsetSpec::Finite(elems.into_iter().collect())
    }

    pub fn reals() -> Self {
        SubsetSpec::Sort(Sort::REAL)
    }

    /// The open ray `(0, +inf)`.
    pub fn positive_reals() -> Self {
        Self::interval(Bound::Excluded(Rational::zero()), Bound::Unbounded)
    }

    pub fn interval(lower: Bound<Rational>, upper: Bound<Rational>) -> Self {
        SubsetSpec::Intervals(IntervalUnion::single(Interval::new(lower, upper)))
    }

    /// Number of tuple entries the members have.
    pub fn arity(&self) -> usize {
        match self {
            SubsetSpec::Product(parts) => parts.len(),
            SubsetSpec::Finite(set) => set
                .iter()
                .next()
                .and_then(|e| e.as_tuple().map(<[_]>::len))
                .unwrap_or(1),
            _ => 1,
        }
    }

    /// Ordinary membership of a universe element.
    pub fn contains(&self, e: &UniverseElement) -> bool {
        match self {
            SubsetSpec::Finite(set) => set.contains(e),
            SubsetSpec::Intervals(u) => e.as_real().is_some_and(|q| u.contains(q)),
            SubsetSpec::Integers => match (&e.payload, e.as_real()) {
                (_, Some(q)) => q.is_integer(),
                (Payload::Integer(_), _) => e.sort == Sort::INTEGER,
                _ => false,
            },
            SubsetSpec::Sort(s) => &e.sort == s,
            SubsetSpec::Product(parts) => e
                .as_tuple()
                .is_some_and(|xs| xs.len() == parts.len() && parts.iter().zip(xs).all(|(p, x)| p.contains(x))),
        }
    }

    /// Membership of an argument tuple: a single element for arity one, a
    /// tuple element otherwise.
    pub fn contains_args(&self, args: &[UniverseElement]) -> bool {
        match (self, args) {
            (_, [single]) if self.arity() == 1 => self.contains(single),
            (SubsetSpec::Product(parts), _) => {
                parts.len() == args.len() && parts.iter().zip(args).all(|(p, x)| p.contains(x))
            }
            _ => self.contains(&UniverseElement::tuple(args.to_vec())),
        }
    }

    /// Explicit members, when the set is finite and enumerable. Members of a
    /// product are returned as argument tuples.
    pub fn enumerate(&self) -> Option<Vec<Vec<UniverseElement>>> {
        match self {
            SubsetSpec::Finite(set) => Some(
                set.iter()
                    .map(|e| match e.as_tuple() {
                        Some(parts) if self.arity() > 1 => parts.to_vec(),
                        _ => vec![e.clone()],
                    })
                    .collect(),
            ),
            SubsetSpec::Product(parts) => {
                let mut out: Vec<Vec<UniverseElement>> = vec![Vec::new()];
                for part in parts {
                    let members = part.enumerate()?;
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            members.iter().map(move |m| {
                                let mut t = prefix.clone();
                                t.extend(m.iter().cloned());
                                t
                            })
                        })
                        .collect();
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Decidable inclusion; `None` when the pair falls outside what can be
    /// compared exactly.
    pub fn is_subset_of(&self, other: &SubsetSpec) -> Option<bool> {
        use SubsetSpec::*;
        if self == other {
            return Some(true);
        }
        match (self, other) {
            (Finite(a), _) => Some(a.iter().all(|e| other.contains(e))),
            (Intervals(a), Intervals(b)) => Some(
                a.intervals()
                    .iter()
                    .all(|i| b.intervals().iter().any(|j| i.is_subset_of(j))),
            ),
            (Intervals(_) | Integers, Sort(s)) => Some(*s == super::Sort::REAL),
            (Sort(_), Sort(_)) => Some(false),
            (Product(a), Product(b)) if a.len() == b.len() => {
                a.iter().zip(b).try_fold(true, |acc, (x, y)| Some(acc && x.is_subset_of(y)?))
            }
            _ => None,
        }
    }
}

/// Membership of `x` in the extension of `b`: every branch lies in `b` at
/// all sufficiently large indices.
pub fn ends_in(x: &VirtualValue, b: &SubsetSpec) -> Result<bool> {
    if let SubsetSpec::Product(parts) = b {
        let Ok(components) = x.components() else {
            return Ok(false);
        };
        return ends_in_tuple(&components, &SubsetSpec::Product(parts.clone()));
    }
    for branch in x.branches() {
        if !branch_ends_in(branch, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of a tuple of values in the extension of a subset of a
/// finite power of the universe.
pub fn ends_in_tuple(xs: &[VirtualValue], b: &SubsetSpec) -> Result<bool> {
    match (b, xs) {
        (SubsetSpec::Product(parts), _) => {
            if parts.len() != xs.len() {
                return Err(Error::ArityMismatch { expected: parts.len(), found: xs.len() });
            }
            for (x, part) in xs.iter().zip(parts) {
                if !ends_in(x, part)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (_, [single]) => ends_in(single, b),
        _ => match VirtualValue::from_components(xs) {
            Ok(joined) => ends_in(&joined, b),
            Err(_) => Err(Error::UndecidableMembership(
                "tuple with non-constant branches against a non-product set".into(),
            )),
        },
    }
}

fn branch_ends_in(branch: &BranchTerm, b: &SubsetSpec) -> Result<bool> {
    let rf = match branch {
        BranchTerm::Const(e) => return Ok(b.contains(e)),
        BranchTerm::Rat(rf) => rf,
    };
    match b {
        // a non-constant rational function takes any given value finitely often
        SubsetSpec::Finite(_) => Ok(false),
        SubsetSpec::Intervals(u) => Ok(u.eventually_contains(rf)),
        SubsetSpec::Integers => {
            let integral = rf.is_polynomial()
                && rf.denominator().as_constant().is_some_and(|d| num_traits::One::is_one(&d));
            if integral {
                Ok(true)
            } else {
                Err(Error::UndecidableMembership(format!(
                    "integrality of {rf} is only decided for integer-coefficient polynomials"
                )))
            }
        }
        SubsetSpec::Sort(s) => Ok(*s == Sort::REAL),
        SubsetSpec::Product(_) => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn cyc(ks: &[i64]) -> VirtualValue {
        VirtualValue::cyclic(ks.iter().map(|&k| BranchTerm::real(q(k))).collect()).unwrap()
    }

    fn rat(rf: RatFunc) -> VirtualValue {
        VirtualValue::cyclic(vec![BranchTerm::rat(rf)]).unwrap()
    }

    #[test]
    fn index_ends_in_positive_reals() {
        assert!(ends_in(&rat(RatFunc::index()), &SubsetSpec::positive_reals()).unwrap());
    }

    #[test]
    fn alternating_never_enters_nonnegatives() {
        let b = SubsetSpec::interval(Bound::Included(q(0)), Bound::Unbounded);
        assert!(!ends_in(&cyc(&[-1, 1]), &b).unwrap());
        assert!(ends_in(&cyc(&[0, 1]), &b).unwrap());
    }

    #[test]
    fn shifted_index_eventually_positive() {
        let shifted = RatFunc::from_poly(Poly::new(vec![q(-1000), q(1)]));
        assert!(ends_in(&rat(shifted.clone()), &SubsetSpec::positive_reals()).unwrap());
        for i in [2000, 4000] {
            assert!(shifted.eval_at(i).unwrap() > q(0));
        }
    }

    #[test]
    fn endpoints_respect_open_and_closed() {
        // 1 + 1/n approaches 1 from above
        let v = rat(RatFunc::one().add(&RatFunc::reciprocal_index()));
        let open_above = SubsetSpec::interval(Bound::Excluded(q(1)), Bound::Included(q(2)));
        let below = SubsetSpec::interval(Bound::Unbounded, Bound::Included(q(1)));
        assert!(ends_in(&v, &open_above).unwrap());
        assert!(!ends_in(&v, &below).unwrap());
    }

    #[test]
    fn finite_sets_and_integers() {
        let b = SubsetSpec::finite([UniverseElement::small(0), UniverseElement::small(1)]);
        assert!(ends_in(&cyc(&[0, 1]), &b).unwrap());
        assert!(!ends_in(&cyc(&[0, 2]), &b).unwrap());
        assert!(!ends_in(&rat(RatFunc::index()), &b).unwrap());
        assert!(ends_in(&rat(RatFunc::index()), &SubsetSpec::Integers).unwrap());
        assert!(matches!(
            ends_in(&rat(RatFunc::reciprocal_index()), &SubsetSpec::Integers),
            Err(Error::UndecidableMembership(_))
        ));
        let half_n = RatFunc::index().scale(&Rational::new(1.into(), 2.into()));
        assert!(ends_in(&rat(half_n), &SubsetSpec::Integers).is_err());
    }

    #[test]
    fn interval_union_merges() {
        let u = IntervalUnion::new(vec![
            Interval::new(Bound::Included(q(2)), Bound::Excluded(q(3))),
            Interval::new(Bound::Included(q(0)), Bound::Excluded(q(1))),
            Interval::new(Bound::Included(q(1)), Bound::Included(q(2))),
            Interval::new(Bound::Excluded(q(5)), Bound::Excluded(q(5))),
        ]);
        assert_eq!(
            u.intervals(),
            &[Interval::new(Bound::Included(q(0)), Bound::Excluded(q(3)))]
        );
        let gap = IntervalUnion::new(vec![
            Interval::new(Bound::Unbounded, Bound::Excluded(q(0))),
            Interval::new(Bound::Excluded(q(0)), Bound::Unbounded),
        ]);
        assert_eq!(gap.intervals().len(), 2);
        assert!(!gap.contains(&q(0)));
    }

    #[test]
    fn products_and_enumeration() {
        let bit = SubsetSpec::finite([UniverseElement::small(0), UniverseElement::small(1)]);
        let sq = SubsetSpec::Product(vec![bit.clone(), bit.clone()]);
        assert_eq!(sq.arity(), 2);
        assert_eq!(sq.enumerate().unwrap().len(), 4);
        let pair = VirtualValue::from_components(&[cyc(&[0, 1]), cyc(&[1])]).unwrap();
        assert!(ends_in(&pair, &sq).unwrap());
        assert!(ends_in_tuple(&[cyc(&[0, 1]), cyc(&[1, 0])], &sq).unwrap());
        assert_eq!(bit.is_subset_of(&SubsetSpec::reals()), Some(true));
        assert_eq!(SubsetSpec::positive_reals().is_subset_of(&SubsetSpec::reals()), Some(true));
        assert_eq!(SubsetSpec::reals().is_subset_of(&SubsetSpec::positive_reals()), None);
    }
}
