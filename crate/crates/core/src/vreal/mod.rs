//! Exact virtual reals.
//!
//! A virtual real is a canonical cyclic value whose branches are all
//! rational functions of the index with rational coefficients. Arithmetic
//! aligns periods and works branch by branch, so `+`, `-` and `*` are exact
//! and total. The collection is a commutative ring with unity; it has zero
//! divisors (`cyc{0; 1} * cyc{1; 0} = 0`) and its order is only partial.

use std::fmt;

use crate::error::{Error, Result};
use crate::ratfunc::{Limit, Sign};
use crate::seqcore::{self, map_branches, BranchTerm, Limits, RawSequence, SubsetSpec, VirtualValue};
use crate::{RatFunc, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualReal(VirtualValue);

impl VirtualReal {
    /// Accepts a value whose branches are all real.
    pub fn new(v: VirtualValue) -> Result<Self> {
        match v.branches().iter().find(|b| b.as_ratfunc().is_none()) {
            Some(b) => Err(Error::NotAVirtualReal(format!("branch {b} is not real"))),
            None => Ok(Self(v)),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self(VirtualValue::real(q))
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(k.into()))
    }

    pub fn from_ratfunc(rf: RatFunc) -> Self {
        Self(VirtualValue::cyclic(vec![BranchTerm::rat(rf)]).expect("period one"))
    }

    /// Residue-anchored cyclic value; branch `j` governs indices `i` with
    /// `(i - 1) % m == j`.
    pub fn cyclic(branches: Vec<RatFunc>) -> Result<Self> {
        Self::cyclic_with(branches, &Limits::default())
    }

    pub fn cyclic_with(branches: Vec<RatFunc>, limits: &Limits) -> Result<Self> {
        let tail = branches.into_iter().map(BranchTerm::rat).collect();
        Ok(Self(seqcore::canonicalize(&RawSequence::cyclic(tail), limits)?))
    }

    /// `∞`, the class of `(1, 2, 3, ...)`.
    pub fn infinity() -> Self {
        Self::from_ratfunc(RatFunc::index())
    }

    /// `ε = 1/∞`.
    pub fn epsilon() -> Self {
        Self::from_ratfunc(RatFunc::reciprocal_index())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn value(&self) -> &VirtualValue {
        &self.0
    }

    pub fn into_value(self) -> VirtualValue {
        self.0
    }

    pub fn period(&self) -> usize {
        self.0.period()
    }

    pub fn branch_funcs(&self) -> Vec<RatFunc> {
        self.0.branches().iter().map(|b| b.as_ratfunc().expect("real branch")).collect()
    }

    /// The rational `q` when this is the embedded constant `q̄`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.0.as_constant().and_then(|e| e.as_real().cloned())
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.branch_funcs().iter().map(RatFunc::eventual_sign).collect()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        vr_arith(ArithOp::Add, self, Some(rhs), &Limits::default())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        vr_arith(ArithOp::Sub, self, Some(rhs), &Limits::default())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        vr_arith(ArithOp::Mul, self, Some(rhs), &Limits::default())
    }

    pub fn neg(&self) -> Self {
        vr_arith(ArithOp::Neg, self, None, &Limits::unbounded()).expect("negation keeps shape")
    }

    pub fn abs(&self) -> Self {
        vr_arith(ArithOp::Abs, self, None, &Limits::unbounded()).expect("abs keeps shape")
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        vr_arith(ArithOp::Pow(exp), self, None, &Limits::default())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        vr_div(self, rhs, &Limits::default())
    }

    pub fn compare(&self, op: CmpOp, rhs: &Self) -> EventualTruth {
        vr_compare(self, op, rhs)
    }

    /// Whether the extended relation `self op rhs` holds.
    pub fn holds(&self, op: CmpOp, rhs: &Self) -> bool {
        self.compare(op, rhs) == EventualTruth::EventuallyTrue
    }

    /// Membership in the virtual integers. Only decided for branches that
    /// are integer-coefficient polynomials.
    pub fn is_virtual_integer(&self) -> Result<bool> {
        seqcore::ends_in(&self.0, &SubsetSpec::Integers)
    }
}

impl fmt::Display for VirtualReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<VirtualValue> for VirtualReal {
    type Error = Error;

    fn try_from(v: VirtualValue) -> Result<Self> {
        Self::new(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Abs,
    Pow(u32),
}

/// Branchwise exact arithmetic; binary operations require `b`.
pub fn vr_arith(op: ArithOp, a: &VirtualReal, b: Option<&VirtualReal>, limits: &Limits) -> Result<VirtualReal> {
    let binary = |f: fn(&RatFunc, &RatFunc) -> RatFunc| -> Result<VirtualReal> {
        let b = b.ok_or(Error::ArityMismatch { expected: 2, found: 1 })?;
        lift2(a, b, limits, |x, y| Ok(f(x, y)))
    };
    match op {
        ArithOp::Add => binary(RatFunc::add),
        ArithOp::Sub => binary(RatFunc::sub),
        ArithOp::Mul => binary(RatFunc::mul),
        ArithOp::Neg => lift1(a, limits, |x| Ok(x.neg())),
        ArithOp::Abs => lift1(a, limits, |x| Ok(x.abs())),
        ArithOp::Pow(k) => lift1(a, limits, |x| Ok(x.pow(k))),
    }
}

/// Exact branchwise quotient. Fails when some branch of `b` is identically
/// zero: `b` is then zero or a zero divisor.
pub fn vr_div(a: &VirtualReal, b: &VirtualReal, limits: &Limits) -> Result<VirtualReal> {
    if let Some(branch) = b.branch_funcs().iter().position(RatFunc::is_zero) {
        return Err(Error::ZeroBranchDivisor { branch });
    }
    lift2(a, b, limits, |x, y| x.div(y))
}

fn lift1(a: &VirtualReal, limits: &Limits, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<VirtualReal> {
    let v = map_branches(&[&a.0], limits, |t| Ok(BranchTerm::rat(f(&t[0].as_ratfunc().expect("real"))?)))?;
    Ok(VirtualReal(v))
}

fn lift2(
    a: &VirtualReal,
    b: &VirtualReal,
    limits: &Limits,
    f: impl Fn(&RatFunc, &RatFunc) -> Result<RatFunc>,
) -> Result<VirtualReal> {
    let v = map_branches(&[&a.0, &b.0], limits, |t| {
        let x = t[0].as_ratfunc().expect("real");
        let y = t[1].as_ratfunc().expect("real");
        Ok(BranchTerm::rat(f(&x, &y)?))
    })?;
    Ok(VirtualReal(v))
}

/// Sign the function keeps for all large indices.
pub fn eventual_sign(rf: &RatFunc) -> Sign {
    rf.eventual_sign()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    /// Whether `x op 0` for a number of sign `s`.
    pub fn accepts(self, s: Sign) -> bool {
        match self {
            CmpOp::Lt => s == Sign::Negative,
            CmpOp::Le => s != Sign::Positive,
            CmpOp::Eq => s == Sign::Zero,
            CmpOp::Ne => s != Sign::Zero,
            CmpOp::Ge => s != Sign::Negative,
            CmpOp::Gt => s == Sign::Positive,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// Outcome of an eventual comparison. `EventuallyFalse` means the negation
/// holds eventually; `Mixed` records per-branch verdicts when neither does,
/// so `not (a < b)` need not give `b <= a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventualTruth {
    EventuallyTrue,
    EventuallyFalse,
    Mixed(Vec<bool>),
}

impl EventualTruth {
    pub fn from_branches(verdicts: Vec<bool>) -> Self {
        if verdicts.iter().all(|&v| v) {
            EventualTruth::EventuallyTrue
        } else if verdicts.iter().all(|&v| !v) {
            EventualTruth::EventuallyFalse
        } else {
            EventualTruth::Mixed(verdicts)
        }
    }

    pub fn holds(&self) -> bool {
        *self == EventualTruth::EventuallyTrue
    }
}

impl fmt::Display for EventualTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventualTruth::EventuallyTrue => write!(f, "true"),
            EventualTruth::EventuallyFalse => write!(f, "false"),
            EventualTruth::Mixed(_) => write!(f, "mixed (not comparable)"),
        }
    }
}

/// Decides `a op b` on every aligned branch via the eventual sign of the
/// difference.
pub fn vr_compare(a: &VirtualReal, op: CmpOp, b: &VirtualReal) -> EventualTruth {
    let diff = lift2(a, b, &Limits::unbounded(), |x, y| Ok(x.sub(y))).expect("subtraction is total");
    let period = num_integer::lcm(a.period(), b.period());
    let signs = diff.signs();
    EventualTruth::from_branches((0..period).map(|j| op.accepts(signs[j % signs.len()])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    Infinitesimal,
    Appreciable,
    Infinite,
    Mixed,
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Magnitude::Zero => "zero",
            Magnitude::Infinitesimal => "infinitesimal",
            Magnitude::Appreciable => "appreciable-finite",
            Magnitude::Infinite => "infinite",
            Magnitude::Mixed => "mixed",
        })
    }
}

fn branch_magnitude(rf: &RatFunc) -> Magnitude {
    if rf.is_zero() {
        return Magnitude::Zero;
    }
    let dn = rf.numerator().degree().unwrap_or(0);
    let dd = rf.denominator().degree().unwrap_or(0);
    match dn.cmp(&dd) {
        std::cmp::Ordering::Less => Magnitude::Infinitesimal,
        std::cmp::Ordering::Equal => Magnitude::Appreciable,
        std::cmp::Ordering::Greater => Magnitude::Infinite,
    }
}

/// Magnitude class by degree comparison on each branch. Zero branches mixed
/// with infinitesimal ones still give an infinitesimal.
pub fn classify(a: &VirtualReal) -> Magnitude {
    let kinds: Vec<Magnitude> = a.branch_funcs().iter().map(branch_magnitude).collect();
    if kinds.iter().all(|&k| k == Magnitude::Zero) {
        Magnitude::Zero
    } else if kinds.iter().all(|&k| matches!(k, Magnitude::Zero | Magnitude::Infinitesimal)) {
        Magnitude::Infinitesimal
    } else if kinds.iter().all(|&k| k == kinds[0]) {
        kinds[0]
    } else {
        Magnitude::Mixed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Undefined {
    InfiniteBranch,
    DivergentBranches,
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Undefined::InfiniteBranch => "undefined (infinite branch)",
            Undefined::DivergentBranches => "undefined (branches have different limits)",
        })
    }
}

/// The common finite limit of all branches, when there is one.
pub fn standard_part(a: &VirtualReal) -> std::result::Result<Rational, Undefined> {
    let mut common: Option<Rational> = None;
    for rf in a.branch_funcs() {
        let limit = match rf.limit() {
            Limit::Finite(c) => c,
            _ => return Err(Undefined::InfiniteBranch),
        };
        match &common {
            None => common = Some(limit),
            Some(c) if *c != limit => return Err(Undefined::DivergentBranches),
            _ => {}
        }
    }
    Ok(common.expect("at least one branch"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn poly(cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::new(cs.iter().map(|&c| q(c)).collect()))
    }

    fn cyc(ks: &[i64]) -> VirtualReal {
        VirtualReal::cyclic(ks.iter().map(|&k| RatFunc::constant(q(k))).collect()).unwrap()
    }

    #[test]
    fn infinity_arithmetic() {
        let inf = VirtualReal::infinity();
        let one = VirtualReal::one();
        let sum = inf.add(&one).unwrap();
        assert_eq!(sum.to_string(), "(n+1)/1");
        let prod = inf.mul(&sum).unwrap();
        assert_eq!(prod, VirtualReal::from_ratfunc(poly(&[0, 1, 1])));
        assert_eq!(prod.to_string(), "(n^2+n)/1");
        assert_eq!(VirtualReal::epsilon().mul(&inf).unwrap(), one);
    }

    #[test]
    fn division() {
        let inf = VirtualReal::infinity();
        assert_eq!(VirtualReal::one().div(&inf).unwrap(), VirtualReal::epsilon());
        let prod = VirtualReal::from_ratfunc(poly(&[0, 1, 1]));
        assert_eq!(prod.div(&inf).unwrap(), VirtualReal::from_ratfunc(poly(&[1, 1])));
        assert_eq!(
            VirtualReal::one().div(&cyc(&[0, 1])),
            Err(Error::ZeroBranchDivisor { branch: 0 })
        );
    }

    #[test]
    fn zero_divisors() {
        let a = cyc(&[0, 1]);
        let b = cyc(&[1, 0]);
        assert_ne!(a, VirtualReal::zero());
        assert_ne!(b, VirtualReal::zero());
        assert_eq!(a.mul(&b).unwrap(), VirtualReal::zero());
    }

    #[test]
    fn alternating_value_is_not_comparable_with_zero() {
        let alt = cyc(&[-1, 1]);
        let zero = VirtualReal::zero();
        assert!(matches!(vr_compare(&alt, CmpOp::Le, &zero), EventualTruth::Mixed(_)));
        assert!(matches!(vr_compare(&zero, CmpOp::Le, &alt), EventualTruth::Mixed(_)));
        assert_eq!(vr_compare(&alt, CmpOp::Ne, &zero), EventualTruth::EventuallyTrue);
        assert_eq!(vr_compare(&alt, CmpOp::Eq, &zero), EventualTruth::EventuallyFalse);
    }

    #[test]
    fn order_facts() {
        let eps = VirtualReal::epsilon();
        assert_eq!(eps.compare(CmpOp::Gt, &VirtualReal::zero()), EventualTruth::EventuallyTrue);
        let billion = VirtualReal::from_int(1_000_000_000);
        assert!(billion.holds(CmpOp::Lt, &VirtualReal::infinity()));
        assert!(eps.holds(CmpOp::Lt, &VirtualReal::from_rational(Rational::new(1.into(), 1000.into()))));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&VirtualReal::epsilon()), Magnitude::Infinitesimal);
        let big = RatFunc::new(Poly::new(vec![q(1), q(0), q(1)]), Poly::new(vec![q(0), q(2)])).unwrap();
        assert_eq!(classify(&VirtualReal::from_ratfunc(big.clone())), Magnitude::Infinite);
        let mixed = VirtualReal::cyclic(vec![RatFunc::reciprocal_index(), RatFunc::index()]).unwrap();
        assert_eq!(classify(&mixed), Magnitude::Mixed);
        assert_eq!(classify(&VirtualReal::zero()), Magnitude::Zero);
        assert_eq!(classify(&cyc(&[1, 2])), Magnitude::Appreciable);
        let tiny = VirtualReal::cyclic(vec![RatFunc::zero(), RatFunc::reciprocal_index()]).unwrap();
        assert_eq!(classify(&tiny), Magnitude::Infinitesimal);
    }

    #[test]
    fn standard_parts() {
        let a = VirtualReal::from_ratfunc(RatFunc::one().add(&RatFunc::reciprocal_index()));
        assert_eq!(standard_part(&a), Ok(q(1)));
        let big = RatFunc::new(Poly::new(vec![q(1), q(0), q(1)]), Poly::new(vec![q(0), q(2)])).unwrap();
        assert_eq!(standard_part(&VirtualReal::from_ratfunc(big)), Err(Undefined::InfiniteBranch));
        assert_eq!(standard_part(&cyc(&[1, 2])), Err(Undefined::DivergentBranches));
        let eps = VirtualReal::epsilon();
        let x = VirtualReal::one().add(&eps).unwrap().add(&eps.pow(2).unwrap()).unwrap();
        assert_eq!(standard_part(&x), Ok(q(1)));
        assert_eq!(classify(&x.sub(&VirtualReal::one()).unwrap()), Magnitude::Infinitesimal);
    }

    #[test]
    fn abs_and_pow() {
        let a = VirtualReal::cyclic(vec![poly(&[0, -1]), poly(&[3])]).unwrap();
        assert_eq!(a.abs(), VirtualReal::cyclic(vec![poly(&[0, 1]), poly(&[3])]).unwrap());
        assert_eq!(cyc(&[-1, 1]).pow(2).unwrap(), VirtualReal::one());
    }

    #[test]
    fn caps_apply_to_results() {
        let limits = Limits { max_period: 64, max_degree: 3 };
        let n2 = VirtualReal::infinity().pow(2).unwrap();
        assert_eq!(
            vr_arith(ArithOp::Mul, &n2, Some(&n2), &limits),
            Err(Error::DegreeLimitExceeded { degree: 4, cap: 3 })
        );
        let limits = Limits { max_period: 5, max_degree: 3 };
        let a = VirtualReal::cyclic_with(vec![RatFunc::zero(), RatFunc::one()], &limits).unwrap();
        let b = VirtualReal::cyclic_with(vec![RatFunc::zero(), RatFunc::one(), RatFunc::one()], &limits).unwrap();
        assert_eq!(
            vr_arith(ArithOp::Add, &a, Some(&b), &limits),
            Err(Error::PeriodLimitExceeded { period: 6, cap: 5 })
        );
    }

    #[test]
    fn virtual_integers() {
        assert!(VirtualReal::infinity().is_virtual_integer().unwrap());
        assert!(VirtualReal::from_int(-4).is_virtual_integer().unwrap());
        assert!(!VirtualReal::from_rational(Rational::new(1.into(), 2.into())).is_virtual_integer().unwrap());
        assert!(VirtualReal::epsilon().is_virtual_integer().is_err());
    }

    #[test]
    fn non_real_values_are_rejected() {
        let v = VirtualValue::constant(crate::seqcore::UniverseElement::atom(0));
        assert!(matches!(VirtualReal::new(v), Err(Error::NotAVirtualReal(_))));
    }
}
