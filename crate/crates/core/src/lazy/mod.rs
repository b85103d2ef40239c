//! Sequences outside the exact fragment.
//!
//! `ln`, `exp`, `sin` and `cos` of a virtual real produce sequences that no
//! longer have rational-function branches. They are kept as expression
//! trees and evaluated index by index in floating point. Every verdict in
//! this tier is tagged with the horizon it was checked to.

use std::fmt;

use num_traits::{Float, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{ends_in, Limits, SubsetSpec};
use crate::vreal::{standard_part, vr_arith, vr_div, ArithOp, CmpOp, VirtualReal};
use crate::Rational;

pub const DEFAULT_HORIZON: u64 = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;
const GRID_START: u64 = 16;
/// Grid points used by the extrapolation, counted from the horizon down.
const EXTRAPOLATION_DEPTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueFn {
    Ln,
    Exp,
    Sin,
    Cos,
}

impl ValueFn {
    pub fn name(self) -> &'static str {
        match self {
            ValueFn::Ln => "ln",
            ValueFn::Exp => "exp",
            ValueFn::Sin => "sin",
            ValueFn::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "ln" => ValueFn::Ln,
            "exp" => ValueFn::Exp,
            "sin" => ValueFn::Sin,
            "cos" => ValueFn::Cos,
            _ => return None,
        })
    }

    pub fn apply<F: Float>(self, x: F) -> F {
        match self {
            ValueFn::Ln => x.ln(),
            ValueFn::Exp => x.exp(),
            ValueFn::Sin => x.sin(),
            ValueFn::Cos => x.cos(),
        }
    }

    pub fn domain(self) -> SubsetSpec {
        match self {
            ValueFn::Ln => SubsetSpec::positive_reals(),
            _ => SubsetSpec::reals(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LazyOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl LazyOp {
    fn apply<F: Float>(self, a: F, b: F) -> F {
        match self {
            LazyOp::Add => a + b,
            LazyOp::Sub => a - b,
            LazyOp::Mul => a * b,
            LazyOp::Div => a / b,
        }
    }

    fn symbol(self) -> char {
        match self {
            LazyOp::Add => '+',
            LazyOp::Sub => '-',
            LazyOp::Mul => '*',
            LazyOp::Div => '/',
        }
    }
}

/// A sequence given by how it was built; evaluating the tree at an index is
/// the sequence's rule.
#[derive(Clone, Debug, PartialEq)]
pub enum LazySequence<F> {
    Exact(VirtualReal),
    Constant(F),
    Call(ValueFn, Box<LazySequence<F>>),
    Binary(LazyOp, Box<LazySequence<F>>, Box<LazySequence<F>>),
    Neg(Box<LazySequence<F>>),
    Powi(Box<LazySequence<F>>, u32),
}

impl<F: Float> From<VirtualReal> for LazySequence<F> {
    fn from(v: VirtualReal) -> Self {
        LazySequence::Exact(v)
    }
}

fn to_float<F: Float>(q: &Rational) -> F {
    q.to_f64().and_then(F::from).unwrap_or_else(F::nan)
}

impl<F: Float> LazySequence<F> {
    pub fn constant(c: F) -> Self {
        LazySequence::Constant(c)
    }

    /// Term at the 1-based index `i`; NaN at a pole.
    pub fn at(&self, i: u64) -> F {
        match self {
            LazySequence::Exact(v) => {
                let rf = v.value().term_at(i).as_ratfunc().expect("real branch");
                rf.eval_at(i).map_or_else(F::nan, |q| to_float(&q))
            }
            LazySequence::Constant(c) => *c,
            LazySequence::Call(f, a) => f.apply(a.at(i)),
            LazySequence::Binary(op, a, b) => op.apply(a.at(i), b.at(i)),
            LazySequence::Neg(a) => -a.at(i),
            LazySequence::Powi(a, k) => a.at(i).powi(*k as i32),
        }
    }

    /// Least common period of the exact leaves.
    pub fn period(&self) -> usize {
        match self {
            LazySequence::Exact(v) => v.period(),
            LazySequence::Constant(_) => 1,
            LazySequence::Call(_, a) | LazySequence::Neg(a) | LazySequence::Powi(a, _) => a.period(),
            LazySequence::Binary(_, a, b) => num_integer::lcm(a.period(), b.period()),
        }
    }

    pub fn as_exact(&self) -> Option<&VirtualReal> {
        match self {
            LazySequence::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn binary(op: LazyOp, a: Self, b: Self) -> Self {
        LazySequence::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn add(self, rhs: Self) -> Self {
        Self::binary(LazyOp::Add, self, rhs)
    }

    pub fn sub(self, rhs: Self) -> Self {
        Self::binary(LazyOp::Sub, self, rhs)
    }

    pub fn mul(self, rhs: Self) -> Self {
        Self::binary(LazyOp::Mul, self, rhs)
    }

    pub fn div(self, rhs: Self) -> Self {
        Self::binary(LazyOp::Div, self, rhs)
    }

    pub fn neg(self) -> Self {
        LazySequence::Neg(Box::new(self))
    }

    pub fn powi(self, k: u32) -> Self {
        LazySequence::Powi(Box::new(self), k)
    }

    pub fn call(self, f: ValueFn) -> Self {
        LazySequence::Call(f, Box::new(self))
    }
}

impl<F: Float + fmt::Display> fmt::Display for LazySequence<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LazySequence::Exact(v) => {
                let text = v.to_string();
                if text.starts_with("cyc") || !text.contains(['+', '-', '*', '/']) {
                    write!(f, "{text}")
                } else {
                    write!(f, "({text})")
                }
            }
            LazySequence::Constant(c) => write!(f, "{c}"),
            LazySequence::Call(func, a) => {
                let inner = a.to_string();
                if inner.starts_with('(') && matches!(**a, LazySequence::Exact(_)) {
                    write!(f, "{}{inner}", func.name())
                } else {
                    write!(f, "{}({inner})", func.name())
                }
            }
            LazySequence::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            LazySequence::Neg(a) => write!(f, "-({a})"),
            LazySequence::Powi(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

/// Pointwise application of a transcendental function. An exact argument
/// must end in the function's domain.
pub fn lift_value_fn<F: Float>(f: ValueFn, a: impl Into<LazySequence<F>>) -> Result<LazySequence<F>> {
    let a = a.into();
    if let LazySequence::Exact(v) = &a {
        if !ends_in(v.value(), &f.domain())? {
            return Err(Error::DomainViolation(format!("{v} does not end in the domain of {}", f.name())));
        }
    }
    Ok(a.call(f))
}

/// Horizon-bounded verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Truth3 {
    TrueUpTo { horizon: u64, tol: f64 },
    FalseWithWitness { index: u64, lhs: f64, rhs: f64 },
    /// Some sampled term was not a finite number.
    Inconclusive { horizon: u64, index: u64 },
}

impl Truth3 {
    pub fn is_true(&self) -> bool {
        matches!(self, Truth3::TrueUpTo { .. })
    }
}

impl fmt::Display for Truth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truth3::TrueUpTo { horizon, tol } => write!(f, "true (checked to H={horizon}, tol={tol:e})"),
            Truth3::FalseWithWitness { index, lhs, rhs } => {
                write!(f, "false (at n={index}: {lhs} vs {rhs})")
            }
            Truth3::Inconclusive { horizon, index } => {
                write!(f, "inconclusive (non-finite term at n={index}, H={horizon})")
            }
        }
    }
}

/// Geometric sampling grid: 16, 32, 64, ... below `horizon`, then `horizon`.
pub fn grid(horizon: u64) -> Vec<u64> {
    if horizon < GRID_START {
        return (1..=horizon).collect();
    }
    let mut out = Vec::new();
    let mut g = GRID_START;
    while g < horizon {
        out.push(g);
        g *= 2;
    }
    out.push(horizon);
    out
}

/// Compares two sequences on every residue class at each grid point.
pub fn check_identity<F: Float>(lhs: &LazySequence<F>, rhs: &LazySequence<F>, tol: f64, horizon: u64) -> Truth3 {
    check_relation(lhs, CmpOp::Eq, rhs, tol, horizon)
}

/// Whether `a op b` at one sample. Equality holds within `tol`; a strict
/// order needs a gap wider than `tol` and a weak one tolerates `tol`.
fn sample_holds(a: f64, op: CmpOp, b: f64, tol: f64) -> bool {
    match op {
        CmpOp::Eq => (a - b).abs() <= tol,
        CmpOp::Ne => (a - b).abs() > tol,
        CmpOp::Lt => b - a > tol,
        CmpOp::Le => a - b <= tol,
        CmpOp::Gt => a - b > tol,
        CmpOp::Ge => b - a <= tol,
    }
}

/// `lhs op rhs` sampled like `check_identity`.
pub fn check_relation<F: Float>(lhs: &LazySequence<F>, op: CmpOp, rhs: &LazySequence<F>, tol: f64, horizon: u64) -> Truth3 {
    let period = num_integer::lcm(lhs.period(), rhs.period()) as u64;
    let mut nonfinite = None;
    for g in grid(horizon) {
        let start = g.saturating_sub(period - 1).max(1);
        for i in start..=g {
            let (a, b) = (lhs.at(i).to_f64().unwrap_or(f64::NAN), rhs.at(i).to_f64().unwrap_or(f64::NAN));
            if !a.is_finite() || !b.is_finite() {
                nonfinite.get_or_insert(i);
                continue;
            }
            if !sample_holds(a, op, b, tol) {
                return Truth3::FalseWithWitness { index: i, lhs: a, rhs: b };
            }
        }
    }
    match nonfinite {
        Some(index) => Truth3::Inconclusive { horizon, index },
        None => Truth3::TrueUpTo { horizon, tol },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StStatus {
    Converged,
    Diverging,
    Oscillating,
}

impl fmt::Display for StStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StStatus::Converged => "converged",
            StStatus::Diverging => "diverging",
            StStatus::Oscillating => "oscillating",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StNumeric {
    pub value: f64,
    pub status: StStatus,
    /// Extrapolated limit of each residue class.
    pub branches: Vec<f64>,
    pub horizon: u64,
    pub tol: f64,
}

impl fmt::Display for StNumeric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (-self.tol.log10()).ceil().clamp(1.0, 17.0) as usize;
        match self.status {
            StStatus::Converged => write!(
                f,
                "{:.*} (numeric, converged; H={}, tol={:e})",
                digits, self.value, self.horizon, self.tol
            ),
            s => write!(f, "undefined (numeric, {s}; H={}, tol={:e})", self.horizon, self.tol),
        }
    }
}

/// Limit at `h = 0` of the interpolating polynomial through `(h_k, y_k)`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for j in 0..n - level {
            let (xj, xk) = (xs[j], xs[j + level]);
            p[j] = (xj * p[j + 1] - xk * p[j]) / (xj - xk);
        }
    }
    p[0]
}

fn residue_limit<F: Float>(a: &LazySequence<F>, period: u64, r: u64, tol: f64, horizon: u64) -> (f64, StStatus) {
    let mut idx: Vec<u64> = Vec::new();
    for g in grid(horizon) {
        // largest index <= g in residue class r, kept inside 1..
        let i = if g > r { g - ((g - 1 - r) % period) } else { continue };
        if idx.last() != Some(&i) {
            idx.push(i);
        }
    }
    let ys: Vec<f64> = idx.iter().map(|&i| a.at(i).to_f64().unwrap_or(f64::NAN)).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return (f64::NAN, StStatus::Diverging);
    }
    if ys.len() < 2 {
        return (ys.first().copied().unwrap_or(f64::NAN), StStatus::Oscillating);
    }
    let tail = ys.len().saturating_sub(EXTRAPOLATION_DEPTH);
    let xs: Vec<f64> = idx[tail..].iter().map(|&i| 1.0 / i as f64).collect();
    let ys_tail = &ys[tail..];
    let full = neville_at_zero(&xs, ys_tail);
    let shorter = neville_at_zero(&xs[1..], &ys_tail[1..]);
    if (full - shorter).abs() <= tol {
        return (full, StStatus::Converged);
    }
    // steady growth of the raw terms without contraction, per unit of ln i
    let d: Vec<f64> = ys
        .windows(2)
        .zip(idx.windows(2))
        .map(|(w, i)| (w[1] - w[0]) / (i[1] as f64 / i[0] as f64).ln())
        .collect();
    let last = &d[d.len().saturating_sub(3)..];
    let same_sign = last.iter().all(|x| *x > 0.0) || last.iter().all(|x| *x < 0.0);
    let not_contracting = last.windows(2).all(|w| w[1].abs() >= 0.75 * w[0].abs());
    if same_sign && not_contracting {
        (full, StStatus::Diverging)
    } else {
        (full, StStatus::Oscillating)
    }
}

/// Numeric standard part: per residue class, Richardson extrapolation in
/// `h = 1/i` over the top of the sampling grid.
pub fn st_numeric<F: Float>(a: &LazySequence<F>, tol: f64, horizon: u64) -> StNumeric {
    let period = a.period() as u64;
    let per: Vec<(f64, StStatus)> = (0..period).map(|r| residue_limit(a, period, r, tol, horizon)).collect();
    let branches: Vec<f64> = per.iter().map(|p| p.0).collect();
    let status = if per.iter().any(|p| p.1 == StStatus::Diverging) {
        StStatus::Diverging
    } else if per.iter().all(|p| p.1 == StStatus::Converged) {
        let lo = branches.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = branches.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= tol {
            StStatus::Converged
        } else {
            StStatus::Oscillating
        }
    } else {
        StStatus::Oscillating
    };
    let value = branches.iter().sum::<f64>() / branches.len() as f64;
    StNumeric { value, status, branches, horizon, tol }
}

/// Expression in one real variable.
#[derive(Clone, Debug, PartialEq)]
pub enum UnivariateExpr {
    Var,
    Const(Rational),
    Add(Box<UnivariateExpr>, Box<UnivariateExpr>),
    Sub(Box<UnivariateExpr>, Box<UnivariateExpr>),
    Mul(Box<UnivariateExpr>, Box<UnivariateExpr>),
    Div(Box<UnivariateExpr>, Box<UnivariateExpr>),
    Neg(Box<UnivariateExpr>),
    Pow(Box<UnivariateExpr>, u32),
    Call(ValueFn, Box<UnivariateExpr>),
}

impl UnivariateExpr {
    pub fn constant(k: i64) -> Self {
        UnivariateExpr::Const(Rational::from_integer(k.into()))
    }

    pub fn call(f: ValueFn, a: Self) -> Self {
        UnivariateExpr::Call(f, Box::new(a))
    }

    /// Whether the expression is a rational function of the variable.
    pub fn is_rational(&self) -> bool {
        use UnivariateExpr::*;
        match self {
            Var | Const(_) => true,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.is_rational() && b.is_rational(),
            Neg(a) | Pow(a, _) => a.is_rational(),
            Call(..) => false,
        }
    }

    pub fn eval_exact(&self, x: &VirtualReal, limits: &Limits) -> Result<VirtualReal> {
        use UnivariateExpr::*;
        let bin = |op, a: &Self, b: &Self| vr_arith(op, &a.eval_exact(x, limits)?, Some(&b.eval_exact(x, limits)?), limits);
        match self {
            Var => Ok(x.clone()),
            Const(q) => Ok(VirtualReal::from_rational(q.clone())),
            Add(a, b) => bin(ArithOp::Add, a, b),
            Sub(a, b) => bin(ArithOp::Sub, a, b),
            Mul(a, b) => bin(ArithOp::Mul, a, b),
            Div(a, b) => vr_div(&a.eval_exact(x, limits)?, &b.eval_exact(x, limits)?, limits),
            Neg(a) => vr_arith(ArithOp::Neg, &a.eval_exact(x, limits)?, None, limits),
            Pow(a, k) => vr_arith(ArithOp::Pow(*k), &a.eval_exact(x, limits)?, None, limits),
            Call(f, _) => Err(Error::DomainViolation(format!("{} has no exact branch rule", f.name()))),
        }
    }

    pub fn eval_lazy(&self, x: &LazySequence<f64>) -> LazySequence<f64> {
        use UnivariateExpr::*;
        match self {
            Var => x.clone(),
            Const(q) => LazySequence::Exact(VirtualReal::from_rational(q.clone())),
            Add(a, b) => a.eval_lazy(x).add(b.eval_lazy(x)),
            Sub(a, b) => a.eval_lazy(x).sub(b.eval_lazy(x)),
            Mul(a, b) => a.eval_lazy(x).mul(b.eval_lazy(x)),
            Div(a, b) => a.eval_lazy(x).div(b.eval_lazy(x)),
            Neg(a) => a.eval_lazy(x).neg(),
            Pow(a, k) => a.eval_lazy(x).powi(*k),
            Call(f, a) => a.eval_lazy(x).call(*f),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use UnivariateExpr::*;
        match self {
            Var => x,
            Const(q) => to_float(q),
            Add(a, b) => a.eval_f64(x) + b.eval_f64(x),
            Sub(a, b) => a.eval_f64(x) - b.eval_f64(x),
            Mul(a, b) => a.eval_f64(x) * b.eval_f64(x),
            Div(a, b) => a.eval_f64(x) / b.eval_f64(x),
            Neg(a) => -a.eval_f64(x),
            Pow(a, k) => a.eval_f64(x).powi(*k as i32),
            Call(f, a) => f.apply(a.eval_f64(x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Derivative {
    Exact(Rational),
    Numeric(StNumeric),
}

impl fmt::Display for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivative::Exact(q) => write!(f, "{q} (exact)"),
            Derivative::Numeric(st) => write!(f, "{st}"),
        }
    }
}

/// `st((f(x0 + eps) - f(x0)) / eps)` with `eps = 1/n`. Rational `f` goes
/// through exact arithmetic and the exact standard part.
pub fn derivative(f: &UnivariateExpr, x0: &Rational, tol: f64, horizon: u64) -> Result<Derivative> {
    let eps = VirtualReal::epsilon();
    let base = VirtualReal::from_rational(x0.clone());
    let shifted = base.add(&eps)?;
    if f.is_rational() {
        let limits = Limits::default();
        let fx = f.eval_exact(&base, &limits)?;
        let quotient = vr_div(&f.eval_exact(&shifted, &limits)?.sub(&fx)?, &eps, &limits)?;
        return standard_part(&quotient)
            .map(Derivative::Exact)
            .map_err(|why| Error::DomainViolation(format!("difference quotient at {x0}: {why}")));
    }
    let fx0 = f.eval_f64(to_float(x0));
    if !fx0.is_finite() {
        return Err(Error::DomainViolation(format!("function is not defined at {x0}")));
    }
    let quotient = f
        .eval_lazy(&LazySequence::Exact(shifted))
        .sub(LazySequence::Constant(fx0))
        .div(LazySequence::Exact(eps));
    Ok(Derivative::Numeric(st_numeric(&quotient, tol, horizon)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RatFunc;

    fn q(k: i64) -> Rational {
        Rational::from_integer(k.into())
    }

    fn inf() -> LazySequence<f64> {
        VirtualReal::infinity().into()
    }

    #[test]
    fn ln_of_infinity_is_pointwise() {
        let l = lift_value_fn::<f64>(ValueFn::Ln, VirtualReal::infinity()).unwrap();
        assert_eq!(l.at(10), 10f64.ln());
        assert_eq!(l.at(100), 100f64.ln());
        assert!(matches!(
            lift_value_fn::<f64>(ValueFn::Ln, VirtualReal::cyclic(vec![RatFunc::one(), RatFunc::one().neg()]).unwrap()),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn sin_of_zero_and_exp_of_eps() {
        let s = lift_value_fn::<f64>(ValueFn::Sin, VirtualReal::zero()).unwrap();
        assert!((1..50).all(|i| s.at(i) == 0.0));
        let e = lift_value_fn::<f64>(ValueFn::Exp, VirtualReal::epsilon()).unwrap();
        let h = 1e-6;
        // 1 + h + h^2/2 with remainder below h^3
        assert!((e.at(1_000_000) - (1.0 + h)).abs() <= h * h);
    }

    #[test]
    fn pythagorean_identity_on_infinity() {
        let s = inf().call(ValueFn::Sin).powi(2);
        let c = inf().call(ValueFn::Cos).powi(2);
        let one: LazySequence<f64> = VirtualReal::one().into();
        let t = check_identity(&s.add(c), &one, DEFAULT_TOL, DEFAULT_HORIZON);
        assert_eq!(t, Truth3::TrueUpTo { horizon: 10_000, tol: 1e-9 });
        assert_eq!(t.to_string(), "true (checked to H=10000, tol=1e-9)");
    }

    #[test]
    fn sine_is_not_identity() {
        let a: LazySequence<f64> = VirtualReal::cyclic(vec![RatFunc::one(), RatFunc::constant(q(2))]).unwrap().into();
        let t = check_identity(&a.clone().call(ValueFn::Sin), &a, DEFAULT_TOL, DEFAULT_HORIZON);
        assert!(matches!(t, Truth3::FalseWithWitness { .. }));
    }

    #[test]
    fn sampled_order() {
        let l = inf().call(ValueFn::Ln);
        assert!(check_relation(&l, CmpOp::Lt, &inf(), DEFAULT_TOL, DEFAULT_HORIZON).is_true());
        assert!(!check_relation(&l, CmpOp::Gt, &inf(), DEFAULT_TOL, DEFAULT_HORIZON).is_true());
        let s = inf().call(ValueFn::Sin);
        let zero = LazySequence::Constant(0.0);
        assert!(!check_relation(&s, CmpOp::Le, &zero, DEFAULT_TOL, DEFAULT_HORIZON).is_true());
        assert!(check_relation(&s, CmpOp::Le, &LazySequence::Constant(1.0), DEFAULT_TOL, DEFAULT_HORIZON).is_true());
    }

    #[test]
    fn log_law() {
        let sq = inf().mul(inf()).call(ValueFn::Ln);
        let twice = LazySequence::Constant(2.0).mul(inf().call(ValueFn::Ln));
        assert!(check_identity(&sq, &twice, DEFAULT_TOL, DEFAULT_HORIZON).is_true());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(grid(100), vec![16, 32, 64, 100]);
        assert_eq!(grid(3), vec![1, 2, 3]);
        assert_eq!(*grid(DEFAULT_HORIZON).last().unwrap(), 10_000);
    }

    #[test]
    fn numeric_standard_parts() {
        let a: LazySequence<f64> = VirtualReal::from_ratfunc(RatFunc::one().add(&RatFunc::reciprocal_index())).into();
        let st = st_numeric(&a, DEFAULT_TOL, DEFAULT_HORIZON);
        assert_eq!(st.status, StStatus::Converged);
        assert!((st.value - 1.0).abs() <= 1e-9);

        let l = inf().call(ValueFn::Ln);
        assert_eq!(st_numeric(&l, DEFAULT_TOL, DEFAULT_HORIZON).status, StStatus::Diverging);

        let eps: LazySequence<f64> = VirtualReal::epsilon().into();
        let sinc = inf().mul(eps.call(ValueFn::Sin));
        let st = st_numeric(&sinc, DEFAULT_TOL, DEFAULT_HORIZON);
        assert_eq!(st.status, StStatus::Converged);
        assert!((st.value - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn branch_disagreement_is_oscillation() {
        let a: LazySequence<f64> = VirtualReal::cyclic(vec![RatFunc::one(), RatFunc::constant(q(2))]).unwrap().into();
        assert_eq!(st_numeric(&a, DEFAULT_TOL, DEFAULT_HORIZON).status, StStatus::Oscillating);
        let s = inf().call(ValueFn::Sin);
        assert_eq!(st_numeric(&s, DEFAULT_TOL, DEFAULT_HORIZON).status, StStatus::Oscillating);
    }

    #[test]
    fn exact_derivatives() {
        use UnivariateExpr::*;
        let x2 = Pow(Box::new(Var), 2);
        let d = derivative(&x2, &q(3), DEFAULT_TOL, DEFAULT_HORIZON).unwrap();
        assert_eq!(d, Derivative::Exact(q(6)));
        assert_eq!(d.to_string(), "6 (exact)");
        let cubic = Sub(Box::new(Pow(Box::new(Var), 3)), Box::new(Var));
        assert_eq!(derivative(&cubic, &q(2), DEFAULT_TOL, DEFAULT_HORIZON).unwrap(), Derivative::Exact(q(11)));
        let recip = Div(Box::new(UnivariateExpr::constant(1)), Box::new(Var));
        assert_eq!(
            derivative(&recip, &q(2), DEFAULT_TOL, DEFAULT_HORIZON).unwrap(),
            Derivative::Exact(Rational::new((-1).into(), 4.into()))
        );
    }

    fn central_difference(f: &UnivariateExpr, x: f64) -> f64 {
        let h = 1e-5;
        (f.eval_f64(x + h) - f.eval_f64(x - h)) / (2.0 * h)
    }

    #[test]
    fn numeric_derivatives() {
        for (f, x0, expected) in [(ValueFn::Sin, 0, 1.0), (ValueFn::Ln, 2, 0.5), (ValueFn::Exp, 1, std::f64::consts::E)] {
            let e = UnivariateExpr::call(f, UnivariateExpr::Var);
            let Derivative::Numeric(st) = derivative(&e, &q(x0), DEFAULT_TOL, DEFAULT_HORIZON).unwrap() else {
                panic!("expected the numeric route");
            };
            assert_eq!(st.status, StStatus::Converged, "{f:?}");
            assert!((st.value - expected).abs() <= 1e-6);
            assert!((st.value - central_difference(&e, x0 as f64)).abs() <= 1e-6);
        }
    }

    #[test]
    fn display_forms() {
        let e = inf().call(ValueFn::Sin).powi(2);
        assert_eq!(e.to_string(), "(sin(n/1))^2");
        let st = st_numeric(&LazySequence::<f64>::Exact(VirtualReal::one()), 1e-9, 100);
        assert_eq!(st.to_string(), "1.000000000 (numeric, converged; H=100, tol=1e-9)");
    }

    #[test]
    fn works_in_single_precision() {
        let s = LazySequence::<f32>::Exact(VirtualReal::infinity()).call(ValueFn::Sin).powi(2);
        let c = LazySequence::<f32>::Exact(VirtualReal::infinity()).call(ValueFn::Cos).powi(2);
        let one = LazySequence::<f32>::Constant(1.0);
        assert!(check_identity(&s.add(c), &one, 1e-5, 1000).is_true());
    }
}
