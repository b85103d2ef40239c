//! Exact rational functions of the index `n`.
//!
//! A [`RationalFunction`] is the decidable stand-in for a real-valued
//! sequence: it is defined past its largest pole and, having finitely many
//! zeros, keeps a constant sign for all large indices. Comparisons between
//! such sequences therefore reduce to the sign of a leading coefficient.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Sign a sequence keeps for all sufficiently large indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<C: Scalar>(c: &C) -> Self {
        if c.is_zero() {
            Sign::Zero
        } else if c.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn as_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

/// Limit of a rational function as the index grows.
#[derive(Clone, Debug, PartialEq)]
pub enum Limit<C> {
    Finite(C),
    PlusInfinity,
    MinusInfinity,
}

/// `num / den`, reduced and scaled canonically: the gcd is a constant, and
/// for rational coefficients both polynomials have coprime integer
/// coefficients with a positive leading denominator coefficient. Zero is
/// `0/1`. Structural equality is therefore functional identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction<C> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Scalar> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.degree() == Some(0) || num.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let scale = C::canonical_scale(num.coeffs(), den.coeffs());
        Self { num: num.scale(&scale), den: den.scale(&scale) }
    }

    pub fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        Self::normalized(p, Polynomial::one())
    }

    /// The sequence `n`, i.e. `(1, 2, 3, ...)`.
    pub fn index() -> Self {
        Self::from_poly(Polynomial::index())
    }

    /// The sequence `1/n`.
    pub fn reciprocal_index() -> Self {
        Self::normalized(Polynomial::one(), Polynomial::index())
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value when the function is constant.
    pub fn as_constant(&self) -> Option<C> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Largest of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// Value at index `i`, or `None` at a pole.
    pub fn eval_at(&self, i: u64) -> Option<C> {
        self.eval(&C::from_index(i))
    }

    pub fn eval(&self, x: &C) -> Option<C> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Sign for all sufficiently large indices.
    pub fn eventual_sign(&self) -> Sign {
        match (self.num.leading(), self.den.leading()) {
            (None, _) => Sign::Zero,
            (Some(a), Some(b)) => Sign::of(a).product(Sign::of(b)),
            (Some(_), None) => unreachable!("denominator is never zero"),
        }
    }

    pub fn limit(&self) -> Limit<C> {
        let Some(dn) = self.num.degree() else {
            return Limit::Finite(C::zero());
        };
        let dd = self.den.degree().unwrap_or(0);
        match dn.cmp(&dd) {
            Ordering::Less => Limit::Finite(C::zero()),
            Ordering::Equal => {
                Limit::Finite(self.num.leading().unwrap().clone() / self.den.leading().unwrap().clone())
            }
            Ordering::Greater => match self.eventual_sign() {
                Sign::Negative => Limit::MinusInfinity,
                _ => Limit::PlusInfinity,
            },
        }
    }

    /// Functional identity checked by cross-multiplication,
    /// `p1*q2 - p2*q1 == 0`, independent of the canonical scaling.
    pub fn identical(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(&self.num + &rhs.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self::normalized(self.num.pow(exp), self.den.pow(exp))
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::normalized(self.num.scale(k), self.den.clone())
    }

    /// Multiplies by the eventual sign.
    pub fn abs(&self) -> Self {
        match self.eventual_sign() {
            Sign::Negative => self.neg(),
            _ => self.clone(),
        }
    }

    /// Derivative with respect to `n` by the quotient rule.
    pub fn derivative(&self) -> Self {
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(top, &self.den * &self.den)
    }

    /// Substitutes `n := inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let eval_poly = |p: &Polynomial<C>| {
            p.coeffs()
                .iter()
                .rev()
                .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
        };
        eval_poly(&self.num).div(&eval_poly(&self.den))
    }
}

impl<C: Scalar> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        let wrap = |p: &Polynomial<C>| {
            if is_atom(p) {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// A single term that needs no parentheses around it: an integer constant,
/// or `n^k` with coefficient one or minus one.
fn is_atom<C: Scalar>(p: &Polynomial<C>) -> bool {
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if nonzero != 1 {
        return p.is_zero();
    }
    let lead = p.leading().unwrap();
    match p.degree() {
        Some(0) => lead.is_integral(),
        _ => lead.abs().is_one(),
    }
}
