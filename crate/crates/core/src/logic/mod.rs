//! Relations over a universe, their connectives and quantifiers, and the
//! eventual semantics of their extensions.
//!
//! A relation is either an explicit tuple set over a finite carrier or a
//! named total predicate. The extension of a relation holds on a tuple of
//! values when, on every residue class of the aligned period, the base
//! relation holds at all large indices. A branch is decided exactly when
//! all its terms are constants; a rational-function term needs a branch
//! rule, which built-in predicates supply.

mod vet;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use vet::{transfer_quantifier_check, transfer_quantifier_check_with, Inclusion, Verdict, VetItem, VetReport, Witness};

use crate::error::{Error, Result};
use crate::seqcore::{common_period, BranchTerm, SubsetSpec, UniverseElement, VirtualValue};
use crate::vreal::{CmpOp, EventualTruth};

pub type Tuple = Vec<UniverseElement>;
pub type ValueFn = Arc<dyn Fn(&[UniverseElement]) -> bool + Send + Sync>;
/// Eventual truth of a predicate on one aligned branch.
pub type BranchFn = Arc<dyn Fn(&[&BranchTerm]) -> Result<bool> + Send + Sync>;

#[derive(Clone)]
pub struct Predicate {
    name: String,
    value: ValueFn,
    branch: Option<BranchFn>,
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Body {
    /// Subset of `universe^arity`.
    Extensional { universe: Arc<BTreeSet<UniverseElement>>, tuples: BTreeSet<Tuple> },
    Predicate(Predicate),
}

#[derive(Clone, Debug)]
pub struct Relation {
    arity: usize,
    body: Body,
}

impl Relation {
    pub fn extensional(
        universe: impl IntoIterator<Item = UniverseElement>,
        arity: usize,
        tuples: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self> {
        let universe: BTreeSet<_> = universe.into_iter().collect();
        let tuples: BTreeSet<Tuple> = tuples.into_iter().collect();
        if arity == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: t.len() });
            }
            if let Some(e) = t.iter().find(|e| !universe.contains(e)) {
                return Err(Error::DomainViolation(format!("{e} is outside the carrier")));
            }
        }
        Ok(Self { arity, body: Body::Extensional { universe: Arc::new(universe), tuples } })
    }

    /// A predicate decided on constant branches only.
    pub fn predicate(
        name: impl Into<String>,
        arity: usize,
        value: impl Fn(&[UniverseElement]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { arity, body: Body::Predicate(Predicate { name: name.into(), value: Arc::new(value), branch: None }) }
    }

    /// A predicate that can also decide branches with rational-function
    /// terms. The branch rule must agree with `value` on constant branches.
    pub fn predicate_with_branch(
        name: impl Into<String>,
        arity: usize,
        value: impl Fn(&[UniverseElement]) -> bool + Send + Sync + 'static,
        branch: impl Fn(&[&BranchTerm]) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        Self {
            arity,
            body: Body::Predicate(Predicate {
                name: name.into(),
                value: Arc::new(value),
                branch: Some(Arc::new(branch)),
            }),
        }
    }

    /// Equality on the whole universe.
    pub fn equality() -> Self {
        Self::predicate_with_branch("eq", 2, |a| a[0] == a[1], |t| Ok(t[0].identical(t[1])))
    }

    /// The order relation `op` on the reals; false whenever an entry is not
    /// real.
    pub fn order(op: CmpOp) -> Self {
        let name = match op {
            CmpOp::Lt => "lt",
            CmpOp::Le => "le",
            CmpOp::Eq => "req",
            CmpOp::Ne => "ne",
            CmpOp::Ge => "ge",
            CmpOp::Gt => "gt",
        };
        Self::predicate_with_branch(
            name,
            2,
            move |a| match (a[0].as_real(), a[1].as_real()) {
                (Some(x), Some(y)) => op.accepts(crate::ratfunc::Sign::of(&(x - y))),
                _ => false,
            },
            move |t| {
                Ok(match (t[0].as_ratfunc(), t[1].as_ratfunc()) {
                    (Some(x), Some(y)) => op.accepts(x.sub(&y).eventual_sign()),
                    _ => false,
                })
            },
        )
    }

    /// Built-in relations by name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "eq" => Self::equality(),
            "lt" => Self::order(CmpOp::Lt),
            "le" => Self::order(CmpOp::Le),
            "req" => Self::order(CmpOp::Eq),
            "ne" => Self::order(CmpOp::Ne),
            "ge" => Self::order(CmpOp::Ge),
            "gt" => Self::order(CmpOp::Gt),
            _ => return None,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn name(&self) -> String {
        match &self.body {
            Body::Extensional { tuples, .. } => format!("{{{} tuples}}", tuples.len()),
            Body::Predicate(p) => p.name.clone(),
        }
    }

    pub fn tuples(&self) -> Option<&BTreeSet<Tuple>> {
        match &self.body {
            Body::Extensional { tuples, .. } => Some(tuples),
            Body::Predicate(_) => None,
        }
    }

    pub fn universe(&self) -> Option<&BTreeSet<UniverseElement>> {
        match &self.body {
            Body::Extensional { universe, .. } => Some(universe),
            Body::Predicate(_) => None,
        }
    }

    fn test(&self, args: &[UniverseElement]) -> bool {
        match &self.body {
            Body::Extensional { tuples, .. } => tuples.contains(args),
            Body::Predicate(p) => (p.value)(args),
        }
    }

    pub fn holds(&self, args: &[UniverseElement]) -> Result<bool> {
        self.check_arity(args.len())?;
        Ok(self.test(args))
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found == self.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch { expected: self.arity, found })
        }
    }

    /// Whether the relation holds at all large indices of one aligned
    /// branch tuple.
    pub fn decide_branch(&self, terms: &[&BranchTerm]) -> Result<bool> {
        self.check_arity(terms.len())?;
        if let Some(consts) = terms.iter().map(|t| t.as_const().cloned()).collect::<Option<Vec<_>>>() {
            return Ok(self.test(&consts));
        }
        match &self.body {
            // a non-constant rational function takes each value finitely often
            Body::Extensional { .. } => Ok(false),
            Body::Predicate(p) => match &p.branch {
                Some(f) => f(terms),
                None => Err(Error::UndecidableBranch(format!(
                    "{} has no rule for the branch ({})",
                    p.name,
                    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                ))),
            },
        }
    }

    /// Explicit tuple set over `universe`.
    pub fn to_extensional(&self, universe: &BTreeSet<UniverseElement>) -> Result<Self> {
        let elems: Vec<_> = universe.iter().cloned().collect();
        let tuples = power(&elems, self.arity).into_iter().filter(|t| self.test(t));
        Self::extensional(elems.iter().cloned(), self.arity, tuples)
    }
}

/// All `k`-tuples over `elems`, in lexicographic order.
pub fn power(elems: &[UniverseElement], k: usize) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Connective::Not => !a,
            Connective::And => a && b,
            Connective::Or => a || b,
            Connective::Implies => !a || b,
            Connective::Iff => a == b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Connective::Not => "not",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Implies => "=>",
            Connective::Iff => "<=>",
        }
    }
}

/// Pointwise combination. Two tuple sets over the same carrier combine into
/// the corresponding set operation within `carrier^arity`.
pub fn rel_combine(op: Connective, p: &Relation, q: Option<&Relation>) -> Result<Relation> {
    let q = match (op, q) {
        (Connective::Not, None) => None,
        (Connective::Not, Some(_)) => return Err(Error::ArityMismatch { expected: 1, found: 2 }),
        (_, None) => return Err(Error::ArityMismatch { expected: 2, found: 1 }),
        (_, Some(q)) => {
            if q.arity != p.arity {
                return Err(Error::ArityMismatch { expected: p.arity, found: q.arity });
            }
            Some(q.clone())
        }
    };
    if let Body::Extensional { universe, .. } = &p.body {
        let same = match &q {
            None => true,
            Some(q) => q.universe() == Some(universe),
        };
        if same {
            let elems: Vec<_> = universe.iter().cloned().collect();
            let tuples = power(&elems, p.arity)
                .into_iter()
                .filter(|t| op.apply(p.test(t), q.as_ref().is_some_and(|q| q.test(t))));
            return Relation::extensional(elems.iter().cloned(), p.arity, tuples);
        }
    }
    let name = match &q {
        None => format!("not {}", p.name()),
        Some(q) => format!("({} {} {})", p.name(), op.symbol(), q.name()),
    };
    let (pv, qv) = (p.clone(), q.clone());
    let (pb, qb) = (p.clone(), q);
    Ok(Relation::predicate_with_branch(
        name,
        p.arity,
        move |a| op.apply(pv.test(a), qv.as_ref().is_some_and(|q| q.test(a))),
        move |t| {
            let x = pb.decide_branch(t)?;
            let y = match &qb {
                Some(q) => q.decide_branch(t)?,
                None => false,
            };
            Ok(op.apply(x, y))
        },
    ))
}

/// `Pa = { x | P(a, x) }`, fixing the first `a.len()` entries.
pub fn fix_prefix_args(p: &Relation, a: &[UniverseElement]) -> Result<Relation> {
    if a.is_empty() || a.len() >= p.arity {
        return Err(Error::ArityMismatch { expected: p.arity - 1, found: a.len() });
    }
    let k = a.len();
    if let Body::Extensional { universe, tuples } = &p.body {
        let rest = tuples.iter().filter(|t| t[..k] == *a).map(|t| t[k..].to_vec());
        return Relation::extensional(universe.iter().cloned(), p.arity - k, rest);
    }
    let prefix: Vec<UniverseElement> = a.to_vec();
    let consts: Vec<BranchTerm> = a.iter().cloned().map(BranchTerm::Const).collect();
    let name = format!(
        "{}({}, ..)",
        p.name(),
        a.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    );
    let (pv, pb) = (p.clone(), p.clone());
    Ok(Relation::predicate_with_branch(
        name,
        p.arity - k,
        move |x| {
            let args: Vec<_> = prefix.iter().chain(x).cloned().collect();
            pv.test(&args)
        },
        move |t| {
            let terms: Vec<&BranchTerm> = consts.iter().chain(t.iter().copied()).collect();
            pb.decide_branch(&terms)
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
    Unique,
}

impl Quantifier {
    /// Folds verdicts over a domain; stops early where the answer is known.
    pub fn fold<I: IntoIterator<Item = Result<bool>>>(self, verdicts: I) -> Result<bool> {
        let mut count = 0usize;
        for v in verdicts {
            let v = v?;
            match self {
                Quantifier::Forall if !v => return Ok(false),
                Quantifier::Exists if v => return Ok(true),
                Quantifier::Unique if v => {
                    count += 1;
                    if count > 1 {
                        return Ok(false);
                    }
                }
                _ => {}
            }
        }
        Ok(match self {
            Quantifier::Forall => true,
            Quantifier::Exists => false,
            Quantifier::Unique => count == 1,
        })
    }

    fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
            Quantifier::Unique => "exists!",
        }
    }
}

/// Quantifies the first `D.arity()` entries of `p` over the finite set `d`.
pub fn quantify(q: Quantifier, d: &SubsetSpec, p: &Relation) -> Result<Relation> {
    let k = d.arity();
    if k >= p.arity {
        return Err(Error::ArityMismatch { expected: p.arity - 1, found: k });
    }
    let members = d
        .enumerate()
        .ok_or_else(|| Error::NonEnumerableDomain(format!("{d:?} is not a finite set")))?;
    let n = p.arity - k;
    if let Body::Extensional { universe, .. } = &p.body {
        let elems: Vec<_> = universe.iter().cloned().collect();
        let mut tuples = Vec::new();
        for x in power(&elems, n) {
            let holds = q.fold(members.iter().map(|dm| {
                let args: Vec<_> = dm.iter().chain(&x).cloned().collect();
                Ok(p.test(&args))
            }))?;
            if holds {
                tuples.push(x);
            }
        }
        return Relation::extensional(elems, n, tuples);
    }
    let consts: Arc<Vec<Vec<BranchTerm>>> =
        Arc::new(members.iter().map(|m| m.iter().cloned().map(BranchTerm::Const).collect()).collect());
    let members = Arc::new(members);
    let name = format!("({} D, {})", q.symbol(), p.name());
    let (pv, pb) = (p.clone(), p.clone());
    Ok(Relation::predicate_with_branch(
        name,
        n,
        move |x| {
            q.fold(members.iter().map(|dm| {
                let args: Vec<_> = dm.iter().chain(x).cloned().collect();
                Ok(pv.test(&args))
            }))
            .expect("value verdicts are infallible")
        },
        move |t| {
            q.fold(consts.iter().map(|dm| {
                let terms: Vec<&BranchTerm> = dm.iter().chain(t.iter().copied()).collect();
                pb.decide_branch(&terms)
            }))
        },
    ))
}

/// The extension of a relation to virtual values.
#[derive(Clone, Debug)]
pub struct ExtendedRelation {
    base: Relation,
}

pub fn extend_relation(p: &Relation) -> ExtendedRelation {
    ExtendedRelation { base: p.clone() }
}

impl ExtendedRelation {
    pub fn base(&self) -> &Relation {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.base.arity
    }

    /// Eventual verdict on each branch of the common period.
    pub fn branch_verdicts(&self, args: &[VirtualValue]) -> Result<Vec<bool>> {
        self.base.check_arity(args.len())?;
        let refs: Vec<&VirtualValue> = args.iter().collect();
        let period = common_period(&refs);
        (0..period)
            .map(|j| {
                let terms: Vec<&BranchTerm> = args.iter().map(|a| a.branch(j)).collect();
                self.base.decide_branch(&terms)
            })
            .collect()
    }

    pub fn evaluate(&self, args: &[VirtualValue]) -> Result<EventualTruth> {
        Ok(EventualTruth::from_branches(self.branch_verdicts(args)?))
    }

    pub fn holds(&self, args: &[VirtualValue]) -> Result<bool> {
        Ok(self.branch_verdicts(args)?.into_iter().all(|v| v))
    }
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    arity: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    universe: Option<Vec<UniverseElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tuples: Option<Vec<Tuple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicate: Option<String>,
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match &self.body {
            Body::Extensional { universe, tuples } => RelationJson {
                arity: self.arity,
                kind: "extensional".into(),
                universe: Some(universe.iter().cloned().collect()),
                tuples: Some(tuples.iter().cloned().collect()),
                predicate: None,
            },
            Body::Predicate(p) => RelationJson {
                arity: self.arity,
                kind: "predicate".into(),
                universe: None,
                tuples: None,
                predicate: Some(p.name.clone()),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RelationJson::deserialize(d)?;
        match j.kind.as_str() {
            "extensional" => Relation::extensional(
                j.universe.unwrap_or_default(),
                j.arity,
                j.tuples.unwrap_or_default(),
            )
            .map_err(D::Error::custom),
            "predicate" => {
                let name = j.predicate.unwrap_or_default();
                let r = Relation::builtin(&name).ok_or_else(|| D::Error::custom(Error::UnknownName(name)))?;
                if r.arity != j.arity {
                    return Err(D::Error::custom(Error::ArityMismatch { expected: r.arity, found: j.arity }));
                }
                Ok(r)
            }
            other => Err(D::Error::custom(format!("unknown relation kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{end_equal, text::parse_value};
    use crate::{RatFunc, Rational};

    fn u(k: i64) -> UniverseElement {
        UniverseElement::small(k)
    }

    fn universe(k: i64) -> Vec<UniverseElement> {
        (0..k).map(u).collect()
    }

    fn v(text: &str) -> VirtualValue {
        parse_value(text).unwrap()
    }

    fn rel(k: i64, arity: usize, tuples: &[&[i64]]) -> Relation {
        Relation::extensional(universe(k), arity, tuples.iter().map(|t| t.iter().map(|&x| u(x)).collect())).unwrap()
    }

    #[test]
    fn equality_extends_to_class_equality() {
        let eq = extend_relation(&Relation::equality());
        let vals = ["0", "1", "cyc[0, 1]", "cyc[1, 0]", "n", "(n^2+n)/(n+1)"];
        for a in vals {
            for b in vals {
                let (x, y) = (v(a), v(b));
                assert_eq!(eq.holds(&[x.clone(), y.clone()]).unwrap(), end_equal(&x, &y), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn positive_predicate_on_infinity() {
        let gt = Relation::order(CmpOp::Gt);
        let pos = fix_prefix_args(&gt, &[]).err();
        assert!(pos.is_some());
        // 0 < x
        let pos = fix_prefix_args(&Relation::order(CmpOp::Lt), &[u(0)]).unwrap();
        let ext = extend_relation(&pos);
        assert!(ext.holds(&[v("n")]).unwrap());
        assert!(ext.holds(&[v("1/n")]).unwrap());
        assert!(!ext.holds(&[v("cyc[-1, 1]")]).unwrap());
    }

    #[test]
    fn swap_relation_holds_on_alternating_pair() {
        let p = rel(2, 2, &[&[0, 1], &[1, 0]]);
        let ext = extend_relation(&p);
        let (a, b) = (v("cyc[0, 1]"), v("cyc[1, 0]"));
        assert!(ext.holds(&[a.clone(), b.clone()]).unwrap());
        // expansion oracle over indices 1..8
        for i in 1..=8 {
            assert!(p.holds(&[a.value_at(i).unwrap(), b.value_at(i).unwrap()]).unwrap());
        }
        assert!(!ext.holds(&[a.clone(), a]).unwrap());
    }

    #[test]
    fn connectives_are_set_operations() {
        let p = rel(3, 2, &[&[0, 0], &[0, 1], &[2, 2]]);
        let q = rel(3, 2, &[&[0, 1], &[1, 1], &[2, 2]]);
        let and = rel_combine(Connective::And, &p, Some(&q)).unwrap();
        let expected: BTreeSet<Tuple> = p.tuples().unwrap().intersection(q.tuples().unwrap()).cloned().collect();
        assert_eq!(and.tuples().unwrap(), &expected);
        let not_p = rel_combine(Connective::Not, &p, None).unwrap();
        assert_eq!(not_p.tuples().unwrap().len(), 9 - 3);
        let back = rel_combine(Connective::Not, &not_p, None).unwrap();
        assert_eq!(back.tuples(), p.tuples());
        let iff = rel_combine(Connective::Iff, &p, Some(&q)).unwrap();
        let pq = rel_combine(Connective::Implies, &p, Some(&q)).unwrap();
        let qp = rel_combine(Connective::Implies, &q, Some(&p)).unwrap();
        let both = rel_combine(Connective::And, &pq, Some(&qp)).unwrap();
        assert_eq!(iff.tuples(), both.tuples());
    }

    #[test]
    fn connective_errors() {
        let p = rel(2, 1, &[&[0]]);
        let q = rel(2, 2, &[&[0, 0]]);
        assert!(matches!(rel_combine(Connective::And, &p, Some(&q)), Err(Error::ArityMismatch { .. })));
        assert!(matches!(rel_combine(Connective::Or, &p, None), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn mixed_bodies_combine_pointwise() {
        let p = rel(2, 2, &[&[0, 1]]);
        let combined = rel_combine(Connective::Or, &p, Some(&Relation::equality())).unwrap();
        assert!(combined.tuples().is_none());
        assert!(combined.holds(&[u(0), u(1)]).unwrap());
        assert!(combined.holds(&[u(1), u(1)]).unwrap());
        assert!(!combined.holds(&[u(1), u(0)]).unwrap());
        let ext = extend_relation(&combined);
        assert!(ext.holds(&[v("n"), v("n")]).unwrap());
        assert!(!ext.holds(&[v("n"), v("1")]).unwrap());
    }

    #[test]
    fn partial_application() {
        let eq1 = fix_prefix_args(&Relation::equality(), &[u(1)]).unwrap();
        assert_eq!(eq1.arity(), 1);
        assert!(eq1.holds(&[u(1)]).unwrap());
        assert!(!eq1.holds(&[u(0)]).unwrap());
        let p = rel(2, 3, &[&[0, 1, 1], &[1, 0, 0]]);
        let pa = fix_prefix_args(&p, &[u(0)]).unwrap();
        assert_eq!(pa.tuples().unwrap().len(), 1);
        assert!(fix_prefix_args(&p, &[u(0), u(0), u(0)]).is_err());
        // extension identity on a few arguments
        let full = extend_relation(&p);
        let part = extend_relation(&pa);
        for (a, b) in [("1", "1"), ("cyc[1, 0]", "1"), ("cyc[1, 0]", "cyc[1, 0]")] {
            let (x, y) = (v(a), v(b));
            assert_eq!(
                part.holds(&[x.clone(), y.clone()]).unwrap(),
                full.holds(&[v("0"), x, y]).unwrap()
            );
        }
    }

    #[test]
    fn quantifiers() {
        let d = SubsetSpec::finite(universe(2));
        let ex = quantify(Quantifier::Exists, &d, &Relation::equality()).unwrap();
        assert!(ex.holds(&[u(0)]).unwrap());
        assert!(ex.holds(&[u(1)]).unwrap());
        assert!(!ex.holds(&[u(2)]).unwrap());
        let p = rel(2, 2, &[&[0, 0], &[1, 0]]);
        let uniq = quantify(Quantifier::Unique, &d, &p).unwrap();
        assert!(!uniq.holds(&[u(0)]).unwrap());
        let all = quantify(Quantifier::Forall, &d, &p).unwrap();
        assert!(all.holds(&[u(0)]).unwrap());
        assert!(!all.holds(&[u(1)]).unwrap());
        let reals = SubsetSpec::positive_reals();
        assert!(matches!(
            quantify(Quantifier::Forall, &reals, &Relation::equality()),
            Err(Error::NonEnumerableDomain(_))
        ));
    }

    #[test]
    fn quantified_predicate_decides_rational_branches() {
        // exists y in {0, 1}: y < x
        let d = SubsetSpec::finite(universe(2));
        let some_below = quantify(Quantifier::Exists, &d, &Relation::order(CmpOp::Lt)).unwrap();
        let ext = extend_relation(&some_below);
        assert!(ext.holds(&[v("n")]).unwrap());
        assert!(!ext.holds(&[v("-n")]).unwrap());
        assert!(ext.holds(&[v("1/n")]).unwrap());
    }

    #[test]
    fn undecidable_branches_are_reported() {
        let p = Relation::predicate("odd", 1, |a| a[0].as_real().is_some_and(|q| q.is_integer()));
        let ext = extend_relation(&p);
        assert!(ext.holds(&[v("3")]).unwrap());
        assert!(matches!(ext.holds(&[v("n")]), Err(Error::UndecidableBranch(_))));
        assert!(matches!(ext.holds(&[]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn extensional_never_holds_on_moving_branches() {
        let p = rel(2, 1, &[&[0], &[1]]);
        let ext = extend_relation(&p);
        let moving = VirtualValue::cyclic(vec![BranchTerm::rat(RatFunc::index())]).unwrap();
        assert!(!ext.holds(&[moving]).unwrap());
        let mixed = VirtualValue::cyclic(vec![BranchTerm::real(Rational::from_integer(0.into())), BranchTerm::rat(RatFunc::index())])
            .unwrap();
        assert_eq!(ext.evaluate(&[mixed]).unwrap(), EventualTruth::Mixed(vec![true, false]));
    }

    #[test]
    fn relation_json_round_trip() {
        let p = rel(2, 2, &[&[0, 1]]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(
            j,
            r#"{"arity":2,"kind":"extensional","universe":[{"sort":"R","rational":"0"},{"sort":"R","rational":"1"}],"tuples":[[{"sort":"R","rational":"0"},{"sort":"R","rational":"1"}]]}"#
        );
        let back: Relation = serde_json::from_str(&j).unwrap();
        assert_eq!(back.tuples(), p.tuples());
        let eq: Relation = serde_json::from_str(r#"{"arity":2,"kind":"predicate","predicate":"eq"}"#).unwrap();
        assert!(eq.holds(&[u(3), u(3)]).unwrap());
        assert!(serde_json::from_str::<Relation>(r#"{"arity":2,"kind":"predicate","predicate":"nope"}"#).is_err());
    }
}
