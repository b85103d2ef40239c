//! Functions on the universe and their extensions.
//!
//! A function carries a value rule on universe tuples and, when it is
//! arithmetic, a branch rule that maps rational-function branches exactly.
//! The transcendental functions have neither on non-constant branches and
//! send their arguments to the lazy tier.

mod structure;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use structure::{
    attribute_check, attribute_check_with, functional_check, is_group, is_ring, rational_field, toy_vector_space,
    zmod, Attribute, AttributeOptions, AttributeVerdict, Carrier, Op, Paired, StructureSpec, ADD, EXCLUDED, MAP, MUL,
    NEUTRAL, REL, TARGET,
};

use crate::error::{Error, Result};
use crate::lazy::{lift_value_fn, ValueFn};
use crate::logic::{power, Relation, Tuple};
use crate::seqcore::{
    canonicalize, common_period, ends_in_tuple, BranchTerm, Limits, RawSequence, Sort, SubsetSpec, UniverseElement,
    VirtualValue,
};
use crate::vreal::VirtualReal;
use crate::{LazySeq, RatFunc};

pub type ValueRule = Arc<dyn Fn(&[UniverseElement]) -> Option<Tuple> + Send + Sync>;
pub type BranchRule = Arc<dyn Fn(&[&BranchTerm]) -> Result<Vec<BranchTerm>> + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Pointwise { value: ValueRule, branch: Option<BranchRule> },
    Transcendental(ValueFn),
    /// `outer` after `inner`.
    Compose(Box<LiftableFunction>, Box<LiftableFunction>),
    Aggregate(Vec<LiftableFunction>),
}

/// A function from `domain` (inside `U^in_arity`) to `codomain`.
#[derive(Clone)]
pub struct LiftableFunction {
    name: String,
    domain: SubsetSpec,
    codomain: SubsetSpec,
    in_arity: usize,
    out_arity: usize,
    rule: Rule,
}

impl fmt::Debug for LiftableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LiftableFunction({}: {} -> {})", self.name, self.in_arity, self.out_arity)
    }
}

fn real_sq() -> SubsetSpec {
    SubsetSpec::Product(vec![SubsetSpec::reals(), SubsetSpec::reals()])
}

fn real_binary(name: &str, q: fn(&crate::Rational, &crate::Rational) -> crate::Rational, r: fn(&RatFunc, &RatFunc) -> RatFunc) -> LiftableFunction {
    LiftableFunction::with_branch_rule(
        name,
        real_sq(),
        SubsetSpec::reals(),
        2,
        1,
        move |a| Some(vec![UniverseElement::real(q(a[0].as_real()?, a[1].as_real()?))]),
        move |t| {
            let (x, y) = (t[0].as_ratfunc(), t[1].as_ratfunc());
            match (x, y) {
                (Some(x), Some(y)) => Ok(vec![BranchTerm::rat(r(&x, &y))]),
                _ => Err(Error::DomainViolation("arithmetic on a non-real branch".into())),
            }
        },
    )
}

impl LiftableFunction {
    /// A function given by its value rule alone; it extends to values whose
    /// branches are all constant.
    pub fn new(
        name: impl Into<String>,
        domain: SubsetSpec,
        codomain: SubsetSpec,
        in_arity: usize,
        out_arity: usize,
        value: impl Fn(&[UniverseElement]) -> Option<Tuple> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            codomain,
            in_arity,
            out_arity,
            rule: Rule::Pointwise { value: Arc::new(value), branch: None },
        }
    }

    /// A function that also maps rational-function branches. The branch
    /// rule must agree with `value` on constant branches.
    pub fn with_branch_rule(
        name: impl Into<String>,
        domain: SubsetSpec,
        codomain: SubsetSpec,
        in_arity: usize,
        out_arity: usize,
        value: impl Fn(&[UniverseElement]) -> Option<Tuple> + Send + Sync + 'static,
        branch: impl Fn(&[&BranchTerm]) -> Result<Vec<BranchTerm>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            codomain,
            in_arity,
            out_arity,
            rule: Rule::Pointwise { value: Arc::new(value), branch: Some(Arc::new(branch)) },
        }
    }

    /// A finite function given by its graph. Fails if an input repeats
    /// with different outputs.
    pub fn from_table(name: impl Into<String>, graph: impl IntoIterator<Item = (Tuple, Tuple)>) -> Result<Self> {
        let mut table: BTreeMap<Tuple, Tuple> = BTreeMap::new();
        for (x, y) in graph {
            if let Some(prev) = table.get(&x) {
                if *prev != y {
                    return Err(Error::DomainViolation(format!("two outputs for one input in {:?}", x)));
                }
            }
            table.insert(x, y);
        }
        let (in_arity, out_arity) = match table.iter().next() {
            Some((x, y)) => (x.len(), y.len()),
            None => return Err(Error::Malformed("empty function table".into())),
        };
        if table.iter().any(|(x, y)| x.len() != in_arity || y.len() != out_arity) {
            return Err(Error::Malformed("ragged function table".into()));
        }
        let as_set = |ts: Vec<&Tuple>| {
            SubsetSpec::finite(ts.into_iter().map(|t| {
                if t.len() == 1 {
                    t[0].clone()
                } else {
                    UniverseElement::tuple(t.clone())
                }
            }))
        };
        let domain = as_set(table.keys().collect());
        let codomain = as_set(table.values().collect());
        let table = Arc::new(table);
        Ok(Self::new(name, domain, codomain, in_arity, out_arity, move |x| table.get(x).cloned()))
    }

    pub fn add() -> Self {
        real_binary("add", |a, b| a + b, RatFunc::add)
    }

    pub fn sub() -> Self {
        real_binary("sub", |a, b| a - b, RatFunc::sub)
    }

    pub fn mul() -> Self {
        real_binary("mul", |a, b| a * b, RatFunc::mul)
    }

    pub fn neg() -> Self {
        Self::with_branch_rule(
            "neg",
            SubsetSpec::reals(),
            SubsetSpec::reals(),
            1,
            1,
            |a: &[UniverseElement]| -> Option<Tuple> { Some(vec![UniverseElement::real(-a[0].as_real()?.clone())]) },
            |t| match t[0].as_ratfunc() {
                Some(x) => Ok(vec![BranchTerm::rat(x.neg())]),
                None => Err(Error::DomainViolation("negation of a non-real branch".into())),
            },
        )
    }

    pub fn transcendental(f: ValueFn) -> Self {
        Self {
            name: f.name().into(),
            domain: f.domain(),
            codomain: SubsetSpec::reals(),
            in_arity: 1,
            out_arity: 1,
            rule: Rule::Transcendental(f),
        }
    }

    /// `id_D`.
    pub fn identity(domain: SubsetSpec) -> Self {
        let k = domain.arity();
        Self::with_branch_rule(
            "id",
            domain.clone(),
            domain,
            k,
            k,
            |a| Some(a.to_vec()),
            |t| Ok(t.iter().map(|&b| b.clone()).collect()),
        )
    }

    /// The `i`-th projection (1-based) of `domain`, which must have arity
    /// at least `i`.
    pub fn projection(i: usize, domain: SubsetSpec) -> Result<Self> {
        let n = domain.arity();
        if i == 0 || i > n {
            return Err(Error::ArityMismatch { expected: n, found: i });
        }
        let codomain = match &domain {
            SubsetSpec::Product(parts) => parts[i - 1].clone(),
            other => match other.enumerate() {
                Some(members) => SubsetSpec::finite(members.into_iter().map(|m| m[i - 1].clone())),
                None => SubsetSpec::Sort(Sort::REAL),
            },
        };
        Ok(Self::with_branch_rule(
            format!("p{i}"),
            domain,
            codomain,
            n,
            1,
            move |a| Some(vec![a[i - 1].clone()]),
            move |t| Ok(vec![t[i - 1].clone()]),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SubsetSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &SubsetSpec {
        &self.codomain
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    /// Value on a universe tuple; `None` outside the domain or where no
    /// exact value exists.
    pub fn eval(&self, args: &[UniverseElement]) -> Option<Tuple> {
        if args.len() != self.in_arity || !self.domain.contains_args(args) {
            return None;
        }
        match &self.rule {
            Rule::Pointwise { value, .. } => value(args),
            Rule::Transcendental(_) => None,
            Rule::Compose(outer, inner) => outer.eval(&inner.eval(args)?),
            Rule::Aggregate(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.eval(args)?);
                }
                Some(out)
            }
        }
    }

    /// Output terms on one aligned branch tuple.
    pub fn apply_branch(&self, terms: &[&BranchTerm]) -> Result<Vec<BranchTerm>> {
        match &self.rule {
            Rule::Pointwise { value, branch } => {
                if let Some(consts) = terms.iter().map(|t| t.as_const().cloned()).collect::<Option<Vec<_>>>() {
                    return match value(&consts) {
                        Some(out) => Ok(out.into_iter().map(BranchTerm::Const).collect()),
                        None => Err(Error::DomainViolation(format!(
                            "{} is undefined at ({})",
                            self.name,
                            consts.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                        ))),
                    };
                }
                match branch {
                    Some(rule) => rule(terms),
                    None => Err(Error::UndecidableBranch(format!("{} has no rule for moving branches", self.name))),
                }
            }
            Rule::Transcendental(f) => Err(Error::UndecidableBranch(format!("{} leaves the exact tier", f.name()))),
            Rule::Compose(outer, inner) => {
                let mid = inner.apply_branch(terms)?;
                let refs: Vec<&BranchTerm> = mid.iter().collect();
                outer.apply_branch(&refs)
            }
            Rule::Aggregate(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.apply_branch(terms)?);
                }
                Ok(out)
            }
        }
    }

    /// Input/output pairs, when the domain is finite.
    pub fn graph(&self) -> Option<Vec<(Tuple, Tuple)>> {
        self.domain
            .enumerate()?
            .into_iter()
            .map(|x| self.eval(&x).map(|y| (x, y)))
            .collect()
    }
}

/// Result of applying an extended function.
#[derive(Clone, Debug, PartialEq)]
pub enum Applied {
    Exact(Vec<VirtualValue>),
    Lazy(Vec<LazySeq>),
}

impl Applied {
    pub fn exact(self) -> Result<Vec<VirtualValue>> {
        match self {
            Applied::Exact(v) => Ok(v),
            Applied::Lazy(_) => Err(Error::DomainViolation("result left the exact tier".into())),
        }
    }

    fn into_lazy(self) -> Result<Vec<LazySeq>> {
        match self {
            Applied::Lazy(v) => Ok(v),
            Applied::Exact(vs) => vs.into_iter().map(|v| Ok(VirtualReal::new(v)?.into())).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtendedFunction {
    base: LiftableFunction,
    limits: Limits,
}

pub fn extend_function(f: &LiftableFunction) -> ExtendedFunction {
    ExtendedFunction { base: f.clone(), limits: Limits::default() }
}

impl ExtendedFunction {
    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn base(&self) -> &LiftableFunction {
        &self.base
    }

    /// Branchwise application after period alignment.
    pub fn apply(&self, args: &[VirtualValue]) -> Result<Applied> {
        let f = &self.base;
        if args.len() != f.in_arity {
            return Err(Error::ArityMismatch { expected: f.in_arity, found: args.len() });
        }
        match &f.rule {
            Rule::Transcendental(g) => {
                let x = VirtualReal::new(args[0].clone())?;
                Ok(Applied::Lazy(vec![lift_value_fn(*g, x)?]))
            }
            Rule::Compose(outer, inner) => {
                let mid = extend_function(inner).with_limits(self.limits).apply(args)?;
                let outer = extend_function(outer).with_limits(self.limits);
                match mid {
                    Applied::Exact(vs) => outer.apply(&vs),
                    Applied::Lazy(ls) => match (&outer.base.rule, ls.as_slice()) {
                        (Rule::Transcendental(g), [single]) => Ok(Applied::Lazy(vec![single.clone().call(*g)])),
                        _ => Err(Error::DomainViolation(format!("{} cannot take lazy arguments", outer.base.name))),
                    },
                }
            }
            Rule::Aggregate(parts) => {
                let outs = parts
                    .iter()
                    .map(|p| extend_function(p).with_limits(self.limits).apply(args))
                    .collect::<Result<Vec<_>>>()?;
                if outs.iter().all(|o| matches!(o, Applied::Exact(_))) {
                    Ok(Applied::Exact(outs.into_iter().flat_map(|o| o.exact().expect("exact")).collect()))
                } else {
                    let mut all = Vec::new();
                    for o in outs {
                        all.extend(o.into_lazy()?);
                    }
                    Ok(Applied::Lazy(all))
                }
            }
            Rule::Pointwise { .. } => {
                if !ends_in_tuple(args, &f.domain)? {
                    return Err(Error::DomainViolation(format!(
                        "({}) does not end in the domain of {}",
                        args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                        f.name
                    )));
                }
                let refs: Vec<&VirtualValue> = args.iter().collect();
                let period = common_period(&refs);
                let mut columns: Vec<Vec<BranchTerm>> = vec![Vec::with_capacity(period); f.out_arity];
                for j in 0..period {
                    let terms: Vec<&BranchTerm> = args.iter().map(|a| a.branch(j)).collect();
                    let out = f.apply_branch(&terms)?;
                    if out.len() != f.out_arity {
                        return Err(Error::ArityMismatch { expected: f.out_arity, found: out.len() });
                    }
                    for (c, t) in out.into_iter().enumerate() {
                        columns[c].push(t);
                    }
                }
                let values = columns
                    .into_iter()
                    .map(|tail| canonicalize(&RawSequence::cyclic(tail), &self.limits))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Applied::Exact(values))
            }
        }
    }

    /// Single exact output.
    pub fn apply_one(&self, args: &[VirtualValue]) -> Result<VirtualValue> {
        let mut out = self.apply(args)?.exact()?;
        if out.len() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: out.len() });
        }
        Ok(out.pop().expect("one output"))
    }
}

/// `g ∘ f`, defined when the codomain of `f` lies inside the domain of `g`.
pub fn compose(g: &LiftableFunction, f: &LiftableFunction) -> Result<LiftableFunction> {
    let fits = f.out_arity == g.in_arity && f.codomain.is_subset_of(&g.domain) == Some(true);
    if !fits {
        return Err(Error::NotAChain(format!("{} does not map into the domain of {}", f.name, g.name)));
    }
    Ok(LiftableFunction {
        name: format!("{}.{}", g.name, f.name),
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        in_arity: f.in_arity,
        out_arity: g.out_arity,
        rule: Rule::Compose(Box::new(g.clone()), Box::new(f.clone())),
    })
}

pub fn compose_ext(g: &ExtendedFunction, f: &ExtendedFunction) -> Result<ExtendedFunction> {
    Ok(extend_function(&compose(&g.base, &f.base)?).with_limits(f.limits))
}

/// `(f1, ..., fn)` on a shared domain.
pub fn aggregate(fs: &[LiftableFunction]) -> Result<LiftableFunction> {
    let first = fs.first().ok_or_else(|| Error::DomainMismatch("nothing to aggregate".into()))?;
    if let Some(other) = fs.iter().find(|f| f.domain != first.domain || f.in_arity != first.in_arity) {
        return Err(Error::DomainMismatch(format!("{} and {} have different domains", first.name, other.name)));
    }
    let codomain = if fs.iter().all(|f| f.out_arity == 1) {
        SubsetSpec::Product(fs.iter().map(|f| f.codomain.clone()).collect())
    } else {
        SubsetSpec::Sort(Sort::TUPLE)
    };
    Ok(LiftableFunction {
        name: format!("({})", fs.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(", ")),
        domain: first.domain.clone(),
        codomain,
        in_arity: first.in_arity,
        out_arity: fs.iter().map(|f| f.out_arity).sum(),
        rule: Rule::Aggregate(fs.to_vec()),
    })
}

pub fn aggregate_ext(fs: &[ExtendedFunction]) -> Result<ExtendedFunction> {
    let bases: Vec<LiftableFunction> = fs.iter().map(|f| f.base.clone()).collect();
    Ok(extend_function(&aggregate(&bases)?))
}

pub fn project_ext(i: usize, domain: &SubsetSpec) -> Result<ExtendedFunction> {
    Ok(extend_function(&LiftableFunction::projection(i, domain.clone())?))
}

/// Inverse of a one-to-one function with a finite domain, defined on its
/// image.
pub fn inverse(f: &LiftableFunction) -> Result<LiftableFunction> {
    let graph = f
        .graph()
        .ok_or_else(|| Error::NonEnumerableDomain(format!("domain of {} is not finite", f.name)))?;
    let mut seen = BTreeMap::new();
    for (x, y) in &graph {
        if seen.insert(y.clone(), x.clone()).is_some() {
            return Err(Error::DomainViolation(format!("{} is not one-to-one", f.name)));
        }
    }
    let mut inv = LiftableFunction::from_table(format!("{}^-1", f.name), seen)?;
    inv.codomain = f.domain.clone();
    Ok(inv)
}

/// `P ∘ f = { x | P(f(x)) }`.
pub fn compose_relation(p: &Relation, f: &LiftableFunction) -> Result<Relation> {
    if p.arity() != f.out_arity {
        return Err(Error::ArityMismatch { expected: p.arity(), found: f.out_arity });
    }
    let (pv, fv) = (p.clone(), f.clone());
    let (pb, fb) = (p.clone(), f.clone());
    Ok(Relation::predicate_with_branch(
        format!("{}.{}", p.name(), f.name),
        f.in_arity,
        move |x| fv.eval(x).is_some_and(|y| pv.holds(&y).unwrap_or(false)),
        move |t| {
            let out = fb.apply_branch(t)?;
            let refs: Vec<&BranchTerm> = out.iter().collect();
            pb.decide_branch(&refs)
        },
    ))
}

/// Every function `U^k -> U` as a graph over `universe`.
pub fn all_functions(universe: &[UniverseElement], k: usize) -> Vec<LiftableFunction> {
    let inputs = power(universe, k);
    let outputs = power(universe, inputs.len());
    outputs
        .into_iter()
        .enumerate()
        .map(|(idx, ys)| {
            let graph = inputs.iter().cloned().zip(ys.into_iter().map(|y| vec![y]));
            LiftableFunction::from_table(format!("f{idx}"), graph).expect("well-formed table")
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FunctionJson {
    name: String,
    in_arity: usize,
    out_arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<Vec<(Tuple, Tuple)>>,
}

impl Serialize for LiftableFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionJson { name: self.name.clone(), in_arity: self.in_arity, out_arity: self.out_arity, graph: self.graph() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LiftableFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FunctionJson::deserialize(d)?;
        if let Some(graph) = j.graph {
            return LiftableFunction::from_table(j.name, graph).map_err(D::Error::custom);
        }
        let f = match j.name.as_str() {
            "add" => LiftableFunction::add(),
            "sub" => LiftableFunction::sub(),
            "mul" => LiftableFunction::mul(),
            "neg" => LiftableFunction::neg(),
            other => match ValueFn::from_name(other) {
                Some(g) => LiftableFunction::transcendental(g),
                None => return Err(D::Error::custom(Error::UnknownName(other.into()))),
            },
        };
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::text::parse_value;

    fn v(text: &str) -> VirtualValue {
        parse_value(text).unwrap()
    }

    fn u(k: i64) -> UniverseElement {
        UniverseElement::small(k)
    }

    #[test]
    fn arithmetic_lifts_exactly() {
        let add = extend_function(&LiftableFunction::add());
        assert_eq!(add.apply_one(&[v("n"), v("1")]).unwrap(), v("n+1"));
        let mul = extend_function(&LiftableFunction::mul());
        assert_eq!(mul.apply_one(&[v("1/n"), v("n")]).unwrap(), v("1"));
        assert_eq!(mul.apply_one(&[v("cyc[0, 1]"), v("cyc[1, 0]")]).unwrap(), v("0"));
    }

    #[test]
    fn ln_goes_lazy() {
        let ln = extend_function(&LiftableFunction::transcendental(ValueFn::Ln));
        let Applied::Lazy(out) = ln.apply(&[v("n")]).unwrap() else { panic!("expected lazy") };
        assert_eq!(out[0].at(100), 100f64.ln());
        assert!(matches!(ln.apply(&[v("-1")]), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn domain_is_enforced() {
        let f = LiftableFunction::from_table("f", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(0)])]).unwrap();
        let ext = extend_function(&f);
        assert_eq!(ext.apply_one(&[v("cyc[0, 1]")]).unwrap(), v("cyc[1, 0]"));
        assert!(matches!(ext.apply(&[v("cyc[0, 2]")]), Err(Error::DomainViolation(_))));
        assert!(matches!(ext.apply(&[v("n")]), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn composition_and_identity() {
        let f = LiftableFunction::from_table("f", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(1)])]).unwrap();
        let id = LiftableFunction::identity(SubsetSpec::finite([u(0), u(1)]));
        let h = compose(&id, &f).unwrap();
        let (eh, ef) = (extend_function(&h), extend_function(&f));
        for x in ["0", "1", "cyc[0, 1]", "cyc[1, 0]"] {
            assert_eq!(eh.apply(&[v(x)]).unwrap(), ef.apply(&[v(x)]).unwrap());
        }
        let g = LiftableFunction::from_table("g", [(vec![u(2)], vec![u(0)])]).unwrap();
        assert!(matches!(compose(&g, &f), Err(Error::NotAChain(_))));
        let ln = LiftableFunction::transcendental(ValueFn::Ln);
        let sin = LiftableFunction::transcendental(ValueFn::Sin);
        let s_ln = extend_function(&compose(&sin, &ln).unwrap());
        let Applied::Lazy(out) = s_ln.apply(&[v("n")]).unwrap() else { panic!("expected lazy") };
        assert_eq!(out[0].at(7), 7f64.ln().sin());
    }

    #[test]
    fn inverse_round_trips() {
        let f = LiftableFunction::from_table(
            "f",
            [(vec![u(0)], vec![u(2)]), (vec![u(1)], vec![u(0)]), (vec![u(2)], vec![u(1)])],
        )
        .unwrap();
        let inv = inverse(&f).unwrap();
        let round = extend_function(&compose(&inv, &f).unwrap());
        for x in ["0", "2", "cyc[0, 1]", "cyc[2, 1]"] {
            assert_eq!(round.apply_one(&[v(x)]).unwrap(), v(x));
        }
        let g = LiftableFunction::from_table("g", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(1)])]).unwrap();
        assert!(inverse(&g).is_err());
    }

    #[test]
    fn aggregation_and_projection() {
        let d2 = SubsetSpec::Product(vec![SubsetSpec::finite([u(0), u(1)]), SubsetSpec::finite([u(0), u(1)])]);
        let p1 = LiftableFunction::projection(1, d2.clone()).unwrap();
        let p2 = LiftableFunction::projection(2, d2.clone()).unwrap();
        let agg = extend_function(&aggregate(&[p1, p2]).unwrap());
        let args = [v("cyc[0, 1]"), v("1")];
        assert_eq!(agg.apply(&args).unwrap().exact().unwrap(), args.to_vec());
        assert_eq!(project_ext(2, &d2).unwrap().apply_one(&args).unwrap(), v("1"));
        assert!(project_ext(3, &d2).is_err());
        let f = LiftableFunction::identity(SubsetSpec::finite([u(0)]));
        assert!(matches!(aggregate(&[f, LiftableFunction::neg()]), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn relation_after_function() {
        let p = Relation::extensional([u(0), u(1)], 1, [vec![u(1)]]).unwrap();
        let f = LiftableFunction::from_table("f", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(0)])]).unwrap();
        let pf = compose_relation(&p, &f).unwrap();
        let ext = crate::logic::extend_relation(&pf);
        assert!(ext.holds(&[v("0")]).unwrap());
        assert!(!ext.holds(&[v("cyc[0, 1]")]).unwrap());
    }

    #[test]
    fn function_counts() {
        let us = [u(0), u(1)];
        assert_eq!(all_functions(&us, 1).len(), 4);
        assert_eq!(all_functions(&us, 2).len(), 16);
    }

    #[test]
    fn json_round_trip() {
        let f = LiftableFunction::from_table("f", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(0)])]).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        let back: LiftableFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(back.graph(), f.graph());
        let add: LiftableFunction = serde_json::from_str(r#"{"name":"add","in_arity":2,"out_arity":1}"#).unwrap();
        assert_eq!(add.eval(&[u(2), u(3)]), Some(vec![u(5)]));
    }
}
