//! Structural attributes of a carrier with operations and relations, checked
//! on the base structure and on its extension.
//!
//! A finite carrier is enumerated exactly on the base side; the extended
//! side enumerates every fragment value of period at most
//! `AttributeOptions::max_period`. The rationals are handled by exact
//! virtual-real arithmetic over a seeded sample, with equations solved
//! exactly instead of searched.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{extend_function, ExtendedFunction, LiftableFunction};
use crate::error::{Error, Result};
use crate::logic::{extend_relation, power, ExtendedRelation, Relation};
use crate::seqcore::{enumerate_cyclic, BranchTerm, Sort, SubsetSpec, UniverseElement, VirtualValue};
use crate::vreal::{vr_div, CmpOp, VirtualReal};
use crate::{RatFunc, Rational};

pub const ADD: &str = "add";
pub const MUL: &str = "mul";
pub const MAP: &str = "map";
pub const REL: &str = "rel";
/// Neutral element of `add`.
pub const NEUTRAL: &str = "e";
/// Target of `a mul b = c`.
pub const TARGET: &str = "c";
/// Element excluded from the restricted opposites.
pub const EXCLUDED: &str = "d";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Reflexive,
    Symmetric,
    Transitive,
    Antisymmetric,
    Trichotomy,
    OneToOne,
    Onto,
    Associative,
    Commutative,
    Distributive,
    /// `e + a = a` for every `a`.
    RightNeutral,
    /// `a + e = a` for every `a`.
    LeftNeutral,
    /// Every `a` has `b` with `a + b = e`.
    Opposites,
    /// Every `a != d` has `b` with `a * b = c`.
    RestrictedOpposites,
}

impl Attribute {
    pub const ALL: [Attribute; 14] = [
        Attribute::Reflexive,
        Attribute::Symmetric,
        Attribute::Transitive,
        Attribute::Antisymmetric,
        Attribute::Trichotomy,
        Attribute::OneToOne,
        Attribute::Onto,
        Attribute::Associative,
        Attribute::Commutative,
        Attribute::Distributive,
        Attribute::RightNeutral,
        Attribute::LeftNeutral,
        Attribute::Opposites,
        Attribute::RestrictedOpposites,
    ];

    /// Whether base and extended verdicts always agree.
    pub fn transfers_exactly(self) -> bool {
        !matches!(self, Attribute::Trichotomy | Attribute::RestrictedOpposites)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Mul,
}

impl Op {
    fn key(self) -> &'static str {
        match self {
            Op::Add => ADD,
            Op::Mul => MUL,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Finite(Vec<UniverseElement>),
    Rationals,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureSpec {
    pub name: String,
    pub carrier: Carrier,
    #[serde(default)]
    pub operations: BTreeMap<String, LiftableFunction>,
    #[serde(default)]
    pub relations: BTreeMap<String, Relation>,
    #[serde(default)]
    pub elements: BTreeMap<String, UniverseElement>,
}

impl StructureSpec {
    pub fn new(name: impl Into<String>, carrier: Carrier) -> Self {
        Self {
            name: name.into(),
            carrier,
            operations: BTreeMap::new(),
            relations: BTreeMap::new(),
            elements: BTreeMap::new(),
        }
    }

    pub fn with_operation(mut self, key: &str, f: LiftableFunction) -> Self {
        self.operations.insert(key.into(), f);
        self
    }

    pub fn with_relation(mut self, key: &str, r: Relation) -> Self {
        self.relations.insert(key.into(), r);
        self
    }

    pub fn with_element(mut self, key: &str, e: UniverseElement) -> Self {
        self.elements.insert(key.into(), e);
        self
    }

    fn operation(&self, key: &str) -> Result<&LiftableFunction> {
        self.operations
            .get(key)
            .ok_or_else(|| Error::UnknownName(format!("{} has no operation {key:?}", self.name)))
    }

    fn relation(&self) -> Result<&Relation> {
        self.relations
            .get(REL)
            .ok_or_else(|| Error::UnknownName(format!("{} has no relation {REL:?}", self.name)))
    }

    fn element(&self, key: &str) -> Result<VirtualValue> {
        self.elements
            .get(key)
            .cloned()
            .map(VirtualValue::constant)
            .ok_or_else(|| Error::UnknownName(format!("{} has no element {key:?}", self.name)))
    }
}

/// `Z/k` with addition and multiplication mod `k`, on the integer sort.
pub fn zmod(k: u32) -> StructureSpec {
    let elems: Vec<UniverseElement> = (0..k).map(UniverseElement::integer).collect();
    let table = |name: &str, f: fn(u32, u32, u32) -> u32| {
        let graph = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| {
            (
                vec![UniverseElement::integer(a), UniverseElement::integer(b)],
                vec![UniverseElement::integer(f(a, b, k))],
            )
        });
        LiftableFunction::from_table(name, graph).expect("total table")
    };
    StructureSpec::new(format!("Z/{k}"), Carrier::Finite(elems))
        .with_operation(ADD, table("add", |a, b, k| (a + b) % k))
        .with_operation(MUL, table("mul", |a, b, k| (a * b) % k))
        .with_element(NEUTRAL, UniverseElement::integer(0))
        .with_element(TARGET, UniverseElement::integer(1 % k))
        .with_element(EXCLUDED, UniverseElement::integer(0))
}

/// The ordered field of rationals.
pub fn rational_field() -> StructureSpec {
    StructureSpec::new("Q", Carrier::Rationals)
        .with_operation(ADD, LiftableFunction::add())
        .with_operation(MUL, LiftableFunction::mul())
        .with_relation(REL, Relation::order(CmpOp::Le))
        .with_element(NEUTRAL, UniverseElement::small(0))
        .with_element(TARGET, UniverseElement::small(1))
        .with_element(EXCLUDED, UniverseElement::small(0))
}

fn vector_sort() -> Sort {
    Sort::new("V").expect("valid sort name")
}

/// Two vectors `V:@0` (zero) and `V:@1` over the rationals: vectors add
/// mod 2, and `q * v` is `v` when `q != 0` and the zero vector otherwise.
/// The universe is the disjoint union of the real and vector sorts.
pub fn toy_vector_space() -> StructureSpec {
    let vs = vector_sort();
    let vec_el = move |k: u32| UniverseElement::atom(k).with_sort(vector_sort());
    let zero = vec_el(0);
    let add_graph = (0..2u32)
        .flat_map(|a| (0..2u32).map(move |b| (a, b)))
        .map(|(a, b)| (vec![vec_el(a), vec_el(b)], vec![vec_el((a + b) % 2)]));
    let vadd = LiftableFunction::from_table("vadd", add_graph).expect("total table");
    let smul_zero = zero.clone();
    let branch_zero = zero.clone();
    let smul = LiftableFunction::with_branch_rule(
        "smul",
        SubsetSpec::Product(vec![SubsetSpec::reals(), SubsetSpec::Sort(vs.clone())]),
        SubsetSpec::Sort(vs),
        2,
        1,
        move |a| {
            let q = a[0].as_real()?;
            Some(vec![if q == &Rational::from_integer(0.into()) { smul_zero.clone() } else { a[1].clone() }])
        },
        move |t| {
            let scalar = t[0]
                .as_ratfunc()
                .ok_or_else(|| Error::DomainViolation("scalar branch is not real".into()))?;
            let v = t[1]
                .as_const()
                .cloned()
                .ok_or_else(|| Error::DomainViolation("vector branch is not constant".into()))?;
            // a non-zero rational function is eventually non-zero
            Ok(vec![BranchTerm::Const(if scalar.is_zero() { branch_zero.clone() } else { v })])
        },
    );
    StructureSpec::new("toy vector space", Carrier::Finite(vec![vec_el(0), vec_el(1)]))
        .with_operation(ADD, vadd)
        .with_operation("smul", smul)
        .with_element(NEUTRAL, zero)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeOptions {
    /// Largest period enumerated on the extended side of a finite carrier.
    pub max_period: usize,
    /// Random values drawn for the rationals, beyond the fixed probes.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AttributeOptions {
    fn default() -> Self {
        Self { max_period: 2, samples: 8, seed: 2024 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeVerdict {
    pub attribute: Attribute,
    pub structure: String,
    pub base: bool,
    pub extended: bool,
    /// Base-side counterexample, as universe elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_witness: Option<Vec<String>>,
    /// Extended-side counterexample, as canonical values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// For restricted opposites: the verdict when `a != d` is read as the
    /// extension of `!=` rather than as inequality of classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_transferred: Option<bool>,
    pub fragment: String,
}

impl AttributeVerdict {
    pub fn agree(&self) -> bool {
        self.base == self.extended
    }
}

enum Ops<'a> {
    Base(&'a StructureSpec),
    Ext(&'a StructureSpec, RefCell<HashMap<(Op, VirtualValue, VirtualValue), VirtualValue>>),
    Rational,
}

struct World<'a> {
    elems: Vec<VirtualValue>,
    ops: Ops<'a>,
    rel: Option<ExtendedRelation>,
}

fn ext_ne(a: &VirtualValue, d: &VirtualValue) -> bool {
    let period = num_integer::lcm(a.period(), d.period());
    (0..period).all(|j| !a.branch(j).identical(d.branch(j)))
}

impl World<'_> {
    fn op(&self, which: Op, a: &VirtualValue, b: &VirtualValue) -> Result<VirtualValue> {
        match &self.ops {
            Ops::Base(spec) => {
                let f = spec.operation(which.key())?;
                let (x, y) = (const_of(a)?, const_of(b)?);
                let out = f.eval(&[x.clone(), y.clone()]).ok_or_else(|| {
                    Error::DomainViolation(format!("{} is undefined at ({x}, {y})", f.name()))
                })?;
                Ok(VirtualValue::constant(out[0].clone()))
            }
            Ops::Ext(spec, cache) => {
                let key = (which, a.clone(), b.clone());
                if let Some(hit) = cache.borrow().get(&key) {
                    return Ok(hit.clone());
                }
                let f: ExtendedFunction = extend_function(spec.operation(which.key())?);
                let out = f.apply_one(&[a.clone(), b.clone()])?;
                cache.borrow_mut().insert(key, out.clone());
                Ok(out)
            }
            Ops::Rational => {
                let (x, y) = (VirtualReal::new(a.clone())?, VirtualReal::new(b.clone())?);
                Ok(match which {
                    Op::Add => x.add(&y)?,
                    Op::Mul => x.mul(&y)?,
                }
                .into_value())
            }
        }
    }

    fn rel(&self, a: &VirtualValue, b: &VirtualValue) -> Result<bool> {
        self.rel
            .as_ref()
            .ok_or_else(|| Error::UnknownName("structure has no relation".into()))?
            .holds(&[a.clone(), b.clone()])
    }

    /// Some `b` in the world with `a op b = c`.
    fn solve(&self, which: Op, a: &VirtualValue, c: &VirtualValue) -> Result<Option<VirtualValue>> {
        if let Ops::Rational = self.ops {
            let (x, y) = (VirtualReal::new(a.clone())?, VirtualReal::new(c.clone())?);
            return Ok(match which {
                Op::Add => Some(y.sub(&x)?.into_value()),
                Op::Mul => match x.value().branches().iter().any(|b| b.as_ratfunc().is_some_and(|r| r.is_zero())) {
                    // a zero branch of `a` forces that branch of `a*b` to zero
                    true if !y.branch_funcs().iter().all(RatFunc::is_zero) => None,
                    true => Some(VirtualValue::real(Rational::from_integer(0.into()))),
                    false => Some(vr_div(&y, &x, &Default::default())?.into_value()),
                },
            });
        }
        for b in &self.elems {
            if self.op(which, a, b)? == *c {
                return Ok(Some(b.clone()));
            }
        }
        Ok(None)
    }
}

fn const_of(v: &VirtualValue) -> Result<&UniverseElement> {
    v.as_constant().ok_or_else(|| Error::Malformed(format!("{v} is not a constant")))
}

fn render(vs: &[&VirtualValue]) -> Vec<String> {
    vs.iter().map(ToString::to_string).collect()
}

type Outcome = (bool, Option<Vec<String>>);

fn forall1(w: &World, mut p: impl FnMut(&VirtualValue) -> Result<bool>) -> Result<Outcome> {
    for a in &w.elems {
        if !p(a)? {
            return Ok((false, Some(render(&[a]))));
        }
    }
    Ok((true, None))
}

fn forall2(w: &World, mut p: impl FnMut(&VirtualValue, &VirtualValue) -> Result<bool>) -> Result<Outcome> {
    for a in &w.elems {
        for b in &w.elems {
            if !p(a, b)? {
                return Ok((false, Some(render(&[a, b]))));
            }
        }
    }
    Ok((true, None))
}

fn forall3(
    w: &World,
    mut p: impl FnMut(&VirtualValue, &VirtualValue, &VirtualValue) -> Result<bool>,
) -> Result<Outcome> {
    for a in &w.elems {
        for b in &w.elems {
            for c in &w.elems {
                if !p(a, b, c)? {
                    return Ok((false, Some(render(&[a, b, c]))));
                }
            }
        }
    }
    Ok((true, None))
}

/// Returns the outcome and, for restricted opposites, the variant with the
/// extension of `!=`.
fn evaluate(attr: Attribute, w: &World, spec: &StructureSpec, op: Op) -> Result<(Outcome, Option<bool>)> {
    use Attribute::*;
    let out = match attr {
        Reflexive => forall1(w, |a| w.rel(a, a))?,
        Symmetric => forall2(w, |a, b| Ok(!w.rel(a, b)? || w.rel(b, a)?))?,
        Transitive => forall3(w, |a, b, c| Ok(!(w.rel(a, b)? && w.rel(b, c)?) || w.rel(a, c)?))?,
        Antisymmetric => forall2(w, |a, b| Ok(!(w.rel(a, b)? && w.rel(b, a)?) || a == b))?,
        Trichotomy => forall2(w, |a, b| Ok(w.rel(a, b)? || w.rel(b, a)?))?,
        Associative => forall3(w, |a, b, c| {
            Ok(w.op(op, &w.op(op, a, b)?, c)? == w.op(op, a, &w.op(op, b, c)?)?)
        })?,
        Commutative => forall2(w, |a, b| Ok(w.op(op, a, b)? == w.op(op, b, a)?))?,
        Distributive => forall3(w, |a, b, c| {
            let left = w.op(Op::Mul, a, &w.op(Op::Add, b, c)?)? == w.op(Op::Add, &w.op(Op::Mul, a, b)?, &w.op(Op::Mul, a, c)?)?;
            let right = w.op(Op::Mul, &w.op(Op::Add, b, c)?, a)? == w.op(Op::Add, &w.op(Op::Mul, b, a)?, &w.op(Op::Mul, c, a)?)?;
            Ok(left && right)
        })?,
        RightNeutral => {
            let e = spec.element(NEUTRAL)?;
            forall1(w, |a| Ok(w.op(op, &e, a)? == *a))?
        }
        LeftNeutral => {
            let e = spec.element(NEUTRAL)?;
            forall1(w, |a| Ok(w.op(op, a, &e)? == *a))?
        }
        Opposites => {
            let e = spec.element(NEUTRAL)?;
            forall1(w, |a| Ok(w.solve(op, a, &e)?.is_some()))?
        }
        RestrictedOpposites => {
            let (c, d) = (spec.element(TARGET)?, spec.element(EXCLUDED)?);
            let classes = forall1(w, |a| Ok(*a == d || w.solve(Op::Mul, a, &c)?.is_some()))?;
            let extended = forall1(w, |a| Ok(!ext_ne(a, &d) || w.solve(Op::Mul, a, &c)?.is_some()))?;
            return Ok((classes, Some(extended.0)));
        }
        OneToOne | Onto => unreachable!("handled on function worlds"),
    };
    Ok((out, None))
}

fn rational_probes() -> Vec<VirtualValue> {
    let q = |a: i64, b: i64| RatFunc::constant(Rational::new(a.into(), b.into()));
    let vr = |bs: Vec<RatFunc>| VirtualReal::cyclic(bs).expect("small value").into_value();
    vec![
        vr(vec![q(0, 1)]),
        vr(vec![q(1, 1)]),
        vr(vec![q(-1, 1)]),
        vr(vec![q(1, 2)]),
        vr(vec![q(0, 1), q(1, 1)]),
        vr(vec![q(1, 1), q(0, 1)]),
        vr(vec![q(-1, 1), q(1, 1)]),
        vr(vec![RatFunc::index()]),
        vr(vec![RatFunc::reciprocal_index()]),
        vr(vec![RatFunc::one().add(&RatFunc::reciprocal_index())]),
    ]
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=4).into())
}

fn random_branch(rng: &mut ChaCha8Rng) -> RatFunc {
    match rng.random_range(0..4) {
        0 => RatFunc::index().scale(&random_rational(rng)).add(&RatFunc::constant(random_rational(rng))),
        1 => RatFunc::reciprocal_index().scale(&random_rational(rng)).add(&RatFunc::constant(random_rational(rng))),
        _ => RatFunc::constant(random_rational(rng)),
    }
}

fn rational_worlds(opts: &AttributeOptions) -> (Vec<VirtualValue>, Vec<VirtualValue>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut base: Vec<VirtualValue> = rational_probes().into_iter().filter(|v| v.as_constant().is_some()).collect();
    let mut ext = rational_probes();
    for _ in 0..opts.samples {
        base.push(VirtualValue::real(random_rational(&mut rng)));
        let period = rng.random_range(1..=2);
        let branches = (0..period).map(|_| random_branch(&mut rng)).collect();
        ext.push(VirtualReal::cyclic(branches).expect("small value").into_value());
    }
    base.dedup();
    ext.dedup();
    (base, ext)
}

fn finite_fragment(elems: &[UniverseElement], max_period: usize) -> Result<Vec<VirtualValue>> {
    let alphabet: Vec<BranchTerm> = elems.iter().cloned().map(BranchTerm::Const).collect();
    enumerate_cyclic(&alphabet, max_period, 1 << 20)
}

/// One-to-one and onto, for the structure's `map`.
fn function_attribute(attr: Attribute, spec: &StructureSpec, opts: &AttributeOptions) -> Result<AttributeVerdict> {
    let f = spec.operation(MAP)?;
    let enumerate = |s: &SubsetSpec| -> Result<Vec<UniverseElement>> {
        let members = s
            .enumerate()
            .ok_or_else(|| Error::NonEnumerableCarrier(format!("{} has an infinite domain or codomain", f.name())))?;
        if members.iter().any(|m| m.len() != 1) {
            return Err(Error::NonEnumerableCarrier("maps on tuples are not supported".into()));
        }
        Ok(members.into_iter().map(|mut m| m.remove(0)).collect())
    };
    let dom = enumerate(f.domain())?;
    let cod = enumerate(f.codomain())?;
    let base_map = |a: &UniverseElement| -> Result<UniverseElement> {
        f.eval(std::slice::from_ref(a))
            .map(|mut y| y.remove(0))
            .ok_or_else(|| Error::DomainViolation(format!("{} is undefined at {a}", f.name())))
    };
    let base_dom: Vec<VirtualValue> = dom.iter().cloned().map(VirtualValue::constant).collect();
    let base_cod: Vec<VirtualValue> = cod.iter().cloned().map(VirtualValue::constant).collect();
    let ext_dom = finite_fragment(&dom, opts.max_period)?;
    let ext_cod = finite_fragment(&cod, opts.max_period)?;
    let ext = extend_function(f);

    let check = |d: &[VirtualValue], c: &[VirtualValue], image: &dyn Fn(&VirtualValue) -> Result<VirtualValue>| -> Result<Outcome> {
        let images = d.iter().map(image).collect::<Result<Vec<_>>>()?;
        if attr == Attribute::OneToOne {
            for (i, a) in d.iter().enumerate() {
                for (j, b) in d.iter().enumerate() {
                    if i != j && images[i] == images[j] {
                        return Ok((false, Some(render(&[a, b]))));
                    }
                }
            }
        } else {
            for y in c {
                if !images.contains(y) {
                    return Ok((false, Some(render(&[y]))));
                }
            }
        }
        Ok((true, None))
    };
    let (base, base_witness) = check(&base_dom, &base_cod, &|a| Ok(VirtualValue::constant(base_map(const_of(a)?)?)))?;
    let (extended, witness) = check(&ext_dom, &ext_cod, &|a| ext.apply_one(std::slice::from_ref(a)))?;
    Ok(AttributeVerdict {
        attribute: attr,
        structure: spec.name.clone(),
        base,
        extended,
        base_witness,
        witness,
        extended_transferred: None,
        fragment: format!("period<={}", opts.max_period),
    })
}

pub fn attribute_check(attr: Attribute, spec: &StructureSpec) -> Result<AttributeVerdict> {
    attribute_check_with(attr, spec, Op::Add, &AttributeOptions::default())
}

/// Checks `attr` for the operation `op` (where the attribute concerns one
/// operation) on the base structure and on its extension.
pub fn attribute_check_with(
    attr: Attribute,
    spec: &StructureSpec,
    op: Op,
    opts: &AttributeOptions,
) -> Result<AttributeVerdict> {
    if matches!(attr, Attribute::OneToOne | Attribute::Onto) {
        return function_attribute(attr, spec, opts);
    }
    let needs_rel = matches!(
        attr,
        Attribute::Reflexive | Attribute::Symmetric | Attribute::Transitive | Attribute::Antisymmetric | Attribute::Trichotomy
    );
    let rel = if needs_rel { Some(extend_relation(spec.relation()?)) } else { None };
    let (base_world, ext_world, fragment) = match &spec.carrier {
        Carrier::Finite(elems) => (
            World { elems: elems.iter().cloned().map(VirtualValue::constant).collect(), ops: Ops::Base(spec), rel: rel.clone() },
            World {
                elems: finite_fragment(elems, opts.max_period)?,
                ops: Ops::Ext(spec, RefCell::new(HashMap::new())),
                rel,
            },
            format!("period<={}", opts.max_period),
        ),
        Carrier::Rationals => {
            let arithmetic = spec.operations.iter().all(|(k, f)| {
                (k == ADD && f.name() == "add") || (k == MUL && f.name() == "mul")
            });
            if !arithmetic {
                return Err(Error::NonEnumerableCarrier(format!(
                    "{}: only rational addition and multiplication can be decided on an infinite carrier",
                    spec.name
                )));
            }
            let (base, ext) = rational_worlds(opts);
            (
                World { elems: base, ops: Ops::Rational, rel: rel.clone() },
                World { elems: ext, ops: Ops::Rational, rel },
                format!("seeded sample, seed={}, {} random values", opts.seed, opts.samples),
            )
        }
    };
    let ((base, base_witness), _) = evaluate(attr, &base_world, spec, op)?;
    let ((extended, witness), extended_transferred) = evaluate(attr, &ext_world, spec, op)?;
    Ok(AttributeVerdict {
        attribute: attr,
        structure: spec.name.clone(),
        base,
        extended,
        base_witness,
        witness,
        extended_transferred,
        fragment,
    })
}

/// Paired verdict for a compound property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paired {
    pub base: bool,
    pub extended: bool,
}

fn all_of(verdicts: &[AttributeVerdict]) -> Paired {
    Paired {
        base: verdicts.iter().all(|v| v.base),
        extended: verdicts.iter().all(|v| v.extended),
    }
}

/// Group axioms for `add`: associativity, two-sided neutral `e`, opposites.
pub fn is_group(spec: &StructureSpec, opts: &AttributeOptions) -> Result<Paired> {
    let attrs = [Attribute::Associative, Attribute::RightNeutral, Attribute::LeftNeutral, Attribute::Opposites];
    let vs = attrs
        .iter()
        .map(|&a| attribute_check_with(a, spec, Op::Add, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(all_of(&vs))
}

/// Ring axioms: `add` a commutative group, `mul` associative, both
/// distributive laws.
pub fn is_ring(spec: &StructureSpec, opts: &AttributeOptions) -> Result<Paired> {
    let group = is_group(spec, opts)?;
    let vs = [
        attribute_check_with(Attribute::Commutative, spec, Op::Add, opts)?,
        attribute_check_with(Attribute::Associative, spec, Op::Mul, opts)?,
        attribute_check_with(Attribute::Distributive, spec, Op::Add, opts)?,
    ];
    let rest = all_of(&vs);
    Ok(Paired { base: group.base && rest.base, extended: group.extended && rest.extended })
}

/// Whether `p`, read as a relation from its first `in_arity` entries to
/// the rest, is functional, on the base carrier and on the fragment.
pub fn functional_check(p: &Relation, in_arity: usize, opts: &AttributeOptions) -> Result<Paired> {
    let universe: Vec<UniverseElement> = p
        .universe()
        .ok_or_else(|| Error::NonEnumerableCarrier("functionality needs an explicit carrier".into()))?
        .iter()
        .cloned()
        .collect();
    if in_arity == 0 || in_arity >= p.arity() {
        return Err(Error::ArityMismatch { expected: p.arity() - 1, found: in_arity });
    }
    let out_arity = p.arity() - in_arity;
    let base = power(&universe, in_arity).iter().all(|x| {
        power(&universe, out_arity)
            .iter()
            .filter(|y| {
                let args: Vec<_> = x.iter().chain(y.iter()).cloned().collect();
                p.holds(&args).unwrap_or(false)
            })
            .count()
            <= 1
    });
    let frag = finite_fragment(&universe, opts.max_period)?;
    let ext = extend_relation(p);
    let tuples = |k: usize| -> Vec<Vec<VirtualValue>> {
        let mut out: Vec<Vec<VirtualValue>> = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| frag.iter().map(move |v| [t.clone(), vec![v.clone()]].concat()))
                .collect();
        }
        out
    };
    let outs = tuples(out_arity);
    let mut extended = true;
    'outer: for x in tuples(in_arity) {
        let mut count = 0;
        for y in &outs {
            let args: Vec<VirtualValue> = x.iter().chain(y.iter()).cloned().collect();
            if ext.holds(&args)? {
                count += 1;
                if count > 1 {
                    extended = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(Paired { base, extended })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::text::parse_value;

    fn u(k: i64) -> UniverseElement {
        UniverseElement::small(k)
    }

    fn le_on(k: i64) -> StructureSpec {
        let elems: Vec<_> = (0..k).map(u).collect();
        let le = Relation::order(CmpOp::Le).to_extensional(&elems.iter().cloned().collect()).unwrap();
        StructureSpec::new(format!("le on {k}"), Carrier::Finite(elems)).with_relation(REL, le)
    }

    #[test]
    fn order_on_three_points() {
        let s = le_on(3);
        for a in [Attribute::Reflexive, Attribute::Transitive, Attribute::Antisymmetric] {
            let v = attribute_check(a, &s).unwrap();
            assert!(v.base && v.extended, "{a:?}");
        }
        let sym = attribute_check(Attribute::Symmetric, &s).unwrap();
        assert!(!sym.base && !sym.extended);
        let tri = attribute_check(Attribute::Trichotomy, &s).unwrap();
        assert!(tri.base);
        assert!(!tri.extended);
        let w = tri.witness.unwrap();
        let (a, b) = (parse_value(&w[0]).unwrap(), parse_value(&w[1]).unwrap());
        let ext = extend_relation(s.relations.get(REL).unwrap());
        assert!(!ext.holds(&[a.clone(), b.clone()]).unwrap());
        assert!(!ext.holds(&[b, a]).unwrap());
        // the pair named in the literature
        let (x, y) = (parse_value("cyc[0, 1]").unwrap(), parse_value("cyc[1, 0]").unwrap());
        assert!(!ext.holds(&[x.clone(), y.clone()]).unwrap() && !ext.holds(&[y, x]).unwrap());
    }

    #[test]
    fn cyclic_group_transfers() {
        let z4 = zmod(4);
        assert_eq!(is_group(&z4, &AttributeOptions::default()).unwrap(), Paired { base: true, extended: true });
        let c = attribute_check(Attribute::Commutative, &z4).unwrap();
        assert!(c.base && c.extended);
    }

    #[test]
    fn zmod_restricted_opposites() {
        // Z/5 is a field; its extension has zero divisors
        let z5 = zmod(5);
        let v = attribute_check_with(Attribute::RestrictedOpposites, &z5, Op::Mul, &AttributeOptions::default()).unwrap();
        assert!(v.base);
        assert!(!v.extended);
        assert_eq!(v.extended_transferred, Some(true));
        // Z/4 is not: 2 has no inverse on either side
        let z4 = zmod(4);
        let v = attribute_check_with(Attribute::RestrictedOpposites, &z4, Op::Mul, &AttributeOptions::default()).unwrap();
        assert!(!v.base && !v.extended);
        assert_eq!(v.extended_transferred, Some(false));
    }

    #[test]
    fn rational_field_is_a_ring_but_not_a_field_after_extension() {
        let q = rational_field();
        let opts = AttributeOptions::default();
        for attr in [Attribute::Associative, Attribute::Commutative, Attribute::RightNeutral, Attribute::LeftNeutral, Attribute::Opposites] {
            let v = attribute_check_with(attr, &q, Op::Add, &opts).unwrap();
            assert!(v.base && v.extended, "{attr:?}");
        }
        let d = attribute_check_with(Attribute::Distributive, &q, Op::Add, &opts).unwrap();
        assert!(d.base && d.extended);
        let r = attribute_check_with(Attribute::RestrictedOpposites, &q, Op::Mul, &opts).unwrap();
        assert!(r.base);
        assert!(!r.extended);
        assert_eq!(r.witness, Some(vec!["cyc{0; 1}".to_string()]));
        assert_eq!(r.extended_transferred, Some(true));
        let t = attribute_check(Attribute::Trichotomy, &q).unwrap();
        assert!(t.base && !t.extended);
    }

    #[test]
    fn maps_on_finite_sets() {
        let bij = LiftableFunction::from_table("swap", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(0)])]).unwrap();
        let s = StructureSpec::new("swap", Carrier::Finite(vec![u(0), u(1)])).with_operation(MAP, bij);
        for a in [Attribute::OneToOne, Attribute::Onto] {
            let v = attribute_check(a, &s).unwrap();
            assert!(v.base && v.extended);
        }
        let g = LiftableFunction::from_table("const", [(vec![u(0)], vec![u(1)]), (vec![u(1)], vec![u(1)])]).unwrap();
        let s = StructureSpec::new("const", Carrier::Finite(vec![u(0), u(1)])).with_operation(MAP, g);
        let v = attribute_check(Attribute::OneToOne, &s).unwrap();
        assert!(!v.base && !v.extended);
    }

    #[test]
    fn scalar_multiplication_keeps_sorts_apart() {
        let space = toy_vector_space();
        let smul = extend_function(space.operations.get("smul").unwrap());
        let scalar = parse_value("cyc{0; n}").unwrap();
        let vector = parse_value("V:@1").unwrap();
        let out = smul.apply_one(&[scalar, vector]).unwrap();
        assert_eq!(out.to_string(), "cyc{V:@0; V:@1}");
        assert!(out.branches().iter().all(|b| b.as_const().is_some_and(|e| e.sort == vector_sort())));
        assert!(smul.apply(&[parse_value("V:@1").unwrap(), parse_value("1").unwrap()]).is_err());
        assert_eq!(is_group(&space, &AttributeOptions::default()).unwrap(), Paired { base: true, extended: true });
    }

    #[test]
    fn infinite_carriers_need_known_operations() {
        let s = StructureSpec::new("odd", Carrier::Rationals).with_operation(ADD, LiftableFunction::sub());
        assert!(matches!(attribute_check(Attribute::Associative, &s), Err(Error::NonEnumerableCarrier(_))));
    }

    #[test]
    fn functionality_transfers() {
        let us = [u(0), u(1)];
        let f = Relation::extensional(us.clone(), 2, [vec![u(0), u(1)], vec![u(1), u(1)]]).unwrap();
        let opts = AttributeOptions::default();
        assert_eq!(functional_check(&f, 1, &opts).unwrap(), Paired { base: true, extended: true });
        let g = Relation::extensional(us, 2, [vec![u(0), u(1)], vec![u(0), u(0)]]).unwrap();
        assert_eq!(functional_check(&g, 1, &opts).unwrap(), Paired { base: false, extended: false });
    }

    #[test]
    fn spec_json_round_trip() {
        let z3 = zmod(3);
        let j = serde_json::to_string(&z3).unwrap();
        let back: StructureSpec = serde_json::from_str(&j).unwrap();
        let v = attribute_check(Attribute::Associative, &back).unwrap();
        assert!(v.base && v.extended);
    }
}
