//! Exhaustive verification of the extension laws on small finite models.
//!
//! A model is a finite universe together with every canonical value of
//! period at most `m` whose branches are constants from the universe. Every
//! relation (or function, or pair of them) up to the arity cap is built and
//! both sides of each law are compared on every argument tuple of the model.
//!
//! Cost model: an item with `I` instances of argument arity `k` performs
//! `I * |model|^k` comparisons; `|model| = sum over p <= m of the words of
//! minimal period p`, e.g. 4 at `|U| = 2, m = 2` and 9 at `|U| = 3, m = 2`.
//! Exhaustive runs refuse more than `INSTANCE_LIMIT` instances per item with
//! `SizeLimit`; use `RelationSample::Random` beyond that.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcs::{aggregate, compose, compose_relation, extend_function, LiftableFunction};
use crate::logic::{
    extend_relation, fix_prefix_args, power, quantify, rel_combine, transfer_quantifier_check_with, Connective,
    Inclusion, Quantifier, Relation, Tuple, Verdict, VetItem, VetReport, Witness,
};
use crate::seqcore::{end_equal, enumerate_cyclic, BranchTerm, SubsetSpec, UniverseElement, VirtualValue};

/// Largest number of words `enumerate_fragment` will visit.
pub const FRAGMENT_LIMIT: u128 = 1 << 20;
/// Largest number of instances one exhaustive item may build.
pub const INSTANCE_LIMIT: u128 = 1 << 18;

/// Offset of the index window used by `brute_force_extend`.
const FAR_INDEX: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct FragmentModel {
    pub universe: Vec<UniverseElement>,
    pub max_period: usize,
    pub elements: Vec<VirtualValue>,
}

impl FragmentModel {
    pub fn describe(&self) -> String {
        format!("|U|={}, period<={}, {} elements", self.universe.len(), self.max_period, self.elements.len())
    }

    /// Every `k`-tuple of model elements.
    pub fn tuples(&self, k: usize) -> Vec<Vec<VirtualValue>> {
        cartesian(&self.elements, k)
    }
}

/// All canonical values of period at most `max_period` over `universe`.
pub fn enumerate_fragment(universe: &[UniverseElement], max_period: usize) -> Result<FragmentModel> {
    if universe.is_empty() || max_period == 0 {
        return Err(Error::Malformed("a fragment needs a nonempty universe and max_period >= 1".into()));
    }
    let universe: Vec<UniverseElement> = universe.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    Ok(FragmentModel { elements: fragment_over(&universe, max_period)?, universe, max_period })
}

fn fragment_over(elems: &[UniverseElement], max_period: usize) -> Result<Vec<VirtualValue>> {
    let alphabet: Vec<BranchTerm> = elems.iter().cloned().map(BranchTerm::Const).collect();
    enumerate_cyclic(&alphabet, max_period, FRAGMENT_LIMIT)
}

/// The small universe `{0, 1, ..., size - 1}` of reals.
pub fn small_universe(size: usize) -> Vec<UniverseElement> {
    (0..size as i64).map(UniverseElement::small).collect()
}

fn cartesian<T: Clone>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Model tuples on which `p` holds eventually, decided by reading the
/// sequences at the indices of one full common period far out. Every model
/// value is periodic from index 1, so one period past any point decides
/// "for all large i".
pub fn brute_force_extend(p: &Relation, model: &FragmentModel) -> Result<Vec<Vec<VirtualValue>>> {
    let mut out = Vec::new();
    for args in model.tuples(p.arity()) {
        let window: u64 = args.iter().map(|a| a.period() as u64).product();
        let mut holds = true;
        for i in FAR_INDEX + 1..=FAR_INDEX + window {
            let point: Option<Tuple> = args.iter().map(|a| a.value_at(i)).collect();
            let point = point.ok_or_else(|| Error::Malformed("model value undefined at an index".into()))?;
            if !p.holds(&point)? {
                holds = false;
                break;
            }
        }
        if holds {
            out.push(args);
        }
    }
    Ok(out)
}

/// First model tuple on which `brute_force_extend` and `extend_relation`
/// disagree, if any.
pub fn disagreement(p: &Relation, model: &FragmentModel) -> Result<Option<Vec<VirtualValue>>> {
    let brute: BTreeSet<usize> = {
        let tuples = model.tuples(p.arity());
        let held = brute_force_extend(p, model)?;
        tuples.iter().enumerate().filter(|(_, t)| held.contains(t)).map(|(i, _)| i).collect()
    };
    let ext = extend_relation(p);
    for (i, args) in model.tuples(p.arity()).into_iter().enumerate() {
        if ext.holds(&args)? != brute.contains(&i) {
            return Ok(Some(args));
        }
    }
    Ok(None)
}

fn checked_count(requested: u128) -> Result<()> {
    if requested > INSTANCE_LIMIT {
        return Err(Error::SizeLimit { requested, limit: INSTANCE_LIMIT });
    }
    Ok(())
}

fn pow_u128(base: usize, exp: usize) -> u128 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| (base as u128).checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// Every relation of the given arity over `universe`.
pub fn all_relations(universe: &[UniverseElement], arity: usize) -> Result<Vec<Relation>> {
    let tuples = power(universe, arity);
    checked_count(pow_u128(2, tuples.len()))?;
    (0u64..1 << tuples.len())
        .map(|mask| {
            let chosen = tuples.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone());
            Relation::extensional(universe.iter().cloned(), arity, chosen)
        })
        .collect()
}

/// `count` relations with each tuple included independently with
/// probability one half.
pub fn random_relations(universe: &[UniverseElement], arity: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Relation>> {
    let tuples = power(universe, arity);
    (0..count)
        .map(|_| {
            let chosen: Vec<Tuple> = tuples.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
            Relation::extensional(universe.iter().cloned(), arity, chosen)
        })
        .collect()
}

fn random_functions(universe: &[UniverseElement], k: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<LiftableFunction>> {
    let inputs = power(universe, k);
    (0..count)
        .map(|idx| {
            let graph = inputs
                .iter()
                .map(|x| (x.clone(), vec![universe[rng.random_range(0..universe.len())].clone()]));
            LiftableFunction::from_table(format!("r{idx}"), graph)
        })
        .collect()
}

fn subsets(universe: &[UniverseElement]) -> Vec<Vec<UniverseElement>> {
    (0u64..1 << universe.len())
        .map(|mask| universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RelationSample {
    All,
    Random { seed: u64, count: usize },
}

impl RelationSample {
    fn seed(self) -> Option<u64> {
        match self {
            RelationSample::All => None,
            RelationSample::Random { seed, .. } => Some(seed),
        }
    }
}

/// One relation, function or combination on which a law is compared.
#[derive(Clone, Debug)]
enum Instance {
    Equality,
    Connective { op: Connective, p: Relation, q: Option<Relation> },
    Prefix { p: Relation, a: Tuple },
    Quantified { q: Quantifier, d: Vec<UniverseElement>, p: Relation, pool: Vec<VirtualValue> },
    RelationAfter { p: Relation, f: LiftableFunction },
    Composition { g: LiftableFunction, f: LiftableFunction },
    Identity { d: Vec<UniverseElement>, pool: Vec<VirtualValue> },
    Aggregate { fs: Vec<LiftableFunction> },
    Projection { i: usize, universe: Vec<UniverseElement>, n: usize },
}

fn connective_of(item: VetItem) -> Option<Connective> {
    Some(match item {
        VetItem::II => Connective::Not,
        VetItem::III => Connective::And,
        VetItem::IV => Connective::Or,
        VetItem::V => Connective::Implies,
        VetItem::VI => Connective::Iff,
        _ => return None,
    })
}

fn quantifier_of(item: VetItem) -> Option<Quantifier> {
    Some(match item {
        VetItem::VIII | VetItem::A => Quantifier::Forall,
        VetItem::IX | VetItem::B => Quantifier::Exists,
        VetItem::X | VetItem::C => Quantifier::Unique,
        _ => return None,
    })
}

fn render_values(vs: &[VirtualValue]) -> String {
    match vs {
        [single] => single.to_string(),
        _ => format!("({})", vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
    }
}

fn singletons(elems: &[UniverseElement]) -> Vec<Tuple> {
    elems.iter().map(|e| vec![e.clone()]).collect()
}

impl Instance {
    fn arity(&self) -> usize {
        match self {
            Instance::Equality => 2,
            Instance::Connective { p, .. } => p.arity(),
            Instance::Prefix { p, a } => p.arity() - a.len(),
            Instance::Quantified { p, .. } => p.arity() - 1,
            Instance::RelationAfter { f, .. } | Instance::Composition { f, .. } => f.in_arity(),
            Instance::Identity { .. } => 1,
            Instance::Aggregate { fs } => fs[0].in_arity(),
            Instance::Projection { n, .. } => *n,
        }
    }

    fn arguments(&self, model: &FragmentModel) -> Vec<Vec<VirtualValue>> {
        match self {
            Instance::Identity { pool, .. } => cartesian(pool, 1),
            _ => model.tuples(self.arity()),
        }
    }

    /// The two sides of the law on `args`: the extension of the combined
    /// object, then the combination of the extensions.
    fn sides(&self, args: &[VirtualValue]) -> Result<(String, String)> {
        let pair = |l: bool, r: bool| (l.to_string(), r.to_string());
        Ok(match self {
            Instance::Equality => pair(extend_relation(&Relation::equality()).holds(args)?, end_equal(&args[0], &args[1])),
            Instance::Connective { op, p, q } => {
                let lhs = extend_relation(&rel_combine(*op, p, q.as_ref())?).holds(args)?;
                let a = extend_relation(p).holds(args)?;
                let b = match q {
                    Some(q) => extend_relation(q).holds(args)?,
                    None => false,
                };
                pair(lhs, op.apply(a, b))
            }
            Instance::Prefix { p, a } => {
                let lhs = extend_relation(&fix_prefix_args(p, a)?).holds(args)?;
                let full: Vec<VirtualValue> = a.iter().cloned().map(VirtualValue::constant).chain(args.iter().cloned()).collect();
                pair(lhs, extend_relation(p).holds(&full)?)
            }
            Instance::Quantified { q, d, p, pool } => {
                let lhs = extend_relation(&quantify(*q, &SubsetSpec::finite(d.iter().cloned()), p)?).holds(args)?;
                let ext = extend_relation(p);
                let rhs = q.fold(pool.iter().map(|eta| {
                    let full: Vec<VirtualValue> = std::iter::once(eta.clone()).chain(args.iter().cloned()).collect();
                    ext.holds(&full)
                }))?;
                pair(lhs, rhs)
            }
            Instance::RelationAfter { p, f } => {
                let lhs = extend_relation(&compose_relation(p, f)?).holds(args)?;
                let image = extend_function(f).apply(args)?.exact()?;
                pair(lhs, extend_relation(p).holds(&image)?)
            }
            Instance::Composition { g, f } => {
                let lhs = extend_function(&compose(g, f)?).apply(args)?.exact()?;
                let mid = extend_function(f).apply(args)?.exact()?;
                let rhs = extend_function(g).apply(&mid)?.exact()?;
                (render_values(&lhs), render_values(&rhs))
            }
            Instance::Identity { d, .. } => {
                let id = LiftableFunction::identity(SubsetSpec::finite(d.iter().cloned()));
                (render_values(&extend_function(&id).apply(args)?.exact()?), render_values(args))
            }
            Instance::Aggregate { fs } => {
                let lhs = extend_function(&aggregate(fs)?).apply(args)?.exact()?;
                let mut rhs = Vec::new();
                for f in fs {
                    rhs.extend(extend_function(f).apply(args)?.exact()?);
                }
                (render_values(&lhs), render_values(&rhs))
            }
            Instance::Projection { i, universe, n } => {
                let domain = SubsetSpec::Product(vec![SubsetSpec::finite(universe.iter().cloned()); *n]);
                let lhs = extend_function(&LiftableFunction::projection(*i, domain)?).apply(args)?.exact()?;
                (render_values(&lhs), args[*i - 1].to_string())
            }
        })
    }

    fn witness(&self, args: &[VirtualValue], lhs: String, rhs: String) -> Witness {
        let graph = |f: &LiftableFunction| f.graph().expect("oracle functions are tables");
        let mut w = Witness {
            relations: Vec::new(),
            functions: Vec::new(),
            constants: Vec::new(),
            domain: None,
            index: None,
            args: args.iter().map(ToString::to_string).collect(),
            lhs,
            rhs,
        };
        match self {
            Instance::Equality => {}
            Instance::Connective { p, q, .. } => w.relations = std::iter::once(p).chain(q).cloned().collect(),
            Instance::Prefix { p, a } => {
                w.relations = vec![p.clone()];
                w.constants = a.clone();
            }
            Instance::Quantified { d, p, .. } => {
                w.relations = vec![p.clone()];
                w.domain = Some(singletons(d));
            }
            Instance::RelationAfter { p, f } => {
                w.relations = vec![p.clone()];
                w.functions = vec![graph(f)];
            }
            Instance::Composition { g, f } => w.functions = vec![graph(g), graph(f)],
            Instance::Identity { d, .. } => w.domain = Some(singletons(d)),
            Instance::Aggregate { fs } => w.functions = fs.iter().map(graph).collect(),
            Instance::Projection { i, universe, n } => {
                w.index = Some(*i);
                w.domain = Some(power(universe, *n));
            }
        }
        w
    }

    fn from_witness(item: VetItem, w: &Witness, max_period: usize) -> Result<Self> {
        let malformed = || Error::Malformed(format!("witness does not fit item {item}"));
        let table = |idx: usize| -> Result<LiftableFunction> {
            let graph = w.functions.get(idx).ok_or_else(malformed)?;
            LiftableFunction::from_table(format!("f{idx}"), graph.iter().cloned())
        };
        let domain_elems = || -> Result<Vec<UniverseElement>> {
            let d = w.domain.as_ref().ok_or_else(malformed)?;
            d.iter().map(|t| t.first().cloned().ok_or_else(malformed)).collect()
        };
        Ok(match item {
            VetItem::I => Instance::Equality,
            VetItem::II | VetItem::III | VetItem::IV | VetItem::V | VetItem::VI => Instance::Connective {
                op: connective_of(item).expect("connective item"),
                p: w.relations.first().cloned().ok_or_else(malformed)?,
                q: w.relations.get(1).cloned(),
            },
            VetItem::VII => Instance::Prefix { p: w.relations.first().cloned().ok_or_else(malformed)?, a: w.constants.clone() },
            VetItem::VIII | VetItem::IX | VetItem::X => {
                let d = domain_elems()?;
                Instance::Quantified {
                    q: quantifier_of(item).expect("quantifier item"),
                    pool: fragment_over(&d, max_period)?,
                    d,
                    p: w.relations.first().cloned().ok_or_else(malformed)?,
                }
            }
            VetItem::XI => Instance::RelationAfter { p: w.relations.first().cloned().ok_or_else(malformed)?, f: table(0)? },
            VetItem::XII if w.functions.is_empty() => {
                let d = domain_elems()?;
                Instance::Identity { pool: fragment_over(&d, max_period)?, d }
            }
            VetItem::XII => Instance::Composition { g: table(0)?, f: table(1)? },
            VetItem::XIII => match w.index {
                Some(i) => {
                    let d = w.domain.as_ref().ok_or_else(malformed)?;
                    let n = d.first().map_or(0, Vec::len);
                    let universe: BTreeSet<UniverseElement> = d.iter().flatten().cloned().collect();
                    Instance::Projection { i, universe: universe.into_iter().collect(), n }
                }
                None => Instance::Aggregate { fs: (0..w.functions.len()).map(table).collect::<Result<_>>()? },
            },
            VetItem::A | VetItem::B | VetItem::C => return Err(malformed()),
        })
    }
}

struct Sampler<'a> {
    universe: &'a [UniverseElement],
    sample: RelationSample,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    fn relations(&mut self, arity: usize) -> Result<Vec<Relation>> {
        match self.sample {
            RelationSample::All => all_relations(self.universe, arity),
            RelationSample::Random { count, .. } => random_relations(self.universe, arity, count, &mut self.rng),
        }
    }

    fn relation_pairs(&mut self, arity: usize) -> Result<Vec<(Relation, Relation)>> {
        match self.sample {
            RelationSample::All => {
                let rels = all_relations(self.universe, arity)?;
                checked_count((rels.len() as u128).pow(2))?;
                Ok(rels.iter().flat_map(|p| rels.iter().map(move |q| (p.clone(), q.clone()))).collect())
            }
            RelationSample::Random { count, .. } => {
                let ps = random_relations(self.universe, arity, count, &mut self.rng)?;
                let qs = random_relations(self.universe, arity, count, &mut self.rng)?;
                Ok(ps.into_iter().zip(qs).collect())
            }
        }
    }

    fn functions(&mut self, k: usize) -> Result<Vec<LiftableFunction>> {
        match self.sample {
            RelationSample::All => {
                checked_count(pow_u128(self.universe.len(), self.universe.len().pow(k as u32)))?;
                Ok(crate::funcs::all_functions(self.universe, k))
            }
            RelationSample::Random { count, .. } => random_functions(self.universe, k, count, &mut self.rng),
        }
    }
}

fn instances(item: VetItem, model: &FragmentModel, arity_cap: usize, sample: RelationSample) -> Result<Vec<Instance>> {
    let universe = &model.universe;
    let mut s = Sampler {
        universe,
        sample,
        rng: ChaCha8Rng::seed_from_u64(sample.seed().unwrap_or(0) ^ (item as u64) << 32),
    };
    let mut out = Vec::new();
    match item {
        VetItem::I => out.push(Instance::Equality),
        VetItem::II => {
            for arity in 1..=arity_cap {
                for p in s.relations(arity)? {
                    out.push(Instance::Connective { op: Connective::Not, p, q: None });
                }
            }
        }
        VetItem::III | VetItem::IV | VetItem::V | VetItem::VI => {
            let op = connective_of(item).expect("connective item");
            for arity in 1..=arity_cap {
                for (p, q) in s.relation_pairs(arity)? {
                    out.push(Instance::Connective { op, p, q: Some(q) });
                }
            }
        }
        VetItem::VII => {
            for arity in 2..=arity_cap {
                for p in s.relations(arity)? {
                    for k in 1..arity {
                        for a in power(universe, k) {
                            out.push(Instance::Prefix { p: p.clone(), a });
                        }
                    }
                }
            }
        }
        VetItem::VIII | VetItem::IX | VetItem::X => {
            let q = quantifier_of(item).expect("quantifier item");
            let domains = subsets(universe)
                .into_iter()
                .map(|d| Ok((fragment_over(&d, model.max_period)?, d)))
                .collect::<Result<Vec<_>>>()?;
            for arity in 2..=arity_cap {
                for p in s.relations(arity)? {
                    for (pool, d) in &domains {
                        out.push(Instance::Quantified { q, d: d.clone(), p: p.clone(), pool: pool.clone() });
                    }
                }
            }
        }
        VetItem::XI => {
            let ps = s.relations(1)?;
            for k in 1..=arity_cap {
                for f in s.functions(k)? {
                    for p in &ps {
                        out.push(Instance::RelationAfter { p: p.clone(), f: f.clone() });
                    }
                }
            }
        }
        VetItem::XII => {
            let gs = s.functions(1)?;
            for k in 1..=arity_cap {
                for f in s.functions(k)? {
                    for g in &gs {
                        out.push(Instance::Composition { g: g.clone(), f: f.clone() });
                    }
                }
            }
            for d in subsets(universe).into_iter().filter(|d| !d.is_empty()) {
                out.push(Instance::Identity { pool: fragment_over(&d, model.max_period)?, d });
            }
        }
        VetItem::XIII => {
            for k in 1..=arity_cap {
                let fs = s.functions(k)?;
                match sample {
                    RelationSample::All => {
                        checked_count((fs.len() as u128).pow(2))?;
                        for f1 in &fs {
                            for f2 in &fs {
                                out.push(Instance::Aggregate { fs: vec![f1.clone(), f2.clone()] });
                            }
                        }
                    }
                    RelationSample::Random { .. } => {
                        for pair in fs.chunks(2).filter(|c| c.len() == 2) {
                            out.push(Instance::Aggregate { fs: pair.to_vec() });
                        }
                    }
                }
            }
            for n in 1..=arity_cap {
                for i in 1..=n {
                    out.push(Instance::Projection { i, universe: universe.clone(), n });
                }
            }
        }
        VetItem::A | VetItem::B | VetItem::C => unreachable!("clauses are checked statement by statement"),
    }
    checked_count(out.len() as u128)?;
    Ok(out)
}

fn verdict_of(item: VetItem, violation: Option<Witness>, strict: Option<Witness>) -> Verdict {
    match (violation, strict, item.inclusion()) {
        (Some(w), _, _) => Verdict::Fails { witness: Box::new(w) },
        (None, Some(w), Some(direction)) => Verdict::StrictSubset { direction, witness: Box::new(w) },
        _ => Verdict::Equal,
    }
}

fn run_item(item: VetItem, model: &FragmentModel, arity_cap: usize, sample: RelationSample) -> Result<VetReport> {
    let insts = instances(item, model, arity_cap, sample)?;
    let (mut checks, mut strict, mut violations) = (0u64, 0u64, 0u64);
    let (mut first_violation, mut first_strict) = (None, None);
    for inst in &insts {
        for args in inst.arguments(model) {
            let (lhs, rhs) = inst.sides(&args)?;
            checks += 1;
            if lhs == rhs {
                continue;
            }
            strict += 1;
            let admitted = item
                .inclusion()
                .is_some_and(|inc| inc.admits(lhs == "true", rhs == "true"));
            if admitted {
                first_strict.get_or_insert_with(|| inst.witness(&args, lhs, rhs));
            } else {
                violations += 1;
                first_violation.get_or_insert_with(|| inst.witness(&args, lhs, rhs));
            }
        }
    }
    Ok(VetReport {
        item,
        verdict: verdict_of(item, first_violation, first_strict),
        model: model.describe(),
        instances: insts.len() as u64,
        checks,
        strict,
        violations,
        seed: sample.seed(),
    })
}

fn run_clause(item: VetItem, model: &FragmentModel, arity_cap: usize, sample: RelationSample) -> Result<VetReport> {
    let q = quantifier_of(item).expect("clause item");
    let mut s = Sampler {
        universe: &model.universe,
        sample,
        rng: ChaCha8Rng::seed_from_u64(sample.seed().unwrap_or(0) ^ (item as u64) << 32),
    };
    let (mut instances, mut checks, mut violations) = (0u64, 0u64, 0u64);
    let mut witness = None;
    for arity in 1..=arity_cap {
        let members: Vec<UniverseElement> = power(&model.universe, arity)
            .into_iter()
            .map(|t| if arity == 1 { t[0].clone() } else { UniverseElement::tuple(t) })
            .collect();
        // a finite set of tuple elements needs a member to carry its arity
        let domains: Vec<SubsetSpec> = subsets(&members)
            .into_iter()
            .filter(|d| arity == 1 || !d.is_empty())
            .map(SubsetSpec::finite)
            .collect();
        let rels = s.relations(arity)?;
        checked_count(rels.len() as u128 * domains.len() as u128)?;
        for p in &rels {
            for d in &domains {
                let r = transfer_quantifier_check_with(q, d, p, model.max_period)?;
                instances += 1;
                checks += r.checks;
                violations += r.violations;
                if let Verdict::Fails { witness: w } = r.verdict {
                    witness.get_or_insert(w);
                }
            }
        }
    }
    Ok(VetReport {
        item,
        verdict: match witness {
            Some(witness) => Verdict::Fails { witness },
            None => Verdict::Equal,
        },
        model: model.describe(),
        instances,
        checks,
        strict: violations,
        violations,
        seed: sample.seed(),
    })
}

/// One report per item, in item order.
pub fn vet_exhaustive(model: &FragmentModel, arity_cap: usize, sample: RelationSample) -> Result<Vec<VetReport>> {
    VetItem::ALL.iter().map(|&item| vet_item(item, model, arity_cap, sample)).collect()
}

pub fn vet_item(item: VetItem, model: &FragmentModel, arity_cap: usize, sample: RelationSample) -> Result<VetReport> {
    match item {
        VetItem::A | VetItem::B | VetItem::C => run_clause(item, model, arity_cap, sample),
        _ => run_item(item, model, arity_cap, sample),
    }
}

/// Whether a report has the outcome the law predicts: no violation, and for
/// the inclusions a strict witness in the stated direction.
pub fn as_expected(report: &VetReport) -> bool {
    report.violations == 0
        && match (report.item.inclusion(), &report.verdict) {
            (None, Verdict::Equal) => true,
            (Some(d), Verdict::StrictSubset { direction, .. }) => d == *direction,
            _ => false,
        }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub lhs: String,
    pub rhs: String,
    /// The recomputed sides equal the stored ones.
    pub reproduced: bool,
    /// The stated equality or inclusion holds on the witness.
    pub law_holds: bool,
    /// The two sides differ, so the converse inclusion fails.
    pub converse_fails: bool,
}

/// Recomputes both sides of a stored witness. `max_period` is the model's,
/// needed to rebuild quantified domains. `None` when the report has no
/// witness.
pub fn replay(report: &VetReport, max_period: usize) -> Result<Option<Replay>> {
    let Some(w) = report.verdict.witness() else {
        return Ok(None);
    };
    let (lhs, rhs) = match report.item {
        VetItem::A | VetItem::B | VetItem::C => {
            let q = quantifier_of(report.item).expect("clause item");
            let p = w.relations.first().ok_or_else(|| Error::Malformed("clause witness without relation".into()))?;
            let members = w.domain.clone().unwrap_or_default();
            let d = SubsetSpec::finite(members.into_iter().map(|t| match t.len() {
                1 => t[0].clone(),
                _ => UniverseElement::tuple(t),
            }));
            let r = transfer_quantifier_check_with(q, &d, p, max_period)?;
            match r.verdict.witness() {
                Some(again) => (again.lhs.clone(), again.rhs.clone()),
                None => {
                    let v = q.fold(d.enumerate().unwrap_or_default().iter().map(|m| p.holds(m)))?;
                    (v.to_string(), v.to_string())
                }
            }
        }
        item => Instance::from_witness(item, w, max_period)?.sides(&w.parsed_args()?)?,
    };
    let law_holds = match report.item.inclusion() {
        Some(inc) => inc.admits(lhs == "true", rhs == "true"),
        None => lhs == rhs,
    };
    Ok(Some(Replay {
        reproduced: lhs == w.lhs && rhs == w.rhs,
        converse_fails: lhs != rhs,
        law_holds,
        lhs,
        rhs,
    }))
}

fn rule_of(item: VetItem) -> &'static str {
    match item.inclusion() {
        None => "=",
        Some(Inclusion::ExtensionWithin) => "within",
        Some(Inclusion::ExtensionContains) => "contains",
    }
}

fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Equal => "Equal",
        Verdict::StrictSubset { .. } => "StrictSubset-witnessed",
        Verdict::Fails { .. } => "Fails",
    }
}

/// A fixed-width table with one row per report.
pub fn summary(reports: &[VetReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<5} {:<9} {:<23} {:>9} {:>9} {:>7} {:>10}  ok",
        "item", "rule", "verdict", "instances", "checks", "strict", "violations"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<5} {:<9} {:<23} {:>9} {:>9} {:>7} {:>10}  {}",
            r.item.label(),
            rule_of(r.item),
            verdict_label(&r.verdict),
            r.instances,
            r.checks,
            r.strict,
            r.violations,
            if as_expected(r) { "yes" } else { "NO" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::text::parse_value;

    fn u(k: i64) -> UniverseElement {
        UniverseElement::small(k)
    }

    #[test]
    fn fragment_sizes() {
        assert_eq!(enumerate_fragment(&small_universe(2), 1).unwrap().elements.len(), 2);
        assert_eq!(enumerate_fragment(&small_universe(2), 2).unwrap().elements.len(), 4);
        let m = enumerate_fragment(&small_universe(3), 2).unwrap();
        assert_eq!(m.elements.len(), 9);
        for (i, a) in m.elements.iter().enumerate() {
            for b in &m.elements[i + 1..] {
                assert!(!end_equal(a, b));
            }
        }
        assert!(matches!(enumerate_fragment(&small_universe(4), 12), Err(Error::SizeLimit { .. })));
        assert!(enumerate_fragment(&[], 2).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let m = enumerate_fragment(&small_universe(2), 2).unwrap();
        let eq = Relation::equality();
        let diag = brute_force_extend(&eq, &m).unwrap();
        assert_eq!(diag.len(), 4);
        assert!(diag.iter().all(|t| t[0] == t[1]));

        let p01 = Relation::extensional([u(0), u(1)], 2, [vec![u(0), u(1)]]).unwrap();
        let held = brute_force_extend(&p01, &m).unwrap();
        assert_eq!(held, vec![vec![VirtualValue::constant(u(0)), VirtualValue::constant(u(1))]]);

        let full = Relation::extensional([u(0), u(1)], 2, power(&[u(0), u(1)], 2)).unwrap();
        assert_eq!(brute_force_extend(&full, &m).unwrap().len(), 16);

        let swap = Relation::extensional([u(0), u(1)], 2, [vec![u(0), u(1)], vec![u(1), u(0)]]).unwrap();
        let pair = vec![parse_value("cyc[0, 1]").unwrap(), parse_value("cyc[1, 0]").unwrap()];
        assert!(brute_force_extend(&swap, &m).unwrap().contains(&pair));
    }

    #[test]
    fn implementation_agrees_with_brute_force_on_small_models() {
        let m = enumerate_fragment(&small_universe(2), 2).unwrap();
        for arity in 1..=2 {
            for p in all_relations(&m.universe, arity).unwrap() {
                assert_eq!(disagreement(&p, &m).unwrap(), None);
            }
        }
    }

    #[test]
    fn strict_witnesses_named_in_the_literature() {
        let is0 = Relation::extensional([u(0), u(1)], 1, [vec![u(0)]]).unwrap();
        let is1 = Relation::extensional([u(0), u(1)], 1, [vec![u(1)]]).unwrap();
        let alt = vec![parse_value("cyc[0, 1]").unwrap()];
        let or = Instance::Connective { op: Connective::Or, p: is0.clone(), q: Some(is1) };
        assert_eq!(or.sides(&alt).unwrap(), ("true".into(), "false".into()));
        let not = Instance::Connective { op: Connective::Not, p: is0, q: None };
        assert_eq!(not.sides(&alt).unwrap(), ("false".into(), "true".into()));
    }

    #[test]
    fn small_run_meets_every_law() {
        let m = enumerate_fragment(&small_universe(2), 2).unwrap();
        let reports = vet_exhaustive(&m, 1, RelationSample::All).unwrap();
        assert_eq!(reports.len(), 16);
        for r in &reports {
            assert_eq!(r.violations, 0, "{}", r.item);
        }
        for r in reports.iter().filter(|r| r.item.inclusion().is_some()) {
            assert!(as_expected(r), "{}", r.item);
            let again = replay(r, 2).unwrap().unwrap();
            assert!(again.reproduced && again.law_holds && again.converse_fails);
        }
        let table = summary(&reports);
        assert!(table.lines().count() == 17 && !table.contains("NO"));
    }

    #[test]
    fn random_sample_is_seeded() {
        let m = enumerate_fragment(&small_universe(3), 1).unwrap();
        let sample = RelationSample::Random { seed: 9, count: 5 };
        let a = vet_item(VetItem::III, &m, 2, sample).unwrap();
        let b = vet_item(VetItem::III, &m, 2, sample).unwrap();
        assert_eq!((a.checks, a.seed), (b.checks, Some(9)));
        assert!(as_expected(&a));
    }

    #[test]
    fn exhaustive_refuses_huge_runs() {
        let m = enumerate_fragment(&small_universe(3), 1).unwrap();
        assert!(matches!(vet_item(VetItem::III, &m, 2, RelationSample::All), Err(Error::SizeLimit { .. })));
    }
}
