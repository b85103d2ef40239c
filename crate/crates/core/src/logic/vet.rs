use std::fmt;

use serde::{Deserialize, Serialize};

use super::{extend_relation, Quantifier, Relation, Tuple};
use crate::error::{Error, Result};
use crate::seqcore::{enumerate_cyclic, BranchTerm, SubsetSpec, UniverseElement, VirtualValue};

/// Commutation rules between extension and the operations on relations and
/// functions, plus the three quantified-statement clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VetItem {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "vii")]
    VII,
    #[serde(rename = "viii")]
    VIII,
    #[serde(rename = "ix")]
    IX,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "xi")]
    XI,
    #[serde(rename = "xii")]
    XII,
    #[serde(rename = "xiii")]
    XIII,
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

impl VetItem {
    pub const ALL: [VetItem; 16] = [
        VetItem::I,
        VetItem::II,
        VetItem::III,
        VetItem::IV,
        VetItem::V,
        VetItem::VI,
        VetItem::VII,
        VetItem::VIII,
        VetItem::IX,
        VetItem::X,
        VetItem::XI,
        VetItem::XII,
        VetItem::XIII,
        VetItem::A,
        VetItem::B,
        VetItem::C,
    ];

    /// The inclusion the rule asserts between the extension side (left) and
    /// the combined-extensions side (right); `None` for equalities.
    pub fn inclusion(self) -> Option<Inclusion> {
        match self {
            VetItem::II | VetItem::V | VetItem::VI => Some(Inclusion::ExtensionWithin),
            VetItem::IV => Some(Inclusion::ExtensionContains),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VetItem::I => "i",
            VetItem::II => "ii",
            VetItem::III => "iii",
            VetItem::IV => "iv",
            VetItem::V => "v",
            VetItem::VI => "vi",
            VetItem::VII => "vii",
            VetItem::VIII => "viii",
            VetItem::IX => "ix",
            VetItem::X => "x",
            VetItem::XI => "xi",
            VetItem::XII => "xii",
            VetItem::XIII => "xiii",
            VetItem::A => "a",
            VetItem::B => "b",
            VetItem::C => "c",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.label() == label)
    }
}

impl fmt::Display for VetItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inclusion {
    /// The extension of the combination is contained in the combination of
    /// the extensions.
    ExtensionWithin,
    /// The extension of the combination contains the combination of the
    /// extensions.
    ExtensionContains,
}

impl Inclusion {
    /// Whether the pair of truth values respects the inclusion.
    pub fn admits(self, lhs: bool, rhs: bool) -> bool {
        match self {
            Inclusion::ExtensionWithin => !lhs || rhs,
            Inclusion::ExtensionContains => !rhs || lhs,
        }
    }
}

/// A concrete instance on which the two sides of a rule were compared.
/// `lhs` is the extension side and `rhs` the side built from extensions;
/// both print as `true`/`false` for relation rules and as canonical values
/// for function rules.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Relation>,
    /// Function graphs as input/output tuple pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<Vec<(Tuple, Tuple)>>,
    /// Fixed constants, the quantified domain, or a projection index.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<UniverseElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Tuple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// Canonical renderings of the argument values.
    pub args: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn parsed_args(&self) -> Result<Vec<VirtualValue>> {
        self.args.iter().map(|a| crate::seqcore::text::parse_value(a)).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    StrictSubset { direction: Inclusion, witness: Box<Witness> },
    Fails { witness: Box<Witness> },
}

impl Verdict {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Equal => None,
            Verdict::StrictSubset { witness, .. } | Verdict::Fails { witness } => Some(witness),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::StrictSubset { .. } => "strict_subset",
            Verdict::Fails { .. } => "fails",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VetReport {
    pub item: VetItem,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub model: String,
    /// Relation or function instances examined.
    pub instances: u64,
    /// Argument tuples compared across all instances.
    pub checks: u64,
    /// Comparisons on which the two sides differed.
    pub strict: u64,
    /// Comparisons that broke the asserted equality or inclusion.
    pub violations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Compares `Q x in D, P(x)` with `Q xi in ext D, ext P(xi)`, the latter
/// over every fragment value of period at most 2 ending in `D`.
pub fn transfer_quantifier_check(q: Quantifier, d: &SubsetSpec, p: &Relation) -> Result<VetReport> {
    transfer_quantifier_check_with(q, d, p, 2)
}

pub fn transfer_quantifier_check_with(
    q: Quantifier,
    d: &SubsetSpec,
    p: &Relation,
    max_period: usize,
) -> Result<VetReport> {
    let members = d
        .enumerate()
        .ok_or_else(|| Error::NonEnumerableDomain(format!("{d:?} is not a finite set")))?;
    let k = d.arity();
    if p.arity() != k {
        return Err(Error::ArityMismatch { expected: k, found: p.arity() });
    }
    let base = q.fold(members.iter().map(|m| Ok(p.test(m))))?;

    let alphabet: Vec<BranchTerm> = members
        .iter()
        .map(|m| BranchTerm::Const(if k == 1 { m[0].clone() } else { UniverseElement::tuple(m.clone()) }))
        .collect();
    let ext = extend_relation(p);
    let mut holders = Vec::new();
    let mut failures = Vec::new();
    let values = enumerate_cyclic(&alphabet, max_period, 1 << 20)?;
    for value in &values {
        let args = if k == 1 { vec![value.clone()] } else { value.components()? };
        if ext.holds(&args)? {
            holders.push(value.to_string());
        } else {
            failures.push(value.to_string());
        }
    }
    let extended = match q {
        Quantifier::Forall => failures.is_empty(),
        Quantifier::Exists => !holders.is_empty(),
        Quantifier::Unique => holders.len() == 1,
    };
    let item = match q {
        Quantifier::Forall => VetItem::A,
        Quantifier::Exists => VetItem::B,
        Quantifier::Unique => VetItem::C,
    };
    let verdict = if base == extended {
        Verdict::Equal
    } else {
        let args = match q {
            Quantifier::Forall => failures.into_iter().take(1).collect(),
            _ => holders.into_iter().take(2).collect(),
        };
        Verdict::Fails {
            witness: Box::new(Witness {
                relations: vec![p.clone()],
                functions: Vec::new(),
                constants: Vec::new(),
                domain: Some(members.clone()),
                index: None,
                args,
                lhs: base.to_string(),
                rhs: extended.to_string(),
            }),
        }
    };
    Ok(VetReport {
        item,
        strict: u64::from(base != extended),
        violations: u64::from(base != extended),
        verdict,
        model: format!("|D|={}, period<={max_period}", members.len()),
        instances: 1,
        checks: values.len() as u64,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: i64) -> UniverseElement {
        UniverseElement::small(k)
    }

    fn d01() -> SubsetSpec {
        SubsetSpec::finite([u(0), u(1)])
    }

    #[test]
    fn reflexivity_statement() {
        // forall x in {0, 1}: x = x, as the diagonal of eq
        let diag = Relation::predicate_with_branch("self", 1, |_| true, |_| Ok(true));
        let r = transfer_quantifier_check(Quantifier::Forall, &d01(), &diag).unwrap();
        assert!(matches!(r.verdict, Verdict::Equal));
        assert_eq!(r.item, VetItem::A);
    }

    #[test]
    fn false_existential() {
        let is2 = super::super::fix_prefix_args(&Relation::equality(), &[u(2)]).unwrap();
        let r = transfer_quantifier_check(Quantifier::Exists, &d01(), &is2).unwrap();
        assert!(matches!(r.verdict, Verdict::Equal));
    }

    #[test]
    fn unique_existence_for_every_unary_relation() {
        let subsets: [&[i64]; 4] = [&[], &[0], &[1], &[0, 1]];
        for s in subsets {
            let p = Relation::extensional([u(0), u(1)], 1, s.iter().map(|&x| vec![u(x)])).unwrap();
            for q in [Quantifier::Forall, Quantifier::Exists, Quantifier::Unique] {
                let r = transfer_quantifier_check(q, &d01(), &p).unwrap();
                assert!(matches!(r.verdict, Verdict::Equal), "{q:?} {s:?}");
            }
        }
    }

    #[test]
    fn report_serializes_flat() {
        let p = Relation::extensional([u(0), u(1)], 1, [vec![u(0)]]).unwrap();
        let r = transfer_quantifier_check(Quantifier::Unique, &d01(), &p).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["item"], "c");
        assert_eq!(j["verdict"], "equal");
        let back: VetReport = serde_json::from_value(j).unwrap();
        assert_eq!(back.item, VetItem::C);
    }

    #[test]
    fn item_labels_round_trip() {
        for item in VetItem::ALL {
            assert_eq!(VetItem::from_label(item.label()), Some(item));
        }
        assert!(Inclusion::ExtensionWithin.admits(false, true));
        assert!(!Inclusion::ExtensionWithin.admits(true, false));
        assert!(!Inclusion::ExtensionContains.admits(false, true));
    }
}
