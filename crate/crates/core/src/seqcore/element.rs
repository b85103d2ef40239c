use std::borrow::Cow;
use std::fmt;

use num_bigint::BigInt;

use crate::Rational;

/// Sort label separating the parts of a disjoint-union universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(Cow<'static, str>);

impl Sort {
    pub const REAL: Sort = Sort(Cow::Borrowed("R"));
    pub const INTEGER: Sort = Sort(Cow::Borrowed("Z"));
    pub const ATOM: Sort = Sort(Cow::Borrowed("atom"));
    pub const TUPLE: Sort = Sort(Cow::Borrowed("tuple"));

    /// Sort names are identifiers: a letter or underscore followed by
    /// letters, digits or underscores.
    pub fn new(name: impl Into<String>) -> Option<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        ok.then_some(Sort(Cow::Owned(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Rational(Rational),
    Integer(BigInt),
    Atom(u32),
    Tuple(Vec<UniverseElement>),
}

impl Payload {
    fn default_sort(&self) -> Sort {
        match self {
            Payload::Rational(_) => Sort::REAL,
            Payload::Integer(_) => Sort::INTEGER,
            Payload::Atom(_) => Sort::ATOM,
            Payload::Tuple(_) => Sort::TUPLE,
        }
    }
}

/// A member of the (possibly disjoint-union) universe. Equality is equality
/// of sort and payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniverseElement {
    pub sort: Sort,
    pub payload: Payload,
}

impl UniverseElement {
    pub fn new(sort: Sort, payload: Payload) -> Self {
        Self { sort, payload }
    }

    pub fn real(q: Rational) -> Self {
        Self { sort: Sort::REAL, payload: Payload::Rational(q) }
    }

    /// The real number `k`.
    pub fn small(k: i64) -> Self {
        Self::real(Rational::from_integer(k.into()))
    }

    pub fn integer(k: impl Into<BigInt>) -> Self {
        Self { sort: Sort::INTEGER, payload: Payload::Integer(k.into()) }
    }

    pub fn atom(k: u32) -> Self {
        Self { sort: Sort::ATOM, payload: Payload::Atom(k) }
    }

    pub fn tuple(parts: Vec<UniverseElement>) -> Self {
        Self { sort: Sort::TUPLE, payload: Payload::Tuple(parts) }
    }

    pub fn with_sort(mut self, sort: Sort) -> Self {
        self.sort = sort;
        self
    }

    /// The rational value of a real-sorted element.
    pub fn as_real(&self) -> Option<&Rational> {
        match &self.payload {
            Payload::Rational(q) if self.sort == Sort::REAL => Some(q),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[UniverseElement]> {
        match &self.payload {
            Payload::Tuple(parts) => Some(parts),
            _ => None,
        }
    }
}

/// Canonical text: rationals print bare (`-3/4`), integers as `#5`, atoms
/// as `@2`, tuples as `<a, b>`; a `sort:` prefix appears only when the sort
/// differs from the payload's default.
impl fmt::Display for UniverseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sort != self.payload.default_sort() {
            write!(f, "{}:", self.sort)?;
        }
        match &self.payload {
            Payload::Rational(q) => write!(f, "{q}"),
            Payload::Integer(k) => write!(f, "#{k}"),
            Payload::Atom(k) => write!(f, "@{k}"),
            Payload::Tuple(parts) => {
                write!(f, "<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ">")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(UniverseElement::small(-3).to_string(), "-3");
        assert_eq!(UniverseElement::integer(5).to_string(), "#5");
        assert_eq!(UniverseElement::atom(2).to_string(), "@2");
        let v = Sort::new("V").unwrap();
        assert_eq!(UniverseElement::atom(1).with_sort(v).to_string(), "V:@1");
        let t = UniverseElement::tuple(vec![UniverseElement::small(0), UniverseElement::atom(1)]);
        assert_eq!(t.to_string(), "<0, @1>");
    }

    #[test]
    fn sorts_separate_equal_payloads() {
        let a = UniverseElement::small(1);
        let b = UniverseElement::small(1).with_sort(Sort::new("Q").unwrap());
        assert_ne!(a, b);
        assert!(b.as_real().is_none());
        assert!(Sort::new("1bad").is_none());
    }
}
