//! Lower ideals of SP orders, each kept as its minimal obstruction antichain.

use std::fmt;

use thiserror::Error;

use crate::term::{is_suborder, parse_term, ParseError, SpTerm};

/// `Forb(F)` for a finite set `F`, stored minimized: the obstructions are
/// pairwise incomparable under suborder and sorted by the total term order.
///
/// `{Empty}` is the void ideal, `{Point}` the ideal holding only the empty
/// poset, and `{}` the improper ideal of all SP orders.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ideal {
    obstructions: Vec<SpTerm>,
}

/// Coarse classification of an ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdealClass {
    /// Contains nothing.
    Void,
    /// Contains only the empty poset.
    EmptyOnly,
    /// Contains every SP order.
    Improper,
    /// Contains a nonempty poset and misses some poset.
    NontrivialProper,
}

impl Ideal {
    /// `Forb(F)`: canonicalizes `F` and keeps only its suborder-minimal
    /// members.
    pub fn forbidding<I>(obstructions: I) -> Ideal
    where
        I: IntoIterator<Item = SpTerm>,
    {
        let mut all: Vec<SpTerm> = obstructions.into_iter().map(|t| t.canonicalize()).collect();
        all.sort();
        all.dedup();
        // ascending size order: anything below a candidate was seen first
        let mut kept: Vec<SpTerm> = Vec::with_capacity(all.len());
        for candidate in all {
            if !kept.iter().any(|k| is_suborder(k, &candidate)) {
                kept.push(candidate);
            }
        }
        Ideal { obstructions: kept }
    }

    pub fn void() -> Ideal {
        Ideal {
            obstructions: vec![SpTerm::Empty],
        }
    }

    pub fn empty_only() -> Ideal {
        Ideal {
            obstructions: vec![SpTerm::Point],
        }
    }

    pub fn improper() -> Ideal {
        Ideal {
            obstructions: Vec::new(),
        }
    }

    pub fn obstructions(&self) -> &[SpTerm] {
        &self.obstructions
    }

    pub fn class(&self) -> IdealClass {
        match self.obstructions.as_slice() {
            [] => IdealClass::Improper,
            [SpTerm::Empty] => IdealClass::Void,
            [SpTerm::Point] => IdealClass::EmptyOnly,
            _ => IdealClass::NontrivialProper,
        }
    }

    pub fn is_void(&self) -> bool {
        self.class() == IdealClass::Void
    }

    pub fn is_empty_only(&self) -> bool {
        self.class() == IdealClass::EmptyOnly
    }

    /// Void and empty-only ideals: they have no description of their own
    /// and are decided directly.
    pub fn is_leaf(&self) -> bool {
        matches!(self.class(), IdealClass::Void | IdealClass::EmptyOnly)
    }

    pub fn is_nontrivial_proper(&self) -> bool {
        self.class() == IdealClass::NontrivialProper
    }

    /// Whether `term` avoids every obstruction.
    pub fn contains(&self, term: &SpTerm) -> bool {
        !self.obstructions.iter().any(|o| is_suborder(o, term))
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        Ideal::forbidding(
            self.obstructions
                .iter()
                .chain(other.obstructions.iter())
                .cloned(),
        )
    }

    /// Whether `other` is a subset of `self`: every obstruction of `self`
    /// lies above some obstruction of `other`.
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        self.obstructions
            .iter()
            .all(|o| other.obstructions.iter().any(|p| is_suborder(p, o)))
    }

    /// `other` is a proper subset of `self`.
    pub fn strictly_contains(&self, other: &Ideal) -> bool {
        self != other && self.contains_ideal(other)
    }

    /// Canonical key: obstructions rendered in order and joined by `|`.
    pub fn key(&self) -> IdealKey {
        IdealKey(
            self.obstructions
                .iter()
                .map(SpTerm::to_string)
                .collect::<Vec<_>>()
                .join("|"),
        )
    }

    pub fn from_key(key: &str) -> Result<Ideal, ParseError> {
        if key.is_empty() {
            return Ok(Ideal::improper());
        }
        let terms = key
            .split('|')
            .map(parse_term)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal::forbidding(terms))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forb({})", self.key())
    }
}

/// `Forb(F)`.
pub fn make_ideal(obstructions: &[SpTerm]) -> Ideal {
    Ideal::forbidding(obstructions.iter().cloned())
}

pub fn member(ideal: &Ideal, term: &SpTerm) -> bool {
    ideal.contains(term)
}

pub fn intersect(a: &Ideal, b: &Ideal) -> Ideal {
    a.intersect(b)
}

/// Whether `inner` is a subset of `outer`.
pub fn contains_ideal(outer: &Ideal, inner: &Ideal) -> bool {
    outer.contains_ideal(inner)
}

pub fn ideal_key(ideal: &Ideal) -> IdealKey {
    ideal.key()
}

/// The canonical string naming an [`Ideal`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IdealKey(String);

impl IdealKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Re-canonicalizes a key string by parsing it as an ideal.
    pub fn parse(key: &str) -> Result<IdealKey, ParseError> {
        Ideal::from_key(key).map(|i| i.key())
    }
}

impl fmt::Display for IdealKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error)]
#[error("line {line}: {source}")]
pub struct ObstructionFileError {
    pub line: usize,
    #[source]
    pub source: ParseError,
}

/// Reads an obstruction list: one term per line, `#` starts a comment,
/// blank lines are ignored.
pub fn parse_obstruction_list(text: &str) -> Result<Vec<SpTerm>, ObstructionFileError> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let term = parse_term(line).map_err(|source| ObstructionFileError {
            line: idx + 1,
            source,
        })?;
        terms.push(term);
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> SpTerm {
        parse_term(s).unwrap()
    }

    fn forb(terms: &[&str]) -> Ideal {
        Ideal::forbidding(terms.iter().map(|s| t(s)))
    }

    #[test]
    fn minimization() {
        assert_eq!(forb(&["C(*,*)", "C(*,*,*)"]).obstructions(), &[t("C(*,*)")]);
        assert_eq!(forb(&[]).class(), IdealClass::Improper);
        assert_eq!(forb(&["A(*,*)", "*"]).obstructions(), &[SpTerm::Point]);
        assert!(forb(&["0", "C(*,*)"]).is_void());
    }

    #[test]
    fn membership() {
        assert!(forb(&["A(*,*)"]).contains(&t("C(*,*,*)")));
        assert!(forb(&["*"]).contains(&SpTerm::Empty));
        assert!(!forb(&["*"]).contains(&SpTerm::Point));
        let no_diamond = Ideal::forbidding([SpTerm::diamond()]);
        assert!(no_diamond.contains(&t("C(*,A(*,*))")));
        assert!(!no_diamond.contains(&t("C(*,A(*,*),*)")));
    }

    #[test]
    fn intersections() {
        let i = forb(&["C(*,*,*)"]).intersect(&forb(&["A(*,*)"]));
        assert_eq!(i.obstructions(), &[t("A(*,*)"), t("C(*,*,*)")]);
        let i = forb(&["C(*,*)"]).intersect(&forb(&["C(*,*,*)"]));
        assert_eq!(i.obstructions(), &[t("C(*,*)")]);
        let i = forb(&["*"]).intersect(&forb(&["A(C(*,*),*)"]));
        assert_eq!(i.obstructions(), &[SpTerm::Point]);
    }

    #[test]
    fn containment() {
        assert!(forb(&["C(*,*,*)"]).contains_ideal(&forb(&["C(*,*)"])));
        assert!(!forb(&["A(*,*)"]).contains_ideal(&forb(&["C(*,*)"])));
        for i in [forb(&["C(*,*)"]), forb(&[]), forb(&["*"]), Ideal::void()] {
            assert!(i.contains_ideal(&Ideal::void()));
        }
        assert!(forb(&["C(*,*,*)"]).strictly_contains(&forb(&["C(*,*)"])));
        assert!(!forb(&["C(*,*)"]).strictly_contains(&forb(&["C(*,*)"])));
    }

    #[test]
    fn keys() {
        assert_eq!(forb(&["C(*,*)"]).key().as_str(), "C(*,*)");
        assert_eq!(Ideal::improper().key().as_str(), "");
        // obstructions follow the total term order, smaller sizes first
        assert_eq!(
            forb(&["A(*,*)", "C(*,*,*)"]).key().as_str(),
            "A(*,*)|C(*,*,*)"
        );
        let i = forb(&["A(*,*)", "C(*,*,*)"]);
        assert_eq!(Ideal::from_key(i.key().as_str()).unwrap(), i);
        assert_eq!(IdealKey::parse("C(*,*,*)|C(*,*)").unwrap().as_str(), "C(*,*)");
    }

    #[test]
    fn classification() {
        assert_eq!(Ideal::void().class(), IdealClass::Void);
        assert_eq!(Ideal::empty_only().class(), IdealClass::EmptyOnly);
        assert!(forb(&["C(*,*)"]).is_nontrivial_proper());
    }

    #[test]
    fn obstruction_file() {
        let text = "# forbidden\nC(*,A(*,*),*)  # diamond\n\nA(*,*,*,*)\n";
        let terms = parse_obstruction_list(text).unwrap();
        assert_eq!(terms, vec![SpTerm::diamond(), SpTerm::antichain_of_points(4)]);
        let err = parse_obstruction_list("*\nC(*)\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
