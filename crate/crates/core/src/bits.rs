//! Bits and structural descriptions.
//!
//! A bit is a two-point chain or antichain whose points carry labels: either
//! the self reference `R` or a lower ideal. A [`StructuralDescription`] is a
//! flat table keyed by [`IdealKey`]; each entry holds an ideal and the bits
//! generating it, and ideal labels refer to other entries. Nesting depth is
//! recovered as [`StructuralDescription::rank`].
//!
//! The void ideal (key `0`) and the ideal holding only the empty poset (key
//! `*`) may appear as labels without entries; no description generates them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ideal::{Ideal, IdealKey};
use crate::term::{parse_term, ParseError};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    /// `R`: the ideal being described.
    SelfRef,
    IdealRef(IdealKey),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::SelfRef => f.write_str("R"),
            Label::IdealRef(key) => write!(f, "Forb({key})"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitShape {
    Chain,
    Antichain,
}

/// A labeled two-point chain (`labels[0]` below `labels[1]`) or antichain
/// (labels kept sorted).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bit {
    shape: BitShape,
    labels: [Label; 2],
}

impl Bit {
    pub fn new(shape: BitShape, first: Label, second: Label) -> Bit {
        match shape {
            BitShape::Chain => Bit::chain(first, second),
            BitShape::Antichain => Bit::antichain(first, second),
        }
    }

    pub fn chain(bottom: Label, top: Label) -> Bit {
        Bit {
            shape: BitShape::Chain,
            labels: [bottom, top],
        }
    }

    pub fn antichain(a: Label, b: Label) -> Bit {
        let labels = if a <= b { [a, b] } else { [b, a] };
        Bit {
            shape: BitShape::Antichain,
            labels,
        }
    }

    /// `R_C`: the two-point chain labeled `R`, `R`.
    pub fn r_chain() -> Bit {
        Bit::chain(Label::SelfRef, Label::SelfRef)
    }

    /// `R_A`: the two-point antichain labeled `R`, `R`.
    pub fn r_antichain() -> Bit {
        Bit::antichain(Label::SelfRef, Label::SelfRef)
    }

    pub fn shape(&self) -> BitShape {
        self.shape
    }

    pub fn labels(&self) -> &[Label; 2] {
        &self.labels
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn ideal_refs(&self) -> impl Iterator<Item = &IdealKey> {
        self.labels.iter().filter_map(|l| match l {
            Label::IdealRef(k) => Some(k),
            Label::SelfRef => None,
        })
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.shape {
            BitShape::Chain => "<",
            BitShape::Antichain => "+",
        };
        write!(f, "{} {} {}", self.labels[0], op, self.labels[1])
    }
}

/// One row of a description table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Entry {
    pub ideal: Ideal,
    pub bits: BTreeSet<Bit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptionError {
    #[error("no entry for key `{0}`")]
    UnresolvedKey(IdealKey),
    #[error("label references form a cycle through `{0}`")]
    Cycle(IdealKey),
}

/// A problem found by [`StructuralDescription::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    RootMissing(IdealKey),
    KeyMismatch { key: IdealKey, ideal_key: IdealKey },
    UnresolvedLabel { entry: IdealKey, label: IdealKey },
    Cycle { entry: IdealKey },
    NotStrictlySmaller { entry: IdealKey, label: IdealKey },
    LeafWithEntry(IdealKey),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootMissing(k) => write!(f, "root `{k}` has no entry"),
            Violation::KeyMismatch { key, ideal_key } => {
                write!(f, "entry stored under `{key}` holds ideal `{ideal_key}`")
            }
            Violation::UnresolvedLabel { entry, label } => {
                write!(f, "entry `{entry}` references missing `{label}`")
            }
            Violation::Cycle { entry } => write!(f, "entry `{entry}` lies on a reference cycle"),
            Violation::NotStrictlySmaller { entry, label } => write!(
                f,
                "entry `{entry}` references `{label}`, which is not strictly contained in it"
            ),
            Violation::LeafWithEntry(k) => write!(f, "leaf ideal `{k}` has an entry"),
        }
    }
}

/// Result of [`StructuralDescription::validate`]; empty means valid.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructuralDescription {
    root: IdealKey,
    entries: BTreeMap<IdealKey, Entry>,
}

impl StructuralDescription {
    /// A table whose root entry has no bits yet.
    pub fn new(root: Ideal) -> Self {
        let key = root.key();
        let mut entries = BTreeMap::new();
        entries.insert(
            key.clone(),
            Entry {
                ideal: root,
                bits: BTreeSet::new(),
            },
        );
        StructuralDescription { root: key, entries }
    }

    pub fn root(&self) -> &IdealKey {
        &self.root
    }

    pub fn root_entry(&self) -> &Entry {
        &self.entries[&self.root]
    }

    pub fn entries(&self) -> &BTreeMap<IdealKey, Entry> {
        &self.entries
    }

    pub fn entry(&self, key: &IdealKey) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn contains_key(&self, key: &IdealKey) -> bool {
        self.entries.contains_key(key)
    }

    /// Inserts or replaces the entry for `ideal`, returning its key.
    pub fn insert(&mut self, ideal: Ideal, bits: BTreeSet<Bit>) -> IdealKey {
        let key = ideal.key();
        self.entries.insert(key.clone(), Entry { ideal, bits });
        key
    }

    /// Inserts an entry under an arbitrary key, bypassing key derivation.
    /// Only useful for building malformed tables in tests.
    #[doc(hidden)]
    pub fn insert_raw(&mut self, key: IdealKey, entry: Entry) {
        self.entries.insert(key, entry);
    }

    pub fn bits_mut(&mut self, key: &IdealKey) -> Option<&mut BTreeSet<Bit>> {
        self.entries.get_mut(key).map(|e| &mut e.bits)
    }

    pub fn bit_count(&self) -> usize {
        self.entries.values().map(|e| e.bits.len()).sum()
    }

    /// The ideal a key denotes: an entry's ideal, or one of the two leaf
    /// ideals.
    pub fn resolve(&self, key: &IdealKey) -> Option<Ideal> {
        if let Some(entry) = self.entries.get(key) {
            return Some(entry.ideal.clone());
        }
        leaf_ideal(key)
    }

    /// 0 for an entry without bits, otherwise one more than the largest
    /// rank among the entries its labels reference (leaf labels count 0).
    pub fn rank(&self, key: &IdealKey) -> Result<usize, DescriptionError> {
        let mut memo = HashMap::new();
        let mut on_stack = BTreeSet::new();
        self.rank_inner(key, &mut memo, &mut on_stack)
    }

    /// Ranks of all entries.
    pub fn ranks(&self) -> Result<BTreeMap<IdealKey, usize>, DescriptionError> {
        let mut memo = HashMap::new();
        let mut out = BTreeMap::new();
        for key in self.entries.keys() {
            let mut on_stack = BTreeSet::new();
            out.insert(key.clone(), self.rank_inner(key, &mut memo, &mut on_stack)?);
        }
        Ok(out)
    }

    fn rank_inner(
        &self,
        key: &IdealKey,
        memo: &mut HashMap<IdealKey, usize>,
        on_stack: &mut BTreeSet<IdealKey>,
    ) -> Result<usize, DescriptionError> {
        if let Some(&r) = memo.get(key) {
            return Ok(r);
        }
        let Some(entry) = self.entries.get(key) else {
            return if leaf_ideal(key).is_some() {
                Ok(0)
            } else {
                Err(DescriptionError::UnresolvedKey(key.clone()))
            };
        };
        if !on_stack.insert(key.clone()) {
            return Err(DescriptionError::Cycle(key.clone()));
        }
        let rank = if entry.bits.is_empty() {
            0
        } else {
            let mut below = 0;
            for bit in &entry.bits {
                for child in bit.ideal_refs() {
                    below = below.max(self.rank_inner(child, memo, on_stack)?);
                }
            }
            below + 1
        };
        on_stack.remove(key);
        memo.insert(key.clone(), rank);
        Ok(rank)
    }

    /// Checks reference resolution, acyclicity and strict decrease of label
    /// ideals. Two-point shapes hold by construction of [`Bit`].
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if !self.entries.contains_key(&self.root) {
            violations.push(Violation::RootMissing(self.root.clone()));
        }
        for (key, entry) in &self.entries {
            let ideal_key = entry.ideal.key();
            if &ideal_key != key {
                violations.push(Violation::KeyMismatch {
                    key: key.clone(),
                    ideal_key,
                });
            }
            if entry.ideal.is_leaf() {
                violations.push(Violation::LeafWithEntry(key.clone()));
            }
            let refs: BTreeSet<&IdealKey> = entry.bits.iter().flat_map(Bit::ideal_refs).collect();
            for label in refs {
                match self.resolve(label) {
                    None => violations.push(Violation::UnresolvedLabel {
                        entry: key.clone(),
                        label: label.clone(),
                    }),
                    Some(child) => {
                        if !entry.ideal.strictly_contains(&child) {
                            violations.push(Violation::NotStrictlySmaller {
                                entry: key.clone(),
                                label: label.clone(),
                            });
                        }
                    }
                }
            }
        }
        for key in self.entries.keys() {
            if let Err(DescriptionError::Cycle(_)) = self.rank(key) {
                violations.push(Violation::Cycle { entry: key.clone() });
            }
        }
        ValidationReport { violations }
    }

    /// JSON document with entries in key order.
    pub fn to_json(&self) -> String {
        let doc = DescriptionDoc {
            root: self.root.to_string(),
            entries: self
                .entries
                .values()
                .map(|e| EntryDoc {
                    ideal: e.ideal.obstructions().iter().map(|t| t.to_string()).collect(),
                    bits: e
                        .bits
                        .iter()
                        .map(|b| BitDoc {
                            shape: b.shape,
                            labels: [label_text(&b.labels[0]), label_text(&b.labels[1])],
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("description serializes")
    }

    pub fn from_json(text: &str) -> Result<StructuralDescription, SchemaError> {
        let doc: DescriptionDoc = serde_json::from_str(text)?;
        let root = IdealKey::parse(&doc.root).map_err(|e| SchemaError::Term {
            context: "root".into(),
            source: e,
        })?;
        let mut entries = BTreeMap::new();
        for entry in doc.entries {
            let terms = entry
                .ideal
                .iter()
                .map(|s| parse_term(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| SchemaError::Term {
                    context: "ideal".into(),
                    source: e,
                })?;
            let ideal = Ideal::forbidding(terms);
            let mut bits = BTreeSet::new();
            for bit in entry.bits {
                let [a, b] = bit.labels;
                bits.insert(Bit::new(bit.shape, parse_label(&a)?, parse_label(&b)?));
            }
            let key = ideal.key();
            if entries.insert(key.clone(), Entry { ideal, bits }).is_some() {
                return Err(SchemaError::DuplicateEntry(key));
            }
        }
        if !entries.contains_key(&root) {
            return Err(SchemaError::RootMissing(root));
        }
        Ok(StructuralDescription { root, entries })
    }

    /// Graphviz rendering: one node per entry, one edge per referenced ideal.
    pub fn to_dot(&self) -> String {
        let ranks = self.ranks().ok();
        let mut ids: BTreeMap<&IdealKey, usize> = BTreeMap::new();
        for (i, key) in self.entries.keys().enumerate() {
            ids.insert(key, i);
        }
        let mut out = String::from("digraph description {\n  node [shape=box];\n");
        for (key, entry) in &self.entries {
            let rank = ranks
                .as_ref()
                .and_then(|r| r.get(key))
                .map(|r| format!("\\nrank {r}"))
                .unwrap_or_default();
            let root = if key == &self.root { ", style=bold" } else { "" };
            out.push_str(&format!(
                "  n{} [label=\"Forb({}){}\\n{} bits\"{}];\n",
                ids[key],
                key,
                rank,
                entry.bits.len(),
                root
            ));
        }
        let mut leaves: BTreeMap<&IdealKey, usize> = BTreeMap::new();
        for (key, entry) in &self.entries {
            let targets: BTreeSet<&IdealKey> = entry.bits.iter().flat_map(Bit::ideal_refs).collect();
            for target in targets {
                let to = match ids.get(target) {
                    Some(id) => format!("n{id}"),
                    None => {
                        let next = leaves.len();
                        let id = *leaves.entry(target).or_insert(next);
                        format!("leaf{id}")
                    }
                };
                out.push_str(&format!("  n{} -> {};\n", ids[key], to));
            }
        }
        for (key, id) in leaves {
            out.push_str(&format!("  leaf{id} [label=\"Forb({key})\", shape=ellipse];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The leaf ideal a key names, if it is one.
pub fn leaf_ideal(key: &IdealKey) -> Option<Ideal> {
    match key.as_str() {
        "0" => Some(Ideal::void()),
        "*" => Some(Ideal::empty_only()),
        _ => None,
    }
}

pub fn rank(desc: &StructuralDescription, key: &IdealKey) -> Result<usize, DescriptionError> {
    desc.rank(key)
}

pub fn validate(desc: &StructuralDescription) -> ValidationReport {
    desc.validate()
}

pub fn serialize(desc: &StructuralDescription) -> String {
    desc.to_json()
}

pub fn deserialize(text: &str) -> Result<StructuralDescription, SchemaError> {
    StructuralDescription::from_json(text)
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad term in {context}: {source}")]
    Term {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("two entries for ideal `{0}`")]
    DuplicateEntry(IdealKey),
    #[error("root `{0}` has no entry")]
    RootMissing(IdealKey),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptionDoc {
    root: String,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    ideal: Vec<String>,
    bits: Vec<BitDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BitDoc {
    shape: BitShape,
    labels: [String; 2],
}

fn label_text(label: &Label) -> String {
    match label {
        Label::SelfRef => "R".to_string(),
        Label::IdealRef(k) => k.to_string(),
    }
}

fn parse_label(text: &str) -> Result<Label, SchemaError> {
    if text == "R" {
        return Ok(Label::SelfRef);
    }
    IdealKey::parse(text)
        .map(Label::IdealRef)
        .map_err(|e| SchemaError::Term {
            context: "label".into(),
            source: e,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forb(terms: &[&str]) -> Ideal {
        Ideal::forbidding(terms.iter().map(|s| parse_term(s).unwrap()))
    }

    fn r(ideal: &Ideal) -> Label {
        Label::IdealRef(ideal.key())
    }

    #[test]
    fn antichain_labels_are_unordered() {
        let a = forb(&["C(*,*)"]);
        assert_eq!(
            Bit::antichain(r(&a), Label::SelfRef),
            Bit::antichain(Label::SelfRef, r(&a))
        );
        assert_ne!(Bit::chain(r(&a), Label::SelfRef), Bit::chain(Label::SelfRef, r(&a)));
    }

    #[test]
    fn rank_examples() {
        let empty = StructuralDescription::new(forb(&["C(*,*)", "A(*,*)"]));
        assert_eq!(empty.rank(empty.root()).unwrap(), 0);

        let mut d = StructuralDescription::new(forb(&["C(*,*)"]));
        d.bits_mut(&forb(&["C(*,*)"]).key()).unwrap().insert(Bit::r_antichain());
        assert_eq!(d.rank(d.root()).unwrap(), 1);

        let outer = forb(&["C(*,*,*)"]);
        let mut d2 = StructuralDescription::new(outer.clone());
        d2.insert(forb(&["C(*,*)"]), BTreeSet::from([Bit::r_antichain()]));
        d2.bits_mut(&outer.key())
            .unwrap()
            .insert(Bit::chain(r(&forb(&["C(*,*)"])), Label::SelfRef));
        assert_eq!(d2.rank(d2.root()).unwrap(), 2);
        assert!(d2.rank(&forb(&["A(*,*)"]).key()).is_err());
    }

    #[test]
    fn self_label_is_a_strict_decrease_violation() {
        let i = forb(&["C(*,*,*)"]);
        let mut d = StructuralDescription::new(i.clone());
        d.bits_mut(&i.key()).unwrap().insert(Bit::chain(r(&i), Label::SelfRef));
        let report = d.validate();
        assert!(report.violations.contains(&Violation::NotStrictlySmaller {
            entry: i.key(),
            label: i.key()
        }));
        assert!(report.violations.contains(&Violation::Cycle { entry: i.key() }));
    }

    #[test]
    fn missing_reference_is_reported() {
        let i = forb(&["C(*,*,*)"]);
        let missing = forb(&["C(*,*)"]);
        let mut d = StructuralDescription::new(i.clone());
        d.bits_mut(&i.key())
            .unwrap()
            .insert(Bit::chain(r(&missing), r(&missing)));
        assert_eq!(
            d.validate().violations,
            vec![Violation::UnresolvedLabel {
                entry: i.key(),
                label: missing.key()
            }]
        );
    }

    #[test]
    fn leaf_labels_resolve() {
        let i = forb(&["C(*,*)"]);
        let mut d = StructuralDescription::new(i.clone());
        d.bits_mut(&i.key())
            .unwrap()
            .insert(Bit::chain(Label::SelfRef, r(&Ideal::empty_only())));
        assert!(d.validate().is_valid());
        assert_eq!(d.rank(d.root()).unwrap(), 1);
    }

    #[test]
    fn empty_description_document() {
        let d = StructuralDescription::new(forb(&["C(*,*)", "A(*,*)"]));
        let json = d.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "root": "C(*,*)|A(*,*)",
                "entries": [{"ideal": ["C(*,*)", "A(*,*)"], "bits": []}]
            })
        );
        assert_eq!(StructuralDescription::from_json(&json).unwrap(), d);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = r#"{"root":"C(*,*)","entries":[{"ideal":["C(*,*)"],"bits":[],"extra":1}]}"#;
        assert!(matches!(
            StructuralDescription::from_json(doc),
            Err(SchemaError::Json(_))
        ));
        let doc = r#"{"root":"C(*,*)","entries":[],"version":2}"#;
        assert!(StructuralDescription::from_json(doc).is_err());
        let doc = r#"{"root":"C(*,*)","entries":[{"ideal":["C(*,*)"],"bits":[{"shape":"chain","labels":["R"]}]}]}"#;
        assert!(StructuralDescription::from_json(doc).is_err());
        let doc = r#"{"root":"C(*,*)","entries":[{"ideal":["C(*,*)"],"bits":[{"shape":"cycle","labels":["R","R"]}]}]}"#;
        assert!(StructuralDescription::from_json(doc).is_err());
        let doc = r#"{"root":"A(*,*)","entries":[{"ideal":["C(*,*)"],"bits":[]}]}"#;
        assert!(matches!(
            StructuralDescription::from_json(doc),
            Err(SchemaError::RootMissing(_))
        ));
    }

    #[test]
    fn dot_has_nodes_and_edges() {
        let outer = forb(&["C(*,*,*)"]);
        let inner = forb(&["C(*,*)"]);
        let mut d = StructuralDescription::new(outer.clone());
        d.insert(inner.clone(), BTreeSet::from([Bit::r_antichain()]));
        d.bits_mut(&outer.key())
            .unwrap()
            .insert(Bit::chain(r(&inner), r(&inner)));
        let dot = d.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 1);
        assert_eq!(dot.matches("[label=").count(), 2);
    }
}
