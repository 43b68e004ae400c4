//! What a description generates.
//!
//! [`generate_upto`] materializes the least bit-closed set containing the
//! empty and one-point posets, restricted to a size bound. Parts of a sum
//! never outgrow the sum, so the bounded closure is exactly the generated
//! ideal cut at that size. [`member_topdown`] decides membership of a single
//! term by splitting it instead.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::{Bit, BitShape, Label, StructuralDescription};
use crate::ideal::{Ideal, IdealKey};
use crate::term::{enumerate_sp, EnumerationError, SpTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("no entry or leaf ideal for key `{0}`")]
    UnresolvedKey(IdealKey),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// How ideal-labeled cells are filled.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum CellSource {
    /// Members of the label ideal, decided from its obstructions.
    #[default]
    Obstructions,
    /// What the label's own entry generates, recursively; leaf labels are
    /// still decided directly.
    Description,
}

/// A bounded closure: every canonical term of the generated ideal with at
/// most `bound` points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratedSet {
    pub bound: usize,
    pub terms: BTreeSet<SpTerm>,
}

impl GeneratedSet {
    pub fn contains(&self, term: &SpTerm) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Bounded closure of entry `key` with ideal labels read from obstructions.
pub fn generate_upto(
    desc: &StructuralDescription,
    key: &IdealKey,
    bound: usize,
) -> Result<GeneratedSet, ClosureError> {
    ClosureEngine::new(desc, bound, CellSource::Obstructions)?.generate(key)
}

/// Fixed-point engine with caches shared across entries of one description.
pub struct ClosureEngine<'d> {
    desc: &'d StructuralDescription,
    bound: usize,
    source: CellSource,
    universe: Vec<SpTerm>,
    ideal_cells: HashMap<IdealKey, Vec<Vec<SpTerm>>>,
    generated: HashMap<IdealKey, Vec<Vec<SpTerm>>>,
}

impl<'d> ClosureEngine<'d> {
    pub fn new(
        desc: &'d StructuralDescription,
        bound: usize,
        source: CellSource,
    ) -> Result<Self, ClosureError> {
        Ok(ClosureEngine {
            desc,
            bound,
            source,
            universe: enumerate_sp(bound)?,
            ideal_cells: HashMap::new(),
            generated: HashMap::new(),
        })
    }

    pub fn generate(&mut self, key: &IdealKey) -> Result<GeneratedSet, ClosureError> {
        let levels = self.levels(key)?;
        Ok(GeneratedSet {
            bound: self.bound,
            terms: levels.into_iter().flatten().collect(),
        })
    }

    /// Generated terms grouped by size.
    fn levels(&mut self, key: &IdealKey) -> Result<Vec<Vec<SpTerm>>, ClosureError> {
        if let Some(done) = self.generated.get(key) {
            return Ok(done.clone());
        }
        let desc = self.desc;
        let entry = desc
            .entry(key)
            .ok_or_else(|| ClosureError::UnresolvedKey(key.clone()))?;
        // resolve every ideal cell before the fixed point starts
        let mut cells: HashMap<IdealKey, Vec<Vec<SpTerm>>> = HashMap::new();
        for bit in &entry.bits {
            for label in bit.ideal_refs() {
                if !cells.contains_key(label) {
                    let cell = self.cell(label)?;
                    cells.insert(label.clone(), cell);
                }
            }
        }
        let bits: Vec<&Bit> = entry.bits.iter().collect();
        let levels = closure_levels(&bits, &cells, self.bound);
        self.generated.insert(key.clone(), levels.clone());
        Ok(levels)
    }

    fn cell(&mut self, label: &IdealKey) -> Result<Vec<Vec<SpTerm>>, ClosureError> {
        let ideal = self
            .desc
            .resolve(label)
            .ok_or_else(|| ClosureError::UnresolvedKey(label.clone()))?;
        if self.source == CellSource::Description && !ideal.is_leaf() && self.desc.contains_key(label) {
            return self.levels(label);
        }
        if let Some(cell) = self.ideal_cells.get(label) {
            return Ok(cell.clone());
        }
        let cell = members_by_size(&ideal, &self.universe, self.bound);
        self.ideal_cells.insert(label.clone(), cell.clone());
        Ok(cell)
    }
}

fn members_by_size(ideal: &Ideal, universe: &[SpTerm], bound: usize) -> Vec<Vec<SpTerm>> {
    let members: Vec<SpTerm> = universe
        .par_iter()
        .filter(|t| ideal.contains(t))
        .cloned()
        .collect();
    let mut levels = vec![Vec::new(); bound + 1];
    for t in members {
        let s = t.size();
        levels[s].push(t);
    }
    levels
}

fn combine(shape: BitShape, lower: &SpTerm, upper: &SpTerm) -> SpTerm {
    match shape {
        BitShape::Chain => SpTerm::chain([lower.clone(), upper.clone()]),
        BitShape::Antichain => SpTerm::antichain([lower.clone(), upper.clone()]),
    }
}

/// Least fixed point, built one size level at a time.
///
/// A term of size `s` arises from parts of sizes `a + b = s`. When both are
/// nonempty they are smaller than `s` and already final. When one is empty
/// the result is the other part: an `R` cell then contributes nothing new
/// and an ideal cell contributes its own size-`s` members. So one pass per
/// level reaches the fixed point.
fn closure_levels(
    bits: &[&Bit],
    cells: &HashMap<IdealKey, Vec<Vec<SpTerm>>>,
    bound: usize,
) -> Vec<Vec<SpTerm>> {
    let mut levels: Vec<Vec<SpTerm>> = vec![vec![SpTerm::Empty]];
    if bound >= 1 {
        levels.push(vec![SpTerm::Point]);
    }
    for s in 2..=bound {
        let known = &levels;
        let found: BTreeSet<SpTerm> = bits
            .par_iter()
            .flat_map_iter(|bit| {
                let mut out = Vec::new();
                let cell = |label: &Label, size: usize| -> Option<&[SpTerm]> {
                    match label {
                        // the level being built adds nothing through an R cell
                        Label::SelfRef if size == s => None,
                        Label::SelfRef => Some(known[size].as_slice()),
                        Label::IdealRef(k) => Some(cells[k][size].as_slice()),
                    }
                };
                let [first, second] = bit.labels();
                for a in 0..=s {
                    let (Some(lows), Some(highs)) = (cell(first, a), cell(second, s - a)) else {
                        continue;
                    };
                    for lo in lows {
                        for hi in highs {
                            out.push(combine(bit.shape(), lo, hi));
                        }
                    }
                }
                out
            })
            .collect();
        levels.push(found.into_iter().collect());
    }
    levels
}

/// Whether applying any bit of `key`'s entry to `set` yields a term within
/// the bound that `set` lacks.
pub fn is_closed(
    desc: &StructuralDescription,
    key: &IdealKey,
    set: &GeneratedSet,
) -> Result<bool, ClosureError> {
    let entry = desc
        .entry(key)
        .ok_or_else(|| ClosureError::UnresolvedKey(key.clone()))?;
    let universe = enumerate_sp(set.bound)?;
    let mut cells: HashMap<IdealKey, Vec<SpTerm>> = HashMap::new();
    for bit in &entry.bits {
        for label in bit.ideal_refs() {
            let ideal = desc
                .resolve(label)
                .ok_or_else(|| ClosureError::UnresolvedKey(label.clone()))?;
            cells
                .entry(label.clone())
                .or_insert_with(|| universe.iter().filter(|t| ideal.contains(t)).cloned().collect());
        }
    }
    let current: Vec<SpTerm> = set.terms.iter().cloned().collect();
    let fill = |label: &Label| -> &[SpTerm] {
        match label {
            Label::SelfRef => &current,
            Label::IdealRef(k) => &cells[k],
        }
    };
    for bit in &entry.bits {
        let [first, second] = bit.labels();
        for lo in fill(first) {
            for hi in fill(second) {
                if lo.size() + hi.size() > set.bound {
                    continue;
                }
                if !set.contains(&combine(bit.shape(), lo, hi)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(set.contains(&SpTerm::Empty) && (set.bound == 0 || set.contains(&SpTerm::Point)))
}

/// Whether `term` is generated by entry `key`, decided by splitting `term`
/// against each bit. `R` cells recurse on strictly smaller pieces; ideal
/// cells are decided by obstruction membership.
pub fn member_topdown(
    desc: &StructuralDescription,
    key: &IdealKey,
    term: &SpTerm,
) -> Result<bool, ClosureError> {
    let entry = desc
        .entry(key)
        .ok_or_else(|| ClosureError::UnresolvedKey(key.clone()))?;
    let mut labels: HashMap<IdealKey, Ideal> = HashMap::new();
    for bit in &entry.bits {
        for label in bit.ideal_refs() {
            let ideal = desc
                .resolve(label)
                .ok_or_else(|| ClosureError::UnresolvedKey(label.clone()))?;
            labels.insert(label.clone(), ideal);
        }
    }
    let mut decider = TopDown {
        bits: entry.bits.iter().collect(),
        labels,
        memo: HashMap::new(),
    };
    Ok(decider.accepts(term))
}

struct TopDown<'a> {
    bits: Vec<&'a Bit>,
    labels: HashMap<IdealKey, Ideal>,
    memo: HashMap<SpTerm, bool>,
}

impl TopDown<'_> {
    fn accepts(&mut self, term: &SpTerm) -> bool {
        if matches!(term, SpTerm::Empty | SpTerm::Point) {
            return true;
        }
        if let Some(&known) = self.memo.get(term) {
            return known;
        }
        let bits = self.bits.clone();
        let result = bits.iter().any(|bit| self.bit_accepts(bit, term));
        self.memo.insert(term.clone(), result);
        result
    }

    fn bit_accepts(&mut self, bit: &Bit, term: &SpTerm) -> bool {
        let [first, second] = bit.labels();
        match bit.shape() {
            BitShape::Chain => {
                let parts = term.finest_chain_rep();
                (0..=parts.len()).any(|i| {
                    let lower = SpTerm::chain(parts[..i].iter().cloned());
                    let upper = SpTerm::chain(parts[i..].iter().cloned());
                    self.cell_accepts(first, &lower, term) && self.cell_accepts(second, &upper, term)
                })
            }
            BitShape::Antichain => {
                let parts = term.finest_antichain_rep();
                let n = parts.len();
                let mut seen = HashSet::new();
                (0u64..(1u64 << n)).any(|mask| {
                    let pick = |inside: bool| {
                        SpTerm::antichain(
                            (0..n)
                                .filter(|&i| (mask & (1 << i) != 0) == inside)
                                .map(|i| parts[i].clone()),
                        )
                    };
                    let left = pick(true);
                    let right = pick(false);
                    if !seen.insert((left.clone(), right.clone())) {
                        return false;
                    }
                    self.cell_accepts(first, &left, term) && self.cell_accepts(second, &right, term)
                })
            }
        }
    }

    fn cell_accepts(&mut self, label: &Label, piece: &SpTerm, whole: &SpTerm) -> bool {
        match label {
            // `whole` from `whole` and the empty poset is circular
            Label::SelfRef if piece == whole => false,
            Label::SelfRef => self.accepts(piece),
            Label::IdealRef(k) => self.labels[k].contains(piece),
        }
    }
}
