//! Synthesis of structural descriptions from forbidden suborders.
//!
//! Given `Forb(F)`, the obstructions are split into chain sums and antichain
//! sums and one of three rule sets is emitted:
//!
//! * only chain sums: the chain bit set of the tuple plus `R_A`;
//! * only antichain sums: the antichain bit set over the index family built
//!   from their components, plus `R_C`;
//! * both: the union of the two bit sets with every ideal label intersected
//!   with the target ideal, and no all-`R` bit.
//!
//! Every ideal label is strictly smaller than the ideal being described, so
//! recursing on labels terminates. Labels equal to the target become `R`,
//! and bits carrying a void or empty-only label are dropped.

mod chain;
mod gamma;

pub use chain::{chain_bit_set_multi, chain_bit_set_single};
pub use gamma::{
    antichain_bit_set, antichain_bit_set_exhaustive, build_gamma, left_cell_label,
    right_cell_label, Abcf, Gamma,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::{Bit, BitShape, Label, StructuralDescription};
use crate::ideal::{Ideal, IdealClass, IdealKey};
use crate::term::SpTerm;

/// A label before registration: `R` or an explicit ideal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RawLabel {
    SelfRef,
    Ideal(Ideal),
}

impl RawLabel {
    fn to_label(&self) -> Label {
        match self {
            RawLabel::SelfRef => Label::SelfRef,
            RawLabel::Ideal(i) => Label::IdealRef(i.key()),
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, RawLabel::Ideal(i) if i.is_leaf())
    }
}

/// A two-point bit whose ideal labels are held by value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RawBit {
    shape: BitShape,
    labels: [RawLabel; 2],
}

impl RawBit {
    pub fn new(shape: BitShape, first: RawLabel, second: RawLabel) -> RawBit {
        match shape {
            BitShape::Chain => RawBit::chain(first, second),
            BitShape::Antichain => RawBit::antichain(first, second),
        }
    }

    pub fn chain(bottom: RawLabel, top: RawLabel) -> RawBit {
        RawBit {
            shape: BitShape::Chain,
            labels: [bottom, top],
        }
    }

    pub fn antichain(a: RawLabel, b: RawLabel) -> RawBit {
        let labels = if a <= b { [a, b] } else { [b, a] };
        RawBit {
            shape: BitShape::Antichain,
            labels,
        }
    }

    pub fn r_chain() -> RawBit {
        RawBit::chain(RawLabel::SelfRef, RawLabel::SelfRef)
    }

    pub fn r_antichain() -> RawBit {
        RawBit::antichain(RawLabel::SelfRef, RawLabel::SelfRef)
    }

    pub fn shape(&self) -> BitShape {
        self.shape
    }

    pub fn labels(&self) -> &[RawLabel; 2] {
        &self.labels
    }

    pub fn to_bit(&self) -> Bit {
        Bit::new(self.shape, self.labels[0].to_label(), self.labels[1].to_label())
    }
}

/// Drops bits that cannot contribute anything.
///
/// A void label makes its cell unfillable. An empty-only label admits only
/// the empty poset, so that point can be deleted; what remains is a single
/// point, which re-adds members of its own label. Those members already lie
/// in the generated ideal, because the empty poset fills the other cell.
pub fn normalize_bit(bit: RawBit) -> Option<RawBit> {
    if bit.labels.iter().any(RawLabel::is_leaf) {
        None
    } else {
        Some(bit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("void ideal: the empty poset is forbidden")]
    VoidIdeal,
    #[error("trivial ideal: the one-point poset is forbidden")]
    TrivialIdeal,
    #[error("improper ideal: nothing is forbidden")]
    ImproperIdeal,
    #[error("expected a chain sum, got {0}")]
    NotChainSum(SpTerm),
    #[error("expected an antichain sum, got {0}")]
    NotAntichainSum(SpTerm),
    #[error("component {0} is an antichain sum")]
    ComponentIsAntichainSum(SpTerm),
    #[error("index block {block:?} is out of range or empty")]
    BadBlock { block: Vec<usize> },
    #[error("an antichain sum with {size} components exceeds the block cap of {cap}")]
    BlockTooLarge { size: usize, cap: usize },
    #[error("{count} antichain bit choice functions exceed the exhaustive limit")]
    TooManyAbcfs { count: u128 },
    #[error("label `{label}` is not strictly contained in `{parent}`")]
    StrictDecrease { parent: IdealKey, label: IdealKey },
}

/// Tuning for [`synthesize_with`].
#[derive(Clone, Debug)]
pub struct SynthConfig {
    /// Largest number of components allowed in one forbidden antichain sum.
    /// Each such block has `2^(2^size)` splitting functions.
    pub max_block: usize,
    /// Drop bits whose labels are pointwise contained in another bit's.
    pub prune_dominated: bool,
    /// Intersect mixed-case labels with the target ideal. Turning this off
    /// reproduces the unsound literal rule set and disables the strict
    /// decrease check; it exists for regression tests only.
    #[doc(hidden)]
    pub intersect_mixed_labels: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_block: 4,
            prune_dominated: false,
            intersect_mixed_labels: true,
        }
    }
}

/// Hard limit of the splitting-function bitmask representation.
pub const MAX_BLOCK_LIMIT: usize = 6;

/// Turns raw bits into final ones for `target`: optionally intersects ideal
/// labels with the target, relabels labels equal to the target as `R`, and
/// normalizes.
fn finish<I>(raw: I, target: &Ideal, clamp: bool) -> BTreeSet<RawBit>
where
    I: IntoIterator<Item = RawBit>,
{
    let fix = |label: &RawLabel| -> RawLabel {
        match label {
            RawLabel::SelfRef => RawLabel::SelfRef,
            RawLabel::Ideal(i) => {
                let i = if clamp { i.intersect(target) } else { i.clone() };
                if &i == target {
                    RawLabel::SelfRef
                } else {
                    RawLabel::Ideal(i)
                }
            }
        }
    };
    raw.into_iter()
        .filter_map(|b| normalize_bit(RawBit::new(b.shape, fix(&b.labels[0]), fix(&b.labels[1]))))
        .collect()
}

/// Bits for a mixture of forbidden chain sums and antichain sums, with labels
/// intersected with `Forb(chains ∪ antichains)`.
pub fn mixed_bit_set(chains: &[SpTerm], antichains: &[SpTerm]) -> Result<BTreeSet<RawBit>, SynthError> {
    mixed_bit_set_with(chains, antichains, &SynthConfig::default())
}

pub fn mixed_bit_set_with(
    chains: &[SpTerm],
    antichains: &[SpTerm],
    config: &SynthConfig,
) -> Result<BTreeSet<RawBit>, SynthError> {
    if chains.is_empty() {
        return Err(SynthError::NotChainSum(SpTerm::Empty));
    }
    if antichains.is_empty() {
        return Err(SynthError::NotAntichainSum(SpTerm::Empty));
    }
    let target = Ideal::forbidding(chains.iter().chain(antichains).cloned());
    let chain_part = chain::multi_chain_raw(chains)?;
    let gamma = build_gamma(antichains)?;
    gamma.check_block_cap(config.max_block)?;
    let antichain_part = gamma::antichain_raw(&gamma)?;
    Ok(finish(
        chain_part.into_iter().chain(antichain_part),
        &target,
        config.intersect_mixed_labels,
    ))
}

/// The rule set for one nontrivial proper ideal.
pub fn bits_for_ideal(ideal: &Ideal, config: &SynthConfig) -> Result<BTreeSet<RawBit>, SynthError> {
    check_class(ideal)?;
    let (chains, antichains): (Vec<SpTerm>, Vec<SpTerm>) = ideal
        .obstructions()
        .iter()
        .cloned()
        .partition(SpTerm::is_chain_sum);
    let mut bits = match (chains.is_empty(), antichains.is_empty()) {
        (false, true) => {
            let mut bits = chain_bit_set_multi(&chains)?;
            bits.insert(RawBit::r_antichain());
            bits
        }
        (true, false) => {
            let gamma = build_gamma(&antichains)?;
            gamma.check_block_cap(config.max_block)?;
            let mut bits = antichain_bit_set(&gamma)?;
            bits.insert(RawBit::r_chain());
            bits
        }
        (false, false) => mixed_bit_set_with(&chains, &antichains, config)?,
        (true, true) => unreachable!("class check rejects the improper ideal"),
    };
    if config.prune_dominated && config.intersect_mixed_labels {
        bits = prune_dominated(bits);
    }
    Ok(bits)
}

fn check_class(ideal: &Ideal) -> Result<(), SynthError> {
    match ideal.class() {
        IdealClass::Void => Err(SynthError::VoidIdeal),
        IdealClass::EmptyOnly => Err(SynthError::TrivialIdeal),
        IdealClass::Improper => Err(SynthError::ImproperIdeal),
        IdealClass::NontrivialProper => Ok(()),
    }
}

/// `a` admits everything `b` admits. Ideal labels of a synthesized entry are
/// subsets of the target, so `R` covers every label.
fn label_covers(a: &RawLabel, b: &RawLabel) -> bool {
    match (a, b) {
        (RawLabel::SelfRef, _) => true,
        (RawLabel::Ideal(_), RawLabel::SelfRef) => false,
        (RawLabel::Ideal(x), RawLabel::Ideal(y)) => x.contains_ideal(y),
    }
}

fn dominates(a: &RawBit, b: &RawBit) -> bool {
    if a.shape != b.shape {
        return false;
    }
    let [a0, a1] = &a.labels;
    let [b0, b1] = &b.labels;
    let straight = label_covers(a0, b0) && label_covers(a1, b1);
    match a.shape {
        BitShape::Chain => straight,
        BitShape::Antichain => straight || (label_covers(a0, b1) && label_covers(a1, b0)),
    }
}

/// Removes every bit dominated by a different bit of the set.
pub fn prune_dominated(bits: BTreeSet<RawBit>) -> BTreeSet<RawBit> {
    bits.iter()
        .filter(|b| !bits.iter().any(|other| other != *b && dominates(other, b)))
        .cloned()
        .collect()
}

/// Structural description for `Forb(F)` with default settings.
pub fn synthesize(forbidden: &[SpTerm]) -> Result<StructuralDescription, SynthError> {
    synthesize_with(forbidden, &SynthConfig::default())
}

pub fn synthesize_with(
    forbidden: &[SpTerm],
    config: &SynthConfig,
) -> Result<StructuralDescription, SynthError> {
    let root = Ideal::forbidding(forbidden.iter().cloned());
    check_class(&root)?;
    if config.max_block > MAX_BLOCK_LIMIT {
        return Err(SynthError::BlockTooLarge {
            size: config.max_block,
            cap: MAX_BLOCK_LIMIT,
        });
    }
    let mut table = StructuralDescription::new(root.clone());
    let mut pending = vec![root];
    while let Some(ideal) = pending.pop() {
        let raw = bits_for_ideal(&ideal, config)?;
        let mut bits = BTreeSet::new();
        for bit in &raw {
            for label in bit.labels() {
                let RawLabel::Ideal(child) = label else {
                    continue;
                };
                if !ideal.strictly_contains(child) && config.intersect_mixed_labels {
                    return Err(SynthError::StrictDecrease {
                        parent: ideal.key(),
                        label: child.key(),
                    });
                }
                let key = child.key();
                if child.is_nontrivial_proper()
                    && !table.contains_key(&key)
                    && !pending.contains(child)
                {
                    pending.push(child.clone());
                }
            }
            bits.insert(bit.to_bit());
        }
        table.insert(ideal, bits);
    }
    Ok(table)
}
