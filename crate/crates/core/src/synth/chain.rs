//! Chain bit sets for forbidden chain sums.

use std::collections::BTreeSet;

use super::{finish, RawBit, RawLabel, SynthError};
use crate::ideal::Ideal;
use crate::term::SpTerm;

/// Unnormalized chain bits of one chain sum `P1 < ... < Pn`, with `R`
/// standing for `Forb(P)`:
///
/// * `R < Forb(Pn)`
/// * `Forb(P1) < R`
/// * `Forb(P1 < ... < Pi) < Forb(Pi < ... < Pn)` for each `1 < i < n`
pub(super) fn single_chain_raw(p: &SpTerm) -> Result<Vec<RawBit>, SynthError> {
    let SpTerm::Chain(parts) = p else {
        return Err(SynthError::NotChainSum(p.clone()));
    };
    let n = parts.len();
    let forb = |slice: &[SpTerm]| RawLabel::Ideal(Ideal::forbidding([SpTerm::chain(slice.iter().cloned())]));
    let mut bits = vec![
        RawBit::chain(RawLabel::SelfRef, forb(&parts[n - 1..])),
        RawBit::chain(forb(&parts[..1]), RawLabel::SelfRef),
    ];
    for i in 1..n - 1 {
        // the middle part is shared by both sides
        bits.push(RawBit::chain(forb(&parts[..=i]), forb(&parts[i..])));
    }
    Ok(bits)
}

/// The chain bit set of a single chain sum, normalized.
pub fn chain_bit_set_single(p: &SpTerm) -> Result<BTreeSet<RawBit>, SynthError> {
    let raw = single_chain_raw(p)?;
    Ok(finish(raw, &Ideal::forbidding([p.clone()]), true))
}

/// Unnormalized chain bits for a tuple of chain sums: one bit per choice
/// function, bottom and top labels intersected across the chosen bits, with
/// `R` read as `Forb(P1, ..., Pk)` and a result equal to it written back as
/// `R`.
pub(super) fn multi_chain_raw(ps: &[SpTerm]) -> Result<Vec<RawBit>, SynthError> {
    if ps.is_empty() {
        return Err(SynthError::NotChainSum(SpTerm::Empty));
    }
    let own = Ideal::forbidding(ps.iter().cloned());
    let resolve = |label: &RawLabel| match label {
        RawLabel::SelfRef => own.clone(),
        RawLabel::Ideal(i) => i.clone(),
    };
    // Choice functions are folded one chain sum at a time; intersection is
    // associative, so deduplicating partial (bottom, top) pairs is exact.
    let mut partial: BTreeSet<(Ideal, Ideal)> = BTreeSet::from([(Ideal::improper(), Ideal::improper())]);
    for p in ps {
        let choices = single_chain_raw(p)?;
        let mut next = BTreeSet::new();
        for (bottom, top) in &partial {
            for bit in &choices {
                let [b, t] = bit.labels();
                next.insert((bottom.intersect(&resolve(b)), top.intersect(&resolve(t))));
            }
        }
        partial = next;
    }
    let relabel = |i: Ideal| {
        if i == own {
            RawLabel::SelfRef
        } else {
            RawLabel::Ideal(i)
        }
    };
    Ok(partial
        .into_iter()
        .map(|(bottom, top)| RawBit::chain(relabel(bottom), relabel(top)))
        .collect())
}

/// The chain bit set of a tuple of chain sums, normalized. For a single
/// chain sum this is [`chain_bit_set_single`].
pub fn chain_bit_set_multi(ps: &[SpTerm]) -> Result<BTreeSet<RawBit>, SynthError> {
    let raw = multi_chain_raw(ps)?;
    Ok(finish(raw, &Ideal::forbidding(ps.iter().cloned()), true))
}
