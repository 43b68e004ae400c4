//! Antichain bit sets for forbidden antichain sums.
//!
//! The forbidden antichain sums are flattened into one positional list of
//! components `P1, ..., Pk`; each forbidden sum becomes a block of positions,
//! and `Forb(Γ; P1..Pk)` is the intersection over blocks `F` of
//! `Forb(⊕_{i∈F} Pi)`. A splitting of `F` is an ordered pair `(A, F−A)`; an
//! antichain bit choice function (ABCF) sends every splitting of every block
//! to the left cell (1) or the right cell (2). Its left cell label forbids
//! `⊕A` for each splitting sent left, its right cell label forbids `⊕(F−A)`
//! for each splitting sent right, and both also forbid the blocks.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{finish, RawBit, RawLabel, SynthError, MAX_BLOCK_LIMIT};
use crate::ideal::Ideal;
use crate::term::SpTerm;

/// Components and index blocks of a set of forbidden antichain sums.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gamma {
    components: Vec<SpTerm>,
    blocks: Vec<Vec<usize>>,
}

impl Gamma {
    /// Checks that no component is an antichain sum and that every block is
    /// a nonempty set of valid positions.
    pub fn new(components: Vec<SpTerm>, blocks: Vec<Vec<usize>>) -> Result<Gamma, SynthError> {
        if let Some(bad) = components.iter().find(|c| c.is_antichain_sum() || c.is_empty()) {
            return Err(SynthError::ComponentIsAntichainSum(bad.clone()));
        }
        for block in &blocks {
            let distinct: BTreeSet<_> = block.iter().collect();
            if block.is_empty()
                || distinct.len() != block.len()
                || block.iter().any(|&i| i >= components.len())
            {
                return Err(SynthError::BadBlock {
                    block: block.clone(),
                });
            }
        }
        Ok(Gamma { components, blocks })
    }

    pub fn components(&self) -> &[SpTerm] {
        &self.components
    }

    /// Zero-based positions of each block.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(super) fn check_block_cap(&self, cap: usize) -> Result<(), SynthError> {
        let cap = cap.min(MAX_BLOCK_LIMIT);
        match self.max_block() {
            size if size > cap => Err(SynthError::BlockTooLarge { size, cap }),
            _ => Ok(()),
        }
    }

    /// `⊕_{i ∈ A} Pi` for the members `A` of block `b` selected by `mask`
    /// (bit `j` selects the `j`-th position of the block).
    pub fn block_sum(&self, b: usize, mask: u64) -> SpTerm {
        SpTerm::antichain(
            self.blocks[b]
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, &i)| self.components[i].clone()),
        )
    }

    /// `Forb(Γ; P1..Pk)`.
    pub fn forb_gamma(&self) -> Ideal {
        Ideal::forbidding((0..self.blocks.len()).map(|b| self.block_sum(b, self.full_mask(b))))
    }

    fn full_mask(&self, b: usize) -> u64 {
        (1u64 << self.blocks[b].len()) - 1
    }
}

/// Flattens antichain sums into positional components; each sum becomes the
/// block of its own positions. Equal components in different sums keep
/// separate positions.
pub fn build_gamma(sums: &[SpTerm]) -> Result<Gamma, SynthError> {
    let mut components = Vec::new();
    let mut blocks = Vec::new();
    for sum in sums {
        let SpTerm::Antichain(parts) = sum else {
            return Err(SynthError::NotAntichainSum(sum.clone()));
        };
        let start = components.len();
        components.extend(parts.iter().cloned());
        blocks.push((start..components.len()).collect());
    }
    Gamma::new(components, blocks)
}

/// One splitting function per block. For block `b`, bit `A` of `self.0[b]`
/// is set when the splitting `(A, F−A)` goes to the right cell; `A` is a
/// subset mask over the block's positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Abcf(pub Vec<u64>);

impl Abcf {
    fn sends_right(&self, b: usize, a: u64) -> bool {
        self.0[b] & (1u64 << a) != 0
    }
}

/// `Forb(Γ) ∩ ⋂ { Forb(⊕A) : g_F(A, F−A) = 1 }`.
pub fn left_cell_label(gamma: &Gamma, g: &Abcf) -> Ideal {
    cell_label(gamma, g, false)
}

/// `Forb(Γ) ∩ ⋂ { Forb(⊕(F−A)) : g_F(A, F−A) = 2 }`.
pub fn right_cell_label(gamma: &Gamma, g: &Abcf) -> Ideal {
    cell_label(gamma, g, true)
}

fn cell_label(gamma: &Gamma, g: &Abcf, right: bool) -> Ideal {
    let mut forbidden: Vec<SpTerm> = gamma.forb_gamma().obstructions().to_vec();
    for b in 0..gamma.blocks.len() {
        let full = gamma.full_mask(b);
        for a in 0..=full {
            if g.sends_right(b, a) == right {
                let side = if right { full & !a } else { a };
                forbidden.push(gamma.block_sum(b, side));
            }
        }
    }
    Ideal::forbidding(forbidden)
}

/// Unnormalized antichain bits, one per distinct `(lcl, rcl)` pair, with
/// labels equal to `Forb(Γ)` written as `R`.
///
/// Rather than listing all ABCFs, each block's choices are folded one
/// splitting at a time into a set of partial `(left, right)` ideals.
/// Choices that would put `Forb(0)` or `Forb(*)` into a cell are skipped:
/// the label would be void or empty-only whatever else is chosen, and the
/// bit would be normalized away.
pub(super) fn antichain_raw(gamma: &Gamma) -> Result<Vec<RawBit>, SynthError> {
    let own = gamma.forb_gamma();
    let mut total: BTreeSet<(Ideal, Ideal)> = BTreeSet::from([(own.clone(), own.clone())]);
    for b in 0..gamma.blocks.len() {
        let full = gamma.full_mask(b);
        let mut states: BTreeSet<(Ideal, Ideal)> = BTreeSet::from([(own.clone(), own.clone())]);
        for a in 0..=full {
            let left_term = gamma.block_sum(b, a);
            let right_term = gamma.block_sum(b, full & !a);
            let mut next = BTreeSet::new();
            for (left, right) in &states {
                if left_term.size() >= 2 {
                    next.insert((left.intersect(&Ideal::forbidding([left_term.clone()])), right.clone()));
                }
                if right_term.size() >= 2 {
                    next.insert((left.clone(), right.intersect(&Ideal::forbidding([right_term.clone()]))));
                }
            }
            states = next;
            if states.is_empty() {
                return Ok(Vec::new());
            }
        }
        total = total
            .iter()
            .cartesian_product(states.iter())
            .map(|((l0, r0), (l1, r1))| (l0.intersect(l1), r0.intersect(r1)))
            .collect();
    }
    let relabel = |i: Ideal| {
        if i == own {
            RawLabel::SelfRef
        } else {
            RawLabel::Ideal(i)
        }
    };
    Ok(total
        .into_iter()
        .map(|(l, r)| RawBit::antichain(relabel(l), relabel(r)))
        .collect())
}

/// The antichain bit set over `gamma`, normalized.
pub fn antichain_bit_set(gamma: &Gamma) -> Result<BTreeSet<RawBit>, SynthError> {
    let raw = antichain_raw(gamma)?;
    Ok(finish(raw, &gamma.forb_gamma(), true))
}

/// Limit on the number of ABCFs [`antichain_bit_set_exhaustive`] will visit.
pub const EXHAUSTIVE_ABCF_LIMIT: u128 = 1 << 22;

/// The antichain bit set computed by visiting every ABCF and evaluating
/// [`left_cell_label`] and [`right_cell_label`] directly. Exponentially
/// slower than [`antichain_bit_set`]; kept as a cross-check.
pub fn antichain_bit_set_exhaustive(gamma: &Gamma) -> Result<BTreeSet<RawBit>, SynthError> {
    let per_block: Vec<u128> = gamma
        .blocks
        .iter()
        .map(|blk| 1u128 << (1u32 << blk.len()).min(127))
        .collect();
    let count = per_block.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n));
    match count {
        Some(c) if c <= EXHAUSTIVE_ABCF_LIMIT => {}
        Some(c) => return Err(SynthError::TooManyAbcfs { count: c }),
        None => return Err(SynthError::TooManyAbcfs { count: u128::MAX }),
    }
    let own = gamma.forb_gamma();
    let raw = per_block
        .iter()
        .map(|&n| 0..n as u64)
        .multi_cartesian_product()
        .map(|functions| {
            let g = Abcf(functions);
            RawBit::antichain(
                RawLabel::Ideal(left_cell_label(gamma, &g)),
                RawLabel::Ideal(right_cell_label(gamma, &g)),
            )
        });
    Ok(finish(raw, &own, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn t(s: &str) -> SpTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn positional_components() {
        let p1 = t("C(*,*)");
        let p2 = t("C(*,*,*)");
        let p3 = t("C(A(*,*),*)");
        let sums = [
            SpTerm::antichain([p1.clone(), p2.clone()]),
            SpTerm::antichain([p2.clone(), p3.clone()]),
        ];
        let g = build_gamma(&sums).unwrap();
        assert_eq!(g.components(), &[p1, p2.clone(), p2, p3]);
        assert_eq!(g.blocks(), &[vec![0, 1], vec![2, 3]]);

        let g = build_gamma(&[t("A(*,*)")]).unwrap();
        assert_eq!(g.components(), &[SpTerm::Point, SpTerm::Point]);
        assert_eq!(g.blocks(), &[vec![0, 1]]);

        let g = build_gamma(&[t("A(*,*,*)")]).unwrap();
        assert_eq!(g.blocks(), &[vec![0, 1, 2]]);

        assert!(matches!(
            build_gamma(&[t("C(*,*)")]),
            Err(SynthError::NotAntichainSum(_))
        ));
    }

    #[test]
    fn gamma_rejects_antichain_components() {
        assert!(matches!(
            Gamma::new(vec![t("A(*,*)"), SpTerm::Point], vec![vec![0, 1]]),
            Err(SynthError::ComponentIsAntichainSum(_))
        ));
        assert!(Gamma::new(vec![SpTerm::Point], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn two_point_cell_labels() {
        let g = build_gamma(&[t("A(*,*)")]).unwrap();
        // splittings by mask: 0b00 = (∅,F), 0b01 = ({1},{2}), 0b10 = ({2},{1}), 0b11 = (F,∅)
        // g(∅,F)=2, g({1},{2})=1, g({2},{1})=2, g(F,∅)=1
        let abcf = Abcf(vec![0b0101]);
        assert_eq!(left_cell_label(&g, &abcf), Ideal::empty_only());
        assert_eq!(right_cell_label(&g, &abcf), Ideal::empty_only());
        // g(∅,F)=1 puts Forb(0) into the left cell
        let abcf = Abcf(vec![0b0100]);
        assert_eq!(left_cell_label(&g, &abcf), Ideal::void());
        assert!(antichain_bit_set(&g).unwrap().is_empty());
        assert!(antichain_bit_set_exhaustive(&g).unwrap().is_empty());
    }

    #[test]
    fn folded_enumeration_matches_exhaustive() {
        let cases: Vec<Vec<SpTerm>> = vec![
            vec![t("A(*,*,*)")],
            vec![t("A(*,C(*,*))")],
            vec![t("A(C(*,*),C(*,*))")],
            vec![t("A(*,*,*)"), t("A(*,C(*,*))")],
            vec![t("A(*,*)"), t("A(C(*,*),C(*,*))")],
            vec![t("A(*,C(*,*),C(*,A(*,*)))")],
            vec![t("A(*,*,*,*)")],
        ];
        for sums in cases {
            let g = build_gamma(&sums).unwrap();
            assert_eq!(
                antichain_bit_set(&g).unwrap(),
                antichain_bit_set_exhaustive(&g).unwrap(),
                "{sums:?}"
            );
        }
    }

    #[test]
    fn exhaustive_guard() {
        let g = build_gamma(&[SpTerm::antichain_of_points(5)]).unwrap();
        assert!(matches!(
            antichain_bit_set_exhaustive(&g),
            Err(SynthError::TooManyAbcfs { .. })
        ));
    }
}
