//! Checks that share no code with the structural side: embeddings are
//! searched on explicit relations, never on term structure.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::StructuralDescription;
use crate::closure::{generate_upto, ClosureError};
use crate::relation::{to_relation, PosetRelation};
use crate::term::{enumerate_sp, EnumerationError, SpTerm};

/// Largest term size the brute-force searches accept.
pub const ORACLE_MAX_SIZE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size {size} exceeds the oracle limit of {ORACLE_MAX_SIZE}")]
    TooLarge { size: usize },
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

fn guard(size: usize) -> Result<(), OracleError> {
    if size > ORACLE_MAX_SIZE {
        Err(OracleError::TooLarge { size })
    } else {
        Ok(())
    }
}

/// Whether `p` is isomorphic to a restriction of `q`, by exhaustive search
/// over injections.
pub fn brute_embed(p: &SpTerm, q: &SpTerm) -> Result<bool, OracleError> {
    guard(p.size())?;
    guard(q.size())?;
    Ok(embeds(&to_relation(p), &to_relation(q)))
}

/// Injection search on explicit relations.
pub fn embeds(p: &PosetRelation, q: &PosetRelation) -> bool {
    let (n, m) = (p.point_count(), q.point_count());
    if n > m {
        return false;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; m];
    extend(p, q, 0, &mut image, &mut used)
}

fn extend(p: &PosetRelation, q: &PosetRelation, i: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if i == image.len() {
        return true;
    }
    for y in 0..q.point_count() {
        if used[y] {
            continue;
        }
        let consistent = (0..i).all(|j| {
            let x = image[j];
            p.leq(j, i) == q.leq(x, y) && p.leq(i, j) == q.leq(y, x)
        });
        if !consistent {
            continue;
        }
        image[i] = y;
        used[y] = true;
        if extend(p, q, i + 1, image, used) {
            return true;
        }
        used[y] = false;
    }
    false
}

/// Every canonical term with at most `n` points avoiding all of `forbidden`.
pub fn forb_upto(forbidden: &[SpTerm], n: usize) -> Result<BTreeSet<SpTerm>, OracleError> {
    guard(n)?;
    for f in forbidden {
        guard(f.size())?;
    }
    let forbidden: Vec<PosetRelation> = forbidden.iter().map(|f| to_relation(&f.canonicalize())).collect();
    Ok(enumerate_sp(n)?
        .into_par_iter()
        .filter(|t| {
            let rel = to_relation(t);
            forbidden.iter().all(|f| !embeds(f, &rel))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// Outcome of comparing a description's bounded closure with the directly
/// enumerated ideal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EquivalenceReport {
    pub bound: usize,
    /// In the ideal but not generated.
    #[serde(serialize_with = "as_strings")]
    pub missing: BTreeSet<SpTerm>,
    /// Generated but not in the ideal.
    #[serde(serialize_with = "as_strings")]
    pub extra: BTreeSet<SpTerm>,
    pub expected_count: usize,
    pub generated_count: usize,
}

fn as_strings<S: serde::Serializer>(terms: &BTreeSet<SpTerm>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(terms.iter().map(|t| t.to_string()))
}

impl EquivalenceReport {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    /// All witnesses, smallest first.
    pub fn witnesses(&self) -> impl Iterator<Item = &SpTerm> {
        let mut all: Vec<&SpTerm> = self.missing.iter().chain(&self.extra).collect();
        all.sort();
        all.into_iter()
    }

    pub fn summary(&self) -> String {
        if self.is_equal() {
            format!(
                "equal up to size {}: {} terms",
                self.bound, self.expected_count
            )
        } else {
            format!(
                "MISMATCH up to size {}: {} expected, {} generated, {} missing, {} extra",
                self.bound,
                self.expected_count,
                self.generated_count,
                self.missing.len(),
                self.extra.len()
            )
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compares what `desc` generates from its root with `Forb(forbidden)`, both
/// cut at `n` points.
pub fn verify_equivalence(
    forbidden: &[SpTerm],
    desc: &StructuralDescription,
    n: usize,
) -> Result<EquivalenceReport, OracleError> {
    let expected = forb_upto(forbidden, n)?;
    let generated = generate_upto(desc, desc.root(), n)?.terms;
    Ok(EquivalenceReport {
        bound: n,
        missing: expected.difference(&generated).cloned().collect(),
        extra: generated.difference(&expected).cloned().collect(),
        expected_count: expected.len(),
        generated_count: generated.len(),
    })
}

/// Whether each component of `p` is a chain sum of a forest on top of an
/// upside-down forest, either side possibly empty.
pub fn diamond_free_shape(p: &SpTerm) -> bool {
    p.finest_antichain_rep().iter().all(|component| {
        let levels = component.finest_chain_rep();
        (0..=levels.len()).any(|i| {
            let lower = to_relation(&SpTerm::chain(levels[..i].iter().cloned()));
            let upper = to_relation(&SpTerm::chain(levels[i..].iter().cloned()));
            lower.is_upside_down_forest() && upper.is_forest()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bit;
    use crate::synth::synthesize;
    use crate::term::parse_term;

    fn t(s: &str) -> SpTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn embedding_examples() {
        assert!(brute_embed(&SpTerm::Point, &t("C(*,*)")).unwrap());
        assert!(!brute_embed(&t("A(*,*)"), &t("C(*,*,*)")).unwrap());
        assert!(brute_embed(&t("C(*,A(*,*))"), &SpTerm::diamond()).unwrap());
        assert!(brute_embed(&SpTerm::Empty, &SpTerm::Empty).unwrap());
        assert!(!brute_embed(&SpTerm::Point, &SpTerm::Empty).unwrap());
        assert!(matches!(
            brute_embed(&SpTerm::chain_of_points(10), &SpTerm::Point),
            Err(OracleError::TooLarge { size: 10 })
        ));
    }

    #[test]
    fn forb_examples() {
        let two = forb_upto(&[t("C(*,*)")], 2).unwrap();
        assert_eq!(two, [t("0"), t("*"), t("A(*,*)")].into_iter().collect());
        assert_eq!(forb_upto(&[SpTerm::Point], 3).unwrap(), [SpTerm::Empty].into_iter().collect());
        assert_eq!(forb_upto(&[t("C(*,*,*)")], 3).unwrap().len(), 8);
        assert!(forb_upto(&[], 10).is_err());
    }

    #[test]
    fn small_equivalences() {
        for f in ["C(*,*,*)", "A(*,*,*)"] {
            let forbidden = [t(f)];
            let d = synthesize(&forbidden).unwrap();
            let report = verify_equivalence(&forbidden, &d, 7).unwrap();
            assert!(report.is_equal(), "{f}: {}", report.summary());
        }
    }

    #[test]
    fn removing_a_bit_leaves_a_witness() {
        let forbidden = [t("C(*,*,*)")];
        let mut d = synthesize(&forbidden).unwrap();
        let root = d.root().clone();
        let bits = d.bits_mut(&root).unwrap();
        assert!(bits.remove(&Bit::r_antichain()));
        let report = verify_equivalence(&forbidden, &d, 4).unwrap();
        assert!(!report.is_equal());
        assert!(report.missing.contains(&t("A(C(*,*),*)")));
        assert!(report.summary().starts_with("MISMATCH"));
        assert!(report.to_json().contains(&format!("\"{}\"", t("A(C(*,*),*)"))));
    }

    #[test]
    fn diamond_shape_examples() {
        assert!(!diamond_free_shape(&SpTerm::diamond()));
        assert!(diamond_free_shape(&t("C(A(*,*),*)")));
        assert!(diamond_free_shape(&t("C(*,A(*,*))")));
        assert!(diamond_free_shape(&SpTerm::Empty));
        assert!(diamond_free_shape(&SpTerm::Point));
        assert!(diamond_free_shape(&t("A(C(A(*,*),*,A(*,*)),*)")));
        assert!(!diamond_free_shape(&t("A(*,C(*,A(*,*),*,*))")));
        assert!(brute_embed(&SpTerm::diamond(), &t("C(*,A(*,*),*)")).unwrap());
    }
}
