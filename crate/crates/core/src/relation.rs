//! Explicit partial orders on `0..n`, used by the independent checks in
//! [`crate::oracle`].

use crate::term::SpTerm;

/// A finite relation over point indices, stored as a dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PosetRelation {
    n: usize,
    leq: Vec<bool>,
}

impl PosetRelation {
    /// The discrete order (only reflexive pairs) on `n` points.
    pub fn discrete(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        PosetRelation { n, leq }
    }

    /// Builds a relation from explicit `(a, b)` pairs meaning `a <= b`,
    /// adding reflexive pairs and taking the transitive closure.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut rel = PosetRelation::discrete(n);
        for &(a, b) in pairs {
            rel.leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel.leq[i * n + k] {
                    for j in 0..n {
                        if rel.leq[k * n + j] {
                            rel.leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        rel
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Reflexive, antisymmetric and transitive.
    pub fn is_partial_order(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.leq(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && (0..n).all(|a| {
                (0..n).all(|b| !self.leq(a, b) || (0..n).all(|c| !self.leq(b, c) || self.leq(a, c)))
            })
    }

    /// No induced N: `a < b`, `c < d`, `c < b` with every other pair of the
    /// four incomparable.
    pub fn is_n_free(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if !self.lt(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b || !self.lt(c, b) || self.comparable(a, c) {
                        continue;
                    }
                    for d in 0..n {
                        if d == a || d == b || d == c || !self.lt(c, d) {
                            continue;
                        }
                        if !self.comparable(a, d) && !self.comparable(b, d) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Every principal down-set is a chain.
    pub fn is_forest(&self) -> bool {
        self.all_principal_sets_are_chains(|rel, y, x| rel.leq(y, x))
    }

    /// Every principal up-set is a chain.
    pub fn is_upside_down_forest(&self) -> bool {
        self.all_principal_sets_are_chains(|rel, y, x| rel.leq(x, y))
    }

    fn all_principal_sets_are_chains(&self, in_set: impl Fn(&Self, usize, usize) -> bool) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            let set: Vec<usize> = (0..n).filter(|&y| in_set(self, y, x)).collect();
            set.iter()
                .all(|&u| set.iter().all(|&v| self.comparable(u, v)))
        })
    }

    /// The restriction to `points`, renumbered in the given order.
    pub fn restrict(&self, points: &[usize]) -> PosetRelation {
        let m = points.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in points.iter().enumerate() {
            for (j, &b) in points.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        PosetRelation { n: m, leq }
    }
}

/// Materializes a term as an explicit order by the lexicographic-sum rules:
/// inside a part the part's own order, between parts of a chain sum the
/// lower part entirely below the upper, between parts of an antichain sum
/// nothing. Points are numbered in left-to-right leaf order.
pub fn to_relation(term: &SpTerm) -> PosetRelation {
    let n = term.size();
    let mut rel = PosetRelation::discrete(n);
    fill(term, 0, &mut rel);
    rel
}

fn fill(term: &SpTerm, offset: usize, rel: &mut PosetRelation) -> usize {
    match term {
        SpTerm::Empty => 0,
        SpTerm::Point => 1,
        SpTerm::Antichain(children) => {
            let mut at = offset;
            for child in children {
                at += fill(child, at, rel);
            }
            at - offset
        }
        SpTerm::Chain(children) => {
            let n = rel.n;
            let mut at = offset;
            for child in children {
                let width = fill(child, at, rel);
                // everything placed so far in this chain lies below the new part
                for below in offset..at {
                    for above in at..at + width {
                        rel.leq[below * n + above] = true;
                    }
                }
                at += width;
            }
            at - offset
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    #[test]
    fn two_chain_and_antichain() {
        let c = to_relation(&parse_term("C(*,*)").unwrap());
        assert_eq!(c.point_count(), 2);
        assert!(c.lt(0, 1) && !c.lt(1, 0));
        let a = to_relation(&parse_term("A(*,*)").unwrap());
        assert!(!a.comparable(0, 1));
    }

    #[test]
    fn diamond_relation() {
        let d = to_relation(&SpTerm::diamond());
        assert_eq!(d.point_count(), 4);
        assert!(d.lt(0, 1) && d.lt(0, 2) && d.lt(1, 3) && d.lt(2, 3) && d.lt(0, 3));
        assert!(!d.comparable(1, 2));
        assert!(d.is_partial_order());
        assert!(d.is_n_free());
        assert!(!d.is_forest());
        assert!(!d.is_upside_down_forest());
    }

    #[test]
    fn n_poset_is_detected() {
        // a=0 < b=1, c=2 < b, c < d=3
        let n = PosetRelation::from_pairs(4, &[(0, 1), (2, 1), (2, 3)]);
        assert!(n.is_partial_order());
        assert!(!n.is_n_free());
    }

    #[test]
    fn forests() {
        let tree = to_relation(&parse_term("C(*,A(*,*))").unwrap());
        assert!(tree.is_forest());
        assert!(!tree.is_upside_down_forest());
        let up = to_relation(&parse_term("C(A(*,*),*)").unwrap());
        assert!(up.is_upside_down_forest());
        assert!(!up.is_forest());
    }
}
