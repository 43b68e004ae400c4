//! Series-parallel posets as canonical decomposition terms.
//!
//! Every finite series-parallel (SP) order is empty, a single point, a chain
//! sum or an antichain sum. [`SpTerm`] records that decomposition. In
//! canonical form a chain sum lists its anticomponents bottom to top and an
//! antichain sum lists its components sorted by the total term order, so two
//! canonical terms are equal exactly when the posets they denote are
//! isomorphic.
//!
//! The textual form is
//!
//! ```text
//! term := "0" | "*" | "C(" term ("," term)+ ")" | "A(" term ("," term)+ ")"
//! ```
//!
//! with `C` children listed bottom to top.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A series-parallel poset given by its decomposition.
///
/// The variants are public so that raw, possibly non-canonical trees can be
/// built by hand; [`SpTerm::canonicalize`] brings them into canonical form.
/// All other operations assume canonical input.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SpTerm {
    Empty,
    Point,
    /// Chain sum, children bottom to top.
    Chain(Vec<SpTerm>),
    /// Antichain sum.
    Antichain(Vec<SpTerm>),
}

/// The decomposition kind of a term, ordered by rank.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TermKind {
    Empty,
    Point,
    Chain,
    Antichain,
}

impl SpTerm {
    /// The diamond: a point below an incomparable pair below a point.
    pub fn diamond() -> SpTerm {
        SpTerm::Chain(vec![
            SpTerm::Point,
            SpTerm::Antichain(vec![SpTerm::Point, SpTerm::Point]),
            SpTerm::Point,
        ])
    }

    /// The `n`-point chain.
    pub fn chain_of_points(n: usize) -> SpTerm {
        SpTerm::chain(std::iter::repeat_n(SpTerm::Point, n))
    }

    /// The `n`-point antichain.
    pub fn antichain_of_points(n: usize) -> SpTerm {
        SpTerm::antichain(std::iter::repeat_n(SpTerm::Point, n))
    }

    /// Canonical chain sum of canonical parts, bottom to top.
    ///
    /// Empty parts vanish and nested chain sums are spliced in, so the
    /// result is `Empty` for no nonempty parts and the part itself for one.
    pub fn chain<I>(parts: I) -> SpTerm
    where
        I: IntoIterator<Item = SpTerm>,
    {
        let mut out = Vec::new();
        for part in parts {
            match part {
                SpTerm::Empty => {}
                SpTerm::Chain(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => SpTerm::Empty,
            1 => out.pop().unwrap(),
            _ => SpTerm::Chain(out),
        }
    }

    /// Canonical antichain sum of canonical parts.
    pub fn antichain<I>(parts: I) -> SpTerm
    where
        I: IntoIterator<Item = SpTerm>,
    {
        let mut out = Vec::new();
        for part in parts {
            match part {
                SpTerm::Empty => {}
                SpTerm::Antichain(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => SpTerm::Empty,
            1 => out.pop().unwrap(),
            _ => {
                out.sort();
                SpTerm::Antichain(out)
            }
        }
    }

    /// Brings an arbitrary term tree into canonical form. Idempotent.
    pub fn canonicalize(&self) -> SpTerm {
        match self {
            SpTerm::Empty => SpTerm::Empty,
            SpTerm::Point => SpTerm::Point,
            SpTerm::Chain(children) => SpTerm::chain(children.iter().map(SpTerm::canonicalize)),
            SpTerm::Antichain(children) => {
                SpTerm::antichain(children.iter().map(SpTerm::canonicalize))
            }
        }
    }

    /// Checks the canonical-form invariants recursively.
    pub fn is_canonical(&self) -> bool {
        match self {
            SpTerm::Empty | SpTerm::Point => true,
            SpTerm::Chain(children) => {
                children.len() >= 2
                    && children.iter().all(|c| {
                        !matches!(c, SpTerm::Empty | SpTerm::Chain(_)) && c.is_canonical()
                    })
            }
            SpTerm::Antichain(children) => {
                children.len() >= 2
                    && children.windows(2).all(|w| w[0] <= w[1])
                    && children.iter().all(|c| {
                        !matches!(c, SpTerm::Empty | SpTerm::Antichain(_)) && c.is_canonical()
                    })
            }
        }
    }

    pub fn kind(&self) -> TermKind {
        match self {
            SpTerm::Empty => TermKind::Empty,
            SpTerm::Point => TermKind::Point,
            SpTerm::Chain(_) => TermKind::Chain,
            SpTerm::Antichain(_) => TermKind::Antichain,
        }
    }

    /// Number of points.
    pub fn size(&self) -> usize {
        match self {
            SpTerm::Empty => 0,
            SpTerm::Point => 1,
            SpTerm::Chain(c) | SpTerm::Antichain(c) => c.iter().map(SpTerm::size).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SpTerm::Empty)
    }

    pub fn is_chain_sum(&self) -> bool {
        matches!(self, SpTerm::Chain(_))
    }

    pub fn is_antichain_sum(&self) -> bool {
        matches!(self, SpTerm::Antichain(_))
    }

    /// The anticomponents, bottom to top: the children of a chain sum, the
    /// term itself otherwise, nothing for the empty poset.
    pub fn finest_chain_rep(&self) -> &[SpTerm] {
        match self {
            SpTerm::Empty => &[],
            SpTerm::Chain(children) => children,
            other => std::slice::from_ref(other),
        }
    }

    /// The components: the children of an antichain sum, the term itself
    /// otherwise, nothing for the empty poset.
    pub fn finest_antichain_rep(&self) -> &[SpTerm] {
        match self {
            SpTerm::Empty => &[],
            SpTerm::Antichain(children) => children,
            other => std::slice::from_ref(other),
        }
    }

    /// Whether `self` is isomorphic to an induced suborder of `other`.
    pub fn is_suborder_of(&self, other: &SpTerm) -> bool {
        is_suborder(self, other)
    }
}

/// Total term order: size, then kind rank, then children lexicographically.
impl Ord for SpTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.kind().cmp(&other.kind()))
            .then_with(|| match (self, other) {
                (SpTerm::Chain(a), SpTerm::Chain(b))
                | (SpTerm::Antichain(a), SpTerm::Antichain(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for SpTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Three-way comparison under the total term order.
pub fn compare(p: &SpTerm, q: &SpTerm) -> Ordering {
    p.cmp(q)
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, children) = match self {
            SpTerm::Empty => return f.write_str("0"),
            SpTerm::Point => return f.write_str("*"),
            SpTerm::Chain(c) => ('C', c),
            SpTerm::Antichain(c) => ('A', c),
        };
        write!(f, "{tag}(")?;
        for (i, child) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{child}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("sum at position {pos} has {found} child(ren); at least 2 are required")]
    Arity { pos: usize, found: usize },
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => self.error(format!("expected '{}', found '{}'", byte as char, b as char)),
            None => self.error(format!("expected '{}', found end of input", byte as char)),
        }
    }

    fn term(&mut self) -> Result<SpTerm, ParseError> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.error("expected a term, found end of input"),
        };
        let tag = self.bytes[start];
        self.pos += 1;
        match tag {
            b'0' => Ok(SpTerm::Empty),
            b'*' => Ok(SpTerm::Point),
            b'C' | b'A' => {
                self.expect(b'(')?;
                let mut children = vec![self.term()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.term()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(b) => return self.error(format!("unexpected '{}'", b as char)),
                        None => return self.error("unterminated sum"),
                    }
                }
                if children.len() < 2 {
                    return Err(ParseError::Arity {
                        pos: start,
                        found: children.len(),
                    });
                }
                Ok(if tag == b'C' {
                    SpTerm::Chain(children)
                } else {
                    SpTerm::Antichain(children)
                })
            }
            other => {
                self.pos = start;
                self.error(format!("unexpected '{}'", other as char))
            }
        }
    }
}

/// Parses a term and canonicalizes it. Whitespace is ignored.
pub fn parse_term(text: &str) -> Result<SpTerm, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let term = parser.term()?;
    if parser.peek().is_some() {
        return parser.error("trailing input");
    }
    Ok(term.canonicalize())
}

impl FromStr for SpTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Whether `p` is isomorphic to an induced suborder of `q`.
///
/// Both terms must be canonical. The decision follows the decomposition:
/// a connected piece of `p` lands inside one component of `q`, an
/// anticonnected piece inside one anticomponent.
pub fn is_suborder(p: &SpTerm, q: &SpTerm) -> bool {
    match (p, q) {
        (SpTerm::Empty, _) => true,
        (_, SpTerm::Empty) => false,
        (SpTerm::Point, _) => true,
        _ if p.size() > q.size() => false,
        _ if p == q => true,
        (_, SpTerm::Point) => false,
        (SpTerm::Chain(_), SpTerm::Antichain(qs)) => qs.iter().any(|c| is_suborder(p, c)),
        (SpTerm::Antichain(_), SpTerm::Chain(qs)) => qs.iter().any(|c| is_suborder(p, c)),
        (SpTerm::Chain(ps), SpTerm::Chain(qs)) => chain_into_chain(ps, qs),
        (SpTerm::Antichain(ps), SpTerm::Antichain(qs)) => antichain_into_antichain(ps, qs),
    }
}

/// Parts of `p` are assigned monotonically to parts of `q`; each part of `q`
/// receives a consecutive (possibly empty) block whose chain sum must embed
/// in it.
fn chain_into_chain(ps: &[SpTerm], qs: &[SpTerm]) -> bool {
    let n = ps.len();
    let m = qs.len();
    // fits[(i, k, j)]: block ps[i..k] embeds in qs[j]
    let mut fits: HashMap<(usize, usize, usize), bool> = HashMap::new();
    let mut block_fits = |i: usize, k: usize, j: usize| -> bool {
        *fits.entry((i, k, j)).or_insert_with(|| {
            let block = if k - i == 1 {
                ps[i].clone()
            } else {
                SpTerm::Chain(ps[i..k].to_vec())
            };
            is_suborder(&block, &qs[j])
        })
    };
    // reach[i][j]: ps[i..] embeds in qs[j..]
    let mut reach = vec![vec![false; m + 1]; n + 1];
    reach[n].fill(true);
    for j in (0..m).rev() {
        for i in (0..n).rev() {
            let mut ok = reach[i][j + 1];
            let mut k = i + 1;
            while !ok && k <= n {
                ok = reach[k][j + 1] && block_fits(i, k, j);
                k += 1;
            }
            reach[i][j] = ok;
        }
    }
    reach[0][0]
}

/// Components of `p` are distributed over components of `q`; a group sent to
/// one component of `q` must embed there as an antichain sum.
fn antichain_into_antichain(ps: &[SpTerm], qs: &[SpTerm]) -> bool {
    let n = ps.len();
    let m = qs.len();
    assert!(n < 32, "antichain sum with too many components");
    let mut fits: HashMap<(u32, usize), bool> = HashMap::new();
    // dead[j] holds masks already known not to embed in qs[j..]
    let mut dead: Vec<std::collections::HashSet<u32>> = vec![Default::default(); m];

    fn group(ps: &[SpTerm], mask: u32) -> SpTerm {
        let parts: Vec<SpTerm> = (0..ps.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ps[i].clone())
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            // a subsequence of sorted components is still sorted
            SpTerm::Antichain(parts)
        }
    }

    fn go(
        ps: &[SpTerm],
        qs: &[SpTerm],
        mask: u32,
        j: usize,
        fits: &mut HashMap<(u32, usize), bool>,
        dead: &mut [std::collections::HashSet<u32>],
    ) -> bool {
        if mask == 0 {
            return true;
        }
        if j == qs.len() || dead[j].contains(&mask) {
            return false;
        }
        let capacity = qs[j].size();
        // enumerate submasks of `mask`, including the empty one
        let mut sub = mask;
        loop {
            let size: usize = (0..ps.len())
                .filter(|i| sub & (1 << i) != 0)
                .map(|i| ps[i].size())
                .sum();
            if size <= capacity {
                let ok = sub == 0
                    || *fits
                        .entry((sub, j))
                        .or_insert_with(|| is_suborder(&group(ps, sub), &qs[j]));
                if ok && go(ps, qs, mask & !sub, j + 1, fits, dead) {
                    return true;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        dead[j].insert(mask);
        false
    }

    go(ps, qs, (1u32 << n) - 1, 0, &mut fits, &mut dead)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("enumeration up to size {max_size} exceeds the cap of {cap} terms")]
    TooMany { max_size: usize, cap: usize },
}

/// Default cap on the number of terms an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 5_000_000;

/// All canonical SP terms with at most `max_size` points, one per
/// isomorphism class, in total term order.
pub fn enumerate_sp(max_size: usize) -> Result<Vec<SpTerm>, EnumerationError> {
    enumerate_sp_capped(max_size, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_sp`] with an explicit cap on the number of terms.
///
/// Builds terms size by size straight from the grammar: chain sums are
/// sequences of at least two non-chain parts, antichain sums are multisets of
/// at least two non-antichain parts.
pub fn enumerate_sp_capped(max_size: usize, cap: usize) -> Result<Vec<SpTerm>, EnumerationError> {
    let mut by_size: Vec<Vec<SpTerm>> = vec![vec![SpTerm::Empty]];
    let mut total = 1usize;
    let too_many = || EnumerationError::TooMany { max_size, cap };
    if total > cap {
        return Err(too_many());
    }
    for s in 1..=max_size {
        let mut level = Vec::new();
        if s == 1 {
            level.push(SpTerm::Point);
        } else {
            for parts in sequences(&by_size, s, TermKind::Chain) {
                if parts.len() >= 2 {
                    level.push(SpTerm::Chain(parts));
                }
            }
            let candidates: Vec<&SpTerm> = by_size[1..s]
                .iter()
                .flatten()
                .filter(|t| !t.is_antichain_sum())
                .collect();
            let mut stack = Vec::new();
            multisets(&candidates, 0, s, &mut stack, &mut level);
        }
        level.sort();
        total += level.len();
        if total > cap {
            return Err(too_many());
        }
        by_size.push(level);
    }
    Ok(by_size.into_iter().flatten().collect())
}

/// Sequences of nonempty terms of kind other than `excluded` with sizes
/// summing to `s`.
fn sequences(by_size: &[Vec<SpTerm>], s: usize, excluded: TermKind) -> Vec<Vec<SpTerm>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=s.min(by_size.len() - 1) {
        for head in by_size[first].iter().filter(|t| t.kind() != excluded) {
            for mut tail in sequences(by_size, s - first, excluded) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
    }
    out
}

/// Non-decreasing selections (by index) from `candidates` with total size
/// `remaining` and at least two members.
fn multisets(
    candidates: &[&SpTerm],
    from: usize,
    remaining: usize,
    stack: &mut Vec<SpTerm>,
    out: &mut Vec<SpTerm>,
) {
    if remaining == 0 {
        if stack.len() >= 2 {
            out.push(SpTerm::Antichain(stack.clone()));
        }
        return;
    }
    for idx in from..candidates.len() {
        let term = candidates[idx];
        let size = term.size();
        if size > remaining {
            // candidates are sorted by size
            break;
        }
        stack.push(term.clone());
        multisets(candidates, idx, remaining - size, stack, out);
        stack.pop();
    }
}

/// The same term set as [`enumerate_sp`], computed as the closure of
/// `{Empty, Point}` under binary chain and antichain sums.
pub fn enumerate_sp_by_closure(max_size: usize) -> Result<Vec<SpTerm>, EnumerationError> {
    use std::collections::BTreeSet;
    let mut by_size: Vec<BTreeSet<SpTerm>> = vec![BTreeSet::from([SpTerm::Empty])];
    if max_size >= 1 {
        by_size.push(BTreeSet::from([SpTerm::Point]));
    }
    let mut total = by_size.iter().map(BTreeSet::len).sum::<usize>();
    for s in 2..=max_size {
        let mut level = BTreeSet::new();
        for a in 1..s {
            for p in &by_size[a] {
                for q in &by_size[s - a] {
                    level.insert(SpTerm::chain([p.clone(), q.clone()]));
                    level.insert(SpTerm::antichain([p.clone(), q.clone()]));
                }
            }
        }
        total += level.len();
        if total > DEFAULT_ENUMERATION_CAP {
            return Err(EnumerationError::TooMany {
                max_size,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        by_size.push(level);
    }
    Ok(by_size.into_iter().flatten().collect())
}
