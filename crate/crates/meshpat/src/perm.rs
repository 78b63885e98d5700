//! Permutations in one-line notation, classical pattern occurrences, and the
//! symmetry group used for Wilf reduction.

use crate::{BoundError, ParseError};
use std::fmt;
use std::str::FromStr;

/// Largest length accepted by [`all_permutations`] unless a caller raises the
/// bound explicitly.
pub const DEFAULT_ORACLE_BOUND: usize = 9;

/// Hard cap on exhaustive generation regardless of the requested bound.
pub const ORACLE_HARD_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("values are not a permutation of 1..=n")]
    NotAPermutation,
    #[error("occurrence indices must be strictly increasing and at least 1")]
    NotIncreasing,
}

/// A permutation of `{1..n}` in one-line notation. Length 0 (the empty
/// permutation) is valid. Values are 1-based throughout, as are positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(values: Vec<u8>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotAPermutation);
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(values))
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Permutation {
    /// Comma-free digit string for n <= 9, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &v in &self.0 {
                write!(f, "{v}")?;
            }
        } else {
            for (t, &v) in self.0.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = ParseError;

    /// Accepts both text forms at any length: `"24153"` or `"2,4,1,5,3"`.
    /// Whitespace is ignored. The empty string parses to the empty
    /// permutation.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let values = parse_values(s)?;
        Permutation::new(values).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

fn parse_values(s: &str) -> Result<Vec<u8>, ParseError> {
    let comma_form = s.contains(',');
    let mut values = Vec::new();
    if comma_form {
        let mut tokens: Vec<(usize, String)> = Vec::new();
        let mut token = String::new();
        let mut token_pos = 0;
        for (pos, ch) in s.char_indices() {
            match ch {
                c if c.is_whitespace() => {}
                ',' => {
                    if token.is_empty() {
                        return Err(ParseError::new(pos, "empty value"));
                    }
                    tokens.push((token_pos, std::mem::take(&mut token)));
                }
                c if c.is_ascii_digit() => {
                    if token.is_empty() {
                        token_pos = pos;
                    }
                    token.push(c);
                }
                c => return Err(ParseError::new(pos, format!("unexpected character {c:?}"))),
            }
        }
        if token.is_empty() {
            return Err(ParseError::new(s.len(), "empty value"));
        }
        tokens.push((token_pos, token));
        for (pos, t) in tokens {
            let v: u32 =
                t.parse().map_err(|_| ParseError::new(pos, format!("invalid value {t:?}")))?;
            if v == 0 || v > u8::MAX as u32 {
                return Err(ParseError::new(pos, format!("value {v} out of range")));
            }
            values.push(v as u8);
        }
    } else {
        for (pos, ch) in s.char_indices() {
            match ch {
                c if c.is_whitespace() => {}
                c if ('1'..='9').contains(&c) => values.push(c as u8 - b'0'),
                '0' => return Err(ParseError::new(pos, "value 0 is not allowed")),
                c => return Err(ParseError::new(pos, format!("unexpected character {c:?}"))),
            }
        }
    }
    Ok(values)
}

/// Strictly increasing 1-based index sequence into a host permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence(Vec<u8>);

impl Occurrence {
    pub fn new(indices: Vec<u8>) -> Result<Self, PermError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.first().is_some_and(|&i| i == 0) {
            return Err(PermError::NotIncreasing);
        }
        Ok(Occurrence(indices))
    }

    pub fn empty() -> Self {
        Occurrence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based index of the r-th occurrence point, r in 1..=k.
    pub fn at(&self, r: usize) -> usize {
        self.0[r - 1] as usize
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    /// Values the occurrence selects in `host`, in position order.
    pub fn values_in(&self, host: &Permutation) -> Vec<u8> {
        self.0.iter().map(|&i| host.values()[i as usize - 1]).collect()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, v) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Occurrence({self})")
    }
}

impl FromStr for Occurrence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut indices = Vec::new();
        if !s.trim().is_empty() {
            for token in s.split(',') {
                let v: u8 = token
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new(0, format!("invalid index {token:?}")))?;
                indices.push(v);
            }
        }
        Occurrence::new(indices).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

/// True iff the sequences have equal length and the same relative order:
/// `a[r] < a[s]` exactly when `b[r] < b[s]`. Sequences with repeated entries
/// compare by the same rule; permutations and patterns never contain repeats.
pub fn order_isomorphic(a: &[u8], b: &[u8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for s in 0..a.len() {
        for r in 0..s {
            if (a[r] < a[s]) != (b[r] < b[s]) {
                return false;
            }
        }
    }
    true
}

/// All occurrences of `patt` in `host`: index subsequences whose values are
/// order-isomorphic to `patt`, in lexicographic index order. The empty
/// pattern occurs exactly once in every host.
pub fn classical_occurrences(host: &Permutation, patt: &Permutation) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(patt.len());
    occurrence_dfs(host.values(), patt.values(), &mut chosen, &mut |occ| {
        out.push(Occurrence(occ.to_vec()));
        true
    });
    out
}

/// True iff `host` contains `patt` classically.
pub fn contains_classical(host: &Permutation, patt: &Permutation) -> bool {
    contains_classical_values(host.values(), patt.values())
}

/// Lexicographically first occurrence of `patt` in `host`, without
/// enumerating the rest.
pub fn first_occurrence(host: &Permutation, patt: &Permutation) -> Option<Occurrence> {
    let mut found = None;
    let mut chosen = Vec::with_capacity(patt.len());
    occurrence_dfs(host.values(), patt.values(), &mut chosen, &mut |occ| {
        found = Some(Occurrence(occ.to_vec()));
        false
    });
    found
}

pub(crate) fn contains_classical_values(host: &[u8], patt: &[u8]) -> bool {
    let mut found = false;
    let mut chosen = Vec::with_capacity(patt.len());
    occurrence_dfs(host, patt, &mut chosen, &mut |_| {
        found = true;
        false
    });
    found
}

/// Depth-first extension over positions; `emit` returns false to stop the
/// search. Prefix order-isomorphism makes each partial choice consistent, so
/// complete choices are exactly the occurrences, visited lexicographically.
pub(crate) fn occurrence_dfs(
    host: &[u8],
    patt: &[u8],
    chosen: &mut Vec<u8>,
    emit: &mut impl FnMut(&[u8]) -> bool,
) -> bool {
    let r = chosen.len();
    if r == patt.len() {
        return emit(chosen);
    }
    let first = chosen.last().map_or(1, |&p| p as usize + 1);
    // Leave room for the remaining pattern points.
    let Some(last) = host.len().checked_sub(patt.len() - r - 1) else {
        return true;
    };
    for pos in first..=last {
        let nv = host[pos - 1];
        let consistent = chosen
            .iter()
            .enumerate()
            .all(|(t, &p)| (host[p as usize - 1] < nv) == (patt[t] < patt[r]));
        if consistent {
            chosen.push(pos as u8);
            let keep_going = occurrence_dfs(host, patt, chosen, emit);
            chosen.pop();
            if !keep_going {
                return false;
            }
        }
    }
    true
}

/// The symmetry operations on permutations. `Rci` composes in the order
/// reverse, then complement, then inverse; it is the only one of the eight
/// grid symmetries fixing the pattern 231.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
    Rci,
}

impl FromStr for Symmetry {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "reverse" => Ok(Symmetry::Reverse),
            "complement" => Ok(Symmetry::Complement),
            "inverse" => Ok(Symmetry::Inverse),
            "rci" | "reverse-complement-inverse" => Ok(Symmetry::Rci),
            other => Err(ParseError::new(0, format!("unknown symmetry {other:?}"))),
        }
    }
}

pub fn apply_symmetry(p: &Permutation, s: Symmetry) -> Permutation {
    let n = p.len();
    match s {
        Symmetry::Reverse => Permutation(p.0.iter().rev().copied().collect()),
        Symmetry::Complement => Permutation(p.0.iter().map(|&v| (n as u8 + 1) - v).collect()),
        Symmetry::Inverse => {
            let mut inv = vec![0u8; n];
            for (pos0, &v) in p.0.iter().enumerate() {
                inv[v as usize - 1] = pos0 as u8 + 1;
            }
            Permutation(inv)
        }
        Symmetry::Rci => {
            let r = apply_symmetry(p, Symmetry::Reverse);
            let rc = apply_symmetry(&r, Symmetry::Complement);
            apply_symmetry(&rc, Symmetry::Inverse)
        }
    }
}

/// All permutations of length `n` in lexicographic order, guarded by
/// [`DEFAULT_ORACLE_BOUND`].
pub fn all_permutations(n: usize) -> Result<LexPermutations, BoundError> {
    all_permutations_bounded(n, DEFAULT_ORACLE_BOUND)
}

/// As [`all_permutations`] with an explicit bound, capped at
/// [`ORACLE_HARD_CAP`].
pub fn all_permutations_bounded(n: usize, bound: usize) -> Result<LexPermutations, BoundError> {
    let bound = bound.min(ORACLE_HARD_CAP);
    if n > bound {
        return Err(BoundError { requested: n, bound });
    }
    Ok(LexPermutations { cur: Some((1..=n as u8).collect()) })
}

#[derive(Debug)]
pub struct LexPermutations {
    cur: Option<Vec<u8>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.cur.take()?;
        let mut next = cur.clone();
        if next_lex(&mut next) {
            self.cur = Some(next);
        }
        Some(Permutation(cur))
    }
}

/// Advance to the lexicographic successor in place; false at the last one.
pub(crate) fn next_lex(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
