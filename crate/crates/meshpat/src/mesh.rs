//! Mesh patterns: a classical pattern together with a set of shaded grid
//! boxes, occurrence semantics, subpattern containment, and the point and
//! ascent/descent insertion operators.

use crate::perm::{classical_occurrences, occurrence_dfs};
use crate::{Occurrence, ParseError, Permutation};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MeshError {
    #[error("box {b} lies outside the grid of a length-{k} pattern")]
    BoxOutOfRange { b: GridBox, k: usize },
    #[error("box {b} is already shaded")]
    AlreadyShaded { b: GridBox },
}

/// A unit cell of the `(k+1) x (k+1)` grid of a length-`k` pattern, named by
/// its lower-left grid corner. Column `i` lies between pattern positions `i`
/// and `i+1`; row `j` between pattern values `j` and `j+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridBox {
    pub i: u8,
    pub j: u8,
}

impl GridBox {
    pub const fn new(i: u8, j: u8) -> Self {
        GridBox { i, j }
    }
}

impl fmt::Display for GridBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i, self.j)
    }
}

/// A mesh pattern `(tau, R)`: a classical pattern `tau` of length `k` plus a
/// shading `R` of boxes over `[0,k] x [0,k]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeshPattern {
    underlying: Permutation,
    shading: BTreeSet<GridBox>,
}

impl MeshPattern {
    pub fn new(
        underlying: Permutation,
        shading: impl IntoIterator<Item = GridBox>,
    ) -> Result<Self, MeshError> {
        let k = underlying.len();
        let mut set = BTreeSet::new();
        for b in shading {
            if b.i as usize > k || b.j as usize > k {
                return Err(MeshError::BoxOutOfRange { b, k });
            }
            set.insert(b);
        }
        Ok(MeshPattern { underlying, shading: set })
    }

    /// The classical pattern viewed as a mesh pattern with empty shading.
    pub fn classical(underlying: Permutation) -> Self {
        MeshPattern { underlying, shading: BTreeSet::new() }
    }

    pub fn underlying(&self) -> &Permutation {
        &self.underlying
    }

    pub fn k(&self) -> usize {
        self.underlying.len()
    }

    pub fn shading(&self) -> &BTreeSet<GridBox> {
        &self.shading
    }

    pub fn shaded(&self, b: GridBox) -> bool {
        self.shading.contains(&b)
    }

    /// Copy with one more shaded box.
    pub fn with_box(&self, b: GridBox) -> Result<Self, MeshError> {
        let k = self.k();
        if b.i as usize > k || b.j as usize > k {
            return Err(MeshError::BoxOutOfRange { b, k });
        }
        let mut shading = self.shading.clone();
        shading.insert(b);
        Ok(MeshPattern { underlying: self.underlying.clone(), shading })
    }

    /// Shading as a bitmask with box `(i,j)` at bit `i*(k+1)+j`; callers keep
    /// `k <= 7` so the mask fits in a `u64`.
    pub(crate) fn shading_mask(&self) -> u64 {
        let side = self.k() as u64 + 1;
        debug_assert!(side * side <= 64);
        self.shading
            .iter()
            .fold(0u64, |m, b| m | 1 << (b.i as u64 * side + b.j as u64))
    }

    pub(crate) fn from_mask(underlying: Permutation, mask: u64) -> Self {
        let side = underlying.len() as u8 + 1;
        let shading = (0..side)
            .flat_map(|i| (0..side).map(move |j| GridBox::new(i, j)))
            .filter(|b| mask >> (b.i * side + b.j) & 1 == 1)
            .collect();
        MeshPattern { underlying, shading }
    }
}

impl fmt::Display for MeshPattern {
    /// Canonical form: underlying, `|`, then the boxes in lexicographic
    /// order, e.g. `21|1,0;1,1;2,2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.underlying)?;
        for (t, b) in self.shading.iter().enumerate() {
            if t > 0 {
                write!(f, ";")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeshPattern({self})")
    }
}

impl FromStr for MeshPattern {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bar = s
            .find('|')
            .ok_or_else(|| ParseError::new(s.len(), "expected '|' between pattern and boxes"))?;
        let underlying: Permutation = s[..bar].parse()?;
        let k = underlying.len();
        let mut shading = BTreeSet::new();
        let rest = &s[bar + 1..];
        if !rest.trim().is_empty() {
            let mut seg_start = bar + 1;
            let mut segments = Vec::new();
            let mut cur = String::new();
            for (off, ch) in rest.char_indices() {
                if ch == ';' {
                    segments.push((seg_start, std::mem::take(&mut cur)));
                    seg_start = bar + 1 + off + 1;
                } else if !ch.is_whitespace() {
                    cur.push(ch);
                }
            }
            segments.push((seg_start, cur));
            for (pos, seg) in segments {
                let b = parse_box(&seg, pos)?;
                if b.i as usize > k || b.j as usize > k {
                    return Err(ParseError::new(
                        pos,
                        format!("box {b} outside the grid of a length-{k} pattern"),
                    ));
                }
                shading.insert(b);
            }
        }
        Ok(MeshPattern { underlying, shading })
    }
}

fn parse_box(seg: &str, pos: usize) -> Result<GridBox, ParseError> {
    let err = |msg: &str| ParseError::new(pos, format!("{msg} in box {seg:?}"));
    let (i, j) = seg.split_once(',').ok_or_else(|| err("expected 'i,j'"))?;
    let parse = |t: &str| -> Result<u8, ParseError> {
        if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err("expected a coordinate"));
        }
        t.parse().map_err(|_| err("coordinate out of range"))
    };
    Ok(GridBox::new(parse(i)?, parse(j)?))
}

/// The rectangle of host positions and values corresponding to one grid box
/// under one occurrence. Intervals are inclusive and empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub cols: (usize, usize),
    pub rows: (usize, usize),
}

impl Region {
    pub fn is_empty(&self) -> bool {
        self.cols.0 > self.cols.1 || self.rows.0 > self.rows.1
    }

    pub fn contains(&self, pos: usize, val: usize) -> bool {
        self.cols.0 <= pos && pos <= self.cols.1 && self.rows.0 <= val && val <= self.rows.1
    }

    /// Number of host points inside the rectangle.
    pub fn points_in(&self, host: &Permutation) -> usize {
        if self.is_empty() {
            return 0;
        }
        (self.cols.0..=self.cols.1).filter(|&pos| self.contains(pos, host.at(pos))).count()
    }
}

/// The region of box `b` under an occurrence `occ` of a length-`k` pattern in
/// `host`: columns strictly between the b.i-th and (b.i+1)-th occurrence
/// index, rows strictly between the b.j-th and (b.j+1)-th smallest occurrence
/// value, with virtual boundaries 0 and n+1.
pub fn region_of(host: &Permutation, occ: &Occurrence, b: GridBox) -> Result<Region, MeshError> {
    let k = occ.len();
    if b.i as usize > k || b.j as usize > k {
        return Err(MeshError::BoxOutOfRange { b, k });
    }
    let n = host.len();
    let alpha = |r: usize| if r == 0 { 0 } else if r > k { n + 1 } else { occ.at(r) };
    let mut vals: Vec<usize> = (1..=k).map(|r| host.at(occ.at(r))).collect();
    vals.sort_unstable();
    let beta = |r: usize| if r == 0 { 0 } else if r > k { n + 1 } else { vals[r - 1] };
    let i = b.i as usize;
    let j = b.j as usize;
    Ok(Region {
        cols: (alpha(i) + 1, alpha(i + 1).wrapping_sub(1)),
        rows: (beta(j) + 1, beta(j + 1).wrapping_sub(1)),
    })
}

/// True iff every shaded box of `p` has an empty region under the classical
/// occurrence given by `occ_idx` (1-based indices) in `host`.
pub(crate) fn occurrence_respects_shading(host: &[u8], occ_idx: &[u8], p: &MeshPattern) -> bool {
    let k = occ_idx.len();
    let n = host.len();
    let mut vals: Vec<u8> = occ_idx.iter().map(|&i| host[i as usize - 1]).collect();
    vals.sort_unstable();
    let alpha = |r: usize| if r == 0 { 0 } else if r > k { n + 1 } else { occ_idx[r - 1] as usize };
    let beta = |r: usize| if r == 0 { 0 } else if r > k { n + 1 } else { vals[r - 1] as usize };
    p.shading.iter().all(|b| {
        let (clo, chi) = (alpha(b.i as usize) + 1, alpha(b.i as usize + 1));
        let (rlo, rhi) = (beta(b.j as usize) + 1, beta(b.j as usize + 1));
        (clo..chi).all(|pos| {
            let v = host[pos - 1] as usize;
            v < rlo || v >= rhi
        })
    })
}

/// All classical occurrences of `p.underlying` in `host` whose shaded-box
/// regions contain no host point, in lexicographic index order. Empty result
/// iff `host` avoids `p`.
pub fn mesh_occurrences(host: &Permutation, p: &MeshPattern) -> Vec<Occurrence> {
    classical_occurrences(host, p.underlying())
        .into_iter()
        .filter(|occ| occurrence_respects_shading(host.values(), occ.indices(), p))
        .collect()
}

/// True iff `host` contains `p`, short-circuiting on the first occurrence.
pub fn contains_mesh(host: &Permutation, p: &MeshPattern) -> bool {
    let mut found = false;
    let mut chosen = Vec::with_capacity(p.k());
    occurrence_dfs(host.values(), p.underlying().values(), &mut chosen, &mut |occ| {
        if occurrence_respects_shading(host.values(), occ, p) {
            found = true;
            return false;
        }
        true
    });
    found
}

/// First classical occurrence of `p.underlying` in `q.underlying` (in
/// lexicographic order) whose induced box regions are fully shaded in `q`:
/// box `(i,j)` of `p` maps to the boxes `(x,y)` of `q` with
/// `alpha(i) <= x < alpha(i+1)` and `beta(j) <= y < beta(j+1)`.
pub fn subpattern_witness(q: &MeshPattern, p: &MeshPattern) -> Option<Occurrence> {
    let k = p.k();
    let m = q.k();
    for occ in classical_occurrences(q.underlying(), p.underlying()) {
        let mut vals: Vec<usize> = (1..=k).map(|r| q.underlying().at(occ.at(r))).collect();
        vals.sort_unstable();
        let alpha = |r: usize| if r == 0 { 0 } else if r > k { m + 1 } else { occ.at(r) };
        let beta = |r: usize| if r == 0 { 0 } else if r > k { m + 1 } else { vals[r - 1] };
        let covered = p.shading.iter().all(|b| {
            let (i, j) = (b.i as usize, b.j as usize);
            (alpha(i)..alpha(i + 1)).all(|x| {
                (beta(j)..beta(j + 1)).all(|y| q.shaded(GridBox::new(x as u8, y as u8)))
            })
        });
        if covered {
            return Some(occ);
        }
    }
    None
}

/// True iff `p` is contained in `q` as a subpattern.
pub fn subpattern_contains(q: &MeshPattern, p: &MeshPattern) -> bool {
    subpattern_witness(q, p).is_some()
}

/// New-grid coordinates covered by old coordinate `c` when line `at` of the
/// grid is split by inserting `extra` new lines (1 for a point, 2 for an
/// ascent or descent): coordinates below `at` keep their place, `at` itself
/// widens into `extra + 1` cells, and coordinates above shift up.
fn expand_coord(c: u8, at: u8, extra: u8) -> std::ops::RangeInclusive<u8> {
    if c < at {
        c..=c
    } else if c == at {
        c..=c + extra
    } else {
        c + extra..=c + extra
    }
}

fn expanded_shading(p: &MeshPattern, b: GridBox, extra: u8) -> BTreeSet<GridBox> {
    let mut out = BTreeSet::new();
    for old in &p.shading {
        for x in expand_coord(old.i, b.i, extra) {
            for y in expand_coord(old.j, b.j, extra) {
                out.insert(GridBox::new(x, y));
            }
        }
    }
    out
}

fn check_insertable(p: &MeshPattern, b: GridBox) -> Result<(), MeshError> {
    let k = p.k();
    if b.i as usize > k || b.j as usize > k {
        return Err(MeshError::BoxOutOfRange { b, k });
    }
    if p.shaded(b) {
        return Err(MeshError::AlreadyShaded { b });
    }
    Ok(())
}

/// Underlying pattern after inserting `extra` new points into box `(i,j)`
/// with new values `vals` (each in `1..=extra`, relative order preserved).
fn inserted_underlying(tau: &Permutation, b: GridBox, vals: &[u8]) -> Permutation {
    let (i, j) = (b.i as usize, b.j as usize);
    let extra = vals.len();
    let mut out = Vec::with_capacity(tau.len() + extra);
    let shift = |v: u8| if v as usize > j { v + extra as u8 } else { v };
    for m in 1..=i {
        out.push(shift(tau.values()[m - 1]));
    }
    for &v in vals {
        out.push(j as u8 + v);
    }
    for m in i + 1..=tau.len() {
        out.push(shift(tau.values()[m - 1]));
    }
    Permutation::new(out).expect("insertion preserves the permutation property")
}

/// Insert one point into box `b` of `p`. The new point splits column `b.i`
/// and row `b.j`; existing shading expands with the split. Inserting into a
/// shaded box is an error.
pub fn insert_point(p: &MeshPattern, b: GridBox) -> Result<MeshPattern, MeshError> {
    check_insertable(p, b)?;
    Ok(MeshPattern {
        underlying: inserted_underlying(&p.underlying, b, &[1]),
        shading: expanded_shading(p, b, 1),
    })
}

/// Direction constraints for [`insert_point_directed`]: the inserted point is
/// the topmost, rightmost, bottommost, or leftmost host point in the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Right,
    Down,
    Left,
}

/// As [`insert_point`], plus the two extra shaded boxes that pin the new
/// point to one side of the split box.
pub fn insert_point_directed(
    p: &MeshPattern,
    b: GridBox,
    d: Direction,
) -> Result<MeshPattern, MeshError> {
    let mut out = insert_point(p, b)?;
    let (i, j) = (b.i, b.j);
    let extra = match d {
        Direction::Up => [GridBox::new(i, j + 1), GridBox::new(i + 1, j + 1)],
        Direction::Right => [GridBox::new(i + 1, j), GridBox::new(i + 1, j + 1)],
        Direction::Down => [GridBox::new(i, j), GridBox::new(i + 1, j)],
        Direction::Left => [GridBox::new(i, j), GridBox::new(i, j + 1)],
    };
    out.shading.extend(extra);
    Ok(out)
}

/// One point insertion variant: plain or pinned to a side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InsertVariant {
    Plain,
    Up,
    Right,
    Down,
    Left,
}

impl InsertVariant {
    pub const ALL: [InsertVariant; 5] = [
        InsertVariant::Plain,
        InsertVariant::Up,
        InsertVariant::Right,
        InsertVariant::Down,
        InsertVariant::Left,
    ];
}

impl fmt::Display for InsertVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InsertVariant::Plain => "plain",
            InsertVariant::Up => "up",
            InsertVariant::Right => "right",
            InsertVariant::Down => "down",
            InsertVariant::Left => "left",
        };
        write!(f, "{s}")
    }
}

impl FromStr for InsertVariant {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "plain" => Ok(InsertVariant::Plain),
            "up" => Ok(InsertVariant::Up),
            "right" => Ok(InsertVariant::Right),
            "down" => Ok(InsertVariant::Down),
            "left" => Ok(InsertVariant::Left),
            other => Err(ParseError::new(0, format!("unknown insertion variant {other:?}"))),
        }
    }
}

pub fn insert_point_variant(
    p: &MeshPattern,
    b: GridBox,
    v: InsertVariant,
) -> Result<MeshPattern, MeshError> {
    match v {
        InsertVariant::Plain => insert_point(p, b),
        InsertVariant::Up => insert_point_directed(p, b, Direction::Up),
        InsertVariant::Right => insert_point_directed(p, b, Direction::Right),
        InsertVariant::Down => insert_point_directed(p, b, Direction::Down),
        InsertVariant::Left => insert_point_directed(p, b, Direction::Left),
    }
}

/// The five insertion variants of `p` at `b`, duplicates removed, in the
/// order plain, up, right, down, left. At most five distinct patterns.
pub fn insert_point_all(p: &MeshPattern, b: GridBox) -> Vec<(InsertVariant, MeshPattern)> {
    let mut out: Vec<(InsertVariant, MeshPattern)> = Vec::with_capacity(5);
    for v in InsertVariant::ALL {
        let q = insert_point_variant(p, b, v).expect("caller checked the box");
        if !out.iter().any(|(_, seen)| *seen == q) {
            out.push((v, q));
        }
    }
    out
}

/// Kind of adjacent monotone pair for [`insert_monotone`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonotoneKind {
    Ascent,
    Descent,
}

/// Insert two adjacent points into box `b` (increasing for an ascent,
/// decreasing for a descent). The box splits into a 3x3 block of cells and
/// existing shading expands with the split; the middle column is fully
/// shaded within the block, so the pair cannot be split inside the box.
pub fn insert_monotone(
    p: &MeshPattern,
    b: GridBox,
    kind: MonotoneKind,
) -> Result<MeshPattern, MeshError> {
    check_insertable(p, b)?;
    let vals: [u8; 2] = match kind {
        MonotoneKind::Ascent => [1, 2],
        MonotoneKind::Descent => [2, 1],
    };
    let mut shading = expanded_shading(p, b, 2);
    shading.extend([
        GridBox::new(b.i + 1, b.j),
        GridBox::new(b.i + 1, b.j + 1),
        GridBox::new(b.i + 1, b.j + 2),
    ]);
    Ok(MeshPattern { underlying: inserted_underlying(&p.underlying, b, &vals), shading })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn m(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    fn occ(indices: &[u8]) -> Occurrence {
        Occurrence::new(indices.to_vec()).unwrap()
    }

    #[test]
    fn mesh_occurrence_in_34215() {
        let host = p("34215");
        let patt = m("213|0,1;0,2;1,0;1,1;2,1;2,2");
        assert_eq!(mesh_occurrences(&host, &patt), vec![occ(&[1, 3, 5])]);
        assert!(contains_mesh(&host, &patt));
    }

    #[test]
    fn unshaded_pattern_matches_classically() {
        let host = p("24153");
        assert_eq!(mesh_occurrences(&host, &m("1|")).len(), host.len());
        for patt in all_permutations(3).unwrap() {
            assert_eq!(
                mesh_occurrences(&host, &MeshPattern::classical(patt.clone())),
                classical_occurrences(&host, &patt)
            );
        }
    }

    #[test]
    fn fully_shaded_single_point() {
        let patt = m("1|0,0;0,1;1,0;1,1");
        assert_eq!(mesh_occurrences(&p("1"), &patt).len(), 1);
        assert!(mesh_occurrences(&p("21"), &patt).is_empty());
        assert!(!contains_mesh(&p("21"), &patt));
    }

    #[test]
    fn regions_follow_the_boundary_conventions() {
        let host = p("34215");
        let o = occ(&[1, 3, 5]);
        // Row 1 sits between the two smallest occurrence values 2 and 3:
        // empty strip. The host point (2,4) lies one row up, in box (1,2).
        let r11 = region_of(&host, &o, GridBox::new(1, 1)).unwrap();
        assert_eq!(r11, Region { cols: (2, 2), rows: (3, 2) });
        assert!(r11.is_empty());
        let r12 = region_of(&host, &o, GridBox::new(1, 2)).unwrap();
        assert_eq!(r12, Region { cols: (2, 2), rows: (4, 4) });
        assert!(r12.contains(2, 4));
        assert_eq!(r12.points_in(&host), 1);

        let host = p("24153");
        let tail = region_of(&host, &occ(&[2, 4, 5]), GridBox::new(3, 3)).unwrap();
        assert_eq!(tail.cols, (6, 5));
        assert!(tail.is_empty());

        let corner = region_of(&p("1"), &occ(&[1]), GridBox::new(0, 0)).unwrap();
        assert!(corner.is_empty());

        assert_eq!(
            region_of(&host, &occ(&[2, 4, 5]), GridBox::new(4, 0)),
            Err(MeshError::BoxOutOfRange { b: GridBox::new(4, 0), k: 3 })
        );
    }

    #[test]
    fn subpattern_in_42315() {
        let patt = m("213|0,1;0,2;1,0;2,2");
        let q = m(
            "42315|0,1;0,2;0,3;0,4;1,0;1,1;1,2;1,3;1,4;2,1;2,2;2,3;2,4;3,2;3,4;4,2;4,3;4,4",
        );
        assert_eq!(subpattern_witness(&q, &patt), Some(occ(&[1, 2, 5])));
        assert!(subpattern_contains(&q, &patt));
    }

    #[test]
    fn subpattern_identity_and_missing_shading() {
        for s in ["21|1,0;1,1;1,2;2,2", "1|0,0", "12|", "213|0,1;2,2"] {
            assert!(subpattern_contains(&m(s), &m(s)));
        }
        assert!(!subpattern_contains(&m("1|"), &m("1|0,0")));
    }

    #[test]
    fn point_insertion_splits_the_grid() {
        let fig5 = insert_point(&m("12|0,1;2,2"), GridBox::new(2, 1)).unwrap();
        assert_eq!(fig5, m("132|0,1;0,2;2,3;3,3"));

        let fig4 = insert_point(&m("21|1,0;1,1;1,2;2,2"), GridBox::new(2, 0)).unwrap();
        assert_eq!(fig4.underlying(), &p("321"));

        let single = insert_point(&m("1|"), GridBox::new(0, 0)).unwrap();
        assert_eq!(single, m("12|"));
    }

    #[test]
    fn point_insertion_rejects_bad_boxes() {
        assert_eq!(
            insert_point(&m("12|0,1"), GridBox::new(0, 1)),
            Err(MeshError::AlreadyShaded { b: GridBox::new(0, 1) })
        );
        assert_eq!(
            insert_point(&m("12|"), GridBox::new(3, 0)),
            Err(MeshError::BoxOutOfRange { b: GridBox::new(3, 0), k: 2 })
        );
    }

    #[test]
    fn directed_insertion_adds_the_pinning_boxes() {
        let up = insert_point_directed(&m("12|0,1;2,2"), GridBox::new(2, 1), Direction::Up);
        assert_eq!(up.unwrap(), m("132|0,1;0,2;2,2;2,3;3,2;3,3"));

        for b in [GridBox::new(0, 0), GridBox::new(1, 1), GridBox::new(2, 0)] {
            let base = m("21|0,2;2,1");
            let plain = insert_point(&base, b).unwrap();
            for d in [Direction::Up, Direction::Right, Direction::Down, Direction::Left] {
                let directed = insert_point_directed(&base, b, d).unwrap();
                assert!(plain.shading().is_subset(directed.shading()));
                assert_eq!(directed.underlying(), plain.underlying());
            }
            let all = insert_point_all(&base, b);
            assert!(all.len() <= 5 && !all.is_empty());
            assert_eq!(all[0].0, InsertVariant::Plain);
        }
    }

    #[test]
    fn monotone_insertion_matches_the_ascent_example() {
        let base = m("231|0,0;1,0;1,3;3,0;3,1;3,3");
        let got = insert_monotone(&base, GridBox::new(1, 1), MonotoneKind::Ascent).unwrap();
        let want = m(
            "42351|0,0;1,0;1,5;2,0;2,1;2,2;2,3;2,5;3,0;3,5;5,0;5,1;5,2;5,3;5,5",
        );
        assert_eq!(got, want);
    }

    #[test]
    fn monotone_insertion_small_cases() {
        let asc = insert_monotone(&m("1|"), GridBox::new(0, 0), MonotoneKind::Ascent).unwrap();
        assert_eq!(asc, m("123|1,0;1,1;1,2"));

        for b in [GridBox::new(0, 0), GridBox::new(1, 1), GridBox::new(2, 2)] {
            let desc = insert_monotone(&m("12|"), b, MonotoneKind::Descent).unwrap();
            let u = desc.underlying();
            assert!(u.at(b.i as usize + 1) > u.at(b.i as usize + 2));
            let asc = insert_monotone(&m("12|"), b, MonotoneKind::Ascent).unwrap();
            let u = asc.underlying();
            assert!(u.at(b.i as usize + 1) < u.at(b.i as usize + 2));
        }

        assert!(insert_monotone(&m("12|1,1"), GridBox::new(1, 1), MonotoneKind::Ascent).is_err());
    }

    #[test]
    fn parse_and_serialize() {
        let patt = m("21|1,0;1,1;1,2;2,2");
        assert_eq!(patt.k(), 2);
        assert_eq!(patt.shading().len(), 4);
        assert_eq!(patt.to_string(), "21|1,0;1,1;1,2;2,2");

        assert_eq!(m("1|"), MeshPattern::classical(p("1")));
        assert_eq!(m(" 21 | 2,2 ;1, 0 "), m("21|1,0;2,2"));
        assert_eq!(m("21|2,2;1,0;2,2").to_string(), "21|1,0;2,2");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(m("12|").to_string().parse::<MeshPattern>().unwrap(), m("12|"));
        let err = "21".parse::<MeshPattern>().unwrap_err();
        assert!(err.msg.contains('|'));
        let err = "21|1".parse::<MeshPattern>().unwrap_err();
        assert_eq!(err.pos, 3);
        let err = "21|1,0;9,9".parse::<MeshPattern>().unwrap_err();
        assert_eq!(err.pos, 7);
        assert!("2x|1,0".parse::<MeshPattern>().is_err());
    }

    #[test]
    fn round_trip_all_512_shadings() {
        for tau in ["12", "21"] {
            for mask in 0u64..512 {
                let patt = MeshPattern::from_mask(p(tau), mask);
                assert_eq!(patt.to_string().parse::<MeshPattern>().unwrap(), patt);
                assert_eq!(patt.shading_mask(), mask);
            }
        }
    }
}
