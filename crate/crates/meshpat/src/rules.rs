//! Shading rules under a dominating classical pattern: syntactic criteria
//! that certify a mesh pattern coincident with the same pattern plus one
//! more shaded box, valid on every host avoiding the dominating pattern.
//! Each successful application yields a replayable [`RuleCertificate`];
//! [`rule_partition`] closes all certified pairs into equivalence classes.

use crate::classify::{EquivalencePartition, Provenance};
use crate::engine::{baseline_class_ids, BASELINE_MAX_LEN};
use crate::exec::{self, ExecMode};
use crate::mesh::{
    insert_monotone, insert_point, insert_point_all, subpattern_witness, GridBox, InsertVariant,
    MeshPattern, MonotoneKind,
};
use crate::perm::{contains_classical, first_occurrence, Occurrence, Permutation};
use crate::unionfind::UnionFind;
use crate::ParseError;
use std::fmt;
use std::str::FromStr;

/// Which rule produced a certificate. The point-insertion rule has a single
/// form; the monotone-region rule splits into four branches by region
/// direction and by which extremal point of the region is adjoined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    R1,
    R2aI,
    R2aII,
    R2bI,
    R2bII,
    R3,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::R1 => "R1",
            RuleKind::R2aI => "R2a-i",
            RuleKind::R2aII => "R2a-ii",
            RuleKind::R2bI => "R2b-i",
            RuleKind::R2bII => "R2b-ii",
            RuleKind::R3 => "R3",
        })
    }
}

impl FromStr for RuleKind {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "R1" => Ok(RuleKind::R1),
            "R2a-i" => Ok(RuleKind::R2aI),
            "R2a-ii" => Ok(RuleKind::R2aII),
            "R2b-i" => Ok(RuleKind::R2bI),
            "R2b-ii" => Ok(RuleKind::R2bII),
            "R3" => Ok(RuleKind::R3),
            other => Err(ParseError::new(0, format!("unknown rule {other:?}"))),
        }
    }
}

/// Subset of the three rules a partition is allowed to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSet(u8);

impl RuleSet {
    pub const R1: RuleSet = RuleSet(0b001);
    pub const R2: RuleSet = RuleSet(0b010);
    pub const R3: RuleSet = RuleSet(0b100);
    pub const R12: RuleSet = RuleSet(0b011);
    pub const R123: RuleSet = RuleSet(0b111);

    pub fn union(self, other: RuleSet) -> RuleSet {
        RuleSet(self.0 | other.0)
    }

    pub fn includes(self, other: RuleSet) -> bool {
        self.0 & other.0 == other.0
    }

    /// Compact name: `R` followed by the indices present, e.g. `R12`.
    pub fn label(self) -> String {
        let mut s = String::from("R");
        for (bit, d) in [(Self::R1, '1'), (Self::R2, '2'), (Self::R3, '3')] {
            if self.includes(bit) {
                s.push(d);
            }
        }
        s
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for RuleSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let rest = s
            .strip_prefix('R')
            .or_else(|| s.strip_prefix('r'))
            .ok_or_else(|| ParseError::new(0, format!("rule set {s:?} must start with R")))?;
        let mut set = RuleSet(0);
        let mut last = 0;
        for (t, c) in rest.char_indices() {
            let bit = match c {
                '1' => RuleSet::R1,
                '2' => RuleSet::R2,
                '3' => RuleSet::R3,
                other => {
                    return Err(ParseError::new(t + 1, format!("unknown rule index {other:?}")))
                }
            };
            let d = c as u32;
            if set.includes(bit) || d <= last {
                return Err(ParseError::new(t + 1, "rule indices must ascend"));
            }
            last = d;
            set = set.union(bit);
        }
        if set.0 == 0 {
            return Err(ParseError::new(0, "empty rule set"));
        }
        Ok(set)
    }
}

/// Monotonicity forced on a box's region in every occurrence of the pattern
/// inside a host avoiding the dominating pattern. Both flags may hold (any
/// point pair in the region is impossible) and both may fail (no
/// information).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneSet {
    pub decreasing: bool,
    pub increasing: bool,
}

/// A replayable record of one rule application showing `source` coincident
/// with `target = source + box` under `dominating`. The witness is the
/// occurrence refuting the hypothetical point in the box: for the point
/// rule, the first occurrence of the dominating pattern in the extended
/// underlying permutation; for the monotone and closure rules, the
/// occurrence of `target` in the recorded closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCertificate {
    pub rule: RuleKind,
    pub dominating: Permutation,
    pub source: MeshPattern,
    pub target: MeshPattern,
    pub box_: GridBox,
    pub witness: Occurrence,
    /// Point-insertion variant that led to the closure (closure rule only).
    pub variant: Option<InsertVariant>,
    /// Closed pattern containing the witness (monotone and closure rules).
    pub closure: Option<MeshPattern>,
}

impl RuleCertificate {
    /// One-line `key=value` form, parseable by [`RuleCertificate::from_str`].
    pub fn to_line(&self) -> String {
        let mut line = format!(
            "rule={} dom={} source={} box={} target={} witness={}",
            self.rule, self.dominating, self.source, self.box_, self.target, self.witness
        );
        if let Some(v) = self.variant {
            line.push_str(&format!(" variant={v}"));
        }
        if let Some(c) = &self.closure {
            line.push_str(&format!(" closure={c}"));
        }
        line
    }

    /// Recompute the named rule from the recorded inputs and require the
    /// identical certificate back. A tampered or stale record fails.
    pub fn replay(&self) -> bool {
        let recomputed = match self.rule {
            RuleKind::R1 => rule1(&self.source, self.box_, &self.dominating),
            RuleKind::R2aI | RuleKind::R2aII | RuleKind::R2bI | RuleKind::R2bII => {
                rule2(&self.source, self.box_, &self.dominating)
            }
            RuleKind::R3 => rule3(&self.source, self.box_, &self.dominating),
        };
        recomputed.as_ref() == Some(self)
    }
}

impl fmt::Display for RuleCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl FromStr for RuleCertificate {
    type Err = ParseError;

    fn from_str(line: &str) -> Result<Self, ParseError> {
        let base = line.as_ptr() as usize;
        let mut rule = None;
        let mut dominating = None;
        let mut source = None;
        let mut target = None;
        let mut box_ = None;
        let mut witness = None;
        let mut variant = None;
        let mut closure = None;
        for token in line.split_whitespace() {
            let pos = token.as_ptr() as usize - base;
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| ParseError::new(pos, format!("expected key=value, got {token:?}")))?;
            let vpos = pos + key.len() + 1;
            let shift = |e: ParseError| ParseError::new(vpos + e.pos, e.msg);
            let filled = match key {
                "rule" => rule.replace(value.parse::<RuleKind>().map_err(shift)?).is_some(),
                "dom" => dominating
                    .replace(value.parse::<Permutation>().map_err(shift)?)
                    .is_some(),
                "source" => source.replace(value.parse::<MeshPattern>().map_err(shift)?).is_some(),
                "target" => target.replace(value.parse::<MeshPattern>().map_err(shift)?).is_some(),
                "box" => box_.replace(parse_box(value).map_err(shift)?).is_some(),
                "witness" => witness.replace(value.parse::<Occurrence>().map_err(shift)?).is_some(),
                "variant" => variant
                    .replace(value.parse::<InsertVariant>().map_err(shift)?)
                    .is_some(),
                "closure" => {
                    closure.replace(value.parse::<MeshPattern>().map_err(shift)?).is_some()
                }
                other => return Err(ParseError::new(pos, format!("unknown field {other:?}"))),
            };
            if filled {
                return Err(ParseError::new(pos, format!("duplicate field {key:?}")));
            }
        }
        let missing = |name: &str| ParseError::new(0, format!("missing field {name:?}"));
        Ok(RuleCertificate {
            rule: rule.ok_or_else(|| missing("rule"))?,
            dominating: dominating.ok_or_else(|| missing("dom"))?,
            source: source.ok_or_else(|| missing("source"))?,
            target: target.ok_or_else(|| missing("target"))?,
            box_: box_.ok_or_else(|| missing("box"))?,
            witness: witness.ok_or_else(|| missing("witness"))?,
            variant,
            closure,
        })
    }
}

fn parse_box(s: &str) -> Result<GridBox, ParseError> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| ParseError::new(0, format!("expected i,j, got {s:?}")))?;
    let parse = |t: &str, pos: usize| {
        t.parse::<u8>()
            .map_err(|_| ParseError::new(pos, format!("invalid box coordinate {t:?}")))
    };
    Ok(GridBox::new(parse(i, 0)?, parse(j, i.len() + 1)?))
}

/// A rule can shade `b` only if it is on the grid and not already shaded.
fn insertable(source: &MeshPattern, b: GridBox) -> bool {
    (b.i as usize) <= source.k() && (b.j as usize) <= source.k() && !source.shaded(b)
}

/// Point-insertion rule: shading box `b` changes nothing if a point placed
/// in `b` would complete an occurrence of the dominating pattern. The test
/// depends only on the underlying permutation and the box, so it inserts a
/// point into `b` and looks for the dominating pattern classically.
pub fn rule1(
    source: &MeshPattern,
    b: GridBox,
    dominating: &Permutation,
) -> Option<RuleCertificate> {
    if dominating.len() > source.underlying().len() + 1 || !insertable(source, b) {
        return None;
    }
    let target = source.with_box(b).expect("insertable box is on the grid");
    let grown = insert_point(source, b).expect("insertable box admits a point");
    let witness = first_occurrence(grown.underlying(), dominating)?;
    Some(RuleCertificate {
        rule: RuleKind::R1,
        dominating: dominating.clone(),
        source: source.clone(),
        target,
        box_: b,
        witness,
        variant: None,
        closure: None,
    })
}

/// Directions in which the content of box `b` is forced monotone within any
/// host avoiding `dominating`: if inserting an adjacent ascent (descent)
/// into `b` creates the dominating pattern, no occurrence can have an ascent
/// (descent) inside the box, so its region is decreasing (increasing). Only
/// the underlying permutation matters; shading never blocks the test.
pub fn region_monotone(source: &MeshPattern, b: GridBox, dominating: &Permutation) -> MonotoneSet {
    let none = MonotoneSet { decreasing: false, increasing: false };
    if dominating.len() > source.underlying().len() + 2 {
        return none;
    }
    let bare = MeshPattern::classical(source.underlying().clone());
    let forces = |kind| match insert_monotone(&bare, b, kind) {
        Ok(grown) => contains_classical(grown.underlying(), dominating),
        Err(_) => false,
    };
    MonotoneSet { decreasing: forces(MonotoneKind::Ascent), increasing: forces(MonotoneKind::Descent) }
}

/// Largest shading reachable from `p` by the point-insertion rule alone:
/// every box it certifies is coincident-shadable, so all of them join the
/// shading at once. Certification depends only on the underlying
/// permutation, so one pass settles the fixpoint; the loop guards the
/// invariant rather than the count.
pub fn shading_closure(p: &MeshPattern, dominating: &Permutation) -> MeshPattern {
    let mut closed = p.clone();
    loop {
        let side = closed.k() as u8 + 1;
        let mut grew = false;
        for i in 0..side {
            for j in 0..side {
                let b = GridBox::new(i, j);
                if !closed.shaded(b) && rule1(&closed, b, dominating).is_some() {
                    closed = closed.with_box(b).expect("box checked unshaded");
                    grew = true;
                }
            }
        }
        if !grew {
            return closed;
        }
    }
}

/// One branch of the monotone-region rule: the forced direction of the
/// box's region and the quadrant around the adjoined extremal point that
/// the rest of the region may still occupy. A decreasing region lies
/// above-left of its bottommost point and below-right of its topmost; an
/// increasing region lies above-right of its bottommost point and
/// below-left of its topmost.
struct MonotoneBranch {
    kind: RuleKind,
    monotone: MonotoneKind,
    open: (u8, u8),
}

const MONOTONE_BRANCHES: [MonotoneBranch; 4] = [
    MonotoneBranch { kind: RuleKind::R2aI, monotone: MonotoneKind::Ascent, open: (0, 1) },
    MonotoneBranch { kind: RuleKind::R2aII, monotone: MonotoneKind::Ascent, open: (1, 0) },
    MonotoneBranch { kind: RuleKind::R2bI, monotone: MonotoneKind::Descent, open: (1, 1) },
    MonotoneBranch { kind: RuleKind::R2bII, monotone: MonotoneKind::Descent, open: (0, 0) },
];

/// Monotone-region rule: shading box `b` changes nothing if its region is
/// forced monotone and adjoining the region's extremal point to the pattern
/// yields a one-point extension whose closure contains the target as a
/// subpattern. The extremal point of a monotone run has empty space on
/// three sides, so the extension shades every quadrant around the new point
/// except the one holding the rest of the run; any occurrence of the source
/// with a point in the box is then an occurrence of the extension, and the
/// subpattern containment turns it into one of the target. The four
/// branches are tried in a fixed order and the first success wins.
pub fn rule2(
    source: &MeshPattern,
    b: GridBox,
    dominating: &Permutation,
) -> Option<RuleCertificate> {
    if dominating.len() > source.underlying().len() + 2 || !insertable(source, b) {
        return None;
    }
    let target = source.with_box(b).expect("insertable box is on the grid");
    let monotone = region_monotone(source, b, dominating);
    for branch in &MONOTONE_BRANCHES {
        let secured = match branch.monotone {
            MonotoneKind::Ascent => monotone.decreasing,
            MonotoneKind::Descent => monotone.increasing,
        };
        if !secured {
            continue;
        }
        let mut grown = insert_point(source, b).expect("insertable box admits a point");
        for quadrant in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            if quadrant == branch.open {
                continue;
            }
            grown = grown
                .with_box(GridBox::new(b.i + quadrant.0, b.j + quadrant.1))
                .expect("quadrants of an inserted point are on the grown grid");
        }
        let closed = shading_closure(&grown, dominating);
        if let Some(witness) = subpattern_witness(&closed, &target) {
            return Some(RuleCertificate {
                rule: branch.kind,
                dominating: dominating.clone(),
                source: source.clone(),
                target,
                box_: b,
                witness,
                variant: None,
                closure: Some(closed),
            });
        }
    }
    None
}

/// Closure rule: shading box `b` changes nothing if some one-point extension
/// of the pattern into `b`, after closing its shading under the
/// point-insertion rule, contains `source + b` as a subpattern. Any host
/// occurrence of `source` with a point in `b` then yields an occurrence of
/// the extension, hence of the target. Extensions are tried in a fixed
/// order: plain first, then the four directed variants.
pub fn rule3(
    source: &MeshPattern,
    b: GridBox,
    dominating: &Permutation,
) -> Option<RuleCertificate> {
    if !insertable(source, b) {
        return None;
    }
    let target = source.with_box(b).expect("insertable box is on the grid");
    for (variant, grown) in insert_point_all(source, b) {
        let closed = shading_closure(&grown, dominating);
        if let Some(witness) = subpattern_witness(&closed, &target) {
            return Some(RuleCertificate {
                rule: RuleKind::R3,
                dominating: dominating.clone(),
                source: source.clone(),
                target,
                box_: b,
                witness,
                variant: Some(variant),
                closure: Some(closed),
            });
        }
    }
    None
}

fn first_certificate(
    source: &MeshPattern,
    b: GridBox,
    dominating: &Permutation,
    rules: RuleSet,
) -> Option<RuleCertificate> {
    if rules.includes(RuleSet::R1) {
        if let Some(c) = rule1(source, b, dominating) {
            return Some(c);
        }
    }
    if rules.includes(RuleSet::R2) {
        if let Some(c) = rule2(source, b, dominating) {
            return Some(c);
        }
    }
    if rules.includes(RuleSet::R3) {
        if let Some(c) = rule3(source, b, dominating) {
            return Some(c);
        }
    }
    None
}

/// Partition all shadings of `underlying` into classes coincident under
/// `dominating`, combining the unconditional baseline (shadings whose
/// avoider sets agree on every permutation up to the baseline bound) with
/// the transitive closure of all certificates the enabled rules emit.
pub fn rule_partition(
    underlying: &Permutation,
    dominating: &Permutation,
    rules: RuleSet,
) -> EquivalencePartition {
    rule_partition_with_certificates(underlying, dominating, rules, ExecMode::default()).0
}

/// [`rule_partition`] plus every certificate found, ordered by source
/// shading and box.
pub fn rule_partition_with_certificates(
    underlying: &Permutation,
    dominating: &Permutation,
    rules: RuleSet,
    mode: ExecMode,
) -> (EquivalencePartition, Vec<RuleCertificate>) {
    let k = underlying.len();
    assert!(k == 1 || k == 2, "rule partitions cover underlying lengths 1 and 2, got {k}");
    let side = k + 1;
    let count = 1usize << (side * side);
    let mut uf = UnionFind::new(count);

    let baseline = baseline_class_ids(underlying);
    let mut first_of_class = vec![usize::MAX; count];
    for (mask, &id) in baseline.iter().enumerate() {
        let seen = &mut first_of_class[id as usize];
        if *seen == usize::MAX {
            *seen = mask;
        } else {
            uf.union(*seen, mask);
        }
    }

    let per_mask = exec::map_range(mode, count, |mask| {
        let source = MeshPattern::from_mask(underlying.clone(), mask as u64);
        let mut found = Vec::new();
        for i in 0..side as u8 {
            for j in 0..side as u8 {
                let b = GridBox::new(i, j);
                if source.shaded(b) {
                    continue;
                }
                if let Some(cert) = first_certificate(&source, b, dominating, rules) {
                    found.push(cert);
                }
            }
        }
        found
    });
    let certificates: Vec<RuleCertificate> = per_mask.into_iter().flatten().collect();
    for cert in &certificates {
        uf.union(cert.source.shading_mask() as usize, cert.target.shading_mask() as usize);
    }

    let patterns: Vec<MeshPattern> = (0..count)
        .map(|mask| MeshPattern::from_mask(underlying.clone(), mask as u64))
        .collect();
    let partition = EquivalencePartition::from_groups(
        dominating.clone(),
        BASELINE_MAX_LEN,
        Provenance::Rules(rules),
        patterns,
        uf.classes(),
    );
    (partition, certificates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn m(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    fn gb(i: u8, j: u8) -> GridBox {
        GridBox::new(i, j)
    }

    fn certified_boxes(underlying: &str, dominating: &str) -> BTreeSet<GridBox> {
        let source = m(&format!("{underlying}|"));
        let dom = p(dominating);
        let side = source.k() as u8 + 1;
        (0..side)
            .flat_map(|i| (0..side).map(move |j| gb(i, j)))
            .filter(|&b| rule1(&source, b, &dom).is_some())
            .collect()
    }

    #[test]
    fn point_rule_certified_boxes_per_dominating_pattern() {
        assert_eq!(certified_boxes("21", "321"), BTreeSet::from([gb(0, 2), gb(1, 1), gb(2, 0)]));
        assert_eq!(certified_boxes("21", "231"), BTreeSet::from([gb(0, 1), gb(1, 2)]));
        assert_eq!(certified_boxes("12", "231"), BTreeSet::from([gb(2, 0)]));
        assert_eq!(certified_boxes("12", "321"), BTreeSet::new());
    }

    #[test]
    fn point_rule_certificate_line() {
        let cert = rule1(&m("21|1,0;1,1;1,2;2,2"), gb(2, 0), &p("321")).unwrap();
        assert_eq!(
            cert.to_line(),
            "rule=R1 dom=321 source=21|1,0;1,1;1,2;2,2 box=2,0 \
             target=21|1,0;1,1;1,2;2,0;2,2 witness=1,2,3"
        );
        assert!(cert.replay());
    }

    #[test]
    fn point_rule_rejects_unhelpful_boxes() {
        // Inserting at (1,1) into 21 gives 321, which has no 231.
        assert!(rule1(&m("21|"), gb(1, 1), &p("231")).is_none());
        // Already-shaded and out-of-range boxes certify nothing.
        assert!(rule1(&m("21|1,1"), gb(1, 1), &p("321")).is_none());
        assert!(rule1(&m("21|"), gb(3, 0), &p("321")).is_none());
        // Guard: dominating pattern longer than any one-point extension.
        assert!(rule1(&m("1|"), gb(0, 0), &p("321")).is_none());
    }

    #[test]
    fn monotone_regions_follow_forced_insertions() {
        let s = m("21|0,0;0,1;0,2;1,0;2,1");
        assert_eq!(
            region_monotone(&s, gb(1, 1), &p("231")),
            MonotoneSet { decreasing: true, increasing: false }
        );
        let s = m("12|0,0;0,2;1,1;1,2;2,1");
        assert_eq!(
            region_monotone(&s, gb(0, 1), &p("321")),
            MonotoneSet { decreasing: false, increasing: true }
        );
        // Guard: dominating pattern longer than the two-point extension.
        let none = MonotoneSet { decreasing: false, increasing: false };
        assert_eq!(region_monotone(&MeshPattern::classical(p("")), gb(0, 0), &p("231")), none);
        // Out-of-range box gives no information.
        assert_eq!(region_monotone(&m("21|"), gb(3, 3), &p("231")), none);
    }

    #[test]
    fn monotone_rule_adjoins_the_topmost_point_of_a_decreasing_region() {
        let source = m("21|0,0;0,1;0,2;1,0;2,1");
        let cert = rule2(&source, gb(1, 1), &p("231")).unwrap();
        assert_eq!(cert.rule, RuleKind::R2aII);
        assert_eq!(cert.target, m("21|0,0;0,1;0,2;1,0;1,1;2,1"));
        assert_eq!(cert.witness.indices(), &[1, 2]);
        assert_eq!(
            cert.to_line(),
            "rule=R2a-ii dom=231 source=21|0,0;0,1;0,2;1,0;2,1 box=1,1 \
             target=21|0,0;0,1;0,2;1,0;1,1;2,1 witness=1,2 \
             closure=321|0,0;0,1;0,2;0,3;1,0;1,1;1,2;1,3;2,0;2,2;2,3;3,1;3,2"
        );
        assert!(cert.replay());
    }

    #[test]
    fn monotone_rule_certifies_a_single_point_pattern() {
        let cert = rule2(&m("1|0,0;1,1"), gb(0, 1), &p("231")).unwrap();
        assert_eq!(cert.rule, RuleKind::R2aII);
        assert_eq!(cert.target, m("1|0,0;0,1;1,1"));
        assert_eq!(cert.closure, Some(m("21|0,0;0,1;0,2;1,0;1,2;2,1;2,2")));
        assert_eq!(cert.witness.indices(), &[1]);
        assert!(cert.replay());
    }

    #[test]
    fn monotone_rule_respects_side_conditions() {
        // One extra shaded box defeats the subpattern test in all branches.
        let source = m("21|0,0;0,1;0,2;1,0;2,0;2,1");
        assert!(rule2(&source, gb(1, 1), &p("231")).is_none());
    }

    #[test]
    fn monotone_rule_merges_nothing_for_12_under_321() {
        let r1 = rule_partition(&p("12"), &p("321"), RuleSet::R1);
        let r12 = rule_partition(&p("12"), &p("321"), RuleSet::R12);
        assert_eq!(r1.classes().collect::<Vec<_>>(), r12.classes().collect::<Vec<_>>());
    }

    #[test]
    fn closure_adds_exactly_the_certified_boxes() {
        let start = m("213|0,3;2,0;2,1;3,0;3,1;3,2");
        let closed = shading_closure(&start, &p("231"));
        assert_eq!(closed, m("213|0,1;0,3;1,2;1,3;2,0;2,1;3,0;3,1;3,2"));
        // Idempotent, and a single pass reaches the fixpoint: certification
        // ignores shading, so the closure is the union of all certified
        // boxes regardless of insertion order.
        assert_eq!(shading_closure(&closed, &p("231")), closed);
        for mask in (0..512u64).step_by(31) {
            let source = MeshPattern::from_mask(p("21"), mask);
            let closed = shading_closure(&source, &p("321"));
            let expected: BTreeSet<GridBox> = source
                .shading()
                .iter()
                .copied()
                .chain(certified_boxes("21", "321"))
                .collect();
            assert_eq!(closed.shading(), &expected);
        }
        // A fully shaded pattern cannot grow.
        let full = MeshPattern::from_mask(p("12"), 0x1ff);
        assert_eq!(shading_closure(&full, &p("231")), full);
    }

    #[test]
    fn closure_rule_certifies_via_a_directed_insertion() {
        let cert = rule3(&m("12|0,2;2,0;2,1"), gb(1, 0), &p("231")).unwrap();
        assert_eq!(cert.rule, RuleKind::R3);
        assert_eq!(cert.variant, Some(InsertVariant::Right));
        assert_eq!(cert.closure, Some(m("213|0,1;0,3;1,2;1,3;2,0;2,1;3,0;3,1;3,2")));
        assert_eq!(cert.witness.indices(), &[2, 3]);
        assert_eq!(cert.target, m("12|0,2;1,0;2,0;2,1"));
        assert!(cert.replay());
    }

    #[test]
    fn closure_rule_on_corner_boxes() {
        // The lowest-leftmost box of 12 closes under 321 via the downward
        // variant: a point below-left of an occurrence is itself the start
        // of one.
        let cert = rule3(&m("12|"), gb(0, 0), &p("321")).unwrap();
        assert_eq!(cert.variant, Some(InsertVariant::Down));
        assert_eq!(cert.closure, Some(m("123|0,0;1,0")));
        assert_eq!(cert.witness.indices(), &[1, 2]);
        // Not so for 21: the host 132 avoids 321, contains 21 with nothing
        // below-left, but has no occurrence once (0,0) is shaded.
        assert_eq!(rule3(&m("21|"), gb(0, 0), &p("321")), None);
    }

    #[test]
    fn certificate_lines_round_trip() {
        let certs = [
            rule1(&m("21|1,0;1,1;1,2;2,2"), gb(2, 0), &p("321")).unwrap(),
            rule2(&m("21|0,0;0,1;0,2;1,0;2,1"), gb(1, 1), &p("231")).unwrap(),
            rule3(&m("12|0,2;2,0;2,1"), gb(1, 0), &p("231")).unwrap(),
        ];
        for cert in certs {
            let parsed: RuleCertificate = cert.to_line().parse().unwrap();
            assert_eq!(parsed, cert);
            assert!(parsed.replay());
        }
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let line = rule1(&m("21|"), gb(0, 1), &p("231")).unwrap().to_line();
        let tampered: RuleCertificate =
            line.replace("witness=1,2,3", "witness=1,3").parse().unwrap();
        assert_ne!(line, tampered.to_line());
        assert!(!tampered.replay());
        // Inserting at (0,2) gives 321 instead, which has no 231 at all.
        let wrong_box: RuleCertificate = line.replace("box=0,1", "box=0,2").parse().unwrap();
        assert!(!wrong_box.replay());
    }

    #[test]
    fn certificate_parse_errors_carry_positions() {
        let err = "rule=R9 dom=321".parse::<RuleCertificate>().unwrap_err();
        assert_eq!(err.pos, 5);
        let err = "rule=R1".parse::<RuleCertificate>().unwrap_err();
        assert!(err.msg.contains("missing field"));
        let err = "rule=R1 rule=R1".parse::<RuleCertificate>().unwrap_err();
        assert!(err.msg.contains("duplicate"));
        let err = "witness".parse::<RuleCertificate>().unwrap_err();
        assert!(err.msg.contains("key=value"));
    }

    #[test]
    fn rule_set_labels_round_trip() {
        for s in ["R1", "R2", "R3", "R12", "R13", "R23", "R123"] {
            let set: RuleSet = s.parse().unwrap();
            assert_eq!(set.label(), s);
        }
        assert_eq!("R12".parse::<RuleSet>().unwrap(), RuleSet::R1.union(RuleSet::R2));
        assert!("R21".parse::<RuleSet>().is_err());
        assert!("R11".parse::<RuleSet>().is_err());
        assert!("R4".parse::<RuleSet>().is_err());
        assert!("R".parse::<RuleSet>().is_err());
        assert!("12".parse::<RuleSet>().is_err());
    }

    #[test]
    fn single_point_partitions_are_deterministic_and_nested() {
        let dom = p("231");
        let one = p("1");
        let (r1, certs) =
            rule_partition_with_certificates(&one, &dom, RuleSet::R1, ExecMode::Sequential);
        let (r1p, certs_p) =
            rule_partition_with_certificates(&one, &dom, RuleSet::R1, ExecMode::Parallel);
        assert_eq!(r1, r1p);
        assert_eq!(certs, certs_p);
        assert!(certs.iter().all(RuleCertificate::replay));
        assert_eq!(r1.universe().len(), 16);

        let r12 = rule_partition(&one, &dom, RuleSet::R12);
        let r123 = rule_partition(&one, &dom, RuleSet::R123);
        assert!(r12.class_count() <= r1.class_count());
        assert!(r123.class_count() <= r12.class_count());
        // More rules only merge: every smaller-set class sits inside one
        // larger-set class.
        for members in r1.classes() {
            let home = r12.class_of(&r1.universe()[members[0]]).unwrap();
            for &t in members {
                assert_eq!(r12.class_of(&r1.universe()[t]), Some(home));
            }
        }
    }

    #[test]
    fn certificates_respect_rule_sets() {
        let (_, certs) = rule_partition_with_certificates(
            &p("1"),
            &p("231"),
            RuleSet::R12,
            ExecMode::Sequential,
        );
        assert!(!certs.is_empty());
        assert!(certs.iter().all(|c| c.rule != RuleKind::R3));
        assert!(certs.iter().all(|c| c.dominating == p("231")));
    }
}
