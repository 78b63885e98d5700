//! Computational classification of shadings: coincidence partitions from
//! avoider sweeps, reconciliation against rule partitions, symmetry
//! reduction, and Wilf-equivalence grouping by counts.

use crate::avoidance::{avoider_levels, AvoidanceError};
use crate::engine::{refine_by_key, sweep_shadings};
use crate::exec::ExecMode;
use crate::mesh::{GridBox, MeshPattern};
use crate::perm::{apply_symmetry, Symmetry};
use crate::rules::RuleSet;
use crate::Permutation;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("partitions cover different universes")]
    UniverseMismatch,
    #[error("partitions have different dominating patterns ({0} vs {1})")]
    DominatingMismatch(Permutation, Permutation),
    #[error("symmetry reduction applies under dominating pattern 231, got {0}")]
    WrongDominating(Permutation),
    #[error("partitions disagree on parameters and cannot be joined")]
    JoinMismatch,
}

/// How a partition was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Avoider-set equality observed up to the length bound.
    Comp,
    /// Transitive closure of rule certificates over the given rule subset.
    Rules(RuleSet),
    /// Coincidence classes merged along the rci symmetry.
    Symmetry,
    /// Equal avoider counts (not sets) up to the length bound.
    WilfComp,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Comp => write!(f, "comp"),
            Provenance::Rules(rs) => write!(f, "{}", rs.label()),
            Provenance::Symmetry => write!(f, "symmetry"),
            Provenance::WilfComp => write!(f, "wilf-comp"),
        }
    }
}

/// A labeled partition of a set of mesh patterns. Members and classes are
/// kept in the canonical order of their serialized form, so equal inputs
/// produce byte-identical reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalencePartition {
    dominating: Permutation,
    max_len: usize,
    provenance: Provenance,
    universe: Vec<MeshPattern>,
    keys: Vec<String>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl EquivalencePartition {
    /// Canonicalize `groups` (index lists into `patterns`) into a partition:
    /// members sort by serialized key, classes sort by their representative.
    pub(crate) fn from_groups(
        dominating: Permutation,
        max_len: usize,
        provenance: Provenance,
        patterns: Vec<MeshPattern>,
        groups: Vec<Vec<usize>>,
    ) -> Self {
        let raw_keys: Vec<String> = patterns.iter().map(ToString::to_string).collect();
        let mut order: Vec<usize> = (0..patterns.len()).collect();
        order.sort_by(|&a, &b| raw_keys[a].cmp(&raw_keys[b]));
        let mut rank = vec![0usize; patterns.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let universe: Vec<MeshPattern> = order.iter().map(|&i| patterns[i].clone()).collect();
        let keys: Vec<String> = order.iter().map(|&i| raw_keys[i].clone()).collect();
        let mut classes: Vec<Vec<usize>> = groups
            .into_iter()
            .map(|g| {
                let mut g: Vec<usize> = g.into_iter().map(|i| rank[i]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        classes.sort_by(|a, b| a[0].cmp(&b[0]));
        let mut class_of = vec![0usize; universe.len()];
        for (c, members) in classes.iter().enumerate() {
            for &m in members {
                class_of[m] = c;
            }
        }
        EquivalencePartition { dominating, max_len, provenance, universe, keys, classes, class_of }
    }

    pub fn dominating(&self) -> &Permutation {
        &self.dominating
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn universe(&self) -> &[MeshPattern] {
        &self.universe
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter().map(Vec::as_slice)
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = &MeshPattern> {
        self.classes[class].iter().map(|&m| &self.universe[m])
    }

    /// Lexicographically minimal member of the class.
    pub fn representative(&self, class: usize) -> &MeshPattern {
        &self.universe[self.classes[class][0]]
    }

    pub fn class_of(&self, p: &MeshPattern) -> Option<usize> {
        let key = p.to_string();
        self.keys.binary_search(&key).ok().map(|i| self.class_of[i])
    }

    /// Merge two partitions over disjoint universes (same dominating
    /// pattern, bound, and provenance); classes pass through unchanged.
    pub fn join(a: &Self, b: &Self) -> Result<Self, ClassifyError> {
        if a.dominating != b.dominating {
            return Err(ClassifyError::DominatingMismatch(
                a.dominating.clone(),
                b.dominating.clone(),
            ));
        }
        if a.max_len != b.max_len || a.provenance != b.provenance {
            return Err(ClassifyError::JoinMismatch);
        }
        if a.keys.iter().any(|k| b.keys.binary_search(k).is_ok()) {
            return Err(ClassifyError::UniverseMismatch);
        }
        let patterns: Vec<MeshPattern> =
            a.universe.iter().chain(&b.universe).cloned().collect();
        let offset = a.universe.len();
        let groups: Vec<Vec<usize>> = a
            .classes
            .iter()
            .cloned()
            .chain(b.classes.iter().map(|g| g.iter().map(|&m| m + offset).collect()))
            .collect();
        Ok(Self::from_groups(a.dominating.clone(), a.max_len, a.provenance, patterns, groups))
    }

    /// Human-readable block with the headline numbers.
    pub fn summary(&self) -> String {
        format!(
            "partition {{\n  dominating: {}\n  provenance: {}\n  max-len: {}\n  universe: {}\n  classes: {}\n}}\n",
            self.dominating,
            self.provenance,
            self.max_len,
            self.universe.len(),
            self.classes.len()
        )
    }
}

/// Group all shadings of `underlying` by equality of their avoider sets
/// within the dominating pattern's avoiders, for every length up to `n_max`.
pub fn comp_partition(
    underlying: &Permutation,
    dominating: &Permutation,
    n_max: usize,
) -> Result<EquivalencePartition, AvoidanceError> {
    comp_partition_with_mode(underlying, dominating, n_max, ExecMode::default())
}

pub fn comp_partition_with_mode(
    underlying: &Permutation,
    dominating: &Permutation,
    n_max: usize,
    mode: ExecMode,
) -> Result<EquivalencePartition, AvoidanceError> {
    let side = underlying.len() + 1;
    let count = 1usize << (side * side);
    let mut ids = vec![0u16; count];
    for hosts in &avoider_levels(dominating, n_max)? {
        let sweep = sweep_shadings(underlying, hosts, mode);
        refine_by_key(&mut ids, |s| sweep.avoid_row(s).to_vec());
    }
    let patterns: Vec<MeshPattern> =
        (0..count).map(|s| MeshPattern::from_mask(underlying.clone(), s as u64)).collect();
    let mut groups: BTreeMap<u16, Vec<usize>> = BTreeMap::new();
    for (s, &id) in ids.iter().enumerate() {
        groups.entry(id).or_default().push(s);
    }
    Ok(EquivalencePartition::from_groups(
        dominating.clone(),
        n_max,
        Provenance::Comp,
        patterns,
        groups.into_values().collect(),
    ))
}

/// Group the 1024 length-2 mesh patterns (both underlyings) by their avoider
/// counts alone for every length up to `n_max`.
pub fn wilf_comp_partition(
    dominating: &Permutation,
    n_max: usize,
) -> Result<EquivalencePartition, AvoidanceError> {
    wilf_comp_partition_with_mode(dominating, n_max, ExecMode::default())
}

pub fn wilf_comp_partition_with_mode(
    dominating: &Permutation,
    n_max: usize,
    mode: ExecMode,
) -> Result<EquivalencePartition, AvoidanceError> {
    let levels = avoider_levels(dominating, n_max)?;
    let mut patterns = Vec::with_capacity(1024);
    let mut count_vectors: Vec<Vec<usize>> = Vec::with_capacity(1024);
    for tau in ["12", "21"] {
        let underlying: Permutation = tau.parse().expect("fixed pattern literal");
        let mut counts: Vec<Vec<usize>> =
            (0..512).map(|_| Vec::with_capacity(n_max + 1)).collect();
        for hosts in &levels {
            let sweep = sweep_shadings(&underlying, hosts, mode);
            for (s, c) in counts.iter_mut().enumerate() {
                c.push(sweep.avoid_count(s));
            }
        }
        for (s, c) in counts.into_iter().enumerate() {
            patterns.push(MeshPattern::from_mask(underlying.clone(), s as u64));
            count_vectors.push(c);
        }
    }
    let mut groups: BTreeMap<&Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, vector) in count_vectors.iter().enumerate() {
        groups.entry(vector).or_default().push(i);
    }
    Ok(EquivalencePartition::from_groups(
        dominating.clone(),
        n_max,
        Provenance::WilfComp,
        patterns,
        groups.into_values().collect(),
    ))
}

/// Transform a mesh pattern by a grid symmetry: the underlying permutation
/// maps through [`apply_symmetry`] and each shaded box follows the same
/// motion of the grid.
pub fn mesh_symmetry(p: &MeshPattern, s: Symmetry) -> MeshPattern {
    let k = p.k() as u8;
    let underlying = apply_symmetry(p.underlying(), s);
    let mapped = p.shading().iter().map(|b| match s {
        Symmetry::Reverse => GridBox::new(k - b.i, b.j),
        Symmetry::Complement => GridBox::new(b.i, k - b.j),
        Symmetry::Inverse => GridBox::new(b.j, b.i),
        Symmetry::Rci => GridBox::new(k - b.j, k - b.i),
    });
    MeshPattern::new(underlying, mapped).expect("grid symmetries map the grid onto itself")
}

/// Merge classes related by the rci symmetry, the only grid symmetry fixing
/// the dominating pattern 231. The input must span shadings closed under
/// rci (each underlying's full shading set is).
pub fn symmetry_reduce_231(
    part: &EquivalencePartition,
) -> Result<EquivalencePartition, ClassifyError> {
    let two_three_one: Permutation = "231".parse().expect("fixed pattern literal");
    if part.dominating != two_three_one {
        return Err(ClassifyError::WrongDominating(part.dominating.clone()));
    }
    let mut uf = crate::unionfind::UnionFind::new(part.class_count());
    for (i, p) in part.universe.iter().enumerate() {
        let image = mesh_symmetry(p, Symmetry::Rci);
        let image_class = part.class_of(&image).ok_or(ClassifyError::UniverseMismatch)?;
        uf.union(part.class_of[i], image_class);
    }
    let groups: Vec<Vec<usize>> = uf
        .classes()
        .into_iter()
        .map(|cs| cs.into_iter().flat_map(|c| part.classes[c].iter().copied()).collect())
        .collect();
    Ok(EquivalencePartition::from_groups(
        part.dominating.clone(),
        part.max_len,
        Provenance::Symmetry,
        part.universe.clone(),
        groups,
    ))
}

/// One computational class that several rule classes failed to connect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnexplainedMerge {
    pub comp_representative: String,
    pub rule_representatives: Vec<String>,
}

/// Outcome of comparing a rule partition against a computational partition
/// over the same universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconcileReport {
    pub rule_classes: usize,
    pub comp_classes: usize,
    /// Pairs certified equivalent by rules yet computationally distinct;
    /// nonempty means a rule is unsound.
    pub violations: Vec<(String, String)>,
    pub unexplained: Vec<UnexplainedMerge>,
}

impl ReconcileReport {
    pub fn refines(&self) -> bool {
        self.violations.is_empty()
    }

    /// Number of pairwise merges observed computationally but not certified:
    /// the class-count gap when refinement holds.
    pub fn unexplained_merge_count(&self) -> usize {
        self.unexplained.iter().map(|u| u.rule_representatives.len() - 1).sum()
    }

    pub fn fully_explained(&self) -> bool {
        self.refines() && self.unexplained.is_empty()
    }
}

impl fmt::Display for ReconcileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.refines() {
            writeln!(f, "REFINEMENT VIOLATION: rule-merged patterns split computationally")?;
            for (a, b) in &self.violations {
                writeln!(f, "  {a} vs {b}")?;
            }
            return Ok(());
        }
        if self.fully_explained() {
            return writeln!(f, "fully explained: {} = {}", self.rule_classes, self.comp_classes);
        }
        writeln!(
            f,
            "{} unexplained merges ({} rule classes vs {} computational classes)",
            self.unexplained_merge_count(),
            self.rule_classes,
            self.comp_classes
        )?;
        for m in &self.unexplained {
            writeln!(
                f,
                "  comp class of {} unites rule classes: {}",
                m.comp_representative,
                m.rule_representatives.join(" ")
            )?;
        }
        Ok(())
    }
}

/// Check that the rule partition refines the computational one and list the
/// computational merges the rules leave unexplained.
pub fn reconcile(
    rule_part: &EquivalencePartition,
    comp_part: &EquivalencePartition,
) -> Result<ReconcileReport, ClassifyError> {
    if rule_part.dominating != comp_part.dominating {
        return Err(ClassifyError::DominatingMismatch(
            rule_part.dominating.clone(),
            comp_part.dominating.clone(),
        ));
    }
    if rule_part.keys != comp_part.keys {
        return Err(ClassifyError::UniverseMismatch);
    }
    let mut violations = Vec::new();
    for members in rule_part.classes() {
        let home = comp_part.class_of[members[0]];
        for &m in &members[1..] {
            if comp_part.class_of[m] != home {
                violations.push((
                    rule_part.keys[members[0]].clone(),
                    rule_part.keys[m].clone(),
                ));
            }
        }
    }
    let mut grouped: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    if violations.is_empty() {
        for (c, members) in rule_part.classes.iter().enumerate() {
            grouped
                .entry(comp_part.class_of[members[0]])
                .or_default()
                .push(rule_part.keys[rule_part.classes[c][0]].clone());
        }
    }
    let unexplained = grouped
        .into_iter()
        .filter(|(_, reps)| reps.len() > 1)
        .map(|(comp_class, mut reps)| {
            reps.sort_unstable();
            UnexplainedMerge {
                comp_representative: comp_part.keys[comp_part.classes[comp_class][0]].clone(),
                rule_representatives: reps,
            }
        })
        .collect();
    Ok(ReconcileReport {
        rule_classes: rule_part.class_count(),
        comp_classes: comp_part.class_count(),
        violations,
        unexplained,
    })
}
