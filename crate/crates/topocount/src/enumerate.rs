//! Exhaustive and formula-based computation of T(n) and T0(n).
//!
//! T(n) counts the topologies on n labeled points, T0(n) the T0 topologies.
//! Three routes are implemented:
//!
//! * a naive oracle that tries every subset family (n <= 4),
//! * a backtracking engine over preorders (n <= 7), using the bijection
//!   between topologies and preorders on a finite set,
//! * the partition identity T(n) = sum_k S(n,k) * T0(k), which extends the
//!   reach to n = 7 cheaply once T0(<= 7) is known.
//!
//! The engine assigns the n(n-1) off-diagonal relation entries in row-major
//! order and prunes any branch whose already-assigned entries violate
//! transitivity, so completed leaves are exactly the preorders. Counting
//! runs may be split into independent shards on a prefix of the entries and
//! merged by addition; the result is independent of the partitioning.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::preorder::Preorder;
use crate::set::{SetFamily, Subset, MAX_POINTS};
use crate::topology::is_topology;

/// Largest ground set the backtracking engine will walk.
pub const ENGINE_MAX_POINTS: usize = 7;
/// Largest ground set the naive family-by-family oracle will walk.
pub const NAIVE_MAX_POINTS: usize = 4;
/// Largest n accepted by [`stirling2`].
pub const STIRLING_MAX_N: usize = 20;

/// Which sequence a count belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum CountKind {
    T,
    T0,
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountKind::T => write!(f, "T"),
            CountKind::T0 => write!(f, "T0"),
        }
    }
}

impl FromStr for CountKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "T" => Ok(CountKind::T),
            "T0" => Ok(CountKind::T0),
            other => Err(format!("unknown count kind {other:?} (expected T or T0)")),
        }
    }
}

/// Provenance of a table entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CountMethod {
    Naive,
    Backtrack,
    PartitionFormula,
    Cache,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountMethod::Naive => write!(f, "naive"),
            CountMethod::Backtrack => write!(f, "backtrack"),
            CountMethod::PartitionFormula => write!(f, "partition-formula"),
            CountMethod::Cache => write!(f, "cache"),
        }
    }
}

impl FromStr for CountMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(CountMethod::Naive),
            "backtrack" => Ok(CountMethod::Backtrack),
            "partition-formula" => Ok(CountMethod::PartitionFormula),
            "cache" => Ok(CountMethod::Cache),
            other => Err(format!("unknown count method {other:?}")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CountEntry {
    pub value: u64,
    pub method: CountMethod,
}

/// A table of exact counts for one sequence, with per-entry provenance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountTable {
    kind: CountKind,
    entries: BTreeMap<usize, CountEntry>,
}

impl CountTable {
    pub fn new(kind: CountKind) -> Self {
        CountTable { kind, entries: BTreeMap::new() }
    }

    pub fn kind(&self) -> CountKind {
        self.kind
    }

    pub fn insert(&mut self, n: usize, value: u64, method: CountMethod) {
        self.entries.insert(n, CountEntry { value, method });
    }

    pub fn get(&self, n: usize) -> Option<u64> {
        self.entries.get(&n).map(|e| e.value)
    }

    pub fn entry(&self, n: usize) -> Option<&CountEntry> {
        self.entries.get(&n)
    }

    /// The entry's value, or `MissingEntry` naming the gap.
    pub fn require(&self, n: usize) -> Result<u64> {
        self.get(n).ok_or(Error::MissingEntry { kind: self.kind, n })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CountEntry)> {
        self.entries.iter().map(|(&n, e)| (n, e))
    }
}

// ---------------------------------------------------------------------------
// Naive oracle
// ---------------------------------------------------------------------------

/// Counts topologies by testing every family of subsets of an n-point set.
///
/// Walks all 2^(2^n) candidate families, so this is limited to n <= 4. It is
/// the independent ground truth the faster engines are checked against.
pub fn count_topologies_naive(n: usize) -> Result<u64> {
    if n > NAIVE_MAX_POINTS {
        return Err(Error::TooLarge {
            what: "naive topology counting",
            limit: NAIVE_MAX_POINTS,
            got: n,
        });
    }
    let subsets = 1u32 << n;
    let families: u64 = 1 << subsets;
    let mut count = 0u64;
    for fam in 0..families {
        let members = (0..subsets)
            .filter(|&s| fam & (1 << s) != 0)
            .map(|s| Subset::from_bits(n, s as u16));
        if is_topology(&SetFamily::new(n, members)) {
            count += 1;
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// Backtracking engine
// ---------------------------------------------------------------------------

fn off_diagonal_positions(n: usize) -> Vec<(u8, u8)> {
    let mut positions = Vec::with_capacity(n * n.saturating_sub(1));
    for x in 0..n {
        for y in 0..n {
            if x != y {
                positions.push((x as u8, y as u8));
            }
        }
    }
    positions
}

/// Backtracking state. `rows_true[x]` holds the bits of `{y : x <= y}` among
/// assigned-true entries plus the diagonal; `rows_false` the assigned-false
/// entries; `cols_*` the transposes. `path` records the branch taken at each
/// depth so a prefix can be replayed on a fresh state.
struct Search<'a> {
    n: usize,
    positions: &'a [(u8, u8)],
    antisymmetric: bool,
    rows_true: [u16; MAX_POINTS],
    cols_true: [u16; MAX_POINTS],
    rows_false: [u16; MAX_POINTS],
    cols_false: [u16; MAX_POINTS],
    path: u64,
}

impl<'a> Search<'a> {
    fn new(n: usize, positions: &'a [(u8, u8)], antisymmetric: bool) -> Self {
        let mut s = Search {
            n,
            positions,
            antisymmetric,
            rows_true: [0; MAX_POINTS],
            cols_true: [0; MAX_POINTS],
            rows_false: [0; MAX_POINTS],
            cols_false: [0; MAX_POINTS],
            path: 0,
        };
        for x in 0..n {
            s.rows_true[x] = 1 << x;
            s.cols_true[x] = 1 << x;
        }
        s
    }

    #[inline]
    fn assign(&mut self, depth: usize, value: bool) {
        let (a, b) = self.positions[depth];
        let (a, b) = (a as usize, b as usize);
        if value {
            self.rows_true[a] |= 1 << b;
            self.cols_true[b] |= 1 << a;
            self.path |= 1 << depth;
        } else {
            self.rows_false[a] |= 1 << b;
            self.cols_false[b] |= 1 << a;
        }
    }

    #[inline]
    fn retract(&mut self, depth: usize, value: bool) {
        let (a, b) = self.positions[depth];
        let (a, b) = (a as usize, b as usize);
        if value {
            self.rows_true[a] &= !(1 << b);
            self.cols_true[b] &= !(1 << a);
            self.path &= !(1 << depth);
        } else {
            self.rows_false[a] &= !(1 << b);
            self.cols_false[b] &= !(1 << a);
        }
    }

    /// May `x <= y` be set without an already-visible transitivity (or, in
    /// antisymmetric mode, antisymmetry) violation?
    #[inline]
    fn can_set_true(&self, a: usize, b: usize) -> bool {
        if self.antisymmetric && self.rows_true[b] & (1 << a) != 0 {
            return false;
        }
        // a <= b and b <= z force a <= z: no successor of b may be
        // assigned-false from a. Symmetrically for predecessors of a.
        self.rows_true[b] & self.rows_false[a] == 0
            && self.cols_true[a] & self.cols_false[b] == 0
    }

    /// May `x <= y` be refused? Only if no assigned chain already forces it.
    #[inline]
    fn can_set_false(&self, a: usize, b: usize) -> bool {
        self.rows_true[a] & self.cols_true[b] == 0
    }

    /// Depth-first walk from `depth` to `stop`, invoking `sink` at each state
    /// of depth `stop` (a full preorder when `stop == positions.len()`).
    /// The true branch is explored first, making visit order deterministic.
    fn run<F: FnMut(&Search)>(&mut self, depth: usize, stop: usize, sink: &mut F) {
        if depth == stop {
            sink(self);
            return;
        }
        let (a, b) = self.positions[depth];
        let (a, b) = (a as usize, b as usize);
        if self.can_set_true(a, b) {
            self.assign(depth, true);
            self.run(depth + 1, stop, sink);
            self.retract(depth, true);
        }
        if self.can_set_false(a, b) {
            self.assign(depth, false);
            self.run(depth + 1, stop, sink);
            self.retract(depth, false);
        }
    }

    fn replay_prefix(&mut self, prefix: u64, len: usize) {
        for depth in 0..len {
            self.assign(depth, prefix & (1 << depth) != 0);
        }
    }

    fn retract_prefix(&mut self, prefix: u64, len: usize) {
        for depth in (0..len).rev() {
            self.retract(depth, prefix & (1 << depth) != 0);
        }
    }

    fn preorder(&self) -> Preorder {
        Preorder::from_rows_unchecked(self.n, self.rows_true[..self.n].to_vec())
    }
}

fn check_engine_reach(n: usize) -> Result<()> {
    if n > ENGINE_MAX_POINTS {
        Err(Error::TooLarge {
            what: "preorder enumeration",
            limit: ENGINE_MAX_POINTS,
            got: n,
        })
    } else {
        Ok(())
    }
}

/// Invokes `visitor` once per preorder on n points, in a fixed deterministic
/// order, and returns the total, which equals T(n).
pub fn enumerate_preorders<F: FnMut(&Preorder)>(n: usize, mut visitor: F) -> Result<u64> {
    check_engine_reach(n)?;
    let positions = off_diagonal_positions(n);
    let stop = positions.len();
    let mut search = Search::new(n, &positions, false);
    let mut total = 0u64;
    search.run(0, stop, &mut |s| {
        total += 1;
        visitor(&s.preorder());
    });
    Ok(total)
}

/// Prefix length for work partitioning: enough assigned entries that the
/// shard count comfortably exceeds the worker count.
fn shard_prefix_len(total_positions: usize, jobs: usize) -> usize {
    let target = 8 * jobs.max(1);
    let mut w = 0;
    while w < total_positions && (1usize << w) < target {
        w += 1;
    }
    w
}

/// Counts leaves of the search accepted by `tally`, optionally sharded over
/// `jobs` workers. Shards are the surviving assignments of the first few
/// entries; each is an independent deterministic sub-enumeration and the
/// shard counts are merged by addition, so the result does not depend on
/// the partitioning.
fn count_leaves<S>(n: usize, antisymmetric: bool, jobs: usize, tally: S) -> u64
where
    S: Fn(&Search) -> bool + Sync,
{
    let positions = off_diagonal_positions(n);
    let stop = positions.len();
    let jobs = jobs.max(1);

    if jobs == 1 {
        let mut search = Search::new(n, &positions, antisymmetric);
        let mut count = 0u64;
        search.run(0, stop, &mut |s| {
            if tally(s) {
                count += 1;
            }
        });
        return count;
    }

    let prefix_len = shard_prefix_len(stop, jobs);
    let mut prefixes: Vec<u64> = Vec::new();
    Search::new(n, &positions, antisymmetric).run(0, prefix_len, &mut |s| {
        prefixes.push(s.path);
    });

    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let mut workers = Vec::with_capacity(jobs);
        for _ in 0..jobs {
            workers.push(scope.spawn(|| {
                let mut local = 0u64;
                let mut search = Search::new(n, &positions, antisymmetric);
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&prefix) = prefixes.get(idx) else { break };
                    search.replay_prefix(prefix, prefix_len);
                    search.run(prefix_len, stop, &mut |s| {
                        if tally(s) {
                            local += 1;
                        }
                    });
                    search.retract_prefix(prefix, prefix_len);
                }
                local
            }));
        }
        workers.into_iter().map(|w| w.join().expect("enumeration worker panicked")).sum()
    })
}

/// Counts all preorders on n points (= T(n)) with the backtracking engine.
pub fn count_preorders(n: usize, jobs: usize) -> Result<u64> {
    check_engine_reach(n)?;
    Ok(count_leaves(n, false, jobs, |_| true))
}

/// Counts partial orders on n points (= T0(n)); antisymmetry is enforced
/// inside the engine rather than filtered afterwards.
pub fn count_t0(n: usize, jobs: usize) -> Result<u64> {
    check_engine_reach(n)?;
    Ok(count_leaves(n, true, jobs, |_| true))
}

/// Counts the enumerated preorders accepted by `accept`. With
/// `antisymmetric`, only partial orders are walked.
pub(crate) fn count_preorders_where<P>(
    n: usize,
    antisymmetric: bool,
    jobs: usize,
    accept: P,
) -> Result<u64>
where
    P: Fn(&Preorder) -> bool + Sync,
{
    check_engine_reach(n)?;
    Ok(count_leaves(n, antisymmetric, jobs, |s| accept(&s.preorder())))
}

// ---------------------------------------------------------------------------
// Partition identity
// ---------------------------------------------------------------------------

/// Stirling numbers of the second kind via the standard recurrence
/// S(n,k) = k * S(n-1,k) + S(n-1,k-1).
pub fn stirling2(n: usize, k: usize) -> Result<u64> {
    if n > STIRLING_MAX_N || k > n {
        return Err(Error::OutOfRange { what: "stirling2 requires 0 <= k <= n <= 20" });
    }
    // prev[j] = S(i, j) for the row most recently filled
    let mut prev = vec![0u64; k + 1];
    prev[0] = 1;
    for _ in 1..=n {
        let mut row = vec![0u64; k + 1];
        for j in 1..=k {
            row[j] = (j as u64)
                .checked_mul(prev[j])
                .and_then(|v| v.checked_add(prev[j - 1]))
                .expect("stirling2 overflow");
        }
        prev = row;
    }
    Ok(prev[k])
}

/// T(n) from T0 via the partition identity T(n) = sum_k S(n,k) * T0(k):
/// collapsing the points that share a minimal open set turns a topology into
/// a T0 topology on the blocks of a set partition.
pub fn count_topologies_partition(n: usize, t0_table: &CountTable) -> Result<u64> {
    assert_eq!(t0_table.kind(), CountKind::T0, "partition identity needs a T0 table");
    if n == 0 {
        return Ok(1);
    }
    let mut total = 0u64;
    for k in 1..=n {
        let t0 = t0_table.require(k)?;
        let term = stirling2(n, k)?.checked_mul(t0).expect("partition sum overflow");
        total = total.checked_add(term).expect("partition sum overflow");
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Precomputed tables
// ---------------------------------------------------------------------------

/// T and T0 tables over the whole desk-scale reach (n <= 7): T0 by the
/// engine, T by the engine up to 6 and by the partition identity at 7.
#[derive(Clone, Debug)]
pub struct Tables {
    pub t: CountTable,
    pub t0: CountTable,
}

impl Tables {
    pub fn compute(jobs: usize) -> Result<Tables> {
        let mut t0 = CountTable::new(CountKind::T0);
        for n in 0..=ENGINE_MAX_POINTS {
            t0.insert(n, count_t0(n, jobs)?, CountMethod::Backtrack);
        }
        let mut t = CountTable::new(CountKind::T);
        for n in 0..ENGINE_MAX_POINTS {
            t.insert(n, count_preorders(n, jobs)?, CountMethod::Backtrack);
        }
        t.insert(
            ENGINE_MAX_POINTS,
            count_topologies_partition(ENGINE_MAX_POINTS, &t0)?,
            CountMethod::PartitionFormula,
        );
        Ok(Tables { t, t0 })
    }
}
