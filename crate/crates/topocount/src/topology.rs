//! Topologies on a finite ground set and their minimal bases.
//!
//! A topology is a family containing the empty and full subsets and closed
//! under pairwise union and intersection (pairwise closure suffices on a
//! finite set). For each point `x`, the minimal open set `O_x` is the
//! intersection of all opens containing `x`; it is itself open here. The
//! family of distinct `O_x` is the unique minimal base of the topology.

use crate::error::{Error, Result};
use crate::set::{full_mask, SetFamily, Subset};

/// A validated topology: a family with `{}`, the full set, and closure under
/// pairwise union and intersection.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Topology {
    family: SetFamily,
}

impl Topology {
    pub fn new(family: SetFamily) -> Result<Self> {
        if is_topology(&family) {
            Ok(Topology { family })
        } else {
            Err(Error::NotATopology)
        }
    }

    /// Caller guarantees the family satisfies the topology laws. Used on hot
    /// paths where validity holds by construction (images under bijections,
    /// down-set families).
    pub(crate) fn from_family_unchecked(family: SetFamily) -> Self {
        Topology { family }
    }

    /// All subsets open.
    pub fn discrete(n: usize) -> Self {
        let members = (0..=full_mask(n))
            .map(|bits| Subset::from_bits(n, bits))
            .collect();
        Topology { family: SetFamily::from_sorted_unchecked(n, members) }
    }

    /// Only the empty and full subsets open.
    pub fn indiscrete(n: usize) -> Self {
        Topology { family: SetFamily::new(n, [Subset::empty(n), Subset::full(n)]) }
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn opens(&self) -> &[Subset] {
        self.family.members()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.family.contains(s)
    }
}

/// Does the family contain the empty and full subsets and stay closed under
/// pairwise union and intersection?
pub fn is_topology(family: &SetFamily) -> bool {
    let n = family.n();
    if !family.contains(&Subset::empty(n)) || !family.contains(&Subset::full(n)) {
        return false;
    }
    let members = family.members();
    for (i, a) in members.iter().enumerate() {
        for b in &members[..i] {
            if !family.contains(&a.union(b)) || !family.contains(&a.intersection(b)) {
                return false;
            }
        }
    }
    true
}

/// The per-point minimal open sets of a topology and the base they form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinimalBase {
    n: usize,
    assignment: Vec<Subset>,
    distinct: SetFamily,
}

impl MinimalBase {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `O_x` for each point `x`, indexed by point.
    pub fn assignment(&self) -> &[Subset] {
        &self.assignment
    }

    pub fn open_at(&self, x: usize) -> Subset {
        self.assignment[x]
    }

    /// The deduplicated family of minimal open sets.
    pub fn distinct(&self) -> &SetFamily {
        &self.distinct
    }
}

/// Computes `O_x` = intersection of all opens containing `x`, for every `x`.
///
/// Every `O_x` is itself a member of the topology.
pub fn minimal_open_sets(t: &Topology) -> MinimalBase {
    let n = t.n();
    let mut acc = vec![full_mask(n); n];
    for open in t.opens() {
        let bits = open.bits();
        let mut rem = bits;
        while rem != 0 {
            let x = rem.trailing_zeros() as usize;
            acc[x] &= bits;
            rem &= rem - 1;
        }
    }
    let assignment: Vec<Subset> = acc.into_iter().map(|bits| Subset::from_bits(n, bits)).collect();
    let distinct = SetFamily::new(n, assignment.iter().copied());
    MinimalBase { n, assignment, distinct }
}

/// The smallest topology containing every member of `base`: members are
/// closed under pairwise intersection, then pairwise union, and the empty
/// and full subsets are adjoined. When `base` satisfies the base condition
/// (in particular for every minimal base) this is exactly the family of
/// unions of subfamilies of `base` plus the empty set.
///
/// Errors with `Cover` when the members do not jointly cover the ground set,
/// since no topology on all `n` points has such a family as a base.
pub fn generate_topology(base: &SetFamily) -> Result<Topology> {
    let n = base.n();
    let full = full_mask(n);
    let covered = base.union_of_members().bits();
    if covered != full {
        return Err(Error::Cover { n, missing: full & !covered });
    }

    let mut present = vec![false; 1usize << n];
    let mut items: Vec<u16> = Vec::new();
    let push = |items: &mut Vec<u16>, present: &mut Vec<bool>, bits: u16| {
        if !present[bits as usize] {
            present[bits as usize] = true;
            items.push(bits);
        }
    };
    for m in base.iter() {
        push(&mut items, &mut present, m.bits());
    }
    // Close under pairwise intersection, then pairwise union; the union
    // closure of an intersection-closed family stays intersection-closed.
    let mut i = 0;
    while i < items.len() {
        for j in 0..i {
            let meet = items[i] & items[j];
            push(&mut items, &mut present, meet);
        }
        i += 1;
    }
    let mut i = 0;
    while i < items.len() {
        for j in 0..i {
            let join = items[i] | items[j];
            push(&mut items, &mut present, join);
        }
        i += 1;
    }
    push(&mut items, &mut present, 0);
    push(&mut items, &mut present, full);

    items.sort_unstable();
    let members = items.into_iter().map(|bits| Subset::from_bits(n, bits)).collect();
    Ok(Topology::from_family_unchecked(SetFamily::from_sorted_unchecked(n, members)))
}

/// Is `family` exactly the minimal base of the topology it generates?
pub fn is_minimal_base(family: &SetFamily) -> Result<bool> {
    let t = generate_topology(family)?;
    Ok(minimal_open_sets(&t).distinct() == family)
}

/// T0 check: distinct points have distinct minimal open sets.
pub fn is_t0(t: &Topology) -> bool {
    let base = minimal_open_sets(t);
    base.distinct().len() == t.n()
}
