//! Subsets of a finite ground set and canonical families of them.
//!
//! The ground set is `{0, .., n-1}` with `n <= 16`, so a subset is a single
//! `u16` of characteristic bits and a family is a sorted, duplicate-free
//! vector of subsets. Two families built from the same member sets compare
//! equal no matter the construction order.

use std::fmt;

/// Hard cap on the ground-set size: every subset fits one machine word.
pub const MAX_POINTS: usize = 16;

/// A subset of `{0, .., n-1}`, stored as characteristic bits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    n: u8,
    bits: u16,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u16 {
    debug_assert!(n <= MAX_POINTS);
    if n == 0 {
        0
    } else {
        u16::MAX >> (MAX_POINTS - n)
    }
}

impl Subset {
    /// The empty subset of an `n`-point ground set.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "ground set capped at {MAX_POINTS} points");
        Subset { n: n as u8, bits: 0 }
    }

    /// The whole `n`-point ground set.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "ground set capped at {MAX_POINTS} points");
        Subset { n: n as u8, bits: full_mask(n) }
    }

    /// Builds a subset from raw characteristic bits.
    pub fn from_bits(n: usize, bits: u16) -> Self {
        assert!(n <= MAX_POINTS, "ground set capped at {MAX_POINTS} points");
        assert!(
            bits & !full_mask(n) == 0,
            "bits {bits:#06x} outside ground set of {n} points"
        );
        Subset { n: n as u8, bits }
    }

    pub fn from_points(n: usize, points: &[usize]) -> Self {
        let mut s = Subset::empty(n);
        for &x in points {
            assert!(x < n, "point {x} outside ground set of {n} points");
            s.bits |= 1 << x;
        }
        s
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        Subset::from_points(n, &[x])
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n() && self.bits & (1 << x) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.n())
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.n, other.n, "subsets over different ground sets");
        Subset { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        assert_eq!(self.n, other.n, "subsets over different ground sets");
        Subset { n: self.n, bits: self.bits & other.bits }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n, "subsets over different ground sets");
        self.bits & !other.bits == 0
    }

    /// Iterates the points of the subset in increasing order.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        (0..n).filter(move |&x| self.bits & (1 << x) != 0)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for x in self.points() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A duplicate-free family of subsets of one ground set, kept sorted by the
/// numeric value of the characteristic bits so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u8,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(n: usize, members: impl IntoIterator<Item = Subset>) -> Self {
        assert!(n <= MAX_POINTS, "ground set capped at {MAX_POINTS} points");
        let mut members: Vec<Subset> = members.into_iter().collect();
        for m in &members {
            assert_eq!(m.n(), n, "family member over a different ground set");
        }
        members.sort();
        members.dedup();
        SetFamily { n: n as u8, members }
    }

    pub fn empty(n: usize) -> Self {
        SetFamily::new(n, [])
    }

    /// Members must already be sorted ascending by bits and duplicate-free.
    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<Subset>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| m.n() == n));
        SetFamily { n: n as u8, members }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subset> {
        self.members.iter()
    }

    /// Union of all members (empty subset for the empty family).
    pub fn union_of_members(&self) -> Subset {
        let mut bits = 0u16;
        for m in &self.members {
            bits |= m.bits();
        }
        Subset { n: self.n, bits }
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}
