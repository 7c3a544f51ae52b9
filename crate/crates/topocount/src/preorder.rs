//! Preorders on a finite ground set and the correspondence with topologies.
//!
//! Convention: `x <= y` holds iff `x` lies in the minimal open set `O_y`, so
//! the opens of a topology are exactly the down-sets of its preorder and
//! `O_x` is the down-closure of `{x}`.

use crate::error::{Error, Result};
use crate::set::{full_mask, SetFamily, Subset};
use crate::topology::{minimal_open_sets, Topology};

/// A reflexive transitive relation on `{0, .., n-1}`.
///
/// Row `x` stores the characteristic bits of `{y : x <= y}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Preorder {
    n: usize,
    rows: Vec<u16>,
}

impl Preorder {
    /// Validates reflexivity and transitivity.
    pub fn from_rows(n: usize, rows: Vec<u16>) -> Result<Self> {
        assert_eq!(rows.len(), n, "need one row per point");
        let full = full_mask(n);
        for (x, &row) in rows.iter().enumerate() {
            assert!(row & !full == 0, "row bits outside ground set");
            if row & (1 << x) == 0 {
                return Err(Error::InvalidRelation { reason: "relation is not reflexive" });
            }
        }
        for x in 0..n {
            let mut rem = rows[x];
            while rem != 0 {
                let y = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                if rows[y] & !rows[x] != 0 {
                    return Err(Error::InvalidRelation { reason: "relation is not transitive" });
                }
            }
        }
        Ok(Preorder { n, rows })
    }

    pub fn from_fn(n: usize, mut rel: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let rows = (0..n)
            .map(|x| {
                let mut row = 0u16;
                for y in 0..n {
                    if rel(x, y) {
                        row |= 1 << y;
                    }
                }
                row
            })
            .collect();
        Preorder::from_rows(n, rows)
    }

    /// Caller guarantees reflexivity and transitivity.
    pub(crate) fn from_rows_unchecked(n: usize, rows: Vec<u16>) -> Self {
        Preorder { n, rows }
    }

    /// The discrete order: `x <= y` iff `x = y`.
    pub fn identity(n: usize) -> Self {
        Preorder { n, rows: (0..n).map(|x| 1 << x).collect() }
    }

    /// The complete relation: `x <= y` for all pairs.
    pub fn complete(n: usize) -> Self {
        Preorder { n, rows: vec![full_mask(n); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.rows[x] & (1 << y) != 0
    }

    /// Row bit masks, one per point; bit `y` of row `x` means `x <= y`.
    pub fn rows(&self) -> &[u16] {
        &self.rows
    }

    /// `{x : x <= y}` as characteristic bits; equals the bits of `O_y`.
    pub fn down_set(&self, y: usize) -> u16 {
        let mut col = 0u16;
        for x in 0..self.n {
            if self.rows[x] & (1 << y) != 0 {
                col |= 1 << x;
            }
        }
        col
    }

    pub fn is_antisymmetric(&self) -> bool {
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                if self.le(x, y) && self.le(y, x) {
                    return false;
                }
            }
        }
        true
    }
}

/// The preorder of a topology: `x <= y` iff `x` belongs to `O_y`.
pub fn to_preorder(t: &Topology) -> Preorder {
    let n = t.n();
    let base = minimal_open_sets(t);
    let mut rows = vec![0u16; n];
    for y in 0..n {
        let open = base.open_at(y).bits();
        let mut rem = open;
        while rem != 0 {
            let x = rem.trailing_zeros() as usize;
            rows[x] |= 1 << y;
            rem &= rem - 1;
        }
    }
    Preorder::from_rows_unchecked(n, rows)
}

/// The topology whose opens are all down-sets of the preorder. Inverse of
/// [`to_preorder`] in both directions.
pub fn from_preorder(r: &Preorder) -> Topology {
    let n = r.n();
    let mut pred = [0u16; crate::set::MAX_POINTS];
    for (x, &row) in r.rows().iter().enumerate() {
        let mut rem = row;
        while rem != 0 {
            let y = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            pred[y] |= 1 << x;
        }
    }
    let full = full_mask(n);
    let mut members = Vec::new();
    for bits in 0..=u32::from(full) {
        let bits = bits as u16;
        let mut rem = bits;
        let mut down_closed = true;
        while rem != 0 {
            let y = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            if pred[y] & !bits != 0 {
                down_closed = false;
                break;
            }
        }
        if down_closed {
            members.push(Subset::from_bits(n, bits));
        }
    }
    Topology::from_family_unchecked(SetFamily::from_sorted_unchecked(n, members))
}
