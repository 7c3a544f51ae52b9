//! Permutation actions on points, topologies, and minimal bases, plus
//! fixed-point counting for the cyclic actions the congruences run on.
//!
//! A permutation g sends a topology tau to {gU : U in tau}, always another
//! topology. tau is fixed when g maps it onto itself; equivalently, g
//! permutes the members of tau's minimal base. For a p-cycle acting on p
//! designated points and fixing the rest, the number of fixed topologies
//! is congruent to the total count mod p, which is what the verifiers in
//! the congruence module exploit.

use crate::arith::is_prime;
use crate::enumerate::{count_preorders, count_preorders_where, count_t0, ENGINE_MAX_POINTS};
use crate::error::{Error, Result};
use crate::preorder::from_preorder;
use crate::set::{SetFamily, Subset, MAX_POINTS};
use crate::topology::{minimal_open_sets, Topology};

/// A bijection on `{0, .., n-1}`; `image[x]` is where `x` goes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    n: usize,
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { n, image: (0..n).collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(Error::NotABijection);
            }
            seen[y] = true;
        }
        Ok(Permutation { n, image })
    }

    /// The transposition swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n);
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(i, j);
        Permutation { n, image }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.n];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Permutation { n: self.n, image }
    }

    /// Composition applying `other` first: `(self.compose(other))(x) =
    /// self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n, other.n);
        Permutation { n: self.n, image: (0..self.n).map(|x| self.apply(other.apply(x))).collect() }
    }

    /// Pointwise image of a subset.
    pub fn apply_subset(&self, s: &Subset) -> Subset {
        assert_eq!(self.n, s.n(), "permutation and subset over different ground sets");
        let mut bits = 0u16;
        let mut rem = s.bits();
        while rem != 0 {
            let x = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            bits |= 1 << self.image[x];
        }
        Subset::from_bits(self.n, bits)
    }
}

/// The action of a cyclic group of prime order p on p + n_fixed points:
/// points `0..p` are cycled by `i -> i+1 mod p`, points `p..p+n_fixed`
/// stay put.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CyclicAction {
    p: usize,
    n_fixed: usize,
}

impl CyclicAction {
    pub fn new(p: usize, n_fixed: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p + n_fixed > MAX_POINTS {
            return Err(Error::TooLarge {
                what: "cyclic action ground set",
                limit: MAX_POINTS,
                got: p + n_fixed,
            });
        }
        Ok(CyclicAction { p, n_fixed })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_fixed(&self) -> usize {
        self.n_fixed
    }

    pub fn points(&self) -> usize {
        self.p + self.n_fixed
    }

    /// The generating permutation; its order is exactly p, so a topology is
    /// fixed by the whole group iff it is fixed by the generator.
    pub fn generator(&self) -> Permutation {
        let n = self.points();
        let image = (0..n).map(|x| if x < self.p { (x + 1) % self.p } else { x }).collect();
        Permutation { n, image }
    }
}

fn check_dims(g: &Permutation, t: &Topology) -> Result<()> {
    if g.n() != t.n() {
        Err(Error::DimensionMismatch { expected: g.n(), got: t.n() })
    } else {
        Ok(())
    }
}

/// The image topology `{gU : U in t}`. Bijections preserve the closure laws,
/// so the result is always a valid topology.
pub fn apply_to_topology(g: &Permutation, t: &Topology) -> Result<Topology> {
    check_dims(g, t)?;
    let family = SetFamily::new(t.n(), t.opens().iter().map(|u| g.apply_subset(u)));
    Ok(Topology::from_family_unchecked(family))
}

fn is_fixed_unchecked(g: &Permutation, t: &Topology) -> bool {
    // |gt| = |t| always, so gt = t iff every image open is again open
    t.opens().iter().all(|u| t.contains(&g.apply_subset(u)))
}

/// Does `g` map the topology onto itself?
pub fn is_fixed(g: &Permutation, t: &Topology) -> Result<bool> {
    check_dims(g, t)?;
    Ok(is_fixed_unchecked(g, t))
}

/// The same predicate through the minimal base: `g` fixes the topology iff
/// it permutes the members of the minimal base among themselves.
pub fn is_fixed_via_base(g: &Permutation, t: &Topology) -> Result<bool> {
    check_dims(g, t)?;
    let base = minimal_open_sets(t);
    let mapped = SetFamily::new(t.n(), base.distinct().iter().map(|u| g.apply_subset(u)));
    Ok(&mapped == base.distinct())
}

/// Counts the topologies on `action.points()` points fixed by the cyclic
/// action, restricted to T0 topologies when `t0_only`.
///
/// Enumerates every preorder (partial order for T0) with the backtracking
/// engine, materializes its topology, and filters by fixedness under the
/// generator. For all topologies the count is the prime-independent k(n);
/// for T0 it equals T0(n_fixed + 1) exactly.
pub fn count_fixed(action: &CyclicAction, t0_only: bool, jobs: usize) -> Result<u64> {
    let n = action.points();
    if n > ENGINE_MAX_POINTS {
        return Err(Error::TooLarge {
            what: "fixed-point enumeration",
            limit: ENGINE_MAX_POINTS,
            got: n,
        });
    }
    let generator = action.generator();
    count_preorders_where(n, t0_only, jobs, move |p| {
        is_fixed_unchecked(&generator, &from_preorder(p))
    })
}

/// Outcome of one orbit-counting congruence check: the total count, the
/// fixed count, and whether they agree mod p. The split of the ground set
/// is restated so the report is self-describing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BurnsideReport {
    pub p: usize,
    pub n_fixed: usize,
    pub t0_only: bool,
    pub total: u64,
    pub fixed: u64,
    pub residue_ok: bool,
}

/// Verifies total ≡ fixed (mod p) for the cyclic action: every non-fixed
/// topology lies in an orbit of size a positive power of p.
pub fn burnside_congruence(
    action: &CyclicAction,
    t0_only: bool,
    jobs: usize,
) -> Result<BurnsideReport> {
    let n = action.points();
    let limit = if t0_only { ENGINE_MAX_POINTS } else { ENGINE_MAX_POINTS - 1 };
    if n > limit {
        return Err(Error::TooLarge { what: "orbit-counting congruence", limit, got: n });
    }
    let total = if t0_only { count_t0(n, jobs)? } else { count_preorders(n, jobs)? };
    let fixed = count_fixed(action, t0_only, jobs)?;
    let p = action.p() as u64;
    Ok(BurnsideReport {
        p: action.p(),
        n_fixed: action.n_fixed(),
        t0_only,
        total,
        fixed,
        residue_ok: total % p == fixed % p,
    })
}
