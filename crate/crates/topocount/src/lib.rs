//! Counting and enumerating topologies on finite sets.
//!
//! The library computes T(n), the number of topologies on n labeled points,
//! and T0(n), the number of T0 topologies, by three mutually checking
//! routes (naive family search, preorder backtracking, the partition
//! identity). On top of the counts it implements permutation actions on
//! topologies, fixed-point counting for prime-cycle actions, and the
//! congruence machinery that pins the prime-independent constant k(n) both
//! directly and through the Chinese Remainder Theorem.
//!
//! Ground sets are `{0, .., n-1}` with n at most 16; exhaustive enumeration
//! reaches n = 7.

pub mod arith;
pub mod congruence;
pub mod enumerate;
mod error;
pub mod group;
pub mod preorder;
pub mod set;
pub mod topology;

pub use error::{Error, Result};

pub use congruence::{
    crt, feasible_primes, k_bounds, k_crt, k_direct, k_report_direct, verify, verify_all,
    KMethod, KReport, KValue, Residue, TheoremId, VerifyInstance, VerifyStatus, KNOWN_K,
};
pub use enumerate::{
    count_preorders, count_t0, count_topologies_naive, count_topologies_partition,
    enumerate_preorders, stirling2, CountEntry, CountKind, CountMethod, CountTable, Tables,
    ENGINE_MAX_POINTS, NAIVE_MAX_POINTS,
};
pub use group::{
    apply_to_topology, burnside_congruence, count_fixed, is_fixed, is_fixed_via_base,
    BurnsideReport, CyclicAction, Permutation,
};
pub use preorder::{from_preorder, to_preorder, Preorder};
pub use set::{SetFamily, Subset, MAX_POINTS};
pub use topology::{
    generate_topology, is_minimal_base, is_t0, is_topology, minimal_open_sets, MinimalBase,
    Topology,
};
