//! The k(n) pipelines and the congruence verifiers.
//!
//! For every prime p, T(p + n) is congruent mod p to one and the same
//! integer k(n): the number of topologies on p + n points invariant under a
//! p-cycle that fixes the other n points. k(n) is computed two independent
//! ways:
//!
//! * `k_direct`: count the invariant topologies for one prime,
//! * `k_crt`: collect the residues T(n + p) mod p for several primes,
//!   solve them with the Chinese Remainder Theorem, and intersect the
//!   solution class with the open interval (T(n+1), 2 T(n+1)).
//!
//! When the interval contains more than one member of the class the report
//! is Ambiguous and lists every candidate; that is a legitimate outcome for
//! larger n, not an error.

use std::fmt;
use std::str::FromStr;

use crate::arith::{egcd, gcd, is_prime};
use crate::enumerate::{CountKind, CountTable, Tables, ENGINE_MAX_POINTS};
use crate::error::{Error, Result};
use crate::group::{count_fixed, CyclicAction};

/// The sequence k(n) for n = 1..=4, as recomputed by the verifiers.
pub const KNOWN_K: [(usize, u64); 4] = [(1, 7), (2, 51), (3, 634), (4, 12623)];

/// A value modulo a modulus >= 2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Residue { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn matches(&self, x: u64) -> bool {
        x % self.modulus == self.value
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Solves a system of congruences with pairwise coprime moduli by iterative
/// pairwise combination with the extended gcd. The moduli used here are
/// always distinct primes, so a shared factor is reported as `NotCoprime`
/// rather than handled generally.
pub fn crt(residues: &[Residue]) -> Result<Residue> {
    assert!(!residues.is_empty(), "crt needs at least one residue");
    let mut acc = residues[0];
    for r in &residues[1..] {
        let (m1, m2) = (acc.modulus, r.modulus);
        if gcd(m1, m2) != 1 {
            return Err(Error::NotCoprime { a: m1, b: m2 });
        }
        // x = acc.value + m1 * t with t ≡ (r.value - acc.value) / m1 (mod m2)
        let (_, inv, _) = egcd(m1 as i64, m2 as i64);
        let inv = inv.rem_euclid(m2 as i64) as u64;
        let diff = (r.value as i64 - acc.value as i64).rem_euclid(m2 as i64) as u64;
        let t = diff * inv % m2;
        let modulus = m1.checked_mul(m2).expect("crt modulus overflow");
        let value = acc
            .value
            .checked_add(m1.checked_mul(t).expect("crt value overflow"))
            .expect("crt value overflow");
        acc = Residue::new(value, modulus);
    }
    Ok(acc)
}

/// The open interval (T(n+1), 2 T(n+1)) that pins k(n).
pub fn k_bounds(n: usize, t_table: &CountTable) -> Result<(u64, u64)> {
    assert_eq!(t_table.kind(), CountKind::T, "k bounds need a T table");
    let t = t_table.require(n + 1)?;
    Ok((t, t.checked_mul(2).expect("bound overflow")))
}

/// k(n) by direct fixed-point counting under a p-cycle; the result is the
/// same for every admissible prime p.
pub fn k_direct(n: usize, p: usize, jobs: usize) -> Result<u64> {
    let action = CyclicAction::new(p, n)?;
    count_fixed(&action, false, jobs)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KValue {
    Unique(u64),
    /// Every member of the solution class inside the bounds, in order.
    Ambiguous(Vec<u64>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KMethod {
    Direct,
    Crt,
}

impl fmt::Display for KMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KMethod::Direct => write!(f, "direct"),
            KMethod::Crt => write!(f, "crt"),
        }
    }
}

/// How a k(n) value was produced, with everything needed to audit it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KReport {
    pub n: usize,
    pub k_value: KValue,
    /// Open interval (T(n+1), 2 T(n+1)).
    pub bounds: (u64, u64),
    pub residues_used: Vec<Residue>,
    /// The combined CRT class, when the CRT route was taken.
    pub solution: Option<Residue>,
    pub method: KMethod,
}

/// All primes whose residue T(n + p) mod p is within enumeration reach.
pub fn feasible_primes(n: usize) -> Vec<usize> {
    (2..=ENGINE_MAX_POINTS.saturating_sub(n))
        .filter(|&p| is_prime(p as u64))
        .collect()
}

/// k(n) via residues: build T(n+p) mod p for each prime, solve with CRT,
/// and keep the members of the class strictly inside the bounds.
pub fn k_crt(n: usize, primes: &[usize], t_table: &CountTable) -> Result<KReport> {
    if primes.is_empty() {
        return Err(Error::OutOfRange { what: "k_crt needs at least one prime" });
    }
    let mut residues = Vec::with_capacity(primes.len());
    for &p in primes {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let t = t_table.require(n + p)?;
        residues.push(Residue::new(t, p as u64));
    }
    let (lo, hi) = k_bounds(n, t_table)?;
    let solution = crt(&residues)?;

    let m = solution.modulus();
    let v = solution.value();
    let target = lo + 1;
    let first = if v >= target { v } else { v + (target - v).div_ceil(m) * m };
    let mut candidates = Vec::new();
    let mut c = first;
    while c < hi {
        candidates.push(c);
        c += m;
    }

    let k_value = if candidates.len() == 1 {
        KValue::Unique(candidates[0])
    } else {
        KValue::Ambiguous(candidates)
    };
    Ok(KReport {
        n,
        k_value,
        bounds: (lo, hi),
        residues_used: residues,
        solution: Some(solution),
        method: KMethod::Crt,
    })
}

/// k(n) by the direct route, packaged with its bounds for reporting.
pub fn k_report_direct(n: usize, p: usize, t_table: &CountTable, jobs: usize) -> Result<KReport> {
    let k = k_direct(n, p, jobs)?;
    let bounds = k_bounds(n, t_table)?;
    Ok(KReport {
        n,
        k_value: KValue::Unique(k),
        bounds,
        residues_used: Vec::new(),
        solution: None,
        method: KMethod::Direct,
    })
}

// ---------------------------------------------------------------------------
// Theorem verifiers
// ---------------------------------------------------------------------------

/// The verifiable results, each checked over every instance within
/// enumeration reach.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum TheoremId {
    /// T(p^k) ≡ k + 1 (mod p).
    Tpk,
    /// T0(n + p) ≡ T0(n + 1) (mod p).
    T0Shift,
    /// T0(p^k) ≡ 1 (mod p).
    T0Pk,
    /// The T0 fixed count under a p-cycle equals T0(n + 1) exactly.
    T0FixEquality,
    /// T(n+1) < k(n) < 2 T(n+1), strictly.
    Bounds,
    /// k_direct, k_crt, and the known sequence 7, 51, 634, 12623 agree.
    KMatch,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::Tpk,
        TheoremId::T0Shift,
        TheoremId::T0Pk,
        TheoremId::T0FixEquality,
        TheoremId::Bounds,
        TheoremId::KMatch,
    ];
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TheoremId::Tpk => "tpk",
            TheoremId::T0Shift => "t0_shift",
            TheoremId::T0Pk => "t0_pk",
            TheoremId::T0FixEquality => "t0_fix_equality",
            TheoremId::Bounds => "bounds",
            TheoremId::KMatch => "k_match",
        };
        write!(f, "{name}")
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tpk" => Ok(TheoremId::Tpk),
            "t0_shift" => Ok(TheoremId::T0Shift),
            "t0_pk" => Ok(TheoremId::T0Pk),
            "t0_fix_equality" => Ok(TheoremId::T0FixEquality),
            "bounds" => Ok(TheoremId::Bounds),
            "k_match" => Ok(TheoremId::KMatch),
            other => Err(format!(
                "unknown theorem {other:?} (expected one of tpk, t0_shift, t0_pk, \
                 t0_fix_equality, bounds, k_match)"
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifyStatus {
    Pass,
    Fail,
    /// Out of enumeration reach; distinct from failure by design.
    Skipped,
}

impl fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyStatus::Pass => write!(f, "pass"),
            VerifyStatus::Fail => write!(f, "fail"),
            VerifyStatus::Skipped => write!(f, "skip"),
        }
    }
}

/// One checked instance of a theorem.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyInstance {
    pub theorem: TheoremId,
    pub instance: String,
    pub detail: String,
    pub status: VerifyStatus,
}

fn instance_from(
    theorem: TheoremId,
    instance: String,
    outcome: Result<(bool, String)>,
) -> VerifyInstance {
    match outcome {
        Ok((true, detail)) => VerifyInstance { theorem, instance, detail, status: VerifyStatus::Pass },
        Ok((false, detail)) => VerifyInstance { theorem, instance, detail, status: VerifyStatus::Fail },
        Err(e @ (Error::TooLarge { .. } | Error::MissingEntry { .. })) => VerifyInstance {
            theorem,
            instance,
            detail: format!("out of reach: {e}"),
            status: VerifyStatus::Skipped,
        },
        Err(e) => VerifyInstance {
            theorem,
            instance,
            detail: format!("error: {e}"),
            status: VerifyStatus::Fail,
        },
    }
}

/// (p, k, p^k) for every prime power within reach, ascending by p^k.
fn prime_powers_in_reach() -> Vec<(usize, u32, usize)> {
    let mut out = Vec::new();
    for m in 2..=ENGINE_MAX_POINTS {
        let mut p = 2;
        while p <= m {
            if is_prime(p as u64) {
                let mut power = p;
                let mut k = 1;
                while power < m {
                    power *= p;
                    k += 1;
                }
                if power == m {
                    out.push((p, k, m));
                    break;
                }
            }
            p += 1;
        }
    }
    out
}

fn verify_tpk(tables: &Tables) -> Vec<VerifyInstance> {
    prime_powers_in_reach()
        .into_iter()
        .map(|(p, k, m)| {
            let outcome = tables.t.require(m).map(|t| {
                let expected = (k as u64 + 1) % p as u64;
                let got = t % p as u64;
                (got == expected, format!("T({m}) = {t} ≡ {got} (mod {p}), expected k+1 ≡ {expected}"))
            });
            instance_from(TheoremId::Tpk, format!("p={p} k={k}"), outcome)
        })
        .collect()
}

fn verify_t0_shift(tables: &Tables) -> Vec<VerifyInstance> {
    let mut out = Vec::new();
    for n in 0..=ENGINE_MAX_POINTS - 2 {
        for p in feasible_primes(n) {
            let outcome = (|| {
                let lhs = tables.t0.require(n + p)?;
                let rhs = tables.t0.require(n + 1)?;
                let ok = lhs % p as u64 == rhs % p as u64;
                Ok((
                    ok,
                    format!(
                        "T0({}) = {lhs} ≡ {} and T0({}) = {rhs} ≡ {} (mod {p})",
                        n + p,
                        lhs % p as u64,
                        n + 1,
                        rhs % p as u64
                    ),
                ))
            })();
            out.push(instance_from(TheoremId::T0Shift, format!("n={n} p={p}"), outcome));
        }
    }
    out
}

fn verify_t0_pk(tables: &Tables) -> Vec<VerifyInstance> {
    prime_powers_in_reach()
        .into_iter()
        .map(|(p, k, m)| {
            let outcome = tables.t0.require(m).map(|t0| {
                let got = t0 % p as u64;
                (got == 1, format!("T0({m}) = {t0} ≡ {got} (mod {p}), expected 1"))
            });
            instance_from(TheoremId::T0Pk, format!("p={p} k={k}"), outcome)
        })
        .collect()
}

fn verify_t0_fix_equality(tables: &Tables, jobs: usize) -> Vec<VerifyInstance> {
    let mut out = Vec::new();
    for p in feasible_primes(0) {
        for n in 0..=ENGINE_MAX_POINTS - p {
            let outcome = (|| {
                let action = CyclicAction::new(p, n)?;
                let fixed = count_fixed(&action, true, jobs)?;
                let expected = tables.t0.require(n + 1)?;
                Ok((
                    fixed == expected,
                    format!("fixed T0 count = {fixed}, T0({}) = {expected}", n + 1),
                ))
            })();
            out.push(instance_from(TheoremId::T0FixEquality, format!("p={p} n={n}"), outcome));
        }
    }
    out
}

fn verify_bounds(tables: &Tables, jobs: usize) -> Vec<VerifyInstance> {
    (1..=4)
        .map(|n| {
            let outcome = (|| {
                let k = k_direct(n, 2, jobs)?;
                let (lo, hi) = k_bounds(n, &tables.t)?;
                Ok((lo < k && k < hi, format!("{lo} < k({n}) = {k} < {hi}")))
            })();
            instance_from(TheoremId::Bounds, format!("n={n}"), outcome)
        })
        .collect()
}

fn verify_k_match(tables: &Tables, jobs: usize) -> Vec<VerifyInstance> {
    KNOWN_K
        .iter()
        .map(|&(n, expected)| {
            let outcome = (|| {
                let direct = k_direct(n, 2, jobs)?;
                let report = k_crt(n, &feasible_primes(n), &tables.t)?;
                Ok(match report.k_value {
                    KValue::Unique(v) => (
                        direct == expected && v == direct,
                        format!("direct = {direct}, crt = {v}, expected {expected}"),
                    ),
                    KValue::Ambiguous(ref c) => (
                        direct == expected && c.contains(&direct),
                        format!(
                            "direct = {direct}, expected {expected}; crt ambiguous with {} \
                             candidates (class {}), direct value {} the class",
                            c.len(),
                            report.solution.expect("crt route always records a class"),
                            if c.contains(&direct) { "inside" } else { "OUTSIDE" }
                        ),
                    ),
                })
            })();
            instance_from(TheoremId::KMatch, format!("n={n}"), outcome)
        })
        .collect()
}

/// Runs every in-reach instance of one theorem. Instances appear in a fixed
/// order sorted by their key.
pub fn verify(theorem: TheoremId, tables: &Tables, jobs: usize) -> Vec<VerifyInstance> {
    match theorem {
        TheoremId::Tpk => verify_tpk(tables),
        TheoremId::T0Shift => verify_t0_shift(tables),
        TheoremId::T0Pk => verify_t0_pk(tables),
        TheoremId::T0FixEquality => verify_t0_fix_equality(tables, jobs),
        TheoremId::Bounds => verify_bounds(tables, jobs),
        TheoremId::KMatch => verify_k_match(tables, jobs),
    }
}

/// Runs every verifier.
pub fn verify_all(tables: &Tables, jobs: usize) -> Vec<VerifyInstance> {
    TheoremId::ALL.iter().flat_map(|&t| verify(t, tables, jobs)).collect()
}
