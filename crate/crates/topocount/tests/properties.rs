//! Exhaustive invariant checks across the library: the topology/preorder
//! bijection, minimal-base identities, action laws, fixedness-test
//! equivalence, the structure of invariant minimal bases, and the
//! congruence-pipeline consistency conditions.

use topocount::{
    apply_to_topology, count_preorders, count_t0, count_topologies_naive,
    count_topologies_partition, enumerate_preorders, feasible_primes, from_preorder,
    generate_topology, is_fixed, is_fixed_via_base, is_minimal_base, is_t0, k_bounds, k_crt,
    k_direct, minimal_open_sets, to_preorder, CountKind, CountMethod, CountTable, CyclicAction,
    KValue, Permutation, Preorder, Tables, Topology,
};

fn all_topologies(n: usize) -> Vec<Topology> {
    let mut out = Vec::new();
    enumerate_preorders(n, |p| out.push(from_preorder(p))).unwrap();
    out
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn build(used: &mut Vec<bool>, image: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if image.len() == n {
            out.push(image.clone());
            return;
        }
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                image.push(y);
                build(used, image, out);
                image.pop();
                used[y] = false;
            }
        }
    }
    let mut images = Vec::new();
    build(&mut vec![false; n], &mut Vec::new(), &mut images);
    images.into_iter().map(|v| Permutation::from_image(v).unwrap()).collect()
}

#[test]
fn round_trip_topology_to_preorder_and_back() {
    for n in 0..=5 {
        for t in all_topologies(n) {
            let r = to_preorder(&t);
            assert_eq!(from_preorder(&r), t, "n={n}");
        }
    }
}

#[test]
fn round_trip_preorder_to_topology_and_back() {
    for n in 0..=4 {
        enumerate_preorders(n, |r| {
            assert_eq!(&to_preorder(&from_preorder(r)), r, "n={n}");
        })
        .unwrap();
    }
}

#[test]
fn engine_topologies_are_valid_and_distinct() {
    for n in 0..=4 {
        let topologies = all_topologies(n);
        for t in &topologies {
            Topology::new(t.family().clone()).unwrap();
        }
        let as_set: std::collections::HashSet<_> = topologies.iter().collect();
        assert_eq!(as_set.len(), topologies.len(), "n={n}");
    }
}

#[test]
fn minimal_base_regenerates_its_topology() {
    for n in 0..=5 {
        for t in all_topologies(n) {
            let base = minimal_open_sets(&t);
            assert_eq!(generate_topology(base.distinct()).unwrap(), t, "n={n}");
        }
    }
}

#[test]
fn minimal_bases_pass_the_predicate() {
    for n in 0..=4 {
        for t in all_topologies(n) {
            assert!(is_minimal_base(minimal_open_sets(&t).distinct()).unwrap());
        }
    }
}

#[test]
fn minimal_open_sets_nest() {
    for n in 0..=5 {
        for t in all_topologies(n) {
            let base = minimal_open_sets(&t);
            for x in 0..n {
                let ox = base.open_at(x);
                for y in ox.points() {
                    assert!(
                        base.open_at(y).is_subset_of(&ox),
                        "n={n}: y={y} in O_{x} but O_{y} not within O_{x}"
                    );
                }
            }
        }
    }
}

#[test]
fn t0_iff_antisymmetric() {
    for n in 0..=4 {
        enumerate_preorders(n, |r| {
            let t = from_preorder(r);
            assert_eq!(is_t0(&t), r.is_antisymmetric(), "n={n}");
            assert_eq!(is_t0(&t), to_preorder(&t).is_antisymmetric(), "n={n}");
        })
        .unwrap();
    }
}

#[test]
fn engine_agrees_with_naive_oracle() {
    for n in 0..=4 {
        assert_eq!(count_preorders(n, 1).unwrap(), count_topologies_naive(n).unwrap());
    }
}

#[test]
fn partition_identity_matches_engine() {
    let mut t0 = CountTable::new(CountKind::T0);
    for k in 0..=6 {
        t0.insert(k, count_t0(k, 1).unwrap(), CountMethod::Backtrack);
    }
    for n in 1..=6 {
        assert_eq!(
            count_topologies_partition(n, &t0).unwrap(),
            count_preorders(n, 1).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn counts_grow_and_t0_stays_below_t() {
    let tables = Tables::compute(2).unwrap();
    for n in 1..=6 {
        assert!(tables.t.get(n + 1).unwrap() > tables.t.get(n).unwrap());
        assert!(tables.t0.get(n + 1).unwrap() > tables.t0.get(n).unwrap());
    }
    for n in 0..=7 {
        let (t, t0) = (tables.t.get(n).unwrap(), tables.t0.get(n).unwrap());
        assert!(t0 <= t);
        assert_eq!(t0 == t, n <= 1, "T0(n) = T(n) only for n <= 1");
    }
}

#[test]
fn action_laws_hold_exhaustively_at_n3() {
    let topologies = all_topologies(3);
    let perms = all_permutations(3);
    let id = Permutation::identity(3);
    for t in &topologies {
        assert_eq!(&apply_to_topology(&id, t).unwrap(), t);
        for g in &perms {
            for h in &perms {
                let one_by_one = apply_to_topology(g, &apply_to_topology(h, t).unwrap()).unwrap();
                let composed = apply_to_topology(&g.compose(h), t).unwrap();
                assert_eq!(one_by_one, composed);
            }
        }
    }
}

#[test]
fn fixedness_tests_agree_exhaustively() {
    for n in 0..=4 {
        let perms = all_permutations(n);
        for t in all_topologies(n) {
            for g in &perms {
                assert_eq!(
                    is_fixed(g, &t).unwrap(),
                    is_fixed_via_base(g, &t).unwrap(),
                    "n={n} g={g:?} t={t:?}"
                );
            }
        }
    }
}

// Structure of invariant minimal bases when a p-cycle acts on the first p
// points: a fixed T0 topology has O_x meeting the cycled block in exactly
// {x} for cycled x, and in nothing or everything for fixed points.
#[test]
fn invariant_t0_bases_split_the_cycle() {
    let p = 2;
    for n_fixed in 0..=3 {
        let action = CyclicAction::new(p, n_fixed).unwrap();
        let g = action.generator();
        let cycle_mask: u16 = (1 << p) - 1;
        for t in all_topologies(p + n_fixed) {
            if !is_t0(&t) || !is_fixed(&g, &t).unwrap() {
                continue;
            }
            let base = minimal_open_sets(&t);
            for x in 0..p {
                assert_eq!(base.open_at(x).bits() & cycle_mask, 1 << x, "t={t:?}");
            }
            for a in p..p + n_fixed {
                let meet = base.open_at(a).bits() & cycle_mask;
                assert!(meet == 0 || meet == cycle_mask, "t={t:?} a={a}");
            }
        }
    }
}

// Without T0, a cycled point's minimal open set may also swallow the whole
// cycled block, and that is the only other possibility.
#[test]
fn invariant_bases_meet_the_cycle_in_a_point_or_all() {
    for p in [2, 3] {
        for n_fixed in 0..=2 {
            let action = CyclicAction::new(p, n_fixed).unwrap();
            let g = action.generator();
            let cycle_mask: u16 = (1 << p) - 1;
            for t in all_topologies(p + n_fixed) {
                if !is_fixed(&g, &t).unwrap() {
                    continue;
                }
                let base = minimal_open_sets(&t);
                for x in 0..p {
                    let meet = base.open_at(x).bits() & cycle_mask;
                    assert!(meet == 1 << x || meet == cycle_mask, "t={t:?} x={x}");
                }
                for a in p..p + n_fixed {
                    let meet = base.open_at(a).bits() & cycle_mask;
                    assert!(meet == 0 || meet == cycle_mask, "t={t:?} a={a}");
                }
            }
        }
    }
}

#[test]
fn fixed_counts_do_not_depend_on_the_prime() {
    for m in 0..=2 {
        assert_eq!(k_direct(m, 2, 1).unwrap(), k_direct(m, 3, 1).unwrap(), "k({m})");
    }
    assert_eq!(k_direct(0, 2, 1).unwrap(), k_direct(0, 5, 1).unwrap());
}

#[test]
fn k_direct_lands_strictly_inside_bounds() {
    let tables = Tables::compute(2).unwrap();
    for n in 1..=4 {
        let k = k_direct(n, 2, 1).unwrap();
        let (lo, hi) = k_bounds(n, &tables.t).unwrap();
        assert!(lo < k && k < hi, "n={n}: {lo} < {k} < {hi}");
    }
}

#[test]
fn k_crt_consistent_with_k_direct() {
    let tables = Tables::compute(2).unwrap();
    for n in 1..=4 {
        let direct = k_direct(n, 2, 1).unwrap();
        let report = k_crt(n, &feasible_primes(n), &tables.t).unwrap();
        match report.k_value {
            KValue::Unique(v) => assert_eq!(v, direct, "n={n}"),
            KValue::Ambiguous(c) => assert!(c.contains(&direct), "n={n}"),
        }
        for r in &report.residues_used {
            assert!(r.matches(direct), "n={n}: k fails residue {r}");
        }
    }
    // with enough residues in reach, n = 1 and 2 resolve uniquely
    for n in [1, 2] {
        let report = k_crt(n, &feasible_primes(n), &tables.t).unwrap();
        assert!(matches!(report.k_value, KValue::Unique(_)), "n={n}");
    }
}

#[test]
fn preorders_visited_in_one_fixed_order() {
    let runs: Vec<Vec<Preorder>> = (0..2)
        .map(|_| {
            let mut visited = Vec::new();
            enumerate_preorders(4, |p| visited.push(p.clone())).unwrap();
            visited
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0].len(), 355);
}
