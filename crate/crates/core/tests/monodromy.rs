use mandelcomb::monodromy::{
    centralizer_order, generators, group_report, kernel_rotations, permutation_group_order, preperiodic_centralizer_order,
    preperiodic_report, report_for, zero_reduction_path, LoopKind, PeriodicPoints, PreperiodicPoints,
    DEFAULT_ENUMERATE_LIMIT,
};
use mandelcomb::{Generator, GroupOrder, Itinerary, Permutation};
use num_bigint::BigUint;

fn zeros(points: &PeriodicPoints, i: usize) -> usize {
    points.points()[i].zeros_per_period()
}

#[test]
fn plain_enumeration_matches_centralizer_bfs() {
    for n in 1..=4 {
        let points = PeriodicPoints::new(n);
        let gens = generators(&points).unwrap();
        let perms: Vec<&Permutation> = gens.iter().map(|g| &g.permutation).collect();
        let plain = permutation_group_order(points.points().len(), &perms, 10_000).unwrap();
        let report = group_report(n, DEFAULT_ENUMERATE_LIMIT).unwrap();
        assert_eq!(report.order, GroupOrder::Computed(BigUint::from(plain)), "n = {n}");
        assert_eq!(BigUint::from(plain), centralizer_order(n));
    }
}

#[test]
fn inverting_satellite_loops_gives_the_same_group() {
    for n in 1..=4 {
        let points = PeriodicPoints::new(n);
        let gens: Vec<Generator> = generators(&points)
            .unwrap()
            .into_iter()
            .map(|mut g| {
                if g.kind == LoopKind::Satellite {
                    g.permutation = g.permutation.inverse();
                }
                g
            })
            .collect();
        let flipped = report_for(&points, &gens, DEFAULT_ENUMERATE_LIMIT).unwrap();
        let original = group_report(n, DEFAULT_ENUMERATE_LIMIT).unwrap();
        assert_eq!(flipped.order, original.order);
    }
}

#[test]
fn structural_flags_up_to_six() {
    for n in 1..=6 {
        let r = group_report(n, 0).unwrap();
        assert!(r.transitive_on_points, "n = {n}");
        assert!(r.transitive_on_orbits, "n = {n}");
        assert!(r.image_full, "n = {n}");
        assert!(r.kernel_full, "n = {n}");
        assert_eq!(r.order, GroupOrder::Skipped);
    }
}

#[test]
fn loops_move_the_right_orbits() {
    for n in 2..=7 {
        let points = PeriodicPoints::new(n);
        let gens = generators(&points).unwrap();
        let mut full_rotation = false;
        for g in &gens {
            assert!(g.commutes_with_shift);
            let support = g.permutation.support();
            let orbits: std::collections::BTreeSet<usize> = support.iter().map(|&i| points.orbit_of(i)).collect();
            match g.kind {
                LoopKind::Primitive => {
                    assert_eq!(orbits.len(), 2);
                    assert_eq!(support.len(), 2 * n);
                    for &i in &support {
                        assert_ne!(zeros(&points, i), zeros(&points, g.permutation.apply(i)));
                        assert_eq!(g.permutation.apply(g.permutation.apply(i)), i);
                    }
                }
                LoopKind::Satellite => {
                    assert_eq!(orbits.len(), 1);
                    let order = g.permutation.order();
                    let k = n / usize::try_from(order.clone()).unwrap();
                    assert_eq!(n % k, 0);
                    full_rotation |= order == BigUint::from(n);
                }
                _ => unreachable!(),
            }
        }
        assert!(full_rotation, "n = {n}");
        let rotations = kernel_rotations(&points, &gens).unwrap();
        assert_eq!(rotations.len(), points.orbits().len());
    }
}

#[test]
fn zero_reduction_paths_end_on_the_single_zero_orbit() {
    for n in 1..=9 {
        let points = PeriodicPoints::new(n);
        let target: Vec<u8> = (0..n).map(|i| u8::from(i + 1 < n)).collect();
        let target = points.index_of(&Itinerary::periodic(target).unwrap()).unwrap();
        for x in points.points() {
            let z = x.zeros_per_period();
            if z == 0 {
                assert!(zero_reduction_path(x).is_err());
                continue;
            }
            let path = zero_reduction_path(x).unwrap();
            assert_eq!(path.len(), z - 1, "{x}");
            let mut current = x.clone();
            for step in &path {
                assert_eq!(step.from.zeros_per_period(), current.zeros_per_period());
                assert_eq!(step.to.zeros_per_period() + 1, step.from.zeros_per_period());
                assert!(step.pair.is_narrow());
                current = step.to.clone();
            }
            let last = points.index_of(&current).unwrap();
            assert_eq!(points.orbit_of(last), points.orbit_of(target), "{x}");
        }
    }
}

fn permutations(len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(len - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, len - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn preperiodic_orders_match_brute_force() {
    for (k, n) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2), (1, 3)] {
        let points = PreperiodicPoints::new(k, n);
        let len = points.points().len();
        let commuting = permutations(len)
            .into_iter()
            .filter(|images| points.commutes_with_dynamics(&Permutation::from_images(images.clone()).unwrap()))
            .count();
        assert_eq!(BigUint::from(commuting), preperiodic_centralizer_order(k, n), "({k}, {n})");
        let report = preperiodic_report(k, n, DEFAULT_ENUMERATE_LIMIT).unwrap();
        assert!(report.all_commute);
        assert_eq!(report.order, GroupOrder::Computed(BigUint::from(commuting)), "({k}, {n})");
    }
}

#[test]
fn larger_preperiodic_groups_are_full() {
    for (k, n) in [(4, 1), (2, 3), (3, 3), (2, 4)] {
        let report = preperiodic_report(k, n, 2_000_000).unwrap();
        assert!(report.all_commute);
        match &report.order {
            GroupOrder::Computed(o) => assert_eq!(*o, report.centralizer_order, "({k}, {n})"),
            GroupOrder::Skipped => assert!(report.centralizer_order > BigUint::from(2_000_000u32)),
        }
    }
}
