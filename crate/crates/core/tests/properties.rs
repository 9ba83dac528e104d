mod common;

use common::{lms_length_dp, metric_general_position};
use gp_lattice::construction::construct;
use gp_lattice::erdos_szekeres::{
    forcing_length, is_monotone, longest_monotone_subsequence, reduce_by_coordinate,
    witness_threshold, witness_triple,
};
use gp_lattice::format::{self, Format};
use gp_lattice::lattice::{
    find_violating_triple, is_general_position, l1_distance, lies_between, lies_between_metric,
    GridSpec, Point, PointSet,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn point(dim: usize, lo: i64, hi: i64) -> impl Strategy<Value = Point> {
    prop::collection::vec(lo..=hi, dim).prop_map(|c| Point::new(c).unwrap())
}

fn triple(lo: i64, hi: i64) -> impl Strategy<Value = (Point, Point, Point)> {
    (1usize..=6).prop_flat_map(move |d| (point(d, lo, hi), point(d, lo, hi), point(d, lo, hi)))
}

/// Distinct points of `Z^dim`, between `min` and `max` of them.
fn point_set(
    dim: usize,
    min: usize,
    max: usize,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set(prop::collection::vec(lo..=hi, dim), min..=max)
        .prop_map(|rows| PointSet::from_coords(rows).unwrap())
}

fn map_points(s: &PointSet, f: impl Fn(&[i64]) -> Vec<i64>) -> PointSet {
    PointSet::from_coords(s.iter().map(|p| f(p.coords()))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn coordinatewise_and_metric_betweenness_agree((u, w, v) in triple(-100, 100)) {
        let grid = GridSpec::lattice(u.dim()).unwrap();
        prop_assert_eq!(
            lies_between(&u, &w, &v).unwrap(),
            lies_between_metric(&u, &w, &v, &grid).unwrap()
        );
    }

    #[test]
    fn betweenness_and_distance_are_symmetric((u, w, v) in triple(-100, 100)) {
        prop_assert_eq!(lies_between(&u, &w, &v).unwrap(), lies_between(&v, &w, &u).unwrap());
        prop_assert_eq!(l1_distance(&u, &v).unwrap(), l1_distance(&v, &u).unwrap());
        prop_assert!(l1_distance(&u, &v).unwrap() <= l1_distance(&u, &w).unwrap() + l1_distance(&w, &v).unwrap());
    }

    #[test]
    fn subsets_of_general_position_sets_stay_in_general_position(
        n in 2usize..=4,
        picks in subsequence((0..256usize).collect::<Vec<_>>(), 3..=40),
    ) {
        let x = construct(n).unwrap().into_point_set();
        let idx: Vec<usize> = picks.into_iter().filter(|&i| i < x.len()).collect();
        prop_assume!(!idx.is_empty());
        let grid = GridSpec::lattice(n).unwrap();
        prop_assert!(is_general_position(&x.select(&idx), &grid).unwrap());
    }

    #[test]
    fn lattice_isometries_preserve_the_verdict(
        s in (2usize..=4).prop_flat_map(|d| point_set(d, 3, 8, -6, 6)),
        shift in prop::collection::vec(-1000i64..=1000, 4),
        rotate in 0usize..4,
        flip in 0usize..4,
    ) {
        let d = s.dim();
        let grid = GridSpec::lattice(d).unwrap();
        let before = is_general_position(&s, &grid).unwrap();
        let shifted = map_points(&s, |c| c.iter().zip(&shift).map(|(x, t)| x + t).collect());
        let permuted = map_points(&s, |c| (0..d).map(|k| c[(k + rotate) % d]).collect());
        let negated = map_points(&s, |c| {
            c.iter().enumerate().map(|(k, &x)| if k == flip % d { -x } else { x }).collect()
        });
        prop_assert_eq!(is_general_position(&shifted, &grid).unwrap(), before);
        prop_assert_eq!(is_general_position(&permuted, &grid).unwrap(), before);
        prop_assert_eq!(is_general_position(&negated, &grid).unwrap(), before);
        let refs: Vec<&Point> = s.iter().collect();
        prop_assert_eq!(metric_general_position(&refs, &grid), before);
    }

    #[test]
    fn simultaneously_monotone_triples_are_caught(
        base in prop::collection::vec(-50i64..=50, 1..=6),
        steps in prop::collection::vec((0i64..=5, 0i64..=5, any::<bool>()), 6),
        order in 0usize..6,
    ) {
        let d = base.len();
        let mid: Vec<i64> = (0..d).map(|k| base[k] + if steps[k].2 { steps[k].0 } else { -steps[k].0 }).collect();
        let far: Vec<i64> = (0..d).map(|k| mid[k] + if steps[k].2 { steps[k].1 } else { -steps[k].1 }).collect();
        prop_assume!(base != mid && mid != far);
        let mut rows = vec![base, mid.clone(), far];
        rows.rotate_left(order % 3);
        if order >= 3 {
            rows.swap(0, 1);
        }
        let s = PointSet::from_coords(rows).unwrap();
        let grid = GridSpec::lattice(d).unwrap();
        let t = find_violating_triple(&s, &grid).unwrap().expect("monotone triple");
        prop_assert_eq!(t.w.coords(), &mid[..]);
        prop_assert!(t.is_valid(&grid).unwrap());
    }

    #[test]
    fn erdos_szekeres_bound_holds(
        (m, seq) in (2u64..=6).prop_flat_map(|m| {
            let len = forcing_length(m).unwrap() as usize;
            (Just(m), prop::collection::vec(-20i64..=20, len))
        })
    ) {
        let chain = longest_monotone_subsequence(&seq).unwrap();
        prop_assert!(chain.len() as u64 >= m);
        prop_assert_eq!(chain.len(), lms_length_dp(&seq));
        let picked: Vec<i64> = chain.indices.iter().map(|&i| seq[i]).collect();
        prop_assert!(chain.indices.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(is_monotone(&picked));
    }

    #[test]
    fn reduction_keeps_every_earlier_axis_monotone(
        s in point_set(3, 3, 40, -30, 30),
        target in 2usize..=5,
    ) {
        prop_assume!(s.len() as u64 >= forcing_length(target as u64).unwrap());
        let mut pts = s.into_points();
        pts.sort();
        let sorted = PointSet::new(pts).unwrap();
        let out = reduce_by_coordinate(&sorted, 1, target).unwrap();
        prop_assert_eq!(out.len(), target);
        for axis in 0..2 {
            let col: Vec<i64> = out.iter().map(|p| p[axis]).collect();
            prop_assert!(is_monotone(&col));
        }
        prop_assert!(out.iter().all(|p| sorted.contains(p)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn witness_triples_are_sound_in_the_plane(s in point_set(2, 5, 5, -1_000_000, 1_000_000)) {
        check_witness(&s);
    }

    #[test]
    fn witness_triples_are_sound_in_space(s in point_set(3, 17, 17, -1_000_000, 1_000_000)) {
        check_witness(&s);
    }
}

fn check_witness(s: &PointSet) {
    assert_eq!(s.len() as u64, witness_threshold(s.dim()).unwrap());
    let t = witness_triple(s).unwrap();
    assert!(s.contains(&t.u) && s.contains(&t.w) && s.contains(&t.v));
    assert!(lies_between(&t.u, &t.w, &t.v).unwrap());
    assert!(t.is_valid(&GridSpec::lattice(s.dim()).unwrap()).unwrap());
}

#[test]
fn serialization_round_trips_keep_general_position() {
    for n in 1..=4 {
        let x = construct(n).unwrap().into_point_set();
        let grid = GridSpec::lattice(n).unwrap();
        for fmt in [Format::Json, Format::Csv] {
            let text = format::write(&x, fmt, None);
            assert_eq!(Format::sniff(&text), fmt);
            let back = format::parse(&text, fmt).unwrap();
            assert_eq!(back, x);
            assert!(is_general_position(&back, &grid).unwrap());
        }
    }
}
