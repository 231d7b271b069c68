use embedlab_core::spaces::{
    bounded_geometry_profile, disjoint_union, pnorm_metric, validate_metric,
};
use embedlab_core::{FiniteMetricSpace, Graph, PointCloud, METRIC_TOLERANCE};
use proptest::prelude::*;

fn cloud_strategy(p: f64) -> impl Strategy<Value = PointCloud> {
    (2usize..10, 1usize..4).prop_flat_map(move |(n, dim)| {
        prop::collection::vec(prop::collection::vec(-50.0f64..50.0, dim), n).prop_filter_map(
            "distinct points",
            move |pts| {
                PointCloud::new(p, pts)
                    .ok()
                    .filter(|c| pnorm_metric(c).is_ok())
            },
        )
    })
}

fn tree_strategy() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        prop::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            let edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, ix)| (ix.index(i + 1), i + 1))
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn pnorm_metrics_validate(c in prop_oneof![cloud_strategy(1.0), cloud_strategy(2.0), cloud_strategy(3.5), cloud_strategy(f64::INFINITY)]) {
        let space = pnorm_metric(&c).unwrap();
        prop_assert!(validate_metric(&space.rows(), METRIC_TOLERANCE).unwrap().is_ok());
    }

    #[test]
    fn tree_metrics_are_hop_counts(g in tree_strategy()) {
        let space = embedlab_core::spaces::graph_metric(&g).unwrap();
        prop_assert!(validate_metric(&space.rows(), 0.0).unwrap().is_ok());
        // a tree on n vertices has n - 1 pairs at distance one
        let ones = space.pairs().filter(|&(u, v)| space.d(u, v) == 1.0).count();
        prop_assert_eq!(ones, g.vertex_count() - 1);
        prop_assert!(space.diameter() <= (g.vertex_count() - 1) as f64);
    }

    #[test]
    fn union_is_a_metric_and_keeps_blocks(a in tree_strategy(), b in cloud_strategy(2.0)) {
        let sa = embedlab_core::spaces::graph_metric(&a).unwrap();
        let sb = pnorm_metric(&b).unwrap();
        let u = disjoint_union(&[sa.clone(), sb.clone()]).unwrap();
        prop_assert!(validate_metric(&u.rows(), METRIC_TOLERANCE).unwrap().is_ok());
        let na = sa.len();
        for (i, j) in sb.pairs() {
            prop_assert_eq!(u.d(na + i, na + j), sb.d(i, j));
        }
        let cross = (sa.diameter() + 1.0) + (sb.diameter() + 2.0);
        prop_assert_eq!(u.d(0, na), cross);
    }

    #[test]
    fn profile_counts_are_monotone(c in cloud_strategy(2.0)) {
        let space = pnorm_metric(&c).unwrap();
        let radii = [0.0, 1.0, 5.0, 20.0, 1e9];
        let prof = bounded_geometry_profile(&space, &radii).unwrap();
        prop_assert!(prof.counts.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(prof.counts[0], 1);
        prop_assert_eq!(*prof.counts.last().unwrap(), space.len());
    }

    #[test]
    fn json_roundtrips(c in cloud_strategy(1.5)) {
        let again = PointCloud::from_json_str(&c.to_json()).unwrap();
        prop_assert_eq!(&again, &c);
        let space = pnorm_metric(&c).unwrap();
        prop_assert_eq!(FiniteMetricSpace::from_json_str(&space.to_json()).unwrap(), space);
    }

    #[test]
    fn scaling_is_linear(c in cloud_strategy(2.0), k in 0.1f64..10.0) {
        let space = pnorm_metric(&c).unwrap();
        let scaled = space.scaled(k).unwrap();
        for (i, j) in space.pairs() {
            prop_assert!((scaled.d(i, j) - k * space.d(i, j)).abs() <= 1e-12 * (1.0 + k * space.d(i, j)));
        }
    }
}
