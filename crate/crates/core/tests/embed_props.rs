use embedlab_core::embed::{
    empirical_moduli, gaussian_dg_map, mazur_map, schoenberg_l1_to_l2, shell_embedding,
};
use embedlab_core::spaces::{lp_norm, pnorm_metric};
use embedlab_core::PointCloud;
use proptest::prelude::*;

fn unit_vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim)
        .prop_filter("nonzero", |v| lp_norm(v, 2.0) > 1e-3)
        .prop_map(|v| {
            let r = lp_norm(&v, 2.0);
            v.into_iter().map(|x| x / r).collect()
        })
}

fn distinct_cloud(
    p: f64,
    max_n: usize,
    dim: usize,
    span: f64,
) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(prop::collection::vec(-span..span, dim), 2..max_n).prop_filter_map(
        "distinct",
        move |pts| {
            PointCloud::new(p, pts)
                .ok()
                .filter(|c| pnorm_metric(c).is_ok())
        },
    )
}

proptest! {
    #[test]
    fn mazur_lands_on_the_sphere(v in (1usize..12).prop_flat_map(unit_vector), p in 1.0f64..8.0) {
        let w = mazur_map(&v, p).unwrap();
        prop_assert!((lp_norm(&w, p) - 1.0).abs() <= 1e-12);
        prop_assert_eq!(mazur_map(&v, 2.0).unwrap(), v);
    }

    #[test]
    fn schoenberg_squares_match(c in distinct_cloud(1.0, 14, 4, 10.0)) {
        let s = schoenberg_l1_to_l2(&c).unwrap();
        prop_assert!(s.max_error <= 1e-9);
        prop_assert!(s.min_eigenvalue >= -1e-9);
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let e = s.map.image().distance(i, j);
                prop_assert!((e * e - c.distance(i, j)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_identity_holds(c in distinct_cloud(2.0, 14, 3, 5.0), r in 0.2f64..5.0, eps in 0.01f64..1.4) {
        let space = pnorm_metric(&c).unwrap();
        let g = gaussian_dg_map(&space, r, eps).unwrap();
        for x in g.cloud.points() {
            prop_assert!((lp_norm(x, 2.0) - 1.0).abs() <= 1e-9);
        }
        for (u, v) in space.pairs() {
            let d = space.d(u, v);
            let want = (2.0 - 2.0 * (-d * d / g.t).exp()).sqrt();
            prop_assert!((g.cloud.distance(u, v) - want).abs() <= 1e-9);
        }
    }

    #[test]
    fn shell_distortion_bounded(c in distinct_cloud(2.0, 30, 3, 300.0), p in prop_oneof![Just(1.0), Just(2.0), 1.0f64..4.0]) {
        let emb = shell_embedding(&c, p).unwrap();
        prop_assert!(emb.map().distortion() <= 70.0);
        prop_assert!(emb.map().distortion() >= 1.0 - 1e-12);
        let moduli = empirical_moduli(emb.map(), 7).unwrap();
        for b in &moduli.bins {
            match (b.rho1, b.rho2) {
                (Some(lo), Some(hi)) => prop_assert!(lo <= hi && b.count > 0),
                _ => prop_assert_eq!(b.count, 0),
            }
        }
        let stairs = moduli.rho1_staircase();
        prop_assert!(stairs.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
