mod support;

use embedlab_core::expander::{adjacency_spectrum, cheeger_exact, random_regular_graph};
use embedlab_core::linalg::symmetric_eigen;
use embedlab_core::rng::SplitMix64;
use embedlab_core::spaces::graph_metric;
use embedlab_core::Ratio;
use nalgebra::DMatrix;
use proptest::prelude::*;

#[test]
fn exact_cheeger_matches_subset_scan() {
    for (case, (n, k)) in [
        (6, 3),
        (8, 3),
        (10, 3),
        (12, 3),
        (8, 4),
        (10, 4),
        (12, 5),
        (14, 3),
    ]
    .into_iter()
    .enumerate()
    {
        let g = random_regular_graph(n, k, case as u64 * 31 + 7).unwrap();
        if !g.graph().is_connected() {
            continue;
        }
        let cert = cheeger_exact(&g).unwrap();
        let (num, den) = support::brute_cheeger(g.graph());
        assert_eq!(cert.h(), Ratio::new(num, den), "n={n} k={k}");
    }
}

#[test]
fn jacobi_matches_nalgebra() {
    let mut rng = SplitMix64::new(3);
    for n in [1usize, 2, 5, 12, 30] {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gaussian();
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let ours = symmetric_eigen(&a, n, true).unwrap();
        let mut theirs: Vec<f64> = DMatrix::from_row_slice(n, n, &a)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.values.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
        }
        // A v = λ v for every returned pair
        let vecs = ours.vectors.unwrap();
        for (lambda, v) in ours.values.iter().zip(&vecs) {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                assert!((av - lambda * v[i]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn graph_metric_matches_floyd_warshall() {
    let mut rng = SplitMix64::new(17);
    for _ in 0..20 {
        let n = 4 + 2 * rng.below(5) as usize;
        let g = random_regular_graph(n, 3, rng.next_u64()).unwrap();
        if !g.graph().is_connected() {
            continue;
        }
        let space = graph_metric(g.graph()).unwrap();
        let fw = support::floyd_warshall(g.graph());
        for i in 0..n {
            for j in 0..n {
                assert_eq!(space.d(i, j), fw[i][j]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spectrum_trace_identities(seed in any::<u64>(), half in 3usize..16, k in 3usize..6) {
        let n = 2 * half;
        prop_assume!(k < n);
        let g = random_regular_graph(n, k, seed).unwrap();
        let spec = adjacency_spectrum(g.graph()).unwrap();
        // trace A = 0, trace A² = 2|E| = nk, top eigenvalue k
        let t1: f64 = spec.iter().sum();
        let t2: f64 = spec.iter().map(|x| x * x).sum();
        prop_assert!(t1.abs() < 1e-9);
        prop_assert!((t2 - (n * k) as f64).abs() < 1e-8);
        prop_assert!((spec[0] - k as f64).abs() < 1e-9);
        prop_assert!(spec.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn random_graphs_are_regular(seed in any::<u64>(), half in 2usize..40) {
        let n = 2 * half;
        let g = random_regular_graph(n, 3, seed).unwrap();
        prop_assert!((0..n).all(|v| g.graph().neighbors(v).len() == 3));
        prop_assert_eq!(g.graph().edge_count(), 3 * n / 2);
    }
}
