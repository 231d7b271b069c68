use criterion::{black_box, criterion_group, criterion_main, Criterion};

use embedlab_bench::{connected_cubic, cube_cloud, shell_cloud};
use embedlab_core::embed::{
    assemble_coarse_embedding, case_breakdown, schoenberg_l1_to_l2, shell_embedding,
};
use embedlab_core::expander::{cheeger_exact, cheeger_spectral};
use embedlab_core::game::minimax_measure;
use embedlab_core::spaces::{graph_metric, pnorm_metric};
use embedlab_core::Graph;

fn expanders(c: &mut Criterion) {
    let small = connected_cubic(20, 1);
    c.bench_function("cheeger_exact n=20", |b| {
        b.iter(|| cheeger_exact(black_box(&small)).unwrap())
    });
    let large = connected_cubic(200, 1);
    c.bench_function("cheeger_spectral n=200", |b| {
        b.iter(|| cheeger_spectral(black_box(&large)).unwrap())
    });
}

fn game(c: &mut Criterion) {
    let path = graph_metric(&Graph::path(11).unwrap()).unwrap();
    c.bench_function("minimax P11 t=3", |b| {
        b.iter(|| minimax_measure(black_box(&path), 3.0).unwrap())
    });
    let cubic = graph_metric(connected_cubic(12, 3).graph()).unwrap();
    c.bench_function("minimax cubic n=12 t=3", |b| {
        b.iter(|| minimax_measure(black_box(&cubic), 3.0).unwrap())
    });
}

fn embeddings(c: &mut Criterion) {
    let cloud = shell_cloud(200, 5, 5);
    c.bench_function("shell_embedding 200x5", |b| {
        b.iter(|| shell_embedding(black_box(&cloud), 1.0).unwrap())
    });
    let emb = shell_embedding(&cloud, 1.0).unwrap();
    c.bench_function("case_breakdown 200x5", |b| {
        b.iter(|| case_breakdown(black_box(&emb)))
    });
    let l1 = cube_cloud(50, 10, 1.0, 1.0, 6);
    c.bench_function("schoenberg 50x10", |b| {
        b.iter(|| schoenberg_l1_to_l2(black_box(&l1)).unwrap())
    });
    let space = pnorm_metric(&cube_cloud(50, 3, 120.0, 2.0, 7)).unwrap();
    c.bench_function("coarse m=3 n=50", |b| {
        b.iter(|| assemble_coarse_embedding(black_box(&space), 2.0, &[4.0, 24.0, 100.0]).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = expanders, game, embeddings
}
criterion_main!(benches);
