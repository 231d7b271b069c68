//! Independent reference implementations used by the oracle tests.
#![allow(dead_code)]

use embedlab_core::game::{Bound, LinearProgram, Objective, Sense};
use embedlab_core::Graph;
use nalgebra::{DMatrix, DVector};

/// All-pairs hop distances by Floyd–Warshall.
pub fn floyd_warshall(graph: &Graph) -> Vec<Vec<f64>> {
    let n = graph.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for u in 0..n {
        d[u][u] = 0.0;
        for &v in graph.neighbors(u) {
            d[u][v] = 1.0;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// `min |∂S| / |S|` over all `S` with `1 ≤ |S| ≤ n/2`, as `(num, den)`.
/// Scans plain binary order over every subset.
pub fn brute_cheeger(graph: &Graph) -> (u64, u64) {
    let n = graph.vertex_count();
    let mut best = (u64::MAX, 1u64);
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as u64;
        if size as usize > n / 2 {
            continue;
        }
        let boundary = graph
            .edges()
            .iter()
            .filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1))
            .count() as u64;
        if (boundary as u128) * (best.1 as u128) < (best.0 as u128) * (size as u128) {
            best = (boundary, size);
        }
    }
    best
}

/// Optimum of a bounded LP with nonnegative variables by enumerating every
/// basic solution. `None` means infeasible.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let n = lp.costs.len();
    assert!(lp.bounds.iter().all(|b| *b == Bound::NonNegative));
    // everything as a ≤ row, plus -x_j ≤ 0
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for ((r, s), b) in lp.rows.iter().zip(&lp.senses).zip(&lp.rhs) {
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        match s {
            Sense::Le => rows.push((r.clone(), *b)),
            Sense::Ge => rows.push((neg, -b)),
            Sense::Eq => {
                rows.push((r.clone(), *b));
                rows.push((neg, -b));
            }
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        rows.push((e, 0.0));
    }
    let sign = if lp.objective == Objective::Maximize {
        1.0
    } else {
        -1.0
    };
    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(n);
    enumerate(rows.len(), n, 0, &mut pick, &mut |idx| {
        let a = DMatrix::from_fn(n, n, |i, j| rows[idx[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| rows[idx[i]].1);
        let Some(x) = a.lu().solve(&b) else { return };
        if x.iter().any(|v| !v.is_finite()) {
            return;
        }
        let feasible = rows
            .iter()
            .all(|(r, rhs)| r.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= rhs + 1e-9);
        if feasible {
            let value: f64 = lp.costs.iter().zip(x.iter()).map(|(c, v)| c * v).sum();
            let score = sign * value;
            if best.is_none_or(|b| score > sign * b) {
                best = Some(value);
            }
        }
    });
    best
}

fn enumerate(
    total: usize,
    k: usize,
    start: usize,
    pick: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..total {
        pick.push(i);
        enumerate(total, k, i + 1, pick, f);
        pick.pop();
    }
}
