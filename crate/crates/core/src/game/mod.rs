//! Far-pair measures against 1-Lipschitz maps into `L₁`.
//!
//! On a finite metric space the images of 1-Lipschitz maps into `L₁` are
//! exactly the nonnegative cut combinations `d' = Σ_S λ_S δ_S` with
//! `d' ≤ d` on every pair. The best `μ`-average displacement is therefore a
//! linear program over cut weights, and the min-max over probability
//! measures `μ` on the far pairs `B = {(u, v) : d(u, v) ≥ threshold}` is a
//! single LP whose dual multipliers on the far-pair rows are the optimal
//! measure.

mod cuts;
pub mod simplex;

use serde::{Deserialize, Serialize};

pub use cuts::{cut_sample_maps, CutSystem};
pub use simplex::{Bound, LinearProgram, LpSolution, LpStatus, Objective, Sense};

use crate::error::{Error, Result};
use crate::spaces::FiniteMetricSpace;

/// Largest space accepted by [`max_l1_average`].
pub const MAX_AVERAGE_POINTS: usize = 16;
/// Largest space accepted by [`minimax_measure`].
pub const MAX_MINIMAX_POINTS: usize = 14;
/// Agreement required between the min-max value and the inner maximum.
pub const MINIMAX_TOLERANCE: f64 = 1e-7;

/// Weights on unordered pairs `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMeasure {
    pub pairs: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
}

impl PairMeasure {
    pub fn point_mass(u: usize, v: usize) -> Self {
        Self {
            pairs: vec![(u.min(v), u.max(v))],
            weights: vec![1.0],
        }
    }

    pub fn uniform(pairs: Vec<(usize, usize)>) -> Self {
        let w = 1.0 / pairs.len() as f64;
        let weights = vec![w; pairs.len()];
        Self { pairs, weights }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.pairs.len() != self.weights.len() {
            return Err(Error::Shape(format!(
                "{} pairs but {} weights",
                self.pairs.len(),
                self.weights.len()
            )));
        }
        for &(u, v) in &self.pairs {
            if u >= n || v >= n || u == v {
                return Err(Error::param(format!(
                    "pair ({u}, {v}) is not a pair of distinct points of an {n}-point space"
                )));
            }
        }
        if let Some(w) = self
            .weights
            .iter()
            .find(|w| !(**w >= 0.0) || !w.is_finite())
        {
            return Err(Error::param(format!("negative or non-finite weight {w}")));
        }
        Ok(())
    }
}

/// Optimal value of the inner maximization and the cut weights attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1Average {
    pub value: f64,
    /// Nonzero `(cut mask, weight)` pairs; see [`CutSystem`] for the encoding.
    pub cut_weights: Vec<(u64, f64)>,
}

/// Supremum of `Σ μ(u,v) ||f(u) - f(v)||₁` over 1-Lipschitz `f` into `L₁`.
pub fn max_l1_average(space: &FiniteMetricSpace, measure: &PairMeasure) -> Result<L1Average> {
    let n = space.len();
    if n > MAX_AVERAGE_POINTS {
        return Err(Error::Scale(format!(
            "cut enumeration supports at most {MAX_AVERAGE_POINTS} points, got {n}"
        )));
    }
    measure.check(n)?;
    let cuts = CutSystem::new(n)?;
    // Cuts that separate no weighted pair only consume capacity; dropping them
    // leaves the optimum unchanged.
    let mut columns = Vec::new();
    let mut gains = Vec::new();
    for mask in cuts.masks() {
        let gain: f64 = measure
            .pairs
            .iter()
            .zip(&measure.weights)
            .filter(|(&(u, v), _)| CutSystem::separates(mask, u, v))
            .map(|(_, w)| w)
            .sum();
        if gain > 0.0 {
            columns.push(mask);
            gains.push(gain);
        }
    }
    if columns.is_empty() {
        return Ok(L1Average {
            value: 0.0,
            cut_weights: Vec::new(),
        });
    }
    let mut lp = LinearProgram::new(Objective::Maximize, gains);
    for (u, v) in space.pairs() {
        let row = columns
            .iter()
            .map(|&m| {
                if CutSystem::separates(m, u, v) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        lp.constrain(row, Sense::Le, space.d(u, v));
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Invariant(format!(
            "bounded cut LP reported {:?}",
            sol.status
        )));
    }
    let cut_weights = columns
        .iter()
        .zip(&sol.x)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&m, &w)| (m, w))
        .collect();
    Ok(L1Average {
        value: sol.objective,
        cut_weights,
    })
}

/// Probability measure on far pairs with the certified value `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureCertificate {
    pub threshold: f64,
    pub pairs: Vec<[usize; 2]>,
    pub mu: Vec<f64>,
    pub value: f64,
}

impl MeasureCertificate {
    pub fn measure(&self) -> PairMeasure {
        PairMeasure {
            pairs: self.pairs.iter().map(|p| (p[0], p[1])).collect(),
            weights: self.mu.clone(),
        }
    }

    /// Pairs carrying positive mass.
    pub fn support(&self) -> Vec<[usize; 2]> {
        self.pairs
            .iter()
            .zip(&self.mu)
            .filter(|(_, &w)| w > 0.0)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(Error::from_json)
    }
}

/// Far pairs `{(i, j) : i < j, d(i, j) ≥ threshold}`.
pub fn far_pairs(space: &FiniteMetricSpace, threshold: f64) -> Vec<(usize, usize)> {
    space
        .pairs()
        .filter(|&(u, v)| space.d(u, v) >= threshold)
        .collect()
}

/// Certificate together with both sides of the duality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxSolution {
    pub certificate: MeasureCertificate,
    /// `Σ y(u,v) d(u,v)` for the recovered dual covering weights `y`.
    pub covering_value: f64,
    /// [`max_l1_average`] re-solved at the returned measure.
    pub inner_value: f64,
    /// Cut weights of a best response to the returned measure.
    pub best_response: Vec<(u64, f64)>,
}

impl MinimaxSolution {
    pub fn duality_gap(&self) -> f64 {
        (self.inner_value - self.certificate.value)
            .abs()
            .max((self.covering_value - self.certificate.value).abs())
    }
}

/// `min_μ max_f Σ μ ||f(u) - f(v)||₁` over probability measures on far pairs
/// and 1-Lipschitz maps into `L₁`.
pub fn minimax_measure(space: &FiniteMetricSpace, threshold: f64) -> Result<MeasureCertificate> {
    minimax_measure_detailed(space, threshold).map(|s| s.certificate)
}

/// [`minimax_measure`] with the duality evidence.
///
/// Solves `max z` subject to `Σ_S λ_S δ_S(p) ≤ d(p)` for every pair `p` and
/// `z ≤ Σ_S λ_S δ_S(b)` for every far pair `b`. The multipliers of the
/// far-pair rows form the optimal measure `μ`, those of the pair rows the
/// covering weights `y` of the min side.
pub fn minimax_measure_detailed(
    space: &FiniteMetricSpace,
    threshold: f64,
) -> Result<MinimaxSolution> {
    let n = space.len();
    if n > MAX_MINIMAX_POINTS {
        return Err(Error::Scale(format!(
            "minimax LP supports at most {MAX_MINIMAX_POINTS} points, got {n}"
        )));
    }
    let far = far_pairs(space, threshold);
    if far.is_empty() {
        return Err(Error::Threshold {
            threshold,
            max_distance: space.diameter(),
        });
    }
    let cuts = CutSystem::new(n)?;
    let masks: Vec<u64> = cuts.masks().collect();
    let z = masks.len();
    let mut costs = vec![0.0; z + 1];
    costs[z] = 1.0;
    let mut lp = LinearProgram::new(Objective::Maximize, costs);
    lp.bounds[z] = Bound::Free;
    let all: Vec<(usize, usize)> = space.pairs().collect();
    for &(u, v) in &all {
        let mut row: Vec<f64> = masks
            .iter()
            .map(|&m| {
                if CutSystem::separates(m, u, v) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        row.push(0.0);
        lp.constrain(row, Sense::Le, space.d(u, v));
    }
    for &(u, v) in &far {
        let mut row: Vec<f64> = masks
            .iter()
            .map(|&m| {
                if CutSystem::separates(m, u, v) {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        row.push(1.0);
        lp.constrain(row, Sense::Le, 0.0);
    }
    let sol = lp.solve()?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Invariant(format!(
            "minimax LP reported {:?}",
            sol.status
        )));
    }
    let value = sol.objective;
    let covering: Vec<f64> = sol.duals[..all.len()].iter().map(|y| y.max(0.0)).collect();
    let raw_mu = &sol.duals[all.len()..];
    if let Some(w) = raw_mu.iter().find(|&&w| w < -MINIMAX_TOLERANCE) {
        return Err(Error::Invariant(format!(
            "negative far-pair multiplier {w}"
        )));
    }
    let clipped: Vec<f64> = raw_mu
        .iter()
        .map(|w| {
            if *w > simplex::FEASIBILITY_TOLERANCE {
                *w
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = clipped.iter().sum();
    if (total - 1.0).abs() > MINIMAX_TOLERANCE {
        return Err(Error::Invariant(format!(
            "far-pair multipliers sum to {total}"
        )));
    }
    let mu: Vec<f64> = clipped.iter().map(|w| w / total).collect();
    let covering_value: f64 = all
        .iter()
        .zip(&covering)
        .map(|(&(u, v), y)| y * space.d(u, v))
        .sum();

    let certificate = MeasureCertificate {
        threshold,
        pairs: far.iter().map(|&(u, v)| [u, v]).collect(),
        mu,
        value,
    };
    let inner = max_l1_average(space, &certificate.measure())?;
    let solution = MinimaxSolution {
        certificate,
        covering_value,
        inner_value: inner.value,
        best_response: inner.cut_weights,
    };
    let gap = solution.duality_gap();
    if gap > MINIMAX_TOLERANCE * (1.0 + value.abs()) {
        return Err(Error::Invariant(format!(
            "min-max value {value} disagrees with its best response by {gap:e}"
        )));
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{disjoint_union, graph_metric, Graph};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-7
    }

    #[test]
    fn path_point_mass() {
        let p3 = graph_metric(&Graph::path(3).unwrap()).unwrap();
        let r = max_l1_average(&p3, &PairMeasure::point_mass(0, 2)).unwrap();
        assert!(close(r.value, 2.0));
    }

    #[test]
    fn two_points() {
        let s = FiniteMetricSpace::from_matrix(vec![vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap();
        let r = max_l1_average(&s, &PairMeasure::point_mass(0, 1)).unwrap();
        assert!(close(r.value, 5.0));
        assert_eq!(r.cut_weights.len(), 1);

        let s7 = FiniteMetricSpace::from_matrix(vec![vec![0.0, 7.0], vec![7.0, 0.0]]).unwrap();
        let c = minimax_measure(&s7, 3.0).unwrap();
        assert_eq!(c.pairs, vec![[0, 1]]);
        assert!(close(c.mu[0], 1.0) && close(c.value, 7.0));
    }

    #[test]
    fn five_cycle_uniform_far_pairs() {
        let c5 = graph_metric(&Graph::cycle(5).unwrap()).unwrap();
        let far = far_pairs(&c5, 2.0);
        assert_eq!(far.len(), 5);
        let r = max_l1_average(&c5, &PairMeasure::uniform(far)).unwrap();
        assert!(close(r.value, 2.0));
    }

    #[test]
    fn explicit_cut_combination_reproduces_c5() {
        // five cuts of two consecutive vertices, weight 1/2 each
        let c5 = graph_metric(&Graph::cycle(5).unwrap()).unwrap();
        for (u, v) in c5.pairs() {
            let mut d = 0.0;
            for s in 0..5 {
                let inside = |x: usize| x == s || x == (s + 1) % 5;
                if inside(u) != inside(v) {
                    d += 0.5;
                }
            }
            assert_eq!(d, c5.d(u, v));
        }
    }

    #[test]
    fn path_eleven_threshold_three() {
        let p = graph_metric(&Graph::path(11).unwrap()).unwrap();
        let s = minimax_measure_detailed(&p, 3.0).unwrap();
        assert!(close(s.certificate.value, 3.0));
        for pair in s.certificate.support() {
            assert_eq!(p.d(pair[0], pair[1]), 3.0);
        }
        assert!(s.duality_gap() <= 1e-7);
    }

    #[test]
    fn union_of_two_k4() {
        let k4 = graph_metric(&Graph::complete(4).unwrap()).unwrap();
        let u = disjoint_union(&[k4.clone(), k4]).unwrap();
        let cross = u.d(0, 4);
        assert_eq!(cross, 5.0);
        let c = minimax_measure(&u, cross).unwrap();
        assert!(close(c.value, cross));
    }

    #[test]
    fn threshold_too_large() {
        let p = graph_metric(&Graph::path(4).unwrap()).unwrap();
        assert_eq!(
            minimax_measure(&p, 4.0),
            Err(Error::Threshold {
                threshold: 4.0,
                max_distance: 3.0
            })
        );
    }

    #[test]
    fn scale_limits() {
        let p = graph_metric(&Graph::path(17).unwrap()).unwrap();
        assert!(matches!(
            max_l1_average(&p, &PairMeasure::point_mass(0, 1)),
            Err(Error::Scale(_))
        ));
        let p = graph_metric(&Graph::path(15).unwrap()).unwrap();
        assert!(matches!(minimax_measure(&p, 3.0), Err(Error::Scale(_))));
    }

    #[test]
    fn certificate_json() {
        let p = graph_metric(&Graph::path(5).unwrap()).unwrap();
        let c = minimax_measure(&p, 4.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["pairs"], serde_json::json!([[0, 4]]));
        assert_eq!(MeasureCertificate::from_json_str(&c.to_json()).unwrap(), c);
    }
}
