//! Dense two-phase primal simplex with Bland's rule.
//!
//! The tableau holds one column per nonnegative structural variable (free
//! variables are split into a positive and a negative part), one slack or
//! surplus per inequality, and one artificial per `>=`/`=` row. Every row owns
//! a column that starts as the unit vector `e_i` (its slack or artificial),
//! which lets the dual values be read off the final reduced costs.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Primal feasibility and pivot tolerance.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;
/// Smallest pivot element accepted by the ratio test.
const PIVOT_TOLERANCE: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_AFTER_DEGENERATE: usize = 50;
/// Pivots between refactorizations of the tableau.
const REFACTOR_EVERY: usize = 100;
/// Relative strong-duality gap accepted at optimality.
pub const DUALITY_GAP_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bound {
    /// `x >= 0`
    NonNegative,
    /// unrestricted
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram {
    pub objective: Objective,
    pub costs: Vec<f64>,
    /// Dense constraint rows.
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint row, in the sign convention where
    /// `Σ rhs_i · duals_i` equals the optimal objective.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(objective: Objective, costs: Vec<f64>) -> Self {
        let n = costs.len();
        Self {
            objective,
            costs,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![Bound::NonNegative; n],
        }
    }

    pub fn constrain(&mut self, row: Vec<f64>, sense: Sense, rhs: f64) -> &mut Self {
        self.rows.push(row);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Shape(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        if self.senses.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::Shape("rows, senses and rhs differ in length".into()));
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {n}",
                self.rows[i].len()
            )));
        }
        let finite = self
            .costs
            .iter()
            .chain(&self.rhs)
            .chain(self.rows.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Shape("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution> {
        self.check()?;
        let mut t = Tableau::build(self);
        t.run()?;
        t.extract(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural { var: usize, negated: bool },
    Slack,
    Artificial,
}

struct Tableau {
    m: usize,
    width: usize,
    /// `(m + 1) x (width + 1)`; the last row holds reduced costs and minus
    /// the objective, the last column the basic values.
    cells: Vec<f64>,
    /// Constraint rows of the initial tableau, kept for refactorization.
    original: Vec<f64>,
    kinds: Vec<ColumnKind>,
    /// Phase-two cost of every column, minimization form.
    cost: Vec<f64>,
    basis: Vec<usize>,
    /// Column that started as `e_i` for row `i`.
    unit: Vec<usize>,
    /// `-1` where the row was negated to make its rhs nonnegative.
    row_sign: Vec<f64>,
    pivots: usize,
    status: LpStatus,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let flip = if lp.objective == Objective::Maximize {
            -1.0
        } else {
            1.0
        };
        let mut kinds = Vec::new();
        let mut cost = Vec::new();
        for (var, b) in lp.bounds.iter().enumerate() {
            kinds.push(ColumnKind::Structural {
                var,
                negated: false,
            });
            cost.push(flip * lp.costs[var]);
            if *b == Bound::Free {
                kinds.push(ColumnKind::Structural { var, negated: true });
                cost.push(-flip * lp.costs[var]);
            }
        }
        let structural = kinds.len();
        let row_sign: Vec<f64> = lp
            .rhs
            .iter()
            .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let senses: Vec<Sense> = lp
            .senses
            .iter()
            .zip(&row_sign)
            .map(|(&s, &sg)| match (s, sg < 0.0) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            })
            .collect();
        // slack/surplus columns, then artificials
        let mut slack_of = vec![None; m];
        for (i, s) in senses.iter().enumerate() {
            if *s != Sense::Eq {
                slack_of[i] = Some(kinds.len());
                kinds.push(ColumnKind::Slack);
                cost.push(0.0);
            }
        }
        let mut unit = vec![0; m];
        for (i, s) in senses.iter().enumerate() {
            match s {
                Sense::Le => unit[i] = slack_of[i].expect("inequality has a slack"),
                _ => {
                    unit[i] = kinds.len();
                    kinds.push(ColumnKind::Artificial);
                    cost.push(0.0);
                }
            }
        }
        let width = kinds.len();
        let stride = width + 1;
        let mut cells = vec![0.0; (m + 1) * stride];
        for i in 0..m {
            let row = &mut cells[i * stride..(i + 1) * stride];
            let sg = row_sign[i];
            let mut col = 0;
            for (var, b) in lp.bounds.iter().enumerate() {
                row[col] = sg * lp.rows[i][var];
                col += 1;
                if *b == Bound::Free {
                    row[col] = -sg * lp.rows[i][var];
                    col += 1;
                }
            }
            debug_assert_eq!(col, structural);
            if let Some(s) = slack_of[i] {
                row[s] = if senses[i] == Sense::Ge { -1.0 } else { 1.0 };
            }
            row[unit[i]] = 1.0;
            row[width] = sg * lp.rhs[i];
        }
        let original = cells[..m * stride].to_vec();
        Self {
            m,
            width,
            cells,
            original,
            kinds,
            cost,
            basis: unit.clone(),
            unit,
            row_sign,
            pivots: 0,
            status: LpStatus::Optimal,
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * (self.width + 1) + c]
    }

    fn set_objective(&mut self, costs: &[f64]) {
        let stride = self.width + 1;
        let m = self.m;
        let mut obj: Vec<f64> = costs.to_vec();
        obj.push(0.0);
        for i in 0..m {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for c in 0..stride {
                    obj[c] -= cb * self.cells[i * stride + c];
                }
            }
        }
        self.cells[m * stride..].copy_from_slice(&obj);
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let stride = self.width + 1;
        let p = self.at(row, col);
        let (before, rest) = self.cells.split_at_mut(row * stride);
        let (prow, after) = rest.split_at_mut(stride);
        prow.iter_mut().for_each(|v| *v /= p);
        prow[col] = 1.0;
        for other in before
            .chunks_exact_mut(stride)
            .chain(after.chunks_exact_mut(stride))
        {
            let f = other[col];
            if f != 0.0 {
                for (o, &pv) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * pv;
                }
                other[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Primal iterations with Dantzig pricing. After a run of degenerate
    /// pivots the entering choice switches to Bland's rule (lowest eligible
    /// index, ties in the ratio test broken by lowest basic index) until the
    /// objective moves again, which rules out cycling. `allowed` filters
    /// entering columns.
    fn iterate(&mut self, costs: &[f64], allowed: impl Fn(ColumnKind) -> bool) -> Result<bool> {
        let limit = 50 * (self.m + self.width) + 1000;
        let mut steps = 0;
        let mut degenerate_streak = 0usize;
        loop {
            let m = self.m;
            let bland = degenerate_streak >= BLAND_AFTER_DEGENERATE;
            let eligible =
                |c: usize| allowed(self.kinds[c]) && self.at(m, c) < -FEASIBILITY_TOLERANCE;
            let entering = if bland {
                (0..self.width).find(|&c| eligible(c))
            } else {
                (0..self.width)
                    .filter(|&c| eligible(c))
                    .min_by(|&a, &b| self.at(m, a).total_cmp(&self.at(m, b)).then(a.cmp(&b)))
            };
            let Some(col) = entering else { return Ok(true) };
            let mut min_ratio = f64::INFINITY;
            for r in 0..m {
                let a = self.at(r, col);
                if a > PIVOT_TOLERANCE {
                    min_ratio = min_ratio.min(self.at(r, self.width).max(0.0) / a);
                }
            }
            if min_ratio == f64::INFINITY {
                return Ok(false);
            }
            let slack = 1e-12 * (1.0 + min_ratio);
            let mut leave: Option<usize> = None;
            for r in 0..m {
                let a = self.at(r, col);
                if a > PIVOT_TOLERANCE && self.at(r, self.width).max(0.0) / a <= min_ratio + slack {
                    leave = match leave {
                        None => Some(r),
                        Some(br) if bland => Some(if self.basis[r] < self.basis[br] {
                            r
                        } else {
                            br
                        }),
                        Some(br) => Some(if a > self.at(br, col) { r } else { br }),
                    };
                }
            }
            let row = leave.expect("a finite ratio has a row");
            if min_ratio > 0.0 {
                degenerate_streak = 0;
            } else {
                degenerate_streak += 1;
            }
            self.pivot(row, col);
            steps += 1;
            if steps % REFACTOR_EVERY == 0 {
                self.refactor(costs)?;
            }
            if steps > limit {
                return Err(Error::Numerical {
                    message: format!("simplex stalled after {steps} pivots"),
                    dump: self.dump(),
                });
            }
        }
    }

    /// Rebuild the tableau from the original data for the current basis.
    fn refactor(&mut self, costs: &[f64]) -> Result<()> {
        let m = self.m;
        let stride = self.width + 1;
        // B is m x m with columns taken from the original tableau
        let mut b = vec![0.0; m * m];
        for (j, &col) in self.basis.iter().enumerate() {
            for i in 0..m {
                b[i * m + j] = self.original[i * stride + col];
            }
        }
        let mut rhs = self.original.clone();
        // Gaussian elimination with partial pivoting on [B | original]
        for k in 0..m {
            let p = (k..m)
                .max_by(|&x, &y| b[x * m + k].abs().total_cmp(&b[y * m + k].abs()))
                .expect("nonempty range");
            if b[p * m + k].abs() < 1e-12 {
                return Err(Error::Numerical {
                    message: "singular basis during refactorization".into(),
                    dump: self.dump(),
                });
            }
            if p != k {
                for c in 0..m {
                    b.swap(k * m + c, p * m + c);
                }
                for c in 0..stride {
                    rhs.swap(k * stride + c, p * stride + c);
                }
            }
            let inv = 1.0 / b[k * m + k];
            for r in 0..m {
                if r == k {
                    continue;
                }
                let f = b[r * m + k] * inv;
                if f == 0.0 {
                    continue;
                }
                for c in k..m {
                    b[r * m + c] -= f * b[k * m + c];
                }
                for c in 0..stride {
                    rhs[r * stride + c] -= f * rhs[k * stride + c];
                }
            }
        }
        // row k of the solved system belongs to basis position k
        for k in 0..m {
            let inv = 1.0 / b[k * m + k];
            for c in 0..stride {
                self.cells[k * stride + c] = rhs[k * stride + c] * inv;
            }
            self.cells[k * stride + self.basis[k]] = 1.0;
        }
        self.set_objective(costs);
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let stride = self.width + 1;
        let has_artificial = self.kinds.contains(&ColumnKind::Artificial);
        if has_artificial {
            let phase_one: Vec<f64> = self
                .kinds
                .iter()
                .map(|k| {
                    if *k == ColumnKind::Artificial {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            self.set_objective(&phase_one);
            self.iterate(&phase_one, |_| true)?;
            self.refactor(&phase_one)?;
            let infeasibility = -self.cells[self.m * stride + self.width];
            let scale = 1.0
                + (0..self.m)
                    .map(|r| self.at(r, self.width).abs())
                    .fold(0.0, f64::max);
            if infeasibility > FEASIBILITY_TOLERANCE * scale {
                self.status = LpStatus::Infeasible;
                return Ok(());
            }
            // drive zero-level artificials out of the basis where possible
            for r in 0..self.m {
                if self.kinds[self.basis[r]] == ColumnKind::Artificial {
                    let col = (0..self.width).find(|&c| {
                        self.kinds[c] != ColumnKind::Artificial
                            && self.at(r, c).abs() > FEASIBILITY_TOLERANCE
                    });
                    if let Some(c) = col {
                        self.pivot(r, c);
                    }
                }
            }
        }
        let cost = self.cost.clone();
        self.set_objective(&cost);
        let bounded = self.iterate(&cost, |k| k != ColumnKind::Artificial)?;
        self.refactor(&cost)?;
        if !bounded {
            self.status = LpStatus::Unbounded;
        }
        Ok(())
    }

    fn extract(&self, lp: &LinearProgram) -> Result<LpSolution> {
        let n = lp.num_vars();
        let m = self.m;
        if self.status != LpStatus::Optimal {
            return Ok(LpSolution {
                status: self.status,
                x: vec![0.0; n],
                objective: 0.0,
                duals: vec![0.0; m],
                pivots: self.pivots,
            });
        }
        let mut x = vec![0.0; n];
        for (r, &b) in self.basis.iter().enumerate() {
            if let ColumnKind::Structural { var, negated } = self.kinds[b] {
                let v = self.at(r, self.width);
                x[var] += if negated { -v } else { v };
            }
        }
        let objective: f64 = lp.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
        let direction = if lp.objective == Objective::Maximize {
            -1.0
        } else {
            1.0
        };
        let duals: Vec<f64> = (0..m)
            .map(|i| {
                let internal = -self.at(m, self.unit[i]);
                direction * self.row_sign[i] * internal
            })
            .collect();

        let scale = 1.0 + objective.abs();
        for (i, row) in lp.rows.iter().enumerate() {
            let lhs: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
            let slack = lp.rhs[i] - lhs;
            let bad = match lp.senses[i] {
                Sense::Le => slack < -DUALITY_GAP_TOLERANCE * (1.0 + lp.rhs[i].abs()),
                Sense::Ge => slack > DUALITY_GAP_TOLERANCE * (1.0 + lp.rhs[i].abs()),
                Sense::Eq => slack.abs() > DUALITY_GAP_TOLERANCE * (1.0 + lp.rhs[i].abs()),
            };
            if bad {
                return Err(Error::Numerical {
                    message: format!("row {i} violated by {slack:e} at the reported optimum"),
                    dump: self.dump(),
                });
            }
        }
        let dual_objective: f64 = lp.rhs.iter().zip(&duals).map(|(b, y)| b * y).sum();
        if (dual_objective - objective).abs() > DUALITY_GAP_TOLERANCE * scale {
            return Err(Error::Numerical {
                message: format!(
                    "duality gap {:e} (primal {objective}, dual {dual_objective})",
                    dual_objective - objective
                ),
                dump: self.dump(),
            });
        }
        Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            duals,
            pivots: self.pivots,
        })
    }

    /// Plain-text tableau: one line per row, `basis | coefficients | rhs`.
    fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "tableau {} rows x {} columns, {} pivots",
            self.m, self.width, self.pivots
        );
        for r in 0..=self.m {
            let label = if r < self.m {
                format!("x{:<5}", self.basis[r])
            } else {
                "obj   ".to_string()
            };
            let _ = write!(out, "{label}|");
            for c in 0..self.width.min(64) {
                let _ = write!(out, " {:>10.4e}", self.at(r, c));
            }
            if self.width > 64 {
                out.push_str(" ...");
            }
            let _ = writeln!(out, " | {:>12.6e}", self.at(r, self.width));
        }
        out
    }
}

/// Plain-text tableau dump of the initial tableau for `lp`, for debugging.
pub fn debug_dump(lp: &LinearProgram) -> Result<String> {
    lp.check()?;
    Ok(Tableau::build(lp).dump())
}
