//! Exact linear programming over Q.
//!
//! Problems have the form `min c·x` subject to `G x ≥ h` with `x` free. The
//! solver runs a two-phase tableau simplex with Bland's rule on the dual
//! `max h·y, Gᵀy = c, y ≥ 0`; the optimal simplex multipliers are the primal
//! point. Every answer is re-verified by substitution before it is returned.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{dot, solve_left, zero_vec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("constraints are infeasible")]
    Infeasible,
    #[error("constraint row {0} has the wrong length")]
    DimensionMismatch(usize),
    #[error("certificate failed verification: {0}")]
    CertificateMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    /// Each row `(g, h)` encodes `g · x ≥ h`.
    pub rows: Vec<(Vec<Q>, Q)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCertificate {
    pub optimum: Q,
    pub primal: Vec<Q>,
    /// One nonnegative multiplier per constraint row.
    pub dual: Vec<Q>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<Q>) -> Self {
        assert_eq!(objective.len(), num_vars);
        LinearProgram { num_vars, objective, rows: Vec::new() }
    }

    pub fn push(&mut self, lhs: Vec<Q>, rhs: Q) {
        self.rows.push((lhs, rhs));
    }
}

impl LpCertificate {
    /// Exact substitution checks: primal feasibility, dual feasibility,
    /// `Σ y_j g_j = c` and equal objective values.
    pub fn verify(&self, lp: &LinearProgram) -> Result<(), String> {
        if self.dual.len() != lp.rows.len() || self.primal.len() != lp.num_vars {
            return Err("certificate has wrong dimensions".into());
        }
        for (j, (g, h)) in lp.rows.iter().enumerate() {
            if dot(g, &self.primal) < *h {
                return Err(format!("primal point violates row {j}"));
            }
            if self.dual[j].is_negative() {
                return Err(format!("negative multiplier on row {j}"));
            }
        }
        let mut combo = zero_vec(lp.num_vars);
        let mut bound = Q::zero();
        for ((g, h), y) in lp.rows.iter().zip(&self.dual) {
            if y.is_zero() {
                continue;
            }
            crate::rational::add_scaled(&mut combo, y, g);
            bound += y * h;
        }
        if combo != lp.objective {
            return Err("multipliers do not reproduce the objective".into());
        }
        if bound != self.optimum || dot(&lp.objective, &self.primal) != self.optimum {
            return Err("primal and dual values differ from the optimum".into());
        }
        Ok(())
    }
}

struct Tableau {
    /// Rows of `[A | I | b]`.
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Q {
        &self.t[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.t[r][col].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Maximizes `cost · z` over allowed columns with Bland's rule.
    fn run(&mut self, cost: &[Q], allowed: &[bool]) -> Step {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let mut rc = cost[j].clone();
                    for (r, &b) in self.basis.iter().enumerate() {
                        if !self.t[r][j].is_zero() {
                            rc -= &cost[b] * &self.t[r][j];
                        }
                    }
                    rc.is_positive()
                }
            });
            let Some(col) = entering else { return Step::Optimal };
            let mut leave: Option<(usize, Q)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return Step::Unbounded };
            self.pivot(r, col);
        }
    }
}

pub fn minimize(lp: &LinearProgram) -> Result<LpCertificate, LpError> {
    for (j, (g, _)) in lp.rows.iter().enumerate() {
        if g.len() != lp.num_vars {
            return Err(LpError::DimensionMismatch(j));
        }
    }
    let m = lp.num_vars;
    let n = lp.rows.len();
    let h: Vec<Q> = lp.rows.iter().map(|(_, h)| h.clone()).collect();

    // Equality system A y = c with A[r][j] = G[j][r], signs flipped so c ≥ 0.
    let mut t = Vec::with_capacity(m);
    for r in 0..m {
        let flip = lp.objective[r].is_negative();
        let mut row: Vec<Q> = lp.rows.iter().map(|(g, _)| if flip { -g[r].clone() } else { g[r].clone() }).collect();
        row.extend((0..m).map(|i| if i == r { Q::from_integer(1.into()) } else { Q::zero() }));
        row.push(lp.objective[r].abs());
        t.push(row);
    }
    let ncols = n + m;
    let mut tab = Tableau { t, basis: (n..n + m).collect(), ncols };

    // Phase 1: drive the artificial variables to zero.
    let mut cost1 = vec![Q::zero(); ncols];
    for c in cost1.iter_mut().skip(n) {
        *c = Q::from_integer((-1).into());
    }
    let all = vec![true; ncols];
    tab.run(&cost1, &all);
    let infeasibility: Q = (0..tab.t.len()).filter(|&r| tab.basis[r] >= n).map(|r| tab.rhs(r).clone()).sum();
    if infeasibility.is_positive() {
        return Err(LpError::Unbounded);
    }
    // Pivot remaining artificials out; rows where that is impossible are redundant.
    let mut keep_rows: Vec<usize> = (0..m).collect();
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, col);
                r += 1;
            } else {
                tab.t.remove(r);
                tab.basis.remove(r);
                keep_rows.remove(r);
            }
        } else {
            r += 1;
        }
    }

    // Phase 2 on the real objective.
    let mut cost2 = vec![Q::zero(); ncols];
    cost2[..n].clone_from_slice(&h);
    let mut allowed = vec![true; ncols];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    if let Step::Unbounded = tab.run(&cost2, &allowed) {
        return Err(LpError::Infeasible);
    }

    let mut dual = vec![Q::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        dual[b] = tab.rhs(r).clone();
    }
    // Multipliers π on the surviving rows: Σ_r π_r A[r][b] = h_b for basic b.
    let system: Vec<Vec<Q>> =
        keep_rows.iter().map(|&r| tab.basis.iter().map(|&b| lp.rows[b].0[r].clone()).collect()).collect();
    let target: Vec<Q> = tab.basis.iter().map(|&b| h[b].clone()).collect();
    let pi = solve_left(&system, &target).ok_or_else(|| LpError::CertificateMismatch("singular final basis".into()))?;
    let mut primal = zero_vec(m);
    for (&r, v) in keep_rows.iter().zip(pi) {
        primal[r] = v;
    }
    if m == 0 && h.iter().any(Q::is_positive) {
        return Err(LpError::Infeasible);
    }
    let optimum = dot(&h, &dual);
    let cert = LpCertificate { optimum, primal, dual };
    cert.verify(lp).map_err(LpError::CertificateMismatch)?;
    Ok(cert)
}
