//! Finitely generated additive subgroups of `Q^n` in Hermite normal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{lcm_of_denominators, parse_q, Q, Z};

/// Row-style Hermite normal form of an integer matrix: echelon rows with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn row_hnf(mut rows: Vec<Vec<Z>>) -> Vec<Vec<Z>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][col].is_zero() && best.is_none_or(|b| rows[i][col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let f = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = rows[r].clone();
        for i in 0..r {
            let f = rows[i][col].div_floor(&pivot_row[col]);
            if !f.is_zero() {
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// The additive group generated by some rational vectors, stored canonically
/// as `hnf / denom` with the smallest possible denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdditiveLattice {
    dim: usize,
    hnf: Vec<Vec<Z>>,
    denom: Z,
}

impl AdditiveLattice {
    pub fn from_generators(dim: usize, gens: &[Vec<Q>]) -> Self {
        let denom = lcm_of_denominators(gens.iter().flatten());
        let ints: Vec<Vec<Z>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        Self::from_integer_rows(dim, ints, denom)
    }

    fn from_integer_rows(dim: usize, rows: Vec<Vec<Z>>, denom: Z) -> Self {
        let mut hnf = row_hnf(rows);
        let content = hnf.iter().flatten().fold(denom.clone(), |acc, x| acc.gcd(x));
        let denom = if content.is_one() {
            denom
        } else {
            for x in hnf.iter_mut().flatten() {
                *x /= &content;
            }
            denom / &content
        };
        AdditiveLattice { dim, hnf, denom }
    }

    /// `Z^dim`.
    pub fn standard(dim: usize) -> Self {
        let rows = (0..dim).map(|i| (0..dim).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect();
        AdditiveLattice { dim, hnf: rows, denom: Z::one() }
    }

    /// `⊕ d_i Z e_i` for positive rationals `d_i`.
    pub fn diagonal(entries: &[Q]) -> Self {
        let n = entries.len();
        let gens: Vec<Vec<Q>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { Q::zero() }).collect()).collect();
        Self::from_generators(n, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn denominator(&self) -> &Z {
        &self.denom
    }

    pub fn hnf(&self) -> &[Vec<Z>] {
        &self.hnf
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.hnf.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")).collect()
    }

    /// Canonical basis rows (upper triangular when full rank).
    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.hnf.iter().map(|r| r.iter().map(|x| Q::new(x.clone(), self.denom.clone())).collect()).collect()
    }

    /// Diagonal of the echelon basis, i.e. the pivot entries.
    pub fn pivot_values(&self) -> Vec<Q> {
        self.hnf.iter().zip(self.pivots()).map(|(r, p)| Q::new(r[p].clone(), self.denom.clone())).collect()
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` is a member.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Z>> {
        let scaled: Vec<Q> = v.iter().map(|x| x * Q::from_integer(self.denom.clone())).collect();
        if !scaled.iter().all(Q::is_integer) {
            return None;
        }
        let mut rest: Vec<Z> = scaled.into_iter().map(|x| x.to_integer()).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, p) in self.hnf.iter().zip(self.pivots()) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (c, rem) = rest[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &c * y;
            }
            coords.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &AdditiveLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// `|det|` of a basis; `None` when not of full rank.
    pub fn covolume(&self) -> Option<Q> {
        self.is_full_rank().then(|| self.pivot_values().into_iter().product())
    }

    /// `[sup : self]` when `self ⊆ sup` and both have the same rank.
    pub fn index_in(&self, sup: &AdditiveLattice) -> Option<Z> {
        if self.rank() != sup.rank() || self.pivots() != sup.pivots() || !sup.contains_lattice(self) {
            return None;
        }
        let ratio: Q = self.pivot_values().iter().zip(sup.pivot_values()).map(|(a, b)| a / b).product();
        ratio.is_integer().then(|| ratio.to_integer())
    }

    pub fn scale(&self, c: &Q) -> AdditiveLattice {
        let gens: Vec<Vec<Q>> = self.basis().iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        Self::from_generators(self.dim, &gens)
    }

    pub fn sum(&self, other: &AdditiveLattice) -> AdditiveLattice {
        let mut gens = self.basis();
        gens.extend(other.basis());
        Self::from_generators(self.dim, &gens)
    }

    /// Image under `v -> v * M`.
    pub fn transform(&self, m: &[Vec<Q>]) -> AdditiveLattice {
        let gens: Vec<Vec<Q>> = self.basis().iter().map(|r| crate::rational::vec_mat(r, m)).collect();
        Self::from_generators(m.first().map_or(0, Vec::len), &gens)
    }

    /// Canonical representative of `v` modulo a full-rank lattice: pivot
    /// coordinates are brought into `[0, pivot)`.
    pub fn reduce_mod(&self, v: &[Q]) -> Vec<Q> {
        assert!(self.is_full_rank(), "reduction needs a full-rank lattice");
        let mut out = v.to_vec();
        for (row, p) in self.basis().iter().zip(self.pivots()) {
            let f = (&out[p] / &row[p]).floor();
            if !f.is_zero() {
                for (x, b) in out.iter_mut().zip(row) {
                    *x -= &f * b;
                }
            }
        }
        out
    }

    /// Integer vector `n` mapped to `Σ n_i b_i`.
    pub fn combine(&self, coords: &[Z]) -> Vec<Q> {
        let mut out = vec![Z::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.hnf) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out.into_iter().map(|x| Q::new(x, self.denom.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct RowsError {
    pub line: usize,
    pub message: String,
}

/// Reads one basis vector per line, entries separated by whitespace.
/// Blank lines and `#` comments are skipped; all rows must have `dim` entries.
pub fn parse_rows(text: &str, dim: usize) -> Result<Vec<Vec<Q>>, RowsError> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| RowsError { line: n + 1, message };
        let row = line
            .split_whitespace()
            .map(|t| parse_q(t).ok_or_else(|| err(format!("`{t}` is not a rational number"))))
            .collect::<Result<Vec<Q>, _>>()?;
        if row.len() != dim {
            return Err(err(format!("expected {dim} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(RowsError {
            line: text.lines().count(),
            message: format!("expected {dim} rows, found {}", rows.len()),
        });
    }
    Ok(rows)
}
