use std::fmt;

use num_traits::Zero;

use crate::rational::{add_scaled, is_zero_vec, nullspace, rref, unit_vec, Q};

/// A linear subspace of `Q^n`, stored in reduced row echelon form so that
/// structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit_vec(ambient, i)))
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Q>>,
    {
        let rows: Vec<Vec<Q>> = vectors.into_iter().filter(|v| !is_zero_vec(v)).collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let (rows, pivots) = rref(rows);
        Subspace { ambient, rows, pivots }
    }

    /// Span of the coordinate vectors `e_i` for `i` in `coords`.
    pub fn coordinate(ambient: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        Self::span(ambient, coords.into_iter().map(|i| unit_vec(ambient, i)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Canonical basis (reduced echelon rows).
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo this subspace by clearing pivot coordinates.
    /// The result is zero exactly when `v` lies in the subspace.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = -out[p].clone();
                add_scaled(&mut out, &f, row);
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.rows.iter().all(|r| self.contains_vector(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::span(self.ambient, self.rows.iter().chain(&other.rows).cloned())
    }

    /// Orthogonal complement for the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        Self::span(self.ambient, nullspace(&self.rows, self.ambient))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.contains(other) {
            return other.clone();
        }
        if other.contains(self) {
            return self.clone();
        }
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// True when the two subspaces are nested one way or the other.
    pub fn comparable(&self, other: &Subspace) -> bool {
        self.contains(other) || other.contains(self)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}, pivots {:?})", self.dim(), self.ambient, self.pivots)
    }
}
