//! Nilpotent Lie algebras over Q given by structure constants, and their
//! structural invariants.

mod frame;
mod parse;
mod series;
mod solid;
mod subspace;

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{add_scaled, fmt_q, is_zero_vec, zero_vec, Q};

pub use frame::{carnot_graded, compatible_frame, dilated_bracket, CompatibleFrame, GradedBracket, GradedEntry};
pub use parse::{parse_algebra, write_algebra, ParseError};
pub use series::{
    bracket_subspaces, centralizer, homogeneous_dimension, is_ideal, k_c, lower_central_series, nilpotency_class,
    upper_central_series,
};
pub use solid::{solid_closure, solid_flag, Derivation, FlagMode, SolidClosure, SolidFlag, SolidIdeal};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension must be positive")]
    ZeroDimension,
    /// Indices in errors are 1-based, matching the text format.
    #[error("index out of range in bracket ({i},{j}) -> {k} for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },
    #[error("bracket ({i},{j}) must be given with i < j")]
    PairOrder { i: usize, j: usize },
    #[error("bracket ({i},{j}) given twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error("Jacobi identity fails at ({i},{j},{k}): residual {}", fmt_vec(residual))]
    JacobiViolation { i: usize, j: usize, k: usize, residual: Vec<Q> },
    #[error("not nilpotent: lower central series stabilizes at a nonzero term of dimension {stable_dim}")]
    NotNilpotent { stable_dim: usize },
    #[error("modulus is not an ideal")]
    MNotIdeal,
    #[error("flag does not refine the lower central series")]
    FlagNotRefining,
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

/// Unvalidated structure constants with 1-based indices, as written in the
/// text format: `[e_i, e_j] = sum coef * e_k` for `i < j`.
#[derive(Debug, Clone, Default)]
pub struct RawAlgebra {
    pub dim: usize,
    pub name: Option<String>,
    pub brackets: Vec<RawBracket>,
}

#[derive(Debug, Clone)]
pub struct RawBracket {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, Q)>,
}

impl RawAlgebra {
    pub fn new(dim: usize) -> Self {
        RawAlgebra { dim, name: None, brackets: Vec::new() }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Adds `coef * e_k` to `[e_i, e_j]` (1-based). Repeated calls for the
    /// same pair accumulate into one bracket line.
    pub fn bracket(mut self, i: usize, j: usize, k: usize, coef: Q) -> Self {
        match self.brackets.iter_mut().find(|b| b.i == i && b.j == j) {
            Some(b) => b.terms.push((k, coef)),
            None => self.brackets.push(RawBracket { i, j, terms: vec![(k, coef)] }),
        }
        self
    }

    pub fn validate(self) -> Result<LieAlgebra, AlgebraError> {
        validate(self)
    }
}

/// A validated nilpotent Lie algebra. Basis indices are 0-based in this API.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    name: Option<String>,
    /// `table[i * dim + j] = [e_i, e_j]`, stored for all ordered pairs.
    table: Vec<Vec<Q>>,
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .field("brackets", &self.constants().len())
            .finish()
    }
}

pub fn validate(raw: RawAlgebra) -> Result<LieAlgebra, AlgebraError> {
    let d = raw.dim;
    if d == 0 {
        return Err(AlgebraError::ZeroDimension);
    }
    let mut table = vec![zero_vec(d); d * d];
    let mut seen = BTreeSet::new();
    for b in &raw.brackets {
        for (k, _) in &b.terms {
            if b.i == 0 || b.j == 0 || *k == 0 || b.i > d || b.j > d || *k > d {
                return Err(AlgebraError::IndexOutOfRange { i: b.i, j: b.j, k: *k, dim: d });
            }
        }
        if b.i >= b.j {
            return Err(AlgebraError::PairOrder { i: b.i, j: b.j });
        }
        if !seen.insert((b.i, b.j)) {
            return Err(AlgebraError::DuplicateBracket { i: b.i, j: b.j });
        }
        let (i, j) = (b.i - 1, b.j - 1);
        for (k, c) in &b.terms {
            table[i * d + j][k - 1] += c;
            table[j * d + i][k - 1] -= c;
        }
    }
    let alg = LieAlgebra { dim: d, name: raw.name, table };
    alg.check_jacobi()?;
    let lcs = series::lcs_until_stable(&alg);
    let last = lcs.last().expect("series is nonempty");
    if !last.is_zero() {
        return Err(AlgebraError::NotNilpotent { stable_dim: last.dim() });
    }
    Ok(alg)
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> LieAlgebra {
        validate(RawAlgebra::new(dim).named(format!("abelian({dim})"))).expect("abelian algebra is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `[e_i, e_j]` for 0-based indices.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i * self.dim + j]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim;
        let mut out = zero_vec(d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let v = &self.table[i * d + j];
                if !is_zero_vec(v) {
                    add_scaled(&mut out, &(xi * yj), v);
                }
            }
        }
        out
    }

    /// Nonzero constants `(i, j, k, c)` with `i < j`, 0-based.
    pub fn constants(&self) -> Vec<(usize, usize, usize, Q)> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for (k, c) in self.table[i * d + j].iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Rebuilds the algebra from 0-based constants `(i, j, k, c)`, `i < j`.
    pub fn from_constants(
        dim: usize,
        name: Option<String>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Q)>,
    ) -> Result<LieAlgebra, AlgebraError> {
        let mut raw = RawAlgebra::new(dim);
        raw.name = name;
        for (i, j, k, c) in constants {
            raw = raw.bracket(i + 1, j + 1, k + 1, c);
        }
        validate(raw)
    }

    pub fn to_raw(&self) -> RawAlgebra {
        let mut raw = RawAlgebra::new(self.dim);
        raw.name = self.name.clone();
        for (i, j, k, c) in self.constants() {
            raw = raw.bracket(i + 1, j + 1, k + 1, c);
        }
        raw
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| is_zero_vec(v))
    }

    fn check_jacobi(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        let e = |i: usize| crate::rational::unit_vec(d, i);
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut r = self.bracket(&e(i), self.basis_bracket(j, k));
                    let t2 = self.bracket(&e(j), self.basis_bracket(k, i));
                    let t3 = self.bracket(&e(k), self.basis_bracket(i, j));
                    for ((a, b), c) in r.iter_mut().zip(t2).zip(t3) {
                        *a += b + c;
                    }
                    if !is_zero_vec(&r) {
                        return Err(AlgebraError::JacobiViolation { i: i + 1, j: j + 1, k: k + 1, residual: r });
                    }
                }
            }
        }
        Ok(())
    }
}
