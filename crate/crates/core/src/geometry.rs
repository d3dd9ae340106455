//! Guivarch lengths, systoles, flag covolumes and subring checks for lattices
//! written in the coordinates of a compatible frame.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::lattice::AdditiveLattice;
use crate::rational::{determinant, exact_root, fmt_q, pow_q, rational_gcd, Q, Z};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lattice is not of full rank")]
    RankDeficient,
    #[error("lattice does not meet flag term {0} in a full-rank sublattice")]
    NotFlagCompatible(usize),
    #[error("systole enumeration exceeded {0} nodes")]
    EnumerationLimit(u64),
    #[error("symplectic pairing needs even dimension")]
    OddDimension,
    #[error("pairing matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("pairing matrix does not have determinant 1")]
    NotUnimodularForm,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// The real number `q^(1/w)`, compared exactly by cross-powering.
#[derive(Debug, Clone)]
pub struct GLength {
    pub q: Q,
    pub w: u32,
}

impl GLength {
    pub fn new(q: Q, w: u32) -> Self {
        assert!(w > 0 && !q.is_negative());
        GLength { q, w }
    }

    pub fn zero() -> Self {
        GLength { q: Q::zero(), w: 1 }
    }

    pub fn of_rational(x: Q) -> Self {
        GLength::new(x, 1)
    }

    /// The value as an exact rational, when it is one.
    pub fn as_rational(&self) -> Option<Q> {
        let n = exact_root(self.q.numer(), self.w)?;
        let d = exact_root(self.q.denom(), self.w)?;
        Some(Q::new(n, d))
    }

    /// Multiplies the value by a positive rational `r`.
    pub fn scale(&self, r: &Q) -> GLength {
        GLength::new(&self.q * pow_q(r, self.w), self.w)
    }
}

impl PartialEq for GLength {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for GLength {}

impl PartialOrd for GLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GLength {
    fn cmp(&self, other: &Self) -> Ordering {
        pow_q(&self.q, other.w).cmp(&pow_q(&other.q, self.w))
    }
}

impl fmt::Display for GLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(x) => write!(f, "{}", fmt_q(&x)),
            None => write!(f, "{}^(1/{})", fmt_q(&self.q), self.w),
        }
    }
}

/// `max_i |v_i|^(1/w_i)` for a vector in frame coordinates.
pub fn guivarch_length(weights: &[u32], v: &[Q]) -> GLength {
    v.iter().zip(weights).map(|(x, &w)| GLength::new(x.abs(), w)).max().unwrap_or_else(GLength::zero)
}

/// A full-rank lattice in frame coordinates together with the frame weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedLattice {
    pub lattice: AdditiveLattice,
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Systole {
    pub length: GLength,
    pub witness: Vec<Q>,
}

/// Result of checking closure under a bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubringCheck {
    Subring,
    /// Basis rows `i`, `j` whose bracket leaves the lattice.
    Witness {
        i: usize,
        j: usize,
        bracket: Vec<Q>,
    },
}

impl SubringCheck {
    pub fn is_subring(&self) -> bool {
        matches!(self, SubringCheck::Subring)
    }
}

impl WeightedLattice {
    pub fn new(lattice: AdditiveLattice, weights: Vec<u32>) -> Result<Self, GeometryError> {
        if lattice.dim() != weights.len() {
            return Err(GeometryError::DimensionMismatch);
        }
        if !lattice.is_full_rank() {
            return Err(GeometryError::RankDeficient);
        }
        Ok(WeightedLattice { lattice, weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn covolume(&self) -> Q {
        self.lattice.covolume().expect("weighted lattices have full rank")
    }

    /// `u(r) · L`: coordinate `i` is multiplied by `r^{w_i}`.
    pub fn dilate(&self, r: &Q) -> WeightedLattice {
        let d = self.dim();
        let m: Vec<Vec<Q>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { pow_q(r, self.weights[i]) } else { Q::zero() }).collect())
            .collect();
        WeightedLattice { lattice: self.lattice.transform(&m), weights: self.weights.clone() }
    }

    pub fn length(&self, v: &[Q]) -> GLength {
        guivarch_length(&self.weights, v)
    }

    /// Exact systole with a witness vector. The search starts from the best
    /// basis row and then only looks for strictly shorter vectors, bounding
    /// each coordinate through the triangular basis.
    pub fn systole(&self, node_limit: Option<u64>) -> Result<Systole, GeometryError> {
        let basis = self.lattice.basis();
        let (mut best, mut witness) = basis
            .iter()
            .map(|b| (self.length(b), b.clone()))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("full rank lattices have a basis");
        let d = self.dim();
        let mut nodes: u64 = 0;
        let mut partial = vec![Q::zero(); d];
        self.search(&basis, 0, &mut partial, &mut best, &mut witness, &mut nodes, node_limit)?;
        Ok(Systole { length: best, witness })
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        basis: &[Vec<Q>],
        level: usize,
        partial: &mut Vec<Q>,
        best: &mut GLength,
        witness: &mut Vec<Q>,
        nodes: &mut u64,
        limit: Option<u64>,
    ) -> Result<(), GeometryError> {
        let d = self.dim();
        if level == d {
            if partial.iter().any(|x| !x.is_zero()) {
                let len = self.length(partial);
                if len < *best {
                    *best = len;
                    *witness = partial.clone();
                }
            }
            return Ok(());
        }
        *nodes += 1;
        if let Some(l) = limit {
            if *nodes > l {
                return Err(GeometryError::EnumerationLimit(l));
            }
        }
        // Coordinate `level` equals shift + n * pivot; rows chosen later
        // leave it untouched, so n can be pruned right here. Walking outward
        // from the n nearest -shift/pivot makes |value| grow on each side,
        // so a side is done at its first value that is not shorter than the
        // current best; short vectors found early tighten the rest.
        let w = self.weights[level];
        let pivot = basis[level][level].clone();
        let shift = partial[level].clone();
        let centre = (-&shift / &pivot).round().to_integer();
        for step in [Z::one(), -Z::one()] {
            let mut n = if step.is_positive() { centre.clone() } else { &centre - 1 };
            loop {
                let value = &shift + Q::from_integer(n.clone()) * &pivot;
                // |value|^(1/w) < best, exactly.
                if GLength::new(value.abs(), w) >= *best {
                    break;
                }
                let saved: Vec<Q> = partial[level..].to_vec();
                if !n.is_zero() {
                    let nq = Q::from_integer(n.clone());
                    for (x, b) in partial[level..].iter_mut().zip(&basis[level][level..]) {
                        *x += &nq * b;
                    }
                }
                self.search(basis, level + 1, partial, best, witness, nodes, limit)?;
                partial[level..].clone_from_slice(&saved);
                n += &step;
            }
        }
        Ok(())
    }

    /// Block covolumes along the coordinate flag with the given block sizes
    /// (top block first). Their product is the covolume.
    pub fn flag_covolumes(&self, blocks: &[usize]) -> Result<Vec<Q>, GeometryError> {
        let d = self.dim();
        if blocks.iter().sum::<usize>() != d {
            return Err(GeometryError::DimensionMismatch);
        }
        let pivots = self.lattice.pivots();
        let values = self.lattice.pivot_values();
        let mut start = 0;
        let mut out = Vec::with_capacity(blocks.len());
        for (j, &b) in blocks.iter().enumerate() {
            let deeper = pivots.iter().filter(|&&p| p >= start).count();
            if deeper != d - start {
                return Err(GeometryError::NotFlagCompatible(j));
            }
            out.push(values[start..start + b].iter().product());
            start += b;
        }
        Ok(out)
    }

    /// Whether the lattice is closed under `bracket` (in the same coordinates).
    pub fn is_subring(&self, bracket: &LieAlgebra) -> SubringCheck {
        is_subring(&self.lattice, bracket)
    }
}

pub fn is_subring(lattice: &AdditiveLattice, bracket: &LieAlgebra) -> SubringCheck {
    let basis = lattice.basis();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let v = bracket.bracket(&basis[i], &basis[j]);
            if !lattice.contains(&v) {
                return SubringCheck::Witness { i, j, bracket: v };
            }
        }
    }
    SubringCheck::Subring
}

/// Generator `s` of the group `{φ(x, y)}` over lattice basis pairs, for an
/// antisymmetric unimodular pairing matrix `φ`.
pub fn symplectic_value_group(lattice: &AdditiveLattice, phi: &[Vec<Q>]) -> Result<Q, GeometryError> {
    let d = lattice.dim();
    if phi.len() != d || phi.iter().any(|r| r.len() != d) {
        return Err(GeometryError::DimensionMismatch);
    }
    if d % 2 == 1 {
        return Err(GeometryError::OddDimension);
    }
    for i in 0..d {
        for j in 0..d {
            if phi[i][j] != -phi[j][i].clone() {
                return Err(GeometryError::NotAntisymmetric);
            }
        }
    }
    if determinant(phi) != Q::one() {
        return Err(GeometryError::NotUnimodularForm);
    }
    let basis = lattice.basis();
    let mut values = Vec::new();
    for x in &basis {
        let px = crate::rational::vec_mat(x, phi);
        for y in &basis {
            values.push(crate::rational::dot(&px, y));
        }
    }
    Ok(rational_gcd(&values))
}

/// Minkowski-type predicate: a lattice of systole at least 1 has covolume at least 1.
pub fn minkowski_check(l: &WeightedLattice) -> bool {
    let sys = l.systole(None).expect("unbounded enumeration terminates");
    sys.length < GLength::of_rational(Q::one()) || l.covolume() >= Q::one()
}
