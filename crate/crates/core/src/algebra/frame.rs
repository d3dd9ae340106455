use num_traits::Zero;

use super::{lower_central_series, AlgebraError, LieAlgebra, Subspace};
use crate::rational::{identity, inverse, lcm_of_denominators, pow_q, unit_vec, vec_mat, Q};

/// An ordered basis adapted to a flag refining the lower central series.
/// Frame vectors are listed top block first; the weight of a vector is the
/// deepest lower-central term containing its block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleFrame {
    order: Vec<usize>,
    weights: Vec<u32>,
    vectors: Vec<Vec<Q>>,
    inverse: Vec<Vec<Q>>,
    blocks: Vec<usize>,
}

impl CompatibleFrame {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Source basis index of each frame vector (its pivot when it is not a
    /// coordinate vector).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Rows are the frame vectors in original coordinates.
    pub fn change_of_basis(&self) -> &[Vec<Q>] {
        &self.vectors
    }

    /// Flag block sizes from the top block down.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// First frame coordinate of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, &b| {
                let s = *acc;
                *acc += b;
                Some(s)
            })
            .collect()
    }

    pub fn block_of(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(q, &b)| std::iter::repeat_n(q, b)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.vectors == identity(self.dim())
    }

    pub fn to_frame(&self, v: &[Q]) -> Vec<Q> {
        vec_mat(v, &self.inverse)
    }

    pub fn to_original(&self, x: &[Q]) -> Vec<Q> {
        vec_mat(x, &self.vectors)
    }

    /// The same frame with every vector multiplied by `s`.
    pub fn scaled(&self, s: &Q) -> CompatibleFrame {
        let inv = s.recip();
        CompatibleFrame {
            order: self.order.clone(),
            weights: self.weights.clone(),
            vectors: self.vectors.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
            inverse: self.inverse.iter().map(|r| r.iter().map(|x| x * &inv).collect()).collect(),
            blocks: self.blocks.clone(),
        }
    }

    /// Structure constants expressed in frame coordinates.
    pub fn algebra_in_frame(&self, a: &LieAlgebra) -> LieAlgebra {
        let d = self.dim();
        let mut constants = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let v = self.to_frame(&a.bracket(&self.vectors[i], &self.vectors[j]));
                for (k, c) in v.into_iter().enumerate() {
                    if !c.is_zero() {
                        constants.push((i, j, k, c));
                    }
                }
            }
        }
        LieAlgebra::from_constants(d, a.name().map(String::from), constants)
            .expect("a change of basis preserves validity")
    }

    /// Uniform rescaling that makes the frame structure constants integral.
    pub fn integral_rescaling(&self, a: &LieAlgebra) -> Q {
        let fa = self.algebra_in_frame(a);
        let consts = fa.constants();
        Q::from_integer(lcm_of_denominators(consts.iter().map(|(_, _, _, c)| c)))
    }
}

/// Builds a frame adapted to `flag` (a descending chain from `g` to `{0}`
/// containing every lower-central term), or to the lower central series.
pub fn compatible_frame(a: &LieAlgebra, flag: Option<&[Subspace]>) -> Result<CompatibleFrame, AlgebraError> {
    let d = a.dim();
    let lcs = lower_central_series(a);
    let flag: Vec<Subspace> = flag.map(<[Subspace]>::to_vec).unwrap_or_else(|| lcs.clone());
    check_refines(d, &flag, &lcs)?;

    let mut block_vectors: Vec<Vec<(Vec<Q>, usize)>> = Vec::new();
    let mut span = Subspace::zero(d);
    for w in flag.iter().rev().skip(1) {
        let mut block = Vec::new();
        let mut candidates: Vec<(Vec<Q>, usize)> = (0..d).map(|t| (unit_vec(d, t), t)).collect();
        candidates.extend(w.basis().iter().zip(w.pivots()).map(|(r, &p)| (r.clone(), p)));
        for (v, src) in candidates {
            if span.dim() == w.dim() {
                break;
            }
            if w.contains_vector(&v) && !span.contains_vector(&v) {
                span = span.sum(&Subspace::span(d, [v.clone()]));
                block.push((v, src));
            }
        }
        block_vectors.push(block);
    }
    block_vectors.reverse();

    let mut order = Vec::with_capacity(d);
    let mut weights = Vec::with_capacity(d);
    let mut vectors = Vec::with_capacity(d);
    let mut blocks = Vec::with_capacity(block_vectors.len());
    for (p, block) in block_vectors.into_iter().enumerate() {
        let top = &flag[p];
        let weight = lcs.iter().rposition(|g| g.contains(top)).expect("g^1 contains every term") + 1;
        blocks.push(block.len());
        for (v, src) in block {
            order.push(src);
            weights.push(weight as u32);
            vectors.push(v);
        }
    }
    let inverse = inverse(&vectors).expect("frame vectors form a basis");
    Ok(CompatibleFrame { order, weights, vectors, inverse, blocks })
}

fn check_refines(d: usize, flag: &[Subspace], lcs: &[Subspace]) -> Result<(), AlgebraError> {
    let ok = flag.first().is_some_and(Subspace::is_full)
        && flag.last().is_some_and(Subspace::is_zero)
        && flag.iter().all(|w| w.ambient_dim() == d)
        && flag.windows(2).all(|p| p[0].contains(&p[1]) && p[0].dim() > p[1].dim())
        && lcs.iter().all(|g| flag.contains(g));
    if ok {
        Ok(())
    } else {
        Err(AlgebraError::FlagNotRefining)
    }
}

/// One structure constant of the dilated bracket `[f_i, f_j]_r ∋ coef · r^{-m} f_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coef: Q,
    pub m: u32,
}

/// The family of brackets `[x, y]_r = u(r)^{-1} [u(r) x, u(r) y]` in frame coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBracket {
    pub weights: Vec<u32>,
    pub entries: Vec<GradedEntry>,
}

impl GradedBracket {
    pub fn has_positive_exponent(&self) -> bool {
        self.entries.iter().any(|e| e.m > 0)
    }

    /// The bracket of `g[r]` for a fixed nonzero rational `r`.
    pub fn at(&self, r: &Q) -> LieAlgebra {
        let inv = r.recip();
        let consts = self.entries.iter().map(|e| (e.i, e.j, e.k, &e.coef * pow_q(&inv, e.m)));
        LieAlgebra::from_constants(self.weights.len(), None, consts).expect("dilation preserves validity")
    }
}

pub fn dilated_bracket(a: &LieAlgebra, frame: &CompatibleFrame) -> GradedBracket {
    let w = frame.weights();
    let entries = frame
        .algebra_in_frame(a)
        .constants()
        .into_iter()
        .map(|(i, j, k, coef)| {
            let m = w[k].checked_sub(w[i] + w[j]).expect("compatible frames only have nonnegative dilation exponents");
            GradedEntry { i, j, k, coef, m }
        })
        .collect();
    GradedBracket { weights: w.to_vec(), entries }
}

/// The Carnot-graded limit, in frame coordinates.
pub fn carnot_graded(a: &LieAlgebra, frame: &CompatibleFrame) -> LieAlgebra {
    let g = dilated_bracket(a, frame);
    let consts = g.entries.into_iter().filter(|e| e.m == 0).map(|e| (e.i, e.j, e.k, e.coef));
    let name = a.name().map(|n| format!("carnot({n})"));
    LieAlgebra::from_constants(frame.dim(), name, consts).expect("the graded limit satisfies Jacobi")
}
