use num_traits::Zero;

use super::{AlgebraError, LieAlgebra, Subspace};
use crate::rational::{nullspace, q, qr, Q};

/// `[S, T]` as the span of brackets of basis vectors.
pub fn bracket_subspaces(a: &LieAlgebra, s: &Subspace, t: &Subspace) -> Subspace {
    let mut vecs = Vec::new();
    for x in s.basis() {
        for y in t.basis() {
            vecs.push(a.bracket(x, y));
        }
    }
    Subspace::span(a.dim(), vecs)
}

pub fn is_ideal(a: &LieAlgebra, s: &Subspace) -> bool {
    s.contains(&bracket_subspaces(a, &Subspace::full(a.dim()), s))
}

/// Lower central series computed until it stops shrinking (used by validation).
pub(super) fn lcs_until_stable(a: &LieAlgebra) -> Vec<Subspace> {
    let g = Subspace::full(a.dim());
    let mut out = vec![g.clone()];
    loop {
        let last = out.last().unwrap();
        if last.is_zero() {
            return out;
        }
        let next = bracket_subspaces(a, &g, last);
        if &next == last {
            return out;
        }
        out.push(next);
    }
}

/// `g^1 ⊇ g^2 ⊇ … ⊇ {0}`, ending with the zero subspace.
pub fn lower_central_series(a: &LieAlgebra) -> Vec<Subspace> {
    lcs_until_stable(a)
}

/// Nilpotency class: number of nonzero terms of the lower central series.
pub fn nilpotency_class(a: &LieAlgebra) -> usize {
    lower_central_series(a).len() - 1
}

/// `{x : [x, S] ⊆ M}` for an ideal `M`.
pub fn centralizer(a: &LieAlgebra, s: &Subspace, m: &Subspace) -> Result<Subspace, AlgebraError> {
    if !is_ideal(a, m) {
        return Err(AlgebraError::MNotIdeal);
    }
    let d = a.dim();
    // Each equation is one coordinate of reduce_M([e_i, s]) viewed as a linear
    // form in x; reduce_M is linear so this is the kernel of x -> ([x, s_t] mod M)_t.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for st in s.basis() {
        let images: Vec<Vec<Q>> = (0..d).map(|i| m.reduce(&a.bracket(&crate::rational::unit_vec(d, i), st))).collect();
        for k in 0..d {
            let row: Vec<Q> = images.iter().map(|v| v[k].clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(Subspace::span(d, nullspace(&rows, d)))
}

/// Ascending series `Z_1 ⊂ Z_2 ⊂ … ⊂ Z_s = g` of iterated centers.
pub fn upper_central_series(a: &LieAlgebra) -> Vec<Subspace> {
    let d = a.dim();
    let g = Subspace::full(d);
    let mut out = Vec::new();
    let mut current = Subspace::zero(d);
    while !current.is_full() {
        let next = centralizer(a, &g, &current).expect("terms of the upper central series are ideals");
        assert!(next.dim() > current.dim(), "nilpotent algebras have strictly growing upper series");
        out.push(next.clone());
        current = next;
    }
    out
}

/// `D = Σ_i dim g^i`.
pub fn homogeneous_dimension(a: &LieAlgebra) -> usize {
    lower_central_series(a).iter().map(Subspace::dim).sum()
}

/// `k_c = Σ_{i=1}^{⌈c/2⌉-1} (c/2 - i) dim(g^i / g^{i+1})`.
pub fn k_c(a: &LieAlgebra) -> Q {
    let lcs = lower_central_series(a);
    let c = lcs.len() - 1;
    let half = qr(c as i64, 2);
    let top = c.div_ceil(2);
    let mut total = Q::zero();
    for i in 1..top {
        let quotient = lcs[i - 1].dim() - lcs[i].dim();
        total += (&half - q(i as i64)) * q(quotient as i64);
    }
    total
}
