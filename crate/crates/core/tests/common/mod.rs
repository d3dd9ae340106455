//! Random instances and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nilsys_core::algebra::LieAlgebra;
use nilsys_core::geometry::GLength;
use nilsys_core::lattice::AdditiveLattice;
use nilsys_core::lp::LinearProgram;
use nilsys_core::rational::{dot, inverse, lcm_of_denominators, nullspace, q, qr, rank, solve_left, Q, Z};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nilpotent algebra built by iterated central extensions: start from an
/// abelian algebra and repeatedly adjoin a central vector through a random
/// integral 2-cocycle.
pub fn random_nilpotent(rng: &mut impl Rng, dim: usize) -> LieAlgebra {
    let start = rng.gen_range(1..=dim.min(3));
    let mut consts: Vec<(usize, usize, usize, Q)> = Vec::new();
    for n in start..dim {
        let omega = random_cocycle(rng, n, &consts);
        for ((i, j), c) in omega {
            consts.push((i, j, n, c));
        }
    }
    LieAlgebra::from_constants(dim, Some(format!("random({dim})")), consts).expect("central extensions are valid")
}

/// Integral 2-cocycle `ω` on the algebra with the given constants: the
/// kernel of `ω ↦ (ω([e_i,e_j],e_k) + cyclic)` combined with small random weights.
fn random_cocycle(rng: &mut impl Rng, n: usize, consts: &[(usize, usize, usize, Q)]) -> BTreeMap<(usize, usize), Q> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    if pairs.is_empty() {
        return BTreeMap::new();
    }
    let index = |a: usize, b: usize| -> (usize, i64) {
        if a < b {
            (pairs.iter().position(|&p| p == (a, b)).unwrap(), 1)
        } else {
            (pairs.iter().position(|&p| p == (b, a)).unwrap(), -1)
        }
    };
    let bracket = |i: usize, j: usize| -> Vec<(usize, Q)> {
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        consts.iter().filter(|c| c.0 == a && c.1 == b).map(|c| (c.2, &c.3 * q(s))).collect()
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = vec![Q::zero(); pairs.len()];
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (l, c) in bracket(x, y) {
                        if l != z {
                            let (p, s) = index(l, z);
                            row[p] += c * q(s);
                        }
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = nullspace(&rows, pairs.len());
    let mut omega = vec![Q::zero(); pairs.len()];
    for v in &kernel {
        let c = q(rng.gen_range(-2..=2));
        for (o, x) in omega.iter_mut().zip(v) {
            *o += &c * x;
        }
    }
    let l = Q::from_integer(lcm_of_denominators(omega.iter()));
    pairs.into_iter().zip(omega).filter(|(_, c)| !c.is_zero()).map(|(p, c)| (p, c * &l)).collect()
}

/// Random full-rank rational matrix with small entries.
pub fn random_basis(rng: &mut impl Rng, dim: usize, entry: i64, denominators: bool) -> Vec<Vec<Q>> {
    loop {
        let rows: Vec<Vec<Q>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let n = rng.gen_range(-entry..=entry);
                        let d = if denominators { rng.gen_range(1..=3) } else { 1 };
                        Q::new(Z::from(n), Z::from(d))
                    })
                    .collect()
            })
            .collect();
        if !cofactor_determinant(&rows).is_zero() {
            return rows;
        }
    }
}

pub fn random_weights(rng: &mut impl Rng, dim: usize) -> Vec<u32> {
    let mut w: Vec<u32> = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
    w.sort_unstable();
    w
}

/// Laplace expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return q(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Q::zero();
    for (c, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = x * cofactor_determinant(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn glen(weights: &[u32], v: &[Q]) -> GLength {
    v.iter().zip(weights).map(|(x, &w)| GLength::new(x.abs(), w)).max().unwrap()
}

/// Shortest Guivarch length by enumerating every coefficient vector in the
/// box `|c_j| ≤ Σ_i B^{w_i} |M^{-1}_{ij}|` around the origin, where `B` is
/// the length of the shortest basis row. Works on the given (unreduced) basis.
/// Returns `None` when the box holds more than `max_points` vectors.
pub fn brute_force_systole(basis: &[Vec<Q>], weights: &[u32], max_points: u64) -> Option<GLength> {
    let d = basis.len();
    let best_row = basis.iter().map(|b| glen(weights, b)).min().unwrap();
    let inv = inverse(basis).expect("basis is invertible");
    // B^{w_i} rounded up to an integer bound is enough for a box.
    let caps: Vec<Q> = weights
        .iter()
        .map(|&w| {
            let x = num_traits::pow(best_row.q.clone(), w as usize);
            Q::from_integer(nilsys_core::rational::ceil_root(&x, best_row.w))
        })
        .collect();
    let bounds: Vec<i64> = (0..d)
        .map(|j| {
            let s: Q = (0..d).map(|i| &caps[i] * inv[i][j].abs()).sum();
            s.floor().to_integer().try_into().unwrap()
        })
        .collect();
    let points = bounds.iter().try_fold(1u64, |acc, b| acc.checked_mul(2 * *b as u64 + 1))?;
    if points > max_points {
        return None;
    }
    let mut best = best_row;
    let mut c = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    loop {
        if c.iter().any(|&x| x != 0) {
            let mut v = vec![Q::zero(); d];
            for (cj, row) in c.iter().zip(basis) {
                if *cj != 0 {
                    for (o, x) in v.iter_mut().zip(row) {
                        *o += x * q(*cj);
                    }
                }
            }
            let l = glen(weights, &v);
            if l < best {
                best = l;
            }
        }
        let mut j = 0;
        loop {
            if j == d {
                return Some(best);
            }
            if c[j] < bounds[j] {
                c[j] += 1;
                break;
            }
            c[j] = -bounds[j];
            j += 1;
        }
    }
}

/// The standard symplectic matrix on `Q^{2n}`.
pub fn standard_symplectic(n: usize) -> Vec<Vec<Q>> {
    let d = 2 * n;
    let mut phi = vec![vec![Q::zero(); d]; d];
    for i in 0..n {
        phi[2 * i][2 * i + 1] = q(1);
        phi[2 * i + 1][2 * i] = q(-1);
    }
    phi
}

/// Catalog algebras whose class allows the BCH product.
pub fn bch_catalog() -> Vec<LieAlgebra> {
    use nilsys_core::catalog::*;
    let mut out = vec![heisenberg(1), heisenberg(2), heisenberg(3), l55(), l56(), filiform7()];
    out.extend((4..=7).map(witt));
    out.extend([central_product(4, 1), central_product(4, 2), central_product(5, 1), central_product(6, 1)]);
    out
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, entry: i64) -> Vec<Q> {
    (0..dim).map(|_| Q::new(Z::from(rng.gen_range(-entry..=entry)), Z::from(rng.gen_range(1..=4)))).collect()
}

pub fn lattice_elements(r: &mut impl Rng, l: &AdditiveLattice, count: usize) -> Vec<Vec<Q>> {
    let coords: Vec<Vec<Z>> =
        (0..count).map(|_| (0..l.rank()).map(|_| Z::from(r.gen_range(-2..=2))).collect()).collect();
    coords.iter().map(|c| l.combine(c)).collect()
}

/// `min c·x` by trying every vertex: each choice of `n` rows with a unique
/// intersection point that satisfies all rows. Only valid for bounded problems.
pub fn vertex_oracle(lp: &LinearProgram) -> Option<Q> {
    let n = lp.num_vars;
    let m = lp.rows.len();
    let mut best: Option<Q> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        // Solve G_S x = h_S as x^T G_S^T = h_S^T.
        let cols: Vec<Vec<Q>> = (0..n).map(|v| pick.iter().map(|&r| lp.rows[r].0[v].clone()).collect()).collect();
        let rhs: Vec<Q> = pick.iter().map(|&r| lp.rows[r].1.clone()).collect();
        if rank(&cols) == n {
            let x = solve_left(&cols, &rhs).expect("full rank systems are solvable");
            if lp.rows.iter().all(|(g, h)| dot(g, &x) >= *h) {
                let v = dot(&lp.objective, &x);
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        // Next n-subset in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A small LP kept bounded by a box `|x_v| ≤ 6`.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let objective: Vec<Q> = (0..n).map(|_| q(r.gen_range(-3..=3))).collect();
    let mut lp = LinearProgram::new(n, objective);
    for v in 0..n {
        for s in [1, -1] {
            let mut row = vec![Q::zero(); n];
            row[v] = q(s);
            lp.push(row, q(-6));
        }
    }
    for _ in 0..r.gen_range(0..=5) {
        let row: Vec<Q> = (0..n).map(|_| qr(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
        lp.push(row, qr(r.gen_range(-8..=4), r.gen_range(1..=2)));
    }
    lp
}
