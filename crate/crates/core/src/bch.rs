//! The Baker–Campbell–Hausdorff group law on a nilpotent Lie algebra,
//! the denominators `m_i`, strong subrings and the group/additive index.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{nilpotency_class, LieAlgebra};
use crate::lattice::AdditiveLattice;
use crate::rational::{add_scaled, is_zero_vec, lcm_of_denominators, q, zero_vec, Q, Z};

/// Highest degree for which the series is tabulated.
pub const MAX_DEGREE: usize = 7;

/// Cap on enumerated right cosets.
pub const COSET_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BchError {
    #[error("BCH degree {0} is above the supported maximum {MAX_DEGREE}")]
    UnsupportedDegree(usize),
    #[error("the smaller lattice is not contained in the larger one")]
    NotContained,
    #[error("lattice is not a strong subring")]
    NotSubring,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// A word in the letters `0 = x`, `1 = y`.
type Word = Vec<u8>;

/// `log(e^x e^y)` in the free associative algebra, by degree, truncated at
/// `MAX_DEGREE`. Entry `k` holds the degree-`k` part.
fn associative_log() -> &'static Vec<BTreeMap<Word, Q>> {
    static SERIES: OnceLock<Vec<BTreeMap<Word, Q>>> = OnceLock::new();
    SERIES.get_or_init(|| {
        let n = MAX_DEGREE;
        // T = e^x e^y - 1 = Σ_{a+b>0} x^a y^b / (a! b!)
        let mut fact = vec![Q::one()];
        for i in 1..=n {
            fact.push(&fact[i - 1] * q(i as i64));
        }
        let mut t: BTreeMap<Word, Q> = BTreeMap::new();
        for a in 0..=n {
            for b in 0..=(n - a) {
                if a + b == 0 {
                    continue;
                }
                let mut w = vec![0u8; a];
                w.extend(std::iter::repeat_n(1u8, b));
                t.insert(w, (&fact[a] * &fact[b]).recip());
            }
        }
        let mul = |p: &BTreeMap<Word, Q>, r: &BTreeMap<Word, Q>| {
            let mut out: BTreeMap<Word, Q> = BTreeMap::new();
            for (u, cu) in p {
                for (v, cv) in r {
                    if u.len() + v.len() > n {
                        continue;
                    }
                    let mut w = u.clone();
                    w.extend(v);
                    *out.entry(w).or_insert_with(Q::zero) += cu * cv;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };
        let mut total: BTreeMap<Word, Q> = BTreeMap::new();
        let mut power = t.clone();
        for k in 1..=n {
            let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
            let f = sign / q(k as i64);
            for (w, c) in &power {
                *total.entry(w.clone()).or_insert_with(Q::zero) += &f * c;
            }
            power = mul(&power, &t);
        }
        let mut by_degree = vec![BTreeMap::new(); n + 1];
        for (w, c) in total {
            if !c.is_zero() {
                by_degree[w.len()].insert(w, c);
            }
        }
        by_degree
    })
}

/// Degree-`k` part as right-nested brackets, using `θ(P) = k P` for Lie
/// elements `P` of degree `k`. Words ending in a repeated letter vanish.
fn dynkin_series() -> &'static Vec<Vec<(Word, Q)>> {
    static SERIES: OnceLock<Vec<Vec<(Word, Q)>>> = OnceLock::new();
    SERIES.get_or_init(|| {
        associative_log()
            .iter()
            .enumerate()
            .map(|(k, part)| {
                part.iter()
                    .filter(|(w, _)| w.len() < 2 || w[w.len() - 1] != w[w.len() - 2])
                    .map(|(w, c)| (w.clone(), c / q(k.max(1) as i64)))
                    .collect()
            })
            .collect()
    })
}

/// The degree-`k` homogeneous part of `log(e^x e^y)` as associative word
/// coefficients (useful for independent checks).
pub fn associative_component(k: usize) -> Result<BTreeMap<Vec<u8>, Q>, BchError> {
    if k > MAX_DEGREE {
        return Err(BchError::UnsupportedDegree(k));
    }
    Ok(associative_log()[k].clone())
}

/// `(m_1, …, m_c)`: the least common denominator of each homogeneous BCH
/// component. The free Lie ring is a direct summand of the free associative
/// ring, so the lcm over word coefficients equals the lcm over any basis of
/// the free Lie ring.
pub fn bch_denominators(c: usize) -> Result<Vec<Z>, BchError> {
    if c > MAX_DEGREE {
        return Err(BchError::UnsupportedDegree(c));
    }
    Ok((1..=c).map(|k| lcm_of_denominators(associative_log()[k].values())).collect())
}

fn check_class(a: &LieAlgebra) -> Result<usize, BchError> {
    let c = nilpotency_class(a);
    if c > MAX_DEGREE {
        Err(BchError::UnsupportedDegree(c))
    } else {
        Ok(c)
    }
}

/// `x · y = log(exp x exp y)`, exact since the algebra is nilpotent.
pub fn bch_product(a: &LieAlgebra, x: &[Q], y: &[Q]) -> Result<Vec<Q>, BchError> {
    if x.len() != a.dim() || y.len() != a.dim() {
        return Err(BchError::DimensionMismatch);
    }
    let c = check_class(a)?;
    Ok(product_unchecked(a, c, x, y))
}

fn product_unchecked(a: &LieAlgebra, c: usize, x: &[Q], y: &[Q]) -> Vec<Q> {
    let series = dynkin_series();
    let mut out = zero_vec(a.dim());
    let mut memo: HashMap<Vec<u8>, Vec<Q>> = HashMap::new();
    for part in series.iter().take(c + 1).skip(1) {
        for (w, coef) in part {
            let v = nested(a, w, x, y, &mut memo);
            add_scaled(&mut out, coef, &v);
        }
    }
    out
}

/// `[w_1, [w_2, … [w_{k-1}, w_k]]]` with suffix memoization.
fn nested(a: &LieAlgebra, w: &[u8], x: &[Q], y: &[Q], memo: &mut HashMap<Vec<u8>, Vec<Q>>) -> Vec<Q> {
    let letter = |l: u8| if l == 0 { x } else { y };
    if w.len() == 1 {
        return letter(w[0]).to_vec();
    }
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let tail = nested(a, &w[1..], x, y, memo);
    let v = if is_zero_vec(&tail) { tail } else { a.bracket(letter(w[0]), &tail) };
    memo.insert(w.to_vec(), v.clone());
    v
}

pub fn bch_inverse(x: &[Q]) -> Vec<Q> {
    x.iter().map(|v| -v.clone()).collect()
}

/// The smallest additive group containing `generators` and stable under
/// `(x_1, …, x_i) ↦ m_i^{-1} [x_1, [x_2, … x_i]]` for all `i ≥ 2`.
pub fn strong_subring(a: &LieAlgebra, generators: &[Vec<Q>]) -> Result<AdditiveLattice, BchError> {
    let d = a.dim();
    if generators.iter().any(|g| g.len() != d) {
        return Err(BchError::DimensionMismatch);
    }
    let c = check_class(a)?;
    let m = bch_denominators(c)?;
    let mut lattice = AdditiveLattice::from_generators(d, generators);
    loop {
        let basis = lattice.basis();
        let mut gens = basis.clone();
        let mut layer = basis.clone();
        for mi in m.iter().skip(1) {
            let brackets: Vec<Vec<Q>> = basis.iter().flat_map(|b| layer.iter().map(|s| a.bracket(b, s))).collect();
            let span = AdditiveLattice::from_generators(d, &brackets);
            layer = span.basis();
            if layer.is_empty() {
                break;
            }
            let inv = Q::new(Z::one(), mi.clone());
            gens.extend(layer.iter().map(|v| v.iter().map(|x| x * &inv).collect::<Vec<Q>>()));
        }
        let next = AdditiveLattice::from_generators(d, &gens);
        if next == lattice {
            return Ok(lattice);
        }
        lattice = next;
    }
}

pub fn is_strong_subring(a: &LieAlgebra, l: &AdditiveLattice) -> Result<bool, BchError> {
    Ok(strong_subring(a, &l.basis())? == *l)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupIndex {
    Exact(Z),
    /// The coset enumeration hit its cap after this many cosets.
    Inconclusive(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPair {
    pub additive: Z,
    pub group: GroupIndex,
}

impl IndexPair {
    pub fn agree(&self) -> bool {
        self.group == GroupIndex::Exact(self.additive.clone())
    }
}

/// Additive index `[Λ′ : Λ]` and the index of the corresponding groups under
/// the BCH law, the latter by right-coset enumeration.
pub fn group_additive_index(
    a: &LieAlgebra,
    small: &AdditiveLattice,
    big: &AdditiveLattice,
) -> Result<IndexPair, BchError> {
    let c = check_class(a)?;
    if !big.contains_lattice(small) {
        return Err(BchError::NotContained);
    }
    if !is_strong_subring(a, small)? || !is_strong_subring(a, big)? {
        return Err(BchError::NotSubring);
    }
    let additive = small.index_in(big).ok_or(BchError::NotContained)?;

    // Right cosets Λx are stable under x -> class of x modulo Λ + (Λ′ ∩ g²),
    // which buckets representatives.
    let d = a.dim();
    let derived =
        crate::algebra::lower_central_series(a).get(1).cloned().unwrap_or_else(|| crate::algebra::Subspace::zero(d));
    let mut mod_gens = small.basis();
    mod_gens.extend(intersect_with_subspace(big, &derived));
    let modulus = AdditiveLattice::from_generators(d, &mod_gens);
    let key = |v: &[Q]| -> Vec<Q> {
        if modulus.is_full_rank() {
            modulus.reduce_mod(v)
        } else {
            Vec::new()
        }
    };

    let mut gens = big.basis();
    gens.extend(big.basis().iter().map(|b| bch_inverse(b)));
    let mut reps: Vec<Vec<Q>> = vec![zero_vec(d)];
    let mut buckets: HashMap<Vec<Q>, Vec<usize>> = HashMap::new();
    buckets.entry(key(&reps[0])).or_default().push(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let y = product_unchecked(a, c, &reps[i], g);
            let k = key(&y);
            let bucket = buckets.entry(k).or_default();
            let known = bucket.iter().any(|&z| small.contains(&product_unchecked(a, c, &y, &bch_inverse(&reps[z]))));
            if known {
                continue;
            }
            if reps.len() >= COSET_CAP {
                return Ok(IndexPair { additive, group: GroupIndex::Inconclusive(reps.len()) });
            }
            bucket.push(reps.len());
            queue.push_back(reps.len());
            reps.push(y);
        }
    }
    Ok(IndexPair { additive, group: GroupIndex::Exact(Z::from(reps.len())) })
}

/// Generators of `L ∩ V` for a lattice `L` and a rational subspace `V`.
fn intersect_with_subspace(l: &AdditiveLattice, v: &crate::algebra::Subspace) -> Vec<Vec<Q>> {
    // Integer coefficient vectors n with Σ n_i b_i ≡ 0 modulo V.
    let basis = l.basis();
    let images: Vec<Vec<Q>> = basis.iter().map(|b| v.reduce(b)).collect();
    let equations: Vec<Vec<Z>> = (0..l.dim())
        .map(|col| {
            let row: Vec<Q> = images.iter().map(|im| im[col].clone()).collect();
            let den = Q::from_integer(lcm_of_denominators(row.iter()));
            row.iter().map(|x| (x * &den).to_integer()).collect()
        })
        .collect();
    integer_kernel(&equations, basis.len())
        .iter()
        .map(|n| {
            let mut out = zero_vec(l.dim());
            for (c, b) in n.iter().zip(&basis) {
                add_scaled(&mut out, c, b);
            }
            out
        })
        .collect()
}

/// Basis of `{x ∈ Z^n : A x = 0}` via column operations tracked on an identity.
fn integer_kernel(a: &[Vec<Z>], n: usize) -> Vec<Vec<Q>> {
    // Row-reduce [A^T | I]; rows whose A^T part vanishes give a kernel basis.
    let mut rows: Vec<Vec<Z>> = (0..n)
        .map(|i| {
            let mut r: Vec<Z> = a.iter().map(|row| row[i].clone()).collect();
            r.extend((0..n).map(|j| if i == j { Z::one() } else { Z::zero() }));
            r
        })
        .collect();
    rows = crate::lattice::row_hnf(rows);
    let m = a.len();
    rows.into_iter()
        .filter(|r| r[..m].iter().all(Zero::is_zero))
        .map(|r| r[m..].iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect()
}
