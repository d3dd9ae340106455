mod common;

use std::collections::BTreeMap;

use common::*;
use nilsys_core::algebra::nilpotency_class;
use nilsys_core::bch::{
    associative_component, bch_denominators, bch_inverse, bch_product, group_additive_index, is_strong_subring,
    strong_subring, BchError,
};
use nilsys_core::catalog;
use nilsys_core::rational::{lcm_of_denominators, q, qr, solve_left, zero_vec, Q, Z};
use nilsys_core::LieAlgebra;
use num_traits::{One, Zero};
use rand::Rng;

type Matrix = Vec<Vec<Q>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn mat_add(a: &Matrix, b: &Matrix, s: &Q) -> Matrix {
    a.iter().zip(b).map(|(r, t)| r.iter().zip(t).map(|(x, y)| x + s * y).collect()).collect()
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// Strictly upper triangular `n×n` matrices with basis `E_ij`, `i < j`.
struct Triangular {
    n: usize,
    slots: Vec<(usize, usize)>,
}

impl Triangular {
    fn new(n: usize) -> Self {
        Triangular { n, slots: (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect() }
    }

    fn to_matrix(&self, v: &[Q]) -> Matrix {
        let mut m = vec![vec![Q::zero(); self.n]; self.n];
        for (c, &(i, j)) in v.iter().zip(&self.slots) {
            m[i][j] = c.clone();
        }
        m
    }

    fn to_vector(&self, m: &Matrix) -> Vec<Q> {
        self.slots.iter().map(|&(i, j)| m[i][j].clone()).collect()
    }

    fn algebra(&self) -> LieAlgebra {
        let d = self.slots.len();
        let e = |i: usize| self.to_matrix(&(0..d).map(|k| if k == i { q(1) } else { q(0) }).collect::<Vec<_>>());
        let mut consts = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let (x, y) = (e(a), e(b));
                let c = mat_add(&mat_mul(&x, &y), &mat_mul(&y, &x), &q(-1));
                for (k, v) in self.to_vector(&c).into_iter().enumerate() {
                    if !v.is_zero() {
                        consts.push((a, b, k, v));
                    }
                }
            }
        }
        LieAlgebra::from_constants(d, Some(format!("n{}", self.n)), consts).unwrap()
    }

    /// Truncated series; exact because the matrices are nilpotent.
    fn exp(&self, x: &Matrix) -> Matrix {
        let mut out = identity(self.n);
        let mut power = identity(self.n);
        for k in 1..self.n {
            power = mat_mul(&power, x);
            out = mat_add(&out, &power, &qr(1, (1..=k as i64).product()));
        }
        out
    }

    fn log(&self, g: &Matrix) -> Matrix {
        let u = mat_add(g, &identity(self.n), &q(-1));
        let mut out = vec![vec![Q::zero(); self.n]; self.n];
        let mut power = identity(self.n);
        for k in 1..self.n {
            power = mat_mul(&power, &u);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = mat_add(&out, &power, &qr(sign, k as i64));
        }
        out
    }
}

#[test]
fn product_matches_matrix_exponentials() {
    for n in 3..=6 {
        let t = Triangular::new(n);
        let a = t.algebra();
        assert_eq!(nilpotency_class(&a), n - 1);
        let mut r = rng(n as u64);
        for _ in 0..20 {
            let x = random_vector(&mut r, a.dim(), 3);
            let y = random_vector(&mut r, a.dim(), 3);
            let oracle = t.to_vector(&t.log(&mat_mul(&t.exp(&t.to_matrix(&x)), &t.exp(&t.to_matrix(&y)))));
            assert_eq!(bch_product(&a, &x, &y).unwrap(), oracle, "n={n}");
        }
    }
}

#[test]
fn heisenberg_product_is_exact() {
    let a = catalog::heisenberg(1);
    let mut r = rng(7);
    for _ in 0..100 {
        let x = random_vector(&mut r, 3, 5);
        let y = random_vector(&mut r, 3, 5);
        let mut expected: Vec<Q> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        for (e, b) in expected.iter_mut().zip(a.bracket(&x, &y)) {
            *e += b / q(2);
        }
        assert_eq!(bch_product(&a, &x, &y).unwrap(), expected);
    }
}

#[test]
fn group_axioms_hold_on_catalog() {
    for a in bch_catalog() {
        assert!(nilpotency_class(&a) <= 6);
        let d = a.dim();
        let mut r = rng(d as u64 * 31 + nilpotency_class(&a) as u64);
        let zero = zero_vec(d);
        for _ in 0..100 {
            let x = random_vector(&mut r, d, 3);
            let y = random_vector(&mut r, d, 3);
            let z = random_vector(&mut r, d, 3);
            let xy = bch_product(&a, &x, &y).unwrap();
            let yz = bch_product(&a, &y, &z).unwrap();
            assert_eq!(bch_product(&a, &xy, &z).unwrap(), bch_product(&a, &x, &yz).unwrap(), "{:?}", a.name());
            assert_eq!(bch_product(&a, &x, &bch_inverse(&x)).unwrap(), zero);
            assert_eq!(bch_product(&a, &zero, &x).unwrap(), x);
            assert_eq!(bch_product(&a, &x, &zero).unwrap(), x);
        }
    }
}

#[test]
fn denominators_match_known_values() {
    let expected: Vec<Z> = [1, 2, 12, 24, 720, 1440, 30240].into_iter().map(Z::from).collect();
    assert_eq!(bch_denominators(7).unwrap(), expected);
    assert_eq!(bch_denominators(8), Err(BchError::UnsupportedDegree(8)));
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// The standard bracketing of a Lyndon word, as an associative polynomial.
fn lyndon_polynomial(w: &[u8]) -> BTreeMap<Vec<u8>, Q> {
    if w.len() == 1 {
        return BTreeMap::from([(w.to_vec(), Q::one())]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).unwrap();
    let (u, v) = (lyndon_polynomial(&w[..split]), lyndon_polynomial(&w[split..]));
    let mut out: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for (a, ca) in &u {
        for (b, cb) in &v {
            let c = ca * cb;
            *out.entry([a.as_slice(), b].concat()).or_insert_with(Q::zero) += &c;
            *out.entry([b.as_slice(), a].concat()).or_insert_with(Q::zero) -= &c;
        }
    }
    out
}

/// Independent computation of `m_k`: expand the degree-`k` BCH term in the
/// Lyndon basis, a ℤ-basis of the free Lie ring, and take the common
/// denominator of the coordinates.
#[test]
fn denominators_match_lyndon_expansion() {
    for k in 1..=7usize {
        let words: Vec<Vec<u8>> =
            (0..1u32 << k).map(|m| (0..k).map(|b| ((m >> (k - 1 - b)) & 1) as u8).collect()).collect();
        let index: BTreeMap<&Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let dense = |p: &BTreeMap<Vec<u8>, Q>| {
            let mut v = vec![Q::zero(); words.len()];
            for (w, c) in p {
                v[index[w]] += c;
            }
            v
        };
        let basis: Vec<Vec<Q>> = words.iter().filter(|w| is_lyndon(w)).map(|w| dense(&lyndon_polynomial(w))).collect();
        let target = dense(&associative_component(k).unwrap());
        let coords = solve_left(&basis, &target).expect("BCH terms are Lie polynomials");
        let m = lcm_of_denominators(&coords);
        assert_eq!(m, bch_denominators(k).unwrap()[k - 1], "degree {k}");
    }
}

#[test]
fn strong_subrings_are_closed_under_the_group_law() {
    let mut r = rng(11);
    for a in bch_catalog() {
        let d = a.dim();
        for _ in 0..3 {
            let gens: Vec<Vec<Q>> =
                (0..r.gen_range(1..=3)).map(|_| (0..d).map(|_| q(r.gen_range(-2..=2))).collect()).collect();
            let l = strong_subring(&a, &gens).unwrap();
            assert!(is_strong_subring(&a, &l).unwrap());
            for g in &gens {
                assert!(l.contains(g));
            }
            let xs = lattice_elements(&mut r, &l, 6);
            for x in &xs {
                for y in &xs {
                    assert!(l.contains(&bch_product(&a, x, y).unwrap()), "{:?}", a.name());
                }
            }
        }
    }
    let w6 = catalog::witt(6);
    let e = |i: usize| (0..6).map(|k| if k == i { q(1) } else { q(0) }).collect::<Vec<Q>>();
    let l = strong_subring(&w6, &[e(0), e(1)]).unwrap();
    assert_eq!(l.rank(), 6);
}

#[test]
fn group_index_equals_additive_index() {
    let mut r = rng(5);
    for a in [catalog::heisenberg(1), catalog::witt(5)] {
        let d = a.dim();
        let mut done = 0;
        while done < 20 {
            let gens: Vec<Vec<Q>> = (0..d).map(|_| (0..d).map(|_| q(r.gen_range(-1..=1))).collect()).collect();
            let big = strong_subring(&a, &gens).unwrap();
            if big.rank() < d {
                continue;
            }
            let basis = big.basis();
            let scaled: Vec<Vec<Q>> = basis
                .iter()
                .map(|b| (b, q(r.gen_range(1..=3))))
                .map(|(b, s)| b.iter().map(|x| x * &s).collect())
                .collect();
            let small = strong_subring(&a, &scaled).unwrap();
            assert!(big.contains_lattice(&small));
            let pair = group_additive_index(&a, &small, &big).unwrap();
            assert!(pair.agree(), "{:?}: {pair:?}", a.name());
            done += 1;
        }
    }
}
