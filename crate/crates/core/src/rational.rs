//! Exact rational scalars and the dense linear algebra built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Z = n.trim().parse().ok()?;
            let d: Z = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<Z>().ok().map(Q::from_integer),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Q>) -> Z {
    values.into_iter().fold(Z::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

pub fn pow_z(x: &Z, e: u32) -> Z {
    num_traits::pow(x.clone(), e as usize)
}

/// Exact `n`-th root of a nonnegative integer, if it exists.
pub fn exact_root(x: &Z, n: u32) -> Option<Z> {
    if x.is_negative() || n == 0 {
        return None;
    }
    let r = x.nth_root(n);
    (pow_z(&r, n) == *x).then_some(r)
}

/// The exponent `e` with `x = base^e`, when it is rational.
pub fn exact_log(base: &Z, x: &Q) -> Option<Q> {
    if *base <= Z::one() || !x.is_positive() {
        return None;
    }
    // Write base = b^k with b not a perfect power; then x must be b^j.
    let bits = base.bits() as u32;
    let (b, k) = (1..=bits).rev().find_map(|k| exact_root(base, k).map(|b| (b, k)))?;
    let (top, sign) = if x.denom().is_one() {
        (x.numer().clone(), 1)
    } else if x.numer().is_one() {
        (x.denom().clone(), -1)
    } else {
        return None;
    };
    let mut rest = top;
    let mut j = 0i64;
    while (&rest % &b).is_zero() {
        rest /= &b;
        j += 1;
    }
    rest.is_one().then(|| Q::new(Z::from(sign * j), Z::from(k)))
}

/// `base^exp` for a rational exponent, when the result is an integer.
pub fn integral_power(base: &Z, exp: &Q) -> Option<Z> {
    if exp.is_negative() {
        return None;
    }
    let p: u32 = exp.numer().try_into().ok()?;
    let d: u32 = exp.denom().try_into().ok()?;
    exact_root(&pow_z(base, p), d)
}

/// Smallest integer `t >= 0` with `t^w >= x` (for `x >= 0`).
pub fn ceil_root(x: &Q, w: u32) -> Z {
    let mut t = x.ceil().to_integer().nth_root(w);
    while Q::from_integer(pow_z(&t, w)) < *x {
        t += 1;
    }
    t
}

/// Generator of the additive subgroup of Q spanned by `values` (0 if all vanish).
pub fn rational_gcd<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    let values: Vec<&Q> = values.into_iter().collect();
    let l = lcm_of_denominators(values.iter().copied());
    let g = values.iter().map(|v| (v.numer() * (&l / v.denom())).abs()).fold(Z::zero(), |acc, n| acc.gcd(&n));
    Q::new(g, l)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add_scaled(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scale_vec(c: &Q, v: &[Q]) -> Vec<Q> {
    v.iter().map(|x| c * x).collect()
}

/// `v * M` where the rows of `m` are indexed by the entries of `v`.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = zero_vec(cols);
    for (c, row) in v.iter().zip(m) {
        add_scaled(&mut out, c, row);
    }
    out
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

/// Reduced row echelon form. Zero rows are dropped; returns rows and pivot columns.
pub fn rref(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = -row[col].clone();
                add_scaled(row, &f, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows.to_vec()).0.len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = unit_vec(ncols, f);
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let f = -(&row[col] * &inv);
                add_scaled(row, &f, &pivot_row);
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(n, i));
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if r.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coefficients `c` with `c * rows == target`, if the target lies in the row span.
pub fn solve_left(rows: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = rows.len();
    let n = target.len();
    // Columns of the transposed system are the given rows.
    let mut sys: Vec<Vec<Q>> = (0..n)
        .map(|c| {
            let mut r: Vec<Q> = rows.iter().map(|row| row[c].clone()).collect();
            r.push(target[c].clone());
            r
        })
        .collect();
    if sys.is_empty() {
        return Some(zero_vec(k));
    }
    let (red, pivots) = rref(std::mem::take(&mut sys));
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut sol = zero_vec(k);
    for (row, &p) in red.iter().zip(&pivots) {
        sol[p] = row[k].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_q("3/6"), Some(qr(1, 2)));
        assert_eq!(parse_q("-4"), Some(q(-4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
        assert_eq!(fmt_q(&qr(-3, 2)), "-3/2");
        assert_eq!(fmt_q(&q(7)), "7");
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(integral_power(&Z::from(16), &qr(1, 2)), Some(Z::from(4)));
        assert_eq!(integral_power(&Z::from(8), &qr(1, 2)), None);
        assert_eq!(integral_power(&Z::from(9), &qr(3, 2)), Some(Z::from(27)));
        assert_eq!(ceil_root(&q(17), 2), Z::from(5));
        assert_eq!(ceil_root(&q(16), 2), Z::from(4));
        assert_eq!(ceil_root(&qr(1, 3), 3), Z::from(1));
    }

    #[test]
    fn rational_gcd_generates_value_group() {
        assert_eq!(rational_gcd(&[qr(1, 2), qr(1, 3)]), qr(1, 6));
        assert_eq!(rational_gcd(&[q(4), q(6)]), q(2));
        assert_eq!(rational_gcd(&[q(0)]), q(0));
    }

    #[test]
    fn inverse_and_determinant_agree() {
        let m = vec![vec![q(2), q(1)], vec![q(7), q(4)]];
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(inverse(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        let rows = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
        let c = solve_left(&rows, &[q(2), q(5), q(3)]).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(solve_left(&rows, &[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(&Z::from(16), &q(1 << 36)), Some(q(9)));
        assert_eq!(exact_log(&Z::from(4), &q(8)), Some(qr(3, 2)));
        assert_eq!(exact_log(&Z::from(9), &qr(1, 3)), Some(qr(-1, 2)));
        assert_eq!(exact_log(&Z::from(6), &q(1)), Some(q(0)));
        assert_eq!(exact_log(&Z::from(6), &q(12)), None);
        assert_eq!(exact_log(&Z::from(1), &q(1)), None);
    }
}
