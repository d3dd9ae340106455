use nilsys_core::algebra::{homogeneous_dimension, k_c, lower_central_series, nilpotency_class, FlagMode};
use nilsys_core::bounds::setup;
use nilsys_core::catalog::{self, build, expected, reproduction_set, Params};
use nilsys_core::geometry::is_subring;
use nilsys_core::lattice::AdditiveLattice;
use nilsys_core::rational::{pow_z, q, qr, Q, Z};
use nilsys_core::LieAlgebra;

/// Every parameter combination the catalog accepts within small ranges.
fn sweep() -> Vec<(String, LieAlgebra)> {
    let mut out = Vec::new();
    for (name, params) in reproduction_set() {
        out.push((catalog::label(name, &params).unwrap(), build(name, &params).unwrap()));
    }
    out.push(("witt(n=3)".into(), catalog::witt(3)));
    for n in 1..=3 {
        let p = Params::new().with("n", n);
        out.push((catalog::label("g3nil", &p).unwrap(), build("g3nil", &p).unwrap()));
    }
    for (k, n) in [(3, 2), (7, 1), (8, 2)] {
        out.push((format!("central_product(k={k},n={n})"), catalog::central_product(k, n)));
    }
    out
}

fn quotient_dims(a: &LieAlgebra) -> Vec<usize> {
    let lcs = lower_central_series(a);
    lcs.windows(2).map(|w| w[0].dim() - w[1].dim()).collect()
}

/// The closed forms for small classes, written out term by term.
fn kc_closed_form(class: usize, quotients: &[usize]) -> Option<Q> {
    let g1 = q(quotients[0] as i64);
    let g2 = quotients.get(1).map(|&x| q(x as i64));
    Some(match class {
        0..=2 => q(0),
        3 => g1 / q(2),
        4 => g1,
        5 => qr(3, 2) * g1 + g2? / q(2),
        6 => q(2) * g1 + g2?,
        _ => return None,
    })
}

#[test]
fn kc_matches_closed_forms() {
    let mut checked = 0;
    for (label, a) in sweep() {
        let c = nilpotency_class(&a);
        let quotients = quotient_dims(&a);
        let k = k_c(&a);
        if let Some(closed) = kc_closed_form(c, &quotients) {
            assert_eq!(k, closed, "{label}");
            checked += 1;
        }
        // k_c ≤ (c/2 − 1) dim(g / g^{⌈c/2⌉}) for every class.
        if c >= 2 {
            let top = c.div_ceil(2);
            let head: usize = quotients[..top - 1].iter().sum();
            assert!(k <= (qr(c as i64, 2) - q(1)) * q(head as i64), "{label}");
        }
    }
    assert!(checked >= 20);
}

#[test]
fn dimension_bounds_hold_on_catalog() {
    for (label, a) in sweep() {
        let d = q(a.dim() as i64);
        let k = k_c(&a);
        let kd = &k + q(homogeneous_dimension(&a) as i64);
        assert!(k <= &d * &d / q(6) - &d / q(2) + qr(1, 2), "{label}");
        assert!(kd <= (q(5) * &d * &d - q(4) * &d) / q(8), "{label}");
    }
}

#[test]
fn expected_invariants_match_computation() {
    for (name, params) in reproduction_set() {
        let a = build(name, &params).unwrap();
        let e = expected(name, &params).unwrap();
        assert_eq!(e.dim, a.dim(), "{name} {params}");
        assert_eq!(e.class, nilpotency_class(&a), "{name} {params}");
        assert_eq!(e.d, homogeneous_dimension(&a), "{name} {params}");
        assert_eq!(e.quotient_dims, quotient_dims(&a), "{name} {params}");
        assert_eq!(e.k_c, k_c(&a), "{name} {params}");
        assert!(e.h <= e.k_c && e.d >= e.dim, "{name} {params}");
    }
}

#[test]
fn witt_homogeneous_dimension_formula() {
    for n in 3..=16usize {
        let a = catalog::witt(n);
        assert_eq!(homogeneous_dimension(&a), n * (n - 1) / 2 + 1, "n={n}");
    }
    for n in 1..=5usize {
        assert_eq!(homogeneous_dimension(&catalog::central_product(4, n)), 2 * n + 7);
    }
}

/// `Λ_n = ⊕ n^{max(c/2, i)} g_i(ℤ)` is a subring for every square `n`.
#[test]
fn power_lattices_are_subrings() {
    for (label, a) in sweep() {
        let st = setup(&a, FlagMode::Auto);
        let fa = st.frame.algebra_in_frame(&a);
        let c = nilpotency_class(&a) as u32;
        for root in [2u32, 3] {
            // n^{max(c/2, w)} = root^{max(c, 2w)} with n = root².
            let diag: Vec<Q> =
                st.frame.weights().iter().map(|&w| Q::from_integer(pow_z(&Z::from(root), (2 * w).max(c)))).collect();
            let lattice = AdditiveLattice::diagonal(&diag);
            assert_eq!(is_subring(&lattice, &fa), nilsys_core::geometry::SubringCheck::Subring, "{label}");
        }
    }
}

#[test]
fn unknown_names_and_parameters_are_rejected() {
    assert!(build("nope", &Params::new()).is_err());
    assert!(build("witt", &Params::new().with("n", 2)).is_err());
    assert!(build("l55", &Params::new().with("n", 2)).is_err());
    assert!(Params::parse("n=1,n=2").is_err());
    let p = Params::parse("k=5, n=2").unwrap();
    assert_eq!(build("central_product", &p).unwrap().dim(), 2 * 2 + 5);
}
