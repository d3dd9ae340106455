//! Fixed inputs shared by the benches, so timings are comparable across runs.

use nilsys_core::algebra::FlagMode;
use nilsys_core::bounds::{setup, upper_bound_with, witness_radius};
use nilsys_core::catalog;
use nilsys_core::geometry::WeightedLattice;
use nilsys_core::lattice::AdditiveLattice;
use nilsys_core::rational::{integral_power, q};
use nilsys_core::{LieAlgebra, Q};

/// A spread of sizes and classes from the catalog.
pub fn algebras() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("heisenberg3", catalog::heisenberg(3)),
        ("l55", catalog::l55()),
        ("filiform7", catalog::filiform7()),
        ("witt8", catalog::witt(8)),
        ("central_product_4_3", catalog::central_product(4, 3)),
        ("witt12", catalog::witt(12)),
    ]
}

/// The optimal diagonal lattice of `a` at `r = n^q`, in frame coordinates.
pub fn witness_lattice(a: &LieAlgebra, n: u64) -> WeightedLattice {
    let st = setup(a, FlagMode::Auto);
    let theta = upper_bound_with(&st).expect("catalog bounds solve").theta;
    let r = witness_radius(&theta, n);
    let diag: Vec<Q> = theta
        .iter()
        .zip(st.frame.weights())
        .map(|(t, &w)| Q::from_integer(integral_power(&r, &(t + q(w as i64))).expect("r clears denominators")))
        .collect();
    WeightedLattice::new(AdditiveLattice::diagonal(&diag), st.frame.weights().to_vec()).unwrap()
}

/// The same lattice sheared by a unipotent map, so its HNF basis is dense.
pub fn sheared(l: &WeightedLattice) -> WeightedLattice {
    let d = l.dim();
    let m: Vec<Vec<Q>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        q(1)
                    } else if j > i {
                        q(((i + 2 * j) % 3) as i64)
                    } else {
                        q(0)
                    }
                })
                .collect()
        })
        .collect();
    WeightedLattice::new(l.lattice.transform(&m), l.weights.clone()).unwrap()
}
