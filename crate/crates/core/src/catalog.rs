//! Named families of nilpotent Lie algebras with their known invariants.
//!
//! Every builder returns an algebra in an integral basis that is already
//! compatible with the lower central series (weight-1 vectors first).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::rational::{q, qr, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Integer parameters such as `k=4,n=3`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Params(BTreeMap<String, i64>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn parse(text: &str) -> Result<Params, CatalogError> {
        let mut out = Params::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CatalogError::BadParams(format!("expected key=value, got `{part}`")))?;
            let v: i64 = v.trim().parse().map_err(|_| CatalogError::BadParams(format!("`{v}` is not an integer")))?;
            if out.0.insert(k.trim().to_string(), v).is_some() {
                return Err(CatalogError::BadParams(format!("`{}` given twice", k.trim())));
            }
        }
        Ok(out)
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        self.0.get(key).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Accepted parameters with their ranges and defaults.
    pub params: &'static [ParamSpec],
    pub law: &'static str,
    pub source: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub min: i64,
    pub max: i64,
    pub default: i64,
}

const fn p(key: &'static str, min: i64, max: i64, default: i64) -> ParamSpec {
    ParamSpec { key, min, max, default }
}

/// Known values for a catalog algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub dim: usize,
    pub class: usize,
    /// Homogeneous dimension.
    pub d: usize,
    /// `dim g^i / g^{i+1}` for `i = 1..=class`.
    pub quotient_dims: Vec<usize>,
    pub k_c: Q,
    pub h: Q,
    /// `c * dim`, the exponent of congruence subgroups.
    pub residual_girth: usize,
    pub note: Option<String>,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "heisenberg",
        params: &[p("n", 1, 32, 1)],
        law: "[X_i,Y_i]=Z",
        source: "Heisenberg algebra of dimension 2n+1; Carnot, so h=0",
    },
    CatalogEntry {
        name: "l55",
        params: &[],
        law: "[e1,e2]=e4, [e1,e4]=e5, [e2,e3]=e5",
        source: "L5,5 in de Graaf's list of 5-dimensional nilpotent algebras; h=1",
    },
    CatalogEntry {
        name: "l56",
        params: &[],
        law: "[e1,e2]=e3, [e1,e3]=e4, [e1,e4]=e5, [e2,e3]=e5",
        source: "L5,6 in de Graaf's list of 5-dimensional nilpotent algebras; h=1",
    },
    CatalogEntry {
        name: "filiform7",
        params: &[],
        law: "12|3, 13|4, 14|5, 15|6, 16|7, 23|5, 24|6, 34|7",
        source: "7-dimensional filiform algebra g_{7,1,1(0)} in Magnin's list; h=3/2",
    },
    CatalogEntry {
        name: "witt",
        params: &[p("n", 3, 24, 6)],
        law: "[e_i,e_j]=(i-j)e_{i+j} for i+j<=n",
        source: "truncated positive Witt algebra; h=ceil((n-4)/2)",
    },
    CatalogEntry {
        name: "central_product",
        params: &[p("k", 3, 12, 4), p("n", 1, 12, 1)],
        law: "[U_1,U_i]=U_{i+1} (2<=i<k), [X_i,Y_i]=U_k",
        source: "filiform algebra of class k-1 glued to a Heisenberg algebra along U_k; h=n(k-3)",
    },
    CatalogEntry {
        name: "g3nil",
        params: &[p("n", 1, 12, 1)],
        law: "[U,V]=W, [U,W]=Z, [X_i,Y_i]=Z",
        source: "central_product with k=4, dimension 2n+4; h=n",
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))
}

/// Fills defaults and checks ranges; unknown keys are rejected.
fn resolve(entry: &CatalogEntry, params: &Params) -> Result<BTreeMap<&'static str, i64>, CatalogError> {
    for (k, _) in params.iter() {
        if !entry.params.iter().any(|s| s.key == k) {
            return Err(CatalogError::BadParams(format!("`{}` takes no parameter `{k}`", entry.name)));
        }
    }
    let mut out = BTreeMap::new();
    for s in entry.params {
        let v = params.get(s.key).unwrap_or(s.default);
        if v < s.min || v > s.max {
            return Err(CatalogError::BadParams(format!(
                "`{}` needs {} in {}..={}, got {v}",
                entry.name, s.key, s.min, s.max
            )));
        }
        out.insert(s.key, v);
    }
    Ok(out)
}

/// Display name such as `witt(n=6)`.
pub fn label(name: &str, params: &Params) -> Result<String, CatalogError> {
    let e = entry(name)?;
    let vals = resolve(e, params)?;
    if vals.is_empty() {
        return Ok(name.to_string());
    }
    let parts: Vec<String> = vals.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!("{name}({})", parts.join(",")))
}

type Law = Vec<(usize, usize, usize, i64)>;

fn assemble(dim: usize, label: String, law: Law) -> LieAlgebra {
    LieAlgebra::from_constants(dim, Some(label), law.into_iter().map(|(i, j, k, c)| (i, j, k, q(c))))
        .expect("catalog laws are valid nilpotent Lie algebras")
}

pub fn heisenberg(n: usize) -> LieAlgebra {
    let z = 2 * n;
    let law = (0..n).map(|i| (2 * i, 2 * i + 1, z, 1)).collect();
    assemble(2 * n + 1, format!("heisenberg(n={n})"), law)
}

pub fn l55() -> LieAlgebra {
    assemble(5, "l55".into(), vec![(0, 1, 3, 1), (0, 3, 4, 1), (1, 2, 4, 1)])
}

pub fn l56() -> LieAlgebra {
    assemble(5, "l56".into(), vec![(0, 1, 2, 1), (0, 2, 3, 1), (0, 3, 4, 1), (1, 2, 4, 1)])
}

pub fn filiform7() -> LieAlgebra {
    let law = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 7), (2, 3, 5), (2, 4, 6), (3, 4, 7)]
        .iter()
        .map(|&(i, j, k)| (i - 1, j - 1, k - 1, 1))
        .collect();
    assemble(7, "filiform7".into(), law)
}

/// Truncated Witt algebra with integral constants `i - j`.
pub fn witt(n: usize) -> LieAlgebra {
    let mut law = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if i + j <= n {
                law.push((i - 1, j - 1, i + j - 1, i as i64 - j as i64));
            }
        }
    }
    assemble(n, format!("witt(n={n})"), law)
}

/// Basis `U_1, U_2, X_1, Y_1, ..., X_n, Y_n, U_3, ..., U_k`.
pub fn central_product(k: usize, n: usize) -> LieAlgebra {
    assert!(k >= 3);
    let u = |i: usize| if i <= 2 { i - 1 } else { 2 * n + i - 1 };
    let mut law = Vec::new();
    for i in 2..k {
        law.push((u(1), u(i), u(i + 1), 1));
    }
    for i in 0..n {
        law.push((2 + 2 * i, 3 + 2 * i, u(k), 1));
    }
    assemble(2 * n + k, format!("central_product(k={k},n={n})"), law)
}

pub fn build(name: &str, params: &Params) -> Result<LieAlgebra, CatalogError> {
    let e = entry(name)?;
    let v = resolve(e, params)?;
    let get = |k: &str| v[k] as usize;
    Ok(match name {
        "heisenberg" => heisenberg(get("n")),
        "l55" => l55(),
        "l56" => l56(),
        "filiform7" => filiform7(),
        "witt" => witt(get("n")),
        "central_product" => central_product(get("k"), get("n")),
        "g3nil" => central_product(4, get("n")).with_name(format!("g3nil(n={})", get("n"))),
        _ => unreachable!("entry table and builders agree"),
    })
}

/// `Σ_{i=1}^{⌈c/2⌉-1} (c/2 - i) q_i` from the quotient dimensions.
fn kc_from_quotients(quotients: &[usize]) -> Q {
    let c = quotients.len() as i64;
    let top = (c + 1) / 2 - 1;
    (1..=top).fold(Q::zero(), |acc, i| acc + (qr(c, 2) - q(i)) * q(quotients[i as usize - 1] as i64))
}

/// Known invariants, written from the closed forms of each family rather than
/// computed from the algebra.
pub fn expected(name: &str, params: &Params) -> Result<Expected, CatalogError> {
    let e = entry(name)?;
    let v = resolve(e, params)?;
    let get = |k: &str| v[k] as usize;
    let (quotients, h, note): (Vec<usize>, Q, Option<String>) = match name {
        "heisenberg" => (vec![2 * get("n"), 1], q(0), None),
        "l55" => (vec![3, 1, 1], q(1), None),
        "l56" => (vec![2, 1, 1, 1], q(1), Some("isomorphic to witt(n=5)".into())),
        "filiform7" => (vec![2, 1, 1, 1, 1, 1], qr(3, 2), None),
        "witt" => {
            let n = get("n");
            let mut qd = vec![2];
            qd.extend(std::iter::repeat_n(1, n - 2));
            // ceil((n-4)/2), clamped at 0 for n = 3.
            let h = (n.saturating_sub(3)) / 2;
            let note = (n == 5).then(|| "isomorphic to l56".to_string());
            (qd, q(h as i64), note)
        }
        "central_product" | "g3nil" => {
            let (k, n) = if name == "g3nil" { (4, get("n")) } else { (get("k"), get("n")) };
            let mut qd = vec![2 * n + 2];
            qd.extend(std::iter::repeat_n(1, k - 2));
            (qd, q((n * (k - 3)) as i64), None)
        }
        _ => unreachable!("entry table and expected values agree"),
    };
    let dim: usize = quotients.iter().sum();
    let class = quotients.len();
    let d = quotients.iter().enumerate().map(|(i, q)| (i + 1) * q).sum();
    Ok(Expected {
        dim,
        class,
        d,
        k_c: kc_from_quotients(&quotients),
        h,
        residual_girth: class * dim,
        quotient_dims: quotients,
        note,
    })
}

/// The parameter sweep whose exponents are checked end to end.
pub fn reproduction_set() -> Vec<(&'static str, Params)> {
    let mut out: Vec<(&'static str, Params)> = vec![
        ("heisenberg", Params::new().with("n", 1)),
        ("heisenberg", Params::new().with("n", 2)),
        ("heisenberg", Params::new().with("n", 3)),
        ("l55", Params::new()),
        ("l56", Params::new()),
        ("filiform7", Params::new()),
    ];
    for n in 4..=12 {
        out.push(("witt", Params::new().with("n", n)));
    }
    for n in 1..=5 {
        out.push(("central_product", Params::new().with("k", 4).with("n", n)));
    }
    for (k, n) in [(5, 1), (5, 2), (6, 1)] {
        out.push(("central_product", Params::new().with("k", k).with("n", n)));
    }
    out
}
