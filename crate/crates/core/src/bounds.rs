//! Lower and upper bounds on the exponent `h` in `σ(r) ≃ r^{D+h}`.
//!
//! The lower bound is the optimum of the constraint LP (with a dual
//! certificate); the upper bound is the best diagonal lattice, found by a
//! second LP and then built and checked exactly at sample radii.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    compatible_frame, dilated_bracket, homogeneous_dimension, k_c, lower_central_series, nilpotency_class, solid_flag,
    CompatibleFrame, FlagMode, GradedBracket, LieAlgebra, SolidFlag,
};
use crate::constraints::{generate_constraints, replay, ConstraintSystem, GenerationOptions, ReplayError};
use crate::geometry::{is_subring, GLength, GeometryError, SubringCheck, WeightedLattice};
use crate::lattice::AdditiveLattice;
use crate::lp::{minimize, LinearProgram, LpCertificate, LpError};
use crate::rational::{exact_log, fmt_q, integral_power, lcm_of_denominators, pow_q, pow_z, q, Q, Z};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("linear program: {0}")]
    Lp(#[from] LpError),
    #[error("soundness replay failed: {0}")]
    Replay(#[from] ReplayError),
    #[error("diagonal lattice at r={r} is not closed: [b{i}, b{j}] leaves the lattice")]
    ClosureFailure { r: Z, i: usize, j: usize, bracket: Vec<Q> },
    #[error("r={r} does not make r^{exponent} integral")]
    NonIntegralScale { r: Z, exponent: Q },
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsConfig {
    pub flag_mode: FlagMode,
    pub generation: GenerationOptions,
    /// Bases `n`; witnesses are built at `r = n^q`.
    pub r_samples: Vec<u64>,
    pub node_limit: Option<u64>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            flag_mode: FlagMode::Auto,
            generation: GenerationOptions::default(),
            r_samples: vec![2, 3, 5],
            node_limit: None,
        }
    }
}

/// The flag, an integral frame adapted to it, and the dilated bracket.
#[derive(Debug, Clone)]
pub struct Setup {
    pub flag: SolidFlag,
    pub frame: CompatibleFrame,
    pub graded: GradedBracket,
}

pub fn setup(a: &LieAlgebra, mode: FlagMode) -> Setup {
    let flag = solid_flag(a, mode);
    let frame = compatible_frame(a, Some(&flag.chain)).expect("solid flags refine the lower central series");
    let s = frame.integral_rescaling(a);
    let frame = frame.scaled(&s);
    let graded = dilated_bracket(a, &frame);
    Setup { flag, frame, graded }
}

#[derive(Debug, Clone)]
pub struct LowerBound {
    pub h: Q,
    pub system: ConstraintSystem,
    pub certificate: LpCertificate,
}

pub fn lower_bound_with(a: &LieAlgebra, setup: &Setup, opts: &GenerationOptions) -> Result<LowerBound, BoundsError> {
    let system = generate_constraints(a, &setup.frame, opts);
    replay(&system, a, &setup.frame, &setup.flag)?;
    let certificate = minimize(&system.to_lp())?;
    Ok(LowerBound { h: certificate.optimum.clone(), system, certificate })
}

pub fn lower_bound_exponent(a: &LieAlgebra, config: &BoundsConfig) -> Result<LowerBound, BoundsError> {
    lower_bound_with(a, &setup(a, config.flag_mode), &config.generation)
}

#[derive(Debug, Clone)]
pub struct UpperBound {
    pub h: Q,
    /// Extra exponent per frame vector.
    pub theta: Vec<Q>,
    pub certificate: LpCertificate,
}

/// `min Σθ` over `θ ≥ 0` with `θ_i + θ_j - θ_k ≥ m` for every graded entry.
pub fn upper_bound_lp(graded: &GradedBracket) -> LinearProgram {
    let d = graded.weights.len();
    let mut lp = LinearProgram::new(d, vec![Q::one(); d]);
    for i in 0..d {
        let mut row = vec![Q::zero(); d];
        row[i] = Q::one();
        lp.push(row, Q::zero());
    }
    for e in &graded.entries {
        let mut row = vec![Q::zero(); d];
        row[e.i] += Q::one();
        row[e.j] += Q::one();
        row[e.k] -= Q::one();
        lp.push(row, q(e.m as i64));
    }
    lp
}

pub fn upper_bound_with(setup: &Setup) -> Result<UpperBound, BoundsError> {
    let certificate = minimize(&upper_bound_lp(&setup.graded))?;
    Ok(UpperBound { h: certificate.optimum.clone(), theta: certificate.primal.clone(), certificate })
}

pub fn upper_bound_exponent(a: &LieAlgebra, mode: FlagMode) -> Result<UpperBound, BoundsError> {
    upper_bound_with(&setup(a, mode))
}

/// `n^q` with `q` the lcm of the denominators of `θ`.
pub fn witness_radius(theta: &[Q], n: u64) -> Z {
    let q = lcm_of_denominators(theta);
    let q: u32 = q.try_into().expect("θ denominators stay small");
    pow_z(&Z::from(n), q)
}

/// A diagonal lattice `⊕ r^{w_i+θ_i} ℤ f_i` in integral frame coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalWitness {
    pub r: Z,
    pub diagonal: Vec<Z>,
    /// Basis rows in the original coordinates of the algebra.
    pub basis: Vec<Vec<Q>>,
    pub subring: bool,
    pub systole: GLength,
    pub covolume: Q,
    /// `r^{D + Σθ}`.
    pub expected_covolume: Q,
    /// Every basis vector has the form `n f_i` with `n` an integer.
    pub leading_integral: bool,
}

impl DiagonalWitness {
    pub fn passes(&self) -> bool {
        self.subring
            && self.leading_integral
            && self.systole == GLength::of_rational(Q::from_integer(self.r.clone()))
            && self.covolume == self.expected_covolume
    }
}

pub fn build_diagonal_lattice(
    a: &LieAlgebra,
    frame: &CompatibleFrame,
    theta: &[Q],
    r: &Z,
    node_limit: Option<u64>,
) -> Result<DiagonalWitness, BoundsError> {
    let weights = frame.weights();
    let mut diagonal = Vec::with_capacity(theta.len());
    for (t, &w) in theta.iter().zip(weights) {
        let exponent = t + q(w as i64);
        let v = integral_power(r, &exponent).ok_or(BoundsError::NonIntegralScale { r: r.clone(), exponent })?;
        diagonal.push(v);
    }
    let entries: Vec<Q> = diagonal.iter().cloned().map(Q::from_integer).collect();
    let lattice = AdditiveLattice::diagonal(&entries);
    let fa = frame.algebra_in_frame(a);
    if let SubringCheck::Witness { i, j, bracket } = is_subring(&lattice, &fa) {
        return Err(BoundsError::ClosureFailure { r: r.clone(), i, j, bracket });
    }
    let wl = WeightedLattice::new(lattice, weights.to_vec())?;
    let systole = wl.systole(node_limit)?.length;
    let covolume = wl.covolume();
    let total: Q = theta.iter().sum::<Q>() + q(weights.iter().map(|&w| w as i64).sum());
    let expected_covolume = Q::from_integer(
        integral_power(r, &total).ok_or(BoundsError::NonIntegralScale { r: r.clone(), exponent: total })?,
    );
    let basis = entries.iter().zip(frame.change_of_basis()).map(|(c, v)| v.iter().map(|x| x * c).collect()).collect();
    Ok(DiagonalWitness {
        r: r.clone(),
        diagonal,
        basis,
        subring: true,
        systole,
        covolume,
        expected_covolume,
        leading_integral: entries.iter().all(|e| e.is_integer() && e.is_positive()),
    })
}

/// A user lattice `Ξ` checked as a subring of `g[r]`, together with the
/// lattice `Λ = u(r) Ξ` of `g` that it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVerification {
    pub r: Q,
    pub homogeneous_dim: usize,
    /// HNF basis of `Ξ` in frame coordinates; closure witnesses index it.
    pub basis: Vec<Vec<Q>>,
    /// Closure of `Ξ` under the bracket of `g[r]`.
    pub closure: SubringCheck,
    pub systole: GLength,
    pub covolume: Q,
    /// `r · sys(Ξ)`.
    pub dilated_systole: GLength,
    /// `r^D · cov(Ξ)`.
    pub dilated_covolume: Q,
    /// `e` with `cov(Λ) = r^e`, when `r` is an integer and `e` is rational.
    pub exponent: Option<Q>,
}

/// Checks `Ξ`, given by rows in the algebra's coordinates, at scale `r`.
/// The dilation is taken in the compatible frame, where `u(r)` is diagonal.
pub fn verify_lattice(
    a: &LieAlgebra,
    rows: &[Vec<Q>],
    r: &Q,
    node_limit: Option<u64>,
) -> Result<LatticeVerification, BoundsError> {
    if !r.is_positive() {
        return Err(BoundsError::Invariant(format!("scale r={} must be positive", fmt_q(r))));
    }
    if rows.iter().any(|row| row.len() != a.dim()) {
        return Err(GeometryError::DimensionMismatch.into());
    }
    let frame = compatible_frame(a, None).map_err(|e| BoundsError::Invariant(e.to_string()))?;
    let in_frame: Vec<Vec<Q>> = rows.iter().map(|row| frame.to_frame(row)).collect();
    let lattice = AdditiveLattice::from_generators(a.dim(), &in_frame);
    let wl = WeightedLattice::new(lattice, frame.weights().to_vec())?;
    let closure = wl.is_subring(&dilated_bracket(a, &frame).at(r));
    let systole = wl.systole(node_limit)?.length;
    let covolume = wl.covolume();
    let d = homogeneous_dimension(a);
    let dilated_covolume = pow_q(r, d as u32) * &covolume;
    let exponent = if r.is_integer() { exact_log(r.numer(), &dilated_covolume) } else { None };
    Ok(LatticeVerification {
        r: r.clone(),
        homogeneous_dim: d,
        basis: wl.lattice.basis(),
        closure,
        dilated_systole: systole.scale(r),
        systole,
        covolume,
        dilated_covolume,
        exponent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Baselines {
    /// `c · dim`, from congruence subgroups.
    pub residual_girth: usize,
    /// `D + k_c`.
    pub kc_bound: Q,
}

pub fn baseline_exponents(a: &LieAlgebra) -> Baselines {
    Baselines { residual_girth: nilpotency_class(a) * a.dim(), kc_bound: q(homogeneous_dimension(a) as i64) + k_c(a) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarnotVerdict {
    NonCarnotCertified,
    CarnotLimitEqualsInput,
    Inconclusive,
}

impl fmt::Display for CarnotVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CarnotVerdict::NonCarnotCertified => "non-Carnot (certified)",
            CarnotVerdict::CarnotLimitEqualsInput => "Carnot-graded limit equals input constants",
            CarnotVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub dim: usize,
    pub class: usize,
    pub series_dims: Vec<usize>,
    pub homogeneous_dim: usize,
    pub k_c: Q,
    pub baselines: Baselines,
    pub flag_blocks: Vec<usize>,
    pub weights: Vec<u32>,
    pub lower: LowerBound,
    pub upper: UpperBound,
    pub witnesses: Vec<DiagonalWitness>,
    pub verdict: CarnotVerdict,
}

impl BoundReport {
    pub fn witnesses_pass(&self) -> bool {
        self.witnesses.iter().all(DiagonalWitness::passes)
    }

    pub fn is_tight(&self) -> bool {
        self.lower.h == self.upper.h
    }
}

pub fn bound_report(a: &LieAlgebra, config: &BoundsConfig) -> Result<BoundReport, BoundsError> {
    let st = setup(a, config.flag_mode);
    let lower = lower_bound_with(a, &st, &config.generation)?;
    let upper = upper_bound_with(&st)?;
    let kc = k_c(a);
    let invariant = |ok: bool, what: &str| if ok { Ok(()) } else { Err(BoundsError::Invariant(what.to_string())) };
    invariant(!lower.h.is_negative(), "h_lower >= 0")?;
    invariant(lower.h <= upper.h, "h_lower <= h_upper")?;
    invariant(upper.h <= kc, "h_upper <= k_c")?;
    invariant(
        lower.h.is_zero() || st.graded.has_positive_exponent(),
        "h_lower > 0 needs a positive dilation exponent",
    )?;

    let mut witnesses = Vec::with_capacity(config.r_samples.len());
    for &n in &config.r_samples {
        let r = witness_radius(&upper.theta, n);
        witnesses.push(build_diagonal_lattice(a, &st.frame, &upper.theta, &r, config.node_limit)?);
    }
    let verdict = if lower.h.is_positive() {
        CarnotVerdict::NonCarnotCertified
    } else if !st.graded.has_positive_exponent() {
        CarnotVerdict::CarnotLimitEqualsInput
    } else {
        CarnotVerdict::Inconclusive
    };
    Ok(BoundReport {
        name: a.name().unwrap_or("unnamed").to_string(),
        dim: a.dim(),
        class: nilpotency_class(a),
        series_dims: lower_central_series(a).iter().map(|s| s.dim()).collect(),
        homogeneous_dim: homogeneous_dimension(a),
        k_c: kc,
        baselines: baseline_exponents(a),
        flag_blocks: st.flag.blocks.clone(),
        weights: st.frame.weights().to_vec(),
        lower,
        upper,
        witnesses,
        verdict,
    })
}
