//! Linear inequalities on the log-covolumes `A_q` of the flag blocks of a
//! lattice with sup-norm systole at least 1 in the dilated algebra `g[r]`.
//!
//! All work happens in frame coordinates, where every flag term is a
//! coordinate suffix. Each constraint carries the data needed to re-check
//! its hypotheses with plain subspace arithmetic (see [`replay`]).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{bracket_subspaces, CompatibleFrame, LieAlgebra, SolidFlag, Subspace};
use crate::rational::{determinant, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintClass {
    A,
    B,
    C,
    Cprime,
    D,
}

impl ConstraintClass {
    pub const ALL: [ConstraintClass; 5] =
        [ConstraintClass::A, ConstraintClass::B, ConstraintClass::C, ConstraintClass::Cprime, ConstraintClass::D];
}

impl fmt::Display for ConstraintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintClass::A => "A",
            ConstraintClass::B => "B",
            ConstraintClass::C => "C",
            ConstraintClass::Cprime => "Cprime",
            ConstraintClass::D => "D",
        })
    }
}

impl FromStr for ConstraintClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ConstraintClass::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown constraint class `{s}` (expected A, B, C, Cprime or D)"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationOptions {
    pub disabled: BTreeSet<ConstraintClass>,
}

impl GenerationOptions {
    pub fn without(classes: impl IntoIterator<Item = ConstraintClass>) -> Self {
        GenerationOptions { disabled: classes.into_iter().collect() }
    }

    pub fn enabled(&self, c: ConstraintClass) -> bool {
        !self.disabled.contains(&c)
    }
}

/// `[f_i, f_j]_r = coef · r^{-m} f_k + (deeper terms)` in frame coordinates,
/// with cross terms of the two flag neighbourhoods landing strictly below `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coef: Q,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Minkowski on the flag term at this position.
    TypeA {
        position: usize,
    },
    TypeB(PairWitness),
    /// `T_k ≤ A_i + A_j - m`.
    Auxiliary(PairWitness),
    /// Triangular vectors spanning a sublattice of a solid flag term.
    TypeC {
        position: usize,
        pairs: Vec<PairWitness>,
    },
    /// Minkowski on the triangular sublattice of the suffix starting at `start`.
    TypeCprime {
        start: usize,
        pairs: Vec<PairWitness>,
    },
    /// Flag positions `from..to` carry a nondegenerate pairing into the line `center`.
    TypeD {
        from: usize,
        to: usize,
        center: usize,
        m: u32,
        half_rank: usize,
    },
}

impl Provenance {
    pub fn class(&self) -> Option<ConstraintClass> {
        match self {
            Provenance::TypeA { .. } => Some(ConstraintClass::A),
            Provenance::TypeB(_) => Some(ConstraintClass::B),
            Provenance::Auxiliary(_) => None,
            Provenance::TypeC { .. } => Some(ConstraintClass::C),
            Provenance::TypeCprime { .. } => Some(ConstraintClass::Cprime),
            Provenance::TypeD { .. } => Some(ConstraintClass::D),
        }
    }
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[f{},f{}]->f{} m={}", self.i + 1, self.j + 1, self.k + 1, self.m)
    }
}

/// Compact text with 1-based positions and coordinates.
impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |pairs: &[PairWitness]| pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
        match self {
            Provenance::TypeA { position } => write!(f, "A: suffix from block {}", position + 1),
            Provenance::TypeB(pw) => write!(f, "B: {pw}"),
            Provenance::Auxiliary(pw) => write!(f, "aux: {pw}"),
            Provenance::TypeC { position, pairs } => write!(f, "C: block {} via {}", position + 1, join(pairs)),
            Provenance::TypeCprime { start, pairs } => write!(f, "Cprime: f{}.. via {}", start + 1, join(pairs)),
            Provenance::TypeD { from, to, center, m, half_rank } => {
                write!(f, "D: blocks {}..{} pair into f{} with m={} n={}", from + 1, to, center + 1, m, half_rank)
            }
        }
    }
}

/// `lhs · x ≥ rhs` over the variables of an [`ExponentVars`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Vec<Q>,
    pub rhs: Q,
    pub provenance: Provenance,
}

/// One `A_q` per flag block followed by one `T_k` per targeted coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVars {
    pub blocks: Vec<usize>,
    pub targets: Vec<usize>,
}

impl ExponentVars {
    pub fn len(&self) -> usize {
        self.blocks.len() + self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_var(&self, q: usize) -> usize {
        q
    }

    pub fn target_var(&self, k: usize) -> Option<usize> {
        self.targets.iter().position(|&t| t == k).map(|p| self.blocks.len() + p)
    }

    /// `A1, A2, …, T3, …` with 1-based block and coordinate numbers.
    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.blocks.len()).map(|q| format!("A{q}")).collect();
        out.extend(self.targets.iter().map(|k| format!("T{}", k + 1)));
        out
    }

    /// The objective `Σ_q A_q`.
    pub fn block_sum(&self) -> Vec<Q> {
        (0..self.len()).map(|v| if v < self.blocks.len() { Q::one() } else { Q::zero() }).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub vars: ExponentVars,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn count(&self, class: ConstraintClass) -> usize {
        self.constraints.iter().filter(|c| c.provenance.class() == Some(class)).count()
    }

    pub fn to_lp(&self) -> crate::lp::LinearProgram {
        let mut lp = crate::lp::LinearProgram::new(self.vars.len(), self.vars.block_sum());
        for c in &self.constraints {
            lp.push(c.lhs.clone(), c.rhs.clone());
        }
        lp
    }
}

/// Lowest nonzero coordinate of every `[f_x, f_y]`, plus suffix minima so
/// that the lowest coordinate reached by `[W, W']` is a table lookup.
struct Landing {
    d: usize,
    suffix_min: Vec<usize>,
}

impl Landing {
    fn new(fa: &LieAlgebra) -> Self {
        let d = fa.dim();
        let n = d + 1;
        let mut suffix_min = vec![usize::MAX; n * n];
        for x in (0..d).rev() {
            for y in (0..d).rev() {
                let own = fa.basis_bracket(x, y).iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX);
                let below = suffix_min[(x + 1) * n + y].min(suffix_min[x * n + y + 1]);
                suffix_min[x * n + y] = own.min(below);
            }
        }
        Landing { d, suffix_min }
    }

    /// Lowest coordinate of `[span(f_≥x), span(f_≥y)]`, `usize::MAX` if zero.
    fn lowest(&self, x: usize, y: usize) -> usize {
        self.suffix_min[x * (self.d + 1) + y]
    }
}

struct Layout {
    starts: Vec<usize>,
    block_of: Vec<usize>,
    blocks: Vec<usize>,
    weights: Vec<u32>,
}

impl Layout {
    fn new(frame: &CompatibleFrame) -> Self {
        let mut starts = frame.block_starts();
        starts.push(frame.dim());
        Layout {
            starts,
            block_of: frame.block_of(),
            blocks: frame.blocks().to_vec(),
            weights: frame.weights().to_vec(),
        }
    }

    fn is_line(&self, coord: usize) -> bool {
        self.blocks[self.block_of[coord]] == 1
    }

    /// First coordinate of the flag term following the block of `coord`.
    fn next_start(&self, coord: usize) -> usize {
        self.starts[self.block_of[coord] + 1]
    }

    fn start_of(&self, coord: usize) -> usize {
        self.starts[self.block_of[coord]]
    }
}

fn pair_candidates(fa: &LieAlgebra, layout: &Layout, landing: &Landing) -> Vec<PairWitness> {
    let d = fa.dim();
    let mut out = Vec::new();
    for i in 0..d {
        if !layout.is_line(i) {
            continue;
        }
        for j in i + 1..d {
            if !layout.is_line(j) {
                continue;
            }
            let v = fa.basis_bracket(i, j);
            let Some(k) = v.iter().position(|c| !c.is_zero()) else { continue };
            let cross = landing
                .lowest(layout.next_start(i), layout.start_of(j))
                .min(landing.lowest(layout.start_of(i), layout.next_start(j)));
            if cross <= k {
                continue;
            }
            let m = layout.weights[k] - layout.weights[i] - layout.weights[j];
            out.push(PairWitness { i, j, k, coef: v[k].clone(), m });
        }
    }
    out
}

/// Emits every enabled constraint family for the flag recorded in `frame`.
/// The algebra is given in its original basis.
pub fn generate_constraints(a: &LieAlgebra, frame: &CompatibleFrame, opts: &GenerationOptions) -> ConstraintSystem {
    let fa = frame.algebra_in_frame(a);
    let d = fa.dim();
    let layout = Layout::new(frame);
    let landing = Landing::new(&fa);
    let nb = layout.blocks.len();
    let pairs = pair_candidates(&fa, &layout, &landing);

    let use_t = opts.enabled(ConstraintClass::C) || opts.enabled(ConstraintClass::Cprime);
    let targets: Vec<usize> =
        if use_t { pairs.iter().map(|p| p.k).collect::<BTreeSet<_>>().into_iter().collect() } else { Vec::new() };
    let vars = ExponentVars { blocks: layout.blocks.clone(), targets };
    let nv = vars.len();
    let mut constraints = Vec::new();
    let mut push = |lhs: Vec<Q>, rhs: Q, provenance: Provenance| constraints.push(Constraint { lhs, rhs, provenance });

    // The whole-lattice row is kept under ablation: it is the trivial bound h >= 0.
    for p in 0..nb {
        if p == 0 || opts.enabled(ConstraintClass::A) {
            let (lhs, rhs) = row_for(&Provenance::TypeA { position: p }, &vars, &layout);
            push(lhs, rhs, Provenance::TypeA { position: p });
        }
    }

    if opts.enabled(ConstraintClass::B) {
        for pw in pairs.iter().filter(|pw| layout.is_line(pw.k)) {
            let prov = Provenance::TypeB(pw.clone());
            let (lhs, rhs) = row_for(&prov, &vars, &layout);
            push(lhs, rhs, prov);
        }
    }

    if use_t {
        for pw in &pairs {
            let prov = Provenance::Auxiliary(pw.clone());
            let (lhs, rhs) = row_for(&prov, &vars, &layout);
            push(lhs, rhs, prov);
        }
        let representative = |k: usize| pairs.iter().find(|p| p.k == k).cloned();
        let suffix_pairs = |start: usize| -> Option<Vec<PairWitness>> { (start..d).map(representative).collect() };
        if opts.enabled(ConstraintClass::C) {
            for p in 0..nb {
                if let Some(pairs) = suffix_pairs(layout.starts[p]) {
                    let prov = Provenance::TypeC { position: p, pairs };
                    let (lhs, rhs) = row_for(&prov, &vars, &layout);
                    push(lhs, rhs, prov);
                }
            }
        }
        if opts.enabled(ConstraintClass::Cprime) {
            for start in 0..d {
                if let Some(pairs) = suffix_pairs(start) {
                    let prov = Provenance::TypeCprime { start, pairs };
                    let (lhs, rhs) = row_for(&prov, &vars, &layout);
                    push(lhs, rhs, prov);
                }
            }
        }
    }

    if opts.enabled(ConstraintClass::D) {
        for prov in symplectic_blocks(&fa, &layout, &landing) {
            let (lhs, rhs) = row_for(&prov, &vars, &layout);
            push(lhs, rhs, prov);
        }
    }
    debug_assert!(constraints.iter().all(|c| c.lhs.len() == nv));
    ConstraintSystem { vars, constraints }
}

fn symplectic_blocks(fa: &LieAlgebra, layout: &Layout, landing: &Landing) -> Vec<Provenance> {
    let d = fa.dim();
    let nb = layout.blocks.len();
    let mut out = Vec::new();
    for from in 0..nb {
        for to in from + 1..=nb {
            let (lo, hi) = (layout.starts[from], layout.starts[to]);
            let size = hi - lo;
            if size % 2 != 0 {
                continue;
            }
            for z in hi..d {
                if !layout.is_line(z) {
                    continue;
                }
                if landing.lowest(lo, hi) <= z || landing.lowest(lo, lo) < z {
                    continue;
                }
                if let Some(m) = uniform_pairing(fa, layout, lo..hi, z) {
                    out.push(Provenance::TypeD { from, to, center: z, m, half_rank: size / 2 });
                }
            }
        }
    }
    out
}

/// The exponent `m` shared by every nonzero entry of the `f_z`-coefficient
/// pairing on `coords`, provided that pairing is nondegenerate.
fn uniform_pairing(fa: &LieAlgebra, layout: &Layout, coords: std::ops::Range<usize>, z: usize) -> Option<u32> {
    let idx: Vec<usize> = coords.collect();
    let phi: Vec<Vec<Q>> =
        idx.iter().map(|&x| idx.iter().map(|&y| fa.basis_bracket(x, y)[z].clone()).collect()).collect();
    if determinant(&phi).is_zero() {
        return None;
    }
    let mut m: Option<u32> = None;
    for (a, &x) in idx.iter().enumerate() {
        for (b, &y) in idx.iter().enumerate() {
            if phi[a][b].is_zero() {
                continue;
            }
            let here = layout.weights[z] - layout.weights[x] - layout.weights[y];
            if m.is_some_and(|m| m != here) {
                return None;
            }
            m = Some(here);
        }
    }
    m
}

/// The inequality a provenance stands for, rebuilt from scratch.
fn row_for(prov: &Provenance, vars: &ExponentVars, layout: &Layout) -> (Vec<Q>, Q) {
    let mut lhs = vec![Q::zero(); vars.len()];
    let a = |c: usize| vars.block_var(layout.block_of[c]);
    let t = |k: usize| vars.target_var(k).expect("targeted coordinates have a variable");
    let rhs = match prov {
        Provenance::TypeA { position } => {
            for q in *position..vars.blocks.len() {
                lhs[vars.block_var(q)] += Q::one();
            }
            Q::zero()
        }
        Provenance::TypeB(pw) => {
            lhs[a(pw.i)] += Q::one();
            lhs[a(pw.j)] += Q::one();
            lhs[a(pw.k)] -= Q::one();
            q(pw.m as i64)
        }
        Provenance::Auxiliary(pw) => {
            lhs[a(pw.i)] += Q::one();
            lhs[a(pw.j)] += Q::one();
            lhs[t(pw.k)] -= Q::one();
            q(pw.m as i64)
        }
        Provenance::TypeC { position, pairs } => {
            for pw in pairs {
                lhs[t(pw.k)] += Q::one();
            }
            for q in *position..vars.blocks.len() {
                lhs[vars.block_var(q)] -= Q::one();
            }
            Q::zero()
        }
        Provenance::TypeCprime { pairs, .. } => {
            for pw in pairs {
                lhs[t(pw.k)] += Q::one();
            }
            Q::zero()
        }
        Provenance::TypeD { from, to, center, m, half_rank } => {
            let n = *half_rank as i64;
            for q in *from..*to {
                lhs[vars.block_var(q)] += Q::one();
            }
            lhs[a(*center)] -= q(n);
            q(n * *m as i64)
        }
    };
    (lhs, rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("constraint {index}: {reason}")]
    Failed { index: usize, reason: String },
    #[error("the solid closure does not replay")]
    Closure,
}

/// Re-checks every hypothesis with subspace arithmetic on the frame algebra,
/// and that each row is the inequality its provenance describes.
pub fn replay(
    system: &ConstraintSystem,
    a: &LieAlgebra,
    frame: &CompatibleFrame,
    flag: &SolidFlag,
) -> Result<(), ReplayError> {
    if !flag.closure.verify(a) {
        return Err(ReplayError::Closure);
    }
    let fa = frame.algebra_in_frame(a);
    let d = fa.dim();
    let layout = Layout::new(frame);
    let suffix = |s: usize| Subspace::coordinate(d, s..d);
    let term = |p: usize| suffix(layout.starts[p]);

    let check_flag_term = |p: usize| -> Result<(), String> {
        let original = Subspace::span(d, frame.change_of_basis()[layout.starts[p]..].iter().cloned());
        if flag.chain.get(p) != Some(&original) {
            return Err(format!("frame suffix at position {p} is not the flag term"));
        }
        if flag.closure.ideals.get(flag.certificates[p]).map(|i| &i.space) != Some(&original) {
            return Err(format!("flag term {p} has no closure certificate"));
        }
        Ok(())
    };
    let check_pair = |pw: &PairWitness, line_target: bool| -> Result<(), String> {
        if pw.i >= pw.j || pw.j >= d || pw.k >= d {
            return Err("pair indices out of range".into());
        }
        if !layout.is_line(pw.i) || !layout.is_line(pw.j) || (line_target && !layout.is_line(pw.k)) {
            return Err("pair uses a block of dimension > 1".into());
        }
        let v = fa.basis_bracket(pw.i, pw.j);
        if v.iter().position(|c| !c.is_zero()) != Some(pw.k) || v[pw.k] != pw.coef {
            return Err(format!("[f{}, f{}] does not lead at f{}", pw.i + 1, pw.j + 1, pw.k + 1));
        }
        let (bi, bj) = (layout.block_of[pw.i], layout.block_of[pw.j]);
        let cross =
            bracket_subspaces(&fa, &term(bi + 1), &term(bj)).sum(&bracket_subspaces(&fa, &term(bi), &term(bj + 1)));
        if !suffix(pw.k + 1).contains(&cross) {
            return Err(format!("cross terms of ({}, {}) reach f{}", pw.i + 1, pw.j + 1, pw.k + 1));
        }
        if layout.weights[pw.k] != layout.weights[pw.i] + layout.weights[pw.j] + pw.m {
            return Err("dilation exponent mismatch".into());
        }
        if line_target {
            check_flag_term(layout.block_of[pw.k])?;
            check_flag_term(layout.block_of[pw.k] + 1)?;
        }
        Ok(())
    };
    let check_suffix_pairs = |start: usize, pairs: &[PairWitness]| -> Result<(), String> {
        let ks: Vec<usize> = pairs.iter().map(|p| p.k).collect();
        if ks != (start..d).collect::<Vec<_>>() {
            return Err("triangular pairs do not cover the suffix".into());
        }
        pairs.iter().try_for_each(|p| check_pair(p, false))
    };

    for (index, c) in system.constraints.iter().enumerate() {
        let fail = |reason: String| ReplayError::Failed { index, reason };
        let res = match &c.provenance {
            Provenance::TypeA { position } => check_flag_term(*position),
            Provenance::TypeB(pw) => check_pair(pw, true),
            Provenance::Auxiliary(pw) => check_pair(pw, false),
            Provenance::TypeC { position, pairs } => {
                check_flag_term(*position).and_then(|_| check_suffix_pairs(layout.starts[*position], pairs))
            }
            Provenance::TypeCprime { start, pairs } => check_suffix_pairs(*start, pairs),
            Provenance::TypeD { from, to, center, m, half_rank } => (|| {
                check_flag_term(*from)?;
                check_flag_term(*to)?;
                let (v, vp) = (term(*from), term(*to));
                let z = *center;
                if !layout.is_line(z) || z < layout.starts[*to] {
                    return Err("center is not a line below the pairing".into());
                }
                check_flag_term(layout.block_of[z])?;
                if !suffix(z + 1).contains(&bracket_subspaces(&fa, &v, &vp)) {
                    return Err("[V, V'] reaches the center".into());
                }
                if !suffix(z).contains(&bracket_subspaces(&fa, &v, &v)) {
                    return Err("[V, V] is not below the center".into());
                }
                let lo = layout.starts[*from];
                let hi = layout.starts[*to];
                if hi - lo != 2 * half_rank {
                    return Err("quotient rank mismatch".into());
                }
                match uniform_pairing(&fa, &layout, lo..hi, z) {
                    Some(mm) if mm == *m => Ok(()),
                    _ => Err("pairing is degenerate or not homogeneous".into()),
                }
            })(),
        };
        res.map_err(fail)?;
        let (lhs, rhs) = row_for(&c.provenance, &system.vars, &layout);
        if lhs != c.lhs || rhs != c.rhs {
            return Err(fail("row differs from its provenance".into()));
        }
    }
    Ok(())
}
