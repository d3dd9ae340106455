use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{bracket_subspaces, centralizer, lower_central_series, upper_central_series, LieAlgebra, Subspace};

/// Saturation stops after this many ideals; hitting it is reported, not an error.
pub const CLOSURE_CAP: usize = 10_000;

/// How an ideal was certified solid. Operands index earlier closure entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Zero,
    Whole,
    /// `g^i`, 1-based.
    LowerCentral(usize),
    /// `Z_i`, 1-based.
    UpperCentral(usize),
    Bracket(usize, usize),
    Centralizer {
        of: usize,
        modulo: usize,
    },
    Sum(usize, usize),
    Intersection(usize, usize),
}

/// Operands print as `I<n>`, the 1-based position in the closure.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Derivation::Zero => f.write_str("0"),
            Derivation::Whole => f.write_str("g"),
            Derivation::LowerCentral(i) => write!(f, "g^{i}"),
            Derivation::UpperCentral(i) => write!(f, "Z_{i}"),
            Derivation::Bracket(a, b) => write!(f, "[I{}, I{}]", a + 1, b + 1),
            Derivation::Centralizer { of, modulo } => write!(f, "C(I{} mod I{})", of + 1, modulo + 1),
            Derivation::Sum(a, b) => write!(f, "I{} + I{}", a + 1, b + 1),
            Derivation::Intersection(a, b) => write!(f, "I{} ∩ I{}", a + 1, b + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolidIdeal {
    pub space: Subspace,
    pub derivation: Derivation,
}

#[derive(Debug, Clone)]
pub struct SolidClosure {
    pub ideals: Vec<SolidIdeal>,
    pub capped: bool,
}

impl SolidClosure {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.ideals.iter().position(|i| &i.space == s)
    }

    /// Recomputes every ideal from its derivation alone.
    pub fn replay(&self, a: &LieAlgebra) -> Vec<Subspace> {
        let d = a.dim();
        let lcs = lower_central_series(a);
        let ucs = upper_central_series(a);
        let mut out: Vec<Subspace> = Vec::with_capacity(self.ideals.len());
        for ideal in &self.ideals {
            let s = match ideal.derivation {
                Derivation::Zero => Subspace::zero(d),
                Derivation::Whole => Subspace::full(d),
                Derivation::LowerCentral(i) => lcs[i - 1].clone(),
                Derivation::UpperCentral(i) => ucs[i - 1].clone(),
                Derivation::Bracket(x, y) => bracket_subspaces(a, &out[x], &out[y]),
                Derivation::Centralizer { of, modulo } => {
                    centralizer(a, &out[of], &out[modulo]).expect("solid ideals are ideals")
                }
                Derivation::Sum(x, y) => out[x].sum(&out[y]),
                Derivation::Intersection(x, y) => out[x].intersection(&out[y]),
            };
            out.push(s);
        }
        out
    }

    /// Checks that every derivation references earlier entries and replays exactly.
    pub fn verify(&self, a: &LieAlgebra) -> bool {
        let refs_ok = self.ideals.iter().enumerate().all(|(n, i)| match i.derivation {
            Derivation::Bracket(x, y) | Derivation::Sum(x, y) | Derivation::Intersection(x, y) => x < n && y < n,
            Derivation::Centralizer { of, modulo } => of < n && modulo < n,
            _ => true,
        });
        refs_ok && self.replay(a).iter().zip(&self.ideals).all(|(r, i)| r == &i.space)
    }
}

/// Saturates the seed ideals (lower and upper central series, `{0}`, `g`)
/// under bracket, centralizer modulo, sum and intersection.
pub fn solid_closure(a: &LieAlgebra) -> SolidClosure {
    let d = a.dim();
    let mut ideals: Vec<SolidIdeal> = Vec::new();
    let mut index: HashMap<Subspace, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut capped = false;

    let mut push = |space: Subspace,
                    derivation: Derivation,
                    ideals: &mut Vec<SolidIdeal>,
                    queue: &mut VecDeque<usize>,
                    capped: &mut bool| {
        if index.contains_key(&space) {
            return;
        }
        if ideals.len() >= CLOSURE_CAP {
            *capped = true;
            return;
        }
        index.insert(space.clone(), ideals.len());
        queue.push_back(ideals.len());
        ideals.push(SolidIdeal { space, derivation });
    };

    push(Subspace::zero(d), Derivation::Zero, &mut ideals, &mut queue, &mut capped);
    push(Subspace::full(d), Derivation::Whole, &mut ideals, &mut queue, &mut capped);
    for (i, s) in lower_central_series(a).into_iter().enumerate() {
        push(s, Derivation::LowerCentral(i + 1), &mut ideals, &mut queue, &mut capped);
    }
    for (i, s) in upper_central_series(a).into_iter().enumerate() {
        push(s, Derivation::UpperCentral(i + 1), &mut ideals, &mut queue, &mut capped);
    }

    while let Some(n) = queue.pop_front() {
        if capped {
            break;
        }
        for m in 0..=n {
            let (x, y) = (ideals[n].space.clone(), ideals[m].space.clone());
            let mut produced = vec![
                (bracket_subspaces(a, &x, &y), Derivation::Bracket(n, m)),
                (x.sum(&y), Derivation::Sum(n, m)),
                (x.intersection(&y), Derivation::Intersection(n, m)),
            ];
            if let Ok(c) = centralizer(a, &x, &y) {
                produced.push((c, Derivation::Centralizer { of: n, modulo: m }));
            }
            if let Ok(c) = centralizer(a, &y, &x) {
                produced.push((c, Derivation::Centralizer { of: m, modulo: n }));
            }
            for (s, der) in produced {
                push(s, der, &mut ideals, &mut queue, &mut capped);
            }
        }
    }
    SolidClosure { ideals, capped }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FlagMode {
    /// Longest chains of certified solid ideals between lower-central terms.
    #[default]
    Auto,
    /// The lower central series itself.
    LcsOnly,
}

/// A descending chain `g = W_0 ⊋ W_1 ⊋ … ⊋ {0}` of certified solid ideals
/// that contains the lower central series.
#[derive(Debug, Clone)]
pub struct SolidFlag {
    pub chain: Vec<Subspace>,
    /// `dim W_j - dim W_{j+1}` for each position.
    pub blocks: Vec<usize>,
    /// Closure index certifying each chain term.
    pub certificates: Vec<usize>,
    pub closure: SolidClosure,
}

impl SolidFlag {
    pub fn derivation(&self, position: usize) -> Derivation {
        self.closure.ideals[self.certificates[position]].derivation
    }
}

pub fn solid_flag(a: &LieAlgebra, mode: FlagMode) -> SolidFlag {
    let closure = solid_closure(a);
    let lcs = lower_central_series(a);
    let mut chain_idx: Vec<usize> = Vec::new();
    for pair in lcs.windows(2) {
        let (top, bottom) = (&pair[0], &pair[1]);
        let top_i = closure.position(top).expect("lower-central terms are seeds");
        let bottom_i = closure.position(bottom).expect("lower-central terms are seeds");
        let segment = match mode {
            FlagMode::LcsOnly => vec![bottom_i, top_i],
            FlagMode::Auto => longest_chain(&closure, bottom_i, top_i),
        };
        // Segments run bottom-up; the flag runs top-down.
        for &i in segment.iter().rev() {
            if chain_idx.last() != Some(&i) {
                chain_idx.push(i);
            }
        }
    }
    let chain: Vec<Subspace> = chain_idx.iter().map(|&i| closure.ideals[i].space.clone()).collect();
    let blocks = chain.windows(2).map(|p| p[0].dim() - p[1].dim()).collect();
    SolidFlag { chain, blocks, certificates: chain_idx, closure }
}

/// Longest strictly increasing chain of closure members from `bottom` to `top`;
/// ties go to the chain whose dimensions, read from the bottom, are smaller.
fn longest_chain(closure: &SolidClosure, bottom: usize, top: usize) -> Vec<usize> {
    let (lo, hi) = (&closure.ideals[bottom].space, &closure.ideals[top].space);
    let mut cands: Vec<usize> = (0..closure.len())
        .filter(|&i| {
            let s = &closure.ideals[i].space;
            s.contains(lo) && hi.contains(s)
        })
        .collect();
    cands.sort_by_key(|&i| (closure.ideals[i].space.dim(), i));
    let dims = |chain: &[usize]| -> Vec<usize> { chain.iter().map(|&i| closure.ideals[i].space.dim()).collect() };
    let mut best: HashMap<usize, Vec<usize>> = HashMap::new();
    best.insert(bottom, vec![bottom]);
    for &s in &cands {
        if s == bottom {
            continue;
        }
        let space = &closure.ideals[s].space;
        let mut choice: Option<Vec<usize>> = None;
        for &t in &cands {
            let tspace = &closure.ideals[t].space;
            if tspace.dim() >= space.dim() || !space.contains(tspace) {
                continue;
            }
            let Some(prev) = best.get(&t) else { continue };
            let better = match &choice {
                None => true,
                Some(c) => prev.len() > c.len() || (prev.len() == c.len() && dims(prev) < dims(c)),
            };
            if better {
                choice = Some(prev.clone());
            }
        }
        if let Some(mut c) = choice {
            c.push(s);
            best.insert(s, c);
        }
    }
    best.remove(&top).expect("the bottom term lies below the top term")
}
