//! Line-oriented text format:
//!
//! ```text
//! # comment
//! dim 5
//! name l55
//! bracket 1 2 = 1*4
//! bracket 2 3 = 1*5 + -1/2*4
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{validate, AlgebraError, LieAlgebra, RawAlgebra};
use crate::rational::{fmt_q, parse_q};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bracket ({i},{j}) given twice")]
    Duplicate { line: usize, i: usize, j: usize },
    #[error("{0}")]
    Invalid(#[from] AlgebraError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra, ParseError> {
    let mut dim: Option<usize> = None;
    let mut name: Option<String> = None;
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut raw = RawAlgebra::default();
    for (n, line) in text.lines().enumerate() {
        let ln = n + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(ln, "dim given twice"));
                }
                let d: usize = rest.parse().map_err(|_| syntax(ln, format!("bad dimension '{rest}'")))?;
                if d == 0 {
                    return Err(syntax(ln, "dimension must be positive"));
                }
                dim = Some(d);
            }
            "name" => name = Some(rest.to_string()),
            "bracket" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(ln, "expected '='"))?;
                let idx: Vec<&str> = lhs.split_whitespace().collect();
                let [i, j] = idx.as_slice() else {
                    return Err(syntax(ln, "expected two indices before '='"));
                };
                let i: usize = i.parse().map_err(|_| syntax(ln, format!("bad index '{i}'")))?;
                let j: usize = j.parse().map_err(|_| syntax(ln, format!("bad index '{j}'")))?;
                if !seen.insert((i, j)) {
                    return Err(ParseError::Duplicate { line: ln, i, j });
                }
                let mut terms = Vec::new();
                for term in rhs.split('+') {
                    let term = term.trim();
                    if term.is_empty() {
                        return Err(syntax(ln, "empty term"));
                    }
                    let (c, k) = term.split_once('*').ok_or_else(|| syntax(ln, format!("term '{term}' is not q*k")))?;
                    let c = parse_q(c).ok_or_else(|| syntax(ln, format!("bad rational '{}'", c.trim())))?;
                    let k: usize = k.trim().parse().map_err(|_| syntax(ln, format!("bad index '{}'", k.trim())))?;
                    terms.push((k, c));
                }
                raw.brackets.push(super::RawBracket { i, j, terms });
            }
            other => return Err(syntax(ln, format!("unknown keyword '{other}'"))),
        }
    }
    raw.dim = dim.ok_or_else(|| syntax(0, "missing 'dim' line"))?;
    raw.name = name;
    Ok(validate(raw)?)
}

pub fn write_algebra(a: &LieAlgebra) -> String {
    let mut out = format!("dim {}\n", a.dim());
    if let Some(n) = a.name() {
        out.push_str(&format!("name {n}\n"));
    }
    let mut lines: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (i, j, k, c) in a.constants() {
        lines.entry((i, j)).or_default().push(format!("{}*{}", fmt_q(&c), k + 1));
    }
    for ((i, j), terms) in lines {
        out.push_str(&format!("bracket {} {} = {}\n", i + 1, j + 1, terms.join(" + ")));
    }
    out
}
