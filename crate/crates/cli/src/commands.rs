//! The five subcommands. Tables go to stdout; failures are returned so the
//! caller can pick the exit code.

use nilsys_core::algebra::{
    carnot_graded, homogeneous_dimension, k_c, lower_central_series, nilpotency_class, write_algebra, FlagMode,
};
use nilsys_core::bounds::{bound_report, setup, verify_lattice, BoundReport, BoundsConfig, BoundsError};
use nilsys_core::catalog::{self, reproduction_set};
use nilsys_core::geometry::SubringCheck;
use nilsys_core::rational::fmt_q;
use nilsys_core::report::ReportJson;
use nilsys_core::{LieAlgebra, Q};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::input::params;
use crate::{Failure, Outcome};

/// `writeln!` into the output buffer; formatting into a `String` cannot fail.
macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn tuple(v: &[Q]) -> String {
    format!("({})", qs(v).join(", "))
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Lower central series in basis-index notation, e.g. `123/4/5`: the basis
/// is numbered through the successive quotients. Indices are comma-separated
/// once the dimension reaches 10.
pub fn series_symbol(quotients: &[usize]) -> String {
    let total: usize = quotients.iter().sum();
    let sep = if total >= 10 { "," } else { "" };
    let mut next = 1;
    let groups: Vec<String> = quotients
        .iter()
        .map(|&q| {
            let idx: Vec<usize> = (next..next + q).collect();
            next += q;
            join(&idx, sep)
        })
        .collect();
    groups.join("/")
}

/// `Σ c_v x_v` with unit coefficients suppressed.
fn linear_form(coeffs: &[Q], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names).filter(|(c, _)| !c.is_zero()) {
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            out.push_str(if c.is_negative() { "-" } else { "" });
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&format!("{} ", fmt_q(&mag)));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn print_json(out: &mut String, v: &Value) {
    emit!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

pub fn info(out: &mut String, a: &LieAlgebra, mode: FlagMode, json: bool) -> Outcome {
    let dims: Vec<usize> = lower_central_series(a).iter().map(|s| s.dim()).collect();
    let quotients: Vec<usize> = dims.windows(2).map(|w| w[0] - w[1]).collect();
    let (class, d, kc) = (nilpotency_class(a), homogeneous_dimension(a), k_c(a));
    let st = setup(a, mode);
    let carnot = carnot_graded(a, &st.frame);
    let positive: Vec<_> = st.graded.entries.iter().filter(|e| e.m > 0).collect();
    let name = a.name().unwrap_or("unnamed");
    if json {
        print_json(
            out,
            &json!({
                "name": name,
                "dim": a.dim(),
                "class": class,
                "series": series_symbol(&quotients),
                "series_dims": dims,
                "D": d,
                "k_c": fmt_q(&kc),
                "flag_blocks": st.flag.blocks,
                "weights": st.frame.weights(),
                "frame": st.frame.change_of_basis().iter().map(|v| qs(v)).collect::<Vec<_>>(),
                "carnot_constants": carnot.constants().iter()
                    .map(|(i, j, k, c)| json!([i + 1, j + 1, k + 1, fmt_q(c)])).collect::<Vec<_>>(),
                "positive_exponents": positive.iter()
                    .map(|e| json!([e.i + 1, e.j + 1, e.k + 1, fmt_q(&e.coef), e.m])).collect::<Vec<_>>(),
            }),
        );
        return Ok(());
    }
    emit!(out, "{name}");
    emit!(out, "  d={} c={class} D={d} k_c={}", a.dim(), fmt_q(&kc));
    emit!(out, "  series {} (dims {})", series_symbol(&quotients), join(&dims, ","));
    let mode_name = if mode == FlagMode::Auto { "auto" } else { "lcs-only" };
    emit!(out, "  solid flag ({mode_name}): blocks {}", join(&st.flag.blocks, ","));
    for (pos, w) in st.flag.chain.iter().enumerate().take(st.flag.blocks.len()) {
        emit!(out, "    W{} dim {:<3} from {}", pos + 1, w.dim(), st.flag.derivation(pos));
    }
    emit!(out, "  frame weights {}", join(st.frame.weights(), ","));
    if !st.frame.is_identity() {
        for (i, v) in st.frame.change_of_basis().iter().enumerate() {
            emit!(out, "    f{} = {}", i + 1, tuple(v));
        }
    }
    emit!(out, "  Carnot-graded constants (frame basis f):");
    for (i, j, k, c) in carnot.constants() {
        emit!(out, "    [f{},f{}] -> {} f{}", i + 1, j + 1, fmt_q(&c), k + 1);
    }
    if positive.is_empty() {
        emit!(out, "  no positive dilation exponents: g[r] does not depend on r");
    } else {
        emit!(out, "  positive dilation exponents ([x,y]_r carries r^-m):");
        for e in positive {
            emit!(out, "    [f{},f{}] -> {} f{}  m={}", e.i + 1, e.j + 1, fmt_q(&e.coef), e.k + 1, e.m);
        }
    }
    Ok(())
}

/// Errors from the witness stage are check failures; anything else means the
/// engine could not produce a sound report at all, which is also a failure.
fn report_failure(name: &str, e: BoundsError) -> Failure {
    Failure::Check(format!("{name}: {e}"))
}

fn print_bound_table(out: &mut String, r: &BoundReport) {
    let lp_ok = r.lower.certificate.verify(&r.lower.system.to_lp()).is_ok();
    emit!(out, "{}", r.name);
    emit!(out, "  d={} c={} D={} k_c={}", r.dim, r.class, r.homogeneous_dim, fmt_q(&r.k_c));
    emit!(out, "  flag blocks {}  weights {}", join(&r.flag_blocks, ","), join(&r.weights, ","));
    emit!(out, "  h_lower = {}  (dual certificate {})", fmt_q(&r.lower.h), if lp_ok { "verified" } else { "FAILED" });
    emit!(out, "  h_upper = {}  theta = {}", fmt_q(&r.upper.h), tuple(&r.upper.theta));
    emit!(out, "  verdict: {}", r.verdict);
    emit!(out, "  baselines: c*d = {}, D+k_c = {}", r.baselines.residual_girth, fmt_q(&r.baselines.kc_bound));
    let names = r.lower.system.vars.names();
    emit!(out, "  constraints ({}), with dual multipliers y:", r.lower.system.constraints.len());
    let forms: Vec<String> = r
        .lower
        .system
        .constraints
        .iter()
        .map(|c| format!("{} >= {}", linear_form(&c.lhs, &names), fmt_q(&c.rhs)))
        .collect();
    let width = forms.iter().map(String::len).max().unwrap_or(0);
    for ((c, y), form) in r.lower.system.constraints.iter().zip(&r.lower.certificate.dual).zip(&forms) {
        emit!(out, "    {form:<width$}  y={:<6} {}", fmt_q(y), c.provenance);
    }
    emit!(out, "  witnesses:");
    for w in &r.witnesses {
        emit!(
            out,
            "    r={:<8} subring={} systole={} covolume={} expected={} {}",
            w.r,
            if w.subring { "yes" } else { "no" },
            w.systole,
            fmt_q(&w.covolume),
            fmt_q(&w.expected_covolume),
            if w.passes() { "ok" } else { "FAIL" }
        );
    }
}

pub fn bounds(out: &mut String, a: &LieAlgebra, config: &BoundsConfig, json: bool) -> Outcome {
    let name = a.name().unwrap_or("unnamed").to_string();
    let r = bound_report(a, config).map_err(|e| report_failure(&name, e))?;
    if json {
        emit!(out, "{}", ReportJson::from(&r).render());
    } else {
        print_bound_table(out, &r);
    }
    if !r.lower.certificate.verify(&r.lower.system.to_lp()).is_ok() {
        return Err(Failure::Check(format!("{name}: dual certificate does not verify")));
    }
    if !r.witnesses_pass() {
        return Err(Failure::Check(format!("{name}: witness verification failed")));
    }
    Ok(())
}

pub fn verify(
    out: &mut String,
    a: &LieAlgebra,
    rows: &[Vec<Q>],
    r: &Q,
    node_limit: Option<u64>,
    json: bool,
) -> Outcome {
    let name = a.name().unwrap_or("unnamed").to_string();
    let v = verify_lattice(a, rows, r, node_limit).map_err(|e| match e {
        BoundsError::Geometry(g) => Failure::Input(format!("lattice: {g}")),
        other => Failure::Check(other.to_string()),
    })?;
    let failure = match &v.closure {
        SubringCheck::Subring => None,
        SubringCheck::Witness { i, j, bracket } => Some((i + 1, j + 1, bracket)),
    };
    if json {
        print_json(
            out,
            &json!({
                "name": name,
                "r": fmt_q(r),
                "D": v.homogeneous_dim,
                "basis": v.basis.iter().map(|b| qs(b)).collect::<Vec<_>>(),
                "subring": failure.is_none(),
                "closure_failure": failure.map(|(i, j, b)| json!({"i": i, "j": j, "bracket": qs(b)})),
                "systole": v.systole.to_string(),
                "covolume": fmt_q(&v.covolume),
                "dilated_systole": v.dilated_systole.to_string(),
                "dilated_covolume": fmt_q(&v.dilated_covolume),
                "exponent": v.exponent.as_ref().map(fmt_q),
            }),
        );
    } else {
        let r_txt = fmt_q(r);
        emit!(out, "{name}: lattice Xi in g[{r_txt}] (frame coordinates, D={})", v.homogeneous_dim);
        match failure {
            None => emit!(out, "  subring of g[{r_txt}]: yes"),
            Some((i, j, bracket)) => {
                emit!(out, "  subring of g[{r_txt}]: no");
                emit!(
                    out,
                    "  ClosureFailure: [b{i},b{j}] = {} is not in Xi, with b{i} = {}, b{j} = {}",
                    tuple(bracket),
                    tuple(&v.basis[i - 1]),
                    tuple(&v.basis[j - 1])
                );
            }
        }
        emit!(out, "  Xi: systole {}, covolume {}", v.systole, fmt_q(&v.covolume));
        let power = v.exponent.as_ref().map_or(String::new(), |e| format!(" = {r_txt}^{}", fmt_q(e)));
        emit!(out, "  Lambda = u(r) Xi: systole {}, covolume {}{power}", v.dilated_systole, fmt_q(&v.dilated_covolume));
    }
    match failure {
        None => Ok(()),
        Some((i, j, _)) => Err(Failure::Check(format!("{name}: lattice not closed at [b{i},b{j}]"))),
    }
}

pub fn catalog(out: &mut String, name: Option<&str>, param: Option<&str>) -> Outcome {
    let Some(name) = name else {
        if param.is_some() {
            return Err(Failure::Input("--param needs an entry name".into()));
        }
        for e in catalog::entries() {
            let ps: Vec<String> =
                e.params.iter().map(|p| format!("{}={} ({}..={})", p.key, p.default, p.min, p.max)).collect();
            emit!(out, "{:<16} {:<28} {}", e.name, ps.join(", "), e.law);
            emit!(out, "{:<16} {}", "", e.source);
        }
        return Ok(());
    };
    let p = params(param)?;
    let a = catalog::build(name, &p).map_err(|e| Failure::Input(e.to_string()))?;
    let label = catalog::label(name, &p).map_err(|e| Failure::Input(e.to_string()))?;
    out.push_str(&write_algebra(&a.with_name(label)));
    Ok(())
}

struct Row {
    label: String,
    d: usize,
    expected: Q,
    computed: Result<(Q, Q), String>,
}

impl Row {
    fn matches(&self) -> bool {
        matches!(&self.computed, Ok((lo, hi)) if *lo == self.expected && *hi == self.expected)
    }
}

/// Keeps reproduction rows whose entry name or full label is listed.
fn selected(filter: Option<&str>) -> Result<Vec<(&'static str, catalog::Params, String)>, Failure> {
    let rows: Vec<_> = reproduction_set()
        .into_iter()
        .map(|(n, p)| {
            let label = catalog::label(n, &p).expect("reproduction parameters are in range");
            (n, p, label)
        })
        .collect();
    let Some(filter) = filter else { return Ok(rows) };
    let wanted: Vec<&str> = filter.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for w in &wanted {
        if !rows.iter().any(|(n, _, l)| n == w || l == w) {
            return Err(Failure::Input(format!("`{w}` matches no reproduction entry")));
        }
    }
    Ok(rows.into_iter().filter(|(n, _, l)| wanted.iter().any(|w| n == w || l == w)).collect())
}

pub fn report(out: &mut String, filter: Option<&str>, config: &BoundsConfig, json: bool) -> Outcome {
    let mut rows = Vec::new();
    for (name, p, label) in selected(filter)? {
        let a = catalog::build(name, &p).expect("reproduction entries build");
        let expected = catalog::expected(name, &p).expect("reproduction entries have expectations");
        let computed = bound_report(&a, config)
            .map_err(|e| e.to_string())
            .and_then(|r| if r.witnesses_pass() { Ok(r) } else { Err("witness verification failed".into()) })
            .map(|r| (r.lower.h, r.upper.h));
        rows.push(Row { label, d: homogeneous_dimension(&a), expected: expected.h, computed });
    }
    let mismatches = rows.iter().filter(|r| !r.matches()).count();
    if json {
        let table: Vec<Value> = rows
            .iter()
            .map(|r| {
                let (lo, hi, err) = match &r.computed {
                    Ok((lo, hi)) => (Some(fmt_q(lo)), Some(fmt_q(hi)), None),
                    Err(e) => (None, None, Some(e.clone())),
                };
                json!({"name": r.label, "D": r.d, "expected_h": fmt_q(&r.expected),
                       "h_lower": lo, "h_upper": hi, "error": err, "match": r.matches()})
            })
            .collect();
        print_json(out, &Value::Array(table));
    } else {
        emit!(out, "{:<28} {:>4} {:>10} {:>10} {:>10}  match", "name", "D", "expected", "h_lower", "h_upper");
        for r in &rows {
            let (lo, hi) = match &r.computed {
                Ok((lo, hi)) => (fmt_q(lo), fmt_q(hi)),
                Err(_) => ("error".into(), "error".into()),
            };
            let mark = if r.matches() { "yes" } else { "NO" };
            emit!(out, "{:<28} {:>4} {:>10} {lo:>10} {hi:>10}  {mark}", r.label, r.d, fmt_q(&r.expected));
            if let Err(e) = &r.computed {
                emit!(out, "  {e}");
            }
        }
        emit!(out, "{} of {} rows match", rows.len() - mismatches, rows.len());
    }
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{mismatches} row(s) do not match")))
    }
}
