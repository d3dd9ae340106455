use std::io::Write;
use std::process::{Command, Output};

use nilsys_core::algebra::nilpotency_class;
use nilsys_core::bounds::verify_lattice;
use nilsys_core::catalog::{self, Params};
use nilsys_core::rational::{fmt_q, pow_q, q};
use nilsys_core::report::ReportJson;
use nilsys_core::Q;
use serde_json::Value;
use tempfile::NamedTempFile;

fn nilsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsys")).args(args).env_remove("NILSYS_MAX_ENUM").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn matrix(rows: &[Vec<Q>]) -> String {
    rows.iter().map(|r| r.iter().map(fmt_q).collect::<Vec<_>>().join(" ") + "\n").collect()
}

fn diagonal(entries: &[i64]) -> Vec<Vec<Q>> {
    let n = entries.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { q(entries[i]) } else { q(0) }).collect()).collect()
}

#[test]
fn info_on_l55() {
    let o = nilsys(&["info", "--catalog", "l55"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("c=3") && s.contains("D=8"), "{s}");
    assert!(s.contains("series 123/4/5"), "{s}");
    assert!(s.contains("[f2,f3] -> 1 f5  m=1"), "{s}");
}

#[test]
fn info_rejects_jacobi_violation() {
    let bad = file("# not a Lie algebra\ndim 3\nbracket 1 2 = 1*3\nbracket 1 3 = 1*1\n");
    let o = nilsys(&["info", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Jacobi identity fails"), "{}", stderr(&o));
}

#[test]
fn syntax_errors_report_line_numbers() {
    let bad = file("dim 3\n\nbracket 1 2 = 1*x\n");
    let o = nilsys(&["info", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn witt_six_has_homogeneous_dimension_sixteen() {
    let o = nilsys(&["info", "--catalog", "witt", "--param", "n=6"]);
    assert!(o.status.success());
    // n(n-1)/2 + 1 for the truncated Witt algebra.
    assert!(stdout(&o).contains("D=16"), "{}", stdout(&o));
    let json: Value =
        serde_json::from_str(&stdout(&nilsys(&["info", "--catalog", "witt", "--param", "n=6", "--json"]))).unwrap();
    assert_eq!(json["D"], 16);
    assert_eq!(json["series_dims"], serde_json::json!([6, 4, 3, 2, 1, 0]));
}

#[test]
fn bounds_match_known_exponents() {
    for (args, h) in [
        (vec!["--catalog", "filiform7"], "3/2"),
        (vec!["--catalog", "heisenberg", "--param", "n=1"], "0"),
        (vec!["--catalog", "central_product", "--param", "k=4,n=3"], "3"),
    ] {
        let o = nilsys(&[&["bounds"], args.as_slice()].concat());
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let s = stdout(&o);
        assert!(s.contains(&format!("h_lower = {h} ")), "{s}");
        assert!(s.contains(&format!("h_upper = {h} ")), "{s}");
        assert!(s.contains("dual certificate verified"));
        assert!(!s.contains("FAIL"));
    }
}

#[test]
fn bounds_json_round_trips() {
    for name in ["l55", "filiform7", "witt"] {
        let o = nilsys(&["bounds", "--catalog", name, "--json"]);
        assert!(o.status.success());
        let text = stdout(&o);
        let text = text.strip_suffix('\n').unwrap();
        let parsed = ReportJson::parse(text).unwrap();
        assert_eq!(parsed.render(), text, "{name}");
        assert!(parsed.lattice_witness.iter().all(|w| w.verified));
    }
}

#[test]
fn lcs_only_flag_keeps_the_upper_bound() {
    let o = nilsys(&["bounds", "--catalog", "l56", "--flag", "lcs-only", "--r-samples", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("h_upper = 1 "));
}

#[test]
fn verify_rescaled_lattice_in_l55() {
    // Xi = span(e1, r e2, e3, e4, e5) at r = 16.
    let lattice = file(&matrix(&diagonal(&[1, 16, 1, 1, 1])));
    let o = nilsys(&["verify", "--catalog", "l55", "--lattice", path(&lattice), "--r", "16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("subring of g[16]: yes"), "{s}");
    assert!(s.contains("systole 16, covolume 68719476736 = 16^9"), "{s}");
}

#[test]
fn verify_reports_closure_failure() {
    let lattice = file(&matrix(&diagonal(&[1, 1, 1, 1, 1])));
    let o = nilsys(&["verify", "--catalog", "l55", "--lattice", path(&lattice), "--r", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("ClosureFailure: [b2,b3] = (0, 0, 0, 0, 1/9)"), "{s}");
    assert!(s.contains("b2 = (0, 1, 0, 0, 0), b3 = (0, 0, 1, 0, 0)"), "{s}");
}

/// The CLI record equals a direct library call on the same lattice.
#[test]
fn verify_matches_library_on_sublattices() {
    let mut outcomes = [0, 0];
    for (name, r) in [("l55", 4), ("l56", 3), ("witt", 2), ("filiform7", 4)] {
        let a = catalog::build(name, &Params::new()).unwrap();
        let d = a.dim();
        for seed in 0..4i64 {
            let rows: Vec<Vec<Q>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| match (i as i64 - j as i64, (seed + 3 * i as i64 + 5 * j as i64) % 4) {
                            (0, s) => q(s + 1),
                            (d, s) if d > 0 => q(s - 1),
                            _ => q(0),
                        })
                        .collect()
                })
                .collect();
            // Bracket denominators divide r^c det(Xi), so this multiple is always closed.
            let det: Q = (0..d).map(|i| rows[i][i].clone()).product();
            let s = pow_q(&q(r), nilpotency_class(&a) as u32) * det;
            let scaled: Vec<Vec<Q>> = rows.iter().map(|row| row.iter().map(|x| x * &s).collect()).collect();
            for rows in [rows, scaled] {
                let lattice = file(&matrix(&rows));
                let o = nilsys(&[
                    "verify",
                    "--catalog",
                    name,
                    "--lattice",
                    path(&lattice),
                    "--r",
                    &r.to_string(),
                    "--json",
                ]);
                let lib = verify_lattice(&a, &rows, &q(r), None).unwrap();
                outcomes[usize::from(lib.closure.is_subring())] += 1;
                assert_eq!(o.status.code(), Some(if lib.closure.is_subring() { 0 } else { 1 }));
                let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
                assert_eq!(v["subring"], lib.closure.is_subring());
                assert_eq!(v["systole"], lib.systole.to_string());
                assert_eq!(v["covolume"], fmt_q(&lib.covolume));
                assert_eq!(v["dilated_systole"], lib.dilated_systole.to_string());
                assert_eq!(v["dilated_covolume"], fmt_q(&lib.dilated_covolume));
            }
        }
    }
    assert_eq!(outcomes[1], 16);
    assert!(outcomes[0] > 0);
}

#[test]
fn verify_rejects_malformed_lattices() {
    let short = file("1 0 0 0 0\n0 1 0 0\n");
    let o = nilsys(&["verify", "--catalog", "l55", "--lattice", path(&short), "--r", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let singular = file(&matrix(&diagonal(&[1, 1, 0, 1, 1])));
    let o = nilsys(&["verify", "--catalog", "l55", "--lattice", path(&singular), "--r", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let fine = file(&matrix(&diagonal(&[1, 1, 1, 1, 1])));
    let o = nilsys(&["verify", "--catalog", "l55", "--lattice", path(&fine), "--r", "-2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn full_report_matches() {
    let o = nilsys(&["report"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("23 of 23 rows match"), "{s}");
    assert!(!s.contains(" NO"));
}

#[test]
fn report_without_pairing_constraints_mismatches() {
    let o = nilsys(&["report", "--disable-constraints", "D", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    for row in rows {
        let name = row["name"].as_str().unwrap();
        let central = name.starts_with("central_product");
        assert_eq!(row["match"], !central, "{name}");
        if central {
            assert_eq!(row["h_lower"], "0");
        }
    }
}

#[test]
fn report_filters() {
    let o = nilsys(&["report", "--filter", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 of 0 rows match"));
    let o = nilsys(&["report", "--filter", "l55,witt(n=6)", "--json"]);
    assert!(o.status.success());
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(nilsys(&["report", "--filter", "abelian"]).status.code(), Some(2));
}

#[test]
fn catalog_text_round_trips_through_info() {
    let list = stdout(&nilsys(&["catalog"]));
    for e in catalog::entries() {
        assert!(list.contains(e.name));
    }
    let text = stdout(&nilsys(&["catalog", "central_product", "--param", "k=5,n=2"]));
    let f = file(&text);
    let from_file = stdout(&nilsys(&["info", path(&f)]));
    let from_catalog = stdout(&nilsys(&["info", "--catalog", "central_product", "--param", "k=5,n=2"]));
    assert_eq!(from_file, from_catalog);
}

#[test]
fn input_errors_exit_two() {
    let l55 = file(&stdout(&nilsys(&["catalog", "l55"])));
    for args in [
        vec!["info"],
        vec!["info", path(&l55), "--catalog", "l55"],
        vec!["info", "--catalog", "nope"],
        vec!["info", "--catalog", "witt", "--param", "n=2"],
        vec!["info", "--catalog", "witt", "--param", "n"],
        vec!["info", "/nonexistent/file.alg"],
        vec!["bounds", "--catalog", "l55", "--flag", "sideways"],
        vec!["bounds", "--catalog", "l55", "--disable-constraints", "E"],
        vec!["bounds", "--catalog", "l55", "--r-samples", "1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(nilsys(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumeration_cap_comes_from_the_environment() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_nilsys"))
            .args(["bounds", "--catalog", "witt", "--param", "n=8"])
            .env("NILSYS_MAX_ENUM", value)
            .output()
            .unwrap()
    };
    assert_eq!(run("lots").status.code(), Some(2));
    let capped = run("1");
    assert_eq!(capped.status.code(), Some(1));
    assert!(stderr(&capped).contains("exceeded 1 nodes"), "{}", stderr(&capped));
    assert!(run("100000000").status.success());
}
