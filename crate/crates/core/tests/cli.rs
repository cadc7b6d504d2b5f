use std::path::PathBuf;
use std::process::Command;

use dirac_core::cli::{emit_report, parse_checkfile, run_source, CheckFile, Expect, Format, Line, Stmt, VExpr};
use dirac_core::symalg::{BigRational, Node};
use proptest::prelude::*;

const KEYWORDS: [&str; 9] = ["patch", "use", "let", "check", "expect", "as", "pass", "fail", "error"];

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,5}".prop_filter("keyword", |s| !KEYWORDS.contains(&s.as_str()))
}

fn node() -> impl Strategy<Value = Node> {
    let num = (0i64..50, 1i64..4).prop_map(|(n, d)| Node::Num(BigRational::new(n.into(), d.into())));
    let leaf = prop_oneof![num, ident().prop_map(Node::Sym)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |n: Node| Box::new(n);
        prop_oneof![
            inner.clone().prop_map(move |a| Node::Neg(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Node::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Node::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Node::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Node::Wedge(b(x), b(y))),
            (inner, 0u32..5).prop_map(move |(x, k)| Node::Pow(b(x), k)),
        ]
    })
}

fn vexpr() -> impl Strategy<Value = VExpr> {
    node().prop_map(VExpr::Lit).prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (ident(), prop::collection::vec(inner.clone(), 0..3)).prop_map(|(name, args)| VExpr::Call { name, args }),
            prop::collection::vec(inner, 0..3).prop_map(VExpr::List),
        ]
    })
}

fn stmt() -> impl Strategy<Value = Stmt> {
    let expect = prop_oneof![Just(Expect::Pass), Just(Expect::Fail), Just(Expect::Error)];
    prop_oneof![
        (ident(), prop::collection::vec(ident(), 1..4)).prop_map(|(name, coords)| Stmt::Patch { name, coords }),
        ident().prop_map(Stmt::Use),
        (ident(), vexpr()).prop_map(|(name, value)| Stmt::Let { name, value }),
        (
            ident(),
            prop::collection::vec(vexpr(), 1..4),
            expect,
            prop::option::of("[a-z0-9][a-z0-9/_.-]{0,8}")
        )
            .prop_map(|(kind, args, expect, label)| Stmt::Check { kind, args, expect, label }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn printed_checkfiles_parse_back(stmts in prop::collection::vec(stmt(), 0..8)) {
        let cf = CheckFile {
            lines: stmts.into_iter().enumerate().map(|(i, stmt)| Line { line: i + 1, stmt }).collect(),
        };
        let printed = cf.to_string();
        let again = parse_checkfile(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(again, cf, "{}", printed);
    }
}

/// Checks with known verdicts: (line, holds).
const POOL: [(&str, bool); 8] = [
    ("closed dx^dy", true),
    ("closed z*dx^dy", false),
    ("poisson Dx^Dy", true),
    ("poisson Dx^Dy - y*Dy^Dz", false),
    ("involutive Dx, Dy", true),
    ("involutive Dx, Dy + x*Dz", false),
    ("dirac graph_two_form(y*dy^dz)", true),
    ("lie_algebroid lie_algebra(3, [1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1])", true),
];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn tallies_and_exit_code(picks in prop::collection::vec((0usize..POOL.len(), any::<bool>()), 0..10)) {
        let mut src = String::from("patch M = (x, y, z)\n");
        let mut want_fail = 0;
        for &(i, flip) in &picks {
            let (line, holds) = POOL[i];
            let expect = if holds ^ flip { "pass" } else { "fail" };
            if flip {
                want_fail += 1;
            }
            src.push_str(&format!("check {line} expect {expect}\n"));
        }
        let r = run_source(&src).unwrap();
        prop_assert_eq!(r.checks.len(), picks.len());
        prop_assert_eq!(r.fail_count(), want_fail);
        prop_assert_eq!(r.pass_count() + r.fail_count(), picks.len());
        prop_assert_eq!(r.exit_code() == 0, want_fail == 0);
        let json: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Json, false)).unwrap();
        prop_assert_eq!(json["summary"]["pass"].as_u64(), Some(r.pass_count() as u64));
        prop_assert_eq!(json["summary"]["fail"].as_u64(), Some(want_fail as u64));
        let text = emit_report(&r, Format::Text, false);
        let tail = format!("{} passed, {} failed", r.pass_count(), want_fail);
        prop_assert!(text.trim_end().ends_with(&tail), "{}", text);
    }
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn verify(args: &[&std::ffi::OsStr]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let ok = write_tmp("ok.check", "patch M = (x, y, z)\ncheck closed dx^dy\ncheck closed z*dx^dy expect fail\n");
    let bad = write_tmp("bad.check", "patch M = (x, y, z)\ncheck closed z*dx^dy\n");
    let broken = write_tmp("broken.check", "patch M = (x, y\n");
    let unknown = write_tmp("unknown.check", "patch M = (x, y)\ncheck closed omega\n");
    let code = |args: &[&std::ffi::OsStr]| verify(args).status.code();
    assert_eq!(code(&[ok.as_os_str()]), Some(0));
    assert_eq!(code(&[bad.as_os_str()]), Some(1));
    assert_eq!(code(&[broken.as_os_str()]), Some(2));
    assert_eq!(code(&[unknown.as_os_str()]), Some(2));
    assert_eq!(code(&["/nonexistent/file.check".as_ref()]), Some(2));
    assert_eq!(code(&[]), Some(2));

    let out = verify(&[bad.as_os_str(), "--format".as_ref(), "json".as_ref()]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["checks"][0]["verdict"], "fail");
    assert!(json["checks"][0]["witness"].as_str().unwrap().contains("1"));
}

#[test]
fn output_is_deterministic() {
    let f = write_tmp(
        "det.check",
        "patch M = (x, y, z)\nlet w = z*dx^dy\ncheck closed w\ncheck dirac graph_two_form(w)\ncheck poisson Dx^Dy\n",
    );
    for format in ["text", "json"] {
        let a = verify(&[f.as_os_str(), "--format".as_ref(), format.as_ref()]);
        let b = verify(&[f.as_os_str(), "--format".as_ref(), format.as_ref()]);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}
