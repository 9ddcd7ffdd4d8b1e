use std::path::PathBuf;
use std::process::{Command, Output};

use forest_ted::driver::prepare_weights;
use forest_ted::forest::{parse_forest, Alphabet};
use forest_ted::klein::bounded_klein;
use forest_ted::weights::WeightTable;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ted-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn ted(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ted")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identical_files_print_zero() {
    let a = data("page1.for");
    let o = ted(&[a.as_os_str(), a.as_os_str()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn threshold_exceeded_prints_inf() {
    let a = scratch("far1.for", "(a(b)(c)(d)(e))");
    let b = scratch("far2.for", "(x(y(z(w))))");
    let o = ted(&[a.as_os_str(), b.as_os_str(), "-k".as_ref(), "3".as_ref()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "INF\n");
}

#[test]
fn weighted_golden() {
    let (a, b, w) = (data("page1.for"), data("page2.for"), data("html.tsv"));
    let o = ted(&[
        a.as_os_str(),
        b.as_os_str(),
        "--algo".as_ref(),
        "bounded".as_ref(),
        "-k".as_ref(),
        "5".as_ref(),
        "--weights".as_ref(),
        w.as_os_str(),
        "--emit-alignment".as_ref(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2.5\nins G@7\nins G@8\nsub F@12 G@14\nsub F@19 G@21\n");
    let stderr = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(stderr.contains("metric closure changed 1"));

    let mut al = Alphabet::new();
    let f = parse_forest(&std::fs::read_to_string(&a).unwrap(), &mut al).unwrap();
    let g = parse_forest(&std::fs::read_to_string(&b).unwrap(), &mut al).unwrap();
    let t = WeightTable::parse_tsv(&std::fs::read_to_string(&w).unwrap(), &mut al).unwrap();
    let p = prepare_weights(&t, &al).unwrap();
    assert_eq!(format!("{}\n", bounded_klein(&f, &g, &p.model, 5)), stdout(&o).lines().next().unwrap().to_owned() + "\n");
}

#[test]
fn every_algorithm_agrees() {
    let (a, b) = (data("page1.for"), data("page2.for"));
    for algo in ["oracle", "klein", "bounded", "optimized", "kernel", "auto"] {
        let o = ted(&[a.as_os_str(), b.as_os_str(), "--algo".as_ref(), algo.as_ref(), "-k".as_ref(), "4".as_ref()]);
        assert_eq!(stdout(&o), "2\n", "{algo}");
    }
    let o = ted(&[a.as_os_str(), b.as_os_str()]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn output_is_deterministic() {
    let (a, b) = (data("page1.for"), data("page2.for"));
    let args = [a.as_os_str(), b.as_os_str(), "--algo".as_ref(), "kernel".as_ref(), "-k".as_ref(), "3".as_ref(), "--debug-kernel".as_ref()];
    let x = ted(&args);
    let y = ted(&args);
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(x.stderr, y.stderr);
    assert!(String::from_utf8(x.stderr).unwrap().contains("kernel output"));
}

#[test]
fn input_errors_exit_2() {
    let a = data("page1.for");
    let bad = scratch("bad.for", "(a(b)");
    let badw = scratch("bad.tsv", "a\tb\n");
    let small = scratch("small.tsv", "a\tb\t1/2\n");
    let cases: Vec<(Vec<&std::ffi::OsStr>, &str)> = vec![
        (vec![a.as_os_str(), bad.as_os_str()], "parse error"),
        (vec![a.as_os_str(), a.as_os_str(), "--weights".as_ref(), badw.as_os_str()], "expected 3 fields"),
        (vec![a.as_os_str(), a.as_os_str(), "--weights".as_ref(), small.as_os_str()], "not normalized"),
        (vec![a.as_os_str(), a.as_os_str(), "--algo".as_ref(), "kernel".as_ref()], "requires -k"),
        (vec![a.as_os_str(), a.as_os_str(), "--emit-alignment".as_ref()], "only supported"),
        (vec![a.as_os_str(), a.as_os_str(), "--algo".as_ref(), "fast".as_ref()], "unknown algorithm"),
        (vec![a.as_os_str(), a.as_os_str(), "-k".as_ref(), "0".as_ref()], "at least 1"),
        (vec![a.as_os_str(), "missing.for".as_ref()], "cannot read"),
    ];
    for (args, msg) in cases {
        let o = ted(&args);
        assert_eq!(o.status.code(), Some(2), "{msg}");
        let e = String::from_utf8(o.stderr).unwrap();
        assert!(e.contains(msg), "{msg}: {e}");
    }
}
