use std::fs;
use std::process::{Command, Output};

use real_chrom::table::{self, Format};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_real-chrom"))
        .args(args)
        .env_remove("REAL_CHROM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn group_queries() {
    let cases = [
        (&["group", "--theory", "bprn", "--n", "1", "--k", "1", "--l", "0"][..], "Z/2 {v1 a}\n"),
        (&["group", "--theory", "tate", "--n", "0", "--k", "0", "--l", "0"][..], "Z/2 {1}\n"),
        (&["group", "--theory", "bpr", "--k", "5", "--l", "-3"][..], "Z(2) {v1 s^-4}\n"),
    ];
    for (args, want) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), want);
    }
}

#[test]
fn twisted_fixed_point_labels() {
    let o = run(&["group", "--theory", "bprn", "--n", "1", "--k", "1", "--l", "0", "--twisted-fixed-points"]);
    assert_eq!(stdout(&o), "dim 1 of twist 0: Z/2 {v1 a}\n");
}

#[test]
fn argument_errors_exit_2_with_usage() {
    for args in [
        &["group", "--theory", "bprn", "--k", "1", "--l", "0"][..],
        &["group", "--theory", "nope", "--k", "1", "--l", "0"][..],
        &["table", "--theory", "tate", "--n", "1", "--window", "0"][..],
        &["verify", "--suite", "nope"][..],
        &["normal-form", "--theory", "bprn", "--n", "1", "--monomial", "v1 a^-1"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("Usage"), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn ko_table() {
    let o = run(&["table", "--theory", "bprn", "--n", "1", "--l", "0", "--kmin", "0", "--kmax", "16", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = table::parse(&text, Format::Csv).unwrap();
    assert_eq!(rows.len(), 17);
    let types: Vec<(usize, usize)> = rows.iter().map(|r| (r.free_rank, r.z2_count)).collect();
    let pattern = [(1, 0), (0, 1), (0, 1), (0, 0), (1, 0), (0, 0), (0, 0), (0, 0)];
    for (k, t) in types.iter().enumerate() {
        assert_eq!(*t, pattern[k % 8], "k={k}");
    }
}

#[test]
fn tate_table_support_and_determinism() {
    let args = ["table", "--theory", "tate", "--n", "2", "--window", "16", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let rows = table::parse(&stdout(&a), Format::Json).unwrap();
    assert_eq!(rows.len(), 33 * 33);
    for r in rows {
        assert_eq!(r.z2_count > 0, r.k % 8 == 0);
    }
}

#[test]
fn empty_window_is_header_only() {
    let o = run(&["table", "--theory", "bpr", "--l", "0", "--kmin", "1", "--kmax", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("{}\n", table::CSV_HEADER));
}

#[test]
fn table_to_file_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(&["table", "--theory", "borelcoh", "--n", "1", "--window", "6", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let rows = table::parse(&fs::read_to_string(&path).unwrap(), Format::Csv).unwrap();
    assert_eq!(rows.len(), 13 * 13);

    let bad = dir.path().join("missing").join("t.csv");
    let o = run(&["table", "--theory", "tate", "--n", "1", "--output", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("missing"));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "tate-closed-form", "--n", "1", "--window", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["verify", "--suite", "ko"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count(), 17);

    let o = run(&["verify", "--suite", "gap", "--n", "0", "--window", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("(-2, 2)")));

    let o = run(&["verify", "--suite", "corollary-diff", "--n", "1", "--window", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("l=-8: 2 extras, theorem at [4, 8], corollary at [-8, -4]"));
}

#[test]
fn ss_dump_and_compare() {
    let o = run(&["ss", "--theory", "tate", "--n", "1", "--window", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("page,k,l,filtration,order,monomial\n"));
    assert!(text.contains(",4,-4,0,two,s^-4\n"));

    let o = run(&["ss", "--theory", "borelcoh", "--n", "0", "--window", "4", "--compare", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-2,2,agree,\"s^2@0:free\""));

    let o = run(&["ss", "--theory", "bpr", "--window", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.contains("  a") || l.contains("  1")));
}

#[test]
fn normal_forms() {
    let o = run(&["normal-form", "--theory", "bprn", "--n", "1", "--monomial", "v0^2 v1^2 s^-2"]);
    assert_eq!(stdout(&o), "2 * v0 v1^2 s^-2\n");
    let o = run(&["normal-form", "--theory", "borelcoh", "--n", "0", "--monomial", "v0 s^2"]);
    assert_eq!(stdout(&o), "2 * s^2\n");
}

#[test]
fn cache_hits_and_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["verify", "--suite", "les", "--n", "1", "--window", "12", "--cache-dir", cache.to_str().unwrap()];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let entries: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);

    let second = run(&args);
    assert_eq!(second.stdout, first.stdout);
    assert!(second.stderr.is_empty());

    fs::write(&entries[0], b"garbage").unwrap();
    let third = run(&args);
    assert_eq!(third.stdout, first.stdout);
    assert!(stderr(&third).contains("corrupt"));
    let fourth = run(&args);
    assert!(fourth.stderr.is_empty());

    fs::remove_dir_all(&cache).unwrap();
    let fifth = run(&args);
    assert_eq!((fifth.stdout, fifth.status.code()), (first.stdout.clone(), Some(0)));

    // The environment variable is honored too.
    let env_dir = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_real-chrom"))
        .args(["verify", "--suite", "ko"])
        .env("REAL_CHROM_CACHE", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(&env_dir).unwrap().count(), 1);
}
