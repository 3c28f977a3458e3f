use std::process::{Command, Output};

use proptest::prelude::*;
use spatial_trees::{Aabb, SplitStrategy, TreeConfig};
use tree_bench::report::{to_csv, CSV_HEADER, NOT_RUN};
use tree_bench::{parse_csv, BenchRecord, Measurement, ScenarioSpec};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .output()
        .expect("bench binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn run_verified_cell() {
    let out = bench(&[
        "run",
        "--tree",
        "octree",
        "--depth",
        "10",
        "--capacity",
        "10",
        "--n",
        "1000",
        "--radius",
        "0.05",
        "--runs",
        "2",
        "--verify",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].n, 1000);
    assert!(rows[0].result.is_some());
}

#[test]
fn kdtree_defaults_to_median_split() {
    let out = bench(&[
        "run", "--tree", "kdtree", "--n", "200", "--radius", "0.1", "--runs", "1",
    ]);
    assert!(out.status.success());
    let rows = parse_csv(&stdout(&out)).unwrap();
    assert_eq!(rows[0].strategy, Some(SplitStrategy::Mmas));
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["run", "--tree", "octree", "--n", "100", "--radius=-1"][..],
        &[
            "run", "--tree", "rtree", "--degree", "1", "--n", "100", "--radius", "0.1",
        ],
        &["run", "--tree", "hextree", "--n", "100", "--radius", "0.1"],
        &["run", "--tree", "octree", "--n", "100"],
        &["grid", "--grid", "/nonexistent/grid.csv"],
    ] {
        let out = bench(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn pairs_file_matches_pair_count() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.csv");
    let out = bench(&[
        "run",
        "--tree",
        "rtree",
        "--degree",
        "5",
        "--n",
        "800",
        "--radius",
        "0.08",
        "--runs",
        "1",
        "--pairs",
        pairs.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let count = parse_csv(&stdout(&out)).unwrap()[0].result.unwrap().3;
    let written = std::fs::read_to_string(&pairs).unwrap();
    let mut lines = written.lines();
    assert_eq!(lines.next(), Some("a,b,dist"));
    assert_eq!(lines.count(), count);
}

#[test]
fn grid_file_to_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let report = dir.path().join("report.md");
    std::fs::write(
        &grid,
        "family,strategy,depth,capacity,degree,n,radius,runs\n\
         octree,,10,10,,500,0.05,1\n\
         kdtree,cs,10,10,,500,0.05,1\n\
         rtree,,,,25,500,0.05,1\n",
    )
    .unwrap();
    let out = bench(&[
        "grid",
        "--grid",
        grid.to_str().unwrap(),
        "--format",
        "markdown",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let md = std::fs::read_to_string(&report).unwrap();
    assert!(md.contains("| "));
    assert!(md.contains("R-tree(25)"));
    assert!(md.contains("k-d tree(10, 10) CS"));
}

#[test]
fn small_paper_grid_marks_blank_cells() {
    let out = bench(&["grid", "--paper", "--n", "20000", "--runs", "1"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = parse_csv(&stdout(&out)).unwrap();
    assert!(rows.iter().any(|r| r.result.is_none()));
    assert!(rows.iter().any(|r| r.result.is_some()));
    assert!(stdout(&out).contains(NOT_RUN));
}

#[test]
fn verify_suite_small() {
    let out = bench(&["verify-suite", "--audit-n", "500"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn any_tree() -> impl Strategy<Value = TreeConfig> {
    prop_oneof![
        (1u32..2000, 1usize..2000).prop_map(|(d, c)| TreeConfig::octree(d, c)),
        (0usize..4, 1u32..2000, 1usize..2000).prop_map(|(s, d, c)| TreeConfig::kdtree(
            SplitStrategy::ALL[s],
            d,
            c
        )),
        (2usize..500).prop_map(TreeConfig::rtree),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip(
        tree in any_tree(),
        n in 1usize..10_000_000,
        radius in 0.0f64..1.0,
        runs in 1usize..20,
        seed in any::<u64>(),
        times in prop::option::of((0.0f64..1e6, 0.0f64..1e6, 0usize..1_000_000)),
    ) {
        let spec = ScenarioSpec::new(tree.with_domain(Aabb::unit()), n, radius).runs(runs).seed(seed);
        let record = match times {
            None => BenchRecord::not_run(spec),
            Some((insert_ms, search_ms, pair_count)) => BenchRecord {
                spec,
                measurement: Some(Measurement {
                    insert_ms,
                    search_ms,
                    pair_count,
                    raw_insert_ms: vec![insert_ms],
                    raw_search_ms: vec![search_ms],
                    raw_pair_counts: vec![pair_count],
                }),
            },
        };
        let text = to_csv(std::slice::from_ref(&record)).unwrap();
        let rows = parse_csv(&text).unwrap();
        prop_assert_eq!(rows.len(), 1);
        let row = &rows[0];
        prop_assert_eq!(row.family, tree.family);
        prop_assert_eq!(row.n, n);
        prop_assert_eq!(row.radius, radius);
        prop_assert_eq!(row.runs, runs);
        prop_assert_eq!(row.seed, seed);
        match (times, row.result) {
            (None, None) => {}
            (Some((i, s, c)), Some((ri, rs, rt, rc))) => {
                prop_assert_eq!(ri, i);
                prop_assert_eq!(rs, s);
                prop_assert_eq!(rt, i + s);
                prop_assert_eq!(rc, c);
            }
            other => prop_assert!(false, "result mismatch {:?}", other),
        }
    }
}
