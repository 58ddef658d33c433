//! Summary of 100 synthetic run records drawn from a pinned stream, compared
//! byte-for-byte with a checked-in file. Set `DLB_UPDATE_GOLDEN=1` to rewrite it.

use std::fs;
use std::path::PathBuf;

use dlb_core::harness::{summarize, write_summary_json, RunRecord, Summary, TrajectoryPoint};
use dlb_core::rng::RngStream;

fn synthetic() -> (Vec<RunRecord>, Vec<TrajectoryPoint>) {
    let mut rng = RngStream::new(2024, 0);
    let mut records = Vec::new();
    let mut points = Vec::new();
    for run_id in 0..100u64 {
        let n = [20usize, 40, 60, 80][run_id as usize % 4];
        let m = (n / 2) as u64;
        let solved = rng.bernoulli(0.9);
        let scale = (n * n * n) as f64;
        let evals = (scale * (0.5 + rng.unit())).round() as u64;
        let correct = if solved { m } else { rng.index(m as usize) as u64 };
        records.push(RunRecord {
            run_id,
            algorithm: "umda".into(),
            fitness: "dlb".into(),
            n,
            mu: 10,
            lambda: 100,
            seed: 2024,
            evals_to_optimum: solved.then_some(evals),
            best_fitness: if solved { n as u64 } else { 2 * correct },
            correct_blocks: correct,
        });
        for k in 1..=4u64 {
            let blocks = (correct * k / 4).min(m);
            points.push(TrajectoryPoint {
                run_id,
                t: 1000 * k,
                correct_blocks: blocks,
                best_fitness: 2 * blocks,
                z: Some(blocks.saturating_sub(1) as usize),
                z_star: Some(blocks as usize),
            });
        }
    }
    (records, points)
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_summary.json")
}

#[test]
fn summary_matches_golden_file() {
    let (records, points) = synthetic();
    let summary = summarize(&records, &points).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.json");
    write_summary_json(&out, &summary).unwrap();
    let produced = fs::read_to_string(&out).unwrap();
    if std::env::var_os("DLB_UPDATE_GOLDEN").is_some() {
        fs::write(golden_path(), &produced).unwrap();
    }
    let golden = fs::read_to_string(golden_path()).expect("golden file present");
    assert_eq!(produced, golden);
    let reparsed: Summary = serde_json::from_str(&golden).unwrap();
    assert_eq!(reparsed, summary);
}

#[test]
fn golden_groups_agree_with_a_direct_recount() {
    let (records, points) = synthetic();
    let summary = summarize(&records, &points).unwrap();
    assert_eq!(summary.groups.len(), 4);
    for g in &summary.groups {
        let mut times: Vec<u64> = records
            .iter()
            .filter(|r| r.n == g.n)
            .filter_map(|r| r.evals_to_optimum)
            .collect();
        times.sort_unstable();
        assert_eq!(g.runs, 25);
        assert_eq!(g.successes, times.len());
        // type-7 median of an odd or even count, computed directly
        let k = times.len();
        let median = if k % 2 == 1 {
            times[k / 2] as f64
        } else {
            (times[k / 2 - 1] + times[k / 2]) as f64 / 2.0
        };
        let q = g.runtime.expect("some successes");
        assert!((q.median - median).abs() < 1e-9);
        let mean = times.iter().sum::<u64>() as f64 / k as f64;
        assert!((g.runtime_mean.unwrap().mean - mean).abs() < 1e-6);
    }
}
