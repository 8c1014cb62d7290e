use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use peterson::f2poly::Monomial;
use peterson::hitsolver::{Part, Solver};
use peterson::reductions::{plan, PlanHints};
use peterson_cli::cache::{canonical_text, digest, Cache, CacheKey};
use peterson_cli::report::{DimReport, InvariantReport, KamekoReport, PlanReport, SuiteReport, SuiteRow, WeightReport};

fn peterson(cache: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_peterson"))
        .args(args)
        .env("PETERSON_CACHE_DIR", cache)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn dimensions_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(peterson(dir.path(), &["dim", "--n", "5", "--d", "13"]), (0, "250\n".into(), String::new()));
    assert_eq!(peterson(dir.path(), &["dim", "--n", "1", "--d", "4"]).1, "0\n");
    let (code, _, err) = peterson(dir.path(), &["dim", "--n", "five", "--d", "4"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = peterson(dir.path(), &["dim", "--n", "3", "--d", "4", "--bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn direct_solve_over_budget_is_refused_with_a_route() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = peterson(dir.path(), &["dim", "--n", "5", "--d", "31", "--strategy", "direct", "--max-columns", "1000"]);
    assert_eq!(code, 2);
    assert!(err.contains("above the limit"), "{err}");
    assert!(err.contains("--strategy auto") || err.contains("--max-columns"), "{err}");
}

#[test]
fn kameko_split_line() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = peterson(dir.path(), &["kameko", "--verify-split", "--n", "5", "--d", "13"]);
    assert_eq!((code, out.as_str()), (0, "866 = 330 + 286 + 250 PASS\n"));
}

#[test]
fn json_dim_report_parses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = peterson(dir.path(), &["basis", "--n", "3", "--d", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let report: DimReport = serde_json::from_str(&out).unwrap();
    assert_eq!((report.n, report.d, report.part, report.dim), (3, 4, Part::All, 8));
    assert_eq!(report.basis.unwrap().len(), 8);
}

#[test]
fn basis_files_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert_eq!(peterson(dir.path(), &["basis", "--n", "4", "--d", "13"]).0, 0);
    }
    let key = CacheKey::new(4, 13, "all");
    let fa = std::fs::read(Cache::new(a.path()).path(&key)).unwrap();
    let fb = std::fs::read(Cache::new(b.path()).path(&key)).unwrap();
    assert_eq!(fa, fb);
    // a second run reads the cache and prints the same basis
    let first = peterson(a.path(), &["basis", "--n", "4", "--d", "13"]).1;
    let again = peterson(a.path(), &["basis", "--n", "4", "--d", "13", "--no-cache"]).1;
    assert_eq!(first, again);
}

#[test]
fn tampered_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let key = CacheKey::new(3, 4, "all");
    let basis: Vec<Monomial> = Solver::new().admissibles(3, 4).unwrap();
    let entry = cache.store(&key, &basis, 1).unwrap();
    assert_eq!(entry.digest, digest(&canonical_text(&basis)));
    assert_eq!(cache.load(&key).unwrap().unwrap().basis, basis);
    let path = cache.path(&key);
    let text = std::fs::read_to_string(&path).unwrap().replacen("(3,1,0)", "(1,3,0)", 1);
    std::fs::write(&path, text).unwrap();
    assert!(cache.load(&key).is_err());
    assert_eq!(peterson(dir.path(), &["basis", "--n", "3", "--d", "4"]).0, 2);
}

#[test]
fn one_writer_per_key() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(Cache::new(dir.path()));
    let calls = Arc::new(AtomicUsize::new(0));
    let key = CacheKey::new(4, 10, "all");
    let handles: Vec<_> = (0..6)
        .map(|_| {
            let (cache, calls, key) = (cache.clone(), calls.clone(), key.clone());
            std::thread::spawn(move || {
                cache
                    .get_or_compute(&key, || {
                        calls.fetch_add(1, Ordering::SeqCst);
                        std::thread::sleep(std::time::Duration::from_millis(100));
                        Ok(Solver::new().admissibles(4, 10).unwrap())
                    })
                    .unwrap()
                    .0
            })
        })
        .collect();
    let entries: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(calls.load(Ordering::SeqCst), 1);
    assert!(entries.windows(2).all(|w| w[0] == w[1]));
}

fn round_trip<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let text = serde_json::to_string(x).unwrap();
    assert_eq!(&serde_json::from_str::<T>(&text).unwrap(), x);
}

#[test]
fn reports_round_trip_through_json() {
    let solver = Solver::new();
    round_trip(&DimReport {
        n: 5,
        d: 13,
        part: Part::Plus,
        dim: 174,
        basis: Some(vec!["(1,2,3,4,3)".into()]),
        strategy: None,
        elapsed_ms: 3,
    });
    round_trip(&WeightReport { n: 5, omega: "(3,4,4,3,1)".into(), part: Part::Plus, dim: 1, basis: vec![], elapsed_ms: 0 });
    round_trip(&KamekoReport {
        n: 5,
        source_degree: 31,
        target_degree: 13,
        source_dim: 866,
        target_dim: 250,
        rank: 250,
        kernel_dim: 616,
        surjective: true,
        elapsed_ms: 9,
    });
    for (n, d) in [(1usize, 4u64), (5, 67), (5, 139), (6, 2299), (5, 13)] {
        let strategy = plan(n, d, &PlanHints::default());
        round_trip(&PlanReport { n, d, feasible: strategy.is_feasible(), steps: strategy.steps(), strategy });
    }
    round_trip(&InvariantReport { n: 2, d: 3, dim: 1, cohit_dim: 3, basis: vec!["(1,2) + (2,1)".into()], elapsed_ms: 0 });
    round_trip(&SuiteReport {
        suite: "published".into(),
        rows: vec![SuiteRow { name: "x".into(), expected: "1".into(), got: "1".into(), pass: true, elapsed_ms: 0 }],
        pass: true,
    });
    round_trip(&peterson::kameko::verify_split(&solver, 4, 7).unwrap());
    round_trip(&peterson::glinv::invariant_stability_report(&solver, 3, 2, 2).unwrap());
    round_trip(&solver.weight_space(4, &"2,1,1".parse().unwrap(), Part::All).unwrap());
}
