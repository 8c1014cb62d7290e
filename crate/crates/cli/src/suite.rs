//! Published values checked end to end.

use std::collections::BTreeMap;
use std::time::Instant;

use peterson::arith::xi;
use peterson::glinv::invariants_threaded;
use peterson::hitsolver::{Part, Solver};
use peterson::kameko::{kernel_weight_vectors, verify_split};
use peterson::reductions::{execute, mkr_zero_part, plan, PlanHints};

use crate::report::{SuiteReport, SuiteRow};

type Check<'a> = Box<dyn Fn() -> peterson::Result<String> + 'a>;

fn family(n: u64, r: u32, m: u64) -> u64 {
    n * ((1 << r) - 1) + (1 << r) * m
}

pub fn published(solver: &Solver, hints: &PlanHints, threads: usize) -> SuiteReport {
    let dim = |n: usize, d: u32, part: Part| move || solver.cohit_dim(n, d, part).map(|x| x.to_string());
    let plus = |t: usize, d: u32| move || solver.plus_dim(t, d).map(|x| x.to_string());
    let planned = move |n: usize, d: u64| move || execute(&plan(n, d, hints), solver, Part::All).map(|o| o.dim.to_string());
    let checks: Vec<(&str, &str, Check)> = vec![
        ("dim (5,13)", "250", Box::new(dim(5, 13, Part::All))),
        ("dim (5,23)", "1245", Box::new(dim(5, 23, Part::All))),
        ("plus part (3,67)", "14", Box::new(plus(3, 67))),
        ("plus part (4,67)", "64", Box::new(plus(4, 67))),
        (
            "zero part (5,67)",
            "460",
            Box::new(|| {
                let mut dims = BTreeMap::new();
                for t in 1..5 {
                    dims.insert(t, solver.plus_dim(t, 67)?);
                }
                mkr_zero_part(5, 67, &dims).map(|x| x.to_string())
            }),
        ),
        (
            "kernel on the plus part (5,67)",
            "161",
            Box::new(|| {
                let mut total = 0;
                for w in kernel_weight_vectors(solver, 5, 31)? {
                    total += solver.weight_space_dim(5, &w, Part::Plus)?;
                }
                Ok(total.to_string())
            }),
        ),
        ("dim (5,31)", "866", Box::new(dim(5, 31, Part::All))),
        ("split at degree 67", "1487 = 460 + 161 + 866 PASS", Box::new(|| verify_split(solver, 5, 31).map(|r| r.to_string()))),
        ("dim (6,2299), r = 5, m = 67", "93681", Box::new(planned(6, family(5, 5, 67)))),
        ("dim (6,891), r = 5, m = 23", "78435", Box::new(planned(6, family(5, 5, 23)))),
        ("xi(5,67)", "0", Box::new(|| Ok(xi(5, 67).to_string()))),
        ("invariants (5,31)", "2", Box::new(move || invariants_threaded(solver, 5, 31, threads).map(|s| s.dim().to_string()))),
    ];
    let mut rows = Vec::new();
    for (name, expected, check) in checks {
        let start = Instant::now();
        let got = check().unwrap_or_else(|e| format!("error: {e}"));
        rows.push(SuiteRow {
            name: name.into(),
            expected: expected.into(),
            pass: got == expected,
            got,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    SuiteReport { suite: "published".into(), rows, pass }
}
