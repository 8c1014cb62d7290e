//! Randomized properties, each runnable with an explicit case count and seed.

use std::sync::OnceLock;

use peterson::f2poly::{Monomial, Polynomial};
use peterson::glinv::LinearSubstitution;
use peterson::hitsolver::{echelonize, Solver};
use peterson::steenrod::{sq, sq_monomial};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Seed from `PETERSON_TEST_SEED`, else a fixed default.
pub fn seed() -> u64 {
    std::env::var("PETERSON_TEST_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn runner(cases: u32, seed: u64) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn monomial(n: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    vec(0..=max_exp, n).prop_map(|e| Monomial::new(&e).unwrap())
}

fn arity_and_pair(max_n: usize, max_exp: u32) -> impl Strategy<Value = (Monomial, Monomial)> {
    (1..=max_n).prop_flat_map(move |n| (monomial(n, max_exp), monomial(n, max_exp)))
}

fn homogeneous(n: usize, d: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    vec(vec(0..=d, n - 1), 0..=terms).prop_map(move |cuts| {
        let monos = cuts.into_iter().map(|mut c| {
            c.sort_unstable();
            let mut e = Vec::with_capacity(n);
            let mut prev = 0;
            for x in c {
                e.push(x - prev);
                prev = x;
            }
            e.push(d - prev);
            Monomial::new(&e).unwrap()
        });
        Polynomial::from_terms(n, monos).unwrap()
    })
}

fn substitution(n: usize) -> impl Strategy<Value = LinearSubstitution> {
    vec(1u32..(1 << n), n).prop_filter_map("singular", |cols| LinearSubstitution::from_columns(cols).ok())
}

fn check(runner_result: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    runner_result.map_err(|e| e.to_string())
}

pub fn cartan(cases: u32, seed: u64) -> Result<(), String> {
    let strat = arity_and_pair(4, 12).prop_flat_map(|(u, v)| {
        let top = u.degree() + v.degree() + 1;
        (Just(u), Just(v), 0..=top)
    });
    check(runner(cases, seed).run(&strat, |(u, v, k)| {
        let lhs = sq_monomial(k, &u.mul(&v).unwrap());
        let mut rhs = Polynomial::zero(u.n());
        for i in 0..=k {
            rhs = rhs.add(&sq_monomial(i, &u).mul(&sq_monomial(k - i, &v)).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

pub fn instability(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (1..=5usize).prop_flat_map(|n| (monomial(n, 64 / n as u32), 1u32..=40));
    check(runner(cases, seed).run(&strat, |(m, extra)| {
        prop_assert!(sq_monomial(m.degree() + extra, &m).is_zero());
        Ok(())
    }))
}

pub fn total_square(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (1..=5usize).prop_flat_map(|n| monomial(n, 64 / n as u32));
    check(runner(cases, seed).run(&strat, |m| {
        prop_assert_eq!(sq_monomial(m.degree(), &m), Polynomial::from(m.square()));
        Ok(())
    }))
}

pub fn down_after_up(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (1..=8usize).prop_flat_map(|n| monomial(n, 1000));
    check(runner(cases, seed).run(&strat, |m| {
        prop_assert_eq!(m.phi_up().s_down(), Some(m));
        Ok(())
    }))
}

pub fn action_commutes(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (2..=4usize).prop_flat_map(|n| (substitution(n), 1..=9u32).prop_flat_map(move |(g, d)| {
        (Just(g), homogeneous(n, d, 4), 0..=d + 1)
    }));
    check(runner(cases, seed).run(&strat, |(g, p, k)| {
        let lhs = g.substitute(&sq(k, &p)).unwrap();
        let rhs = sq(k, &g.substitute(&p).unwrap());
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

pub fn echelon_canonical(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (2..=4usize, 2..=9u32)
        .prop_flat_map(|(n, d)| (Just(n), Just(d), vec(homogeneous(n, d, 5), 1..12)))
        .prop_flat_map(|(n, d, rows)| (Just(n), Just(d), Just(rows.clone()), Just(rows).prop_shuffle()));
    check(runner(cases, seed).run(&strat, |(n, d, rows, shuffled)| {
        let a = echelonize(n, d, rows).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let b = echelonize(n, d, shuffled).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(a.rows(), b.rows());
        Ok(())
    }))
}

fn shared_solver() -> &'static Solver {
    static SOLVER: OnceLock<Solver> = OnceLock::new();
    SOLVER.get_or_init(Solver::new)
}

pub fn normal_form_idempotent(cases: u32, seed: u64) -> Result<(), String> {
    let strat = (1..=4usize, 0..=20u32).prop_flat_map(|(n, d)| homogeneous(n, d, 8));
    check(runner(cases, seed).run(&strat, |p| {
        let d = p.degree().unwrap_or(0);
        let basis = shared_solver().admissible_basis(p.n(), d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let once = basis.normal_form(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let twice = basis.normal_form(&once).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&once, &twice);
        for m in once.terms() {
            prop_assert!(basis.is_admissible(m));
        }
        Ok(())
    }))
}

pub type Property = fn(u32, u64) -> Result<(), String>;

/// Every property with its name.
pub const ALL: [(&str, Property); 7] = [
    ("Cartan consistency", cartan),
    ("instability", instability),
    ("total-square law", total_square),
    ("down after up is the identity", down_after_up),
    ("substitution commutes with squares", action_commutes),
    ("echelon canonicity under row shuffles", echelon_canonical),
    ("normal-form idempotence", normal_form_idempotent),
];
