mod common;

use common::props;

const CASES: u32 = 1000;

fn run(name: &str, f: fn(u32, u64) -> Result<(), String>) {
    if let Err(e) = f(CASES, props::seed()) {
        panic!("{name}: {e}");
    }
}

#[test]
fn cartan_consistency() {
    run("cartan", props::cartan);
}

#[test]
fn instability() {
    run("instability", props::instability);
}

#[test]
fn total_square_law() {
    run("total square", props::total_square);
}

#[test]
fn down_after_up_is_identity() {
    run("down after up", props::down_after_up);
}

#[test]
fn substitution_commutes_with_squares() {
    run("substitution", props::action_commutes);
}

#[test]
fn echelon_is_canonical_under_shuffles() {
    run("echelon", props::echelon_canonical);
}

#[test]
fn normal_form_is_idempotent() {
    run("normal form", props::normal_form_idempotent);
}
