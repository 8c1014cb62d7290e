mod common;

use common::{exponent_vectors, naive_invariant_dim, naive_sq, naive_weight_dim, weight, NaiveCohit, Pascal};
use peterson::f2poly::{Monomial, WeightVector};
use peterson::glinv::{invariant_dim, invariants_under, LinearSubstitution};
use peterson::hitsolver::{Part, Solver};
use peterson::steenrod::sq_monomial;

#[test]
fn squares_match_splitting_sum() {
    let pascal = Pascal::new(40);
    for n in 1..=3 {
        for d in 0..=16 {
            for a in exponent_vectors(n, d) {
                let m = Monomial::new(&a).unwrap();
                for k in 0..=16 {
                    let mut want: Vec<Vec<u32>> = naive_sq(&pascal, k, &a).into_iter().collect();
                    want.sort();
                    let mut got: Vec<Vec<u32>> = sq_monomial(k, &m).terms().iter().map(|t| t.exponents().to_vec()).collect();
                    got.sort();
                    assert_eq!(got, want, "Sq^{k} {m}");
                }
            }
        }
    }
}

#[test]
fn small_slices_match_full_span() {
    let solver = Solver::new();
    for (n, top) in [(1usize, 40u32), (2, 32), (3, 20)] {
        for d in 0..=top {
            let naive = NaiveCohit::new(n, d).dim() as u64;
            assert_eq!(solver.cohit_dim(n, d, Part::All).unwrap(), naive, "n={n} d={d}");
        }
    }
}

#[test]
fn weight_spaces_match_two_phase_recipe() {
    let solver = Solver::new();
    for (n, top) in [(2usize, 14u32), (3, 13), (4, 10)] {
        for d in 1..=top {
            let mut weights: Vec<Vec<u32>> = exponent_vectors(n, d).iter().map(|a| weight(a)).collect();
            weights.sort();
            weights.dedup();
            for w in weights {
                let omega = WeightVector::new(w.clone());
                let got = solver.weight_space_dim(n, &omega, Part::All).unwrap();
                assert_eq!(got, naive_weight_dim(n, &w), "n={n} omega={omega}");
            }
        }
    }
}

#[test]
fn invariants_match_full_group_fixed_space() {
    let solver = Solver::new();
    for n in 1..=3 {
        for d in 0..=12 {
            let want = naive_invariant_dim(n, d);
            assert_eq!(invariant_dim(&solver, n, d).unwrap(), want, "n={n} d={d}");
            let group = LinearSubstitution::all_elements(n).unwrap();
            assert_eq!(invariants_under(&solver, n, d, &group).unwrap().dim(), want, "n={n} d={d} full group");
        }
    }
}

#[test]
fn one_variable_spikes_have_one_invariant() {
    let solver = Solver::new();
    for t in 0..8 {
        assert_eq!(invariant_dim(&solver, 1, (1 << t) - 1).unwrap(), 1);
    }
}
