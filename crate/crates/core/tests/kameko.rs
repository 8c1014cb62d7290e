use peterson::hitsolver::{Part, Solver};
use peterson::kameko::{image_basis, kameko_matrix, kernel_weight_vectors, verify_split};

#[test]
fn split_identity_holds_on_small_slices() {
    let solver = Solver::new();
    for (n, d) in [(2usize, 0u32), (2, 1), (3, 4), (3, 7), (4, 7), (4, 10), (5, 13)] {
        let report = verify_split(&solver, n, d).unwrap();
        assert!(report.pass, "({n},{d}): {report}");
        assert_eq!(report.source_degree, 2 * d + n as u32);
    }
}

#[test]
fn degree_thirteen_split() {
    let solver = Solver::new();
    assert_eq!(verify_split(&solver, 5, 13).unwrap().to_string(), "866 = 330 + 286 + 250 PASS");
}

#[test]
fn map_is_onto_and_image_basis_lifts() {
    let solver = Solver::new();
    for (n, d) in [(3usize, 4u32), (4, 7), (5, 13)] {
        let slice = kameko_matrix(&solver, n, d).unwrap();
        assert!(slice.is_surjective());
        let lifted = image_basis(&solver, n, d).unwrap();
        assert_eq!(lifted.len(), solver.cohit_dim(n, d, Part::All).unwrap() as usize);
        for m in lifted {
            assert_eq!(m.degree(), slice.source_degree);
            assert!(m.is_plus());
        }
    }
}

#[test]
fn kernel_weights_at_degree_67_are_derived() {
    let solver = Solver::new();
    let got: Vec<String> = kernel_weight_vectors(&solver, 5, 31).unwrap().iter().map(|w| w.to_string()).collect();
    assert_eq!(got, ["(3,4,4,3,1)", "(3,4,2,2,2)", "(3,2,1,1,1,1)"]);
}
