use peterson::arith::{alpha, is_spike, is_trivial_degree, minimal_spike, mu, xi, zeta};
use peterson::f2poly::{Monomial, WeightVector};
use peterson::HitError;

#[test]
fn digit_sums_and_valuations() {
    assert_eq!(alpha(0), 0);
    assert_eq!(alpha(72), 2);
    assert_eq!(alpha(67), 3);
    assert_eq!(zeta(72).unwrap(), 3);
    assert_eq!(zeta(1).unwrap(), 0);
    assert!(matches!(zeta(0), Err(HitError::InvalidArgument(_))));
}

#[test]
fn mu_and_xi_examples() {
    assert_eq!(mu(0), 0);
    assert_eq!(mu(1), 1);
    assert_eq!(mu(2), 2);
    assert_eq!(mu(13), 3);
    assert_eq!(mu(31), 1);
    assert_eq!(mu(67), 3);
    assert_eq!(xi(5, 67), 0);
    assert_eq!(xi(5, 13), 2);
    assert_eq!(xi(3, 2), 1);
    assert!(is_trivial_degree(1, 4));
    assert!(!is_trivial_degree(5, 13));
}

fn brute_mu(limit: usize) -> Vec<u32> {
    let parts: Vec<usize> = (1..20).map(|t| (1usize << t) - 1).filter(|&p| p <= limit).collect();
    let mut best = vec![u32::MAX; limit + 1];
    best[0] = 0;
    for d in 1..=limit {
        for &p in &parts {
            if p <= d && best[d - p] != u32::MAX {
                best[d] = best[d].min(best[d - p] + 1);
            }
        }
    }
    best
}

#[test]
fn mu_matches_least_spike_parts() {
    let best = brute_mu(10_000);
    for (d, &b) in best.iter().enumerate() {
        assert_eq!(mu(d as u64), b, "d = {d}");
    }
}

/// All spikes of degree `d` with at most `n` nonzero exponents, exponents
/// non-increasing.
fn spikes(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for t in (1..=10).rev() {
            let p = (1u32 << t) - 1;
            if p > max_part || p > left {
                continue;
            }
            cur.push(p);
            rec(left - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, u32::MAX, n, &mut Vec::new(), &mut out);
    out
}

#[test]
fn minimal_spike_has_least_weight() {
    for d in 0..=200u32 {
        let u = mu(u64::from(d)) as usize;
        for n in u.max(1)..=(u + 2).min(8) {
            let got = minimal_spike(n, d).unwrap();
            assert!(is_spike(&got));
            assert_eq!(got.degree(), d);
            let least = spikes(n, d)
                .into_iter()
                .map(|mut e| {
                    e.resize(n, 0);
                    Monomial::new(&e).unwrap().weight_vector()
                })
                .min()
                .unwrap();
            assert_eq!(got.weight_vector(), least, "n = {n}, d = {d}");
        }
        if u > 1 {
            assert!(minimal_spike(u - 1, d).is_err());
        }
    }
    assert_eq!(minimal_spike(5, 67).unwrap().weight_vector(), WeightVector::new(vec![3, 2, 1, 1, 1, 1]));
}
