//! The action of the Steenrod squares on `F2[x_1, ..., x_n]` and the spanning
//! set `{ Sq^(2^i)(m) }` of the hit elements in a degree.

use crate::error::{HitError, Result};
use crate::f2poly::{for_each_monomial, Monomial, Polynomial};

/// `Sq^k(x^a) = C(a, k) x^(a+k)`; returns whether the binomial is odd, which by
/// Lucas' theorem happens exactly when the bits of `k` are among those of `a`.
#[inline]
pub fn sq_power(k: u32, a: u32) -> bool {
    k & !a == 0
}

/// Calls `f` with every term of `Sq^k(m)`. Distinct splittings of `k` yield
/// distinct exponent vectors, so the terms never cancel each other.
pub fn sq_monomial_each(k: u32, m: &Monomial, mut f: impl FnMut(&Monomial)) {
    let n = m.n();
    let exps = m.exponents();
    // quick reject: the largest reachable total is the sum of the exponents
    if k > m.degree() {
        return;
    }
    let mut out = *m;
    fn rec(
        j: usize,
        rest: u32,
        exps: &[u32],
        out: &mut Monomial,
        n: usize,
        f: &mut impl FnMut(&Monomial),
    ) {
        let a = exps[j];
        if j == n - 1 {
            if sq_power(rest, a) {
                out.exponents_mut()[j] = a + rest;
                f(out);
            }
            return;
        }
        // submasks of a, largest first
        let mut s = a;
        loop {
            if s <= rest {
                out.exponents_mut()[j] = a + s;
                rec(j + 1, rest - s, exps, out, n, f);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & a;
        }
        out.exponents_mut()[j] = a;
    }
    rec(0, k, exps, &mut out, n, &mut f);
}

/// `Sq^k(m)` for a monomial.
pub fn sq_monomial(k: u32, m: &Monomial) -> Polynomial {
    let mut terms = Vec::new();
    sq_monomial_each(k, m, |t| terms.push(*t));
    Polynomial::from_terms(m.n(), terms).expect("Sq^k is homogeneous")
}

/// `Sq^k(p)`, extended linearly.
pub fn sq(k: u32, p: &Polynomial) -> Polynomial {
    let mut terms = Vec::new();
    for m in p.terms() {
        sq_monomial_each(k, m, |t| terms.push(*t));
    }
    Polynomial::from_terms(p.n(), terms).expect("Sq^k is homogeneous")
}

/// One spanning row of the hit subspace: `Sq^(2^i)(source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitRow {
    pub source: Monomial,
    pub i: u32,
    pub value: Polynomial,
}

/// The rows `Sq^(2^i)(m)` with `2^i <= d` and `deg m = d - 2^i`, produced
/// lazily in blocks grouped by `i`.
#[derive(Clone, Debug)]
pub struct HitGeneratorSet {
    pub n: usize,
    pub d: u32,
}

impl HitGeneratorSet {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(HitError::InvalidArgument("no positive-degree operation lands in degree 0".into()));
        }
        if n == 0 || n > crate::f2poly::MAX_VARS {
            return Err(HitError::TooManyVariables { n, max: crate::f2poly::MAX_VARS });
        }
        Ok(HitGeneratorSet { n, d })
    }

    /// The exponents `i` that contribute, i.e. `2^i <= d`.
    pub fn steps(&self) -> impl Iterator<Item = u32> + '_ {
        (0..32).take_while(move |i| (1u64 << i) <= self.d as u64)
    }

    /// All rows of block `i`, skipping zero images.
    pub fn block(&self, i: u32) -> Vec<HitRow> {
        let k = 1u32 << i;
        let mut rows = Vec::new();
        for_each_monomial(self.n, self.d - k, |m| {
            let value = sq_monomial(k, m);
            if !value.is_zero() {
                rows.push(HitRow { source: *m, i, value });
            }
        });
        rows
    }

    pub fn rows(&self) -> impl Iterator<Item = HitRow> + '_ {
        self.steps().flat_map(move |i| self.block(i))
    }
}

/// Convenience wrapper for [`HitGeneratorSet::new`].
pub fn hit_generators(n: usize, d: u32) -> Result<HitGeneratorSet> {
    HitGeneratorSet::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn base_action() {
        assert_eq!(sq_monomial(1, &mono(&[1])), Polynomial::from(mono(&[2])));
        assert!(sq_monomial(2, &mono(&[1])).is_zero());
        assert_eq!(sq_monomial(0, &mono(&[1])), Polynomial::from(mono(&[1])));
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(sq_monomial(1, &mono(&[1, 1])), poly("(2,1)+(1,2)"));
        assert_eq!(sq_monomial(2, &mono(&[1, 1])), poly("(2,2)"));
        assert!(sq_monomial(3, &mono(&[1, 1])).is_zero());
    }

    #[test]
    fn lucas_rule() {
        assert!(sq_power(1, 1));
        assert!(!sq_power(1, 2));
        assert!(sq_power(2, 2));
        assert!(sq_power(0, 0));
        assert!(!sq_power(1, 0));
    }

    #[test]
    fn generator_blocks() {
        let g = hit_generators(1, 2).unwrap();
        let rows: Vec<_> = g.rows().collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].value, Polynomial::from(mono(&[2])));

        let g = hit_generators(2, 2).unwrap();
        let values: Vec<_> = g.rows().map(|r| r.value).collect();
        assert_eq!(values, vec![Polynomial::from(mono(&[2, 0])), Polynomial::from(mono(&[0, 2]))]);

        let g = hit_generators(5, 13).unwrap();
        assert_eq!(g.steps().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        for row in g.rows() {
            assert_eq!(row.source.degree() + (1 << row.i), 13);
            assert_eq!(row.value.degree(), Some(13));
        }
        assert!(hit_generators(3, 0).is_err());
    }
}
