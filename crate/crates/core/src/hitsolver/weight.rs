//! Weight-restricted cohit spaces `QP_n(w)`.
//!
//! The monomial order compares weight vectors first, so the hit space
//! intersected with the span of monomials of weight at most `w`, taken modulo
//! those of weight strictly below `w`, has as basis exactly the admissible
//! monomials of weight `w`.

use serde::{Deserialize, Serialize};

use crate::error::{HitError, Result};
use crate::f2poly::{Monomial, WeightVector};
use crate::hitsolver::cohit::{for_each_subset, Part, Solver};

/// `QP_n(w)` or its plus part, with its admissible basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpace {
    pub n: usize,
    pub omega: WeightVector,
    pub part: Part,
    pub basis: Vec<Monomial>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl Solver {
    /// The admissible monomials of weight `omega` in the requested part.
    pub fn weight_space(&self, n: usize, omega: &WeightVector, part: Part) -> Result<WeightSpace> {
        let d = u32::try_from(omega.degree())
            .map_err(|_| HitError::InvalidArgument(format!("weight vector {omega} has too large a degree")))?;
        if omega.entries().iter().any(|&e| e as usize > n) {
            return Ok(WeightSpace { n, omega: omega.clone(), part, basis: Vec::new() });
        }
        let c = omega.first() as usize;
        let slots = omega.slots();
        let mut basis = Vec::new();
        let (lo, hi) = match part {
            Part::Plus => (n, n),
            Part::Zero => (1, n - 1),
            Part::All => (1, n),
        };
        for t in lo.max(c).max(1)..=hi {
            let level = self.plus_level(t, d, c)?;
            let matching: Vec<Monomial> = level.iter().filter(|m| m.order_key().weight_slots() == &slots).copied().collect();
            if matching.is_empty() {
                continue;
            }
            if t == n {
                basis.extend(matching);
            } else {
                for_each_subset(n, t, |positions| {
                    basis.extend(matching.iter().map(|m| m.embed(positions, n).expect("valid positions")));
                });
            }
        }
        if d == 0 && part != Part::Plus {
            basis.push(Monomial::one(n));
        }
        basis.sort_unstable_by_key(|m| std::cmp::Reverse(m.order_key()));
        Ok(WeightSpace { n, omega: omega.clone(), part, basis })
    }

    /// `dim QP_n(w)` (or of its plus or zero part).
    pub fn weight_space_dim(&self, n: usize, omega: &WeightVector, part: Part) -> Result<usize> {
        Ok(self.weight_space(n, omega, part)?.dim())
    }
}
