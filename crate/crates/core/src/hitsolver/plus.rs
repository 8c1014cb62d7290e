//! Hit-subspace echelon of one plus-part slice `(P_n^+)_d`.
//!
//! Steenrod squares never change which variables occur in a monomial, so the
//! hit matrix of `(P_n)_d` is block diagonal over the supports, and every block
//! is a copy of a plus-part slice in fewer variables.

use crate::arith::is_trivial_degree;
use crate::f2poly::for_each_monomial;
use crate::hitsolver::bitrows::BitEchelon;
use crate::hitsolver::columns::{ColumnSet, Region};
use crate::steenrod::sq_monomial_each;

#[derive(Clone, Debug)]
pub struct PlusSlice {
    pub columns: ColumnSet,
    pub echelon: BitEchelon,
}

impl PlusSlice {
    pub fn compute(n: usize, d: u32) -> PlusSlice {
        let columns = ColumnSet::new(n, d, Region::Plus);
        let mut echelon = BitEchelon::new(columns.len());
        if !columns.is_empty() && !is_trivial_degree(n, d) {
            let mut scratch = echelon.scratch();
            let mut cols: Vec<u32> = Vec::new();
            let mut i = 0;
            while (1u32 << i) <= d {
                let k = 1u32 << i;
                if d - k >= n as u32 {
                    for_each_monomial(n, d - k - n as u32, |m| {
                        let mut src = *m;
                        src.exponents_mut().iter_mut().for_each(|a| *a += 1);
                        cols.clear();
                        sq_monomial_each(k, &src, |t| {
                            cols.push(columns.index_of(t).expect("plus part is closed under Sq"))
                        });
                        if !cols.is_empty() {
                            echelon.insert_columns(&cols, &mut scratch);
                        }
                    });
                }
                i += 1;
            }
        } else if is_trivial_degree(n, d) {
            // every monomial is hit; record the identity
            let mut scratch = echelon.scratch();
            for c in 0..columns.len() as u32 {
                echelon.insert_columns(&[c], &mut scratch);
            }
        }
        PlusSlice { columns, echelon }
    }

    pub fn dim(&self) -> usize {
        self.columns.len() - self.echelon.rank()
    }
}
