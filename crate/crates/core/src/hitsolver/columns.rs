use std::collections::HashMap;

use crate::f2poly::{for_each_monomial, Monomial, OrderKey};

/// Which monomials of a degree slice take part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// Every monomial of the degree.
    All,
    /// Monomials in which every variable occurs.
    Plus,
}

/// The monomials of a slice, sorted descending under the monomial order, so
/// that column 0 is the largest monomial.
#[derive(Clone, Debug)]
pub struct ColumnSet {
    n: usize,
    d: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl ColumnSet {
    pub fn new(n: usize, d: u32, region: Region) -> Self {
        let mut keyed: Vec<(OrderKey, Monomial)> = Vec::new();
        match region {
            Region::All => for_each_monomial(n, d, |m| keyed.push((m.order_key(), *m))),
            Region::Plus => {
                if d as usize >= n {
                    for_each_monomial(n, d - n as u32, |m| {
                        let mut p = *m;
                        p.exponents_mut().iter_mut().for_each(|a| *a += 1);
                        keyed.push((p.order_key(), p));
                    })
                }
            }
        }
        Self::from_keyed(n, d, keyed)
    }

    /// Columns from an arbitrary set of monomials of degree `d`.
    pub fn from_monomials(n: usize, d: u32, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let keyed = monomials.into_iter().map(|m| (m.order_key(), m)).collect();
        Self::from_keyed(n, d, keyed)
    }

    fn from_keyed(n: usize, d: u32, mut keyed: Vec<(OrderKey, Monomial)>) -> Self {
        keyed.sort_unstable_by_key(|k| std::cmp::Reverse(k.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let monomials: Vec<Monomial> = keyed.into_iter().map(|(_, m)| m).collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        ColumnSet { n, d, monomials, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    #[inline]
    pub fn index_of(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    #[inline]
    pub fn monomial(&self, col: usize) -> &Monomial {
        &self.monomials[col]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
}
