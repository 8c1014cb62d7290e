//! Kameko's squaring operation on cohits: the map induced by
//! `x_1 ... x_n y^2 -> y` from degree `2d + n` to degree `d`, its image, and the
//! split of the source degree into the zero part, the kernel on the plus part,
//! and the image.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{is_trivial_degree, minimal_spike};
use crate::error::{HitError, Result};
use crate::f2poly::{Monomial, WeightVector};
use crate::hitsolver::bitrows::BitEchelon;
use crate::hitsolver::{Part, Solver};

/// The induced map in the admissible bases of source and target.
#[derive(Clone, Debug)]
pub struct KamekoSlice {
    pub n: usize,
    pub source_degree: u32,
    pub target_degree: u32,
    pub source: Vec<Monomial>,
    pub target: Vec<Monomial>,
    /// For each source admissible, the target coordinates of its image.
    pub columns: Vec<Vec<usize>>,
    pub rank: usize,
}

impl KamekoSlice {
    pub fn kernel_dim(&self) -> usize {
        self.source.len() - self.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.target.len()
    }
}

fn source_degree(n: usize, d: u32) -> Result<u32> {
    d.checked_mul(2)
        .and_then(|x| x.checked_add(n as u32))
        .ok_or_else(|| HitError::InvalidArgument(format!("degree 2*{d} + {n} overflows")))
}

/// Rank of a set of sparse vectors of width `ncols`.
pub fn rank_of(ncols: usize, vectors: &[Vec<usize>]) -> usize {
    let mut e = BitEchelon::new(ncols);
    let mut scratch = e.scratch();
    let mut cols = Vec::new();
    for v in vectors {
        cols.clear();
        cols.extend(v.iter().map(|&c| c as u32));
        e.insert_columns(&cols, &mut scratch);
    }
    e.rank()
}

/// The matrix of the down map from degree `2d + n` to degree `d`.
pub fn kameko_matrix(solver: &Solver, n: usize, d: u32) -> Result<KamekoSlice> {
    let big = source_degree(n, d)?;
    let source = solver.admissibles(n, big)?;
    let target_basis = solver.admissible_basis(n, d)?;
    let mut columns = Vec::with_capacity(source.len());
    for m in &source {
        columns.push(match m.s_down() {
            Some(y) => target_basis.coordinates(&y.into())?,
            None => Vec::new(),
        });
    }
    let target = target_basis.admissibles().to_vec();
    let rank = rank_of(target.len(), &columns);
    Ok(KamekoSlice { n, source_degree: big, target_degree: d, source, target, columns, rank })
}

/// Representatives `x_1 ... x_n a^2` of a basis of the image, one per
/// admissible `a` of degree `d`.
pub fn image_basis(solver: &Solver, n: usize, d: u32) -> Result<Vec<Monomial>> {
    Ok(solver.admissibles(n, d)?.iter().map(|a| a.phi_up()).collect())
}

/// Candidate weight vectors of plus-part admissibles whose class lies in the
/// kernel at degree `2d + n`.
///
/// The first entry has the parity of the degree, is at least the first entry
/// of the minimal spike's weight and is not `n` (such monomials map to
/// admissibles). The tail is the weight of an admissible monomial of degree
/// `(2d + n - first) / 2`.
pub fn kernel_weight_vectors(solver: &Solver, n: usize, d: u32) -> Result<Vec<WeightVector>> {
    let big = source_degree(n, d)?;
    if is_trivial_degree(n, big) {
        return Err(HitError::NoSpike { n, d: big });
    }
    let floor = minimal_spike(n, big)?.odd_count() as usize;
    let mut out = BTreeSet::new();
    for first in floor..n {
        if (big as usize - first) % 2 == 1 {
            continue;
        }
        let h = (big - first as u32) / 2;
        for a in solver.admissibles(n, h)? {
            if a.support().count_ones() as usize + first >= n {
                out.insert(a.weight_vector().prepend(first as u32));
            }
        }
    }
    Ok(out.into_iter().rev().collect())
}

/// The identity `total = zero + kernel on the plus part + image` at degree
/// `2d + n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub n: usize,
    pub source_degree: u32,
    pub target_degree: u32,
    pub total: u64,
    pub zero: u64,
    pub kernel_plus: u64,
    pub image: u64,
    pub kernel_weights: Vec<(WeightVector, u64)>,
    pub map_rank: u64,
    pub pass: bool,
}

impl std::fmt::Display for SplitReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} = {} + {} + {} {}",
            self.total,
            self.zero,
            self.kernel_plus,
            self.image,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub fn verify_split(solver: &Solver, n: usize, d: u32) -> Result<SplitReport> {
    let big = source_degree(n, d)?;
    let total = solver.cohit_dim(n, big, Part::All)?;
    let zero = solver.cohit_dim(n, big, Part::Zero)?;
    let image = solver.cohit_dim(n, d, Part::All)?;
    let mut kernel_weights = Vec::new();
    if !is_trivial_degree(n, big) {
        for w in kernel_weight_vectors(solver, n, d)? {
            let dim = solver.weight_space_dim(n, &w, Part::Plus)? as u64;
            kernel_weights.push((w, dim));
        }
    }
    let kernel_plus = kernel_weights.iter().map(|(_, k)| k).sum();
    let slice = kameko_matrix(solver, n, d)?;
    let map_rank = slice.rank as u64;
    let pass = total == zero + kernel_plus + image
        && map_rank == image
        && slice.kernel_dim() as u64 == zero + kernel_plus;
    Ok(SplitReport {
        n,
        source_degree: big,
        target_degree: d,
        total,
        zero,
        kernel_plus,
        image,
        kernel_weights,
        map_rank,
        pass,
    })
}
