//! The action of `GL(n, F2)` on polynomials and cohits, and invariant
//! subspaces.
//!
//! A substitution `g` sends `x_j` to `sum_i g_ij x_i`. Substitutions act on the
//! left: `substitute(g * h, p) = substitute(g, substitute(h, p))`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::xi;
use crate::error::{HitError, Result};
use crate::f2poly::{Monomial, Polynomial, MAX_VARS};
use crate::hitsolver::bitrows::BitEchelon;
use crate::hitsolver::{CohitBasis, Solver};

/// An invertible `n x n` matrix over F2, stored by columns: bit `i` of
/// `columns[j]` is the entry `g_ij`, so `columns[j]` is the support of the
/// image of `x_j`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSubstitution {
    n: usize,
    columns: Vec<u32>,
}

fn rank_of_masks(masks: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &m in masks {
        let mut v = m;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

impl LinearSubstitution {
    /// Builds the substitution with the given column supports.
    pub fn from_columns(columns: Vec<u32>) -> Result<Self> {
        let n = columns.len();
        if n == 0 || n > MAX_VARS {
            return Err(HitError::InvalidArgument(format!("matrix size {n} is outside 1..={MAX_VARS}")));
        }
        if columns.iter().any(|&c| c >> n != 0) {
            return Err(HitError::InvalidArgument("column entry outside the matrix".into()));
        }
        if rank_of_masks(&columns) != n {
            return Err(HitError::SingularMatrix);
        }
        Ok(LinearSubstitution { n, columns })
    }

    /// Builds the substitution from rows of 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut columns = vec![0u32; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(HitError::InvalidArgument("matrix is not square".into()));
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => columns[j] |= 1 << i,
                    _ => return Err(HitError::InvalidArgument(format!("entry {e} is not 0 or 1"))),
                }
            }
        }
        Self::from_columns(columns)
    }

    pub fn identity(n: usize) -> Self {
        LinearSubstitution { n, columns: (0..n).map(|j| 1 << j).collect() }
    }

    /// Swaps `x_i` and `x_j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        check_index(n, i)?;
        check_index(n, j)?;
        let mut g = Self::identity(n);
        g.columns.swap(i - 1, j - 1);
        Ok(g)
    }

    /// `x_i -> x_i + x_j`, `i != j` (1-based).
    pub fn transvection(n: usize, i: usize, j: usize) -> Result<Self> {
        check_index(n, i)?;
        check_index(n, j)?;
        if i == j {
            return Err(HitError::InvalidArgument("transvection needs two distinct variables".into()));
        }
        let mut g = Self::identity(n);
        g.columns[i - 1] |= 1 << (j - 1);
        Ok(g)
    }

    /// Adjacent transpositions and `x_1 -> x_1 + x_2`; together they generate
    /// `GL(n, F2)`.
    pub fn generators(n: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (1..n).map(|i| Self::transposition(n, i, i + 1).expect("valid indices")).collect();
        if n >= 2 {
            out.push(Self::transvection(n, 1, 2).expect("valid indices"));
        }
        out
    }

    /// Every element of `GL(n, F2)`, for `n <= 4`.
    pub fn all_elements(n: usize) -> Result<Vec<Self>> {
        if n == 0 || n > 4 {
            return Err(HitError::InvalidArgument(format!("listing GL({n}, F2) is limited to 1..=4")));
        }
        let mut out = Vec::new();
        let mut cols = vec![0u32; n];
        fn rec(j: usize, n: usize, cols: &mut Vec<u32>, out: &mut Vec<LinearSubstitution>) {
            if j == n {
                out.push(LinearSubstitution { n, columns: cols.clone() });
                return;
            }
            for c in 1..(1u32 << n) {
                cols[j] = c;
                if rank_of_masks(&cols[..=j]) == j + 1 {
                    rec(j + 1, n, cols, out);
                }
            }
        }
        rec(0, n, &mut cols, &mut out);
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The entry `g_ij` (1-based).
    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.columns[j - 1] >> (i - 1) & 1 == 1
    }

    /// Support of the image of `x_j` (1-based) as a bit mask.
    pub fn image_mask(&self, j: usize) -> u32 {
        self.columns[j - 1]
    }

    /// The matrix product `self * h`.
    pub fn compose(&self, h: &LinearSubstitution) -> Result<Self> {
        if self.n != h.n {
            return Err(HitError::ArityMismatch { left: self.n, right: h.n });
        }
        let columns = h
            .columns
            .iter()
            .map(|&mask| (0..self.n).filter(|k| mask >> k & 1 == 1).fold(0, |acc, k| acc ^ self.columns[k]))
            .collect();
        Ok(LinearSubstitution { n: self.n, columns })
    }

    pub fn inverse(&self) -> Self {
        // Gauss-Jordan on [g | I] by columns
        let n = self.n;
        let mut a = self.columns.clone();
        let mut b: Vec<u32> = (0..n).map(|j| 1 << j).collect();
        for r in 0..n {
            let p = (r..n).find(|&j| a[j] >> r & 1 == 1).expect("invertible");
            a.swap(r, p);
            b.swap(r, p);
            for j in 0..n {
                if j != r && a[j] >> r & 1 == 1 {
                    a[j] ^= a[r];
                    b[j] ^= b[r];
                }
            }
        }
        // now g * B = I, where B has columns b
        LinearSubstitution { n, columns: b }
    }

    /// Toggles every monomial of `g(m)` in `out`.
    fn substitute_into(&self, m: &Monomial, out: &mut HashSet<Monomial>) {
        // one factor (sum_{i in mask} x_i)^(2^k) per set bit k of each exponent
        let mut factors: Vec<(u32, u32)> = Vec::new();
        for (j, &a) in m.exponents().iter().enumerate() {
            let mut bits = a;
            while bits != 0 {
                let k = bits.trailing_zeros();
                factors.push((self.columns[j], 1 << k));
                bits &= bits - 1;
            }
        }
        let mut cur = Monomial::one(self.n);
        fn rec(idx: usize, factors: &[(u32, u32)], cur: &mut Monomial, out: &mut HashSet<Monomial>) {
            if idx == factors.len() {
                if !out.remove(cur) {
                    out.insert(*cur);
                }
                return;
            }
            let (mask, p) = factors[idx];
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                cur.exponents_mut()[i] += p;
                rec(idx + 1, factors, cur, out);
                cur.exponents_mut()[i] -= p;
                bits &= bits - 1;
            }
        }
        rec(0, &factors, &mut cur, out);
    }

    /// The image of `p` under the substitution.
    pub fn substitute(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.n() != self.n {
            return Err(HitError::ArityMismatch { left: self.n, right: p.n() });
        }
        let mut acc = HashSet::new();
        for m in p.terms() {
            self.substitute_into(m, &mut acc);
        }
        Polynomial::from_terms(self.n, acc)
    }

    pub fn substitute_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        self.substitute(&Polynomial::from_monomial(*m))
    }
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(HitError::InvalidArgument(format!("variable index {i} outside 1..={n}")));
    }
    Ok(())
}

impl fmt::Display for LinearSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 1..=self.n {
            if i > 1 {
                f.write_str(";")?;
            }
            for j in 1..=self.n {
                f.write_str(if self.entry(i, j) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for LinearSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A square matrix over F2 stored by columns, each a sorted list of row
/// indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    dim: usize,
    columns: Vec<Vec<usize>>,
}

impl F2Matrix {
    pub fn identity(dim: usize) -> Self {
        F2Matrix { dim, columns: (0..dim).map(|j| vec![j]).collect() }
    }

    pub fn from_columns(dim: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        if columns.len() != dim || columns.iter().flatten().any(|&i| i >= dim) {
            return Err(HitError::InvalidArgument(format!("columns do not form a {dim} x {dim} matrix")));
        }
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                let mut out: Vec<usize> = Vec::with_capacity(c.len());
                for i in c {
                    if out.last() == Some(&i) {
                        out.pop();
                    } else {
                        out.push(i);
                    }
                }
                out
            })
            .collect();
        Ok(F2Matrix { dim, columns })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, c)| c.as_slice() == [j])
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &[usize]) -> Vec<usize> {
        let mut acc = vec![false; self.dim];
        for &j in v {
            for &i in &self.columns[j] {
                acc[i] ^= true;
            }
        }
        (0..self.dim).filter(|&i| acc[i]).collect()
    }

    /// The product `self * other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.dim != other.dim {
            return Err(HitError::ArityMismatch { left: self.dim, right: other.dim });
        }
        Ok(F2Matrix { dim: self.dim, columns: other.columns.iter().map(|c| self.apply(c)).collect() })
    }
}

/// The matrix of `g` on the cohit space in the admissible basis.
pub fn induced_matrix(basis: &CohitBasis, g: &LinearSubstitution) -> Result<F2Matrix> {
    if g.n() != basis.n() {
        return Err(HitError::ArityMismatch { left: basis.n(), right: g.n() });
    }
    let mut columns = Vec::with_capacity(basis.dim());
    for a in basis.admissibles() {
        columns.push(basis.coordinates(&g.substitute_monomial(a)?)?);
    }
    F2Matrix::from_columns(basis.dim(), columns)
}

/// Induced matrices of several substitutions on up to `threads` threads.
pub fn induced_matrices(basis: &CohitBasis, group: &[LinearSubstitution], threads: usize) -> Result<Vec<F2Matrix>> {
    let threads = threads.max(1);
    let mut out = Vec::with_capacity(group.len());
    for chunk in group.chunks(threads) {
        let built: Vec<Result<F2Matrix>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk.iter().map(|g| scope.spawn(move || induced_matrix(basis, g))).collect();
            handles.into_iter().map(|h| h.join().expect("induced matrix worker panicked")).collect()
        });
        for m in built {
            out.push(m?);
        }
    }
    Ok(out)
}

/// A basis of the common fixed space of `matrices`, as sorted coordinate
/// lists.
pub fn fixed_space(dim: usize, matrices: &[F2Matrix]) -> Result<Vec<Vec<usize>>> {
    let mut echelon = BitEchelon::new(dim);
    let words = echelon.nwords();
    for m in matrices {
        if m.dim() != dim {
            return Err(HitError::ArityMismatch { left: dim, right: m.dim() });
        }
        // rows of m - I
        let mut rows = vec![vec![0u64; words]; dim];
        for j in 0..dim {
            for &i in m.column(j) {
                rows[i][j / 64] ^= 1 << (j % 64);
            }
            rows[j][j / 64] ^= 1 << (j % 64);
        }
        for mut row in rows {
            echelon.insert(&mut row);
        }
    }
    echelon.reduce_fully();
    Ok(echelon.null_space())
}

/// Invariant classes of a cohit slice.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub n: usize,
    pub d: u32,
    /// Each invariant class as a sum of admissible monomials.
    pub basis: Vec<Polynomial>,
    /// The same classes as coordinate lists in the admissible basis.
    pub coordinates: Vec<Vec<usize>>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn invariants_in(basis: &CohitBasis, group: &[LinearSubstitution], threads: usize) -> Result<InvariantSpace> {
    let matrices = induced_matrices(basis, group, threads)?;
    let coordinates = fixed_space(basis.dim(), &matrices)?;
    let adm = basis.admissibles();
    let polys = coordinates
        .iter()
        .map(|v| Polynomial::from_terms(basis.n(), v.iter().map(|&i| adm[i])))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantSpace { n: basis.n(), d: basis.degree(), basis: polys, coordinates })
}

/// The `GL(n, F2)`-invariant subspace of `(F2 (x)_A P_n)_d`.
pub fn invariants(solver: &Solver, n: usize, d: u32) -> Result<InvariantSpace> {
    invariants_threaded(solver, n, d, default_threads())
}

/// As [`invariants`], building at most `threads` generator matrices at once.
pub fn invariants_threaded(solver: &Solver, n: usize, d: u32, threads: usize) -> Result<InvariantSpace> {
    let basis = solver.admissible_basis(n, d)?;
    invariants_in(&basis, &LinearSubstitution::generators(n), threads)
}

pub fn invariant_dim(solver: &Solver, n: usize, d: u32) -> Result<usize> {
    Ok(invariants(solver, n, d)?.dim())
}

/// The subspace fixed by every element of `group`.
pub fn invariants_under(solver: &Solver, n: usize, d: u32, group: &[LinearSubstitution]) -> Result<InvariantSpace> {
    let basis = solver.admissible_basis(n, d)?;
    invariants_in(&basis, group, default_threads())
}

/// Invariant dimensions along `d_s = n (2^s - 1) + m 2^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub n: usize,
    pub m: u32,
    /// From this `s` on, the slices and their invariants are isomorphic.
    pub stable_from: u32,
    /// `(s, d_s, invariant dim)` for each computed member.
    pub computed: Vec<(u32, u32, usize)>,
    /// At `s = stable_from`: invariants inside the kernel of the squaring
    /// map, and the bound `kernel invariants + invariants one step down`.
    pub kernel_invariants: Option<usize>,
    pub bound: Option<usize>,
    pub bound_holds: Option<bool>,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family d_s = {}(2^s - 1) + {}*2^s, constant for s >= {}", self.n, self.m, self.stable_from)?;
        for (s, d, dim) in &self.computed {
            writeln!(f, "  s = {s}  d = {d}  invariants {dim}")?;
        }
        if let (Some(k), Some(b), Some(ok)) = (self.kernel_invariants, self.bound, self.bound_holds) {
            writeln!(f, "  kernel invariants {k}, bound {b} {}", if ok { "holds" } else { "FAILS" })?;
        }
        Ok(())
    }
}

fn family_degree(n: usize, m: u32, s: u32) -> Result<u32> {
    let p = 1u64.checked_shl(s).filter(|&p| p <= u64::from(u32::MAX)).ok_or_else(|| {
        HitError::InvalidArgument(format!("s = {s} is too large"))
    })?;
    let d = n as u64 * (p - 1) + u64::from(m) * p;
    u32::try_from(d).map_err(|_| HitError::InvalidArgument(format!("degree {d} overflows")))
}

/// Computes invariants for `s = 1` up to the first stable `s` (at most
/// `max_s`) and, at the stable `s >= 2`, the kernel bound.
pub fn invariant_stability_report(solver: &Solver, n: usize, m: u32, max_s: u32) -> Result<StabilityReport> {
    stability_report_threaded(solver, n, m, max_s, default_threads())
}

pub fn stability_report_threaded(
    solver: &Solver,
    n: usize,
    m: u32,
    max_s: u32,
    threads: usize,
) -> Result<StabilityReport> {
    let stable_from = xi(n, u64::from(m)).max(1);
    let top = stable_from.min(max_s.max(1));
    let mut computed = Vec::new();
    let mut below: Option<InvariantSpace> = None;
    let mut kernel_invariants = None;
    let mut bound = None;
    let mut bound_holds = None;
    for s in 1..=top {
        let d = family_degree(n, m, s)?;
        let space = invariants_threaded(solver, n, d, threads)?;
        computed.push((s, d, space.dim()));
        if s == stable_from && s >= 2 {
            let prev = below.as_ref().expect("previous member computed");
            let target = solver.admissible_basis(n, prev.d)?;
            let images = space
                .basis
                .iter()
                .map(|p| {
                    let down = p.map_terms(n, |u| u.s_down())?;
                    target.coordinates(&down)
                })
                .collect::<Result<Vec<_>>>()?;
            let rank = crate::kameko::rank_of(target.dim(), &images);
            let k = space.dim() - rank;
            kernel_invariants = Some(k);
            bound = Some(k + prev.dim());
            bound_holds = Some(space.dim() <= k + prev.dim());
        }
        below = Some(space);
    }
    Ok(StabilityReport { n, m, stable_from, computed, kernel_invariants, bound, bound_holds })
}
