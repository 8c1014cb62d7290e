//! Admissible monomials of `(P_n^+)_d` with a prescribed number of odd
//! exponents, for the two levels just below the top.
//!
//! A monomial with `c` odd exponents is `x^e * y^2` with `|e| = c`. No Steenrod
//! square raises the number of odd exponents, so the admissibles with `c` odd
//! exponents are read off from the hit space projected onto the monomials with
//! at least `c` odd exponents. Modulo the images `x^e (Sq^b y)^2`, every such
//! monomial reduces to a candidate `x^e a^2` with `a` admissible in degree
//! `(d - c) / 2`; the remaining relations come from `Sq^1` applied to level
//! `c + 1` and, when `c = n - 2`, from the even squares applied to level `n`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{is_trivial_degree, mu};
use crate::error::{HitError, Result};
use crate::f2poly::{for_each_monomial, Monomial};
use crate::hitsolver::bitrows::{set_columns, BitEchelon};
use crate::hitsolver::cohit::{CohitBasis, Solver};
use crate::hitsolver::columns::{ColumnSet, Region};
use crate::steenrod::sq_monomial_each;

/// Calls `f` with every monomial of degree `e` in `n` variables whose support
/// is exactly `mask`.
pub fn for_each_with_support(n: usize, mask: u32, e: u32, mut f: impl FnMut(&Monomial)) {
    let positions: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
    let t = positions.len();
    if t == 0 {
        if e == 0 {
            f(&Monomial::one(n));
        }
        return;
    }
    if (e as usize) < t {
        return;
    }
    let mut out = Monomial::one(n);
    for_each_monomial(t, e - t as u32, |m| {
        for (l, &p) in positions.iter().enumerate() {
            out.exponents_mut()[p] = m.exponents()[l] + 1;
        }
        f(&out);
    });
}

fn with_odd(mask: u32, y: &Monomial) -> Monomial {
    let mut out = y.square();
    for (j, a) in out.exponents_mut().iter_mut().enumerate() {
        *a += mask >> j & 1;
    }
    out
}

/// Reduces `x^e w^2` to candidate columns through the normal form of `w`.
struct Reducer<'a> {
    basis: &'a CohitBasis,
    columns: &'a ColumnSet,
    cache: HashMap<Monomial, Vec<Monomial>>,
}

impl Reducer<'_> {
    fn push(&mut self, mask: u32, w: &Monomial, offset: u32, out: &mut Vec<u32>) -> Result<()> {
        if !self.cache.contains_key(w) {
            let nf = self.basis.normal_form_monomial(w)?;
            self.cache.insert(*w, nf);
        }
        for a in &self.cache[w] {
            let col = self
                .columns
                .index_of(&with_odd(mask, a))
                .expect("normal forms of plus monomials are candidates");
            out.push(col + offset);
        }
        Ok(())
    }
}

/// Level-`n` columns of one support block, eliminated together with the
/// candidate columns.
#[derive(Debug)]
struct TopBlock {
    positions: Vec<usize>,
    top: ColumnSet,
    echelon: BitEchelon,
}

/// The reduced relations among the monomials of `(P_n^+)_d` with `c` odd
/// exponents, `c` in `{n - 1, n - 2}`.
pub struct LevelSystem {
    n: usize,
    d: u32,
    c: usize,
    basis: Arc<CohitBasis>,
    columns: ColumnSet,
    echelon: BitEchelon,
    blocks: Vec<Option<TopBlock>>,
}

impl std::fmt::Debug for LevelSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LevelSystem")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("c", &self.c)
            .field("candidates", &self.columns.len())
            .field("rank", &self.echelon.rank())
            .finish()
    }
}

impl LevelSystem {
    pub fn solve(solver: &Solver, n: usize, d: u32, c: usize) -> Result<LevelSystem> {
        if n < 2 || !(c + 2 == n || c + 1 == n) {
            return Err(HitError::Precondition(format!("level {c} is not one or two below {n}")));
        }
        if (d as usize) < c || (d as usize - c) % 2 == 1 {
            return Err(HitError::Precondition(format!("degree {d} has no monomial with {c} odd exponents")));
        }
        let h = (d - c as u32) / 2;
        let full = (1u32 << n) - 1;
        let basis = solver.admissible_basis(n, h)?;

        // candidates x^e a^2 with a admissible and covering the even positions
        let mut cands = Vec::new();
        for mask in 0..=full {
            if mask.count_ones() as usize != c {
                continue;
            }
            let rest = full & !mask;
            for a in basis.admissibles() {
                if a.support() & rest == rest {
                    cands.push(with_odd(mask, a));
                }
            }
        }
        let columns = ColumnSet::from_monomials(n, d, cands);
        let ncand = columns.len() as u32;
        let mut echelon = BitEchelon::new(columns.len());
        let mut blocks: Vec<Option<TopBlock>> = (0..=full).map(|_| None).collect();
        let mut reducer = Reducer { basis: &basis, columns: &columns, cache: HashMap::new() };
        let mut scratch = echelon.scratch();
        let mut cols: Vec<u32> = Vec::new();

        // Sq^1(x^f y^2) = sum_{j in f} x^{f - j} (x_j y)^2 with |f| = c + 1
        if h >= 1 && ncand > 0 {
            for fmask in 0..=full {
                if fmask.count_ones() as usize != c + 1 {
                    continue;
                }
                let rest = full & !fmask;
                for ymask in 0..=full {
                    if ymask & rest != rest {
                        continue;
                    }
                    let mut err = Ok(());
                    for_each_with_support(n, ymask, h - 1, |y| {
                        if err.is_err() {
                            return;
                        }
                        cols.clear();
                        for j in 0..n {
                            if fmask >> j & 1 == 1 {
                                let mut w = *y;
                                w.exponents_mut()[j] += 1;
                                if let Err(e) = reducer.push(fmask & !(1 << j), &w, 0, &mut cols) {
                                    err = Err(e);
                                    return;
                                }
                            }
                        }
                        echelon.insert_columns(&cols, &mut scratch);
                    });
                    err?;
                }
            }
        }

        // Sq^{2b}(X y^2) = X (Sq^b y)^2 + sum_{|S| = 2} x^{[n] - S} (x_S Sq^{b-1} y)^2 + lower
        if c + 2 == n && h >= 1 {
            for ymask in 1..=full {
                let t = ymask.count_ones() as usize;
                if ((h - 1) as usize) < t {
                    continue;
                }
                let positions: Vec<usize> = (1..=n).filter(|&j| ymask >> (j - 1) & 1 == 1).collect();
                let top = ColumnSet::new(t, h - 1, Region::Plus);
                let ntop = top.len() as u32;
                let mut block = BitEchelon::new(ntop as usize + ncand as usize);
                let mut bscratch = block.scratch();
                let mut b = 1u32;
                while b < h {
                    let mut err = Ok(());
                    for_each_with_support(n, ymask, h - 1 - b, |y| {
                        if err.is_err() {
                            return;
                        }
                        cols.clear();
                        let local = Monomial::new(&positions.iter().map(|&j| y.nu(j)).collect::<Vec<_>>())
                            .expect("positive arity");
                        sq_monomial_each(b, &local, |m| {
                            cols.push(top.index_of(m).expect("squares preserve the support"))
                        });
                        sq_monomial_each(b - 1, y, |v| {
                            for i in 0..n {
                                for j in i + 1..n {
                                    let mut w = *v;
                                    w.exponents_mut()[i] += 1;
                                    w.exponents_mut()[j] += 1;
                                    let mask = full & !(1 << i) & !(1 << j);
                                    if let Err(e) = reducer.push(mask, &w, ntop, &mut cols) {
                                        err = Err(e);
                                        return;
                                    }
                                }
                            }
                        });
                        if !cols.is_empty() {
                            block.insert_columns(&cols, &mut bscratch);
                        }
                    });
                    err?;
                    b <<= 1;
                }
                for p in ntop as usize..block.ncols() {
                    if let Some(row) = block.pivot_row_columns(p) {
                        cols.clear();
                        cols.extend(row.into_iter().map(|x| x as u32 - ntop));
                        echelon.insert_columns(&cols, &mut scratch);
                    }
                }
                blocks[ymask as usize] = Some(TopBlock { positions, top, echelon: block });
            }
            // y = 1 and b = 1: Sq^2(x_1 ... x_n) = sum_S x^{[n]-S} x_S^2 + lower
            if h == 2 {
                cols.clear();
                for i in 0..n {
                    for j in i + 1..n {
                        let mut w = Monomial::one(n);
                        w.exponents_mut()[i] = 1;
                        w.exponents_mut()[j] = 1;
                        reducer.push(full & !(1 << i) & !(1 << j), &w, 0, &mut cols)?;
                    }
                }
                echelon.insert_columns(&cols, &mut scratch);
            }
        }
        echelon.reduce_fully();
        Ok(LevelSystem { n, d, c, basis, columns, echelon, blocks })
    }

    pub fn level(&self) -> usize {
        self.c
    }

    /// Admissible monomials with `c` odd exponents, descending.
    pub fn admissibles(&self) -> Vec<Monomial> {
        self.echelon.free_columns().into_iter().map(|col| *self.columns.monomial(col)).collect()
    }

    fn finish(&self, buf: &mut [u64], out: &mut Vec<Monomial>) {
        self.echelon.reduce(buf);
        out.extend(set_columns(buf).into_iter().map(|col| *self.columns.monomial(col)));
    }

    /// Normal form of a plus monomial with `c` odd exponents.
    pub fn reduce_level(&self, u: &Monomial) -> Result<Vec<Monomial>> {
        if u.n() != self.n || u.degree() != self.d || u.odd_count() as usize != self.c || !u.is_plus() {
            return Err(HitError::Precondition(format!("{u} is not a plus monomial of level {}", self.c)));
        }
        let mut mask = 0u32;
        let mut w = *u;
        for (j, a) in w.exponents_mut().iter_mut().enumerate() {
            mask |= (*a & 1) << j;
            *a >>= 1;
        }
        let mut buf = self.echelon.scratch();
        for a in self.basis.normal_form_monomial(&w)? {
            let col = self.columns.index_of(&with_odd(mask, &a)).expect("candidate") as usize;
            buf[col / 64] ^= 1 << (col % 64);
        }
        let mut out = Vec::new();
        self.finish(&mut buf, &mut out);
        Ok(out)
    }

    /// Normal form of `x_1 ... x_n y^2`; only for `c = n - 2`.
    pub fn reduce_top(&self, y: &Monomial) -> Result<Vec<Monomial>> {
        if self.c + 2 != self.n {
            return Err(HitError::Precondition("no level-n columns above this level".into()));
        }
        let mask = y.support();
        let Some(block) = self.blocks.get(mask as usize).and_then(|b| b.as_ref()) else {
            // y = 1, or a block too small to hold a monomial of this degree
            return Ok(vec![y.phi_up()]);
        };
        let local = Monomial::new(&block.positions.iter().map(|&j| y.nu(j)).collect::<Vec<_>>())?;
        let col = block.top.index_of(&local).ok_or(HitError::DegreeMismatch {
            left: block.top.degree(),
            right: local.degree(),
        })? as usize;
        let mut buf = block.echelon.scratch();
        buf[col / 64] |= 1 << (col % 64);
        block.echelon.reduce(&mut buf);
        let ntop = block.top.len();
        let mut out = Vec::new();
        let mut cand = self.echelon.scratch();
        for x in set_columns(&buf) {
            if x < ntop {
                let a = block.top.monomial(x).embed(&block.positions, self.n)?;
                out.push(a.phi_up());
            } else {
                let k = x - ntop;
                cand[k / 64] ^= 1 << (k % 64);
            }
        }
        self.finish(&mut cand, &mut out);
        Ok(out)
    }
}

/// Normal forms in `(P_t^+)_d` assembled from the level systems.
pub struct SplitPlus {
    t: usize,
    d: u32,
    floor: usize,
    systems: Vec<Option<Arc<LevelSystem>>>,
    top: Option<Arc<CohitBasis>>,
}

impl std::fmt::Debug for SplitPlus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitPlus").field("t", &self.t).field("d", &self.d).field("floor", &self.floor).finish()
    }
}

impl SplitPlus {
    pub fn new(solver: &Solver, t: usize, d: u32) -> Result<SplitPlus> {
        if (d as usize) < t || is_trivial_degree(t, d) {
            return Err(HitError::Precondition(format!("({t}, {d}) has no plus cohits to split")));
        }
        let floor = mu(u64::from(d)) as usize;
        let mut systems: Vec<Option<Arc<LevelSystem>>> = vec![None; t + 1];
        for (c, slot) in systems.iter_mut().enumerate().take(t).skip(floor) {
            if (d as usize - c) % 2 == 1 {
                continue;
            }
            if c + 2 < t {
                return Err(HitError::Infeasible {
                    n: t,
                    d,
                    columns: Solver::plus_columns(t, d),
                    limit: solver.max_columns(),
                });
            }
            *slot = Some(solver.level_system(t, d, c)?);
        }
        let top = match systems.get(t.wrapping_sub(2)).and_then(|s| s.as_ref()) {
            Some(_) => None,
            None if (d as usize - t).is_multiple_of(2) => Some(solver.admissible_basis(t, (d - t as u32) / 2)?),
            None => None,
        };
        Ok(SplitPlus { t, d, floor, systems, top })
    }

    /// The admissible monomials whose sum represents the class of the plus
    /// monomial `u`.
    pub fn normal_form(&self, u: &Monomial) -> Result<Vec<Monomial>> {
        if u.n() != self.t || u.degree() != self.d || !u.is_plus() {
            return Err(HitError::Precondition(format!("{u} is not a plus monomial of degree {}", self.d)));
        }
        let c = u.odd_count() as usize;
        if c < self.floor {
            return Ok(Vec::new());
        }
        if c == self.t {
            let y = u.s_down().expect("all exponents odd");
            if self.t >= 2 {
                if let Some(system) = &self.systems[self.t - 2] {
                    return system.reduce_top(&y);
                }
            }
            let top = self.top.as_ref().expect("top basis present without a lower system");
            return Ok(top.normal_form_monomial(&y)?.iter().map(|a| a.phi_up()).collect());
        }
        match &self.systems[c] {
            Some(system) => system.reduce_level(u),
            None => Err(HitError::Infeasible {
                n: self.t,
                d: self.d,
                columns: Solver::plus_columns(self.t, self.d),
                limit: 0,
            }),
        }
    }
}
