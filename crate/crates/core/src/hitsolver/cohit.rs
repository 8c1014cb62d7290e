use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::arith::{is_trivial_degree, mu};
use crate::error::{HitError, Result};
use crate::f2poly::{binomial, monomial_count, Monomial, Polynomial};
use crate::hitsolver::bitrows::{set_columns, BitEchelon};
use crate::hitsolver::columns::{ColumnSet, Region};
use crate::hitsolver::level::{LevelSystem, SplitPlus};
use crate::hitsolver::plus::PlusSlice;

type SliceMap<T> = HashMap<(usize, u32), T>;

/// Summand of the cohit space: everything, the span of monomials with a
/// missing variable, or the span of monomials containing every variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    All,
    Zero,
    Plus,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::All => "all",
            Part::Zero => "zero",
            Part::Plus => "plus",
        })
    }
}

impl FromStr for Part {
    type Err = HitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Part::All),
            "zero" | "zero-part" => Ok(Part::Zero),
            "plus" | "plus-part" => Ok(Part::Plus),
            other => Err(HitError::Parse(format!("unknown part {other:?}"))),
        }
    }
}

/// Default ceiling on the number of columns of a single direct solve.
pub const DEFAULT_MAX_COLUMNS: u64 = 120_000;

/// Computes and caches plus-part slices. Shareable across threads.
pub struct Solver {
    slices: Mutex<SliceMap<Arc<PlusSlice>>>,
    plus: Mutex<SliceMap<Arc<Vec<Monomial>>>>,
    systems: Mutex<HashMap<(usize, u32, usize), Arc<LevelSystem>>>,
    splits: Mutex<SliceMap<Arc<SplitPlus>>>,
    bases: Mutex<SliceMap<Arc<CohitBasis>>>,
    max_columns: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver::with_max_columns(DEFAULT_MAX_COLUMNS)
    }

    pub fn with_max_columns(max_columns: u64) -> Self {
        Solver {
            slices: Mutex::default(),
            plus: Mutex::default(),
            systems: Mutex::default(),
            splits: Mutex::default(),
            bases: Mutex::default(),
            max_columns,
        }
    }

    pub fn max_columns(&self) -> u64 {
        self.max_columns
    }

    /// Number of columns of the plus-part slice `(t, d)`.
    pub fn plus_columns(t: usize, d: u32) -> u64 {
        if t == 0 {
            return u64::from(d == 0);
        }
        if (d as usize) < t {
            return 0;
        }
        monomial_count(t, d - t as u32)
    }

    /// Whether the plus slice `(t, d)` is within the column budget.
    pub fn plus_feasible(&self, t: usize, d: u32) -> bool {
        is_trivial_degree(t.max(1), d) || Self::plus_columns(t, d) <= self.max_columns
    }

    /// The fully reduced hit echelon of `(P_t^+)_d`, `t >= 1`.
    pub fn plus_slice(&self, t: usize, d: u32) -> Result<Arc<PlusSlice>> {
        if t == 0 || t > crate::f2poly::MAX_VARS {
            return Err(HitError::InvalidArgument(format!("plus slice needs 1..={} variables", crate::f2poly::MAX_VARS)));
        }
        if let Some(s) = self.slices.lock().expect("slice cache poisoned").get(&(t, d)) {
            return Ok(s.clone());
        }
        let columns = Self::plus_columns(t, d);
        if columns > self.max_columns {
            return Err(HitError::Infeasible { n: t, d, columns, limit: self.max_columns });
        }
        let mut slice = PlusSlice::compute(t, d);
        slice.echelon.reduce_fully();
        let slice = Arc::new(slice);
        self.slices.lock().expect("slice cache poisoned").insert((t, d), slice.clone());
        Ok(slice)
    }

    /// Admissible monomials of `(P_t^+)_d`, descending. Solved directly when the
    /// slice fits the column budget, otherwise split by the number of odd
    /// exponents.
    pub fn plus_admissibles(&self, t: usize, d: u32) -> Result<Arc<Vec<Monomial>>> {
        check_n(t)?;
        if let Some(v) = self.plus.lock().expect("plus cache poisoned").get(&(t, d)) {
            return Ok(v.clone());
        }
        let list = if is_trivial_degree(t, d) || (d as usize) < t {
            Vec::new()
        } else if Self::plus_columns(t, d) <= self.max_columns {
            let slice = self.plus_slice(t, d)?;
            slice.echelon.free_columns().into_iter().map(|c| *slice.columns.monomial(c)).collect()
        } else {
            self.plus_by_level(t, d)?
        };
        let list = Arc::new(list);
        self.plus.lock().expect("plus cache poisoned").insert((t, d), list.clone());
        Ok(list)
    }

    fn plus_by_level(&self, t: usize, d: u32) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        for c in (0..=t).rev() {
            out.extend(self.plus_level(t, d, c)?.iter().copied());
        }
        Ok(out)
    }

    /// Admissible monomials of `(P_t^+)_d` with exactly `c` odd exponents,
    /// descending.
    pub fn plus_level(&self, t: usize, d: u32, c: usize) -> Result<Arc<Vec<Monomial>>> {
        check_n(t)?;
        if c > t || (d as usize) < t || (d as usize - c) % 2 == 1 || is_trivial_degree(t, d) || c < mu(d as u64) as usize {
            return Ok(Arc::new(Vec::new()));
        }
        if Self::plus_columns(t, d) <= self.max_columns {
            let all = self.plus_admissibles(t, d)?;
            return Ok(Arc::new(all.iter().filter(|m| m.odd_count() as usize == c).copied().collect()));
        }
        if c == t {
            return Ok(Arc::new(self.admissibles(t, (d - t as u32) / 2)?.iter().map(|a| a.phi_up()).collect()));
        }
        Ok(Arc::new(self.level_system(t, d, c)?.admissibles()))
    }

    /// The relations among level-`c` monomials of `(P_t^+)_d`, `c` in
    /// `{t - 1, t - 2}`.
    pub fn level_system(&self, t: usize, d: u32, c: usize) -> Result<Arc<LevelSystem>> {
        if c + 2 < t {
            return Err(HitError::Infeasible { n: t, d, columns: Self::plus_columns(t, d), limit: self.max_columns });
        }
        if let Some(v) = self.systems.lock().expect("level cache poisoned").get(&(t, d, c)) {
            return Ok(v.clone());
        }
        let system = Arc::new(LevelSystem::solve(self, t, d, c)?);
        self.systems.lock().expect("level cache poisoned").insert((t, d, c), system.clone());
        Ok(system)
    }

    /// Normal forms in a plus slice above the column budget, level by level.
    pub fn split_plus(&self, t: usize, d: u32) -> Result<Arc<SplitPlus>> {
        if let Some(v) = self.splits.lock().expect("split cache poisoned").get(&(t, d)) {
            return Ok(v.clone());
        }
        let split = Arc::new(SplitPlus::new(self, t, d)?);
        self.splits.lock().expect("split cache poisoned").insert((t, d), split.clone());
        Ok(split)
    }

    /// Admissible monomials of `(P_n)_d`, descending, assembled over supports.
    pub fn admissibles(&self, n: usize, d: u32) -> Result<Vec<Monomial>> {
        check_n(n)?;
        if d == 0 {
            return Ok(vec![Monomial::one(n)]);
        }
        let mut out = Vec::new();
        if is_trivial_degree(n, d) {
            return Ok(out);
        }
        for t in 1..=n.min(d as usize) {
            let plus = self.plus_admissibles(t, d)?;
            if plus.is_empty() {
                continue;
            }
            for_each_subset(n, t, |positions| {
                out.extend(plus.iter().map(|m| m.embed(positions, n).expect("valid positions")));
            });
        }
        out.sort_unstable_by_key(|m| std::cmp::Reverse(m.order_key()));
        Ok(out)
    }

    /// `dim (F2 (x)_A P_t^+)_d`.
    pub fn plus_dim(&self, t: usize, d: u32) -> Result<u64> {
        if t == 0 {
            return Ok(u64::from(d == 0));
        }
        Ok(self.plus_admissibles(t, d)?.len() as u64)
    }

    /// Dimension of the requested summand of `(F2 (x)_A P_n)_d`.
    pub fn cohit_dim(&self, n: usize, d: u32, part: Part) -> Result<u64> {
        check_n(n)?;
        if is_trivial_degree(n, d) {
            return Ok(0);
        }
        let mut zero = 0;
        if part != Part::Plus {
            for t in 0..n {
                zero += binomial(n as u64, t as u64) * self.plus_dim(t, d)?;
            }
        }
        Ok(match part {
            Part::Zero => zero,
            Part::Plus => self.plus_dim(n, d)?,
            Part::All => zero + self.plus_dim(n, d)?,
        })
    }

    /// The admissible monomials of `(P_n)_d` together with the hit echelon.
    pub fn admissible_basis(&self, n: usize, d: u32) -> Result<Arc<CohitBasis>> {
        check_n(n)?;
        if let Some(v) = self.bases.lock().expect("basis cache poisoned").get(&(n, d)) {
            return Ok(v.clone());
        }
        let trivial = is_trivial_degree(n, d);
        let mut blocks = vec![None; n + 1];
        let mut admissibles = Vec::new();
        if d == 0 {
            admissibles.push(Monomial::one(n));
        } else if !trivial {
            for (t, block) in blocks.iter_mut().enumerate().take(n.min(d as usize) + 1).skip(1) {
                if is_trivial_degree(t, d) {
                    continue;
                }
                let free = self.plus_admissibles(t, d)?;
                for_each_subset(n, t, |positions| {
                    for m in free.iter() {
                        admissibles.push(m.embed(positions, n).expect("valid positions"));
                    }
                });
                *block = Some(if Self::plus_columns(t, d) <= self.max_columns {
                    PlusBlock::Direct(self.plus_slice(t, d)?)
                } else {
                    PlusBlock::Split(self.split_plus(t, d)?)
                });
            }
        }
        admissibles.sort_unstable_by_key(|m| std::cmp::Reverse(m.order_key()));
        let basis = Arc::new(CohitBasis { n, d, admissibles, blocks, trivial });
        self.bases.lock().expect("basis cache poisoned").insert((n, d), basis.clone());
        Ok(basis)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(HitError::InvalidArgument("variable count must be positive".into()));
    }
    if n > crate::f2poly::MAX_VARS {
        return Err(HitError::TooManyVariables { n, max: crate::f2poly::MAX_VARS });
    }
    Ok(())
}

/// Calls `f` with every increasing `t`-subset of `1..=n`.
pub fn for_each_subset(n: usize, t: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == t {
            f(cur);
            return;
        }
        for i in start..=n {
            if n - i + 1 < t - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, t, cur, f);
            cur.pop();
        }
    }
    rec(1, n, t, &mut Vec::with_capacity(t), &mut f);
}

/// A basis of `(F2 (x)_A P_n)_d` by admissible monomials, with the hit echelon
/// stored blockwise over supports.
#[derive(Clone)]
pub struct CohitBasis {
    n: usize,
    d: u32,
    admissibles: Vec<Monomial>,
    blocks: Vec<Option<PlusBlock>>,
    trivial: bool,
}

/// Hit relations of one plus slice: a full echelon, or level by level.
#[derive(Clone)]
enum PlusBlock {
    Direct(Arc<PlusSlice>),
    Split(Arc<SplitPlus>),
}

impl fmt::Debug for CohitBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohitBasis")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("dim", &self.admissibles.len())
            .finish()
    }
}

impl CohitBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.admissibles.len()
    }

    /// Admissible monomials, descending.
    pub fn admissibles(&self) -> &[Monomial] {
        &self.admissibles
    }

    pub fn dim_part(&self, part: Part) -> usize {
        match part {
            Part::All => self.admissibles.len(),
            Part::Plus => self.admissibles.iter().filter(|m| m.is_plus()).count(),
            Part::Zero => self.admissibles.iter().filter(|m| !m.is_plus()).count(),
        }
    }

    /// Rank of the hit subspace `(A^+ P_n)_d`.
    pub fn hit_rank(&self) -> u64 {
        monomial_count(self.n, self.d) - self.admissibles.len() as u64
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        let key = m.order_key();
        self.admissibles
            .binary_search_by(|a| key.cmp(&a.order_key()))
            .ok()
    }

    pub fn is_admissible(&self, m: &Monomial) -> bool {
        self.index_of(m).is_some()
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.n() != self.n {
            return Err(HitError::ArityMismatch { left: self.n, right: m.n() });
        }
        if m.degree() != self.d {
            return Err(HitError::DegreeMismatch { left: self.d, right: m.degree() });
        }
        Ok(())
    }

    /// The admissible monomials whose sum represents the class of `m`.
    pub fn normal_form_monomial(&self, m: &Monomial) -> Result<Vec<Monomial>> {
        self.check_monomial(m)?;
        if self.trivial {
            return Ok(Vec::new());
        }
        if self.d == 0 {
            return Ok(vec![*m]);
        }
        let positions: Vec<usize> = (1..=self.n).filter(|&j| m.nu(j) > 0).collect();
        let t = positions.len();
        let Some(block) = self.blocks[t].as_ref() else {
            // the whole block is hit
            return Ok(Vec::new());
        };
        let local = Monomial::new(&positions.iter().map(|&j| m.nu(j)).collect::<Vec<_>>())?;
        let slice = match block {
            PlusBlock::Direct(slice) => slice,
            PlusBlock::Split(split) => {
                return split.normal_form(&local)?.iter().map(|a| a.embed(&positions, self.n)).collect();
            }
        };
        let col = slice.columns.index_of(&local).expect("support block contains the monomial") as usize;
        match slice.echelon.pivot_row_columns(col) {
            None => Ok(vec![*m]),
            Some(cols) => cols
                .into_iter()
                .filter(|&c| c != col)
                .map(|c| slice.columns.monomial(c).embed(&positions, self.n))
                .collect(),
        }
    }

    /// The unique representative of `[p]` supported on admissible monomials.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.n() != self.n {
            return Err(HitError::ArityMismatch { left: self.n, right: p.n() });
        }
        let mut terms = Vec::new();
        for m in p.terms() {
            terms.extend(self.normal_form_monomial(m)?);
        }
        Polynomial::from_terms(self.n, terms)
    }

    /// Coordinates of `[p]` in the admissible basis, as sorted indices.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<usize>> {
        let nf = self.normal_form(p)?;
        let mut idx: Vec<usize> = nf
            .terms()
            .iter()
            .map(|m| self.index_of(m).expect("normal forms are supported on admissibles"))
            .collect();
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn is_hit(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

/// A reduced row echelon basis of a subspace of `(P_n)_d`, columns ordered
/// descending under the monomial order so that each pivot is the leading
/// monomial of its row.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    columns: ColumnSet,
    echelon: BitEchelon,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Leading monomials, descending.
    pub fn pivots(&self) -> Vec<Monomial> {
        self.echelon.pivots().into_iter().map(|c| *self.columns.monomial(c)).collect()
    }

    /// Monomials that are not the leading monomial of any element.
    pub fn non_pivots(&self) -> Vec<Monomial> {
        self.echelon.free_columns().into_iter().map(|c| *self.columns.monomial(c)).collect()
    }

    /// The reduced rows, ordered by leading monomial, descending.
    pub fn rows(&self) -> Vec<Polynomial> {
        let n = self.columns.n();
        self.echelon
            .rows_as_columns()
            .into_iter()
            .map(|cols| {
                Polynomial::from_terms(n, cols.into_iter().map(|c| *self.columns.monomial(c)))
                    .expect("rows are homogeneous")
            })
            .collect()
    }

    /// Reduces `p` modulo the span.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut buf = self.echelon.scratch();
        for m in p.terms() {
            let c = self
                .columns
                .index_of(m)
                .ok_or(HitError::DegreeMismatch { left: self.columns.degree(), right: m.degree() })?;
            buf[c as usize / 64] ^= 1 << (c % 64);
        }
        self.echelon.reduce(&mut buf);
        Polynomial::from_terms(
            self.columns.n(),
            set_columns(&buf).into_iter().map(|c| *self.columns.monomial(c)),
        )
    }
}

/// Fully reduced echelon form of the span of `rows` inside `(P_n)_d`.
pub fn echelonize(n: usize, d: u32, rows: impl IntoIterator<Item = Polynomial>) -> Result<EchelonBasis> {
    check_n(n)?;
    let columns = ColumnSet::new(n, d, Region::All);
    let mut echelon = BitEchelon::new(columns.len());
    let mut scratch = echelon.scratch();
    let mut cols = Vec::new();
    for row in rows {
        if row.n() != n {
            return Err(HitError::ArityMismatch { left: n, right: row.n() });
        }
        if let Some(e) = row.degree() {
            if e != d {
                return Err(HitError::DegreeMismatch { left: d, right: e });
            }
        }
        cols.clear();
        cols.extend(row.terms().iter().map(|m| columns.index_of(m).expect("degree checked")));
        if !cols.is_empty() {
            echelon.insert_columns(&cols, &mut scratch);
        }
    }
    echelon.reduce_fully();
    Ok(EchelonBasis { columns, echelon })
}
