//! Closed forms and stability results that replace direct solves at large
//! degrees, and a planner that strings them together.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{alpha, mu, xi};
use crate::error::{HitError, Result};
use crate::f2poly::{binomial, Monomial};
use crate::hitsolver::{Part, Solver};

/// Which family a shape belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// `(n - 1)(2^r - 1) + 2^r m`
    Sum,
    /// `n (2^r - 1) + 2^r m`
    Kameko,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeShape {
    pub kind: ShapeKind,
    pub n: usize,
    pub r: u32,
    pub m: u64,
}

impl DegreeShape {
    pub fn sum(n: usize, r: u32, m: u64) -> Self {
        DegreeShape { kind: ShapeKind::Sum, n, r, m }
    }

    pub fn kameko(n: usize, r: u32, m: u64) -> Self {
        DegreeShape { kind: ShapeKind::Kameko, n, r, m }
    }

    fn coefficient(&self) -> u64 {
        match self.kind {
            ShapeKind::Sum => self.n as u64 - 1,
            ShapeKind::Kameko => self.n as u64,
        }
    }

    /// The degree the shape describes, `None` on overflow.
    pub fn degree(&self) -> Option<u64> {
        let p = 1u64.checked_shl(self.r)?;
        if p == 0 || self.r >= 63 {
            return None;
        }
        self.coefficient().checked_mul(p - 1)?.checked_add(p.checked_mul(self.m)?)
    }

    /// Every shape of `kind` realising degree `d`, by increasing `r`.
    pub fn all_for(kind: ShapeKind, n: usize, d: u64) -> Vec<DegreeShape> {
        let c = match kind {
            ShapeKind::Sum => n as u64 - 1,
            ShapeKind::Kameko => n as u64,
        };
        let s = d + c;
        let mut out = Vec::new();
        let mut r = 0;
        while r < 63 && (1u64 << r) <= s {
            if s.is_multiple_of(1u64 << r) && s >> r >= c {
                out.push(DegreeShape { kind, n, r, m: (s >> r) - c });
            }
            r += 1;
        }
        out
    }
}

/// Zero-part dimension from plus-part dimensions in fewer variables:
/// `sum_{mu(d) <= t <= n-1} C(n, t) dim plus(t, d)`.
pub fn mkr_zero_part(n: usize, d: u64, plus_dims: &BTreeMap<usize, u64>) -> Result<u64> {
    let low = mu(d) as usize;
    let mut total = 0u64;
    for t in low.max(1)..n {
        let dim = plus_dims
            .get(&t)
            .ok_or_else(|| HitError::Precondition(format!("missing plus-part dimension for t = {t}")))?;
        total += binomial(n as u64, t as u64) * dim;
    }
    if d == 0 && n > 0 {
        // the constant 1 has no variable present
        total += 1;
    }
    Ok(total)
}

/// `(2^n - 1) dim (F2 (x)_A P_{n-1})_m` for `d = (n-1)(2^r - 1) + 2^r m`.
pub fn sum_formula(n: usize, r: u32, m: u64, dim_prev: u64) -> Result<u64> {
    check_sum_preconditions(n, r, m)?;
    Ok(((1u64 << n) - 1) * dim_prev)
}

/// The preconditions of the inductive formula: `n >= 4`, `r >= n - 1`,
/// `n - 3 <= mu(m) <= n - 2` and `mu(m) = alpha(m + mu(m))`.
pub fn check_sum_preconditions(n: usize, r: u32, m: u64) -> Result<()> {
    if n < 4 {
        return Err(HitError::Precondition(format!("n - 3 >= 1 fails: n = {n}")));
    }
    if (r as usize) < n - 1 {
        return Err(HitError::Precondition(format!("r >= n - 1 fails: r = {r}, n - 1 = {}", n - 1)));
    }
    let u = mu(m) as usize;
    if u < n - 3 {
        return Err(HitError::Precondition(format!("mu(m) >= n - 3 fails: mu({m}) = {u}, n - 3 = {}", n - 3)));
    }
    if u > n - 2 {
        return Err(HitError::Precondition(format!("mu(m) <= n - 2 fails: mu({m}) = {u}, n - 2 = {}", n - 2)));
    }
    if !sum_formula_advisory(m) {
        return Err(HitError::Precondition(format!(
            "mu(m) = alpha(m + mu(m)) fails: mu({m}) = {u}, alpha({}) = {}",
            m + u as u64,
            alpha(m + u as u64)
        )));
    }
    Ok(())
}

/// The condition `mu(m) = alpha(m + mu(m))`.
pub fn sum_formula_advisory(m: u64) -> bool {
    let u = mu(m) as u64;
    u == alpha(m + u) as u64
}

/// The least `t` such that the degrees `n(2^r - 1) + 2^r m`, `r >= t`, all
/// have isomorphic cohit spaces.
pub fn xi_iso_range(n: usize, m: u64) -> u32 {
    xi(n, m)
}

/// Budget for the direct solves at the leaves of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanHints {
    pub max_columns: u64,
    /// Allow steps that produce a dimension but no basis.
    pub allow_formula: bool,
}

impl Default for PlanHints {
    fn default() -> Self {
        PlanHints { max_columns: crate::hitsolver::DEFAULT_MAX_COLUMNS, allow_formula: true }
    }
}

/// A computation route for a cohit dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum Strategy {
    /// `alpha(d + n) > n`: nothing survives.
    Wood { n: usize, d: u64 },
    /// `(2^n - 1)` times the dimension at `(n - 1, m)`.
    SumFormula { n: usize, d: u64, r: u32, m: u64, child: Box<Strategy> },
    /// Iterated Kameko maps are isomorphisms down to `target`.
    KamekoIso { n: usize, d: u64, m: u64, r: u32, t: u32, target: u64, child: Box<Strategy> },
    /// Zero part by supports, kernel on the plus part by weight spaces at the
    /// listed numbers of odd exponents, image by recursion.
    Split {
        n: usize,
        d: u64,
        zero: Vec<Strategy>,
        kernel_levels: Vec<usize>,
        image: Box<Strategy>,
    },
    /// Plus part of `(t, d)`, used for the zero-part assembly.
    Plus { t: usize, d: u64, columns: u64, feasible: bool },
    /// Direct elimination over all supports.
    Direct { n: usize, d: u64, columns: u64, feasible: bool },
}

impl Strategy {
    pub fn degree(&self) -> u64 {
        match self {
            Strategy::Wood { d, .. }
            | Strategy::SumFormula { d, .. }
            | Strategy::KamekoIso { d, .. }
            | Strategy::Split { d, .. }
            | Strategy::Plus { d, .. }
            | Strategy::Direct { d, .. } => *d,
        }
    }

    /// Whether every leaf is within budget.
    pub fn is_feasible(&self) -> bool {
        match self {
            Strategy::Wood { .. } => true,
            Strategy::SumFormula { child, .. } | Strategy::KamekoIso { child, .. } => child.is_feasible(),
            Strategy::Split { zero, image, .. } => zero.iter().all(Strategy::is_feasible) && image.is_feasible(),
            Strategy::Plus { feasible, .. } | Strategy::Direct { feasible, .. } => *feasible,
        }
    }

    /// One line per step, children indented.
    pub fn steps(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.push_steps(0, &mut out);
        out
    }

    fn push_steps(&self, depth: usize, out: &mut Vec<String>) {
        let pad = "  ".repeat(depth);
        match self {
            Strategy::Wood { n, d } => out.push(format!("{pad}wood ({n},{d}): alpha(d+n) > n, dimension 0")),
            Strategy::SumFormula { n, d, r, m, child } => {
                out.push(format!("{pad}sum-formula ({n},{d}) = (2^{n}-1) * dim({},{m}), r = {r}", n - 1));
                child.push_steps(depth + 1, out);
            }
            Strategy::KamekoIso { n, d, m, r, t, target, child } => {
                out.push(format!("{pad}kameko-iso ({n},{d}) -> ({n},{target}): m = {m}, r = {r} -> t = xi = {t}"));
                child.push_steps(depth + 1, out);
            }
            Strategy::Split { n, d, zero, kernel_levels, image } => {
                out.push(format!("{pad}split ({n},{d}) = zero + kernel + image"));
                let ts: Vec<String> = zero
                    .iter()
                    .filter_map(|s| match s {
                        Strategy::Plus { t, .. } => Some(t.to_string()),
                        _ => None,
                    })
                    .collect();
                out.push(format!("{pad}  mkr-formula zero part over t = {}", ts.join(",")));
                for s in zero {
                    s.push_steps(depth + 2, out);
                }
                let ls: Vec<String> = kernel_levels.iter().map(|c| c.to_string()).collect();
                out.push(format!("{pad}  weight-decompose kernel, first weight entry in {{{}}}", ls.join(",")));
                out.push(format!("{pad}  kameko image from:"));
                image.push_steps(depth + 2, out);
            }
            Strategy::Plus { t, d, columns, feasible } => out.push(format!(
                "{pad}direct-solve plus part ({t},{d}), {columns} columns{}",
                if *feasible { "" } else { " [over budget]" }
            )),
            Strategy::Direct { n, d, columns, feasible } => out.push(format!(
                "{pad}direct-solve ({n},{d}), {columns} columns in the largest block{}",
                if *feasible { "" } else { " [over budget]" }
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.steps().join("\n"))
    }
}

/// Builds a computation route for `(n, d)`. Preference order: Wood, the
/// inductive formula, a Kameko isomorphism down to the least equivalent
/// degree, the zero/kernel/image split, a direct solve.
pub fn plan(n: usize, d: u64, hints: &PlanHints) -> Strategy {
    if alpha(d + n as u64) as usize > n {
        return Strategy::Wood { n, d };
    }
    if hints.allow_formula && n >= 4 {
        for shape in DegreeShape::all_for(ShapeKind::Sum, n, d).into_iter().rev() {
            if check_sum_preconditions(n, shape.r, shape.m).is_ok() {
                let child = Box::new(plan(n - 1, shape.m, hints));
                return Strategy::SumFormula { n, d, r: shape.r, m: shape.m, child };
            }
        }
    }
    if let Some(base) = DegreeShape::all_for(ShapeKind::Kameko, n, d).into_iter().last() {
        let t = xi(n, base.m);
        if base.r > t {
            let target = DegreeShape::kameko(n, t, base.m).degree().expect("smaller than d");
            let child = Box::new(plan(n, target, hints));
            return Strategy::KamekoIso { n, d, m: base.m, r: base.r, t, target, child };
        }
    }
    let columns = if d > u32::MAX as u64 { u64::MAX } else { Solver::plus_columns(n, d as u32) };
    let lowest = mu(d) as usize;
    if columns > hints.max_columns && n >= 2 && d >= n as u64 && (d - n as u64).is_multiple_of(2) && lowest + 2 >= n {
        let zero = (lowest.max(1)..n)
            .map(|t| {
                let columns = Solver::plus_columns(t, d as u32);
                Strategy::Plus { t, d, columns, feasible: columns <= hints.max_columns }
            })
            .collect();
        let kernel_levels = (lowest..n).filter(|c| (d as usize - c).is_multiple_of(2)).collect();
        let image = Box::new(plan(n, (d - n as u64) / 2, hints));
        return Strategy::Split { n, d, zero, kernel_levels, image };
    }
    Strategy::Direct { n, d, columns, feasible: columns <= hints.max_columns }
}

/// Result of executing a strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub dim: u64,
    pub basis: Option<Vec<Monomial>>,
}

fn small_degree(d: u64) -> Result<u32> {
    u32::try_from(d).map_err(|_| HitError::InvalidArgument(format!("degree {d} is too large")))
}

fn sorted(mut b: Vec<Monomial>) -> Vec<Monomial> {
    b.sort_unstable_by_key(|m| std::cmp::Reverse(m.order_key()));
    b
}

fn restrict(basis: Vec<Monomial>, part: Part) -> Vec<Monomial> {
    match part {
        Part::All => basis,
        Part::Plus => basis.into_iter().filter(|m| m.is_plus()).collect(),
        Part::Zero => basis.into_iter().filter(|m| !m.is_plus()).collect(),
    }
}

/// Runs a strategy. Bases are carried through every step except the
/// inductive formula, which yields only a dimension of the whole space.
pub fn execute(strategy: &Strategy, solver: &Solver, part: Part) -> Result<Outcome> {
    match strategy {
        Strategy::Wood { .. } => Ok(Outcome { dim: 0, basis: Some(Vec::new()) }),
        Strategy::SumFormula { n, r, m, child, .. } => {
            if part != Part::All {
                return Err(HitError::Precondition("the inductive formula yields the whole space only".into()));
            }
            let prev = execute(child, solver, Part::All)?;
            Ok(Outcome { dim: sum_formula(*n, *r, *m, prev.dim)?, basis: None })
        }
        Strategy::KamekoIso { r, t, child, .. } => {
            // an isomorphism onto the image leaves no zero part
            let below = execute(child, solver, Part::All)?;
            let basis = below.basis.map(|b| {
                let lifted = b
                    .into_iter()
                    .map(|mut x| {
                        for _ in 0..r - t {
                            x = x.phi_up();
                        }
                        x
                    })
                    .collect();
                restrict(sorted(lifted), part)
            });
            let dim = match (&basis, part) {
                (Some(b), _) => b.len() as u64,
                (None, Part::Zero) => 0,
                (None, _) => below.dim,
            };
            Ok(Outcome { dim, basis })
        }
        Strategy::Split { n, d, zero, kernel_levels, image } => {
            let n = *n;
            let d = small_degree(*d)?;
            let mut basis = Vec::new();
            if part != Part::Plus {
                for s in zero {
                    let Strategy::Plus { t, .. } = s else { continue };
                    let plus = execute(s, solver, Part::All)?.basis.unwrap_or_default();
                    crate::hitsolver::for_each_subset(n, *t, |positions| {
                        basis.extend(plus.iter().map(|m| m.embed(positions, n).expect("valid positions")));
                    });
                }
            }
            if part != Part::Zero {
                for &c in kernel_levels {
                    basis.extend(solver.plus_level(n, d, c)?.iter().copied());
                }
                let below = execute(image, solver, Part::All)?;
                let below = below
                    .basis
                    .ok_or_else(|| HitError::Precondition("image step produced no basis".into()))?;
                basis.extend(below.into_iter().map(|m| m.phi_up()));
            }
            let basis = sorted(basis);
            Ok(Outcome { dim: basis.len() as u64, basis: Some(basis) })
        }
        Strategy::Plus { t, d, columns, feasible } => {
            if !feasible {
                return Err(HitError::Infeasible { n: *t, d: small_degree(*d)?, columns: *columns, limit: solver.max_columns() });
            }
            let basis = solver.plus_admissibles(*t, small_degree(*d)?)?.to_vec();
            Ok(Outcome { dim: basis.len() as u64, basis: Some(basis) })
        }
        Strategy::Direct { n, d, columns, feasible } => {
            if !feasible {
                return Err(HitError::Infeasible { n: *n, d: small_degree(*d)?, columns: *columns, limit: solver.max_columns() });
            }
            let basis = restrict(solver.admissibles(*n, small_degree(*d)?)?, part);
            Ok(Outcome { dim: basis.len() as u64, basis: Some(basis) })
        }
    }
}
