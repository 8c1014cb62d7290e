//! Monomials and homogeneous polynomials over F2, weight vectors and the
//! weight-then-exponent order on monomials of a fixed degree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HitError, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// Number of dyadic positions tracked in a weight vector.
const WEIGHT_SLOTS: usize = 32;

/// A monomial `x_1^a_1 ... x_n^a_n`, stored inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    n: u8,
    exps: [u32; MAX_VARS],
}

/// Sort key realising the monomial order: weight vector first, then the
/// exponent vector, both left-lexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrderKey {
    weight: [u8; WEIGHT_SLOTS],
    sigma: [u32; MAX_VARS],
}

impl OrderKey {
    /// The weight part of the key.
    pub fn weight_slots(&self) -> &[u8; WEIGHT_SLOTS] {
        &self.weight
    }
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.is_empty() {
            return Err(HitError::InvalidArgument("a monomial needs at least one variable".into()));
        }
        if exps.len() > MAX_VARS {
            return Err(HitError::TooManyVariables { n: exps.len(), max: MAX_VARS });
        }
        let mut m = Monomial { n: exps.len() as u8, exps: [0; MAX_VARS] };
        m.exps[..exps.len()].copy_from_slice(exps);
        Ok(m)
    }

    /// The constant monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&n));
        Monomial { n: n as u8, exps: [0; MAX_VARS] }
    }

    /// The generator `x_j` (1-based `j`).
    pub fn var(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n);
        let mut m = Monomial::one(n);
        m.exps[j - 1] = 1;
        m
    }

    /// `x_1 x_2 ... x_n`.
    pub fn product_of_all(n: usize) -> Self {
        let mut m = Monomial::one(n);
        m.exps[..n].iter_mut().for_each(|e| *e = 1);
        m
    }

    /// `X_J`: the product of the variables whose (1-based) index is not in `j`.
    pub fn x_j(n: usize, j: &[usize]) -> Self {
        let mut m = Monomial::product_of_all(n);
        for &i in j {
            assert!(i >= 1 && i <= n);
            m.exps[i - 1] = 0;
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps[..self.n as usize]
    }

    #[inline]
    pub(crate) fn exponents_mut(&mut self) -> &mut [u32] {
        &mut self.exps[..self.n as usize]
    }

    /// Exponent of `x_j`, 1-based.
    pub fn nu(&self, j: usize) -> u32 {
        self.exps[j - 1]
    }

    pub fn degree(&self) -> u32 {
        self.exponents().iter().sum()
    }

    /// Bitmask of the variables that occur.
    pub fn support(&self) -> u32 {
        self.exponents()
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &a)| if a > 0 { acc | 1 << j } else { acc })
    }

    /// True when every variable occurs (the monomial lies in the plus part).
    pub fn is_plus(&self) -> bool {
        self.exponents().iter().all(|&a| a > 0)
    }

    /// Number of odd exponents, i.e. the first weight entry.
    pub fn odd_count(&self) -> u32 {
        self.exponents().iter().filter(|&&a| a & 1 == 1).count() as u32
    }

    /// The exponent vector.
    pub fn sigma(&self) -> Vec<u32> {
        self.exponents().to_vec()
    }

    pub fn weight_vector(&self) -> WeightVector {
        let mut w = vec![0u32; WEIGHT_SLOTS];
        for &a in self.exponents() {
            let mut a = a;
            let mut i = 0;
            while a != 0 {
                w[i] += a & 1;
                a >>= 1;
                i += 1;
            }
        }
        WeightVector::new(w)
    }

    #[inline]
    pub fn order_key(&self) -> OrderKey {
        let mut weight = [0u8; WEIGHT_SLOTS];
        for &a in self.exponents() {
            let mut a = a;
            while a != 0 {
                let i = a.trailing_zeros() as usize;
                weight[i] += 1;
                a &= a - 1;
            }
        }
        OrderKey { weight, sigma: self.exps }
    }

    /// Comparison under the monomial order, without a degree check.
    #[inline]
    pub fn order_cmp(&self, other: &Monomial) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        if self.n != other.n {
            return Err(HitError::ArityMismatch { left: self.n(), right: other.n() });
        }
        let mut out = *self;
        for (a, b) in out.exponents_mut().iter_mut().zip(other.exponents()) {
            *a += b;
        }
        Ok(out)
    }

    pub fn square(&self) -> Monomial {
        let mut out = *self;
        out.exponents_mut().iter_mut().for_each(|a| *a *= 2);
        out
    }

    /// `x_1 ... x_n * m^2`.
    pub fn phi_up(&self) -> Monomial {
        let mut out = *self;
        out.exponents_mut().iter_mut().for_each(|a| *a = 2 * *a + 1);
        out
    }

    /// The Kameko down map on monomials: `x_1 ... x_n * y^2 -> y`, anything
    /// with an even exponent goes to zero (`None`).
    pub fn s_down(&self) -> Option<Monomial> {
        if self.exponents().iter().any(|a| a & 1 == 0) {
            return None;
        }
        let mut out = *self;
        out.exponents_mut().iter_mut().for_each(|a| *a >>= 1);
        Some(out)
    }

    /// Substitute `x_l -> x_{positions[l]}` into `n` variables; positions are
    /// 1-based and strictly increasing.
    pub fn embed(&self, positions: &[usize], n: usize) -> Result<Monomial> {
        if positions.len() != self.n() {
            return Err(HitError::InvalidArgument(format!(
                "expected {} positions, got {}",
                self.n(),
                positions.len()
            )));
        }
        if n > MAX_VARS {
            return Err(HitError::TooManyVariables { n, max: MAX_VARS });
        }
        if positions.len() > n {
            return Err(HitError::InvalidArgument("more positions than target variables".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) || positions.iter().any(|&p| p == 0 || p > n) {
            return Err(HitError::InvalidArgument(format!("malformed positions {positions:?}")));
        }
        let mut out = Monomial::one(n);
        for (l, &p) in positions.iter().enumerate() {
            out.exps[p - 1] = self.exps[l];
        }
        Ok(out)
    }

    /// The map `P_{n-1} -> P_n` skipping variable `t` (1-based).
    pub fn skip_variable(&self, t: usize) -> Result<Monomial> {
        let n = self.n() + 1;
        if t == 0 || t > n {
            return Err(HitError::InvalidArgument(format!("variable {t} out of range 1..={n}")));
        }
        let positions: Vec<usize> = (1..=n).filter(|&i| i != t).collect();
        self.embed(&positions, n)
    }

    /// The index sets `J_t = { j : bit t of a_j is 0 }` for every bit position
    /// below the top one, 1-based.
    pub fn dyadic_index_sets(&self) -> Vec<Vec<usize>> {
        let top = self.exponents().iter().map(|a| 32 - a.leading_zeros()).max().unwrap_or(0);
        (0..top)
            .map(|t| {
                (1..=self.n())
                    .filter(|&j| (self.exps[j - 1] >> t) & 1 == 0)
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.exponents().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Monomial {
    type Err = HitError;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| HitError::Parse(format!("monomial must be parenthesised: {s:?}")))?;
        let exps = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| HitError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Monomial::new(&exps)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Total order on monomials of one degree.
pub fn cmp_monomials(u: &Monomial, v: &Monomial) -> Result<Ordering> {
    if u.n() != v.n() {
        return Err(HitError::ArityMismatch { left: u.n(), right: v.n() });
    }
    let (du, dv) = (u.degree(), v.degree());
    if du != dv {
        return Err(HitError::DegreeMismatch { left: du, right: dv });
    }
    Ok(u.order_cmp(v))
}

/// A weight vector `(w_1, w_2, ...)` with trailing zeros trimmed. Ordered
/// left-lexicographically, which on trimmed vectors agrees with zero padding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        WeightVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `sum_i 2^(i-1) w_i`.
    pub fn degree(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &w)| (w as u64) << i).sum()
    }

    /// First entry, zero for the empty vector.
    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// `(head, self)`: the weight of `x_1..x_k * y^2` given the weight of `y`.
    pub fn prepend(&self, head: u32) -> WeightVector {
        let mut e = Vec::with_capacity(self.0.len() + 1);
        e.push(head);
        e.extend_from_slice(&self.0);
        WeightVector::new(e)
    }

    /// The vector with its first entry dropped.
    pub fn tail(&self) -> WeightVector {
        WeightVector::new(self.0.iter().skip(1).copied().collect())
    }

    /// Same layout as the weight part of [`OrderKey`].
    pub(crate) fn slots(&self) -> [u8; WEIGHT_SLOTS] {
        let mut s = [0u8; WEIGHT_SLOTS];
        for (i, &w) in self.0.iter().enumerate().take(WEIGHT_SLOTS) {
            s[i] = w as u8;
        }
        s
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for WeightVector {
    type Err = HitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('(').unwrap_or(s);
        let s = s.strip_suffix(')').unwrap_or(s);
        let entries = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<u32>().map_err(|e| HitError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightVector::new(entries))
    }
}

/// A homogeneous polynomial over F2: a set of monomials of one degree, kept
/// sorted descending under the monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: Vec::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Polynomial { n: m.n(), terms: vec![m] }
    }

    /// Builds the sum of `terms`; repeated monomials cancel in pairs.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut keyed: Vec<(OrderKey, Monomial)> = Vec::new();
        let mut degree = None;
        for m in terms {
            if m.n() != n {
                return Err(HitError::ArityMismatch { left: n, right: m.n() });
            }
            let d = m.degree();
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(HitError::DegreeMismatch { left: e, right: d }),
                _ => {}
            }
            keyed.push((m.order_key(), m));
        }
        keyed.sort_unstable_by_key(|k| std::cmp::Reverse(k.0));
        let mut out: Vec<Monomial> = Vec::with_capacity(keyed.len());
        let mut i = 0;
        while i < keyed.len() {
            let mut j = i;
            while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(keyed[i].1);
            }
            i = j;
        }
        Ok(Polynomial { n, terms: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Common degree of the terms, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|m| m.degree())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The largest monomial.
    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        let key = m.order_key();
        self.terms
            .binary_search_by(|t| key.cmp(&t.order_key()))
            .is_ok()
    }

    /// Sum over F2 (symmetric difference of the term sets).
    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.n != other.n {
            return Err(HitError::ArityMismatch { left: self.n, right: other.n });
        }
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a != b {
                return Err(HitError::DegreeMismatch { left: a, right: b });
            }
        }
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].order_cmp(&other.terms[j]) {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Polynomial { n: self.n, terms: out })
    }

    /// Product with a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let terms = self.terms.iter().map(|t| t.mul(m)).collect::<Result<Vec<_>>>()?;
        // multiplication by a monomial is order preserving within a degree
        Polynomial::from_terms(self.n, terms)
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.n != other.n {
            return Err(HitError::ArityMismatch { left: self.n, right: other.n });
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Polynomial::from_terms(self.n, terms)
    }

    pub fn square(&self) -> Polynomial {
        Polynomial::from_terms(self.n, self.terms.iter().map(|m| m.square()))
            .expect("squares stay homogeneous")
    }

    /// Applies a monomial map termwise (dropping `None`).
    pub fn map_terms(&self, n: usize, f: impl Fn(&Monomial) -> Option<Monomial>) -> Result<Polynomial> {
        Polynomial::from_terms(n, self.terms.iter().filter_map(f))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Polynomial {
    type Err = HitError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Err(HitError::Parse("the zero polynomial carries no arity; use Polynomial::zero".into()));
        }
        let terms = s.split('+').map(|t| t.parse::<Monomial>()).collect::<Result<Vec<_>>>()?;
        let n = terms[0].n();
        Polynomial::from_terms(n, terms)
    }
}

impl From<Monomial> for Polynomial {
    fn from(m: Monomial) -> Self {
        Polynomial::from_monomial(m)
    }
}

/// Calls `f` on every exponent vector of degree `d` in `n` variables, in
/// lexicographically decreasing order of exponents.
pub fn for_each_monomial(n: usize, d: u32, mut f: impl FnMut(&Monomial)) {
    assert!((1..=MAX_VARS).contains(&n));
    let mut m = Monomial::one(n);
    fn rec(m: &mut Monomial, j: usize, rest: u32, f: &mut impl FnMut(&Monomial)) {
        let n = m.n();
        if j == n - 1 {
            m.exps[j] = rest;
            f(m);
            return;
        }
        for a in (0..=rest).rev() {
            m.exps[j] = a;
            rec(m, j + 1, rest - a, f);
        }
    }
    rec(&mut m, 0, d, &mut f);
}

/// All monomials of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for_each_monomial(n, d, |m| out.push(*m));
    out
}

/// `C(d + n - 1, n - 1)`, the number of monomials of degree `d` in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> u64 {
    binomial(d as u64 + n as u64 - 1, n as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}
