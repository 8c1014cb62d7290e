#![allow(dead_code)]

pub mod props;

use std::collections::{HashMap, HashSet};

/// Exponent vectors of degree `d` in `n` variables.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(i + 1, n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Binomial coefficients mod 2 from Pascal's triangle.
pub struct Pascal(Vec<Vec<bool>>);

impl Pascal {
    pub fn new(max: usize) -> Self {
        let mut t = vec![vec![false; max + 1]; max + 1];
        for a in 0..=max {
            t[a][0] = true;
            for k in 1..=a {
                t[a][k] = t[a - 1][k - 1] ^ t[a - 1][k];
            }
        }
        Pascal(t)
    }

    pub fn odd(&self, a: u32, k: u32) -> bool {
        k <= a && self.0[a as usize][k as usize]
    }
}

type Poly = HashSet<Vec<u32>>;

fn toggle(p: &mut Poly, m: Vec<u32>) {
    if !p.remove(&m) {
        p.insert(m);
    }
}

/// `Sq^k` of a monomial by summing over all splittings of `k` across the
/// variables.
pub fn naive_sq(pascal: &Pascal, k: u32, a: &[u32]) -> Poly {
    let mut out = Poly::new();
    fn rec(pascal: &Pascal, i: usize, left: u32, a: &[u32], cur: &mut Vec<u32>, out: &mut Poly) {
        if i == a.len() {
            if left == 0 {
                toggle(out, cur.clone());
            }
            return;
        }
        for ki in 0..=left.min(a[i]) {
            if pascal.odd(a[i], ki) {
                cur.push(a[i] + ki);
                rec(pascal, i + 1, left - ki, a, cur, out);
                cur.pop();
            }
        }
    }
    rec(pascal, 0, k, a, &mut Vec::new(), &mut out);
    out
}

/// Row-reduced span of bit rows over `ncols` columns; pivot = lowest column.
pub struct Rref {
    pub ncols: usize,
    pub rows: HashMap<usize, Vec<u64>>,
}

fn lowest(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], c: usize) -> bool {
    v[c / 64] >> (c % 64) & 1 == 1
}

fn xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

impl Rref {
    pub fn new(ncols: usize) -> Self {
        Rref { ncols, rows: HashMap::new() }
    }

    pub fn words(&self) -> usize {
        self.ncols.div_ceil(64)
    }

    pub fn add(&mut self, mut v: Vec<u64>) {
        while let Some(p) = lowest(&v) {
            match self.rows.get(&p) {
                Some(r) => xor(&mut v, r),
                None => {
                    for r in self.rows.values_mut() {
                        if bit(r, p) {
                            xor(r, &v);
                        }
                    }
                    self.rows.insert(p, v);
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` so that no pivot column is set.
    pub fn reduce(&self, v: &mut [u64]) {
        for c in 0..self.ncols {
            if bit(v, c) {
                if let Some(r) = self.rows.get(&c) {
                    xor(v, r);
                }
            }
        }
    }
}

/// The cohit space of a slice computed from the full span of `Sq^k`, `k >= 1`.
pub struct NaiveCohit {
    pub n: usize,
    pub d: u32,
    pub monomials: Vec<Vec<u32>>,
    pub index: HashMap<Vec<u32>, usize>,
    pub hits: Rref,
}

impl NaiveCohit {
    pub fn new(n: usize, d: u32) -> Self {
        let monomials = exponent_vectors(n, d);
        let index: HashMap<_, _> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let pascal = Pascal::new(d as usize + 1);
        let mut hits = Rref::new(monomials.len());
        for k in 1..=d {
            for a in exponent_vectors(n, d - k) {
                let mut v = vec![0u64; hits.words()];
                for m in naive_sq(&pascal, k, &a) {
                    let c = index[&m];
                    v[c / 64] ^= 1 << (c % 64);
                }
                hits.add(v);
            }
        }
        NaiveCohit { n, d, monomials, index, hits }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() - self.hits.rank()
    }

    /// Columns that index a basis of the quotient.
    pub fn free(&self) -> Vec<usize> {
        (0..self.monomials.len()).filter(|c| !self.hits.rows.contains_key(c)).collect()
    }

    /// Quotient coordinates of a polynomial, indexed like [`Self::free`].
    pub fn coordinates(&self, p: &Poly) -> Vec<bool> {
        let mut v = vec![0u64; self.hits.words()];
        for m in p {
            let c = self.index[m];
            v[c / 64] ^= 1 << (c % 64);
        }
        self.hits.reduce(&mut v);
        self.free().into_iter().map(|c| bit(&v, c)).collect()
    }
}

/// Weight vector of an exponent vector, trailing zeros dropped.
pub fn weight(a: &[u32]) -> Vec<u32> {
    let mut w: Vec<u32> = (0..32).map(|i| a.iter().filter(|&&x| x >> i & 1 == 1).count() as u32).collect();
    while w.last() == Some(&0) {
        w.pop();
    }
    w
}

/// `dim QP_n(omega)` from the two-phase recipe: intersect the hits with the
/// span of monomials of weight at most `omega`, then quotient the weight-`omega`
/// monomials by that intersection and by everything of smaller weight.
pub fn naive_weight_dim(n: usize, omega: &[u32]) -> usize {
    let d: u32 = omega.iter().enumerate().map(|(i, w)| w << i).sum();
    let all = exponent_vectors(n, d);
    // columns of weight > omega first, so eliminating them leaves the rows
    // lying in weight <= omega
    let mut order: Vec<Vec<u32>> = all.clone();
    order.sort_by_key(|m| std::cmp::Reverse(weight(m)));
    let index: HashMap<_, _> = order.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let high = order.iter().filter(|m| weight(m).as_slice() > omega).count();
    let pascal = Pascal::new(d as usize + 1);
    let mut hits = Rref::new(order.len());
    for k in 1..=d {
        for a in exponent_vectors(n, d - k) {
            let mut v = vec![0u64; hits.words()];
            for m in naive_sq(&pascal, k, &a) {
                let c = index[&m];
                v[c / 64] ^= 1 << (c % 64);
            }
            hits.add(v);
        }
    }
    let target: Vec<usize> = (0..order.len()).filter(|&c| weight(&order[c]).as_slice() == omega).collect();
    let mut proj = Rref::new(target.len());
    for (&p, row) in &hits.rows {
        if p < high {
            continue;
        }
        let mut v = vec![0u64; proj.words()];
        for (i, &c) in target.iter().enumerate() {
            if bit(row, c) {
                v[i / 64] ^= 1 << (i % 64);
            }
        }
        proj.add(v);
    }
    target.len() - proj.rank()
}

/// All invertible `n x n` matrices over F2 as rows.
pub fn gl_elements(n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << (n * n)) {
        let m: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| (bits >> (i * n + j) & 1) as u8).collect()).collect();
        let rows: Vec<u64> = m.iter().map(|r| r.iter().enumerate().fold(0u64, |a, (j, &e)| a | (u64::from(e) << j))).collect();
        let mut r = Rref::new(n);
        for row in rows {
            r.add(vec![row]);
        }
        if r.rank() == n {
            out.push(m);
        }
    }
    out
}

/// `x_j -> sum_i g[i][j] x_i` applied to a monomial, expanded factor by factor.
pub fn naive_substitute(g: &[Vec<u8>], a: &[u32]) -> Poly {
    let n = a.len();
    let mut p: Poly = [vec![0u32; n]].into_iter().collect();
    for j in 0..n {
        for _ in 0..a[j] {
            let mut next = Poly::new();
            for m in &p {
                for i in 0..n {
                    if g[i][j] == 1 {
                        let mut m2 = m.clone();
                        m2[i] += 1;
                        toggle(&mut next, m2);
                    }
                }
            }
            p = next;
        }
    }
    p
}

/// Dimension of the subspace of the cohit space fixed by every group element.
pub fn naive_invariant_dim(n: usize, d: u32) -> usize {
    let q = NaiveCohit::new(n, d);
    let free = q.free();
    let dim = free.len();
    let mut stacked = Rref::new(dim);
    for g in gl_elements(n) {
        // rows of M_g - I, where column j of M_g is the image of basis vector j
        let mut rows = vec![vec![0u64; stacked.words()]; dim];
        for (j, &c) in free.iter().enumerate() {
            let image = q.coordinates(&naive_substitute(&g, &q.monomials[c]));
            for (i, &set) in image.iter().enumerate() {
                if set ^ (i == j) {
                    rows[i][j / 64] ^= 1 << (j % 64);
                }
            }
        }
        for row in rows {
            stacked.add(row);
        }
    }
    dim - stacked.rank()
}
