//! Dense bit-packed row echelon over F2.
//!
//! Columns are numbered `0..ncols`; column `c` lives in word `c / 64`, bit
//! `c % 64`. The pivot of a row is its lowest set column. Rows are stored from
//! the word holding their pivot onwards, since everything before is zero.

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Row {
    pivot: u32,
    start: u32,
    data: Box<[u64]>,
}

impl Row {
    #[inline]
    fn bit(&self, col: usize) -> bool {
        let w = col / 64;
        let s = self.start as usize;
        w >= s && (self.data[w - s] >> (col % 64)) & 1 == 1
    }
}

/// A row echelon form under construction. After [`BitEchelon::reduce_fully`]
/// no pivot column is set in any other row.
#[derive(Clone, Debug)]
pub struct BitEchelon {
    ncols: usize,
    nwords: usize,
    pivot_of_col: Vec<u32>,
    rows: Vec<Row>,
    fully_reduced: bool,
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

impl BitEchelon {
    pub fn new(ncols: usize) -> Self {
        BitEchelon {
            ncols,
            nwords: ncols.div_ceil(64),
            pivot_of_col: vec![NONE; ncols],
            rows: Vec::new(),
            fully_reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nwords(&self) -> usize {
        self.nwords
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col] != NONE
    }

    pub fn is_fully_reduced(&self) -> bool {
        self.fully_reduced
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// A zeroed scratch vector of the right width.
    pub fn scratch(&self) -> Vec<u64> {
        vec![0u64; self.nwords]
    }

    /// Writes the set columns of the row with pivot `col` into `out`.
    pub fn pivot_row_columns(&self, col: usize) -> Option<Vec<usize>> {
        let r = self.pivot_of_col[col];
        if r == NONE {
            return None;
        }
        let row = &self.rows[r as usize];
        let mut out = Vec::new();
        for (k, &w) in row.data.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push((row.start as usize + k) * 64 + b);
                w &= w - 1;
            }
        }
        Some(out)
    }

    /// Rows as sorted column lists, ordered by pivot.
    pub fn rows_as_columns(&self) -> Vec<Vec<usize>> {
        self.pivots()
            .into_iter()
            .map(|c| self.pivot_row_columns(c).expect("pivot has a row"))
            .collect()
    }

    /// Reduces `buf` against the basis until its first set column is not a
    /// pivot; returns that column, or `None` if `buf` became zero.
    fn reduce_to_leading(&self, buf: &mut [u64]) -> Option<usize> {
        let mut w = 0;
        while w < self.nwords {
            let mut word = buf[w];
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                let col = w * 64 + b;
                let r = self.pivot_of_col[col];
                if r == NONE {
                    return Some(col);
                }
                let row = &self.rows[r as usize];
                xor_into(&mut buf[row.start as usize..], &row.data);
                word = buf[w];
            }
            w += 1;
        }
        None
    }

    /// Reduces `buf` so that no pivot column remains set.
    pub fn reduce(&self, buf: &mut [u64]) {
        for w in 0..self.nwords {
            let mut mask = !0u64;
            loop {
                let word = buf[w] & mask;
                if word == 0 {
                    break;
                }
                let b = word.trailing_zeros() as usize;
                mask = if b == 63 { 0 } else { !0u64 << (b + 1) };
                let r = self.pivot_of_col[w * 64 + b];
                if r != NONE {
                    let row = &self.rows[r as usize];
                    xor_into(&mut buf[row.start as usize..], &row.data);
                }
            }
        }
    }

    /// Adds `buf` to the span. Returns the new pivot if the rank grew. The
    /// buffer is clobbered.
    pub fn insert(&mut self, buf: &mut [u64]) -> Option<usize> {
        let lead = self.reduce_to_leading(buf)?;
        let start = lead / 64;
        let data: Box<[u64]> = buf[start..].into();
        let idx = self.rows.len() as u32;
        self.rows.push(Row { pivot: lead as u32, start: start as u32, data });
        self.pivot_of_col[lead] = idx;
        self.fully_reduced = false;
        Some(lead)
    }

    /// Inserts a row given by its set columns (duplicates cancel).
    pub fn insert_columns(&mut self, cols: &[u32], scratch: &mut [u64]) -> Option<usize> {
        scratch.iter_mut().for_each(|w| *w = 0);
        for &c in cols {
            scratch[c as usize / 64] ^= 1u64 << (c % 64);
        }
        self.insert(scratch)
    }

    /// Back substitution: clears every pivot column from every other row.
    pub fn reduce_fully(&mut self) {
        if self.fully_reduced {
            return;
        }
        // rows ordered by decreasing pivot; each is reduced against rows with
        // larger pivots, which are already fully reduced
        let mut order: Vec<u32> = (0..self.rows.len() as u32).collect();
        order.sort_unstable_by_key(|&r| std::cmp::Reverse(self.rows[r as usize].pivot));
        for &r in &order {
            let r = r as usize;
            let mut data = std::mem::take(&mut self.rows[r].data);
            let start = self.rows[r].start as usize;
            let pivot = self.rows[r].pivot as usize;
            let mut w = pivot / 64;
            let mut mask = if pivot % 64 == 63 { 0 } else { !0u64 << (pivot % 64 + 1) };
            while w < self.nwords {
                loop {
                    let word = data[w - start] & mask;
                    if word == 0 {
                        break;
                    }
                    let b = word.trailing_zeros() as usize;
                    mask = if b == 63 { 0 } else { !0u64 << (b + 1) };
                    let col = w * 64 + b;
                    let q = self.pivot_of_col[col];
                    if q != NONE {
                        let row = &self.rows[q as usize];
                        let off = row.start as usize - start;
                        xor_into(&mut data[off..], &row.data);
                    }
                }
                w += 1;
                mask = !0u64;
            }
            self.rows[r].data = data;
        }
        self.fully_reduced = true;
    }

    /// A basis of the solutions `v` of `row . v = 0` for every stored row,
    /// one vector per free column, each as sorted set columns. Needs a fully
    /// reduced echelon.
    pub fn null_space(&self) -> Vec<Vec<usize>> {
        assert!(self.fully_reduced, "null space needs back substitution first");
        let mut extra: Vec<Vec<usize>> = vec![Vec::new(); self.ncols];
        for row in &self.rows {
            for (k, &w) in row.data.iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = (row.start as usize + k) * 64 + w.trailing_zeros() as usize;
                    if c != row.pivot as usize {
                        extra[c].push(row.pivot as usize);
                    }
                    w &= w - 1;
                }
            }
        }
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = std::mem::take(&mut extra[f]);
                v.push(f);
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Checks that the stored rows form a valid (fully reduced, if claimed)
    /// echelon form. Meant for tests.
    pub fn check_invariants(&self) -> bool {
        for (i, row) in self.rows.iter().enumerate() {
            let p = row.pivot as usize;
            if self.pivot_of_col[p] != i as u32 || !row.bit(p) {
                return false;
            }
            for c in 0..p {
                if row.bit(c) {
                    return false;
                }
            }
            if self.fully_reduced {
                for other in &self.rows {
                    if other.pivot != row.pivot && other.bit(p) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Set columns of a bit vector.
pub fn set_columns(buf: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, &w) in buf.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(k * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(ncols: usize, cols: &[usize]) -> Vec<u64> {
        let mut v = vec![0u64; ncols.div_ceil(64)];
        for &c in cols {
            v[c / 64] ^= 1 << (c % 64);
        }
        v
    }

    #[test]
    fn small_rank() {
        let mut e = BitEchelon::new(3);
        assert_eq!(e.insert(&mut vec_of(3, &[0])), Some(0));
        assert_eq!(e.insert(&mut vec_of(3, &[2])), Some(2));
        assert_eq!(e.insert(&mut vec_of(3, &[0, 2])), None);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![1]);
    }

    #[test]
    fn back_substitution_across_words() {
        let n = 200;
        let mut e = BitEchelon::new(n);
        e.insert(&mut vec_of(n, &[3, 70, 150, 199]));
        e.insert(&mut vec_of(n, &[70, 71, 199]));
        e.insert(&mut vec_of(n, &[150, 63, 64]));
        e.insert(&mut vec_of(n, &[63, 190]));
        e.reduce_fully();
        assert!(e.check_invariants());
        let mut v = vec_of(n, &[3, 70]);
        e.reduce(&mut v);
        for c in set_columns(&v) {
            assert!(!e.is_pivot(c));
        }
    }

    #[test]
    fn null_space_annihilates_rows() {
        let n = 130;
        let mut e = BitEchelon::new(n);
        let rows = [vec![0, 5, 129], vec![5, 64, 100], vec![1, 2], vec![64, 65, 0]];
        for r in &rows {
            e.insert(&mut vec_of(n, r));
        }
        e.reduce_fully();
        let kernel = e.null_space();
        assert_eq!(kernel.len(), n - e.rank());
        for v in &kernel {
            for r in &rows {
                let dot = r.iter().filter(|c| v.binary_search(c).is_ok()).count();
                assert_eq!(dot % 2, 0);
            }
        }
    }
}
