//! Smith normal form of sparse integer matrices.
//!
//! Elimination runs in two phases. First, unit pivots are taken greedily
//! (shortest column, then sparsest row) with checked `i64` arithmetic; every
//! step is a unimodular column operation followed by deleting the pivot row
//! and column. Whatever survives (no unit entries left, or an overflow) is
//! finished densely over arbitrary-precision integers.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix given by `(row, col, value)` triples; repeated
/// positions are summed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, i64)>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntegerMatrix::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.add(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if v != 0 {
            self.entries.push((r as u32, c as u32, v));
        }
    }

    /// Sparse columns with summed duplicates and zero entries removed.
    fn columns(&self) -> Vec<Vec<(u32, i64)>> {
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            cols[c as usize].push((r, v));
        }
        for col in &mut cols {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        cols
    }

    /// Row permutation and column permutation applied to a copy.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|&(r, c, v)| (row_perm[r as usize] as u32, col_perm[c as usize] as u32, v))
                .collect(),
        }
    }
}

/// Nonzero diagonal of the Smith form, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors other than 1: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut cols = m.columns();
    dedup_columns(&mut cols);
    let mut ones = 0usize;
    let rest = unit_phase(m.rows, &mut cols, &mut ones);
    let mut factors: Vec<BigInt> = Vec::new();
    factors.extend(core::iter::repeat_n(BigInt::one(), ones));
    factors.extend(dense_snf(rest));
    SmithForm { factors }
}

fn dedup_columns(cols: &mut Vec<Vec<(u32, i64)>>) {
    let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
    cols.retain(|c| !c.is_empty() && seen.insert(c.clone()));
}

/// Eliminates unit pivots. Returns the remaining submatrix as dense rows.
fn unit_phase(nrows: usize, cols: &mut [Vec<(u32, i64)>], ones: &mut usize) -> Vec<Vec<BigInt>> {
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            row_cols[r as usize].push(j as u32);
        }
    }
    let mut col_alive = vec![true; cols.len()];
    let mut row_alive = vec![true; nrows];
    let mut row_count: Vec<usize> = row_cols.iter().map(Vec::len).collect();
    'pivots: loop {
        // shortest column holding a unit, then its sparsest unit row
        let mut best: Option<(usize, usize, u32, i64)> = None;
        for (j, col) in cols.iter().enumerate() {
            if !col_alive[j] || col.is_empty() {
                continue;
            }
            if best.is_some_and(|b| col.len() >= b.0) {
                continue;
            }
            let mut pick: Option<(u32, i64)> = None;
            for &(r, v) in col {
                if v.abs() == 1
                    && pick.is_none_or(|(pr, _)| row_count[r as usize] < row_count[pr as usize])
                {
                    pick = Some((r, v));
                }
            }
            if let Some((r, v)) = pick {
                best = Some((col.len(), j, r, v));
                if col.len() == 1 {
                    break;
                }
            }
        }
        let Some((_, pc, pr, pv)) = best else {
            break;
        };
        let pivot_col = core::mem::take(&mut cols[pc]);
        let users = core::mem::take(&mut row_cols[pr as usize]);
        let mut overflow = false;
        let mut i = 0;
        while i < users.len() {
            let j = users[i] as usize;
            i += 1;
            if j == pc || !col_alive[j] {
                continue;
            }
            let Ok(pos) = cols[j].binary_search_by_key(&pr, |e| e.0) else {
                continue;
            };
            let factor = cols[j][pos].1 * pv;
            match axpy(&cols[j], &pivot_col, factor) {
                Some(new) => {
                    for &(r, _) in &new {
                        if cols[j].binary_search_by_key(&r, |e| e.0).is_err() {
                            row_cols[r as usize].push(j as u32);
                            row_count[r as usize] += 1;
                        }
                    }
                    for &(r, _) in &cols[j] {
                        if new.binary_search_by_key(&r, |e| e.0).is_err() {
                            row_count[r as usize] -= 1;
                        }
                    }
                    cols[j] = new;
                }
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if overflow {
            // pivot not taken: put it back and hand everything to the dense phase
            cols[pc] = pivot_col;
            row_cols[pr as usize] = users;
            break 'pivots;
        }
        for &(r, _) in &pivot_col {
            row_count[r as usize] -= 1;
        }
        col_alive[pc] = false;
        row_alive[pr as usize] = false;
        *ones += 1;
    }
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| row_alive[r]).collect();
    let mut index = vec![usize::MAX; nrows];
    for (k, &r) in live_rows.iter().enumerate() {
        index[r] = k;
    }
    let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
    let mut dense_cols: Vec<Vec<BigInt>> = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        if !col_alive[j] || col.is_empty() || !seen.insert(col.clone()) {
            continue;
        }
        let mut v = vec![BigInt::zero(); live_rows.len()];
        for &(r, x) in col {
            debug_assert!(index[r as usize] != usize::MAX);
            v[index[r as usize]] = BigInt::from(x);
        }
        dense_cols.push(v);
    }
    // transpose to rows
    let nr = live_rows.len();
    let mut rows = vec![Vec::with_capacity(dense_cols.len()); nr];
    for col in dense_cols {
        for (i, x) in col.into_iter().enumerate() {
            rows[i].push(x);
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// `a - factor * b` on sorted sparse vectors, `None` on overflow.
fn axpy(a: &[(u32, i64)], b: &[(u32, i64)], factor: i64) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1.checked_mul(factor)?.checked_neg()?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(b[j].1.checked_mul(factor)?)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Dense Smith form over big integers; returns the nonzero diagonal.
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..nc {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut fix = None;
            'outer: for i in t + 1..nr {
                for j in t + 1..nc {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..nc {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[&[i64]]) -> Vec<i64> {
        smith_normal_form(&IntegerMatrix::from_dense(rows))
            .factors
            .iter()
            .map(|f| i64::try_from(f).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_and_hand_examples() {
        assert_eq!(factors(&[&[2, 0], &[0, 4]]), vec![2, 4]);
        assert_eq!(factors(&[&[2, 1], &[0, 2]]), vec![1, 4]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[&[6, 0], &[0, 4]]), vec![2, 12]);
        assert_eq!(
            factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn rank_deficient() {
        let f = smith_normal_form(&IntegerMatrix::from_dense(&[
            &[1, 2, 3],
            &[2, 4, 6],
            &[1, 1, 1],
        ]));
        assert_eq!(f.rank(), 2);
        assert!(f.torsion().is_empty());
        let f = smith_normal_form(&IntegerMatrix::from_dense(&[&[3, 6], &[9, 18]]));
        assert_eq!(f.factors, vec![BigInt::from(3)]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let f = smith_normal_form(&IntegerMatrix::from_dense(&[&[1, big], &[big, 3]]));
        let det = BigInt::from(3) - BigInt::from(big) * BigInt::from(big);
        assert_eq!(f.factors, vec![BigInt::one(), det.abs()]);
    }
}
