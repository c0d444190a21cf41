//! Dense linear algebra over F_p: row reduction and right kernels.

use super::coeff::inv_mod;

/// Row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, cols, rows: vec![vec![0; cols]; rows] }
    }

    pub fn from_rows(p: u32, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let rows = rows.into_iter().map(|r| r.into_iter().map(|v| v % p).collect()).collect();
        Matrix { p, cols, rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.rows[r][c] = v % self.p;
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.rows[r][c]
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(pr) = (r..self.rows.len()).find(|&i| self.rows[i][c] != 0) else {
                continue;
            };
            self.rows.swap(r, pr);
            let inv = inv_mod(self.rows[r][c], self.p) as u64;
            for v in self.rows[r].iter_mut() {
                *v = (*v as u64 * inv % p) as u32;
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c] == 0 {
                    continue;
                }
                let f = row[c] as u64;
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = ((*v as u64 + p * p - f * pv as u64) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    let a = m.rows[row][f];
                    v[pc] = (self.p - a) % self.p;
                }
                v
            })
            .collect()
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        self.rows
            .iter()
            .map(|row| (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }
}
