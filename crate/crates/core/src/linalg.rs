//! Dense exact linear algebra over the scalar field, used by the cofactor
//! and Darboux-relation solvers. Deterministic pivoting (first nonzero in
//! column order) keeps solution bases canonical.

use crate::coeff::Coeff;

#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Coeff>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, nparams: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Coeff::zero(nparams); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r * self.cols + c] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, p * self.cols + c);
                }
            }
            let inv = self.at(row, col).inv().expect("pivot nonzero");
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&factor.mul(self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }

    /// Canonical nullspace basis: one vector per free column, with that
    /// free coordinate set to 1.
    pub fn nullspace(mut self) -> Vec<Vec<Coeff>> {
        let np = self.data.first().map_or(0, Coeff::nparams);
        let pivots = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut vec = vec![Coeff::zero(np); self.cols];
            vec[free] = Coeff::one(np);
            for (ri, &pc) in pivots.iter().enumerate() {
                vec[pc] = self.at(ri, free).neg();
            }
            basis.push(vec);
        }
        basis
    }

    /// A particular solution of `A x = b` (free variables set to 0), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Coeff]) -> Option<Vec<Coeff>> {
        assert_eq!(b.len(), self.rows);
        let np = self.data.first().map_or_else(|| b.first().map_or(0, Coeff::nparams), Coeff::nparams);
        let mut aug = Mat::zero(self.rows, self.cols + 1, np);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constant column
        }
        let mut x = vec![Coeff::zero(np); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(ri, self.cols).clone();
        }
        Some(x)
    }
}
