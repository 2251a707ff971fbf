use super::{Basis, Echelon, GF2Vector};

/// Dense row-major matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GF2Vector>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GF2Vector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| GF2Vector::from_indices(n, [i])).collect();
        Self { rows: n, cols: n, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<GF2Vector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Self { rows: rows.len(), cols, data: rows }
    }

    /// Each row given by the column positions of its ones.
    pub fn from_row_supports<'a, I>(cols: usize, supports: I) -> Self
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let data: Vec<GF2Vector> = supports
            .into_iter()
            .map(|s| GF2Vector::from_indices(cols, s.iter().map(|&c| c as usize)))
            .collect();
        Self { rows: data.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &GF2Vector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[GF2Vector] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn column(&self, c: usize) -> GF2Vector {
        GF2Vector::from_indices(self.rows, (0..self.rows).filter(|&r| self.data[r].get(c)))
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &GF2Vector) -> GF2Vector {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        GF2Vector::from_bools(&self.data.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out = GF2Vector::zeros(other.cols);
                for k in row.iter_ones() {
                    out.xor_assign(&other.data[k]);
                }
                out
            })
            .collect();
        GF2Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GF2Vector::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of the row space.
    pub fn row_space(&self) -> Basis {
        Basis::from_vectors(self.cols, self.data.iter().cloned())
    }

    /// Basis of `{x : Mx = 0}` inside GF(2)^cols.
    pub fn kernel_basis(&self) -> Basis {
        let rref = self.row_space();
        let pivots = rref.pivot_columns();
        let vectors = rref.complement_columns().into_iter().map(|free| {
            let mut x = GF2Vector::zeros(self.cols);
            x.set(free, true);
            for (row, &p) in rref.vectors().iter().zip(pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            x
        });
        Basis::from_vectors(self.cols, vectors.collect::<Vec<_>>())
    }

    /// Basis of the column space `{Mx}` inside GF(2)^rows.
    pub fn image_basis(&self) -> Basis {
        self.transpose().row_space()
    }

    /// One solution of `Mx = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &GF2Vector) -> Option<GF2Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length must equal row count");
        // Augment each row with its right-hand side bit in column `cols`.
        let width = self.cols + 1;
        let mut e = Echelon::new(width);
        for (r, row) in self.data.iter().enumerate() {
            let mut aug = GF2Vector::zeros(width);
            for c in row.iter_ones() {
                aug.set(c, true);
            }
            aug.set(self.cols, b.get(r));
            e.insert(aug);
        }
        let basis = e.into_basis();
        let mut x = GF2Vector::zeros(self.cols);
        for (row, &p) in basis.vectors().iter().zip(basis.pivot_columns()) {
            if p == self.cols {
                return None;
            }
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}
