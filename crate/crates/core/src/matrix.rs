//! Dense linear algebra over an abstract field, used both with exact
//! rationals and with prime fields.
//!
//! Row reduction picks the first nonzero entry in column order as pivot, so
//! reduced forms are deterministic and equal subspaces get identical bases.

use crate::fp::FpElem;
use crate::rat::Rat;

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Field for Rat {
    fn zero(&self) -> Self {
        Rat::zero()
    }
    fn one(&self) -> Self {
        Rat::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        Rat::inv(self)
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl Field for FpElem {
    fn zero(&self) -> Self {
        FpElem::from_residue(0, self.modulus())
    }
    fn one(&self) -> Self {
        FpElem::from_residue(1, self.modulus())
    }
    fn add(&self, rhs: &Self) -> Self {
        FpElem::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        FpElem::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        FpElem::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        FpElem::neg(self)
    }
    fn inv(&self) -> Self {
        FpElem::inv(self)
    }
    fn is_zero(&self) -> bool {
        FpElem::is_zero(self)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type RationalMatrix = Matrix<Rat>;

impl<F: Field> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn zero_sized(rows: usize, cols: usize, zero: F) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduction to reduced row-echelon form; returns (rank, pivot
    /// columns). Pivot choice: first row with a nonzero entry in the current
    /// column.
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            if lead >= self.rows {
                break;
            }
            let pivot_row = (lead..self.rows).find(|&r| !self.at(r, col).is_zero());
            let Some(pr) = pivot_row else { continue };
            self.swap_rows(lead, pr);
            let inv = self.at(lead, col).inv();
            for c in col..self.cols {
                let v = self.at(lead, c).mul(&inv);
                self.set(lead, c, v);
            }
            for r in 0..self.rows {
                if r == lead || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c).sub(&factor.mul(self.at(lead, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (lead, pivots)
    }

    /// Reduced row-echelon form and rank, leaving the input untouched.
    pub fn rref(&self) -> (Matrix<F>, usize) {
        let mut m = self.clone();
        let (rank, _) = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the right kernel: all v with M v = 0, one row per basis
    /// vector. Needs a sample field element to synthesize constants when the
    /// matrix is empty.
    pub fn kernel_basis(&self, sample: &F) -> Vec<Vec<F>> {
        let zero = sample.zero();
        let one = sample.one();
        let (red, _rank) = self.rref();
        let mut pivot_of_col = vec![None; self.cols];
        let mut pivots = Vec::new();
        for r in 0..red.rows {
            if let Some(c) = (0..red.cols).find(|&c| !red.at(r, c).is_zero()) {
                pivot_of_col[c] = Some(r);
                pivots.push(c);
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for &pc in &pivots {
                let pr = pivot_of_col[pc].unwrap();
                v[pc] = red.at(pr, free).neg();
            }
            basis.push(v);
        }
        basis
    }
}

/// a * b^T, pairing rows of `a` with rows of `b`.
pub fn mul_transpose<F: Field>(a: &Matrix<F>, b: &Matrix<F>, sample: &F) -> Matrix<F> {
    let zero = sample.zero();
    let mut out = Matrix::zero_sized(a.rows(), b.rows(), zero.clone());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            let mut acc = zero.clone();
            for c in 0..a.cols() {
                let x = a.at(i, c);
                if !x.is_zero() {
                    acc = acc.add(&x.mul(b.at(j, c)));
                }
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Incremental row-echelon accumulator: tracks the dimension of a growing
/// span without re-reducing from scratch. Rows are kept sorted by pivot
/// column with pivot entries normalized to 1.
pub struct Echelon<F: Field> {
    cols: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the accumulated rows and absorb the residual.
    /// Returns true when the vector enlarged the span.
    pub fn insert(&mut self, mut v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.cols);
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let factor = v[*pc].clone();
            for c in *pc..self.cols {
                if !row[c].is_zero() {
                    v[c] = v[c].sub(&factor.mul(&row[c]));
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv();
        for x in v[pivot..].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let at = self.rows.partition_point(|(pc, _)| *pc < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn rat_matrix(rows: Vec<Vec<i64>>) -> RationalMatrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(q).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = rat_matrix(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 3);
        assert_eq!(r, m);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = rat_matrix(vec![vec![1, 2], vec![2, 4]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r, rat_matrix(vec![vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn rref_idempotent() {
        let m = rat_matrix(vec![vec![2, 4, 1], vec![3, 1, 0], vec![5, 5, 1]]);
        let (r1, _) = m.rref();
        let (r2, _) = r1.rref();
        assert_eq!(r1, r2);
    }

    #[test]
    fn kernel_orthogonal_to_rows() {
        let m = rat_matrix(vec![vec![1, 2, 3, 4], vec![0, 1, 1, 1]]);
        let ker = m.kernel_basis(&Rat::one());
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in 0..m.rows() {
                let dot = (0..4).fold(Rat::zero(), |acc, c| acc + m.at(r, c) * &v[c]);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn rref_mod_p() {
        let p = 10007u64;
        let rows: Vec<Vec<FpElem>> = vec![
            vec![FpElem::new(1, p), FpElem::new(2, p)],
            vec![FpElem::new(2, p), FpElem::new(4, p)],
        ];
        let m = Matrix::from_rows(rows, 2);
        assert_eq!(m.rank(), 1);
    }
}
