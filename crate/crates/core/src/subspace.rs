//! Linear subspaces of F^n with canonical reduced bases.
//!
//! Equal subspaces compare equal because the basis is kept in reduced
//! row-echelon form. Sums stack bases; intersections use the Zassenhaus
//! block trick.

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    /// rref basis, one vector per row; rows() == dim
    basis: Matrix<F>,
    sample: F,
}

pub type RationalSubspace = Subspace<Rat>;

impl<F: Field> Subspace<F> {
    /// Span of the given vectors. `sample` supplies the field (and, for
    /// prime fields, the modulus) when the spanning set is empty.
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>, sample: F) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length != ambient dimension");
        }
        let mut m = Matrix::from_rows(vectors, ambient);
        let (rank, _) = m.rref_in_place();
        let basis = Matrix::from_rows(m.row_vecs().into_iter().take(rank).collect(), ambient);
        Subspace { ambient, basis, sample }
    }

    pub fn zero(ambient: usize, sample: F) -> Self {
        Subspace {
            ambient,
            basis: Matrix::from_rows(Vec::new(), ambient),
            sample,
        }
    }

    pub fn full(ambient: usize, sample: F) -> Self {
        let zero = sample.zero();
        let one = sample.one();
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![zero.clone(); ambient];
                v[i] = one.clone();
                v
            })
            .collect();
        Subspace {
            ambient,
            basis: Matrix::from_rows(rows, ambient),
            sample,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<F>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Reduce `v` against the basis; returns the residual.
    fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        for r in 0..self.basis.rows() {
            let Some(pc) = (0..self.ambient).find(|&c| !self.basis.at(r, c).is_zero()) else {
                continue;
            };
            if v[pc].is_zero() {
                continue;
            }
            let factor = v[pc].clone();
            for (c, x) in v.iter_mut().enumerate().skip(pc) {
                *x = x.sub(&factor.mul(self.basis.at(r, c)));
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Ok(Subspace::span(self.ambient, rows, self.sample.clone()))
    }

    /// Zassenhaus: row-reduce [B1 | B1; B2 | 0]; rows whose left half is
    /// zero carry an intersection basis in the right half.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let zero = self.sample.zero();
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for v in self.basis_rows() {
            let mut row = v.clone();
            row.extend(v);
            rows.push(row);
        }
        for v in other.basis_rows() {
            let mut row = v;
            row.extend(std::iter::repeat_n(zero.clone(), n));
            rows.push(row);
        }
        let mut m = Matrix::from_rows(rows, 2 * n);
        m.rref_in_place();
        let mut out = Vec::new();
        for r in 0..m.rows() {
            let left_zero = (0..n).all(|c| m.at(r, c).is_zero());
            let right_nonzero = (n..2 * n).any(|c| !m.at(r, c).is_zero());
            if left_zero && right_nonzero {
                out.push(m.row(r)[n..].to_vec());
            }
        }
        Ok(Subspace::span(n, out, self.sample.clone()))
    }

    pub fn intersect_all<'a, I>(ambient: usize, spaces: I, sample: F) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
        F: 'a,
    {
        let mut acc = Subspace::full(ambient, sample);
        for s in spaces {
            acc = acc.intersect(s)?;
        }
        Ok(acc)
    }
}
