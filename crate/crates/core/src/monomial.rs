//! The degree-8 monomial basis in (x, y, z, t) and a small exact polynomial
//! type for building Jacobian generators and derivative functionals.
//!
//! Monomials are ordered graded-lexicographically with x > y > z > t; within
//! the single degree 8 this is plain descending lex on exponent vectors, so
//! index 0 is x^8 and index 164 is t^8.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arrangement::LinearForm;

/// Dimension of the space of octic forms in four variables: C(11,3).
pub const OCTIC_DIM: usize = 165;

pub type Exponents = [u8; 4];

pub fn octic_monomials() -> &'static [Exponents] {
    static MONOMIALS: OnceLock<Vec<Exponents>> = OnceLock::new();
    MONOMIALS.get_or_init(|| {
        let mut out = Vec::with_capacity(OCTIC_DIM);
        for a in (0..=8u8).rev() {
            for b in (0..=8 - a).rev() {
                for c in (0..=8 - a - b).rev() {
                    out.push([a, b, c, 8 - a - b - c]);
                }
            }
        }
        assert_eq!(out.len(), OCTIC_DIM);
        out
    })
}

pub fn octic_index(e: &Exponents) -> usize {
    static INDEX: OnceLock<HashMap<Exponents, usize>> = OnceLock::new();
    let map = INDEX.get_or_init(|| {
        octic_monomials()
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i))
            .collect()
    });
    map[e]
}

/// A polynomial in x, y, z, t with integer coefficients, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl IntPoly {
    pub fn one() -> Self {
        IntPoly::monomial([0, 0, 0, 0], BigInt::from(1))
    }

    pub fn monomial(e: Exponents, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(e, coeff);
        }
        IntPoly { terms }
    }

    pub fn from_linear(form: &LinearForm) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in form.coeffs().iter().enumerate() {
            if !c.is_zero() {
                assert!(c.is_integer(), "normalized forms have integer coefficients");
                let mut e = [0u8; 4];
                e[i] = 1;
                terms.insert(e, c.numer().clone());
            }
        }
        IntPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, e: Exponents, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += v;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = IntPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [
                    ea[0] + eb[0],
                    ea[1] + eb[1],
                    ea[2] + eb[2],
                    ea[3] + eb[3],
                ];
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = IntPoly::default();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.insert_term(d, c * BigInt::from(e[var]));
        }
        out
    }

    /// Directional derivative sum_k u_k d/dz_k.
    pub fn directional_derivative(&self, u: &[BigInt; 4]) -> Self {
        let mut out = IntPoly::default();
        for (var, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            for (e, c) in self.derivative(var).terms {
                out.insert_term(e, c * uk);
            }
        }
        out
    }

    pub fn times_var(&self, var: usize) -> Self {
        let mut out = IntPoly::default();
        for (e, c) in &self.terms {
            let mut m = *e;
            m[var] += 1;
            out.insert_term(m, c.clone());
        }
        out
    }

    /// Evaluate using a table of coordinate powers: powers[k][e] = v_k^e.
    pub fn eval_with_powers(&self, powers: &[Vec<BigInt>; 4]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for k in 0..4 {
                if e[k] > 0 {
                    term *= &powers[k][e[k] as usize];
                }
            }
            acc += term;
        }
        acc
    }

    /// Dense coefficient vector in the degree-8 monomial basis; panics if a
    /// term has a different degree.
    pub fn to_octic_vec(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); OCTIC_DIM];
        for (e, c) in &self.terms {
            assert_eq!(e.iter().map(|&v| v as usize).sum::<usize>(), 8);
            out[octic_index(e)] = c.clone();
        }
        out
    }
}

/// Power table v^0..v^max for each coordinate of an integer 4-vector.
pub fn power_table(v: &[BigInt; 4], max: usize) -> [Vec<BigInt>; 4] {
    std::array::from_fn(|k| {
        let mut col = Vec::with_capacity(max + 1);
        col.push(BigInt::from(1));
        for e in 1..=max {
            let prev = &col[e - 1];
            col.push(prev * &v[k]);
        }
        col
    })
}

/// The product of the arrangement's linear forms.
pub fn product_of_forms(forms: &[LinearForm]) -> IntPoly {
    forms
        .iter()
        .fold(IntPoly::one(), |acc, f| acc.mul(&IntPoly::from_linear(f)))
}
