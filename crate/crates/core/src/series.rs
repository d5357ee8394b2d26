//! Truncated integer power series in one variable q.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A power series with unbounded integer coefficients, truncated at a fixed
/// precision: coefficients of q^0 .. q^(N-1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(precision: usize) -> Self {
        assert!(precision > 0);
        IntSeries {
            coeffs: vec![BigInt::zero(); precision],
        }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = IntSeries::zero(precision);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        IntSeries { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, v: BigInt) {
        if n < self.coeffs.len() {
            self.coeffs[n] = v;
        }
    }

    fn check_precision(&self, other: &Self) -> Result<()> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch {
                left: self.precision(),
                right: other.precision(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        Ok(IntSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Cauchy product truncated at the common precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_precision(other)?;
        let n = self.precision();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(IntSeries { coeffs: out })
    }

    /// Multiplicative inverse; requires constant term +-1 so coefficients
    /// stay integral.
    pub fn invert(&self) -> Self {
        let c0 = &self.coeffs[0];
        assert!(
            c0.is_one() || (-c0).is_one(),
            "series inverse needs unit constant term"
        );
        let n = self.precision();
        let mut inv = vec![BigInt::zero(); n];
        inv[0] = c0.clone(); // 1/(+-1) = +-1
        for k in 1..n {
            // c0 * inv[k] = -(sum_{j=1..k} a_j inv[k-j])
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &inv[k - j];
                }
            }
            inv[k] = -acc * c0; // dividing by +-1
        }
        IntSeries { coeffs: inv }
    }

    /// Integer power, negative exponents via inversion.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.invert().pow(-e);
        }
        let mut acc = IntSeries::one(self.precision());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("equal precision");
            }
            base = base.mul(&base).expect("equal precision");
            e >>= 1;
        }
        acc
    }

    /// Multiply by q^k (drop coefficients past the precision).
    pub fn shift(&self, k: usize) -> Self {
        let n = self.precision();
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k < n {
                out[i + k] = c.clone();
            }
        }
        IntSeries { coeffs: out }
    }
}

/// prod_{k>=1} (1 - q^(m k)) truncated, by Euler's pentagonal number
/// theorem: sum_{j in Z} (-1)^j q^(m j(3j-1)/2).
pub fn eta_factor(m: u64, precision: usize) -> IntSeries {
    let mut s = IntSeries::zero(precision);
    let mut j: i64 = 0;
    loop {
        let mut hit = false;
        for jj in [j, -j] {
            let gp = jj * (3 * jj - 1) / 2;
            debug_assert!(gp >= 0);
            let exp = (gp as u64).checked_mul(m).unwrap();
            if (exp as usize) < precision {
                hit = true;
                let sign = if jj.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                let cur = s.coeff(exp as usize) + sign;
                s.set_coeff(exp as usize, cur);
            }
            if jj == 0 {
                break;
            }
        }
        if j > 0 && !hit {
            break;
        }
        j += 1;
    }
    s
}
