//! Prime-field arithmetic and quadratic-residue machinery.

use crate::error::Error;

/// An element of F_p for an odd prime `p`, stored as its least nonnegative
/// residue. Arithmetic between elements of different fields panics.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct FpElem {
    value: u64,
    p: u64,
}

impl FpElem {
    pub fn new(value: i64, p: u64) -> Self {
        debug_assert!(p > 2);
        let m = value.rem_euclid(p as i64) as u64;
        FpElem { value: m, p }
    }

    pub fn from_residue(value: u64, p: u64) -> Self {
        FpElem { value: value % p, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let mut v = self.value + rhs.value;
        if v >= self.p {
            v -= self.p;
        }
        FpElem { value: v, p: self.p }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        FpElem { value: v, p: self.p }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpElem {
            value: mulmod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }

    pub fn neg(&self) -> Self {
        FpElem {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }

    pub fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_p");
        FpElem {
            value: inv_mod(self.value, self.p),
            p: self.p,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.value;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        FpElem { value: acc, p: self.p }
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse by Fermat; `p` must be prime and `a` nonzero mod p.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    FpElem::from_residue(a, p).pow(p - 2).value
}

/// Legendre symbol of `a` mod the odd prime `p`: 0 on zero, +1 on nonzero
/// squares, -1 otherwise. Computed as a^((p-1)/2).
pub fn legendre(a: &FpElem) -> i32 {
    if a.is_zero() {
        return 0;
    }
    let e = a.pow((a.p - 1) / 2).value;
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, a.p - 1);
        -1
    }
}

/// Table of Legendre symbol values indexed by residue, for the inner
/// counting loops: `table[r] = chi(r)`.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    // every nonzero square is r^2 for r in 1..p
    let mut r = 1u64;
    while r < p {
        table[mulmod(r, r, p) as usize] = 1;
        r += 1;
    }
    table
}

/// Trial-division primality; intended for the p <= 10^4 range the counting
/// pipeline works in.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<(), Error> {
    if p < 3 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

/// Deterministic Miller-Rabin for u64, used when drawing the 62-bit moduli
/// of the modular linear-algebra fast path.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = FpElem::from_residue(a, n).pow(d).value();
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
