//! Weight-4 newform coefficients and matching of computed a_p vectors.
//!
//! The embedded coefficient table is ground truth. Eta-quotient exponent
//! data attached to a form is a candidate q-expansion: the library exposes
//! it only through `eta_verified`, which recomputes the expansion and
//! compares against the table, so an unconfirmed candidate can never be
//! silently trusted.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::series::{eta_factor, IntSeries};

pub const TABLE_PRIMES: [u64; 8] = [5, 7, 11, 13, 17, 19, 23, 73];

#[derive(Clone, Copy, Debug)]
pub struct NewformRef {
    pub label: &'static str,
    pub level: u32,
    /// a_p for p in TABLE_PRIMES
    pub ap: [i64; 8],
    /// candidate eta-quotient exponents (m, e_m), if one is known
    pub eta: Option<&'static [(u64, i64)]>,
}

pub static NEWFORMS: &[NewformRef] = &[
    NewformRef {
        label: "6k4A",
        level: 6,
        ap: [6, -16, 12, 38, -126, 20, 168, 218],
        eta: Some(&[(1, 2), (2, 2), (3, 2), (6, 2)]),
    },
    NewformRef {
        label: "8k4A",
        level: 8,
        ap: [-2, 24, -44, 22, 50, 44, -56, 154],
        eta: Some(&[(2, 4), (4, 4)]),
    },
    NewformRef {
        label: "12k4A",
        level: 12,
        ap: [-18, 8, 36, -10, 18, -100, 72, 26],
        eta: Some(&[(1, 5), (2, 2), (3, 1), (4, -3), (6, 2), (12, 1)]),
    },
    NewformRef {
        label: "16k4A",
        level: 16,
        ap: [-2, -24, 44, 22, 50, -44, 56, 154],
        eta: Some(&[(2, -4), (4, 16), (8, -4)]),
    },
    NewformRef {
        label: "32k4C",
        level: 32,
        ap: [-10, -16, 40, -50, -30, -40, -48, -630],
        eta: None,
    },
    NewformRef {
        label: "64k4A",
        level: 64,
        ap: [-22, 0, 0, 18, -94, 0, 0, 1098],
        eta: None,
    },
    NewformRef {
        label: "64k4C",
        level: 64,
        ap: [2, -24, -44, -22, 50, 44, 56, 154],
        eta: None,
    },
];

pub fn newform(label: &str) -> Result<&'static NewformRef> {
    NEWFORMS
        .iter()
        .find(|f| f.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

pub fn newform_ap(label: &str, p: u64) -> Result<i64> {
    let form = newform(label)?;
    let idx = TABLE_PRIMES
        .iter()
        .position(|&q| q == p)
        .ok_or(Error::UnknownTablePrime {
            label: label.to_string(),
            p,
        })?;
    Ok(form.ap[idx])
}

pub fn ap_map(form: &NewformRef) -> BTreeMap<u64, i64> {
    TABLE_PRIMES.iter().copied().zip(form.ap).collect()
}

/// An eta quotient prod_m eta(m tau)^(e_m). Weight is half the exponent
/// sum; the q-expansion leads with q^(sum m e_m / 24).
#[derive(Clone, Debug)]
pub struct EtaQuotient {
    pub exponents: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(exponents: &[(u64, i64)]) -> Self {
        EtaQuotient {
            exponents: exponents.to_vec(),
        }
    }

    fn weight_times_2(&self) -> i64 {
        self.exponents.iter().map(|&(_, e)| e).sum()
    }

    fn shift_times_24(&self) -> i64 {
        self.exponents.iter().map(|&(m, e)| m as i64 * e).sum()
    }
}

/// q-expansion coefficients (of q^0 .. q^(n-1)) of a weight-4, shift-1 eta
/// quotient: q * prod_m prod_k (1 - q^(mk))^(e_m), each factor expanded by
/// the pentagonal number theorem.
pub fn eta_qexp(q: &EtaQuotient, n: usize) -> Result<IntSeries> {
    assert!(n >= 2);
    if q.weight_times_2() != 8 || q.shift_times_24() != 24 {
        return Err(Error::BadEtaQuotient {
            weight_times_2: q.weight_times_2(),
            shift_num: q.shift_times_24(),
        });
    }
    let mut acc = IntSeries::one(n);
    for &(m, e) in &q.exponents {
        if e == 0 {
            continue;
        }
        let factor = eta_factor(m, n);
        acc = acc.mul(&factor.pow(e)).expect("equal precision");
    }
    Ok(acc.shift(1))
}

/// Recompute a form's candidate eta expansion and compare it against the
/// embedded table at the eight reference primes.
pub fn eta_verified(form: &NewformRef) -> bool {
    let Some(exps) = form.eta else { return false };
    let n = (*TABLE_PRIMES.last().unwrap() + 1) as usize;
    let Ok(series) = eta_qexp(&EtaQuotient::new(exps), n) else {
        return false;
    };
    TABLE_PRIMES
        .iter()
        .zip(form.ap)
        .all(|(&p, ap)| series.coeff(p as usize) == &num_bigint::BigInt::from(ap))
}

/// The unique newform whose table row agrees with the given a_p values at
/// every reference prime, if any. The vector must cover all eight primes.
pub fn match_ap(ap: &BTreeMap<u64, i64>) -> Option<&'static str> {
    assert!(
        TABLE_PRIMES.iter().all(|p| ap.contains_key(p)),
        "a_p vector must cover the eight table primes"
    );
    NEWFORMS
        .iter()
        .find(|f| TABLE_PRIMES.iter().zip(f.ap).all(|(p, v)| ap[p] == v))
        .map(|f| f.label)
}

/// Per-prime agreement with a given form's table row.
pub fn agreement(form: &NewformRef, ap: &BTreeMap<u64, i64>) -> BTreeMap<u64, bool> {
    TABLE_PRIMES
        .iter()
        .zip(form.ap)
        .map(|(&p, v)| (p, ap.get(&p) == Some(&v)))
        .collect()
}

/// The form agreeing at the most primes, for reporting near-misses.
pub fn nearest(ap: &BTreeMap<u64, i64>) -> (&'static NewformRef, usize) {
    NEWFORMS
        .iter()
        .map(|f| {
            let hits = TABLE_PRIMES
                .iter()
                .zip(f.ap)
                .filter(|(p, v)| ap.get(p) == Some(v))
                .count();
            (f, hits)
        })
        .max_by_key(|&(_, hits)| hits)
        .expect("table is nonempty")
}
