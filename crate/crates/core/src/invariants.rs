//! Closed-form topological invariants of the resolved double cover.

use serde::{Deserialize, Serialize};

use crate::arrangement::Counters;
use crate::error::{Error, Result};

/// Counts of isolated singular points of the components; identically zero
/// for plane arrangements but part of the general formulas.
#[derive(Clone, Copy, Default, Debug)]
pub struct IsolatedPoints {
    pub m2: i64,
    pub m4: i64,
    pub m5: i64,
}

/// Euler characteristic of the resolved double cover of an octic
/// arrangement with component degrees `degrees` (summing to 8) and the
/// given singular-locus counts.
pub fn euler(degrees: &[i64], c: &Counters, m: &IsolatedPoints) -> Result<i64> {
    let total: i64 = degrees.iter().sum();
    if total != 8 {
        return Err(Error::WrongTotalDegree(total.max(0) as usize));
    }
    let mut e = 8i64;
    for &d in degrees {
        e -= d * d * d - 4 * d * d + 6 * d;
    }
    let n = degrees.len();
    for i in 0..n {
        for j in (i + 1)..n {
            e += 2 * (4 - degrees[i] - degrees[j]) * degrees[i] * degrees[j];
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                e -= degrees[i] * degrees[j] * degrees[k];
            }
        }
    }
    e += 4 * c.p40 as i64
        + 3 * c.p41 as i64
        + 16 * c.p50 as i64
        + 18 * c.p51 as i64
        + 20 * c.p52 as i64
        + c.l3 as i64
        + 2 * m.m2
        + 36 * m.m4
        + 56 * m.m5;
    Ok(e)
}

/// Rank of the Picard group of the blown-up P3: the pullback hyperplane
/// class plus one exceptional divisor per blown-up locus.
pub fn picard_rank_y(r: usize, c: &Counters, m: &IsolatedPoints) -> i64 {
    let r = r as i64;
    1 + r * (r - 1) / 2
        + c.p40 as i64
        + c.p41 as i64
        + 6 * c.p50 as i64
        + 7 * c.p51 as i64
        + 8 * c.p52 as i64
        + c.l3 as i64
        + m.m4
        + 2 * m.m5
}

/// h^2 of the cotangent sheaf of the blown-up P3. Zero for arrangements of
/// planes; kept in general form as a consistency hook.
pub fn h2_omega1_y(degrees: &[i64], m5: i64) -> i64 {
    let n = degrees.len() as i64;
    let mut pair_sum = 0i64;
    for i in 0..degrees.len() {
        for j in (i + 1)..degrees.len() {
            pair_sum += degrees[i] * degrees[j] * (degrees[i] + degrees[j] - 4);
        }
    }
    debug_assert_eq!(pair_sum % 2, 0);
    6 * m5 + pair_sum / 2 + n * (n - 1) / 2
}

/// The invariant tuple the pipeline reports for an eight-plane arrangement.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InvariantSet {
    pub counters: Counters,
    pub e: i64,
    pub rho_y: i64,
    pub h11: i64,
    pub h12: i64,
    pub skew_rank: i64,
}

/// Combine the Euler characteristic with an independently computed h12:
/// h11 = h12 + e/2, and the skew rank is what h11 exceeds rho(Y) by.
pub fn hodge(e: i64, h12: i64, rho_y: i64) -> Result<(i64, i64)> {
    assert!(e % 2 == 0, "Euler characteristic must be even");
    let h11 = h12 + e / 2;
    let skew = h11 - rho_y;
    if skew < 0 {
        return Err(Error::NegativeSkewRank { h11, rho: rho_y });
    }
    Ok((h11, skew))
}

/// Assemble the invariant set of an eight-plane arrangement from its
/// counters and its deformation number.
pub fn invariant_set(c: &Counters, h12: i64) -> Result<InvariantSet> {
    let degrees = [1i64; 8];
    let none = IsolatedPoints::default();
    let e = euler(&degrees, c, &none)?;
    let rho_y = picard_rank_y(8, c, &none);
    let (h11, skew_rank) = hodge(e, h12, rho_y)?;
    Ok(InvariantSet {
        counters: *c,
        e,
        rho_y,
        h11,
        h12,
        skew_rank,
    })
}
