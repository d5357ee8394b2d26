//! Equisingular deformation count of the branch octic, which is the h^{1,2}
//! of the resolved double cover for plane arrangements.
//!
//! The computation runs in the 165-dimensional space of octic forms. With
//! J the degree-8 piece of the Jacobian ideal and I_C^m the octics vanishing
//! to order m along a singular locus C, the wanted number is
//!
//! ```text
//! h = dim ( intersection over strata of (I_C^m + J) ) - dim J
//! ```
//!
//! Rather than intersecting large subspaces directly, everything is done on
//! annihilators: each I_C^m is cut out by an explicit list of derivative
//! functionals, the annihilator of I_C^m + J is the part of their span
//! orthogonal to the Jacobian generators (a tiny kernel per stratum), and
//! the annihilator of the intersection is the accumulated sum. Dimensions
//! follow by complementarity.
//!
//! The default run row-reduces modulo two independently drawn 62-bit primes
//! and accepts only when both agree, retrying on disagreement and falling
//! back to exact rationals; the exact path is always available and is the
//! oracle the tests compare against.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;

use crate::arrangement::{
    validate, Arrangement, ClassifiedPoint, IncidenceData, ProjLine, ProjPoint,
};
use crate::error::{Error, Result};
use crate::fp::FpElem;
use crate::matrix::{mul_transpose, Echelon, Field, Matrix};
use crate::monomial::{octic_monomials, power_table, product_of_forms, IntPoly, OCTIC_DIM};
use crate::rat::Rat;
use crate::subspace::{RationalSubspace, Subspace};

/// A subspace of the 165-dimensional rational space of octic forms.
pub type OcticSubspace = RationalSubspace;

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Locus {
    Line(ProjLine),
    Point(ProjPoint),
}

/// A singular stratum of the branch divisor together with the vanishing
/// order its equisingular ideal imposes: 2 for double lines, 3 for triple
/// lines, q for a q-fold point.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub locus: Locus,
    pub multiplicity: usize,
}

impl Stratum {
    pub fn double_line(line: ProjLine) -> Self {
        Stratum {
            locus: Locus::Line(line),
            multiplicity: 2,
        }
    }

    pub fn triple_line(line: ProjLine) -> Self {
        Stratum {
            locus: Locus::Line(line),
            multiplicity: 3,
        }
    }

    pub fn point(p: &ClassifiedPoint) -> Self {
        Stratum {
            locus: Locus::Point(p.point.clone()),
            multiplicity: p.q,
        }
    }

    fn sort_key(&self) -> (u8, usize, String) {
        match &self.locus {
            Locus::Line(l) => (0, self.multiplicity, l.to_string()),
            Locus::Point(p) => (1, self.multiplicity, p.to_string()),
        }
    }
}

/// All strata of the incidence data: every double line, every triple line,
/// and every arrangement point of multiplicity at least
/// `min_point_multiplicity` (3 by default; 4 drops the ordinary triple
/// points, whose conditions turn out to be implied).
pub fn strata(d: &IncidenceData, min_point_multiplicity: usize) -> Vec<Stratum> {
    let mut out = Vec::new();
    for l in &d.double_lines {
        out.push(Stratum::double_line(l.clone()));
    }
    for l in &d.triple_lines {
        out.push(Stratum::triple_line(l.clone()));
    }
    for p in &d.points {
        if p.q >= min_point_multiplicity {
            out.push(Stratum::point(p));
        }
    }
    out.sort_by_key(|a| a.sort_key());
    out
}

// ---------------------------------------------------------------------------
// derivative functionals cutting out I_C^m in degree 8
// ---------------------------------------------------------------------------

fn integral_coords(coords: &[Rat; 4]) -> [BigInt; 4] {
    let mut lcm = BigInt::from(1);
    for c in coords {
        lcm = lcm.lcm(c.denom());
    }
    let scaled: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut content = BigInt::zero();
    for v in &scaled {
        content = content.gcd(v);
    }
    std::array::from_fn(|i| &scaled[i] / &content)
}

fn content_reduce(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            return;
        }
    }
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for v in row.iter_mut() {
        *v /= &g;
    }
}

/// Functionals whose common kernel among octics is I_P^m: all derivatives
/// of order m-1 evaluated at P (lower orders follow by the Euler identity).
fn point_functionals(point: &ProjPoint, m: usize) -> Vec<Vec<BigInt>> {
    assert!((1..=8).contains(&m));
    let p = integral_coords(point.coords());
    let powers = power_table(&p, 8);
    let k = m - 1;
    let mut rows = Vec::new();
    for a0 in 0..=k {
        for a1 in 0..=(k - a0) {
            for a2 in 0..=(k - a0 - a1) {
                let alpha = [a0, a1, a2, k - a0 - a1 - a2];
                let mut row = Vec::with_capacity(OCTIC_DIM);
                for mono in octic_monomials() {
                    row.push(derivative_at(mono, &alpha, &powers));
                }
                content_reduce(&mut row);
                rows.push(row);
            }
        }
    }
    rows
}

/// d^alpha (x^beta) evaluated at p: falling factorials times p^(beta-alpha).
fn derivative_at(beta: &[u8; 4], alpha: &[usize; 4], powers: &[Vec<BigInt>; 4]) -> BigInt {
    let mut coeff = BigInt::from(1);
    for v in 0..4 {
        let b = beta[v] as usize;
        let a = alpha[v];
        if b < a {
            return BigInt::zero();
        }
        for f in (b - a + 1)..=b {
            coeff *= BigInt::from(f as u64);
        }
    }
    for v in 0..4 {
        let e = beta[v] as usize - alpha[v];
        if e > 0 {
            coeff *= &powers[v][e];
        }
    }
    coeff
}

/// Functionals cutting out I_L^m among octics. With u1, u2 spanning a
/// complement of the line, an octic lies in I_L^m iff every transverse
/// derivative D_{u1}^i D_{u2}^j with i+j < m vanishes along the line; each
/// such restriction is a binary form of degree 8-i-j, pinned down at
/// 9-i-j distinct points of the line.
fn line_functionals(line: &ProjLine, m: usize) -> Vec<Vec<BigInt>> {
    assert!((1..=8).contains(&m));
    let a = integral_coords(line.span()[0].coords());
    let b = integral_coords(line.span()[1].coords());
    // the span rows come reduced, so their leading columns index a
    // coordinate pair whose standard vectors complete the basis
    let lead_a = a.iter().position(|c| !c.is_zero()).unwrap();
    let lead_b = b.iter().position(|c| !c.is_zero()).unwrap();
    let free: Vec<usize> = (0..4).filter(|v| *v != lead_a && *v != lead_b).collect();
    let unit = |v: usize| -> [BigInt; 4] { std::array::from_fn(|i| BigInt::from((i == v) as u64)) };
    let u1 = unit(free[0]);
    let u2 = unit(free[1]);

    let mut rows = Vec::new();
    for i in 0..m {
        for j in 0..(m - i) {
            // restricted to the line, the (i,j)-derivative of an octic is a
            // binary form of degree 8-i-j, pinned down at the 9-i-j sample
            // points a + s b
            let degree = 8 - i - j;
            let samples: Vec<[Vec<BigInt>; 4]> = (0..=degree as i64)
                .map(|s| {
                    let q: [BigInt; 4] = std::array::from_fn(|v| &a[v] + BigInt::from(s) * &b[v]);
                    power_table(&q, 8)
                })
                .collect();
            let mut block: Vec<Vec<BigInt>> =
                vec![Vec::with_capacity(OCTIC_DIM); samples.len()];
            for mono in octic_monomials() {
                let mut base = IntPoly::monomial(*mono, BigInt::from(1));
                for _ in 0..i {
                    base = base.directional_derivative(&u1);
                }
                for _ in 0..j {
                    base = base.directional_derivative(&u2);
                }
                for (s, q) in samples.iter().enumerate() {
                    block[s].push(base.eval_with_powers(q));
                }
            }
            for mut row in block {
                content_reduce(&mut row);
                rows.push(row);
            }
        }
    }
    rows
}

/// Integer rows of derivative functionals whose kernel is the stratum's
/// equisingular condition space.
pub(crate) fn stratum_functionals(s: &Stratum) -> Result<Vec<Vec<BigInt>>> {
    if s.multiplicity > 8 {
        return Err(Error::MultiplicityTooLarge(s.multiplicity));
    }
    if s.multiplicity == 0 {
        return Ok(Vec::new());
    }
    Ok(match &s.locus {
        Locus::Point(p) => point_functionals(p, s.multiplicity),
        Locus::Line(l) => line_functionals(l, s.multiplicity),
    })
}

/// The subspace (I_C^m)^(8) of octics vanishing to order m along the
/// stratum, as the exact kernel of its functionals. Multiplicity 0 is the
/// whole space.
pub fn stratum_subspace(s: &Stratum) -> Result<OcticSubspace> {
    let rows = stratum_functionals(s)?;
    if rows.is_empty() {
        return Ok(Subspace::full(OCTIC_DIM, Rat::one()));
    }
    let phi = Matrix::from_rows(rows.into_iter().map(rat_row).collect(), OCTIC_DIM);
    let kernel = phi.kernel_basis(&Rat::one());
    Ok(Subspace::span(OCTIC_DIM, kernel, Rat::one()))
}

fn rat_row(row: Vec<BigInt>) -> Vec<Rat> {
    row.into_iter().map(Rat::from_int).collect()
}

fn fp_row(row: &[BigInt], p: u64) -> Vec<FpElem> {
    row.iter()
        .map(|v| {
            let m = v.mod_floor(&BigInt::from(p));
            let digits = m.to_u64_digits().1;
            FpElem::from_residue(digits.first().copied().unwrap_or(0), p)
        })
        .collect()
}

/// The sixteen degree-8 generators z_j * df/dz_i of the Jacobian ideal's
/// octic piece, as integer coefficient rows.
pub fn jacobian_octics(a: &Arrangement) -> Vec<Vec<BigInt>> {
    let f = product_of_forms(a.forms());
    let mut rows = Vec::with_capacity(16);
    for i in 0..4 {
        let df = f.derivative(i);
        for j in 0..4 {
            let mut row = df.times_var(j).to_octic_vec();
            content_reduce(&mut row);
            rows.push(row);
        }
    }
    rows
}

/// Span of the Jacobian generators; dimension at most 16.
pub fn jacobian_subspace(a: &Arrangement) -> OcticSubspace {
    let rows = jacobian_octics(a);
    Subspace::span(OCTIC_DIM, rows.into_iter().map(rat_row).collect(), Rat::one())
}

// ---------------------------------------------------------------------------
// the dimension computation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DeformationOptions {
    /// include multiplicity-3 arrangement points as strata (the default;
    /// their conditions are implied by the incident double lines, so this
    /// only adds redundant cuts)
    pub include_triple_points: bool,
    /// force the exact rational path instead of the double-prime modular run
    pub exact: bool,
}

impl Default for DeformationOptions {
    fn default() -> Self {
        DeformationOptions {
            include_triple_points: true,
            exact: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquisingularReport {
    pub h12: i64,
    pub dim_jacobian: usize,
    pub dim_equisingular: usize,
    pub strata: usize,
}

/// dim J and dim of the intersection of all (I_C^m + J), both in degree 8,
/// over any coefficient field.
fn dual_dimensions<F: Field>(
    jacobian: &[Vec<F>],
    strata_functionals: &[Vec<Vec<F>>],
    sample: &F,
) -> (usize, usize) {
    let jmat = Matrix::from_rows(jacobian.to_vec(), OCTIC_DIM);
    let dim_jf = jmat.rank();
    let mut annihilator = Echelon::new(OCTIC_DIM);
    for rows in strata_functionals {
        if rows.is_empty() {
            continue;
        }
        let phi = Matrix::from_rows(rows.clone(), OCTIC_DIM);
        // coefficient vectors pairing to zero against every Jacobian row:
        // right kernel of the 16 x c matrix J phi^T
        let pairing = mul_transpose(&jmat, &phi, sample);
        for combo in pairing.kernel_basis(sample) {
            let mut u = vec![sample.zero(); OCTIC_DIM];
            for (i, coef) in combo.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for (uc, pc) in u.iter_mut().zip(phi.row(i)) {
                    if !pc.is_zero() {
                        *uc = uc.add(&coef.mul(pc));
                    }
                }
            }
            annihilator.insert(u);
        }
    }
    (dim_jf, OCTIC_DIM - annihilator.dim())
}

fn run_exact(jac: &[Vec<BigInt>], fns: &[Vec<Vec<BigInt>>]) -> (usize, usize) {
    let jac: Vec<Vec<Rat>> = jac.iter().map(|r| rat_row(r.clone())).collect();
    let fns: Vec<Vec<Vec<Rat>>> = fns
        .iter()
        .map(|s| s.iter().map(|r| rat_row(r.clone())).collect())
        .collect();
    dual_dimensions(&jac, &fns, &Rat::one())
}

fn run_mod_p(jac: &[Vec<BigInt>], fns: &[Vec<Vec<BigInt>>], p: u64) -> (usize, usize) {
    let sample = FpElem::from_residue(1, p);
    let jac: Vec<Vec<FpElem>> = jac.iter().map(|r| fp_row(r, p)).collect();
    let fns: Vec<Vec<Vec<FpElem>>> = fns
        .iter()
        .map(|s| s.iter().map(|r| fp_row(r, p)).collect())
        .collect();
    dual_dimensions(&jac, &fns, &sample)
}

fn random_62bit_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if crate::fp::is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// dim J and dim of the equisingular piece for an explicit list of strata.
/// The modular run draws two independent 62-bit primes and requires
/// agreement, retrying and finally falling back to exact rationals.
pub fn deformation_dimensions(
    a: &Arrangement,
    list: &[Stratum],
    exact: bool,
) -> Result<(usize, usize)> {
    let jac = jacobian_octics(a);
    let fns = list
        .iter()
        .map(stratum_functionals)
        .collect::<Result<Vec<_>>>()?;

    let (dim_jf, dim_ieq) = if exact {
        run_exact(&jac, &fns)
    } else {
        let mut rng = rand::thread_rng();
        let mut agreed = None;
        for _ in 0..4 {
            let p1 = random_62bit_prime(&mut rng);
            let p2 = loop {
                let p = random_62bit_prime(&mut rng);
                if p != p1 {
                    break p;
                }
            };
            let d1 = run_mod_p(&jac, &fns, p1);
            let d2 = run_mod_p(&jac, &fns, p2);
            if d1 == d2 {
                agreed = Some(d1);
                break;
            }
        }
        agreed.unwrap_or_else(|| run_exact(&jac, &fns))
    };

    assert!(
        dim_ieq >= dim_jf,
        "Jacobian piece must sit inside the equisingular piece"
    );
    Ok((dim_jf, dim_ieq))
}

/// Number of equisingular deformations of the branch octic, together with
/// the Jacobian and equisingular dimensions it came from.
pub fn equisingular_dimension(
    a: &Arrangement,
    opts: &DeformationOptions,
) -> Result<EquisingularReport> {
    let incidence = a.classify();
    let verdict = validate(&incidence);
    if !verdict.is_admissible() {
        return Err(Error::Inadmissible(verdict.to_string()));
    }
    let min_mult = if opts.include_triple_points { 3 } else { 4 };
    let list = strata(&incidence, min_mult);
    let (dim_jf, dim_ieq) = deformation_dimensions(a, &list, opts.exact)?;
    Ok(EquisingularReport {
        h12: (dim_ieq - dim_jf) as i64,
        dim_jacobian: dim_jf,
        dim_equisingular: dim_ieq,
        strata: list.len(),
    })
}

/// Convenience wrapper used by the pipeline: h^{1,2} of the resolved double
/// cover. The blown-up curves of a plane arrangement are rational, so the
/// base contribution vanishes and the deformation count is the whole of
/// h^{1,2}; the invariants module cross-checks the vanishing.
pub fn h12(a: &Arrangement, opts: &DeformationOptions) -> Result<i64> {
    let base = crate::invariants::h2_omega1_y(&vec![1; a.degree()], 0);
    debug_assert_eq!(base, 0);
    Ok(base + equisingular_dimension(a, opts)?.h12)
}
