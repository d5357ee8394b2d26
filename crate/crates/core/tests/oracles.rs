//! Independent-oracle cross-checks: every computation that matters is
//! recomputed here by a second, structurally different route.

use num_bigint::BigInt;
use num_traits::Zero;

use octic_core::arrangement::LinearForm;
use octic_core::catalog;
use octic_core::deformations::{
    deformation_dimensions, equisingular_dimension, jacobian_octics, jacobian_subspace, strata,
    stratum_subspace, DeformationOptions,
};
use octic_core::fp::FpElem;
use octic_core::matrix::Matrix;
use octic_core::monomial::OCTIC_DIM;
use octic_core::rat::Rat;
use octic_core::subspace::Subspace;

/// Fraction-free (Bareiss) elimination over the integers; returns the rank.
/// Independent of the field-generic reduction used by the library.
fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        let Some(pivot_row) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        for r in (row + 1)..m.len() {
            for c in (col + 1)..cols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
    }
    rank
}

fn rat_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(|v| Rat::from_int(v.clone())).collect())
        .collect()
}

#[test]
fn rank_of_jacobian_rows_matches_fraction_free_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    for _ in 0..4 {
        let forms: Vec<LinearForm> = (0..8)
            .map(|_| LinearForm::from_ints(std::array::from_fn(|_| rng.gen_range(-5..=5))))
            .collect();
        let Ok(arr) = octic_core::arrangement::Arrangement::with_forms("rnd", forms, 1) else {
            continue;
        };
        let rows = jacobian_octics(&arr);
        let m = Matrix::from_rows(rat_rows(&rows), OCTIC_DIM);
        assert_eq!(m.rank(), bareiss_rank(&rows));
    }
    // and on catalog Jacobians
    for key in ["2", "85", "f42"] {
        let rows = jacobian_octics(&catalog::get(key).unwrap());
        let m = Matrix::from_rows(rat_rows(&rows), OCTIC_DIM);
        assert_eq!(m.rank(), bareiss_rank(&rows), "{key}");
    }
}

#[test]
fn subspace_sum_matches_stack_and_reduce_oracle() {
    // Jf + I_C^2 for arrangement 2 along the triple line x=y=0: the sum's
    // dimension must equal the rank of the two stacked bases
    let arr = catalog::get("2").unwrap();
    let jf = jacobian_subspace(&arr);
    let line = octic_core::arrangement::intersect_planes(
        &LinearForm::from_ints([1, 0, 0, 0]),
        &LinearForm::from_ints([0, 1, 0, 0]),
    )
    .unwrap();
    let ic2 = stratum_subspace(&octic_core::deformations::Stratum {
        locus: octic_core::deformations::Locus::Line(line),
        multiplicity: 2,
    })
    .unwrap();
    let sum = jf.sum(&ic2).unwrap();
    let mut stacked = jf.basis_rows();
    stacked.extend(ic2.basis_rows());
    let rank = Matrix::from_rows(stacked, OCTIC_DIM).rank();
    assert_eq!(sum.dim(), rank);
    // and the modularity of dimensions ties in the intersection
    let inter = jf.intersect(&ic2).unwrap();
    assert_eq!(sum.dim() + inter.dim(), jf.dim() + ic2.dim());
    assert!(jf.contains_subspace(&inter));
    assert!(ic2.contains_subspace(&inter));
}

/// The primal route: fold the intersection of all (stratum + Jf) subspaces
/// directly. Run over a fixed prime field to keep it fast; the dimension
/// must agree with the pipeline and with dim Jf (h12 = 0 for no. 85).
#[test]
fn primal_intersection_route_for_85() {
    let arr = catalog::get("85").unwrap();
    let inc = arr.classify();
    let list = strata(&inc, 3);
    let p = 1_000_003_u64;
    let sample = FpElem::from_residue(1, p);

    let to_fp = |rows: Vec<Vec<Rat>>| -> Vec<Vec<FpElem>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|v| FpElem::from_residue(v.mod_p(p).expect("small denominators"), p))
                    .collect()
            })
            .collect()
    };

    let jf_q = jacobian_subspace(&arr);
    let jf = Subspace::span(OCTIC_DIM, to_fp(jf_q.basis_rows()), sample);
    let mut acc = Subspace::full(OCTIC_DIM, sample);
    for s in &list {
        let v_q = stratum_subspace(s).unwrap();
        let v = Subspace::span(OCTIC_DIM, to_fp(v_q.basis_rows()), sample).sum(&jf).unwrap();
        acc = acc.intersect(&v).unwrap();
    }
    assert_eq!(acc.dim(), jf.dim());
    assert!(acc.contains_subspace(&jf));

    let report = equisingular_dimension(&arr, &DeformationOptions::default()).unwrap();
    assert_eq!(report.dim_equisingular, acc.dim());
    assert_eq!(report.dim_jacobian, jf.dim());
    assert_eq!(report.h12, 0);
}

/// A short exact (rational) primal fold, checked against the dual route.
#[test]
fn exact_primal_fold_prefix_agrees_with_dual() {
    let arr = catalog::get("2").unwrap();
    let inc = arr.classify();
    let list = strata(&inc, 3);
    let jf = jacobian_subspace(&arr);
    let prefix = &list[..3];
    let mut acc = Subspace::full(OCTIC_DIM, Rat::one());
    for s in prefix {
        let v = stratum_subspace(s).unwrap().sum(&jf).unwrap();
        acc = acc.intersect(&v).unwrap();
        assert!(acc.contains_subspace(&jf));
    }
    let (dj, di) = deformation_dimensions(&arr, prefix, true).unwrap();
    assert_eq!(di, acc.dim());
    assert_eq!(dj, jf.dim());
}

/// The exact rational path and the default double-prime modular path must
/// agree on complete arrangements.
#[test]
fn exact_and_modular_paths_agree() {
    for key in ["2", "85"] {
        let arr = catalog::get(key).unwrap();
        let exact = equisingular_dimension(
            &arr,
            &DeformationOptions {
                include_triple_points: true,
                exact: true,
            },
        )
        .unwrap();
        let modular = equisingular_dimension(&arr, &DeformationOptions::default()).unwrap();
        assert_eq!(exact, modular, "{key}");
    }
}

/// Taylor-coefficient oracle in an affine chart for point conditions: the
/// multiplicity-m subspace at (1:0:0:0) is spanned by monomials of chart
/// degree at least m.
#[test]
fn point_subspace_matches_chart_monomials() {
    use octic_core::arrangement::ProjPoint;
    use octic_core::deformations::{Locus, Stratum};
    for m in [2usize, 3, 4, 5] {
        let s = stratum_subspace(&Stratum {
            locus: Locus::Point(ProjPoint::from_ints([1, 0, 0, 0])),
            multiplicity: m,
        })
        .unwrap();
        let rows: Vec<Vec<Rat>> = octic_core::monomial::octic_monomials()
            .iter()
            .enumerate()
            .filter(|(_, e)| (e[1] as usize + e[2] as usize + e[3] as usize) >= m)
            .map(|(i, _)| {
                let mut v = vec![Rat::zero(); OCTIC_DIM];
                v[i] = Rat::one();
                v
            })
            .collect();
        let oracle = Subspace::span(OCTIC_DIM, rows, Rat::one());
        assert_eq!(s, oracle, "multiplicity {m}");
    }
}

/// Beyond the embedded reference primes: for the forms with a verified eta
/// quotient, the counted a_p must match the q-expansion coefficient at
/// fresh primes too.
#[test]
fn counted_ap_matches_eta_expansions_at_fresh_primes() {
    use num_bigint::BigInt;
    use octic_core::arithmetic::a_p;
    use octic_core::modularity::{eta_qexp, newform, EtaQuotient};

    let cases = [
        ("2", 70i64, "8k4A"),
        ("85", 44, "8k4A"),
        ("84", 40, "6k4A"),
        ("84a", 40, "12k4A"),
    ];
    let n = 62usize;
    for (key, h11, label) in cases {
        let arr = catalog::get(key).unwrap();
        let eta = newform(label).unwrap().eta.expect("verified candidate");
        let series = eta_qexp(&EtaQuotient::new(eta), n).unwrap();
        for p in [29u64, 31, 37, 41, 43, 47, 53, 59, 61] {
            let got = a_p(&arr, p, h11).unwrap();
            assert_eq!(
                BigInt::from(got),
                series.coeff(p as usize).clone(),
                "{key} at p={p}"
            );
        }
    }
}
