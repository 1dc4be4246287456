use clifsym_core::clifford::{monomial_basis, system_for_with, Extension};
use clifsym_core::linalg::{LinearForm, RowReducer};
use clifsym_core::{ExactMatrix, ExactScalar};

const EXTENSIONS: [Extension; 2] = [Extension::Sigma3, Extension::Sigma2];

#[test]
fn relations_hold_through_d10() {
    for ext in EXTENSIONS {
        for d in (2..=10).step_by(2) {
            let gs = system_for_with(d, ext).unwrap();
            assert_eq!(gs.gammas().len(), d + 1);
            assert_eq!(gs.rep_dim(), 1 << (d / 2));
            let checks = gs.relations_check();
            assert_eq!(checks.len(), (d + 1) * (d + 2) / 2);
            assert!(checks.iter().all(|c| c.holds), "d={d} {ext:?}");
            assert!(gs.hermiticity_holds(), "d={d} {ext:?}");
        }
    }
}

#[test]
fn alphas_and_beta_form_a_clifford_set() {
    for ext in EXTENSIONS {
        for d in [2, 4, 6] {
            let gs = system_for_with(d, ext).unwrap();
            let n = gs.rep_dim();
            let (a, b) = (gs.alphas(), gs.beta());
            let two = ExactMatrix::identity(n).scale(&ExactScalar::from_int(2));
            assert!((&b * &b).is_identity());
            for k in 0..d {
                assert!(a[k].anticommutator(&b).unwrap().is_zero());
                assert!(a[k].is_hermitian());
                for l in 0..d {
                    let ac = a[k].anticommutator(&a[l]).unwrap();
                    if k == l {
                        assert_eq!(ac, two);
                    } else {
                        assert!(ac.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn entries_stay_in_units_times_rationals() {
    for d in [2, 4, 6, 8] {
        let gs = system_for_with(d, Extension::default()).unwrap();
        for g in gs.gammas() {
            for e in g.entries() {
                assert!(e.re.is_integer() && e.im.is_integer());
                assert!(e.is_zero() || e.re.numer().bits() + e.im.numer().bits() == 1);
            }
        }
    }
}

/// Products of at most d/2 of the d + 1 gammas span every rep_dim × rep_dim
/// matrix: the top product is central, so the higher-degree half adds nothing.
#[test]
fn low_degree_monomials_span_the_matrix_algebra() {
    for ext in EXTENSIONS {
        for d in [2, 4, 6] {
            let gs = system_for_with(d, ext).unwrap();
            let n = gs.rep_dim();
            let basis = monomial_basis(&gs, d / 2).unwrap();
            assert_eq!(basis.len(), n * n);
            let mut red = RowReducer::new(n * n);
            for m in &basis {
                red.push(LinearForm::from_dense(m.matrix.entries())).unwrap();
            }
            assert!(red.is_full_rank(), "d={d} {ext:?}");
        }
    }
}

#[test]
fn top_product_is_a_unit_scalar() {
    for ext in EXTENSIONS {
        for d in [2, 4, 6, 8] {
            let gs = system_for_with(d, ext).unwrap();
            let all: Vec<usize> = (0..=d).collect();
            let c = gs.product(&all).scalar_multiple_of_identity().unwrap();
            assert!(c.norm_sqr() == num_rational::BigRational::from_integer(1.into()));
        }
    }
}
