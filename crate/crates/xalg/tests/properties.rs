use nalgebra::DMatrix;
use proptest::prelude::*;
use xalg::basis::{binomial, subsets};
use xalg::{conformal_test, determinant, exterior_power, frobenius, hadamard_gap, LinearMap, Multivector};

fn matrix(m: usize, n: usize) -> impl Strategy<Value = LinearMap> {
    prop::collection::vec(-2.0f64..2.0, m * n).prop_map(move |v| DMatrix::from_vec(m, n, v))
}

/// Orthogonal n×n matrix from Gram–Schmidt on a random square.
fn orthogonal(n: usize) -> impl Strategy<Value = LinearMap> {
    matrix(n, n).prop_filter_map("degenerate", move |a| {
        let q = a.clone().qr().q();
        (determinant(&a).abs() > 1e-3).then_some(q)
    })
}

/// Column-wedge oracle: column J of ΛʳA is Ae_{j₁} ∧ … ∧ Ae_{jᵣ}.
fn exterior_power_by_wedges(a: &LinearMap, r: usize) -> LinearMap {
    let (m, n) = a.shape();
    let cols = subsets(n, r);
    let mut out = DMatrix::zeros(binomial(m, r), cols.len());
    for (c, set) in cols.iter().enumerate() {
        let vecs: Vec<Vec<f64>> = set.iter().map(|&j| a.column(j).iter().copied().collect()).collect();
        let refs: Vec<&[f64]> = vecs.iter().map(|v| v.as_slice()).collect();
        let w = Multivector::wedge_all(&refs).unwrap();
        for (row, x) in w.coeffs().iter().enumerate() {
            out[(row, c)] = *x;
        }
    }
    out
}

#[test]
fn hadamard_gap_of_diag_123() {
    let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
    // |A|² = 14, n = r = 3, |Λ³A|² = det² = 36
    let oracle = 14f64.powi(3) / 27.0 - 36.0;
    let gap = hadamard_gap(&a, 3).unwrap();
    assert!((gap - oracle).abs() < 1e-12);
    assert!((gap - 65.6296).abs() < 1e-4);
}

#[test]
fn cofactor_matrix_matches_second_power() {
    // For 3×3 A, Λ²A in the basis (e₁₂, e₁₃, e₂₃) is a signed permutation of cof(A).
    let a = DMatrix::from_row_slice(3, 3, &[1.0, -2.0, 0.5, 3.0, 1.5, -1.0, 0.25, 2.0, 4.0]);
    let l2 = exterior_power(&a, 2).unwrap();
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| a[(r0, c0)] * a[(r1, c1)] - a[(r0, c1)] * a[(r1, c0)];
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (i, &(r0, r1)) in pairs.iter().enumerate() {
        for (j, &(c0, c1)) in pairs.iter().enumerate() {
            assert!((l2[(i, j)] - minor(r0, r1, c0, c1)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exterior_power_matches_wedges(a in matrix(7, 3), r in 1usize..=3) {
        let fast = exterior_power(&a, r).unwrap();
        let oracle = exterior_power_by_wedges(&a, r);
        prop_assert!(frobenius(&(fast - oracle)) < 1e-12);
    }

    #[test]
    fn exterior_power_square(a in matrix(3, 3)) {
        let fast = exterior_power(&a, 2).unwrap();
        prop_assert!(frobenius(&(fast - exterior_power_by_wedges(&a, 2))) < 1e-12);
    }

    #[test]
    fn functoriality(a in matrix(5, 4), b in matrix(4, 3), r in 1usize..=3) {
        let lhs = exterior_power(&(&a * &b), r).unwrap();
        let rhs = exterior_power(&a, r).unwrap() * exterior_power(&b, r).unwrap();
        prop_assert!(frobenius(&(lhs - rhs)) < 1e-11);
    }

    #[test]
    fn top_power_is_determinant(a in matrix(4, 4)) {
        let top = exterior_power(&a, 4).unwrap();
        prop_assert!((top[(0, 0)] - a.clone().lu().determinant()).abs() < 1e-11);
        let n = 4f64;
        prop_assert!(top[(0, 0)].abs() <= n.powf(-n / 2.0) * frobenius(&a).powi(4) + 1e-12);
    }

    #[test]
    fn top_power_equality_for_conformal(q in orthogonal(4), s in 0.1f64..3.0) {
        let a = q * s;
        let n = 4f64;
        let bound = n.powf(-n / 2.0) * frobenius(&a).powi(4);
        prop_assert!((determinant(&a).abs() - bound).abs() < 1e-10 * bound.max(1.0));
    }

    #[test]
    fn hadamard_gap_nonnegative(a in matrix(7, 3), r in 2usize..=3) {
        prop_assert!(hadamard_gap(&a, r).unwrap() >= -1e-12);
    }

    #[test]
    fn hadamard_gap_vanishes_on_conformal(q in orthogonal(7), s in 0.1f64..3.0) {
        let a = q.columns(0, 3).into_owned() * s;
        for r in 2..=3 {
            prop_assert!(hadamard_gap(&a, r).unwrap().abs() < 1e-10);
        }
        prop_assert!(conformal_test(&a, 1e-10).is_conformal);
    }

    #[test]
    fn frobenius_is_basis_independent(a in matrix(5, 3), q in orthogonal(3)) {
        let sum: f64 = (0..3).map(|l| (&a * q.column(l)).norm_squared()).sum();
        prop_assert!((sum - frobenius(&a).powi(2)).abs() < 1e-11);
    }

    #[test]
    fn vector_hadamard(a in matrix(4, 4)) {
        let cols: Vec<Vec<f64>> = (0..4).map(|j| a.column(j).iter().copied().collect()).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|v| v.as_slice()).collect();
        let vol = Multivector::wedge_all(&refs).unwrap().norm();
        let prod: f64 = (0..4).map(|j| a.column(j).norm()).product();
        prop_assert!(vol <= prod + 1e-12);
    }

    #[test]
    fn vector_hadamard_equality_on_orthogonal_frames(q in orthogonal(4), s in prop::collection::vec(0.2f64..2.0, 4)) {
        let cols: Vec<Vec<f64>> = (0..4).map(|j| q.column(j).iter().map(|x| x * s[j]).collect()).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|v| v.as_slice()).collect();
        let vol = Multivector::wedge_all(&refs).unwrap().norm();
        let prod: f64 = s.iter().product();
        prop_assert!((vol - prod).abs() < 1e-12);
    }

    #[test]
    fn composition_scale_law(q1 in orthogonal(3), q2 in orthogonal(3), s1 in 0.1f64..3.0, s2 in 0.1f64..3.0) {
        let a = q1 * s1;
        let b = q2 * s2;
        let lhs = frobenius(&(&a * &b));
        let rhs = frobenius(&a) * frobenius(&b) / 3f64.sqrt();
        prop_assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn conformal_lambda_is_scaled_norm(a in matrix(6, 3)) {
        let t = conformal_test(&a, 1e-10);
        prop_assert!((t.lambda - frobenius(&a) / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn wedge_graded_commutativity(
        u in prop::collection::vec(-1.0f64..1.0, 6),
        v in prop::collection::vec(-1.0f64..1.0, 6),
        w in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let a = Multivector::wedge_all(&[&u, &v]).unwrap();
        let b = Multivector::vector(&w).unwrap();
        // degree 2 ∧ degree 1 commutes
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert!(ab.add(&ba.scale(-1.0)).unwrap().norm() < 1e-14);
        let uv = Multivector::vector(&u).unwrap().wedge(&Multivector::vector(&v).unwrap()).unwrap();
        let vu = Multivector::vector(&v).unwrap().wedge(&Multivector::vector(&u).unwrap()).unwrap();
        prop_assert!(uv.add(&vu).unwrap().norm() < 1e-14);
    }
}
