use vcp::{fundamental_identity_defect, random_unit_vector, CrossProduct, VcpKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn builtins() -> Vec<CrossProduct> {
    [(VcpKind::HodgeStar, 3), (VcpKind::HodgeStar, 4), (VcpKind::Complex, 2), (VcpKind::Complex, 6), (VcpKind::G2, 7), (VcpKind::Spin7, 8)]
        .into_iter()
        .map(|(k, n)| CrossProduct::builtin(k, n).unwrap())
        .collect()
}

#[test]
fn builtins_satisfy_axioms() {
    for p in builtins() {
        let d = p.axiom_defect(10_000, 7);
        assert!(d.orth <= 1e-12 && d.metric <= 1e-12, "{:?} on R^{}: {d:?}", p.kind(), p.dim());
    }
}

#[test]
fn fundamental_identity_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in builtins() {
        let (n, k) = (p.dim(), p.fold());
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let us: Vec<Vec<f64>> = (0..k - 1).map(|_| random_unit_vector(&mut rng, n)).collect();
            let w = random_unit_vector(&mut rng, n);
            let refs: Vec<&[f64]> = us.iter().map(|u| u.as_slice()).collect();
            match fundamental_identity_defect(&p, &refs, &w) {
                Ok(d) => worst = worst.max(d),
                Err(vcp::VcpError::DependentTuple(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(worst <= 1e-10, "{:?} on R^{}: {worst:e}", p.kind(), n);
    }
}

#[test]
fn complex_structure_squares_to_minus_identity() {
    for n in [2, 4, 6, 8] {
        let p = CrossProduct::builtin(VcpKind::Complex, n).unwrap();
        let sq = p.table() * p.table();
        let minus_id = -nalgebra::DMatrix::<f64>::identity(n, n);
        assert_eq!(sq, minus_id);
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            assert_eq!(fundamental_identity_defect(&p, &[], &e).unwrap(), 0.0);
        }
    }
}

#[test]
fn associative_form_matches_convention() {
    // independent transcription of the fixed sign convention, 1-based
    let expected: [([usize; 3], f64); 7] = [
        ([1, 2, 3], 1.0),
        ([1, 4, 5], 1.0),
        ([1, 6, 7], 1.0),
        ([2, 4, 6], 1.0),
        ([2, 5, 7], -1.0),
        ([3, 4, 7], -1.0),
        ([3, 5, 6], -1.0),
    ];
    let phi = CrossProduct::builtin(VcpKind::G2, 7).unwrap().calibration();
    let terms = phi.nonzero_terms();
    assert_eq!(terms.len(), 7);
    for (idx, c) in expected {
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        assert_eq!(phi.component(&zero_based), c, "component {idx:?}");
    }
}

#[test]
fn simple_calibrations() {
    let vol = CrossProduct::builtin(VcpKind::HodgeStar, 3).unwrap().calibration();
    assert_eq!(vol.nonzero_terms(), vec![(vec![0, 1, 2], 1.0)]);
    let area = CrossProduct::builtin(VcpKind::Complex, 2).unwrap().calibration();
    assert_eq!(area.nonzero_terms(), vec![(vec![0, 1], 1.0)]);
}

#[test]
fn calibrations_have_comass_one() {
    for p in builtins() {
        let alpha = p.calibration();
        let c = alpha.sampled_comass(10_000, 3);
        assert!(c <= 1.0 + 1e-12, "{:?}: sampled comass {c}", p.kind());
        assert!(c > 0.5, "{:?}: sampled comass suspiciously small {c}", p.kind());
    }
}

#[test]
fn calibration_is_totally_antisymmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in builtins() {
        let alpha = p.calibration();
        let deg = alpha.degree();
        let vs: Vec<Vec<f64>> = (0..deg).map(|_| random_unit_vector(&mut rng, p.dim())).collect();
        let refs: Vec<&[f64]> = vs.iter().map(|v| v.as_slice()).collect();
        let base = alpha.eval(&refs).unwrap();
        for i in 0..deg {
            for j in i + 1..deg {
                let mut swapped = refs.clone();
                swapped.swap(i, j);
                assert!((alpha.eval(&swapped).unwrap() + base).abs() < 1e-14);
            }
        }
        // α(v₁..vₖ, w) = ⟨P(v₁..vₖ), w⟩
        let pv = p.apply(&refs[..deg - 1]).unwrap();
        let dot: f64 = pv.iter().zip(refs[deg - 1]).map(|(a, b)| a * b).sum();
        assert!((dot - base).abs() < 1e-14);
    }
}

#[test]
fn corrupted_g2_table_is_detected() {
    let text = vcp::table::export(&CrossProduct::builtin(VcpKind::G2, 7).unwrap());
    let mut doc: vcp::table::TableDoc = toml::from_str(&text).unwrap();
    doc.components[3].value = -doc.components[3].value;
    let corrupted = doc.to_cross_product().unwrap();
    let d = corrupted.axiom_defect(10_000, 1);
    assert!(d.metric > 0.5, "metric defect {}", d.metric);
}

#[test]
fn degenerate_tuples_contribute_nothing() {
    let p = CrossProduct::builtin(VcpKind::G2, 7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v = random_unit_vector(&mut rng, 7);
    let out = p.apply(&[&v, &v]).unwrap();
    assert!(out.iter().all(|x| *x == 0.0));
    let s = CrossProduct::builtin(VcpKind::Spin7, 8).unwrap();
    let a = random_unit_vector(&mut rng, 8);
    let b = random_unit_vector(&mut rng, 8);
    assert!(s.apply(&[&a, &b, &a]).unwrap().iter().all(|x| x.abs() < 1e-15));
}

#[test]
fn decomposable_preimage_reconstruction() {
    // for v ⟂ u₁ (unit), u₂ = −P(u₁ ∧ v) satisfies P(u₁ ∧ u₂) = v
    let p = CrossProduct::builtin(VcpKind::G2, 7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let u1 = random_unit_vector(&mut rng, 7);
        let raw = random_unit_vector(&mut rng, 7);
        let d: f64 = raw.iter().zip(&u1).map(|(a, b)| a * b).sum();
        let v: Vec<f64> = raw.iter().zip(&u1).map(|(a, b)| a - d * b).collect();
        let u2: Vec<f64> = p.apply(&[&u1, &v]).unwrap().iter().map(|x| -x).collect();
        let back = p.apply(&[&u1, &u2]).unwrap();
        let err: f64 = back.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-10);
    }
}
