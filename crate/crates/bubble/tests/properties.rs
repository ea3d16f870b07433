use bubble::scenarios::{chart_ball_energy, mobius_ball_energy, mobius_map};
use bubble::*;
use fields::{ChartDomain, MetricField};
use proptest::prelude::*;

const RULE: SphereRule = SphereRule { radial: 48, polar: 16, azimuthal: 32, grading: 3.0 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequence_limit_is_exact_on_geometric_tails(limit in -50.0..50.0f64, c in -10.0..10.0f64, q in 0.05..0.85f64) {
        prop_assume!(c.abs() > 1e-3);
        let v: Vec<f64> = (0..4).map(|j| limit + c * q.powi(j)).collect();
        prop_assert!((richardson_sequence(&v) - limit).abs() < 1e-9 * (1.0 + c.abs()));
    }

    #[test]
    fn radius_limit_is_exact_on_cubics(m0 in 0.0..200.0f64, c in -100.0..100.0f64, r in 0.01..1.0f64) {
        let v: Vec<f64> = (0..4).map(|j| m0 + c * (r * 0.5f64.powi(j)).powi(3)).collect();
        prop_assert!((richardson_radius(&v) - m0).abs() < 1e-9 * (1.0 + m0 + c.abs()));
    }

    #[test]
    fn closed_form_ball_energies(s in 1.0..500.0f64, r in 1e-3..1.0f64) {
        let e = mobius_ball_energy(s, r);
        prop_assert!(e > 0.0 && e < SPHERE_MASS);
        prop_assert!(mobius_ball_energy(s, 1.1 * r) > e);
        // dilation invariance
        prop_assert!((mobius_ball_energy(2.0 * s, 0.5 * r) - e).abs() < 1e-12 * SPHERE_MASS);
        prop_assert!((chart_ball_energy(s * r) - e).abs() < 1e-12 * SPHERE_MASS);
    }

    #[test]
    fn centered_ball_energy_matches_closed_form(s in 5.0..400.0f64, r in 0.02..0.5f64, p in prop::array::uniform3(-0.3..0.3f64)) {
        let domain = ChartDomain::cube(-1.0, 1.0, 5).unwrap();
        let u = mobius_map(domain, p, s);
        let e = ball_energy(&u, &MetricField::euclidean(), p, r, &RULE).unwrap();
        prop_assert!((e / mobius_ball_energy(s, r) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn anchored_energy_is_monotone_in_the_radius(s in 20.0..400.0f64, off in prop::array::uniform3(-0.01..0.01f64), r in 0.03..0.3f64) {
        let domain = ChartDomain::cube(-1.0, 1.0, 5).unwrap();
        let u = mobius_map(domain, [0.0; 3], s);
        let g = MetricField::euclidean();
        let a = anchored_ball_energy(&u, &g, [0.0; 3], off, r, &RULE).unwrap();
        let b = anchored_ball_energy(&u, &g, [0.0; 3], off, 1.2 * r, &RULE).unwrap();
        prop_assert!(b >= a);
        // B(x; r) lies between the concentric balls of radii r ∓ |x|
        let d = (off[0] * off[0] + off[1] * off[1] + off[2] * off[2]).sqrt();
        prop_assert!(a <= mobius_ball_energy(s, r + d) * (1.0 + 2e-3));
        prop_assert!(a >= mobius_ball_energy(s, r - d) * (1.0 - 2e-3));
    }
}
